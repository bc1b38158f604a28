//! Small exact solver for the constraint systems that are not plain linear
//! systems over Q: polynomial equations in a few unknown constants whose
//! coefficients live in the parameter ring.
//!
//! Strategy, in order:
//!  1. Unit-pivot elimination: an unknown that appears in some equation only
//!     linearly, with an invertible coefficient (rational times a power of
//!     the normalization symbol `vac`), is substituted away exactly.
//!  2. The remaining unknowns are constants by contract, so the equations may
//!     be graded by every non-unknown symbol; the graded pieces have rational
//!     coefficients. Affine-linear pieces form a linear system; if it pins
//!     unknowns, substitute them.
//!  3. Univariate graded pieces are combined by polynomial gcd over Q and
//!     solved by rational root extraction; a gcd of degree > 1 means the
//!     solution is not unique and is reported as such.
//! Every original equation is re-verified against the final assignment.

use crate::error::Error;
use crate::linalg::{solve_linear, LinSolution, LinearSystem};
use crate::param::{PMono, ParamPoly, Symbol};
use crate::rat::{divisors, Rat};
use num_traits::{Signed, Zero};
use std::collections::{BTreeMap, BTreeSet};

#[derive(Clone, Debug)]
pub struct PolySystem {
    pub unknowns: Vec<Symbol>,
    pub equations: Vec<ParamPoly>,
}

#[derive(Clone, Debug)]
pub struct PolySolution {
    /// Values of all unknowns, free unknowns mapping to themselves.
    pub values: BTreeMap<Symbol, ParamPoly>,
    /// Unknowns left free by the system.
    pub free: Vec<Symbol>,
    /// False when a gcd step admitted more than one root.
    pub unique: bool,
}

/// Is the polynomial a unit of the coefficient ring: rational * vac^m?
fn as_unit(p: &ParamPoly) -> Option<(Rat, i32)> {
    let (mono, coeff) = p.as_monomial()?;
    let mut vac_pow = 0;
    for (s, e) in mono.iter() {
        if *s == Symbol::vac() {
            vac_pow = *e;
        } else {
            return None;
        }
    }
    Some((coeff, vac_pow))
}

fn unit_inverse(coeff: &Rat, vac_pow: i32) -> ParamPoly {
    ParamPoly::var_pow(Symbol::vac(), -vac_pow).scale(&(Rat::from_integer(1.into()) / coeff))
}

/// Rational roots of a rational-coefficient univariate polynomial given as
/// (ascending) coefficients.
fn rational_roots(coeffs: &[Rat]) -> Vec<Rat> {
    let mut cs: Vec<Rat> = coeffs.to_vec();
    while cs.last().is_some_and(Rat::is_zero) {
        cs.pop();
    }
    if cs.is_empty() {
        return Vec::new(); // identically zero: every value, caller guards
    }
    // strip x^k factors: root 0
    let mut roots = Vec::new();
    let mut start = 0;
    while cs[start].is_zero() {
        start += 1;
    }
    if start > 0 {
        roots.push(Rat::zero());
        cs.drain(0..start);
    }
    if cs.len() == 1 {
        return roots;
    }
    // clear denominators to integers
    let mut lcm = num_bigint::BigInt::from(1);
    for c in &cs {
        let d = c.denom();
        let g = num_integer::Integer::gcd(&lcm, d);
        lcm = &lcm / g * d;
    }
    let ints: Vec<num_bigint::BigInt> = cs.iter().map(|c| (c * Rat::from_integer(lcm.clone())).to_integer()).collect();
    let a0 = ints[0].clone();
    let an = ints.last().unwrap().clone();
    let eval = |x: &Rat| -> Rat {
        let mut acc = Rat::zero();
        for c in cs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    };
    for p in divisors(&a0.abs()) {
        for q in divisors(&an.abs()) {
            for sign in [1i64, -1] {
                let cand = Rat::new(&p * num_bigint::BigInt::from(sign), q.clone());
                if eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots.sort();
    roots
}

/// Solves the system; unknowns that no equation constrains stay free.
pub fn solve_poly_system(sys: &PolySystem) -> Result<PolySolution, Error> {
    let all_unknowns: BTreeSet<Symbol> = sys.unknowns.iter().cloned().collect();
    let mut eqs: Vec<ParamPoly> = sys
        .equations
        .iter()
        .filter(|e| !e.is_zero())
        .cloned()
        .collect();
    let mut remaining = all_unknowns.clone();
    // assignment in elimination order; values may reference unknowns
    // eliminated later and are resolved by back-substitution at the end
    let mut steps: Vec<(Symbol, ParamPoly)> = Vec::new();
    let mut unique = true;

    'outer: loop {
        eqs.retain(|e| !e.is_zero());
        if remaining.is_empty() || eqs.is_empty() {
            break;
        }

        // 1. unit-pivot elimination
        for idx in 0..eqs.len() {
            let collected = eqs[idx].collect_by(&remaining);
            for u in remaining.clone() {
                let u_mono = PMono::var(u.clone());
                let Some(coeff) = collected.get(&u_mono) else {
                    continue;
                };
                // u must not appear in any other monomial of this equation
                let appears_elsewhere = collected
                    .keys()
                    .any(|m| *m != u_mono && m.exponent_of(&u) != 0);
                if appears_elsewhere {
                    continue;
                }
                let Some((k, vp)) = as_unit(coeff) else {
                    continue;
                };
                let rest = eqs[idx].sub(&ParamPoly::var(u.clone()).mul(coeff));
                let value = rest.neg().mul(&unit_inverse(&k, vp));
                for e in &mut eqs {
                    *e = e.substitute(&u, &value);
                }
                steps.push((u.clone(), value));
                remaining.remove(&u);
                continue 'outer;
            }
        }

        // 1b. polynomial-pivot elimination: an unknown appearing linearly in
        // an equation whose coefficient divides the rest exactly is still
        // determined uniquely (verified by the final back-substitution).
        for idx in 0..eqs.len() {
            let collected = eqs[idx].collect_by(&remaining);
            for u in remaining.clone() {
                let u_mono = PMono::var(u.clone());
                let Some(coeff) = collected.get(&u_mono) else {
                    continue;
                };
                if collected
                    .keys()
                    .any(|m| *m != u_mono && m.exponent_of(&u) != 0)
                {
                    continue;
                }
                let rest = eqs[idx].sub(&ParamPoly::var(u.clone()).mul(coeff));
                let Some(q) = rest.neg().exact_div(coeff) else {
                    continue;
                };
                for e in &mut eqs {
                    *e = e.substitute(&u, &q);
                }
                steps.push((u.clone(), q));
                remaining.remove(&u);
                continue 'outer;
            }
        }

        // 2. grade by all non-unknown symbols; the remaining unknowns are
        // constants, so every graded piece must vanish separately
        let mut pieces: BTreeSet<ParamPoly> = BTreeSet::new();
        for e in &eqs {
            let by_outside = grade_by_outside(e, &remaining);
            for piece in by_outside {
                if !piece.is_zero() {
                    pieces.insert(piece);
                }
            }
        }
        let pieces: Vec<ParamPoly> = pieces.into_iter().collect();
        // 2a. affine-linear pieces as a rational linear system
        let unknown_list: Vec<Symbol> = remaining.iter().cloned().collect();
        let mut lin = LinearSystem::new(unknown_list.clone());
        for piece in &pieces {
            if degree_in_unknowns(piece, &remaining) <= 1 {
                lin.push_equation(piece)?;
            }
        }
        if !lin.rows.is_empty() {
            match solve_linear(&lin) {
                LinSolution::Unique(m) => {
                    for (u, v) in m {
                        for e in &mut eqs {
                            *e = e.substitute(&u, &v);
                        }
                        steps.push((u.clone(), v));
                        remaining.remove(&u);
                    }
                    continue 'outer;
                }
                LinSolution::Inconsistent { row, value } => {
                    return Err(Error::InconsistentSystem {
                        row,
                        value: format!("{value}"),
                    });
                }
                LinSolution::Family { .. } => {}
            }
        }
        // 2b. univariate pieces: gcd over Q, then rational roots
        for u in remaining.clone() {
            let mut gcd_poly: Option<crate::unipoly::UniPoly> = None;
            for piece in &pieces {
                if let Some(coeffs) = univariate_in(piece, &u, &remaining) {
                    let p = crate::unipoly::UniPoly::from_rats(&coeffs);
                    if p.is_zero() {
                        continue;
                    }
                    gcd_poly = Some(match gcd_poly {
                        None => p,
                        Some(g) => g.gcd_rational(&p).expect("rational gcd"),
                    });
                }
            }
            let Some(g) = gcd_poly else { continue };
            if g.degree() == Some(0) {
                return Err(Error::Solve(format!(
                    "no solution: contradictory univariate constraints on {u}"
                )));
            }
            let coeffs = g.as_rational_coeffs().expect("rational gcd");
            let roots = rational_roots(&coeffs);
            if roots.is_empty() {
                return Err(Error::Solve(format!(
                    "no rational root for {u}: gcd {g}"
                )));
            }
            if roots.len() > 1 || g.degree() != Some(1) {
                unique = false;
            }
            let value = ParamPoly::constant(roots[0].clone());
            for e in &mut eqs {
                *e = e.substitute(&u, &value);
            }
            steps.push((u.clone(), value));
            remaining.remove(&u);
            continue 'outer;
        }
        // nothing applies
        return Err(Error::Solve(format!(
            "solver stuck with {} equations in {:?}",
            eqs.len(),
            remaining
        )));
    }

    if !eqs.is_empty() {
        return Err(Error::Solve(format!(
            "unsatisfied equation after elimination: {}",
            eqs[0]
        )));
    }

    // back-substitute so every value references only free unknowns
    let mut values: BTreeMap<Symbol, ParamPoly> = BTreeMap::new();
    for u in &remaining {
        values.insert(u.clone(), ParamPoly::var(u.clone()));
    }
    for (u, v) in steps.iter().rev() {
        let mut resolved = v.clone();
        for (w, val) in values.iter() {
            if resolved.contains_symbol(w) {
                resolved = resolved.substitute(w, val);
            }
        }
        values.insert(u.clone(), resolved);
    }
    // final verification
    for (i, e) in sys.equations.iter().enumerate() {
        let mut r = e.clone();
        for (u, v) in &values {
            if r.contains_symbol(u) {
                r = r.substitute(u, v);
            }
        }
        if !r.is_zero() {
            return Err(Error::Solve(format!(
                "residual in equation {i} after back-substitution: {r}"
            )));
        }
    }
    Ok(PolySolution {
        values,
        free: remaining.into_iter().collect(),
        unique,
    })
}

/// Splits an equation by monomials in the symbols outside `unknowns`.
fn grade_by_outside(e: &ParamPoly, unknowns: &BTreeSet<Symbol>) -> Vec<ParamPoly> {
    let mut outside = BTreeSet::new();
    for s in e.symbols() {
        if !unknowns.contains(&s) {
            outside.insert(s);
        }
    }
    e.collect_by(&outside).into_values().collect()
}

fn degree_in_unknowns(p: &ParamPoly, unknowns: &BTreeSet<Symbol>) -> i32 {
    p.terms()
        .map(|(m, _)| {
            m.iter()
                .filter(|(s, _)| unknowns.contains(s))
                .map(|(_, e)| *e)
                .sum::<i32>()
        })
        .max()
        .unwrap_or(0)
}

/// If the piece involves exactly the unknown `u` (and rational coefficients),
/// returns its ascending coefficients as a univariate polynomial in u.
fn univariate_in(p: &ParamPoly, u: &Symbol, unknowns: &BTreeSet<Symbol>) -> Option<Vec<Rat>> {
    let mut coeffs: Vec<Rat> = Vec::new();
    for (m, r) in p.terms() {
        let mut upow: i32 = 0;
        for (s, e) in m.iter() {
            if s == u {
                upow = *e;
            } else if unknowns.contains(s) {
                return None; // involves another unknown
            } else {
                return None; // non-rational coefficient survived grading
            }
        }
        if upow < 0 {
            return None;
        }
        let upow = upow as usize;
        if coeffs.len() <= upow {
            coeffs.resize(upow + 1, Rat::zero());
        }
        coeffs[upow] = coeffs[upow].clone() + r;
    }
    Some(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rati};

    fn sp(name: &str) -> Symbol {
        Symbol::new(name)
    }

    fn v(name: &str) -> ParamPoly {
        ParamPoly::var(sp(name))
    }

    #[test]
    fn unit_pivot_chain() {
        // u + 2w = 0, w - 3 = 0  ->  w = 3, u = -6
        let sys = PolySystem {
            unknowns: vec![sp("u"), sp("w")],
            equations: vec![
                v("u").add(&v("w").scale(&rati(2))),
                v("w").sub(&ParamPoly::constant(rati(3))),
            ],
        };
        let sol = solve_poly_system(&sys).unwrap();
        assert_eq!(sol.values[&sp("u")], ParamPoly::constant(rati(-6)));
        assert_eq!(sol.values[&sp("w")], ParamPoly::constant(rati(3)));
        assert!(sol.unique && sol.free.is_empty());
    }

    #[test]
    fn vac_unit_pivot_and_symbolic_value() {
        // vac * u - c * vac^2 = 0  ->  u = c * vac
        let vac = ParamPoly::var(Symbol::vac());
        let c = ParamPoly::var(Symbol::c());
        let sys = PolySystem {
            unknowns: vec![sp("u")],
            equations: vec![vac.mul(&v("u")).sub(&c.mul(&vac).mul(&vac))],
        };
        let sol = solve_poly_system(&sys).unwrap();
        assert_eq!(sol.values[&sp("u")], c.mul(&vac));
    }

    #[test]
    fn graded_linear_with_products() {
        // equations in constants (al, cc) mixed against symbols A, vac:
        //   A*(2 al - cc) + vac*(al + cc - 3) = 0
        // grading by {A, vac} gives 2 al = cc and al + cc = 3 -> al = 1, cc = 2.
        let a = v("A");
        let vac = ParamPoly::var(Symbol::vac());
        let eq = a
            .mul(&v("al").scale(&rati(2)).sub(&v("cc")))
            .add(&vac.mul(&v("al").add(&v("cc")).sub(&ParamPoly::constant(rati(3)))));
        let sys = PolySystem {
            unknowns: vec![sp("al"), sp("cc")],
            equations: vec![eq],
        };
        let sol = solve_poly_system(&sys).unwrap();
        assert_eq!(sol.values[&sp("al")], ParamPoly::constant(rati(1)));
        assert_eq!(sol.values[&sp("cc")], ParamPoly::constant(rati(2)));
    }

    #[test]
    fn univariate_gcd_root() {
        // (cc + 22/5) * (cc^2 + 1) = 0 and (cc + 22/5) * (cc - 7) = 0 share
        // only the rational root -22/5 after gcd.
        let cc = v("cc");
        let lin = cc.add(&ParamPoly::constant(rat(22, 5)));
        let e1 = lin.mul(&cc.mul(&cc).add(&ParamPoly::one()));
        let e2 = lin.mul(&cc.sub(&ParamPoly::constant(rati(7))));
        let sys = PolySystem {
            unknowns: vec![sp("cc")],
            equations: vec![e1, e2],
        };
        let sol = solve_poly_system(&sys).unwrap();
        assert_eq!(sol.values[&sp("cc")], ParamPoly::constant(rat(-22, 5)));
        assert!(sol.unique);
    }

    #[test]
    fn inconsistent_reported() {
        let sys = PolySystem {
            unknowns: vec![sp("u")],
            equations: vec![
                v("u").sub(&ParamPoly::one()),
                v("u").sub(&ParamPoly::constant(rati(2))),
            ],
        };
        assert!(solve_poly_system(&sys).is_err());
    }

    #[test]
    fn free_unknowns_survive() {
        // one equation, two unknowns: u + w = 1 -> u eliminated, w free
        let sys = PolySystem {
            unknowns: vec![sp("u"), sp("w")],
            equations: vec![v("u").add(&v("w")).sub(&ParamPoly::one())],
        };
        let sol = solve_poly_system(&sys).unwrap();
        assert_eq!(sol.free, vec![sp("w")]);
        assert_eq!(
            sol.values[&sp("u")],
            ParamPoly::one().sub(&v("w"))
        );
    }
}
