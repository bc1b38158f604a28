//! Exact linear solver over Q.
//!
//! Systems have rational coefficients on the unknowns; the right-hand sides
//! may be polynomials in the parameter ring (they stay on the right through
//! elimination, so no division by parameters ever happens). The solver
//! classifies every system as unique / family / inconsistent and returns a
//! reduced null-space basis for families.

use crate::param::{ParamPoly, Symbol};
use crate::rat::Rat;
use num_traits::Zero;
use std::collections::BTreeMap;

/// One row: sum_j coeffs[j] * unknown_j + constant = 0.
#[derive(Clone, Debug)]
pub struct LinRow {
    pub coeffs: Vec<Rat>,
    pub constant: ParamPoly,
}

#[derive(Clone, Debug)]
pub struct LinearSystem {
    pub unknowns: Vec<Symbol>,
    pub rows: Vec<LinRow>,
}

/// Solution classification of `solve_linear`.
#[derive(Clone, Debug)]
pub enum LinSolution {
    /// Every unknown is fixed.
    Unique(BTreeMap<Symbol, ParamPoly>),
    /// particular + span(null basis); the basis is in reduced form (one free
    /// unknown set to 1 per vector, pivot unknowns back-substituted). `free`
    /// lists the free unknowns, aligned with `null_basis`.
    Family {
        particular: BTreeMap<Symbol, ParamPoly>,
        null_basis: Vec<BTreeMap<Symbol, Rat>>,
        free: Vec<Symbol>,
    },
    /// No solution; the witness is a linear combination of input rows that
    /// reduces to 0 = nonzero.
    Inconsistent { row: usize, value: ParamPoly },
}

impl LinearSystem {
    pub fn new(unknowns: Vec<Symbol>) -> Self {
        LinearSystem {
            unknowns,
            rows: Vec::new(),
        }
    }

    pub fn push_row(&mut self, coeffs: Vec<Rat>, constant: ParamPoly) {
        assert_eq!(coeffs.len(), self.unknowns.len(), "row width mismatch");
        self.rows.push(LinRow { coeffs, constant });
    }

    /// Builds a row from a ParamPoly equation that must be affine-linear in
    /// the unknowns with rational coefficients: sum coeff_u * u + rest = 0.
    pub fn push_equation(&mut self, eq: &ParamPoly) -> Result<(), crate::error::Error> {
        let set: std::collections::BTreeSet<Symbol> = self.unknowns.iter().cloned().collect();
        let collected = eq.collect_by(&set);
        let mut coeffs = vec![Rat::zero(); self.unknowns.len()];
        let mut constant = ParamPoly::zero();
        for (mono, coeff) in collected {
            if mono.is_one() {
                constant = coeff;
                continue;
            }
            let parts: Vec<_> = mono.iter().collect();
            if parts.len() != 1 || parts[0].1 != 1 {
                return Err(crate::error::Error::NotLinear(format!(
                    "unknown monomial {mono} appears in equation"
                )));
            }
            let sym = &parts[0].0;
            let r = coeff.as_rational().ok_or_else(|| {
                crate::error::Error::NotLinear(format!(
                    "coefficient of {sym} is not rational: {coeff}"
                ))
            })?;
            let idx = self.unknowns.iter().position(|u| u == sym).unwrap();
            coeffs[idx] = r;
        }
        self.rows.push(LinRow { coeffs, constant });
        Ok(())
    }
}

/// Gauss-Jordan elimination over Q with exact arithmetic.
pub fn solve_linear(sys: &LinearSystem) -> LinSolution {
    let n = sys.unknowns.len();
    let mut rows: Vec<LinRow> = sys.rows.clone();
    let mut pivot_of_col: Vec<Option<usize>> = vec![None; n];
    let mut pivot_rows: Vec<(usize, usize)> = Vec::new(); // (row index, col)

    let mut r = 0;
    for col in 0..n {
        // find pivot
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i].coeffs[col].is_zero()) else {
            continue;
        };
        rows.swap(r, pr);
        let inv = rows[r].coeffs[col].clone().recip();
        for c in &mut rows[r].coeffs {
            *c *= &inv;
        }
        rows[r].constant = rows[r].constant.scale(&inv);
        let pivot_row = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i == r || row.coeffs[col].is_zero() {
                continue;
            }
            let factor = row.coeffs[col].clone();
            for (c, pc) in row.coeffs.iter_mut().zip(&pivot_row.coeffs) {
                *c -= &factor * pc;
            }
            row.constant = row.constant.sub(&pivot_row.constant.scale(&factor));
        }
        pivot_of_col[col] = Some(r);
        pivot_rows.push((r, col));
        r += 1;
    }

    // inconsistency: zero coefficient row with nonzero constant
    for (i, row) in rows.iter().enumerate() {
        if row.coeffs.iter().all(Rat::is_zero) && !row.constant.is_zero() {
            return LinSolution::Inconsistent {
                row: i,
                value: row.constant.clone(),
            };
        }
    }

    let free_cols: Vec<usize> = (0..n).filter(|&c| pivot_of_col[c].is_none()).collect();
    // particular solution: free unknowns = 0
    let mut particular: BTreeMap<Symbol, ParamPoly> = BTreeMap::new();
    for &c in &free_cols {
        particular.insert(sys.unknowns[c].clone(), ParamPoly::zero());
    }
    for &(ri, col) in &pivot_rows {
        // unknown_col = -constant - sum_{free} coeff * free (free = 0)
        particular.insert(sys.unknowns[col].clone(), rows[ri].constant.neg());
    }

    if free_cols.is_empty() {
        return LinSolution::Unique(particular);
    }

    let mut null_basis = Vec::new();
    for &fc in &free_cols {
        let mut vec: BTreeMap<Symbol, Rat> = BTreeMap::new();
        vec.insert(sys.unknowns[fc].clone(), Rat::from_integer(1.into()));
        for &(ri, col) in &pivot_rows {
            let c = &rows[ri].coeffs[fc];
            if !c.is_zero() {
                vec.insert(sys.unknowns[col].clone(), -c.clone());
            }
        }
        null_basis.push(vec);
    }
    LinSolution::Family {
        particular,
        null_basis,
        free: free_cols
            .iter()
            .map(|&c| sys.unknowns[c].clone())
            .collect(),
    }
}

/// The general solution of a family as a substitution map: pivot unknowns are
/// expressed in the free unknowns (which map to themselves).
pub fn general_solution(
    particular: &BTreeMap<Symbol, ParamPoly>,
    null_basis: &[BTreeMap<Symbol, Rat>],
    free: &[Symbol],
) -> BTreeMap<Symbol, ParamPoly> {
    let mut out = particular.clone();
    for (vec, fsym) in null_basis.iter().zip(free) {
        for (sym, coeff) in vec {
            let add = ParamPoly::var(fsym.clone()).scale(coeff);
            let cur = out.entry(sym.clone()).or_insert_with(ParamPoly::zero);
            *cur = cur.add(&add);
        }
    }
    out
}

/// Substitutes a solution back into the rows; all residuals must vanish.
pub fn residuals(sys: &LinearSystem, assignment: &BTreeMap<Symbol, ParamPoly>) -> Vec<ParamPoly> {
    sys.rows
        .iter()
        .map(|row| {
            let mut acc = row.constant.clone();
            for (c, u) in row.coeffs.iter().zip(&sys.unknowns) {
                if c.is_zero() {
                    continue;
                }
                let v = assignment.get(u).cloned().unwrap_or_else(ParamPoly::zero);
                acc = acc.add(&v.scale(c));
            }
            acc
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat_zero, rati};

    fn sym(s: &str) -> Symbol {
        Symbol::new(s)
    }

    fn konst(n: i64) -> ParamPoly {
        ParamPoly::constant(rati(n))
    }

    #[test]
    fn unique_2x2() {
        // x + y = 2, x - y = 0  ->  x = 1, y = 1
        let mut sys = LinearSystem::new(vec![sym("x"), sym("y")]);
        sys.push_row(vec![rati(1), rati(1)], konst(-2));
        sys.push_row(vec![rati(1), rati(-1)], konst(0));
        match solve_linear(&sys) {
            LinSolution::Unique(m) => {
                assert_eq!(m[&sym("x")], ParamPoly::one());
                assert_eq!(m[&sym("y")], ParamPoly::one());
                assert!(residuals(&sys, &m).iter().all(ParamPoly::is_zero));
            }
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn underdetermined_family() {
        // x + y = 2 -> particular (2, 0), null basis {(-1, 1)} on (x, y)
        let mut sys = LinearSystem::new(vec![sym("x"), sym("y")]);
        sys.push_row(vec![rati(1), rati(1)], konst(-2));
        match solve_linear(&sys) {
            LinSolution::Family {
                particular,
                null_basis,
                free,
            } => {
                assert_eq!(free, vec![sym("y")]);
                assert_eq!(particular[&sym("x")], konst(2));
                assert_eq!(particular[&sym("y")], ParamPoly::zero());
                assert_eq!(null_basis.len(), 1);
                let v = &null_basis[0];
                assert_eq!(v[&sym("y")], rati(1));
                assert_eq!(v[&sym("x")], rati(-1));
                // the basis vector spans the same line as (1, -1)
                assert!(residuals(&sys, &particular).iter().all(ParamPoly::is_zero));
            }
            other => panic!("expected family, got {other:?}"),
        }
    }

    #[test]
    fn inconsistent_with_witness() {
        // x = 1, x = 2
        let mut sys = LinearSystem::new(vec![sym("x")]);
        sys.push_row(vec![rati(1)], konst(-1));
        sys.push_row(vec![rati(1)], konst(-2));
        match solve_linear(&sys) {
            LinSolution::Inconsistent { value, .. } => {
                assert!(!value.is_zero());
            }
            other => panic!("expected inconsistent, got {other:?}"),
        }
    }

    #[test]
    fn parampoly_rhs() {
        // u + v = c, u - v = c  ->  u = c, v = 0
        let c = ParamPoly::var(Symbol::c());
        let mut sys = LinearSystem::new(vec![sym("u"), sym("v")]);
        sys.push_row(vec![rati(1), rati(1)], c.neg());
        sys.push_row(vec![rati(1), rati(-1)], c.neg());
        match solve_linear(&sys) {
            LinSolution::Unique(m) => {
                assert_eq!(m[&sym("u")], c);
                assert!(m[&sym("v")].is_zero());
            }
            other => panic!("expected unique, got {other:?}"),
        }
    }

    #[test]
    fn push_equation_extracts_linear_structure() {
        // 3u - 2v + c*vac = 0 as a ParamPoly equation
        let u = ParamPoly::var(sym("u"));
        let v = ParamPoly::var(sym("v"));
        let cvac = ParamPoly::var(Symbol::c()).mul(&ParamPoly::var(Symbol::vac()));
        let eq = u.scale(&rati(3)).add(&v.scale(&rati(-2))).add(&cvac);
        let mut sys = LinearSystem::new(vec![sym("u"), sym("v")]);
        sys.push_equation(&eq).unwrap();
        assert_eq!(sys.rows[0].coeffs, vec![rati(3), rati(-2)]);
        assert_eq!(sys.rows[0].constant, cvac);
        assert_eq!(sys.rows[0].coeffs.len(), 2);
        assert_eq!(rat_zero(), Rat::zero());

        // nonlinear equation is rejected
        let bad = u.mul(&v);
        let mut sys2 = LinearSystem::new(vec![sym("u"), sym("v")]);
        assert!(sys2.push_equation(&bad).is_err());
    }
}
