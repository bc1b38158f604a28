//! The Virasoro one-point function <T(x)>.
//!
//! p <T(x)> = (c/32) [p']^2/p <1> + (1/4) P(x, y) with the Galois splitting
//! P = P^(G-even) + y P^(G-odd). The ansatz carries symbolic coefficients
//! A_k (Galois-even, degree n-2) and Ao_k (Galois-odd); the behaviour at
//! infinity — <T> ~ x^-4 for even n, <T> = (c/32) x^-2 <1> + O(x^-3) for odd
//! n — is imposed through the projection machinery as a linear system, never
//! hard-coded.

use crate::curve::CurveSpec;
use crate::error::Error;
use crate::galois::{Factor, GaloisElement, RationalExpr};
use crate::linalg::{solve_linear, LinSolution, LinearSystem};
use crate::solve::{solve_poly_system, PolySystem};
use crate::multipoly::MultiPoly;
use crate::param::{ParamPoly, Symbol};
use crate::project::project_above;
use crate::rat::{rat, Rat};
use crate::unipoly::UniPoly;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Symbol for the k-th Galois-odd ansatz coefficient.
pub fn odd_sym(k: usize) -> Symbol {
    Symbol::new(&format!("Ao{k}"))
}

#[derive(Clone, Debug)]
pub struct OnePointFunction {
    pub curve: Arc<CurveSpec>,
    /// P^(G-even), degree n-2, constraints substituted.
    pub p_even: UniPoly,
    /// P^(G-odd); zero when the degree bound is negative.
    pub p_odd: UniPoly,
    /// <T(x)> as a one-point element.
    pub element: GaloisElement,
    /// Which ansatz symbols were fixed by the infinity constraints.
    pub fixed: BTreeMap<Symbol, ParamPoly>,
    /// The remaining free symbols.
    pub free: Vec<Symbol>,
}

/// Pi-split bookkeeping: P^(G-even) =: -(c/8) Pi with Pi = Pi_even(x) +
/// x Pi_odd(x); both parts are even polynomials stored in t = x^2.
#[derive(Clone, Debug)]
pub struct PiSplit {
    pub pi_even: UniPoly,
    pub pi_odd: UniPoly,
}

impl PiSplit {
    /// Reconstructs P^(G-even) = -(c/8)(Pi_even(x^2) + x Pi_odd(x^2)).
    pub fn reconstruct_p_even(&self) -> UniPoly {
        let pi = UniPoly::from_parity_split(&self.pi_even, &self.pi_odd);
        pi.scale(&ParamPoly::var(Symbol::c()).scale(&rat(-1, 8)))
    }
}

/// <T(x)> assembled from its Galois parts:
/// component 1:  (c/32)(p')^2 <1>/p^2 + P^(G-even)/(4p)
/// component y:  P^(G-odd)/(4p)
pub fn assemble_element(
    curve: &Arc<CurveSpec>,
    p_even: &UniPoly,
    p_odd: &UniPoly,
) -> GaloisElement {
    let nvars = 1;
    let p_prime = curve.p_prime_multi(nvars, 0);
    let cvac = ParamPoly::var(Symbol::c())
        .mul(&ParamPoly::var(Symbol::vac()))
        .scale(&rat(1, 32));
    let even_num = p_prime
        .pow(2)
        .scale(&cvac)
        .add(
            &p_even
                .to_multipoly(nvars, 0)
                .mul(&curve.p_multi(nvars, 0))
                .scale_rat(&rat(1, 4)),
        );
    let even = RationalExpr::new(even_num, BTreeMap::from([(Factor::P(0), 2)]), curve);
    let mut element = GaloisElement::zero(curve.clone(), nvars);
    element.set(0, even);
    if !p_odd.is_zero() {
        let odd = RationalExpr::new(
            p_odd.to_multipoly(nvars, 0).scale_rat(&rat(1, 4)),
            BTreeMap::from([(Factor::P(0), 1)]),
            curve,
        );
        element.set(0b1, odd);
    }
    element
}

/// The infinity behaviour of <T(x)> as an element: (c/32) x^-2 <1> for odd n,
/// zero for even n.
fn expected_tail(curve: &Arc<CurveSpec>) -> GaloisElement {
    if curve.n() % 2 == 0 {
        return GaloisElement::zero(curve.clone(), 1);
    }
    let c_over_32 = ParamPoly::var(Symbol::c())
        .mul(&ParamPoly::var(Symbol::vac()))
        .scale(&rat(1, 32));
    GaloisElement::from_component(
        curve.clone(),
        1,
        0,
        RationalExpr::new(
            MultiPoly::constant(1, c_over_32),
            BTreeMap::from([(Factor::X(0), 2)]),
            curve,
        ),
    )
}

fn infinity_threshold(n: usize) -> i64 {
    if n % 2 == 0 {
        -4
    } else {
        -3
    }
}

/// The equations expressing [<T>]_{> threshold} = expected tail on a raw
/// ansatz: clearing the factored denominators is harmless, so the numerator
/// coefficients vanish iff the projection residual does.
fn infinity_equations(
    curve: &Arc<CurveSpec>,
    p_even: &UniPoly,
    p_odd: &UniPoly,
) -> Result<Vec<ParamPoly>, Error> {
    let element = assemble_element(curve, p_even, p_odd);
    let bad = project_above(&element, 0, infinity_threshold(curve.n()))?
        .sub(&expected_tail(curve));
    let mut eqs = Vec::new();
    for (_, r) in bad.components() {
        for (_, coeff) in r.num.terms() {
            eqs.push(coeff.clone());
        }
    }
    Ok(eqs)
}

/// The same constraints as a rational linear system, for the dimension
/// counts on rational-coefficient curves.
fn infinity_constraints(
    curve: &Arc<CurveSpec>,
    p_even: &UniPoly,
    p_odd: &UniPoly,
    unknowns: Vec<Symbol>,
) -> Result<LinearSystem, Error> {
    let mut sys = LinearSystem::new(unknowns);
    for eq in infinity_equations(curve, p_even, p_odd)? {
        sys.push_equation(&eq)?;
    }
    Ok(sys)
}

/// Builds the one-point ansatz with the infinity constraints imposed.
pub fn build_one_point(curve: &Arc<CurveSpec>) -> Result<OnePointFunction, Error> {
    let n = curve.n();
    let even_syms: Vec<Symbol> = (0..=n - 2).map(Symbol::a).collect();
    let odd_syms: Vec<Symbol> = (0..=n - 2).map(odd_sym).collect();
    let p_even_raw = ansatz_poly(n - 2, &even_syms);
    let p_odd_raw = ansatz_poly(n - 2, &odd_syms);

    let mut unknowns = even_syms.clone();
    unknowns.extend(odd_syms.iter().cloned());
    // The constraints are triangular with invertible pivots even when the
    // curve coefficients are symbolic, so the unit-pivot solver applies.
    let sys = PolySystem {
        unknowns,
        equations: infinity_equations(curve, &p_even_raw, &p_odd_raw)?,
    };
    let sol = solve_poly_system(&sys)?;
    let (assignment, free) = (sol.values, sol.free);
    let substitute = |p: &UniPoly| -> UniPoly {
        let mut out = p.clone();
        for (sym, value) in &assignment {
            out = UniPoly::from_coeffs(
                out.coeffs()
                    .iter()
                    .map(|c| c.substitute(sym, value))
                    .collect(),
            );
        }
        out
    };
    let p_even = substitute(&p_even_raw);
    let p_odd = substitute(&p_odd_raw);
    let element = assemble_element(curve, &p_even, &p_odd);
    let fixed = assignment
        .into_iter()
        .filter(|(s, v)| ParamPoly::var(s.clone()) != *v)
        .collect();
    Ok(OnePointFunction {
        curve: curve.clone(),
        p_even,
        p_odd,
        element,
        fixed,
        free,
    })
}

fn ansatz_poly(deg: usize, syms: &[Symbol]) -> UniPoly {
    // syms[k] multiplies x^(deg - k), matching A_k x^(n-2-k)
    let coeffs: Vec<ParamPoly> = (0..=deg)
        .map(|e| ParamPoly::var(syms[deg - e].clone()))
        .collect();
    UniPoly::from_coeffs(coeffs)
}

/// P(x, y) = P^(G-even)(x) + y P^(G-odd)(x) at point `var` of an
/// nvars-point context.
pub fn p_element(opf: &OnePointFunction, nvars: usize, var: usize) -> GaloisElement {
    let mut out = GaloisElement::from_poly(
        opf.curve.clone(),
        opf.p_even.to_multipoly(nvars, var),
    );
    if !opf.p_odd.is_zero() {
        out.set(
            1 << var,
            RationalExpr::from_poly(opf.p_odd.to_multipoly(nvars, var)),
        );
    }
    out
}

/// The Pi-split of the constructed P^(G-even).
pub fn pi_split(opf: &OnePointFunction) -> PiSplit {
    let c_inv = ParamPoly::var_pow(Symbol::c(), -1).scale(&rat(-8, 1));
    let pi = opf.p_even.scale(&c_inv);
    let (pi_even, pi_odd) = pi.parity_split();
    PiSplit { pi_even, pi_odd }
}

/// Report of the asymptotics verification.
#[derive(Clone, Debug)]
pub struct AsymptoticsReport {
    pub passed: bool,
    /// The offending projection residual, zero on success.
    pub residual: GaloisElement,
}

/// Verifies by projection that [<T(x)>]_{>-3} = (c/32) x^-2 <1> for odd n and
/// [<T(x)>]_{>-4} = 0 for even n.
pub fn asymptotics_check(opf: &OnePointFunction) -> Result<AsymptoticsReport, Error> {
    asymptotics_check_element(&opf.curve, &opf.element)
}

pub fn asymptotics_check_element(
    curve: &Arc<CurveSpec>,
    element: &GaloisElement,
) -> Result<AsymptoticsReport, Error> {
    let bad = project_above(element, 0, infinity_threshold(curve.n()))?
        .sub(&expected_tail(curve));
    Ok(AsymptoticsReport {
        passed: bad.is_zero(),
        residual: bad,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct DimensionCount {
    pub dim_even: usize,
    /// None below genus 2 (the odd sector is not defined there).
    pub dim_odd: Option<usize>,
    pub total: Option<usize>,
}

/// Free-parameter counts of the constrained ansatz, computed from the linear
/// constraint system.
pub fn dimension_count(curve: &Arc<CurveSpec>) -> Result<DimensionCount, Error> {
    let n = curve.n();
    let even_syms: Vec<Symbol> = (0..=n - 2).map(Symbol::a).collect();
    let odd_syms: Vec<Symbol> = (0..=n - 2).map(odd_sym).collect();
    let mut unknowns = even_syms.clone();
    unknowns.extend(odd_syms.iter().cloned());
    let sys = infinity_constraints(
        curve,
        &ansatz_poly(n - 2, &even_syms),
        &ansatz_poly(n - 2, &odd_syms),
        unknowns,
    )?;
    let free = match solve_linear(&sys) {
        LinSolution::Unique(_) => Vec::new(),
        LinSolution::Family { free, .. } => free,
        LinSolution::Inconsistent { row, value } => {
            return Err(Error::InconsistentSystem {
                row,
                value: format!("{value}"),
            })
        }
    };
    // the two sectors never couple, so per-sector counts are well defined
    let dim_even = free.iter().filter(|s| even_syms.contains(s)).count();
    let dim_odd_raw = free.iter().filter(|s| odd_syms.contains(s)).count();
    if curve.genus() < 2 {
        return Ok(DimensionCount {
            dim_even,
            dim_odd: None,
            total: None,
        });
    }
    Ok(DimensionCount {
        dim_even,
        dim_odd: Some(dim_odd_raw),
        total: Some(dim_even + dim_odd_raw),
    })
}

/// <T> at genus one: the constant A_1/4 (with Tav as its display name).
pub fn t_average_symbol() -> (Symbol, ParamPoly) {
    (
        Symbol::t_av(),
        ParamPoly::var(Symbol::a(1)).scale(&rat(1, 4)),
    )
}

/// The defining identity p <T(x)> - (c/32)[p']^2/p <1> - P/4 = 0, checked
/// exactly.
pub fn defining_identity_residual(opf: &OnePointFunction) -> GaloisElement {
    let curve = &opf.curve;
    let p = curve.p_multi(1, 0);
    let p_prime = curve.p_prime_multi(1, 0);
    let lhs = opf.element.mul_poly(&p);
    let cvac = ParamPoly::var(Symbol::c())
        .mul(&ParamPoly::var(Symbol::vac()))
        .scale(&rat(1, 32));
    let t1 = GaloisElement::from_component(
        curve.clone(),
        1,
        0,
        RationalExpr::new(
            p_prime.pow(2).scale(&cvac),
            BTreeMap::from([(Factor::P(0), 1)]),
            curve,
        ),
    );
    let t2 = p_element(opf, 1, 0).scale_rat(&rat(1, 4));
    lhs.sub(&t1).sub(&t2)
}

/// The unconstrained ansatz element for perturbation tests: all A_k free.
pub fn raw_ansatz_element(curve: &Arc<CurveSpec>) -> GaloisElement {
    let n = curve.n();
    let even_syms: Vec<Symbol> = (0..=n - 2).map(Symbol::a).collect();
    let odd_syms: Vec<Symbol> = (0..=n - 2).map(odd_sym).collect();
    assemble_element(
        curve,
        &ansatz_poly(n - 2, &even_syms),
        &ansatz_poly(n - 2, &odd_syms),
    )
}

pub fn rat_curve(n: usize, coeffs: &[i64]) -> Arc<CurveSpec> {
    Arc::new(
        CurveSpec::validate(
            n,
            coeffs.iter().map(|&k| Rat::from_integer(k.into())).collect(),
        )
        .expect("valid test curve"),
    )
}
