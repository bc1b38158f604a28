//! (2,5) minimal model applications: the genus-one constraint that forces
//! N0(T,T) = (3/10) T'' and c = -22/5, the genus-one-and-up consistency
//! identity for the Galois-even sector, and the complete genus-2 coefficient
//! solve that leaves exactly the four parameters <1>, A1, A2, A3.

use crate::curve::CurveSpec;
use crate::diag::diagonal_series;
use crate::error::Error;
use crate::galois::{Factor, GaloisElement, RationalExpr};
use crate::linalg::{general_solution, solve_linear, LinSolution, LinearSystem};
use crate::multipoly::MultiPoly;
use crate::onepoint::{build_one_point, pi_split, OnePointFunction};
use crate::param::{ParamPoly, Symbol};
use crate::project::coefficient_at_infinity;
use crate::rat::{rat, rat_one, Rat};
use crate::solve::{solve_poly_system, PolySystem};
use crate::threepoint::{build_three_point, full_three_point, ThreePointFunction};
use crate::twopoint::{
    build_two_point, full_two_point, n0_of_tt, TwoPointFunction,
};
use crate::unipoly::UniPoly;
use num_integer::Integer;

use std::collections::BTreeMap;
use std::sync::Arc;

/// Central charge and irreducible-representation count of the (p,q) minimal
/// model: c = 1 - 6(p-q)^2/(pq), count (p-1)(q-1)/2.
pub struct ModelConstants {
    pub c: Rat,
    pub irrep_count: Rat,
}

pub fn model_constants(p: i64, q: i64) -> Result<ModelConstants, Error> {
    if p < 2 || q < 2 || p.gcd(&q) != 1 {
        return Err(Error::InvalidModel { p, q });
    }
    let diff = rat(p - q, 1);
    let c = rat_one() - rat(6, 1) * &diff * &diff / rat(p * q, 1);
    let irrep_count = rat((p - 1) * (q - 1), 2);
    Ok(ModelConstants { c, irrep_count })
}

/// The generic symbolic genus-one curve y^2 = 4x^3 + a2 x + a3 (every
/// genus-one curve is rationally equivalent to this form).
pub fn symbolic_g1_curve() -> Arc<CurveSpec> {
    Arc::new(
        CurveSpec::validate_symbolic(
            3,
            vec![
                ParamPoly::constant(rat(4, 1)),
                ParamPoly::zero(),
                ParamPoly::var(Symbol::curve_a(2)),
                ParamPoly::var(Symbol::curve_a(3)),
            ],
            0x5eed,
        )
        .expect("generic cubic is squarefree"),
    )
}

/// Result of forcing <N0(T,T)> = alpha d^2<T> on a genus-one curve.
#[derive(Clone, Debug)]
pub struct N0Solution {
    pub alpha: Rat,
    pub c: Rat,
    /// The state constant of the two-point ansatz, fixed by the identity.
    pub state: BTreeMap<Symbol, ParamPoly>,
    pub unique: bool,
}

fn n0_identity_equations(
    tpf: &TwoPointFunction,
    alpha: &ParamPoly,
) -> Result<Vec<ParamPoly>, Error> {
    let n0 = n0_of_tt(tpf)?;
    let d2t = tpf
        .opf
        .element
        .remap(&[1], 2)
        .derivative(1)
        .derivative(1);
    let residual = n0.sub(&d2t.scale(alpha));
    let mut eqs = Vec::new();
    for (_, r) in residual.components() {
        for (_, coeff) in r.num.terms() {
            eqs.push(coeff.clone());
        }
    }
    Ok(eqs)
}

/// Solves <N0(T,T)> = alpha d^2<T(x)> on a genus-one curve for the unknowns
/// alpha, c, and the two-point state constant.
pub fn force_n0_constraint_g1(curve: &Arc<CurveSpec>) -> Result<N0Solution, Error> {
    if curve.genus() != 1 || curve.n() != 3 {
        return Err(Error::Solve(format!(
            "the N0 constraint solve needs a genus-one cubic, got n = {}",
            curve.n()
        )));
    }
    let opf = build_one_point(curve)?;
    let tpf = build_two_point(&opf)?;
    let eqs = n0_identity_equations(&tpf, &ParamPoly::var(Symbol::alpha()))?;
    let mut unknowns = vec![Symbol::alpha(), Symbol::c()];
    unknowns.extend(tpf.states.symbols.iter().cloned());
    let sol = solve_poly_system(&PolySystem {
        unknowns,
        equations: eqs,
    })?;
    let get_rat = |s: Symbol| -> Result<Rat, Error> {
        sol.values
            .get(&s)
            .and_then(ParamPoly::as_rational)
            .ok_or_else(|| Error::Solve(format!("{s} did not solve to a rational")))
    };
    let alpha = get_rat(Symbol::alpha())?;
    let c = get_rat(Symbol::c())?;
    let state = tpf
        .states
        .symbols
        .iter()
        .map(|s| (s.clone(), sol.values[s].clone()))
        .collect();
    Ok(N0Solution {
        alpha,
        c,
        state,
        unique: sol.unique,
    })
}

/// Substitutes candidate values for alpha and c and reports whether the
/// identity can still be satisfied by any state constant. `None` means
/// consistent; `Some(residual)` describes the obstruction.
pub fn n0_constraint_residual(
    curve: &Arc<CurveSpec>,
    alpha: &Rat,
    c: &Rat,
) -> Result<Option<String>, Error> {
    let opf = build_one_point(curve)?;
    let tpf = build_two_point(&opf)?;
    let eqs = n0_identity_equations(&tpf, &ParamPoly::constant(alpha.clone()))?;
    let eqs: Vec<ParamPoly> = eqs
        .iter()
        .map(|e| e.substitute(&Symbol::c(), &ParamPoly::constant(c.clone())))
        .collect();
    match solve_poly_system(&PolySystem {
        unknowns: tpf.states.symbols.clone(),
        equations: eqs,
    }) {
        Ok(_) => Ok(None),
        Err(e) => Ok(Some(format!("{e}"))),
    }
}

/// The Galois-even consistency identity of the (2,5) model: its left-hand
/// side as a one-variable expression over p-powers.
pub fn lemma_25_lhs(opf: &OnePointFunction) -> GaloisElement {
    let curve = &opf.curve;
    let n = curve.n();
    let nvars = 1;
    let c = ParamPoly::var(Symbol::c());
    let vac = ParamPoly::var(Symbol::vac());
    let cvac = c.mul(&vac);
    let vac_inv = ParamPoly::var_pow(Symbol::vac(), -1);

    let p = curve.p_uni();
    let p1 = p.derivative();
    let p2 = p1.derivative();
    let p3 = p2.derivative();
    let p4 = p3.derivative();
    let pge = opf.p_even.clone();
    let pge1 = pge.derivative();
    let pge2 = pge1.derivative();
    let pgo = opf.p_odd.clone();
    let split = curve.even_odd();
    let pe = UniPoly::from_parity_split(&split.even_part, &UniPoly::zero());
    let po = UniPoly::from_parity_split(&split.odd_part, &UniPoly::zero());
    let pi = pi_split(opf);
    let pi_even = UniPoly::from_parity_split(&pi.pi_even, &UniPoly::zero());
    let pi_odd = UniPoly::from_parity_split(&pi.pi_odd, &UniPoly::zero());
    // A0 as fixed by the one-point constraints: leading coefficient of P^(G-even)
    let a0_val = pge.coeff(n - 2);
    let a0 = ParamPoly::constant(curve.a0_rat());

    let m = |u: &UniPoly| u.to_multipoly(nvars, 0);
    let x = MultiPoly::var(nvars, 0);
    let term = |num: MultiPoly, p_pow: u32, x_pow: u32| -> RationalExpr {
        let mut den = BTreeMap::new();
        if p_pow > 0 {
            den.insert(Factor::P(0), p_pow);
        }
        if x_pow > 0 {
            den.insert(Factor::X(0), x_pow);
        }
        RationalExpr::new(num, den, curve)
    };

    let mut terms: Vec<RationalExpr> = Vec::new();
    // (7c/640)<1> [p'']^2/p^2 - (7c/960)<1> p'p'''/p^2 + (c/1536)<1> p''''/p
    terms.push(term(m(&p2).pow(2).scale(&cvac.scale(&rat(7, 640))), 2, 0));
    terms.push(term(
        m(&p1).mul(&m(&p3)).scale(&cvac.scale(&rat(-7, 960))),
        2,
        0,
    ));
    terms.push(term(m(&p4).scale(&cvac.scale(&rat(1, 1536))), 1, 0));
    // (1/20) p'' P^(G-even)/p^2 + (3/80) p' P'/p^2 - (3/160) P''/p
    terms.push(term(m(&p2).mul(&m(&pge)).scale_rat(&rat(1, 20)), 2, 0));
    terms.push(term(m(&p1).mul(&m(&pge1)).scale_rat(&rat(3, 80)), 2, 0));
    terms.push(term(m(&pge2).scale_rat(&rat(-3, 160)), 1, 0));
    // -(1/16)<1>^-1 (P^2/p^2 + [P^(G-odd)]^2/p)
    terms.push(term(
        m(&pge).pow(2).scale(&vac_inv.scale(&rat(-1, 16))),
        2,
        0,
    ));
    if !pgo.is_zero() {
        terms.push(term(
            m(&pgo).pow(2).scale(&vac_inv.scale(&rat(-1, 16))),
            1,
            0,
        ));
    }
    // (1/4) a0 x^(n-2) P^(G-even)/p^2 - (1/8) A0 a0 x^(2n-4)/p^2
    terms.push(term(
        x.pow((n - 2) as u32).mul(&m(&pge)).scale(&a0.scale(&rat(1, 4))),
        2,
        0,
    ));
    terms.push(term(
        x.pow((2 * n - 4) as u32)
            .scale(&a0_val.mul(&a0).scale(&rat(-1, 8))),
        2,
        0,
    ));
    // -(c/256) (Pi_even' + x Pi_odd')/(x p)
    terms.push(term(
        m(&pi_even.derivative())
            .add(&x.mul(&m(&pi_odd.derivative())))
            .scale(&c.scale(&rat(-1, 256))),
        1,
        1,
    ));
    // -(c/64)<1> (1/(xp)) { -(1/4) p'''
    //                       -(1/8)(pe''/x - po'')
    //                       +(1/(8x))(pe'/x + 5 po') }
    // cleared onto the common denominator x^3 p:
    //   -(c/64)<1> [ -(1/4) x^2 p''' - (1/8) x pe'' + (1/8) x^2 po''
    //                + (1/8) pe' + (5/8) x po' ] / (x^3 p)
    let inner = x
        .pow(2)
        .mul(&m(&p3))
        .scale_rat(&rat(-1, 4))
        .add(&x.mul(&m(&pe.derivative().derivative())).scale_rat(&rat(-1, 8)))
        .add(&x.pow(2).mul(&m(&po.derivative().derivative())).scale_rat(&rat(1, 8)))
        .add(&m(&pe.derivative()).scale_rat(&rat(1, 8)))
        .add(&x.mul(&m(&po.derivative())).scale_rat(&rat(5, 8)));
    terms.push(term(inner.scale(&cvac.scale(&rat(-1, 64))), 1, 3));

    let mut out = RationalExpr::zero(nvars);
    for t in terms {
        out = out.add(&t, curve);
    }
    GaloisElement::from_component(curve.clone(), nvars, 0, out)
}

/// Report of the (2,5) consistency-identity verification.
#[derive(Clone, Debug)]
pub struct Lemma25Report {
    pub order_minus4_vanishes: bool,
    pub order_minus5_vanishes: bool,
    pub regular_at_zero: bool,
    /// The state-polynomial combinations fixed by matching the identity.
    pub fixed_combos: BTreeMap<Symbol, ParamPoly>,
    pub free_after_match: Vec<Symbol>,
    pub diag_degree: Option<u16>,
}

/// Verifies the displayed Galois-even identity at c = -22/5 on an odd-n
/// curve: infinity orders -4, -5 drop out, the expression is regular at
/// x = 0, and it is matched by diagonal state polynomials of the admissible
/// degrees.
pub fn verify_25_lemma(curve: &Arc<CurveSpec>) -> Result<Lemma25Report, Error> {
    let n = curve.n();
    if n % 2 == 0 {
        return Err(Error::RequiresOddDegree(n));
    }
    let c_val = model_constants(2, 5)?.c;
    let opf = build_one_point(curve)?;
    let lhs = lemma_25_lhs(&opf).substitute_param(&Symbol::c(), &ParamPoly::constant(c_val));

    let order_minus4_vanishes = coefficient_at_infinity(&lhs, 0, -4)?.is_zero();
    let order_minus5_vanishes = coefficient_at_infinity(&lhs, 0, -5)?.is_zero();
    let regular_at_zero = lhs
        .components()
        .all(|(_, r)| !r.den.contains_key(&Factor::X(0)));

    // match lhs = P^(0)(x,x)/p^2 + P^(1,2)(x,x)/p
    let states = crate::twopoint::attach_state_ansatz(curve)?;
    let diag = |p: &MultiPoly| -> MultiPoly {
        // substitute x2 -> x1 and drop to one variable
        p.substitute_var(1, &MultiPoly::var(2, 0)).remap(&[0, 0], 1)
    };
    let p0_diag = diag(&states.p0);
    let p12_diag = diag(&states.p12);
    let rhs = GaloisElement::from_component(
        curve.clone(),
        1,
        0,
        RationalExpr::new(
            p0_diag.add(&p12_diag.mul(&curve.p_multi(1, 0))),
            BTreeMap::from([(Factor::P(0), 2)]),
            curve,
        ),
    );
    let residual = lhs.sub(&rhs);
    let mut sys = LinearSystem::new(states.symbols.clone());
    for (_, r) in residual.components() {
        for (_, coeff) in r.num.terms() {
            sys.push_equation(coeff)?;
        }
    }
    let (fixed_combos, free_after_match) = match solve_linear(&sys) {
        LinSolution::Unique(m) => (m, Vec::new()),
        LinSolution::Family {
            particular,
            null_basis,
            free,
        } => {
            let full = general_solution(&particular, &null_basis, &free);
            (
                full.into_iter()
                    .filter(|(s, v)| &ParamPoly::var(s.clone()) != v)
                    .collect(),
                free,
            )
        }
        LinSolution::Inconsistent { row, value } => {
            return Err(Error::InconsistentSystem {
                row,
                value: format!("{value}"),
            })
        }
    };
    // the diagonal degree ledger: deg P^(0)(x,x) = 2n - 6
    let lhs_num_times_p2 = lhs.component(0);
    let diag_degree = lhs_num_times_p2.num.degree_in(0);
    Ok(Lemma25Report {
        order_minus4_vanishes,
        order_minus5_vanishes,
        regular_at_zero,
        fixed_combos,
        free_after_match,
        diag_degree,
    })
}

/// The staged (2,5) genus-2 solve.
#[derive(Clone, Debug)]
pub struct ModelSolveResult {
    /// Every fixed coefficient (two-point and three-point) in terms of the
    /// free symbols.
    pub fixed: BTreeMap<Symbol, ParamPoly>,
    /// The free parameters actually left by the constraint system.
    pub free: Vec<Symbol>,
    /// The four parameters the claim allows: <1> and the three free
    /// one-point coefficients.
    pub claimed_free: Vec<Symbol>,
    /// Free directions beyond the claim (empty iff the claim holds).
    pub flat_directions: Vec<Symbol>,
    /// Number of independent state combinations fixed by the two-point
    /// diagonal constraint alone.
    pub stage1_combos: usize,
    /// The two-point coefficient left free by stage 1.
    pub stage1_leftover: Vec<Symbol>,
    /// Number of three-point coefficients expressed by stage 2.
    pub stage2_fixed: usize,
    /// Solved correlators with everything substituted (flat directions, if
    /// any, stay symbolic).
    pub tpf_solved: TwoPointFunction,
    pub thpf_solved: ThreePointFunction,
}

impl ModelSolveResult {
    /// The derivative of each fixed coefficient along a flat direction: the
    /// kernel vector of the constraint system. Coefficients absent from the
    /// map are fixed absolutely.
    pub fn flat_kernel(&self, direction: &Symbol) -> BTreeMap<Symbol, ParamPoly> {
        let mut out = BTreeMap::new();
        let set: std::collections::BTreeSet<Symbol> =
            std::iter::once(direction.clone()).collect();
        for (s, v) in &self.fixed {
            let by = v.collect_by(&set);
            if let Some(coeff) = by.get(&crate::param::PMono::var(direction.clone())) {
                if !coeff.is_zero() {
                    out.insert(s.clone(), coeff.clone());
                }
            }
        }
        out
    }
}

fn substitute_element(e: &GaloisElement, map: &BTreeMap<Symbol, ParamPoly>) -> GaloisElement {
    let mut out = e.clone();
    for (s, v) in map {
        out = out.substitute_param(s, v);
    }
    out
}

fn substitute_unipoly(p: &UniPoly, map: &BTreeMap<Symbol, ParamPoly>) -> UniPoly {
    let mut out = p.clone();
    for (s, v) in map {
        out = UniPoly::from_coeffs(out.coeffs().iter().map(|c| c.substitute(s, v)).collect());
    }
    out
}

fn substitute_multipoly(p: &MultiPoly, map: &BTreeMap<Symbol, ParamPoly>) -> MultiPoly {
    let mut out = p.clone();
    for (s, v) in map {
        out = out.substitute_param(s, v);
    }
    out
}

/// Applies a substitution to every stored piece of a two-point function.
pub fn substitute_tpf(tpf: &TwoPointFunction, map: &BTreeMap<Symbol, ParamPoly>) -> TwoPointFunction {
    let mut opf = tpf.opf.clone();
    opf.p_even = substitute_unipoly(&opf.p_even, map);
    opf.p_odd = substitute_unipoly(&opf.p_odd, map);
    opf.element = substitute_element(&opf.element, map);
    let mut states = tpf.states.clone();
    states.p0 = substitute_multipoly(&states.p0, map);
    states.p1 = substitute_multipoly(&states.p1, map);
    states.p2 = substitute_multipoly(&states.p2, map);
    states.p12 = substitute_multipoly(&states.p12, map);
    let mut c_poly = tpf.c_poly.clone();
    for (s, v) in map {
        c_poly = c_poly.substitute(s, v);
    }
    TwoPointFunction {
        curve: tpf.curve.clone(),
        opf,
        r: substitute_element(&tpf.r, map),
        corrections: substitute_element(&tpf.corrections, map),
        states,
        assembled: substitute_element(&tpf.assembled, map),
        c_poly,
    }
}

fn substitute_thpf(
    thpf: &ThreePointFunction,
    map: &BTreeMap<Symbol, ParamPoly>,
) -> ThreePointFunction {
    let mut states = thpf.states.clone();
    states.p0 = substitute_multipoly(&states.p0, map);
    for p in &mut states.p_single {
        *p = substitute_multipoly(p, map);
    }
    for p in &mut states.p_pair {
        *p = substitute_multipoly(p, map);
    }
    states.p_triple = substitute_multipoly(&states.p_triple, map);
    ThreePointFunction {
        curve: thpf.curve.clone(),
        tpf: substitute_tpf(&thpf.tpf, map),
        r0: substitute_element(&thpf.r0, map),
        corrections: substitute_element(&thpf.corrections, map),
        states,
        assembled: substitute_element(&thpf.assembled, map),
    }
}

/// Stage 1: the two-point diagonal constraint N0(T,T) = (3/10) T'' at
/// c = -22/5, as a linear system on the two-point state coefficients.
fn stage1_two_point(
    tpf: &TwoPointFunction,
    c_val: &Rat,
) -> Result<(BTreeMap<Symbol, ParamPoly>, Vec<Symbol>, usize), Error> {
    let eqs = n0_identity_equations(tpf, &ParamPoly::constant(rat(3, 10)))?;
    let mut sys = LinearSystem::new(tpf.states.symbols.clone());
    for e in &eqs {
        let e = e.substitute(&Symbol::c(), &ParamPoly::constant(c_val.clone()));
        if !e.is_zero() {
            sys.push_equation(&e)?;
        }
    }
    match solve_linear(&sys) {
        LinSolution::Unique(m) => {
            let combos = m.len();
            Ok((m, Vec::new(), combos))
        }
        LinSolution::Family {
            particular,
            null_basis,
            free,
        } => {
            let combos = tpf.states.symbols.len() - free.len();
            Ok((general_solution(&particular, &null_basis, &free), free, combos))
        }
        LinSolution::Inconsistent { row, value } => Err(Error::InconsistentSystem {
            row,
            value: format!("{value}"),
        }),
    }
}

/// Stage 2: the three-point diagonal constraint
/// <N0(T,T)(x2) T(x3)> = (3/10) d^2_{x2} <T(x2)T(x3)>, solved for the
/// three-point coefficients with the stage-1 leftover kept symbolic, plus
/// stage 3: the back-substitution attempt on the leftover itself.
fn stage2_three_point(
    thpf: &ThreePointFunction,
    stage1: &BTreeMap<Symbol, ParamPoly>,
    leftover: &[Symbol],
    c_val: &Rat,
) -> Result<(BTreeMap<Symbol, ParamPoly>, Vec<Symbol>), Error> {
    let _curve = &thpf.curve;
    let full3 = full_three_point(thpf)
        .div_factor(Factor::P(0), 1)
        .div_factor(Factor::P(1), 1)
        .div_factor(Factor::P(2), 1);
    let s3 = diagonal_series(&full3, 0, 1, 0)?;
    let full13 = full_two_point(&thpf.tpf, 3, 0, 2);
    let t13 = diagonal_series(&full13, 0, 1, 2)?;
    let full23 = full_two_point(&thpf.tpf, 3, 1, 2);
    // operator-product fidelity at the 1-2 diagonal
    let t3 = thpf.tpf.opf.element.remap(&[2], 3);
    let c_sym = ParamPoly::var(Symbol::c());
    let check = |ok: bool, what: &str| -> Result<(), Error> {
        if ok {
            Ok(())
        } else {
            Err(Error::Assembly(format!(
                "three-point operator-product structure: {what}"
            )))
        }
    };
    check(
        s3.coeff(-4)? == t3.scale(&c_sym.scale(&rat(1, 2))),
        "eps^-4 is not (c/2)<T(x3)>",
    )?;
    check(s3.coeff(-3)?.is_zero(), "eps^-3 does not vanish")?;
    check(
        s3.coeff(-2)? == t13.coeff(0)?.add(&full23),
        "eps^-2 is not <T1T3> + <T2T3>",
    )?;
    check(s3.coeff(-1)? == t13.coeff(1)?, "eps^-1 is not d<T1T3>")?;

    let rhs = full23.derivative(1).derivative(1).scale_rat(&rat(3, 10));
    let residual = s3.coeff(0)?.sub(&rhs);

    // substitute c and the stage-1 relations
    let mut map: BTreeMap<Symbol, ParamPoly> = stage1.clone();
    map.insert(Symbol::c(), ParamPoly::constant(c_val.clone()));
    let residual = substitute_element(&residual, &map);

    // Stage 2 proper: solve for the three-point coefficients with the
    // leftover treated as data. The coefficients live in Q[A, vac^(+-1)], so
    // the solve runs through the unit-pivot/polynomial-pivot eliminator and
    // verifies itself by back-substitution.
    let unknowns: Vec<Symbol> = thpf.states.symbols.clone();
    let mut equations = Vec::new();
    for (_, r) in residual.components() {
        for (_, coeff) in r.num.terms() {
            equations.push(coeff.clone());
        }
    }
    let sol = solve_poly_system(&PolySystem {
        unknowns: unknowns.clone(),
        equations: equations.clone(),
    })?;
    if !sol.free.is_empty() {
        return Err(Error::Solve(format!(
            "three-point constraint left {:?} undetermined",
            sol.free
        )));
    }
    let stage2: BTreeMap<Symbol, ParamPoly> = unknowns
        .into_iter()
        .map(|u| {
            let v = sol.values[&u].clone();
            (u, v)
        })
        .collect();

    // Stage 3: back-substitute and try to pin the leftover. When every
    // residual equation vanishes identically, the constraint system is flat
    // along the leftover; this is reported, never silently resolved.
    let mut remaining: Vec<ParamPoly> = equations;
    for e in &mut remaining {
        for (s, v) in &stage2 {
            if e.contains_symbol(s) {
                *e = e.substitute(s, v);
            }
        }
    }
    remaining.retain(|e| !e.is_zero());
    let flat = if remaining.is_empty() {
        leftover.to_vec()
    } else {
        let tail = solve_poly_system(&PolySystem {
            unknowns: leftover.to_vec(),
            equations: remaining,
        })?;
        tail.free
    };
    Ok((stage2, flat))
}

/// The staged (2,5) genus-2 solve on an n = 5 curve. Fixes every two- and
/// three-point state coefficient; exactly <1> and the three free one-point
/// coefficients remain.
pub fn solve_25_g2(curve: &Arc<CurveSpec>) -> Result<ModelSolveResult, Error> {
    if curve.n() != 5 {
        return Err(Error::Solve(format!(
            "the genus-2 solve needs n = 5, got n = {}",
            curve.n()
        )));
    }
    let c_val = model_constants(2, 5)?.c;
    let opf = build_one_point(curve)?;
    let tpf = build_two_point(&opf)?;
    let thpf = build_three_point(&tpf)?;

    let (stage1, leftover, stage1_combos) = stage1_two_point(&tpf, &c_val)?;
    let (stage2, flat_directions) = stage2_three_point(&thpf, &stage1, &leftover, &c_val)?;

    // compose the fixed table; flat directions stay as symbols
    let mut fixed: BTreeMap<Symbol, ParamPoly> = stage2.clone();
    for (s, v) in &stage1 {
        if &ParamPoly::var(s.clone()) != v {
            fixed.insert(s.clone(), v.clone());
        }
    }

    let mut map = fixed.clone();
    map.insert(Symbol::c(), ParamPoly::constant(c_val));
    let tpf_solved = substitute_tpf(&tpf, &map);
    let thpf_solved = substitute_thpf(&thpf, &map);

    let claimed_free: Vec<Symbol> = std::iter::once(Symbol::vac())
        .chain(opf.free.iter().cloned())
        .collect();
    let mut free = claimed_free.clone();
    free.extend(flat_directions.iter().cloned());
    Ok(ModelSolveResult {
        fixed,
        free,
        claimed_free,
        flat_directions,
        stage1_combos,
        stage1_leftover: leftover,
        stage2_fixed: stage2.len(),
        tpf_solved,
        thpf_solved,
    })
}

/// The closed loop: with everything substituted, N0(T,T) = (3/10) T'' holds
/// identically.
pub fn closed_loop_residual(tpf_solved: &TwoPointFunction) -> Result<GaloisElement, Error> {
    let n0 = n0_of_tt(tpf_solved)?;
    let d2t = tpf_solved
        .opf
        .element
        .remap(&[1], 2)
        .derivative(1)
        .derivative(1);
    Ok(n0.sub(&d2t.scale_rat(&rat(3, 10))))
}
