//! The connected Virasoro two-point function.
//!
//! `assembled` is <T(x1)T(x2)>_c p1 p2 <1>: the displayed singular skeleton
//! R(x1, x2), minus its non-admissible orders at infinity (the projection
//! corrections, with the symmetry condition asserted), plus the state ansatz
//! P^(0) + y1 P^(1) + y2 P^(2) + y1 y2 P^(1,2).
//!
//! The regular bracket <[T(x1)T(x2)]_reg> p1 p2 = assembled
//! - (c/32) f12^2 <1> - (1/16) f12 (P1 + P2) feeds the three-point assembly;
//! the normal-ordered product <N0(T,T)> comes from the operator-product
//! expansion of the full (not connected) two-point function.

use crate::curve::CurveSpec;
use crate::diag::{diagonal_series, DiagSeries, DEFAULT_DIAG_ORDER};
use crate::error::Error;
use crate::galois::{f_pair, Factor, GaloisElement, RationalExpr};
use crate::multipoly::MultiPoly;
use crate::onepoint::{p_element, pi_split, OnePointFunction};
use crate::param::{ParamPoly, Symbol};
use crate::project::project_above;
use crate::rat::{rat, Rat};
use crate::unipoly::UniPoly;
use std::collections::BTreeMap;
use std::sync::Arc;

fn c_vac(scale: Rat) -> ParamPoly {
    ParamPoly::var(Symbol::c())
        .mul(&ParamPoly::var(Symbol::vac()))
        .scale(&scale)
}

/// The three diagonal evaluations of an even polynomial q (stored in t = x^2)
/// at s = sqrt(x_i x_j): q(s), q'(s)/s, q''(s); all polynomials in x_i x_j.
struct DiagEval {
    value: MultiPoly,
    dlog: MultiPoly,
    d2: MultiPoly,
}

fn diag_eval(q: &UniPoly, nvars: usize, i: usize, j: usize) -> DiagEval {
    let t = MultiPoly::var(nvars, i).mul(&MultiPoly::var(nvars, j));
    let q1 = q.derivative();
    let q2 = q1.derivative();
    let at = |p: &UniPoly| crate::curve::sqrt_diag_substitute(p, nvars, i, j);
    let value = at(q);
    // d/dx q(x^2) = 2x q'(x^2)  =>  q_even'(s)/s = 2 q'(t)
    let dlog = at(&q1).scale_rat(&rat(2, 1));
    // d2/dx2 q(x^2) = 2 q'(x^2) + 4 x^2 q''(x^2)
    let d2 = at(&q1)
        .scale_rat(&rat(2, 1))
        .add(&at(&q2).mul(&t).scale_rat(&rat(4, 1)));
    DiagEval { value, dlog, d2 }
}

/// value + half_coeff * (x_i + x_j) * odd_value
fn bracket(
    even: &MultiPoly,
    odd: &MultiPoly,
    half_coeff: Rat,
    nvars: usize,
    i: usize,
    j: usize,
) -> MultiPoly {
    let sum = MultiPoly::var(nvars, i).add(&MultiPoly::var(nvars, j));
    even.add(&sum.mul(odd).scale_rat(&half_coeff))
}

/// The displayed singular part R(x_i, x_j) of the connected two-point
/// function, assembled term by term on an nvars-point context.
pub fn build_r(opf: &OnePointFunction, nvars: usize, i: usize, j: usize) -> GaloisElement {
    let curve = &opf.curve;
    let (dd, _) = Factor::diff(i, j);
    let yy: u8 = (1 << i) | (1 << j);
    let split = curve.even_odd();
    let pe = diag_eval(&split.even_part, nvars, i, j);
    let po = diag_eval(&split.odd_part, nvars, i, j);
    let pi = pi_split(opf);
    let pie = diag_eval(&pi.pi_even, nvars, i, j);
    let pio = diag_eval(&pi.pi_odd, nvars, i, j);
    let p_i = curve.p_multi(nvars, i);
    let p_j = curve.p_multi(nvars, j);
    let pp_i = curve.p_prime_multi(nvars, i);
    let pp_j = curve.p_prime_multi(nvars, j);

    let mut r = GaloisElement::zero(curve.clone(), nvars);
    let mut add = |s: u8, num: MultiPoly, pole: u32| {
        let expr = RationalExpr::new(num, BTreeMap::from([(dd, pole)]), curve);
        let sum = r.component(s).add(&expr, curve);
        r.set(s, sum);
    };

    // (c/4)<1> p_i p_j / (x_i - x_j)^4
    add(0, p_i.mul(&p_j).scale(&c_vac(rat(1, 4))), 4);
    // (c/4)<1> y_i y_j [pe(s) + (1/2)(x_i+x_j) po(s)] / (x_i - x_j)^4
    add(
        yy,
        bracket(&pe.value, &po.value, rat(1, 2), nvars, i, j).scale(&c_vac(rat(1, 4))),
        4,
    );
    // (c/32)<1> p_i' p_j' / (x_i - x_j)^2
    add(0, pp_i.mul(&pp_j).scale(&c_vac(rat(1, 32))), 2);
    // (c/32)<1> y_i y_j [pe'(s)/s + (3/2)(x_i+x_j) po'(s)/s] / (x_i-x_j)^2
    add(
        yy,
        bracket(&pe.dlog, &po.dlog, rat(3, 2), nvars, i, j).scale(&c_vac(rat(1, 32))),
        2,
    );
    // (1/8) (p_i P_j + p_j P_i) / (x_i - x_j)^2
    let cap_pi = p_element(opf, nvars, i);
    let cap_pj = p_element(opf, nvars, j);
    let l5 = cap_pj
        .mul_poly(&p_i)
        .add(&cap_pi.mul_poly(&p_j))
        .scale_rat(&rat(1, 8))
        .div_factor(dd, 2);
    let mut r = {
        let tmp = r;
        tmp.add(&l5)
    };
    // (1/8)(y_i P_j^(G-odd) + y_j P_i^(G-odd)) [pe(s) + (1/2)(x_i+x_j) po(s)] / dd^2
    if !opf.p_odd.is_zero() {
        let godd_i = GaloisElement::from_component(
            curve.clone(),
            nvars,
            1 << i,
            RationalExpr::from_poly(opf.p_odd.to_multipoly(nvars, j)),
        );
        let godd_j = GaloisElement::from_component(
            curve.clone(),
            nvars,
            1 << j,
            RationalExpr::from_poly(opf.p_odd.to_multipoly(nvars, i)),
        );
        let l6 = godd_i
            .add(&godd_j)
            .mul_poly(&bracket(&pe.value, &po.value, rat(1, 2), nvars, i, j))
            .scale_rat(&rat(1, 8))
            .div_factor(dd, 2);
        r = r.add(&l6);
    }
    // (c/32)<1> y_i y_j [pe''(s) + (1/2)(x_i+x_j) po''(s)] / dd^2
    let l7 = GaloisElement::from_component(
        curve.clone(),
        nvars,
        yy,
        RationalExpr::new(
            bracket(&pe.d2, &po.d2, rat(1, 2), nvars, i, j).scale(&c_vac(rat(1, 32))),
            BTreeMap::from([(dd, 2)]),
            curve,
        ),
    );
    // -(c/32) y_i y_j [Pi_even(s) + (1/2)(x_i+x_j) Pi_odd(s)] / dd^2
    let l8 = GaloisElement::from_component(
        curve.clone(),
        nvars,
        yy,
        RationalExpr::new(
            bracket(&pie.value, &pio.value, rat(1, 2), nvars, i, j)
                .scale(&ParamPoly::var(Symbol::c()).scale(&rat(-1, 32))),
            BTreeMap::from([(dd, 2)]),
            curve,
        ),
    );
    r.add(&l7).add(&l8)
}

/// Subtraction of the non-admissible orders at infinity from R, per-variable,
/// asserting the symmetry condition [[R]_1]_2 = [[R]_2]_1 first.
pub struct CorrectedR {
    pub corrected: GaloisElement,
    pub corrections: GaloisElement,
}

pub fn subtract_corrections(
    r: &GaloisElement,
    vars: (usize, usize),
) -> Result<CorrectedR, Error> {
    let curve = r.curve().clone();
    let n = curve.n();
    if n % 2 == 0 {
        return Err(Error::RequiresOddDegree(n));
    }
    let k = n as i64 - 3;
    let (v1, v2) = vars;
    let bad1 = project_above(r, v1, k)?;
    let bad2 = project_above(r, v2, k)?;
    let bad12 = project_above(&bad1, v2, k)?;
    let bad21 = project_above(&bad2, v1, k)?;
    let diff = bad12.sub(&bad21);
    if !diff.is_zero() {
        return Err(Error::SymmetryCondition(diff.render()));
    }
    let rem = r.sub(&bad1);
    let bad2_of_rem = project_above(&rem, v2, k)?;
    let corrected = rem.sub(&bad2_of_rem);
    let corrections = bad1.add(&bad2_of_rem);
    Ok(CorrectedR {
        corrected,
        corrections,
    })
}

/// The closed-form odd-n correction list, spelled out term by term; the
/// generic projection pipeline must reproduce it exactly.
pub fn explicit_correction_list(opf: &OnePointFunction) -> Result<GaloisElement, Error> {
    let curve = &opf.curve;
    let n = curve.n();
    if n % 2 == 0 {
        return Err(Error::RequiresOddDegree(n));
    }
    let nvars = 2;
    let a0 = ParamPoly::constant(curve.a0_rat());
    let a1 = curve.a(1);
    let a2 = curve.a(2);
    // (1/8) a0 (x1^(n-2) P2 + x2^(n-2) P1)
    let cap_p1 = p_element(opf, nvars, 0);
    let cap_p2 = p_element(opf, nvars, 1);
    let xpow = |v: usize, e: i64| -> MultiPoly {
        assert!(e >= 0, "negative power in correction list");
        MultiPoly::var_pow(nvars, v, e as u16)
    };
    let mut list = cap_p2
        .mul_poly(&xpow(0, n as i64 - 2))
        .add(&cap_p1.mul_poly(&xpow(1, n as i64 - 2)))
        .scale(&a0.scale(&rat(1, 8)));
    // (c/64) <1> (n^2 - 1) a0^2 x1^(n-2) x2^(n-2)
    let nn = ((n * n) as i64) - 1;
    list = list.add(&GaloisElement::from_poly(
        curve.clone(),
        xpow(0, n as i64 - 2)
            .mul(&xpow(1, n as i64 - 2))
            .scale(&c_vac(rat(nn, 64)).mul(&a0.pow(2))),
    ));
    if !opf.p_odd.is_zero() {
        // the six y-weighted families, each plus its mirror
        let m = n as i64;
        let families: [(ParamPoly, Rat, i64, i64); 4] = [
            (a1.clone(), rat(1, 8), (m - 5) / 2, (m - 1) / 2),
            (a0.clone(), rat(1, 16), (m - 3) / 2, (m - 1) / 2),
            (a0.clone(), rat(3, 16), (m - 5) / 2, (m + 1) / 2),
            (a2.clone(), rat(1, 16), (m - 5) / 2, (m - 3) / 2),
        ];
        for (coeff, scale, e1, e2) in families {
            let godd_1 = GaloisElement::from_component(
                curve.clone(),
                nvars,
                0b01,
                RationalExpr::from_poly(opf.p_odd.to_multipoly(nvars, 1)),
            );
            let godd_2 = GaloisElement::from_component(
                curve.clone(),
                nvars,
                0b10,
                RationalExpr::from_poly(opf.p_odd.to_multipoly(nvars, 0)),
            );
            let term = godd_1
                .mul_poly(&xpow(0, e1).mul(&xpow(1, e2)))
                .add(&godd_2.mul_poly(&xpow(0, e2).mul(&xpow(1, e1))))
                .scale(&coeff.scale(&scale));
            list = list.add(&term);
        }
    }
    Ok(list)
}

/// Report of correction-list fidelity: the generic projection pipeline must
/// reproduce the explicit list exactly.
pub struct CorrectionListReport {
    pub residual: GaloisElement,
    pub passed: bool,
}

pub fn verify_correction_list(opf: &OnePointFunction) -> Result<CorrectionListReport, Error> {
    let r = build_r(opf, 2, 0, 1);
    let corrected = subtract_corrections(&r, (0, 1))?;
    let list = explicit_correction_list(opf)?;
    let residual = corrected.corrections.sub(&list);
    Ok(CorrectionListReport {
        passed: residual.is_zero(),
        residual,
    })
}

/// State ansatz P^(0), P^(1), P^(2), P^(1,2) with symbolic coefficients,
/// the admissible degree bounds, and the exchange symmetries.
#[derive(Clone, Debug)]
pub struct StateAnsatz {
    pub p0: MultiPoly,
    pub p1: MultiPoly,
    pub p2: MultiPoly,
    pub p12: MultiPoly,
    pub symbols: Vec<Symbol>,
}

impl StateAnsatz {
    pub fn element(&self, curve: &Arc<CurveSpec>) -> GaloisElement {
        let mut e = GaloisElement::from_poly(curve.clone(), self.p0.clone());
        let mut setc = |s: u8, p: &MultiPoly| {
            if !p.is_zero() {
                e.set(s, RationalExpr::from_poly(p.clone()));
            }
        };
        setc(0b01, &self.p1);
        setc(0b10, &self.p2);
        setc(0b11, &self.p12);
        e
    }
}

/// Degree of the y-weighted state polynomials in their own variable.
fn odd_state_degree(n: usize) -> i64 {
    (n as i64 - 1) / 2 - 3
}

pub fn attach_state_ansatz(curve: &Arc<CurveSpec>) -> Result<StateAnsatz, Error> {
    let n = curve.n();
    if n % 2 == 0 {
        return Err(Error::RequiresOddDegree(n));
    }
    let nvars = 2;
    let d0 = n as i64 - 3;
    let d1 = odd_state_degree(n);
    let mut symbols = Vec::new();

    // symmetric P^(0): B_{i,j} (x1^i x2^j + x1^j x2^i), i >= j
    let mut p0 = MultiPoly::zero(nvars);
    for i in 0..=d0 as usize {
        for j in 0..=i {
            let sym = Symbol::b2(i, j);
            symbols.push(sym.clone());
            let mut mono = MultiPoly::var_pow(nvars, 0, i as u16)
                .mul(&MultiPoly::var_pow(nvars, 1, j as u16));
            if i != j {
                mono = mono.add(
                    &MultiPoly::var_pow(nvars, 0, j as u16)
                        .mul(&MultiPoly::var_pow(nvars, 1, i as u16)),
                );
            }
            p0 = p0.add(&mono.scale(&ParamPoly::var(sym)));
        }
    }
    // P^(1)(x1, x2): deg d1 in x1, d0 in x2; P^(2) is its transpose with the
    // same symbols, so y1 P^(1) + y2 P^(2) is exchange symmetric.
    let mut p1 = MultiPoly::zero(nvars);
    if d1 >= 0 {
        for a in 0..=d1 as usize {
            for b in 0..=d0 as usize {
                let sym = Symbol::new(&format!("C{a}_{b}"));
                symbols.push(sym.clone());
                p1 = p1.add(
                    &MultiPoly::var_pow(nvars, 0, a as u16)
                        .mul(&MultiPoly::var_pow(nvars, 1, b as u16))
                        .scale(&ParamPoly::var(sym)),
                );
            }
        }
    }
    let p2 = p1.remap(&[1, 0], nvars);
    // symmetric P^(1,2), deg d1 in each
    let mut p12 = MultiPoly::zero(nvars);
    if d1 >= 0 {
        for i in 0..=d1 as usize {
            for j in 0..=i {
                let sym = Symbol::new(&format!("D{i}_{j}"));
                symbols.push(sym.clone());
                let mut mono = MultiPoly::var_pow(nvars, 0, i as u16)
                    .mul(&MultiPoly::var_pow(nvars, 1, j as u16));
                if i != j {
                    mono = mono.add(
                        &MultiPoly::var_pow(nvars, 0, j as u16)
                            .mul(&MultiPoly::var_pow(nvars, 1, i as u16)),
                    );
                }
                p12 = p12.add(&mono.scale(&ParamPoly::var(sym)));
            }
        }
    }
    Ok(StateAnsatz {
        p0,
        p1,
        p2,
        p12,
        symbols,
    })
}

/// The assembled connected two-point function (times p1 p2 <1>) and its
/// ingredients.
#[derive(Clone, Debug)]
pub struct TwoPointFunction {
    pub curve: Arc<CurveSpec>,
    pub opf: OnePointFunction,
    pub r: GaloisElement,
    pub corrections: GaloisElement,
    pub states: StateAnsatz,
    pub assembled: GaloisElement,
    /// The central charge as used by this function: the symbol c until a
    /// model substitution specializes it.
    pub c_poly: ParamPoly,
}

pub fn build_two_point(opf: &OnePointFunction) -> Result<TwoPointFunction, Error> {
    let curve = opf.curve.clone();
    let r = build_r(opf, 2, 0, 1);
    let corrected = subtract_corrections(&r, (0, 1))?;
    let states = attach_state_ansatz(&curve)?;
    let assembled = corrected.corrected.add(&states.element(&curve));
    Ok(TwoPointFunction {
        curve,
        opf: opf.clone(),
        r,
        corrections: corrected.corrections,
        states,
        assembled,
        c_poly: ParamPoly::var(Symbol::c()),
    })
}

/// (c/32) f12^2 <1> + (1/16) f12 (P1 + P2): the f-structured singular part
/// that defines the regular bracket. The central charge comes from the
/// two-point function so model substitutions stay consistent.
pub fn f_structured_singular(
    tpf: &TwoPointFunction,
    nvars: usize,
    i: usize,
    j: usize,
) -> GaloisElement {
    let opf = &tpf.opf;
    let f = f_pair(&opf.curve, nvars, i, j);
    let p_sum = p_element(opf, nvars, i).add(&p_element(opf, nvars, j));
    let c_over_32 = tpf
        .c_poly
        .mul(&ParamPoly::var(Symbol::vac()))
        .scale(&rat(1, 32));
    f.mul(&f)
        .scale(&c_over_32)
        .add(&f.mul(&p_sum).scale_rat(&rat(1, 16)))
}

/// <[T(x_i)T(x_j)]_reg> p_i p_j: the regular bracket of the operator product,
/// the O(1)|_{x_i=x_j} part of the connected two-point function.
pub fn regular_bracket(tpf: &TwoPointFunction, nvars: usize, i: usize, j: usize) -> GaloisElement {
    let assembled = if (nvars, i, j) == (2, 0, 1) {
        tpf.assembled.clone()
    } else {
        let mut map = vec![usize::MAX; 2];
        map[0] = i;
        map[1] = j;
        tpf.assembled.remap(&map, nvars)
    };
    assembled.sub(&f_structured_singular(tpf, nvars, i, j))
}

/// The full two-point function <T(x_i)T(x_j)>: connected part plus
/// <1>^-1 <T(x_i)><T(x_j)>.
pub fn full_two_point(tpf: &TwoPointFunction, nvars: usize, i: usize, j: usize) -> GaloisElement {
    let t_i = tpf.opf.element.remap(&[i], nvars);
    let t_j = tpf.opf.element.remap(&[j], nvars);
    let vac_inv = ParamPoly::var_pow(Symbol::vac(), -1);
    let connected = regular_bracket(tpf, nvars, i, j)
        .add(&f_structured_singular(tpf, nvars, i, j))
        .div_factor(Factor::P(i), 1)
        .div_factor(Factor::P(j), 1);
    connected.add(&t_i.mul(&t_j).scale(&vac_inv))
}

/// Diagonal series of the assembled function divided by p1 p2 (that is, of
/// <1><TT>_c), at x_i -> x_j.
pub fn connected_diag(tpf: &TwoPointFunction, order: i64) -> Result<DiagSeries, Error> {
    let e = tpf
        .assembled
        .div_factor(Factor::P(0), 1)
        .div_factor(Factor::P(1), 1);
    diagonal_series(&e, 0, 1, order)
}

/// <N0(T,T)(x)>: the eps^0 Laurent coefficient of the full two-point
/// function at the diagonal. The subtraction of the displayed singular
/// structure only removes negative orders, so the coefficient extraction is
/// exact; the singular orders themselves are verified against the operator
/// product expansion first (N_-4 = (c/2) 1, N_-3 = 0, N_-2 = 2T, N_-1 = T').
pub fn n0_of_tt(tpf: &TwoPointFunction) -> Result<GaloisElement, Error> {
    let full = full_two_point(tpf, 2, 0, 1);
    let s = diagonal_series(&full, 0, 1, 0)?;
    let lead = s.coeff(-4)?;
    let expect = GaloisElement::scalar(
        tpf.curve.clone(),
        2,
        tpf.c_poly
            .mul(&ParamPoly::var(Symbol::vac()))
            .scale(&rat(1, 2)),
    );
    if lead != expect {
        return Err(Error::Assembly(format!(
            "eps^-4 of the full two-point function is not (c/2)<1>: {}",
            lead.render()
        )));
    }
    if !s.coeff(-3)?.is_zero() {
        return Err(Error::Assembly("eps^-3 does not vanish".into()));
    }
    // the eps^-2 (T(x1) + T(x2)) structure expands to 2T eps^-2 + T' eps^-1
    let t1 = tpf.opf.element.remap(&[0], 2);
    let t_series = diagonal_series(&t1, 0, 1, 2)?;
    let t2 = tpf.opf.element.remap(&[1], 2);
    if s.coeff(-2)? != t_series.coeff(0)?.add(&t2) {
        return Err(Error::Assembly("eps^-2 does not match <T1> + <T2>".into()));
    }
    if s.coeff(-1)? != t_series.coeff(1)? {
        return Err(Error::Assembly("eps^-1 does not match dT".into()));
    }
    s.coeff(0)
}

/// Checks that the regular bracket is regular at the diagonal, and returns
/// the pole-structure ledger of the assembled function.
#[derive(Clone, Debug)]
pub struct PoleStructureReport {
    pub lead_is_c_half_vac: bool,
    pub eps3_vanishes: bool,
    pub eps2_matches: bool,
    pub eps1_matches: bool,
    pub regular_bracket_regular: bool,
    pub no_p_poles: bool,
    pub exchange_symmetric: bool,
    pub growth_ok: bool,
}

impl PoleStructureReport {
    pub fn all_passed(&self) -> bool {
        self.lead_is_c_half_vac
            && self.eps3_vanishes
            && self.eps2_matches
            && self.eps1_matches
            && self.regular_bracket_regular
            && self.no_p_poles
            && self.exchange_symmetric
            && self.growth_ok
    }
}

pub fn pole_structure_report(tpf: &TwoPointFunction) -> Result<PoleStructureReport, Error> {
    pole_structure_report_with(tpf, DEFAULT_DIAG_ORDER)
}

/// Same report with an explicit diagonal expansion order (the command-line
/// `--max-order` override).
pub fn pole_structure_report_with(
    tpf: &TwoPointFunction,
    order: i64,
) -> Result<PoleStructureReport, Error> {
    let curve = &tpf.curve;
    let s = connected_diag(tpf, order.max(0))?;
    let lead = s.coeff(-4)?;
    let lead_is_c_half_vac = lead
        == GaloisElement::scalar(
            curve.clone(),
            2,
            tpf.c_poly
                .mul(&ParamPoly::var(Symbol::vac()))
                .scale(&rat(1, 2)),
        );
    let eps3_vanishes = s.coeff(-3)?.is_zero();
    // eps^-2 must be <T(x1)> + <T(x2)> evaluated on the diagonal: 2 <T(x2)>
    let t2 = tpf.opf.element.remap(&[1], 2);
    let eps2_matches = s.coeff(-2)? == t2.scale_rat(&rat(2, 1));
    let eps1_matches = s.coeff(-1)? == t2.derivative(1);
    let reg = regular_bracket(tpf, 2, 0, 1)
        .div_factor(Factor::P(0), 1)
        .div_factor(Factor::P(1), 1);
    let regular_bracket_regular = diagonal_series(&reg, 0, 1, 0)?.principal_is_zero();
    let no_p_poles = tpf
        .assembled
        .components()
        .all(|(_, r)| r.den.keys().all(|f| !matches!(f, Factor::P(_))));
    let exchange_symmetric = tpf.assembled.remap(&[1, 0], 2) == tpf.assembled;
    let k = curve.n() as i64 - 3;
    let growth_ok = project_above(&tpf.assembled, 0, k)?.is_zero()
        && project_above(&tpf.assembled, 1, k)?.is_zero();
    Ok(PoleStructureReport {
        lead_is_c_half_vac,
        eps3_vanishes,
        eps2_matches,
        eps1_matches,
        regular_bracket_regular,
        no_p_poles,
        exchange_symmetric,
        growth_ok,
    })
}

/// The two diagonal-expansion identities for the parity parts of p, checked
/// as exact divisibility by (x1 - x2)^4.
pub fn diagonal_lemma_residuals(curve: &Arc<CurveSpec>) -> (bool, bool) {
    let nvars = 2;
    let split = curve.even_odd();
    let pe = diag_eval(&split.even_part, nvars, 0, 1);
    let po = diag_eval(&split.odd_part, nvars, 0, 1);
    let x1 = MultiPoly::var(nvars, 0);
    let x2 = MultiPoly::var(nvars, 1);
    let diff = x1.sub(&x2);
    let diff2 = diff.pow(2);
    let even_univ = UniPoly::from_parity_split(&split.even_part, &UniPoly::zero());
    let odd_univ = UniPoly::from_parity_split(&split.odd_part, &UniPoly::zero());
    // even: pe(x1) + pe(x2) - 2 pe(s) - (x1-x2)^2 (1/4)(pe'(s)/s + pe''(s))
    let lhs_e = even_univ
        .to_multipoly(nvars, 0)
        .add(&even_univ.to_multipoly(nvars, 1));
    let rhs_e = pe.value.scale_rat(&rat(2, 1)).add(
        &diff2
            .mul(&pe.dlog.add(&pe.d2))
            .scale_rat(&rat(1, 4)),
    );
    let even_ok = lhs_e
        .sub(&rhs_e)
        .exact_div(&diff.pow(4), 0)
        .is_some();
    // odd: x1 po(x1) + x2 po(x2)
    //      - (x1+x2){po(s) + (x1-x2)^2 (1/8)(3 po'(s)/s + po''(s))}
    let lhs_o = odd_univ
        .to_multipoly(nvars, 0)
        .mul(&x1)
        .add(&odd_univ.to_multipoly(nvars, 1).mul(&x2));
    let rhs_o = x1.add(&x2).mul(
        &po.value.add(
            &diff2
                .mul(&po.dlog.scale_rat(&rat(3, 1)).add(&po.d2))
                .scale_rat(&rat(1, 8)),
        ),
    );
    let odd_ok = lhs_o
        .sub(&rhs_o)
        .exact_div(&diff.pow(4), 0)
        .is_some();
    (even_ok, odd_ok)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::{sample_curve_g2, seeded_curve};
    use crate::onepoint::{build_one_point, rat_curve};
    use crate::rat::rati;

    fn opf_for(curve: &Arc<CurveSpec>) -> OnePointFunction {
        build_one_point(curve).unwrap()
    }

    #[test]
    fn r_is_exchange_symmetric() {
        let curve = Arc::new(sample_curve_g2());
        let opf = opf_for(&curve);
        let r = build_r(&opf, 2, 0, 1);
        assert_eq!(r.remap(&[1, 0], 2), r);
    }

    #[test]
    fn r_leading_diagonal_is_c_half() {
        // eps^-4 of R/(p1 p2) is (c/2)<1>; eps^-3 vanishes
        for curve in [rat_curve(3, &[4, 0, -4, 1]), Arc::new(sample_curve_g2())] {
            let opf = opf_for(&curve);
            let r = build_r(&opf, 2, 0, 1)
                .div_factor(Factor::P(0), 1)
                .div_factor(Factor::P(1), 1);
            let s = diagonal_series(&r, 0, 1, 0).unwrap();
            assert_eq!(
                s.coeff(-4).unwrap(),
                GaloisElement::scalar(curve.clone(), 2, c_vac(rat(1, 2)))
            );
            assert!(s.coeff(-3).unwrap().is_zero());
            // eps^-2 is <T(x1)> + <T(x2)> on the diagonal = 2 <T(x2)>,
            // and eps^-1 is its derivative
            let t2 = opf.element.remap(&[1], 2);
            assert_eq!(s.coeff(-2).unwrap(), t2.scale_rat(&rati(2)));
            assert_eq!(s.coeff(-1).unwrap(), t2.derivative(1));
        }
    }

    #[test]
    fn symmetry_condition_and_growth() {
        let curve = Arc::new(sample_curve_g2());
        let opf = opf_for(&curve);
        let r = build_r(&opf, 2, 0, 1);
        let corrected = subtract_corrections(&r, (0, 1)).unwrap();
        let k = 2; // n - 3
        assert!(project_above(&corrected.corrected, 0, k).unwrap().is_zero());
        assert!(project_above(&corrected.corrected, 1, k).unwrap().is_zero());
    }

    #[test]
    fn correction_list_matches_generic_projections() {
        // x^5 - x and two seeded quintics (seeds 11, 23)
        for curve in [
            Arc::new(sample_curve_g2()),
            Arc::new(seeded_curve(5, 11)),
            Arc::new(seeded_curve(5, 23)),
        ] {
            let opf = opf_for(&curve);
            let report = verify_correction_list(&opf).unwrap();
            assert!(
                report.passed,
                "correction-list residual: {}",
                report.residual.render()
            );
        }
    }

    #[test]
    fn correction_list_degenerates_at_n3() {
        let curve = rat_curve(3, &[4, 0, -4, 1]);
        let opf = opf_for(&curve);
        let report = verify_correction_list(&opf).unwrap();
        assert!(report.passed);
    }

    #[test]
    fn correction_list_with_live_y_families_n7() {
        // at n = 7 the Galois-odd part is nonzero, so the y-weighted
        // correction families actually fire
        let curve = rat_curve(7, &[1, 0, 0, 0, 0, 0, -1, 0]);
        let opf = opf_for(&curve);
        assert!(!opf.p_odd.is_zero());
        let report = verify_correction_list(&opf).unwrap();
        assert!(
            report.passed,
            "n = 7 residual: {}",
            report.residual.render()
        );
        // the y1 y2 projection pieces cancel pairwise: the combined
        // corrections carry no y1 y2 component
        let r = build_r(&opf, 2, 0, 1);
        let corrected = subtract_corrections(&r, (0, 1)).unwrap();
        assert!(corrected.corrections.component(0b11).is_zero());
    }

    #[test]
    fn state_ansatz_shape() {
        let curve = Arc::new(sample_curve_g2());
        let states = attach_state_ansatz(&curve).unwrap();
        // n = 5: only P^(0), with the 6 symmetric-basis coefficients
        assert!(states.p1.is_zero());
        assert!(states.p12.is_zero());
        assert_eq!(states.symbols.len(), 6);
        // symmetry by construction
        assert_eq!(states.p0.remap(&[1, 0], 2), states.p0);

        // n = 7: P^(1,2) has degree 0 in each variable (one coefficient)
        let curve7 = rat_curve(7, &[1, 0, 0, 0, 0, 0, -1, 0]);
        let states7 = attach_state_ansatz(&curve7).unwrap();
        assert_eq!(states7.p12.degree_in(0), Some(0));
        assert_eq!(states7.p12.degree_in(1), Some(0));
        assert_eq!(states7.p1.degree_in(0), Some(0));
        assert_eq!(states7.p1.degree_in(1), Some(4));
    }

    #[test]
    fn assembled_pole_structure_n3() {
        let curve = rat_curve(3, &[4, 0, -4, 1]);
        let opf = opf_for(&curve);
        let tpf = build_two_point(&opf).unwrap();
        let report = pole_structure_report(&tpf).unwrap();
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn diagonal_lemma_on_samples() {
        for curve in [
            Arc::new(sample_curve_g2()),
            Arc::new(seeded_curve(5, 11)),
            rat_curve(3, &[4, 0, -4, 1]),
            rat_curve(7, &[1, 0, 0, 0, 0, 0, -1, 0]),
        ] {
            let (e, o) = diagonal_lemma_residuals(&curve);
            assert!(e && o);
        }
    }
}
