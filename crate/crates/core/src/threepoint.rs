//! The connected Virasoro three-point function.
//!
//! `assembled` is <T(x1)T(x2)T(x3)>_c p1 p2 p3: the rational skeleton R^(0)
//! built from pair factors f_ij and the two-point regular brackets, minus the
//! per-variable projection cascade (with its symmetry requirements asserted),
//! plus the state ansatz. Inverse powers of <1> appear as vac^-1 monomials
//! in the connected normalization.

use crate::curve::CurveSpec;
use crate::diag::diagonal_series;
use crate::error::Error;
use crate::galois::{f_pair, Factor, GaloisElement, RationalExpr};
use crate::multipoly::MultiPoly;
use crate::onepoint::p_element;
use crate::param::{ParamPoly, Symbol};
use crate::project::project_above;
use crate::rat::rat;
use crate::twopoint::{regular_bracket, TwoPointFunction};
use std::sync::Arc;

/// R^(0)(x1, x2, x3): the displayed three-point skeleton.
pub fn build_r0_3(tpf: &TwoPointFunction) -> GaloisElement {
    let curve = &tpf.curve;
    let opf = &tpf.opf;
    let nvars = 3;
    let vac_inv = ParamPoly::var_pow(Symbol::vac(), -1);
    let f12 = f_pair(curve, nvars, 0, 1);
    let f13 = f_pair(curve, nvars, 0, 2);
    let f23 = f_pair(curve, nvars, 1, 2);
    let p1 = p_element(opf, nvars, 0);
    let p2 = p_element(opf, nvars, 1);
    let p3 = p_element(opf, nvars, 2);
    let reg12 = regular_bracket(tpf, nvars, 0, 1);
    let reg13 = regular_bracket(tpf, nvars, 0, 2);
    let reg23 = regular_bracket(tpf, nvars, 1, 2);

    let c64 = ParamPoly::var(Symbol::c()).scale(&rat(1, 64));
    let mut r0 = f12.mul(&f13).mul(&f23).scale(&c64);
    let pair_line = |fa: &GaloisElement, fb: &GaloisElement, ps: &GaloisElement| {
        fa.mul(fb)
            .mul(ps)
            .scale(&vac_inv.scale(&rat(1, 64)))
    };
    r0 = r0.add(&pair_line(&f12, &f13, &p2.add(&p3)));
    r0 = r0.add(&pair_line(&f12, &f23, &p1.add(&p3)));
    r0 = r0.add(&pair_line(&f13, &f23, &p1.add(&p2)));
    let reg_line = |f: &GaloisElement, ra: &GaloisElement, rb: &GaloisElement| {
        f.mul(&ra.add(rb)).scale(&vac_inv.scale(&rat(1, 4)))
    };
    r0 = r0.add(&reg_line(&f12, &reg13, &reg23));
    r0 = r0.add(&reg_line(&f13, &reg12, &reg23));
    r0 = r0.add(&reg_line(&f23, &reg12, &reg13));
    r0
}

/// The per-variable projection cascade R0 - R0_1 - [R0 - R0_1]_2 - ... with
/// the projection-symmetry requirements (R_{1,3} = R_{3,1} and the cyclic
/// triple equality) asserted before use.
pub struct CascadedR0 {
    pub corrected: GaloisElement,
    pub corrections: GaloisElement,
}

pub fn correction_cascade(r0: &GaloisElement) -> Result<CascadedR0, Error> {
    let curve = r0.curve().clone();
    let n = curve.n();
    if n % 2 == 0 {
        return Err(Error::RequiresOddDegree(n));
    }
    let k = n as i64 - 3;
    let q = |e: &GaloisElement, var: usize| project_above(e, var, k);

    // symmetry of the double projections
    let r13 = q(&q(r0, 0)?, 2)?;
    let r31 = q(&q(r0, 2)?, 0)?;
    if r13 != r31 {
        return Err(Error::SymmetryCondition(
            "R0_{1,3} != R0_{3,1}".into(),
        ));
    }
    // cyclic equality of the triple projections
    let r123 = q(&q(&q(r0, 0)?, 1)?, 2)?;
    let r231 = q(&q(&q(r0, 1)?, 2)?, 0)?;
    let r312 = q(&q(&q(r0, 2)?, 0)?, 1)?;
    if r123 != r231 || r231 != r312 {
        return Err(Error::SymmetryCondition(
            "R0_{1,2,3} is not cyclic invariant".into(),
        ));
    }

    let b1 = q(r0, 0)?;
    let rem1 = r0.sub(&b1);
    let b2 = q(&rem1, 1)?;
    let rem2 = rem1.sub(&b2);
    let b3 = q(&rem2, 2)?;
    let corrected = rem2.sub(&b3);
    let corrections = b1.add(&b2).add(&b3);
    Ok(CascadedR0 {
        corrected,
        corrections,
    })
}

/// Three-point state ansatz with the admissible degree bounds and the
/// permutation symmetries. The triple-y polynomial gets its own symbol set.
#[derive(Clone, Debug)]
pub struct StateAnsatz3 {
    pub p0: MultiPoly,
    /// p_single[i] multiplies y_{i+1}.
    pub p_single: [MultiPoly; 3],
    /// p_pair[k] multiplies y_i y_j for (i,j) = (1,2), (1,3), (2,3).
    pub p_pair: [MultiPoly; 3],
    pub p_triple: MultiPoly,
    pub symbols: Vec<Symbol>,
}

impl StateAnsatz3 {
    pub fn element(&self, curve: &Arc<CurveSpec>) -> GaloisElement {
        let mut e = GaloisElement::from_poly(curve.clone(), self.p0.clone());
        let masks_single: [u8; 3] = [0b001, 0b010, 0b100];
        for (m, p) in masks_single.iter().zip(&self.p_single) {
            if !p.is_zero() {
                e.set(*m, RationalExpr::from_poly(p.clone()));
            }
        }
        let masks_pair: [u8; 3] = [0b011, 0b101, 0b110];
        for (m, p) in masks_pair.iter().zip(&self.p_pair) {
            if !p.is_zero() {
                e.set(*m, RationalExpr::from_poly(p.clone()));
            }
        }
        if !self.p_triple.is_zero() {
            e.set(0b111, RationalExpr::from_poly(self.p_triple.clone()));
        }
        e
    }
}

fn sym_monomial(nvars: usize, exps: &[usize]) -> MultiPoly {
    // sum of distinct permutations of the exponent multiset
    let mut perms: Vec<Vec<usize>> = Vec::new();
    let mut idx: Vec<usize> = (0..exps.len()).collect();
    permute_into(&mut idx, 0, &mut |p| {
        let arranged: Vec<usize> = p.iter().map(|&i| exps[i]).collect();
        if !perms.contains(&arranged) {
            perms.push(arranged);
        }
    });
    let mut out = MultiPoly::zero(nvars);
    for p in perms {
        let mut mono = MultiPoly::one(nvars);
        for (v, &e) in p.iter().enumerate() {
            mono = mono.mul(&MultiPoly::var_pow(nvars, v, e as u16));
        }
        out = out.add(&mono);
    }
    out
}

fn permute_into(idx: &mut Vec<usize>, k: usize, f: &mut impl FnMut(&[usize])) {
    if k == idx.len() {
        f(idx);
        return;
    }
    for i in k..idx.len() {
        idx.swap(k, i);
        permute_into(idx, k + 1, f);
        idx.swap(k, i);
    }
}

pub fn attach_state_ansatz_3(curve: &Arc<CurveSpec>) -> Result<StateAnsatz3, Error> {
    let n = curve.n();
    if n % 2 == 0 {
        return Err(Error::RequiresOddDegree(n));
    }
    let nvars = 3;
    let d0 = n as i64 - 3;
    let d1 = (n as i64 - 1) / 2 - 3;
    let mut symbols = Vec::new();

    // fully symmetric P^(0): B_{ijk} over multisets i >= j >= k
    let mut p0 = MultiPoly::zero(nvars);
    for i in 0..=d0 as usize {
        for j in 0..=i {
            for k in 0..=j {
                let sym = Symbol::b3(i, j, k);
                symbols.push(sym.clone());
                p0 = p0.add(&sym_monomial(nvars, &[i, j, k]).scale(&ParamPoly::var(sym)));
            }
        }
    }
    // P^(i): degree d1 in x_i, d0 in the others, symmetric in the others;
    // the three of them share one symbol set so the y-weighted sum is
    // permutation invariant.
    let zero = MultiPoly::zero(nvars);
    let mut p_single = [zero.clone(), zero.clone(), zero.clone()];
    if d1 >= 0 {
        for a in 0..=d1 as usize {
            for b in 0..=d0 as usize {
                for c in 0..=b {
                    let sym = Symbol::new(&format!("C3_{a}_{b}{c}"));
                    symbols.push(sym.clone());
                    for i in 0..3 {
                        // x_i^a times the symmetric (b, c) monomial in the others
                        let (u, v) = match i {
                            0 => (1, 2),
                            1 => (0, 2),
                            _ => (0, 1),
                        };
                        let mut mono = MultiPoly::var_pow(nvars, u, b as u16)
                            .mul(&MultiPoly::var_pow(nvars, v, c as u16));
                        if b != c {
                            mono = mono.add(
                                &MultiPoly::var_pow(nvars, u, c as u16)
                                    .mul(&MultiPoly::var_pow(nvars, v, b as u16)),
                            );
                        }
                        mono = mono.mul(&MultiPoly::var_pow(nvars, i, a as u16));
                        p_single[i] = p_single[i].add(&mono.scale(&ParamPoly::var(sym.clone())));
                    }
                }
            }
        }
    }
    // P^(i,j): degree d1 in x_i and x_j (symmetric pair), d0 in the third
    let mut p_pair = [zero.clone(), zero.clone(), zero];
    if d1 >= 0 {
        for a in 0..=d1 as usize {
            for b in 0..=a {
                for e in 0..=d0 as usize {
                    let sym = Symbol::new(&format!("D3_{a}{b}_{e}"));
                    symbols.push(sym.clone());
                    for (slot, (i, j, k)) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)]
                        .iter()
                        .enumerate()
                    {
                        let mut mono = MultiPoly::var_pow(nvars, *i, a as u16)
                            .mul(&MultiPoly::var_pow(nvars, *j, b as u16));
                        if a != b {
                            mono = mono.add(
                                &MultiPoly::var_pow(nvars, *i, b as u16)
                                    .mul(&MultiPoly::var_pow(nvars, *j, a as u16)),
                            );
                        }
                        mono = mono.mul(&MultiPoly::var_pow(nvars, *k, e as u16));
                        p_pair[slot] = p_pair[slot].add(&mono.scale(&ParamPoly::var(sym.clone())));
                    }
                }
            }
        }
    }
    // fully symmetric triple-y polynomial, degree d1 in each variable
    let mut p_triple = MultiPoly::zero(nvars);
    if d1 >= 0 {
        for i in 0..=d1 as usize {
            for j in 0..=i {
                for k in 0..=j {
                    let sym = Symbol::new(&format!("E3_{i}{j}{k}"));
                    symbols.push(sym.clone());
                    p_triple =
                        p_triple.add(&sym_monomial(nvars, &[i, j, k]).scale(&ParamPoly::var(sym)));
                }
            }
        }
    }
    Ok(StateAnsatz3 {
        p0,
        p_single,
        p_pair,
        p_triple,
        symbols,
    })
}

#[derive(Clone, Debug)]
pub struct ThreePointFunction {
    pub curve: Arc<CurveSpec>,
    pub tpf: TwoPointFunction,
    pub r0: GaloisElement,
    pub corrections: GaloisElement,
    pub states: StateAnsatz3,
    /// <T(x1)T(x2)T(x3)>_c p1 p2 p3
    pub assembled: GaloisElement,
}

pub fn build_three_point(tpf: &TwoPointFunction) -> Result<ThreePointFunction, Error> {
    let curve = tpf.curve.clone();
    let r0 = build_r0_3(tpf);
    let cascaded = correction_cascade(&r0)?;
    let states = attach_state_ansatz_3(&curve)?;
    let assembled = cascaded.corrected.add(&states.element(&curve));
    Ok(ThreePointFunction {
        curve,
        tpf: tpf.clone(),
        r0,
        corrections: cascaded.corrections,
        states,
        assembled,
    })
}

/// All set partitions of {0..n-1} for n <= 3, as bitmask blocks.
pub fn partitions(n: usize) -> Vec<Vec<u8>> {
    match n {
        1 => vec![vec![0b1]],
        2 => vec![vec![0b11], vec![0b01, 0b10]],
        3 => vec![
            vec![0b111],
            vec![0b011, 0b100],
            vec![0b101, 0b010],
            vec![0b110, 0b001],
            vec![0b001, 0b010, 0b100],
        ],
        _ => panic!("partition sums implemented for N <= 3"),
    }
}

/// The partition-sum inversion defining connected correlators:
/// <1>^-1 <phi_S> = sum over partitions of S of prod <...>_c.
/// `full` maps each nonempty subset to its full correlator; the result maps
/// each subset to its connected correlator.
pub fn connected_recursion(
    n: usize,
    full: &std::collections::BTreeMap<u8, GaloisElement>,
) -> std::collections::BTreeMap<u8, GaloisElement> {
    assert!((1..=3).contains(&n));
    let vac_inv = ParamPoly::var_pow(Symbol::vac(), -1);
    let mut connected: std::collections::BTreeMap<u8, GaloisElement> =
        std::collections::BTreeMap::new();
    // subsets ordered by popcount so sub-blocks are available
    let mut subsets: Vec<u8> = full.keys().cloned().collect();
    subsets.sort_by_key(|s| s.count_ones());
    for s in subsets {
        let popcount = s.count_ones() as usize;
        let mut value = full[&s].scale(&vac_inv);
        // subtract all partitions into more than one block
        for part in partitions_of_subset(s, popcount) {
            if part.len() <= 1 {
                continue;
            }
            let mut prod: Option<GaloisElement> = None;
            for block in &part {
                let c = connected
                    .get(block)
                    .expect("blocks are smaller, already computed");
                prod = Some(match prod {
                    None => c.clone(),
                    Some(p) => p.mul(c),
                });
            }
            value = value.sub(&prod.unwrap());
        }
        connected.insert(s, value);
    }
    connected
}

/// Partitions of an arbitrary subset, derived from `partitions` by mapping
/// positions onto the set bits of s.
fn partitions_of_subset(s: u8, popcount: usize) -> Vec<Vec<u8>> {
    let bits: Vec<u8> = (0..8).filter(|b| s & (1 << b) != 0).collect();
    partitions(popcount)
        .into_iter()
        .map(|blocks| {
            blocks
                .into_iter()
                .map(|block| {
                    let mut out = 0u8;
                    for (pos, bit) in bits.iter().enumerate() {
                        if block & (1 << pos) != 0 {
                            out |= 1 << bit;
                        }
                    }
                    out
                })
                .collect()
        })
        .collect()
}

/// <T(x1)T(x2)T(x3)> p1 p2 p3 rebuilt from the connected pieces.
pub fn full_three_point(thpf: &ThreePointFunction) -> GaloisElement {
    let tpf = &thpf.tpf;
    let opf = &tpf.opf;
    let nvars = 3;
    let vac = ParamPoly::var(Symbol::vac());
    let vac_inv = ParamPoly::var_pow(Symbol::vac(), -1);
    let vac_inv2 = ParamPoly::var_pow(Symbol::vac(), -2);
    let t = |i: usize| {
        opf.element
            .remap(&[i], nvars)
            .mul_poly(&thpf.curve.p_multi(nvars, i))
    };
    let tt = |i: usize, j: usize| {
        // <1><TT>_c p_i p_j lifted to three points
        let mut map = vec![usize::MAX; 2];
        map[0] = i;
        map[1] = j;
        tpf.assembled.remap(&map, nvars)
    };
    let mut out = thpf.assembled.scale(&vac);
    for (i, j, k) in [(0usize, 1usize, 2usize), (0, 2, 1), (1, 2, 0)] {
        out = out.add(&tt(i, j).mul(&t(k)).scale(&vac_inv));
    }
    out.add(&t(0).mul(&t(1)).mul(&t(2)).scale(&vac_inv2))
}

/// No-fourfold-pole report: eps^-4 and eps^-3 coefficients of the connected
/// three-point function at all three diagonals.
pub fn no_fourfold_pole(thpf: &ThreePointFunction) -> Result<bool, Error> {
    let connected = thpf
        .assembled
        .div_factor(Factor::P(0), 1)
        .div_factor(Factor::P(1), 1)
        .div_factor(Factor::P(2), 1);
    for (i, j) in [(0usize, 1usize), (0, 2), (1, 2)] {
        let s = diagonal_series(&connected, i, j, -3)?;
        if !s.coeff(-4)?.is_zero() || !s.coeff(-3)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Growth bound O(x_i^{n-3}) of the cascaded function in every variable.
pub fn growth_report(thpf: &ThreePointFunction) -> Result<bool, Error> {
    let k = thpf.curve.n() as i64 - 3;
    for var in 0..3 {
        if !project_above(&thpf.assembled, var, k)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Full S3 symmetry of the assembled function.
pub fn s3_symmetric(thpf: &ThreePointFunction) -> bool {
    let e = &thpf.assembled;
    for perm in [[1usize, 0, 2], [0, 2, 1], [2, 1, 0], [1, 2, 0], [2, 0, 1]] {
        if &e.remap(&perm, 3) != e {
            return false;
        }
    }
    true
}

/// Galois splitting per variable: every component of the assembled function
/// is a rational function (structurally true; exposed for the report).
pub fn galois_split_rational(thpf: &ThreePointFunction) -> bool {
    (0..3).all(|i| {
        let (even, odd) = thpf.assembled.galois_split(i);
        even.add(&odd.mul_y(i)) == thpf.assembled
    })
}
