//! Diagonal Laurent expansion x_i -> x_j + eps on a fixed sheet.
//!
//! On the same-sheet branch y_i = y_j * u(eps) with u(0) = +1; the u-series is
//! generated from the formal square root of p(x_j + eps)/p(x_j), so every
//! coefficient is exact with p(x_j)-power denominators. The principal part of
//! any element in this crate is finite because eps-poles come only from
//! (x_i - x_j) denominator factors.
//!
//! Series coefficients are Galois elements in the surviving points (the
//! expanded slot i is left unused, never relabeled).

use crate::curve::CurveSpec;
use crate::error::Error;
use crate::galois::{subset_contains, Factor, GaloisElement, RationalExpr};
use crate::multipoly::MultiPoly;
use crate::rat::rat;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Hard bound on requested expansion orders.
pub const MAX_DIAG_ORDER: i64 = 24;

/// Default order: the correlator identities need four orders of diagonal
/// cancellation; six leaves margin for the off-by-one class of mistakes.
pub const DEFAULT_DIAG_ORDER: i64 = 6;

/// Laurent series in eps = x_i - x_j with Galois-element coefficients.
#[derive(Clone, Debug)]
pub struct DiagSeries {
    curve: Arc<CurveSpec>,
    nvars: usize,
    expanded: usize,
    base: usize,
    /// coefficients are valid for orders <= valid_to
    valid_to: i64,
    coeffs: BTreeMap<i64, GaloisElement>,
}

impl DiagSeries {
    pub fn valid_to(&self) -> i64 {
        self.valid_to
    }

    pub fn expanded_var(&self) -> usize {
        self.expanded
    }

    pub fn base_var(&self) -> usize {
        self.base
    }

    /// Coefficient of eps^k; requesting beyond the computed validity is an
    /// error, never a silent zero.
    pub fn coeff(&self, k: i64) -> Result<GaloisElement, Error> {
        if k > self.valid_to {
            return Err(Error::SeriesOrder {
                requested: k,
                valid_to: self.valid_to,
            });
        }
        Ok(self
            .coeffs
            .get(&k)
            .cloned()
            .unwrap_or_else(|| GaloisElement::zero(self.curve.clone(), self.nvars)))
    }

    /// Orders k < 0 with nonzero coefficients.
    pub fn principal_orders(&self) -> Vec<i64> {
        self.coeffs
            .iter()
            .filter(|(k, v)| **k < 0 && !v.is_zero())
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn principal_is_zero(&self) -> bool {
        self.principal_orders().is_empty()
    }

    pub fn add(&self, other: &DiagSeries) -> DiagSeries {
        assert_eq!((self.expanded, self.base), (other.expanded, other.base));
        let mut coeffs = self.coeffs.clone();
        for (k, v) in &other.coeffs {
            let sum = match coeffs.get(k) {
                Some(cur) => cur.add(v),
                None => v.clone(),
            };
            if sum.is_zero() {
                coeffs.remove(k);
            } else {
                coeffs.insert(*k, sum);
            }
        }
        DiagSeries {
            curve: self.curve.clone(),
            nvars: self.nvars,
            expanded: self.expanded,
            base: self.base,
            valid_to: self.valid_to.min(other.valid_to),
            coeffs,
        }
    }

    pub fn sub(&self, other: &DiagSeries) -> DiagSeries {
        let mut neg = other.clone();
        neg.coeffs = neg.coeffs.into_iter().map(|(k, v)| (k, v.neg())).collect();
        self.add(&neg)
    }
}

/// Ascending scalar series (RationalExpr coefficients, no y content), used
/// for the shifted inverse factors and the square-root series u(eps).
#[derive(Clone, Debug)]
struct RSeries {
    coeffs: Vec<RationalExpr>, // coeffs[k] multiplies eps^k
}

impl RSeries {
    fn one(nvars: usize, depth: usize) -> RSeries {
        let mut coeffs = vec![RationalExpr::zero(nvars); depth + 1];
        coeffs[0] = RationalExpr::from_poly(MultiPoly::one(nvars));
        RSeries { coeffs }
    }

    fn mul(&self, other: &RSeries, curve: &CurveSpec, depth: usize) -> RSeries {
        let nvars = self.coeffs[0].nvars();
        let mut coeffs = vec![RationalExpr::zero(nvars); depth + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(depth + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j > depth {
                    break;
                }
                coeffs[i + j] = coeffs[i + j].add(&a.mul(b, curve), curve);
            }
        }
        RSeries { coeffs }
    }
}

/// Shifted-polynomial series: f(x_i <- x_j + eps) as ascending RationalExpr
/// coefficients (exact; pads to `depth`).
fn shifted_poly_series(f: &MultiPoly, i: usize, j: usize, depth: usize) -> Vec<MultiPoly> {
    let mut coeffs = f.shift_var(i, j);
    coeffs.resize(depth + 1, MultiPoly::zero(f.nvars()));
    coeffs.truncate(depth + 1);
    coeffs
}

/// The branch series u(eps) = y_i / y_j with u(0) = +1, to the given depth:
/// u^2 = p(x_j + eps)/p(x_j).
pub fn u_series(curve: &CurveSpec, nvars: usize, j: usize, depth: usize) -> Vec<RationalExpr> {
    let p = curve.p_multi(nvars, j);
    // p(x_j + eps) expanded as polynomials in x_j: derivatives / k!
    let mut shifted: Vec<MultiPoly> = Vec::with_capacity(depth + 1);
    let mut d = p.clone();
    let mut factorial = rat(1, 1);
    for k in 0..=depth {
        if k > 0 {
            d = d.derivative(j);
            factorial = factorial * rat(k as i64, 1);
        }
        shifted.push(d.scale_rat(&(rat(1, 1) / factorial.clone())));
    }
    // q_k = shifted_k / p(x_j)
    let q: Vec<RationalExpr> = shifted
        .iter()
        .map(|s| RationalExpr::from_poly(s.clone()).div_factor(Factor::P(j), 1, curve))
        .collect();
    // u_0 = 1; u_m = (q_m - sum_{k=1..m-1} u_k u_{m-k}) / 2
    let mut u = vec![RationalExpr::zero(nvars); depth + 1];
    u[0] = RationalExpr::from_poly(MultiPoly::one(nvars));
    for m in 1..=depth {
        let mut acc = q[m].clone();
        for k in 1..m {
            acc = acc.sub(&u[k].mul(&u[m - k], curve), curve);
        }
        u[m] = acc.scale_rat(&rat(1, 2));
    }
    u
}

/// Expands a Galois element at x_i = x_j + eps on the same sheet, valid
/// through eps^order.
pub fn diagonal_series(
    e: &GaloisElement,
    i: usize,
    j: usize,
    order: i64,
) -> Result<DiagSeries, Error> {
    assert!(i != j && i < e.nvars() && j < e.nvars());
    if order > MAX_DIAG_ORDER {
        return Err(Error::Truncation {
            requested: order,
            bound: MAX_DIAG_ORDER,
        });
    }
    let curve = e.curve().clone();
    let nvars = e.nvars();
    let mut out = DiagSeries {
        curve: curve.clone(),
        nvars,
        expanded: i,
        base: j,
        valid_to: order,
        coeffs: BTreeMap::new(),
    };
    let diag_factor = Factor::diff(i, j).0;
    // u-series computed lazily at the maximal depth any component needs
    let max_depth = e
        .components()
        .map(|(_, r)| order + r.den.get(&diag_factor).copied().unwrap_or(0) as i64)
        .max()
        .unwrap_or(0)
        .max(0) as usize;
    let mut u_cache: Option<Vec<RationalExpr>> = None;

    for (s, r) in e.components() {
        let pole = r.den.get(&diag_factor).copied().unwrap_or(0) as i64;
        let depth_needed = order + pole;
        if depth_needed < 0 {
            continue;
        }
        if depth_needed > MAX_DIAG_ORDER + 8 {
            return Err(Error::Truncation {
                requested: depth_needed,
                bound: MAX_DIAG_ORDER + 8,
            });
        }
        let depth = depth_needed as usize;

        // inert denominator: factors not involving i
        let mut inert: BTreeMap<Factor, u32> = BTreeMap::new();
        let mut series = {
            let shifted = shifted_poly_series(&r.num, i, j, depth);
            RSeries {
                coeffs: shifted.into_iter().map(RationalExpr::from_poly).collect(),
            }
        };
        for (f, fe) in &r.den {
            if *f == diag_factor {
                continue; // handled as the eps-pole shift
            }
            if !f.involves(i) {
                inert.insert(*f, *fe);
                continue;
            }
            let inv = inv_shifted_factor_series_impl(*f, *fe, i, j, &curve, nvars, depth);
            series = series.mul(&inv, &curve, depth);
        }
        if !inert.is_empty() {
            series = RSeries {
                coeffs: series
                    .coeffs
                    .into_iter()
                    .map(|c| {
                        let mut den = c.den.clone();
                        for (f, fe) in &inert {
                            *den.entry(*f).or_insert(0) += fe;
                        }
                        RationalExpr::new(c.num, den, &curve)
                    })
                    .collect(),
            };
        }

        // Galois bookkeeping for the expanded sheet
        let has_i = subset_contains(*s, i);
        let has_j = subset_contains(*s, j);
        let (target, extra_u, extra_pj): (u8, bool, bool) = if has_i && has_j {
            // y_i y_j -> p(x_j) u(eps)
            (s & !(1 << i) & !(1 << j), true, true)
        } else if has_i {
            // y_i -> y_j u(eps)
            ((s & !(1 << i)) | (1 << j), true, false)
        } else {
            (*s, false, false)
        };
        if extra_u {
            let deep = u_cache.get_or_insert_with(|| u_series(&curve, nvars, j, max_depth));
            let u = RSeries {
                coeffs: deep[..=depth].to_vec(),
            };
            series = series.mul(&u, &curve, depth);
        }
        if extra_pj {
            let pj = RationalExpr::from_poly(curve.p_multi(nvars, j));
            series = RSeries {
                coeffs: series
                    .coeffs
                    .into_iter()
                    .map(|c| c.mul(&pj, &curve))
                    .collect(),
            };
        }

        for (k, c) in series.coeffs.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let ord = k as i64 - pole;
            if ord > order {
                continue;
            }
            let mut g = out
                .coeffs
                .remove(&ord)
                .unwrap_or_else(|| GaloisElement::zero(curve.clone(), nvars));
            g.set(target, g.component(target).add(&c, &curve));
            if g.is_zero() {
                out.coeffs.remove(&ord);
            } else {
                out.coeffs.insert(ord, g);
            }
        }
    }
    out.coeffs.retain(|_, v| !v.is_zero());
    Ok(out)
}

fn inv_shifted_factor_series_impl(
    f: Factor,
    e: u32,
    i: usize,
    j: usize,
    curve: &CurveSpec,
    nvars: usize,
    depth: usize,
) -> RSeries {
    let poly = f.poly(curve, nvars);
    let shifted = shifted_poly_series(&poly, i, j, depth);
    let (base_factor, base_sign) = match f {
        Factor::Diff(a, b) => {
            let other = if a == i { b } else { a };
            assert!(other != i && other != j);
            if a == i {
                Factor::diff(j, other)
            } else {
                Factor::diff(other, j)
            }
        }
        Factor::P(_) => (Factor::P(j), false),
        Factor::X(_) => (Factor::X(j), false),
    };
    let sign = if base_sign { rat(-1, 1) } else { rat(1, 1) };
    let mut one_plus_q = RSeries::one(nvars, depth);
    for (k, s) in shifted.iter().enumerate().skip(1) {
        if k > depth || s.is_zero() {
            continue;
        }
        one_plus_q.coeffs[k] = RationalExpr::from_poly(s.scale_rat(&sign))
            .div_factor(base_factor, 1, curve);
    }
    let mut w = RSeries::one(nvars, depth);
    for _ in 0..e {
        w = w.mul(&one_plus_q, curve, depth);
    }
    let mut inv = RSeries::one(nvars, depth);
    for m in 1..=depth {
        let mut acc = RationalExpr::zero(nvars);
        for k in 1..=m {
            if !w.coeffs[k].is_zero() && !inv.coeffs[m - k].is_zero() {
                acc = acc.add(&w.coeffs[k].mul(&inv.coeffs[m - k], curve), curve);
            }
        }
        inv.coeffs[m] = acc.neg();
    }
    let mut scale = rat(1, 1);
    if base_sign && e % 2 == 1 {
        scale = -scale;
    }
    RSeries {
        coeffs: inv
            .coeffs
            .into_iter()
            .map(|c| c.scale_rat(&scale).div_factor(base_factor, e, curve))
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::sample_curve_g2;
    use crate::param::ParamPoly;
    use crate::rat::rati;

    fn curve2() -> Arc<CurveSpec> {
        Arc::new(sample_curve_g2())
    }

    #[test]
    fn u_series_squares_to_shifted_p() {
        // u(eps)^2 - p(x2 + eps)/p(x2) = O(eps^(depth+1)), checked exactly
        let curve = curve2();
        let depth = 6;
        let u = u_series(&curve, 2, 1, depth);
        // square the series and compare term by term
        for m in 0..=depth {
            let mut sq = RationalExpr::zero(2);
            for k in 0..=m {
                sq = sq.add(&u[k].mul(&u[m - k], &curve), &curve);
            }
            // expected: p^(m)(x2)/m! / p(x2)
            let mut d = curve.p_multi(2, 1);
            let mut fact = rati(1);
            for k in 1..=m {
                d = d.derivative(1);
                fact = fact * rati(k as i64);
            }
            let expect = RationalExpr::from_poly(d.scale_rat(&(rati(1) / fact)))
                .div_factor(Factor::P(1), 1, &curve);
            assert_eq!(sq, expect, "u^2 mismatch at order {m}");
        }
    }

    #[test]
    fn expansion_of_x1_is_exact() {
        let curve = curve2();
        let e = GaloisElement::from_poly(curve.clone(), MultiPoly::var(2, 0));
        let s = diagonal_series(&e, 0, 1, 3).unwrap();
        assert_eq!(
            s.coeff(0).unwrap(),
            GaloisElement::from_poly(curve.clone(), MultiPoly::var(2, 1))
        );
        assert_eq!(
            s.coeff(1).unwrap(),
            GaloisElement::from_poly(curve.clone(), MultiPoly::one(2))
        );
        assert!(s.coeff(2).unwrap().is_zero());
        assert!(s.principal_is_zero());
        assert!(s.coeff(4).is_err());
    }

    #[test]
    fn simple_pole_of_sum_over_diff() {
        // (y1 + y2)/(x1 - x2): principal term 2 y2/eps, then (p'/2p) y2 at eps^0
        let curve = curve2();
        let one = RationalExpr::from_poly(MultiPoly::one(2));
        let mut e = GaloisElement::zero(curve.clone(), 2);
        e.set(
            0b01,
            one.div_factor(Factor::Diff(0, 1), 1, &curve),
        );
        e.set(
            0b10,
            one.div_factor(Factor::Diff(0, 1), 1, &curve),
        );
        let s = diagonal_series(&e, 0, 1, 2).unwrap();
        // eps^-1: 2 y2
        let c = s.coeff(-1).unwrap();
        assert_eq!(
            c.component(0b10),
            RationalExpr::from_poly(MultiPoly::constant(2, ParamPoly::constant(rati(2))))
        );
        // eps^0: y2 p'(x2)/(2 p(x2))
        let c0 = s.coeff(0).unwrap();
        let expect = RationalExpr::from_poly(curve.p_prime_multi(2, 1).scale_rat(&rat(1, 2)))
            .div_factor(Factor::P(1), 1, &curve);
        assert_eq!(c0.component(0b10), expect);
    }

    #[test]
    fn ope_leading_structure_of_f_squared() {
        // (c/32) f12^2 / (p1 p2): eps^-4 coefficient c/2, eps^-3 zero,
        // eps^-2 coefficient (c/16) (p2')^2/p2^2 (the displayed OPE check).
        let curve = curve2();
        let c = ParamPoly::var(crate::param::Symbol::c());
        let f = crate::galois::f_pair(&curve, 2, 0, 1);
        let expr = f
            .mul(&f)
            .scale(&c.scale(&rat(1, 32)))
            .div_factor(Factor::P(0), 1)
            .div_factor(Factor::P(1), 1);
        let s = diagonal_series(&expr, 0, 1, 0).unwrap();
        let lead = s.coeff(-4).unwrap();
        assert_eq!(
            lead.component(0),
            RationalExpr::from_poly(MultiPoly::constant(2, c.scale(&rat(1, 2))))
        );
        assert!(s.coeff(-3).unwrap().is_zero());
        let sub = s.coeff(-2).unwrap();
        let expect = RationalExpr::from_poly(
            curve
                .p_prime_multi(2, 1)
                .pow(2)
                .scale(&c.scale(&rat(1, 16))),
        )
        .div_factor(Factor::P(1), 2, &curve);
        assert_eq!(sub.component(0), expect);
    }

    #[test]
    fn diagonal_with_spectator_variable() {
        // 1/((x1 - x3) p(x1)) expanded at x1 -> x2 keeps (x2 - x3) and p(x2)
        // factors in the coefficients.
        let curve = curve2();
        let e = GaloisElement::from_component(
            curve.clone(),
            3,
            0,
            RationalExpr::from_poly(MultiPoly::one(3))
                .div_factor(Factor::Diff(0, 2), 1, &curve)
                .div_factor(Factor::P(0), 1, &curve),
        );
        let s = diagonal_series(&e, 0, 1, 1).unwrap();
        let c0 = s.coeff(0).unwrap().component(0);
        let expect = RationalExpr::from_poly(MultiPoly::one(3))
            .div_factor(Factor::Diff(1, 2), 1, &curve)
            .div_factor(Factor::P(1), 1, &curve);
        assert_eq!(c0, expect);
        // eps coefficient: -(1/(x2-x3)^2 p2) - p'(x2)/((x2-x3) p2^2)
        let c1 = s.coeff(1).unwrap().component(0);
        let t1 = RationalExpr::from_poly(MultiPoly::one(3).neg())
            .div_factor(Factor::Diff(1, 2), 2, &curve)
            .div_factor(Factor::P(1), 1, &curve);
        let t2 = RationalExpr::from_poly(curve.p_prime_multi(3, 1).neg())
            .div_factor(Factor::Diff(1, 2), 1, &curve)
            .div_factor(Factor::P(1), 2, &curve);
        assert_eq!(c1, t1.add(&t2, &curve));
    }
}
