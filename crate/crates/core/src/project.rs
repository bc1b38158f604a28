//! Laurent projection [.]_{>k} at x_var -> infinity.
//!
//! For the factored denominators of `RationalExpr` the expansion at infinity
//! is a descending power series whose coefficients are polynomial in the
//! other variables (over the factors not involving x_var), so the part of
//! degree strictly greater than k is computed exactly with a finite window.
//! No truncation error is possible unless the window exceeds the configured
//! guard bound.
//!
//! On a `GaloisElement` the projection is Galois-aware: a component carrying
//! y_var sits at order n/2 above its stored x-exponent, so its threshold is
//! lowered accordingly (for odd n the half-integer comparison is strict and
//! resolves to the integer cutoff k - (n+1)/2).

use crate::curve::CurveSpec;
use crate::error::Error;
use crate::galois::{subset_contains, Factor, GaloisElement, RationalExpr};
use crate::multipoly::MultiPoly;
use crate::param::ParamPoly;
use crate::rat::{binomial, rat_one};
use std::collections::BTreeMap;

/// Guard bound for expansion windows; big enough for every formula in the
/// engine, small enough to catch a runaway exponent before it costs minutes.
pub const DEFAULT_MAX_WINDOW: i64 = 64;

/// Descending series: coeffs[m] is the coefficient of x_var^(top - m).
struct InfSeries {
    top: i64,
    coeffs: Vec<MultiPoly>,
}

fn mul_window(a: &InfSeries, b: &InfSeries, window: usize, nvars: usize) -> InfSeries {
    let mut coeffs = vec![MultiPoly::zero(nvars); window];
    for (i, ca) in a.coeffs.iter().enumerate().take(window) {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.coeffs.iter().enumerate() {
            if i + j >= window {
                break;
            }
            coeffs[i + j] = coeffs[i + j].add(&ca.mul(cb));
        }
    }
    InfSeries {
        top: a.top + b.top,
        coeffs,
    }
}

/// Series of factor^(-e) at x_var -> infinity, to `window` terms.
fn inv_factor_series(
    f: Factor,
    e: u32,
    var: usize,
    window: usize,
    curve: &CurveSpec,
    nvars: usize,
) -> InfSeries {
    match f {
        Factor::X(i) => {
            assert_eq!(i, var);
            let mut coeffs = vec![MultiPoly::zero(nvars); window];
            if window > 0 {
                coeffs[0] = MultiPoly::one(nvars);
            }
            InfSeries {
                top: -(e as i64),
                coeffs,
            }
        }
        Factor::Diff(i, j) => {
            // (x_i - x_j)^(-e): when var = i expand in x_j/x_i, when var = j
            // use (x_i - x_j)^(-e) = (-1)^e (x_j - x_i)^(-e) and expand in
            // x_i/x_j.
            let (other, sign) = if var == i {
                (j, rat_one())
            } else {
                assert_eq!(var, j);
                (i, if e % 2 == 0 { rat_one() } else { -rat_one() })
            };
            let mut coeffs = Vec::with_capacity(window);
            for m in 0..window {
                let c = binomial(e as u64 - 1 + m as u64, m as u64) * &sign;
                coeffs.push(MultiPoly::var_pow(nvars, other, m as u16).scale_rat(&c));
            }
            InfSeries {
                top: -(e as i64),
                coeffs,
            }
        }
        Factor::P(i) => {
            assert_eq!(i, var);
            // p(x)^(-e) = a0^(-e) x^(-en) (1 + u)^(-e),
            // u = sum_{k>=1} (a_k/a0) x^(-k)
            let n = curve.n();
            let a0 = curve.a0_rat();
            let a0_inv = rat_one() / a0;
            let mut u = vec![ParamPoly::zero(); window];
            for k in 1..=n.min(window.saturating_sub(1)) {
                u[k] = curve.a(k).scale(&a0_inv);
            }
            // w = (1 + u)^e truncated
            let mut w = vec![ParamPoly::zero(); window];
            if window > 0 {
                w[0] = ParamPoly::one();
            }
            for _ in 0..e {
                let mut next = vec![ParamPoly::zero(); window];
                for a in 0..window {
                    if w[a].is_zero() {
                        continue;
                    }
                    // (1 + u) has unit constant term
                    next[a] = next[a].add(&w[a]);
                    for b in 1..window - a {
                        if !u[b].is_zero() {
                            next[a + b] = next[a + b].add(&w[a].mul(&u[b]));
                        }
                    }
                }
                w = next;
            }
            // invert: b0 = 1, b_m = -sum_{k=1..m} w_k b_{m-k}
            let mut bcoef = vec![ParamPoly::zero(); window];
            if window > 0 {
                bcoef[0] = ParamPoly::one();
            }
            for m in 1..window {
                let mut acc = ParamPoly::zero();
                for k in 1..=m {
                    if !w[k].is_zero() && !bcoef[m - k].is_zero() {
                        acc = acc.add(&w[k].mul(&bcoef[m - k]));
                    }
                }
                bcoef[m] = acc.neg();
            }
            let mut scale = rat_one();
            for _ in 0..e {
                scale *= &a0_inv;
            }
            InfSeries {
                top: -((e as i64) * n as i64),
                coeffs: bcoef
                    .into_iter()
                    .map(|c| MultiPoly::constant(nvars, c.scale(&scale)))
                    .collect(),
            }
        }
    }
}

/// The part of `r` of degree strictly greater than `k` in x_var at infinity.
pub fn project_above_rexpr(
    r: &RationalExpr,
    var: usize,
    k: i64,
    curve: &CurveSpec,
    max_window: i64,
) -> Result<RationalExpr, Error> {
    if r.is_zero() {
        return Ok(RationalExpr::zero(r.nvars()));
    }
    let nvars = r.nvars();
    let num_deg = r.num.degree_in(var).unwrap_or(0) as i64;
    let den_deg: i64 = r
        .den
        .iter()
        .map(|(f, e)| f.degree_in(var, curve) * (*e as i64))
        .sum();
    let top = num_deg - den_deg;
    if top <= k {
        return Ok(RationalExpr::zero(nvars));
    }
    let window = top - k;
    if window > max_window {
        return Err(Error::Truncation {
            requested: window,
            bound: max_window,
        });
    }
    let window = window as usize;

    // numerator as a descending series (exact, padded to the window)
    let num_coeffs = r.num.coeffs_in_var(var);
    let mut coeffs = vec![MultiPoly::zero(nvars); window];
    for (m, c) in num_coeffs.iter().rev().enumerate() {
        if m < window {
            coeffs[m] = c.clone();
        }
    }
    let mut series = InfSeries {
        top: num_deg,
        coeffs,
    };
    let mut inert: BTreeMap<Factor, u32> = BTreeMap::new();
    for (f, e) in &r.den {
        if f.involves(var) {
            let inv = inv_factor_series(*f, *e, var, window, curve, nvars);
            series = mul_window(&series, &inv, window, nvars);
        } else {
            inert.insert(*f, *e);
        }
    }
    // assemble kept degrees top, top-1, .., k+1
    let mut lowest_kept = top;
    for (m, c) in series.coeffs.iter().enumerate() {
        if !c.is_zero() {
            lowest_kept = top - m as i64;
        }
    }
    let mut num = MultiPoly::zero(nvars);
    let pow_base = if lowest_kept < 0 { -lowest_kept } else { 0 };
    for (m, c) in series.coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let d = top - m as i64;
        // multiply by x^(d + pow_base), always a nonnegative power
        let shift = (d + pow_base) as u16;
        num = num.add(&c.mul(&MultiPoly::var_pow(nvars, var, shift)));
    }
    if pow_base > 0 {
        inert.insert(Factor::X(var), pow_base as u32);
    }
    Ok(RationalExpr::new(num, inert, curve))
}

/// The integer threshold applied to the stored x-exponents of a y_var-carrying
/// component when the order threshold is k: a term y x^d has order d + n/2.
pub fn odd_component_cutoff(k: i64, n: usize) -> i64 {
    if n % 2 == 1 {
        k - (n as i64 + 1) / 2
    } else {
        k - n as i64 / 2
    }
}

/// Galois-aware projection of an element onto the part of order strictly
/// greater than k in x_var at infinity (the paper's Q_var with threshold k on
/// the Galois-even part and k - n/2 on the y_var-weighted part).
pub fn project_above(e: &GaloisElement, var: usize, k: i64) -> Result<GaloisElement, Error> {
    project_above_with(e, var, k, DEFAULT_MAX_WINDOW)
}

pub fn project_above_with(
    e: &GaloisElement,
    var: usize,
    k: i64,
    max_window: i64,
) -> Result<GaloisElement, Error> {
    let curve = e.curve().clone();
    let n = curve.n();
    let mut out = GaloisElement::zero(curve.clone(), e.nvars());
    for (s, r) in e.components() {
        let threshold = if subset_contains(*s, var) {
            odd_component_cutoff(k, n)
        } else {
            k
        };
        let pr = project_above_rexpr(r, var, threshold, &curve, max_window)?;
        if !pr.is_zero() {
            let acc = out.component(*s).add(&pr, &curve);
            out.set(*s, acc);
        }
    }
    Ok(out)
}

/// Exact coefficient of x_var^d in the expansion of `e` at infinity
/// (Galois-even sector: components carrying y_var are ignored by callers that
/// use this on y-free elements).
pub fn coefficient_at_infinity(
    e: &GaloisElement,
    var: usize,
    d: i64,
) -> Result<GaloisElement, Error> {
    assert!(
        e.components().all(|(s, _)| !subset_contains(*s, var)),
        "coefficient extraction is defined on the y_var-free sector"
    );
    let above = project_above(e, var, d - 1)?;
    let strictly_above = project_above(e, var, d)?;
    let window = above.sub(&strictly_above);
    // strip the x_var^d monomial: substitute x_var -> 1 on the y-free parts
    // is wrong in general; instead divide exactly.
    let curve = e.curve().clone();
    let mut out = GaloisElement::zero(curve.clone(), e.nvars());
    for (s, r) in window.components() {
        let shifted = if d >= 0 {
            RationalExpr::new(
                r.num
                    .exact_div(&MultiPoly::var_pow(e.nvars(), var, d as u16), var)
                    .expect("window is a single power"),
                r.den.clone(),
                &curve,
            )
        } else {
            // x^d with d < 0 sits in the denominator as X(var)^(-d)
            let mut den = r.den.clone();
            let have = den.remove(&Factor::X(var)).unwrap_or(0);
            assert!(have as i64 >= -d, "window lacks the expected x power");
            let rest = have as i64 + d;
            if rest > 0 {
                den.insert(Factor::X(var), rest as u32);
            }
            RationalExpr::new(r.num.clone(), den, &curve)
        };
        out.set(*s, shifted);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::sample_curve_g2;
    use crate::rat::{rat, rati};
    use std::sync::Arc;

    fn curve2() -> Arc<CurveSpec> {
        Arc::new(sample_curve_g2())
    }

    #[test]
    fn monomial_filter() {
        // [x1^3 + x1]_{>1} = x1^3
        let curve = curve2();
        let p = MultiPoly::var_pow(2, 0, 3).add(&MultiPoly::var(2, 0));
        let r = RationalExpr::from_poly(p);
        let got = project_above_rexpr(&r, 0, 1, &curve, DEFAULT_MAX_WINDOW).unwrap();
        assert_eq!(got.num, MultiPoly::var_pow(2, 0, 3));
        assert!(got.den.is_empty());
    }

    #[test]
    fn geometric_series_window() {
        // x1^5/(x1-x2)^2 = x1^3 + 2 x1^2 x2 + 3 x1 x2^2 + ... at infinity.
        // Strictly above 2 keeps only x1^3; strictly above 1 keeps the first
        // two terms (oracle: truncated geometric series of (1 - x2/x1)^-2).
        let curve = curve2();
        let num = MultiPoly::var_pow(2, 0, 5);
        let r = RationalExpr::new(
            num,
            BTreeMap::from([(Factor::Diff(0, 1), 2)]),
            &curve,
        );
        let above2 = project_above_rexpr(&r, 0, 2, &curve, DEFAULT_MAX_WINDOW).unwrap();
        assert_eq!(above2.num, MultiPoly::var_pow(2, 0, 3));
        let above1 = project_above_rexpr(&r, 0, 1, &curve, DEFAULT_MAX_WINDOW).unwrap();
        let expect = MultiPoly::var_pow(2, 0, 3).add(
            &MultiPoly::var_pow(2, 0, 2)
                .mul(&MultiPoly::var(2, 1))
                .scale_rat(&rati(2)),
        );
        assert_eq!(above1.num, expect);
    }

    #[test]
    fn all_negative_degrees_drop() {
        // [1/(x1-x2)^4]_{>0} = 0
        let curve = curve2();
        let r = RationalExpr::new(
            MultiPoly::one(2),
            BTreeMap::from([(Factor::Diff(0, 1), 4)]),
            &curve,
        );
        let got = project_above_rexpr(&r, 0, 0, &curve, DEFAULT_MAX_WINDOW).unwrap();
        assert!(got.is_zero());
    }

    #[test]
    fn negative_threshold_keeps_negative_degrees() {
        // [x1^2/p(x1)]_{>-4}: p = x1^5 - x1, expansion x1^-3 + x1^-7 + ...
        // keeps exactly x1^-3.
        let curve = curve2();
        let r = RationalExpr::new(
            MultiPoly::var_pow(1, 0, 2),
            BTreeMap::from([(Factor::P(0), 1)]),
            &curve,
        );
        let got = project_above_rexpr(&r, 0, -4, &curve, DEFAULT_MAX_WINDOW).unwrap();
        let expect = RationalExpr::new(
            MultiPoly::one(1),
            BTreeMap::from([(Factor::X(0), 3)]),
            &curve,
        );
        assert_eq!(got, expect);
    }

    #[test]
    fn projection_by_second_variable() {
        // [x2^3/(x1-x2)]_{>1 in x2} : (x1-x2)^-1 = -x2^-1 (1 - x1/x2)^-1
        // = -(x2^-1 + x1 x2^-2 + ...), so x2^3/(x1-x2) = -x2^2 - x1 x2 - ...
        let curve = curve2();
        let r = RationalExpr::new(
            MultiPoly::var_pow(2, 1, 3),
            BTreeMap::from([(Factor::Diff(0, 1), 1)]),
            &curve,
        );
        let got = project_above_rexpr(&r, 1, 1, &curve, DEFAULT_MAX_WINDOW).unwrap();
        assert_eq!(got.num, MultiPoly::var_pow(2, 1, 2).neg());
    }

    #[test]
    fn projection_linear_and_idempotent() {
        let curve = curve2();
        let r = RationalExpr::new(
            MultiPoly::var_pow(2, 0, 6).add(&MultiPoly::var_pow(2, 0, 3).mul(&MultiPoly::var(2, 1))),
            BTreeMap::from([(Factor::Diff(0, 1), 2), (Factor::P(1), 1)]),
            &curve,
        );
        let e = GaloisElement::from_component(curve.clone(), 2, 0, r);
        let p1 = project_above(&e, 0, 1).unwrap();
        let p2 = project_above(&p1, 0, 1).unwrap();
        assert_eq!(p1, p2);
        // complement: e = [e]_{>k} + (e - [e]_{>k})
        let rest = e.sub(&p1);
        assert_eq!(p1.add(&rest), e);
        // and the rest projects to zero
        assert!(project_above(&rest, 0, 1).unwrap().is_zero());
    }

    #[test]
    fn commutation_on_separated_denominators() {
        // Double projections in different variables commute whenever the
        // expansions do not compete for the same pole (here: no mixed
        // (x1 - x2) factor). The mixed case is the paper's symmetry
        // condition, asserted on R(x1, x2) by the two-point module.
        let curve = curve2();
        let r = RationalExpr::new(
            MultiPoly::var_pow(2, 0, 5)
                .mul(&MultiPoly::var_pow(2, 1, 4))
                .add(&MultiPoly::var_pow(2, 0, 2).mul(&MultiPoly::var_pow(2, 1, 6))),
            BTreeMap::from([(Factor::P(0), 1), (Factor::P(1), 1), (Factor::X(0), 1)]),
            &curve,
        );
        let mut e = GaloisElement::from_component(curve.clone(), 2, 0, r.clone());
        e.set(0b01, r.scale_rat(&rat(1, 3)));
        e.set(0b11, r.scale_rat(&rat(-2, 5)));
        let a = project_above(&project_above(&e, 0, -3).unwrap(), 1, -2).unwrap();
        let b = project_above(&project_above(&e, 1, -2).unwrap(), 0, -3).unwrap();
        assert!(!a.is_zero());
        assert_eq!(a, b);
    }

    #[test]
    fn coefficient_extraction() {
        let curve = curve2();
        // coefficient of x1^-2 in x1^3/p(x1): p = x1^5 - x1:
        // x1^3/p = x1^-2 (1 - x1^-4)^-1 = x1^-2 + x1^-6 + ...
        let r = RationalExpr::new(
            MultiPoly::var_pow(1, 0, 3),
            BTreeMap::from([(Factor::P(0), 1)]),
            &curve,
        );
        let e = GaloisElement::from_component(curve.clone(), 1, 0, r);
        let c = coefficient_at_infinity(&e, 0, -2).unwrap();
        assert_eq!(
            c.component(0),
            RationalExpr::from_poly(MultiPoly::one(1))
        );
        let z = coefficient_at_infinity(&e, 0, -3).unwrap();
        assert!(z.is_zero());
    }

    #[test]
    fn window_guard() {
        let curve = curve2();
        let r = RationalExpr::new(
            MultiPoly::var_pow(1, 0, 2),
            BTreeMap::from([(Factor::P(0), 1)]),
            &curve,
        );
        let err = project_above_rexpr(&r, 0, -200, &curve, DEFAULT_MAX_WINDOW);
        assert!(matches!(err, Err(Error::Truncation { .. })));
    }
}
