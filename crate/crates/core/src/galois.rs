//! The function-field algebra of N-point expressions on y^2 = p(x).
//!
//! A `GaloisElement` stores, for each subset S of the points, the coefficient
//! of prod_{i in S} y_i as a `RationalExpr`: a polynomial numerator over a
//! denominator kept in factored form. The allowed factors are exactly the
//! ones the correlator formulas produce: (x_i - x_j), p(x_i), and x_i.
//! Keeping denominators factored makes pole orders, projections at infinity,
//! and diagonal expansions exact and cheap.
//!
//! Every stored y-exponent is 0 or 1; `reduce` folds y_i^2 -> p(x_i).

use crate::curve::CurveSpec;
use crate::multipoly::MultiPoly;
use crate::param::{ParamPoly, Symbol};
use crate::rat::{rat, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A denominator factor. `Diff(i, j)` is x_i - x_j with i < j.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub enum Factor {
    Diff(usize, usize),
    P(usize),
    X(usize),
}

impl Factor {
    pub fn diff(i: usize, j: usize) -> (Factor, bool) {
        // returns the canonical factor and whether a sign flip (x_j - x_i =
        // -(x_i - x_j)) was applied
        if i < j {
            (Factor::Diff(i, j), false)
        } else {
            assert!(j < i);
            (Factor::Diff(j, i), true)
        }
    }

    pub fn involves(&self, var: usize) -> bool {
        match *self {
            Factor::Diff(i, j) => var == i || var == j,
            Factor::P(i) | Factor::X(i) => var == i,
        }
    }

    /// A variable the factor is monic-or-rational-leading in, used for exact
    /// division.
    pub fn principal_var(&self) -> usize {
        match *self {
            Factor::Diff(i, _) => i,
            Factor::P(i) | Factor::X(i) => i,
        }
    }

    pub fn degree_in(&self, var: usize, curve: &CurveSpec) -> i64 {
        match *self {
            Factor::Diff(i, j) => (var == i || var == j) as i64,
            Factor::P(i) => {
                if var == i {
                    curve.n() as i64
                } else {
                    0
                }
            }
            Factor::X(i) => (var == i) as i64,
        }
    }

    pub fn poly(&self, curve: &CurveSpec, nvars: usize) -> MultiPoly {
        match *self {
            Factor::Diff(i, j) => MultiPoly::var(nvars, i).sub(&MultiPoly::var(nvars, j)),
            Factor::P(i) => curve.p_multi(nvars, i),
            Factor::X(i) => MultiPoly::var(nvars, i),
        }
    }
}

impl fmt::Display for Factor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Factor::Diff(i, j) => write!(f, "(x{}-x{})", i + 1, j + 1),
            Factor::P(i) => write!(f, "p(x{})", i + 1),
            Factor::X(i) => write!(f, "x{}", i + 1),
        }
    }
}

/// numerator / prod factor^exponent.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RationalExpr {
    pub num: MultiPoly,
    pub den: BTreeMap<Factor, u32>,
}

impl RationalExpr {
    pub fn zero(nvars: usize) -> Self {
        RationalExpr {
            num: MultiPoly::zero(nvars),
            den: BTreeMap::new(),
        }
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        RationalExpr {
            num,
            den: BTreeMap::new(),
        }
    }

    pub fn new(num: MultiPoly, den: BTreeMap<Factor, u32>, curve: &CurveSpec) -> Self {
        let mut out = RationalExpr { num, den };
        out.normalize(curve);
        out
    }

    pub fn nvars(&self) -> usize {
        self.num.nvars()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    fn normalize(&mut self, curve: &CurveSpec) {
        self.den.retain(|_, e| *e > 0);
        if self.num.is_zero() {
            self.den.clear();
            return;
        }
        // attempt exact cancellation against every stored factor
        let factors: Vec<Factor> = self.den.keys().cloned().collect();
        for f in factors {
            let poly = f.poly(curve, self.num.nvars());
            let var = f.principal_var();
            while self.den.get(&f).copied().unwrap_or(0) > 0 {
                match self.num.exact_div(&poly, var) {
                    Some(q) => {
                        self.num = q;
                        let e = self.den.get_mut(&f).unwrap();
                        *e -= 1;
                        if *e == 0 {
                            self.den.remove(&f);
                        }
                    }
                    None => break,
                }
            }
        }
    }

    /// Multiplies by prod factor^e, i.e. extends the denominator.
    pub fn div_factor(&self, f: Factor, e: u32, curve: &CurveSpec) -> RationalExpr {
        let mut den = self.den.clone();
        *den.entry(f).or_insert(0) += e;
        RationalExpr::new(self.num.clone(), den, curve)
    }

    pub fn mul_poly(&self, p: &MultiPoly, curve: &CurveSpec) -> RationalExpr {
        RationalExpr::new(self.num.mul(p), self.den.clone(), curve)
    }

    pub fn scale(&self, c: &ParamPoly) -> RationalExpr {
        RationalExpr {
            num: self.num.scale(c),
            den: if c.is_zero() {
                BTreeMap::new()
            } else {
                self.den.clone()
            },
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> RationalExpr {
        self.scale(&ParamPoly::constant(r.clone()))
    }

    pub fn neg(&self) -> RationalExpr {
        RationalExpr {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn add(&self, other: &RationalExpr, curve: &CurveSpec) -> RationalExpr {
        // common denominator: factor-wise max exponents
        let mut den: BTreeMap<Factor, u32> = self.den.clone();
        for (f, e) in &other.den {
            let v = den.entry(*f).or_insert(0);
            *v = (*v).max(*e);
        }
        let lift = |r: &RationalExpr| -> MultiPoly {
            let mut num = r.num.clone();
            for (f, e) in &den {
                let have = r.den.get(f).copied().unwrap_or(0);
                if *e > have {
                    num = num.mul(&f.poly(curve, num.nvars()).pow(e - have));
                }
            }
            num
        };
        RationalExpr::new(lift(self).add(&lift(other)), den, curve)
    }

    pub fn sub(&self, other: &RationalExpr, curve: &CurveSpec) -> RationalExpr {
        self.add(&other.neg(), curve)
    }

    pub fn mul(&self, other: &RationalExpr, curve: &CurveSpec) -> RationalExpr {
        let mut den = self.den.clone();
        for (f, e) in &other.den {
            *den.entry(*f).or_insert(0) += e;
        }
        RationalExpr::new(self.num.mul(&other.num), den, curve)
    }

    /// d/dx_var via the quotient rule, staying in factored form.
    pub fn derivative(&self, var: usize, curve: &CurveSpec) -> RationalExpr {
        let nvars = self.num.nvars();
        let involved: Vec<(Factor, u32)> = self
            .den
            .iter()
            .filter(|(f, _)| f.involves(var))
            .map(|(f, e)| (*f, *e))
            .collect();
        // d(N / D_inv D_inert) where D_inv = prod f_i^{e_i} (involving var):
        // [N' prod f_i - N sum_i e_i f_i' prod_{j != i} f_j] / (D_inv * prod f_i)
        let mut num = self.num.derivative(var);
        for (f, _) in &involved {
            num = num.mul(&f.poly(curve, nvars));
        }
        for (idx, (f, e)) in involved.iter().enumerate() {
            let fprime = f.poly(curve, nvars).derivative(var);
            if fprime.is_zero() {
                continue;
            }
            let mut term = self.num.mul(&fprime).scale_rat(&Rat::from_integer((*e).into()));
            for (jdx, (g, _)) in involved.iter().enumerate() {
                if jdx != idx {
                    term = term.mul(&g.poly(curve, nvars));
                }
            }
            num = num.sub(&term);
        }
        let mut den = self.den.clone();
        for (f, _) in &involved {
            *den.entry(*f).or_insert(0) += 1;
        }
        RationalExpr::new(num, den, curve)
    }

    pub fn substitute_param(&self, s: &Symbol, value: &ParamPoly, curve: &CurveSpec) -> RationalExpr {
        RationalExpr::new(self.num.substitute_param(s, value), self.den.clone(), curve)
    }

    /// Evaluates at rational coordinates; the denominator must not vanish.
    pub fn eval(
        &self,
        xs: &[Rat],
        params: &BTreeMap<Symbol, Rat>,
        curve: &CurveSpec,
    ) -> Rat {
        let mut value = self.num.eval(xs, params);
        for (f, e) in &self.den {
            let fv = f.poly(curve, xs.len()).eval(xs, params);
            assert!(!fv.is_zero(), "denominator factor {f} vanishes at sample point");
            for _ in 0..*e {
                value /= &fv;
            }
        }
        value
    }

    /// Remaps point indices (old var i -> map[i]) into an nvars-point
    /// context. The map must be injective on the used variables; reversing a
    /// Diff pair moves the sign into the numerator.
    pub fn remap(&self, map: &[usize], nvars: usize) -> RationalExpr {
        let mut sign_flip = false;
        let den = self
            .den
            .iter()
            .map(|(f, e)| {
                let nf = match *f {
                    Factor::Diff(i, j) => {
                        let (nf, flipped) = Factor::diff(map[i], map[j]);
                        if flipped && e % 2 == 1 {
                            sign_flip = !sign_flip;
                        }
                        nf
                    }
                    Factor::P(i) => Factor::P(map[i]),
                    Factor::X(i) => Factor::X(map[i]),
                };
                (nf, *e)
            })
            .collect();
        let mut num = self.num.remap(map, nvars);
        if sign_flip {
            num = num.neg();
        }
        RationalExpr { num, den }
    }
}

impl fmt::Display for RationalExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_empty() {
            return write!(f, "{}", self.num);
        }
        write!(f, "[{}] / ", self.num)?;
        let mut first = true;
        for (fac, e) in &self.den {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{fac}")?;
            } else {
                write!(f, "{fac}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Subset of points as a bitmask (bit i = point i, 0-based).
pub type Subset = u8;

pub fn subset_contains(s: Subset, i: usize) -> bool {
    s & (1 << i) != 0
}

pub fn subset_name(s: Subset, nvars: usize) -> String {
    let mut out = String::new();
    for i in 0..nvars {
        if subset_contains(s, i) {
            out.push_str(&format!("y{}", i + 1));
        }
    }
    if out.is_empty() {
        out.push('1');
    }
    out
}

/// An element of the N-point function field, reduced so that every y-exponent
/// is 0 or 1.
#[derive(Clone, Debug)]
pub struct GaloisElement {
    curve: Arc<CurveSpec>,
    nvars: usize,
    comps: BTreeMap<Subset, RationalExpr>,
}

impl GaloisElement {
    pub fn zero(curve: Arc<CurveSpec>, nvars: usize) -> Self {
        GaloisElement {
            curve,
            nvars,
            comps: BTreeMap::new(),
        }
    }

    pub fn from_component(curve: Arc<CurveSpec>, nvars: usize, s: Subset, r: RationalExpr) -> Self {
        let mut out = GaloisElement::zero(curve, nvars);
        out.set(s, r);
        out
    }

    pub fn from_poly(curve: Arc<CurveSpec>, p: MultiPoly) -> Self {
        let nvars = p.nvars();
        GaloisElement::from_component(curve, nvars, 0, RationalExpr::from_poly(p))
    }

    pub fn scalar(curve: Arc<CurveSpec>, nvars: usize, c: ParamPoly) -> Self {
        GaloisElement::from_poly(curve.clone(), MultiPoly::constant(nvars, c))
    }

    pub fn curve(&self) -> &Arc<CurveSpec> {
        &self.curve
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.comps.is_empty()
    }

    pub fn components(&self) -> impl Iterator<Item = (&Subset, &RationalExpr)> {
        self.comps.iter()
    }

    pub fn component(&self, s: Subset) -> RationalExpr {
        self.comps
            .get(&s)
            .cloned()
            .unwrap_or_else(|| RationalExpr::zero(self.nvars))
    }

    pub fn set(&mut self, s: Subset, r: RationalExpr) {
        if r.is_zero() {
            self.comps.remove(&s);
        } else {
            assert_eq!(r.nvars(), self.nvars);
            self.comps.insert(s, r);
        }
    }

    fn assert_same_context(&self, other: &GaloisElement) {
        assert_eq!(self.nvars, other.nvars, "point-count mismatch");
        assert!(
            Arc::ptr_eq(&self.curve, &other.curve) || curves_equal(&self.curve, &other.curve),
            "elements belong to different curves"
        );
    }

    pub fn add(&self, other: &GaloisElement) -> GaloisElement {
        self.assert_same_context(other);
        let mut out = self.clone();
        for (s, r) in &other.comps {
            let sum = out.component(*s).add(r, &self.curve);
            out.set(*s, sum);
        }
        out
    }

    pub fn sub(&self, other: &GaloisElement) -> GaloisElement {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> GaloisElement {
        GaloisElement {
            curve: self.curve.clone(),
            nvars: self.nvars,
            comps: self.comps.iter().map(|(s, r)| (*s, r.neg())).collect(),
        }
    }

    pub fn mul(&self, other: &GaloisElement) -> GaloisElement {
        self.assert_same_context(other);
        let mut out = GaloisElement::zero(self.curve.clone(), self.nvars);
        for (s1, r1) in &self.comps {
            for (s2, r2) in &other.comps {
                let mut r = r1.mul(r2, &self.curve);
                // y_i^2 -> p(x_i) on the overlap
                let overlap = s1 & s2;
                for i in 0..self.nvars {
                    if subset_contains(overlap, i) {
                        r = r.mul_poly(&self.curve.p_multi(self.nvars, i), &self.curve);
                    }
                }
                let target = s1 ^ s2;
                let sum = out.component(target).add(&r, &self.curve);
                out.set(target, sum);
            }
        }
        out
    }

    pub fn mul_rexpr(&self, r: &RationalExpr) -> GaloisElement {
        let mut out = GaloisElement::zero(self.curve.clone(), self.nvars);
        for (s, c) in &self.comps {
            out.set(*s, c.mul(r, &self.curve));
        }
        out
    }

    pub fn mul_poly(&self, p: &MultiPoly) -> GaloisElement {
        self.mul_rexpr(&RationalExpr::from_poly(p.clone()))
    }

    pub fn scale(&self, c: &ParamPoly) -> GaloisElement {
        if c.is_zero() {
            return GaloisElement::zero(self.curve.clone(), self.nvars);
        }
        GaloisElement {
            curve: self.curve.clone(),
            nvars: self.nvars,
            comps: self.comps.iter().map(|(s, r)| (*s, r.scale(c))).collect(),
        }
    }

    pub fn scale_rat(&self, r: &Rat) -> GaloisElement {
        self.scale(&ParamPoly::constant(r.clone()))
    }

    pub fn div_factor(&self, f: Factor, e: u32) -> GaloisElement {
        let mut out = GaloisElement::zero(self.curve.clone(), self.nvars);
        for (s, r) in &self.comps {
            out.set(*s, r.div_factor(f, e, &self.curve));
        }
        out
    }

    /// Multiplication by y_i.
    pub fn mul_y(&self, i: usize) -> GaloisElement {
        let mut out = GaloisElement::zero(self.curve.clone(), self.nvars);
        for (s, r) in &self.comps {
            if subset_contains(*s, i) {
                // y_i^2 = p(x_i)
                let r2 = r.mul_poly(&self.curve.p_multi(self.nvars, i), &self.curve);
                let t = s & !(1 << i);
                out.set(t, out.component(t).add(&r2, &self.curve));
            } else {
                let t = s | (1 << i);
                out.set(t, out.component(t).add(r, &self.curve));
            }
        }
        out
    }

    /// Galois splitting at point i: self = even + y_i * odd, where neither
    /// part involves y_i.
    pub fn galois_split(&self, i: usize) -> (GaloisElement, GaloisElement) {
        let mut even = GaloisElement::zero(self.curve.clone(), self.nvars);
        let mut odd = GaloisElement::zero(self.curve.clone(), self.nvars);
        for (s, r) in &self.comps {
            if subset_contains(*s, i) {
                odd.set(s & !(1 << i), r.clone());
            } else {
                even.set(*s, r.clone());
            }
        }
        (even, odd)
    }

    /// d/dx_i, using y_i' = p'(x_i) y_i / (2 p(x_i)) on y_i-carrying parts.
    pub fn derivative(&self, i: usize) -> GaloisElement {
        let mut out = GaloisElement::zero(self.curve.clone(), self.nvars);
        let p_prime = self.curve.p_prime_multi(self.nvars, i);
        for (s, r) in &self.comps {
            let mut d = r.derivative(i, &self.curve);
            if subset_contains(*s, i) {
                let extra = r
                    .mul_poly(&p_prime, &self.curve)
                    .scale_rat(&rat(1, 2))
                    .div_factor(Factor::P(i), 1, &self.curve);
                d = d.add(&extra, &self.curve);
            }
            out.set(*s, out.component(*s).add(&d, &self.curve));
        }
        out
    }

    pub fn substitute_param(&self, sym: &Symbol, value: &ParamPoly) -> GaloisElement {
        let mut out = GaloisElement::zero(self.curve.clone(), self.nvars);
        for (s, r) in &self.comps {
            let nr = r.substitute_param(sym, value, &self.curve);
            if !nr.is_zero() {
                out.set(*s, nr);
            }
        }
        out
    }

    /// Evaluates at a rational point of the curve product: xs with chosen
    /// square roots ys (ys[i]^2 = p(xs[i]) is the caller's responsibility,
    /// possibly in a quadratic extension handled by the caller).
    pub fn eval(
        &self,
        xs: &[Rat],
        ys: &[Rat],
        params: &BTreeMap<Symbol, Rat>,
    ) -> Rat {
        let mut total = Rat::zero();
        for (s, r) in &self.comps {
            let mut v = r.eval(xs, params, &self.curve);
            for i in 0..self.nvars {
                if subset_contains(*s, i) {
                    v *= &ys[i];
                }
            }
            total += v;
        }
        total
    }

    /// Remaps point indices with an order-preserving map into a new context.
    pub fn remap(&self, map: &[usize], nvars: usize) -> GaloisElement {
        let mut out = GaloisElement::zero(self.curve.clone(), nvars);
        for (s, r) in &self.comps {
            let mut t: Subset = 0;
            for i in 0..self.nvars {
                if subset_contains(*s, i) {
                    t |= 1 << map[i];
                }
            }
            out.set(t, r.remap(map, nvars));
        }
        out
    }

    /// Canonical rendering: components in increasing subset order.
    pub fn render(&self) -> String {
        if self.comps.is_empty() {
            return "0".into();
        }
        let mut out = String::new();
        for (s, r) in &self.comps {
            if !out.is_empty() {
                out.push_str("\n+ ");
            }
            out.push_str(&format!("{} * {}", subset_name(*s, self.nvars), r));
        }
        out
    }
}

fn curves_equal(a: &CurveSpec, b: &CurveSpec) -> bool {
    a.n() == b.n() && a.coeffs() == b.coeffs()
}

impl PartialEq for GaloisElement {
    fn eq(&self, other: &Self) -> bool {
        if self.nvars != other.nvars || !curves_equal(&self.curve, &other.curve) {
            return false;
        }
        self.sub(other).is_zero()
    }
}

impl fmt::Display for GaloisElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render())
    }
}

/// A raw expression with unreduced y-powers: map from per-point y-exponent
/// vectors to rational parts. Only used as the input of `reduce`.
#[derive(Clone, Debug, Default)]
pub struct RawYExpr {
    pub terms: Vec<(Vec<u32>, RationalExpr)>,
}

/// Folds every y_i^2 into p(x_i): the defining relation of the function field
/// K = C[x, y] / <y^2 - p(x)>.
pub fn reduce(raw: &RawYExpr, curve: &Arc<CurveSpec>, nvars: usize) -> GaloisElement {
    let mut out = GaloisElement::zero(curve.clone(), nvars);
    for (ypows, r) in &raw.terms {
        assert_eq!(ypows.len(), nvars);
        let mut rexpr = r.clone();
        let mut subset: Subset = 0;
        for (i, &e) in ypows.iter().enumerate() {
            let q = e / 2;
            if q > 0 {
                rexpr = rexpr.mul_poly(&curve.p_multi(nvars, i).pow(q), curve);
            }
            if e % 2 == 1 {
                subset |= 1 << i;
            }
        }
        out.set(subset, out.component(subset).add(&rexpr, curve));
    }
    out
}

/// Embeds a reduced element back into raw form (for the idempotence check).
pub fn to_raw(e: &GaloisElement) -> RawYExpr {
    let mut terms = Vec::new();
    for (s, r) in e.components() {
        let ypows = (0..e.nvars())
            .map(|i| subset_contains(*s, i) as u32)
            .collect();
        terms.push((ypows, r.clone()));
    }
    RawYExpr { terms }
}

/// f(x_i, x_j) = ((y_i + y_j)/(x_i - x_j))^2 expanded over the Galois basis:
/// (p_i + p_j + 2 y_i y_j)/(x_i - x_j)^2.
pub fn f_pair(curve: &Arc<CurveSpec>, nvars: usize, i: usize, j: usize) -> GaloisElement {
    let (d, _) = Factor::diff(i, j);
    let pi = curve.p_multi(nvars, i);
    let pj = curve.p_multi(nvars, j);
    let mut out = GaloisElement::zero(curve.clone(), nvars);
    out.set(
        0,
        RationalExpr::new(pi.add(&pj), BTreeMap::from([(d, 2)]), curve),
    );
    out.set(
        (1 << i) | (1 << j),
        RationalExpr::new(
            MultiPoly::constant(nvars, ParamPoly::constant(rat(2, 1))),
            BTreeMap::from([(d, 2)]),
            curve,
        ),
    );
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::sample_curve_g2;
    use crate::rat::rati;

    fn ctx() -> (Arc<CurveSpec>, usize) {
        (Arc::new(sample_curve_g2()), 2)
    }

    #[test]
    fn reduce_defining_relation() {
        let (curve, n) = ctx();
        // y1^2 -> p(x1) in the empty-subset component
        let raw = RawYExpr {
            terms: vec![(vec![2, 0], RationalExpr::from_poly(MultiPoly::one(n)))],
        };
        let e = reduce(&raw, &curve, n);
        assert_eq!(e.component(0).num, curve.p_multi(n, 0));
        assert!(e.component(0b01).is_zero());

        // y1^3 -> p(x1) y1
        let raw = RawYExpr {
            terms: vec![(vec![3, 0], RationalExpr::from_poly(MultiPoly::one(n)))],
        };
        let e = reduce(&raw, &curve, n);
        assert!(e.component(0).is_zero());
        assert_eq!(e.component(0b01).num, curve.p_multi(n, 0));
    }

    #[test]
    fn reduce_square_of_sum() {
        let (curve, n) = ctx();
        // (y1 + y2)^2 = p(x1) + p(x2) + 2 y1 y2
        let one = RationalExpr::from_poly(MultiPoly::one(n));
        let y1 = GaloisElement::from_component(curve.clone(), n, 0b01, one.clone());
        let y2 = GaloisElement::from_component(curve.clone(), n, 0b10, one);
        let sq = y1.add(&y2).mul(&y1.add(&y2));
        assert_eq!(
            sq.component(0).num,
            curve.p_multi(n, 0).add(&curve.p_multi(n, 1))
        );
        assert_eq!(
            sq.component(0b11).num,
            MultiPoly::constant(n, ParamPoly::constant(rati(2)))
        );
    }

    #[test]
    fn reduce_idempotent() {
        let (curve, n) = ctx();
        let raw = RawYExpr {
            terms: vec![
                (vec![2, 1], RationalExpr::from_poly(MultiPoly::var(n, 0))),
                (vec![1, 0], RationalExpr::from_poly(MultiPoly::var(n, 1))),
            ],
        };
        let e = reduce(&raw, &curve, n);
        let e2 = reduce(&to_raw(&e), &curve, n);
        assert_eq!(e, e2);
    }

    #[test]
    fn split_round_trip() {
        let (curve, n) = ctx();
        // f(x1) + y1 y2 g: split at i = 1 gives even = f, odd = y2 g
        let f = RationalExpr::from_poly(MultiPoly::var(n, 0).pow(2));
        let g = RationalExpr::from_poly(MultiPoly::var(n, 1));
        let mut e = GaloisElement::zero(curve.clone(), n);
        e.set(0, f.clone());
        e.set(0b11, g.clone());
        let (even, odd) = e.galois_split(0);
        assert_eq!(even.component(0), f);
        assert_eq!(odd.component(0b10), g);
        // recombine
        let back = even.add(&odd.mul_y(0));
        assert_eq!(back, e);
    }

    #[test]
    fn cancellation_against_diff() {
        let (curve, n) = ctx();
        // (x1^2 - x2^2)/(x1 - x2) cancels to x1 + x2
        let num = MultiPoly::var(n, 0).pow(2).sub(&MultiPoly::var(n, 1).pow(2));
        let r = RationalExpr::new(num, BTreeMap::from([(Factor::Diff(0, 1), 1)]), &curve);
        assert!(r.den.is_empty());
        assert_eq!(r.num, MultiPoly::var(n, 0).add(&MultiPoly::var(n, 1)));
    }

    #[test]
    fn derivative_on_y_component() {
        let (curve, n) = (Arc::new(sample_curve_g2()), 1);
        // d/dx (y) = y p'/(2p)
        let e = GaloisElement::from_component(
            curve.clone(),
            n,
            0b1,
            RationalExpr::from_poly(MultiPoly::one(n)),
        );
        let d = e.derivative(0);
        let expect = RationalExpr::new(
            curve.p_prime_multi(n, 0).scale_rat(&rat(1, 2)),
            BTreeMap::from([(Factor::P(0), 1)]),
            &curve,
        );
        assert_eq!(d.component(0b1), expect);
        assert!(d.component(0).is_zero());
    }

    #[test]
    fn elements_are_shareable_across_threads() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<GaloisElement>();
        assert_send_sync::<RationalExpr>();
        assert_send_sync::<crate::curve::CurveSpec>();
    }

    #[test]
    fn eval_consistency() {
        let (curve, n) = ctx();
        // evaluate (y1 + y2)^2 at x1 = 2, x2 = 3 with y-values in Q(sqrt):
        // here we use the identity component only, which is y-free
        let e = f_pair(&curve, n, 0, 1);
        let xs = [rati(2), rati(3)];
        let params = BTreeMap::new();
        // even part: (p(2) + p(3))/(2-3)^2 = (30 + 240)/1 = 270
        let even = e.component(0).eval(&xs, &params, &curve);
        assert_eq!(even, rati(270));
    }
}
