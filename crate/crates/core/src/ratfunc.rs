//! Univariate rational functions and the Schwarzian derivative.
//!
//! A `UniRat` is a numerator/denominator pair. Equality is decided by
//! cross-multiplication, which needs no gcd; reduction to lowest terms is
//! performed when both parts have rational coefficients (the only case where
//! univariate gcd over Q applies).

use crate::error::Error;
use crate::param::ParamPoly;
use crate::rat::{rat, rat_one};
use crate::unipoly::UniPoly;

#[derive(Clone, Debug)]
pub struct UniRat {
    pub num: UniPoly,
    pub den: UniPoly,
}

impl UniRat {
    pub fn new(num: UniPoly, den: UniPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut out = UniRat { num, den };
        out.reduce();
        out
    }

    pub fn from_poly(p: UniPoly) -> Self {
        UniRat {
            num: p,
            den: UniPoly::one(),
        }
    }

    pub fn zero() -> Self {
        UniRat::from_poly(UniPoly::zero())
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// gcd-reduces when both parts are over Q; normalizes the denominator to
    /// be monic in that case.
    pub fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = UniPoly::one();
            return;
        }
        let (Some(_), Some(_)) = (
            self.num.as_rational_coeffs(),
            self.den.as_rational_coeffs(),
        ) else {
            return;
        };
        if let Some(g) = self.num.gcd_rational(&self.den) {
            if g.degree().unwrap_or(0) > 0 {
                self.num = self.num.divrem_rational(&g).unwrap().0;
                self.den = self.den.divrem_rational(&g).unwrap().0;
            }
        }
        if let Some(lead) = self.den.leading().and_then(ParamPoly::as_rational) {
            let inv = rat_one() / lead;
            self.num = self.num.scale_rat(&inv);
            self.den = self.den.scale_rat(&inv);
        }
    }

    pub fn add(&self, other: &UniRat) -> UniRat {
        UniRat::new(
            self.num
                .mul(&other.den)
                .add(&other.num.mul(&self.den)),
            self.den.mul(&other.den),
        )
    }

    pub fn sub(&self, other: &UniRat) -> UniRat {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UniRat {
        UniRat {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, other: &UniRat) -> UniRat {
        UniRat::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &UniRat) -> UniRat {
        assert!(!other.is_zero(), "division by zero rational function");
        UniRat::new(self.num.mul(&other.den), self.den.mul(&other.num))
    }

    pub fn scale(&self, c: &ParamPoly) -> UniRat {
        UniRat::new(self.num.scale(c), self.den.clone())
    }

    pub fn pow(&self, e: u32) -> UniRat {
        let mut out = UniRat::from_poly(UniPoly::one());
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Quotient rule.
    pub fn derivative(&self) -> UniRat {
        UniRat::new(
            self.num
                .derivative()
                .mul(&self.den)
                .sub(&self.num.mul(&self.den.derivative())),
            self.den.mul(&self.den),
        )
    }

    /// self(g) for rational g.
    pub fn compose(&self, g: &UniRat) -> UniRat {
        let dn = self.num.degree().unwrap_or(0);
        let dd = self.den.degree().unwrap_or(0);
        let d = dn.max(dd);
        // N(g) * gden^d and D(g) * gden^d are polynomials
        let eval = |p: &UniPoly| -> UniPoly {
            let mut acc = UniPoly::zero();
            for (k, c) in p.coeffs().iter().enumerate() {
                let term = g.num.pow(k as u32).mul(&g.den.pow((d - k) as u32));
                acc = acc.add(&term.scale(c));
            }
            acc
        };
        UniRat::new(eval(&self.num), eval(&self.den))
    }

    /// Cross-multiplied equality; exact, gcd-free.
    pub fn equal(&self, other: &UniRat) -> bool {
        self.num
            .mul(&other.den)
            .sub(&other.num.mul(&self.den))
            .is_zero()
    }
}

impl std::fmt::Display for UniRat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

/// Schwarzian derivative S(f) = f'''/f' - (3/2)(f''/f')^2.
pub fn schwarzian(f: &UniRat) -> Result<UniRat, Error> {
    let f1 = f.derivative();
    if f1.is_zero() {
        return Err(Error::DerivativeVanishes);
    }
    let f2 = f1.derivative();
    let f3 = f2.derivative();
    let a = f3.div(&f1);
    let b = f2.div(&f1);
    Ok(a.sub(&b.mul(&b).scale(&ParamPoly::constant(rat(3, 2)))))
}

/// S(p) = p'''/p' - (3/2)(p''/p')^2 for a polynomial p.
pub fn schwarzian_poly(p: &UniPoly) -> Result<UniRat, Error> {
    schwarzian(&UniRat::from_poly(p.clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::param::Symbol;
    use crate::rat::rati;

    fn xp() -> UniPoly {
        UniPoly::x()
    }

    #[test]
    fn schwarzian_of_mobius_vanishes_symbolically() {
        // f = (a x + b)/(c x + d) with free symbols; S(f) = 0 identically.
        let a = ParamPoly::var(Symbol::new("ma"));
        let b = ParamPoly::var(Symbol::new("mb"));
        let c = ParamPoly::var(Symbol::new("mc"));
        let d = ParamPoly::var(Symbol::new("md"));
        let num = xp().scale(&a).add(&UniPoly::constant(b));
        let den = xp().scale(&c).add(&UniPoly::constant(d));
        let f = UniRat::new(num, den);
        let s = schwarzian(&f).unwrap();
        assert!(s.is_zero(), "S(mobius) = {s}");
    }

    #[test]
    fn schwarzian_of_x_squared() {
        // S(x^2) = -(3/2) x^-2
        let f = UniRat::from_poly(xp().mul(&xp()));
        let s = schwarzian(&f).unwrap();
        let expect = UniRat::new(
            UniPoly::constant(ParamPoly::constant(rat(-3, 2))),
            xp().mul(&xp()),
        );
        assert!(s.equal(&expect), "got {s}");
    }

    #[test]
    fn scale_invariance() {
        // S(lambda f) = S(f) for f = x^3, lambda = 7/3 and symbolic lambda
        let f = UniRat::from_poly(xp().pow(3));
        let s1 = schwarzian(&f).unwrap();
        let s2 = schwarzian(&f.scale(&ParamPoly::constant(rat(7, 3)))).unwrap();
        assert!(s1.equal(&s2));
        let lam = ParamPoly::var(Symbol::new("lambda"));
        let s3 = schwarzian(&f.scale(&lam)).unwrap();
        // cross-multiplied equality still holds with the symbol present
        assert!(s1.equal(&s3));
    }

    #[test]
    fn constant_rejected() {
        let f = UniRat::from_poly(UniPoly::constant(ParamPoly::constant(rati(5))));
        assert!(matches!(schwarzian(&f), Err(Error::DerivativeVanishes)));
    }

    #[test]
    fn chain_rule_polynomials() {
        // S(f o g) = (g')^2 S(f) o g + S(g) for f = x^3 + x, g = x^2 + 2x
        let f = UniRat::from_poly(xp().pow(3).add(&xp()));
        let g = UniRat::from_poly(xp().pow(2).add(&xp().scale_rat(&rati(2))));
        let lhs = schwarzian(&f.compose(&g)).unwrap();
        let gp = g.derivative();
        let rhs = gp
            .mul(&gp)
            .mul(&schwarzian(&f).unwrap().compose(&g))
            .add(&schwarzian(&g).unwrap());
        assert!(lhs.equal(&rhs));
    }
}
