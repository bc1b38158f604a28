//! Arbitrary-precision rational scalars.
//!
//! `Rat` is the coefficient type of everything in this crate. It is backed by
//! `num_rational::BigRational`, which already maintains the canonical form we
//! rely on: gcd(|num|, den) = 1, den > 0, zero is 0/1. No floating point is
//! used anywhere in the engine.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type Rat = BigRational;

/// `n/d` as an exact rational. Panics on `d == 0`.
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Integer `n` as a rational.
pub fn rati(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

pub fn rat_zero() -> Rat {
    BigRational::zero()
}

pub fn rat_one() -> Rat {
    BigRational::one()
}

/// Binomial coefficient C(n, k) as a rational.
pub fn binomial(n: u64, k: u64) -> Rat {
    if k > n {
        return rat_zero();
    }
    let mut acc = BigInt::one();
    for i in 0..k.min(n - k) {
        acc = acc * BigInt::from(n - i) / BigInt::from(i + 1);
    }
    BigRational::from_integer(acc)
}

/// Renders as `num/den`, or just `num` when the denominator is 1.
pub fn rat_display(r: &Rat) -> String {
    if r.denom().is_one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Always renders as `num/den`, for machine-readable serialization.
pub fn rat_display_full(r: &Rat) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Parses `num`, `num/den`, or a signed variant of either.
pub fn rat_parse(s: &str) -> Option<Rat> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(BigRational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(BigRational::from_integer(n))
    }
}

/// All positive divisors of `n` (|n| used; 0 yields an empty list).
pub fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    if n.is_zero() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut i = BigInt::one();
    while &i * &i <= n {
        if (&n % &i).is_zero() {
            out.push(i.clone());
            let j = &n / &i;
            if j != i {
                out.push(j);
            }
        }
        i += 1;
    }
    out.sort();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let r = rat(6, -4);
        assert_eq!(rat_display(&r), "-3/2");
        assert_eq!(rat(0, 5), rat_zero());
        assert_eq!(rat_display_full(&rat(0, 5)), "0/1");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["3/4", "-22/5", "17", "0"] {
            let r = rat_parse(s).unwrap();
            assert_eq!(rat_parse(&rat_display(&r)).unwrap(), r);
        }
        assert!(rat_parse("1/0").is_none());
        assert!(rat_parse("x").is_none());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), rati(10));
        assert_eq!(binomial(4, 0), rat_one());
        assert_eq!(binomial(3, 5), rat_zero());
    }

    #[test]
    fn divisor_list() {
        let ds = divisors(&BigInt::from(12));
        let ds: Vec<i64> = ds.iter().map(|d| i64::try_from(d).unwrap()).collect();
        assert_eq!(ds, vec![1, 2, 3, 4, 6, 12]);
    }
}
