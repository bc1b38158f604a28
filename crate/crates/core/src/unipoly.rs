//! Dense univariate polynomials over the parameter ring.
//!
//! Coefficients are stored ascending; the vector is empty for zero and its
//! last entry is nonzero otherwise. Euclidean operations (divrem, gcd) are
//! available when every coefficient is a plain rational.

use crate::param::ParamPoly;
use crate::rat::{Rat, rat_one};
use num_traits::Zero;

#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UniPoly {
    coeffs: Vec<ParamPoly>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn from_coeffs(mut coeffs: Vec<ParamPoly>) -> Self {
        while coeffs.last().is_some_and(ParamPoly::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_rats(rs: &[Rat]) -> Self {
        UniPoly::from_coeffs(rs.iter().map(|r| ParamPoly::constant(r.clone())).collect())
    }

    pub fn constant(c: ParamPoly) -> Self {
        UniPoly::from_coeffs(vec![c])
    }

    pub fn one() -> Self {
        UniPoly::constant(ParamPoly::one())
    }

    pub fn x() -> Self {
        UniPoly::from_coeffs(vec![ParamPoly::zero(), ParamPoly::one()])
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeff(&self, k: usize) -> ParamPoly {
        self.coeffs.get(k).cloned().unwrap_or_else(ParamPoly::zero)
    }

    pub fn coeffs(&self) -> &[ParamPoly] {
        &self.coeffs
    }

    pub fn leading(&self) -> Option<&ParamPoly> {
        self.coeffs.last()
    }

    pub fn add(&self, other: &UniPoly) -> UniPoly {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.coeff(i).add(&other.coeff(i)));
        }
        UniPoly::from_coeffs(out)
    }

    pub fn sub(&self, other: &UniPoly) -> UniPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> UniPoly {
        UniPoly {
            coeffs: self.coeffs.iter().map(ParamPoly::neg).collect(),
        }
    }

    pub fn mul(&self, other: &UniPoly) -> UniPoly {
        if self.is_zero() || other.is_zero() {
            return UniPoly::zero();
        }
        let mut out = vec![ParamPoly::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add(&a.mul(b));
            }
        }
        UniPoly::from_coeffs(out)
    }

    pub fn scale(&self, c: &ParamPoly) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.iter().map(|a| a.mul(c)).collect())
    }

    pub fn scale_rat(&self, r: &Rat) -> UniPoly {
        self.scale(&ParamPoly::constant(r.clone()))
    }

    pub fn pow(&self, e: u32) -> UniPoly {
        let mut out = UniPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn derivative(&self) -> UniPoly {
        if self.coeffs.len() <= 1 {
            return UniPoly::zero();
        }
        UniPoly::from_coeffs(
            self.coeffs[1..]
                .iter()
                .enumerate()
                .map(|(i, c)| c.scale(&Rat::from_integer(((i + 1) as i64).into())))
                .collect(),
        )
    }

    /// self(g) by Horner.
    pub fn compose(&self, g: &UniPoly) -> UniPoly {
        let mut out = UniPoly::zero();
        for c in self.coeffs.iter().rev() {
            out = out.mul(g).add(&UniPoly::constant(c.clone()));
        }
        out
    }

    pub fn eval_rat(&self, x: &Rat) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for c in self.coeffs.iter().rev() {
            out = out.scale(x).add(c);
        }
        out
    }

    /// All coefficients as rationals, if parameter-free.
    pub fn as_rational_coeffs(&self) -> Option<Vec<Rat>> {
        self.coeffs.iter().map(ParamPoly::as_rational).collect()
    }

    /// Parity split: even, odd polynomials in t with
    /// self(x) = even(x^2) + x * odd(x^2).
    pub fn parity_split(&self) -> (UniPoly, UniPoly) {
        let mut even = Vec::new();
        let mut odd = Vec::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if i % 2 == 0 {
                even.push(c.clone());
            } else {
                odd.push(c.clone());
            }
        }
        (UniPoly::from_coeffs(even), UniPoly::from_coeffs(odd))
    }

    /// Reconstructs from a parity split: even(x^2) + x * odd(x^2).
    pub fn from_parity_split(even: &UniPoly, odd: &UniPoly) -> UniPoly {
        let n = even.coeffs.len().max(odd.coeffs.len()) * 2;
        let mut out = vec![ParamPoly::zero(); n + 1];
        for (i, c) in even.coeffs.iter().enumerate() {
            out[2 * i] = c.clone();
        }
        for (i, c) in odd.coeffs.iter().enumerate() {
            out[2 * i + 1] = c.clone();
        }
        UniPoly::from_coeffs(out)
    }

    /// Euclidean division over Q; requires rational coefficients on both
    /// sides. Returns (quotient, remainder).
    pub fn divrem_rational(&self, divisor: &UniPoly) -> Option<(UniPoly, UniPoly)> {
        let a = self.as_rational_coeffs()?;
        let b = divisor.as_rational_coeffs()?;
        assert!(!b.is_empty(), "division by zero polynomial");
        let mut rem = a;
        let db = b.len() - 1;
        let lead = b[db].clone();
        if rem.len() <= db {
            return Some((UniPoly::zero(), UniPoly::from_rats(&rem)));
        }
        let mut quot = vec![Rat::zero(); rem.len() - db];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + db] / &lead;
            if c.is_zero() {
                continue;
            }
            for (j, bj) in b.iter().enumerate() {
                let t = &c * bj;
                rem[k + j] -= t;
            }
            quot[k] = c;
        }
        Some((UniPoly::from_rats(&quot), UniPoly::from_rats(&rem)))
    }

    /// Monic gcd over Q; requires rational coefficients.
    pub fn gcd_rational(&self, other: &UniPoly) -> Option<UniPoly> {
        let mut a = self.clone();
        let mut b = other.clone();
        a.as_rational_coeffs()?;
        b.as_rational_coeffs()?;
        while !b.is_zero() {
            let (_, r) = a.divrem_rational(&b)?;
            a = b;
            b = r;
        }
        if a.is_zero() {
            return Some(a);
        }
        let lead = a.leading().unwrap().as_rational()?;
        Some(a.scale_rat(&(rat_one() / lead)))
    }

    /// Embeds into an N-variable polynomial in the variable `var`.
    pub fn to_multipoly(&self, nvars: usize, var: usize) -> crate::multipoly::MultiPoly {
        let mut out = crate::multipoly::MultiPoly::zero(nvars);
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            out = out.add(
                &crate::multipoly::MultiPoly::var_pow(nvars, var, i as u16).scale(c),
            );
        }
        out
    }
}

impl std::fmt::Display for UniPoly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            if i == 0 {
                write!(f, "({c})")?;
            } else if i == 1 {
                write!(f, "({c})*x")?;
            } else {
                write!(f, "({c})*x^{i}")?;
            }
        }
        Ok(())
    }
}
