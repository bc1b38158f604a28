//! Sparse multivariate polynomials in the point coordinates x_1..x_N with
//! `ParamPoly` coefficients.
//!
//! Exponent vectors are graded-lexicographically ordered, no zero coefficients
//! are stored, and the variable count is fixed per polynomial, so equality is
//! structural and rendering is deterministic.

use crate::error::Error;
use crate::param::{ParamPoly, Symbol};
use crate::rat::{binomial, rat_display_full, Rat};
use num_traits::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;

/// Exponent vector for x_1..x_N, graded-lex ordered.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct XMono(pub Vec<u16>);

impl XMono {
    pub fn ones(nvars: usize) -> Self {
        XMono(vec![0; nvars])
    }

    pub fn var(nvars: usize, var: usize, e: u16) -> Self {
        let mut v = vec![0; nvars];
        v[var] = e;
        XMono(v)
    }

    pub fn total_degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    pub fn mul(&self, other: &XMono) -> XMono {
        XMono(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a.checked_add(*b).expect("exponent overflow"))
                .collect(),
        )
    }
}

impl PartialOrd for XMono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for XMono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.total_degree()
            .cmp(&other.total_degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

/// Polynomial in x_1..x_N over the parameter ring.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct MultiPoly {
    nvars: usize,
    terms: BTreeMap<XMono, ParamPoly>,
}

/// One serialized term: exponent vector plus coefficient.
///
/// `coeff` is the canonical string of the parameter-ring coefficient; for
/// purely rational coefficients it is `num/den`.
#[derive(Serialize, Clone, Debug)]
pub struct SerTerm {
    pub exponents: Vec<u16>,
    pub coeff: String,
}

impl MultiPoly {
    pub fn zero(nvars: usize) -> Self {
        MultiPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: ParamPoly) -> Self {
        let mut out = MultiPoly::zero(nvars);
        out.insert(XMono::ones(nvars), c);
        out
    }

    pub fn one(nvars: usize) -> Self {
        MultiPoly::constant(nvars, ParamPoly::one())
    }

    pub fn var(nvars: usize, var: usize) -> Self {
        MultiPoly::var_pow(nvars, var, 1)
    }

    pub fn var_pow(nvars: usize, var: usize, e: u16) -> Self {
        assert!(var < nvars);
        let mut out = MultiPoly::zero(nvars);
        out.insert(XMono::var(nvars, var, e), ParamPoly::one());
        out
    }

    pub fn monomial(nvars: usize, m: XMono, c: ParamPoly) -> Self {
        assert_eq!(m.0.len(), nvars);
        let mut out = MultiPoly::zero(nvars);
        out.insert(m, c);
        out
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&XMono, &ParamPoly)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    fn insert(&mut self, m: XMono, c: ParamPoly) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().add(&c);
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    fn check_compatible(&self, other: &MultiPoly) -> Result<(), Error> {
        if self.nvars != other.nvars {
            return Err(Error::VariableMismatch {
                left: self.nvars,
                right: other.nvars,
            });
        }
        Ok(())
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.try_add(other).expect("variable tables must match")
    }

    pub fn try_add(&self, other: &MultiPoly) -> Result<MultiPoly, Error> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.try_sub(other).expect("variable tables must match")
    }

    pub fn try_sub(&self, other: &MultiPoly) -> Result<MultiPoly, Error> {
        self.check_compatible(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.insert(m.clone(), c.neg());
        }
        Ok(out)
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c.neg()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.try_mul(other).expect("variable tables must match")
    }

    pub fn try_mul(&self, other: &MultiPoly) -> Result<MultiPoly, Error> {
        self.check_compatible(other)?;
        let mut out = MultiPoly::zero(self.nvars);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.insert(m1.mul(m2), c1.mul(c2));
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &ParamPoly) -> MultiPoly {
        if c.is_zero() {
            return MultiPoly::zero(self.nvars);
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (m, v) in &self.terms {
            out.insert(m.clone(), v.mul(c));
        }
        out
    }

    pub fn scale_rat(&self, r: &Rat) -> MultiPoly {
        self.scale(&ParamPoly::constant(r.clone()))
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut out = MultiPoly::one(self.nvars);
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// Formal partial derivative with respect to x_var.
    pub fn derivative(&self, var: usize) -> MultiPoly {
        assert!(var < self.nvars, "variable out of range");
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut m2 = m.clone();
            m2.0[var] = e - 1;
            out.insert(m2, c.scale(&Rat::from_integer(e.into())));
        }
        out
    }

    /// Degree in x_var; None for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> Option<u16> {
        self.terms.keys().map(|m| m.0[var]).max()
    }

    /// Coefficient polynomials of x_var^0, x_var^1, .. x_var^deg.
    pub fn coeffs_in_var(&self, var: usize) -> Vec<MultiPoly> {
        let deg = match self.degree_in(var) {
            None => return Vec::new(),
            Some(d) => d as usize,
        };
        let mut out = vec![MultiPoly::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut m2 = m.clone();
            m2.0[var] = 0;
            out[e].insert(m2, c.clone());
        }
        out
    }

    /// Substitutes a polynomial for x_var.
    pub fn substitute_var(&self, var: usize, value: &MultiPoly) -> MultiPoly {
        assert_eq!(value.nvars, self.nvars);
        let coeffs = self.coeffs_in_var(var);
        let mut out = MultiPoly::zero(self.nvars);
        let mut power = MultiPoly::one(self.nvars);
        for c in coeffs {
            out = out.add(&c.mul(&power));
            power = power.mul(value);
        }
        out
    }

    /// Substitutes x_var -> x_dst + shift for a fresh formal shift, returning
    /// the coefficient polynomials of shift^0, shift^1, ... (exact binomial
    /// expansion; all coefficients are free of x_var).
    pub fn shift_var(&self, var: usize, dst: usize) -> Vec<MultiPoly> {
        assert!(var != dst);
        let deg = match self.degree_in(var) {
            None => return Vec::new(),
            Some(d) => d as usize,
        };
        let mut out = vec![MultiPoly::zero(self.nvars); deg + 1];
        for (m, c) in &self.terms {
            let e = m.0[var] as usize;
            let mut base = m.clone();
            base.0[var] = 0;
            // (x_dst + eps)^e
            for k in 0..=e {
                let mut m2 = base.clone();
                m2.0[dst] += (e - k) as u16;
                out[k].insert(m2, c.scale(&binomial(e as u64, k as u64)));
            }
        }
        while out.last().is_some_and(|p| p.is_zero()) {
            out.pop();
        }
        out
    }

    /// Pads or re-embeds into a polynomial on `nvars` variables, sending old
    /// variable i to `map[i]`.
    pub fn remap(&self, map: &[usize], nvars: usize) -> MultiPoly {
        assert_eq!(map.len(), self.nvars);
        let mut out = MultiPoly::zero(nvars);
        for (m, c) in &self.terms {
            let mut v = vec![0u16; nvars];
            for (i, &e) in m.0.iter().enumerate() {
                assert!(e == 0 || map[i] < nvars, "remap target out of range");
                if e != 0 {
                    v[map[i]] += e;
                }
            }
            out.insert(XMono(v), c.clone());
        }
        out
    }

    /// Exact division by a divisor treated as univariate in x_var with an
    /// invertible (rational) leading coefficient. Returns None when the
    /// division leaves a remainder.
    pub fn exact_div(&self, divisor: &MultiPoly, var: usize) -> Option<MultiPoly> {
        assert_eq!(self.nvars, divisor.nvars);
        if self.is_zero() {
            return Some(self.clone());
        }
        let dcoeffs = divisor.coeffs_in_var(var);
        let ddeg = dcoeffs.len().checked_sub(1)?;
        let lead = dcoeffs.last()?;
        let lead_inv = {
            let (m, c) = lead.terms.iter().next()?;
            if lead.terms.len() != 1 || m.total_degree() != 0 {
                return None;
            }
            let r = c.as_rational()?;
            r.recip()
        };
        let mut rem = self.coeffs_in_var(var);
        if rem.len() < dcoeffs.len() {
            return None;
        }
        let qdeg = rem.len() - 1 - ddeg;
        let mut quot = vec![MultiPoly::zero(self.nvars); qdeg + 1];
        for k in (0..=qdeg).rev() {
            let top = rem[k + ddeg].clone();
            if top.is_zero() {
                continue;
            }
            let q = top.scale_rat(&lead_inv);
            for (j, d) in dcoeffs.iter().enumerate() {
                rem[k + j] = rem[k + j].sub(&q.mul(d));
            }
            quot[k] = q;
        }
        if rem.iter().any(|r| !r.is_zero()) {
            return None;
        }
        let mut out = MultiPoly::zero(self.nvars);
        for (k, q) in quot.into_iter().enumerate() {
            out = out.add(&q.mul(&MultiPoly::var_pow(self.nvars, var, k as u16)));
        }
        Some(out)
    }

    /// Substitutes a parameter symbol inside every coefficient.
    pub fn substitute_param(&self, s: &Symbol, value: &ParamPoly) -> MultiPoly {
        let mut out = MultiPoly::zero(self.nvars);
        for (m, c) in &self.terms {
            out.insert(m.clone(), c.substitute(s, value));
        }
        out
    }

    /// Evaluates at rational coordinates with a full parameter assignment.
    pub fn eval(&self, xs: &[Rat], params: &BTreeMap<Symbol, Rat>) -> Rat {
        assert_eq!(xs.len(), self.nvars);
        let mut total = Rat::zero();
        for (m, c) in &self.terms {
            let mut acc = c.eval(params);
            for (i, &e) in m.0.iter().enumerate() {
                for _ in 0..e {
                    acc *= &xs[i];
                }
            }
            total += acc;
        }
        total
    }

    /// Canonical machine-readable term list.
    pub fn serialize_terms(&self) -> Vec<SerTerm> {
        self.terms
            .iter()
            .map(|(m, c)| SerTerm {
                exponents: m.0.clone(),
                coeff: match c.as_rational() {
                    Some(r) => rat_display_full(&r),
                    None => format!("{c}"),
                },
            })
            .collect()
    }
}

/// Binary arithmetic dispatch used by the CLI and tests: the `poly_arith`
/// operation of the algebra layer.
pub fn poly_arith(a: &MultiPoly, b: &MultiPoly, op: PolyOp) -> Result<MultiPoly, Error> {
    match op {
        PolyOp::Add => a.try_add(b),
        PolyOp::Sub => a.try_sub(b),
        PolyOp::Mul => a.try_mul(b),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PolyOp {
    Add,
    Sub,
    Mul,
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let cs = format!("{c}");
            let simple = c.num_terms() <= 1;
            if m.total_degree() == 0 {
                write!(f, "({cs})")?;
            } else {
                if !(simple && cs == "1") {
                    if simple {
                        write!(f, "{cs}*")?;
                    } else {
                        write!(f, "({cs})*")?;
                    }
                }
                let mut firstv = true;
                for (i, &e) in m.0.iter().enumerate() {
                    if e == 0 {
                        continue;
                    }
                    if !firstv {
                        write!(f, "*")?;
                    }
                    firstv = false;
                    if e == 1 {
                        write!(f, "x{}", i + 1)?;
                    } else {
                        write!(f, "x{}^{}", i + 1, e)?;
                    }
                }
            }
        }
        Ok(())
    }
}
