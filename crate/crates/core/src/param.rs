//! The coefficient ring: polynomials over Q in named symbolic parameters.
//!
//! `ParamPoly` is a sparse Laurent polynomial in symbols such as `c`, `vac`
//! (the vacuum one-point function <1>), `Tav` (<T> at genus one), `A1..`,
//! `B22..`, `B222..`. Negative exponents are permitted so that the invertible
//! normalization symbol `vac` can appear as `vac^-1`; no operation in this
//! module ever divides by a non-monomial.
//!
//! Invariants: no zero coefficients are stored; monomials carry no zero
//! exponents; term order is graded lexicographic in the symbol names, so the
//! representation is canonical and rendering is deterministic.

use crate::rat::{rat_display, rat_one, Rat};
use num_traits::Zero;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

/// An interned symbol name. Ordering is by name, so canonical term order does
/// not depend on creation order.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Symbol(Arc<str>);

impl Symbol {
    pub fn new(name: &str) -> Self {
        Symbol(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }

    /// Central charge `c`.
    pub fn c() -> Self {
        Symbol::new("c")
    }

    /// The vacuum expectation <1>.
    pub fn vac() -> Self {
        Symbol::new("vac")
    }

    /// <T>, the constant one-point function at genus one.
    pub fn t_av() -> Self {
        Symbol::new("Tav")
    }

    /// Coefficient A_k of the one-point polynomial P^(G-even).
    pub fn a(k: usize) -> Self {
        Symbol::new(&format!("A{k}"))
    }

    /// Two-point state coefficient B_{i,j} (i >= j).
    pub fn b2(i: usize, j: usize) -> Self {
        Symbol::new(&format!("B{i}{j}"))
    }

    /// Three-point state coefficient B_{i,j,k} (i >= j >= k).
    pub fn b3(i: usize, j: usize, k: usize) -> Self {
        Symbol::new(&format!("B{i}{j}{k}"))
    }

    /// The proportionality constant in N0(T,T) = alpha * T''.
    pub fn alpha() -> Self {
        Symbol::new("alpha")
    }

    /// Symbolic curve coefficient a_k.
    pub fn curve_a(k: usize) -> Self {
        Symbol::new(&format!("a{k}"))
    }
}

impl fmt::Display for Symbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// A monomial in the parameters: sorted (symbol, exponent) pairs, exponents
/// nonzero (negative allowed).
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct PMono(Vec<(Symbol, i32)>);

impl PMono {
    pub fn one() -> Self {
        PMono(Vec::new())
    }

    pub fn var(s: Symbol) -> Self {
        PMono(vec![(s, 1)])
    }

    pub fn var_pow(s: Symbol, e: i32) -> Self {
        if e == 0 {
            PMono::one()
        } else {
            PMono(vec![(s, e)])
        }
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.iter().map(|(_, e)| *e as i64).sum()
    }

    pub fn exponent_of(&self, s: &Symbol) -> i32 {
        self.0
            .iter()
            .find(|(t, _)| t == s)
            .map(|(_, e)| *e)
            .unwrap_or(0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &(Symbol, i32)> {
        self.0.iter()
    }

    pub fn mul(&self, other: &PMono) -> PMono {
        let mut map: BTreeMap<Symbol, i32> = self.0.iter().cloned().collect();
        for (s, e) in &other.0 {
            let v = map.entry(s.clone()).or_insert(0);
            *v += e;
            if *v == 0 {
                map.remove(s);
            }
        }
        PMono(map.into_iter().collect())
    }

    /// Removes the given symbol, returning its exponent and the remainder.
    pub fn split_symbol(&self, s: &Symbol) -> (i32, PMono) {
        let e = self.exponent_of(s);
        if e == 0 {
            return (0, self.clone());
        }
        let rest = self.0.iter().filter(|(t, _)| t != s).cloned().collect();
        (e, PMono(rest))
    }

    /// Splits into (part over `keep`, part over the remaining symbols).
    pub fn split_set(&self, keep: &BTreeSet<Symbol>) -> (PMono, PMono) {
        let (a, b): (Vec<_>, Vec<_>) = self.0.iter().cloned().partition(|(s, _)| keep.contains(s));
        (PMono(a), PMono(b))
    }
}

impl PartialOrd for PMono {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PMono {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        // graded, then lexicographic on the merged symbol sequence (absent
        // symbols count as exponent zero). This is a genuine monomial order:
        // compatible with multiplication, which leading-term division needs.
        let by_degree = self.total_degree().cmp(&other.total_degree());
        if by_degree != std::cmp::Ordering::Equal {
            return by_degree;
        }
        let mut a = self.0.iter().peekable();
        let mut b = other.0.iter().peekable();
        loop {
            match (a.peek(), b.peek()) {
                (None, None) => return std::cmp::Ordering::Equal,
                (Some((sa, ea)), Some((sb, eb))) => match sa.cmp(sb) {
                    std::cmp::Ordering::Equal => {
                        if ea != eb {
                            return ea.cmp(eb);
                        }
                        a.next();
                        b.next();
                    }
                    std::cmp::Ordering::Less => {
                        // `self` has an exponent on an earlier symbol
                        return (self.exponent_of(sa)).cmp(&0);
                    }
                    std::cmp::Ordering::Greater => {
                        return 0.cmp(&other.exponent_of(sb));
                    }
                },
                (Some((sa, _)), None) => return self.exponent_of(sa).cmp(&0),
                (None, Some((sb, _))) => return 0.cmp(&other.exponent_of(sb)),
            }
        }
    }
}

impl fmt::Display for PMono {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        let mut first = true;
        for (s, e) in &self.0 {
            if !first {
                write!(f, "*")?;
            }
            first = false;
            if *e == 1 {
                write!(f, "{s}")?;
            } else {
                write!(f, "{s}^{e}")?;
            }
        }
        Ok(())
    }
}

/// Sparse polynomial over Q in symbolic parameters.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Default)]
pub struct ParamPoly {
    terms: BTreeMap<PMono, Rat>,
}

impl ParamPoly {
    pub fn zero() -> Self {
        ParamPoly {
            terms: BTreeMap::new(),
        }
    }

    pub fn one() -> Self {
        ParamPoly::constant(rat_one())
    }

    pub fn constant(r: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !r.is_zero() {
            terms.insert(PMono::one(), r);
        }
        ParamPoly { terms }
    }

    pub fn var(s: Symbol) -> Self {
        ParamPoly::monomial(PMono::var(s), rat_one())
    }

    pub fn var_pow(s: Symbol, e: i32) -> Self {
        ParamPoly::monomial(PMono::var_pow(s, e), rat_one())
    }

    pub fn monomial(m: PMono, coeff: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(m, coeff);
        }
        ParamPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PMono, &Rat)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// The constant-term coefficient.
    pub fn constant_part(&self) -> Rat {
        self.terms
            .get(&PMono::one())
            .cloned()
            .unwrap_or_else(Rat::zero)
    }

    /// Some(r) iff the polynomial is the constant r.
    pub fn as_rational(&self) -> Option<Rat> {
        if self.terms.is_empty() {
            return Some(Rat::zero());
        }
        if self.terms.len() == 1 {
            if let Some(r) = self.terms.get(&PMono::one()) {
                return Some(r.clone());
            }
        }
        None
    }

    /// Some((mono, r)) iff the polynomial is a single term.
    pub fn as_monomial(&self) -> Option<(PMono, Rat)> {
        if self.terms.len() == 1 {
            let (m, r) = self.terms.iter().next().unwrap();
            Some((m.clone(), r.clone()))
        } else {
            None
        }
    }

    fn insert(&mut self, m: PMono, r: Rat) {
        if r.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(r);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get_mut();
                *v += r;
                if v.is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, r) in &other.terms {
            out.insert(m.clone(), r.clone());
        }
        out
    }

    pub fn sub(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = self.clone();
        for (m, r) in &other.terms {
            out.insert(m.clone(), -r.clone());
        }
        out
    }

    pub fn neg(&self) -> ParamPoly {
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, r)| (m.clone(), -r.clone()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        for (m1, r1) in &self.terms {
            for (m2, r2) in &other.terms {
                out.insert(m1.mul(m2), r1 * r2);
            }
        }
        out
    }

    pub fn scale(&self, r: &Rat) -> ParamPoly {
        if r.is_zero() {
            return ParamPoly::zero();
        }
        ParamPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * r))
                .collect(),
        }
    }

    pub fn pow(&self, e: u32) -> ParamPoly {
        let mut out = ParamPoly::one();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    pub fn symbols(&self) -> BTreeSet<Symbol> {
        let mut out = BTreeSet::new();
        for m in self.terms.keys() {
            for (s, _) in m.iter() {
                out.insert(s.clone());
            }
        }
        out
    }

    pub fn contains_symbol(&self, s: &Symbol) -> bool {
        self.terms.keys().any(|m| m.exponent_of(s) != 0)
    }

    pub fn degree_in(&self, s: &Symbol) -> i32 {
        self.terms
            .keys()
            .map(|m| m.exponent_of(s))
            .max()
            .unwrap_or(0)
    }

    /// Substitutes a polynomial value for a symbol. Negative powers of the
    /// symbol require the value to be a nonzero rational constant.
    pub fn substitute(&self, s: &Symbol, value: &ParamPoly) -> ParamPoly {
        let mut out = ParamPoly::zero();
        let mut pow_cache: BTreeMap<i32, ParamPoly> = BTreeMap::new();
        for (m, r) in &self.terms {
            let (e, rest) = m.split_symbol(s);
            if e == 0 {
                out = out.add(&ParamPoly::monomial(rest, r.clone()));
                continue;
            }
            let factor = pow_cache.entry(e).or_insert_with(|| {
                if e > 0 {
                    value.pow(e as u32)
                } else {
                    let v = value
                        .as_rational()
                        .filter(|v| !v.is_zero())
                        .unwrap_or_else(|| {
                            panic!("negative power of {s} substituted by a non-unit")
                        });
                    let inv = v.recip();
                    let mut acc = rat_one();
                    for _ in 0..(-e) {
                        acc *= &inv;
                    }
                    ParamPoly::constant(acc)
                }
            });
            out = out.add(&ParamPoly::monomial(rest, r.clone()).mul(factor));
        }
        out
    }

    /// Full evaluation: every symbol must be assigned a rational.
    pub fn eval(&self, assignment: &BTreeMap<Symbol, Rat>) -> Rat {
        let mut total = Rat::zero();
        for (m, r) in &self.terms {
            let mut acc = r.clone();
            for (s, e) in m.iter() {
                let v = assignment
                    .get(s)
                    .unwrap_or_else(|| panic!("unassigned symbol {s}"));
                if *e >= 0 {
                    for _ in 0..*e {
                        acc *= v;
                    }
                } else {
                    assert!(!v.is_zero(), "evaluating negative power of zero");
                    let inv = v.recip();
                    for _ in 0..(-*e) {
                        acc *= &inv;
                    }
                }
            }
            total += acc;
        }
        total
    }

    /// The leading term in the graded-lex order.
    pub fn leading_term(&self) -> Option<(&PMono, &Rat)> {
        self.terms.iter().next_back()
    }

    /// Exact division in the parameter ring: Some(q) iff self = q * divisor
    /// with q polynomial (negative exponents only on the invertible symbol
    /// vac). Returns None when the division is not exact.
    pub fn exact_div(&self, divisor: &ParamPoly) -> Option<ParamPoly> {
        if self.is_zero() {
            return Some(ParamPoly::zero());
        }
        let (lt_m, lt_c) = divisor.leading_term()?;
        let vac = Symbol::vac();
        let mut rem = self.clone();
        let mut quot = ParamPoly::zero();
        let max_steps = self.num_terms() + 256;
        for _ in 0..max_steps {
            let Some((m, c)) = rem.leading_term() else {
                return Some(quot);
            };
            // monomial ratio m / lt_m
            let mut ratio: BTreeMap<Symbol, i32> = m.iter().cloned().collect();
            for (s, e) in lt_m.iter() {
                let v = ratio.entry(s.clone()).or_insert(0);
                *v -= e;
                if *v == 0 {
                    ratio.remove(s);
                }
            }
            if ratio.iter().any(|(s, e)| *e < 0 && *s != vac) {
                return None;
            }
            let qm = PMono(ratio.into_iter().collect());
            let qc = c / lt_c;
            let qt = ParamPoly::monomial(qm, qc);
            rem = rem.sub(&qt.mul(divisor));
            quot = quot.add(&qt);
        }
        None
    }

    /// Collects the polynomial as a map from monomials in `unknowns` to
    /// coefficient polynomials in the remaining symbols.
    pub fn collect_by(&self, unknowns: &BTreeSet<Symbol>) -> BTreeMap<PMono, ParamPoly> {
        let mut out: BTreeMap<PMono, ParamPoly> = BTreeMap::new();
        for (m, r) in &self.terms {
            let (u, rest) = m.split_set(unknowns);
            out.entry(u)
                .or_insert_with(ParamPoly::zero)
                .insert(rest, r.clone());
        }
        out.retain(|_, v| !v.is_zero());
        out
    }
}

impl fmt::Display for ParamPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        for (m, r) in self.terms.iter().rev() {
            let neg = r < &Rat::zero();
            let mag = if neg { -r.clone() } else { r.clone() };
            if first {
                if neg {
                    write!(f, "-")?;
                }
                first = false;
            } else if neg {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if m.is_one() {
                write!(f, "{}", rat_display(&mag))?;
            } else if mag == rat_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{}*{m}", rat_display(&mag))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{rat, rati};

    fn c() -> ParamPoly {
        ParamPoly::var(Symbol::c())
    }

    fn vac() -> ParamPoly {
        ParamPoly::var(Symbol::vac())
    }

    #[test]
    fn arithmetic_and_cancellation() {
        let a = c().mul(&vac()).scale(&rat(3, 2));
        let b = vac().mul(&c()).scale(&rat(-3, 2));
        assert!(a.add(&b).is_zero());
        let sq = c().add(&vac()).mul(&c().sub(&vac()));
        let expect = c().mul(&c()).sub(&vac().mul(&vac()));
        assert_eq!(sq, expect);
    }

    #[test]
    fn laurent_vac() {
        let inv = ParamPoly::var_pow(Symbol::vac(), -1);
        assert_eq!(inv.mul(&vac()), ParamPoly::one());
        let subst = inv.substitute(&Symbol::vac(), &ParamPoly::constant(rat(2, 1)));
        assert_eq!(subst, ParamPoly::constant(rat(1, 2)));
    }

    #[test]
    fn substitute_polynomial() {
        // c^2 + c at c = vac + 1  ->  vac^2 + 3 vac + 2
        let p = c().mul(&c()).add(&c());
        let v = vac().add(&ParamPoly::one());
        let got = p.substitute(&Symbol::c(), &v);
        let expect = vac()
            .mul(&vac())
            .add(&vac().scale(&rati(3)))
            .add(&ParamPoly::constant(rati(2)));
        assert_eq!(got, expect);
    }

    #[test]
    fn collect_by_unknowns() {
        // 2*alpha*c + 3*vac + alpha^2
        let alpha = ParamPoly::var(Symbol::alpha());
        let p = alpha
            .mul(&c())
            .scale(&rati(2))
            .add(&vac().scale(&rati(3)))
            .add(&alpha.mul(&alpha));
        let mut unknowns = BTreeSet::new();
        unknowns.insert(Symbol::alpha());
        let collected = p.collect_by(&unknowns);
        assert_eq!(collected.len(), 3);
        assert_eq!(
            collected.get(&PMono::var(Symbol::alpha())).unwrap(),
            &c().scale(&rati(2))
        );
        assert_eq!(
            collected.get(&PMono::one()).unwrap(),
            &vac().scale(&rati(3))
        );
    }

    #[test]
    fn exact_division() {
        // (c^2 - vac^2) / (c - vac) = c + vac
        let num = c().mul(&c()).sub(&vac().mul(&vac()));
        let den = c().sub(&vac());
        assert_eq!(num.exact_div(&den).unwrap(), c().add(&vac()));
        // inexact division fails
        assert!(c().mul(&c()).add(&ParamPoly::one()).exact_div(&den).is_none());
        // vac stays invertible: c / (c*vac) = vac^-1
        let q = c().exact_div(&c().mul(&vac())).unwrap();
        assert_eq!(q, ParamPoly::var_pow(Symbol::vac(), -1));
        // but c / vac^... with a non-vac deficit fails: vac / c is not exact
        assert!(vac().exact_div(&c()).is_none());
    }

    #[test]
    fn display_canonical() {
        let p = c().scale(&rat(-1, 2)).add(&ParamPoly::one());
        assert_eq!(format!("{p}"), "-1/2*c + 1");
    }
}
