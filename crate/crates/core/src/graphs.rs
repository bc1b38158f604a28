//! Graph representation of the Virasoro N-point function.
//!
//! S(x_1..x_N) is the set of digraphs on N labeled vertices with ordered
//! edges (i, j), i != j, in- and out-degree at most one (partial injective
//! maps without fixed points). Each graph contributes
//!   F(Gamma) = (c/2)^#loops * prod_{(i,j)} (1/4) f(x_i, x_j) * <...>_r
//! where the regular bracket takes P(x_k) for k in A cap E^c, T(x_l) p_l for
//! isolated l, and loops are directed cycles (length >= 2; self-loops are
//! excluded by i != j).

use crate::curve::CurveSpec;
use crate::diag::diagonal_series;
use crate::error::Error;
use crate::galois::{f_pair, Factor, GaloisElement, RationalExpr};

use crate::onepoint::{p_element, OnePointFunction};
use crate::param::{ParamPoly, Symbol};
use crate::rat::rat;
use crate::threepoint::{full_three_point, ThreePointFunction};
use crate::twopoint::{f_structured_singular, full_two_point, TwoPointFunction};
use std::collections::BTreeMap;
use std::sync::Arc;

/// A partial-permutation digraph: ordered edges, in/out-degree <= 1.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug)]
pub struct Digraph {
    pub n: usize,
    /// sorted edge list (tail, head), tail != head
    pub edges: Vec<(usize, usize)>,
}

impl Digraph {
    pub fn new(n: usize, mut edges: Vec<(usize, usize)>) -> Self {
        edges.sort();
        let g = Digraph { n, edges };
        assert!(g.is_valid(), "degree constraint violated");
        g
    }

    pub fn is_valid(&self) -> bool {
        let mut out_deg = vec![0usize; self.n];
        let mut in_deg = vec![0usize; self.n];
        for &(i, j) in &self.edges {
            if i == j || i >= self.n || j >= self.n {
                return false;
            }
            out_deg[i] += 1;
            in_deg[j] += 1;
        }
        out_deg.iter().all(|&d| d <= 1) && in_deg.iter().all(|&d| d <= 1)
    }

    /// Vertices with an outgoing edge.
    pub fn tails(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges.iter().map(|&(i, _)| i).collect();
        v.sort();
        v
    }

    /// Vertices with an ingoing edge.
    pub fn heads(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.edges.iter().map(|&(_, j)| j).collect();
        v.sort();
        v
    }

    /// Number of directed cycles (each cycle has length >= 2).
    pub fn loop_count(&self) -> usize {
        let mut next = vec![None; self.n];
        for &(i, j) in &self.edges {
            next[i] = Some(j);
        }
        let mut seen = vec![false; self.n];
        let mut loops = 0;
        for start in 0..self.n {
            if seen[start] {
                continue;
            }
            // walk the functional chain from start
            let mut path = Vec::new();
            let mut v = start;
            loop {
                if seen[v] {
                    // a cycle is found only if we re-enter the current path
                    if let Some(pos) = path.iter().position(|&u| u == v) {
                        let _ = pos;
                        loops += 1;
                    }
                    break;
                }
                seen[v] = true;
                path.push(v);
                match next[v] {
                    Some(u) => v = u,
                    None => break,
                }
            }
        }
        loops
    }

    pub fn render(&self) -> String {
        if self.edges.is_empty() {
            return format!("{} vertices, no edges, loops 0", self.n);
        }
        let edges: Vec<String> = self
            .edges
            .iter()
            .map(|&(i, j)| format!("{}->{}", i + 1, j + 1))
            .collect();
        format!(
            "{} vertices, {}, loops {}",
            self.n,
            edges.join(","),
            self.loop_count()
        )
    }
}

/// Complete, duplicate-free enumeration of S(x_1..x_N), ordered by edge
/// count, then lexicographic edge list.
pub fn enumerate_graphs(n: usize) -> Vec<Digraph> {
    assert!(n >= 1);
    let mut out = Vec::new();
    // choose, per tail vertex, either no edge or a head, keeping heads unique
    fn recurse(
        n: usize,
        tail: usize,
        used_heads: &mut Vec<bool>,
        edges: &mut Vec<(usize, usize)>,
        out: &mut Vec<Digraph>,
    ) {
        if tail == n {
            out.push(Digraph::new(n, edges.clone()));
            return;
        }
        recurse(n, tail + 1, used_heads, edges, out);
        for head in 0..n {
            if head == tail || used_heads[head] {
                continue;
            }
            used_heads[head] = true;
            edges.push((tail, head));
            recurse(n, tail + 1, used_heads, edges, out);
            edges.pop();
            used_heads[head] = false;
        }
    }
    let mut used = vec![false; n];
    let mut edges = Vec::new();
    recurse(n, 0, &mut used, &mut edges, &mut out);
    out.sort_by_key(|g| (g.edges.len(), g.edges.clone()));
    out.dedup();
    out
}

/// Independent count: partial injective maps on {1..N} without fixed points,
/// via inclusion-exclusion over the forced fixed points.
pub fn partial_injection_count(n: u64) -> u64 {
    // sum over k-edge graphs: choose the tail set, count injections into the
    // heads avoiding the identity on each tail
    let mut total = 0u64;
    for k in 0..=n {
        let tails = binom(n, k);
        // injections of a fixed k-set into n heads with no fixed point:
        // sum_j (-1)^j C(k, j) * P(n - j, k - j)
        let mut inj: i64 = 0;
        for j in 0..=k {
            let sign = if j % 2 == 0 { 1i64 } else { -1 };
            inj += sign * (binom(k, j) * falling(n - j, k - j)) as i64;
        }
        total += tails * inj as u64;
    }
    total
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    let mut acc = 1u64;
    for i in 0..k.min(n - k) {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

fn falling(n: u64, k: u64) -> u64 {
    let mut acc = 1u64;
    for i in 0..k {
        acc *= n - i;
    }
    acc
}

/// The classes of the S-decomposition with respect to the pair (1, 2):
/// loop, link 1->2 (without the reverse), link 2->1, no link.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum PairClass {
    Loop,
    Forward,
    Backward,
    None,
}

pub fn classify_pair(g: &Digraph, a: usize, b: usize) -> PairClass {
    let fwd = g.edges.contains(&(a, b));
    let bwd = g.edges.contains(&(b, a));
    match (fwd, bwd) {
        (true, true) => PairClass::Loop,
        (true, false) => PairClass::Forward,
        (false, true) => PairClass::Backward,
        (false, false) => PairClass::None,
    }
}

/// The contraction map phi: S_(1,2) -> S(x_2..x_N): drop 1 -> 2, redirect an
/// ingoing edge (k, 1) to (k, 2). Returns the contracted graph on the same
/// vertex list (vertex `a` isolated).
pub fn contract_link(g: &Digraph, a: usize, b: usize) -> Digraph {
    assert_eq!(classify_pair(g, a, b), PairClass::Forward);
    let mut edges = Vec::new();
    for &(i, j) in &g.edges {
        if (i, j) == (a, b) {
            continue;
        }
        if j == a {
            edges.push((i, b));
        } else {
            edges.push((i, j));
        }
    }
    Digraph::new(g.n, edges)
}

/// Inverse of `contract_link`: insert the edge a -> b, redirecting (k, b) to
/// (k, a).
pub fn expand_link(g: &Digraph, a: usize, b: usize) -> Digraph {
    let mut edges = vec![(a, b)];
    for &(i, j) in &g.edges {
        assert!(i != a && j != a, "vertex a must be isolated");
        if j == b {
            edges.push((i, a));
        } else {
            edges.push((i, j));
        }
    }
    Digraph::new(g.n, edges)
}

/// chi: drops an isolated vertex (identity on the edge list).
pub fn drop_isolated(g: &Digraph, v: usize) -> Digraph {
    assert!(g.edges.iter().all(|&(i, j)| i != v && j != v));
    Digraph::new(g.n, g.edges.clone())
}

/// The regular-bracket oracle: values of <prod P(x_k) prod T(x_l) p_l>_r for
/// the vertex subsets the graphs produce.
pub trait RegularOracle {
    fn bracket(&self, ps: &[usize], ts: &[usize]) -> Result<GaloisElement, Error>;
    fn curve(&self) -> &Arc<CurveSpec>;
    fn nvars(&self) -> usize;
}

/// F(Gamma) for one graph.
pub fn assemble_f(g: &Digraph, oracle: &dyn RegularOracle) -> Result<GaloisElement, Error> {
    let curve = oracle.curve();
    let nvars = oracle.nvars();
    let tails = g.tails();
    let heads = g.heads();
    let ps: Vec<usize> = tails
        .iter()
        .cloned()
        .filter(|v| !heads.contains(v))
        .collect();
    let ts: Vec<usize> = (0..g.n)
        .filter(|v| !tails.contains(v) && !heads.contains(v))
        .collect();
    let mut weight = oracle.bracket(&ps, &ts)?;
    for &(i, j) in &g.edges {
        weight = weight.mul(&f_pair(curve, nvars, i, j)).scale_rat(&rat(1, 4));
    }
    let loops = g.loop_count() as u32;
    if loops > 0 {
        let c_half = ParamPoly::var(Symbol::c()).scale(&rat(1, 2)).pow(loops);
        weight = weight.scale(&c_half);
    }
    Ok(weight)
}

/// Oracle instantiated from the direct one-, two- and three-point modules:
/// <T>_r = <T>, <1>_r = <1>, <P>_r = P/4, <TT>_r from the regular part of the
/// full two-point function, mixed brackets through the recursion
/// <P_1 T_2>_r p_2 = <T_1 T_2>_r p_1 p_2 - (c/32)[p_1']^2/p_1 <T_2>_r p_2.
pub struct DirectOracle {
    pub opf: OnePointFunction,
    pub tpf: TwoPointFunction,
    pub nvars: usize,
}

impl DirectOracle {
    /// <T(x_i)>_r p_i as an element.
    fn t_bracket(&self, i: usize) -> GaloisElement {
        self.opf
            .element
            .remap(&[i], self.nvars)
            .mul_poly(&self.opf.curve.p_multi(self.nvars, i))
    }

    /// <P(x_i)>_r = P_i / 4.
    fn p_bracket(&self, i: usize) -> GaloisElement {
        p_element(&self.opf, self.nvars, i).scale_rat(&rat(1, 4))
    }

    /// <T(x_i)T(x_j)>_r p_i p_j: the regular part of the full two-point
    /// function (diagonal-regular, p-poles allowed).
    fn tt_bracket(&self, i: usize, j: usize) -> GaloisElement {
        full_two_point(&self.tpf, self.nvars, i, j)
            .mul_poly(&self.opf.curve.p_multi(self.nvars, i))
            .mul_poly(&self.opf.curve.p_multi(self.nvars, j))
            .sub(&f_structured_singular(&self.tpf, self.nvars, i, j))
    }

    /// (c/32) [p_i']^2 / p_i as a rational expression.
    fn schwarz_term(&self, i: usize) -> RationalExpr {
        let curve = &self.opf.curve;
        RationalExpr::new(
            curve
                .p_prime_multi(self.nvars, i)
                .pow(2)
                .scale(&self.tpf.c_poly.scale(&rat(1, 32))),
            BTreeMap::from([(Factor::P(i), 1)]),
            curve,
        )
    }

    /// <P(x_i) T(x_j)>_r p_j by the recursion.
    fn pt_bracket(&self, i: usize, j: usize) -> GaloisElement {
        self.tt_bracket(i, j)
            .sub(&self.t_bracket(j).mul_rexpr(&self.schwarz_term(i)))
    }

    /// <P(x_i) P(x_j)>_r by the recursion applied twice.
    fn pp_bracket(&self, i: usize, j: usize) -> GaloisElement {
        let vac = GaloisElement::scalar(
            self.opf.curve.clone(),
            self.nvars,
            ParamPoly::var(Symbol::vac()),
        );
        self.tt_bracket(i, j)
            .sub(&self.t_bracket(j).mul_rexpr(&self.schwarz_term(i)))
            .sub(&self.t_bracket(i).mul_rexpr(&self.schwarz_term(j)))
            .add(
                &vac.mul_rexpr(&self.schwarz_term(i))
                    .mul_rexpr(&self.schwarz_term(j)),
            )
    }
}

impl RegularOracle for DirectOracle {
    fn curve(&self) -> &Arc<CurveSpec> {
        &self.opf.curve
    }

    fn nvars(&self) -> usize {
        self.nvars
    }

    fn bracket(&self, ps: &[usize], ts: &[usize]) -> Result<GaloisElement, Error> {
        let curve = &self.opf.curve;
        let vac = ParamPoly::var(Symbol::vac());
        match (ps, ts) {
            ([], []) => Ok(GaloisElement::scalar(curve.clone(), self.nvars, vac)),
            ([], [k]) => Ok(self.t_bracket(*k)),
            ([i], []) => Ok(self.p_bracket(*i)),
            ([], [j, k]) => Ok(self.tt_bracket(*j, *k)),
            ([i], [k]) => Ok(self.pt_bracket(*i, *k)),
            ([i, j], []) => Ok(self.pp_bracket(*i, *j)),
            _ => Err(Error::MissingOracleEntry(format!(
                "P at {ps:?}, T at {ts:?}"
            ))),
        }
    }
}

/// Report of the graph-sum equivalence check for N = 2 or 3.
pub struct EquivalenceReport {
    pub graph_count: usize,
    /// The remainder <T..T>_r p_1..p_N = direct - sum over nontrivial graphs.
    pub remainder: GaloisElement,
    /// Principal diagonal orders of the remainder per diagonal; all empty on
    /// success.
    pub principal_orders: Vec<((usize, usize), Vec<i64>)>,
    pub passed: bool,
}

/// Checks that the graph sum reproduces the direct N-point function: the
/// remainder assigned to the edgeless graph must be regular at every
/// diagonal.
pub fn graph_sum_equivalence(
    n: usize,
    tpf: &TwoPointFunction,
    thpf: Option<&ThreePointFunction>,
) -> Result<EquivalenceReport, Error> {
    let opf = &tpf.opf;
    let curve = &opf.curve;
    let oracle = DirectOracle {
        opf: opf.clone(),
        tpf: tpf.clone(),
        nvars: n,
    };
    let direct = match n {
        2 => {
            let mut d = full_two_point(tpf, 2, 0, 1);
            for i in 0..2 {
                d = d.mul_poly(&curve.p_multi(2, i));
            }
            d
        }
        3 => full_three_point(thpf.expect("three-point function required")),
        _ => {
            return Err(Error::MissingOracleEntry(format!(
                "direct construction for N = {n}"
            )))
        }
    };
    let graphs = enumerate_graphs(n);
    let mut sum = GaloisElement::zero(curve.clone(), n);
    for g in &graphs {
        if g.edges.is_empty() {
            continue;
        }
        sum = sum.add(&assemble_f(g, &oracle)?);
    }
    let remainder = direct.sub(&sum);
    let mut principal_orders = Vec::new();
    let mut passed = true;
    for i in 0..n {
        for j in (i + 1)..n {
            let s = diagonal_series(&remainder, i, j, 0)?;
            let orders = s.principal_orders();
            if !orders.is_empty() {
                passed = false;
            }
            principal_orders.push(((i, j), orders));
        }
    }
    Ok(EquivalenceReport {
        graph_count: graphs.len(),
        remainder,
        principal_orders,
        passed,
    })
}

/// The proof's per-class decomposition data at the pair (a, b) = (x_1, x_2):
/// the loop-class sum matches (c/32) f_ab^2 <T..>_r exactly, and the
/// link-class sum matches (1/2) f_ab <P_b T..>_r up to a simple pole.
pub fn class_decomposition_checks(
    tpf: &TwoPointFunction,
    thpf: &ThreePointFunction,
) -> Result<bool, Error> {
    let n = 3;
    let opf = &tpf.opf;
    let curve = &opf.curve;
    let oracle = DirectOracle {
        opf: opf.clone(),
        tpf: tpf.clone(),
        nvars: n,
    };
    let _ = thpf;
    let graphs = enumerate_graphs(n);
    // partition check: every graph in exactly one class
    let mut by_class: BTreeMap<&'static str, Vec<&Digraph>> = BTreeMap::new();
    for g in &graphs {
        let class = match classify_pair(g, 0, 1) {
            PairClass::Loop => "loop",
            PairClass::Forward => "fwd",
            PairClass::Backward => "bwd",
            PairClass::None => "none",
        };
        by_class.entry(class).or_default().push(g);
    }
    let total: usize = by_class.values().map(Vec::len).sum();
    if total != graphs.len() {
        return Ok(false);
    }
    // bijections: phi on the forward class, phi-bar on the backward class
    let smaller: Vec<Digraph> = enumerate_graphs(3)
        .into_iter()
        .filter(|g| g.edges.iter().all(|&(i, j)| i != 0 && j != 0))
        .collect();
    for (class, a, b) in [("fwd", 0usize, 1usize), ("bwd", 1, 0)] {
        let members = &by_class[class];
        let mut contracted: Vec<Digraph> =
            members.iter().map(|g| contract_link(g, a, b)).collect();
        contracted.sort();
        let mut expect: Vec<Digraph> = smaller
            .iter()
            .map(|g| {
                // phi lands in S(x_2,..) with vertex a isolated; rename the
                // reference set accordingly
                let m = |v: usize| {
                    if v == 0 {
                        a
                    } else if v == a {
                        0
                    } else {
                        v
                    }
                };
                let edges = g.edges.iter().map(|&(i, j)| (m(i), m(j))).collect();
                Digraph::new(3, edges)
            })
            .collect();
        expect.sort();
        expect.dedup();
        if contracted != expect {
            return Ok(false);
        }
        for g in members {
            let back = expand_link(&contract_link(g, a, b), a, b);
            if &back != *g {
                return Ok(false);
            }
        }
    }
    // chi: dropping an isolated vertex is a bijection onto the graphs on the
    // remaining vertices
    {
        let with_isolated: Vec<&Digraph> = graphs
            .iter()
            .filter(|g| g.edges.iter().all(|&(i, j)| i != 1 && j != 1))
            .collect();
        let mut dropped: Vec<Digraph> = with_isolated
            .iter()
            .map(|g| drop_isolated(g, 1))
            .collect();
        dropped.sort();
        dropped.dedup();
        if dropped.len() != with_isolated.len() {
            return Ok(false);
        }
    }
    // loop-class sum = (c/32) f_12^2 <T(x_3)>_r p_3 exactly
    let mut loop_sum = GaloisElement::zero(curve.clone(), n);
    for g in &by_class["loop"] {
        loop_sum = loop_sum.add(&assemble_f(g, &oracle)?);
    }
    let f12 = f_pair(curve, n, 0, 1);
    let t3 = oracle.bracket(&[], &[2])?;
    let expect_loop = f12
        .mul(&f12)
        .mul(&t3)
        .scale(&ParamPoly::var(Symbol::c()).scale(&rat(1, 32)));
    if loop_sum != expect_loop {
        return Ok(false);
    }
    // link classes: sum minus (1/2) f_12 <P_2 T(x_3)>_r p_3 has at most a
    // simple pole at x_1 = x_2
    // the edgeless graph carries the regular remainder and cannot change the
    // singular matching, so it is left out of the class sums
    let mut link_sum = GaloisElement::zero(curve.clone(), n);
    for class in ["fwd", "bwd", "none"] {
        for g in &by_class[class] {
            if g.edges.is_empty() {
                continue;
            }
            link_sum = link_sum.add(&assemble_f(g, &oracle)?);
        }
    }
    // the reference is the full correlator <P(x_2) T(x_3)> p_3, not the
    // regular bracket
    let full23 = full_two_point(tpf, n, 1, 2)
        .mul_poly(&curve.p_multi(n, 1))
        .mul_poly(&curve.p_multi(n, 2));
    let full_pt23 = full23.sub(
        &oracle
            .bracket(&[], &[2])?
            .mul_rexpr(&oracle.schwarz_term(1)),
    );
    let probe = link_sum.sub(&f12.mul(&full_pt23).scale_rat(&rat(1, 2)));
    let s = diagonal_series(&probe, 0, 1, -1)?;
    Ok(s.principal_orders().iter().all(|&k| k >= -1))
}

/// Structural test: F is multiplicative over graphs with disjoint support
/// when the oracle factorizes.
pub struct FactorizingOracle {
    pub curve: Arc<CurveSpec>,
    pub nvars: usize,
}

impl RegularOracle for FactorizingOracle {
    fn curve(&self) -> &Arc<CurveSpec> {
        &self.curve
    }

    fn nvars(&self) -> usize {
        self.nvars
    }

    fn bracket(&self, ps: &[usize], ts: &[usize]) -> Result<GaloisElement, Error> {
        // product of placeholder symbols per argument
        let mut c = ParamPoly::one();
        for i in ps {
            c = c.mul(&ParamPoly::var(Symbol::new(&format!("hatP{}", i + 1))));
        }
        for k in ts {
            c = c.mul(&ParamPoly::var(Symbol::new(&format!("hatT{}", k + 1))));
        }
        Ok(GaloisElement::scalar(self.curve.clone(), self.nvars, c))
    }
}

pub fn graphs_listing(n: usize) -> String {
    let graphs = enumerate_graphs(n);
    let mut out = String::new();
    for g in &graphs {
        out.push_str(&g.render());
        out.push('\n');
    }
    out.push_str(&format!("total: {}\n", graphs.len()));
    out
}

pub fn brute_force_count(n: usize) -> usize {
    // every subset of the ordered pairs, filtered by the degree constraints
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j)))
        .collect();
    let mut count = 0;
    for mask in 0u32..(1 << pairs.len()) {
        let edges: Vec<(usize, usize)> = pairs
            .iter()
            .enumerate()
            .filter(|(b, _)| mask & (1 << b) != 0)
            .map(|(_, &e)| e)
            .collect();
        let g = Digraph {
            n,
            edges: {
                let mut e = edges;
                e.sort();
                e
            },
        };
        if g.is_valid() {
            count += 1;
        }
    }
    count
}


#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::sample_curve_g2;
    use crate::onepoint::{build_one_point, rat_curve};
    use crate::threepoint::build_three_point;
    use crate::twopoint::build_two_point;

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_graphs(1).len(), 1);
        assert_eq!(enumerate_graphs(2).len(), 4);
        assert_eq!(enumerate_graphs(3).len(), 18);
        // brute force over all edge subsets agrees
        assert_eq!(brute_force_count(2), 4);
        assert_eq!(brute_force_count(3), 18);
        // independent partial-injection oracle for N = 4, 5
        assert_eq!(enumerate_graphs(4).len() as u64, partial_injection_count(4));
        assert_eq!(enumerate_graphs(5).len() as u64, partial_injection_count(5));
    }

    #[test]
    fn degree_constraints_hold() {
        for n in 1..=5 {
            for g in enumerate_graphs(n) {
                assert!(g.is_valid());
            }
        }
    }

    #[test]
    fn loop_counting() {
        let two_cycle = Digraph::new(2, vec![(0, 1), (1, 0)]);
        assert_eq!(two_cycle.loop_count(), 1);
        let three_cycle = Digraph::new(3, vec![(0, 1), (1, 2), (2, 0)]);
        assert_eq!(three_cycle.loop_count(), 1);
        let empty = Digraph::new(3, vec![]);
        assert_eq!(empty.loop_count(), 0);
        let chain = Digraph::new(3, vec![(0, 1), (1, 2)]);
        assert_eq!(chain.loop_count(), 0);
    }

    #[test]
    fn n2_graph_weights() {
        let curve = rat_curve(3, &[4, 0, -4, 1]);
        let opf = build_one_point(&curve).unwrap();
        let tpf = build_two_point(&opf).unwrap();
        let oracle = DirectOracle {
            opf: opf.clone(),
            tpf,
            nvars: 2,
        };
        // empty graph: <T T>_r p1 p2
        let empty = Digraph::new(2, vec![]);
        let f_empty = assemble_f(&empty, &oracle).unwrap();
        assert_eq!(f_empty, oracle.tt_bracket(0, 1));
        // single edge 1->2: (1/4) f12 <P(x1)>_r
        let edge = Digraph::new(2, vec![(0, 1)]);
        let f_edge = assemble_f(&edge, &oracle).unwrap();
        let expect = f_pair(&opf.curve, 2, 0, 1)
            .mul(&oracle.p_bracket(0))
            .scale_rat(&rat(1, 4));
        assert_eq!(f_edge, expect);
        // 2-cycle: (c/2)(1/16) f12^2 <1>
        let cyc = Digraph::new(2, vec![(0, 1), (1, 0)]);
        let f_cyc = assemble_f(&cyc, &oracle).unwrap();
        let f12 = f_pair(&opf.curve, 2, 0, 1);
        let expect = f12
            .mul(&f12)
            .scale(
                &ParamPoly::var(Symbol::c())
                    .mul(&ParamPoly::var(Symbol::vac()))
                    .scale(&rat(1, 32)),
            );
        assert_eq!(f_cyc, expect);
    }

    #[test]
    fn equivalence_n2() {
        for curve in [rat_curve(3, &[4, 0, -4, 1]), Arc::new(sample_curve_g2())] {
            let opf = build_one_point(&curve).unwrap();
            let tpf = build_two_point(&opf).unwrap();
            let report = graph_sum_equivalence(2, &tpf, None).unwrap();
            assert_eq!(report.graph_count, 4);
            assert!(report.passed, "{:?}", report.principal_orders);
        }
    }

    #[test]
    fn factorizing_oracle_multiplicativity() {
        // two disjoint edges on 4 vertices: F factorizes into the two
        // single-edge factors (with <1>-normalized placeholder brackets)
        let curve = Arc::new(sample_curve_g2());
        let oracle = FactorizingOracle {
            curve: curve.clone(),
            nvars: 4,
        };
        let g12 = Digraph::new(4, vec![(0, 1)]);
        let g34 = Digraph::new(4, vec![(2, 3)]);
        let both = Digraph::new(4, vec![(0, 1), (2, 3)]);
        let f1 = assemble_f(&g12, &oracle).unwrap();
        let f2 = assemble_f(&g34, &oracle).unwrap();
        let fb = assemble_f(&both, &oracle).unwrap();
        // bracket(empty) for the disjoint union double-counts the spectator
        // hatT factors, so compare after clearing them
        let spectators = ParamPoly::var(Symbol::new("hatT3"))
            .mul(&ParamPoly::var(Symbol::new("hatT4")))
            .mul(&ParamPoly::var(Symbol::new("hatT1")))
            .mul(&ParamPoly::var(Symbol::new("hatT2")));
        assert_eq!(
            fb.scale(&spectators),
            f1.mul(&f2),
            "multiplicativity over disjoint components"
        );
    }
}
