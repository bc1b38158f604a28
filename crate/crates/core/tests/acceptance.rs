//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! All comparisons are exact (rational arithmetic); the only tolerances are
//! the per-criterion runtime budgets.

use std::sync::Arc;
use std::time::Instant;
use virasoro::curve::{sample_curve_g2, seeded_curve, CurveSpec};
use virasoro::galois::Factor;
use virasoro::graphs::{
    brute_force_count, class_decomposition_checks, enumerate_graphs, graph_sum_equivalence,
    partial_injection_count,
};
use virasoro::minimal::{
    closed_loop_residual, force_n0_constraint_g1, model_constants, solve_25_g2, symbolic_g1_curve,
    verify_25_lemma,
};
use virasoro::onepoint::{build_one_point, dimension_count, rat_curve};
use virasoro::param::Symbol;
use virasoro::project::{coefficient_at_infinity, project_above};
use virasoro::rat::rat;
use virasoro::threepoint::{build_three_point, growth_report, no_fourfold_pole, s3_symmetric};
use virasoro::twopoint::{
    build_r, build_two_point, pole_structure_report, verify_correction_list,
};

fn budget(name: &str, started: Instant, seconds: u64) {
    let elapsed = started.elapsed();
    assert!(
        elapsed.as_secs() < seconds,
        "{name} exceeded its {seconds}s budget: {elapsed:?}"
    );
}

#[test]
fn criterion_1_closed_loop_g1() {
    let t = Instant::now();
    let curve = symbolic_g1_curve();
    let sol = force_n0_constraint_g1(&curve).expect("constraint solve");
    assert_eq!(sol.alpha, rat(3, 10), "alpha must be 3/10");
    assert_eq!(sol.c, rat(-22, 5), "c must be -22/5");
    assert!(sol.unique, "the solution must be unique");
    assert_eq!(sol.c, model_constants(2, 5).unwrap().c);
    budget("criterion 1", t, 10);
    println!(
        "criterion 1: PASS - generic symbolic g=1 curve forces alpha = 3/10, c = -22/5, uniquely ({:?})",
        t.elapsed()
    );
}

#[test]
fn criterion_2_dimension_counts() {
    let t = Instant::now();
    let cases: Vec<(usize, Vec<i64>)> = vec![
        (5, vec![1, 0, 0, 0, -1, 0]),
        (6, vec![1, 0, 0, 0, 0, -1, 0]),
        (7, vec![1, 0, 0, 0, 0, 0, -1, 0]),
        (8, vec![1, 0, 0, 0, 0, 0, 0, -1, 0]),
        (9, vec![1, 0, 0, 0, 0, 0, 0, 0, -1, 0]),
        (10, vec![1, 0, 0, 0, 0, 0, 0, 0, 0, -1, 0]),
    ];
    for (n, coeffs) in cases {
        let curve = rat_curve(n, &coeffs);
        let g = curve.genus();
        let dims = dimension_count(&curve).unwrap();
        assert_eq!(dims.dim_even, 2 * g - 1, "even dimension at n = {n}");
        assert_eq!(dims.dim_odd, Some(g - 2), "odd dimension at n = {n}");
        assert_eq!(dims.total, Some(3 * (g - 1)), "total at n = {n}");
    }
    budget("criterion 2", t, 10);
    println!(
        "criterion 2: PASS - solver-derived dimensions (2g-1, g-2, 3(g-1)) for g = 2,3,4, both parities ({:?})",
        t.elapsed()
    );
}

#[test]
fn criterion_3_two_point_pole_structure() {
    let t = Instant::now();
    for curve in [rat_curve(3, &[4, 0, -4, 1]), Arc::new(sample_curve_g2())] {
        let opf = build_one_point(&curve).unwrap();
        let tpf = build_two_point(&opf).unwrap();
        let rep = pole_structure_report(&tpf).unwrap();
        assert!(rep.lead_is_c_half_vac, "eps^-4 must be (c/2)<1> at n = {}", curve.n());
        assert!(rep.eps3_vanishes, "eps^-3 must vanish at n = {}", curve.n());
        assert!(rep.eps2_matches, "eps^-2 must match <T1> + <T2>");
        assert!(rep.eps1_matches, "eps^-1 must match dT");
        assert!(rep.regular_bracket_regular, "regular bracket must be regular");
        assert!(rep.no_p_poles && rep.exchange_symmetric && rep.growth_ok);
    }
    budget("criterion 3", t, 60);
    println!(
        "criterion 3: PASS - two-point diagonal structure (c/2)<1> eps^-4, zero eps^-3, OPE eps^-2/eps^-1 on n = 3, 5 ({:?})",
        t.elapsed()
    );
}

#[test]
fn criterion_4_correction_list_fidelity() {
    let t = Instant::now();
    // y^2 = x^5 - x plus two seeded quintics (fixture seeds 11 and 23)
    for curve in [
        Arc::new(sample_curve_g2()),
        Arc::new(seeded_curve(5, 11)),
        Arc::new(seeded_curve(5, 23)),
    ] {
        let opf = build_one_point(&curve).unwrap();
        let rep = verify_correction_list(&opf).unwrap();
        assert!(
            rep.passed,
            "explicit correction list differs from the projection pipeline: {}",
            rep.residual.render()
        );
    }
    budget("criterion 4", t, 120);
    println!(
        "criterion 4: PASS - explicit odd-n correction list is identical to the generic projections on 3 quintics ({:?})",
        t.elapsed()
    );
}

#[test]
fn criterion_5_symmetry_condition() {
    let t = Instant::now();
    for curve in [
        Arc::new(sample_curve_g2()),
        Arc::new(seeded_curve(5, 11)),
        Arc::new(seeded_curve(5, 23)),
    ] {
        let opf = build_one_point(&curve).unwrap();
        let r = build_r(&opf, 2, 0, 1);
        let k = curve.n() as i64 - 3;
        let b12 = project_above(&project_above(&r, 0, k).unwrap(), 1, k).unwrap();
        let b21 = project_above(&project_above(&r, 1, k).unwrap(), 0, k).unwrap();
        assert_eq!(b12, b21, "[[R]_1]_2 must equal [[R]_2]_1");
    }
    budget("criterion 5", t, 120);
    println!(
        "criterion 5: PASS - [[R]_(>n-3)]^(>n-3) = [[R]^(>n-3)]_(>n-3) on the same curves ({:?})",
        t.elapsed()
    );
}

#[test]
fn criterion_6_no_fourfold_pole() {
    let t = Instant::now();
    let curve = Arc::new(sample_curve_g2());
    let opf = build_one_point(&curve).unwrap();
    let tpf = build_two_point(&opf).unwrap();
    let thpf = build_three_point(&tpf).unwrap();
    assert!(
        no_fourfold_pole(&thpf).unwrap(),
        "eps^-4 and eps^-3 must vanish at every diagonal"
    );
    assert!(growth_report(&thpf).unwrap());
    assert!(s3_symmetric(&thpf));
    budget("criterion 6", t, 300);
    println!(
        "criterion 6: PASS - connected three-point function has no fourfold pole at any diagonal, n = 5 ({:?})",
        t.elapsed()
    );
}

#[test]
fn criterion_7_graph_equivalence() {
    let t = Instant::now();
    // N = 2 on n = 3 and n = 5
    for curve in [rat_curve(3, &[4, 0, -4, 1]), Arc::new(sample_curve_g2())] {
        let opf = build_one_point(&curve).unwrap();
        let tpf = build_two_point(&opf).unwrap();
        let rep = graph_sum_equivalence(2, &tpf, None).unwrap();
        assert_eq!(rep.graph_count, 4);
        assert!(rep.passed, "N = 2 remainder must be diagonal-regular");
    }
    // N = 3 on n = 5
    let curve = Arc::new(sample_curve_g2());
    let opf = build_one_point(&curve).unwrap();
    let tpf = build_two_point(&opf).unwrap();
    let thpf = build_three_point(&tpf).unwrap();
    let rep = graph_sum_equivalence(3, &tpf, Some(&thpf)).unwrap();
    assert_eq!(rep.graph_count, 18);
    assert!(rep.passed, "N = 3 remainder must be diagonal-regular");
    assert!(class_decomposition_checks(&tpf, &thpf).unwrap());
    budget("criterion 7", t, 300);
    println!(
        "criterion 7: PASS - graph sums reproduce the direct two- and three-point singular structure (4 and 18 graphs) ({:?})",
        t.elapsed()
    );
}

#[test]
fn criterion_8_graph_enumeration() {
    let t = Instant::now();
    assert_eq!(enumerate_graphs(1).len(), 1);
    assert_eq!(enumerate_graphs(2).len(), 4);
    assert_eq!(enumerate_graphs(3).len(), 18);
    assert_eq!(brute_force_count(1), 1);
    assert_eq!(brute_force_count(2), 4);
    assert_eq!(brute_force_count(3), 18);
    for n in [4u64, 5] {
        assert_eq!(
            enumerate_graphs(n as usize).len() as u64,
            partial_injection_count(n),
            "enumeration vs partial-injection oracle at N = {n}"
        );
    }
    budget("criterion 8", t, 10);
    println!(
        "criterion 8: PASS - graph counts 1, 4, 18 (brute force) and N = 4, 5 against the partial-injection oracle ({:?})",
        t.elapsed()
    );
}

#[test]
fn criterion_9_genus2_solve() {
    let t = Instant::now();
    let curve = Arc::new(sample_curve_g2());
    let res = solve_25_g2(&curve).expect("staged solve");
    // stage 1: the two-point diagonal constraint fixes 5 combinations
    assert_eq!(res.stage1_combos, 5, "stage 1 must fix five combinations");
    assert_eq!(res.stage1_leftover.len(), 1, "one two-point leftover");
    // stage 2: every three-point coefficient is expressed
    assert_eq!(res.stage2_fixed, 10, "all three-point coefficients expressed");
    // the solved correlators re-pass criteria 3-6
    let rep = pole_structure_report(&res.tpf_solved).unwrap();
    assert!(rep.all_passed(), "solved two-point must re-pass its ledger");
    assert!(growth_report(&res.thpf_solved).unwrap());
    assert!(no_fourfold_pole(&res.thpf_solved).unwrap());
    assert!(s3_symmetric(&res.thpf_solved));
    // the defining constraint holds as an identity after the solve
    assert!(
        closed_loop_residual(&res.tpf_solved).unwrap().is_zero(),
        "N0(T,T) = (3/10) T'' must hold identically"
    );
    budget("criterion 9", t, 600);
    // the claim under test: exactly the four parameters <1>, A1, A2, A3
    // remain. The displayed constraint system is flat along the two-point
    // leftover (see the solve report and the project notes); this assertion
    // records the discrepancy honestly instead of masking it.
    assert!(
        res.flat_directions.is_empty(),
        "criterion 9: FAIL - the N <= 3 constraint system leaves {} free \
         parameters {:?}; the two-point leftover {:?} is a flat direction of \
         the displayed identities (nine three-point combinations are fixed \
         absolutely, and every other check above passes along the family)",
        res.free.len(),
        res.free.iter().map(Symbol::name).collect::<Vec<_>>(),
        res.stage1_leftover.iter().map(Symbol::name).collect::<Vec<_>>()
    );
    println!(
        "criterion 9: PASS - staged solve leaves exactly {:?} ({:?})",
        res.claimed_free.iter().map(Symbol::name).collect::<Vec<_>>(),
        t.elapsed()
    );
}

#[test]
fn criterion_10_lemma_orders() {
    let t = Instant::now();
    for curve in [Arc::new(sample_curve_g2()), Arc::new(seeded_curve(5, 11))] {
        let rep = verify_25_lemma(&curve).unwrap();
        assert!(rep.order_minus4_vanishes, "order x^-4 must drop out");
        assert!(rep.order_minus5_vanishes, "order x^-5 must drop out");
        assert!(rep.regular_at_zero, "the left-hand side must be regular at x = 0");
        assert_eq!(rep.diag_degree, Some(4), "deg P0(x,x) = 2n - 6 = 4");
    }
    budget("criterion 10", t, 120);
    println!(
        "criterion 10: PASS - identity orders x^-4, x^-5 vanish and x = 0 regularity holds on n = 5 samples ({:?})",
        t.elapsed()
    );
}

/// Extra fidelity check tied to criterion 10: the explicit identity must
/// agree with the pipeline-computed Galois-even residual.
#[test]
fn lemma_lhs_matches_pipeline() {
    let t = Instant::now();
    let curve = Arc::new(sample_curve_g2());
    let c_val = model_constants(2, 5).unwrap().c;
    let opf = build_one_point(&curve).unwrap();
    let lhs = virasoro::minimal::lemma_25_lhs(&opf)
        .substitute_param(&Symbol::c(), &virasoro::param::ParamPoly::constant(c_val.clone()));
    // pipeline: (3/10) d^2 <T> minus the eps^0 diagonal of the full
    // two-point function with the state polynomials zeroed
    let tpf = build_two_point(&opf).unwrap();
    let mut zeroed = tpf.clone();
    let zero_map: std::collections::BTreeMap<_, _> = tpf
        .states
        .symbols
        .iter()
        .map(|s| (s.clone(), virasoro::param::ParamPoly::zero()))
        .collect();
    zeroed = virasoro::minimal::substitute_tpf(&zeroed, &zero_map);
    let n0 = virasoro::twopoint::n0_of_tt(&zeroed).unwrap();
    let d2t = zeroed.opf.element.remap(&[1], 2).derivative(1).derivative(1);
    let pipeline = d2t
        .scale_rat(&rat(3, 10))
        .sub(&n0)
        .substitute_param(&Symbol::c(), &virasoro::param::ParamPoly::constant(c_val));
    // compare in the one-variable context (Galois-even part, x2 as the
    // surviving variable)
    let (even, _) = pipeline.galois_split(1);
    // move everything to two variables for comparison: lift lhs from x1 slot
    let lhs_lifted = lhs.remap(&[1], 2);
    let diff = lhs_lifted.sub(&even);
    assert!(
        diff.is_zero(),
        "explicit identity differs from the pipeline: {}",
        diff.render()
    );
    println!(
        "lemma identity: PASS - explicit left-hand side equals the pipeline residual ({:?})",
        t.elapsed()
    );
}

/// The genus-one closed form of <T(x)> quoted for the constraint solve.
#[test]
fn g1_closed_form_matches() {
    use std::collections::BTreeMap;
    use virasoro::galois::{GaloisElement, RationalExpr};
    use virasoro::multipoly::MultiPoly;
    use virasoro::param::ParamPoly;

    let curve = rat_curve(3, &[4, 0, -4, 1]);
    let opf = build_one_point(&curve).unwrap();
    // <T(x)> = (c/32)(p')^2/p^2 <1> - c <1> x/p + <T>/p with <T> = A1/4
    let c = ParamPoly::var(Symbol::c());
    let vac = ParamPoly::var(Symbol::vac());
    let tav = ParamPoly::var(Symbol::t_av());
    let t1 = RationalExpr::new(
        curve.p_prime_multi(1, 0).pow(2).scale(&c.mul(&vac).scale(&rat(1, 32))),
        BTreeMap::from([(Factor::P(0), 2)]),
        &curve,
    );
    let t2 = RationalExpr::new(
        MultiPoly::var(1, 0).scale(&c.mul(&vac).neg()),
        BTreeMap::from([(Factor::P(0), 1)]),
        &curve,
    );
    let t3 = RationalExpr::new(
        MultiPoly::constant(1, tav.clone()),
        BTreeMap::from([(Factor::P(0), 1)]),
        &curve,
    );
    let closed = GaloisElement::from_component(curve.clone(), 1, 0, t1)
        .add(&GaloisElement::from_component(curve.clone(), 1, 0, t2))
        .add(&GaloisElement::from_component(curve.clone(), 1, 0, t3));
    // substitute <T> = A1/4 and compare with the constructed element
    let closed = closed.substitute_param(
        &Symbol::t_av(),
        &ParamPoly::var(Symbol::a(1)).scale(&rat(1, 4)),
    );
    assert_eq!(closed, opf.element);
    println!("g1 closed form: PASS - <T(x)> matches (c/32)[p']^2/p^2 <1> - c<1> x/p + <T>/p");
}

/// Perturbation test quoted with the constraint solve: c = -21/5 fails.
#[test]
fn perturbed_c_is_rejected() {
    let curve = symbolic_g1_curve();
    let ok = virasoro::minimal::n0_constraint_residual(&curve, &rat(3, 10), &rat(-22, 5)).unwrap();
    assert!(ok.is_none(), "the true constants must satisfy the identity");
    let bad = virasoro::minimal::n0_constraint_residual(&curve, &rat(3, 10), &rat(-21, 5)).unwrap();
    assert!(bad.is_some(), "perturbing c must leave a residual");
    println!("perturbation: PASS - c = -21/5 leaves a nonzero residual");
}

/// Asymptotics of the one-point element at infinity, both parities.
#[test]
fn one_point_asymptotics_both_parities() {
    for (n, coeffs) in [(5usize, vec![1i64, 0, 0, 0, -1, 0]), (4, vec![1, 0, 0, 0, -1])] {
        let curve = rat_curve(n, &coeffs);
        let opf = build_one_point(&curve).unwrap();
        let rep = virasoro::onepoint::asymptotics_check(&opf).unwrap();
        assert!(rep.passed, "asymptotics at n = {n}");
        // n odd: the coefficient of x^-2 is exactly (c/32)<1>
        if n % 2 == 1 {
            let c2 = coefficient_at_infinity(
                &opf.element.galois_split(0).0,
                0,
                -2,
            )
            .unwrap();
            let expect = virasoro::galois::GaloisElement::scalar(
                curve.clone(),
                1,
                virasoro::param::ParamPoly::var(Symbol::c())
                    .mul(&virasoro::param::ParamPoly::var(Symbol::vac()))
                    .scale(&rat(1, 32)),
            );
            assert_eq!(c2, expect);
        }
    }
    println!("one-point asymptotics: PASS");
}

/// CurveSpec is rejected exactly when p has a multiple zero.
#[test]
fn validation_examples() {
    assert!(CurveSpec::validate(
        5,
        [1i64, 0, 0, 0, -1, 0].iter().map(|&k| rat(k, 1)).collect()
    )
    .is_ok());
    assert!(CurveSpec::validate(3, [1i64, 0, 0, 0].iter().map(|&k| rat(k, 1)).collect()).is_err());
    println!("curve validation: PASS");
}
