use std::collections::BTreeMap;

use proptest::prelude::*;
use ztop::calculus::{decorate, FormSpec, MultTable};
use ztop::exact::rat;
use ztop::explore::{
    eigenvalue_coverage, fast_poles, side_certificates, sweep, sweep_with, SearchBox,
};
use ztop::fixtures;
use ztop::graph::ResGraph;
use ztop::zeta::zeta_ordinary;

fn fig1() -> (ResGraph, MultTable) {
    (
        fixtures::graph("fab_fig1").unwrap(),
        fixtures::fab_mult_table(),
    )
}

fn full_poles(g: &ResGraph, t: &MultTable, w: &FormSpec) -> Vec<(ztop::exact::Rat, u32)> {
    let r = zeta_ordinary(&decorate(g, t, w).unwrap()).unwrap();
    let mut v: Vec<_> = r
        .poles
        .iter()
        .map(|p| (p.location.clone(), p.order))
        .collect();
    v.sort();
    v
}

#[test]
fn second_example_inside_its_box() {
    let (g, t) = fig1();
    let b = SearchBox::parse_bounds("x=1,y=2,x-y^2=2,x-2y^2=2,x-3y^2=2,y-x^2=4,y+x^2=4")
        .unwrap()
        .with_target(vec![rat(-3, 2), rat(-5, 3)]);
    let r = sweep(&g, &t, &b, Some("E0")).unwrap();
    assert_eq!(r.size, 2 * 3 * 3 * 3 * 3 * 5 * 5);
    assert!(r.count_exact(&[rat(-3, 2), rat(-5, 3)]) >= 1);
    let w2 = fixtures::expected().fab_fig3.form.clone().unwrap();
    let exps: BTreeMap<String, u64> = b
        .curves
        .iter()
        .map(|c| (c.clone(), w2.exponents.get(c).copied().unwrap_or(0)))
        .collect();
    assert!(
        exps.iter().all(|(c, e)| *e <= b.bounds[c]),
        "printed form lies in the box"
    );
    let w2_poles = full_poles(&g, &t, &w2);
    assert!(w2_poles.contains(&(rat(-3, 2), 2)) && w2_poles.contains(&(rat(-5, 3), 2)));
    assert!(r.reverify_failures.is_empty());
    for h in &r.hits {
        assert_eq!(h.poles, full_poles(&g, &t, &h.form));
    }
}

#[test]
fn third_example_root_witness() {
    let (g, t) = fig1();
    let w3 = fixtures::expected().fab_fig4.form.clone().unwrap();
    let d = decorate(&g, &t, &w3).unwrap();
    let r = zeta_ordinary(&d).unwrap();
    assert_eq!(r.double_poles(), vec![rat(-5, 6)]);
    let p = r.pole(&rat(-5, 6)).unwrap();
    let root = d.vertex("E0").unwrap();
    assert_eq!((root.n, root.nu), (12, 10));
    assert!(p.witness_edges.iter().any(|(a, b)| a == "E0" || b == "E0"));
}

#[test]
fn coverage_from_x_and_y() {
    let (g, t) = fig1();
    let b = SearchBox::parse_bounds("x=6,y=6").unwrap();
    let r = sweep(&g, &t, &b, Some("E0")).unwrap();
    let cov = eigenvalue_coverage(&g, &r).unwrap();
    for d in [1, 2, 3, 6] {
        assert!(cov.covered.contains(&d), "order {d}");
    }
}

#[test]
fn standard_form_coverage() {
    let (g, t) = fig1();
    let r = sweep(&g, &t, &SearchBox::default(), None).unwrap();
    let cov = eigenvalue_coverage(&g, &r).unwrap();
    assert_eq!(cov.covered, [1, 6, 38, 57].into_iter().collect());
    assert!(cov.off_spectrum.is_empty());
    assert_eq!(r.flagged_count, 0);
}

#[test]
fn certificates_ignore_the_box() {
    let (g, t) = fig1();
    let small = sweep(&g, &t, &SearchBox::parse_bounds("x=1").unwrap(), Some("E0")).unwrap();
    let large = sweep(
        &g,
        &t,
        &SearchBox::parse_bounds("x=5,y=5,y-x^2=5").unwrap(),
        Some("E0"),
    )
    .unwrap();
    assert_eq!(small.certificates, large.certificates);
    assert_eq!(small.certificates, side_certificates(&g, "E0"));
}

#[test]
fn node_forms_in_x_and_y_are_inadmissible() {
    let g = fixtures::graph("node").unwrap();
    let att = BTreeMap::from([
        ("x".to_string(), vec![("E".to_string(), 1)]),
        ("y".to_string(), vec![("E".to_string(), 1)]),
    ]);
    let t = MultTable::derive(&g, &att).unwrap();
    let r = sweep(&g, &t, &SearchBox::parse_bounds("x=3,y=3").unwrap(), None).unwrap();
    assert_eq!(r.size, 16);
    assert_eq!(r.inadmissible, 15);
    let cov = eigenvalue_coverage(&g, &r).unwrap();
    assert_eq!(cov.covered, [1].into_iter().collect());
    assert!(cov.uncovered.is_empty());
}

#[test]
fn sweep_is_order_independent() {
    let (g, t) = fig1();
    let b = SearchBox::parse_bounds("x=3,y=3,x-y^2=3,y-x^2=3,y+x^2=3")
        .unwrap()
        .with_target(vec![rat(-1, 2)]);
    assert_eq!(
        sweep_with(&g, &t, &b, Some("E0"), false).unwrap(),
        sweep_with(&g, &t, &b, Some("E0"), true).unwrap()
    );
}

fn form_strategy() -> impl Strategy<Value = FormSpec> {
    let curves = ["x", "y", "x-y^2", "x-2y^2", "x-3y^2", "y-x^2", "y+x^2"];
    proptest::collection::vec(0u64..=6, curves.len()).prop_map(move |e| FormSpec {
        exponents: curves.iter().map(|c| c.to_string()).zip(e).collect(),
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn skeleton_poles_match_full_sum(w in form_strategy()) {
        let (g, t) = fig1();
        prop_assert_eq!(fast_poles(&g, &t, &w).unwrap(), full_poles(&g, &t, &w));
    }
}
