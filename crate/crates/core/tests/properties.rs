use std::collections::BTreeMap;

use proptest::prelude::*;
use ztop::calculus::{canonical_nu, decorate, self_intersections, FormSpec};
use ztop::exact::Rat;
use ztop::fixtures::{self, FixtureKind};
use ztop::graph::ResGraph;
use ztop::monodromy::{char_poly, milnor};
use ztop::resolve::{resolve, CenterOrder, CurveInput, Resolution, ResolveOptions};
use ztop::zeta::{zeta_ordinary, zeta_q};

fn graph_fixtures() -> Vec<(&'static str, ResGraph)> {
    fixtures::CATALOG
        .iter()
        .filter(|f| f.kind == FixtureKind::Graph)
        .map(|f| (f.id, fixtures::graph(f.id).unwrap()))
        .collect()
}

/// `sum chi_open + #edges = #exceptional + 1` for a tree of rational curves.
fn sum_rule(g: &ResGraph) -> bool {
    let chi: i64 = g.exceptional().map(|v| g.chi_open(&v.id).unwrap()).sum();
    chi + g.edges.len() as i64 == g.exceptional().count() as i64 + 1
}

fn candidates(g: &ResGraph) -> Vec<Rat> {
    g.vertices
        .iter()
        .filter(|v| v.n > 0)
        .map(|v| Rat::new((-(v.nu as i64)).into(), (v.n as i64).into()))
        .collect()
}

fn zeta_shape(name: &str, g: &ResGraph) {
    let r = zeta_ordinary(g).unwrap();
    assert!(
        r.value.numerator_degree() < r.value.denominator_degree(),
        "{name}: Z does not vanish at infinity"
    );
    let cand = candidates(g);
    for p in &r.poles {
        assert!(
            cand.contains(&p.location),
            "{name}: pole {} is not a candidate",
            p.location
        );
    }
}

#[test]
fn fixture_invariants() {
    for (id, g) in graph_fixtures() {
        assert!(sum_rule(&g), "{id}");
        zeta_shape(id, &g);
        assert_eq!(
            zeta_q(&g).unwrap().value,
            zeta_ordinary(&g).unwrap().value,
            "{id}"
        );
    }
}

#[test]
fn multiplicities_are_positive() {
    let t = fixtures::fab_mult_table();
    assert!(t.canonical.values().all(|&k| k > 0));
    for (c, cm) in &t.curves {
        assert!(cm.m.values().all(|&m| m > 0), "{c}");
    }
}

#[test]
fn root_value_of_the_second_example() {
    let g = fixtures::graph("fab_fig1").unwrap();
    let w = fixtures::expected().fab_fig3.form.clone().unwrap();
    let d = decorate(&g, &fixtures::fab_mult_table(), &w).unwrap();
    let e0 = d.vertex("E0").unwrap();
    assert_eq!((e0.n, e0.nu), (12, 1 + 1 + (1 + 2 + 2 + 2 + 2 + 4 + 4)));
}

fn relabeling(g: &ResGraph, seed: u64) -> BTreeMap<String, String> {
    use rand::seq::SliceRandom;
    use rand::SeedableRng;
    let mut ids: Vec<String> = g.vertices.iter().map(|v| v.id.clone()).collect();
    let mut names: Vec<String> = (0..ids.len()).map(|i| format!("v{i}")).collect();
    names.shuffle(&mut rand::rngs::StdRng::seed_from_u64(seed));
    ids.drain(..).zip(names).collect()
}

const CURVES: [&str; 7] = ["x", "y", "x-y^2", "x-2y^2", "x-3y^2", "y-x^2", "y+x^2"];

fn form(e: &[u64]) -> FormSpec {
    FormSpec {
        exponents: CURVES
            .iter()
            .map(|c| c.to_string())
            .zip(e.iter().copied())
            .collect(),
    }
}

/// A branch `y^p - c x^q` (or with `x`, `y` swapped) with `gcd(p, q) = 1`.
fn branch() -> impl Strategy<Value = (bool, u32, u32, i64)> {
    (any::<bool>(), 1u32..4, 1u32..8, 1i64..5)
        .prop_filter("coprime, singular or smooth", |(_, p, q, _)| {
            num_integer::gcd(*p, *q) == 1 && *q >= *p
        })
}

fn germ() -> impl Strategy<Value = CurveInput> {
    prop::collection::vec(branch(), 1..4).prop_filter_map("distinct branches", |bs| {
        let mut seen = std::collections::BTreeSet::new();
        let mut list = Vec::new();
        for (i, &(swap, p, q, c)) in bs.iter().enumerate() {
            let (u, v) = if swap { ("x", "y") } else { ("y", "x") };
            let poly = format!("{u}^{p}-{c}*{v}^{q}");
            // x - y and y - x are one curve
            let key = if (p, q, c) == (1, 1, 1) {
                (false, p, q, c)
            } else {
                (swap, p, q, c)
            };
            if !seen.insert(key) {
                return None;
            }
            list.push((format!("f{i}"), poly));
        }
        let refs: Vec<(&str, &str)> = list.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        Some(CurveInput::branches(&refs))
    })
}

fn check_resolution(r: &Resolution) -> Result<(), TestCaseError> {
    let g = &r.graph;
    prop_assert!(g.validate().is_empty());
    prop_assert!(sum_rule(g));
    let si = self_intersections(g).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let nu = canonical_nu(g, &si).map_err(|e| TestCaseError::fail(e.to_string()))?;
    for v in g.exceptional() {
        prop_assert_eq!(nu[&v.id], v.nu, "adjunction at {}", v.id);
        // pullback relation
        let adj: i64 = g
            .neighbors(&v.id)
            .map(|w| g.vertex(w).unwrap().n as i64)
            .sum();
        prop_assert_eq!(v.n as i64 * si[&v.id] + adj, 0);
    }
    let cp = char_poly(g).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert!(cp.is_polynomial());
    let mu = milnor(g).map_err(|e| TestCaseError::fail(e.to_string()))?;
    prop_assert_eq!(mu as i64, r.milnor_from_multiplicities());
    let z = zeta_ordinary(g).map_err(|e| TestCaseError::fail(e.to_string()))?;
    let dp = z.double_poles();
    prop_assert!(dp.len() <= 1, "double poles {:?}", dp);
    if let Some(d) = dp.first() {
        prop_assert_eq!(d.clone(), -z.lct.clone());
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn relabeling_changes_nothing(idx in 0usize..6, seed in any::<u64>()) {
        let (id, g) = graph_fixtures().swap_remove(idx);
        let h = g.relabel(&relabeling(&g, seed));
        prop_assert_eq!(h.validate().is_empty(), g.validate().is_empty());
        prop_assert!(h.is_isomorphic(&g), "{}", id);
        let mut a: Vec<i64> = g.exceptional().map(|v| g.chi_open(&v.id).unwrap()).collect();
        let mut b: Vec<i64> = h.exceptional().map(|v| h.chi_open(&v.id).unwrap()).collect();
        a.sort();
        b.sort();
        prop_assert_eq!(a, b);
        let (zg, zh) = (zeta_ordinary(&g).unwrap(), zeta_ordinary(&h).unwrap());
        prop_assert_eq!(&zg.value, &zh.value);
        let map = relabeling(&g, seed);
        for (p, q) in zg.poles.iter().zip(&zh.poles) {
            prop_assert_eq!((&p.location, p.order), (&q.location, q.order));
            let mut w: Vec<String> = p.witnesses.iter().map(|x| map[x].clone()).collect();
            w.sort();
            let mut v = q.witnesses.clone();
            v.sort();
            prop_assert_eq!(w, v);
        }
    }

    #[test]
    fn decorate_is_linear(c in prop::collection::vec(0u64..4, 7), d in prop::collection::vec(0u64..4, 7)) {
        let g = fixtures::graph("fab_fig1").unwrap();
        let t = fixtures::fab_mult_table();
        let sum: Vec<u64> = c.iter().zip(&d).map(|(a, b)| a + b).collect();
        let (gc, gd, gs) = (
            decorate(&g, &t, &form(&c)).unwrap(),
            decorate(&g, &t, &form(&d)).unwrap(),
            decorate(&g, &t, &form(&sum)).unwrap(),
        );
        for v in g.exceptional() {
            let nu = |x: &ResGraph| x.vertex(&v.id).unwrap().nu;
            prop_assert_eq!(nu(&gs) + v.nu, nu(&gc) + nu(&gd), "at {}", v.id);
        }
    }

    #[test]
    fn random_germs_resolve_consistently(input in germ(), seed in any::<u64>()) {
        let r = resolve(&input, ResolveOptions::default()).unwrap();
        check_resolution(&r)?;
        let shuffled = resolve(&input, ResolveOptions { order: CenterOrder::Shuffled(seed), ..Default::default() }).unwrap();
        prop_assert!(shuffled.graph.is_isomorphic(&r.graph));
    }
}
