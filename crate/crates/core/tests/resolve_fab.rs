use ztop::calculus::{decorate, MultTable};
use ztop::fixtures;
use ztop::resolve::{resolve, CenterOrder, ResolveOptions};

#[test]
fn five_branch_germ_resolves_to_figure_one() {
    let r = resolve(&fixtures::fab_curves(), ResolveOptions::default()).unwrap();
    let fig1 = fixtures::graph("fab_fig1").unwrap();
    println!("{}", r.graph);
    let map = r
        .graph
        .isomorphism(&fig1, true)
        .expect("isomorphic to the printed graph");

    // multiplicity table, transported along the isomorphism
    let want = fixtures::fab_mult_table();
    for (v, k) in &r.table.canonical {
        assert_eq!(want.canonical[&map[v]], *k, "canonical at {v}");
    }
    for (curve, cm) in &want.curves {
        let got = &r.table.curves[curve];
        for (v, m) in &got.m {
            assert_eq!(cm.m[&map[v]], *m, "{curve} at {v}");
        }
        let att: Vec<(String, u64)> = got
            .attachment
            .iter()
            .map(|(v, c)| (map[v].clone(), *c))
            .collect();
        assert_eq!(att, cm.attachment, "{curve}");
    }
}

#[test]
fn decorations_reproduce_figures_two_to_four() {
    let r = resolve(&fixtures::fab_curves(), ResolveOptions::default()).unwrap();
    let e = fixtures::expected();
    for id in ["fab_fig2", "fab_fig3", "fab_fig4"] {
        let w = e.figure(id).unwrap().form.clone().unwrap();
        let d = decorate(&r.graph, &r.table, &w).unwrap();
        assert!(d.is_isomorphic(&fixtures::graph(id).unwrap()), "{id}");
    }
}

#[test]
fn shuffled_center_order_gives_the_same_model() {
    let base = resolve(&fixtures::fab_curves(), ResolveOptions::default()).unwrap();
    for seed in 0..4 {
        let opts = ResolveOptions {
            order: CenterOrder::Shuffled(seed),
            ..Default::default()
        };
        let r = resolve(&fixtures::fab_curves(), opts).unwrap();
        assert!(r.graph.is_isomorphic(&base.graph));
        let map = r.graph.isomorphism(&base.graph, true).unwrap();
        for (c, cm) in &r.table.curves {
            for (v, m) in &cm.m {
                assert_eq!(base.table.curves[c].m[&map[v]], *m);
            }
        }
    }
}

#[test]
fn engine_table_matches_intersection_theory() {
    let r = resolve(&fixtures::fab_curves(), ResolveOptions::default()).unwrap();
    let derived = MultTable::derive(&r.graph, &r.exceptional_attachments()).unwrap();
    assert_eq!(derived.canonical, r.table.canonical);
    for (c, cm) in &derived.curves {
        assert_eq!(cm.m, r.table.curves[c].m, "{c}");
    }
}

#[test]
fn other_parameters_keep_the_shape() {
    let text = fixtures::FAB_CURVES
        .replace("x-2*y^2", "x-4*y^2")
        .replace("x-3*y^2", "x-5*y^2");
    let input = ztop::resolve::CurveInput::parse(&text).unwrap();
    let r = resolve(&input, ResolveOptions::default()).unwrap();
    assert!(r.graph.is_isomorphic(&fixtures::graph("fab_fig1").unwrap()));
}
