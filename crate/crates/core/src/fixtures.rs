//! Reference data shipped with the crate.

use std::collections::BTreeMap;

use serde::Deserialize;

use crate::calculus::{FormSpec, MultTable};
use crate::exact::{parse_rat, Poly, Rat, RatFunc, Terms};
use crate::graph::ResGraph;
use crate::resolve::CurveInput;

pub const FAB_FIG1: &str = include_str!("../fixtures/fab_fig1.json");
pub const FAB_FIG2: &str = include_str!("../fixtures/fab_fig2.json");
pub const FAB_FIG3: &str = include_str!("../fixtures/fab_fig3.json");
pub const FAB_FIG4: &str = include_str!("../fixtures/fab_fig4.json");
pub const NODE: &str = include_str!("../fixtures/node.json");
pub const CUSP: &str = include_str!("../fixtures/cusp.json");
pub const FAB_CURVES: &str = include_str!("../fixtures/fab_curves.json");
pub const FAB_FIG1_MULT: &str = include_str!("../fixtures/fab_fig1_mult.json");
pub const EXPECTED: &str = include_str!("../fixtures/expected.json");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FixtureKind {
    Graph,
    Curves,
    MultTable,
    Expected,
    /// Built on demand from `(p, q, a)`.
    Template,
}

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub id: &'static str,
    pub kind: FixtureKind,
    pub description: &'static str,
    pub text: &'static str,
}

pub const CATALOG: &[Fixture] = &[
    Fixture {
        id: "fab_fig1",
        kind: FixtureKind::Graph,
        description: "f_ab resolution graph, standard form",
        text: FAB_FIG1,
    },
    Fixture {
        id: "fab_fig2",
        kind: FixtureKind::Graph,
        description: "f_ab decorated for x^3 dxdy",
        text: FAB_FIG2,
    },
    Fixture {
        id: "fab_fig3",
        kind: FixtureKind::Graph,
        description: "f_ab decorated for a product of maximal contact curves",
        text: FAB_FIG3,
    },
    Fixture {
        id: "fab_fig4",
        kind: FixtureKind::Graph,
        description: "f_ab decorated for (xy)^4 dxdy",
        text: FAB_FIG4,
    },
    Fixture {
        id: "node",
        kind: FixtureKind::Graph,
        description: "x^2+y^2",
        text: NODE,
    },
    Fixture {
        id: "cusp",
        kind: FixtureKind::Graph,
        description: "y^2+x^3",
        text: CUSP,
    },
    Fixture {
        id: "fab_curves",
        kind: FixtureKind::Curves,
        description: "branches of f_ab with a=2, b=3 and auxiliary curves",
        text: FAB_CURVES,
    },
    Fixture {
        id: "fab_fig1_mult",
        kind: FixtureKind::MultTable,
        description: "multiplicity table of the f_ab resolution",
        text: FAB_FIG1_MULT,
    },
    Fixture {
        id: "expected",
        kind: FixtureKind::Expected,
        description: "printed reference values",
        text: EXPECTED,
    },
    Fixture {
        id: "gpq_fig5",
        kind: FixtureKind::Template,
        description: "Q-resolution of (y^p+x^q)(y^q+x^p), parameters p q a",
        text: "",
    },
];

pub fn find(id: &str) -> Option<&'static Fixture> {
    CATALOG.iter().find(|f| f.id == id)
}

pub fn graph(id: &str) -> Option<ResGraph> {
    find(id)
        .filter(|f| f.kind == FixtureKind::Graph)
        .map(|f| ResGraph::parse(f.text).unwrap_or_else(|e| panic!("fixture {id}: {e}")))
}

pub fn fab_curves() -> CurveInput {
    CurveInput::parse(FAB_CURVES).expect("fab_curves fixture parses")
}

pub fn fab_mult_table() -> MultTable {
    MultTable::parse(FAB_FIG1_MULT).expect("multiplicity fixture parses")
}

/// A printed rational function: `scalar * numerator / prod (nu + N s)^k`.
#[derive(Clone, Debug, Deserialize)]
pub struct PrintedZeta {
    pub scalar: String,
    pub numerator: Vec<i64>,
    pub denominator: Vec<(i64, i64, u32)>,
    #[serde(default)]
    pub poles: Vec<(String, u32)>,
    #[serde(default)]
    pub double_poles: Vec<String>,
    #[serde(default)]
    pub witnesses: BTreeMap<String, Vec<(u64, u64)>>,
    #[serde(default)]
    pub milnor: Option<u64>,
    #[serde(default)]
    pub char_poly: Option<BTreeMap<String, i64>>,
    #[serde(default)]
    pub form: Option<FormSpec>,
}

impl PrintedZeta {
    pub fn value(&self) -> RatFunc {
        let scalar = parse_rat(&self.scalar).expect("printed scalar");
        let factors: Vec<(i64, i64)> = self
            .denominator
            .iter()
            .flat_map(|&(nu, n, k)| std::iter::repeat_n((nu, n), k as usize))
            .collect();
        let mut t = Terms::new();
        t.push(scalar, Poly::from_ints(&self.numerator), &factors);
        t.finish()
    }

    pub fn double_pole_values(&self) -> Vec<Rat> {
        let mut v: Vec<Rat> = self
            .double_poles
            .iter()
            .map(|s| parse_rat(s).expect("pole"))
            .collect();
        v.sort();
        v
    }

    pub fn pole_table(&self) -> Vec<(Rat, u32)> {
        let mut v: Vec<(Rat, u32)> = self
            .poles
            .iter()
            .map(|(s, k)| (parse_rat(s).expect("pole"), *k))
            .collect();
        v.sort();
        v
    }
}

#[derive(Clone, Debug, Deserialize)]
pub struct JordanReference {
    pub char_poly: BTreeMap<String, i64>,
    pub blocks: u32,
}

#[derive(Clone, Debug, Deserialize)]
pub struct Expected {
    pub fab_fig1: PrintedZeta,
    pub fab_fig2: PrintedZeta,
    pub fab_fig3: PrintedZeta,
    pub fab_fig4: PrintedZeta,
    pub jordan_size2: JordanReference,
    pub gpq: BTreeMap<String, BTreeMap<String, String>>,
}

impl Expected {
    pub fn figure(&self, id: &str) -> Option<&PrintedZeta> {
        match id {
            "fab_fig1" => Some(&self.fab_fig1),
            "fab_fig2" => Some(&self.fab_fig2),
            "fab_fig3" => Some(&self.fab_fig3),
            "fab_fig4" => Some(&self.fab_fig4),
            _ => None,
        }
    }
}

pub fn expected() -> Expected {
    serde_json::from_str(EXPECTED).expect("expected-values fixture parses")
}
