//! Local topological zeta functions from decorated resolution graphs.
//!
//! Every stratum meeting the fibre over the origin is either the open part
//! of an exceptional divisor or an intersection point of two components, so
//! the sum over strata is a sum over exceptional vertices and edges. The
//! empty stratum contributes nothing because the fibre lies inside the
//! divisor, and arrow strata meet the fibre only at their attachment point,
//! which is already the edge stratum.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};
use serde_json::json;
use thiserror::Error;

use crate::exact::{divisors, fmt_rat, gcd_u64, Poly, Rat, RatFunc, Terms};
use crate::graph::{GraphError, ResGraph, Vertex, Violation};

#[derive(Debug, Error)]
pub enum ZetaError {
    #[error("invalid graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("graph carries quotient data; use the Q-resolution engine")]
    NotOrdinary,
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PoleRecord {
    pub location: Rat,
    pub order: u32,
    /// Vertices whose factor `nu + N*s` vanishes at the pole.
    pub witnesses: Vec<String>,
    /// Edges with both endpoints among the witnesses.
    pub witness_edges: Vec<(String, String)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaReport {
    pub value: RatFunc,
    /// Ascending by location.
    pub poles: Vec<PoleRecord>,
    pub lct: Rat,
}

impl ZetaReport {
    pub fn double_poles(&self) -> Vec<Rat> {
        self.poles
            .iter()
            .filter(|p| p.order == 2)
            .map(|p| p.location.clone())
            .collect()
    }

    pub fn pole(&self, s0: &Rat) -> Option<&PoleRecord> {
        self.poles.iter().find(|p| &p.location == s0)
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "value": self.value.to_string(),
            "poles": self.poles.iter().map(|p| json!({
                "s0": fmt_rat(&p.location),
                "order": p.order,
                "witnesses": p.witnesses,
            })).collect::<Vec<_>>(),
            "lct": fmt_rat(&self.lct),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("Z(s) = {}\npoles:\n", self.value);
        for p in &self.poles {
            out.push_str(&format!(
                "  s0 = {:<10} order {}   witnesses: {}\n",
                fmt_rat(&p.location),
                p.order,
                p.witnesses.join(", ")
            ));
        }
        out.push_str(&format!("lct = {}\n", fmt_rat(&self.lct)));
        out
    }
}

fn factor(v: &Vertex) -> (i64, i64) {
    (v.nu as i64, v.n as i64)
}

fn checked(g: &ResGraph) -> Result<(), ZetaError> {
    let v = g.validate();
    if v.is_empty() {
        Ok(())
    } else {
        Err(ZetaError::Invalid(v))
    }
}

/// Sum over the strata of an ordinary resolution graph.
pub fn zeta_ordinary(g: &ResGraph) -> Result<ZetaReport, ZetaError> {
    checked(g)?;
    if !g.is_ordinary() {
        return Err(ZetaError::NotOrdinary);
    }
    let idx = g.index();
    let mut terms = Terms::new();
    // one-element strata
    for v in g.exceptional() {
        let chi = g.chi_open(&v.id)?;
        terms.push(Rat::from_integer(chi.into()), Poly::one(), &[factor(v)]);
    }
    // two-element strata: one point per intersection
    for e in &g.edges {
        let (a, b) = (
            &g.vertices[idx[e.a.as_str()]],
            &g.vertices[idx[e.b.as_str()]],
        );
        terms.push(Rat::one(), Poly::one(), &[factor(a), factor(b)]);
    }
    Ok(report(g, terms.finish()))
}

/// Q-resolution formula: vertex weights `chi(open stratum) + sum of
/// quotient orders on it`, edge weights `m_ij`.
pub fn zeta_q(g: &ResGraph) -> Result<ZetaReport, ZetaError> {
    checked(g)?;
    let idx = g.index();
    let mut terms = Terms::new();
    for v in g.exceptional() {
        let w = vertex_weight(g, v)?;
        terms.push(Rat::from_integer(w.into()), Poly::one(), &[factor(v)]);
    }
    for e in &g.edges {
        let (a, b) = (
            &g.vertices[idx[e.a.as_str()]],
            &g.vertices[idx[e.b.as_str()]],
        );
        terms.push(
            Rat::from_integer(e.order.into()),
            Poly::one(),
            &[factor(a), factor(b)],
        );
    }
    Ok(report(g, terms.finish()))
}

fn vertex_weight(g: &ResGraph, v: &Vertex) -> Result<i64, GraphError> {
    let chi = g.chi_open(&v.id)?;
    let q: u64 = g
        .qpoints
        .iter()
        .filter(|q| q.vertex == v.id)
        .map(|q| q.order)
        .sum();
    Ok(chi + q as i64)
}

fn vanishes(v: &Vertex, s0: &Rat) -> bool {
    v.n > 0
        && (Rat::from_integer((v.nu as i64).into()) + Rat::from_integer((v.n as i64).into()) * s0)
            .is_zero()
}

fn report(g: &ResGraph, value: RatFunc) -> ZetaReport {
    let poles = value
        .poles()
        .into_iter()
        .map(|(location, order)| {
            let witnesses: Vec<String> = g
                .vertices
                .iter()
                .filter(|v| vanishes(v, &location))
                .map(|v| v.id.clone())
                .collect();
            let witness_edges = g
                .edges
                .iter()
                .filter(|e| witnesses.contains(&e.a) && witnesses.contains(&e.b))
                .map(|e| (e.a.clone(), e.b.clone()))
                .collect();
            PoleRecord {
                location,
                order,
                witnesses,
                witness_edges,
            }
        })
        .collect();
    ZetaReport {
        value,
        poles,
        lct: lct(g),
    }
}

/// Minimum of `nu/N` over all vertices with `N >= 1`, arrows included.
pub fn lct(g: &ResGraph) -> Rat {
    g.vertices
        .iter()
        .filter(|v| v.n > 0)
        .map(|v| Rat::new((v.nu as i64).into(), (v.n as i64).into()))
        .min()
        .unwrap_or_else(Rat::one)
}

/// Pole order at `s0` from the two leading Laurent coefficients of the
/// stratum sum, without forming the rational function.
///
/// Only products of at most two factors occur, so the order is at most 2;
/// the `(s - s0)^-2` coefficient is a sum of positive terms.
pub fn laurent_pole_order(g: &ResGraph, s0: &Rat) -> Result<u32, ZetaError> {
    checked(g)?;
    let idx = g.index();
    let n_of = |v: &Vertex| Rat::from_integer((v.n as i64).into());
    let l_at = |v: &Vertex| Rat::from_integer((v.nu as i64).into()) + n_of(v) * s0;
    let mut c2 = Rat::zero();
    let mut c1 = Rat::zero();
    for v in g.exceptional() {
        if vanishes(v, s0) {
            c1 += Rat::from_integer(vertex_weight(g, v)?.into()) / n_of(v);
        }
    }
    for e in &g.edges {
        let (a, b) = (
            &g.vertices[idx[e.a.as_str()]],
            &g.vertices[idx[e.b.as_str()]],
        );
        let m = Rat::from_integer(e.order.into());
        match (vanishes(a, s0), vanishes(b, s0)) {
            (true, true) => c2 += m / (n_of(a) * n_of(b)),
            (true, false) => c1 += m / (n_of(a) * l_at(b)),
            (false, true) => c1 += m / (n_of(b) * l_at(a)),
            (false, false) => {}
        }
    }
    Ok(if !c2.is_zero() {
        2
    } else if !c1.is_zero() {
        1
    } else {
        0
    })
}

/// Candidate pole locations `-nu/N`, deduplicated and ascending.
pub fn candidate_poles(g: &ResGraph) -> Vec<Rat> {
    let mut c: Vec<Rat> = g
        .vertices
        .iter()
        .filter(|v| v.n > 0)
        .map(|v| -Rat::new((v.nu as i64).into(), (v.n as i64).into()))
        .collect();
    c.sort();
    c.dedup();
    c
}

/// Divisibility constraint on double poles carried by one edge: a double
/// pole `-u/d` (lowest terms) supported on the edge needs `d | gcd(N_a, N_b)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeCandidate {
    pub a: String,
    pub b: String,
    pub n_a: u64,
    pub n_b: u64,
    pub gcd: u64,
    /// Denominators a double pole on this edge may have.
    pub denominators: Vec<u64>,
    /// Whether the current decoration already makes this edge a double pole.
    pub current: Option<Rat>,
}

impl EdgeCandidate {
    pub fn allows_denominator(&self, d: u64) -> bool {
        self.gcd.is_multiple_of(d)
    }
}

/// One record per edge between exceptional vertices.
pub fn double_pole_candidates(g: &ResGraph) -> Vec<EdgeCandidate> {
    let idx = g.index();
    g.edges
        .iter()
        .filter_map(|e| {
            let a = &g.vertices[*idx.get(e.a.as_str())?];
            let b = &g.vertices[*idx.get(e.b.as_str())?];
            if a.is_arrow() || b.is_arrow() {
                return None;
            }
            let gcd = gcd_u64(a.n, b.n);
            let current = (a.nu * b.n == b.nu * a.n)
                .then(|| -Rat::new((a.nu as i64).into(), (a.n as i64).into()));
            Some(EdgeCandidate {
                a: a.id.clone(),
                b: b.id.clone(),
                n_a: a.n,
                n_b: b.n,
                gcd,
                denominators: divisors(gcd),
                current,
            })
        })
        .collect()
}

/// Reduced denominator of a pole location.
pub fn pole_denominator(s0: &Rat) -> u64 {
    use num_traits::ToPrimitive;
    s0.denom().abs().to_u64().unwrap_or(0)
}

/// Poles grouped by order, for summaries.
pub fn pole_table(r: &ZetaReport) -> BTreeMap<u32, Vec<Rat>> {
    let mut t: BTreeMap<u32, Vec<Rat>> = BTreeMap::new();
    for p in &r.poles {
        t.entry(p.order).or_default().push(p.location.clone());
    }
    t
}
