//! Decorated dual resolution graphs.
//!
//! Exceptional divisors are vertices. Strict transforms of the branches of
//! `f` and of the form divisor are modelled as arrow vertices with exactly
//! one incident edge, so that every two-element stratum of the resolution
//! corresponds to an edge. Quotient (Q-resolution) data lives in edge orders
//! and in [`QPoint`]s on open strata.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VertexKind {
    Exceptional,
    BranchArrow,
    FormArrow,
}

impl VertexKind {
    pub fn is_arrow(self) -> bool {
        !matches!(self, VertexKind::Exceptional)
    }
}

/// A component of the total transform with numerical data `(N, nu)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Vertex {
    pub id: String,
    pub kind: VertexKind,
    #[serde(rename = "N")]
    pub n: u64,
    pub nu: u64,
    #[serde(default, skip_serializing_if = "is_zero_u32")]
    pub genus: u32,
}

fn is_zero_u32(v: &u32) -> bool {
    *v == 0
}

fn is_one(v: &u64) -> bool {
    *v == 1
}

fn default_order() -> u64 {
    1
}

impl Vertex {
    pub fn exceptional(id: impl Into<String>, n: u64, nu: u64) -> Self {
        Vertex {
            id: id.into(),
            kind: VertexKind::Exceptional,
            n,
            nu,
            genus: 0,
        }
    }

    pub fn branch_arrow(id: impl Into<String>) -> Self {
        Vertex {
            id: id.into(),
            kind: VertexKind::BranchArrow,
            n: 1,
            nu: 1,
            genus: 0,
        }
    }

    pub fn form_arrow(id: impl Into<String>, nu: u64) -> Self {
        Vertex {
            id: id.into(),
            kind: VertexKind::FormArrow,
            n: 0,
            nu,
            genus: 0,
        }
    }

    pub fn is_arrow(&self) -> bool {
        self.kind.is_arrow()
    }
}

/// Intersection of two components; `order > 1` marks a quotient point.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Edge {
    pub a: String,
    pub b: String,
    #[serde(default = "default_order", skip_serializing_if = "is_one")]
    pub order: u64,
}

impl Edge {
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Self {
        Edge {
            a: a.into(),
            b: b.into(),
            order: 1,
        }
    }

    pub fn with_order(a: impl Into<String>, b: impl Into<String>, order: u64) -> Self {
        Edge {
            a: a.into(),
            b: b.into(),
            order,
        }
    }

    pub fn other(&self, id: &str) -> Option<&str> {
        if self.a == id {
            Some(&self.b)
        } else if self.b == id {
            Some(&self.a)
        } else {
            None
        }
    }
}

/// Cyclic quotient point on the open stratum of an exceptional vertex.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QPoint {
    pub vertex: String,
    pub order: u64,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResGraph {
    #[serde(default)]
    pub label: String,
    pub vertices: Vec<Vertex>,
    #[serde(default)]
    pub edges: Vec<Edge>,
    #[serde(default)]
    pub qpoints: Vec<QPoint>,
    /// Skip the tree check on the exceptional subgraph.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub allow_cycles: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Error)]
pub enum Violation {
    #[error("graph has no vertices")]
    Empty,
    #[error("graph has no exceptional vertex")]
    NoExceptional,
    #[error("duplicate vertex id '{0}'")]
    DuplicateId(String),
    #[error("edge {0}-{1} references an unknown vertex")]
    UnknownEndpoint(String, String),
    #[error("edge {0}-{0} is a loop")]
    SelfLoop(String),
    #[error("edge {0}-{1} appears more than once")]
    DuplicateEdge(String, String),
    #[error("edge {0}-{1} joins two arrows")]
    ArrowArrowEdge(String, String),
    #[error("edge {0}-{1} has order 0")]
    ZeroOrder(String, String),
    #[error("arrow '{id}' has {degree} incident edges, expected 1")]
    ArrowDegree { id: String, degree: usize },
    #[error("vertex '{id}': {reason}")]
    NumericalData { id: String, reason: &'static str },
    #[error("qpoint on '{0}', which is not an exceptional vertex")]
    QPointVertex(String),
    #[error("qpoint on '{vertex}' has order {order}, expected at least 2")]
    QPointOrder { vertex: String, order: u64 },
    #[error("exceptional subgraph is not connected")]
    Disconnected,
    #[error("exceptional subgraph is not a tree")]
    NotATree,
}

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("unknown vertex '{0}'")]
    UnknownVertex(String),
    #[error("vertex '{0}' is an arrow, not an exceptional divisor")]
    NotExceptional(String),
    #[error("syntax error at line {line}, column {column}: {msg}")]
    Syntax {
        line: usize,
        column: usize,
        msg: String,
    },
    #[error("invalid graph: {}", join_violations(.0))]
    Invalid(Vec<Violation>),
}

fn join_violations(v: &[Violation]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

/// Serialized form, with numerical data optional so arrows may rely on
/// their defaults.
#[derive(Deserialize)]
struct RawGraph {
    #[serde(default)]
    label: String,
    vertices: Vec<RawVertex>,
    #[serde(default)]
    edges: Vec<Edge>,
    #[serde(default)]
    qpoints: Vec<QPoint>,
    #[serde(default)]
    allow_cycles: bool,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawVertex {
    id: String,
    kind: VertexKind,
    #[serde(rename = "N")]
    n: Option<u64>,
    nu: Option<u64>,
    #[serde(default)]
    genus: u32,
}

impl ResGraph {
    pub fn new(label: impl Into<String>) -> Self {
        ResGraph {
            label: label.into(),
            ..Default::default()
        }
    }

    /// Parses and validates a graph document.
    pub fn parse(text: &str) -> Result<ResGraph, GraphError> {
        let g = Self::parse_unchecked(text)?;
        let v = g.validate();
        if v.is_empty() {
            Ok(g)
        } else {
            Err(GraphError::Invalid(v))
        }
    }

    /// Parses without semantic validation.
    pub fn parse_unchecked(text: &str) -> Result<ResGraph, GraphError> {
        let raw: RawGraph = serde_json::from_str(text).map_err(|e| GraphError::Syntax {
            line: e.line(),
            column: e.column(),
            msg: e.to_string(),
        })?;
        let vertices = raw
            .vertices
            .into_iter()
            .map(|r| {
                let (dn, dnu) = match r.kind {
                    VertexKind::BranchArrow => (1, 1),
                    VertexKind::FormArrow => (0, 1),
                    VertexKind::Exceptional => (0, 0),
                };
                Vertex {
                    id: r.id,
                    kind: r.kind,
                    n: r.n.unwrap_or(dn),
                    nu: r.nu.unwrap_or(dnu),
                    genus: r.genus,
                }
            })
            .collect();
        Ok(ResGraph {
            label: raw.label,
            vertices,
            edges: raw.edges,
            qpoints: raw.qpoints,
            allow_cycles: raw.allow_cycles,
        })
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("graph serializes")
    }

    pub fn add_vertex(&mut self, v: Vertex) {
        self.vertices.push(v);
    }

    pub fn add_edge(&mut self, e: Edge) {
        self.edges.push(e);
    }

    pub fn vertex(&self, id: &str) -> Option<&Vertex> {
        self.vertices.iter().find(|v| v.id == id)
    }

    pub fn vertex_mut(&mut self, id: &str) -> Option<&mut Vertex> {
        self.vertices.iter_mut().find(|v| v.id == id)
    }

    pub fn index(&self) -> HashMap<&str, usize> {
        self.vertices
            .iter()
            .enumerate()
            .map(|(i, v)| (v.id.as_str(), i))
            .collect()
    }

    pub fn exceptional(&self) -> impl Iterator<Item = &Vertex> {
        self.vertices
            .iter()
            .filter(|v| v.kind == VertexKind::Exceptional)
    }

    pub fn incident<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.a == id || e.b == id)
    }

    pub fn neighbors<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.incident(id).filter_map(move |e| e.other(id))
    }

    pub fn degree(&self, id: &str) -> usize {
        self.incident(id).count()
    }

    /// All edge orders are 1 and there are no quotient points.
    pub fn is_ordinary(&self) -> bool {
        self.qpoints.is_empty() && self.edges.iter().all(|e| e.order == 1)
    }

    pub fn has_form_arrows(&self) -> bool {
        self.vertices
            .iter()
            .any(|v| v.kind == VertexKind::FormArrow)
    }

    fn exceptional_vertex(&self, id: &str) -> Result<&Vertex, GraphError> {
        let v = self
            .vertex(id)
            .ok_or_else(|| GraphError::UnknownVertex(id.to_string()))?;
        if v.is_arrow() {
            return Err(GraphError::NotExceptional(id.to_string()));
        }
        Ok(v)
    }

    /// Euler characteristic of the open stratum of an exceptional vertex:
    /// `2 - 2*genus - (incident edges) - (qpoints on it)`.
    pub fn chi_open(&self, id: &str) -> Result<i64, GraphError> {
        let v = self.exceptional_vertex(id)?;
        let q = self.qpoints.iter().filter(|q| q.vertex == id).count();
        Ok(2 - 2 * v.genus as i64 - self.degree(id) as i64 - q as i64)
    }

    /// Euler characteristic of the open stratum with respect to the curve
    /// alone: form arrows are not removed.
    pub fn chi_open_curve(&self, id: &str) -> Result<i64, GraphError> {
        let v = self.exceptional_vertex(id)?;
        let idx = self.index();
        let deg = self
            .incident(id)
            .filter(|e| {
                let other = e.other(id).unwrap();
                idx.get(other)
                    .is_some_and(|&i| self.vertices[i].kind != VertexKind::FormArrow)
            })
            .count();
        Ok(2 - 2 * v.genus as i64 - deg as i64)
    }

    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        if self.vertices.is_empty() {
            out.push(Violation::Empty);
            return out;
        }
        let mut idx: HashMap<&str, usize> = HashMap::new();
        for (i, v) in self.vertices.iter().enumerate() {
            if idx.insert(&v.id, i).is_some() {
                out.push(Violation::DuplicateId(v.id.clone()));
            }
            let bad = |reason| Violation::NumericalData {
                id: v.id.clone(),
                reason,
            };
            match v.kind {
                VertexKind::Exceptional if v.n == 0 => {
                    out.push(bad("exceptional divisor needs N >= 1"))
                }
                VertexKind::BranchArrow if v.n == 0 => out.push(bad("branch arrow needs N >= 1")),
                VertexKind::FormArrow if v.n != 0 => out.push(bad("form arrow needs N = 0")),
                _ => {}
            }
            if v.nu == 0 {
                out.push(bad("nu must be positive"));
            }
            if v.is_arrow() && v.genus != 0 {
                out.push(bad("arrows carry no genus"));
            }
        }
        if !self.vertices.iter().any(|v| !v.is_arrow()) {
            out.push(Violation::NoExceptional);
        }
        let mut seen = BTreeSet::new();
        let mut deg: HashMap<&str, usize> = HashMap::new();
        for e in &self.edges {
            let (Some(&ia), Some(&ib)) = (idx.get(e.a.as_str()), idx.get(e.b.as_str())) else {
                out.push(Violation::UnknownEndpoint(e.a.clone(), e.b.clone()));
                continue;
            };
            if e.a == e.b {
                out.push(Violation::SelfLoop(e.a.clone()));
                continue;
            }
            let key = if e.a < e.b {
                (&e.a, &e.b)
            } else {
                (&e.b, &e.a)
            };
            if !seen.insert(key) {
                out.push(Violation::DuplicateEdge(e.a.clone(), e.b.clone()));
            }
            if self.vertices[ia].is_arrow() && self.vertices[ib].is_arrow() {
                out.push(Violation::ArrowArrowEdge(e.a.clone(), e.b.clone()));
            }
            if e.order == 0 {
                out.push(Violation::ZeroOrder(e.a.clone(), e.b.clone()));
            }
            *deg.entry(&e.a).or_default() += 1;
            *deg.entry(&e.b).or_default() += 1;
        }
        for v in self.vertices.iter().filter(|v| v.is_arrow()) {
            let d = deg.get(v.id.as_str()).copied().unwrap_or(0);
            if d != 1 {
                out.push(Violation::ArrowDegree {
                    id: v.id.clone(),
                    degree: d,
                });
            }
        }
        for q in &self.qpoints {
            match idx.get(q.vertex.as_str()) {
                Some(&i) if !self.vertices[i].is_arrow() => {}
                _ => out.push(Violation::QPointVertex(q.vertex.clone())),
            }
            if q.order < 2 {
                out.push(Violation::QPointOrder {
                    vertex: q.vertex.clone(),
                    order: q.order,
                });
            }
        }
        if out.is_empty() {
            let exc: Vec<&str> = self.exceptional().map(|v| v.id.as_str()).collect();
            let exc_set: BTreeSet<&str> = exc.iter().copied().collect();
            let exc_edges: Vec<&Edge> = self
                .edges
                .iter()
                .filter(|e| exc_set.contains(e.a.as_str()) && exc_set.contains(e.b.as_str()))
                .collect();
            let mut reached = BTreeSet::new();
            let mut stack = vec![exc[0]];
            while let Some(v) = stack.pop() {
                if !reached.insert(v) {
                    continue;
                }
                for e in &exc_edges {
                    if let Some(o) = e.other(v) {
                        stack.push(o);
                    }
                }
            }
            if reached.len() != exc.len() {
                out.push(Violation::Disconnected);
            } else if !self.allow_cycles && exc_edges.len() + 1 != exc.len() {
                out.push(Violation::NotATree);
            }
        }
        out
    }

    /// Renames vertices; ids missing from `map` are kept.
    pub fn relabel(&self, map: &BTreeMap<String, String>) -> ResGraph {
        let r = |s: &String| map.get(s).cloned().unwrap_or_else(|| s.clone());
        ResGraph {
            label: self.label.clone(),
            vertices: self
                .vertices
                .iter()
                .map(|v| Vertex {
                    id: r(&v.id),
                    ..v.clone()
                })
                .collect(),
            edges: self
                .edges
                .iter()
                .map(|e| Edge {
                    a: r(&e.a),
                    b: r(&e.b),
                    order: e.order,
                })
                .collect(),
            qpoints: self
                .qpoints
                .iter()
                .map(|q| QPoint {
                    vertex: r(&q.vertex),
                    order: q.order,
                })
                .collect(),
            allow_cycles: self.allow_cycles,
        }
    }

    /// Id-independent encoding of a tree-shaped graph: equal strings iff the
    /// graphs are isomorphic as decorated trees. `None` if the graph is not
    /// a tree.
    pub fn canonical_form(&self) -> Option<String> {
        let n = self.vertices.len();
        let idx = self.index();
        if self.edges.len() + 1 != n {
            return None;
        }
        let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for e in &self.edges {
            let (a, b) = (*idx.get(e.a.as_str())?, *idx.get(e.b.as_str())?);
            adj[a].push((b, e.order));
            adj[b].push((a, e.order));
        }
        // centers by leaf stripping
        let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
        let mut layer: Vec<usize> = (0..n).filter(|&i| degree[i] <= 1).collect();
        let mut removed = layer.len();
        while removed < n {
            let mut next = Vec::new();
            for &l in &layer {
                for &(o, _) in &adj[l] {
                    degree[o] -= 1;
                    if degree[o] == 1 {
                        next.push(o);
                    }
                }
            }
            removed += next.len();
            layer = next;
        }
        let mut qs: Vec<Vec<u64>> = vec![Vec::new(); n];
        for q in &self.qpoints {
            qs[*idx.get(q.vertex.as_str())?].push(q.order);
        }
        for q in &mut qs {
            q.sort_unstable();
        }
        fn encode(
            g: &ResGraph,
            adj: &[Vec<(usize, u64)>],
            qs: &[Vec<u64>],
            v: usize,
            parent: Option<usize>,
        ) -> String {
            let vx = &g.vertices[v];
            let mut kids: Vec<String> = adj[v]
                .iter()
                .filter(|(o, _)| Some(*o) != parent)
                .map(|&(o, m)| format!("{m}:{}", encode(g, adj, qs, o, Some(v))))
                .collect();
            kids.sort();
            format!(
                "{:?}/{}/{}/{}/{:?}[{}]",
                vx.kind,
                vx.n,
                vx.nu,
                vx.genus,
                qs[v],
                kids.join(",")
            )
        }
        layer
            .iter()
            .map(|&c| encode(self, &adj, &qs, c, None))
            .min()
    }

    /// A vertex bijection `self -> other` preserving kinds, numerical data
    /// and edge orders, if one exists. Tree-shaped graphs only. With
    /// `fix_arrows`, arrows must also keep their ids.
    pub fn isomorphism(
        &self,
        other: &ResGraph,
        fix_arrows: bool,
    ) -> Option<BTreeMap<String, String>> {
        let (ea, ra) = self.rooted_encodings(fix_arrows)?;
        let (eb, rb) = other.rooted_encodings(fix_arrows)?;
        if ea[ra].0 != eb[rb].0 || self.vertices.len() != other.vertices.len() {
            return None;
        }
        let mut map = BTreeMap::new();
        let mut stack = vec![(ra, rb)];
        while let Some((a, b)) = stack.pop() {
            map.insert(self.vertices[a].id.clone(), other.vertices[b].id.clone());
            let mut ka = ea[a].1.clone();
            let mut kb = eb[b].1.clone();
            ka.sort_by(|x, y| ea[*x].0.cmp(&ea[*y].0));
            kb.sort_by(|x, y| eb[*x].0.cmp(&eb[*y].0));
            for (x, y) in ka.into_iter().zip(kb) {
                stack.push((x, y));
            }
        }
        Some(map)
    }

    /// Per vertex: encoding of the subtree below it and its children, for
    /// the rooting with the smallest encoding.
    fn rooted_encodings(&self, fix_arrows: bool) -> Option<(Vec<(String, Vec<usize>)>, usize)> {
        self.canonical_form()?;
        let idx = self.index();
        let n = self.vertices.len();
        let mut adj: Vec<Vec<(usize, u64)>> = vec![Vec::new(); n];
        for e in &self.edges {
            let (a, b) = (idx[e.a.as_str()], idx[e.b.as_str()]);
            adj[a].push((b, e.order));
            adj[b].push((a, e.order));
        }
        let mut qs: Vec<Vec<u64>> = vec![Vec::new(); n];
        for q in &self.qpoints {
            qs[idx[q.vertex.as_str()]].push(q.order);
        }
        for q in &mut qs {
            q.sort_unstable();
        }
        fn walk(
            g: &ResGraph,
            adj: &[Vec<(usize, u64)>],
            qs: &[Vec<u64>],
            fix_arrows: bool,
            v: usize,
            parent: Option<usize>,
            out: &mut Vec<(String, Vec<usize>)>,
        ) -> String {
            let vx = &g.vertices[v];
            let mut kids = Vec::new();
            let mut codes = Vec::new();
            for &(o, m) in &adj[v] {
                if Some(o) == parent {
                    continue;
                }
                kids.push(o);
                codes.push(format!(
                    "{m}:{}",
                    walk(g, adj, qs, fix_arrows, o, Some(v), out)
                ));
            }
            codes.sort();
            let name = if fix_arrows && vx.is_arrow() {
                vx.id.as_str()
            } else {
                ""
            };
            let code = format!(
                "{name}{:?}/{}/{}/{}/{:?}[{}]",
                vx.kind,
                vx.n,
                vx.nu,
                vx.genus,
                qs[v],
                codes.join(",")
            );
            // edge order is part of the child's identity when pairing
            let parent_order = parent
                .and_then(|p| adj[v].iter().find(|(o, _)| *o == p).map(|(_, m)| *m))
                .unwrap_or(0);
            out[v] = (format!("{parent_order}:{code}"), kids);
            code
        }
        (0..n)
            .map(|root| {
                let mut out = vec![(String::new(), Vec::new()); n];
                let code = walk(self, &adj, &qs, fix_arrows, root, None, &mut out);
                (code, out, root)
            })
            .min_by(|a, b| a.0.cmp(&b.0))
            .map(|(_, out, root)| (out, root))
    }

    pub fn is_isomorphic(&self, other: &ResGraph) -> bool {
        match (self.canonical_form(), other.canonical_form()) {
            (Some(a), Some(b)) => a == b,
            _ => false,
        }
    }
}

/// Plain-text adjacency dump.
impl fmt::Display for ResGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if !self.label.is_empty() {
            writeln!(f, "# {}", self.label)?;
        }
        for v in &self.vertices {
            let kind = match v.kind {
                VertexKind::Exceptional => "E",
                VertexKind::BranchArrow => "->",
                VertexKind::FormArrow => "-->",
            };
            write!(f, "{kind} {} ({},{})", v.id, v.n, v.nu)?;
            if v.genus > 0 {
                write!(f, " g={}", v.genus)?;
            }
            let q: Vec<String> = self
                .qpoints
                .iter()
                .filter(|q| q.vertex == v.id)
                .map(|q| format!("[{}]", q.order))
                .collect();
            if !q.is_empty() {
                write!(f, " {}", q.join(""))?;
            }
            let nb: Vec<String> = self
                .incident(&v.id)
                .map(|e| {
                    let o = e.other(&v.id).unwrap();
                    if e.order > 1 {
                        format!("{o}[{}]", e.order)
                    } else {
                        o.to_string()
                    }
                })
                .collect();
            writeln!(f, " : {}", nb.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn node() -> ResGraph {
        let mut g = ResGraph::new("node");
        g.add_vertex(Vertex::exceptional("E", 2, 2));
        g.add_vertex(Vertex::branch_arrow("b1"));
        g.add_vertex(Vertex::branch_arrow("b2"));
        g.add_edge(Edge::new("E", "b1"));
        g.add_edge(Edge::new("E", "b2"));
        g
    }

    #[test]
    fn node_is_valid_and_ordinary() {
        let g = node();
        assert!(g.validate().is_empty());
        assert!(g.is_ordinary());
        assert_eq!(g.chi_open("E").unwrap(), 0);
        assert!(matches!(
            g.chi_open("b1"),
            Err(GraphError::NotExceptional(_))
        ));
    }

    #[test]
    fn arrow_arrow_edge_is_a_violation() {
        let mut g = node();
        g.add_edge(Edge::new("b1", "b2"));
        let v = g.validate();
        assert!(v.contains(&Violation::ArrowArrowEdge("b1".into(), "b2".into())));
    }

    #[test]
    fn empty_vertex_list_fails_to_parse() {
        let err = ResGraph::parse(r#"{"vertices": [], "edges": []}"#).unwrap_err();
        assert!(matches!(err, GraphError::Invalid(ref v) if v == &vec![Violation::Empty]));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = ResGraph::parse("{\n  \"vertices\": [ }").unwrap_err();
        match err {
            GraphError::Syntax { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn arrows_default_to_one_one() {
        let g = ResGraph::parse(
            r#"{"vertices": [{"id": "E", "kind": "exceptional", "N": 1, "nu": 2},
                             {"id": "b", "kind": "branch-arrow"}],
                "edges": [{"a": "E", "b": "b"}]}"#,
        )
        .unwrap();
        assert_eq!(g.vertex("b").map(|v| (v.n, v.nu)), Some((1, 1)));
        assert_eq!(ResGraph::parse(&g.to_json()).unwrap(), g);
    }

    #[test]
    fn cycles_need_the_override() {
        let mut g = ResGraph::new("triangle");
        for id in ["a", "b", "c"] {
            g.add_vertex(Vertex::exceptional(id, 1, 1));
        }
        g.add_edge(Edge::new("a", "b"));
        g.add_edge(Edge::new("b", "c"));
        g.add_edge(Edge::new("c", "a"));
        assert_eq!(g.validate(), vec![Violation::NotATree]);
        g.allow_cycles = true;
        assert!(g.validate().is_empty());
    }

    #[test]
    fn disconnected_exceptional_part() {
        let mut g = node();
        g.add_vertex(Vertex::exceptional("F", 1, 2));
        assert_eq!(g.validate(), vec![Violation::Disconnected]);
    }

    #[test]
    fn qpoint_checks() {
        let mut g = node();
        g.qpoints.push(QPoint {
            vertex: "b1".into(),
            order: 1,
        });
        let v = g.validate();
        assert!(v.contains(&Violation::QPointVertex("b1".into())));
        assert!(v.contains(&Violation::QPointOrder {
            vertex: "b1".into(),
            order: 1
        }));
    }

    #[test]
    fn canonical_form_ignores_ids() {
        let g = node();
        let map: BTreeMap<String, String> = [("E", "X"), ("b1", "q"), ("b2", "p")]
            .into_iter()
            .map(|(a, b)| (a.to_string(), b.to_string()))
            .collect();
        assert!(g.is_isomorphic(&g.relabel(&map)));
        let mut h = g.clone();
        h.vertex_mut("E").unwrap().nu = 3;
        assert!(!g.is_isomorphic(&h));
    }
}
