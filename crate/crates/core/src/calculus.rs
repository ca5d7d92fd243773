//! Intersection theory on ordinary resolution graphs.
//!
//! The exceptional curves span a negative definite lattice. Their
//! self-intersections follow from `pi^* f . E_i = 0`, the canonical
//! decoration from adjunction, and the pullback of an auxiliary curve from
//! `pi^* g . E_i = 0`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exact::{fmt_rat, Rat};
use crate::graph::{Edge, ResGraph, Vertex, VertexKind, Violation};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CalculusError {
    #[error("invalid graph: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
    #[error("graph is not ordinary")]
    NotOrdinary,
    #[error("graph already carries form arrows")]
    AlreadyDecorated,
    #[error("self-intersection of {vertex} is {value}, not a negative integer")]
    BadSelfIntersection { vertex: String, value: String },
    #[error("intersection matrix is singular")]
    Singular,
    #[error("{what} at {vertex} is {value}, not a nonnegative integer")]
    NonInteger {
        what: &'static str,
        vertex: String,
        value: String,
    },
    #[error("unknown vertex {0}")]
    UnknownVertex(String),
    #[error("curve {0} is not in the multiplicity table")]
    MissingCurve(String),
    #[error("no multiplicity data for vertex {0}")]
    MissingVertex(String),
    #[error("curve {curve} is not admissible: {reason}")]
    Admissibility { curve: String, reason: String },
}

/// Multiplicities along the exceptional curves of one tracked curve.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveMult {
    pub m: BTreeMap<String, u64>,
    /// `(vertex, local intersection number)` of the strict transform.
    pub attachment: Vec<(String, u64)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultTable {
    /// `k_i = nu_i(dxdy) - 1`.
    pub canonical: BTreeMap<String, u64>,
    pub curves: BTreeMap<String, CurveMult>,
}

impl MultTable {
    pub fn parse(text: &str) -> Result<MultTable, serde_json::Error> {
        serde_json::from_str(text)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("multiplicity tables serialize")
    }

    /// Derives a table from the graph alone, given where each curve's strict
    /// transform meets the exceptional locus.
    pub fn derive(
        g: &ResGraph,
        attachments: &BTreeMap<String, Vec<(String, u64)>>,
    ) -> Result<MultTable, CalculusError> {
        let si = self_intersections(g)?;
        let nu = canonical_nu(g, &si)?;
        let mut curves = BTreeMap::new();
        for (id, att) in attachments {
            let m = curve_multiplicities(g, &si, att)?;
            curves.insert(
                id.clone(),
                CurveMult {
                    m,
                    attachment: att.clone(),
                },
            );
        }
        Ok(MultTable {
            canonical: nu.into_iter().map(|(k, v)| (k, v - 1)).collect(),
            curves,
        })
    }
}

/// Exponents `c_g` of the form `prod g^{c_g} dxdy`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FormSpec {
    pub exponents: BTreeMap<String, u64>,
}

impl FormSpec {
    pub fn standard() -> Self {
        FormSpec::default()
    }

    pub fn is_standard(&self) -> bool {
        self.exponents.values().all(|&c| c == 0)
    }

    pub fn with(mut self, curve: &str, c: u64) -> Self {
        self.exponents.insert(curve.to_string(), c);
        self
    }

    /// Nonzero exponents only.
    pub fn support(&self) -> impl Iterator<Item = (&String, u64)> {
        self.exponents
            .iter()
            .filter(|(_, &c)| c > 0)
            .map(|(k, &c)| (k, c))
    }
}

impl fmt::Display for FormSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.support().map(|(g, c)| format!("{g}={c}")).collect();
        if parts.is_empty() {
            write!(f, "dxdy")
        } else {
            write!(f, "{}", parts.join(","))
        }
    }
}

/// Accepts `dxdy`, or comma separated `curve=exponent` pairs.
impl FromStr for FormSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut out = FormSpec::default();
        let s = s.trim();
        if s.is_empty() || s == "dxdy" {
            return Ok(out);
        }
        for part in s.split(',') {
            let (k, v) = part
                .rsplit_once('=')
                .ok_or_else(|| format!("expected curve=exponent, got {part:?}"))?;
            let c: u64 = v
                .trim()
                .parse()
                .map_err(|_| format!("bad exponent in {part:?}"))?;
            out.exponents.insert(k.trim().to_string(), c);
        }
        Ok(out)
    }
}

fn ordinary(g: &ResGraph) -> Result<(), CalculusError> {
    let v = g.validate();
    if !v.is_empty() {
        return Err(CalculusError::Invalid(v));
    }
    if !g.is_ordinary() {
        return Err(CalculusError::NotOrdinary);
    }
    Ok(())
}

/// `E_i^2 = -(sum of N over neighbours, arrows included) / N_i`.
pub fn self_intersections(g: &ResGraph) -> Result<BTreeMap<String, i64>, CalculusError> {
    ordinary(g)?;
    let mut out = BTreeMap::new();
    for v in g.exceptional() {
        let sum: u64 = g
            .neighbors(&v.id)
            .map(|w| g.vertex(w).map_or(0, |x| x.n))
            .sum();
        if sum == 0 || !sum.is_multiple_of(v.n) {
            return Err(CalculusError::BadSelfIntersection {
                vertex: v.id.clone(),
                value: fmt_rat(&Rat::new((-(sum as i64)).into(), (v.n as i64).into())),
            });
        }
        out.insert(v.id.clone(), -((sum / v.n) as i64));
    }
    Ok(out)
}

/// Intersection matrix over the exceptional vertices, in `ids` order.
pub fn intersection_matrix(
    g: &ResGraph,
    si: &BTreeMap<String, i64>,
) -> Result<(Vec<String>, Vec<Vec<Rat>>), CalculusError> {
    let ids: Vec<String> = g.exceptional().map(|v| v.id.clone()).collect();
    let pos: BTreeMap<&str, usize> = ids
        .iter()
        .enumerate()
        .map(|(i, s)| (s.as_str(), i))
        .collect();
    let n = ids.len();
    let mut m = vec![vec![Rat::zero(); n]; n];
    for (i, id) in ids.iter().enumerate() {
        let e2 = si
            .get(id)
            .ok_or_else(|| CalculusError::MissingVertex(id.clone()))?;
        m[i][i] = Rat::from_integer((*e2).into());
    }
    for e in &g.edges {
        if let (Some(&i), Some(&j)) = (pos.get(e.a.as_str()), pos.get(e.b.as_str())) {
            m[i][j] += Rat::from_integer(1.into());
            m[j][i] += Rat::from_integer(1.into());
        }
    }
    Ok((ids, m))
}

/// Gaussian elimination over the rationals.
pub fn solve(mut a: Vec<Vec<Rat>>, mut b: Vec<Rat>) -> Option<Vec<Rat>> {
    let n = b.len();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        b.swap(col, piv);
        let p = a[col][col].clone();
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = &a[r][col] / &p;
            for c in col..n {
                let d = &f * &a[col][c];
                a[r][c] -= d;
            }
            let d = &f * &b[col];
            b[r] -= d;
        }
    }
    Some((0..n).map(|i| &b[i] / &a[i][i]).collect())
}

fn certify(
    what: &'static str,
    ids: &[String],
    x: Vec<Rat>,
) -> Result<BTreeMap<String, u64>, CalculusError> {
    ids.iter()
        .zip(x)
        .map(|(id, v)| match (v.is_integer(), v.to_integer().to_u64()) {
            (true, Some(u)) => Ok((id.clone(), u)),
            _ => Err(CalculusError::NonInteger {
                what,
                vertex: id.clone(),
                value: fmt_rat(&v),
            }),
        })
        .collect()
}

/// `nu` of `dxdy` by adjunction: `sum_j k_j E_i.E_j = -E_i^2 - 2 + 2 g_i`.
pub fn canonical_nu(
    g: &ResGraph,
    si: &BTreeMap<String, i64>,
) -> Result<BTreeMap<String, u64>, CalculusError> {
    let (ids, m) = intersection_matrix(g, si)?;
    let rhs: Vec<Rat> = ids
        .iter()
        .map(|id| {
            let genus = g.vertex(id).map_or(0, |v| v.genus as i64);
            Rat::from_integer((-si[id] - 2 + 2 * genus).into())
        })
        .collect();
    let k = solve(m, rhs).ok_or(CalculusError::Singular)?;
    Ok(certify("canonical multiplicity", &ids, k)?
        .into_iter()
        .map(|(id, k)| (id, k + 1))
        .collect())
}

/// Multiplicities of the pullback of a curve whose strict transform meets
/// the given vertices with the given local intersection numbers.
pub fn curve_multiplicities(
    g: &ResGraph,
    si: &BTreeMap<String, i64>,
    attachment: &[(String, u64)],
) -> Result<BTreeMap<String, u64>, CalculusError> {
    let (ids, m) = intersection_matrix(g, si)?;
    let mut rhs = vec![Rat::zero(); ids.len()];
    for (v, c) in attachment {
        let i = ids
            .iter()
            .position(|x| x == v)
            .ok_or_else(|| CalculusError::UnknownVertex(v.clone()))?;
        rhs[i] -= Rat::from_integer((*c as i64).into());
    }
    let x = solve(m, rhs).ok_or(CalculusError::Singular)?;
    certify("curve multiplicity", &ids, x)
}

pub fn form_arrow_id(curve: &str) -> String {
    format!("form:{curve}")
}

/// Re-decorates a standard-form graph for `w`.
///
/// Exceptional `nu` becomes `1 + k + sum c_g m(g)`. Each curve with
/// `c_g > 0` adds a form arrow `(0, 1 + c_g)` at its attachment vertex; a
/// curve attached to a branch arrow coincides with that branch and instead
/// raises the arrow's `nu` by `c_g`.
pub fn decorate(g: &ResGraph, t: &MultTable, w: &FormSpec) -> Result<ResGraph, CalculusError> {
    ordinary(g)?;
    if g.has_form_arrows() {
        return Err(CalculusError::AlreadyDecorated);
    }
    let support: Vec<(&String, u64)> = w.support().collect();
    let mut added: BTreeMap<String, usize> = BTreeMap::new();
    for (curve, _) in &support {
        let cm = t
            .curves
            .get(*curve)
            .ok_or_else(|| CalculusError::MissingCurve((*curve).clone()))?;
        let at = admissible_attachment(g, curve, cm)?;
        if g.vertex(&at).map(|v| v.kind) == Some(VertexKind::Exceptional) {
            *added.entry(at).or_default() += 1;
        }
    }
    for (v, k) in &added {
        let before = g.degree(v);
        if before < 3 && before + k >= 3 {
            return Err(CalculusError::Admissibility {
                curve: support
                    .iter()
                    .filter(|(c, _)| t.curves[*c].attachment[0].0 == *v)
                    .map(|(c, _)| c.as_str())
                    .collect::<Vec<_>>()
                    .join(", "),
                reason: format!("would create a new branching component at {v}"),
            });
        }
    }

    let mut out = g.clone();
    for v in out
        .vertices
        .iter_mut()
        .filter(|v| v.kind == VertexKind::Exceptional)
    {
        let k = *t
            .canonical
            .get(&v.id)
            .ok_or_else(|| CalculusError::MissingVertex(v.id.clone()))?;
        let mut nu = 1 + k;
        for (curve, c) in &support {
            let m = t.curves[*curve]
                .m
                .get(&v.id)
                .ok_or_else(|| CalculusError::MissingVertex(v.id.clone()))?;
            nu += c * m;
        }
        v.nu = nu;
    }
    for (curve, c) in &support {
        let at = t.curves[*curve].attachment[0].0.clone();
        match g.vertex(&at).map(|v| v.kind) {
            Some(VertexKind::BranchArrow) => {
                out.vertex_mut(&at).expect("attachment exists").nu += c;
            }
            _ => {
                let id = form_arrow_id(curve);
                out.add_vertex(Vertex::form_arrow(id.clone(), 1 + c));
                out.add_edge(Edge::new(at, id));
            }
        }
    }
    if !w.is_standard() {
        out.label = format!("{} with {}", g.label, w);
    }
    let v = out.validate();
    if !v.is_empty() {
        return Err(CalculusError::Invalid(v));
    }
    Ok(out)
}

fn admissible_attachment(
    g: &ResGraph,
    curve: &str,
    cm: &CurveMult,
) -> Result<String, CalculusError> {
    let bad = |reason: String| CalculusError::Admissibility {
        curve: curve.to_string(),
        reason,
    };
    match cm.attachment.as_slice() {
        [(v, 1)] => match g.vertex(v) {
            Some(x) if x.kind != VertexKind::FormArrow => Ok(v.clone()),
            Some(_) => Err(bad(format!("attached to form arrow {v}"))),
            None => Err(CalculusError::UnknownVertex(v.clone())),
        },
        [(v, c)] => Err(bad(format!(
            "meets {v} with multiplicity {c}, not transversally"
        ))),
        [] => Err(bad("no attachment recorded".into())),
        many => {
            let vs: BTreeSet<&str> = many.iter().map(|(v, _)| v.as_str()).collect();
            Err(bad(format!(
                "strict transform meets the divisor {} times ({})",
                many.len(),
                vs.into_iter().collect::<Vec<_>>().join(", ")
            )))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cusp() -> ResGraph {
        let mut g = ResGraph::new("cusp");
        g.add_vertex(Vertex::exceptional("E1", 2, 1));
        g.add_vertex(Vertex::exceptional("E3", 6, 1));
        g.add_vertex(Vertex::exceptional("E2", 3, 1));
        g.add_vertex(Vertex::branch_arrow("f"));
        g.add_edge(Edge::new("E1", "E3"));
        g.add_edge(Edge::new("E3", "E2"));
        g.add_edge(Edge::new("E3", "f"));
        g
    }

    #[test]
    fn cusp_lattice() {
        let g = cusp();
        let si = self_intersections(&g).unwrap();
        assert_eq!((si["E1"], si["E3"], si["E2"]), (-3, -1, -2));
        let nu = canonical_nu(&g, &si).unwrap();
        assert_eq!((nu["E1"], nu["E3"], nu["E2"]), (2, 5, 3));
        // y meets E2 transversally, x meets E1
        let my = curve_multiplicities(&g, &si, &[("E2".into(), 1)]).unwrap();
        assert_eq!((my["E1"], my["E3"], my["E2"]), (1, 3, 2));
        let mx = curve_multiplicities(&g, &si, &[("E1".into(), 1)]).unwrap();
        assert_eq!((mx["E1"], mx["E3"], mx["E2"]), (1, 2, 1));
    }

    #[test]
    fn inconsistent_n_data_is_rejected() {
        let mut g = cusp();
        g.vertex_mut("E3").unwrap().n = 7;
        assert!(matches!(
            self_intersections(&g),
            Err(CalculusError::BadSelfIntersection { .. })
        ));
    }

    #[test]
    fn decorate_adds_form_arrows() {
        let g = cusp();
        let mut att = BTreeMap::new();
        att.insert("y".to_string(), vec![("E2".to_string(), 1)]);
        let t = MultTable::derive(&g, &att).unwrap();
        let d = decorate(&g, &t, &FormSpec::standard().with("y", 2)).unwrap();
        assert_eq!(d.vertex("E3").unwrap().nu, 5 + 6);
        assert_eq!(d.vertex("form:y").unwrap().nu, 3);
        let s = decorate(&g, &t, &FormSpec::standard()).unwrap();
        assert_eq!(s.vertex("E1").unwrap().nu, 2);
        assert!(!s.has_form_arrows());
    }

    #[test]
    fn new_branching_is_not_admissible() {
        let g = cusp();
        let mut att = BTreeMap::new();
        att.insert("a".to_string(), vec![("E2".to_string(), 1)]);
        att.insert("b".to_string(), vec![("E2".to_string(), 1)]);
        let t = MultTable::derive(&g, &att).unwrap();
        let w = FormSpec::standard().with("a", 1).with("b", 1);
        assert!(matches!(
            decorate(&g, &t, &w),
            Err(CalculusError::Admissibility { .. })
        ));
        let w = FormSpec::standard().with("a", 1);
        assert!(decorate(&g, &t, &w).is_ok());
    }

    #[test]
    fn tangential_attachment_is_not_admissible() {
        let g = cusp();
        let mut att = BTreeMap::new();
        att.insert("t".to_string(), vec![("E2".to_string(), 2)]);
        let t = MultTable::derive(&g, &att).unwrap();
        let err = decorate(&g, &t, &FormSpec::standard().with("t", 1)).unwrap_err();
        assert!(matches!(err, CalculusError::Admissibility { .. }));
    }

    #[test]
    fn form_spec_text() {
        let w: FormSpec = "x=3, y-x^2=4".parse().unwrap();
        assert_eq!(w.exponents["x"], 3);
        assert_eq!(w.exponents["y-x^2"], 4);
        assert_eq!(w.to_string(), "x=3,y-x^2=4");
        assert!("dxdy".parse::<FormSpec>().unwrap().is_standard());
        assert!("x3".parse::<FormSpec>().is_err());
    }
}
