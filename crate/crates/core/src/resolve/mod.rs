//! Embedded resolution of plane curve germs by point blowups over the
//! rationals.
//!
//! Every point awaiting a blowup is described in local coordinates `(x, y)`
//! centred at the point: the exceptional curves through it (at most one on
//! `{x = 0}` and one on `{y = 0}`) and the local equations of the strict
//! transforms passing through it. Blowing up such a point creates one new
//! divisor; its points are read off from the two standard charts, rational
//! ones through the rational roots of the restricted equations.

mod poly2;

pub use poly2::Poly2;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::calculus::{CurveMult, MultTable};
use crate::exact::{int, Poly, Rat};
use crate::graph::{Edge, GraphError, ResGraph, Vertex};

pub const DEFAULT_BUDGET: usize = 64;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ResolveError {
    #[error("curve file: {0}")]
    Format(String),
    #[error("curve {id}: {msg}")]
    Parse { id: String, msg: String },
    #[error("no branches given")]
    NoBranches,
    #[error("duplicate curve id {0}")]
    DuplicateId(String),
    #[error("curve {0} does not pass through the origin")]
    NotThroughOrigin(String),
    #[error("curve {0} is constant")]
    Constant(String),
    #[error("{0} is not reduced or shares a component with another curve")]
    NonReduced(String),
    #[error("center on {divisor} for {curves} is not rational; minimal polynomial {minpoly}")]
    NonRationalCenter {
        divisor: String,
        curves: String,
        minpoly: String,
    },
    #[error("blowup budget of {0} exhausted")]
    BudgetExceeded(usize),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveSpec {
    pub id: String,
    pub poly: String,
}

/// Branches of `f` and auxiliary curves, each given by an equation in `x, y`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CurveInput {
    pub branches: Vec<CurveSpec>,
    #[serde(default)]
    pub auxiliaries: Vec<CurveSpec>,
}

impl CurveInput {
    pub fn parse(text: &str) -> Result<CurveInput, ResolveError> {
        serde_json::from_str(text).map_err(|e| ResolveError::Format(e.to_string()))
    }

    pub fn branches(list: &[(&str, &str)]) -> CurveInput {
        CurveInput {
            branches: list
                .iter()
                .map(|(id, p)| CurveSpec {
                    id: id.to_string(),
                    poly: p.to_string(),
                })
                .collect(),
            auxiliaries: vec![],
        }
    }

    pub fn with_aux(mut self, id: &str, poly: &str) -> CurveInput {
        self.auxiliaries.push(CurveSpec {
            id: id.into(),
            poly: poly.into(),
        });
        self
    }

    /// Adds the coordinate axes `x` and `y` unless already present.
    pub fn with_default_aux(mut self) -> CurveInput {
        for axis in ["x", "y"] {
            if !self.auxiliaries.iter().any(|c| c.id == axis) {
                self = self.with_aux(axis, axis);
            }
        }
        self
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum NcdReason {
    /// The origin itself, always blown up.
    InitialCenter,
    SingularStrict,
    Tangency,
    TriplePoint,
    BranchThroughCorner,
}

impl fmt::Display for NcdReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            NcdReason::InitialCenter => "initial center",
            NcdReason::SingularStrict => "singular strict transform",
            NcdReason::Tangency => "tangency",
            NcdReason::TriplePoint => "triple point",
            NcdReason::BranchThroughCorner => "curve through a corner",
        };
        f.write_str(s)
    }
}

/// A point where the total transform is not yet normal crossing.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Offender {
    /// Divisors through the point.
    pub divisors: Vec<String>,
    pub curves: Vec<String>,
    pub reasons: Vec<NcdReason>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum CenterOrder {
    #[default]
    Fifo,
    /// Pending centers processed in a pseudo-random order.
    Shuffled(u64),
}

#[derive(Clone, Copy, Debug)]
pub struct ResolveOptions {
    pub budget: usize,
    pub order: CenterOrder,
}

impl Default for ResolveOptions {
    fn default() -> Self {
        ResolveOptions {
            budget: DEFAULT_BUDGET,
            order: CenterOrder::Fifo,
        }
    }
}

#[derive(Clone, Debug)]
struct Curve {
    id: String,
    is_branch: bool,
}

#[derive(Clone, Debug)]
struct Divisor {
    n: u64,
    k: u64,
    m: Vec<u64>,
}

#[derive(Clone, Debug)]
struct Center {
    /// Divisor on `{x = 0}`.
    dx: Option<usize>,
    /// Divisor on `{y = 0}`.
    dy: Option<usize>,
    curves: Vec<(usize, Poly2)>,
    reasons: Vec<NcdReason>,
}

/// One blowup: the divisor it created and the multiplicity of the strict
/// transform of `f` at its center.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BlowupRecord {
    pub divisor: String,
    pub f_multiplicity: u64,
}

/// Intermediate state of the resolution.
#[derive(Clone, Debug)]
pub struct BlowupState {
    curves: Vec<Curve>,
    /// Auxiliary curve id -> id of the branch it coincides with.
    aliases: BTreeMap<String, String>,
    divisors: Vec<Divisor>,
    edges: BTreeSet<(usize, usize)>,
    pending: VecDeque<Center>,
    /// Per curve: `(divisor, count)` for each transversal meeting.
    attachments: Vec<Vec<(usize, u64)>>,
    history: Vec<BlowupRecord>,
}

fn div_id(i: usize) -> String {
    format!("E{}", i + 1)
}

fn sample_points() -> impl Iterator<Item = Rat> {
    [
        2i64, 3, 5, 7, 11, 13, 17, 19, 23, 29, -2, -3, -5, -7, 31, 37,
    ]
    .into_iter()
    .map(int)
}

/// Certifies a property of two-variable polynomials through specialisations
/// `y = t` (and `x = t`) that keep the degree; a common or repeated factor
/// with positive degree in the free variable survives every such
/// specialisation.
fn certified(fs: &[&Poly2], ok: impl Fn(&[Poly]) -> bool) -> bool {
    let along = |swap: bool| {
        let gs: Vec<Poly2> = fs
            .iter()
            .map(|f| if swap { f.swap() } else { (*f).clone() })
            .collect();
        let degs: Vec<Option<u32>> = gs.iter().map(|g| g.degree_x()).collect();
        if degs.iter().all(|d| d.unwrap_or(0) == 0) {
            return true;
        }
        sample_points().any(|t| {
            let ss: Vec<Poly> = gs.iter().map(|g| g.at_y(&t)).collect();
            ss.iter()
                .zip(&degs)
                .all(|(s, d)| s.degree() == d.map(|d| d as usize))
                && ok(&ss)
        })
    };
    along(false) && along(true)
}

fn is_reduced(f: &Poly2) -> bool {
    certified(&[f], |s| {
        s[0].degree().unwrap_or(0) == 0 || s[0].is_squarefree()
    })
}

fn coprime(f: &Poly2, g: &Poly2) -> bool {
    certified(&[f, g], |s| {
        s[0].is_zero() || s[1].is_zero() || s[0].gcd(&s[1]).degree().unwrap_or(0) == 0
    })
}

impl BlowupState {
    pub fn new(input: &CurveInput) -> Result<BlowupState, ResolveError> {
        if input.branches.is_empty() {
            return Err(ResolveError::NoBranches);
        }
        let mut seen = BTreeSet::new();
        let mut parsed: Vec<(Curve, Poly2)> = Vec::new();
        let mut aliases = BTreeMap::new();
        let specs = input
            .branches
            .iter()
            .map(|c| (c, true))
            .chain(input.auxiliaries.iter().map(|c| (c, false)));
        for (spec, is_branch) in specs {
            if !seen.insert(spec.id.clone()) {
                return Err(ResolveError::DuplicateId(spec.id.clone()));
            }
            let p = Poly2::parse(&spec.poly).map_err(|msg| ResolveError::Parse {
                id: spec.id.clone(),
                msg,
            })?;
            if p.is_zero() || p.total_degree() == Some(0) {
                return Err(ResolveError::Constant(spec.id.clone()));
            }
            if !p.vanishes_at_origin() {
                return Err(ResolveError::NotThroughOrigin(spec.id.clone()));
            }
            if !is_branch {
                if let Some((c, _)) = parsed.iter().find(|(_, q)| q.is_proportional(&p)) {
                    let target = aliases.get(&c.id).cloned().unwrap_or_else(|| c.id.clone());
                    aliases.insert(spec.id.clone(), target);
                    continue;
                }
            }
            parsed.push((
                Curve {
                    id: spec.id.clone(),
                    is_branch,
                },
                p,
            ));
        }
        for (c, p) in &parsed {
            if !is_reduced(p) {
                return Err(ResolveError::NonReduced(c.id.clone()));
            }
        }
        for (a, (c, p)) in parsed.iter().enumerate() {
            for (d, q) in &parsed[a + 1..] {
                if !coprime(p, q) {
                    return Err(ResolveError::NonReduced(format!("{} with {}", c.id, d.id)));
                }
            }
        }
        let n = parsed.len();
        let (curves, polys): (Vec<Curve>, Vec<Poly2>) = parsed.into_iter().unzip();
        let origin = Center {
            dx: None,
            dy: None,
            curves: polys.into_iter().enumerate().collect(),
            reasons: vec![NcdReason::InitialCenter],
        };
        Ok(BlowupState {
            curves,
            aliases,
            divisors: vec![],
            edges: BTreeSet::new(),
            pending: VecDeque::from([origin]),
            attachments: vec![vec![]; n],
            history: vec![],
        })
    }

    pub fn blowups(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_resolved(&self) -> bool {
        self.pending.is_empty()
    }

    /// Points of the current model where the total transform fails to be
    /// normal crossing.
    pub fn ncd_check(&self) -> Vec<Offender> {
        self.pending
            .iter()
            .map(|c| Offender {
                divisors: [c.dx, c.dy].into_iter().flatten().map(div_id).collect(),
                curves: c
                    .curves
                    .iter()
                    .map(|(i, _)| self.curves[*i].id.clone())
                    .collect(),
                reasons: c.reasons.clone(),
            })
            .collect()
    }

    /// Blows up the pending center at `index`.
    pub fn step_at(&mut self, index: usize) -> Result<(), ResolveError> {
        let c = self.pending.remove(index).expect("pending index in range");
        self.blow_up(c)
    }

    pub fn step(&mut self) -> Result<(), ResolveError> {
        self.step_at(0)
    }

    pub fn run(&mut self, opts: ResolveOptions) -> Result<(), ResolveError> {
        let mut rng = match opts.order {
            CenterOrder::Fifo => None,
            CenterOrder::Shuffled(seed) => Some(StdRng::seed_from_u64(seed)),
        };
        while !self.pending.is_empty() {
            if self.divisors.len() >= opts.budget {
                return Err(ResolveError::BudgetExceeded(opts.budget));
            }
            let i = match rng.as_mut() {
                Some(r) => r.gen_range(0..self.pending.len()),
                None => 0,
            };
            self.step_at(i)?;
        }
        Ok(())
    }

    fn blow_up(&mut self, c: Center) -> Result<(), ResolveError> {
        let e = self.divisors.len();
        let olds: Vec<usize> = [c.dx, c.dy].into_iter().flatten().collect();
        let mults: Vec<u64> = c
            .curves
            .iter()
            .map(|(_, f)| f.order().expect("nonzero strict transform") as u64)
            .collect();
        let f_mult: u64 = c
            .curves
            .iter()
            .zip(&mults)
            .filter(|((i, _), _)| self.curves[*i].is_branch)
            .map(|(_, m)| m)
            .sum();
        let n = olds.iter().map(|&d| self.divisors[d].n).sum::<u64>() + f_mult;
        let k = olds.iter().map(|&d| self.divisors[d].k).sum::<u64>() + 1;
        let mut m: Vec<u64> = (0..self.curves.len())
            .map(|g| olds.iter().map(|&d| self.divisors[d].m[g]).sum())
            .collect();
        for ((i, _), mu) in c.curves.iter().zip(&mults) {
            m[*i] += mu;
        }
        self.divisors.push(Divisor { n, k, m });
        if let (Some(a), Some(b)) = (c.dx, c.dy) {
            self.edges.remove(&(a.min(b), a.max(b)));
        }
        for &d in &olds {
            self.edges.insert((d, e));
        }
        self.history.push(BlowupRecord {
            divisor: div_id(e),
            f_multiplicity: f_mult,
        });

        // Chart x = x' y: the new divisor is {y = 0} with coordinate x'; the
        // old {x = 0} passes through x' = 0. The old {y = 0} and any curve
        // tangent to it sit at the point at infinity, seen in the chart
        // y = y' x as y' = 0.
        let mut points: BTreeMap<Rat, Vec<(usize, Poly2, u64)>> = BTreeMap::new();
        let mut at_infinity: Vec<(usize, Poly2, u64)> = Vec::new();
        let mut irrational: Vec<(usize, Poly)> = Vec::new();
        for ((i, f), mu) in c.curves.iter().zip(&mults) {
            let g = f.chart_y();
            let r = g.on_x_axis();
            let finite = r.degree().unwrap_or(0) as u64;
            for (root, mult) in r.rational_roots() {
                points
                    .entry(root.clone())
                    .or_default()
                    .push((*i, g.shift_x(&root), mult as u64));
            }
            let rest = r.strip_rational_roots();
            if rest.degree().unwrap_or(0) > 0 {
                irrational.push((*i, rest));
            }
            if *mu > finite {
                at_infinity.push((*i, f.chart_x(), mu - finite));
            }
        }
        self.settle_irrational(e, &irrational)?;
        if c.dx.is_some() {
            points.entry(int(0)).or_default();
        }
        for (root, list) in points {
            let dx = if root == int(0) { c.dx } else { None };
            self.settle(dx, Some(e), list);
        }
        self.settle(Some(e), c.dy, at_infinity);
        Ok(())
    }

    fn settle_irrational(&mut self, e: usize, list: &[(usize, Poly)]) -> Result<(), ResolveError> {
        for (a, (i, p)) in list.iter().enumerate() {
            let bad = |minpoly: &Poly, curves: String| ResolveError::NonRationalCenter {
                divisor: div_id(e),
                curves,
                minpoly: minpoly.primitive_part().1.render("t"),
            };
            if !p.is_squarefree() {
                let square = p.gcd(&p.derivative());
                return Err(bad(&square, self.curves[*i].id.clone()));
            }
            for (j, q) in &list[a + 1..] {
                let common = p.gcd(q);
                if common.degree().unwrap_or(0) > 0 {
                    return Err(bad(
                        &common,
                        format!("{}, {}", self.curves[*i].id, self.curves[*j].id),
                    ));
                }
            }
        }
        for (i, p) in list {
            self.attachments[*i].push((e, p.degree().unwrap_or(0) as u64));
        }
        Ok(())
    }

    /// Files a point of the new divisor: either a transversal meeting of one
    /// curve, a plain corner, or a new pending center.
    fn settle(&mut self, dx: Option<usize>, dy: Option<usize>, list: Vec<(usize, Poly2, u64)>) {
        if list.is_empty() {
            return;
        }
        let corner = dx.is_some() && dy.is_some();
        if !corner && list.len() == 1 && list[0].2 == 1 {
            let e = dx.or(dy).expect("point lies on the new divisor");
            self.attachments[list[0].0].push((e, 1));
            return;
        }
        let mut reasons = BTreeSet::new();
        for (_, g, t) in &list {
            if g.order().unwrap_or(0) > 1 {
                reasons.insert(NcdReason::SingularStrict);
            }
            if *t > 1 {
                reasons.insert(NcdReason::Tangency);
            }
        }
        if corner {
            reasons.insert(NcdReason::BranchThroughCorner);
        }
        if list.len() + [dx, dy].iter().flatten().count() >= 3 {
            reasons.insert(NcdReason::TriplePoint);
        }
        self.pending.push_back(Center {
            dx,
            dy,
            curves: list.into_iter().map(|(i, g, _)| (i, g)).collect(),
            reasons: reasons.into_iter().collect(),
        });
    }

    /// Assembles the decorated graph and the multiplicity table of a
    /// resolved state.
    pub fn finish(&self, label: &str) -> Resolution {
        assert!(self.is_resolved(), "finish called with pending centers");
        let mut g = ResGraph::new(label);
        for (i, d) in self.divisors.iter().enumerate() {
            g.add_vertex(Vertex::exceptional(div_id(i), d.n, d.k + 1));
        }
        for &(a, b) in &self.edges {
            g.add_edge(Edge::new(div_id(a), div_id(b)));
        }
        let mut table = MultTable {
            canonical: self
                .divisors
                .iter()
                .enumerate()
                .map(|(i, d)| (div_id(i), d.k))
                .collect(),
            curves: BTreeMap::new(),
        };
        let mut branch_count = 0;
        for (ci, c) in self.curves.iter().enumerate() {
            let m: BTreeMap<String, u64> = self
                .divisors
                .iter()
                .enumerate()
                .map(|(i, d)| (div_id(i), d.m[ci]))
                .collect();
            let att = &self.attachments[ci];
            let attachment = if c.is_branch {
                let total: u64 = att.iter().map(|(_, k)| k).sum();
                let mut arrows = vec![];
                let mut j = 0;
                for &(d, cnt) in att {
                    for _ in 0..cnt {
                        j += 1;
                        let id = if total == 1 {
                            c.id.clone()
                        } else {
                            format!("{}#{j}", c.id)
                        };
                        g.add_vertex(Vertex::branch_arrow(id.clone()));
                        g.add_edge(Edge::new(div_id(d), id.clone()));
                        arrows.push((id, 1));
                    }
                }
                branch_count += total as usize;
                arrows
            } else {
                att.iter().map(|&(d, cnt)| (div_id(d), cnt)).collect()
            };
            table
                .curves
                .insert(c.id.clone(), CurveMult { m, attachment });
        }
        for (a, t) in &self.aliases {
            let entry = table.curves[t].clone();
            table.curves.insert(a.clone(), entry);
        }
        Resolution {
            graph: g,
            table,
            history: self.history.clone(),
            branch_count,
        }
    }
}

#[derive(Clone, Debug)]
pub struct Resolution {
    pub graph: ResGraph,
    pub table: MultTable,
    pub history: Vec<BlowupRecord>,
    /// Number of branches over the complex numbers.
    pub branch_count: usize,
}

impl Resolution {
    /// Milnor number from the multiplicity sequence:
    /// `mu = 2 delta - r + 1` with `delta = sum m (m - 1) / 2`.
    pub fn milnor_from_multiplicities(&self) -> i64 {
        let two_delta: u64 = self
            .history
            .iter()
            .map(|b| b.f_multiplicity * b.f_multiplicity.saturating_sub(1))
            .sum();
        two_delta as i64 - self.branch_count as i64 + 1
    }

    /// Where the strict transform of each tracked curve meets the
    /// exceptional locus, with branch arrows replaced by their vertex.
    pub fn exceptional_attachments(&self) -> BTreeMap<String, Vec<(String, u64)>> {
        self.table
            .curves
            .iter()
            .map(|(id, cm)| {
                let att = cm
                    .attachment
                    .iter()
                    .map(|(v, c)| match self.graph.vertex(v) {
                        Some(x) if x.is_arrow() => (
                            self.graph
                                .neighbors(v)
                                .next()
                                .expect("arrow has a neighbour")
                                .to_string(),
                            *c,
                        ),
                        _ => (v.clone(), *c),
                    })
                    .collect();
                (id.clone(), att)
            })
            .collect()
    }
}

pub fn resolve(input: &CurveInput, opts: ResolveOptions) -> Result<Resolution, ResolveError> {
    let mut st = BlowupState::new(input)?;
    st.run(opts)?;
    let label = input
        .branches
        .iter()
        .map(|b| format!("({})", b.poly))
        .collect::<Vec<_>>()
        .join("");
    Ok(st.finish(&label))
}

/// `mu = 1 + sum (-chi_i) N_i` over the exceptional curves, with `chi_i`
/// taken on the total transform of `f`.
pub fn milnor_from_resolution(g: &ResGraph) -> Result<i64, GraphError> {
    let mut mu = 1i64;
    for v in g.exceptional() {
        mu -= g.chi_open_curve(&v.id)? * v.n as i64;
    }
    Ok(mu)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::calculus::{canonical_nu, self_intersections};

    fn run(input: &CurveInput) -> Resolution {
        resolve(input, ResolveOptions::default()).unwrap()
    }

    #[test]
    fn smooth_germ_needs_one_blowup() {
        let r = run(&CurveInput::branches(&[("f", "x")]));
        assert_eq!(r.graph.exceptional().count(), 1);
        let e = r.graph.vertex("E1").unwrap();
        assert_eq!((e.n, e.nu), (1, 2));
        assert_eq!(r.milnor_from_multiplicities(), 0);
    }

    #[test]
    fn cusp_chain() {
        let r = run(&CurveInput::branches(&[("f", "y^2+x^3")]).with_default_aux());
        let nd: Vec<(u64, u64)> = r.graph.exceptional().map(|v| (v.n, v.nu)).collect();
        assert_eq!(nd, vec![(2, 2), (3, 3), (6, 5)]);
        assert_eq!(
            r.table.curves["y"].m.values().copied().collect::<Vec<_>>(),
            vec![1, 2, 3]
        );
        assert_eq!(
            r.table.curves["x"].m.values().copied().collect::<Vec<_>>(),
            vec![1, 1, 2]
        );
        assert_eq!(r.table.curves["y"].attachment, vec![("E2".to_string(), 1)]);
        assert_eq!(r.graph.neighbors("f").collect::<Vec<_>>(), vec!["E3"]);
        assert_eq!(milnor_from_resolution(&r.graph).unwrap(), 2);
        assert_eq!(r.milnor_from_multiplicities(), 2);
    }

    #[test]
    fn cusp_offenders() {
        let mut st = BlowupState::new(&CurveInput::branches(&[("f", "y^2+x^3")])).unwrap();
        assert_eq!(st.ncd_check()[0].reasons, vec![NcdReason::InitialCenter]);
        st.step().unwrap();
        let off = st.ncd_check();
        assert_eq!(off.len(), 1);
        assert!(off[0].reasons.contains(&NcdReason::Tangency));
        st.run(ResolveOptions::default()).unwrap();
        assert!(st.ncd_check().is_empty());
    }

    #[test]
    fn node_over_the_rationals_and_beyond() {
        let r = run(&CurveInput::branches(&[("f", "x^2+y^2")]));
        assert_eq!(r.graph.exceptional().count(), 1);
        assert_eq!(r.branch_count, 2);
        assert_eq!(r.graph.degree("E1"), 2);
        assert_eq!(r.milnor_from_multiplicities(), 1);
        let r = run(&CurveInput::branches(&[("a", "x-y"), ("b", "x+y")]));
        assert_eq!(milnor_from_resolution(&r.graph).unwrap(), 1);
    }

    #[test]
    fn irrational_tangency_is_reported() {
        // both branches tangent to x^2 = 2 y^2 directions
        let err = resolve(
            &CurveInput::branches(&[("f", "x^2-2y^2+x^3")]).with_aux("g", "x^2-2y^2+y^3"),
            ResolveOptions::default(),
        )
        .unwrap_err();
        match err {
            ResolveError::NonRationalCenter { minpoly, .. } => assert_eq!(minpoly, "-2 + t^2"),
            e => panic!("unexpected {e}"),
        }
    }

    #[test]
    fn input_errors() {
        let bad = |i: CurveInput| resolve(&i, ResolveOptions::default()).unwrap_err();
        assert!(matches!(
            bad(CurveInput::branches(&[("f", "x+1")])),
            ResolveError::NotThroughOrigin(_)
        ));
        assert!(matches!(
            bad(CurveInput::branches(&[("f", "x^2")])),
            ResolveError::NonReduced(_)
        ));
        assert!(matches!(
            bad(CurveInput::branches(&[("f", "x"), ("g", "2x")])),
            ResolveError::NonReduced(_)
        ));
        assert!(matches!(
            bad(CurveInput::branches(&[])),
            ResolveError::NoBranches
        ));
        assert!(matches!(
            bad(CurveInput::branches(&[("f", "x^")])),
            ResolveError::Parse { .. }
        ));
        let tight = resolve(
            &CurveInput::branches(&[("f", "y^2+x^9")]),
            ResolveOptions {
                budget: 2,
                ..Default::default()
            },
        );
        assert_eq!(tight.unwrap_err(), ResolveError::BudgetExceeded(2));
    }

    #[test]
    fn auxiliary_equal_to_a_branch_is_aliased() {
        let r = run(&CurveInput::branches(&[("f", "y^2+x^3"), ("g", "x")]).with_aux("x", "3x"));
        assert_eq!(r.table.curves["x"], r.table.curves["g"]);
        assert_eq!(r.table.curves["x"].attachment, vec![("g".to_string(), 1)]);
    }

    #[test]
    fn adjunction_reproduces_engine_data() {
        let r = run(&CurveInput::branches(&[("f", "(y^2+x^3)*(y^3+x^2)")]).with_default_aux());
        let si = self_intersections(&r.graph).unwrap();
        let nu = canonical_nu(&r.graph, &si).unwrap();
        for v in r.graph.exceptional() {
            assert_eq!(nu[&v.id], v.nu);
        }
    }
}
