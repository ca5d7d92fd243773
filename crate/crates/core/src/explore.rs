//! Bounded search over monomial-in-curves forms on a fixed resolution.
//!
//! For a form with exponents `c`, the decorated graph differs from the
//! standard one only in `nu` and in the form arrows, so the sweep works on
//! an integer skeleton of the graph. Double poles are edges whose two
//! factors vanish together (`nu_i N_j = nu_j N_i`); simple poles need the
//! residue, computed only where the answer matters. Every reported example
//! is recomputed through [`decorate`] and [`zeta_ordinary`].

use std::collections::{BTreeMap, BTreeSet};

use num_integer::Integer;
use num_rational::Ratio;
use num_traits::{CheckedAdd, Zero};
use rayon::prelude::*;
use serde_json::json;
use thiserror::Error;

use crate::calculus::{decorate, CalculusError, FormSpec, MultTable};
use crate::exact::{divisors, fmt_rat, Rat};
use crate::graph::{ResGraph, VertexKind};
use crate::monodromy::{char_poly, CycProduct, MonodromyError};
use crate::zeta::{double_pole_candidates, zeta_ordinary, EdgeCandidate, ZetaError};

pub const DEFAULT_BOUND: u64 = 6;
pub const MAX_FORMS: u64 = 1_000_000;
/// Examples kept per reported list.
pub const EXAMPLE_LIMIT: usize = 16;

#[derive(Debug, Error)]
pub enum ExploreError {
    #[error("search space has {size} forms, above the cap of {cap}")]
    TooLarge { size: u128, cap: u64 },
    #[error("curve {0} is not in the multiplicity table")]
    UnknownCurve(String),
    #[error("vertex {0} is missing from the multiplicity table")]
    MissingVertex(String),
    #[error("bad bounds {0:?}: expected curve=max pairs")]
    BadBounds(String),
    #[error(transparent)]
    Calculus(#[from] CalculusError),
    #[error(transparent)]
    Zeta(#[from] ZetaError),
    #[error(transparent)]
    Monodromy(#[from] MonodromyError),
}

/// Exponent bounds per curve and an optional target set of double poles.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SearchBox {
    pub curves: Vec<String>,
    pub bounds: BTreeMap<String, u64>,
    pub target: Option<Vec<Rat>>,
}

impl SearchBox {
    /// Every curve of the table with the default bound, in table order.
    pub fn default_for(t: &MultTable) -> SearchBox {
        let curves: Vec<String> = t
            .curves
            .iter()
            .filter(|(_, cm)| cm.attachment.len() == 1)
            .map(|(id, _)| id.clone())
            .collect();
        SearchBox::uniform(&curves, DEFAULT_BOUND)
    }

    pub fn uniform(curves: &[String], bound: u64) -> SearchBox {
        SearchBox {
            curves: curves.to_vec(),
            bounds: curves.iter().map(|c| (c.clone(), bound)).collect(),
            target: None,
        }
    }

    /// Parses `x=3,y=2,x-y^2=4`.
    pub fn parse_bounds(spec: &str) -> Result<SearchBox, ExploreError> {
        let mut b = SearchBox::default();
        let spec = spec.trim();
        if spec.is_empty() {
            return Ok(b);
        }
        for part in spec.split(',') {
            let (k, v) = part
                .rsplit_once('=')
                .ok_or_else(|| ExploreError::BadBounds(spec.into()))?;
            let v: u64 = v
                .trim()
                .parse()
                .map_err(|_| ExploreError::BadBounds(spec.into()))?;
            let k = k.trim().to_string();
            if !b.bounds.contains_key(&k) {
                b.curves.push(k.clone());
            }
            b.bounds.insert(k, v);
        }
        Ok(b)
    }

    pub fn with_target(mut self, target: Vec<Rat>) -> SearchBox {
        let mut t = target;
        t.sort();
        t.dedup();
        self.target = Some(t);
        self
    }

    pub fn size(&self) -> u128 {
        self.curves
            .iter()
            .map(|c| self.bounds[c] as u128 + 1)
            .product()
    }

    /// Exponent vector of the `index`-th form, first curve varying slowest.
    pub fn form_at(&self, mut index: u64) -> Vec<u64> {
        let mut out = vec![0; self.curves.len()];
        for (i, c) in self.curves.iter().enumerate().rev() {
            let r = self.bounds[c] + 1;
            out[i] = index % r;
            index /= r;
        }
        out
    }

    pub fn form_spec(&self, exps: &[u64]) -> FormSpec {
        FormSpec {
            exponents: self
                .curves
                .iter()
                .cloned()
                .zip(exps.iter().copied())
                .collect(),
        }
    }
}

type Frac = (i64, i64);

fn frac_rat(f: Frac) -> Rat {
    Rat::new((-f.0).into(), f.1.into())
}

fn reduce(u: i64, d: i64) -> Frac {
    let g = u.gcd(&d);
    (u / g, d / g)
}

/// The graph reduced to integers, with form data pre-indexed.
struct Skeleton {
    n: Vec<i64>,
    base_nu: Vec<i64>,
    exceptional: Vec<bool>,
    chi: Vec<i64>,
    degree: Vec<usize>,
    edges: Vec<(usize, usize)>,
    /// Per box curve: multiplicity on every vertex (1 on a branch arrow it
    /// coincides with).
    m: Vec<Vec<i64>>,
    /// Per box curve: attachment vertex, and whether it is exceptional.
    attach: Vec<(usize, bool)>,
    root: Option<usize>,
    eigen: Vec<bool>,
}

impl Skeleton {
    fn new(
        g: &ResGraph,
        t: &MultTable,
        b: &SearchBox,
        root: Option<&str>,
        cp: &CycProduct,
    ) -> Result<Skeleton, ExploreError> {
        if g.has_form_arrows() {
            return Err(CalculusError::AlreadyDecorated.into());
        }
        let violations = g.validate();
        if !violations.is_empty() {
            return Err(CalculusError::Invalid(violations).into());
        }
        let idx = g.index();
        let nv = g.vertices.len();
        let mut base_nu = vec![1i64; nv];
        let mut chi = vec![0i64; nv];
        for (i, v) in g.vertices.iter().enumerate() {
            if v.kind == VertexKind::Exceptional {
                let k = t
                    .canonical
                    .get(&v.id)
                    .ok_or_else(|| ExploreError::MissingVertex(v.id.clone()))?;
                base_nu[i] = 1 + *k as i64;
                chi[i] = g.chi_open(&v.id).map_err(ZetaError::from)?;
            } else {
                base_nu[i] = v.nu as i64;
            }
        }
        let mut m = Vec::new();
        let mut attach = Vec::new();
        for c in &b.curves {
            let cm = t
                .curves
                .get(c)
                .ok_or_else(|| ExploreError::UnknownCurve(c.clone()))?;
            let mut row = vec![0i64; nv];
            for (i, v) in g.vertices.iter().enumerate() {
                if v.kind == VertexKind::Exceptional {
                    row[i] = *cm
                        .m
                        .get(&v.id)
                        .ok_or_else(|| ExploreError::MissingVertex(v.id.clone()))?
                        as i64;
                }
            }
            let at = match cm.attachment.as_slice() {
                [(v, 1)] => *idx
                    .get(v.as_str())
                    .ok_or_else(|| ExploreError::MissingVertex(v.clone()))?,
                _ => {
                    return Err(CalculusError::Admissibility {
                        curve: c.clone(),
                        reason: "strict transform does not meet the divisor once transversally"
                            .into(),
                    }
                    .into())
                }
            };
            let exc = g.vertices[at].kind == VertexKind::Exceptional;
            if !exc {
                row[at] = 1;
            }
            m.push(row);
            attach.push((at, exc));
        }
        let max_n = g.vertices.iter().map(|v| v.n).max().unwrap_or(1) as usize;
        let eigen = (0..=max_n)
            .map(|d| d > 0 && cp.root_multiplicity(d as u64) > 0)
            .collect();
        Ok(Skeleton {
            n: g.vertices.iter().map(|v| v.n as i64).collect(),
            base_nu,
            exceptional: g
                .vertices
                .iter()
                .map(|v| v.kind == VertexKind::Exceptional)
                .collect(),
            chi,
            degree: g.vertices.iter().map(|v| g.degree(&v.id)).collect(),
            edges: g
                .edges
                .iter()
                .map(|e| (idx[e.a.as_str()], idx[e.b.as_str()]))
                .collect(),
            m,
            attach,
            root: root.and_then(|r| idx.get(r).copied()),
            eigen,
        })
    }
}

/// Poles of one form, as far as the sweep needs them.
#[derive(Default)]
struct FormEval {
    doubles: Vec<Frac>,
    root_double: bool,
    admissible: bool,
}

struct Workspace {
    nu: Vec<i64>,
    chi: Vec<i64>,
    /// `(vertex, nu of the form arrow)`.
    form_arrows: Vec<(usize, i64)>,
    added: Vec<usize>,
}

impl Skeleton {
    fn load(&self, c: &[u64], ws: &mut Workspace) -> bool {
        ws.nu.clone_from(&self.base_nu);
        ws.chi.clone_from(&self.chi);
        ws.form_arrows.clear();
        for a in ws.added.iter_mut() {
            *a = 0;
        }
        for (g, &cg) in c.iter().enumerate() {
            if cg == 0 {
                continue;
            }
            let cg = cg as i64;
            for (v, mv) in self.m[g].iter().enumerate() {
                ws.nu[v] += cg * mv;
            }
            let (at, exc) = self.attach[g];
            if exc {
                ws.chi[at] -= 1;
                ws.added[at] += 1;
                ws.form_arrows.push((at, 1 + cg));
            }
        }
        ws.added
            .iter()
            .zip(&self.degree)
            .all(|(&k, &d)| k == 0 || d >= 3 || d + k < 3)
    }

    fn vanishes(&self, ws: &Workspace, v: usize, (u, d): Frac) -> bool {
        self.n[v] > 0 && ws.nu[v] * d == u * self.n[v]
    }

    fn doubles(&self, ws: &Workspace) -> (Vec<Frac>, bool) {
        let mut out = Vec::new();
        let mut root = false;
        for &(a, b) in &self.edges {
            let (na, nb) = (self.n[a], self.n[b]);
            if na > 0 && nb > 0 && ws.nu[a] * nb == ws.nu[b] * na {
                out.push(reduce(ws.nu[a], na));
                if Some(a) == self.root || Some(b) == self.root {
                    root = true;
                }
            }
        }
        out.sort_by(|x, y| {
            (x.0 as i128 * y.1 as i128)
                .cmp(&(y.0 as i128 * x.1 as i128))
                .reverse()
        });
        out.dedup();
        (out, root)
    }

    /// Residue of the stratum sum at `-u/d`, assuming no double pole there.
    fn residue_is_zero(&self, ws: &Workspace, s: Frac) -> bool {
        let (u, d) = s;
        let mut terms: Vec<(i128, i128)> = Vec::new();
        for v in 0..self.n.len() {
            if self.exceptional[v] && self.vanishes(ws, v, s) && ws.chi[v] != 0 {
                terms.push((ws.chi[v] as i128, self.n[v] as i128));
            }
        }
        for &(a, b) in &self.edges {
            for (i, j) in [(a, b), (b, a)] {
                if self.vanishes(ws, i, s) && !self.vanishes(ws, j, s) {
                    // 1 / (N_i L_j(s0)) with L_j(s0) = (nu_j d - N_j u) / d
                    let l = ws.nu[j] as i128 * d as i128 - self.n[j] as i128 * u as i128;
                    terms.push((d as i128, self.n[i] as i128 * l));
                }
            }
        }
        for &(v, nu) in &ws.form_arrows {
            if self.vanishes(ws, v, s) {
                terms.push((1, self.n[v] as i128 * nu as i128));
            }
        }
        let mut acc = Ratio::<i128>::zero();
        for &(p, q) in &terms {
            match acc.checked_add(&Ratio::new(p, q)) {
                Some(x) => acc = x,
                None => {
                    let big: Rat = terms
                        .iter()
                        .map(|&(p, q)| Rat::new(p.into(), q.into()))
                        .fold(Rat::zero(), |a, b| a + b);
                    return big.is_zero();
                }
            }
        }
        acc.is_zero()
    }

    /// Candidate pole locations of the current form.
    fn candidates(&self, ws: &Workspace) -> Vec<Frac> {
        let mut out: Vec<Frac> = (0..self.n.len())
            .filter(|&v| self.n[v] > 0)
            .map(|v| reduce(ws.nu[v], self.n[v]))
            .collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HistogramEntry {
    pub double_poles: Vec<Rat>,
    pub count: u64,
    pub example: FormSpec,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Flagged {
    pub form: FormSpec,
    pub pole: Rat,
    /// Order of `exp(2 pi i s0)`.
    pub root_order: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hit {
    pub form: FormSpec,
    pub double_poles: Vec<Rat>,
    /// Poles `(location, order)` from the full decorate-and-sum route.
    pub poles: Vec<(Rat, u32)>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SearchResult {
    pub size: u64,
    pub inadmissible: u64,
    /// Ascending by double-pole set.
    pub histogram: Vec<HistogramEntry>,
    pub target: Option<Vec<Rat>>,
    pub target_count: u64,
    /// Smallest forms whose double poles contain the target, re-verified.
    pub hits: Vec<Hit>,
    pub flagged_count: u64,
    pub flagged: Vec<Flagged>,
    /// Forms with a double pole on an edge at the root vertex.
    pub root_witnessed: u64,
    /// Of those, forms with another double pole.
    pub root_with_second: u64,
    pub root_second_examples: Vec<FormSpec>,
    /// Orders of `exp(2 pi i s0)` over all poles of all forms.
    pub pole_orders: BTreeSet<u64>,
    /// Examples whose full recomputation disagreed with the sweep.
    pub reverify_failures: Vec<FormSpec>,
    pub certificates: Vec<SideCertificate>,
}

impl SearchResult {
    pub fn count_exact(&self, set: &[Rat]) -> u64 {
        let mut s = set.to_vec();
        s.sort();
        self.histogram
            .iter()
            .filter(|h| h.double_poles == s)
            .map(|h| h.count)
            .sum()
    }

    pub fn count_containing(&self, set: &[Rat]) -> u64 {
        self.histogram
            .iter()
            .filter(|h| set.iter().all(|x| h.double_poles.contains(x)))
            .map(|h| h.count)
            .sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let set = |v: &[Rat]| v.iter().map(fmt_rat).collect::<Vec<_>>();
        json!({
            "size": self.size,
            "inadmissible": self.inadmissible,
            "histogram": self.histogram.iter().map(|h| json!({
                "double_poles": set(&h.double_poles),
                "count": h.count,
                "example": h.example.to_string(),
            })).collect::<Vec<_>>(),
            "target": self.target.as_ref().map(|t| set(t)),
            "target_count": self.target_count,
            "hits": self.hits.iter().map(|h| json!({
                "form": h.form.to_string(),
                "double_poles": set(&h.double_poles),
                "poles": h.poles.iter().map(|(s, k)| json!([fmt_rat(s), k])).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
            "flagged_count": self.flagged_count,
            "flagged": self.flagged.iter().map(|f| json!({
                "form": f.form.to_string(), "pole": fmt_rat(&f.pole), "root_order": f.root_order,
            })).collect::<Vec<_>>(),
            "root_witnessed": self.root_witnessed,
            "root_with_second": self.root_with_second,
            "pole_orders": self.pole_orders,
            "reverify_failures": self.reverify_failures.iter().map(|f| f.to_string()).collect::<Vec<_>>(),
            "certificates": self.certificates.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
        })
    }

    pub fn to_text(&self) -> String {
        let set = |v: &[Rat]| {
            if v.is_empty() {
                "{}".to_string()
            } else {
                format!(
                    "{{{}}}",
                    v.iter().map(fmt_rat).collect::<Vec<_>>().join(", ")
                )
            }
        };
        let mut out = format!(
            "forms: {} ({} inadmissible)\n",
            self.size, self.inadmissible
        );
        out.push_str("double-pole sets:\n");
        for h in &self.histogram {
            out.push_str(&format!(
                "  {:<24} {:>8}   e.g. {}\n",
                set(&h.double_poles),
                h.count,
                h.example
            ));
        }
        if let Some(t) = &self.target {
            out.push_str(&format!("target {}: {} forms\n", set(t), self.target_count));
            for h in &self.hits {
                out.push_str(&format!(
                    "  {}   double poles {}\n",
                    h.form,
                    set(&h.double_poles)
                ));
            }
        }
        out.push_str(&format!(
            "root-witnessed double poles: {} forms, {} with a second double pole\n",
            self.root_witnessed, self.root_with_second
        ));
        out.push_str(&format!(
            "forms with a pole off the monodromy spectrum: {}\n",
            self.flagged_count
        ));
        for f in &self.flagged {
            out.push_str(&format!(
                "  {}   pole {} (order {} root of unity)\n",
                f.form,
                fmt_rat(&f.pole),
                f.root_order
            ));
        }
        out.push_str(&format!(
            "pole orders seen: {}\n",
            self.pole_orders
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(" ")
        ));
        for c in &self.certificates {
            out.push_str(&c.to_text());
        }
        out
    }
}

#[derive(Default)]
struct Acc {
    histogram: BTreeMap<Vec<Frac>, (u64, u64)>,
    target_idx: Vec<u64>,
    target_count: u64,
    flagged: Vec<(u64, Frac)>,
    flagged_count: u64,
    root_witnessed: u64,
    root_with_second: u64,
    root_second_idx: Vec<u64>,
    pole_orders: BTreeSet<u64>,
    inadmissible: u64,
}

fn keep_smallest<T: Ord>(v: &mut Vec<T>) {
    v.sort();
    v.truncate(EXAMPLE_LIMIT);
}

impl Acc {
    fn merge(mut self, other: Acc) -> Acc {
        for (k, (c, i)) in other.histogram {
            let e = self.histogram.entry(k).or_insert((0, u64::MAX));
            e.0 += c;
            e.1 = e.1.min(i);
        }
        self.target_idx.extend(other.target_idx);
        keep_smallest(&mut self.target_idx);
        self.target_count += other.target_count;
        self.flagged.extend(other.flagged);
        keep_smallest(&mut self.flagged);
        self.flagged_count += other.flagged_count;
        self.root_witnessed += other.root_witnessed;
        self.root_with_second += other.root_with_second;
        self.root_second_idx.extend(other.root_second_idx);
        keep_smallest(&mut self.root_second_idx);
        self.pole_orders.extend(other.pole_orders);
        self.inadmissible += other.inadmissible;
        self
    }
}

fn contains_all(have: &[Frac], want: &[Frac]) -> bool {
    want.iter().all(|w| have.contains(w))
}

fn to_frac(r: &Rat) -> Option<Frac> {
    use num_traits::ToPrimitive;
    Some(((-r.numer()).to_i64()?, r.denom().to_i64()?))
}

const CHUNK: u64 = 4096;

/// Enumerates every form in the box. `reverse` walks the chunks in the
/// opposite order, for checking that the result does not depend on it.
pub fn sweep_with(
    g: &ResGraph,
    t: &MultTable,
    b: &SearchBox,
    root: Option<&str>,
    reverse: bool,
) -> Result<SearchResult, ExploreError> {
    let size = b.size();
    if size > MAX_FORMS as u128 {
        return Err(ExploreError::TooLarge {
            size,
            cap: MAX_FORMS,
        });
    }
    let size = size as u64;
    let cp = char_poly(g)?;
    let sk = Skeleton::new(g, t, b, root, &cp)?;
    let target: Option<Vec<Frac>> = b
        .target
        .as_ref()
        .map(|t| t.iter().filter_map(to_frac).collect());

    let mut chunks: Vec<u64> = (0..size.div_ceil(CHUNK)).collect();
    if reverse {
        chunks.reverse();
    }
    let acc = chunks
        .into_par_iter()
        .map(|ch| {
            let mut acc = Acc::default();
            let nv = sk.n.len();
            let mut ws = Workspace {
                nu: vec![0; nv],
                chi: vec![0; nv],
                form_arrows: Vec::new(),
                added: vec![0; nv],
            };
            let lo = ch * CHUNK;
            let hi = (lo + CHUNK).min(size);
            for idx in lo..hi {
                let c = b.form_at(idx);
                let ev = evaluate(&sk, &c, &mut ws, &mut acc, idx);
                if !ev.admissible {
                    acc.inadmissible += 1;
                    continue;
                }
                let e = acc.histogram.entry(ev.doubles.clone()).or_insert((0, idx));
                e.0 += 1;
                e.1 = e.1.min(idx);
                if let Some(tg) = &target {
                    if contains_all(&ev.doubles, tg) {
                        acc.target_count += 1;
                        if acc.target_idx.len() < EXAMPLE_LIMIT {
                            acc.target_idx.push(idx);
                        }
                    }
                }
                if ev.root_double {
                    acc.root_witnessed += 1;
                    if ev.doubles.len() > 1 {
                        acc.root_with_second += 1;
                        if acc.root_second_idx.len() < EXAMPLE_LIMIT {
                            acc.root_second_idx.push(idx);
                        }
                    }
                }
            }
            acc
        })
        .reduce(Acc::default, Acc::merge);

    let mut histogram: Vec<HistogramEntry> = acc
        .histogram
        .iter()
        .map(|(k, &(count, i))| {
            let mut dp: Vec<Rat> = k.iter().map(|&f| frac_rat(f)).collect();
            dp.sort();
            HistogramEntry {
                double_poles: dp,
                count,
                example: b.form_spec(&b.form_at(i)),
            }
        })
        .collect();
    histogram.sort_by(|a, b| a.double_poles.cmp(&b.double_poles));

    // full recomputation of every reported example
    let mut reverify_failures = Vec::new();
    let full = |w: &FormSpec| -> Result<(Vec<Rat>, Vec<(Rat, u32)>), ExploreError> {
        let d = decorate(g, t, w)?;
        let r = zeta_ordinary(&d)?;
        let poles: Vec<(Rat, u32)> = r
            .poles
            .iter()
            .map(|p| (p.location.clone(), p.order))
            .collect();
        Ok((r.double_poles(), poles))
    };
    for h in &histogram {
        if full(&h.example)?.0 != h.double_poles {
            reverify_failures.push(h.example.clone());
        }
    }
    let mut target_idx = acc.target_idx.clone();
    keep_smallest(&mut target_idx);
    let mut hits = Vec::new();
    for i in target_idx {
        let w = b.form_spec(&b.form_at(i));
        let (double_poles, poles) = full(&w)?;
        let fast = sk_doubles(&sk, &b.form_at(i));
        if fast != double_poles {
            reverify_failures.push(w.clone());
        }
        hits.push(Hit {
            form: w,
            double_poles,
            poles,
        });
    }
    let mut flagged = Vec::new();
    for &(i, f) in &acc.flagged {
        let w = b.form_spec(&b.form_at(i));
        let pole = frac_rat(f);
        let (_, poles) = full(&w)?;
        if !poles.iter().any(|(s, _)| *s == pole) {
            reverify_failures.push(w.clone());
        }
        flagged.push(Flagged {
            form: w,
            pole,
            root_order: f.1 as u64 / (f.0.rem_euclid(f.1)).gcd(&f.1).max(1) as u64,
        });
    }

    Ok(SearchResult {
        size,
        inadmissible: acc.inadmissible,
        histogram,
        target: b.target.clone(),
        target_count: acc.target_count,
        hits,
        flagged_count: acc.flagged_count,
        flagged,
        root_witnessed: acc.root_witnessed,
        root_with_second: acc.root_with_second,
        root_second_examples: acc
            .root_second_idx
            .iter()
            .map(|&i| b.form_spec(&b.form_at(i)))
            .collect(),
        pole_orders: acc.pole_orders,
        reverify_failures,
        certificates: root.map(|r| side_certificates(g, r)).unwrap_or_default(),
    })
}

fn sk_doubles(sk: &Skeleton, c: &[u64]) -> Vec<Rat> {
    let nv = sk.n.len();
    let mut ws = Workspace {
        nu: vec![0; nv],
        chi: vec![0; nv],
        form_arrows: Vec::new(),
        added: vec![0; nv],
    };
    sk.load(c, &mut ws);
    let mut v: Vec<Rat> = sk.doubles(&ws).0.into_iter().map(frac_rat).collect();
    v.sort();
    v
}

/// Order of `exp(2 pi i (-u/d))` for `d > 0`.
fn root_order((u, d): Frac) -> usize {
    (d / u.rem_euclid(d).gcd(&d).max(1)) as usize
}

fn evaluate(sk: &Skeleton, c: &[u64], ws: &mut Workspace, acc: &mut Acc, idx: u64) -> FormEval {
    if !sk.load(c, ws) {
        return FormEval::default();
    }
    let (doubles, root_double) = sk.doubles(ws);
    for &s in &doubles {
        acc.pole_orders.insert(root_order(s) as u64);
    }
    let mut flagged = false;
    for s in sk.candidates(ws) {
        if doubles.contains(&s) {
            if !sk.eigen.get(root_order(s)).copied().unwrap_or(false) && !flagged {
                flagged = true;
                acc.flagged_count += 1;
                if acc.flagged.len() < EXAMPLE_LIMIT {
                    acc.flagged.push((idx, s));
                }
            }
            continue;
        }
        let d = root_order(s);
        let eigen = sk.eigen.get(d).copied().unwrap_or(false);
        if eigen && acc.pole_orders.contains(&(d as u64)) {
            continue;
        }
        if sk.residue_is_zero(ws, s) {
            continue;
        }
        acc.pole_orders.insert(d as u64);
        if !eigen && !flagged {
            flagged = true;
            acc.flagged_count += 1;
            if acc.flagged.len() < EXAMPLE_LIMIT {
                acc.flagged.push((idx, s));
            }
        }
    }
    FormEval {
        doubles,
        root_double,
        admissible: true,
    }
}

/// Poles `(location, order)` of one form from the integer skeleton,
/// ascending by location.
pub fn fast_poles(
    g: &ResGraph,
    t: &MultTable,
    w: &FormSpec,
) -> Result<Vec<(Rat, u32)>, ExploreError> {
    let curves: Vec<String> = w.support().map(|(g, _)| g.clone()).collect();
    let b = SearchBox::uniform(&curves, 0);
    let sk = Skeleton::new(g, t, &b, None, &char_poly(g)?)?;
    let nv = sk.n.len();
    let mut ws = Workspace {
        nu: vec![0; nv],
        chi: vec![0; nv],
        form_arrows: Vec::new(),
        added: vec![0; nv],
    };
    let c: Vec<u64> = curves.iter().map(|id| w.exponents[id]).collect();
    if !sk.load(&c, &mut ws) {
        return Err(CalculusError::Admissibility {
            curve: curves.join(","),
            reason: "form arrows would create a new branching component".into(),
        }
        .into());
    }
    let (doubles, _) = sk.doubles(&ws);
    let mut out: Vec<(Rat, u32)> = sk
        .candidates(&ws)
        .into_iter()
        .filter_map(|s| {
            if doubles.contains(&s) {
                Some((frac_rat(s), 2))
            } else if !sk.residue_is_zero(&ws, s) {
                Some((frac_rat(s), 1))
            } else {
                None
            }
        })
        .collect();
    out.sort();
    Ok(out)
}

pub fn sweep(
    g: &ResGraph,
    t: &MultTable,
    b: &SearchBox,
    root: Option<&str>,
) -> Result<SearchResult, ExploreError> {
    sweep_with(g, t, b, root, false)
}

/// Divisibility constraints on double poles for one side of the root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SideCertificate {
    /// Root neighbour the side hangs from.
    pub side: String,
    /// Edges inside the side, away from the root.
    pub edges: Vec<EdgeCandidate>,
    /// Divisors of the side's `N` values dividing no edge gcd of the side.
    pub excluded: Vec<u64>,
}

impl SideCertificate {
    pub fn excludes(&self, d: u64) -> bool {
        self.edges.iter().all(|e| !e.allows_denominator(d))
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "side": self.side,
            "edges": self.edges.iter().map(|e| json!({
                "a": e.a, "b": e.b, "N": [e.n_a, e.n_b], "gcd": e.gcd,
            })).collect::<Vec<_>>(),
            "excluded_denominators": self.excluded,
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("side {}:\n", self.side);
        for e in &self.edges {
            out.push_str(&format!(
                "  {}-{}  N=({}, {})  gcd {}\n",
                e.a, e.b, e.n_a, e.n_b, e.gcd
            ));
        }
        out.push_str(&format!(
            "  no double pole with denominator {} on this side\n",
            self.excluded
                .iter()
                .map(|d| d.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ));
        out
    }
}

/// Splits the exceptional tree at `root` and records, per side, the edge
/// gcds that bound the denominators of double poles located there. These
/// depend only on the `N` data, never on a form.
pub fn side_certificates(g: &ResGraph, root: &str) -> Vec<SideCertificate> {
    let cands = double_pole_candidates(g);
    let mut out = Vec::new();
    for start in g
        .neighbors(root)
        .filter(|v| g.vertex(v).is_some_and(|x| !x.is_arrow()))
    {
        let mut side = BTreeSet::new();
        let mut stack = vec![start.to_string()];
        while let Some(v) = stack.pop() {
            if v == root || !side.insert(v.clone()) {
                continue;
            }
            stack.extend(g.neighbors(&v).map(str::to_string));
        }
        let edges: Vec<EdgeCandidate> = cands
            .iter()
            .filter(|e| side.contains(&e.a) && side.contains(&e.b))
            .cloned()
            .collect();
        let mut cert = SideCertificate {
            side: start.to_string(),
            edges,
            excluded: vec![],
        };
        let possible: BTreeSet<u64> = cert
            .edges
            .iter()
            .flat_map(|e| [e.n_a, e.n_b])
            .flat_map(divisors)
            .filter(|&d| d > 1)
            .collect();
        cert.excluded = possible.into_iter().filter(|&d| cert.excludes(d)).collect();
        out.push(cert);
    }
    out
}

/// Eigenvalues of the monodromy against the pole orders reached by a sweep.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Coverage {
    /// Root orders `d` of the characteristic polynomial with multiplicity.
    pub eigen_orders: BTreeMap<u64, i64>,
    pub covered: BTreeSet<u64>,
    pub uncovered: BTreeMap<u64, i64>,
    /// Pole orders that are not eigenvalue orders.
    pub off_spectrum: BTreeSet<u64>,
}

impl Coverage {
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "eigen_orders": self.eigen_orders,
            "covered": self.covered,
            "uncovered": self.uncovered,
            "off_spectrum": self.off_spectrum,
        })
    }
}

pub fn eigenvalue_coverage(g: &ResGraph, r: &SearchResult) -> Result<Coverage, ExploreError> {
    let eigen_orders: BTreeMap<u64, i64> = char_poly(g)?
        .root_orders()
        .into_iter()
        .filter(|(_, e)| *e > 0)
        .collect();
    let covered: BTreeSet<u64> = r
        .pole_orders
        .iter()
        .copied()
        .filter(|d| eigen_orders.contains_key(d))
        .collect();
    let uncovered = eigen_orders
        .iter()
        .filter(|(d, _)| !covered.contains(d))
        .map(|(&d, &e)| (d, e))
        .collect();
    let off_spectrum = r
        .pole_orders
        .iter()
        .copied()
        .filter(|d| !eigen_orders.contains_key(d))
        .collect();
    Ok(Coverage {
        eigen_orders,
        covered,
        uncovered,
        off_spectrum,
    })
}

/// The itemised impossibility claims for the five-branch example.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RemarkReport {
    pub size: u64,
    pub half_third: u64,
    pub three_halves_five_thirds: u64,
    pub two_thirds_and_three_halves: u64,
    pub root_witnessed: u64,
    pub root_with_second: u64,
    pub certificates: Vec<SideCertificate>,
    /// Sides whose edges exclude denominator 3.
    pub sides_excluding_three: Vec<String>,
    pub reverify_failures: usize,
}

impl RemarkReport {
    pub fn holds(&self) -> bool {
        self.half_third >= 1
            && self.three_halves_five_thirds >= 1
            && self.two_thirds_and_three_halves == 0
            && self.root_with_second == 0
            && !self.sides_excluding_three.is_empty()
            && self.reverify_failures == 0
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "forms": self.size,
            "double_poles_exactly_-1/2_-1/3": self.half_third,
            "double_poles_exactly_-3/2_-5/3": self.three_halves_five_thirds,
            "double_poles_including_-2/3_-3/2": self.two_thirds_and_three_halves,
            "root_witnessed": self.root_witnessed,
            "root_witnessed_with_second": self.root_with_second,
            "sides_excluding_3": self.sides_excluding_three,
            "certificates": self.certificates.iter().map(|c| c.to_json()).collect::<Vec<_>>(),
            "holds": self.holds(),
        })
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "forms enumerated: {}\n\
             double poles exactly {{-1/2, -1/3}}: {}\n\
             double poles exactly {{-3/2, -5/3}}: {}\n\
             double poles at both -2/3 and -3/2: {}\n\
             root-witnessed double pole: {} forms, {} with a second double pole\n",
            self.size,
            self.half_third,
            self.three_halves_five_thirds,
            self.two_thirds_and_three_halves,
            self.root_witnessed,
            self.root_with_second,
        );
        for c in &self.certificates {
            out.push_str(&c.to_text());
        }
        out.push_str(&format!("claims hold within the box: {}\n", self.holds()));
        out
    }
}

pub fn verify_remark(
    g: &ResGraph,
    t: &MultTable,
    b: &SearchBox,
    root: &str,
) -> Result<RemarkReport, ExploreError> {
    let r = sweep(g, t, b, Some(root))?;
    Ok(remark_from(&r))
}

pub fn remark_from(r: &SearchResult) -> RemarkReport {
    let q = |n: i64, d: i64| Rat::new(n.into(), d.into());
    RemarkReport {
        size: r.size,
        half_third: r.count_exact(&[q(-1, 2), q(-1, 3)]),
        three_halves_five_thirds: r.count_exact(&[q(-3, 2), q(-5, 3)]),
        two_thirds_and_three_halves: r.count_containing(&[q(-2, 3), q(-3, 2)]),
        root_witnessed: r.root_witnessed,
        root_with_second: r.root_with_second,
        sides_excluding_three: r
            .certificates
            .iter()
            .filter(|c| c.excludes(3))
            .map(|c| c.side.clone())
            .collect(),
        certificates: r.certificates.clone(),
        reverify_failures: r.reverify_failures.len(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::fixtures;

    fn fig1() -> (ResGraph, MultTable) {
        (
            fixtures::graph("fab_fig1").unwrap(),
            fixtures::fab_mult_table(),
        )
    }

    #[test]
    fn standard_form_only() {
        let (g, t) = fig1();
        let r = sweep(&g, &t, &SearchBox::default(), Some("E0")).unwrap();
        assert_eq!(r.size, 1);
        assert_eq!(r.histogram.len(), 1);
        assert_eq!(r.histogram[0].double_poles, vec![rat(-1, 6)]);
        assert!(r.reverify_failures.is_empty());
        assert_eq!(r.pole_orders, [1, 6, 38, 57].into_iter().collect());
    }

    #[test]
    fn powers_of_x_contain_the_first_example() {
        let (g, t) = fig1();
        let b = SearchBox::parse_bounds("x=3")
            .unwrap()
            .with_target(vec![rat(-1, 2), rat(-1, 3)]);
        let r = sweep(&g, &t, &b, Some("E0")).unwrap();
        assert_eq!(r.size, 4);
        assert!(r.hits.iter().any(|h| h.form.exponents["x"] == 3));
        assert!(r.reverify_failures.is_empty());
    }

    #[test]
    fn certificates_split_by_side() {
        let (g, _) = fig1();
        let certs = side_certificates(&g, "E0");
        let a = certs.iter().find(|c| c.side == "A1").unwrap();
        let b = certs.iter().find(|c| c.side == "B1").unwrap();
        assert!(a.excludes(3));
        assert!(!a.excludes(2));
        assert!(b.excludes(2));
        assert!(!b.excludes(3));
        assert!(a.edges.iter().any(|e| (e.n_a, e.n_b, e.gcd) == (18, 38, 2)));
    }

    #[test]
    fn traversal_order_does_not_matter() {
        let (g, t) = fig1();
        let b = SearchBox::parse_bounds("x=4,y=4,y-x^2=3,x-y^2=2").unwrap();
        let fwd = sweep_with(&g, &t, &b, Some("E0"), false).unwrap();
        let rev = sweep_with(&g, &t, &b, Some("E0"), true).unwrap();
        assert_eq!(fwd, rev);
    }

    #[test]
    fn box_size_cap() {
        let (g, t) = fig1();
        let b = SearchBox::uniform(&t.curves.keys().cloned().collect::<Vec<_>>(), 10);
        assert!(matches!(
            sweep(&g, &t, &b, None),
            Err(ExploreError::TooLarge { .. })
        ));
    }
}
