//! Dynamic graphs: thresholded strength tables, snapshots, smoothing and
//! the dynamic-graph axioms.

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::piecewise::{Piecewise, PiecewiseError};
use crate::strength::EdgeStrengthTable;

/// Relative slack used when matching times against multiples of `delta_t`.
const GRID_TOL: f64 = 1e-9;

#[derive(Debug, Error, PartialEq)]
pub enum GraphError {
    #[error("delta_t must be positive and finite, got {0}")]
    BadDeltaT(f64),
    #[error("eta must not be NaN")]
    NanEta,
    #[error("strength table has no slices")]
    EmptyTable,
    #[error("time {0} outside the domain [0, {1}]")]
    OutOfDomain(f64, f64),
    #[error("smoothing radius must be a nonnegative number, got {0}")]
    NegativeEps(f64),
    #[error(transparent)]
    Piecewise(#[from] PiecewiseError),
}

/// Undirected edges stored as `(min, max)` pairs. Self-loops are ordinary
/// members here; constructors that model graph states insert them.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct EdgeSet(BTreeSet<(usize, usize)>);

impl EdgeSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Self-loops on `0..n` and nothing else.
    pub fn with_loops(n: usize) -> Self {
        EdgeSet((0..n).map(|v| (v, v)).collect())
    }

    pub fn insert(&mut self, a: usize, b: usize) -> bool {
        self.0.insert((a.min(b), a.max(b)))
    }

    pub fn remove(&mut self, a: usize, b: usize) -> bool {
        self.0.remove(&(a.min(b), a.max(b)))
    }

    pub fn contains(&self, a: usize, b: usize) -> bool {
        self.0.contains(&(a.min(b), a.max(b)))
    }

    pub fn is_subset(&self, other: &EdgeSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn union(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.union(&other.0).copied().collect())
    }

    pub fn intersection(&self, other: &EdgeSet) -> EdgeSet {
        EdgeSet(self.0.intersection(&other.0).copied().collect())
    }

    /// All stored pairs, loops included.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0.iter().copied()
    }

    /// Pairs `(a, b)` with `a < b`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.iter().filter(|(a, b)| a != b)
    }

    pub fn difference<'a>(&'a self, other: &'a EdgeSet) -> impl Iterator<Item = (usize, usize)> + 'a {
        self.0.difference(&other.0).copied()
    }
}

impl FromIterator<(usize, usize)> for EdgeSet {
    fn from_iter<I: IntoIterator<Item = (usize, usize)>>(iter: I) -> Self {
        let mut s = EdgeSet::new();
        for (a, b) in iter {
            s.insert(a, b);
        }
        s
    }
}

/// A saturated dynamic graph on a fixed vertex set over `[0, T]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicGraph {
    pub names: Vec<String>,
    pub edges: Piecewise<EdgeSet>,
}

impl DynamicGraph {
    pub fn horizon(&self) -> f64 {
        self.edges.horizon()
    }

    pub fn snapshot(&self, t: f64) -> Result<&EdgeSet, GraphError> {
        self.edges
            .value_at(t)
            .map_err(|_| GraphError::OutOfDomain(t, self.horizon()))
    }

    pub fn smooth(&self, eps: f64) -> Result<DynamicGraph, GraphError> {
        if !(eps >= 0.0) {
            return Err(GraphError::NegativeEps(eps));
        }
        Ok(DynamicGraph {
            names: self.names.clone(),
            edges: self.edges.smooth(eps, EdgeSet::union)?,
        })
    }
}

/// The graph obtained by thresholding a strength table. Slice `k` holds on
/// the open interval `(k dt, (k+1) dt)`; at each critical time the edge set
/// is stored explicitly in `critical_edges`.
#[derive(Debug, Clone, PartialEq)]
pub struct DynamicBayesianGraph {
    pub names: Vec<String>,
    pub delta_t: f64,
    pub eta: f64,
    pub slice_edges: Vec<EdgeSet>,
    pub critical_times: Vec<f64>,
    pub critical_edges: Vec<EdgeSet>,
}

impl DynamicBayesianGraph {
    pub fn num_vertices(&self) -> usize {
        self.names.len()
    }

    /// Index of the last slice.
    pub fn last_slice(&self) -> usize {
        self.slice_edges.len().saturating_sub(1)
    }

    pub fn horizon(&self) -> f64 {
        self.slice_edges.len() as f64 * self.delta_t
    }

    /// `Some(k)` when `t` is (numerically) the grid time `k dt`.
    fn grid_index(&self, t: f64) -> Option<usize> {
        let x = t / self.delta_t;
        let k = x.round();
        ((x - k).abs() <= GRID_TOL * x.abs().max(1.0) && k >= 0.0).then_some(k as usize)
    }

    fn critical_index(&self, k: usize) -> Option<usize> {
        self.critical_times
            .iter()
            .position(|&c| self.grid_index(c) == Some(k))
    }

    pub fn snapshot(&self, t: f64) -> Result<&EdgeSet, GraphError> {
        let horizon = self.horizon();
        let tol = GRID_TOL * horizon.max(1.0);
        if !(t >= -tol && t <= horizon + tol) {
            return Err(GraphError::OutOfDomain(t, horizon));
        }
        let last = self.last_slice();
        if let Some(k) = self.grid_index(t) {
            if let Some(c) = self.critical_index(k).filter(|_| k >= 1 && k <= last) {
                return Ok(&self.critical_edges[c]);
            }
            return Ok(&self.slice_edges[k.min(last)]);
        }
        let k = (t / self.delta_t).floor().max(0.0) as usize;
        Ok(&self.slice_edges[k.min(last)])
    }

    /// The same edge function as a general piecewise-constant graph.
    pub fn to_dynamic_graph(&self) -> DynamicGraph {
        let n = self.slice_edges.len();
        let points: Vec<f64> = (0..=n).map(|k| k as f64 * self.delta_t).collect();
        let at = (0..=n)
            .map(|k| match k {
                0 => self.slice_edges[0].clone(),
                k if k == n => self.slice_edges[n - 1].clone(),
                k => match self.critical_index(k) {
                    Some(c) => self.critical_edges[c].clone(),
                    None => self.slice_edges[k].clone(),
                },
            })
            .collect();
        let edges = Piecewise::new(points, at, self.slice_edges.clone())
            .expect("grid points are increasing")
            .normalize();
        DynamicGraph {
            names: self.names.clone(),
            edges,
        }
    }
}

/// Thresholds `table` at `eta`: an edge is present in slice `k` when its
/// strength exceeds `eta` (infinite strengths always do).
pub fn build_dbg(
    table: &EdgeStrengthTable,
    eta: f64,
    delta_t: f64,
) -> Result<DynamicBayesianGraph, GraphError> {
    if !(delta_t > 0.0 && delta_t.is_finite()) {
        return Err(GraphError::BadDeltaT(delta_t));
    }
    if eta.is_nan() {
        return Err(GraphError::NanEta);
    }
    if table.values.is_empty() {
        return Err(GraphError::EmptyTable);
    }
    let n = table.names.len();
    let slice_edges: Vec<EdgeSet> = table
        .values
        .iter()
        .map(|row| {
            let mut s = EdgeSet::with_loops(n);
            for (&(p, c), &d) in table.edges.iter().zip(row) {
                if d == f64::INFINITY || d > eta {
                    s.insert(p, c);
                }
            }
            s
        })
        .collect();
    let mut critical_times = Vec::new();
    let mut critical_edges = Vec::new();
    for k in 1..slice_edges.len() {
        if slice_edges[k - 1] != slice_edges[k] {
            critical_times.push(k as f64 * delta_t);
            critical_edges.push(slice_edges[k - 1].union(&slice_edges[k]));
        }
    }
    log::debug!(
        "built graph with {} slices, {} critical times",
        slice_edges.len(),
        critical_times.len()
    );
    Ok(DynamicBayesianGraph {
        names: table.names.clone(),
        delta_t,
        eta,
        slice_edges,
        critical_times,
        critical_edges,
    })
}

pub fn snapshot(dbg: &DynamicBayesianGraph, t: f64) -> Result<&EdgeSet, GraphError> {
    dbg.snapshot(t)
}

/// The `eps`-smoothing, clipped to the domain. Breakpoints of the result are
/// no longer multiples of `delta_t`, so it is returned as a general graph.
pub fn smooth_dbg(dbg: &DynamicBayesianGraph, eps: f64) -> Result<DynamicGraph, GraphError> {
    dbg.to_dynamic_graph().smooth(eps)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, PartialEq)]
pub enum GraphViolation {
    MissingSelfLoop { vertex: String, time: f64 },
    UnknownVertex { edge: (usize, usize), time: f64 },
    BadDomain(String),
    Tameness(String),
    Comparability { time: f64, side: Side, edge: (String, String) },
}

impl fmt::Display for GraphViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GraphViolation::MissingSelfLoop { vertex, time } => {
                write!(f, "missing self-loop on {vertex} at t={time}")
            }
            GraphViolation::UnknownVertex { edge, time } => {
                write!(f, "edge {edge:?} at t={time} references an unknown vertex")
            }
            GraphViolation::BadDomain(m) => write!(f, "bad domain: {m}"),
            GraphViolation::Tameness(m) => write!(f, "tameness: {m}"),
            GraphViolation::Comparability { time, side, edge } => {
                let side = match side {
                    Side::Left => "left",
                    Side::Right => "right",
                };
                write!(
                    f,
                    "comparability at t={time}: {side} edge {}-{} missing from the critical edge set",
                    edge.0, edge.1
                )
            }
        }
    }
}

fn check_state(names: &[String], edges: &EdgeSet, time: f64, out: &mut Vec<GraphViolation>) {
    let n = names.len();
    for (v, name) in names.iter().enumerate() {
        if !edges.contains(v, v) {
            out.push(GraphViolation::MissingSelfLoop {
                vertex: name.clone(),
                time,
            });
        }
    }
    for e in edges.iter().filter(|e| e.1 >= n) {
        out.push(GraphViolation::UnknownVertex { edge: e, time });
    }
}

fn check_inclusion(
    names: &[String],
    side: Side,
    outer: &EdgeSet,
    inner: &EdgeSet,
    time: f64,
    out: &mut Vec<GraphViolation>,
) {
    for (a, b) in inner.difference(outer) {
        let name = |v: usize| names.get(v).cloned().unwrap_or_else(|| v.to_string());
        out.push(GraphViolation::Comparability {
            time,
            side,
            edge: (name(a), name(b)),
        });
    }
}

/// Self-loops, saturation, tameness and comparability of a thresholded
/// graph. Comparability is checked at every interior grid time, so a change
/// between slices that is not backed by a critical union is reported.
pub fn check_dg_axioms(dbg: &DynamicBayesianGraph) -> Vec<GraphViolation> {
    let mut out = Vec::new();
    if !(dbg.delta_t > 0.0 && dbg.delta_t.is_finite()) {
        out.push(GraphViolation::BadDomain(format!("delta_t = {}", dbg.delta_t)));
        return out;
    }
    if dbg.slice_edges.is_empty() {
        out.push(GraphViolation::BadDomain("no slices".into()));
        return out;
    }
    let last = dbg.last_slice();
    if dbg.critical_times.len() != dbg.critical_edges.len() {
        out.push(GraphViolation::Tameness(format!(
            "{} critical times but {} critical edge sets",
            dbg.critical_times.len(),
            dbg.critical_edges.len()
        )));
        return out;
    }
    if dbg.critical_times.len() > last {
        out.push(GraphViolation::Tameness(format!(
            "{} critical times exceed the {} slice boundaries",
            dbg.critical_times.len(),
            last
        )));
    }
    if !dbg.critical_times.windows(2).all(|w| w[0] < w[1]) {
        out.push(GraphViolation::Tameness("critical times not increasing".into()));
    }
    for &c in &dbg.critical_times {
        if !matches!(dbg.grid_index(c), Some(k) if k >= 1 && k <= last) {
            out.push(GraphViolation::Tameness(format!(
                "critical time {c} is not an interior slice boundary"
            )));
        }
    }
    for (k, s) in dbg.slice_edges.iter().enumerate() {
        check_state(&dbg.names, s, (k as f64 + 0.5) * dbg.delta_t, &mut out);
    }
    for (c, s) in dbg.critical_times.iter().zip(&dbg.critical_edges) {
        check_state(&dbg.names, s, *c, &mut out);
    }
    for k in 1..=last {
        let time = k as f64 * dbg.delta_t;
        let here = match dbg.critical_index(k) {
            Some(c) => &dbg.critical_edges[c],
            None => &dbg.slice_edges[k],
        };
        check_inclusion(&dbg.names, Side::Left, here, &dbg.slice_edges[k - 1], time, &mut out);
        check_inclusion(&dbg.names, Side::Right, here, &dbg.slice_edges[k], time, &mut out);
    }
    out
}

/// The same axioms for a general piecewise-constant graph.
pub fn check_dynamic_graph(g: &DynamicGraph) -> Vec<GraphViolation> {
    let mut out = Vec::new();
    let pw = &g.edges;
    let points = pw.points();
    for (i, &p) in points.iter().enumerate() {
        check_state(&g.names, &pw.at()[i], p, &mut out);
        if i > 0 {
            check_inclusion(&g.names, Side::Left, &pw.at()[i], &pw.between()[i - 1], p, &mut out);
        }
        if i + 1 < points.len() {
            let mid = 0.5 * (p + points[i + 1]);
            check_state(&g.names, &pw.between()[i], mid, &mut out);
            check_inclusion(&g.names, Side::Right, &pw.at()[i], &pw.between()[i], p, &mut out);
        }
    }
    out
}
