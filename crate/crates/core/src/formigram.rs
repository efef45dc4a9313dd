//! Formigrams: path-component partitions over time, merge and disband
//! events, and smoothing by finest common coarsening.

use std::fmt;

use thiserror::Error;

use crate::graph::{DynamicBayesianGraph, DynamicGraph};
use crate::partition::Partition;
use crate::piecewise::{Piecewise, PiecewiseError};

pub use crate::partition::{finest_common_coarsening, path_components};

#[derive(Debug, Error, PartialEq)]
pub enum FormigramError {
    #[error("time {0} outside the domain [0, {1}]")]
    OutOfDomain(f64, f64),
    #[error("smoothing radius must be a nonnegative number, got {0}")]
    NegativeEps(f64),
    #[error(transparent)]
    Piecewise(#[from] PiecewiseError),
}

/// A saturated formigram on `names` over `[0, T]`. The breakpoints of
/// `partitions` are `0`, the critical times and `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct Formigram {
    pub names: Vec<String>,
    pub partitions: Piecewise<Partition>,
}

impl Formigram {
    pub fn new(names: Vec<String>, partitions: Piecewise<Partition>) -> Self {
        Formigram { names, partitions }
    }

    pub fn horizon(&self) -> f64 {
        self.partitions.horizon()
    }

    /// Interior times where the partition changes.
    pub fn critical_times(&self) -> &[f64] {
        self.partitions.interior_points()
    }

    pub fn partition_at(&self, t: f64) -> Result<&Partition, FormigramError> {
        self.partitions
            .value_at(t)
            .map_err(|_| FormigramError::OutOfDomain(t, self.horizon()))
    }

    /// Every block of each gap partition must sit inside a block of both
    /// neighbouring point partitions, and all partitions cover the ground set.
    pub fn check(&self) -> Vec<String> {
        let n = self.names.len();
        let pw = &self.partitions;
        let mut out = Vec::new();
        for (i, p) in pw.at().iter().enumerate() {
            if p.ground_size() != n {
                out.push(format!("partition at t={} has ground size {}", pw.points()[i], p.ground_size()));
            }
        }
        for (i, g) in pw.between().iter().enumerate() {
            let (a, b) = (pw.points()[i], pw.points()[i + 1]);
            if g.ground_size() != n {
                out.push(format!("partition on ({a}, {b}) has ground size {}", g.ground_size()));
                continue;
            }
            if !g.refines(&pw.at()[i]) {
                out.push(format!("partition on ({a}, {b}) does not refine the one at {a}"));
            }
            if !g.refines(&pw.at()[i + 1]) {
                out.push(format!("partition on ({a}, {b}) does not refine the one at {b}"));
            }
        }
        out
    }
}

/// Path components of every snapshot of a dynamic graph.
pub fn formigram_of_graph(g: &DynamicGraph) -> Formigram {
    let n = g.names.len();
    let partitions = g
        .edges
        .map(|e| path_components(n, e.edges()))
        .normalize();
    Formigram::new(g.names.clone(), partitions)
}

pub fn formigram_of(dbg: &DynamicBayesianGraph) -> Formigram {
    formigram_of_graph(&dbg.to_dynamic_graph())
}

/// Pointwise finest common coarsening over the clipped window
/// `[t - eps, t + eps] ∩ [0, T]`.
pub fn smooth_formigram(fg: &Formigram, eps: f64) -> Result<Formigram, FormigramError> {
    if !(eps >= 0.0) {
        return Err(FormigramError::NegativeEps(eps));
    }
    let partitions = fg
        .partitions
        .smooth(eps, |a, b| a.join(b).expect("same ground set"))?;
    Ok(Formigram::new(fg.names.clone(), partitions))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum EventKind {
    Merge,
    Disband,
}

impl fmt::Display for EventKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EventKind::Merge => "merge",
            EventKind::Disband => "disband",
        })
    }
}

/// One pair of blocks joining (merge) or separating (disband) at `time`.
/// A merge has the two blocks `before` and their common block `after`; a
/// disband has the common block `before` and the two blocks `after`.
#[derive(Debug, Clone, PartialEq)]
pub struct Event {
    pub time: f64,
    pub kind: EventKind,
    pub blocks_before: Vec<Vec<usize>>,
    pub blocks_after: Vec<Vec<usize>>,
}

fn pair_events(
    time: f64,
    side: &Partition,
    point: &Partition,
    kind: EventKind,
    out: &mut Vec<Event>,
) {
    let blocks = side.blocks();
    let targets = point.blocks();
    for i in 0..blocks.len() {
        for j in i + 1..blocks.len() {
            let c = point.label(blocks[i][0]);
            if c != point.label(blocks[j][0]) {
                continue;
            }
            let pair = vec![blocks[i].clone(), blocks[j].clone()];
            let whole = vec![targets[c].clone()];
            let (blocks_before, blocks_after) = match kind {
                EventKind::Merge => (pair, whole),
                EventKind::Disband => (whole, pair),
            };
            out.push(Event {
                time,
                kind,
                blocks_before,
                blocks_after,
            });
        }
    }
}

/// All merge pairs (from the gap on the left) and disband pairs (into the
/// gap on the right) at every breakpoint, in chronological order.
pub fn detect_events(fg: &Formigram) -> Vec<Event> {
    let pw = &fg.partitions;
    let mut out = Vec::new();
    for (i, &t) in pw.points().iter().enumerate() {
        let here = &pw.at()[i];
        if i > 0 {
            pair_events(t, &pw.between()[i - 1], here, EventKind::Merge, &mut out);
        }
        if i + 1 < pw.points().len() {
            pair_events(t, &pw.between()[i], here, EventKind::Disband, &mut out);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::EdgeSet;

    fn names(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("v{i}")).collect()
    }

    fn parts(blocks: &[&[usize]]) -> Partition {
        let n = blocks.iter().map(|b| b.len()).sum();
        Partition::from_blocks(n, &blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    /// {a}{b} on (0,1), {ab} at 1, {a}{b} on (1,2).
    fn merge_then_split() -> Formigram {
        let split = parts(&[&[0], &[1]]);
        let joined = parts(&[&[0, 1]]);
        Formigram::new(
            names(2),
            Piecewise::new(
                vec![0.0, 1.0, 2.0],
                vec![split.clone(), joined, split.clone()],
                vec![split.clone(), split],
            )
            .unwrap(),
        )
    }

    #[test]
    fn formigram_of_constant_graph() {
        let mut e = EdgeSet::with_loops(3);
        e.insert(0, 1);
        e.insert(1, 2);
        let g = DynamicGraph {
            names: names(3),
            edges: Piecewise::constant(2.0, e).unwrap(),
        };
        let fg = formigram_of_graph(&g);
        assert!(fg.critical_times().is_empty());
        assert_eq!(fg.partition_at(1.3).unwrap().num_blocks(), 1);
        assert!(fg.check().is_empty());
    }

    #[test]
    fn events_pairwise() {
        let fg = merge_then_split();
        let ev = detect_events(&fg);
        assert_eq!(ev.len(), 2);
        assert_eq!(ev[0].kind, EventKind::Merge);
        assert_eq!(ev[0].blocks_before, vec![vec![0], vec![1]]);
        assert_eq!(ev[0].blocks_after, vec![vec![0, 1]]);
        assert_eq!(ev[1].kind, EventKind::Disband);
        assert_eq!(ev[1].blocks_before, vec![vec![0, 1]]);
        assert!(ev.iter().all(|e| e.time == 1.0));
    }

    #[test]
    fn constant_has_no_events() {
        let fg = Formigram::new(names(3), Piecewise::constant(1.0, Partition::discrete(3)).unwrap());
        assert!(detect_events(&fg).is_empty());
    }

    #[test]
    fn smoothing() {
        let fg = merge_then_split();
        assert_eq!(smooth_formigram(&fg, 0.0).unwrap(), fg);
        let s = smooth_formigram(&fg, 0.25).unwrap();
        assert_eq!(s.critical_times(), &[0.75, 1.25]);
        assert_eq!(s.partition_at(0.9).unwrap().num_blocks(), 1);
        assert_eq!(s.partition_at(0.7).unwrap().num_blocks(), 2);
        let all = smooth_formigram(&fg, 2.0).unwrap();
        assert!(all.critical_times().is_empty());
        assert_eq!(all.partition_at(0.0).unwrap().num_blocks(), 1);
        assert!(s.check().is_empty());
        assert!(smooth_formigram(&fg, -1.0).is_err());
    }

    #[test]
    fn check_flags_non_refining_gap() {
        let bad = Formigram::new(
            names(2),
            Piecewise::new(
                vec![0.0, 1.0],
                vec![parts(&[&[0], &[1]]), parts(&[&[0], &[1]])],
                vec![parts(&[&[0, 1]])],
            )
            .unwrap(),
        );
        assert_eq!(bad.check().len(), 2);
    }
}
