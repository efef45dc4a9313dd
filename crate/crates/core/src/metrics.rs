//! Bottleneck distance between barcodes and the smoothing stability check.
//!
//! Pairs cost the larger of the endpoint differences, an unmatched bar costs
//! half its length, and open/closed flags are ignored.

use crate::formigram::{formigram_of, smooth_formigram, FormigramError};
use crate::graph::DynamicBayesianGraph;
use crate::zigzag::{zigzag_barcode, BarInterval, Barcode};

/// Slack allowed on the stability bound.
pub const STABILITY_TOL: f64 = 1e-9;

pub fn pair_cost(a: &BarInterval, b: &BarInterval) -> f64 {
    (a.birth - b.birth).abs().max((a.death - b.death).abs())
}

pub fn deletion_cost(a: &BarInterval) -> f64 {
    (a.death - a.birth) / 2.0
}

/// An optimal partial matching. Indices refer to `Barcode::bars` order.
#[derive(Debug, Clone, PartialEq)]
pub struct Matching {
    pub pairs: Vec<(usize, usize, f64)>,
    pub unmatched_a: Vec<(usize, f64)>,
    pub unmatched_b: Vec<(usize, f64)>,
    pub cost: f64,
}

/// Bipartite graph on `A ∪ diag(B)` versus `B ∪ diag(A)`.
struct Augmented<'a> {
    a: &'a [BarInterval],
    b: &'a [BarInterval],
}

impl Augmented<'_> {
    fn size(&self) -> usize {
        self.a.len() + self.b.len()
    }

    fn allowed(&self, l: usize, r: usize, radius: f64) -> bool {
        let (n, m) = (self.a.len(), self.b.len());
        match (l < n, r < m) {
            (true, true) => pair_cost(&self.a[l], &self.b[r]) <= radius,
            (true, false) => r - m == l && deletion_cost(&self.a[l]) <= radius,
            (false, true) => l - n == r && deletion_cost(&self.b[r]) <= radius,
            (false, false) => true,
        }
    }

    fn augment(&self, l: usize, radius: f64, seen: &mut [bool], owner: &mut [Option<usize>]) -> bool {
        for r in 0..self.size() {
            if seen[r] || !self.allowed(l, r, radius) {
                continue;
            }
            seen[r] = true;
            if owner[r].is_none_or(|o| self.augment(o, radius, seen, owner)) {
                owner[r] = Some(l);
                return true;
            }
        }
        false
    }

    /// Perfect matching using only edges of cost at most `radius`.
    fn perfect(&self, radius: f64) -> Option<Vec<Option<usize>>> {
        let size = self.size();
        let mut owner = vec![None; size];
        for l in 0..size {
            let mut seen = vec![false; size];
            if !self.augment(l, radius, &mut seen, &mut owner) {
                return None;
            }
        }
        Some(owner)
    }
}

pub fn optimal_matching(a: &Barcode, b: &Barcode) -> Matching {
    let g = Augmented {
        a: a.bars(),
        b: b.bars(),
    };
    let mut candidates = vec![0.0];
    candidates.extend(g.a.iter().map(deletion_cost));
    candidates.extend(g.b.iter().map(deletion_cost));
    for x in g.a {
        candidates.extend(g.b.iter().map(|y| pair_cost(x, y)));
    }
    candidates.sort_by(f64::total_cmp);
    candidates.dedup();

    // the largest candidate always admits the all-deleted matching
    let (mut lo, mut hi) = (0, candidates.len() - 1);
    while lo < hi {
        let mid = (lo + hi) / 2;
        if g.perfect(candidates[mid]).is_some() {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    let cost = candidates[lo];
    let owner = g.perfect(cost).expect("feasible at the chosen radius");

    let (n, m) = (g.a.len(), g.b.len());
    let mut pairs = Vec::new();
    let mut unmatched_a = Vec::new();
    let mut unmatched_b = Vec::new();
    for (r, l) in owner.iter().enumerate() {
        let l = l.expect("perfect matching");
        match (l < n, r < m) {
            (true, true) => pairs.push((l, r, pair_cost(&g.a[l], &g.b[r]))),
            (true, false) => unmatched_a.push((l, deletion_cost(&g.a[l]))),
            (false, true) => unmatched_b.push((r, deletion_cost(&g.b[r]))),
            (false, false) => {}
        }
    }
    pairs.sort_by_key(|p| p.0);
    unmatched_a.sort_by_key(|p| p.0);
    Matching {
        pairs,
        unmatched_a,
        unmatched_b,
        cost,
    }
}

pub fn bottleneck_distance(a: &Barcode, b: &Barcode) -> f64 {
    optimal_matching(a, b).cost
}

/// Minimum over every partial matching by direct enumeration.
pub fn exhaustive_bottleneck(a: &Barcode, b: &Barcode) -> f64 {
    fn go(i: usize, a: &[BarInterval], b: &[BarInterval], used: &mut [bool], acc: f64) -> f64 {
        if i == a.len() {
            return b
                .iter()
                .zip(used.iter())
                .filter(|(_, u)| !**u)
                .fold(acc, |c, (y, _)| c.max(deletion_cost(y)));
        }
        let mut best = go(i + 1, a, b, used, acc.max(deletion_cost(&a[i])));
        for j in 0..b.len() {
            if !used[j] {
                used[j] = true;
                best = best.min(go(i + 1, a, b, used, acc.max(pair_cost(&a[i], &b[j]))));
                used[j] = false;
            }
        }
        best
    }
    go(0, a.bars(), b.bars(), &mut vec![false; b.len()], 0.0)
}

/// Half the bottleneck distance, a lower bound on the interleaving distance
/// of the underlying dynamic graphs.
pub fn interleaving_lower_bound(a: &Barcode, b: &Barcode) -> f64 {
    bottleneck_distance(a, b) / 2.0
}

#[derive(Debug, Clone, PartialEq)]
pub struct StabilityReport {
    pub eps: f64,
    pub lhs: f64,
    pub bound: f64,
    pub pass: bool,
}

/// Compares the barcode of the `eps`-smoothed formigram with the original.
pub fn stability_check(dbg: &DynamicBayesianGraph, eps: f64) -> Result<StabilityReport, FormigramError> {
    let fg = formigram_of(dbg);
    let smoothed = smooth_formigram(&fg, eps)?;
    let lhs = bottleneck_distance(&zigzag_barcode(&smoothed), &zigzag_barcode(&fg));
    Ok(StabilityReport {
        eps,
        lhs,
        bound: eps,
        pass: lhs <= eps + STABILITY_TOL,
    })
}
