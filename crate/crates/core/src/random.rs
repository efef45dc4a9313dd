//! Seeded generators for networks, formigrams and barcodes used by the
//! property tests, the acceptance suite and the examples.

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};

use crate::dbn::{Cpt, Dbn, ParentRef, Slice, Variable};
use crate::formigram::Formigram;
use crate::partition::{finest_common_coarsening, Partition};
use crate::piecewise::Piecewise;
use crate::zigzag::{BarInterval, Barcode};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

#[derive(Debug, Clone, Copy)]
pub struct DbnShape {
    pub max_vars: usize,
    pub max_slices: usize,
    pub intra_prob: f64,
    pub inter_prob: f64,
}

impl Default for DbnShape {
    fn default() -> Self {
        DbnShape {
            max_vars: 6,
            max_slices: 8,
            intra_prob: 0.5,
            inter_prob: 0.25,
        }
    }
}

fn binary_row<R: Rng>(rng: &mut R) -> Vec<f64> {
    // coarse grid so that equal rows, and hence zero strengths, occur
    let p = if rng.gen_bool(0.5) {
        rng.gen_range(0..=4) as f64 / 4.0
    } else {
        rng.gen::<f64>()
    };
    vec![p, 1.0 - p]
}

/// Binary variables, a random DAG inside each slice, random inter-slice
/// edges and random CPT rows.
pub fn random_dbn<R: Rng>(rng: &mut R, shape: DbnShape) -> Dbn {
    let n = rng.gen_range(1..=shape.max_vars);
    let slices = rng.gen_range(1..=shape.max_slices);
    let variables: Vec<Variable> = (0..n)
        .map(|i| Variable::new(format!("X{}", i + 1), &["0", "1"]))
        .collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut intra_edges = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            if rng.gen_bool(shape.intra_prob) {
                intra_edges.push((order[a], order[b]));
            }
        }
    }
    let mut inter_edges = Vec::new();
    for p in 0..n {
        for c in 0..n {
            if rng.gen_bool(shape.inter_prob) {
                inter_edges.push((p, c));
            }
        }
    }
    let mut dbn = Dbn {
        variables,
        delta_t: [0.5, 1.0, 2.0][rng.gen_range(0..3)],
        intra_edges,
        inter_edges,
        slices: Vec::new(),
    };
    for k in 0..slices {
        let cpts = (0..n)
            .map(|child| {
                let mut parents: Vec<ParentRef> = dbn
                    .intra_edges
                    .iter()
                    .filter(|e| e.1 == child)
                    .map(|e| ParentRef::current(e.0))
                    .collect();
                parents.sort();
                if k > 0 {
                    parents.extend(
                        dbn.inter_edges
                            .iter()
                            .filter(|e| e.1 == child)
                            .map(|e| ParentRef::previous(e.0)),
                    );
                }
                let rows = (0..1usize << parents.len()).map(|_| binary_row(rng)).collect();
                Cpt { child, parents, rows }
            })
            .collect();
        dbn.slices.push(Slice { k, cpts });
    }
    dbn
}

pub fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Partition {
    let blocks = rng.gen_range(1..=n.max(1));
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..blocks)).collect();
    Partition::from_labels(&labels)
}

fn coarsen<R: Rng>(rng: &mut R, p: Partition) -> Partition {
    let k = p.num_blocks();
    if k < 2 || !rng.gen_bool(0.3) {
        return p;
    }
    let a = rng.gen_range(0..k);
    let b = rng.gen_range(0..k);
    let labels: Vec<usize> = (0..p.ground_size())
        .map(|x| {
            let l = p.label(x);
            if l == b {
                a
            } else {
                l
            }
        })
        .collect();
    Partition::from_labels(&labels)
}

/// A valid formigram on at most `max_elems` elements with at most
/// `max_crit` critical times. Breakpoints sit on a grid of eighths.
pub fn random_formigram<R: Rng>(rng: &mut R, max_elems: usize, max_crit: usize) -> Formigram {
    let n = rng.gen_range(1..=max_elems);
    let m = rng.gen_range(0..=max_crit);
    let mut points = vec![0.0];
    for _ in 0..=m {
        let gap = rng.gen_range(1..=16) as f64 / 8.0;
        points.push(points.last().unwrap() + gap);
    }
    let between: Vec<Partition> = (0..=m).map(|_| random_partition(rng, n)).collect();
    let at: Vec<Partition> = (0..points.len())
        .map(|i| {
            let left = i.checked_sub(1).map(|j| &between[j]);
            let right = between.get(i);
            let join = finest_common_coarsening(left.into_iter().chain(right)).expect("same ground set");
            coarsen(rng, join)
        })
        .collect();
    let names = (0..n).map(|i| format!("x{i}")).collect();
    let pw = Piecewise::new(points, at, between).expect("increasing grid").normalize();
    Formigram::new(names, pw)
}

/// Bars with endpoints on a grid of quarters inside `[0, 10]`; point bars are closed.
pub fn random_barcode<R: Rng>(rng: &mut R, max_bars: usize) -> Barcode {
    let n = rng.gen_range(0..=max_bars);
    let bars = (0..n)
        .map(|_| {
            let b = rng.gen_range(0..=32) as f64 / 4.0;
            let len = rng.gen_range(0..=(40 - (b * 4.0) as i32).max(0)) as f64 / 4.0;
            let degenerate = len == 0.0;
            BarInterval {
                birth: b,
                death: b + len,
                birth_closed: degenerate || rng.gen_bool(0.5),
                death_closed: degenerate || rng.gen_bool(0.5),
            }
        })
        .collect();
    Barcode::new(bars)
}
