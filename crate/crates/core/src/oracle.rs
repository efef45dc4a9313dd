//! Brute-force zigzag decomposition over GF(2).
//!
//! Vectors are bitsets in a `u64`. The sweep keeps, at each point, a basis
//! of the current space in which every vector generates the right end of
//! one interval summand of the module restricted to the points seen so far.

use thiserror::Error;

use crate::formigram::Formigram;
use crate::partition::Partition;
use crate::zigzag::{barcode_from_k_intervals, build_indexing_set, Barcode, IndexingSet, ZigzagError};

/// Largest ground set accepted by [`oracle_barcode`].
pub const MAX_ELEMENTS: usize = 12;
/// Largest number of K-points accepted by [`oracle_barcode`].
pub const MAX_POINTS: usize = 64;

#[derive(Debug, Error, PartialEq)]
pub enum OracleError {
    #[error("instance too large for the oracle: {elements} elements, {points} points")]
    TooLarge { elements: usize, points: usize },
    #[error("gap partition does not refine its neighbour at point {0}")]
    NotRefining(usize),
    #[error(transparent)]
    Zigzag(#[from] ZigzagError),
}

/// A linear map between consecutive spaces. `columns[j]` is the image of
/// basis vector `j` of the source.
#[derive(Debug, Clone, PartialEq)]
pub struct Arrow {
    /// `true` for `V_i -> V_{i+1}`, `false` for `V_i <- V_{i+1}`.
    pub forward: bool,
    pub columns: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ZigzagModule {
    pub dims: Vec<usize>,
    pub arrows: Vec<Arrow>,
}

fn block_map(fine: &Partition, coarse: &Partition) -> Option<Vec<u64>> {
    fine.block_map(coarse)
        .map(|m| m.into_iter().map(|c| 1u64 << c).collect())
}

impl ZigzagModule {
    /// The free module on the blocks of `spaces`, with `s -> c` arrows
    /// induced by block inclusion. Even positions are critical points.
    pub fn from_partitions(spaces: &[Partition]) -> Result<Self, OracleError> {
        let dims = spaces.iter().map(Partition::num_blocks).collect();
        let arrows = (0..spaces.len().saturating_sub(1))
            .map(|i| {
                let forward = i % 2 == 1;
                let (fine, coarse) = if forward {
                    (&spaces[i], &spaces[i + 1])
                } else {
                    (&spaces[i + 1], &spaces[i])
                };
                block_map(fine, coarse)
                    .map(|columns| Arrow { forward, columns })
                    .ok_or(OracleError::NotRefining(i))
            })
            .collect::<Result<_, _>>()?;
        Ok(ZigzagModule { dims, arrows })
    }

    /// Whether every column has exactly one nonzero entry.
    pub fn is_block_induced(&self) -> bool {
        self.arrows
            .iter()
            .all(|a| a.columns.iter().all(|c| c.count_ones() == 1))
    }
}

fn apply(columns: &[u64], v: u64) -> u64 {
    let mut out = 0;
    let mut bits = v;
    while bits != 0 {
        out ^= columns[bits.trailing_zeros() as usize];
        bits &= bits - 1;
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Born {
    Start,
    Forward,
    Backward,
}

#[derive(Debug, Clone, Copy)]
struct Live {
    birth: usize,
    kind: Born,
    v: u64,
}

/// Order in which earlier summands may always be added into later ones:
/// a summand born through a backward arrow admits maps from older ones,
/// and one born through a forward arrow admits maps into older ones.
fn sweep_key(l: &Live) -> (u8, i64) {
    match l.kind {
        Born::Backward => (0, -(l.birth as i64)),
        Born::Start => (1, 0),
        Born::Forward => (2, l.birth as i64),
    }
}

/// Reduces `x` against rows keyed by lowest set bit, xoring the paired
/// tags into `tag`.
fn reduce(rows: &[Option<(u64, u64)>], x: &mut u64, tag: &mut u64) {
    while *x != 0 {
        match rows[x.trailing_zeros() as usize] {
            Some((r, t)) => {
                *x ^= r;
                *tag ^= t;
            }
            None => break,
        }
    }
}

/// Interval summands `(birth, death)` as flat point indices.
pub fn decompose(module: &ZigzagModule) -> Vec<(usize, usize)> {
    let n = module.dims.len();
    let mut out = Vec::new();
    let mut live: Vec<Live> = (0..module.dims[0])
        .map(|b| Live {
            birth: 0,
            kind: Born::Start,
            v: 1 << b,
        })
        .collect();
    for (i, arrow) in module.arrows.iter().enumerate() {
        live.sort_by_key(sweep_key);
        let mut next = Vec::new();
        if arrow.forward {
            let mut rows = vec![None; module.dims[i + 1]];
            for l in live {
                let mut x = apply(&arrow.columns, l.v);
                reduce(&rows, &mut x, &mut 0);
                if x == 0 {
                    out.push((l.birth, i));
                } else {
                    rows[x.trailing_zeros() as usize] = Some((x, 0));
                    next.push(Live { v: x, ..l });
                }
            }
            for (p, row) in rows.iter().enumerate() {
                if row.is_none() {
                    next.push(Live {
                        birth: i + 1,
                        kind: Born::Forward,
                        v: 1 << p,
                    });
                }
            }
        } else {
            // rows: (vector in V_i, preimage in V_{i+1}); vectors of dying
            // summands enter with an empty preimage
            let mut rows = vec![None; module.dims[i]];
            let mut kernel = Vec::new();
            for (t, &col) in arrow.columns.iter().enumerate() {
                let (mut x, mut pre) = (col, 1u64 << t);
                reduce(&rows, &mut x, &mut pre);
                if x == 0 {
                    kernel.push(pre);
                } else {
                    rows[x.trailing_zeros() as usize] = Some((x, pre));
                }
            }
            for l in live {
                let (mut x, mut pre) = (l.v, 0);
                reduce(&rows, &mut x, &mut pre);
                if x == 0 {
                    next.push(Live { v: pre, ..l });
                } else {
                    out.push((l.birth, i));
                    rows[x.trailing_zeros() as usize] = Some((x, pre));
                }
            }
            next.extend(kernel.into_iter().map(|v| Live {
                birth: i + 1,
                kind: Born::Backward,
                v,
            }));
        }
        live = next;
    }
    out.extend(live.iter().map(|l| (l.birth, n - 1)));
    out.sort_unstable();
    out
}

/// Barcode of `fg` by explicit GF(2) reduction on the midpoint indexing set.
pub fn oracle_barcode(fg: &Formigram) -> Result<Barcode, OracleError> {
    oracle_barcode_with(fg, &build_indexing_set(fg))
}

pub fn oracle_barcode_with(fg: &Formigram, ks: &IndexingSet) -> Result<Barcode, OracleError> {
    let elements = fg.names.len();
    let points = ks.num_points();
    if elements > MAX_ELEMENTS || points > MAX_POINTS {
        return Err(OracleError::TooLarge { elements, points });
    }
    let spaces = ks.sample(fg)?;
    let module = ZigzagModule::from_partitions(&spaces)?;
    Ok(barcode_from_k_intervals(ks, &decompose(&module))?)
}
