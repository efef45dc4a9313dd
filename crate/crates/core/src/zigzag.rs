//! H0 zigzag barcodes of formigrams.
//!
//! The formigram is sampled on an indexing set `c_0 < s_0 < c_1 < ... < c_m`
//! giving the zigzag `V(c_0) <- V(s_0) -> V(c_1) <- ... -> V(c_m)` of
//! block-spanned spaces. Interval multiplicities come from the ranks of
//! the finest common coarsenings over every run `x..=y` of consecutive
//! points: that rank counts the summands whose support contains `[x, y]`,
//! so inclusion-exclusion isolates the summands supported exactly there.

use std::cmp::Ordering;
use std::fmt;

use thiserror::Error;

use crate::formigram::Formigram;
use crate::partition::{JoinAccumulator, Partition};
use crate::report::fmt_num;

#[derive(Debug, Error, PartialEq)]
pub enum ZigzagError {
    #[error("malformed K-interval: {0}")]
    MalformedInterval(String),
    #[error("invalid indexing set: {0}")]
    BadIndexingSet(String),
}

/// Critical values `c_i` and one subdivision point `s_i` in each gap.
#[derive(Debug, Clone, PartialEq)]
pub struct IndexingSet {
    pub criticals: Vec<f64>,
    pub subdivisions: Vec<f64>,
}

impl IndexingSet {
    /// Subdivision points at fraction `f` of each gap.
    pub fn with_fraction(fg: &Formigram, f: f64) -> Self {
        let criticals = fg.partitions.points().to_vec();
        let subdivisions = criticals
            .windows(2)
            .map(|w| w[0] + f * (w[1] - w[0]))
            .collect();
        IndexingSet {
            criticals,
            subdivisions,
        }
    }

    pub fn num_points(&self) -> usize {
        self.criticals.len() + self.subdivisions.len()
    }

    /// Real value of the K-point with flat index `p` (`c_i = 2i`, `s_i = 2i+1`).
    pub fn value(&self, p: usize) -> f64 {
        if p % 2 == 0 {
            self.criticals[p / 2]
        } else {
            self.subdivisions[p / 2]
        }
    }

    fn validate(&self, fg: &Formigram) -> Result<(), ZigzagError> {
        let bad = |m: &str| Err(ZigzagError::BadIndexingSet(m.to_string()));
        if self.criticals.len() < 2 || self.subdivisions.len() + 1 != self.criticals.len() {
            return bad("need at least two criticals and one subdivision per gap");
        }
        let strictly = (0..self.num_points() - 1).all(|p| self.value(p) < self.value(p + 1));
        if !strictly {
            return bad("points are not strictly interleaved");
        }
        let tol = fg.partitions.tolerance();
        let covered = fg
            .partitions
            .points()
            .iter()
            .all(|t| self.criticals.iter().any(|c| (c - t).abs() <= tol));
        if !covered {
            return bad("criticals miss a breakpoint of the formigram");
        }
        Ok(())
    }

    /// Partitions of `fg` at every K-point in flat order.
    pub fn sample(&self, fg: &Formigram) -> Result<Vec<Partition>, ZigzagError> {
        self.validate(fg)?;
        (0..self.num_points())
            .map(|p| {
                fg.partition_at(self.value(p))
                    .cloned()
                    .map_err(|e| ZigzagError::BadIndexingSet(e.to_string()))
            })
            .collect()
    }
}

/// `{0} ∪ crit ∪ {T}` with midpoint subdivisions.
pub fn build_indexing_set(fg: &Formigram) -> IndexingSet {
    IndexingSet::with_fraction(fg, 0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum KPoint {
    C(usize),
    S(usize),
}

impl KPoint {
    pub fn from_flat(p: usize) -> Self {
        if p % 2 == 0 {
            KPoint::C(p / 2)
        } else {
            KPoint::S(p / 2)
        }
    }

    pub fn flat(self) -> usize {
        match self {
            KPoint::C(i) => 2 * i,
            KPoint::S(i) => 2 * i + 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct KInterval {
    pub left: KPoint,
    pub right: KPoint,
}

/// Maps a K-interval to a real interval: `c` endpoints stay closed at their
/// own value, a left `s_i` opens at `c_i` and a right `s_j` opens at `c_{j+1}`.
pub fn psi_k(ks: &IndexingSet, iv: KInterval) -> Result<BarInterval, ZigzagError> {
    let malformed = || Err(ZigzagError::MalformedInterval(format!("{iv:?}")));
    let m = ks.criticals.len();
    let in_range = |p: KPoint| match p {
        KPoint::C(i) => i < m,
        KPoint::S(i) => i + 1 < m,
    };
    if !in_range(iv.left) || !in_range(iv.right) || iv.left.flat() > iv.right.flat() {
        return malformed();
    }
    let (birth, birth_closed) = match iv.left {
        KPoint::C(i) => (ks.criticals[i], true),
        KPoint::S(i) => (ks.criticals[i], false),
    };
    let (death, death_closed) = match iv.right {
        KPoint::C(j) => (ks.criticals[j], true),
        KPoint::S(j) => (ks.criticals[j + 1], false),
    };
    Ok(BarInterval {
        birth,
        death,
        birth_closed,
        death_closed,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarInterval {
    pub birth: f64,
    pub death: f64,
    pub birth_closed: bool,
    pub death_closed: bool,
}

impl BarInterval {
    pub fn closed(birth: f64, death: f64) -> Self {
        BarInterval {
            birth,
            death,
            birth_closed: true,
            death_closed: true,
        }
    }

    pub fn contains(&self, t: f64) -> bool {
        let after = if self.birth_closed { t >= self.birth } else { t > self.birth };
        let before = if self.death_closed { t <= self.death } else { t < self.death };
        after && before
    }

    pub fn length(&self) -> f64 {
        self.death - self.birth
    }

    fn canonical_cmp(&self, other: &Self) -> Ordering {
        self.birth
            .total_cmp(&other.birth)
            .then(self.death.total_cmp(&other.death))
            .then(other.birth_closed.cmp(&self.birth_closed))
            .then(self.death_closed.cmp(&other.death_closed))
    }
}

impl fmt::Display for BarInterval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}{}, {}{}",
            if self.birth_closed { '[' } else { '(' },
            fmt_num(self.birth),
            fmt_num(self.death),
            if self.death_closed { ']' } else { ')' }
        )
    }
}

/// A multiset of bars kept in canonical order.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Barcode {
    bars: Vec<BarInterval>,
}

impl Barcode {
    pub fn new(mut bars: Vec<BarInterval>) -> Self {
        bars.sort_by(BarInterval::canonical_cmp);
        Barcode { bars }
    }

    pub fn bars(&self) -> &[BarInterval] {
        &self.bars
    }

    pub fn len(&self) -> usize {
        self.bars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bars.is_empty()
    }

    /// Number of bars containing `t`.
    pub fn alive_at(&self, t: f64) -> usize {
        self.bars.iter().filter(|b| b.contains(t)).count()
    }

    /// Same multiset with endpoints within `tol` and identical flags.
    pub fn approx_eq(&self, other: &Barcode, tol: f64) -> bool {
        self.len() == other.len()
            && self.bars.iter().zip(&other.bars).all(|(a, b)| {
                (a.birth - b.birth).abs() <= tol
                    && (a.death - b.death).abs() <= tol
                    && a.birth_closed == b.birth_closed
                    && a.death_closed == b.death_closed
            })
    }
}

/// K-intervals `(x, y)` in flat indices, with multiplicity, of the zigzag
/// whose spaces are spanned by the blocks of `spaces`.
pub fn k_intervals(spaces: &[Partition]) -> Vec<(usize, usize)> {
    let n = spaces.len();
    let mut rk = vec![vec![0i64; n]; n];
    for x in 0..n {
        let mut acc = JoinAccumulator::new(spaces[x].ground_size());
        for y in x..n {
            rk[x][y] = acc.absorb(&spaces[y]) as i64;
        }
    }
    let r = |x: isize, y: usize| -> i64 {
        if x < 0 || y >= n {
            0
        } else {
            rk[x as usize][y]
        }
    };
    let mut out = Vec::new();
    for x in 0..n {
        for y in x..n {
            let xi = x as isize;
            let m = r(xi, y) - r(xi - 1, y) - r(xi, y + 1) + r(xi - 1, y + 1);
            debug_assert!(m >= 0, "negative multiplicity at [{x}, {y}]");
            for _ in 0..m.max(0) {
                out.push((x, y));
            }
        }
    }
    out
}

pub fn barcode_from_k_intervals(
    ks: &IndexingSet,
    intervals: &[(usize, usize)],
) -> Result<Barcode, ZigzagError> {
    let bars = intervals
        .iter()
        .map(|&(x, y)| {
            psi_k(
                ks,
                KInterval {
                    left: KPoint::from_flat(x),
                    right: KPoint::from_flat(y),
                },
            )
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Barcode::new(bars))
}

/// Barcode of `fg` sampled on a caller-chosen indexing set.
pub fn zigzag_barcode_with(fg: &Formigram, ks: &IndexingSet) -> Result<Barcode, ZigzagError> {
    let spaces = ks.sample(fg)?;
    barcode_from_k_intervals(ks, &k_intervals(&spaces))
}

pub fn zigzag_barcode(fg: &Formigram) -> Barcode {
    zigzag_barcode_with(fg, &build_indexing_set(fg)).expect("midpoint indexing set is valid")
}
