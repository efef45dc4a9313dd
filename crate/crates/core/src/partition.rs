//! Partitions of a finite ground set `{0, .., n-1}`.

use petgraph::unionfind::UnionFind;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("ground set mismatch: {0} vs {1}")]
    GroundMismatch(usize, usize),
    #[error("blocks do not partition the ground set")]
    NotAPartition,
    #[error("no partitions given")]
    Empty,
}

/// A partition stored as canonical block labels: blocks are numbered in
/// order of their smallest element, so equal partitions compare equal.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition {
    labels: Vec<u32>,
}

impl Partition {
    pub fn from_labels(labels: &[usize]) -> Self {
        let mut map = std::collections::HashMap::new();
        let labels = labels
            .iter()
            .map(|l| {
                let next = map.len() as u32;
                *map.entry(*l).or_insert(next)
            })
            .collect();
        Partition { labels }
    }

    pub fn discrete(n: usize) -> Self {
        Partition {
            labels: (0..n as u32).collect(),
        }
    }

    pub fn indiscrete(n: usize) -> Self {
        Partition { labels: vec![0; n] }
    }

    pub fn from_blocks(n: usize, blocks: &[Vec<usize>]) -> Result<Self, PartitionError> {
        let mut labels = vec![usize::MAX; n];
        for (b, block) in blocks.iter().enumerate() {
            if block.is_empty() {
                return Err(PartitionError::NotAPartition);
            }
            for &x in block {
                if x >= n || labels[x] != usize::MAX {
                    return Err(PartitionError::NotAPartition);
                }
                labels[x] = b;
            }
        }
        if labels.contains(&usize::MAX) {
            return Err(PartitionError::NotAPartition);
        }
        Ok(Self::from_labels(&labels))
    }

    /// Size of the ground set.
    pub fn ground_size(&self) -> usize {
        self.labels.len()
    }

    pub fn num_blocks(&self) -> usize {
        self.labels.iter().max().map_or(0, |m| *m as usize + 1)
    }

    pub fn label(&self, x: usize) -> usize {
        self.labels[x] as usize
    }

    /// Blocks as sorted element lists, ordered by smallest element.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); self.num_blocks()];
        for (x, &l) in self.labels.iter().enumerate() {
            out[l as usize].push(x);
        }
        out
    }

    pub fn same_block(&self, x: usize, y: usize) -> bool {
        self.labels[x] == self.labels[y]
    }

    /// Whether every block of `self` lies inside a block of `coarser`.
    pub fn refines(&self, coarser: &Partition) -> bool {
        if self.ground_size() != coarser.ground_size() {
            return false;
        }
        let mut image = vec![u32::MAX; self.num_blocks()];
        for (x, &l) in self.labels.iter().enumerate() {
            let target = coarser.labels[x];
            let slot = &mut image[l as usize];
            if *slot == u32::MAX {
                *slot = target;
            } else if *slot != target {
                return false;
            }
        }
        true
    }

    /// Block of `coarser` containing each block of `self`; `None` unless
    /// `self` refines `coarser`.
    pub fn block_map(&self, coarser: &Partition) -> Option<Vec<usize>> {
        if !self.refines(coarser) {
            return None;
        }
        Some(
            self.blocks()
                .iter()
                .map(|b| coarser.label(b[0]))
                .collect(),
        )
    }

    pub fn join(&self, other: &Partition) -> Result<Partition, PartitionError> {
        finest_common_coarsening([self, other])
    }

    fn merge_into(&self, uf: &mut UnionFind<usize>) -> usize {
        let mut first = vec![usize::MAX; self.num_blocks()];
        let mut merged = 0;
        for (x, &l) in self.labels.iter().enumerate() {
            let f = &mut first[l as usize];
            if *f == usize::MAX {
                *f = x;
            } else if uf.union(*f, x) {
                merged += 1;
            }
        }
        merged
    }
}

fn from_union_find(uf: UnionFind<usize>) -> Partition {
    Partition::from_labels(&uf.into_labeling())
}

/// Connected components of the graph on `n` vertices with the given edges.
pub fn path_components<I>(n: usize, edges: I) -> Partition
where
    I: IntoIterator<Item = (usize, usize)>,
{
    let mut uf = UnionFind::new(n);
    for (a, b) in edges {
        uf.union(a, b);
    }
    from_union_find(uf)
}

/// Finest partition coarser than every input: the transitive closure of
/// the union of their block relations.
pub fn finest_common_coarsening<'a, I>(parts: I) -> Result<Partition, PartitionError>
where
    I: IntoIterator<Item = &'a Partition>,
{
    let mut iter = parts.into_iter();
    let first = iter.next().ok_or(PartitionError::Empty)?;
    let n = first.ground_size();
    let mut uf = UnionFind::new(n);
    first.merge_into(&mut uf);
    for p in iter {
        if p.ground_size() != n {
            return Err(PartitionError::GroundMismatch(n, p.ground_size()));
        }
        p.merge_into(&mut uf);
    }
    Ok(from_union_find(uf))
}

/// Incremental join of a sequence of partitions, tracking the block count.
pub(crate) struct JoinAccumulator {
    uf: UnionFind<usize>,
    blocks: usize,
}

impl JoinAccumulator {
    pub fn new(n: usize) -> Self {
        JoinAccumulator {
            uf: UnionFind::new(n),
            blocks: n,
        }
    }

    pub fn absorb(&mut self, p: &Partition) -> usize {
        self.blocks -= p.merge_into(&mut self.uf);
        self.blocks
    }
}
