//! Time-indexed edge strengths computed from CPTs.
//!
//! The strength of an intra-slice edge `j -> i` at slice `k` is the largest
//! upper diameter of the sub-table of `i`'s CPT obtained by fixing every
//! other parent of `i` (intra- and inter-slice) and letting `j` vary.

use thiserror::Error;

use crate::dbn::{Dbn, ParentRef};
use crate::divergence::{upper_diameter, Divergence, DivergenceError, DivergenceKind};

#[derive(Debug, Error, PartialEq)]
pub enum StrengthError {
    #[error("edge {0} -> {1} is not an intra-slice edge")]
    EdgeNotInStructure(usize, usize),
    #[error("slice {0} out of range (last slice is {1})")]
    SliceOutOfRange(usize, usize),
    #[error("no CPT for variable {child} in slice {slice}")]
    MissingCpt { slice: usize, child: usize },
    #[error("variable {parent} is not a parent of {child} in slice {slice}")]
    NotAParent { slice: usize, parent: usize, child: usize },
    #[error("CPT of variable {child} in slice {slice} has the wrong shape")]
    BadShape { slice: usize, child: usize },
    #[error(transparent)]
    Divergence(#[from] DivergenceError),
}

/// Strength of the intra-slice edge `(parent, child)` at slice `k`.
pub fn edge_strength<D: Divergence + ?Sized>(
    dbn: &Dbn,
    k: usize,
    (parent, child): (usize, usize),
    div: &D,
) -> Result<f64, StrengthError> {
    if !dbn.intra_edges.contains(&(parent, child)) {
        return Err(StrengthError::EdgeNotInStructure(parent, child));
    }
    if k >= dbn.slices.len() {
        return Err(StrengthError::SliceOutOfRange(k, dbn.last_slice()));
    }
    let cpt = dbn
        .cpt(k, child)
        .ok_or(StrengthError::MissingCpt { slice: k, child })?;
    let pos = cpt
        .parents
        .iter()
        .position(|p| *p == ParentRef::current(parent))
        .ok_or(StrengthError::NotAParent { slice: k, parent, child })?;
    let cards = cpt.parent_cards(&dbn.variables);
    let expected_rows: usize = cards.iter().product();
    if cpt.rows.len() != expected_rows {
        return Err(StrengthError::BadShape { slice: k, child });
    }

    let others: Vec<usize> = (0..cards.len()).filter(|&p| p != pos).collect();
    let configs: usize = others.iter().map(|&p| cards[p]).product();
    let mut states = vec![0usize; cards.len()];
    let mut best = 0.0f64;
    for mut code in 0..configs {
        for &p in others.iter().rev() {
            states[p] = code % cards[p];
            code /= cards[p];
        }
        let sub: Vec<&[f64]> = (0..cards[pos])
            .map(|s| {
                states[pos] = s;
                cpt.rows[cpt.row_index(&cards, &states)].as_slice()
            })
            .collect();
        best = best.max(upper_diameter(&sub, div)?);
    }
    Ok(best)
}

/// Strengths of every intra-slice edge at every slice.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeStrengthTable {
    pub names: Vec<String>,
    pub divergence: DivergenceKind,
    /// Intra-slice edges `(parent, child)`, ordered by parent then child name.
    pub edges: Vec<(usize, usize)>,
    /// `values[k][e]` is the strength of `edges[e]` at slice `k`.
    pub values: Vec<Vec<f64>>,
}

impl EdgeStrengthTable {
    pub fn num_slices(&self) -> usize {
        self.values.len()
    }

    pub fn get(&self, k: usize, edge: (usize, usize)) -> Option<f64> {
        let e = self.edges.iter().position(|&x| x == edge)?;
        self.values.get(k).map(|row| row[e])
    }

    /// `(slice, parent, child, strength)` in output order.
    pub fn rows(&self) -> impl Iterator<Item = (usize, &str, &str, f64)> + '_ {
        self.values.iter().enumerate().flat_map(move |(k, row)| {
            self.edges
                .iter()
                .zip(row)
                .map(move |(&(p, c), &v)| (k, self.names[p].as_str(), self.names[c].as_str(), v))
        })
    }
}

pub fn strength_table(dbn: &Dbn, kind: DivergenceKind) -> Result<EdgeStrengthTable, StrengthError> {
    let names = dbn.names();
    let mut edges = dbn.intra_edges.clone();
    edges.sort_by(|a, b| (&names[a.0], &names[a.1]).cmp(&(&names[b.0], &names[b.1])));
    edges.dedup();
    let values = (0..dbn.slices.len())
        .map(|k| {
            edges
                .iter()
                .map(|&e| edge_strength(dbn, k, e, &kind))
                .collect::<Result<Vec<_>, _>>()
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(EdgeStrengthTable {
        names,
        divergence: kind,
        edges,
        values,
    })
}
