//! Dynamic Bayesian network model: variables, per-slice conditional
//! probability tables, structural validation and document ingestion.
//!
//! A network is stored as `K + 1` slice records. Slice 0 holds the initial
//! network, whose CPTs condition on intra-slice parents only; every later
//! slice holds the transition CPTs, which condition on intra-slice parents
//! and on inter-slice parents taken from the previous slice.
//!
//! CPT rows are indexed lexicographically over the parent-state tuple with
//! the first listed parent varying slowest.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use petgraph::graph::DiGraph;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Absolute tolerance on the row sums of a CPT.
pub const STOCHASTIC_TOL: f64 = 1e-9;

/// Suffix marking an inter-slice (previous slice) parent in a document.
pub const PREV_SUFFIX: &str = "@prev";

#[derive(Debug, Error)]
pub enum DbnError {
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error("invalid network: {}", .0.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; "))]
    Invalid(Vec<Violation>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Variable {
    pub name: String,
    pub states: Vec<String>,
}

impl Variable {
    pub fn new(name: impl Into<String>, states: &[&str]) -> Self {
        Variable {
            name: name.into(),
            states: states.iter().map(|s| s.to_string()).collect(),
        }
    }

    pub fn cardinality(&self) -> usize {
        self.states.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lag {
    /// Same slice as the child.
    Current,
    /// The slice immediately before the child's.
    Previous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ParentRef {
    pub var: usize,
    pub lag: Lag,
}

impl ParentRef {
    pub fn current(var: usize) -> Self {
        ParentRef { var, lag: Lag::Current }
    }

    pub fn previous(var: usize) -> Self {
        ParentRef { var, lag: Lag::Previous }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Cpt {
    pub child: usize,
    pub parents: Vec<ParentRef>,
    pub rows: Vec<Vec<f64>>,
}

impl Cpt {
    /// Row index of a parent configuration; `states[p]` is the state of
    /// `parents[p]`.
    pub fn row_index(&self, cards: &[usize], states: &[usize]) -> usize {
        debug_assert_eq!(cards.len(), states.len());
        states
            .iter()
            .zip(cards)
            .fold(0, |acc, (&s, &c)| acc * c + s)
    }

    pub fn parent_cards(&self, variables: &[Variable]) -> Vec<usize> {
        self.parents
            .iter()
            .map(|p| variables[p.var].cardinality())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Slice {
    pub k: usize,
    pub cpts: Vec<Cpt>,
}

impl Slice {
    pub fn cpt(&self, child: usize) -> Option<&Cpt> {
        self.cpts.iter().find(|c| c.child == child)
    }
}

/// A dynamic Bayesian network unrolled over `slices.len()` time slices.
///
/// Fields are public so that tools can assemble networks directly; use
/// [`validate_dbn`] (or build through [`parse_dbn`]) before relying on the
/// structural invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct Dbn {
    pub variables: Vec<Variable>,
    pub delta_t: f64,
    pub intra_edges: Vec<(usize, usize)>,
    pub inter_edges: Vec<(usize, usize)>,
    pub slices: Vec<Slice>,
}

impl Dbn {
    /// Index of the last slice.
    pub fn last_slice(&self) -> usize {
        self.slices.len().saturating_sub(1)
    }

    /// End of the finite time domain, `(K + 1) * delta_t`.
    pub fn horizon(&self) -> f64 {
        self.slices.len() as f64 * self.delta_t
    }

    pub fn names(&self) -> Vec<String> {
        self.variables.iter().map(|v| v.name.clone()).collect()
    }

    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.variables.iter().position(|v| v.name == name)
    }

    pub fn cpt(&self, slice: usize, child: usize) -> Option<&Cpt> {
        self.slices.get(slice).and_then(|s| s.cpt(child))
    }

    /// Parent set implied by the edge structure for a child at slice `k`.
    pub fn structural_parents(&self, k: usize, child: usize) -> BTreeSet<ParentRef> {
        let mut out: BTreeSet<ParentRef> = self
            .intra_edges
            .iter()
            .filter(|&&(_, c)| c == child)
            .map(|&(p, _)| ParentRef::current(p))
            .collect();
        if k > 0 {
            out.extend(
                self.inter_edges
                    .iter()
                    .filter(|&&(_, c)| c == child)
                    .map(|&(p, _)| ParentRef::previous(p)),
            );
        }
        out
    }

    fn parent_label(&self, p: &ParentRef) -> String {
        let name = self
            .variables
            .get(p.var)
            .map(|v| v.name.as_str())
            .unwrap_or("?");
        match p.lag {
            Lag::Current => name.to_string(),
            Lag::Previous => format!("{name}{PREV_SUFFIX}"),
        }
    }

    fn var_name(&self, i: usize) -> String {
        self.variables
            .get(i)
            .map(|v| v.name.clone())
            .unwrap_or_else(|| format!("#{i}"))
    }

    pub fn to_document(&self) -> DbnDocument {
        let edge = |&(p, c): &(usize, usize)| [self.var_name(p), self.var_name(c)];
        DbnDocument {
            delta_t: self.delta_t,
            variables: self.variables.clone(),
            intra_edges: self.intra_edges.iter().map(edge).collect(),
            inter_edges: self.inter_edges.iter().map(edge).collect(),
            slices: self
                .slices
                .iter()
                .map(|s| SliceDoc {
                    k: s.k,
                    cpts: s
                        .cpts
                        .iter()
                        .map(|c| {
                            (
                                self.var_name(c.child),
                                CptDoc {
                                    parents: c.parents.iter().map(|p| self.parent_label(p)).collect(),
                                    rows: c.rows.clone(),
                                },
                            )
                        })
                        .collect(),
                })
                .collect(),
        }
    }

    /// Resolve names in a document without checking structural invariants.
    pub fn from_document(doc: &DbnDocument) -> Result<Dbn, DbnError> {
        let index: HashMap<&str, usize> = doc
            .variables
            .iter()
            .enumerate()
            .map(|(i, v)| (v.name.as_str(), i))
            .collect();
        let lookup = |name: &str| {
            index
                .get(name)
                .copied()
                .ok_or_else(|| DbnError::Malformed(format!("unknown variable: {name}")))
        };
        let edges = |list: &[[String; 2]]| -> Result<Vec<(usize, usize)>, DbnError> {
            list.iter()
                .map(|[p, c]| Ok((lookup(p)?, lookup(c)?)))
                .collect()
        };
        let intra_edges = edges(&doc.intra_edges)?;
        let inter_edges = edges(&doc.inter_edges)?;

        let mut slices = Vec::with_capacity(doc.slices.len());
        for s in &doc.slices {
            let mut cpts = Vec::with_capacity(s.cpts.len());
            for (child, cd) in &s.cpts {
                let child = lookup(child)?;
                let parents = cd
                    .parents
                    .iter()
                    .map(|p| match p.strip_suffix(PREV_SUFFIX) {
                        Some(base) => lookup(base).map(ParentRef::previous),
                        None => lookup(p).map(ParentRef::current),
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                cpts.push(Cpt {
                    child,
                    parents,
                    rows: cd.rows.clone(),
                });
            }
            cpts.sort_by_key(|c| c.child);
            slices.push(Slice { k: s.k, cpts });
        }

        Ok(Dbn {
            variables: doc.variables.clone(),
            delta_t: doc.delta_t,
            intra_edges,
            inter_edges,
            slices,
        })
    }
}

/// On-disk form of a [`Dbn`]. Inter-slice parents are written as
/// `"<name>@prev"` inside CPT parent lists.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DbnDocument {
    pub delta_t: f64,
    pub variables: Vec<Variable>,
    #[serde(default)]
    pub intra_edges: Vec<[String; 2]>,
    #[serde(default)]
    pub inter_edges: Vec<[String; 2]>,
    pub slices: Vec<SliceDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SliceDoc {
    pub k: usize,
    pub cpts: BTreeMap<String, CptDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CptDoc {
    #[serde(default)]
    pub parents: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

/// Parse a document into a [`Dbn`] without validating it.
pub fn parse_dbn_unchecked(text: &str) -> Result<Dbn, DbnError> {
    let doc: DbnDocument =
        serde_json::from_str(text).map_err(|e| DbnError::Malformed(e.to_string()))?;
    Dbn::from_document(&doc)
}

/// Parse and validate a network document.
pub fn parse_dbn(text: &str) -> Result<Dbn, DbnError> {
    let dbn = parse_dbn_unchecked(text)?;
    let violations = validate_dbn(&dbn);
    if violations.is_empty() {
        Ok(dbn)
    } else {
        Err(DbnError::Invalid(violations))
    }
}

pub fn serialize_dbn(dbn: &Dbn) -> String {
    serde_json::to_string_pretty(&dbn.to_document()).expect("document serializes")
}

#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NonPositiveDeltaT { value: f64 },
    NoSlices,
    DuplicateVariable { name: String },
    NoStates { variable: String },
    DuplicateState { variable: String, state: String },
    EdgeOutOfRange { kind: &'static str, parent: usize, child: usize },
    DuplicateEdge { kind: &'static str, parent: String, child: String },
    CyclicIntraStructure { members: Vec<String> },
    SliceIndexMismatch { position: usize, k: usize },
    MissingCpt { slice: usize, child: String },
    DuplicateCpt { slice: usize, child: String },
    ParentMismatch { slice: usize, child: String, expected: Vec<String>, got: Vec<String> },
    RowCountMismatch { slice: usize, child: String, expected: usize, got: usize },
    RowWidthMismatch { slice: usize, child: String, row: usize, expected: usize, got: usize },
    NonStochasticRow { slice: usize, child: String, row: usize, sum: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use Violation::*;
        match self {
            NonPositiveDeltaT { value } => write!(f, "delta_t must be positive, got {value}"),
            NoSlices => write!(f, "network has no slices"),
            DuplicateVariable { name } => write!(f, "duplicate variable name: {name}"),
            NoStates { variable } => write!(f, "variable has no states: {variable}"),
            DuplicateState { variable, state } => {
                write!(f, "duplicate state label: {state} (variable {variable})")
            }
            EdgeOutOfRange { kind, parent, child } => {
                write!(f, "{kind} edge references unknown variable: {parent} -> {child}")
            }
            DuplicateEdge { kind, parent, child } => {
                write!(f, "duplicate {kind} edge: {parent} -> {child}")
            }
            CyclicIntraStructure { members } => {
                write!(f, "cyclic intra-slice structure: {}", members.join(", "))
            }
            SliceIndexMismatch { position, k } => {
                write!(f, "slice index mismatch: expected k={position}, got k={k}")
            }
            MissingCpt { slice, child } => write!(f, "missing CPT (slice {slice}, child {child})"),
            DuplicateCpt { slice, child } => write!(f, "duplicate CPT (slice {slice}, child {child})"),
            ParentMismatch { slice, child, expected, got } => write!(
                f,
                "parent/CPT mismatch: expected [{}], got [{}] (slice {slice}, child {child})",
                expected.join(", "),
                got.join(", ")
            ),
            RowCountMismatch { slice, child, expected, got } => write!(
                f,
                "row count mismatch: expected {expected}, got {got} (slice {slice}, child {child})"
            ),
            RowWidthMismatch { slice, child, row, expected, got } => write!(
                f,
                "row width mismatch: expected {expected}, got {got} (slice {slice}, child {child}, row {row})"
            ),
            NonStochasticRow { slice, child, row, sum } => write!(
                f,
                "non-stochastic row: sum {sum} (slice {slice}, child {child}, row {row})"
            ),
        }
    }
}

/// Check every structural invariant; an empty result means the network is
/// well formed.
pub fn validate_dbn(dbn: &Dbn) -> Vec<Violation> {
    let mut out = Vec::new();
    let n = dbn.variables.len();

    if !(dbn.delta_t > 0.0 && dbn.delta_t.is_finite()) {
        out.push(Violation::NonPositiveDeltaT { value: dbn.delta_t });
    }
    if dbn.slices.is_empty() {
        out.push(Violation::NoSlices);
    }

    let mut seen = BTreeSet::new();
    for v in &dbn.variables {
        if !seen.insert(v.name.as_str()) {
            out.push(Violation::DuplicateVariable { name: v.name.clone() });
        }
        if v.states.is_empty() {
            out.push(Violation::NoStates { variable: v.name.clone() });
        }
        let mut states = BTreeSet::new();
        for s in &v.states {
            if !states.insert(s.as_str()) {
                out.push(Violation::DuplicateState {
                    variable: v.name.clone(),
                    state: s.clone(),
                });
            }
        }
    }

    let mut edges_ok = true;
    for (kind, edges) in [("intra", &dbn.intra_edges), ("inter", &dbn.inter_edges)] {
        let mut seen = BTreeSet::new();
        for &(p, c) in edges.iter() {
            if p >= n || c >= n {
                edges_ok = false;
                out.push(Violation::EdgeOutOfRange { kind, parent: p, child: c });
                continue;
            }
            if !seen.insert((p, c)) {
                out.push(Violation::DuplicateEdge {
                    kind,
                    parent: dbn.var_name(p),
                    child: dbn.var_name(c),
                });
            }
        }
    }
    if !edges_ok {
        return out;
    }

    let mut graph = DiGraph::<usize, ()>::new();
    let nodes: Vec<_> = (0..n).map(|i| graph.add_node(i)).collect();
    for &(p, c) in &dbn.intra_edges {
        graph.update_edge(nodes[p], nodes[c], ());
    }
    for scc in petgraph::algo::tarjan_scc(&graph) {
        let cyclic = scc.len() > 1 || graph.contains_edge(scc[0], scc[0]);
        if cyclic {
            let mut members: Vec<String> = scc.iter().map(|&ix| dbn.var_name(graph[ix])).collect();
            members.sort();
            out.push(Violation::CyclicIntraStructure { members });
        }
    }

    for (position, slice) in dbn.slices.iter().enumerate() {
        if slice.k != position {
            out.push(Violation::SliceIndexMismatch { position, k: slice.k });
        }
        for child in 0..n {
            let found: Vec<&Cpt> = slice.cpts.iter().filter(|c| c.child == child).collect();
            let child_name = dbn.var_name(child);
            match found.as_slice() {
                [] => out.push(Violation::MissingCpt {
                    slice: position,
                    child: child_name,
                }),
                [cpt] => check_cpt(dbn, position, cpt, &mut out),
                _ => out.push(Violation::DuplicateCpt {
                    slice: position,
                    child: child_name,
                }),
            }
        }
    }
    out
}

fn check_cpt(dbn: &Dbn, slice: usize, cpt: &Cpt, out: &mut Vec<Violation>) {
    let child = dbn.var_name(cpt.child);
    let expected = dbn.structural_parents(slice, cpt.child);
    let got: BTreeSet<ParentRef> = cpt.parents.iter().copied().collect();
    if got != expected || got.len() != cpt.parents.len() {
        out.push(Violation::ParentMismatch {
            slice,
            child,
            expected: expected.iter().map(|p| dbn.parent_label(p)).collect(),
            got: cpt.parents.iter().map(|p| dbn.parent_label(p)).collect(),
        });
        return;
    }

    let rows_expected: usize = cpt.parent_cards(&dbn.variables).iter().product();
    if cpt.rows.len() != rows_expected {
        out.push(Violation::RowCountMismatch {
            slice,
            child: child.clone(),
            expected: rows_expected,
            got: cpt.rows.len(),
        });
    }
    let width = dbn.variables[cpt.child].cardinality();
    for (r, row) in cpt.rows.iter().enumerate() {
        if row.len() != width {
            out.push(Violation::RowWidthMismatch {
                slice,
                child: child.clone(),
                row: r,
                expected: width,
                got: row.len(),
            });
            continue;
        }
        let sum: f64 = row.iter().sum();
        let entries_ok = row.iter().all(|&x| x.is_finite() && x >= 0.0);
        if !entries_ok || (sum - 1.0).abs() > STOCHASTIC_TOL {
            out.push(Violation::NonStochasticRow {
                slice,
                child: child.clone(),
                row: r,
                sum,
            });
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "delta_t": 1.0,
        "variables": [
            {"name": "A", "states": ["a0", "a1"]},
            {"name": "B", "states": ["b0", "b1"]}
        ],
        "intra_edges": [["A", "B"]],
        "inter_edges": [],
        "slices": [
            {"k": 0, "cpts": {
                "A": {"parents": [], "rows": [[0.5, 0.5]]},
                "B": {"parents": ["A"], "rows": [[0.9, 0.1], [0.2, 0.8]]}
            }},
            {"k": 1, "cpts": {
                "A": {"parents": [], "rows": [[0.3, 0.7]]},
                "B": {"parents": ["A"], "rows": [[0.6, 0.4], [0.5, 0.5]]}
            }}
        ]
    }"#;

    #[test]
    fn parses_minimal_network() {
        let dbn = parse_dbn(MINIMAL).unwrap();
        assert_eq!(dbn.variables.len(), 2);
        assert_eq!(dbn.slices.len(), 2);
        assert_eq!(dbn.intra_edges, vec![(0, 1)]);
        assert_eq!(dbn.horizon(), 2.0);
        assert!(validate_dbn(&dbn).is_empty());
    }

    #[test]
    fn rejects_non_stochastic_row() {
        let text = MINIMAL.replace("[0.6, 0.4]", "[0.58, 0.4]");
        let err = parse_dbn(&text).unwrap_err();
        let DbnError::Invalid(vs) = err else { panic!("expected invalid") };
        assert!(vs.iter().any(|v| matches!(
            v,
            Violation::NonStochasticRow { slice: 1, child, row: 0, .. } if child == "B"
        )));
    }

    #[test]
    fn tolerates_rounding_within_tolerance() {
        let text = MINIMAL.replace("[0.6, 0.4]", "[0.6000000001, 0.4]");
        assert!(parse_dbn(&text).is_ok());
        let text = MINIMAL.replace("[0.6, 0.4]", "[0.600000002, 0.4]");
        assert!(parse_dbn(&text).is_err());
    }

    #[test]
    fn rejects_cycle() {
        let text = MINIMAL.replace(r#"[["A", "B"]]"#, r#"[["A", "B"], ["B", "A"]]"#);
        let err = parse_dbn(&text).unwrap_err();
        let DbnError::Invalid(vs) = err else { panic!() };
        assert!(vs
            .iter()
            .any(|v| v.to_string().starts_with("cyclic intra-slice structure")));
    }

    #[test]
    fn reports_row_count_mismatch() {
        let mut dbn = parse_dbn(MINIMAL).unwrap();
        dbn.slices[0].cpts[1].rows.push(vec![0.5, 0.5]);
        let vs = validate_dbn(&dbn);
        assert_eq!(vs.len(), 1);
        assert!(vs[0].to_string().starts_with("row count mismatch: expected 2, got 3"));
    }

    #[test]
    fn reports_duplicate_variable() {
        let mut dbn = parse_dbn(MINIMAL).unwrap();
        dbn.variables[1].name = "A".into();
        let vs = validate_dbn(&dbn);
        assert!(vs.iter().any(|v| v.to_string() == "duplicate variable name: A"));
    }

    #[test]
    fn reports_parent_mismatch() {
        let text = MINIMAL.replacen(r#""parents": ["A"], "rows": [[0.6"#, r#""parents": [], "rows": [[0.6"#, 1);
        let dbn = parse_dbn_unchecked(&text).unwrap();
        let vs = validate_dbn(&dbn);
        assert!(matches!(vs.as_slice(), [Violation::ParentMismatch { slice: 1, .. }]));
    }

    #[test]
    fn unknown_names_are_malformed() {
        let text = MINIMAL.replace(r#"[["A", "B"]]"#, r#"[["A", "Z"]]"#);
        assert!(matches!(parse_dbn(&text), Err(DbnError::Malformed(_))));
        assert!(matches!(parse_dbn("{"), Err(DbnError::Malformed(_))));
    }

    #[test]
    fn single_state_variables_are_allowed() {
        let text = MINIMAL
            .replace(r#"["a0", "a1"]"#, r#"["only"]"#)
            .replace("[[0.5, 0.5]]", "[[1.0]]")
            .replace("[[0.3, 0.7]]", "[[1.0]]")
            .replace("[[0.9, 0.1], [0.2, 0.8]]", "[[0.9, 0.1]]")
            .replace("[[0.6, 0.4], [0.5, 0.5]]", "[[0.6, 0.4]]");
        assert!(parse_dbn(&text).is_ok());
    }

    #[test]
    fn row_index_first_parent_slowest() {
        let cpt = Cpt {
            child: 0,
            parents: vec![ParentRef::current(1), ParentRef::current(2)],
            rows: vec![],
        };
        assert_eq!(cpt.row_index(&[2, 3], &[1, 2]), 5);
        assert_eq!(cpt.row_index(&[2, 3], &[0, 2]), 2);
        assert_eq!(cpt.row_index(&[2, 3], &[1, 0]), 3);
    }

    #[test]
    fn inter_slice_parents_use_prev_suffix() {
        let text = MINIMAL
            .replace(r#""inter_edges": []"#, r#""inter_edges": [["B", "B"]]"#)
            .replace(
                r#""B": {"parents": ["A"], "rows": [[0.6, 0.4], [0.5, 0.5]]}"#,
                r#""B": {"parents": ["A", "B@prev"], "rows": [[0.6, 0.4], [0.5, 0.5], [0.1, 0.9], [0.5, 0.5]]}"#,
            );
        let dbn = parse_dbn(&text).unwrap();
        let cpt = dbn.cpt(1, 1).unwrap();
        assert_eq!(cpt.parents, vec![ParentRef::current(0), ParentRef::previous(1)]);
        let again = parse_dbn(&serialize_dbn(&dbn)).unwrap();
        assert_eq!(again, dbn);
    }
}
