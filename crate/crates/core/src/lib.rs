//! Clustering persistence for dynamic Bayesian networks.
//!
//! A [`Dbn`](dbn::Dbn) is turned into a dynamic graph by thresholding
//! per-slice edge strengths, the graph's path components over time form a
//! [`Formigram`](formigram::Formigram), and the formigram's H0 zigzag
//! barcode is compared across networks with the bottleneck distance.
//!
//! ```
//! use dbg_persist::prelude::*;
//!
//! let doc = std::fs::read_to_string(concat!(
//!     env!("CARGO_MANIFEST_DIR"),
//!     "/fixtures/worked_example.json"
//! ))
//! .unwrap();
//! let dbn = parse_dbn(&doc).unwrap();
//! let table = strength_table(&dbn, DivergenceKind::TotalVariation).unwrap();
//! let dbg = build_dbg(&table, 0.3, dbn.delta_t).unwrap();
//! let bars = zigzag_barcode(&formigram_of(&dbg));
//! assert_eq!(bars.len(), 3);
//! ```

pub mod cli;
pub mod dbn;
pub mod divergence;
pub mod formigram;
pub mod graph;
pub mod metrics;
pub mod oracle;
pub mod partition;
pub mod piecewise;
pub mod random;
pub mod report;
pub mod strength;
pub mod zigzag;

pub mod prelude {
    pub use crate::dbn::{parse_dbn, serialize_dbn, validate_dbn, Dbn};
    pub use crate::divergence::{Divergence, DivergenceKind};
    pub use crate::formigram::{detect_events, formigram_of, smooth_formigram, Event, Formigram};
    pub use crate::graph::{build_dbg, check_dg_axioms, smooth_dbg, DynamicBayesianGraph, EdgeSet};
    pub use crate::metrics::{bottleneck_distance, interleaving_lower_bound, stability_check};
    pub use crate::oracle::oracle_barcode;
    pub use crate::partition::{finest_common_coarsening, path_components, Partition};
    pub use crate::strength::{edge_strength, strength_table, EdgeStrengthTable};
    pub use crate::zigzag::{zigzag_barcode, BarInterval, Barcode};
}
