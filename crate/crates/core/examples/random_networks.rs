//! Generate a random network, print its document and a summary of its barcode.

use dbg_persist::prelude::*;
use dbg_persist::random::{random_dbn, rng, DbnShape};

fn main() {
    let seed = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(1);
    let dbn = random_dbn(&mut rng(seed), DbnShape::default());
    assert!(validate_dbn(&dbn).is_empty());
    println!("{}", serialize_dbn(&dbn));
    let table = strength_table(&dbn, DivergenceKind::TotalVariation).expect("strengths");
    let bc = zigzag_barcode(&formigram_of(&build_dbg(&table, 0.3, dbn.delta_t).expect("graph")));
    eprintln!("seed {seed}: {} variables, {} slices, {} bars", dbn.variables.len(), dbn.slices.len(), bc.len());
}
