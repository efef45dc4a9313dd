//! Bottleneck distance and optimal matching between two networks.

use dbg_persist::metrics::optimal_matching;
use dbg_persist::prelude::*;

fn barcode(text: &str) -> Barcode {
    let dbn = parse_dbn(text).expect("valid network");
    let table = strength_table(&dbn, DivergenceKind::TotalVariation).expect("strengths");
    zigzag_barcode(&formigram_of(&build_dbg(&table, 0.3, dbn.delta_t).expect("graph")))
}

fn main() {
    let a = barcode(include_str!("../fixtures/shift_a.json"));
    let b = barcode(include_str!("../fixtures/shift_b.json"));
    let m = optimal_matching(&a, &b);
    for &(i, j, c) in &m.pairs {
        println!("{} ~ {} cost {c}", a.bars()[i], b.bars()[j]);
    }
    println!("bottleneck {}", bottleneck_distance(&a, &b));
    println!("interleaving lower bound {}", interleaving_lower_bound(&a, &b));
}
