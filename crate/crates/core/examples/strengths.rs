//! Edge strengths of the worked example under every divergence.

use dbg_persist::prelude::*;

fn main() {
    let dbn = parse_dbn(include_str!("../fixtures/worked_example.json")).expect("valid network");
    for kind in DivergenceKind::ALL {
        let table = strength_table(&dbn, kind).expect("strengths");
        println!("# {}", kind.token());
        for (k, parent, child, value) in table.rows() {
            println!("{k}\t{parent} -> {child}\t{value:.6}");
        }
    }
}
