//! Distance between a barcode and its smoothed version, against the radius.

use dbg_persist::prelude::*;

fn main() {
    let dbn = parse_dbn(include_str!("../fixtures/worked_example.json")).expect("valid network");
    let table = strength_table(&dbn, DivergenceKind::TotalVariation).expect("strengths");
    let g = build_dbg(&table, 0.3, dbn.delta_t).expect("graph");
    for eps in [0.0, 0.1, 0.5, 1.0, 2.0] {
        let r = stability_check(&g, eps).expect("check");
        println!("eps {eps}: d_B = {:.6} <= {:.6} {}", r.lhs, r.bound, if r.pass { "ok" } else { "VIOLATED" });
    }
}
