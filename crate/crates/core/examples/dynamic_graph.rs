//! Threshold a network into a dynamic graph and look at a few snapshots.

use dbg_persist::prelude::*;

fn main() {
    let dbn = parse_dbn(include_str!("../fixtures/worked_example.json")).expect("valid network");
    let table = strength_table(&dbn, DivergenceKind::TotalVariation).expect("strengths");
    let g = build_dbg(&table, 0.3, dbn.delta_t).expect("graph");
    assert!(check_dg_axioms(&g).is_empty());
    println!("critical times {:?}", g.critical_times);
    for t in [0.5, 1.0, 1.5] {
        let edges: Vec<String> = g
            .snapshot(t)
            .expect("in domain")
            .edges()
            .map(|(a, b)| format!("{}-{}", g.names[a], g.names[b]))
            .collect();
        println!("t = {t}: {}", edges.join(" "));
    }
    let smooth = smooth_dbg(&g, 0.5).expect("smoothing");
    println!("smoothed snapshot at 1.25 has {} edges", smooth.snapshot(1.25).expect("in domain").edges().count());
}
