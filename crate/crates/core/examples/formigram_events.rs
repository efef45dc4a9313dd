//! Clusters over time and the merge/disband events between them.

use dbg_persist::prelude::*;

fn main() {
    for (name, text) in [
        ("worked example", include_str!("../fixtures/worked_example.json")),
        ("merge", include_str!("../fixtures/merge.json")),
    ] {
        let dbn = parse_dbn(text).expect("valid network");
        let table = strength_table(&dbn, DivergenceKind::TotalVariation).expect("strengths");
        let fg = formigram_of(&build_dbg(&table, 0.3, dbn.delta_t).expect("graph"));
        println!("== {name}");
        let pw = &fg.partitions;
        for (i, p) in pw.between().iter().enumerate() {
            let blocks = dbg_persist::report::partition_names(p, &fg.names);
            println!("({}, {}): {blocks:?}", pw.points()[i], pw.points()[i + 1]);
        }
        let named = |blocks: &[Vec<usize>]| -> Vec<Vec<&str>> {
            blocks.iter().map(|b| b.iter().map(|&v| fg.names[v].as_str()).collect()).collect()
        };
        for e in detect_events(&fg) {
            println!("{:?} at {}: {:?} -> {:?}", e.kind, e.time, named(&e.blocks_before), named(&e.blocks_after));
        }
    }
}
