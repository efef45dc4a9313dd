//! Zigzag barcodes of the worked example before and after smoothing.

use dbg_persist::prelude::*;

fn main() {
    let dbn = parse_dbn(include_str!("../fixtures/worked_example.json")).expect("valid network");
    let table = strength_table(&dbn, DivergenceKind::TotalVariation).expect("strengths");
    let fg = formigram_of(&build_dbg(&table, 0.3, dbn.delta_t).expect("graph"));
    for eps in [0.0, 0.25, 0.5, 1.0] {
        let bc = zigzag_barcode(&smooth_formigram(&fg, eps).expect("smoothing"));
        let bars: Vec<String> = bc.bars().iter().map(|b| b.to_string()).collect();
        println!("eps {eps}: {}", bars.join(" "));
    }
}
