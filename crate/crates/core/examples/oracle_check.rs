//! Cross-check the rank algorithm against the GF(2) reduction on random formigrams.

use dbg_persist::prelude::*;
use dbg_persist::random::{random_formigram, rng};

fn main() {
    let mut r = rng(7);
    let mut agree = 0;
    for _ in 0..200 {
        let fg = random_formigram(&mut r, 8, 8);
        let fast = zigzag_barcode(&fg);
        let slow = oracle_barcode(&fg).expect("within oracle limits");
        assert!(fast.approx_eq(&slow, 1e-12), "disagreement:\n{fast:?}\n{slow:?}");
        agree += 1;
    }
    println!("{agree} random formigrams agree");
}
