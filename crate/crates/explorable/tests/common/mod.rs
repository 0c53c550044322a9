#![allow(dead_code)]

use explorable::bench::generate::{gen_random, Corruption, GeneratorConfig};
use explorable::model::Instance;

pub fn corruption(level: f64) -> Corruption {
    if level <= 0.0 {
        Corruption::None
    } else {
        Corruption::Flip(level)
    }
}

/// Orientation instance with 4..=10 vertices and 1..=6 hyperedges.
pub fn orientation(seed: u64, c: Corruption) -> Instance {
    let n = 4 + (seed % 7) as usize;
    let edges = 1 + (seed / 7 % 6) as usize;
    let mut cfg = GeneratorConfig::orientation(n, edges, c, seed);
    cfg.max_edge_size = 2 + (seed / 3 % 3) as usize;
    gen_random(&cfg).expect("valid config")
}

/// Sorting instance with 3..=11 vertices.
pub fn sorting(seed: u64, c: Corruption) -> Instance {
    let n = 3 + (seed % 9) as usize;
    gen_random(&GeneratorConfig::sorting(n, c, seed)).expect("valid config")
}

/// Corruption models cycled by seed: none, a quarter, all, adversarial.
pub fn mixed(seed: u64) -> Corruption {
    match seed % 4 {
        0 => Corruption::None,
        1 => Corruption::Flip(0.25),
        2 => Corruption::Flip(1.0),
        _ => Corruption::Adversarial,
    }
}
