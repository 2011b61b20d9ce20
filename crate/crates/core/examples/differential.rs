//! Cross-checks the model checker against the brute-force oracle on random
//! small posets and formulas, then shows that a corrupted rule is caught.

use std::time::Instant;

use pomsets::logic::{Fault, Relation};
use pomsets::testkit::{differential_relation, DifferentialOptions, GenConfig};

fn main() {
    let cases: usize = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(200);
    let cfg = GenConfig {
        seed: 2024,
        ..GenConfig::default()
    };
    for rel in Relation::ALL {
        let start = Instant::now();
        let s = differential_relation(&cfg, rel, cases, DifferentialOptions::default());
        println!(
            "{rel}: {} decided, {} unknown, {} discrepancies ({:.1?})",
            s.decided,
            s.unknown,
            s.discrepancies.len(),
            start.elapsed()
        );
        for d in &s.discrepancies {
            println!("  {}", d.to_json_line());
        }
    }
    let opts = DifferentialOptions {
        fault: Some(Fault::DropParNesting),
        ..DifferentialOptions::default()
    };
    // one label makes atoms match often, so wrong splits show up quickly
    let single = GenConfig {
        alphabet_size: 1,
        ..cfg
    };
    let s = differential_relation(&single, Relation::Iso, 5000, opts);
    println!(
        "with the parallel-split fault: {} discrepancies in 5000 cases",
        s.discrepancies.len()
    );
    if let Some(d) = s.discrepancies.first() {
        println!("  smallest: {}", d.to_json_line());
    }
}
