//! Enumerate the attainable histories of the broker and tally verdicts.
//!
//! cargo run --example enumerate

use std::collections::BTreeMap;

use isa_core::analysis::{enumerate_attainable, EnumerationConfig};
use isa_core::fixtures::broker;

fn main() {
    let spec = broker();
    let x = spec.state("X0").unwrap();
    let cfg = EnumerationConfig {
        max_phases: 3,
        jobs: 2,
        ..EnumerationConfig::default()
    }
    .with_pool(["yes", "no", "client0", "client1", "t"]);
    let en = enumerate_attainable(&spec, x, &cfg).unwrap();
    println!("{} attainable histories (truncated: {})", en.len(), en.truncated);
    let mut tally: BTreeMap<String, usize> = BTreeMap::new();
    for h in &en.histories {
        *tally.entry(spec.verdict(x, h).unwrap().class().to_string()).or_default() += 1;
    }
    for (class, n) in &tally {
        println!("  {class}: {n}");
    }
    let deepest = en.histories.iter().max().unwrap();
    println!("largest: {deepest}");
}
