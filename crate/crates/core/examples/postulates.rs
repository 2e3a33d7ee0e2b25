//! Conformance report for the broker, then for a broken strict variant.
//!
//! cargo run --example postulates

use isa_core::analysis::{check_postulates, format_conformance, parse_iso_file, EnumerationConfig, WitnessPair};
use isa_core::dsl::load_spec;
use isa_core::fixtures::{broker, BROKER, BROKER_SWAP_ISO};
use isa_core::report::Format;

fn main() {
    let cfg = EnumerationConfig::default().with_pool(["yes", "no", "client0", "client1", "t"]);
    let spec = broker();
    let isos = parse_iso_file(BROKER_SWAP_ISO, &spec).unwrap();
    let report = check_postulates(&spec, &cfg, &isos, &WitnessPair::all(&spec)).unwrap();
    print!("{}", format_conformance(&report, Format::Human));

    println!();
    println!("-- strict finality without the timeout rule --");
    let text: String = BROKER
        .replace("algorithm broker", "algorithm broker\nfinality strict")
        .lines()
        .filter(|l| !l.starts_with("final timed_out"))
        .map(|l| format!("{l}\n"))
        .collect();
    let strict = load_spec(&text).unwrap();
    let report = check_postulates(&strict, &cfg.clone().with_pool(["no", "t"]), &[], &[]).unwrap();
    print!("{}", format_conformance(&report, Format::Human));
}
