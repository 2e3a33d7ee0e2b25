//! Compare the broker with its preferred-client variant.
//!
//! cargo run --example equivalence

use isa_core::analysis::{agreement_property, equivalent, format_equivalence, weak_equivalent, EnumerationConfig};
use isa_core::fixtures::{broker, broker_preferred};
use isa_core::report::Format;

fn main() {
    let cfg = EnumerationConfig::default().with_pool(["yes", "no", "client0", "client1", "t"]);
    let a = broker();
    let b = broker_preferred();
    print!("{}", format_equivalence(&equivalent(&a, &a, &cfg).unwrap(), Format::Human));
    println!();
    print!("{}", format_equivalence(&equivalent(&a, &b, &cfg).unwrap(), Format::Human));
    println!();
    print!("{}", format_equivalence(&weak_equivalent(&a, &b, &cfg).unwrap(), Format::Human));
    println!("full and weak checks agree: {}", agreement_property(&a, &b, &cfg).unwrap());
}
