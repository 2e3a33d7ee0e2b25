//! Parse a specification, print it canonically, and show diagnostics.
//!
//! cargo run --example dsl_roundtrip

use isa_core::dsl::{load_spec, parse_spec, print_spec, validate_spec};
use isa_core::fixtures::BROKER;

fn main() {
    let ast = parse_spec(BROKER).expect("fixture parses");
    let printed = print_spec(&ast);
    let again = parse_spec(&printed).expect("printed form parses");
    println!("round trip identical: {}", again == ast);
    println!("printed text identical: {}", printed == BROKER);
    println!("{} rules, {} templates", ast.rules.len(), ast.templates.len());

    let broken = BROKER.replace("emit choose", "emit chose");
    match load_spec(&broken) {
        Ok(_) => println!("unexpectedly valid"),
        Err(e) => println!("broken spec: {e}"),
    }

    let unused = BROKER.replace("labels { offer0", "labels { spare offer0");
    for d in validate_spec(&parse_spec(&unused).unwrap()) {
        println!("{d}");
    }
}
