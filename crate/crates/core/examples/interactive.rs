//! Play the environment. Reads commands from stdin with `--stdin`,
//! otherwise replays a canned session.
//!
//! cargo run --example interactive -- --stdin

use std::io::{self, BufRead, Cursor};

use isa_core::exec::{format_trace, step, InteractiveEnvironment};
use isa_core::fixtures::broker;
use isa_core::report::Format;

const SESSION: &str = "\
answer (offer0) = yes
answer (offer1) = yes
go
answer (choose) = client0
go
";

fn main() {
    let spec = broker();
    let x = spec.state("X1").unwrap();
    let input: Box<dyn BufRead> = if std::env::args().any(|a| a == "--stdin") {
        Box::new(io::stdin().lock())
    } else {
        Box::new(Cursor::new(SESSION))
    };
    let mut env = InteractiveEnvironment::new(input, io::stdout());
    let trace = step(&spec, x, &mut env, 16).unwrap();
    println!();
    print!("{}", format_trace(&trace, Format::Human));
}
