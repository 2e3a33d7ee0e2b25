//! Drive the command line in-process, as the `isa` binary does.
//!
//! cargo run --example cli -- step crates/core/fixtures/broker.isa --state X0 --script crates/core/fixtures/yes0.env

use std::io;

fn main() {
    let mut args: Vec<String> = std::env::args().collect();
    if args.len() == 1 {
        let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures");
        args.extend(["validate".to_string(), format!("{dir}/broker.isa")]);
    }
    let code = isa_core::cli::dispatch(args, &mut io::stdin().lock(), &mut io::stdout(), &mut io::stderr());
    std::process::exit(code);
}
