//! Several steps in a row, with an environment policy written as a closure.
//!
//! cargo run --example run

use std::collections::BTreeSet;

use isa_core::exec::{format_run, run, EnvResponse, Environment, FnEnvironment, RunOptions};
use isa_core::fixtures::broker;
use isa_core::history::{History, Query};
use isa_core::report::Format;
use isa_core::structure::{Element, Structure};

fn main() {
    let spec = broker();
    let x0 = spec.state("X0").unwrap();
    // Step i: client (i mod 2) accepts first; everything else is declined.
    let mut envs = |i: usize| -> Box<dyn Environment> {
        let winner = Query::label(if i % 2 == 0 { "offer0" } else { "offer1" });
        Box::new(FnEnvironment(move |_: &Structure, _: &History, pending: &BTreeSet<Query>| {
            if pending.contains(&winner) {
                EnvResponse::Batch([(winner.clone(), Element::new("yes"))].into_iter().collect())
            } else {
                EnvResponse::Stall
            }
        }))
    };
    let opts = RunOptions {
        max_steps: 3,
        max_phases: 8,
        stop_at_fixpoint: false,
    };
    let steps = run(&spec, x0, &mut envs, opts).unwrap();
    print!("{}", format_run(&steps, Format::Human));
    for (i, (x, _)) in steps.iter().enumerate() {
        println!("owner before step {i}: {}", x.value("owner", &[]).unwrap());
    }
}
