//! Histories: phases, initial segments, and completing a coherent history.
//!
//! cargo run --example histories

use isa_core::fixtures::broker;
use isa_core::history::{complete_history, parse_history, AnswerFunction};
use isa_core::model::ModelError;
use isa_core::structure::Element;

fn main() {
    let h = parse_history("{ (offer0) -> yes @0 ; (offer1) -> yes @0 ; (choose) -> client1 @1 }").unwrap();
    println!("history: {h}");
    println!("phases: {}, domain: {}", h.len(), h.domain_size());
    for seg in h.initial_segments() {
        println!("  initial segment: {seg}");
    }

    let spec = broker();
    let x = spec.state("X0").unwrap();
    let partial = parse_history("{ (offer1) -> no @0 }").unwrap();
    println!("coherent: {}", spec.is_coherent(x, &partial).unwrap());
    println!("pending: {:?}", spec.pending(x, &partial).unwrap().iter().map(|q| q.to_string()).collect::<Vec<_>>());

    // answer every pending query with `no`, one phase at a time
    let done = complete_history(
        |h| spec.issued(x, h),
        &partial,
        |pending| -> AnswerFunction { pending.iter().map(|q| (q.clone(), Element::new("no"))).collect() },
        16,
    )
    .map_err(|e: ModelError| e)
    .unwrap();
    println!("completed: {done}");
    println!("complete: {}, verdict: {}", spec.is_complete(x, &done).unwrap(), spec.verdict(x, &done).unwrap());
}
