//! Executable semantics for interactive small-step algorithms.
//!
//! A step of such an algorithm issues queries to its environment, absorbs
//! the replies phase by phase, and ends at a final history with either a
//! set of updates to its state or a failure. This crate provides:
//!
//! * [`structure`] — finite first-order states, terms, updates, isomorphisms;
//! * [`history`] — answer functions ordered into phases, initial segments;
//! * [`model`] — rule-based algorithm specifications and their semantics;
//! * [`dsl`] — the `.isa` specification language;
//! * [`exec`] — phased execution of steps against pluggable environments;
//! * [`analysis`] — attainable-history enumeration, conformance reports and
//!   behavioral equivalence;
//! * [`cli`] — the `isa` command line.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod analysis;
pub mod cli;
pub mod dsl;
pub mod exec;
pub mod fixtures;
pub mod history;
pub mod model;
pub mod report;
pub mod structure;
pub mod text;
