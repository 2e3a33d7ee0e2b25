//! The broker example shipped with the crate: two clients are offered
//! shares; the first positive reply wins, a simultaneous tie is settled by a
//! follow-up `choose` query, and a timeout query ends the step when nobody
//! accepts.

use crate::dsl::load_spec;
use crate::model::AlgorithmSpec;

pub const BROKER: &str = include_str!("../fixtures/broker.isa");
/// Variant where a simultaneous tie goes to `client0` without asking.
pub const BROKER_PREFERRED: &str = include_str!("../fixtures/broker_preferred.isa");
pub const BROKER_SWAP_ISO: &str = include_str!("../fixtures/broker_swap.iso");

pub const SCRIPT_YES0: &str = include_str!("../fixtures/yes0.env");
pub const SCRIPT_TIE: &str = include_str!("../fixtures/tie.env");
pub const SCRIPT_NO1_STALL: &str = include_str!("../fixtures/no1_stall.env");

pub fn broker() -> AlgorithmSpec {
    load_spec(BROKER).expect("bundled broker spec is valid")
}

pub fn broker_preferred() -> AlgorithmSpec {
    load_spec(BROKER_PREFERRED).expect("bundled broker variant is valid")
}
