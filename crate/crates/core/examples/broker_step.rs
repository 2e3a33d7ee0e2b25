//! One step of the broker against each bundled script.
//!
//! cargo run --example broker_step

use isa_core::exec::{format_trace, parse_script, step, ScriptedEnvironment};
use isa_core::fixtures::{broker, SCRIPT_NO1_STALL, SCRIPT_TIE, SCRIPT_YES0};
use isa_core::report::Format;

fn main() {
    let spec = broker();
    let x0 = spec.state("X0").expect("fixture has X0");
    for (name, text) in [("yes0", SCRIPT_YES0), ("tie", SCRIPT_TIE), ("no1_stall", SCRIPT_NO1_STALL)] {
        let script = parse_script(text).expect("bundled script parses");
        let mut env = ScriptedEnvironment::new(script);
        let trace = step(&spec, x0, &mut env, 16).expect("step runs");
        println!("### script {name} (exit {})", trace.outcome.exit_code());
        print!("{}", format_trace(&trace, Format::Human));
        println!();
    }
}
