use std::fmt::Write as _;

use super::{Outcome, StepTrace};
use crate::history::{print_answer_function, print_query_set};
use crate::report::{Format, KeyValues};
use crate::structure::format::body_lines;
use crate::structure::{print_update_set, Structure};

pub fn format_trace(trace: &StepTrace, format: Format) -> String {
    match format {
        Format::Human => human(trace),
        Format::Machine => {
            let mut kv = KeyValues::new();
            machine(trace, "", &mut kv);
            kv.finish()
        }
    }
}

fn human(t: &StepTrace) -> String {
    let mut o = String::new();
    for (i, p) in t.phases.iter().enumerate() {
        let _ = writeln!(
            o,
            "phase {i}: issued {} <- {}",
            print_query_set(&p.issued),
            print_answer_function(&p.batch)
        );
    }
    let _ = writeln!(o, "history: {}", t.final_history);
    let _ = writeln!(o, "issued: {}", print_query_set(&t.final_issued));
    if !t.pending.is_empty() {
        let _ = writeln!(o, "pending: {}", print_query_set(&t.pending));
    }
    let _ = writeln!(o, "verdict: {}", t.verdict);
    if let Some(delta) = &t.delta {
        let _ = writeln!(o, "updates: {}", print_update_set(delta));
    }
    if let Some(next) = &t.next {
        o.push_str("next state:\n");
        for line in body_lines(next) {
            let _ = writeln!(o, "  {line}");
        }
    }
    let _ = writeln!(o, "outcome: {}", t.outcome);
    o
}

fn machine(t: &StepTrace, prefix: &str, kv: &mut KeyValues) {
    kv.put(format!("{prefix}phases"), t.phases.len());
    for (i, p) in t.phases.iter().enumerate() {
        kv.put(format!("{prefix}phase.{i}.issued"), print_query_set(&p.issued));
        kv.put(format!("{prefix}phase.{i}.batch"), print_answer_function(&p.batch));
    }
    kv.put(format!("{prefix}history"), &t.final_history);
    kv.put(format!("{prefix}issued"), print_query_set(&t.final_issued));
    kv.put(format!("{prefix}pending"), print_query_set(&t.pending));
    kv.put(format!("{prefix}verdict"), &t.verdict);
    if let Some(delta) = &t.delta {
        kv.put(format!("{prefix}updates"), print_update_set(delta));
    }
    if let Some(next) = &t.next {
        for (i, line) in body_lines(next).iter().enumerate() {
            kv.put(format!("{prefix}next.{i}"), line);
        }
    }
    kv.put(format!("{prefix}outcome"), outcome_key(&t.outcome));
    kv.put(format!("{prefix}exit"), t.outcome.exit_code());
}

fn outcome_key(o: &Outcome) -> String {
    match o {
        Outcome::Success => "success".into(),
        Outcome::Fail(r) => format!("fail {r}"),
        Outcome::Hang => "hang".into(),
        Outcome::ConformanceError(d) => format!("conformance_error {d}"),
    }
}

pub fn format_run(steps: &[(Structure, StepTrace)], format: Format) -> String {
    match format {
        Format::Human => {
            let mut o = String::new();
            for (i, (_, t)) in steps.iter().enumerate() {
                let _ = writeln!(o, "== step {i}");
                o.push_str(&human(t));
            }
            let _ = writeln!(o, "steps: {}", steps.len());
            o
        }
        Format::Machine => {
            let mut kv = KeyValues::new();
            kv.put("steps", steps.len());
            kv.end_block();
            for (i, (_, t)) in steps.iter().enumerate() {
                machine(t, &format!("step.{i}."), &mut kv);
                kv.end_block();
            }
            kv.finish()
        }
    }
}
