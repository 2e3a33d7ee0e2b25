//! Phased execution of one step, and a minimal run driver.
//!
//! A step starts from the empty history. At every phase boundary the
//! executor asks for the verdict; if the history is not yet final it issues
//! everything pending and waits for the environment's next batch of
//! simultaneous replies. It stops at the first final prefix, so the history
//! it ends with is always attainable.

mod env;
mod interactive;
mod trace;

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::history::{print_query_set, AnswerFunction, History, Query};
use crate::model::{AlgorithmSpec, FailReason, ModelError, Verdict};
use crate::structure::{apply_updates, Structure, UpdateSet};

pub use env::{
    parse_script, print_script, EnvResponse, Environment, FnEnvironment, Script, ScriptBlock, ScriptedEnvironment,
};
pub use interactive::InteractiveEnvironment;
pub use trace::{format_run, format_trace};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExecError {
    #[error("environment protocol error: {0}")]
    Protocol(String),
    #[error("script block {block}: {message}")]
    Script { block: usize, message: String },
    #[error("the run must start from an initial state")]
    NotInitial,
    #[error("i/o error: {0}")]
    Io(String),
    #[error(transparent)]
    Model(#[from] ModelError),
}

impl ExecError {
    /// Environment and input problems are usage errors (4); a specification
    /// that cannot be evaluated is a conformance problem (3).
    pub fn exit_code(&self) -> i32 {
        match self {
            ExecError::Model(_) => 3,
            _ => 4,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Success,
    Fail(FailReason),
    /// The environment stalled, or the phase budget ran out.
    Hang,
    /// A complete history with no final segment (strict finality only).
    ConformanceError(String),
}

impl Outcome {
    pub fn exit_code(&self) -> i32 {
        match self {
            Outcome::Success => 0,
            Outcome::Fail(_) => 1,
            Outcome::Hang => 2,
            Outcome::ConformanceError(_) => 3,
        }
    }
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Outcome::Success => f.write_str("success"),
            Outcome::Fail(r) => write!(f, "fail ({r})"),
            Outcome::Hang => f.write_str("hang"),
            Outcome::ConformanceError(d) => write!(f, "conformance error ({d})"),
        }
    }
}

/// One phase: what had been issued when the batch was requested, and the
/// batch that arrived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PhaseRecord {
    pub issued: BTreeSet<Query>,
    pub batch: AnswerFunction,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StepTrace {
    pub phases: Vec<PhaseRecord>,
    pub final_history: History,
    /// Issued set of the final history.
    pub final_issued: BTreeSet<Query>,
    pub pending: BTreeSet<Query>,
    pub verdict: Verdict,
    /// Present on success.
    pub delta: Option<UpdateSet>,
    /// Present on success.
    pub next: Option<Structure>,
    pub outcome: Outcome,
    /// Whether the environment stalled (as opposed to the phase budget
    /// running out) when the outcome is `Hang`.
    pub stalled: bool,
}

impl StepTrace {
    /// Script that replays this trace.
    pub fn to_script(&self) -> Script {
        let mut blocks: Vec<ScriptBlock> = self
            .phases
            .iter()
            .map(|p| ScriptBlock::Phase(p.batch.clone()))
            .collect();
        if self.stalled {
            blocks.push(ScriptBlock::Stall);
        }
        Script::new(blocks)
    }

    /// Folds the recorded batches with `append_class`.
    pub fn rebuild_history(&self) -> Result<History, ExecError> {
        let mut h = History::empty();
        for p in &self.phases {
            h = h.append_class(&p.batch).map_err(ModelError::from)?;
        }
        Ok(h)
    }
}

fn check_batch(x: &Structure, pending: &BTreeSet<Query>, batch: &AnswerFunction) -> Result<(), ExecError> {
    if batch.is_empty() {
        return Err(ExecError::Protocol("empty batch".into()));
    }
    if let Some(q) = batch.keys().find(|q| !pending.contains(q)) {
        return Err(ExecError::Protocol(format!(
            "{q} is not pending (pending: {})",
            print_query_set(pending)
        )));
    }
    if let Some(r) = batch.values().find(|r| !x.contains(r)) {
        return Err(ExecError::Protocol(format!("reply `{r}` is not in the base set")));
    }
    Ok(())
}

/// Executes one step from state `x`, asking `env` for at most `max_phases`
/// batches.
pub fn step(
    spec: &AlgorithmSpec,
    x: &Structure,
    env: &mut dyn Environment,
    max_phases: usize,
) -> Result<StepTrace, ExecError> {
    let mut h = History::empty();
    let mut phases = Vec::new();
    let mut stalled = false;
    let (verdict, outcome) = loop {
        let verdict = spec.verdict(x, &h)?;
        match verdict {
            Verdict::Success => break (verdict, Outcome::Success),
            Verdict::Fail(ref r) => {
                let r = r.clone();
                break (verdict, Outcome::Fail(r));
            }
            Verdict::NotFinal => {}
        }
        let issued = spec.issued(x, &h)?;
        let pending: BTreeSet<Query> = issued.iter().filter(|q| !h.contains(q)).cloned().collect();
        if pending.is_empty() {
            break (
                verdict,
                Outcome::ConformanceError("complete history has no final initial segment".into()),
            );
        }
        if phases.len() >= max_phases {
            break (verdict, Outcome::Hang);
        }
        match env.next_batch(x, &h, &pending)? {
            EnvResponse::Stall => {
                stalled = true;
                break (verdict, Outcome::Hang);
            }
            EnvResponse::Batch(batch) => {
                check_batch(x, &pending, &batch)?;
                h = h.append_class(&batch).map_err(ModelError::from)?;
                phases.push(PhaseRecord { issued, batch });
            }
        }
    };
    let final_issued = spec.issued(x, &h)?;
    let pending = final_issued.iter().filter(|q| !h.contains(q)).cloned().collect();
    let (delta, next) = if outcome == Outcome::Success {
        let delta = spec.update_set(x, &h)?;
        let next = apply_updates(x, &delta).map_err(ModelError::from)?;
        (Some(delta), Some(next))
    } else {
        (None, None)
    };
    Ok(StepTrace {
        phases,
        final_history: h,
        final_issued,
        pending,
        verdict,
        delta,
        next,
        outcome,
        stalled,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunOptions {
    pub max_steps: usize,
    pub max_phases: usize,
    /// Stop once a successful step leaves the state unchanged.
    pub stop_at_fixpoint: bool,
}

/// Iterates [`step`], feeding each next state into the following step with
/// a fresh environment from `env_for_step`. Stops after `max_steps`, at the
/// first step that does not succeed, or at a fixpoint when requested.
pub fn run(
    spec: &AlgorithmSpec,
    x0: &Structure,
    env_for_step: &mut dyn FnMut(usize) -> Box<dyn Environment>,
    opts: RunOptions,
) -> Result<Vec<(Structure, StepTrace)>, ExecError> {
    if !spec.initial_states().any(|(_, s)| s == x0) {
        return Err(ExecError::NotInitial);
    }
    let mut out = Vec::new();
    let mut x = x0.clone();
    for i in 0..opts.max_steps {
        let mut env = env_for_step(i);
        let trace = step(spec, &x, env.as_mut(), opts.max_phases)?;
        let next = trace.next.clone();
        out.push((x.clone(), trace));
        match next {
            Some(n) if opts.stop_at_fixpoint && n == x => break,
            Some(n) => x = n,
            None => break,
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use std::io::Cursor as IoCursor;

    use super::*;
    use crate::fixtures::{broker, SCRIPT_NO1_STALL, SCRIPT_TIE, SCRIPT_YES0};
    use crate::history::parse_history;
    use crate::structure::{Element, Update};

    fn scripted(text: &str) -> ScriptedEnvironment {
        ScriptedEnvironment::new(parse_script(text).unwrap())
    }

    fn owner(v: &str) -> UpdateSet {
        [Update::new("owner", vec![], Element::new(v))].into_iter().collect()
    }

    #[test]
    fn first_yes_sells_to_client0() {
        let b = broker();
        let x = b.state("X0").unwrap();
        let t = step(&b, x, &mut scripted(SCRIPT_YES0), 10).unwrap();
        assert_eq!(t.outcome, Outcome::Success);
        assert_eq!(t.phases.len(), 1);
        assert_eq!(t.delta, Some(owner("client0")));
        assert_eq!(t.next.as_ref().unwrap().value("owner", &[]), Some(&Element::new("client0")));
        assert_eq!(t.phases[0].issued, b.causes(x, &History::empty()).unwrap());
    }

    #[test]
    fn tie_is_settled_by_choose() {
        let b = broker();
        let x = b.state("X0").unwrap();
        let t = step(&b, x, &mut scripted(SCRIPT_TIE), 10).unwrap();
        assert_eq!(t.outcome, Outcome::Success);
        assert_eq!(t.phases.len(), 2);
        assert!(t.phases[1].issued.contains(&Query::label("choose")));
        assert_eq!(t.delta, Some(owner("client1")));
    }

    #[test]
    fn lone_refusal_then_stall_hangs() {
        let b = broker();
        let x = b.state("X0").unwrap();
        let t = step(&b, x, &mut scripted(SCRIPT_NO1_STALL), 10).unwrap();
        assert_eq!(t.outcome, Outcome::Hang);
        assert!(t.stalled);
        assert_eq!(t.pending, [Query::label("offer0"), Query::label("timeout")].into_iter().collect());
        assert_eq!(t.outcome.exit_code(), 2);
        // phase budget exhausted instead of a stall
        let t = step(&b, x, &mut scripted(SCRIPT_YES0), 0).unwrap();
        assert_eq!((t.outcome, t.stalled), (Outcome::Hang, false));
    }

    #[test]
    fn protocol_violations() {
        let b = broker();
        let x = b.state("X0").unwrap();
        let err = step(&b, x, &mut scripted("phase { (choose) -> client0 }"), 10).unwrap_err();
        assert!(matches!(err, ExecError::Script { block: 1, .. }));
        let mut bad = FnEnvironment(|_: &Structure, _: &History, _: &BTreeSet<Query>| {
            EnvResponse::Batch(AnswerFunction::new())
        });
        assert!(matches!(step(&b, x, &mut bad, 10), Err(ExecError::Protocol(_))));
        let mut outside = FnEnvironment(|_: &Structure, _: &History, p: &BTreeSet<Query>| {
            EnvResponse::Batch(p.iter().map(|q| (q.clone(), Element::new("zz"))).collect())
        });
        assert!(matches!(step(&b, x, &mut outside, 10), Err(ExecError::Protocol(_))));
    }

    #[test]
    fn strict_spec_without_final_rule_reports_conformance_error() {
        let mut b = broker();
        b.finality = crate::model::Finality::Strict;
        b.rules.retain(|r| r.name != "timed_out");
        let x = b.state("X0").unwrap().clone();
        let script = "phase { (offer0) -> t ; (offer1) -> t ; (timeout) -> t }";
        let t = step(&b, &x, &mut scripted(script), 10).unwrap();
        assert!(matches!(t.outcome, Outcome::ConformanceError(_)));
        assert_eq!(t.outcome.exit_code(), 3);
    }

    #[test]
    fn traces_replay_and_rebuild() {
        let b = broker();
        let x = b.state("X0").unwrap();
        for script in [SCRIPT_YES0, SCRIPT_TIE, SCRIPT_NO1_STALL] {
            let t = step(&b, x, &mut scripted(script), 10).unwrap();
            assert_eq!(t.rebuild_history().unwrap(), t.final_history);
            let again = step(&b, x, &mut ScriptedEnvironment::new(t.to_script()), 10).unwrap();
            assert_eq!(again, t);
            assert_eq!(format_trace(&again, crate::report::Format::Machine), format_trace(&t, crate::report::Format::Machine));
            if t.outcome != Outcome::Hang {
                assert!(b.is_attainable(x, &t.final_history).unwrap());
                assert!(b.verdict(x, &t.final_history).unwrap().is_final());
            }
        }
    }

    #[test]
    fn run_examples() {
        let b = broker();
        let x0 = b.state("X0").unwrap();
        let mut yes0 = |_: usize| -> Box<dyn Environment> { Box::new(scripted(SCRIPT_YES0)) };
        let opts = RunOptions {
            max_steps: 0,
            max_phases: 10,
            stop_at_fixpoint: false,
        };
        assert!(run(&b, x0, &mut yes0, opts).unwrap().is_empty());
        let steps = run(&b, x0, &mut yes0, RunOptions { max_steps: 3, ..opts }).unwrap();
        assert_eq!(steps.len(), 3);
        assert_eq!(steps[1].0.value("owner", &[]), Some(&Element::new("client0")));
        let steps = run(
            &b,
            x0,
            &mut yes0,
            RunOptions {
                max_steps: 3,
                stop_at_fixpoint: true,
                ..opts
            },
        )
        .unwrap();
        assert_eq!(steps.len(), 2);

        let mut bad = |_: usize| -> Box<dyn Environment> {
            Box::new(scripted("phase { (offer0) -> yes ; (offer1) -> yes }\nphase { (choose) -> no }"))
        };
        let steps = run(&b, x0, &mut bad, RunOptions { max_steps: 5, ..opts }).unwrap();
        assert_eq!(steps.len(), 1);
        assert!(matches!(steps[0].1.outcome, Outcome::Fail(_)));

        let moved = steps[0].0.clone();
        let after = b.next_state(x0, &parse_history("{ (offer0) -> yes @0 }").unwrap()).unwrap();
        assert_eq!(moved, *x0);
        assert_eq!(
            run(&b, &after, &mut yes0, RunOptions { max_steps: 1, ..opts }),
            Err(ExecError::NotInitial)
        );
    }

    #[test]
    fn interactive_matches_script() {
        let b = broker();
        let x = b.state("X0").unwrap();
        let scripted_trace = step(&b, x, &mut scripted(SCRIPT_YES0), 10).unwrap();
        let input = "answer (choose) = yes\nanswer (offer0) = bogus\nhello\ngo\nanswer (offer0) = yes\ngo\n";
        let mut env = InteractiveEnvironment::new(IoCursor::new(input), Vec::new());
        let t = step(&b, x, &mut env, 10).unwrap();
        assert_eq!(t, scripted_trace);
        let shown = String::from_utf8(env.into_output()).unwrap();
        assert!(shown.contains("phase 0: pending {(offer0), (offer1), (timeout)}"));
        assert!(shown.contains("(choose) is not pending"));
        assert!(shown.contains("not an element"));
        assert!(shown.contains("before `go`"));

        let mut env = InteractiveEnvironment::new(IoCursor::new("stall\n"), Vec::new());
        assert_eq!(step(&b, x, &mut env, 10).unwrap().outcome, Outcome::Hang);

        let input = "answer (offer0) = yes\nanswer (offer1) = yes\ngo\nanswer (choose) = client1\ngo\n";
        let mut env = InteractiveEnvironment::new(IoCursor::new(input), Vec::new());
        let t = step(&b, x, &mut env, 10).unwrap();
        assert_eq!(t.phases[0].batch.len(), 2);
        assert_eq!(t.final_history.len(), 2);

        let mut env = InteractiveEnvironment::new(IoCursor::new(""), Vec::new());
        assert_eq!(step(&b, x, &mut env, 10).unwrap().outcome, Outcome::Hang);
    }
}
