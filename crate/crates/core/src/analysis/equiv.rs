//! Behavioral equivalence of two specifications over the same vocabulary.
//!
//! Five clauses are checked per state:
//!
//! 1. both specifications have the state, with the same structure, the same
//!    initial status and the same labels;
//! 2. the same attainable histories;
//! 3. the same issued queries on every attainable history;
//! 4. the same verdict class (not final / success / fail) on every
//!    attainable history;
//! 5. the same update set on every attainable successful history.
//!
//! The weak check drops clause 2 and restricts clauses 3–5 to histories
//! attainable for both. Agreement there forces the attainable sets to
//! coincide (induction on the number of phases), so the two checks always
//! return the same verdict; [`agreement_property`] exposes that fact for
//! testing.

use std::collections::BTreeSet;

use super::{enumerate_attainable, AnalysisError, EnumerationConfig};
use crate::history::{print_query_set, History};
use crate::model::{AlgorithmSpec, Verdict};
use crate::structure::print_update_set;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClauseStatus {
    Pass,
    Fail,
    NotChecked,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateClauses {
    pub state: String,
    /// Clauses 1–5, in order.
    pub clauses: [ClauseStatus; 5],
}

/// The least diverging (state, history, clause), in that order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Divergence {
    pub state: String,
    /// Absent for clause 1, which is about the state itself.
    pub history: Option<History>,
    /// 1–5.
    pub clause: u8,
    pub details: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EquivalenceReport {
    pub weak: bool,
    /// No clause failed on any state.
    pub equivalent: bool,
    /// Some enumeration was cut by the bounds: a positive answer only holds
    /// up to them.
    pub truncated: bool,
    pub config: EnumerationConfig,
    pub states: Vec<StateClauses>,
    pub divergence: Option<Divergence>,
}

impl EquivalenceReport {
    /// `equivalent`, `equivalent up to bounds` or `not equivalent`.
    pub fn verdict_label(&self) -> &'static str {
        match (self.equivalent, self.truncated) {
            (true, false) => "equivalent",
            (true, true) => "equivalent up to bounds",
            (false, _) => "not equivalent",
        }
    }
}

struct Checker {
    states: Vec<StateClauses>,
    divergence: Option<(String, Option<History>, u8, String)>,
}

impl Checker {
    fn fail(&mut self, idx: usize, state: &str, history: Option<&History>, clause: u8, details: String) {
        self.states[idx].clauses[clause as usize - 1] = ClauseStatus::Fail;
        let cand = (state.to_string(), history.cloned(), clause, details);
        let better = match &self.divergence {
            None => true,
            Some(cur) => (&cand.0, &cand.1, cand.2) < (&cur.0, &cur.1, cur.2),
        };
        if better {
            self.divergence = Some(cand);
        }
    }
}

fn compare(
    a: &AlgorithmSpec,
    b: &AlgorithmSpec,
    cfg: &EnumerationConfig,
    weak: bool,
) -> Result<EquivalenceReport, AnalysisError> {
    if a.vocabulary != b.vocabulary {
        return Err(AnalysisError::ConfigMismatch("the vocabularies differ".into()));
    }
    let names: BTreeSet<&String> = a.states.keys().chain(b.states.keys()).collect();
    let mut ck = Checker {
        states: names
            .iter()
            .map(|n| StateClauses {
                state: n.to_string(),
                clauses: [ClauseStatus::NotChecked; 5],
            })
            .collect(),
        divergence: None,
    };
    let mut truncated = false;

    for (idx, name) in names.iter().enumerate() {
        let (xa, xb) = match (a.states.get(*name), b.states.get(*name)) {
            (Some(xa), Some(xb)) => (xa, xb),
            (Some(_), None) => {
                ck.fail(idx, name, None, 1, "only in the first specification".into());
                continue;
            }
            _ => {
                ck.fail(idx, name, None, 1, "only in the second specification".into());
                continue;
            }
        };
        if xa != xb {
            ck.fail(idx, name, None, 1, "the two structures differ".into());
            continue;
        }
        if a.initial.contains(*name) != b.initial.contains(*name) {
            ck.fail(idx, name, None, 1, "initial in only one specification".into());
        } else if a.labels != b.labels {
            ck.fail(idx, name, None, 1, "the label sets differ".into());
        } else {
            ck.states[idx].clauses[0] = ClauseStatus::Pass;
        }
        let x = xa;

        let ea = enumerate_attainable(a, x, cfg)?;
        let eb = enumerate_attainable(b, x, cfg)?;
        truncated |= ea.truncated || eb.truncated;
        let scope: BTreeSet<&History> = if weak {
            ea.histories.intersection(&eb.histories).collect()
        } else {
            let first = ea.histories.symmetric_difference(&eb.histories).next();
            match first {
                Some(h) => {
                    let side = if ea.histories.contains(h) { "first" } else { "second" };
                    ck.fail(idx, name, Some(h), 2, format!("attainable only for the {side} specification"));
                }
                None => ck.states[idx].clauses[1] = ClauseStatus::Pass,
            }
            ea.histories.union(&eb.histories).collect()
        };

        let mut ok = [true; 3];
        for h in scope {
            let ia = a.issued(x, h);
            let ib = b.issued(x, h);
            if ia != ib {
                ok[0] = false;
                let show = |r: &Result<BTreeSet<_>, _>| match r {
                    Ok(s) => print_query_set(s),
                    Err(e) => format!("error: {e}"),
                };
                ck.fail(idx, name, Some(h), 3, format!("issued {} vs {}", show(&ia), show(&ib)));
            }
            let va = a.verdict(x, h)?;
            let vb = b.verdict(x, h)?;
            if va.class() != vb.class() {
                ok[1] = false;
                ck.fail(idx, name, Some(h), 4, format!("verdict {va} vs {vb}"));
            } else if va == Verdict::Success && vb == Verdict::Success {
                let ua = a.update_set(x, h)?;
                let ub = b.update_set(x, h)?;
                if ua != ub {
                    ok[2] = false;
                    ck.fail(
                        idx,
                        name,
                        Some(h),
                        5,
                        format!("updates {} vs {}", print_update_set(&ua), print_update_set(&ub)),
                    );
                }
            }
        }
        for (i, passed) in ok.iter().enumerate() {
            if *passed {
                ck.states[idx].clauses[i + 2] = ClauseStatus::Pass;
            }
        }
    }

    let equivalent = ck
        .states
        .iter()
        .all(|s| s.clauses.iter().all(|c| *c != ClauseStatus::Fail));
    Ok(EquivalenceReport {
        weak,
        equivalent,
        truncated,
        config: cfg.clone(),
        states: ck.states,
        divergence: ck.divergence.map(|(state, history, clause, details)| Divergence {
            state,
            history,
            clause,
            details,
        }),
    })
}

pub fn equivalent(a: &AlgorithmSpec, b: &AlgorithmSpec, cfg: &EnumerationConfig) -> Result<EquivalenceReport, AnalysisError> {
    compare(a, b, cfg, false)
}

pub fn weak_equivalent(
    a: &AlgorithmSpec,
    b: &AlgorithmSpec,
    cfg: &EnumerationConfig,
) -> Result<EquivalenceReport, AnalysisError> {
    compare(a, b, cfg, true)
}

/// Whether the full and the weak check reach the same verdict.
pub fn agreement_property(a: &AlgorithmSpec, b: &AlgorithmSpec, cfg: &EnumerationConfig) -> Result<bool, AnalysisError> {
    Ok(equivalent(a, b, cfg)?.equivalent == weak_equivalent(a, b, cfg)?.equivalent)
}
