//! Algorithm specifications and their history semantics.
//!
//! An [`AlgorithmSpec`] describes causality, finality and updates with
//! finitely many guarded rules. Each rule denotes every history satisfying
//! its guard; the operations here (`causes`, `issued`, `verdict`, ...) turn
//! those rules into the query/verdict/update functions of a step.

mod bounds;
mod eval;
mod semantics;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::history::{HistoryError, Label};
use crate::structure::{Location, Structure, StructureError, Term, Vocabulary};

pub use bounds::{BoundsDiagnostic, BoundsViolation, WitnessDiagnostic};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TemplateComponent {
    Label(Label),
    Term(Term),
}

/// Named query shape. Term components may mention `reply(Q)`, so one
/// template can denote a different query on each history.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QueryTemplate {
    pub name: String,
    pub components: Vec<TemplateComponent>,
}

impl QueryTemplate {
    /// Template names whose replies the components read.
    pub fn dependencies(&self) -> BTreeSet<String> {
        self.components
            .iter()
            .filter_map(|c| match c {
                TemplateComponent::Term(t) => Some(reply_refs(t)),
                TemplateComponent::Label(_) => None,
            })
            .flatten()
            .collect()
    }
}

pub(crate) fn reply_refs(t: &Term) -> BTreeSet<String> {
    t.variables()
        .into_iter()
        .filter_map(|v| match v {
            crate::structure::Var::Reply(q) => Some(q),
            crate::structure::Var::Named(_) => None,
        })
        .collect()
}

/// Boolean combination of history atoms. Atoms naming a template that is not
/// instantiable on the current history (it reads an unanswered reply) are
/// false, as are equalities whose terms read an unanswered reply.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Guard {
    /// Holds on every history.
    Start,
    Answered(String),
    Unanswered(String),
    ReplyEq(String, Term),
    Before(String, String),
    Simultaneous(String, String),
    TermEq(Term, Term),
    Not(Box<Guard>),
    And(Box<Guard>, Box<Guard>),
    Or(Box<Guard>, Box<Guard>),
}

impl Guard {
    pub fn not(g: Guard) -> Guard {
        Guard::Not(Box::new(g))
    }

    pub fn and(a: Guard, b: Guard) -> Guard {
        Guard::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Guard, b: Guard) -> Guard {
        Guard::Or(Box::new(a), Box::new(b))
    }

    /// Template names the guard mentions, directly or through `reply(·)`.
    pub fn templates(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_templates(&mut out);
        out
    }

    fn collect_templates(&self, out: &mut BTreeSet<String>) {
        match self {
            Guard::Start => {}
            Guard::Answered(q) | Guard::Unanswered(q) => {
                out.insert(q.clone());
            }
            Guard::ReplyEq(q, t) => {
                out.insert(q.clone());
                out.extend(reply_refs(t));
            }
            Guard::Before(a, b) | Guard::Simultaneous(a, b) => {
                out.insert(a.clone());
                out.insert(b.clone());
            }
            Guard::TermEq(a, b) => {
                out.extend(reply_refs(a));
                out.extend(reply_refs(b));
            }
            Guard::Not(g) => g.collect_templates(out),
            Guard::And(a, b) | Guard::Or(a, b) => {
                a.collect_templates(out);
                b.collect_templates(out);
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Succeed,
    Fail,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Action {
    /// Issue the query the named template instantiates to.
    Issue(String),
    Final(Outcome),
    Update { symbol: String, args: Vec<Term>, value: Term },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Rule {
    pub name: String,
    pub guard: Guard,
    pub action: Action,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Finality {
    /// Complete histories are final (and successful unless a fail rule or a
    /// clash says otherwise) even when no final rule matches.
    #[default]
    Implicit,
    /// Only final rules make a history final; a complete history without one
    /// is a conformance error.
    Strict,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Bounds {
    pub max_query_len: usize,
    pub max_issued: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlgorithmSpec {
    pub name: String,
    pub finality: Finality,
    pub vocabulary: Arc<Vocabulary>,
    pub labels: BTreeSet<Label>,
    pub states: BTreeMap<String, Structure>,
    pub initial: BTreeSet<String>,
    pub templates: BTreeMap<String, QueryTemplate>,
    /// All rules in source order; the order carries no meaning.
    pub rules: Vec<Rule>,
    pub bounds: Bounds,
    pub witness: Vec<Term>,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum FailReason {
    Rule(String),
    Clash(Location),
}

impl fmt::Display for FailReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FailReason::Rule(r) => write!(f, "rule {r}"),
            FailReason::Clash(l) => write!(f, "clash at {l}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    NotFinal,
    Success,
    Fail(FailReason),
}

/// A verdict with the fail reason forgotten.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VerdictClass {
    NotFinal,
    Success,
    Fail,
}

impl Verdict {
    pub fn class(&self) -> VerdictClass {
        match self {
            Verdict::NotFinal => VerdictClass::NotFinal,
            Verdict::Success => VerdictClass::Success,
            Verdict::Fail(_) => VerdictClass::Fail,
        }
    }

    pub fn is_final(&self) -> bool {
        !matches!(self, Verdict::NotFinal)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::NotFinal => f.write_str("not final"),
            Verdict::Success => f.write_str("success"),
            Verdict::Fail(r) => write!(f, "fail ({r})"),
        }
    }
}

impl fmt::Display for VerdictClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            VerdictClass::NotFinal => "not final",
            VerdictClass::Success => "success",
            VerdictClass::Fail => "fail",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("rule `{rule}` fired but `{template}` reads a reply that has not arrived")]
    Instantiation { rule: String, template: String },
    #[error("unknown state `{0}`")]
    UnknownState(String),
    #[error("unknown query template `{0}`")]
    UnknownTemplate(String),
    #[error("history is not successful final ({0})")]
    NotSuccessful(Verdict),
    #[error("history does not fit the state: {0}")]
    IncompatibleHistory(String),
    #[error(transparent)]
    Structure(#[from] StructureError),
    #[error(transparent)]
    History(#[from] HistoryError),
}

impl AlgorithmSpec {
    pub fn state(&self, name: &str) -> Result<&Structure, ModelError> {
        self.states
            .get(name)
            .ok_or_else(|| ModelError::UnknownState(name.to_string()))
    }

    pub fn template(&self, name: &str) -> Result<&QueryTemplate, ModelError> {
        self.templates
            .get(name)
            .ok_or_else(|| ModelError::UnknownTemplate(name.to_string()))
    }

    pub fn issue_rules(&self) -> impl Iterator<Item = (&Rule, &str)> {
        self.rules.iter().filter_map(|r| match &r.action {
            Action::Issue(t) => Some((r, t.as_str())),
            _ => None,
        })
    }

    pub fn final_rules(&self) -> impl Iterator<Item = (&Rule, Outcome)> {
        self.rules.iter().filter_map(|r| match &r.action {
            Action::Final(o) => Some((r, *o)),
            _ => None,
        })
    }

    pub fn update_rules(&self) -> impl Iterator<Item = &Rule> {
        self.rules
            .iter()
            .filter(|r| matches!(r.action, Action::Update { .. }))
    }

    /// States named in the `initial` set, in name order.
    pub fn initial_states(&self) -> impl Iterator<Item = (&String, &Structure)> {
        self.states.iter().filter(|(n, _)| self.initial.contains(*n))
    }
}
