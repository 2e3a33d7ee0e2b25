use std::collections::BTreeSet;
use std::fmt;

use super::{AlgorithmSpec, ModelError};
use crate::history::{print_query_set, History};
use crate::structure::{eval_term, print_update_set, tuples, Element, Structure, Term, Valuation, Var};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BoundsViolation {
    QueryTooLong { query: String, len: usize },
    TooManyIssued(usize),
    DomainTooLarge(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsDiagnostic {
    pub history: History,
    pub violation: BoundsViolation,
}

impl fmt::Display for BoundsDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.violation {
            BoundsViolation::QueryTooLong { query, len } => {
                write!(f, "{}: issued query {query} has length {len}", self.history)
            }
            BoundsViolation::TooManyIssued(n) => write!(f, "{}: {n} queries issued", self.history),
            BoundsViolation::DomainTooLarge(n) => write!(f, "{}: {n} replies received", self.history),
        }
    }
}

/// A pair of states that agree on the witness terms but not on the step.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessDiagnostic {
    pub history: History,
    pub aspect: &'static str,
    pub left: String,
    pub right: String,
}

impl fmt::Display for WitnessDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: witness values agree but {} differ ({} vs {})",
            self.history, self.aspect, self.left, self.right
        )
    }
}

impl AlgorithmSpec {
    /// Every history in `attainables` whose issued queries or received
    /// replies exceed the declared bounds.
    pub fn check_bounds(&self, x: &Structure, attainables: &[History]) -> Result<Vec<BoundsDiagnostic>, ModelError> {
        let mut out = Vec::new();
        for h in attainables {
            let issued = self.issued(x, h)?;
            for q in &issued {
                if q.len() > self.bounds.max_query_len {
                    out.push(BoundsDiagnostic {
                        history: h.clone(),
                        violation: BoundsViolation::QueryTooLong {
                            query: q.to_string(),
                            len: q.len(),
                        },
                    });
                }
            }
            if issued.len() > self.bounds.max_issued {
                out.push(BoundsDiagnostic {
                    history: h.clone(),
                    violation: BoundsViolation::TooManyIssued(issued.len()),
                });
            }
            if h.domain_size() > self.bounds.max_issued {
                out.push(BoundsDiagnostic {
                    history: h.clone(),
                    violation: BoundsViolation::DomainTooLarge(h.domain_size()),
                });
            }
        }
        Ok(out)
    }

    /// When every witness term takes the same value in `x` and `y` under
    /// every valuation into the replies of `h`, causes, verdict class and
    /// update set must agree too; each disagreement is reported.
    pub fn check_witness(&self, x: &Structure, y: &Structure, h: &History) -> Result<Vec<WitnessDiagnostic>, ModelError> {
        if x.vocabulary() != y.vocabulary() {
            return Err(ModelError::IncompatibleHistory("states have different vocabularies".into()));
        }
        for s in [x, y] {
            let outside = h
                .entries()
                .flat_map(|(q, a)| q.elements().chain(std::iter::once(&a.reply)))
                .find(|e| !s.contains(e));
            if let Some(e) = outside {
                return Err(ModelError::IncompatibleHistory(format!("element `{e}` is not in both bases")));
            }
        }
        let range: BTreeSet<Element> = h.range();
        for w in &self.witness {
            let vars: Vec<Var> = w.variables().into_iter().collect();
            for values in tuples(&range, vars.len()) {
                let val: Valuation = vars.iter().cloned().zip(values).collect();
                if !same_value(x, y, w, &val)? {
                    return Ok(Vec::new());
                }
            }
        }
        let mut out = Vec::new();
        let mut cmp = |aspect: &'static str, l: String, r: String| {
            if l != r {
                out.push(WitnessDiagnostic {
                    history: h.clone(),
                    aspect,
                    left: l,
                    right: r,
                });
            }
        };
        cmp("causes", print_query_set(&self.causes(x, h)?), print_query_set(&self.causes(y, h)?));
        cmp(
            "verdicts",
            self.verdict(x, h)?.class().to_string(),
            self.verdict(y, h)?.class().to_string(),
        );
        cmp(
            "update sets",
            print_update_set(&self.update_set(x, h)?),
            print_update_set(&self.update_set(y, h)?),
        );
        Ok(out)
    }
}

fn same_value(x: &Structure, y: &Structure, w: &Term, val: &Valuation) -> Result<bool, ModelError> {
    Ok(eval_term(x, w, val)? == eval_term(y, w, val)?)
}
