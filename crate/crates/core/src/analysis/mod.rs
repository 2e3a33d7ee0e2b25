//! Exhaustive attainable-history enumeration, postulate conformance reports
//! and behavioral equivalence.
//!
//! Everything here works on the finite space cut out by an
//! [`EnumerationConfig`]: replies come from a pool, and histories are
//! bounded in phases and domain size. Whenever those bounds actually cut
//! something off, the result says so.

mod equiv;
mod iso_file;
mod postulates;
mod report;

use std::collections::BTreeSet;

use rayon::prelude::*;
use thiserror::Error;

use crate::history::{AnswerFunction, History, Query};
use crate::model::{AlgorithmSpec, ModelError};
use crate::structure::{Element, Structure};
use crate::text::ParseError;

pub use equiv::{agreement_property, equivalent, weak_equivalent, ClauseStatus, Divergence, EquivalenceReport, StateClauses};
pub use iso_file::{parse_iso_file, print_iso_file, IsoDecl};
pub use postulates::{check_postulates, ConformanceReport, Section, WitnessPair};
pub use report::{format_conformance, format_enumeration, format_equivalence};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalysisError {
    #[error("invalid enumeration config: {0}")]
    InvalidConfig(String),
    #[error("specifications cannot be compared: {0}")]
    ConfigMismatch(String),
    #[error("failed to build a worker pool: {0}")]
    Pool(String),
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Model(#[from] ModelError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EnumerationConfig {
    /// Replies the environment may give; `None` means the whole base set.
    pub reply_pool: Option<BTreeSet<Element>>,
    pub max_phases: usize,
    pub max_domain: usize,
    /// Worker threads; 1 keeps everything on the calling thread.
    pub jobs: usize,
}

impl Default for EnumerationConfig {
    fn default() -> Self {
        EnumerationConfig {
            reply_pool: None,
            max_phases: 3,
            max_domain: 8,
            jobs: 1,
        }
    }
}

impl EnumerationConfig {
    pub fn with_pool<'a>(mut self, names: impl IntoIterator<Item = &'a str>) -> Self {
        self.reply_pool = Some(names.into_iter().map(Element::new).collect());
        self
    }

    /// The pool for state `x`, checked against its base set.
    pub fn pool_for(&self, x: &Structure) -> Result<Vec<Element>, AnalysisError> {
        if self.max_phases == 0 || self.max_domain == 0 {
            return Err(AnalysisError::InvalidConfig("phase and domain bounds must be positive".into()));
        }
        if self.jobs == 0 {
            return Err(AnalysisError::InvalidConfig("at least one job is needed".into()));
        }
        match &self.reply_pool {
            None => Ok(x.base().iter().cloned().collect()),
            Some(pool) => {
                if pool.is_empty() {
                    return Err(AnalysisError::InvalidConfig("reply pool is empty".into()));
                }
                if let Some(e) = pool.iter().find(|e| !x.contains(e)) {
                    return Err(AnalysisError::InvalidConfig(format!(
                        "pool element `{e}` is not in the base set"
                    )));
                }
                Ok(pool.iter().cloned().collect())
            }
        }
    }

    /// Human-readable pool, `*` for the whole base.
    pub fn pool_label(&self) -> String {
        match &self.reply_pool {
            None => "*".into(),
            Some(p) => {
                let names: Vec<&str> = p.iter().map(|e| e.name()).collect();
                format!("{{{}}}", names.join(","))
            }
        }
    }
}

/// The attainable histories of one state, as far as the bounds allow.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Enumeration {
    pub histories: BTreeSet<History>,
    /// Some attainable history was not expanded because of `max_phases` or
    /// `max_domain`.
    pub truncated: bool,
}

impl Enumeration {
    pub fn len(&self) -> usize {
        self.histories.len()
    }

    pub fn is_empty(&self) -> bool {
        self.histories.is_empty()
    }
}

struct Expansion {
    children: Vec<History>,
    truncated: bool,
}

fn expand(
    spec: &AlgorithmSpec,
    x: &Structure,
    h: &History,
    pool: &[Element],
    cfg: &EnumerationConfig,
) -> Result<Expansion, ModelError> {
    let mut out = Expansion {
        children: Vec::new(),
        truncated: false,
    };
    if spec.verdict(x, h)?.is_final() {
        return Ok(out);
    }
    let pending: Vec<Query> = spec.pending(x, h)?.into_iter().collect();
    if pending.is_empty() {
        return Ok(out);
    }
    if h.len() >= cfg.max_phases {
        out.truncated = true;
        return Ok(out);
    }
    // Each pending query is either left out (0) or answered with pool[d-1].
    let radix = pool.len() + 1;
    let mut digits = vec![0usize; pending.len()];
    loop {
        let mut i = 0;
        while i < digits.len() {
            digits[i] += 1;
            if digits[i] < radix {
                break;
            }
            digits[i] = 0;
            i += 1;
        }
        if i == digits.len() {
            break;
        }
        let batch: AnswerFunction = pending
            .iter()
            .zip(&digits)
            .filter(|(_, d)| **d > 0)
            .map(|(q, d)| (q.clone(), pool[d - 1].clone()))
            .collect();
        if h.domain_size() + batch.len() > cfg.max_domain {
            out.truncated = true;
            continue;
        }
        out.children.push(h.append_class(&batch).map_err(ModelError::from)?);
    }
    Ok(out)
}

/// Breadth-first search from the empty history. Children of a non-final
/// attainable history append one class built from a nonempty sub-map of its
/// pending queries into the pool; final histories are not expanded. Every
/// child is attainable by construction, so no filtering is needed.
pub fn enumerate_attainable(
    spec: &AlgorithmSpec,
    x: &Structure,
    cfg: &EnumerationConfig,
) -> Result<Enumeration, AnalysisError> {
    let pool = cfg.pool_for(x)?;
    let workers = if cfg.jobs > 1 {
        Some(
            rayon::ThreadPoolBuilder::new()
                .num_threads(cfg.jobs)
                .build()
                .map_err(|e| AnalysisError::Pool(e.to_string()))?,
        )
    } else {
        None
    };
    let mut histories = BTreeSet::new();
    let mut truncated = false;
    let mut frontier = vec![History::empty()];
    while !frontier.is_empty() {
        let expansions: Vec<Result<Expansion, ModelError>> = match &workers {
            Some(w) => w.install(|| frontier.par_iter().map(|h| expand(spec, x, h, &pool, cfg)).collect()),
            None => frontier.iter().map(|h| expand(spec, x, h, &pool, cfg)).collect(),
        };
        histories.extend(frontier.drain(..));
        for e in expansions {
            let e = e?;
            truncated |= e.truncated;
            frontier.extend(e.children);
        }
    }
    Ok(Enumeration { histories, truncated })
}

#[cfg(test)]
mod tests;
