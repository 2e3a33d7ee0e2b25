use std::collections::BTreeSet;

use super::eval::Ctx;
use super::{reply_refs, Action, AlgorithmSpec, FailReason, Finality, ModelError, Outcome, Rule, Verdict};
use crate::history::{History, Query};
use crate::structure::{apply_updates, detect_clash, Location, Structure, Update, UpdateSet};

impl AlgorithmSpec {
    /// Queries the issue rules cause on exactly this history.
    pub fn causes(&self, x: &Structure, h: &History) -> Result<BTreeSet<Query>, ModelError> {
        let ctx = Ctx::new(self, x, h);
        let mut out = BTreeSet::new();
        for (rule, template) in self.issue_rules() {
            if !ctx.guard(&rule.guard)? {
                continue;
            }
            match ctx.instance(template)? {
                Some(q) => {
                    out.insert(q);
                }
                None => {
                    return Err(ModelError::Instantiation {
                        rule: rule.name.clone(),
                        template: template.to_string(),
                    })
                }
            }
        }
        Ok(out)
    }

    /// `issued` after each prefix: entry `j` is the issued set of the first
    /// `j` phases, for `j = 0..=len`.
    pub fn issued_by_phase(&self, x: &Structure, h: &History) -> Result<Vec<BTreeSet<Query>>, ModelError> {
        let mut acc = BTreeSet::new();
        let mut out = Vec::with_capacity(h.len() + 1);
        for j in 0..=h.len() {
            acc.extend(self.causes(x, &h.prefix(j))?);
            out.push(acc.clone());
        }
        Ok(out)
    }

    /// Union of `causes` over all initial segments.
    pub fn issued(&self, x: &Structure, h: &History) -> Result<BTreeSet<Query>, ModelError> {
        let mut acc = BTreeSet::new();
        for j in 0..=h.len() {
            acc.extend(self.causes(x, &h.prefix(j))?);
        }
        Ok(acc)
    }

    /// Queries caused by `h` that no proper initial segment already issued.
    pub fn newly_caused(&self, x: &Structure, h: &History) -> Result<BTreeSet<Query>, ModelError> {
        let mut now = self.causes(x, h)?;
        if !h.is_empty() {
            let before = self.issued(x, &h.prefix(h.len() - 1))?;
            now.retain(|q| !before.contains(q));
        }
        Ok(now)
    }

    pub fn pending(&self, x: &Structure, h: &History) -> Result<BTreeSet<Query>, ModelError> {
        let mut p = self.issued(x, h)?;
        p.retain(|q| !h.contains(q));
        Ok(p)
    }

    /// Every answered query was issued by the prefix strictly before its
    /// phase.
    pub fn is_coherent(&self, x: &Structure, h: &History) -> Result<bool, ModelError> {
        let mut acc = BTreeSet::new();
        for j in 0..h.len() {
            acc.extend(self.causes(x, &h.prefix(j))?);
            if h.class(j).keys().any(|q| !acc.contains(q)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn is_complete(&self, x: &Structure, h: &History) -> Result<bool, ModelError> {
        Ok(self.pending(x, h)?.is_empty())
    }

    /// Names of the success and fail rules whose guards hold of `h`.
    pub fn final_matches(&self, x: &Structure, h: &History) -> Result<(Vec<String>, Vec<String>), ModelError> {
        let ctx = Ctx::new(self, x, h);
        let (mut ok, mut bad) = (Vec::new(), Vec::new());
        for (rule, outcome) in self.final_rules() {
            if ctx.guard(&rule.guard)? {
                match outcome {
                    Outcome::Succeed => ok.push(rule.name.clone()),
                    Outcome::Fail => bad.push(rule.name.clone()),
                }
            }
        }
        Ok((ok, bad))
    }

    /// Final when a final rule matches or (outside strict mode) when `h` is
    /// complete. A final history fails if any fail rule matches or its update
    /// set clashes, and succeeds otherwise.
    pub fn verdict(&self, x: &Structure, h: &History) -> Result<Verdict, ModelError> {
        let (ok, bad) = self.final_matches(x, h)?;
        let is_final = !ok.is_empty()
            || !bad.is_empty()
            || (self.finality == Finality::Implicit && self.is_complete(x, h)?);
        if !is_final {
            return Ok(Verdict::NotFinal);
        }
        if let Some(rule) = bad.into_iter().next() {
            return Ok(Verdict::Fail(FailReason::Rule(rule)));
        }
        if let Some(loc) = detect_clash(&self.update_set(x, h)?) {
            return Ok(Verdict::Fail(FailReason::Clash(loc)));
        }
        Ok(Verdict::Success)
    }

    /// Coherent, and no proper initial segment is final.
    pub fn is_attainable(&self, x: &Structure, h: &History) -> Result<bool, ModelError> {
        if !self.is_coherent(x, h)? {
            return Ok(false);
        }
        for j in 0..h.len() {
            if self.verdict(x, &h.prefix(j))?.is_final() {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Updates of every update rule whose guard holds; evaluated on any
    /// history, final or not. Trivial updates are kept.
    pub fn update_set(&self, x: &Structure, h: &History) -> Result<UpdateSet, ModelError> {
        let ctx = Ctx::new(self, x, h);
        let mut out = UpdateSet::new();
        for rule in self.update_rules() {
            if !ctx.guard(&rule.guard)? {
                continue;
            }
            let Action::Update { symbol, args, value } = &rule.action else { continue };
            let mut vals = Vec::with_capacity(args.len());
            for t in args.iter().chain(std::iter::once(value)) {
                match ctx.term(t)? {
                    Some(e) => vals.push(e),
                    None => return Err(unresolved(&ctx, rule, t)),
                }
            }
            let value = vals.pop().expect("value term evaluated");
            out.insert(Update {
                location: Location::new(symbol, vals),
                value,
            });
        }
        Ok(out)
    }

    /// `apply_updates(x, update_set(x, h))` for a successful final `h`.
    pub fn next_state(&self, x: &Structure, h: &History) -> Result<Structure, ModelError> {
        match self.verdict(x, h)? {
            Verdict::Success => Ok(apply_updates(x, &self.update_set(x, h)?)?),
            other => Err(ModelError::NotSuccessful(other)),
        }
    }
}

fn unresolved(ctx: &Ctx, rule: &Rule, t: &crate::structure::Term) -> ModelError {
    let template = reply_refs(t)
        .into_iter()
        .find(|q| !matches!(ctx.reply(q), Ok(Some(_))))
        .unwrap_or_default();
    ModelError::Instantiation {
        rule: rule.name.clone(),
        template,
    }
}
