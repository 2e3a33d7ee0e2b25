use std::cell::RefCell;
use std::collections::BTreeMap;

use super::{reply_refs, AlgorithmSpec, Guard, ModelError, TemplateComponent};
use crate::history::{Component, History, Query};
use crate::structure::{eval_term, Element, Structure, Term, Valuation, Var};

/// Evaluation of guards, terms and templates at one (state, history) pair.
/// Template instances are memoized; `None` means "not instantiable here".
pub(crate) struct Ctx<'a> {
    pub spec: &'a AlgorithmSpec,
    pub x: &'a Structure,
    pub h: &'a History,
    instances: RefCell<BTreeMap<String, Option<Query>>>,
}

impl<'a> Ctx<'a> {
    pub fn new(spec: &'a AlgorithmSpec, x: &'a Structure, h: &'a History) -> Self {
        Ctx {
            spec,
            x,
            h,
            instances: RefCell::new(BTreeMap::new()),
        }
    }

    /// The query `name` denotes on this history, if all replies it reads
    /// have arrived.
    pub fn instance(&self, name: &str) -> Result<Option<Query>, ModelError> {
        if let Some(q) = self.instances.borrow().get(name) {
            return Ok(q.clone());
        }
        let template = self.spec.template(name)?;
        let mut comps = Vec::with_capacity(template.components.len());
        let mut ok = true;
        for c in &template.components {
            match c {
                TemplateComponent::Label(l) => comps.push(Component::Label(l.clone())),
                TemplateComponent::Term(t) => match self.term(t)? {
                    Some(e) => comps.push(Component::Element(e)),
                    None => {
                        ok = false;
                        break;
                    }
                },
            }
        }
        let q = ok.then(|| Query::new(comps));
        self.instances.borrow_mut().insert(name.to_string(), q.clone());
        Ok(q)
    }

    /// Reply to the instance of `name`, if answered.
    pub fn reply(&self, name: &str) -> Result<Option<Element>, ModelError> {
        Ok(self
            .instance(name)?
            .and_then(|q| self.h.reply(&q).cloned()))
    }

    fn phase(&self, name: &str) -> Result<Option<usize>, ModelError> {
        Ok(self.instance(name)?.and_then(|q| self.h.phase(&q)))
    }

    /// Value of `t`, or `None` when it reads an unanswered reply.
    pub fn term(&self, t: &Term) -> Result<Option<Element>, ModelError> {
        let mut val = Valuation::new();
        for q in reply_refs(t) {
            match self.reply(&q)? {
                Some(e) => {
                    val.insert(Var::Reply(q), e);
                }
                None => return Ok(None),
            }
        }
        Ok(Some(eval_term(self.x, t, &val)?))
    }

    pub fn guard(&self, g: &Guard) -> Result<bool, ModelError> {
        Ok(match g {
            Guard::Start => true,
            Guard::Answered(q) => self.reply(q)?.is_some(),
            Guard::Unanswered(q) => self.reply(q)?.is_none(),
            Guard::ReplyEq(q, t) => match (self.reply(q)?, self.term(t)?) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
            Guard::Before(a, b) => match (self.phase(a)?, self.phase(b)?) {
                (Some(pa), Some(pb)) => pa < pb,
                _ => false,
            },
            Guard::Simultaneous(a, b) => match (self.phase(a)?, self.phase(b)?) {
                (Some(pa), Some(pb)) => pa == pb,
                _ => false,
            },
            Guard::TermEq(a, b) => match (self.term(a)?, self.term(b)?) {
                (Some(a), Some(b)) => a == b,
                _ => false,
            },
            Guard::Not(g) => !self.guard(g)?,
            Guard::And(a, b) => self.guard(a)? && self.guard(b)?,
            Guard::Or(a, b) => self.guard(a)? || self.guard(b)?,
        })
    }
}
