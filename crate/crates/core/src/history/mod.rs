//! Queries, answer functions and histories.
//!
//! A [`History`] pairs an answer function with a linear pre-order of its
//! domain. The pre-order is stored as a phase index per query, contiguous
//! from zero: queries in the same phase were answered simultaneously, and a
//! lower phase means an earlier reply. Every initial segment is then a prefix
//! made of the first `j` phase classes.

mod complete;
pub mod format;

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::structure::{Element, Isomorphism, StructureError, Transport};

pub use complete::complete_history;
pub use format::{parse_answer_function, parse_history, parse_query, print_answer_function, print_query_set};

/// Algorithm-supplied token usable as a query component.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(name: &str) -> Self {
        Label(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Component {
    Label(Label),
    Element(Element),
}

/// A potential query: a nonempty tuple over elements and labels. Equality is
/// structural.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Query(Vec<Component>);

impl Query {
    pub fn new(components: Vec<Component>) -> Self {
        assert!(!components.is_empty(), "queries are nonempty tuples");
        Query(components)
    }

    /// Query made of a single label.
    pub fn label(name: &str) -> Self {
        Query(vec![Component::Label(Label::new(name))])
    }

    pub fn components(&self) -> &[Component] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn elements(&self) -> impl Iterator<Item = &Element> {
        self.0.iter().filter_map(|c| match c {
            Component::Element(e) => Some(e),
            Component::Label(_) => None,
        })
    }
}

/// Finite map from queries to replies.
pub type AnswerFunction = BTreeMap<Query, Element>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Answer {
    pub reply: Element,
    pub phase: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HistoryError {
    #[error("phase labels are not contiguous from 0")]
    NonContiguousPhases,
    #[error("phase assignment and answer function have different domains")]
    DomainMismatch,
    #[error("query {0} is not in the history's domain")]
    QueryNotInDomain(Query),
    #[error("query {0} is already answered")]
    OverlappingDomain(Query),
    #[error("a phase must contain at least one reply")]
    EmptyBatch,
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("history still incomplete after {0} completion rounds")]
    CapExceeded(usize),
}

/// Answer function plus a linear pre-order of its domain, in canonical
/// contiguous-phase form.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct History {
    entries: BTreeMap<Query, Answer>,
    len: usize,
}

impl History {
    pub fn empty() -> Self {
        History::default()
    }

    /// Builds a history from an answer function and a phase labeling. With
    /// `normalize`, any order-isomorphic labeling is mapped onto the
    /// canonical one (`{q ↦ 5}` becomes `{q ↦ 0}`); without it, gaps are an
    /// error.
    pub fn new(
        answers: &AnswerFunction,
        phase: &BTreeMap<Query, usize>,
        normalize: bool,
    ) -> Result<History, HistoryError> {
        if answers.len() != phase.len() || answers.keys().any(|q| !phase.contains_key(q)) {
            return Err(HistoryError::DomainMismatch);
        }
        let used: BTreeSet<usize> = phase.values().copied().collect();
        let contiguous = used.iter().copied().eq(0..used.len());
        if !contiguous && !normalize {
            return Err(HistoryError::NonContiguousPhases);
        }
        let rank: BTreeMap<usize, usize> = used.iter().enumerate().map(|(i, p)| (*p, i)).collect();
        let entries = answers
            .iter()
            .map(|(q, r)| {
                (
                    q.clone(),
                    Answer {
                        reply: r.clone(),
                        phase: rank[&phase[q]],
                    },
                )
            })
            .collect();
        Ok(History {
            entries,
            len: used.len(),
        })
    }

    /// Number of phase classes.
    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn domain_size(&self) -> usize {
        self.entries.len()
    }

    pub fn domain(&self) -> impl Iterator<Item = &Query> {
        self.entries.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&Query, &Answer)> {
        self.entries.iter()
    }

    pub fn contains(&self, q: &Query) -> bool {
        self.entries.contains_key(q)
    }

    pub fn reply(&self, q: &Query) -> Option<&Element> {
        self.entries.get(q).map(|a| &a.reply)
    }

    pub fn phase(&self, q: &Query) -> Option<usize> {
        self.entries.get(q).map(|a| a.phase)
    }

    pub fn answers(&self) -> AnswerFunction {
        self.entries
            .iter()
            .map(|(q, a)| (q.clone(), a.reply.clone()))
            .collect()
    }

    pub fn phases(&self) -> BTreeMap<Query, usize> {
        self.entries.iter().map(|(q, a)| (q.clone(), a.phase)).collect()
    }

    /// Replies received, i.e. the range of the answer function.
    pub fn range(&self) -> BTreeSet<Element> {
        self.entries.values().map(|a| a.reply.clone()).collect()
    }

    /// Queries answered in phase `j`.
    pub fn class(&self, j: usize) -> AnswerFunction {
        self.entries
            .iter()
            .filter(|(_, a)| a.phase == j)
            .map(|(q, a)| (q.clone(), a.reply.clone()))
            .collect()
    }

    /// `p ≤ q` in the history's pre-order.
    pub fn precedes(&self, p: &Query, q: &Query) -> Option<bool> {
        Some(self.phase(p)? <= self.phase(q)?)
    }

    /// `p < q`: the reply to `p` arrived in a strictly earlier phase.
    pub fn strictly_before(&self, p: &Query, q: &Query) -> Option<bool> {
        Some(self.phase(p)? < self.phase(q)?)
    }

    pub fn simultaneous(&self, p: &Query, q: &Query) -> Option<bool> {
        Some(self.phase(p)? == self.phase(q)?)
    }

    /// The initial segment made of the first `j` phase classes.
    pub fn prefix(&self, j: usize) -> History {
        if j >= self.len {
            return self.clone();
        }
        History {
            entries: self
                .entries
                .iter()
                .filter(|(_, a)| a.phase < j)
                .map(|(q, a)| (q.clone(), a.clone()))
                .collect(),
            len: j,
        }
    }

    /// `self ⊴ of`: `self` is a down-closed restriction of `of`, with the same
    /// answers and the restricted pre-order.
    pub fn is_initial_segment(&self, of: &History) -> bool {
        self.len <= of.len && *self == of.prefix(self.len)
    }

    /// All `len + 1` initial segments, shortest first.
    pub fn initial_segments(&self) -> Vec<History> {
        (0..=self.len).map(|j| self.prefix(j)).collect()
    }

    /// `ξ ↾ (<q)`: entries answered strictly before `q`.
    pub fn restrict_before(&self, q: &Query) -> Result<History, HistoryError> {
        let p = self
            .phase(q)
            .ok_or_else(|| HistoryError::QueryNotInDomain(q.clone()))?;
        Ok(self.prefix(p))
    }

    /// `ξ ↾ (≤q)`: entries answered no later than `q`.
    pub fn restrict_upto(&self, q: &Query) -> Result<History, HistoryError> {
        let p = self
            .phase(q)
            .ok_or_else(|| HistoryError::QueryNotInDomain(q.clone()))?;
        Ok(self.prefix(p + 1))
    }

    /// Extends the history by one new phase class holding all of `batch`.
    pub fn append_class(&self, batch: &AnswerFunction) -> Result<History, HistoryError> {
        if batch.is_empty() {
            return Err(HistoryError::EmptyBatch);
        }
        if let Some(q) = batch.keys().find(|q| self.contains(q)) {
            return Err(HistoryError::OverlappingDomain(q.clone()));
        }
        let mut next = self.clone();
        for (q, r) in batch {
            next.entries.insert(
                q.clone(),
                Answer {
                    reply: r.clone(),
                    phase: self.len,
                },
            );
        }
        next.len += 1;
        Ok(next)
    }

    fn sort_key(&self) -> Vec<(usize, &Query, &Element)> {
        let mut key: Vec<_> = self
            .entries
            .iter()
            .map(|(q, a)| (a.phase, q, &a.reply))
            .collect();
        key.sort();
        key
    }
}

/// Histories order by length first, then by their entries listed phase by
/// phase. Divergence witnesses use this order, so "least" means "shortest".
impl Ord for History {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len
            .cmp(&other.len)
            .then_with(|| self.domain_size().cmp(&other.domain_size()))
            .then_with(|| self.sort_key().cmp(&other.sort_key()))
    }
}

impl PartialOrd for History {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Checks that two segments of `whole` are comparable under `⊴`. Always true
/// when the precondition holds; exists as an executable statement of that
/// fact.
pub fn common_prefix_comparable(a: &History, b: &History, whole: &History) -> Result<bool, HistoryError> {
    if !a.is_initial_segment(whole) || !b.is_initial_segment(whole) {
        return Err(HistoryError::PreconditionViolation(
            "both histories must be initial segments of the third".into(),
        ));
    }
    Ok(a.is_initial_segment(b) || b.is_initial_segment(a))
}

impl Transport for Query {
    fn transport(&self, iso: &Isomorphism) -> Result<Self, StructureError> {
        let comps = self
            .0
            .iter()
            .map(|c| match c {
                Component::Label(l) => Ok(Component::Label(l.clone())),
                Component::Element(e) => iso.image(e).map(Component::Element),
            })
            .collect::<Result<_, _>>()?;
        Ok(Query(comps))
    }
}

impl Transport for History {
    fn transport(&self, iso: &Isomorphism) -> Result<Self, StructureError> {
        let mut entries = BTreeMap::new();
        for (q, a) in &self.entries {
            entries.insert(
                q.transport(iso)?,
                Answer {
                    reply: iso.image(&a.reply)?,
                    phase: a.phase,
                },
            );
        }
        Ok(History {
            entries,
            len: self.len,
        })
    }
}

impl Transport for AnswerFunction {
    fn transport(&self, iso: &Isomorphism) -> Result<Self, StructureError> {
        self.iter()
            .map(|(q, r)| Ok((q.transport(iso)?, iso.image(r)?)))
            .collect()
    }
}

impl Transport for BTreeSet<Query> {
    fn transport(&self, iso: &Isomorphism) -> Result<Self, StructureError> {
        self.iter().map(|q| q.transport(iso)).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use proptest::prelude::*;

    use super::*;

    fn q(name: &str) -> Query {
        Query::label(name)
    }

    fn e(name: &str) -> Element {
        Element::new(name)
    }

    fn answers(pairs: &[(&str, &str)]) -> AnswerFunction {
        pairs.iter().map(|(k, v)| (q(k), e(v))).collect()
    }

    fn hist(pairs: &[(&str, &str, usize)]) -> History {
        let a = pairs.iter().map(|(k, v, _)| (q(k), e(v))).collect();
        let p = pairs.iter().map(|(k, _, p)| (q(k), *p)).collect();
        History::new(&a, &p, false).unwrap()
    }

    #[test]
    fn construction_and_normalization() {
        let h = History::new(&AnswerFunction::new(), &BTreeMap::new(), false).unwrap();
        assert_eq!((h.len(), h.domain_size()), (0, 0));

        let a = answers(&[("q", "a")]);
        let p: BTreeMap<_, _> = [(q("q"), 5)].into_iter().collect();
        assert_eq!(History::new(&a, &p, true).unwrap(), hist(&[("q", "a", 0)]));
        assert_eq!(History::new(&a, &p, false), Err(HistoryError::NonContiguousPhases));
        let other: BTreeMap<_, _> = [(q("r"), 0)].into_iter().collect();
        assert_eq!(History::new(&a, &other, true), Err(HistoryError::DomainMismatch));

        let sim = hist(&[("q", "a", 0), ("r", "b", 0)]);
        assert_eq!(sim.len(), 1);
        assert_eq!(sim.simultaneous(&q("q"), &q("r")), Some(true));
    }

    #[test]
    fn initial_segment_examples() {
        let xi = hist(&[("q", "a", 0), ("r", "b", 0), ("s", "c", 1)]);
        assert!(History::empty().is_initial_segment(&xi));
        assert!(xi.is_initial_segment(&xi));
        // one query of a simultaneous class is not ≡-closed
        assert!(!hist(&[("q", "a", 0)]).is_initial_segment(&xi));
        assert!(hist(&[("q", "a", 0), ("r", "b", 0)]).is_initial_segment(&xi));
        // same domain, different order
        assert!(!hist(&[("q", "a", 0), ("r", "b", 1)]).is_initial_segment(&xi));
        // disagreeing reply
        assert!(!hist(&[("q", "z", 0), ("r", "b", 0)]).is_initial_segment(&xi));
    }

    #[test]
    fn initial_segments_counts() {
        assert_eq!(History::empty().initial_segments(), vec![History::empty()]);
        let two = hist(&[("a", "x", 0), ("b", "y", 1)]);
        assert_eq!(two.initial_segments().len(), 3);
    }

    #[test]
    fn restrictions() {
        let xi = hist(&[("q", "a", 0), ("r", "b", 0), ("s", "c", 1)]);
        assert_eq!(xi.restrict_before(&q("q")).unwrap(), History::empty());
        assert_eq!(xi.restrict_before(&q("s")).unwrap(), xi.prefix(1));
        assert!(!xi.restrict_before(&q("r")).unwrap().contains(&q("q")));
        assert_eq!(xi.restrict_upto(&q("s")).unwrap(), xi);
        assert_eq!(xi.restrict_upto(&q("q")).unwrap(), xi.prefix(1));
        assert!(xi.restrict_upto(&q("q")).unwrap().contains(&q("r")));
        assert_eq!(
            xi.restrict_before(&q("zz")),
            Err(HistoryError::QueryNotInDomain(q("zz")))
        );
    }

    #[test]
    fn append_paths() {
        let one = History::empty().append_class(&answers(&[("offer0", "yes")])).unwrap();
        assert_eq!(one, hist(&[("offer0", "yes", 0)]));
        let two = one.append_class(&answers(&[("offer1", "no")])).unwrap();
        assert_eq!(two.strictly_before(&q("offer0"), &q("offer1")), Some(true));
        assert_eq!(
            two.append_class(&answers(&[("offer0", "no")])),
            Err(HistoryError::OverlappingDomain(q("offer0")))
        );
        assert_eq!(two.append_class(&AnswerFunction::new()), Err(HistoryError::EmptyBatch));
    }

    #[test]
    fn comparable_precondition() {
        let xi = hist(&[("a", "x", 0), ("b", "y", 1), ("c", "z", 2)]);
        assert_eq!(common_prefix_comparable(&xi.prefix(1), &xi.prefix(2), &xi), Ok(true));
        assert_eq!(common_prefix_comparable(&xi, &xi, &xi), Ok(true));
        let stranger = hist(&[("b", "y", 0)]);
        assert!(common_prefix_comparable(&stranger, &xi, &xi).is_err());
    }

    /// Oracle for `initial_segments`: every subset of the domain that is
    /// down-closed under ≤ξ, restricted and renormalized.
    fn brute_force_segments(xi: &History) -> BTreeSet<History> {
        let dom: Vec<Query> = xi.domain().cloned().collect();
        let mut out = BTreeSet::new();
        for mask in 0u32..(1 << dom.len()) {
            let subset: Vec<&Query> = (0..dom.len()).filter(|i| mask >> i & 1 == 1).map(|i| &dom[i]).collect();
            let down_closed = subset.iter().all(|y| {
                dom.iter()
                    .filter(|x| xi.precedes(x, y) == Some(true))
                    .all(|x| subset.contains(&x))
            });
            if down_closed {
                let a = subset.iter().map(|q| ((*q).clone(), xi.reply(q).unwrap().clone())).collect();
                let p = subset.iter().map(|q| ((*q).clone(), xi.phase(q).unwrap())).collect();
                out.insert(History::new(&a, &p, true).unwrap());
            }
        }
        out
    }

    pub(crate) fn arb_history() -> impl Strategy<Value = History> {
        let names = ["a", "b", "c", "d", "e"];
        proptest::collection::btree_map(0usize..5, (0usize..3, 0usize..4), 0..5).prop_map(move |m| {
            let a = m.iter().map(|(k, (r, _))| (q(names[*k]), e(names[*r]))).collect();
            let p = m.iter().map(|(k, (_, ph))| (q(names[*k]), *ph)).collect();
            History::new(&a, &p, true).unwrap()
        })
    }

    proptest! {
        #[test]
        fn segments_match_brute_force(xi in arb_history()) {
            let fast: BTreeSet<History> = xi.initial_segments().into_iter().collect();
            prop_assert_eq!(fast, brute_force_segments(&xi));
        }

        #[test]
        fn segment_relation_is_transitive_and_closed(xi in arb_history()) {
            for eta in xi.initial_segments() {
                for zeta in eta.initial_segments() {
                    prop_assert!(zeta.is_initial_segment(&xi));
                }
                // ≡-closure: a member's whole class is present
                for qq in eta.domain() {
                    for other in xi.domain() {
                        if xi.simultaneous(qq, other) == Some(true) {
                            prop_assert!(eta.contains(other));
                        }
                    }
                }
            }
        }

        #[test]
        fn restrictions_nest(xi in arb_history()) {
            for qq in xi.domain() {
                let before = xi.restrict_before(qq).unwrap();
                let upto = xi.restrict_upto(qq).unwrap();
                prop_assert!(before.is_initial_segment(&upto));
                prop_assert!(upto.is_initial_segment(&xi));
            }
        }

        #[test]
        fn append_extends_segment_list(xi in arb_history(), r in 0usize..3) {
            let batch: AnswerFunction = [(q("fresh"), e(["x", "y", "z"][r]))].into_iter().collect();
            let next = xi.append_class(&batch).unwrap();
            let mut expected = xi.initial_segments();
            expected.push(next.clone());
            prop_assert_eq!(next.initial_segments(), expected);
        }

        #[test]
        fn normalization_is_idempotent(xi in arb_history()) {
            let again = History::new(&xi.answers(), &xi.phases(), true).unwrap();
            prop_assert_eq!(&again, &xi);
            prop_assert_eq!(History::new(&again.answers(), &again.phases(), false).unwrap(), xi);
        }

        #[test]
        fn co_prefixes_are_comparable(xi in arb_history(), i in 0usize..6, j in 0usize..6) {
            let segs = xi.initial_segments();
            let a = &segs[i % segs.len()];
            let b = &segs[j % segs.len()];
            prop_assert_eq!(common_prefix_comparable(a, b, &xi), Ok(true));
        }
    }
}
