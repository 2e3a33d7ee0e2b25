use std::collections::BTreeSet;

use super::{AnswerFunction, History, HistoryError, Query};

/// Extends `xi` to a complete history: while some issued query is unanswered,
/// `chooser` answers all of them in one new phase. Every intermediate history
/// is an initial segment of the result, so coherence of `xi` is preserved.
///
/// `issued` computes the queries issued after a history; `chooser` must
/// return an answer function whose domain is exactly the pending set it is
/// given. Fails with [`HistoryError::CapExceeded`] after `cap` rounds.
pub fn complete_history<E, I, C>(mut issued: I, xi: &History, mut chooser: C, cap: usize) -> Result<History, E>
where
    E: From<HistoryError>,
    I: FnMut(&History) -> Result<BTreeSet<Query>, E>,
    C: FnMut(&BTreeSet<Query>) -> AnswerFunction,
{
    let mut cur = xi.clone();
    let mut rounds = 0;
    loop {
        let pending: BTreeSet<Query> = issued(&cur)?
            .into_iter()
            .filter(|q| !cur.contains(q))
            .collect();
        if pending.is_empty() {
            return Ok(cur);
        }
        if rounds == cap {
            return Err(HistoryError::CapExceeded(cap).into());
        }
        let batch = chooser(&pending);
        if !batch.keys().eq(pending.iter()) {
            return Err(HistoryError::PreconditionViolation(
                "chooser must answer exactly the pending queries".into(),
            )
            .into());
        }
        cur = cur.append_class(&batch)?;
        rounds += 1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structure::Element;

    /// Issues `a` at start, then `b` once `a` is answered.
    fn chain(h: &History) -> Result<BTreeSet<Query>, HistoryError> {
        let mut out: BTreeSet<Query> = [Query::label("a")].into_iter().collect();
        if h.contains(&Query::label("a")) {
            out.insert(Query::label("b"));
        }
        Ok(out)
    }

    fn answer_all(p: &BTreeSet<Query>) -> AnswerFunction {
        p.iter().map(|q| (q.clone(), Element::new("x"))).collect()
    }

    #[test]
    fn completes_and_keeps_prefix() {
        let done = complete_history(chain, &History::empty(), answer_all, 10).unwrap();
        assert_eq!(done.len(), 2);
        assert!(History::empty().is_initial_segment(&done));
        let again = complete_history(chain, &done, answer_all, 0).unwrap();
        assert_eq!(again, done);
    }

    #[test]
    fn cap_and_bad_chooser() {
        assert_eq!(
            complete_history(chain, &History::empty(), answer_all, 1),
            Err(HistoryError::CapExceeded(1))
        );
        let r = complete_history(chain, &History::empty(), |_| AnswerFunction::new(), 5);
        assert!(matches!(r, Err(HistoryError::PreconditionViolation(_))));
    }
}
