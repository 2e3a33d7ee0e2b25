//! Literal syntax for queries, answer functions and histories.
//!
//! ```text
//! (offer0, #client0)                           query: labels bare, elements with `#`
//! { (offer0) -> yes ; (offer1) -> no }         answer function
//! { (offer0) -> yes @0 ; (offer1) -> no @1 }   history: reply plus phase
//! {}                                           the empty history
//! ```
//!
//! Replies are bare element names (a leading `#` is accepted). Histories
//! print their entries phase by phase and the printer's output parses back
//! to an equal value.

use std::collections::BTreeMap;
use std::fmt;

use super::{AnswerFunction, Component, History, Label, Query};
use crate::structure::Element;
use crate::text::{Cursor, LexMode, ParseError, Tok};

pub(crate) fn parse_query_at(cur: &mut Cursor) -> Result<Query, ParseError> {
    cur.expect(&Tok::LParen)?;
    let mut comps = Vec::new();
    loop {
        if cur.eat(&Tok::Hash) {
            let (name, _) = cur.expect_name("element name")?;
            comps.push(Component::Element(Element::new(&name)));
        } else {
            let (name, _) = cur.expect_name("label or `#element`")?;
            comps.push(Component::Label(Label::new(&name)));
        }
        if !cur.eat(&Tok::Comma) {
            break;
        }
    }
    cur.expect(&Tok::RParen)?;
    Ok(Query::new(comps))
}

fn parse_reply(cur: &mut Cursor) -> Result<Element, ParseError> {
    cur.eat(&Tok::Hash);
    let (name, _) = cur.expect_name("reply element")?;
    Ok(Element::new(&name))
}

/// Parses `{ entry ; ... }`, where each entry is `query -> reply` followed by
/// `@phase` when `with_phase`. A trailing `;` is allowed.
fn parse_entries(
    cur: &mut Cursor,
    with_phase: bool,
) -> Result<Vec<(Query, Element, Option<usize>)>, ParseError> {
    cur.expect(&Tok::LBrace)?;
    let mut out: Vec<(Query, Element, Option<usize>)> = Vec::new();
    while *cur.peek() != Tok::RBrace {
        let start = cur.span();
        let q = parse_query_at(cur)?;
        cur.expect(&Tok::Arrow)?;
        let r = parse_reply(cur)?;
        let phase = if with_phase {
            cur.expect(&Tok::At)?;
            Some(cur.expect_int("phase number")?.0 as usize)
        } else {
            None
        };
        if out.iter().any(|(p, _, _)| *p == q) {
            return Err(ParseError::name(start, format!("query {q} listed twice")));
        }
        out.push((q, r, phase));
        if !cur.eat(&Tok::Semi) {
            break;
        }
    }
    cur.expect(&Tok::RBrace)?;
    Ok(out)
}

pub(crate) fn parse_answer_function_at(cur: &mut Cursor) -> Result<AnswerFunction, ParseError> {
    Ok(parse_entries(cur, false)?
        .into_iter()
        .map(|(q, r, _)| (q, r))
        .collect())
}

/// Phase numbers may have gaps; they are normalized to the canonical
/// contiguous labeling.
pub(crate) fn parse_history_at(cur: &mut Cursor) -> Result<History, ParseError> {
    let start = cur.span();
    let entries = parse_entries(cur, true)?;
    let mut answers = AnswerFunction::new();
    let mut phases = BTreeMap::new();
    for (q, r, p) in entries {
        phases.insert(q.clone(), p.unwrap_or(0));
        answers.insert(q, r);
    }
    History::new(&answers, &phases, true).map_err(|e| ParseError::name(start, e.to_string()))
}

fn whole<T>(text: &str, f: impl FnOnce(&mut Cursor) -> Result<T, ParseError>) -> Result<T, ParseError> {
    let mut cur = Cursor::new(text, LexMode::Literal)?;
    let v = f(&mut cur)?;
    cur.expect_eof()?;
    Ok(v)
}

pub fn parse_query(text: &str) -> Result<Query, ParseError> {
    whole(text, parse_query_at)
}

pub fn parse_answer_function(text: &str) -> Result<AnswerFunction, ParseError> {
    whole(text, parse_answer_function_at)
}

pub fn parse_history(text: &str) -> Result<History, ParseError> {
    whole(text, parse_history_at)
}

pub fn print_answer_function(a: &AnswerFunction) -> String {
    if a.is_empty() {
        return "{}".into();
    }
    let parts: Vec<String> = a.iter().map(|(q, r)| format!("{q} -> {r}")).collect();
    format!("{{ {} }}", parts.join(" ; "))
}

/// `{(offer0), (offer1)}`; `{}` when empty.
pub fn print_query_set<'a>(qs: impl IntoIterator<Item = &'a Query>) -> String {
    let parts: Vec<String> = qs.into_iter().map(|q| q.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

impl fmt::Display for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Component::Label(l) => write!(f, "{l}"),
            Component::Element(e) => write!(f, "#{e}"),
        }
    }
}

impl fmt::Display for Query {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{c}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Display for History {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return f.write_str("{}");
        }
        let mut items: Vec<_> = self.entries.iter().collect();
        items.sort_by(|a, b| (a.1.phase, a.0).cmp(&(b.1.phase, b.0)));
        let parts: Vec<String> = items
            .iter()
            .map(|(q, a)| format!("{q} -> {} @{}", a.reply, a.phase))
            .collect();
        write!(f, "{{ {} }}", parts.join(" ; "))
    }
}
