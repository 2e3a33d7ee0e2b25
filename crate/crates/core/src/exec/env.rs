//! Environments answer pending queries one phase at a time.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use super::ExecError;
use crate::history::format::{parse_answer_function_at, print_answer_function};
use crate::history::{AnswerFunction, History, Query};
use crate::structure::Structure;
use crate::text::{Cursor, LexMode, ParseError, Tok};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnvResponse {
    /// Replies that arrive together, forming the next phase.
    Batch(AnswerFunction),
    /// The environment will not answer; the step hangs.
    Stall,
}

/// A source of replies. A batch must be nonempty, answer only pending
/// queries, and use replies from the state's base set.
pub trait Environment {
    fn next_batch(
        &mut self,
        x: &Structure,
        history: &History,
        pending: &BTreeSet<Query>,
    ) -> Result<EnvResponse, ExecError>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ScriptBlock {
    Phase(AnswerFunction),
    Stall,
}

/// Environment script: one `phase { ... }` block or `stall` per line.
///
/// ```text
/// phase { (offer0) -> yes ; (offer1) -> yes }
/// phase { (choose) -> client1 }
/// stall
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Script {
    pub blocks: Vec<ScriptBlock>,
}

impl Script {
    pub fn new(blocks: Vec<ScriptBlock>) -> Self {
        Script { blocks }
    }
}

pub fn parse_script(text: &str) -> Result<Script, ParseError> {
    let mut cur = Cursor::new(text, LexMode::Literal)?;
    let mut blocks = Vec::new();
    while !cur.at_eof() {
        if cur.eat_keyword("stall") {
            blocks.push(ScriptBlock::Stall);
        } else if cur.eat_keyword("phase") {
            let start = cur.span();
            let batch = parse_answer_function_at(&mut cur)?;
            if batch.is_empty() {
                return Err(ParseError::syntax(start, "`{}`", &["a nonempty phase"]));
            }
            blocks.push(ScriptBlock::Phase(batch));
        } else if *cur.peek() == Tok::Semi {
            cur.bump();
        } else {
            return Err(cur.error(&["`phase`", "`stall`"]));
        }
    }
    Ok(Script { blocks })
}

pub fn print_script(script: &Script) -> String {
    let mut out = String::new();
    for b in &script.blocks {
        match b {
            ScriptBlock::Phase(batch) => {
                let _ = writeln!(out, "phase {}", print_answer_function(batch));
            }
            ScriptBlock::Stall => out.push_str("stall\n"),
        }
    }
    out
}

/// Replays a script; once it runs out, every request stalls.
#[derive(Debug, Clone)]
pub struct ScriptedEnvironment {
    script: Script,
    next: usize,
}

impl ScriptedEnvironment {
    pub fn new(script: Script) -> Self {
        ScriptedEnvironment { script, next: 0 }
    }

    /// Number of blocks consumed so far.
    pub fn position(&self) -> usize {
        self.next
    }
}

impl Environment for ScriptedEnvironment {
    fn next_batch(
        &mut self,
        _x: &Structure,
        _history: &History,
        pending: &BTreeSet<Query>,
    ) -> Result<EnvResponse, ExecError> {
        let Some(block) = self.script.blocks.get(self.next) else {
            return Ok(EnvResponse::Stall);
        };
        self.next += 1;
        match block {
            ScriptBlock::Stall => Ok(EnvResponse::Stall),
            ScriptBlock::Phase(batch) => {
                if let Some(q) = batch.keys().find(|q| !pending.contains(q)) {
                    return Err(ExecError::Script {
                        block: self.next,
                        message: format!("{q} is not pending (pending: {})", crate::history::print_query_set(pending)),
                    });
                }
                Ok(EnvResponse::Batch(batch.clone()))
            }
        }
    }
}

/// Answers every pending query at once through a fixed function; useful for
/// driving runs without a script.
pub struct FnEnvironment<F>(pub F);

impl<F> Environment for FnEnvironment<F>
where
    F: FnMut(&Structure, &History, &BTreeSet<Query>) -> EnvResponse,
{
    fn next_batch(
        &mut self,
        x: &Structure,
        history: &History,
        pending: &BTreeSet<Query>,
    ) -> Result<EnvResponse, ExecError> {
        Ok((self.0)(x, history, pending))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{SCRIPT_NO1_STALL, SCRIPT_TIE, SCRIPT_YES0};

    #[test]
    fn bundled_scripts_round_trip() {
        for text in [SCRIPT_YES0, SCRIPT_TIE, SCRIPT_NO1_STALL] {
            let s = parse_script(text).unwrap();
            assert_eq!(print_script(&s), text);
        }
        assert_eq!(parse_script("").unwrap(), Script::default());
        let tie = parse_script(SCRIPT_TIE).unwrap();
        assert_eq!(tie.blocks.len(), 2);
    }

    #[test]
    fn script_errors() {
        assert!(parse_script("phase { }").is_err());
        let err = parse_script("phase { (a) -> b }\nhalt\n").unwrap_err();
        assert_eq!(err.span.line, 2);
    }
}
