use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use super::env::{EnvResponse, Environment};
use super::ExecError;
use crate::history::format::parse_query_at;
use crate::history::{print_query_set, AnswerFunction, History, Query};
use crate::structure::{Element, Structure};
use crate::text::{Cursor, LexMode, Tok};

/// A person plays the environment. Each phase shows the pending queries and
/// reads commands until `go` or `stall`:
///
/// ```text
/// answer (offer0) = yes
/// go
/// ```
///
/// End of input counts as `stall`.
pub struct InteractiveEnvironment<R, W> {
    input: R,
    output: W,
    phase: usize,
}

enum Command {
    Answer(Query, Element),
    Go,
    Stall,
}

fn parse_command(line: &str) -> Result<Option<Command>, String> {
    let mut cur = Cursor::new(line, LexMode::Literal).map_err(|e| e.message)?;
    if cur.at_eof() {
        return Ok(None);
    }
    let cmd = if cur.eat_keyword("go") {
        Command::Go
    } else if cur.eat_keyword("stall") {
        Command::Stall
    } else if cur.eat_keyword("answer") {
        let q = parse_query_at(&mut cur).map_err(|e| e.message)?;
        cur.expect(&Tok::Eq).map_err(|e| e.message)?;
        cur.eat(&Tok::Hash);
        let (r, _) = cur.expect_name("reply element").map_err(|e| e.message)?;
        Command::Answer(q, Element::new(&r))
    } else {
        return Err("commands: answer (q) = element | go | stall".into());
    };
    cur.expect_eof().map_err(|e| e.message)?;
    Ok(Some(cmd))
}

impl<R: BufRead, W: Write> InteractiveEnvironment<R, W> {
    pub fn new(input: R, output: W) -> Self {
        InteractiveEnvironment {
            input,
            output,
            phase: 0,
        }
    }

    pub fn into_output(self) -> W {
        self.output
    }

    fn say(&mut self, text: &str) -> Result<(), ExecError> {
        writeln!(self.output, "{text}").map_err(|e| ExecError::Io(e.to_string()))
    }
}

impl<R: BufRead, W: Write> Environment for InteractiveEnvironment<R, W> {
    fn next_batch(
        &mut self,
        x: &Structure,
        _history: &History,
        pending: &BTreeSet<Query>,
    ) -> Result<EnvResponse, ExecError> {
        self.say(&format!("phase {}: pending {}", self.phase, print_query_set(pending)))?;
        let mut batch = AnswerFunction::new();
        loop {
            write!(self.output, "> ").map_err(|e| ExecError::Io(e.to_string()))?;
            self.output.flush().map_err(|e| ExecError::Io(e.to_string()))?;
            let mut line = String::new();
            let n = self
                .input
                .read_line(&mut line)
                .map_err(|e| ExecError::Io(e.to_string()))?;
            if n == 0 {
                self.say("")?;
                return Ok(EnvResponse::Stall);
            }
            match parse_command(line.trim()) {
                Ok(None) => {}
                Ok(Some(Command::Stall)) => return Ok(EnvResponse::Stall),
                Ok(Some(Command::Go)) if batch.is_empty() => {
                    self.say("answer at least one pending query before `go`")?;
                }
                Ok(Some(Command::Go)) => {
                    self.phase += 1;
                    return Ok(EnvResponse::Batch(batch));
                }
                Ok(Some(Command::Answer(q, r))) => {
                    if !pending.contains(&q) {
                        self.say(&format!("{q} is not pending"))?;
                    } else if !x.contains(&r) {
                        self.say(&format!("`{r}` is not an element of the state"))?;
                    } else {
                        batch.insert(q, r);
                    }
                }
                Err(msg) => self.say(&msg)?,
            }
        }
    }
}
