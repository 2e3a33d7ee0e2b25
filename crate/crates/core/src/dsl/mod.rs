//! The `.isa` specification language.
//!
//! ```text
//! algorithm NAME
//! [finality strict]
//! vocabulary { static f/0  dynamic owner/0 ... }
//! labels { offer0 ... }
//! state X0 { base ... interp ... }
//! initial { X0 }
//! query offer0 = (offer0)
//! issue   NAME: when GUARD emit TEMPLATE
//! final   NAME: when GUARD succeed|fail
//! update  NAME: when GUARD f(args) := TERM
//! bounds max_query_len N max_issued N
//! witness { TERM, ... }
//! ```
//!
//! Guards combine the atoms `start`, `answered(Q)`, `unanswered(Q)`,
//! `reply(Q) = t`, `before(Q1, Q2)`, `simultaneous(Q1, Q2)` and `t = t`
//! with `not`, `and`, `or` (binding in that order, left-associative).
//! `#` starts a comment.

pub mod ast;
mod parser;
mod printer;
mod resolve;

pub use parser::{is_keyword, KEYWORDS};
pub use printer::{print_guard, print_rule, print_spec, print_term};
pub use resolve::{compile, validate_spec, Diagnostic, Severity, SpecError};

use crate::model::AlgorithmSpec;
use crate::text::ParseError;
use ast::SpecAst;

/// Parses and resolves names and arities. Semantic checks live in
/// [`validate_spec`].
pub fn parse_spec(text: &str) -> Result<SpecAst, ParseError> {
    let ast = parser::parse_syntax(text)?;
    resolve::resolve(&ast)?;
    Ok(ast)
}

/// `parse_spec` followed by [`compile`].
pub fn load_spec(text: &str) -> Result<AlgorithmSpec, SpecError> {
    compile(&parse_spec(text)?)
}
