//! Line-oriented structure file format.
//!
//! ```text
//! static client0/0
//! dynamic owner/0
//! base client0 client1 false true undef
//! interp client0 () = client0
//! ```
//!
//! Declarations come first (`static`, `dynamic`, `relational` for static
//! relational symbols, `dynamic relational`), then the base set, then
//! `interp` lines. Logic names are generated and only need `interp` lines
//! when overridden; entries equal to their convention default are omitted by
//! the printer, so `print_structure ∘ parse_structure` is the identity on
//! canonical text.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::sync::Arc;

use super::{is_logic_name, Element, Structure, StructureError, Symbol, Vocabulary};
use crate::text::{Cursor, Ident, LexMode, ParseError, SourceSpan, Tok};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymbolDecl {
    pub name: Ident,
    pub arity: usize,
    pub is_static: bool,
    pub is_relational: bool,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InterpDecl {
    pub symbol: Ident,
    pub args: Vec<Ident>,
    pub value: Ident,
    pub span: SourceSpan,
}

/// `base ...` followed by `interp ...` lines.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureBody {
    pub base: Vec<Ident>,
    pub interps: Vec<InterpDecl>,
    pub span: SourceSpan,
}

const BODY_KEYWORDS: [&str; 5] = ["base", "interp", "static", "dynamic", "relational"];

pub(crate) fn at_symbol_decl(cur: &Cursor) -> bool {
    ["static", "dynamic", "relational"].iter().any(|k| cur.at_keyword(k))
}

pub(crate) fn parse_symbol_decl(cur: &mut Cursor) -> Result<SymbolDecl, ParseError> {
    let start = cur.span();
    let (is_static, is_relational) = if cur.eat_keyword("static") {
        (true, cur.eat_keyword("relational"))
    } else if cur.eat_keyword("dynamic") {
        (false, cur.eat_keyword("relational"))
    } else if cur.eat_keyword("relational") {
        (true, true)
    } else {
        return Err(cur.error(&["`static`", "`dynamic`", "`relational`"]));
    };
    let name = cur.expect_ident("symbol name")?;
    cur.expect(&Tok::Slash)?;
    let (arity, end) = cur.expect_int("arity")?;
    Ok(SymbolDecl {
        name,
        arity: arity as usize,
        is_static,
        is_relational,
        span: start.to(end),
    })
}

pub(crate) fn parse_structure_body(cur: &mut Cursor) -> Result<StructureBody, ParseError> {
    let start = cur.expect_keyword("base")?;
    let mut base = Vec::new();
    while matches!(cur.peek(), Tok::Ident(_) | Tok::Int(_))
        && !BODY_KEYWORDS.iter().any(|k| cur.at_keyword(k))
    {
        base.push(cur.expect_ident("element")?);
    }
    let mut interps = Vec::new();
    while cur.at_keyword("interp") {
        let s = cur.bump().1;
        let symbol = cur.expect_ident("symbol name")?;
        cur.expect(&Tok::LParen)?;
        let mut args = Vec::new();
        if *cur.peek() != Tok::RParen {
            loop {
                args.push(cur.expect_ident("element")?);
                if !cur.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        cur.expect(&Tok::RParen)?;
        cur.expect(&Tok::Eq)?;
        let value = cur.expect_ident("element")?;
        interps.push(InterpDecl {
            symbol,
            args,
            span: s.to(value.span),
            value,
        });
    }
    Ok(StructureBody {
        base,
        interps,
        span: start.to(cur.prev_span()),
    })
}

pub fn declare_vocabulary(decls: &[SymbolDecl]) -> Result<Vocabulary, ParseError> {
    let mut vocab = Vocabulary::new();
    for d in decls {
        if is_logic_name(&d.name.name) {
            return Err(ParseError::name(
                d.name.span,
                format!("`{}` is a predeclared logic name", d.name.name),
            ));
        }
        vocab
            .declare(&d.name.name, d.arity, d.is_static, d.is_relational)
            .map_err(|e| ParseError::name(d.name.span, e.to_string()))?;
    }
    Ok(vocab)
}

/// Builds the structure described by `body`; name and arity problems are
/// reported at the offending token.
pub fn build_structure(vocab: Arc<Vocabulary>, body: &StructureBody) -> Result<Structure, ParseError> {
    let mut seen = BTreeSet::new();
    for e in &body.base {
        if !seen.insert(e.name.as_str()) {
            return Err(ParseError::name(e.span, format!("element `{}` listed twice", e.name)));
        }
    }
    let mut builder = Structure::builder(vocab.clone(), body.base.iter().map(|e| Element::new(&e.name)));
    let mut assigned = BTreeSet::new();
    for it in &body.interps {
        let sym = vocab.get(&it.symbol.name).ok_or_else(|| {
            ParseError::name(it.symbol.span, format!("undeclared symbol `{}`", it.symbol.name))
        })?;
        if sym.arity != it.args.len() {
            return Err(ParseError::arity(
                it.span,
                format!(
                    "`{}` takes {} argument(s), got {}",
                    sym.name,
                    sym.arity,
                    it.args.len()
                ),
            ));
        }
        for e in it.args.iter().chain(std::iter::once(&it.value)) {
            if !seen.contains(e.name.as_str()) {
                return Err(ParseError::name(e.span, format!("element `{}` is not in the base", e.name)));
            }
        }
        let args: Vec<Element> = it.args.iter().map(|a| Element::new(&a.name)).collect();
        if !assigned.insert((sym.name.clone(), args.clone())) {
            return Err(ParseError::name(it.span, "entry interpreted twice"));
        }
        builder
            .set_elements(&sym.name, args, Element::new(&it.value.name))
            .map_err(|e| ParseError::name(it.span, e.to_string()))?;
    }
    builder.build().map_err(|e| match e {
        StructureError::MissingLogicElement(_) | StructureError::EmptyBase => {
            ParseError::name(body.span, e.to_string())
        }
        other => ParseError::name(body.span, other.to_string()),
    })
}

pub fn parse_structure(text: &str) -> Result<Structure, ParseError> {
    let mut cur = Cursor::new(text, LexMode::Spec)?;
    let mut decls = Vec::new();
    while at_symbol_decl(&cur) {
        decls.push(parse_symbol_decl(&mut cur)?);
    }
    let body = parse_structure_body(&mut cur)?;
    cur.expect_eof()?;
    build_structure(Arc::new(declare_vocabulary(&decls)?), &body)
}

pub fn symbol_decl_line(sym: &Symbol) -> String {
    let kind = match (sym.is_static, sym.is_relational) {
        (true, false) => "static",
        (false, false) => "dynamic",
        (true, true) => "relational",
        (false, true) => "dynamic relational",
    };
    format!("{kind} {}/{}", sym.name, sym.arity)
}

pub fn interp_line(symbol: &str, args: &[Element], value: &Element) -> String {
    let args: Vec<&str> = args.iter().map(|e| e.name()).collect();
    format!("interp {symbol} ({}) = {value}", args.join(", "))
}

/// Base line plus every non-default `interp` line, in canonical order.
pub fn body_lines(x: &Structure) -> Vec<String> {
    let base: Vec<&str> = x.base().iter().map(|e| e.name()).collect();
    let mut lines = vec![format!("base {}", base.join(" "))];
    for sym in x.vocabulary().symbols() {
        let Some(table) = x.table(&sym.name) else { continue };
        for (args, v) in table {
            if *v != x.default_value(sym, args) {
                lines.push(interp_line(&sym.name, args, v));
            }
        }
    }
    lines
}

pub fn print_structure(x: &Structure) -> String {
    let mut out = String::new();
    for sym in x.vocabulary().user_symbols() {
        let _ = writeln!(out, "{}", symbol_decl_line(sym));
    }
    for line in body_lines(x) {
        let _ = writeln!(out, "{line}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::text::ParseErrorKind;

    const CANONICAL: &str = "\
static client0/0
relational likes/1
dynamic owner/0
dynamic relational seen/1
base c0 c1 false true undef
interp client0 () = c0
interp likes (c1) = true
interp owner () = c1
";

    #[test]
    fn canonical_text_round_trips_exactly() {
        let x = parse_structure(CANONICAL).unwrap();
        assert_eq!(print_structure(&x), CANONICAL);
        assert_eq!(parse_structure(&print_structure(&x)).unwrap(), x);
    }

    #[test]
    fn non_canonical_text_is_normalized() {
        let x = parse_structure(
            "dynamic owner/0 # comment\nbase undef true false c0\ninterp owner () = undef\n",
        )
        .unwrap();
        assert_eq!(print_structure(&x), "dynamic owner/0\nbase c0 false true undef\n");
    }

    #[test]
    fn logic_overrides_are_printed() {
        let text = "base a false true undef\ninterp true () = false\n";
        let x = parse_structure(text).unwrap();
        assert_eq!(print_structure(&x), text);
    }

    #[test]
    fn positioned_errors() {
        let err = parse_structure("dynamic owner/0\nbase true false undef\ninterp owner (a) = true\n")
            .unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Arity);
        assert_eq!(err.span.line, 3);
        let err = parse_structure("base true false undef\ninterp nope () = true\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Name);
        assert_eq!((err.span.line, err.span.column), (2, 8));
        let err = parse_structure("static true/0\nbase true false undef\n").unwrap_err();
        assert_eq!(err.kind, ParseErrorKind::Name);
        let err = parse_structure("base true false\n").unwrap_err();
        assert!(err.message.contains("undef"));
    }
}
