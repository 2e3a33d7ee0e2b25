use std::collections::BTreeSet;

use super::ast::*;
use crate::structure::format::{at_symbol_decl, parse_structure_body, parse_symbol_decl};
use crate::text::{Cursor, Ident, LexMode, ParseError, Tok};

/// Words that cannot name symbols, labels, templates, states or rules.
pub const KEYWORDS: &[&str] = &[
    "algorithm",
    "finality",
    "strict",
    "vocabulary",
    "labels",
    "state",
    "initial",
    "query",
    "issue",
    "final",
    "update",
    "when",
    "emit",
    "start",
    "succeed",
    "fail",
    "bounds",
    "witness",
    "answered",
    "unanswered",
    "reply",
    "before",
    "simultaneous",
    "static",
    "dynamic",
    "relational",
    "base",
    "interp",
    "max_query_len",
    "max_issued",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

struct Parser {
    cur: Cursor,
    labels: BTreeSet<String>,
}

/// Syntax only; names are resolved separately.
pub(crate) fn parse_syntax(text: &str) -> Result<SpecAst, ParseError> {
    let mut p = Parser {
        cur: Cursor::new(text, LexMode::Spec)?,
        labels: BTreeSet::new(),
    };
    let ast = p.spec()?;
    p.cur.expect_eof()?;
    Ok(ast)
}

impl Parser {
    fn name(&mut self, what: &str) -> Result<Ident, ParseError> {
        if let Tok::Ident(w) = self.cur.peek() {
            if is_keyword(w) {
                return Err(self.cur.error(&[what]));
            }
        }
        self.cur.expect_ident(what)
    }

    fn spec(&mut self) -> Result<SpecAst, ParseError> {
        let start = self.cur.expect_keyword("algorithm")?;
        let name = self.name("algorithm name")?;
        let mut strict = false;
        if self.cur.eat_keyword("finality") {
            if self.cur.eat_keyword("strict") {
                strict = true;
            } else if !self.cur.eat_keyword("implicit") {
                return Err(self.cur.error(&["`strict`", "`implicit`"]));
            }
        }

        self.cur.expect_keyword("vocabulary")?;
        self.cur.expect(&Tok::LBrace)?;
        let mut symbols = Vec::new();
        while at_symbol_decl(&self.cur) {
            symbols.push(parse_symbol_decl(&mut self.cur)?);
        }
        self.cur.expect(&Tok::RBrace)?;

        self.cur.expect_keyword("labels")?;
        self.cur.expect(&Tok::LBrace)?;
        let mut labels = Vec::new();
        while *self.cur.peek() != Tok::RBrace {
            let l = self.name("label or `}`")?;
            self.labels.insert(l.name.clone());
            labels.push(l);
        }
        self.cur.expect(&Tok::RBrace)?;

        let mut states = Vec::new();
        while self.cur.at_keyword("state") {
            let s = self.cur.bump().1;
            let name = self.name("state name")?;
            self.cur.expect(&Tok::LBrace)?;
            let body = parse_structure_body(&mut self.cur)?;
            let end = self.cur.expect(&Tok::RBrace)?;
            states.push(StateAst {
                name,
                body,
                span: s.to(end),
            });
        }

        self.cur.expect_keyword("initial")?;
        self.cur.expect(&Tok::LBrace)?;
        let mut initial = Vec::new();
        while *self.cur.peek() != Tok::RBrace {
            initial.push(self.name("state name or `}`")?);
        }
        self.cur.expect(&Tok::RBrace)?;

        let mut templates = Vec::new();
        while self.cur.at_keyword("query") {
            templates.push(self.template()?);
        }

        let mut rules = Vec::new();
        while ["issue", "final", "update"].iter().any(|k| self.cur.at_keyword(k)) {
            rules.push(self.rule()?);
        }

        if !self.cur.at_keyword("bounds") {
            let expected: &[&str] = if rules.is_empty() {
                &["`query`", "`issue`", "`final`", "`update`", "`bounds`"]
            } else {
                &["`issue`", "`final`", "`update`", "`bounds`"]
            };
            return Err(self.cur.error(expected));
        }
        let bs = self.cur.bump().1;
        self.cur.expect_keyword("max_query_len")?;
        let (max_query_len, _) = self.cur.expect_int("number")?;
        self.cur.expect_keyword("max_issued")?;
        let (max_issued, be) = self.cur.expect_int("number")?;
        let bounds = BoundsAst {
            max_query_len,
            max_issued,
            span: bs.to(be),
        };

        let mut witness = Vec::new();
        if self.cur.eat_keyword("witness") {
            self.cur.expect(&Tok::LBrace)?;
            if *self.cur.peek() != Tok::RBrace {
                loop {
                    witness.push(self.term()?);
                    if !self.cur.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            self.cur.expect(&Tok::RBrace)?;
        }

        Ok(SpecAst {
            name,
            strict,
            symbols,
            labels,
            states,
            initial,
            templates,
            rules,
            bounds,
            witness,
            span: start.to(self.cur.prev_span()),
        })
    }

    fn template(&mut self) -> Result<TemplateAst, ParseError> {
        let s = self.cur.expect_keyword("query")?;
        let name = self.name("template name")?;
        self.cur.expect(&Tok::Eq)?;
        self.cur.expect(&Tok::LParen)?;
        let mut components = Vec::new();
        loop {
            let is_label = matches!(self.cur.peek(), Tok::Ident(w) if self.labels.contains(w))
                && *self.cur.peek_at(1) != Tok::LParen;
            if is_label {
                components.push(ComponentAst::Label(self.cur.expect_ident("label")?));
            } else {
                components.push(ComponentAst::Term(self.term()?));
            }
            if !self.cur.eat(&Tok::Comma) {
                break;
            }
        }
        let end = self.cur.expect(&Tok::RParen)?;
        Ok(TemplateAst {
            name,
            components,
            span: s.to(end),
        })
    }

    fn rule(&mut self) -> Result<RuleAst, ParseError> {
        let (kw, s) = self.cur.bump();
        let Tok::Ident(kw) = kw else { unreachable!("caller checked keyword") };
        let name = self.name("rule name")?;
        self.cur.expect(&Tok::Colon)?;
        self.cur.expect_keyword("when")?;
        let guard = self.guard()?;
        let action = match kw.as_str() {
            "issue" => {
                if !self.cur.eat_keyword("emit") {
                    return Err(self.cur.error(&["`and`", "`or`", "`emit`"]));
                }
                ActionAst::Emit(self.name("template name")?)
            }
            "final" => {
                if self.cur.eat_keyword("succeed") {
                    ActionAst::Succeed
                } else if self.cur.eat_keyword("fail") {
                    ActionAst::Fail
                } else {
                    return Err(self.cur.error(&["`and`", "`or`", "`succeed`", "`fail`"]));
                }
            }
            _ => {
                if !matches!(self.cur.peek(), Tok::Ident(_)) {
                    return Err(self.cur.error(&["`and`", "`or`", "location"]));
                }
                let loc = self.term()?;
                let TermKind::App(symbol, args) = loc.kind else {
                    return Err(ParseError::syntax(loc.span, "a variable", &["location"]));
                };
                self.cur.expect(&Tok::Assign)?;
                let value = self.term()?;
                ActionAst::Update { symbol, args, value }
            }
        };
        Ok(RuleAst {
            name,
            guard,
            action,
            span: s.to(self.cur.prev_span()),
        })
    }

    fn guard(&mut self) -> Result<GuardAst, ParseError> {
        let mut left = self.conj()?;
        while self.cur.eat_keyword("or") {
            let right = self.conj()?;
            left = GuardAst {
                span: left.span.to(right.span),
                kind: GuardKind::Or(Box::new(left), Box::new(right)),
            };
        }
        Ok(left)
    }

    fn conj(&mut self) -> Result<GuardAst, ParseError> {
        let mut left = self.unary()?;
        while self.cur.eat_keyword("and") {
            let right = self.unary()?;
            left = GuardAst {
                span: left.span.to(right.span),
                kind: GuardKind::And(Box::new(left), Box::new(right)),
            };
        }
        Ok(left)
    }

    fn unary(&mut self) -> Result<GuardAst, ParseError> {
        if self.cur.at_keyword("not") {
            // `not(...) = t` is an equality on the connective symbol; try that
            // reading first and fall back to negation.
            let save = self.cur.position();
            if let Ok(eq) = self.term_eq() {
                return Ok(eq);
            }
            self.cur.reset(save);
            let s = self.cur.bump().1;
            let inner = self.unary()?;
            return Ok(GuardAst {
                span: s.to(inner.span),
                kind: GuardKind::Not(Box::new(inner)),
            });
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<GuardAst, ParseError> {
        let s = self.cur.span();
        if self.cur.eat(&Tok::LParen) {
            let g = self.guard()?;
            let end = self.cur.expect(&Tok::RParen)?;
            return Ok(GuardAst {
                span: s.to(end),
                ..g
            });
        }
        let kind = if self.cur.eat_keyword("start") {
            GuardKind::Start
        } else if self.cur.eat_keyword("answered") {
            GuardKind::Answered(self.template_arg()?)
        } else if self.cur.eat_keyword("unanswered") {
            GuardKind::Unanswered(self.template_arg()?)
        } else if self.cur.at_keyword("before") || self.cur.at_keyword("simultaneous") {
            let before = self.cur.at_keyword("before");
            self.cur.bump();
            self.cur.expect(&Tok::LParen)?;
            let a = self.name("template name")?;
            self.cur.expect(&Tok::Comma)?;
            let b = self.name("template name")?;
            self.cur.expect(&Tok::RParen)?;
            if before {
                GuardKind::Before(a, b)
            } else {
                GuardKind::Simultaneous(a, b)
            }
        } else if matches!(self.cur.peek(), Tok::Ident(_) | Tok::Question) {
            return self.term_eq();
        } else {
            return Err(self.cur.error(&[
                "`start`",
                "`answered`",
                "`unanswered`",
                "`reply`",
                "`before`",
                "`simultaneous`",
                "`not`",
                "`(`",
                "term",
            ]));
        };
        Ok(GuardAst {
            span: s.to(self.cur.prev_span()),
            kind,
        })
    }

    fn template_arg(&mut self) -> Result<Ident, ParseError> {
        self.cur.expect(&Tok::LParen)?;
        let q = self.name("template name")?;
        self.cur.expect(&Tok::RParen)?;
        Ok(q)
    }

    /// `t = t`, with `reply(Q) = t` producing the dedicated atom.
    fn term_eq(&mut self) -> Result<GuardAst, ParseError> {
        let lhs = self.term()?;
        self.cur.expect(&Tok::Eq)?;
        let rhs = self.term()?;
        let span = lhs.span.to(rhs.span);
        let kind = match lhs.kind {
            TermKind::Reply(q) => GuardKind::ReplyEq(q, rhs),
            _ => GuardKind::TermEq(lhs, rhs),
        };
        Ok(GuardAst { kind, span })
    }

    fn term(&mut self) -> Result<TermAst, ParseError> {
        let s = self.cur.span();
        if self.cur.eat(&Tok::Question) {
            let (v, end) = self.cur.expect_name("variable name")?;
            return Ok(TermAst {
                kind: TermKind::Var(v),
                span: s.to(end),
            });
        }
        if self.cur.eat_keyword("reply") {
            let q = self.template_arg()?;
            return Ok(TermAst {
                kind: TermKind::Reply(q),
                span: s.to(self.cur.prev_span()),
            });
        }
        let f = self.name("term")?;
        let mut args = Vec::new();
        if self.cur.eat(&Tok::LParen) {
            if *self.cur.peek() != Tok::RParen {
                loop {
                    args.push(self.term()?);
                    if !self.cur.eat(&Tok::Comma) {
                        break;
                    }
                }
            }
            self.cur.expect(&Tok::RParen)?;
        }
        Ok(TermAst {
            kind: TermKind::App(f, args),
            span: s.to(self.cur.prev_span()),
        })
    }
}
