use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::ast::*;
use crate::history::Label;
use crate::model::{Action, AlgorithmSpec, Bounds, Finality, Guard, Outcome, QueryTemplate, Rule, TemplateComponent};
use crate::structure::format::{build_structure, declare_vocabulary};
use crate::structure::{validate_structure, Term, Var, Vocabulary};
use crate::text::{Ident, ParseError, SourceSpan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub severity: Severity,
    pub span: SourceSpan,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sev = match self.severity {
            Severity::Error => "error",
            Severity::Warning => "warning",
        };
        write!(f, "{sev} at {}: {}", self.span, self.message)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SpecError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{}", .0.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("\n"))]
    Invalid(Vec<Diagnostic>),
}

struct Scope<'a> {
    vocab: &'a Vocabulary,
    labels: BTreeSet<&'a str>,
    templates: BTreeSet<&'a str>,
}

fn dup_check<'a>(names: impl Iterator<Item = &'a Ident>, what: &str) -> Result<(), ParseError> {
    let mut seen = BTreeSet::new();
    for n in names {
        if !seen.insert(n.name.as_str()) {
            return Err(ParseError::name(n.span, format!("{what} `{}` declared twice", n.name)));
        }
    }
    Ok(())
}

/// Name and arity resolution over a syntactically valid tree.
pub(crate) fn resolve(ast: &SpecAst) -> Result<Vocabulary, ParseError> {
    let vocab = declare_vocabulary(&ast.symbols)?;
    dup_check(ast.labels.iter(), "label")?;
    dup_check(ast.states.iter().map(|s| &s.name), "state")?;
    dup_check(ast.templates.iter().map(|t| &t.name), "query template")?;
    dup_check(ast.rules.iter().map(|r| &r.name), "rule")?;
    for l in &ast.labels {
        if vocab.get(&l.name).is_some() {
            return Err(ParseError::name(l.span, format!("label `{}` clashes with a symbol", l.name)));
        }
    }
    let scope = Scope {
        vocab: &vocab,
        labels: ast.labels.iter().map(|l| l.name.as_str()).collect(),
        templates: ast.templates.iter().map(|t| t.name.name.as_str()).collect(),
    };

    let shared = Arc::new(vocab.clone());
    for s in &ast.states {
        build_structure(shared.clone(), &s.body)?;
    }
    for t in &ast.templates {
        for c in &t.components {
            match c {
                ComponentAst::Label(l) if !scope.labels.contains(l.name.as_str()) => {
                    return Err(ParseError::name(l.span, format!("undeclared label `{}`", l.name)));
                }
                ComponentAst::Label(_) => {}
                ComponentAst::Term(term) => scope.term(term, true, false)?,
            }
        }
    }
    template_cycles(ast)?;
    for r in &ast.rules {
        scope.guard(&r.guard)?;
        match &r.action {
            ActionAst::Emit(t) => scope.template(t)?,
            ActionAst::Succeed | ActionAst::Fail => {}
            ActionAst::Update { symbol, args, value } => {
                let sym = scope.symbol(symbol, args.len(), symbol.span)?;
                if sym.is_static {
                    return Err(ParseError::name(
                        symbol.span,
                        format!("`{}` is static and cannot be updated", symbol.name),
                    ));
                }
                for a in args {
                    scope.term(a, true, false)?;
                }
                scope.term(value, true, false)?;
            }
        }
    }
    for w in &ast.witness {
        scope.term(w, false, true)?;
    }
    Ok(vocab)
}

fn template_cycles(ast: &SpecAst) -> Result<(), ParseError> {
    let deps: BTreeMap<&str, (BTreeSet<String>, SourceSpan)> = ast
        .templates
        .iter()
        .map(|t| {
            let mut d = BTreeSet::new();
            for c in &t.components {
                if let ComponentAst::Term(term) = c {
                    term_replies(term, &mut d);
                }
            }
            (t.name.name.as_str(), (d, t.name.span))
        })
        .collect();
    // 0 = unvisited, 1 = on stack, 2 = done
    fn visit<'a>(
        n: &'a str,
        deps: &'a BTreeMap<&str, (BTreeSet<String>, SourceSpan)>,
        mark: &mut BTreeMap<&'a str, u8>,
    ) -> Result<(), ParseError> {
        match mark.get(n) {
            Some(2) => return Ok(()),
            Some(1) => {
                return Err(ParseError::name(
                    deps[n].1,
                    format!("query template `{n}` depends on its own reply"),
                ))
            }
            _ => {}
        }
        mark.insert(n, 1);
        for d in &deps[n].0 {
            visit(d, deps, mark)?;
        }
        mark.insert(n, 2);
        Ok(())
    }
    let mut mark = BTreeMap::new();
    for n in deps.keys() {
        visit(n, &deps, &mut mark)?;
    }
    Ok(())
}

fn term_replies(t: &TermAst, out: &mut BTreeSet<String>) {
    match &t.kind {
        TermKind::Reply(q) => {
            out.insert(q.name.clone());
        }
        TermKind::Var(_) => {}
        TermKind::App(_, args) => args.iter().for_each(|a| term_replies(a, out)),
    }
}

impl Scope<'_> {
    fn template(&self, q: &Ident) -> Result<(), ParseError> {
        if self.templates.contains(q.name.as_str()) {
            Ok(())
        } else {
            Err(ParseError::name(q.span, format!("undeclared query template `{}`", q.name)))
        }
    }

    fn symbol(&self, f: &Ident, arity: usize, span: SourceSpan) -> Result<&crate::structure::Symbol, ParseError> {
        let Some(sym) = self.vocab.get(&f.name) else {
            let msg = if self.labels.contains(f.name.as_str()) {
                format!("label `{}` cannot be used as a term", f.name)
            } else {
                format!("undeclared symbol `{}`", f.name)
            };
            return Err(ParseError::name(f.span, msg));
        };
        if sym.arity != arity {
            return Err(ParseError::arity(
                span,
                format!("`{}` takes {} argument(s), got {arity}", f.name, sym.arity),
            ));
        }
        Ok(sym)
    }

    fn term(&self, t: &TermAst, allow_reply: bool, allow_var: bool) -> Result<(), ParseError> {
        match &t.kind {
            TermKind::Var(v) if !allow_var => Err(ParseError::name(
                t.span,
                format!("variable `?{v}` is only allowed in witness terms"),
            )),
            TermKind::Var(_) => Ok(()),
            TermKind::Reply(_) if !allow_reply => {
                Err(ParseError::name(t.span, "witness terms cannot mention replies"))
            }
            TermKind::Reply(q) => self.template(q),
            TermKind::App(f, args) => {
                self.symbol(f, args.len(), t.span)?;
                args.iter().try_for_each(|a| self.term(a, allow_reply, allow_var))
            }
        }
    }

    fn guard(&self, g: &GuardAst) -> Result<(), ParseError> {
        match &g.kind {
            GuardKind::Start => Ok(()),
            GuardKind::Answered(q) | GuardKind::Unanswered(q) => self.template(q),
            GuardKind::ReplyEq(q, t) => {
                self.template(q)?;
                self.term(t, true, false)
            }
            GuardKind::Before(a, b) | GuardKind::Simultaneous(a, b) => {
                self.template(a)?;
                self.template(b)
            }
            GuardKind::TermEq(a, b) => {
                self.term(a, true, false)?;
                self.term(b, true, false)
            }
            GuardKind::Not(g) => self.guard(g),
            GuardKind::And(a, b) | GuardKind::Or(a, b) => {
                self.guard(a)?;
                self.guard(b)
            }
        }
    }
}

/// Static checks beyond name resolution. Errors block compilation; warnings
/// do not.
pub fn validate_spec(ast: &SpecAst) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let mut err = |span: SourceSpan, message: String| {
        out.push(Diagnostic {
            severity: Severity::Error,
            span,
            message,
        })
    };
    let vocab = match resolve(ast) {
        Ok(v) => Arc::new(v),
        Err(e) => {
            err(e.span, e.message);
            return out;
        }
    };
    if ast.states.is_empty() {
        err(ast.span, "states nonempty: the specification declares no state".into());
    }
    if ast.initial.is_empty() {
        err(ast.span, "initial nonempty: no initial state is listed".into());
    }
    for i in &ast.initial {
        if !ast.states.iter().any(|s| s.name.name == i.name) {
            err(i.span, format!("initial state `{}` is not a declared state", i.name));
        }
    }
    if ast.bounds.max_query_len == 0 {
        err(ast.bounds.span, "max_query_len must be positive".into());
    }
    if ast.bounds.max_issued == 0 {
        err(ast.bounds.span, "max_issued must be positive".into());
    }
    for s in &ast.states {
        // resolution already built each state once
        let x = build_structure(vocab.clone(), &s.body).expect("resolved state builds");
        for d in validate_structure(&vocab, &x) {
            err(s.name.span, format!("state `{}`: {d}", s.name.name));
        }
    }
    let used: BTreeSet<&str> = ast
        .templates
        .iter()
        .flat_map(|t| &t.components)
        .filter_map(|c| match c {
            ComponentAst::Label(l) => Some(l.name.as_str()),
            ComponentAst::Term(_) => None,
        })
        .collect();
    for l in &ast.labels {
        if !used.contains(l.name.as_str()) {
            out.push(Diagnostic {
                severity: Severity::Warning,
                span: l.span,
                message: format!("label `{}` is never used in a query template", l.name),
            });
        }
    }
    if ast.strict && !ast.rules.iter().any(|r| r.kind() == RuleKind::Final) {
        out.push(Diagnostic {
            severity: Severity::Warning,
            span: ast.span,
            message: "strict finality without any final rule: complete histories will have no final segment".into(),
        });
    }
    out
}

fn lower_term(t: &TermAst) -> Term {
    match &t.kind {
        TermKind::Var(v) => Term::Var(Var::Named(v.clone())),
        TermKind::Reply(q) => Term::reply(&q.name),
        TermKind::App(f, args) => Term::app(&f.name, args.iter().map(lower_term).collect()),
    }
}

fn lower_guard(g: &GuardAst) -> Guard {
    match &g.kind {
        GuardKind::Start => Guard::Start,
        GuardKind::Answered(q) => Guard::Answered(q.name.clone()),
        GuardKind::Unanswered(q) => Guard::Unanswered(q.name.clone()),
        GuardKind::ReplyEq(q, t) => Guard::ReplyEq(q.name.clone(), lower_term(t)),
        GuardKind::Before(a, b) => Guard::Before(a.name.clone(), b.name.clone()),
        GuardKind::Simultaneous(a, b) => Guard::Simultaneous(a.name.clone(), b.name.clone()),
        GuardKind::TermEq(a, b) => Guard::TermEq(lower_term(a), lower_term(b)),
        GuardKind::Not(g) => Guard::not(lower_guard(g)),
        GuardKind::And(a, b) => Guard::and(lower_guard(a), lower_guard(b)),
        GuardKind::Or(a, b) => Guard::or(lower_guard(a), lower_guard(b)),
    }
}

/// Lowers a tree into an executable specification. Fails on any resolution
/// problem or error-level diagnostic.
pub fn compile(ast: &SpecAst) -> Result<AlgorithmSpec, SpecError> {
    let vocab = Arc::new(resolve(ast)?);
    let errors: Vec<Diagnostic> = validate_spec(ast)
        .into_iter()
        .filter(|d| d.severity == Severity::Error)
        .collect();
    if !errors.is_empty() {
        return Err(SpecError::Invalid(errors));
    }
    let states = ast
        .states
        .iter()
        .map(|s| Ok((s.name.name.clone(), build_structure(vocab.clone(), &s.body)?)))
        .collect::<Result<_, ParseError>>()?;
    let templates = ast
        .templates
        .iter()
        .map(|t| {
            let components = t
                .components
                .iter()
                .map(|c| match c {
                    ComponentAst::Label(l) => TemplateComponent::Label(Label::new(&l.name)),
                    ComponentAst::Term(term) => TemplateComponent::Term(lower_term(term)),
                })
                .collect();
            (
                t.name.name.clone(),
                QueryTemplate {
                    name: t.name.name.clone(),
                    components,
                },
            )
        })
        .collect();
    let rules = ast
        .rules
        .iter()
        .map(|r| Rule {
            name: r.name.name.clone(),
            guard: lower_guard(&r.guard),
            action: match &r.action {
                ActionAst::Emit(t) => Action::Issue(t.name.clone()),
                ActionAst::Succeed => Action::Final(Outcome::Succeed),
                ActionAst::Fail => Action::Final(Outcome::Fail),
                ActionAst::Update { symbol, args, value } => Action::Update {
                    symbol: symbol.name.clone(),
                    args: args.iter().map(lower_term).collect(),
                    value: lower_term(value),
                },
            },
        })
        .collect();
    Ok(AlgorithmSpec {
        name: ast.name.name.clone(),
        finality: if ast.strict { Finality::Strict } else { Finality::Implicit },
        vocabulary: vocab,
        labels: ast.labels.iter().map(|l| Label::new(&l.name)).collect(),
        states,
        initial: ast.initial.iter().map(|i| i.name.clone()).collect(),
        templates,
        rules,
        bounds: Bounds {
            max_query_len: ast.bounds.max_query_len as usize,
            max_issued: ast.bounds.max_issued as usize,
        },
        witness: ast.witness.iter().map(lower_term).collect(),
    })
}
