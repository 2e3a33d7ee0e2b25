//! Syntax tree of `.isa` specifications. Every node keeps its source span;
//! spans never take part in equality.

use crate::structure::format::{StructureBody, SymbolDecl};
use crate::text::{Ident, SourceSpan};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecAst {
    pub name: Ident,
    pub strict: bool,
    pub symbols: Vec<SymbolDecl>,
    pub labels: Vec<Ident>,
    pub states: Vec<StateAst>,
    pub initial: Vec<Ident>,
    pub templates: Vec<TemplateAst>,
    pub rules: Vec<RuleAst>,
    pub bounds: BoundsAst,
    pub witness: Vec<TermAst>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StateAst {
    pub name: Ident,
    pub body: StructureBody,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TemplateAst {
    pub name: Ident,
    pub components: Vec<ComponentAst>,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ComponentAst {
    Label(Ident),
    Term(TermAst),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TermAst {
    pub kind: TermKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TermKind {
    /// `?x`; only allowed in witness terms.
    Var(String),
    /// `reply(Q)`
    Reply(Ident),
    App(Ident, Vec<TermAst>),
}

impl TermAst {
    pub fn app(name: &str, args: Vec<TermAst>) -> TermAst {
        TermAst {
            kind: TermKind::App(Ident::new(name), args),
            span: SourceSpan::default(),
        }
    }

    pub fn reply(template: &str) -> TermAst {
        TermAst {
            kind: TermKind::Reply(Ident::new(template)),
            span: SourceSpan::default(),
        }
    }

    pub fn var(name: &str) -> TermAst {
        TermAst {
            kind: TermKind::Var(name.to_string()),
            span: SourceSpan::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GuardAst {
    pub kind: GuardKind,
    pub span: SourceSpan,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum GuardKind {
    Start,
    Answered(Ident),
    Unanswered(Ident),
    ReplyEq(Ident, TermAst),
    Before(Ident, Ident),
    Simultaneous(Ident, Ident),
    TermEq(TermAst, TermAst),
    Not(Box<GuardAst>),
    And(Box<GuardAst>, Box<GuardAst>),
    Or(Box<GuardAst>, Box<GuardAst>),
}

impl GuardAst {
    pub fn new(kind: GuardKind) -> GuardAst {
        GuardAst {
            kind,
            span: SourceSpan::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ActionAst {
    Emit(Ident),
    Succeed,
    Fail,
    Update { symbol: Ident, args: Vec<TermAst>, value: TermAst },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    Issue,
    Final,
    Update,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RuleAst {
    pub name: Ident,
    pub guard: GuardAst,
    pub action: ActionAst,
    pub span: SourceSpan,
}

impl RuleAst {
    pub fn kind(&self) -> RuleKind {
        match self.action {
            ActionAst::Emit(_) => RuleKind::Issue,
            ActionAst::Succeed | ActionAst::Fail => RuleKind::Final,
            ActionAst::Update { .. } => RuleKind::Update,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundsAst {
    pub max_query_len: u64,
    pub max_issued: u64,
    pub span: SourceSpan,
}
