use std::fmt::Write as _;

use super::ast::*;

// Binding strength; children weaker than required get parentheses.
const OR: u8 = 1;
const AND: u8 = 2;
const NOT: u8 = 3;
const ATOM: u8 = 4;

pub fn print_term(t: &TermAst) -> String {
    match &t.kind {
        TermKind::Var(v) => format!("?{v}"),
        TermKind::Reply(q) => format!("reply({q})"),
        TermKind::App(f, args) if args.is_empty() => f.name.clone(),
        TermKind::App(f, args) => {
            let args: Vec<String> = args.iter().map(print_term).collect();
            format!("{f}({})", args.join(", "))
        }
    }
}

fn strength(g: &GuardAst) -> u8 {
    match g.kind {
        GuardKind::Or(..) => OR,
        GuardKind::And(..) => AND,
        GuardKind::Not(_) => NOT,
        _ => ATOM,
    }
}

fn guard_at(g: &GuardAst, min: u8) -> String {
    let s = print_guard(g);
    if strength(g) < min {
        format!("({s})")
    } else {
        s
    }
}

/// Fully determined by precedence `not > and > or`, both binary connectives
/// left-associative: only right-nested or weaker children are parenthesized.
pub fn print_guard(g: &GuardAst) -> String {
    match &g.kind {
        GuardKind::Start => "start".into(),
        GuardKind::Answered(q) => format!("answered({q})"),
        GuardKind::Unanswered(q) => format!("unanswered({q})"),
        GuardKind::ReplyEq(q, t) => format!("reply({q}) = {}", print_term(t)),
        GuardKind::Before(a, b) => format!("before({a}, {b})"),
        GuardKind::Simultaneous(a, b) => format!("simultaneous({a}, {b})"),
        GuardKind::TermEq(a, b) => format!("{} = {}", print_term(a), print_term(b)),
        GuardKind::Not(inner) => format!("not {}", guard_at(inner, NOT)),
        GuardKind::And(a, b) => format!("{} and {}", guard_at(a, AND), guard_at(b, AND + 1)),
        GuardKind::Or(a, b) => format!("{} or {}", guard_at(a, OR), guard_at(b, OR + 1)),
    }
}

pub fn print_rule(r: &RuleAst) -> String {
    let guard = print_guard(&r.guard);
    match &r.action {
        ActionAst::Emit(t) => format!("issue {}: when {guard} emit {t}", r.name),
        ActionAst::Succeed => format!("final {}: when {guard} succeed", r.name),
        ActionAst::Fail => format!("final {}: when {guard} fail", r.name),
        ActionAst::Update { symbol, args, value } => {
            let loc = print_term(&TermAst::app(&symbol.name, args.clone()));
            format!("update {}: when {guard} {loc} := {}", r.name, print_term(value))
        }
    }
}

fn symbol_line(d: &crate::structure::format::SymbolDecl) -> String {
    let kind = match (d.is_static, d.is_relational) {
        (true, false) => "static",
        (false, false) => "dynamic",
        (true, true) => "relational",
        (false, true) => "dynamic relational",
    };
    format!("{kind} {}/{}", d.name, d.arity)
}

/// Canonical text; `parse_spec(print_spec(ast)) == ast`.
pub fn print_spec(ast: &SpecAst) -> String {
    let mut o = String::new();
    let _ = writeln!(o, "algorithm {}", ast.name);
    if ast.strict {
        let _ = writeln!(o, "finality strict");
    }
    o.push('\n');
    if ast.symbols.is_empty() {
        o.push_str("vocabulary { }\n");
    } else {
        o.push_str("vocabulary {\n");
        for d in &ast.symbols {
            let _ = writeln!(o, "  {}", symbol_line(d));
        }
        o.push_str("}\n");
    }
    let labels: Vec<&str> = ast.labels.iter().map(|l| l.name.as_str()).collect();
    let _ = writeln!(o, "labels {}", braced(&labels));
    for s in &ast.states {
        let _ = writeln!(o, "\nstate {} {{", s.name);
        let base: Vec<&str> = s.body.base.iter().map(|e| e.name.as_str()).collect();
        let _ = writeln!(o, "  base {}", base.join(" "));
        for it in &s.body.interps {
            let args: Vec<&str> = it.args.iter().map(|a| a.name.as_str()).collect();
            let _ = writeln!(o, "  interp {} ({}) = {}", it.symbol, args.join(", "), it.value);
        }
        o.push_str("}\n");
    }
    let initial: Vec<&str> = ast.initial.iter().map(|l| l.name.as_str()).collect();
    let _ = writeln!(o, "\ninitial {}", braced(&initial));
    if !ast.templates.is_empty() {
        o.push('\n');
    }
    for t in &ast.templates {
        let comps: Vec<String> = t
            .components
            .iter()
            .map(|c| match c {
                ComponentAst::Label(l) => l.name.clone(),
                ComponentAst::Term(term) => print_term(term),
            })
            .collect();
        let _ = writeln!(o, "query {} = ({})", t.name, comps.join(", "));
    }
    if !ast.rules.is_empty() {
        o.push('\n');
    }
    for r in &ast.rules {
        let _ = writeln!(o, "{}", print_rule(r));
    }
    let _ = writeln!(
        o,
        "\nbounds max_query_len {} max_issued {}",
        ast.bounds.max_query_len, ast.bounds.max_issued
    );
    let witness: Vec<String> = ast.witness.iter().map(print_term).collect();
    if witness.is_empty() {
        o.push_str("witness { }\n");
    } else {
        let _ = writeln!(o, "witness {{ {} }}", witness.join(", "));
    }
    o
}

fn braced(items: &[&str]) -> String {
    if items.is_empty() {
        "{ }".into()
    } else {
        format!("{{ {} }}", items.join(" "))
    }
}
