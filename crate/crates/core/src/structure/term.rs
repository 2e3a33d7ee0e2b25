use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::{Element, Structure, StructureError};

/// Term variable. `Reply(q)` stands for the reply to the query named by
/// template `q` in the current history; `Named` variables only occur in
/// bounded-exploration witness terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Var {
    Named(String),
    Reply(String),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Named(n) => write!(f, "?{n}"),
            Var::Reply(q) => write!(f, "reply({q})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Term {
    Var(Var),
    App { symbol: String, args: Vec<Term> },
}

impl Term {
    pub fn app(symbol: &str, args: Vec<Term>) -> Term {
        Term::App {
            symbol: symbol.to_string(),
            args,
        }
    }

    pub fn constant(symbol: &str) -> Term {
        Term::app(symbol, Vec::new())
    }

    pub fn var(name: &str) -> Term {
        Term::Var(Var::Named(name.to_string()))
    }

    pub fn reply(template: &str) -> Term {
        Term::Var(Var::Reply(template.to_string()))
    }

    pub fn variables(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Term::Var(v) => {
                out.insert(v.clone());
            }
            Term::App { args, .. } => args.iter().for_each(|a| a.collect_vars(out)),
        }
    }

    pub fn symbols(&self) -> BTreeSet<&str> {
        let mut out = BTreeSet::new();
        self.visit_symbols(&mut out);
        out
    }

    fn visit_symbols<'a>(&'a self, out: &mut BTreeSet<&'a str>) {
        if let Term::App { symbol, args } = self {
            out.insert(symbol);
            args.iter().for_each(|a| a.visit_symbols(out));
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(v) => write!(f, "{v}"),
            Term::App { symbol, args } if args.is_empty() => f.write_str(symbol),
            Term::App { symbol, args } => {
                write!(f, "{symbol}(")?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{a}")?;
                }
                f.write_str(")")
            }
        }
    }
}

pub type Valuation = BTreeMap<Var, Element>;

/// Bottom-up evaluation of `t` in `x` under a variable valuation.
pub fn eval_term(x: &Structure, t: &Term, valuation: &Valuation) -> Result<Element, StructureError> {
    eval_term_with(x, t, &|v| valuation.get(v).cloned())
}

/// Like [`eval_term`], resolving variables through a callback.
pub fn eval_term_with(
    x: &Structure,
    t: &Term,
    lookup: &dyn Fn(&Var) -> Option<Element>,
) -> Result<Element, StructureError> {
    match t {
        Term::Var(v) => {
            let e = lookup(v).ok_or_else(|| StructureError::UnboundVariable(v.clone()))?;
            if x.contains(&e) {
                Ok(e)
            } else {
                Err(StructureError::ElementNotInBase(e))
            }
        }
        Term::App { symbol, args } => {
            let sym = x
                .vocabulary()
                .get(symbol)
                .ok_or_else(|| StructureError::UnknownSymbol(symbol.clone()))?;
            if sym.arity != args.len() {
                return Err(StructureError::ArityMismatch {
                    symbol: symbol.clone(),
                    expected: sym.arity,
                    found: args.len(),
                });
            }
            let vals = args
                .iter()
                .map(|a| eval_term_with(x, a, lookup))
                .collect::<Result<Vec<_>, _>>()?;
            x.value(symbol, &vals)
                .cloned()
                .ok_or_else(|| StructureError::UnknownSymbol(symbol.clone()))
        }
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::structure::{Vocabulary, BOOLE, EQ, TRUE, UNDEF};

    fn x() -> Structure {
        let v = Arc::new(Vocabulary::new().with("c", 0, true, false));
        let mut b = Structure::builder(v, ["true", "false", "undef", "e"].map(Element::new));
        b.set("c", &[], "e").unwrap();
        b.build().unwrap()
    }

    #[test]
    fn logic_names_evaluate_by_convention() {
        let x = x();
        let none = Valuation::new();
        assert_eq!(eval_term(&x, &Term::constant(TRUE), &none).unwrap(), *x.true_value());
        let mut v = Valuation::new();
        v.insert(Var::Named("v".into()), Element::new("e"));
        let eq = Term::app(EQ, vec![Term::var("v"), Term::var("v")]);
        assert_eq!(eval_term(&x, &eq, &v).unwrap(), *x.true_value());
        let boole_undef = Term::app(BOOLE, vec![Term::constant(UNDEF)]);
        assert_eq!(eval_term(&x, &boole_undef, &none).unwrap(), *x.false_value());
        assert_eq!(eval_term(&x, &Term::constant("c"), &none).unwrap(), Element::new("e"));
    }

    #[test]
    fn evaluation_errors() {
        let x = x();
        let none = Valuation::new();
        assert_eq!(
            eval_term(&x, &Term::var("v"), &none),
            Err(StructureError::UnboundVariable(Var::Named("v".into())))
        );
        assert!(matches!(
            eval_term(&x, &Term::app(EQ, vec![Term::constant("c")]), &none),
            Err(StructureError::ArityMismatch { expected: 2, found: 1, .. })
        ));
    }

    #[test]
    fn display_forms() {
        let t = Term::app(EQ, vec![Term::reply("q"), Term::var("x")]);
        assert_eq!(t.to_string(), "eq(reply(q), ?x)");
        assert_eq!(Term::constant("owner").to_string(), "owner");
    }
}
