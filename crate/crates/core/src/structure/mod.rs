//! Vocabularies, finite first-order structures and the logic-name conventions.
//!
//! A [`Structure`] is an immutable value: a finite base set plus a total
//! interpretation table for every symbol of its [`Vocabulary`]. Logic names
//! (`true`, `false`, `undef`, `Boole`, `eq`, `not`, `and`, `or`) are always
//! present and are filled in by [`StructureBuilder`] unless overridden.

pub mod format;
mod iso;
mod term;
mod update;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

pub use iso::{apply_isomorphism, check_isomorphism, Isomorphism, Transport};
pub use term::{eval_term, eval_term_with, Term, Valuation, Var};
pub use update::{apply_updates, detect_clash, print_update_set, Location, Update, UpdateSet};

pub const TRUE: &str = "true";
pub const FALSE: &str = "false";
pub const UNDEF: &str = "undef";
pub const BOOLE: &str = "Boole";
pub const EQ: &str = "eq";
pub const NOT: &str = "not";
pub const AND: &str = "and";
pub const OR: &str = "or";

/// Logic names with their arities. All static; all but `undef` relational.
pub const LOGIC_NAMES: [(&str, usize); 8] = [
    (TRUE, 0),
    (FALSE, 0),
    (UNDEF, 0),
    (BOOLE, 1),
    (EQ, 2),
    (NOT, 1),
    (AND, 2),
    (OR, 2),
];

pub fn is_logic_name(name: &str) -> bool {
    LOGIC_NAMES.iter().any(|(n, _)| *n == name)
}

/// Opaque element identifier. The derived order is the canonical iteration
/// order and carries no semantic weight.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Element(Arc<str>);

impl Element {
    pub fn new(name: &str) -> Self {
        Element(Arc::from(name))
    }

    pub fn name(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Element {
    fn from(s: &str) -> Self {
        Element::new(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Symbol {
    pub name: String,
    pub arity: usize,
    pub is_static: bool,
    pub is_relational: bool,
}

impl Symbol {
    pub fn is_dynamic(&self) -> bool {
        !self.is_static
    }
}

/// A finite signature. Always contains the logic names.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Vocabulary {
    symbols: BTreeMap<String, Symbol>,
}

impl Default for Vocabulary {
    fn default() -> Self {
        Self::new()
    }
}

impl Vocabulary {
    pub fn new() -> Self {
        let symbols = LOGIC_NAMES
            .iter()
            .map(|&(name, arity)| {
                (
                    name.to_string(),
                    Symbol {
                        name: name.to_string(),
                        arity,
                        is_static: true,
                        is_relational: name != UNDEF,
                    },
                )
            })
            .collect();
        Vocabulary { symbols }
    }

    pub fn declare(
        &mut self,
        name: &str,
        arity: usize,
        is_static: bool,
        is_relational: bool,
    ) -> Result<(), StructureError> {
        if self.symbols.contains_key(name) {
            return Err(StructureError::DuplicateSymbol(name.to_string()));
        }
        self.symbols.insert(
            name.to_string(),
            Symbol {
                name: name.to_string(),
                arity,
                is_static,
                is_relational,
            },
        );
        Ok(())
    }

    /// Builder-style [`Vocabulary::declare`] for fixtures and tests.
    pub fn with(mut self, name: &str, arity: usize, is_static: bool, is_relational: bool) -> Self {
        self.declare(name, arity, is_static, is_relational)
            .expect("duplicate symbol");
        self
    }

    pub fn get(&self, name: &str) -> Option<&Symbol> {
        self.symbols.get(name)
    }

    pub fn symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values()
    }

    /// Declared symbols other than the logic names, in name order.
    pub fn user_symbols(&self) -> impl Iterator<Item = &Symbol> {
        self.symbols.values().filter(|s| !is_logic_name(&s.name))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("symbol `{symbol}` expects {expected} argument(s), got {found}")]
    ArityMismatch {
        symbol: String,
        expected: usize,
        found: usize,
    },
    #[error("element `{0}` is not in the base set")]
    ElementNotInBase(Element),
    #[error("logic name `{0}` has no element to denote (declare it in the base or override it)")]
    MissingLogicElement(String),
    #[error("base set is empty")]
    EmptyBase,
    #[error("symbol `{0}` is static; only dynamic symbols have locations")]
    NotDynamic(String),
    #[error("symbol `{0}` declared twice")]
    DuplicateSymbol(String),
    #[error("conflicting updates at location {0}")]
    Clash(Location),
    #[error("unbound variable {0}")]
    UnboundVariable(Var),
    #[error("element `{0}` is outside the isomorphism's domain")]
    ElementNotInDomain(Element),
    #[error("map is not injective: `{0}` has two preimages")]
    NotInjective(Element),
}

type Table = BTreeMap<Vec<Element>, Element>;

/// A finite structure over a vocabulary.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    vocab: Arc<Vocabulary>,
    base: BTreeSet<Element>,
    interp: BTreeMap<String, Table>,
}

impl Structure {
    pub fn builder(vocab: Arc<Vocabulary>, base: impl IntoIterator<Item = Element>) -> StructureBuilder {
        StructureBuilder {
            vocab,
            base: base.into_iter().collect(),
            overrides: BTreeMap::new(),
        }
    }

    /// Assembles a structure without enforcing any convention; used to build
    /// deliberately malformed values for [`validate_structure`].
    pub fn from_parts(
        vocab: Arc<Vocabulary>,
        base: BTreeSet<Element>,
        interp: BTreeMap<String, BTreeMap<Vec<Element>, Element>>,
    ) -> Self {
        Structure { vocab, base, interp }
    }

    pub fn vocabulary(&self) -> &Arc<Vocabulary> {
        &self.vocab
    }

    pub fn base(&self) -> &BTreeSet<Element> {
        &self.base
    }

    pub fn contains(&self, e: &Element) -> bool {
        self.base.contains(e)
    }

    pub fn table(&self, symbol: &str) -> Option<&BTreeMap<Vec<Element>, Element>> {
        self.interp.get(symbol)
    }

    pub fn value(&self, symbol: &str, args: &[Element]) -> Option<&Element> {
        self.interp.get(symbol)?.get(args)
    }

    fn logic(&self, name: &str) -> &Element {
        self.value(name, &[])
            .unwrap_or_else(|| panic!("structure lacks logic name `{name}`"))
    }

    pub fn true_value(&self) -> &Element {
        self.logic(TRUE)
    }

    pub fn false_value(&self) -> &Element {
        self.logic(FALSE)
    }

    pub fn undef_value(&self) -> &Element {
        self.logic(UNDEF)
    }

    pub fn bool_value(&self, b: bool) -> &Element {
        if b {
            self.true_value()
        } else {
            self.false_value()
        }
    }

    /// The value this structure's conventions would assign to `symbol` at
    /// `args` absent any explicit interpretation. Used by the canonical
    /// printer to omit defaulted entries.
    pub fn default_value(&self, symbol: &Symbol, args: &[Element]) -> Element {
        if matches!(symbol.name.as_str(), TRUE | FALSE | UNDEF) {
            return Element::new(&symbol.name);
        }
        default_value(
            symbol,
            args,
            self.true_value(),
            self.false_value(),
            self.undef_value(),
        )
    }

    pub(crate) fn with_value(&self, symbol: &str, args: Vec<Element>, value: Element) -> Structure {
        let mut next = self.clone();
        next.interp
            .get_mut(symbol)
            .expect("symbol checked by caller")
            .insert(args, value);
        next
    }

    pub(crate) fn map_elements(
        &self,
        f: impl Fn(&Element) -> Result<Element, StructureError>,
    ) -> Result<Structure, StructureError> {
        let base = self.base.iter().map(&f).collect::<Result<BTreeSet<_>, _>>()?;
        let mut interp = BTreeMap::new();
        for (sym, table) in &self.interp {
            let mut mapped = Table::new();
            for (args, v) in table {
                let args = args.iter().map(&f).collect::<Result<Vec<_>, _>>()?;
                mapped.insert(args, f(v)?);
            }
            interp.insert(sym.clone(), mapped);
        }
        Ok(Structure {
            vocab: self.vocab.clone(),
            base,
            interp,
        })
    }
}

fn default_value(symbol: &Symbol, args: &[Element], t: &Element, f: &Element, u: &Element) -> Element {
    let is_bool = |e: &Element| e == t || e == f;
    let b = |v: bool| if v { t.clone() } else { f.clone() };
    match symbol.name.as_str() {
        TRUE => t.clone(),
        FALSE => f.clone(),
        UNDEF => u.clone(),
        BOOLE => b(is_bool(&args[0])),
        EQ => b(args[0] == args[1]),
        NOT => b(&args[0] == f),
        AND => b(args.iter().all(is_bool) && &args[0] == t && &args[1] == t),
        OR => b(args.iter().all(is_bool) && (&args[0] == t || &args[1] == t)),
        _ if symbol.is_relational => f.clone(),
        _ => u.clone(),
    }
}

/// Every tuple of `base` elements of length `arity`, in lexicographic order.
pub fn tuples(base: &BTreeSet<Element>, arity: usize) -> Vec<Vec<Element>> {
    let mut out = vec![Vec::new()];
    for _ in 0..arity {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                base.iter().map(move |e| {
                    let mut t = prefix.clone();
                    t.push(e.clone());
                    t
                })
            })
            .collect();
    }
    out
}

/// Collects explicit interpretation entries and fills every remaining tuple
/// from the conventions: logic names get their standard meaning, relational
/// symbols default to `false`, everything else to `undef`.
#[derive(Debug, Clone)]
pub struct StructureBuilder {
    vocab: Arc<Vocabulary>,
    base: BTreeSet<Element>,
    overrides: BTreeMap<(String, Vec<Element>), Element>,
}

impl StructureBuilder {
    pub fn set(
        &mut self,
        symbol: &str,
        args: &[&str],
        value: &str,
    ) -> Result<&mut Self, StructureError> {
        let args: Vec<Element> = args.iter().map(|a| Element::new(a)).collect();
        self.set_elements(symbol, args, Element::new(value))
    }

    pub fn set_elements(
        &mut self,
        symbol: &str,
        args: Vec<Element>,
        value: Element,
    ) -> Result<&mut Self, StructureError> {
        let sym = self
            .vocab
            .get(symbol)
            .ok_or_else(|| StructureError::UnknownSymbol(symbol.to_string()))?;
        if sym.arity != args.len() {
            return Err(StructureError::ArityMismatch {
                symbol: symbol.to_string(),
                expected: sym.arity,
                found: args.len(),
            });
        }
        for e in args.iter().chain(std::iter::once(&value)) {
            if !self.base.contains(e) {
                return Err(StructureError::ElementNotInBase(e.clone()));
            }
        }
        self.overrides.insert((symbol.to_string(), args), value);
        Ok(self)
    }

    pub fn build(&self) -> Result<Structure, StructureError> {
        if self.base.is_empty() {
            return Err(StructureError::EmptyBase);
        }
        let logic = |name: &str| -> Result<Element, StructureError> {
            if let Some(v) = self.overrides.get(&(name.to_string(), Vec::new())) {
                return Ok(v.clone());
            }
            let e = Element::new(name);
            if self.base.contains(&e) {
                Ok(e)
            } else {
                Err(StructureError::MissingLogicElement(name.to_string()))
            }
        };
        let (t, f, u) = (logic(TRUE)?, logic(FALSE)?, logic(UNDEF)?);
        let mut interp = BTreeMap::new();
        for sym in self.vocab.symbols() {
            let mut table = Table::new();
            for args in tuples(&self.base, sym.arity) {
                let key = (sym.name.clone(), args);
                let v = match self.overrides.get(&key) {
                    Some(v) => v.clone(),
                    None => default_value(sym, &key.1, &t, &f, &u),
                };
                table.insert(key.1, v);
            }
            interp.insert(sym.name.clone(), table);
        }
        Ok(Structure {
            vocab: self.vocab.clone(),
            base: self.base.clone(),
            interp,
        })
    }
}

/// One violated structural convention, naming the symbol and witness tuple.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructureDiagnostic {
    pub symbol: String,
    pub args: Vec<Element>,
    pub message: String,
}

impl fmt::Display for StructureDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<&str> = self.args.iter().map(|e| e.name()).collect();
        write!(f, "{} ({}): {}", self.symbol, args.join(", "), self.message)
    }
}

/// Checks `x` against `vocab` and the logic-name conventions. An empty list
/// means every convention holds.
pub fn validate_structure(vocab: &Vocabulary, x: &Structure) -> Vec<StructureDiagnostic> {
    let mut out = Vec::new();
    let diag = |symbol: &str, args: &[Element], message: String| StructureDiagnostic {
        symbol: symbol.to_string(),
        args: args.to_vec(),
        message,
    };
    if x.base.is_empty() {
        out.push(diag("", &[], "base set is empty".into()));
        return out;
    }
    for sym in vocab.symbols() {
        let Some(table) = x.interp.get(&sym.name) else {
            out.push(diag(&sym.name, &[], "symbol has no interpretation".into()));
            continue;
        };
        for args in tuples(&x.base, sym.arity) {
            match table.get(&args) {
                None => out.push(diag(&sym.name, &args, "interpretation is not total".into())),
                Some(v) if !x.base.contains(v) => {
                    out.push(diag(&sym.name, &args, format!("value `{v}` is outside the base set")))
                }
                _ => {}
            }
        }
        if table.len() != x.base.len().pow(sym.arity as u32) {
            out.push(diag(&sym.name, &[], "interpretation has entries outside base^arity".into()));
        }
    }
    for name in x.interp.keys() {
        if vocab.get(name).is_none() {
            out.push(diag(name, &[], "interpreted symbol is not in the vocabulary".into()));
        }
    }
    let (Some(t), Some(f), Some(u)) = (x.value(TRUE, &[]), x.value(FALSE, &[]), x.value(UNDEF, &[]))
    else {
        return out;
    };
    for (a, av, b, bv) in [(TRUE, t, FALSE, f), (TRUE, t, UNDEF, u), (FALSE, f, UNDEF, u)] {
        if av == bv {
            out.push(diag(a, &[], format!("`{a}` and `{b}` both denote `{av}`")));
        }
    }
    let is_bool = |e: &Element| e == t || e == f;
    for sym in vocab.symbols().filter(|s| s.is_relational) {
        let Some(table) = x.interp.get(&sym.name) else { continue };
        for (args, v) in table {
            if !is_bool(v) {
                out.push(diag(
                    &sym.name,
                    args,
                    format!("relational symbol yields `{v}`, not true/false"),
                ));
            }
        }
    }
    for &(name, _) in LOGIC_NAMES.iter().skip(3) {
        let Some(sym) = vocab.get(name) else { continue };
        let Some(table) = x.interp.get(name) else { continue };
        for (args, v) in table {
            let expected = default_value(sym, args, t, f, u);
            if *v != expected && is_bool(v) {
                out.push(diag(
                    name,
                    args,
                    format!("logic name yields `{v}`, convention requires `{expected}`"),
                ));
            }
        }
    }
    out
}
