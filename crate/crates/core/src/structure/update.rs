use std::collections::BTreeSet;
use std::fmt;

use super::{Element, Structure, StructureError};

/// A dynamic symbol together with an argument tuple.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Location {
    pub symbol: String,
    pub args: Vec<Element>,
}

impl Location {
    pub fn new(symbol: &str, args: Vec<Element>) -> Self {
        Location {
            symbol: symbol.to_string(),
            args,
        }
    }

    pub fn value_in<'a>(&self, x: &'a Structure) -> Option<&'a Element> {
        x.value(&self.symbol, &self.args)
    }
}

impl fmt::Display for Location {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let args: Vec<&str> = self.args.iter().map(|e| e.name()).collect();
        write!(f, "{} ({})", self.symbol, args.join(", "))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Update {
    pub location: Location,
    pub value: Element,
}

impl Update {
    pub fn new(symbol: &str, args: Vec<Element>, value: Element) -> Self {
        Update {
            location: Location::new(symbol, args),
            value,
        }
    }

    /// An update is trivial in `x` when it writes the value already there.
    pub fn is_trivial(&self, x: &Structure) -> bool {
        self.location.value_in(x) == Some(&self.value)
    }
}

impl fmt::Display for Update {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} := {}", self.location, self.value)
    }
}

/// Update sets are sets: duplicates collapse, and iteration follows the
/// canonical (location, value) order.
pub type UpdateSet = BTreeSet<Update>;

/// First location (in canonical order) assigned two distinct values.
/// `{owner () := client0}`; `{}` when empty.
pub fn print_update_set(delta: &UpdateSet) -> String {
    let parts: Vec<String> = delta.iter().map(|u| u.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

pub fn detect_clash(delta: &UpdateSet) -> Option<Location> {
    let mut prev: Option<&Update> = None;
    for u in delta {
        if let Some(p) = prev {
            if p.location == u.location && p.value != u.value {
                return Some(u.location.clone());
            }
        }
        prev = Some(u);
    }
    None
}

/// Next state: same base, each location of `delta` set to its value, all
/// other values as in `x`.
pub fn apply_updates(x: &Structure, delta: &UpdateSet) -> Result<Structure, StructureError> {
    if let Some(loc) = detect_clash(delta) {
        return Err(StructureError::Clash(loc));
    }
    let vocab = x.vocabulary().clone();
    for u in delta {
        let sym = vocab
            .get(&u.location.symbol)
            .ok_or_else(|| StructureError::UnknownSymbol(u.location.symbol.clone()))?;
        if sym.is_static {
            return Err(StructureError::NotDynamic(sym.name.clone()));
        }
        if sym.arity != u.location.args.len() {
            return Err(StructureError::ArityMismatch {
                symbol: sym.name.clone(),
                expected: sym.arity,
                found: u.location.args.len(),
            });
        }
        for e in u.location.args.iter().chain(std::iter::once(&u.value)) {
            if !x.contains(e) {
                return Err(StructureError::ElementNotInBase(e.clone()));
            }
        }
    }
    let mut next = x.clone();
    for u in delta {
        if !u.is_trivial(&next) {
            next = next.with_value(&u.location.symbol, u.location.args.clone(), u.value.clone());
        }
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use proptest::prelude::*;

    use super::*;
    use crate::structure::{tuples, Vocabulary};

    fn x() -> Structure {
        let v = Arc::new(
            Vocabulary::new()
                .with("owner", 0, false, false)
                .with("f", 1, false, false)
                .with("k", 0, true, false),
        );
        Structure::builder(v, ["true", "false", "undef", "c0", "c1"].map(Element::new))
            .build()
            .unwrap()
    }

    fn owner(v: &str) -> Update {
        Update::new("owner", vec![], Element::new(v))
    }

    #[test]
    fn clash_detection() {
        assert_eq!(detect_clash(&UpdateSet::new()), None);
        let two: UpdateSet = [owner("c0"), owner("c1")].into_iter().collect();
        assert_eq!(detect_clash(&two), Some(Location::new("owner", vec![])));
        let dup: UpdateSet = [owner("c0"), owner("c0")].into_iter().collect();
        assert_eq!(detect_clash(&dup), None);
    }

    #[test]
    fn apply_paths() {
        let x = x();
        assert_eq!(apply_updates(&x, &UpdateSet::new()).unwrap(), x);
        let next = apply_updates(&x, &[owner("c0")].into_iter().collect()).unwrap();
        assert_eq!(next.value("owner", &[]).unwrap().name(), "c0");
        assert_eq!(next.base(), x.base());
        let clash: UpdateSet = [owner("c0"), owner("c1")].into_iter().collect();
        assert!(matches!(apply_updates(&x, &clash), Err(StructureError::Clash(_))));
        let stat: UpdateSet = [Update::new("k", vec![], Element::new("c0"))].into_iter().collect();
        assert!(matches!(apply_updates(&x, &stat), Err(StructureError::NotDynamic(_))));
    }

    #[test]
    fn trivial_update_leaves_value() {
        let x = x();
        let u = owner("undef");
        assert!(u.is_trivial(&x));
        assert_eq!(apply_updates(&x, &[u].into_iter().collect()).unwrap(), x);
    }

    fn arb_delta() -> impl Strategy<Value = UpdateSet> {
        let elems = ["true", "false", "undef", "c0", "c1"];
        let upd = (0usize..2, 0usize..5, 0usize..5).prop_map(move |(sym, a, v)| {
            if sym == 0 {
                Update::new("owner", vec![], Element::new(elems[v]))
            } else {
                Update::new("f", vec![Element::new(elems[a])], Element::new(elems[v]))
            }
        });
        proptest::collection::btree_set(upd, 0..6)
    }

    proptest! {
        #[test]
        fn apply_differs_exactly_on_nontrivial_locations(delta in arb_delta()) {
            let x = x();
            match detect_clash(&delta) {
                Some(_) => prop_assert!(apply_updates(&x, &delta).is_err()),
                None => {
                    let next = apply_updates(&x, &delta).unwrap();
                    prop_assert_eq!(&apply_updates(&x, &delta).unwrap(), &next);
                    let changed: BTreeSet<Location> = delta
                        .iter()
                        .filter(|u| !u.is_trivial(&x))
                        .map(|u| u.location.clone())
                        .collect();
                    for sym in x.vocabulary().symbols() {
                        for args in tuples(x.base(), sym.arity) {
                            let loc = Location::new(&sym.name, args.clone());
                            let differs = x.value(&sym.name, &args) != next.value(&sym.name, &args);
                            prop_assert_eq!(differs, changed.contains(&loc));
                        }
                    }
                }
            }
        }
    }
}
