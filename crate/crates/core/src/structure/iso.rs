use std::collections::{BTreeMap, BTreeSet};

use super::{tuples, Element, Location, Structure, StructureError, Update, UpdateSet};

/// An injective element map, applied elementwise to structures, queries,
/// histories and update sets. Labels are never touched.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Isomorphism {
    forward: BTreeMap<Element, Element>,
}

impl Isomorphism {
    pub fn new(forward: BTreeMap<Element, Element>) -> Result<Self, StructureError> {
        let mut seen = BTreeSet::new();
        for v in forward.values() {
            if !seen.insert(v) {
                return Err(StructureError::NotInjective(v.clone()));
            }
        }
        Ok(Isomorphism { forward })
    }

    pub fn identity<'a>(base: impl IntoIterator<Item = &'a Element>) -> Self {
        Isomorphism {
            forward: base.into_iter().map(|e| (e.clone(), e.clone())).collect(),
        }
    }

    /// Swaps `a` and `b`, fixing every other element of `base`.
    pub fn swap<'a>(base: impl IntoIterator<Item = &'a Element>, a: &Element, b: &Element) -> Self {
        let forward = base
            .into_iter()
            .map(|e| {
                let img = if e == a {
                    b.clone()
                } else if e == b {
                    a.clone()
                } else {
                    e.clone()
                };
                (e.clone(), img)
            })
            .collect();
        Isomorphism { forward }
    }

    pub fn map(&self) -> &BTreeMap<Element, Element> {
        &self.forward
    }

    pub fn image(&self, e: &Element) -> Result<Element, StructureError> {
        self.forward
            .get(e)
            .cloned()
            .ok_or_else(|| StructureError::ElementNotInDomain(e.clone()))
    }

    pub fn inverse(&self) -> Isomorphism {
        Isomorphism {
            forward: self.forward.iter().map(|(k, v)| (v.clone(), k.clone())).collect(),
        }
    }
}

/// Canonical extension of an element map to compound values.
pub trait Transport: Sized {
    fn transport(&self, iso: &Isomorphism) -> Result<Self, StructureError>;
}

pub fn apply_isomorphism<T: Transport>(iso: &Isomorphism, obj: &T) -> Result<T, StructureError> {
    obj.transport(iso)
}

impl Transport for Element {
    fn transport(&self, iso: &Isomorphism) -> Result<Self, StructureError> {
        iso.image(self)
    }
}

impl Transport for Structure {
    fn transport(&self, iso: &Isomorphism) -> Result<Self, StructureError> {
        self.map_elements(|e| iso.image(e))
    }
}

impl Transport for Location {
    fn transport(&self, iso: &Isomorphism) -> Result<Self, StructureError> {
        Ok(Location {
            symbol: self.symbol.clone(),
            args: self.args.iter().map(|e| iso.image(e)).collect::<Result<_, _>>()?,
        })
    }
}

impl Transport for Update {
    fn transport(&self, iso: &Isomorphism) -> Result<Self, StructureError> {
        Ok(Update {
            location: self.location.transport(iso)?,
            value: iso.image(&self.value)?,
        })
    }
}

impl Transport for UpdateSet {
    fn transport(&self, iso: &Isomorphism) -> Result<Self, StructureError> {
        self.iter().map(|u| u.transport(iso)).collect()
    }
}

/// True iff `map` is a bijection from `base(x)` onto `base(y)` that commutes
/// with every interpretation.
pub fn check_isomorphism(map: &BTreeMap<Element, Element>, x: &Structure, y: &Structure) -> bool {
    if x.vocabulary() != y.vocabulary() {
        return false;
    }
    let domain: BTreeSet<&Element> = map.keys().collect();
    let image: BTreeSet<&Element> = map.values().collect();
    if domain != x.base().iter().collect::<BTreeSet<_>>()
        || image != y.base().iter().collect::<BTreeSet<_>>()
        || image.len() != map.len()
    {
        return false;
    }
    x.vocabulary().symbols().all(|sym| {
        tuples(x.base(), sym.arity).into_iter().all(|args| {
            let mapped: Vec<Element> = args.iter().map(|a| map[a].clone()).collect();
            match (x.value(&sym.name, &args), y.value(&sym.name, &mapped)) {
                (Some(vx), Some(vy)) => map.get(vx) == Some(vy),
                _ => false,
            }
        })
    })
}
