//! Isomorphism files: one block per supplied isomorphism.
//!
//! ```text
//! iso X0 -> X1 { client0 -> client1 ; client1 -> client0 }
//! ```
//!
//! Elements of the source base that are not listed map to themselves.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::model::AlgorithmSpec;
use crate::structure::{Element, Isomorphism};
use crate::text::{Cursor, LexMode, ParseError, Tok};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsoDecl {
    pub from: String,
    pub to: String,
    /// Total on the base of `from`.
    pub iso: Isomorphism,
}

pub fn parse_iso_file(text: &str, spec: &AlgorithmSpec) -> Result<Vec<IsoDecl>, ParseError> {
    let mut cur = Cursor::new(text, LexMode::Spec)?;
    let mut out = Vec::new();
    while !cur.at_eof() {
        cur.expect_keyword("iso")?;
        let from = cur.expect_ident("a state name")?;
        cur.expect(&Tok::Arrow)?;
        let to = cur.expect_ident("a state name")?;
        let x = spec
            .states
            .get(&from.name)
            .ok_or_else(|| ParseError::name(from.span, format!("unknown state `{}`", from.name)))?;
        let y = spec
            .states
            .get(&to.name)
            .ok_or_else(|| ParseError::name(to.span, format!("unknown state `{}`", to.name)))?;
        let open = cur.expect(&Tok::LBrace)?;
        let mut listed = BTreeMap::new();
        while *cur.peek() != Tok::RBrace {
            let (a, sa) = cur.expect_name("an element")?;
            cur.expect(&Tok::Arrow)?;
            let (b, sb) = cur.expect_name("an element")?;
            let (a, b) = (Element::new(&a), Element::new(&b));
            if !x.contains(&a) {
                return Err(ParseError::name(sa, format!("`{a}` is not in the base of {}", from.name)));
            }
            if !y.contains(&b) {
                return Err(ParseError::name(sb, format!("`{b}` is not in the base of {}", to.name)));
            }
            if listed.insert(a.clone(), b).is_some() {
                return Err(ParseError::name(sa, format!("`{a}` is mapped twice")));
            }
            if !cur.eat(&Tok::Semi) {
                break;
            }
        }
        cur.expect(&Tok::RBrace)?;
        let mut map: BTreeMap<Element, Element> = x.base().iter().map(|e| (e.clone(), e.clone())).collect();
        map.extend(listed);
        let iso = Isomorphism::new(map)
            .map_err(|e| ParseError::name(open, format!("map is not injective: {e}")))?;
        out.push(IsoDecl {
            from: from.name,
            to: to.name,
            iso,
        });
    }
    Ok(out)
}

/// Canonical form: identity pairs are left out.
pub fn print_iso_file(decls: &[IsoDecl]) -> String {
    let mut out = String::new();
    for d in decls {
        let moved: Vec<String> = d
            .iso
            .map()
            .iter()
            .filter(|(a, b)| a != b)
            .map(|(a, b)| format!("{a} -> {b}"))
            .collect();
        if moved.is_empty() {
            let _ = writeln!(out, "iso {} -> {} {{ }}", d.from, d.to);
        } else {
            let _ = writeln!(out, "iso {} -> {} {{ {} }}", d.from, d.to, moved.join(" ; "));
        }
    }
    out
}
