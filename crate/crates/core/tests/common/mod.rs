//! Independent oracles shared by the integration tests.

#![allow(dead_code)]

use std::collections::BTreeSet;
use std::path::PathBuf;

use isa_core::history::{AnswerFunction, History, Query};
use isa_core::model::AlgorithmSpec;
use isa_core::structure::{Element, Structure};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

pub fn labels(names: &[&str]) -> Vec<Query> {
    names.iter().map(|n| Query::label(n)).collect()
}

/// Ways to assign each of `n` items a block in `0..k` with every block used.
fn surjections(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    if k == 0 {
        if n == 0 {
            out.push(Vec::new());
        }
        return out;
    }
    let mut code = vec![0usize; n];
    loop {
        let used: BTreeSet<usize> = code.iter().copied().collect();
        if used.len() == k {
            out.push(code.clone());
        }
        let mut i = 0;
        while i < n {
            code[i] += 1;
            if code[i] < k {
                break;
            }
            code[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
    }
    out
}

/// Every history over `universe` with at most `phases` classes, at most
/// `max_domain` queries and replies drawn from `pool`.
pub fn all_histories(universe: &[Query], pool: &[&str], phases: usize, max_domain: usize) -> Vec<History> {
    let pool: Vec<Element> = pool.iter().map(|p| Element::new(p)).collect();
    let mut out = Vec::new();
    for mask in 0u32..(1 << universe.len()) {
        let dom: Vec<&Query> = (0..universe.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| &universe[i])
            .collect();
        if dom.len() > max_domain {
            continue;
        }
        for k in 0..=phases.min(dom.len()) {
            for blocks in surjections(dom.len(), k) {
                let mut replies = vec![0usize; dom.len()];
                loop {
                    let mut h = History::empty();
                    for b in 0..k {
                        let batch: AnswerFunction = dom
                            .iter()
                            .enumerate()
                            .filter(|(i, _)| blocks[*i] == b)
                            .map(|(i, q)| ((*q).clone(), pool[replies[i]].clone()))
                            .collect();
                        h = h.append_class(&batch).unwrap();
                    }
                    out.push(h);
                    let mut i = 0;
                    while i < replies.len() {
                        replies[i] += 1;
                        if replies[i] < pool.len() {
                            break;
                        }
                        replies[i] = 0;
                        i += 1;
                    }
                    if i == replies.len() {
                        break;
                    }
                }
            }
        }
    }
    out
}

/// Coherent, and no proper initial segment is final. Checked directly on
/// the phase prefixes rather than through `is_attainable`.
pub fn attainable_by_definition(spec: &AlgorithmSpec, x: &Structure, h: &History) -> bool {
    for j in 0..h.len() {
        let before = h.prefix(j);
        // every query answered in phase j must be issued by the first j phases
        let mut issued = BTreeSet::new();
        for i in 0..=j {
            issued.extend(spec.causes(x, &h.prefix(i)).unwrap());
        }
        if h.class(j).keys().any(|q| !issued.contains(q)) {
            return false;
        }
        if spec.verdict(x, &before).unwrap().is_final() {
            return false;
        }
    }
    true
}

pub fn oracle(
    spec: &AlgorithmSpec,
    x: &Structure,
    universe: &[Query],
    pool: &[&str],
    phases: usize,
    max_domain: usize,
) -> BTreeSet<History> {
    all_histories(universe, pool, phases, max_domain)
        .into_iter()
        .filter(|h| attainable_by_definition(spec, x, h))
        .collect()
}

pub const BROKER_QUERIES: [&str; 4] = ["offer0", "offer1", "choose", "timeout"];
pub const FULL_POOL: [&str; 5] = ["yes", "no", "client0", "client1", "t"];
