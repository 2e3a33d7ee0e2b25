use std::collections::BTreeSet;

use super::*;
use crate::dsl::load_spec;
use crate::fixtures::{broker, broker_preferred, BROKER, BROKER_SWAP_ISO};
use crate::history::{parse_history, History, Query};
use crate::structure::Element;

/// Ordered partitions of `items` into exactly `k` nonempty blocks.
fn ordered_partitions(items: &[Query], k: usize) -> Vec<Vec<Vec<Query>>> {
    if k == 0 {
        return if items.is_empty() { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    // assign every item a block index in 0..k, keep surjective assignments
    let total = k.pow(items.len() as u32);
    for code in 0..total {
        let mut blocks = vec![Vec::new(); k];
        let mut c = code;
        for q in items {
            blocks[c % k].push(q.clone());
            c /= k;
        }
        if blocks.iter().all(|b| !b.is_empty()) {
            out.push(blocks);
        }
    }
    out
}

/// Every history over `universe` with at most `phases` classes and replies
/// from `pool`, kept iff coherent with no proper final initial segment.
fn oracle(
    spec: &AlgorithmSpec,
    x: &Structure,
    universe: &[Query],
    pool: &[&str],
    phases: usize,
    max_domain: usize,
) -> BTreeSet<History> {
    let pool: Vec<Element> = pool.iter().map(|p| Element::new(p)).collect();
    let mut out = BTreeSet::new();
    for mask in 0u32..(1 << universe.len()) {
        let dom: Vec<Query> = (0..universe.len())
            .filter(|i| mask & (1 << i) != 0)
            .map(|i| universe[i].clone())
            .collect();
        if dom.len() > max_domain {
            continue;
        }
        for k in 0..=phases.min(dom.len()) {
            for blocks in ordered_partitions(&dom, k) {
                for code in 0..pool.len().pow(dom.len() as u32) {
                    let mut c = code;
                    let mut h = History::empty();
                    for b in &blocks {
                        let batch = b
                            .iter()
                            .map(|q| {
                                let r = pool[c % pool.len()].clone();
                                c /= pool.len();
                                (q.clone(), r)
                            })
                            .collect();
                        h = h.append_class(&batch).unwrap();
                    }
                    let attainable = spec.is_coherent(x, &h).unwrap()
                        && (0..h.len()).all(|j| !spec.verdict(x, &h.prefix(j)).unwrap().is_final());
                    if attainable {
                        out.insert(h);
                    }
                }
            }
        }
    }
    out
}

fn labels(names: &[&str]) -> Vec<Query> {
    names.iter().map(|n| Query::label(n)).collect()
}

fn cfg(pool: &[&str], phases: usize) -> EnumerationConfig {
    EnumerationConfig {
        max_phases: phases,
        ..EnumerationConfig::default()
    }
    .with_pool(pool.iter().copied())
}

#[test]
fn no_issue_rules_gives_only_the_empty_history() {
    let text = "algorithm idle\nvocabulary { }\nlabels { }\nstate S { base true false undef }\ninitial { S }\nbounds max_query_len 1 max_issued 1\n";
    let spec = load_spec(text).unwrap();
    let x = spec.state("S").unwrap();
    let en = enumerate_attainable(&spec, x, &EnumerationConfig::default()).unwrap();
    assert_eq!(en.histories, [History::empty()].into_iter().collect());
    assert!(!en.truncated);
}

#[test]
fn matches_brute_force_oracle() {
    let b = broker();
    let universe = labels(&["offer0", "offer1", "choose", "timeout"]);
    for (pool, phases) in [(&["yes", "no"][..], 1), (&["yes", "no", "t"][..], 2), (&["yes", "client1"][..], 3)] {
        for state in ["X0", "X1"] {
            let x = b.state(state).unwrap();
            let en = enumerate_attainable(&b, x, &cfg(pool, phases)).unwrap();
            assert_eq!(en.histories, oracle(&b, x, &universe, pool, phases, 8), "{state} {pool:?}");
        }
    }
    // one phase over {yes, no}: every nonempty sub-map of the three initial
    // queries, minus nothing (all are attainable at depth one)
    let x0 = b.state("X0").unwrap();
    let en = enumerate_attainable(&b, x0, &cfg(&["yes", "no"], 1)).unwrap();
    assert_eq!(en.len(), 1 + (3usize.pow(3) - 1));
    assert!(en.truncated);
}

#[test]
fn parallel_enumeration_is_identical() {
    let b = broker();
    let x = b.state("X0").unwrap();
    let serial = enumerate_attainable(&b, x, &cfg(&["yes", "no", "client0", "t"], 3)).unwrap();
    let par = enumerate_attainable(
        &b,
        x,
        &EnumerationConfig {
            jobs: 4,
            ..cfg(&["yes", "no", "client0", "t"], 3)
        },
    )
    .unwrap();
    assert_eq!(serial, par);
}

#[test]
fn enumerated_space_properties() {
    let b = broker();
    let x = b.state("X0").unwrap();
    let en = enumerate_attainable(&b, x, &cfg(&["yes", "no", "client0", "client1", "t"], 3)).unwrap();
    assert!(!en.truncated);
    let finals: Vec<&History> = en
        .histories
        .iter()
        .filter(|h| b.verdict(x, h).unwrap().is_final())
        .collect();
    for h in &en.histories {
        for seg in h.initial_segments() {
            assert!(en.histories.contains(&seg), "not prefix closed at {h}");
        }
        let issued = b.issued(x, h).unwrap();
        assert!(h.domain_size() <= issued.len());
        assert!(h.domain_size() <= b.bounds.max_issued);
        assert!(finals.iter().any(|f| h.is_initial_segment(f)), "{h} has no final extension");
    }
}

#[test]
fn config_is_validated() {
    let b = broker();
    let x = b.state("X0").unwrap();
    for bad in [
        cfg(&["zz"], 2),
        cfg(&["yes"], 0),
        EnumerationConfig {
            max_domain: 0,
            ..EnumerationConfig::default()
        },
        EnumerationConfig {
            reply_pool: Some(BTreeSet::new()),
            ..EnumerationConfig::default()
        },
    ] {
        assert!(matches!(
            enumerate_attainable(&b, x, &bad),
            Err(AnalysisError::InvalidConfig(_))
        ));
    }
    // a small domain bound cuts the tie branch
    let en = enumerate_attainable(
        &b,
        x,
        &EnumerationConfig {
            max_domain: 1,
            ..cfg(&["yes", "no"], 3)
        },
    )
    .unwrap();
    assert!(en.truncated);
    assert!(en.histories.iter().all(|h| h.domain_size() <= 1));
}

#[test]
fn iso_files_parse_and_print() {
    let b = broker();
    let decls = parse_iso_file(BROKER_SWAP_ISO, &b).unwrap();
    assert_eq!(decls.len(), 1);
    assert_eq!(decls[0].iso.image(&Element::new("client0")).unwrap(), Element::new("client1"));
    assert_eq!(decls[0].iso.image(&Element::new("yes")).unwrap(), Element::new("yes"));
    assert_eq!(print_iso_file(&decls), BROKER_SWAP_ISO);
    for (text, line) in [
        ("iso X0 -> X9 { }", 1),
        ("iso X0 -> X1 {\n zz -> yes }", 2),
        ("iso X0 -> X1 { yes -> no ; no -> no }", 1),
        ("iso X0 -> X1 { yes -> no ; yes -> yes }", 1),
        ("iso X0 X1", 1),
    ] {
        let err = parse_iso_file(text, &b).unwrap_err();
        assert_eq!(err.span.line, line, "{text}");
    }
}

#[test]
fn broker_conforms_with_swap() {
    let b = broker();
    let isos = parse_iso_file(BROKER_SWAP_ISO, &b).unwrap();
    let c = cfg(&["yes", "no", "client0", "client1", "t"], 3);
    let r = check_postulates(&b, &c, &isos, &WitnessPair::all(&b)).unwrap();
    assert!(r.passed(), "{}", format_conformance(&r, crate::report::Format::Human));
    assert!(r.section('d').unwrap().checked > 100);
    assert!(r.section('a').unwrap().checked > 0);
    assert!(!r.truncated);

    // the same map read as an automorphism of X0 is not one
    let bogus = parse_iso_file("iso X0 -> X0 { client0 -> client1 ; client1 -> client0 }", &b).unwrap();
    let r = check_postulates(&b, &c, &bogus, &[]).unwrap();
    assert!(!r.section('d').unwrap().passed());
}

#[test]
fn strict_spec_missing_a_final_rule_is_reported() {
    let text = BROKER
        .replace("algorithm broker", "algorithm broker\nfinality strict")
        .lines()
        .filter(|l| !l.starts_with("final timed_out"))
        .collect::<Vec<_>>()
        .join("\n");
    let spec = load_spec(&text).unwrap();
    let r = check_postulates(&spec, &cfg(&["no", "t"], 3), &[], &[]).unwrap();
    let a = r.section('a').unwrap();
    assert!(!a.passed());
    assert!(a.violations.iter().any(|v| v.contains("(timeout) -> t")));
    assert!(r.section('b').unwrap().passed());
}

#[test]
fn tight_bounds_are_reported() {
    let text = BROKER.replace("max_issued 5", "max_issued 2");
    let spec = load_spec(&text).unwrap();
    let r = check_postulates(&spec, &cfg(&["yes", "no"], 2), &[], &[]).unwrap();
    assert!(!r.section('c').unwrap().passed());
    assert!(r.section('a').unwrap().passed());
}

#[test]
fn overlapping_outcomes_are_reported() {
    let text = BROKER.replace(
        "final both_no",
        "final refuse: when reply(offer0) = no and reply(offer1) = no fail\nfinal both_no",
    );
    let spec = load_spec(&text).unwrap();
    let r = check_postulates(&spec, &cfg(&["no"], 2), &[], &[]).unwrap();
    let b = r.section('b').unwrap();
    assert!(!b.passed());
    assert!(b.violations[0].contains("refuse"));
}

fn with_rule(rule: &str) -> AlgorithmSpec {
    load_spec(&BROKER.replace("\nbounds", &format!("{rule}\n\nbounds"))).unwrap()
}

#[test]
fn equivalence_examples() {
    let b = broker();
    let c = cfg(&["yes", "no", "client0", "client1", "t"], 3);
    let r = equivalent(&b, &b, &c).unwrap();
    assert!(r.equivalent && !r.truncated && r.divergence.is_none());
    assert_eq!(r.verdict_label(), "equivalent");

    let contradiction = with_rule("issue never: when unanswered(choose) and answered(choose) emit timeout");
    assert!(equivalent(&b, &contradiction, &c).unwrap().equivalent);
    assert!(weak_equivalent(&b, &contradiction, &c).unwrap().equivalent);

    let p = broker_preferred();
    for r in [equivalent(&b, &p, &c).unwrap(), weak_equivalent(&b, &p, &c).unwrap()] {
        assert!(!r.equivalent);
        let d = r.divergence.unwrap();
        assert_eq!(d.state, "X0");
        assert_eq!(d.history, Some(parse_history("{ (offer0) -> yes @0 ; (offer1) -> yes @0 }").unwrap()));
        assert!(d.clause == 3 || d.clause == 4, "clause {}", d.clause);
    }
}

#[test]
fn unattainable_differences_are_invisible() {
    let b = broker();
    let c = cfg(&["yes", "no", "client0", "client1", "t"], 3);
    let late = with_rule("issue late: when before(offer0, offer1) and reply(offer0) = yes emit choose");
    let h = parse_history("{ (offer0) -> yes @0 ; (offer1) -> no @1 }").unwrap();
    let x = b.state("X0").unwrap();
    assert_ne!(b.issued(x, &h).unwrap(), late.issued(x, &h).unwrap());
    assert!(weak_equivalent(&b, &late, &c).unwrap().equivalent);
    assert!(equivalent(&b, &late, &c).unwrap().equivalent);
}

#[test]
fn strictly_larger_attainable_set_is_rejected_by_both() {
    let b = broker();
    let c = cfg(&["yes", "no", "client0", "client1", "t"], 3);
    // the tie history becomes final, so broker's choose branch disappears
    let eager = with_rule("final stop: when reply(offer0) = yes and reply(offer1) = yes succeed");
    let x = b.state("X0").unwrap();
    let big = enumerate_attainable(&b, x, &c).unwrap().histories;
    let small = enumerate_attainable(&eager, x, &c).unwrap().histories;
    assert!(small.is_subset(&big) && small.len() < big.len());
    let full = equivalent(&b, &eager, &c).unwrap();
    let weak = weak_equivalent(&b, &eager, &c).unwrap();
    assert!(!full.equivalent && !weak.equivalent);
    assert!(agreement_property(&b, &eager, &c).unwrap());
}

#[test]
fn clause_one_and_vocabulary_checks() {
    let b = broker();
    let c = cfg(&["yes", "no"], 2);
    let one = load_spec(&BROKER.replace("initial { X0 X1 }", "initial { X0 }")).unwrap();
    let r = equivalent(&b, &one, &c).unwrap();
    assert!(!r.equivalent);
    let d = r.divergence.unwrap();
    assert_eq!((d.state.as_str(), d.clause, d.history), ("X1", 1, None));

    let other = load_spec(&BROKER.replace("dynamic owner/0", "dynamic owner/0\n  dynamic seen/0")).unwrap();
    assert!(matches!(equivalent(&b, &other, &c), Err(AnalysisError::ConfigMismatch(_))));
}

#[test]
fn equivalence_is_an_equivalence_relation() {
    let c = cfg(&["yes", "no", "client0", "client1", "t"], 3);
    let family = [
        broker(),
        with_rule("issue never: when unanswered(choose) and answered(choose) emit timeout"),
        broker_preferred(),
        with_rule("final stop: when reply(offer0) = yes and reply(offer1) = yes succeed"),
    ];
    let n = family.len();
    let mut eq = vec![vec![false; n]; n];
    for i in 0..n {
        for j in 0..n {
            eq[i][j] = equivalent(&family[i], &family[j], &c).unwrap().equivalent;
            assert!(agreement_property(&family[i], &family[j], &c).unwrap());
        }
    }
    for i in 0..n {
        assert!(eq[i][i]);
        for j in 0..n {
            assert_eq!(eq[i][j], eq[j][i]);
            for k in 0..n {
                if eq[i][j] && eq[j][k] {
                    assert!(eq[i][k]);
                }
            }
        }
    }
    assert!(eq[0][1] && !eq[0][2] && !eq[0][3]);
}

#[test]
fn reports_are_deterministic() {
    let b = broker();
    let p = broker_preferred();
    let c = cfg(&["yes", "no"], 2);
    let par = EnumerationConfig { jobs: 3, ..c.clone() };
    for f in [crate::report::Format::Human, crate::report::Format::Machine] {
        let r1 = format_equivalence(&equivalent(&b, &p, &c).unwrap(), f);
        let r2 = format_equivalence(&equivalent(&b, &p, &par).unwrap(), f);
        assert_eq!(r1.replace("jobs", ""), r2.replace("jobs", ""));
        assert!(r1.contains("not equivalent"));
    }
    let x = b.state("X0").unwrap();
    let en = enumerate_attainable(&b, x, &c).unwrap();
    let m = format_enumeration(&b, "X0", x, &en, &c, crate::report::Format::Machine).unwrap();
    assert!(m.contains(&format!("count={}", en.len())));
    assert!(m.contains("pool={no,yes}"));
}
