use std::collections::BTreeMap;

use super::{enumerate_attainable, AnalysisError, Enumeration, EnumerationConfig, IsoDecl};
use crate::history::{print_query_set, History};
use crate::model::{AlgorithmSpec, FailReason, ModelError, Verdict};
use crate::structure::{apply_isomorphism, check_isomorphism, print_update_set, Isomorphism, Transport};

/// Two states whose step behavior is compared through the witness terms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessPair {
    pub left: String,
    pub right: String,
}

impl WitnessPair {
    pub fn new(left: &str, right: &str) -> Self {
        WitnessPair {
            left: left.into(),
            right: right.into(),
        }
    }

    /// Every unordered pair of distinct states.
    pub fn all(spec: &AlgorithmSpec) -> Vec<WitnessPair> {
        let names: Vec<&String> = spec.states.keys().collect();
        let mut out = Vec::new();
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                out.push(WitnessPair::new(a, b));
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Section {
    /// `a` through `e`.
    pub id: char,
    pub title: &'static str,
    /// Number of individual checks performed.
    pub checked: usize,
    pub violations: Vec<String>,
}

impl Section {
    fn new(id: char, title: &'static str) -> Self {
        Section {
            id,
            title,
            checked: 0,
            violations: Vec::new(),
        }
    }

    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConformanceReport {
    pub config: EnumerationConfig,
    /// Attainable history counts per state.
    pub counts: BTreeMap<String, usize>,
    pub truncated: bool,
    pub sections: Vec<Section>,
}

impl ConformanceReport {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(Section::passed)
    }

    pub fn section(&self, id: char) -> Option<&Section> {
        self.sections.iter().find(|s| s.id == id)
    }
}

fn transport_verdict(v: &Verdict, iso: &Isomorphism) -> Result<Verdict, ModelError> {
    Ok(match v {
        Verdict::Fail(FailReason::Clash(loc)) => Verdict::Fail(FailReason::Clash(loc.transport(iso)?)),
        other => other.clone(),
    })
}

/// Checks, on every enumerated attainable history of every state:
///
/// * (a) complete histories have a final initial segment;
/// * (b) no final history matches both a success and a fail rule;
/// * (c) the declared work bounds hold;
/// * (d) causes, verdicts and update sets commute with each supplied
///   isomorphism;
/// * (e) states that agree on the witness terms step alike, for each
///   supplied pair, on the histories attainable for both.
pub fn check_postulates(
    spec: &AlgorithmSpec,
    cfg: &EnumerationConfig,
    isos: &[IsoDecl],
    witness_pairs: &[WitnessPair],
) -> Result<ConformanceReport, AnalysisError> {
    let mut spaces: BTreeMap<String, Enumeration> = BTreeMap::new();
    for (name, x) in &spec.states {
        spaces.insert(name.clone(), enumerate_attainable(spec, x, cfg)?);
    }
    let mut a = Section::new('a', "complete histories have a final initial segment");
    let mut b = Section::new('b', "success and failure are exclusive");
    let mut c = Section::new('c', "declared work bounds");
    let mut d = Section::new('d', "isomorphism transport");
    let mut e = Section::new('e', "witness sufficiency");

    for (name, space) in &spaces {
        let x = spec.state(name)?;
        for h in &space.histories {
            if spec.is_complete(x, h)? {
                a.checked += 1;
                let mut reached = false;
                for seg in h.initial_segments() {
                    if spec.verdict(x, &seg)?.is_final() {
                        reached = true;
                        break;
                    }
                }
                if !reached {
                    a.violations
                        .push(format!("{name}: complete history {h} has no final initial segment"));
                }
            }
            if spec.verdict(x, h)?.is_final() {
                b.checked += 1;
                let (succ, fail) = spec.final_matches(x, h)?;
                if !succ.is_empty() && !fail.is_empty() {
                    b.violations.push(format!(
                        "{name}: {h} matches success rules [{}] and fail rules [{}]",
                        succ.join(", "),
                        fail.join(", ")
                    ));
                }
            }
        }
        let all: Vec<History> = space.histories.iter().cloned().collect();
        c.checked += all.len();
        for diag in spec.check_bounds(x, &all)? {
            c.violations.push(format!("{name}: {diag}"));
        }
    }

    for decl in isos {
        let x = spec.state(&decl.from)?;
        let y = spec.state(&decl.to)?;
        let label = format!("{} -> {}", decl.from, decl.to);
        if !check_isomorphism(decl.iso.map(), x, y) {
            d.checked += 1;
            d.violations.push(format!("{label}: the map is not an isomorphism"));
            continue;
        }
        let iso = &decl.iso;
        for h in &spaces[&decl.from].histories {
            d.checked += 1;
            let hy = apply_isomorphism(iso, h).map_err(ModelError::from)?;
            let cx = apply_isomorphism(iso, &spec.causes(x, h)?).map_err(ModelError::from)?;
            let cy = spec.causes(y, &hy)?;
            if cx != cy {
                d.violations.push(format!(
                    "{label}: causes of {h} map to {} but the image causes {}",
                    print_query_set(&cx),
                    print_query_set(&cy)
                ));
            }
            let vx = spec.verdict(x, h)?;
            let vy = spec.verdict(y, &hy)?;
            if transport_verdict(&vx, iso)? != vy {
                d.violations
                    .push(format!("{label}: verdict of {h} is {vx} but the image is {vy}"));
                continue;
            }
            if vx == Verdict::Success {
                let ux = apply_isomorphism(iso, &spec.update_set(x, h)?).map_err(ModelError::from)?;
                let uy = spec.update_set(y, &hy)?;
                if ux != uy {
                    d.violations.push(format!(
                        "{label}: updates of {h} map to {} but the image has {}",
                        print_update_set(&ux),
                        print_update_set(&uy)
                    ));
                }
            }
        }
    }

    for pair in witness_pairs {
        let x = spec.state(&pair.left)?;
        let y = spec.state(&pair.right)?;
        let right = &spaces[&pair.right].histories;
        for h in spaces[&pair.left].histories.iter().filter(|h| right.contains(h)) {
            e.checked += 1;
            for diag in spec.check_witness(x, y, h)? {
                e.violations.push(format!("{} / {}: {diag}", pair.left, pair.right));
            }
        }
    }

    Ok(ConformanceReport {
        config: cfg.clone(),
        counts: spaces.iter().map(|(n, s)| (n.clone(), s.len())).collect(),
        truncated: spaces.values().any(|s| s.truncated),
        sections: vec![a, b, c, d, e],
    })
}
