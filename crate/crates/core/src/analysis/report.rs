use std::fmt::Write as _;

use super::{ClauseStatus, ConformanceReport, Enumeration, EnumerationConfig, EquivalenceReport};
use crate::model::{AlgorithmSpec, ModelError};
use crate::report::{Format, KeyValues};
use crate::structure::Structure;

fn config_line(cfg: &EnumerationConfig) -> String {
    format!(
        "pool {}, max phases {}, max domain {}",
        cfg.pool_label(),
        cfg.max_phases,
        cfg.max_domain
    )
}

fn put_config(kv: &mut KeyValues, cfg: &EnumerationConfig) {
    kv.put("pool", cfg.pool_label());
    kv.put("max_phases", cfg.max_phases);
    kv.put("max_domain", cfg.max_domain);
}

/// Lists every history with its verdict, in history order.
pub fn format_enumeration(
    spec: &AlgorithmSpec,
    state: &str,
    x: &Structure,
    en: &Enumeration,
    cfg: &EnumerationConfig,
    format: Format,
) -> Result<String, ModelError> {
    match format {
        Format::Human => {
            let mut o = String::new();
            let _ = writeln!(o, "state {state}: {} attainable histories ({})", en.len(), config_line(cfg));
            for h in &en.histories {
                let _ = writeln!(o, "  {h} : {}", spec.verdict(x, h)?);
            }
            if en.truncated {
                o.push_str("truncated: the bounds cut off part of the space\n");
            }
            Ok(o)
        }
        Format::Machine => {
            let mut kv = KeyValues::new();
            kv.put("state", state);
            put_config(&mut kv, cfg);
            kv.put("count", en.len());
            kv.put("truncated", en.truncated);
            kv.end_block();
            for (i, h) in en.histories.iter().enumerate() {
                kv.put(format!("history.{i}"), h);
                kv.put(format!("verdict.{i}"), spec.verdict(x, h)?);
            }
            Ok(kv.finish())
        }
    }
}

pub fn format_conformance(r: &ConformanceReport, format: Format) -> String {
    match format {
        Format::Human => {
            let mut o = String::new();
            let _ = writeln!(o, "enumeration: {}", config_line(&r.config));
            for (state, n) in &r.counts {
                let _ = writeln!(o, "state {state}: {n} attainable histories");
            }
            for s in &r.sections {
                let status = if s.passed() { "pass" } else { "FAIL" };
                let _ = writeln!(o, "({}) {}: {status} ({} checked)", s.id, s.title, s.checked);
                for v in &s.violations {
                    let _ = writeln!(o, "    {v}");
                }
            }
            if r.truncated {
                o.push_str("note: the bounds cut off part of the space\n");
            }
            let _ = writeln!(o, "result: {}", if r.passed() { "conforms" } else { "violations found" });
            o
        }
        Format::Machine => {
            let mut kv = KeyValues::new();
            put_config(&mut kv, &r.config);
            for (state, n) in &r.counts {
                kv.put(format!("count.{state}"), n);
            }
            kv.put("truncated", r.truncated);
            kv.put("passed", r.passed());
            kv.end_block();
            for s in &r.sections {
                kv.put("section", s.id);
                kv.put("title", s.title);
                kv.put("checked", s.checked);
                kv.put("passed", s.passed());
                kv.put("violations", s.violations.len());
                for (i, v) in s.violations.iter().enumerate() {
                    kv.put(format!("violation.{i}"), v);
                }
                kv.end_block();
            }
            kv.finish()
        }
    }
}

fn status(c: ClauseStatus) -> &'static str {
    match c {
        ClauseStatus::Pass => "pass",
        ClauseStatus::Fail => "fail",
        ClauseStatus::NotChecked => "skipped",
    }
}

pub fn format_equivalence(r: &EquivalenceReport, format: Format) -> String {
    let mode = if r.weak { "weak" } else { "full" };
    match format {
        Format::Human => {
            let mut o = String::new();
            let _ = writeln!(o, "{mode} check ({})", config_line(&r.config));
            for s in &r.states {
                let cells: Vec<String> = s
                    .clauses
                    .iter()
                    .enumerate()
                    .map(|(i, c)| format!("{}:{}", i + 1, status(*c)))
                    .collect();
                let _ = writeln!(o, "state {}: {}", s.state, cells.join(" "));
            }
            if let Some(d) = &r.divergence {
                match &d.history {
                    Some(h) => {
                        let _ = writeln!(o, "first divergence: state {}, clause {}, history {h}", d.state, d.clause);
                    }
                    None => {
                        let _ = writeln!(o, "first divergence: state {}, clause {}", d.state, d.clause);
                    }
                }
                let _ = writeln!(o, "  {}", d.details);
            }
            let _ = writeln!(o, "{}", r.verdict_label());
            o
        }
        Format::Machine => {
            let mut kv = KeyValues::new();
            kv.put("mode", mode);
            put_config(&mut kv, &r.config);
            kv.put("equivalent", r.equivalent);
            kv.put("truncated", r.truncated);
            kv.put("verdict", r.verdict_label());
            kv.end_block();
            for s in &r.states {
                for (i, c) in s.clauses.iter().enumerate() {
                    kv.put(format!("clause.{}.{}", s.state, i + 1), status(*c));
                }
                kv.end_block();
            }
            if let Some(d) = &r.divergence {
                kv.put("divergence.state", &d.state);
                kv.put("divergence.clause", d.clause);
                match &d.history {
                    Some(h) => kv.put("divergence.history", h),
                    None => kv.put("divergence.history", "-"),
                };
                kv.put("divergence.details", &d.details);
            }
            kv.finish()
        }
    }
}
