//! Check runner with timing, plus text and JSON report rendering.

use std::time::Instant;

use treelie_core::checks::{run_check, CheckStatus, CHECKS};
use treelie_core::symplectic::Genus;

#[derive(Clone, Debug)]
pub struct Report {
    pub name: String,
    pub genus: u32,
    pub status: CheckStatus,
    pub expected: String,
    pub actual: String,
    pub runtime_ms: u128,
}

pub fn status_str(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Warn => "warn",
    }
}

/// Run the named checks (deterministic order: the registry order filtered
/// by the selection).
pub fn run_selected(genus: Genus, selection: &[String]) -> Result<Vec<Report>, String> {
    let all = selection.iter().any(|s| s == "all");
    let known: Vec<&str> = CHECKS.iter().map(|c| c.name).collect();
    for s in selection {
        if s != "all" && !known.contains(&s.as_str()) {
            return Err(format!("unknown check name '{}'", s));
        }
    }
    let mut out = Vec::new();
    for def in CHECKS {
        if !all && !selection.iter().any(|s| s == def.name) {
            continue;
        }
        let start = Instant::now();
        let outcome = run_check(def.name, genus).expect("registered check");
        let runtime_ms = start.elapsed().as_millis();
        out.push(Report {
            name: def.name.to_string(),
            genus: genus.get(),
            status: outcome.status,
            expected: outcome.expected,
            actual: outcome.actual,
            runtime_ms,
        });
    }
    Ok(out)
}

pub fn render_text(reports: &[Report]) -> String {
    let mut out = String::new();
    for r in reports {
        out.push_str(&format!(
            "{:<4} {} (genus {}, {} ms)\n",
            status_str(r.status).to_uppercase(),
            r.name,
            r.genus,
            r.runtime_ms
        ));
        match r.status {
            CheckStatus::Pass => {}
            CheckStatus::Warn => {
                out.push_str(&format!("     skipped: {}\n", r.actual));
            }
            CheckStatus::Fail => {
                out.push_str(&format!("     expected: {}\n", r.expected));
                out.push_str(&format!("     actual:   {}\n", r.actual));
            }
        }
    }
    let fails = reports.iter().filter(|r| r.status == CheckStatus::Fail).count();
    let warns = reports.iter().filter(|r| r.status == CheckStatus::Warn).count();
    out.push_str(&format!(
        "{} checks: {} passed, {} failed, {} skipped\n",
        reports.len(),
        reports.len() - fails - warns,
        fails,
        warns
    ));
    out
}

fn json_escape(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c if (c as u32) < 0x20 => out.push_str(&format!("\\u{:04x}", c as u32)),
            c => out.push(c),
        }
    }
    out
}

pub fn render_json(reports: &[Report]) -> String {
    let mut out = String::from("[\n");
    for (i, r) in reports.iter().enumerate() {
        out.push_str(&format!(
            "  {{\"name\": \"{}\", \"genus\": {}, \"status\": \"{}\", \"expected\": \"{}\", \"actual\": \"{}\", \"runtime_ms\": {}}}{}\n",
            json_escape(&r.name),
            r.genus,
            status_str(r.status),
            json_escape(&r.expected),
            json_escape(&r.actual),
            r.runtime_ms,
            if i + 1 < reports.len() { "," } else { "" }
        ));
    }
    out.push_str("]\n");
    out
}
