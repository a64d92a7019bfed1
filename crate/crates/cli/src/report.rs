//! Text and JSON renderings of why / why-not explanations.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use provgame_core::datalog::GroundAtom;
use provgame_core::explain::{WhyLeaves, WhyNotReport, WhyReport};
use provgame_core::game::ProvenanceSubgraph;
use provgame_core::query_game::GameNodeId;
use serde::Serialize;

/// Γ as an indented listing: each node with value and length, followed by
/// its labeled moves.
pub fn render_gamma(gamma: &ProvenanceSubgraph<GameNodeId>) -> String {
    let mut out = String::new();
    for (p, v, l) in gamma.nodes() {
        let _ = writeln!(out, "  {p} {} {l}", v.symbol());
        for (q, label) in gamma.followers(p) {
            let _ = writeln!(out, "    -{}-> {q}", label.symbol());
        }
    }
    out
}

fn binding_text(binding: &[(String, String)]) -> String {
    if binding.is_empty() {
        return "no variables".to_string();
    }
    binding
        .iter()
        .map(|(v, c)| format!("{v}/{c}"))
        .collect::<Vec<_>>()
        .join(", ")
}

fn atoms_text(atoms: &BTreeSet<GroundAtom>) -> String {
    atoms
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(", ")
}

fn leaves_text(out: &mut String, indent: &str, leaves: &WhyLeaves) {
    if !leaves.present.is_empty() {
        let _ = writeln!(out, "{indent}uses {}", atoms_text(&leaves.present));
    }
    if !leaves.absent.is_empty() {
        let _ = writeln!(
            out,
            "{indent}relies on absent {}",
            atoms_text(&leaves.absent)
        );
    }
}

pub fn why_text(
    report: &WhyReport,
    root: &GameNodeId,
    gamma: &ProvenanceSubgraph<GameNodeId>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} is derived", report.atom);
    let _ = writeln!(out, "provenance of {root}:");
    out.push_str(&render_gamma(gamma));
    let _ = writeln!(out, "derivations:");
    for d in &report.derivations {
        let _ = writeln!(out, "  rule r{} with {}", d.rule, binding_text(&d.binding));
        leaves_text(&mut out, "    ", &d.leaves);
    }
    let _ = writeln!(out, "leaves:");
    let _ = writeln!(out, "  present: {}", atoms_text(&report.leaves.present));
    let _ = writeln!(out, "  absent: {}", atoms_text(&report.leaves.absent));
    out
}

pub fn why_not_text(
    report: &WhyNotReport,
    root: &GameNodeId,
    gamma: &ProvenanceSubgraph<GameNodeId>,
) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} is not derived", report.atom);
    let _ = writeln!(out, "provenance of {root}:");
    out.push_str(&render_gamma(gamma));
    if report.is_empty() {
        let _ = writeln!(out, "no rule instance has {} as its head", report.atom);
    } else {
        let _ = writeln!(out, "failed instantiations:");
    }
    for inst in &report.instantiations {
        let _ = writeln!(
            out,
            "  rule r{} with {}",
            inst.rule,
            binding_text(&inst.binding)
        );
        for g in &inst.failed_goals {
            let positions = g
                .positions
                .iter()
                .map(ToString::to_string)
                .collect::<Vec<_>>()
                .join(",");
            let sign = if g.negated { "not " } else { "" };
            let _ = writeln!(out, "    goal {positions} {sign}{} fails", g.atom);
            if !g.missing.is_empty() {
                let _ = writeln!(out, "      missing {}", atoms_text(&g.missing));
            }
            if !g.blocking.is_empty() {
                let _ = writeln!(out, "      blocked by {}", atoms_text(&g.blocking));
            }
        }
    }
    let _ = writeln!(out, "leaves:");
    let _ = writeln!(out, "  missing: {}", atoms_text(&report.missing()));
    let _ = writeln!(out, "  present: {}", atoms_text(&report.blocking()));
    out
}

#[derive(Serialize)]
struct JsonLeaves {
    present: Vec<String>,
    absent: Vec<String>,
}

impl From<&WhyLeaves> for JsonLeaves {
    fn from(l: &WhyLeaves) -> Self {
        JsonLeaves {
            present: l.present.iter().map(ToString::to_string).collect(),
            absent: l.absent.iter().map(ToString::to_string).collect(),
        }
    }
}

#[derive(Serialize)]
struct JsonDerivation {
    rule: usize,
    binding: Vec<(String, String)>,
    leaves: JsonLeaves,
}

#[derive(Serialize)]
struct JsonWhy {
    atom: String,
    root: String,
    derivations: Vec<JsonDerivation>,
    leaves: JsonLeaves,
}

#[derive(Serialize)]
struct JsonFailedGoal {
    positions: Vec<usize>,
    negated: bool,
    atom: String,
    missing: Vec<String>,
    blocking: Vec<String>,
}

#[derive(Serialize)]
struct JsonInstantiation {
    rule: usize,
    binding: Vec<(String, String)>,
    failed_goals: Vec<JsonFailedGoal>,
}

#[derive(Serialize)]
struct JsonWhyNot {
    atom: String,
    root: String,
    instantiations: Vec<JsonInstantiation>,
    missing: Vec<String>,
    blocking: Vec<String>,
}

fn strings(atoms: &BTreeSet<GroundAtom>) -> Vec<String> {
    atoms.iter().map(ToString::to_string).collect()
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("plain data serializes");
    s.push('\n');
    s
}

pub fn why_json(report: &WhyReport, root: &GameNodeId) -> String {
    pretty(&JsonWhy {
        atom: report.atom.to_string(),
        root: root.to_string(),
        derivations: report
            .derivations
            .iter()
            .map(|d| JsonDerivation {
                rule: d.rule,
                binding: d.binding.clone(),
                leaves: (&d.leaves).into(),
            })
            .collect(),
        leaves: (&report.leaves).into(),
    })
}

pub fn why_not_json(report: &WhyNotReport, root: &GameNodeId) -> String {
    pretty(&JsonWhyNot {
        atom: report.atom.to_string(),
        root: root.to_string(),
        instantiations: report
            .instantiations
            .iter()
            .map(|i| JsonInstantiation {
                rule: i.rule,
                binding: i.binding.clone(),
                failed_goals: i
                    .failed_goals
                    .iter()
                    .map(|g| JsonFailedGoal {
                        positions: g.positions.clone(),
                        negated: g.negated,
                        atom: g.atom.to_string(),
                        missing: strings(&g.missing),
                        blocking: strings(&g.blocking),
                    })
                    .collect(),
            })
            .collect(),
        missing: strings(&report.missing()),
        blocking: strings(&report.blocking()),
    })
}
