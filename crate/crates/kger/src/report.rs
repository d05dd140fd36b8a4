//! Human-readable and structured renderings of validation reports.

use std::fmt::Write;

use kger_core::semantics::clause;
use kger_core::validate::{Semantics, ValidationReport};
use kger_core::Schema;

fn semantics_name(s: Semantics) -> &'static str {
    match s {
        Semantics::Core => "core",
        Semantics::ImplicitDisjointness => "implicit-disjointness",
    }
}

/// One line per diagnostic and a closing summary. With a schema, each
/// violated statement is followed by its first-order clause.
pub fn render_text(report: &ValidationReport, explain: Option<&Schema>) -> String {
    let mut out = String::new();
    for d in &report.diagnostics {
        let _ = writeln!(out, "{d}");
        if let Some(schema) = explain {
            if let Some(stmt) = schema.statements().find(|s| s.to_string() == d.subject) {
                if let Ok(f) = clause(schema, stmt) {
                    let _ = writeln!(out, "    clause: {f}");
                }
            }
        }
    }
    let verdict = if report.conforms { "conforms" } else { "does not conform" };
    let _ = writeln!(
        out,
        "{verdict} under {} semantics ({} statements, {} entity instances, {} relationship instances)",
        semantics_name(report.semantics),
        report.stats.statements,
        report.stats.entity_instances,
        report.stats.relationship_instances
    );
    out
}

/// The report as JSON, in the same object syntax as graph files.
pub fn render_structured(report: &ValidationReport) -> String {
    let mut out = serde_json::to_string_pretty(report).expect("reports serialize");
    out.push('\n');
    out
}

pub fn parse_structured(source: &str) -> Result<ValidationReport, serde_json::Error> {
    serde_json::from_str(source)
}
