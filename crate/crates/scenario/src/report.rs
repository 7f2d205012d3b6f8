//! Run reports: verdict, re-verifiable derivation trace, and the evidence
//! (model or exhaustion certificate) backing it.

use frlab_logic::search::UnsatCertificate;
use frlab_logic::ModelFile;
use serde::Serialize;
use std::fmt;

/// Outcome of a run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Verdict {
    /// A model satisfying every constraint exists (and is attached).
    Sat,
    /// The search space is exhausted; no model exists.
    Unsat,
    /// No model exists *and* the runs derive an explicit `ψ ∧ ¬ψ`.
    Contradiction,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text = match self {
            Verdict::Sat => "SAT",
            Verdict::Unsat => "UNSAT",
            Verdict::Contradiction => "CONTRADICTION",
        };
        f.write_str(text)
    }
}

/// One derivation step, re-checked when the report was assembled.
#[derive(Debug, Clone, Serialize)]
pub struct TraceStep {
    pub id: String,
    /// The formula (or formula-shaped fact) the step establishes.
    pub formula: String,
    /// How the step is grounded, citing rule ids and checks by name.
    pub justification: String,
    /// The step leans on the eigenstate link.
    pub eigenstate_link: bool,
    /// The step leans on protocol clauses being enforced as global
    /// validities (the stand-in for common knowledge).
    pub common_knowledge_as_validity: bool,
    /// Whether the step's check passed when the report was assembled.
    pub verified: bool,
}

/// A bridge rule's expectation, recorded at build time and recomputed
/// when the report was assembled.
#[derive(Debug, Clone, Serialize)]
pub struct ExpectationCheck {
    pub rule: String,
    pub recorded: f64,
    pub recomputed: f64,
}

/// Full record of one run.
#[derive(Debug, Clone, Serialize)]
pub struct ScenarioReport {
    /// Which run produced this report, e.g. `theorem-fr`.
    pub run: String,
    /// Frame discipline the run imposed, e.g. `reflexive`.
    pub frame: String,
    pub verdict: Verdict,
    pub trace: Vec<TraceStep>,
    pub expectations: Vec<ExpectationCheck>,
    /// The satisfying model or countermodel, when one exists.
    pub model: Option<ModelFile>,
    /// The exhaustion certificate, when the search came up empty.
    pub certificate: Option<UnsatCertificate>,
    pub notes: Vec<String>,
}

impl ScenarioReport {
    /// True when every trace step's re-check passed.
    pub fn all_steps_verified(&self) -> bool {
        self.trace.iter().all(|step| step.verified)
    }

    /// Largest drift between recorded and recomputed expectations.
    pub fn max_expectation_drift(&self) -> f64 {
        self.expectations
            .iter()
            .map(|check| (check.recorded - check.recomputed).abs())
            .fold(0.0, f64::max)
    }

    /// Canonical machine form: pretty JSON with a trailing newline.
    pub fn machine(&self) -> String {
        let mut text =
            serde_json::to_string_pretty(self).expect("report serialization cannot fail");
        text.push('\n');
        text
    }

    /// Line-oriented human form.
    pub fn human(&self) -> String {
        let mut out = String::new();
        let mut line = |text: String| {
            out.push_str(&text);
            out.push('\n');
        };
        line(format!("run: {}", self.run));
        line(format!("frame: {}", self.frame));
        line(format!("verdict: {}", self.verdict));
        if !self.trace.is_empty() {
            line("trace:".to_string());
            for step in &self.trace {
                let mark = if step.verified { "ok" } else { "FAILED" };
                let mut flags = String::new();
                if step.eigenstate_link {
                    flags.push_str(" [eigenstate-link]");
                }
                if step.common_knowledge_as_validity {
                    flags.push_str(" [common-knowledge-as-validity]");
                }
                line(format!("  [{mark}] {}: {}{flags}", step.id, step.formula));
                line(format!("       {}", step.justification));
            }
        }
        if !self.expectations.is_empty() {
            line(format!(
                "expectations: {} recomputed, max drift {:.3e}",
                self.expectations.len(),
                self.max_expectation_drift()
            ));
        }
        if let Some(cert) = &self.certificate {
            line(format!(
                "certificate: {} candidates examined across {}, {} rejection signatures",
                cert.candidates_examined,
                cert.search_space,
                cert.rejections.len()
            ));
            for rejection in &cert.rejections {
                line(format!(
                    "  {} × {} (e.g. {})",
                    rejection.count, rejection.constraint, rejection.representative
                ));
            }
        }
        if let Some(model) = &self.model {
            line(format!(
                "model: {} world(s): {}",
                model.worlds.len(),
                model.worlds.join(", ")
            ));
        }
        for note in &self.notes {
            line(format!("note: {note}"));
        }
        out
    }
}
