//! Versioned machine-readable reports and their human rendering.

use std::fmt::Write as _;
use std::sync::Arc;

use bvcheck_core::structures::{Check, Report, Verdict, Witness};
use bvcheck_core::text::{parse_element, parse_operator};
use bvcheck_core::{Error as CoreError, GeneratorTable};
use serde::{Deserialize, Serialize};

pub const SCHEMA: &str = "bvcheck-report/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub name: String,
    pub degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OperatorEntry {
    pub name: String,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BudgetEntry {
    pub max_degree: u32,
    pub max_tuples: usize,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "values", rename_all = "lowercase")]
pub enum WitnessEntry {
    Elements(Vec<String>),
    Operator(String),
}

impl WitnessEntry {
    pub fn from_witness(w: &Witness) -> Self {
        match w {
            Witness::Elements(es) => {
                WitnessEntry::Elements(es.iter().map(ToString::to_string).collect())
            }
            Witness::Operator(op) => WitnessEntry::Operator(op.to_string()),
        }
    }

    /// Parse the serialized values back over `table`.
    pub fn to_witness(&self, table: &Arc<GeneratorTable>) -> Result<Witness, CoreError> {
        Ok(match self {
            WitnessEntry::Elements(es) => Witness::Elements(
                es.iter()
                    .map(|s| parse_element(table, s))
                    .collect::<Result<_, _>>()?,
            ),
            WitnessEntry::Operator(s) => Witness::Operator(parse_operator(table, s)?),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckEntry {
    pub name: String,
    pub verdict: String,
    pub tested: usize,
    pub exhaustive: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub residual: Option<WitnessEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&Check> for CheckEntry {
    fn from(c: &Check) -> Self {
        CheckEntry {
            name: c.name.clone(),
            verdict: c.verdict.as_str().to_string(),
            tested: c.tested,
            exhaustive: c.exhaustive,
            witness: c.witness.as_ref().map(WitnessEntry::from_witness),
            residual: c.residual.as_ref().map(WitnessEntry::from_witness),
            note: c.note.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteEntry {
    pub name: String,
    pub verdict: String,
    pub checks: Vec<CheckEntry>,
}

impl SuiteEntry {
    pub fn new(name: &str, report: &Report) -> Self {
        SuiteEntry {
            name: name.to_string(),
            verdict: report.verdict().as_str().to_string(),
            checks: report.checks.iter().map(CheckEntry::from).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SliceEntry {
    pub degree: i64,
    pub weight: u32,
    pub dimension: usize,
    pub truncated: bool,
    pub representatives: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub schema: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub model: Option<String>,
    pub generators: Vec<GeneratorEntry>,
    pub operators: Vec<OperatorEntry>,
    #[serde(rename = "D")]
    pub big_d: String,
    pub d: String,
    pub budget: BudgetEntry,
    pub window: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weights: Option<Vec<u32>>,
    pub verdict: String,
    pub suites: Vec<SuiteEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub slices: Option<Vec<SliceEntry>>,
}

impl SuiteReport {
    pub fn verdict(&self) -> Verdict {
        match self.verdict.as_str() {
            "fail" => Verdict::Fail,
            "untested" => Verdict::Untested,
            _ => Verdict::Pass,
        }
    }

    pub fn table(&self) -> Result<Arc<GeneratorTable>, CoreError> {
        GeneratorTable::new(self.generators.iter().map(|g| (g.name.clone(), g.degree)))
    }

    pub fn check(&self, suite: &str, name: &str) -> Option<&CheckEntry> {
        self.suites
            .iter()
            .find(|s| s.name == suite)?
            .checks
            .iter()
            .find(|c| c.name == name)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> serde_json::Result<Self> {
        serde_json::from_str(s)
    }

    pub fn to_human(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "report {}", self.schema);
        if let Some(m) = &self.model {
            let _ = writeln!(out, "model      {m}");
        }
        let gens: Vec<String> = self
            .generators
            .iter()
            .map(|g| format!("{}:{}", g.name, g.degree))
            .collect();
        let _ = writeln!(out, "generators {}", gens.join(" "));
        let _ = writeln!(out, "D          {}", self.big_d);
        let _ = writeln!(out, "d          {}", self.d);
        let _ = writeln!(
            out,
            "budget     degree={} tuples={} seed={}",
            self.budget.max_degree, self.budget.max_tuples, self.budget.seed
        );
        for suite in &self.suites {
            let _ = writeln!(out, "\n{} [{}]", suite.name, suite.verdict);
            for c in &suite.checks {
                let coverage = if c.exhaustive {
                    "exhaustive"
                } else {
                    "sampled"
                };
                let _ = writeln!(
                    out,
                    "  {:<8} {}  ({} tested, {coverage})",
                    c.verdict, c.name, c.tested
                );
                if let Some(n) = &c.note {
                    let _ = writeln!(out, "           {n}");
                }
                for (label, w) in [("witness", &c.witness), ("residual", &c.residual)] {
                    match w {
                        Some(WitnessEntry::Elements(es)) => {
                            let _ = writeln!(out, "           {label}: ({})", es.join(", "));
                        }
                        Some(WitnessEntry::Operator(op)) => {
                            let _ = writeln!(out, "           {label}: {op}");
                        }
                        None => {}
                    }
                }
            }
        }
        if let Some(slices) = &self.slices {
            let _ = writeln!(out, "\ncohomology (degree, weight): dimension");
            for s in slices.iter().filter(|s| s.dimension > 0 || s.truncated) {
                let mark = if s.truncated { "  truncated" } else { "" };
                let _ = writeln!(
                    out,
                    "  ({}, {}): {}  [{}]{mark}",
                    s.degree,
                    s.weight,
                    s.dimension,
                    s.representatives.join(", ")
                );
            }
        }
        let _ = writeln!(out, "\nverdict: {}", self.verdict);
        out
    }
}
