//! Verdicts, witnesses and the budgeted sweep shared by the structure checks.

use std::fmt;

use crate::algebra::Element;
use crate::diffop::Operator;
use crate::error::Result;
use crate::sampling::{select_tuples, Budget};

/// Outcome of one check. Ordered from best to worst.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Verdict {
    Pass,
    /// Nothing failed, but part of the claim could not be decided.
    Untested,
    Fail,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Untested => "untested",
            Verdict::Fail => "fail",
        }
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// A concrete value backing a verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Witness {
    Elements(Vec<Element>),
    Operator(Operator),
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Witness::Elements(es) => {
                let parts: Vec<String> = es.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
            Witness::Operator(op) => write!(f, "{op}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub verdict: Verdict,
    /// Number of decided instances.
    pub tested: usize,
    pub exhaustive: bool,
    /// Inputs exhibiting the verdict: a failing tuple, or a requested example.
    pub witness: Option<Witness>,
    /// The offending value, when there is one.
    pub residual: Option<Witness>,
    pub note: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, verdict: Verdict) -> Self {
        Check {
            name: name.into(),
            verdict,
            tested: 0,
            exhaustive: true,
            witness: None,
            residual: None,
            note: None,
        }
    }

    /// A single exact identity `residual = 0`.
    pub fn exact(name: impl Into<String>, residual: &Operator) -> Self {
        let mut c = Check::new(name, Verdict::Pass);
        c.tested = 1;
        if !residual.is_zero() {
            c.verdict = Verdict::Fail;
            c.residual = Some(Witness::Operator(residual.clone()));
        }
        c
    }

    pub fn holds(name: impl Into<String>, ok: bool) -> Self {
        let mut c = Check::new(name, if ok { Verdict::Pass } else { Verdict::Fail });
        c.tested = 1;
        c
    }

    pub fn with_witness(mut self, w: Witness) -> Self {
        self.witness = Some(w);
        self
    }

    pub fn with_residual(mut self, w: Witness) -> Self {
        self.residual = Some(w);
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// An ordered list of checks.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, c: Check) {
        self.checks.push(c);
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    /// The worst verdict; an empty report passes.
    pub fn verdict(&self) -> Verdict {
        self.checks
            .iter()
            .map(|c| c.verdict)
            .max()
            .unwrap_or(Verdict::Pass)
    }

    pub fn passed(&self) -> bool {
        self.verdict() == Verdict::Pass
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Prefix every check name with `scope/`.
    pub fn scoped(mut self, scope: &str) -> Self {
        for c in &mut self.checks {
            c.name = format!("{scope}/{}", c.name);
        }
        self
    }
}

/// Result of testing one instance of an identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Holds,
    Fails(Element),
    /// The instance leaves the region where it can be decided.
    Undecided,
}

impl Outcome {
    pub fn zero(e: Element) -> Self {
        if e.is_zero() {
            Outcome::Holds
        } else {
            Outcome::Fails(e)
        }
    }
}

/// Test `f` on `arity`-tuples from `pool` chosen by the budget. The first
/// failing tuple becomes the witness; undecided instances downgrade a pass to
/// untested.
pub fn sweep(
    name: &str,
    pool: &[Element],
    arity: usize,
    budget: &Budget,
    mut f: impl FnMut(&[Element]) -> Result<Outcome>,
) -> Result<Check> {
    let sample = select_tuples(pool.len(), arity, budget.max_tuples, budget.seed);
    let mut check = Check::new(name, Verdict::Pass);
    check.exhaustive = sample.exhaustive;
    let mut undecided = 0usize;
    for t in &sample.tuples {
        let args: Vec<Element> = t.iter().map(|&i| pool[i].clone()).collect();
        match f(&args)? {
            Outcome::Holds => check.tested += 1,
            Outcome::Fails(r) => {
                check.tested += 1;
                check.verdict = Verdict::Fail;
                check.witness = Some(Witness::Elements(args));
                check.residual = Some(Witness::Elements(vec![r]));
                return Ok(check);
            }
            Outcome::Undecided => undecided += 1,
        }
    }
    if undecided > 0 {
        check.verdict = Verdict::Untested;
        check.note = Some(format!(
            "{undecided} instances undecided outside the window"
        ));
    }
    Ok(check)
}

/// Result of a witness search over sampled tuples.
#[derive(Debug, Clone)]
pub struct Search {
    pub found: Option<(Vec<Element>, Element)>,
    pub tested: usize,
    pub exhaustive: bool,
}

impl Search {
    /// A passing check carrying the coverage and any witness found.
    pub fn check(&self, name: impl Into<String>) -> Check {
        let mut c = Check::new(name, Verdict::Pass);
        c.tested = self.tested;
        c.exhaustive = self.exhaustive && self.found.is_none();
        if let Some((args, value)) = &self.found {
            c.witness = Some(Witness::Elements(args.clone()));
            c.residual = Some(Witness::Elements(vec![value.clone()]));
        }
        c
    }
}

/// Search sampled tuples for one where `f` returns a value; stops at the first.
pub fn find_witness(
    pool: &[Element],
    arity: usize,
    budget: &Budget,
    mut f: impl FnMut(&[Element]) -> Result<Option<Element>>,
) -> Result<Search> {
    let sample = select_tuples(pool.len(), arity, budget.max_tuples, budget.seed);
    let mut tested = 0;
    for t in &sample.tuples {
        let args: Vec<Element> = t.iter().map(|&i| pool[i].clone()).collect();
        tested += 1;
        if let Some(v) = f(&args)? {
            return Ok(Search {
                found: Some((args, v)),
                tested,
                exhaustive: false,
            });
        }
    }
    Ok(Search {
        found: None,
        tested,
        exhaustive: sample.exhaustive,
    })
}
