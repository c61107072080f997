//! Named check suites over a parsed spec.

use bvcheck_core::brackets::{
    akman_bracket, akman_order_check, bv_bracket, koszul_bracket, OrderCertificate,
};
use bvcheck_core::graded::scalar;
use bvcheck_core::linfty::verify_linfty;
use bvcheck_core::models::{polyvector_model, schouten_oracle};
use bvcheck_core::structures::gerstenhaber::{BvOperations, Operations};
use bvcheck_core::structures::report::{sweep, Outcome};
use bvcheck_core::structures::{
    check_bvinfty, check_derivation_lemma, check_gerstenhaber, check_split, induced_bv, Check,
    Grading, Report, Verdict, Witness,
};
use bvcheck_core::{Budget, Degree, Element, Error as CoreError, Operator};

use crate::report::{
    BudgetEntry, GeneratorEntry, OperatorEntry, SliceEntry, SuiteEntry, SuiteReport, SCHEMA,
};
use crate::spec::{Builtin, ModelSpec, Suite};

/// Suites run by `all`, in order.
pub const ALL: [Suite; 9] = [
    Suite::Order,
    Suite::SquareZero,
    Suite::BracketEquivalence,
    Suite::Linfty,
    Suite::Split,
    Suite::Derivation,
    Suite::Bvinfty,
    Suite::Cohomology,
    Suite::Gerstenhaber,
];

/// Highest arity compared by `bracket-equivalence`.
pub const MAX_ARITY: usize = 5;
/// Highest `n` checked by `linfty`.
pub const MAX_RELATION: usize = 4;

fn failed_setup(name: &str, verdict: Verdict, e: &CoreError) -> Report {
    let mut r = Report::new();
    r.push(Check::new(name, verdict).with_note(e.to_string()));
    r
}

fn certificate_check(name: &str, cert: &OrderCertificate) -> Check {
    let mut c = Check::new(name, Verdict::Pass);
    c.tested = cert.tested;
    c.exhaustive = cert.exhaustive;
    if let Some(f) = &cert.failure {
        c.verdict = Verdict::Fail;
        c.witness = Some(Witness::Elements(f.clone()));
        c.note = Some(format!("F^{} is nonzero", cert.claimed + 1));
    } else if !cert.sharp {
        c.verdict = Verdict::Untested;
        c.note = Some(format!(
            "F^{} vanished on every tested tuple but no nonzero F^{} was found",
            cert.claimed + 1,
            cert.claimed
        ));
    } else {
        c.witness = cert.sharpness_witness.clone().map(Witness::Elements);
        c.note = Some(format!(
            "order {}: F^{} vanishes, witness has F^{} nonzero",
            cert.claimed,
            cert.claimed + 1,
            cert.claimed
        ));
    }
    c
}

fn order_suite(d: &Operator, budget: &Budget) -> Report {
    let mut r = Report::new();
    let claimed = d.without_constant().structural_order().order;
    r.push(certificate_check(
        "order",
        &akman_order_check(d, claimed, budget),
    ));
    if !d.constant_part().is_zero() {
        r.push(
            Check::new("constant-term", Verdict::Fail)
                .with_residual(Witness::Elements(vec![d.constant_part()]))
                .with_note("D(1) is nonzero, so every F^n contains a multiplication term"),
        );
    }
    r
}

fn square_zero_suite(d: &Operator) -> Report {
    let mut r = Report::new();
    let sq = d.square_zero();
    let mut c = Check::exact("square-zero", &sq.square);
    if let Some(m) = sq.witness {
        c = c.with_witness(Witness::Elements(vec![Element::monomial(
            d.table(),
            m,
            scalar(1),
        )]));
    }
    r.push(c);
    r
}

fn bracket_equivalence_suite(d: &Operator, budget: &Budget) -> Result<Report, CoreError> {
    let pool = budget.pool(d.table());
    let parts = d.parity_components();
    let mut r = Report::new();
    for k in 1..=MAX_ARITY {
        r.push(sweep(&format!("arity-{k}"), &pool, k, budget, |args| {
            let mut diff = Element::zero(d.table());
            for (_, part) in &parts {
                diff += &akman_bracket(part, args)?;
                diff -= &koszul_bracket(part, args)?;
            }
            Ok(Outcome::zero(diff))
        })?);
    }
    Ok(r)
}

fn linfty_suite(d: &Operator, budget: &Budget) -> Report {
    match verify_linfty(d, MAX_RELATION, budget) {
        Ok(reports) => {
            let mut r = Report::new();
            for rel in reports {
                let mut c = Check::new(
                    format!("relation-{}", rel.n),
                    if rel.passed {
                        Verdict::Pass
                    } else {
                        Verdict::Fail
                    },
                );
                c.tested = rel.tested;
                c.exhaustive = rel.exhaustive;
                c.witness = rel.failing_tuple.map(Witness::Elements);
                c.residual = rel.residual.map(|e| Witness::Elements(vec![e]));
                r.push(c);
            }
            r
        }
        Err(e) => failed_setup("hypotheses", Verdict::Fail, &e),
    }
}

fn polyvector_dimension(spec: &ModelSpec) -> Option<usize> {
    match spec.model {
        Some(Builtin::Polyvector { n }) => Some(n),
        _ => None,
    }
}

fn schouten_checks(n: usize, delta: &Operator, budget: &Budget) -> Result<Report, CoreError> {
    let m = polyvector_model(n)?;
    let mut r = Report::new();
    if &m.delta != delta {
        r.push(
            Check::new("schouten-agreement", Verdict::Untested)
                .with_note("D is not the model's divergence"),
        );
        return Ok(r);
    }
    let sign = m.schouten_sign();
    let pool = budget.pool(&m.table);
    r.push(
        sweep("schouten-agreement", &pool, 2, budget, |t| {
            let bv = bv_bracket(delta, &t[0], &t[1])?;
            let sn = schouten_oracle(&m, &t[0], &t[1])?.signed(sign);
            Ok(Outcome::zero(&bv - &sn))
        })?
        .with_note(format!("bracket = ({sign}) * Schouten")),
    );
    let ops = Operations {
        table: m.table.clone(),
        bracket: |a: &Element, b: &Element| schouten_oracle(&m, a, b),
        product: Element::multiply,
    };
    r.extend(check_gerstenhaber(&ops, &pool, Grading::SHIFTED, budget)?.scoped("schouten"));
    Ok(r)
}

fn gerstenhaber_suite(spec: &ModelSpec, budget: &Budget) -> Result<Report, CoreError> {
    let d = spec.big_d();
    let pool = budget.pool(d.table());
    let mut r = check_gerstenhaber(&BvOperations(d), &pool, Grading::SHIFTED, budget)?;
    if let Some(n) = polyvector_dimension(spec) {
        r.extend(schouten_checks(n, d, budget)?);
    }
    Ok(r)
}

fn bv_core_suite(spec: &ModelSpec, budget: &Budget) -> Result<Report, CoreError> {
    let d = spec.big_d();
    let mut r = Report::new();
    r.push(certificate_check(
        "order-2",
        &akman_order_check(d, 2, budget),
    ));
    r.extend(square_zero_suite(d));
    r.push(
        Check::holds("degree-minus-1", d.degree() == Some(Degree(-1))).with_note(format!(
            "degree components {:?}",
            d.degree_components()
                .keys()
                .map(|k| k.0)
                .collect::<Vec<_>>()
        )),
    );
    r.extend(gerstenhaber_suite(spec, budget)?.scoped("gerstenhaber"));
    Ok(r)
}

/// Run `suites` against `spec`; `all` expands to every individual suite.
pub fn run_suite(
    spec: &ModelSpec,
    suites: &[Suite],
    budget: &Budget,
) -> Result<SuiteReport, CoreError> {
    let mut expanded = Vec::new();
    for s in suites {
        let list: &[Suite] = if *s == Suite::All {
            &ALL
        } else {
            std::slice::from_ref(s)
        };
        for s in list {
            if !expanded.contains(s) {
                expanded.push(*s);
            }
        }
    }

    let d = spec.big_d();
    let small_d = spec.d();
    let mut entries = Vec::new();
    let mut slices = None;
    for suite in expanded {
        let report = match suite {
            Suite::Order => order_suite(d, budget),
            Suite::SquareZero => square_zero_suite(d),
            Suite::BracketEquivalence => bracket_equivalence_suite(d, budget)?,
            Suite::Linfty => linfty_suite(d, budget),
            Suite::Split => match check_split(d, budget) {
                Ok((_, r)) => r,
                Err(e) => failed_setup("hypotheses", Verdict::Fail, &e),
            },
            Suite::Derivation => check_derivation_lemma(d, budget)?,
            Suite::Bvinfty => check_bvinfty(&small_d, d, budget)?,
            Suite::Cohomology => {
                match induced_bv(&small_d, d, spec.weights.clone(), spec.window, budget) {
                    Ok(out) => {
                        let h = &out.cohomology;
                        slices = Some(
                            h.slices
                                .values()
                                .map(|s| SliceEntry {
                                    degree: s.degree.0,
                                    weight: s.weight,
                                    dimension: s.dimension(),
                                    truncated: s.truncated,
                                    representatives: s
                                        .representatives
                                        .iter()
                                        .map(ToString::to_string)
                                        .collect(),
                                })
                                .collect(),
                        );
                        out.report
                    }
                    Err(e @ CoreError::Hypothesis(_)) => {
                        failed_setup("hypotheses", Verdict::Fail, &e)
                    }
                    Err(e) => failed_setup("setup", Verdict::Untested, &e),
                }
            }
            Suite::Gerstenhaber => gerstenhaber_suite(spec, budget)?,
            Suite::BvCore => bv_core_suite(spec, budget)?,
            Suite::All => unreachable!("expanded above"),
        };
        entries.push((suite, report));
    }

    let verdict = entries
        .iter()
        .map(|(_, r)| r.verdict())
        .max()
        .unwrap_or(Verdict::Pass);
    Ok(SuiteReport {
        schema: SCHEMA.to_string(),
        model: spec.model.as_ref().map(ToString::to_string),
        generators: spec
            .table
            .generators()
            .iter()
            .map(|g| GeneratorEntry {
                name: g.name.clone(),
                degree: g.degree.0,
            })
            .collect(),
        operators: spec
            .operators
            .iter()
            .map(|(n, op)| OperatorEntry {
                name: n.clone(),
                value: op.to_string(),
            })
            .collect(),
        big_d: spec.big_d.clone(),
        d: spec.d.clone().unwrap_or_else(|| "0".into()),
        budget: BudgetEntry {
            max_degree: budget.max_degree,
            max_tuples: budget.max_tuples,
            seed: budget.seed,
        },
        window: spec.window.max_weight,
        weights: spec.weights.clone(),
        verdict: verdict.as_str().to_string(),
        suites: entries
            .iter()
            .map(|(s, r)| SuiteEntry::new(s.name(), r))
            .collect(),
        slices,
    })
}

/// Process exit status for a verdict.
pub fn exit_code(v: Verdict) -> i32 {
    match v {
        Verdict::Pass => 0,
        Verdict::Fail => 1,
        Verdict::Untested => 3,
    }
}

pub const EXIT_SPEC_ERROR: i32 = 2;
