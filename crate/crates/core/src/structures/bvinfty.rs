//! The commutative BV∞ conditions on a pair `(d, D)`.

use crate::brackets::akman_order_check;
use crate::diffop::Operator;
use crate::error::{Error, Result};
use crate::graded::Degree;
use crate::sampling::Budget;

use super::report::{Check, Report, Verdict, Witness};

/// `d` is a degree +1 square-zero derivation, `D` is odd and square-zero, and
/// every degree component of `D - d` is negative.
pub fn check_bvinfty(d: &Operator, big_d: &Operator, budget: &Budget) -> Result<Report> {
    if !d.same_table(big_d.table()) {
        return Err(Error::TableMismatch);
    }
    let mut report = Report::new();

    let mut degree = Check::holds("d-degree", d.is_zero() || d.degree() == Some(Degree(1)));
    if !degree.passed() {
        degree = degree.with_residual(Witness::Operator(d.clone()));
    }
    report.push(degree);

    report.push(Check::exact("d-square-zero", &d.compose(d)?));

    let exact = d.constant_part().is_zero() && d.structural_order().order <= 1;
    let cert = akman_order_check(d, 1, budget);
    let mut derivation = Check::holds("d-product-derivation", exact && cert.bound_holds)
        .with_note("d(1) = 0 and every term has order at most 1");
    derivation.exhaustive = cert.exhaustive;
    if let Some(f) = cert.failure {
        derivation = derivation.with_witness(Witness::Elements(f));
    }
    report.push(derivation);

    report.push(Check::holds("D-odd", big_d.is_odd()));
    let sq = big_d.square_zero();
    report.push(Check::exact("D-square-zero", &sq.square));

    let tail = big_d - d;
    let mut negative = Check::new("D-minus-d-negative", Verdict::Pass);
    negative.tested = 1;
    if let Some((deg, op)) = tail
        .degree_components()
        .into_iter()
        .rev()
        .find(|(deg, _)| deg.0 >= 0)
    {
        negative.verdict = Verdict::Fail;
        negative = negative
            .with_residual(Witness::Operator(op))
            .with_note(format!("component of degree {deg}"));
    }
    report.push(negative);
    Ok(report)
}
