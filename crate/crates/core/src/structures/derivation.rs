//! Derivation properties of a square-zero `D` and of its degree +1 part.

use crate::algebra::Element;
use crate::diffop::Operator;
use crate::error::Result;
use crate::graded::{Degree, Sign};
use crate::sampling::Budget;

use super::bracket_bilinear;
use super::report::{find_witness, sweep, Check, Outcome, Report, Verdict, Witness};

fn parity_sign(a: &Element) -> Sign {
    Sign::pow(a.degree().unwrap_or(Degree::ZERO).0)
}

/// `D(ab) - D(a)b - (-1)^{|a|} a D(b)` for an odd `D`.
pub fn product_leibniz_defect(d: &Operator, a: &Element, b: &Element) -> Result<Element> {
    let lhs = d.apply(&a.multiply(b)?)?;
    let r1 = d.apply(a)?.multiply(b)?;
    let r2 = a.multiply(&d.apply(b)?)?.signed(parity_sign(a));
    Ok(&(&lhs - &r1) - &r2)
}

/// `E[a, b] - [Ea, b] + (-1)^{|a|}[a, Eb]` for an odd `E`, with the bracket of
/// `D`.
pub fn bracket_derivation_defect(
    e: &Operator,
    d: &Operator,
    a: &Element,
    b: &Element,
) -> Result<Element> {
    let lhs = e.apply(&bracket_bilinear(d, a, b)?)?;
    let r1 = bracket_bilinear(d, &e.apply(a)?, b)?;
    let r2 = bracket_bilinear(d, a, &e.apply(b)?)?.signed(-parity_sign(a));
    Ok(&(&lhs - &r1) - &r2)
}

/// The derivation lemma for an odd square-zero `D` with degree +1 part `D_1`:
/// `D` differentiates its own bracket but not the product, while `D_1`
/// differentiates the product but in general not the bracket.
pub fn check_derivation_lemma(d: &Operator, budget: &Budget) -> Result<Report> {
    let mut report = Report::new();
    let sq = d.square_zero();
    let mut square = Check::holds("square-zero", sq.holds);
    if !sq.holds {
        square = square.with_residual(Witness::Operator(sq.square));
    }
    report.push(square);
    report.push(Check::holds("odd", d.is_odd()));

    let pool = budget.pool(d.table());
    let d1 = d
        .degree_components()
        .remove(&Degree(1))
        .unwrap_or_else(|| Operator::zero(d.table()));

    report.push(sweep("D-bracket-derivation", &pool, 2, budget, |t| {
        Ok(Outcome::zero(bracket_derivation_defect(
            d, d, &t[0], &t[1],
        )?))
    })?);

    let higher = d.without_constant().structural_order().order >= 2;
    let search = find_witness(&pool, 2, budget, |t| {
        let e = product_leibniz_defect(d, &t[0], &t[1])?;
        Ok((!e.is_zero()).then_some(e))
    })?;
    let product = search.check("D-product-leibniz-fails");
    report.push(match (&search.found, higher) {
        (Some(_), _) => product,
        (None, false) => product.with_note("vacuous: no component of order at least 2"),
        (None, true) => {
            let mut c = product.with_note("no failure found within budget");
            c.verdict = Verdict::Untested;
            c
        }
    });

    report.push(sweep("D1-product-leibniz", &pool, 2, budget, |t| {
        Ok(Outcome::zero(product_leibniz_defect(&d1, &t[0], &t[1])?))
    })?);

    let search = find_witness(&pool, 2, budget, |t| {
        let e = bracket_derivation_defect(&d1, d, &t[0], &t[1])?;
        Ok((!e.is_zero()).then_some(e))
    })?;
    let bracket = search.check("D1-bracket-derivation-fails");
    report.push(match search.found {
        Some(_) => bracket,
        None => bracket.with_note("D1 differentiates the bracket on every tested pair"),
    });
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{poisson_model, polyvector_model, split_lab_model};

    fn budget() -> Budget {
        Budget::new(2, 400, 1)
    }

    #[test]
    fn differential_only() {
        let p = poisson_model().unwrap();
        let r = check_derivation_lemma(&p.d, &budget()).unwrap();
        assert!(r.passed(), "{r:?}");
        let c = r.get("D-product-leibniz-fails").unwrap();
        assert!(c.witness.is_none());
        assert!(r.get("D1-product-leibniz").unwrap().tested > 0);
    }

    #[test]
    fn laplacian() {
        let m = polyvector_model(2).unwrap();
        let r = check_derivation_lemma(&m.delta, &budget()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.get("D-product-leibniz-fails").unwrap().witness.is_some());
    }

    #[test]
    fn differential_plus_laplacian() {
        let p = poisson_model().unwrap();
        let r = check_derivation_lemma(&p.total, &budget()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r.get("D-bracket-derivation").unwrap().tested >= 100);
        assert!(r.get("D-product-leibniz-fails").unwrap().witness.is_some());
        assert!(r.get("D1-product-leibniz").unwrap().tested >= 100);
    }

    #[test]
    fn three_pieces() {
        let lab = split_lab_model().unwrap();
        let r = check_derivation_lemma(&lab.total, &budget()).unwrap();
        assert!(r.passed(), "{r:?}");
        assert!(r
            .get("D1-bracket-derivation-fails")
            .unwrap()
            .witness
            .is_some());
    }

    #[test]
    fn non_square_zero_is_reported() {
        let m = polyvector_model(1).unwrap();
        let xi = crate::algebra::Element::generator(&m.table, "xi1").unwrap();
        let d = &m.delta + &Operator::multiplication(&xi);
        let r = check_derivation_lemma(&d, &budget()).unwrap();
        assert_eq!(r.get("square-zero").unwrap().verdict, Verdict::Fail);
    }
}
