//! Gerstenhaber axioms for a product and bracket, checked on tuples.

use std::sync::Arc;

use crate::algebra::{Element, GeneratorTable};
use crate::diffop::Operator;
use crate::error::Result;
use crate::graded::{Degree, Sign};
use crate::sampling::Budget;

use super::bracket_bilinear;
use super::report::{sweep, Outcome, Report};

/// A product and a bracket on an algebra, possibly read modulo a subspace.
pub trait GerstenhaberOps {
    fn table(&self) -> &Arc<GeneratorTable>;
    fn bracket(&self, a: &Element, b: &Element) -> Result<Element>;
    fn product(&self, a: &Element, b: &Element) -> Result<Element>;
    /// Whether `a` is zero in the structure; `None` when undecidable.
    fn vanishes(&self, a: &Element) -> Result<Option<bool>> {
        Ok(Some(a.is_zero()))
    }
}

/// Product and bracket given as closures on the free algebra.
pub struct Operations<B, P> {
    pub table: Arc<GeneratorTable>,
    pub bracket: B,
    pub product: P,
}

impl<B, P> GerstenhaberOps for Operations<B, P>
where
    B: Fn(&Element, &Element) -> Result<Element>,
    P: Fn(&Element, &Element) -> Result<Element>,
{
    fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    fn bracket(&self, a: &Element, b: &Element) -> Result<Element> {
        (self.bracket)(a, b)
    }

    fn product(&self, a: &Element, b: &Element) -> Result<Element> {
        (self.product)(a, b)
    }
}

/// The free-algebra product with the bracket `(-1)^{|a|} F_δ^2(a, b)`.
pub struct BvOperations<'a>(pub &'a Operator);

impl GerstenhaberOps for BvOperations<'_> {
    fn table(&self) -> &Arc<GeneratorTable> {
        self.0.table()
    }

    fn bracket(&self, a: &Element, b: &Element) -> Result<Element> {
        bracket_bilinear(self.0, a, b)
    }

    fn product(&self, a: &Element, b: &Element) -> Result<Element> {
        a.multiply(b)
    }
}

/// The free-algebra product with the zero bracket.
pub struct Abelian(pub Arc<GeneratorTable>);

impl GerstenhaberOps for Abelian {
    fn table(&self) -> &Arc<GeneratorTable> {
        &self.0
    }

    fn bracket(&self, _: &Element, _: &Element) -> Result<Element> {
        Ok(Element::zero(&self.0))
    }

    fn product(&self, a: &Element, b: &Element) -> Result<Element> {
        a.multiply(b)
    }
}

/// Degree bookkeeping. Stored degrees `|a|` order the product; the bracket
/// lives on `p(a) = |a| - shift`. Offsets are measured in `p`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Grading {
    pub shift: i64,
    pub product_offset: i64,
    pub bracket_offset: i64,
}

impl Grading {
    /// Polyvector conventions: product of degree +1 and bracket of degree 0
    /// in `p = |a| - 1`.
    pub const SHIFTED: Grading = Grading {
        shift: 1,
        product_offset: 1,
        bracket_offset: 0,
    };

    fn p(&self, a: &Element) -> i64 {
        stored(a) - self.shift
    }
}

fn stored(a: &Element) -> i64 {
    a.degree().unwrap_or(Degree::ZERO).0
}

fn judge<O: GerstenhaberOps + ?Sized>(ops: &O, e: Element) -> Result<Outcome> {
    Ok(match ops.vanishes(&e)? {
        Some(true) => Outcome::Holds,
        Some(false) => Outcome::Fails(e),
        None => Outcome::Undecided,
    })
}

fn degree_outcome(value: &Element, expected: i64, shift: i64) -> Outcome {
    if value.is_zero() {
        return Outcome::Holds;
    }
    match value.degree() {
        Some(d) if d.0 - shift == expected => Outcome::Holds,
        _ => Outcome::Fails(value.clone()),
    }
}

/// Check graded commutativity of the product, graded antisymmetry and Jacobi
/// for the bracket, the Leibniz rule
/// `[a, bc] = [a, b]c + (-1)^{|b||c|}[a, c]b`, and both degree offsets, on
/// tuples drawn from `pool`.
pub fn check_gerstenhaber<O: GerstenhaberOps + ?Sized>(
    ops: &O,
    pool: &[Element],
    grading: Grading,
    budget: &Budget,
) -> Result<Report> {
    let g = grading;
    let mut report = Report::new();

    report.push(sweep("product-commutativity", pool, 2, budget, |t| {
        let (a, b) = (&t[0], &t[1]);
        let ab = ops.product(a, b)?;
        let ba = ops.product(b, a)?.signed(Sign::pow(stored(a) * stored(b)));
        judge(ops, &ab - &ba)
    })?);

    report.push(sweep("bracket-antisymmetry", pool, 2, budget, |t| {
        let (a, b) = (&t[0], &t[1]);
        let ab = ops.bracket(a, b)?;
        let ba = ops.bracket(b, a)?.signed(-Sign::pow(g.p(a) * g.p(b)));
        judge(ops, &ab - &ba)
    })?);

    report.push(sweep("jacobi", pool, 3, budget, |t| {
        let (a, b, c) = (&t[0], &t[1], &t[2]);
        let lhs = ops.bracket(a, &ops.bracket(b, c)?)?;
        let r1 = ops.bracket(&ops.bracket(a, b)?, c)?;
        let r2 = ops
            .bracket(b, &ops.bracket(a, c)?)?
            .signed(Sign::pow(g.p(a) * g.p(b)));
        judge(ops, &(&lhs - &r1) - &r2)
    })?);

    report.push(sweep("leibniz", pool, 3, budget, |t| {
        let (a, b, c) = (&t[0], &t[1], &t[2]);
        let lhs = ops.bracket(a, &ops.product(b, c)?)?;
        let r1 = ops.product(&ops.bracket(a, b)?, c)?;
        let r2 = ops
            .product(&ops.bracket(a, c)?, b)?
            .signed(Sign::pow(stored(b) * stored(c)));
        judge(ops, &(&lhs - &r1) - &r2)
    })?);

    report.push(sweep("product-degree", pool, 2, budget, |t| {
        let v = ops.product(&t[0], &t[1])?;
        Ok(degree_outcome(
            &v,
            g.p(&t[0]) + g.p(&t[1]) + g.product_offset,
            g.shift,
        ))
    })?);

    report.push(sweep("bracket-degree", pool, 2, budget, |t| {
        let v = ops.bracket(&t[0], &t[1])?;
        Ok(degree_outcome(
            &v,
            g.p(&t[0]) + g.p(&t[1]) + g.bracket_offset,
            g.shift,
        ))
    })?);

    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::models::{polyvector_model, schouten_oracle};
    use crate::structures::report::Verdict;
    use crate::text::parse_operator;

    fn budget() -> Budget {
        Budget::new(2, 400, 3)
    }

    #[test]
    fn schouten_with_wedge() {
        let m = polyvector_model(2).unwrap();
        let ops = Operations {
            table: m.table.clone(),
            bracket: |a: &Element, b: &Element| schouten_oracle(&m, a, b),
            product: Element::multiply,
        };
        let pool = budget().pool(&m.table);
        let r = check_gerstenhaber(&ops, &pool, Grading::SHIFTED, &budget()).unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn bv_bracket_of_delta() {
        let m = polyvector_model(2).unwrap();
        let pool = budget().pool(&m.table);
        let r = check_gerstenhaber(&BvOperations(&m.delta), &pool, Grading::SHIFTED, &budget())
            .unwrap();
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn abelian_passes() {
        let m = polyvector_model(2).unwrap();
        let pool = budget().pool(&m.table);
        let r = check_gerstenhaber(
            &Abelian(m.table.clone()),
            &pool,
            Grading::SHIFTED,
            &budget(),
        )
        .unwrap();
        assert!(r.passed());
    }

    #[test]
    fn order_three_bracket_breaks_leibniz() {
        let m = polyvector_model(2).unwrap();
        let d = parse_operator(&m.table, "d[x1]*d[x2]*d[xi1]").unwrap();
        let pool = budget().pool(&m.table);
        let ops = BvOperations(&d);
        let r = check_gerstenhaber(&ops, &pool, Grading::SHIFTED, &budget()).unwrap();
        let c = r.get("leibniz").unwrap();
        assert_eq!(c.verdict, Verdict::Fail);
        assert!(c.witness.is_some() && c.residual.is_some());
    }

    #[test]
    fn wrong_offset_is_caught() {
        let m = polyvector_model(1).unwrap();
        let pool = budget().pool(&m.table);
        let g = Grading {
            bracket_offset: 1,
            ..Grading::SHIFTED
        };
        let r = check_gerstenhaber(&BvOperations(&m.delta), &pool, g, &budget()).unwrap();
        assert_eq!(r.get("bracket-degree").unwrap().verdict, Verdict::Fail);
        assert!(r.get("product-degree").unwrap().passed());
    }
}
