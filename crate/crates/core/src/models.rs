//! Concrete algebras and operators: polyvector fields with the divergence
//! operator, an independent Schouten–Nijenhuis bracket, Koszul complexes and
//! small exterior-algebra laboratories.
//!
//! Degrees are stored in the conventional polyvector grading: `x_i` has
//! degree 0, `ξ_i` degree 1, the wedge product degree 0 and the Schouten
//! bracket degree −1. The shifted grading `p = |a| - 1` turns these into a
//! product of degree +1 and a bracket of degree 0.

use std::sync::Arc;

use num_traits::One;

use crate::algebra::{Element, GeneratorTable, Monomial};
use crate::brackets::bv_bracket;
use crate::diffop::Operator;
use crate::error::{Error, Result};
use crate::graded::{Degree, Scalar, Sign};

/// Polyvector fields on `ℝⁿ`: generators `x1..xn` then `xi1..xin`.
#[derive(Debug, Clone)]
pub struct PolyvectorModel {
    pub n: usize,
    pub table: Arc<GeneratorTable>,
    /// `Δ = Σ_i ∂²/∂x_i∂ξ_i`.
    pub delta: Operator,
}

pub fn polyvector_model(n: usize) -> Result<PolyvectorModel> {
    if n < 1 {
        return Err(Error::domain("polyvector model needs dimension at least 1"));
    }
    let gens = (1..=n)
        .map(|i| (format!("x{i}"), 0))
        .chain((1..=n).map(|i| (format!("xi{i}"), 1)));
    let table = GeneratorTable::new(gens)?;
    let mut delta = Operator::zero(&table);
    for i in 0..n {
        let term = Operator::partial(&table, i).compose(&Operator::partial(&table, n + i))?;
        delta = &delta + &term;
    }
    Ok(PolyvectorModel { n, table, delta })
}

impl PolyvectorModel {
    pub fn x(&self, i: usize) -> usize {
        i
    }

    pub fn xi(&self, i: usize) -> usize {
        self.n + i
    }

    /// The Schouten–Nijenhuis bracket by the bidifferential formula
    /// `[P, Q] = Σ_i (P ∂⃖_{ξ_i})(∂_{x_i} Q) - (∂_{x_i} P)(∂⃗_{ξ_i} Q)`,
    /// where `P ∂⃖_ξ = (-1)^{|P|+1} ∂⃗_ξ P`.
    pub fn schouten(&self, p: &Element, q: &Element) -> Result<Element> {
        schouten_oracle(self, p, q)
    }

    /// `s` with `bv_bracket(Δ, a, b) = s · schouten(a, b)`, fixed by the pair
    /// `(ξ_1, x_1)`.
    pub fn schouten_sign(&self) -> Sign {
        let xi = Element::monomial(
            &self.table,
            Monomial::generator(self.table.len(), self.xi(0)),
            Scalar::one(),
        );
        let x = Element::monomial(
            &self.table,
            Monomial::generator(self.table.len(), self.x(0)),
            Scalar::one(),
        );
        let bv = bv_bracket(&self.delta, &xi, &x).expect("homogeneous generators");
        let sn = self.schouten(&xi, &x).expect("homogeneous generators");
        if bv == sn {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

/// Independent Schouten–Nijenhuis bracket on a polyvector model.
pub fn schouten_oracle(model: &PolyvectorModel, p: &Element, q: &Element) -> Result<Element> {
    let t = &model.table;
    if !p.same_table(t) || !q.same_table(t) {
        return Err(Error::TableMismatch);
    }
    if [p, q].iter().any(|e| !e.is_zero() && !e.is_homogeneous()) {
        return Err(Error::domain(
            "the Schouten bracket needs homogeneous arguments",
        ));
    }
    let dp = p.degree().unwrap_or(Degree(0));
    let mut out = Element::zero(t);
    for i in 0..model.n {
        let dx = Operator::partial(t, model.x(i));
        let dxi = Operator::partial(t, model.xi(i));
        let right_dxi_p = dxi.apply(p)?.signed(Sign::pow(dp.0 + 1));
        out += &(&right_dxi_p * &dx.apply(q)?);
        out -= &(&dx.apply(p)? * &dxi.apply(q)?);
    }
    Ok(out)
}

/// A Koszul complex `ℚ[x_1..x_m] ⊗ Λ(ξ_1..ξ_r)` with
/// `d = Σ_i x^{e_i} ∂/∂ξ_i` and optionally `D₂ = Σ_i ∂²/∂x_i∂ξ_i`.
#[derive(Debug, Clone)]
pub struct KoszulModel {
    pub table: Arc<GeneratorTable>,
    pub d: Operator,
    pub divergence: Option<Operator>,
    /// Generator weights making every slice finite and `d` weight-preserving.
    pub weights: Vec<u32>,
}

impl KoszulModel {
    /// `d + D₂` when the divergence was requested, otherwise `d`.
    pub fn total(&self) -> Operator {
        match &self.divergence {
            Some(d2) => &self.d + d2,
            None => self.d.clone(),
        }
    }
}

/// Build a Koszul complex from exponent vectors `e_i` over `m` even
/// generators. Even generators get degree 2 and `ξ_i` degree `2|e_i| - 1`,
/// so `d` has degree +1.
pub fn koszul_complex_model(exponents: &[Vec<u32>], with_divergence: bool) -> Result<KoszulModel> {
    let Some(first) = exponents.first() else {
        return Err(Error::domain("at least one odd generator is required"));
    };
    let m = first.len();
    if m == 0 || exponents.iter().any(|e| e.len() != m) {
        return Err(Error::domain(
            "exponent vectors must share a nonzero length",
        ));
    }
    if exponents.iter().any(|e| e.iter().sum::<u32>() == 0) {
        return Err(Error::domain("each exponent vector must be nonzero"));
    }
    let r = exponents.len();
    let gens = (1..=m)
        .map(|j| {
            (
                if m == 1 {
                    "x".to_string()
                } else {
                    format!("x{j}")
                },
                2,
            )
        })
        .chain(exponents.iter().enumerate().map(|(i, e)| {
            let name = if r == 1 {
                "xi".to_string()
            } else {
                format!("xi{}", i + 1)
            };
            (name, 2 * e.iter().sum::<u32>() as i64 - 1)
        }));
    let table = GeneratorTable::new(gens)?;
    let mut d = Operator::zero(&table);
    for (i, e) in exponents.iter().enumerate() {
        let mut mult = e.clone();
        mult.resize(m + r, 0);
        let coeff = Element::monomial(&table, Monomial::from_exponents(mult), Scalar::one());
        d = &d + &Operator::multiplication(&coeff).compose(&Operator::partial(&table, m + i))?;
    }
    let square = d.compose(&d)?;
    if !square.is_zero() {
        return Err(Error::Construction(format!("d² = {square} is not zero")));
    }
    let divergence = if with_divergence {
        if m != r {
            return Err(Error::domain(
                "the divergence pairs x_i with ξ_i and needs as many of each",
            ));
        }
        let mut d2 = Operator::zero(&table);
        for i in 0..r {
            d2 = &d2 + &Operator::partial(&table, i).compose(&Operator::partial(&table, m + i))?;
        }
        let total = &d + &d2;
        let square = total.compose(&total)?;
        if !square.is_zero() {
            return Err(Error::Construction(format!(
                "(d + D₂)² = {square} is not zero"
            )));
        }
        Some(d2)
    } else {
        None
    };
    let weights = std::iter::repeat_n(1, m)
        .chain(exponents.iter().map(|e| e.iter().sum()))
        .collect();
    Ok(KoszulModel {
        table,
        d,
        divergence,
        weights,
    })
}

/// Polyvector fields on `ℝ²` with `d = [ξ_1ξ_2, ·]`, the differential of the
/// constant Poisson bivector, and `D = d + Δ`.
#[derive(Debug, Clone)]
pub struct PoissonModel {
    pub base: PolyvectorModel,
    pub d: Operator,
    pub total: Operator,
}

pub fn poisson_model() -> Result<PoissonModel> {
    let base = polyvector_model(2)?;
    let t = &base.table;
    let xi1 = Operator::multiplication(&Element::generator(t, "xi1")?);
    let xi2 = Operator::multiplication(&Element::generator(t, "xi2")?);
    let d = &xi1.compose(&Operator::partial_named(t, "x2")?)?
        - &xi2.compose(&Operator::partial_named(t, "x1")?)?;
    let total = &d + &base.delta;
    if !total.is_square_zero() {
        return Err(Error::Construction("(d + Δ)² is not zero".into()));
    }
    Ok(PoissonModel { base, d, total })
}

/// `ℚ[x, y] ⊗ Λ(ξ_1, ξ_2, ξ_3)` with a square-zero `D = D_1 + D_2 + D_3`:
/// `D_1 = ξ_2 ∂_y`, `D_2 = x ∂_y ∂_{ξ_3} - ∂_x ∂_{ξ_1}`,
/// `D_3 = -∂_{ξ_1} ∂_{ξ_2} ∂_{ξ_3}`. Here `D_2² ≠ 0` is cancelled by
/// `D_1 D_3 + D_3 D_1`.
#[derive(Debug, Clone)]
pub struct SplitLab {
    pub table: Arc<GeneratorTable>,
    pub parts: [Operator; 3],
    pub total: Operator,
}

pub fn split_lab_model() -> Result<SplitLab> {
    let table = GeneratorTable::new([("x", 0), ("y", 0), ("xi1", 1), ("xi2", 1), ("xi3", 1)])?;
    let parts = [
        crate::text::parse_operator(&table, "xi2*d[y]")?,
        crate::text::parse_operator(&table, "x*d[y]*d[xi3] - d[x]*d[xi1]")?,
        crate::text::parse_operator(&table, "-d[xi1]*d[xi2]*d[xi3]")?,
    ];
    let total = &(&parts[0] + &parts[1]) + &parts[2];
    if !total.is_square_zero() {
        return Err(Error::Construction("D² is not zero".into()));
    }
    Ok(SplitLab {
        table,
        parts,
        total,
    })
}

/// `Λ(ξ_1, ξ_2, ξ_3)` with the order-3 operator `∂³/∂ξ_1∂ξ_2∂ξ_3`.
pub fn exterior_cubic_model() -> (Arc<GeneratorTable>, Operator) {
    let table = GeneratorTable::new([("xi1", 1), ("xi2", 1), ("xi3", 1)]).expect("valid table");
    let d = Operator::partial(&table, 0)
        .compose(&Operator::partial(&table, 1))
        .and_then(|o| o.compose(&Operator::partial(&table, 2)))
        .expect("same table");
    (table, d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::akman_order_check;
    use crate::sampling::Budget;
    use crate::text::{parse_element, parse_operator};

    fn el(t: &Arc<GeneratorTable>, s: &str) -> Element {
        parse_element(t, s).unwrap()
    }

    #[test]
    fn polyvector_unrolled() {
        let m = polyvector_model(1).unwrap();
        assert_eq!(m.delta, parse_operator(&m.table, "d[x1]*d[xi1]").unwrap());
        assert!(polyvector_model(0).is_err());

        let m = polyvector_model(3).unwrap();
        assert_eq!(m.delta.num_terms(), 3);
        assert_eq!(
            m.delta.apply(&el(&m.table, "x1*xi1*xi2")).unwrap(),
            el(&m.table, "xi2")
        );
        for g in ["1", "x1", "x2", "xi1", "xi3"] {
            assert!(m.delta.apply(&el(&m.table, g)).unwrap().is_zero());
        }
        assert!(m.delta.is_odd());
        assert!(m.delta.is_square_zero());
        assert_eq!(m.delta.degree(), Some(Degree(-1)));
        assert!(akman_order_check(&m.delta, 2, &Budget::new(2, 300, 1)).passed());
    }

    #[test]
    fn schouten_examples() {
        let m = polyvector_model(3).unwrap();
        let t = &m.table;
        for i in 1..=3 {
            for j in 1..=3 {
                let v = m
                    .schouten(&el(t, &format!("xi{i}")), &el(t, &format!("x{j}")))
                    .unwrap();
                assert_eq!(v, el(t, if i == j { "1" } else { "0" }));
            }
        }
        assert_eq!(
            m.schouten(&el(t, "xi1"), &el(t, "x1*xi2")).unwrap(),
            el(t, "xi2")
        );
        assert!(m
            .schouten(&el(t, "x1^2"), &el(t, "x2*x3"))
            .unwrap()
            .is_zero());
        assert!(m.schouten(&el(t, "x1 + xi1"), &el(t, "x2")).is_err());
    }

    #[test]
    fn schouten_on_vector_fields_is_the_lie_bracket() {
        let m = polyvector_model(2).unwrap();
        let t = &m.table;
        // [x1 ∂_2, x2 ∂_1] = x1 ∂_1 - x2 ∂_2
        let v = m.schouten(&el(t, "x1*xi2"), &el(t, "x2*xi1")).unwrap();
        assert_eq!(v, el(t, "x1*xi1 - x2*xi2"));
        // [x1^2 ∂_1, x2] = 0 and [x2 ∂_1, x1^3] = 3 x1^2 x2
        assert!(m
            .schouten(&el(t, "x1^2*xi1"), &el(t, "x2"))
            .unwrap()
            .is_zero());
        assert_eq!(
            m.schouten(&el(t, "x2*xi1"), &el(t, "x1^3")).unwrap(),
            el(t, "3*x1^2*x2")
        );
    }

    #[test]
    fn calibrated_sign() {
        for n in 1..=3 {
            assert_eq!(polyvector_model(n).unwrap().schouten_sign(), Sign::Minus);
        }
    }

    #[test]
    fn koszul_complex_examples() {
        let k = koszul_complex_model(&[vec![1]], false).unwrap();
        assert_eq!(k.d, parse_operator(&k.table, "x*d[xi]").unwrap());
        assert_eq!(k.d.degree(), Some(Degree(1)));
        let k = koszul_complex_model(&[vec![2]], true).unwrap();
        assert_eq!(k.d, parse_operator(&k.table, "x^2*d[xi]").unwrap());
        assert!(k.total().is_square_zero());
        assert_eq!(k.divergence.unwrap().degree(), Some(Degree(-5)));
        let k = koszul_complex_model(&[vec![1, 0], vec![0, 1]], true).unwrap();
        assert!(k.total().is_square_zero());
        assert!(koszul_complex_model(&[vec![1, 1]], true).is_err());
        assert!(koszul_complex_model(&[], false).is_err());
        assert!(koszul_complex_model(&[vec![0]], false).is_err());
    }

    #[test]
    fn poisson_model_parts() {
        let p = poisson_model().unwrap();
        assert_eq!(p.d.degree(), Some(Degree(1)));
        assert!(p.d.is_square_zero());
        assert!(p.d.anticommutator(&p.base.delta).unwrap().is_zero());
        let comps = p.total.degree_components();
        assert_eq!(
            comps.keys().copied().collect::<Vec<_>>(),
            vec![Degree(-1), Degree(1)]
        );
        // d is ±[ξ1ξ2, ·]
        let t = &p.base.table;
        let pi = el(t, "xi1*xi2");
        for a in ["x1", "x2*xi1", "x1^2*x2"] {
            let a = el(t, a);
            let s = p.base.schouten(&pi, &a).unwrap();
            let da = p.d.apply(&a).unwrap();
            assert!(da == s || da == -s.clone(), "{da} vs {s}");
        }
    }

    #[test]
    fn split_lab_interacts() {
        let lab = split_lab_model().unwrap();
        let [d1, d2, d3] = &lab.parts;
        let d22 = d2.compose(d2).unwrap();
        assert!(!d22.is_zero());
        assert!(!d1.compose(d3).unwrap().is_zero());
        assert_eq!(
            &d22 + &d1.anticommutator(d3).unwrap(),
            Operator::zero(&lab.table)
        );
        for (n, p) in lab.parts.iter().enumerate() {
            assert_eq!(p.degree(), Some(Degree(1 - 2 * n as i64)));
            assert_eq!(p.structural_order().order, n as u32 + 1);
        }
    }

    #[test]
    fn exterior_cubic() {
        let (t, d) = exterior_cubic_model();
        assert_eq!(t.len(), 3);
        assert!(d.is_square_zero() && d.is_odd());
        assert_eq!(d.structural_order().order, 3);
        assert_eq!(d.apply(&el(&t, "xi1*xi2*xi3")).unwrap(), el(&t, "-1"));
    }
}
