//! Differential operators on the free algebra in normal form.
//!
//! A term `c · M · ∂^α` means "apply `∂^α = ∂_1^{α_1} ∘ ⋯ ∘ ∂_m^{α_m}`, then
//! multiply on the left by the monomial `M`". Each `∂_i` is the left graded
//! derivation of degree `-|g_i|`:
//!
//! `∂_i(a b) = ∂_i(a) b + (-1)^{|g_i||a|} a ∂_i(b)`.
//!
//! Composition normal-orders with the commutation rule
//! `∂_i ∘ L_M = L_{∂_i M} + (-1)^{|g_i||M|} L_M ∘ ∂_i`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{monomials_up_to, Element, GeneratorTable, Monomial};
use crate::error::{Error, Result};
use crate::graded::{Degree, Parity, Scalar, Sign};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OpTerm {
    pub coeff: Scalar,
    pub multiplier: Monomial,
    pub derivatives: Monomial,
}

impl OpTerm {
    pub fn degree(&self, table: &GeneratorTable) -> Degree {
        self.multiplier.degree(table) - self.derivatives.degree(table)
    }

    pub fn order(&self) -> u32 {
        self.derivatives.total()
    }
}

type TermKey = (Monomial, Monomial);

#[derive(Clone, PartialEq, Eq)]
pub struct Operator {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<TermKey, Scalar>,
}

/// `∂_i` applied to the monomial `m`, as (result, signed multiplicity).
pub(crate) fn partial_of_monomial(
    table: &GeneratorTable,
    i: usize,
    m: &Monomial,
) -> Option<(Monomial, Scalar)> {
    let e = m.exponents()[i];
    if e == 0 {
        return None;
    }
    let mut out = m.clone();
    out.exponents_mut()[i] -= 1;
    if table.is_odd(i) {
        let sign = Sign::pow(m.odd_before(table, i) as i64);
        Some((out, sign.to_scalar()))
    } else {
        Some((out, Scalar::from_integer(e.into())))
    }
}

/// Structural order of an operator; the zero operator is flagged.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct StructuralOrder {
    pub order: u32,
    /// Set for the zero operator, whose order is reported as 0 by convention.
    pub degenerate: bool,
}

/// Result of the square-zero test.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquareZero {
    pub holds: bool,
    /// Normal form of `D ∘ D`.
    pub square: Operator,
    /// Monomial `m` with `D(D(m)) ≠ 0`, when the square is nonzero.
    pub witness: Option<Monomial>,
}

impl Operator {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        Operator {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn identity(table: &Arc<GeneratorTable>) -> Self {
        let u = Monomial::unit(table.len());
        Self::from_terms(table, [(Scalar::one(), u.clone(), u)]).unwrap()
    }

    /// Left multiplication by an element.
    pub fn multiplication(a: &Element) -> Self {
        let table = a.table();
        let mut op = Operator::zero(table);
        for (m, c) in a.terms() {
            op.add_term(m.clone(), Monomial::unit(table.len()), c.clone());
        }
        op
    }

    /// The partial derivative `∂/∂g_i`.
    pub fn partial(table: &Arc<GeneratorTable>, i: usize) -> Self {
        let u = Monomial::unit(table.len());
        Self::from_terms(
            table,
            [(Scalar::one(), u, Monomial::generator(table.len(), i))],
        )
        .unwrap()
    }

    pub fn partial_named(table: &Arc<GeneratorTable>, name: &str) -> Result<Self> {
        let i = table
            .index_of(name)
            .ok_or_else(|| Error::domain(format!("unknown generator `{name}`")))?;
        Ok(Self::partial(table, i))
    }

    /// Build from `(coeff, multiplier, derivatives)` triples; repeated keys add.
    pub fn from_terms(
        table: &Arc<GeneratorTable>,
        terms: impl IntoIterator<Item = (Scalar, Monomial, Monomial)>,
    ) -> Result<Self> {
        let mut op = Operator::zero(table);
        for (c, m, d) in terms {
            if !m.is_valid(table) {
                return Err(Error::domain(format!(
                    "invalid multiplier {:?}",
                    m.exponents()
                )));
            }
            if !d.is_valid(table) {
                return Err(Error::domain(format!(
                    "invalid derivative index {:?} (odd generators admit exponent 0 or 1)",
                    d.exponents()
                )));
            }
            op.add_term(m, d, c);
        }
        Ok(op)
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn terms(&self) -> impl Iterator<Item = OpTerm> + '_ {
        self.terms.iter().map(|((m, d), c)| OpTerm {
            coeff: c.clone(),
            multiplier: m.clone(),
            derivatives: d.clone(),
        })
    }

    fn add_term(&mut self, m: Monomial, d: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry((m, d)) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub(crate) fn same_table(&self, other: &Arc<GeneratorTable>) -> bool {
        Arc::ptr_eq(&self.table, other) || *self.table == **other
    }

    fn check_table(&self, other: &Arc<GeneratorTable>) -> Result<()> {
        if Arc::ptr_eq(&self.table, other) || *self.table == **other {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    /// `∂^α` applied to a monomial: highest generator index first.
    fn derive_monomial(&self, alpha: &Monomial, m: &Monomial) -> Option<(Monomial, Scalar)> {
        let mut cur = m.clone();
        let mut coeff = Scalar::one();
        for i in (0..alpha.len()).rev() {
            for _ in 0..alpha.exponents()[i] {
                let (next, c) = partial_of_monomial(&self.table, i, &cur)?;
                cur = next;
                coeff *= c;
            }
        }
        Some((cur, coeff))
    }

    pub fn apply(&self, a: &Element) -> Result<Element> {
        self.check_table(a.table())?;
        let mut out = Element::zero(&self.table);
        for (m, c) in a.terms() {
            for ((mult, alpha), k) in &self.terms {
                let Some((dm, dc)) = self.derive_monomial(alpha, m) else {
                    continue;
                };
                if let Some((pm, s)) = mult.mul(&dm, &self.table) {
                    out.add_term(pm, s.apply(k * &dc * c));
                }
            }
        }
        Ok(out)
    }

    /// `∂_i ∘ (c · M ∂^β)`, accumulated into `out`.
    fn left_partial_into(
        &self,
        i: usize,
        m: &Monomial,
        beta: &Monomial,
        c: &Scalar,
        out: &mut Operator,
    ) {
        let table = &self.table;
        if let Some((dm, dc)) = partial_of_monomial(table, i, m) {
            out.add_term(dm, beta.clone(), c * dc);
        }
        let gi = table.degree(i);
        let mut sign = Sign::koszul(gi, m.degree(table));
        if table.is_odd(i) {
            if beta.exponents()[i] == 1 {
                return;
            }
            let passed: Degree = (0..i)
                .map(|j| table.degree(j) * beta.exponents()[j] as i64)
                .sum();
            sign *= Sign::koszul(gi, passed);
        }
        let mut nb = beta.clone();
        nb.exponents_mut()[i] += 1;
        out.add_term(m.clone(), nb, sign.apply(c.clone()));
    }

    /// Normal form of `self ∘ other`.
    pub fn compose(&self, other: &Operator) -> Result<Operator> {
        self.check_table(&other.table)?;
        let table = &self.table;
        let mut out = Operator::zero(table);
        for ((m1, alpha), c1) in &self.terms {
            let mut acc = other.clone();
            for i in (0..table.len()).rev() {
                for _ in 0..alpha.exponents()[i] {
                    let mut next = Operator::zero(table);
                    for ((m, beta), c) in &acc.terms {
                        self.left_partial_into(i, m, beta, c, &mut next);
                    }
                    acc = next;
                }
            }
            for ((m, beta), c) in acc.terms {
                if let Some((pm, s)) = m1.mul(&m, table) {
                    out.add_term(pm, beta, s.apply(c * c1));
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Operator) -> Result<Operator> {
        self.check_table(&other.table)?;
        let mut out = self.clone();
        for ((m, d), c) in &other.terms {
            out.add_term(m.clone(), d.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Operator {
        let mut out = Operator::zero(&self.table);
        for ((m, d), k) in &self.terms {
            out.add_term(m.clone(), d.clone(), k * c);
        }
        out
    }

    /// `D E + E D` (the graded commutator of two odd operators).
    pub fn anticommutator(&self, other: &Operator) -> Result<Operator> {
        Ok(&self.compose(other)? + &other.compose(self)?)
    }

    pub fn degree_components(&self) -> BTreeMap<Degree, Operator> {
        let mut out: BTreeMap<Degree, Operator> = BTreeMap::new();
        for t in self.terms() {
            out.entry(t.degree(&self.table))
                .or_insert_with(|| Operator::zero(&self.table))
                .add_term(t.multiplier, t.derivatives, t.coeff);
        }
        out
    }

    /// Degree if homogeneous (the zero operator has none).
    pub fn degree(&self) -> Option<Degree> {
        let comps = self.degree_components();
        (comps.len() == 1).then(|| *comps.keys().next().unwrap())
    }

    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms().map(|t| t.degree(&self.table).parity());
        let p = it.next()?;
        it.all(|q| q == p).then_some(p)
    }

    /// Even and odd parts; absent parts are omitted.
    pub fn parity_components(&self) -> Vec<(Parity, Operator)> {
        let mut even = Operator::zero(&self.table);
        let mut odd = Operator::zero(&self.table);
        for t in self.terms() {
            let target = if t.degree(&self.table).is_odd() {
                &mut odd
            } else {
                &mut even
            };
            target.add_term(t.multiplier, t.derivatives, t.coeff);
        }
        [(Parity::Even, even), (Parity::Odd, odd)]
            .into_iter()
            .filter(|(_, o)| !o.is_zero())
            .collect()
    }

    /// `D(1)`: the part of `D` that is plain multiplication.
    pub fn constant_part(&self) -> Element {
        let mut out = Element::zero(&self.table);
        for t in self.terms().filter(|t| t.derivatives.is_unit()) {
            out.add_term(t.multiplier, t.coeff);
        }
        out
    }

    /// `D - L_{D(1)}`, the operator with its multiplication part removed.
    pub fn without_constant(&self) -> Operator {
        let mut out = self.clone();
        out.terms.retain(|(_, d), _| !d.is_unit());
        out
    }

    /// Maximum total derivative count over terms.
    pub fn structural_order(&self) -> StructuralOrder {
        match self.terms().map(|t| t.order()).max() {
            Some(order) => StructuralOrder {
                order,
                degenerate: false,
            },
            None => StructuralOrder {
                order: 0,
                degenerate: true,
            },
        }
    }

    /// True iff every degree component has odd degree. The zero operator is odd.
    pub fn is_odd(&self) -> bool {
        self.degree_components().keys().all(|d| d.is_odd())
    }

    /// Exact test of `D ∘ D = 0` on the normal form.
    pub fn square_zero(&self) -> SquareZero {
        let square = self.compose(self).expect("same table");
        let witness = if square.is_zero() {
            None
        } else {
            square.witness_monomial()
        };
        SquareZero {
            holds: square.is_zero(),
            square,
            witness,
        }
    }

    pub fn is_square_zero(&self) -> bool {
        self.square_zero().holds
    }

    /// A monomial on which a nonzero normal-form operator acts nontrivially.
    ///
    /// Normal-form terms are linearly independent as maps, so the smallest
    /// derivative index among the terms gives one: feeding `x^α` kills every
    /// term whose index is not below `α`.
    pub fn witness_monomial(&self) -> Option<Monomial> {
        if self.is_zero() {
            return None;
        }
        let min_alpha = self
            .terms
            .keys()
            .map(|(_, d)| d)
            .min_by_key(|d| (d.total(), (*d).clone()))
            .unwrap();
        let candidate = min_alpha.clone();
        if !self
            .apply(&Element::monomial(
                &self.table,
                candidate.clone(),
                Scalar::one(),
            ))
            .unwrap()
            .is_zero()
        {
            return Some(candidate);
        }
        // fall back to a search over small monomials
        let budget = self.structural_order().order + 2;
        monomials_up_to(&self.table, budget).into_iter().find(|m| {
            !self
                .apply(&Element::monomial(&self.table, m.clone(), Scalar::one()))
                .unwrap()
                .is_zero()
        })
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Operator({self})")
    }
}

impl fmt::Display for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_operator(f, self)
    }
}

impl Add<&Operator> for &Operator {
    type Output = Operator;
    fn add(self, rhs: &Operator) -> Operator {
        self.try_add(rhs).expect("generator tables do not match")
    }
}

impl Add for Operator {
    type Output = Operator;
    fn add(self, rhs: Operator) -> Operator {
        &self + &rhs
    }
}

impl Sub<&Operator> for &Operator {
    type Output = Operator;
    fn sub(self, rhs: &Operator) -> Operator {
        self + &(-rhs.clone())
    }
}

impl Sub for Operator {
    type Output = Operator;
    fn sub(self, rhs: Operator) -> Operator {
        &self - &rhs
    }
}

impl Neg for Operator {
    type Output = Operator;
    fn neg(mut self) -> Operator {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graded::scalar;
    use crate::text::{parse_element, parse_operator};

    fn table() -> Arc<GeneratorTable> {
        GeneratorTable::new([
            ("x", 0),
            ("x1", 0),
            ("xi", 1),
            ("xi1", 1),
            ("xi2", 1),
            ("xi3", 1),
        ])
        .unwrap()
    }

    fn el(t: &Arc<GeneratorTable>, s: &str) -> Element {
        parse_element(t, s).unwrap()
    }

    fn op(t: &Arc<GeneratorTable>, s: &str) -> Operator {
        parse_operator(t, s).unwrap()
    }

    #[test]
    fn apply_examples() {
        let t = table();
        assert_eq!(op(&t, "d[x]").apply(&el(&t, "x^2")).unwrap(), el(&t, "2*x"));
        assert_eq!(
            op(&t, "d[x1]*d[xi1]").apply(&el(&t, "x1*xi1")).unwrap(),
            el(&t, "1")
        );
        assert!(Operator::zero(&t)
            .apply(&el(&t, "x*xi + 3"))
            .unwrap()
            .is_zero());
    }

    #[test]
    fn odd_partial_is_a_left_derivation() {
        let t = table();
        // ∂_{xi2}(xi1 xi2) = -xi1
        assert_eq!(
            op(&t, "d[xi2]").apply(&el(&t, "xi1*xi2")).unwrap(),
            el(&t, "-xi1")
        );
        assert_eq!(
            op(&t, "d[xi1]").apply(&el(&t, "xi1*xi2")).unwrap(),
            el(&t, "xi2")
        );
    }

    #[test]
    fn compose_examples() {
        let t = table();
        let dxi = op(&t, "d[xi]");
        assert!(dxi.compose(&dxi).unwrap().is_zero());

        let lhs = op(&t, "d[x]").compose(&op(&t, "x")).unwrap();
        assert_eq!(lhs, op(&t, "1 + x*d[x]"));
        for m in ["1", "x", "x^2"] {
            let e = el(&t, m);
            let direct = op(&t, "d[x]")
                .apply(&op(&t, "x").apply(&e).unwrap())
                .unwrap();
            assert_eq!(lhs.apply(&e).unwrap(), direct);
        }

        let d = op(&t, "x1*d[xi1] - 2*xi2*d[x]*d[xi3]");
        assert_eq!(d.compose(&Operator::identity(&t)).unwrap(), d);
        assert_eq!(Operator::identity(&t).compose(&d).unwrap(), d);
    }

    #[test]
    fn degree_components_examples() {
        let t = table();
        let d = op(&t, "d[xi] + x");
        let comps = d.degree_components();
        assert_eq!(comps.len(), 2);
        assert_eq!(comps[&Degree(-1)], op(&t, "d[xi]"));
        assert_eq!(comps[&Degree(0)], op(&t, "x"));
        assert_eq!(op(&t, "d[x]*d[xi]").degree_components().len(), 1);
    }

    #[test]
    fn structural_order_examples() {
        let t = table();
        assert_eq!(op(&t, "x").structural_order().order, 0);
        assert_eq!(
            op(&t, "d[x]*d[xi] + d[x1]*d[xi1]").structural_order().order,
            2
        );
        assert_eq!(op(&t, "d[xi1]*d[xi2]*d[xi3]").structural_order().order, 3);
        let z = Operator::zero(&t).structural_order();
        assert!(z.degenerate && z.order == 0);
    }

    #[test]
    fn oddness() {
        let t = table();
        assert!(op(&t, "d[x]*d[xi]").is_odd());
        assert!(!op(&t, "x").is_odd());
        assert!(op(&t, "xi*d[x] + d[x]*d[xi]").is_odd());
    }

    #[test]
    fn square_zero_examples() {
        let t = table();
        assert!(op(&t, "d[x]*d[xi] + d[x1]*d[xi1]").is_square_zero());
        assert!(Operator::zero(&t).is_square_zero());
        // (∂_x + 1)^2 = ∂_x^2 + 2∂_x + 1, so D²(1) = 1
        let sz = op(&t, "d[x] + 1").square_zero();
        assert!(!sz.holds);
        assert_eq!(sz.square, op(&t, "d[x^2] + 2*d[x] + 1"));
        assert_eq!(sz.witness, Some(Monomial::unit(t.len())));
    }

    #[test]
    fn invalid_derivative_index_rejected() {
        let t = table();
        let u = Monomial::unit(t.len());
        let mut d = vec![0; t.len()];
        d[2] = 2;
        assert!(Operator::from_terms(&t, [(scalar(1), u, Monomial::from_exponents(d))]).is_err());
    }

    #[test]
    fn table_mismatch() {
        let t = table();
        let t2 = GeneratorTable::new([("y", 0)]).unwrap();
        assert_eq!(
            Operator::identity(&t).apply(&Element::one(&t2)),
            Err(Error::TableMismatch)
        );
        assert!(Operator::identity(&t)
            .compose(&Operator::identity(&t2))
            .is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn small_table() -> Arc<GeneratorTable> {
            GeneratorTable::new([("x", 0), ("y", 2), ("a", 1), ("b", 1), ("c", -1)]).unwrap()
        }

        fn operator() -> impl Strategy<Value = Operator> {
            let t = small_table();
            let monos = monomials_up_to(&t, 2);
            let term = (
                -3i64..=3,
                proptest::sample::select(monos.clone()),
                proptest::sample::select(monos),
            );
            proptest::collection::vec(term, 0..4).prop_map(move |ts| {
                Operator::from_terms(&t, ts.into_iter().map(|(c, m, d)| (scalar(c), m, d))).unwrap()
            })
        }

        fn monomial() -> impl Strategy<Value = Monomial> {
            proptest::sample::select(monomials_up_to(&small_table(), 4))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(200))]

            #[test]
            fn compose_agrees_with_iterated_apply(d in operator(), e in operator(), m in monomial()) {
                let t = small_table();
                let x = Element::monomial(&t, m, scalar(1));
                let lhs = d.compose(&e).unwrap().apply(&x).unwrap();
                let rhs = d.apply(&e.apply(&x).unwrap()).unwrap();
                prop_assert_eq!(lhs, rhs);
            }

            #[test]
            fn compose_is_associative(d in operator(), e in operator(), f in operator()) {
                let de_f = d.compose(&e).unwrap().compose(&f).unwrap();
                let d_ef = d.compose(&e.compose(&f).unwrap()).unwrap();
                prop_assert_eq!(de_f, d_ef);
            }

            #[test]
            fn components_shift_degree(d in operator(), m in monomial()) {
                let t = small_table();
                let x = Element::monomial(&t, m.clone(), scalar(1));
                let comps = d.degree_components();
                let mut total = Operator::zero(&t);
                for (deg, c) in &comps {
                    let y = c.apply(&x).unwrap();
                    if !y.is_zero() {
                        prop_assert_eq!(y.degree(), Some(m.degree(&t) + *deg));
                    }
                    total = &total + c;
                }
                prop_assert_eq!(total, d);
            }

            #[test]
            fn order_is_subadditive(d in operator(), e in operator()) {
                let de = d.compose(&e).unwrap();
                if !de.is_zero() {
                    prop_assert!(de.structural_order().order
                        <= d.structural_order().order + e.structural_order().order);
                }
            }
        }
    }
}
