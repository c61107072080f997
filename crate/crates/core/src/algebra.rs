//! The free graded-commutative algebra on finitely many graded generators:
//! polynomial in the even generators, exterior in the odd ones.
//!
//! Monomials are exponent vectors read in generator-table order, so the
//! normal form `g_1^{e_1} ⋯ g_m^{e_m}` carries no stored sign. Products
//! reorder odd factors into table order and pick up the Koszul sign.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graded::{Degree, Parity, Scalar, Sign};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Generator {
    pub name: String,
    pub degree: Degree,
}

/// Ordered list of named generators; the order fixes the monomial normal form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GeneratorTable {
    gens: Vec<Generator>,
}

impl GeneratorTable {
    pub fn new<S: Into<String>>(gens: impl IntoIterator<Item = (S, i64)>) -> Result<Arc<Self>> {
        let gens: Vec<Generator> = gens
            .into_iter()
            .map(|(n, d)| Generator {
                name: n.into(),
                degree: Degree(d),
            })
            .collect();
        for (i, g) in gens.iter().enumerate() {
            if !is_identifier(&g.name) {
                return Err(Error::InvalidTable(format!(
                    "`{}` is not an identifier",
                    g.name
                )));
            }
            if gens[..i].iter().any(|h| h.name == g.name) {
                return Err(Error::InvalidTable(format!(
                    "duplicate generator `{}`",
                    g.name
                )));
            }
        }
        Ok(Arc::new(GeneratorTable { gens }))
    }

    pub fn len(&self) -> usize {
        self.gens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn generators(&self) -> &[Generator] {
        &self.gens
    }

    pub fn degree(&self, i: usize) -> Degree {
        self.gens[i].degree
    }

    pub fn is_odd(&self, i: usize) -> bool {
        self.gens[i].degree.is_odd()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.gens[i].name
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.gens.iter().position(|g| g.name == name)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_alphanumeric() || c == '_' || c == '\'')
}

/// Exponent vector over a generator table.
///
/// Also used for the derivative multi-index of operator terms.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn unit(n: usize) -> Self {
        Monomial(vec![0; n])
    }

    pub fn from_exponents(exps: Vec<u32>) -> Self {
        Monomial(exps)
    }

    pub fn generator(n: usize, i: usize) -> Self {
        let mut e = vec![0; n];
        e[i] = 1;
        Monomial(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub(crate) fn exponents_mut(&mut self) -> &mut [u32] {
        &mut self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    pub fn total(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn degree(&self, table: &GeneratorTable) -> Degree {
        self.0
            .iter()
            .enumerate()
            .map(|(i, &e)| table.degree(i) * e as i64)
            .sum()
    }

    pub fn parity(&self, table: &GeneratorTable) -> Parity {
        self.degree(table).parity()
    }

    /// Odd squares vanish: every odd generator appears at most once.
    pub fn is_valid(&self, table: &GeneratorTable) -> bool {
        self.0.len() == table.len()
            && self
                .0
                .iter()
                .enumerate()
                .all(|(i, &e)| e <= 1 || !table.is_odd(i))
    }

    /// Number of odd generators present among indices `< i`.
    pub(crate) fn odd_before(&self, table: &GeneratorTable, i: usize) -> u32 {
        (0..i).filter(|&j| table.is_odd(j)).map(|j| self.0[j]).sum()
    }

    /// Product `self · other` in normal form, or `None` if an odd generator
    /// repeats.
    pub fn mul(&self, other: &Monomial, table: &GeneratorTable) -> Option<(Monomial, Sign)> {
        let n = self.0.len();
        let mut exps = Vec::with_capacity(n);
        // Every odd factor of `other` moves left past the odd factors of
        // `self` with larger index.
        let mut swaps = 0u32;
        let mut odd_self_after = (0..n)
            .filter(|&j| table.is_odd(j))
            .map(|j| self.0[j])
            .sum::<u32>();
        for i in 0..n {
            let (a, b) = (self.0[i], other.0[i]);
            if table.is_odd(i) {
                if a + b > 1 {
                    return None;
                }
                odd_self_after -= a;
                if b == 1 {
                    swaps += odd_self_after;
                }
            }
            exps.push(a + b);
        }
        Some((Monomial(exps), Sign::pow(swaps as i64)))
    }
}

/// Finite linear combination of monomials with exact coefficients.
#[derive(Clone, PartialEq, Eq)]
pub struct Element {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<Monomial, Scalar>,
}

impl Element {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        Element {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(table: &Arc<GeneratorTable>) -> Self {
        Self::monomial(table, Monomial::unit(table.len()), Scalar::one())
    }

    pub fn scalar(table: &Arc<GeneratorTable>, c: Scalar) -> Self {
        Self::monomial(table, Monomial::unit(table.len()), c)
    }

    /// `c · m`. Panics if `m` is not a valid monomial for the table.
    pub fn monomial(table: &Arc<GeneratorTable>, m: Monomial, c: Scalar) -> Self {
        assert!(m.is_valid(table), "invalid monomial {m:?} for table");
        let mut e = Self::zero(table);
        e.add_term(m, c);
        e
    }

    pub fn generator(table: &Arc<GeneratorTable>, name: &str) -> Result<Self> {
        let i = table
            .index_of(name)
            .ok_or_else(|| Error::domain(format!("unknown generator `{name}`")))?;
        Ok(Self::monomial(
            table,
            Monomial::generator(table.len(), i),
            Scalar::one(),
        ))
    }

    /// Build from (monomial, coefficient) pairs; repeated monomials add up.
    pub fn from_terms(
        table: &Arc<GeneratorTable>,
        terms: impl IntoIterator<Item = (Monomial, Scalar)>,
    ) -> Result<Self> {
        let mut e = Self::zero(table);
        for (m, c) in terms {
            if !m.is_valid(table) {
                return Err(Error::domain(format!(
                    "invalid monomial {:?}",
                    m.exponents()
                )));
            }
            e.add_term(m, c);
        }
        Ok(e)
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub(crate) fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(m) {
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

    fn check_table(&self, other: &Element) -> Result<()> {
        if self.same_table(&other.table) {
            Ok(())
        } else {
            Err(Error::TableMismatch)
        }
    }

    /// Graded-commutative product.
    pub fn multiply(&self, other: &Element) -> Result<Element> {
        self.check_table(other)?;
        let mut out = Element::zero(&self.table);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                if let Some((m, s)) = ma.mul(mb, &self.table) {
                    out.add_term(m, s.apply(ca * cb));
                }
            }
        }
        Ok(out)
    }

    pub fn try_add(&self, other: &Element) -> Result<Element> {
        self.check_table(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero(&self.table);
        }
        Element {
            table: self.table.clone(),
            terms: self.terms.iter().map(|(m, a)| (m.clone(), a * c)).collect(),
        }
    }

    pub fn signed(self, s: Sign) -> Element {
        match s {
            Sign::Plus => self,
            Sign::Minus => -self,
        }
    }

    /// Homogeneous components keyed by degree; they sum back to `self`.
    pub fn grade_decompose(&self) -> BTreeMap<Degree, Element> {
        let mut out: BTreeMap<Degree, Element> = BTreeMap::new();
        for (m, c) in &self.terms {
            out.entry(m.degree(&self.table))
                .or_insert_with(|| Element::zero(&self.table))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    /// Degree if homogeneous. The zero element has no degree.
    pub fn degree(&self) -> Option<Degree> {
        let mut it = self.terms.keys().map(|m| m.degree(&self.table));
        let d = it.next()?;
        it.all(|e| e == d).then_some(d)
    }

    pub fn is_homogeneous(&self) -> bool {
        self.is_zero() || self.degree().is_some()
    }

    pub fn parity(&self) -> Option<Parity> {
        let mut it = self.terms.keys().map(|m| m.parity(&self.table));
        let p = it.next()?;
        it.all(|q| q == p).then_some(p)
    }

    /// Split into single-monomial elements.
    pub fn monomials(&self) -> impl Iterator<Item = Element> + '_ {
        self.terms
            .iter()
            .map(|(m, c)| Element::monomial(&self.table, m.clone(), c.clone()))
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Element({self})")
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        crate::text::write_element(f, self)
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        self.try_add(rhs).expect("generator tables do not match")
    }
}

impl Add for Element {
    type Output = Element;
    fn add(self, rhs: Element) -> Element {
        &self + &rhs
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        assert!(self.same_table(&rhs.table), "generator tables do not match");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), c.clone());
        }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        assert!(self.same_table(&rhs.table), "generator tables do not match");
        for (m, c) in &rhs.terms {
            self.add_term(m.clone(), -c.clone());
        }
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        self + &(-rhs.clone())
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(self, rhs: Element) -> Element {
        &self - &rhs
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(mut self) -> Element {
        for c in self.terms.values_mut() {
            *c = -c.clone();
        }
        self
    }
}

impl Mul<&Element> for &Element {
    type Output = Element;
    fn mul(self, rhs: &Element) -> Element {
        self.multiply(rhs).expect("generator tables do not match")
    }
}

impl Mul for Element {
    type Output = Element;
    fn mul(self, rhs: Element) -> Element {
        &self * &rhs
    }
}

/// All valid monomials with total exponent at most `max_total`, sorted.
pub fn monomials_up_to(table: &GeneratorTable, max_total: u32) -> Vec<Monomial> {
    fn rec(
        table: &GeneratorTable,
        i: usize,
        left: u32,
        cur: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if i == table.len() {
            out.push(Monomial(cur.clone()));
            return;
        }
        let cap = if table.is_odd(i) { left.min(1) } else { left };
        for e in 0..=cap {
            cur.push(e);
            rec(table, i + 1, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = vec![];
    rec(
        table,
        0,
        max_total,
        &mut Vec::with_capacity(table.len()),
        &mut out,
    );
    out.sort();
    out
}
