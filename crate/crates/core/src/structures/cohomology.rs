//! Cohomology of a weight-graded differential, slice by slice, and the BV
//! structure induced on it.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::algebra::{Element, GeneratorTable, Monomial};
use crate::brackets::bracket_by_parts;
use crate::diffop::Operator;
use crate::error::{Error, Result};
use crate::graded::{Degree, Scalar};
use crate::sampling::Budget;

use super::bracket_bilinear;
use super::bvinfty::check_bvinfty;
use super::gerstenhaber::{check_gerstenhaber, GerstenhaberOps, Grading};
use super::linalg::{reduce_against, Matrix};
use super::report::{find_witness, sweep, Check, Outcome, Report, Verdict};

/// Nonnegative generator weights under which `d` shifts weight by `shift`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Weights {
    pub weights: Vec<u32>,
    pub shift: i64,
}

/// Slices of weight at most `max_weight` are computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Window {
    pub max_weight: u32,
}

pub type SliceKey = (Degree, u32);

fn term_shift(m: &Monomial, deriv: &Monomial, w: &[u32]) -> i64 {
    m.exponents()
        .iter()
        .zip(deriv.exponents())
        .zip(w)
        .map(|((&a, &b), &wi)| (a as i64 - b as i64) * wi as i64)
        .sum()
}

/// The common weight shift of the terms of `d`, if they share one.
pub fn weight_shift(d: &Operator, weights: &[u32]) -> Result<i64> {
    if weights.len() != d.table().len() {
        return Err(Error::domain(format!(
            "{} weights given for {} generators",
            weights.len(),
            d.table().len()
        )));
    }
    let shifts: BTreeSet<i64> = d
        .terms()
        .map(|t| term_shift(&t.multiplier, &t.derivatives, weights))
        .collect();
    match shifts.len() {
        0 => Ok(0),
        1 => Ok(*shifts.first().expect("one element")),
        _ => Err(Error::domain(format!(
            "d is not weight-homogeneous: its terms shift weight by {shifts:?}"
        ))),
    }
}

fn positive_integer_vector(v: &[Scalar]) -> Option<Vec<u32>> {
    if v.iter().any(|x| !x.is_positive()) {
        return None;
    }
    let lcm = v
        .iter()
        .fold(num_bigint::BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints: Vec<num_bigint::BigInt> = v.iter().map(|x| (x * &lcm).to_integer()).collect();
    let gcd = ints
        .iter()
        .fold(num_bigint::BigInt::zero(), |acc, x| acc.gcd(x));
    ints.iter().map(|x| (x / &gcd).to_u32()).collect()
}

/// Positive weights making `d` weight-preserving, found among small integer
/// combinations of a kernel basis. The smallest candidate wins.
pub fn infer_weights(d: &Operator) -> Result<Weights> {
    let n = d.table().len();
    let rows: Vec<Vec<Scalar>> = d
        .terms()
        .map(|t| {
            t.multiplier
                .exponents()
                .iter()
                .zip(t.derivatives.exponents())
                .map(|(&a, &b)| Scalar::from_integer((a as i64 - b as i64).into()))
                .collect()
        })
        .collect();
    let basis = Matrix::from_rows(n, rows).nullspace();
    let k = basis.len();
    let range: Vec<i64> = if k <= 4 { (-2..=3).collect() } else { vec![1] };
    let mut best: Option<Vec<u32>> = None;
    let mut coeffs = vec![0usize; k];
    loop {
        let mut v = vec![Scalar::zero(); n];
        for (c, b) in coeffs.iter().zip(&basis) {
            let c = Scalar::from_integer(range[*c].into());
            for (vi, bi) in v.iter_mut().zip(b) {
                *vi += &c * bi;
            }
        }
        if let Some(w) = positive_integer_vector(&v) {
            let key = |w: &Vec<u32>| (w.iter().max().copied(), w.iter().sum::<u32>(), w.clone());
            if best.as_ref().is_none_or(|b| key(&w) < key(b)) {
                best = Some(w);
            }
        }
        let mut i = 0;
        loop {
            if i == k {
                return best
                    .map(|weights| Weights { weights, shift: 0 })
                    .ok_or_else(|| {
                        Error::domain("no positive weights make d weight-preserving; supply them")
                    });
            }
            coeffs[i] += 1;
            if coeffs[i] < range.len() {
                break;
            }
            coeffs[i] = 0;
            i += 1;
        }
    }
}

fn monomial_weight(m: &Monomial, w: &[u32]) -> u32 {
    m.exponents().iter().zip(w).map(|(&e, &wi)| e * wi).sum()
}

fn window_monomials(table: &GeneratorTable, w: &[u32], max: u32) -> Vec<Monomial> {
    fn go(
        table: &GeneratorTable,
        w: &[u32],
        i: usize,
        left: u32,
        cur: &mut Vec<u32>,
        out: &mut Vec<Monomial>,
    ) {
        if i == w.len() {
            out.push(Monomial::from_exponents(cur.clone()));
            return;
        }
        let cap = if table.is_odd(i) {
            1
        } else {
            left.checked_div(w[i]).unwrap_or(0)
        };
        for e in 0..=cap {
            if e * w[i] > left {
                break;
            }
            cur[i] = e;
            go(table, w, i + 1, left - e * w[i], cur, out);
        }
        cur[i] = 0;
    }
    let mut out = Vec::new();
    go(table, w, 0, max, &mut vec![0; w.len()], &mut out);
    out
}

/// Cohomology of one `(degree, weight)` slice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Slice {
    pub degree: Degree,
    pub weight: u32,
    /// Monomial basis in increasing order.
    pub basis: Vec<Monomial>,
    pub cycles: usize,
    pub boundaries: usize,
    /// Cycles spanning a complement of the boundaries.
    pub representatives: Vec<Element>,
    /// The boundaries come from a slice outside the window, so the dimension
    /// is only an upper bound.
    pub truncated: bool,
    boundary_rows: Vec<Vec<Scalar>>,
}

impl Slice {
    pub fn dimension(&self) -> usize {
        self.representatives.len()
    }

    fn coords(&self, e: &Element) -> Vec<Scalar> {
        self.basis.iter().map(|m| e.coeff(m)).collect()
    }

    /// A spanning set of the boundaries in reduced echelon form.
    pub fn boundary_basis(&self, table: &Arc<GeneratorTable>) -> Vec<Element> {
        self.boundary_rows
            .iter()
            .map(|r| to_element(table, &self.basis, r))
            .collect()
    }

    /// Coordinates of a cycle on the representatives, or `None` when `e` is not
    /// a cycle of this slice.
    fn class_coords(&self, e: &Element, table: &Arc<GeneratorTable>) -> Option<Vec<Scalar>> {
        let reps: Vec<Vec<Scalar>> = self
            .representatives
            .iter()
            .map(|r| self.coords(r))
            .collect();
        let cols: Vec<Vec<Scalar>> = self.boundary_rows.iter().chain(&reps).cloned().collect();
        let target = self.coords(e);
        if to_element(table, &self.basis, &target) != *e {
            return None;
        }
        let x = Matrix::from_columns(self.basis.len(), &cols).solve(&target)?;
        Some(x[self.boundary_rows.len()..].to_vec())
    }
}

fn to_element(table: &Arc<GeneratorTable>, basis: &[Monomial], v: &[Scalar]) -> Element {
    let mut out = Element::zero(table);
    for (m, c) in basis.iter().zip(v) {
        if !c.is_zero() {
            out += &Element::monomial(table, m.clone(), c.clone());
        }
    }
    out
}

/// `H(A, d)` on a weight window, with deterministic representatives.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyBasis {
    pub table: Arc<GeneratorTable>,
    pub d: Operator,
    pub weights: Weights,
    pub window: Window,
    pub slices: BTreeMap<SliceKey, Slice>,
}

/// Whether an element is a boundary, or which class it represents.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ClassOf {
    /// Coordinates on the representatives of each slice it meets.
    Class(BTreeMap<SliceKey, Vec<Scalar>>),
    NotACycle,
    /// Part of the element lies outside the window or in a truncated slice.
    Undecided,
}

impl CohomologyBasis {
    /// Nonzero slice dimensions.
    pub fn dims(&self) -> BTreeMap<SliceKey, usize> {
        self.slices
            .iter()
            .filter(|(_, s)| s.dimension() > 0)
            .map(|(k, s)| (*k, s.dimension()))
            .collect()
    }

    pub fn representatives(&self) -> Vec<Element> {
        self.slices
            .values()
            .flat_map(|s| s.representatives.iter().cloned())
            .collect()
    }

    pub fn truncated(&self) -> Vec<SliceKey> {
        self.slices
            .iter()
            .filter(|(_, s)| s.truncated)
            .map(|(k, _)| *k)
            .collect()
    }

    pub fn weight(&self, m: &Monomial) -> u32 {
        monomial_weight(m, &self.weights.weights)
    }

    fn pieces(&self, e: &Element) -> BTreeMap<SliceKey, Element> {
        let mut out: BTreeMap<SliceKey, Element> = BTreeMap::new();
        for (m, c) in e.terms() {
            let key = (m.degree(&self.table), self.weight(m));
            out.entry(key)
                .or_insert_with(|| Element::zero(&self.table))
                .add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn class_of(&self, e: &Element) -> Result<ClassOf> {
        if !e.same_table(&self.table) {
            return Err(Error::TableMismatch);
        }
        if !self.d.apply(e)?.is_zero() {
            return Ok(ClassOf::NotACycle);
        }
        let mut classes = BTreeMap::new();
        let mut undecided = false;
        for (key, piece) in self.pieces(e) {
            match self.slices.get(&key) {
                Some(s) => match s.class_coords(&piece, &self.table) {
                    Some(c) if s.truncated && c.iter().any(|x| !x.is_zero()) => undecided = true,
                    Some(c) => {
                        classes.insert(key, c);
                    }
                    None => return Ok(ClassOf::NotACycle),
                },
                None => undecided = true,
            }
        }
        Ok(if undecided {
            ClassOf::Undecided
        } else {
            ClassOf::Class(classes)
        })
    }

    /// `Some(true)` for a boundary, `Some(false)` for a cycle with a nonzero
    /// class or a non-cycle, `None` when undecidable on the window.
    pub fn is_boundary(&self, e: &Element) -> Result<Option<bool>> {
        Ok(match self.class_of(e)? {
            ClassOf::NotACycle => Some(false),
            ClassOf::Undecided => None,
            ClassOf::Class(c) => Some(c.values().flatten().all(Zero::is_zero)),
        })
    }
}

/// Compute `H(A, d)` slice by slice on the window. Weights are inferred when
/// not given.
pub fn cohomology(
    d: &Operator,
    weights: Option<Vec<u32>>,
    window: Window,
) -> Result<CohomologyBasis> {
    let table = d.table().clone();
    let sq = d.compose(d)?;
    if !sq.is_zero() {
        return Err(Error::Hypothesis(format!("d² = {sq} is not zero")));
    }
    let weights = match weights {
        Some(w) => {
            let shift = weight_shift(d, &w)?;
            Weights { weights: w, shift }
        }
        None => infer_weights(d)?,
    };
    if let Some(i) = (0..table.len()).find(|&i| !table.is_odd(i) && weights.weights[i] == 0) {
        return Err(Error::domain(format!(
            "even generator {} needs a positive weight",
            table.name(i)
        )));
    }
    let w = &weights.weights;
    let mut grouped: BTreeMap<SliceKey, Vec<Monomial>> = BTreeMap::new();
    for m in window_monomials(&table, w, window.max_weight) {
        grouped
            .entry((m.degree(&table), monomial_weight(&m, w)))
            .or_default()
            .push(m);
    }
    for basis in grouped.values_mut() {
        basis.sort();
    }

    let mut slices = BTreeMap::new();
    for (&(degree, weight), basis) in &grouped {
        let index: BTreeMap<&Monomial, usize> =
            basis.iter().enumerate().map(|(i, m)| (m, i)).collect();

        let images: Vec<Element> = basis
            .iter()
            .map(|m| d.apply(&Element::monomial(&table, m.clone(), Scalar::one())))
            .collect::<Result<_>>()?;
        let targets: Vec<Monomial> = images
            .iter()
            .flat_map(|e| e.terms().map(|(m, _)| m.clone()))
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let columns: Vec<Vec<Scalar>> = images
            .iter()
            .map(|e| targets.iter().map(|m| e.coeff(m)).collect())
            .collect();
        let cycles = Matrix::from_columns(targets.len(), &columns).nullspace();

        let source_weight = weight as i64 - weights.shift;
        let truncated = source_weight > window.max_weight as i64;
        let mut boundary_rows = Vec::new();
        if source_weight >= 0 {
            let source = grouped
                .get(&(degree - Degree(1), source_weight as u32))
                .map(Vec::as_slice)
                .unwrap_or(&[]);
            for s in source {
                let image = d.apply(&Element::monomial(&table, s.clone(), Scalar::one()))?;
                let mut row = vec![Scalar::zero(); basis.len()];
                for (m, c) in image.terms() {
                    let i = index
                        .get(m)
                        .ok_or_else(|| Error::Construction(format!("d({s:?}) leaves its slice")))?;
                    row[*i] = c.clone();
                }
                boundary_rows.push(row);
            }
        }
        let mut echelon = Matrix::from_rows(basis.len(), boundary_rows);
        let mut pivots = echelon.rref();
        let boundaries = pivots.len();
        let boundary_rows: Vec<Vec<Scalar>> =
            (0..boundaries).map(|r| echelon.row(r).to_vec()).collect();

        let mut representatives = Vec::new();
        for z in &cycles {
            let reduced = reduce_against(&echelon, &pivots, z);
            if reduced.iter().all(Zero::is_zero) {
                continue;
            }
            representatives.push(to_element(&table, basis, &reduced));
            let mut rows: Vec<Vec<Scalar>> =
                (0..pivots.len()).map(|r| echelon.row(r).to_vec()).collect();
            rows.push(reduced);
            echelon = Matrix::from_rows(basis.len(), rows);
            pivots = echelon.rref();
        }

        slices.insert(
            (degree, weight),
            Slice {
                degree,
                weight,
                basis: basis.clone(),
                cycles: cycles.len(),
                boundaries,
                representatives,
                truncated,
                boundary_rows,
            },
        );
    }
    Ok(CohomologyBasis {
        table,
        d: d.clone(),
        weights,
        window,
        slices,
    })
}

/// Product and `D_2`-bracket on representatives, read modulo boundaries.
pub struct ClassOperations<'a> {
    pub cohomology: &'a CohomologyBasis,
    pub d2: &'a Operator,
}

impl GerstenhaberOps for ClassOperations<'_> {
    fn table(&self) -> &Arc<GeneratorTable> {
        &self.cohomology.table
    }

    fn bracket(&self, a: &Element, b: &Element) -> Result<Element> {
        bracket_bilinear(self.d2, a, b)
    }

    fn product(&self, a: &Element, b: &Element) -> Result<Element> {
        a.multiply(b)
    }

    fn vanishes(&self, a: &Element) -> Result<Option<bool>> {
        self.cohomology.is_boundary(a)
    }
}

/// `D_2` applied to one representative.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedImage {
    pub source: Element,
    pub image: Element,
    pub class: ClassOf,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedBv {
    /// The degree −1 component of `D`.
    pub d2: Operator,
    pub cohomology: CohomologyBasis,
    pub images: Vec<InducedImage>,
    pub report: Report,
}

fn boundary_outcome(h: &CohomologyBasis, e: Element) -> Result<Outcome> {
    if e.is_zero() {
        return Ok(Outcome::Holds);
    }
    Ok(match h.is_boundary(&e)? {
        Some(true) => Outcome::Holds,
        Some(false) => Outcome::Fails(e),
        None => Outcome::Undecided,
    })
}

/// The BV structure `D_2` induces on `H(A, d)`, verified on the window.
pub fn induced_bv(
    d: &Operator,
    big_d: &Operator,
    weights: Option<Vec<u32>>,
    window: Window,
    budget: &Budget,
) -> Result<InducedBv> {
    let mut report = check_bvinfty(d, big_d, budget)?.scoped("bvinfty");
    let d2 = big_d
        .degree_components()
        .remove(&Degree(-1))
        .unwrap_or_else(|| Operator::zero(d.table()));
    let h = cohomology(d, weights, window)?;

    report.push(Check::exact("anticommutes-with-d", &d.anticommutator(&d2)?));

    let reps = h.representatives();
    report.push(sweep("cycles-to-cycles", &reps, 1, budget, |t| {
        Ok(Outcome::zero(d.apply(&d2.apply(&t[0])?)?))
    })?);

    let boundaries: Vec<Element> =
        window_monomials(&h.table, &h.weights.weights, window.max_weight)
            .into_iter()
            .map(|m| d.apply(&Element::monomial(&h.table, m, Scalar::one())))
            .collect::<Result<Vec<_>>>()?
            .into_iter()
            .filter(|b| !b.is_zero())
            .collect();
    report.push(sweep("well-defined", &boundaries, 1, budget, |t| {
        boundary_outcome(&h, d2.apply(&t[0])?)
    })?);

    report.push(sweep("square-zero-on-classes", &reps, 1, budget, |t| {
        boundary_outcome(&h, d2.apply(&d2.apply(&t[0])?)?)
    })?);

    report.push(sweep("order-2-on-classes", &reps, 3, budget, |t| {
        boundary_outcome(&h, bracket_by_parts(&d2, t))
    })?);

    let shifted: BTreeMap<SliceKey, Element> = h
        .slices
        .iter()
        .filter_map(|(k, s)| {
            s.boundary_basis(&h.table)
                .into_iter()
                .next()
                .map(|b| (*k, b))
        })
        .collect();
    report.push(sweep(
        "order-2-other-representatives",
        &reps,
        3,
        budget,
        |t| {
            let moved: Vec<Element> = t
                .iter()
                .map(|r| {
                    let key = h.pieces(r).into_keys().next();
                    match key.and_then(|k| shifted.get(&k)) {
                        Some(b) => r + b,
                        None => r.clone(),
                    }
                })
                .collect();
            boundary_outcome(&h, bracket_by_parts(&d2, &moved))
        },
    )?);

    let search = find_witness(&reps, 2, budget, |t| {
        let v = bracket_by_parts(&d2, t);
        Ok((h.is_boundary(&v)? == Some(false)).then_some(v))
    })?;
    let sharp = search.check("order-2-sharp-on-classes");
    report.push(match search.found {
        Some(_) => sharp,
        None => sharp.with_note("vacuous: the induced bracket vanishes on every tested pair"),
    });

    let ops = ClassOperations {
        cohomology: &h,
        d2: &d2,
    };
    report
        .extend(check_gerstenhaber(&ops, &reps, Grading::SHIFTED, budget)?.scoped("gerstenhaber"));

    let mut images = Vec::new();
    for r in reps {
        let image = d2.apply(&r)?;
        let class = h.class_of(&image)?;
        images.push(InducedImage {
            source: r,
            image,
            class,
        });
    }
    if !h.truncated().is_empty() {
        report.push(
            Check::new("window", Verdict::Untested)
                .with_note(format!("truncated slices {:?}", h.truncated())),
        );
    }
    Ok(InducedBv {
        d2,
        cohomology: h,
        images,
        report,
    })
}
