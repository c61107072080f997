//! Higher brackets `F_D^n` in Akman's recursive form and Koszul's product
//! form, the order certificate, and the BV bracket.
//!
//! Signs read only parities, so `D` has to be parity-homogeneous (an odd
//! `D = d + Δ` is fine). Public entry points require degree-homogeneous
//! arguments.

use crate::algebra::Element;
use crate::diffop::{Operator, StructuralOrder};
use crate::error::{Error, Result};
use crate::graded::{inversion_sign, unshuffles_unchecked, Degree, Parity, Sign};
use crate::sampling::{select_tuples, Budget};

pub(crate) fn parity_or_even(e: &Element) -> Parity {
    e.parity().unwrap_or(Parity::Even)
}

/// Parity of `D`, or an error if it mixes parities. The zero operator is even.
pub fn operator_parity(d: &Operator) -> Result<Parity> {
    if d.is_zero() {
        return Ok(Parity::Even);
    }
    d.parity().ok_or_else(|| {
        Error::domain("operator mixes even and odd components; split it by parity first")
    })
}

fn check_args(d: &Operator, args: &[Element]) -> Result<Parity> {
    if args.is_empty() {
        return Err(Error::domain("brackets need at least one argument"));
    }
    for (i, a) in args.iter().enumerate() {
        if !a.same_table(d.table()) {
            return Err(Error::TableMismatch);
        }
        if !a.is_zero() && !a.is_homogeneous() {
            return Err(Error::domain(format!(
                "argument {} is not homogeneous; decompose it with grade_decompose first",
                i + 1
            )));
        }
    }
    operator_parity(d)
}

/// `F_D^n(a_1, …, a_n)` by Akman's recursion.
pub fn akman_bracket(d: &Operator, args: &[Element]) -> Result<Element> {
    let dp = check_args(d, args)?;
    Ok(akman(d, dp, args))
}

/// `F_D^n(a_1, …, a_n)` by Koszul's product formula
/// `M (D ⊗ 1)(a_1 ⊗ 1 - 1 ⊗ a_1) ⋯ (a_n ⊗ 1 - 1 ⊗ a_n)` with the `D(1)` term
/// dropped.
pub fn koszul_bracket(d: &Operator, args: &[Element]) -> Result<Element> {
    check_args(d, args)?;
    Ok(koszul(d, args))
}

/// `[a, b] = (-1)^{|a|} F_δ^2(a, b)`.
pub fn bv_bracket(delta: &Operator, a: &Element, b: &Element) -> Result<Element> {
    let f = akman_bracket(delta, &[a.clone(), b.clone()])?;
    Ok(f.signed(Sign::from_parity(parity_or_even(a))))
}

/// Akman recursion on parity-homogeneous arguments.
pub(crate) fn akman(d: &Operator, dp: Parity, args: &[Element]) -> Element {
    let n = args.len();
    if n == 1 {
        return d.apply(&args[0]).expect("same table");
    }
    let (head, last) = args.split_at(n - 1);
    let last = &last[0];
    let m = head.len();
    let an = &head[m - 1];

    let mut merged = head.to_vec();
    merged[m - 1] = an * last;
    let t1 = akman(d, dp, &merged);

    let t2 = &akman(d, dp, head) * last;

    let mut skipped = head[..m - 1].to_vec();
    skipped.push(last.clone());
    let before = head[..m - 1].iter().fold(dp, |p, a| p + parity_or_even(a));
    let sign = Sign::from_parity(parity_or_even(an) * before);
    let t3 = (an * &akman(d, dp, &skipped)).signed(sign);

    &(&t1 - &t2) - &t3
}

fn product(args: &[Element], idx: &[usize]) -> Element {
    let mut out = Element::one(args[0].table());
    for &i in idx {
        out = &out * &args[i];
    }
    out
}

/// Product formula on parity-homogeneous arguments.
pub(crate) fn koszul(d: &Operator, args: &[Element]) -> Element {
    let n = args.len();
    let degrees: Vec<Degree> = args.iter().map(|a| parity_or_even(a).as_degree()).collect();
    let mut out = Element::zero(d.table());
    for k in 1..=n {
        for sigma in unshuffles_unchecked(k, n) {
            let sign = inversion_sign(&degrees, sigma.perm(), false) * Sign::pow((n - k) as i64);
            let left = d.apply(&product(args, sigma.left())).expect("same table");
            if left.is_zero() {
                continue;
            }
            let term = &left * &product(args, sigma.right());
            out += &term.signed(sign);
        }
    }
    out
}

/// `F_D^n` summed over the parity components of `D`.
pub(crate) fn bracket_by_parts(d: &Operator, args: &[Element]) -> Element {
    let mut out = Element::zero(d.table());
    for (p, part) in d.parity_components() {
        out += &akman(&part, p, args);
    }
    out
}

/// Evidence for "`D` has order exactly `k`" in the sense of Akman.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCertificate {
    pub claimed: u32,
    pub structural: StructuralOrder,
    /// Tuples of arity `k + 1` evaluated.
    pub tested: usize,
    pub population: u128,
    pub exhaustive: bool,
    /// Every tested `F_D^{k+1}` vanished.
    pub bound_holds: bool,
    /// A tuple with `F_D^{k+1} ≠ 0`.
    pub failure: Option<Vec<Element>>,
    /// A tuple with `F_D^k ≠ 0` was found (vacuous for `k = 0`).
    pub sharp: bool,
    pub sharpness_witness: Option<Vec<Element>>,
    pub budget: Budget,
}

impl OrderCertificate {
    /// Order is at most `k` on the tested tuples and not at most `k - 1`.
    pub fn passed(&self) -> bool {
        self.bound_holds && self.sharp
    }
}

/// Test `F_D^{k+1} ≡ 0` on monomial tuples within the budget and look for a
/// nonzero `F_D^k`. A `D` with mixed parity is handled componentwise.
pub fn akman_order_check(d: &Operator, k: u32, budget: &Budget) -> OrderCertificate {
    let pool = budget.pool(d.table());
    let arity = k as usize + 1;
    let sample = select_tuples(pool.len(), arity, budget.max_tuples, budget.seed);
    let pick = |t: &[usize]| -> Vec<Element> { t.iter().map(|&i| pool[i].clone()).collect() };

    let failure = sample
        .tuples
        .iter()
        .map(|t| pick(t))
        .find(|args| !bracket_by_parts(d, args).is_zero());

    let (sharp, sharpness_witness) = if k == 0 {
        (true, None)
    } else {
        let below = select_tuples(pool.len(), k as usize, budget.max_tuples, budget.seed);
        let w = below
            .tuples
            .iter()
            .map(|t| pick(t))
            .find(|args| !bracket_by_parts(d, args).is_zero());
        (w.is_some(), w)
    };

    OrderCertificate {
        claimed: k,
        structural: d.structural_order(),
        tested: sample.tuples.len(),
        population: sample.population,
        exhaustive: sample.exhaustive,
        bound_holds: failure.is_none(),
        failure,
        sharp,
        sharpness_witness,
        budget: *budget,
    }
}

/// Smallest `k ≤ max_k` with `F_D^{k+1}` vanishing on the budget, if any.
pub fn akman_order(d: &Operator, max_k: u32, budget: &Budget) -> Option<u32> {
    (0..=max_k).find(|&k| {
        let pool = budget.pool(d.table());
        let sample = select_tuples(pool.len(), k as usize + 1, budget.max_tuples, budget.seed);
        sample.tuples.iter().all(|t| {
            let args: Vec<Element> = t.iter().map(|&i| pool[i].clone()).collect();
            bracket_by_parts(d, &args).is_zero()
        })
    })
}
