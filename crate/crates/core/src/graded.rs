//! Scalars, degrees, parities, signs and the permutation machinery shared by
//! every other module.
//!
//! All sign conventions in the crate reduce to two primitives defined here:
//!
//! * [`koszul_sign`]: the sign picked up by reordering homogeneous elements
//!   with the rule `v w = (-1)^{|v||w|} w v`;
//! * [`graded_sign`]: the exterior (antisymmetric) variant, where every
//!   transposition contributes `-(-1)^{|v||w|}`.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub};

use num_rational::BigRational;
use num_traits::One;

use crate::error::{Error, Result};

/// Exact rational coefficient.
pub type Scalar = BigRational;

pub fn scalar(n: i64) -> Scalar {
    BigRational::from_integer(n.into())
}

pub fn ratio(num: i64, den: i64) -> Scalar {
    BigRational::new(num.into(), den.into())
}

/// Integer degree of a homogeneous element or operator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Degree(pub i64);

impl Degree {
    pub const ZERO: Degree = Degree(0);

    pub fn parity(self) -> Parity {
        if self.0.rem_euclid(2) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self.parity() == Parity::Odd
    }
}

impl fmt::Display for Degree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for Degree {
    type Output = Degree;
    fn add(self, rhs: Degree) -> Degree {
        Degree(self.0 + rhs.0)
    }
}

impl AddAssign for Degree {
    fn add_assign(&mut self, rhs: Degree) {
        self.0 += rhs.0;
    }
}

impl Sub for Degree {
    type Output = Degree;
    fn sub(self, rhs: Degree) -> Degree {
        Degree(self.0 - rhs.0)
    }
}

impl Neg for Degree {
    type Output = Degree;
    fn neg(self) -> Degree {
        Degree(-self.0)
    }
}

impl Mul<i64> for Degree {
    type Output = Degree;
    fn mul(self, rhs: i64) -> Degree {
        Degree(self.0 * rhs)
    }
}

impl std::iter::Sum for Degree {
    fn sum<I: Iterator<Item = Degree>>(iter: I) -> Degree {
        iter.fold(Degree::ZERO, |a, b| a + b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// `0` or `1` as a degree.
    pub fn as_degree(self) -> Degree {
        Degree(self.bit() as i64)
    }

    fn bit(self) -> u8 {
        match self {
            Parity::Even => 0,
            Parity::Odd => 1,
        }
    }
}

impl Add for Parity {
    type Output = Parity;
    fn add(self, rhs: Parity) -> Parity {
        if (self.bit() ^ rhs.bit()) == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl Mul for Parity {
    type Output = Parity;
    fn mul(self, rhs: Parity) -> Parity {
        if (self.bit() & rhs.bit()) == 1 {
            Parity::Odd
        } else {
            Parity::Even
        }
    }
}

/// A sign `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    /// `(-1)^p`.
    pub fn from_parity(p: Parity) -> Sign {
        match p {
            Parity::Even => Sign::Plus,
            Parity::Odd => Sign::Minus,
        }
    }

    /// `(-1)^n`.
    pub fn pow(n: i64) -> Sign {
        Degree(n).parity().into()
    }

    /// `(-1)^{ab}` for degrees `a`, `b`.
    pub fn koszul(a: Degree, b: Degree) -> Sign {
        Sign::from_parity(a.parity() * b.parity())
    }

    pub fn to_scalar(self) -> Scalar {
        match self {
            Sign::Plus => Scalar::one(),
            Sign::Minus => -Scalar::one(),
        }
    }

    pub fn to_i64(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    /// Multiply a scalar in place by this sign.
    pub fn apply(self, s: Scalar) -> Scalar {
        match self {
            Sign::Plus => s,
            Sign::Minus => -s,
        }
    }
}

impl From<Parity> for Sign {
    fn from(p: Parity) -> Sign {
        Sign::from_parity(p)
    }
}

impl Neg for Sign {
    type Output = Sign;
    fn neg(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

impl Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl MulAssign for Sign {
    fn mul_assign(&mut self, rhs: Sign) {
        *self = *self * rhs;
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Sign::Plus => "+1",
            Sign::Minus => "-1",
        })
    }
}

/// An unshuffle of type `(k, n-k)`: a permutation increasing on the first
/// `k` and on the last `n-k` positions.
///
/// Stored 0-based: `perm[i]` is the index of the element placed at position
/// `i`. [`fmt::Display`] prints the 1-based form.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Unshuffle {
    perm: Vec<usize>,
    split: usize,
}

impl Unshuffle {
    pub fn new(perm: Vec<usize>, split: usize) -> Result<Self> {
        let n = perm.len();
        if split > n {
            return Err(Error::domain(format!(
                "split point {split} exceeds length {n}"
            )));
        }
        if !is_permutation(&perm) {
            return Err(Error::domain(format!("{perm:?} is not a permutation")));
        }
        let ok = (0..n.saturating_sub(1))
            .filter(|&i| i + 1 != split)
            .all(|i| perm[i] < perm[i + 1]);
        if !ok {
            return Err(Error::domain(format!(
                "{perm:?} is not an unshuffle with split point {split}"
            )));
        }
        Ok(Unshuffle { perm, split })
    }

    pub fn perm(&self) -> &[usize] {
        &self.perm
    }

    pub fn split(&self) -> usize {
        self.split
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    /// Indices selected into the first block.
    pub fn left(&self) -> &[usize] {
        &self.perm[..self.split]
    }

    pub fn right(&self) -> &[usize] {
        &self.perm[self.split..]
    }
}

impl fmt::Display for Unshuffle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.perm.iter().enumerate() {
            if i == self.split && i != 0 {
                write!(f, " |")?;
            }
            if i != 0 {
                write!(f, " ")?;
            }
            write!(f, "{}", p + 1)?;
        }
        write!(f, ")")
    }
}

pub fn is_permutation(perm: &[usize]) -> bool {
    let mut seen = vec![false; perm.len()];
    for &p in perm {
        if p >= perm.len() || seen[p] {
            return false;
        }
        seen[p] = true;
    }
    true
}

/// All unshuffles of type `(k, n-k)` in lexicographic order of the
/// permutation sequence. Requires `1 <= k <= n`.
pub fn unshuffles(k: usize, n: usize) -> Result<Vec<Unshuffle>> {
    if k < 1 || k > n {
        return Err(Error::domain(format!(
            "unshuffles need 1 <= k <= n, got k = {k}, n = {n}"
        )));
    }
    Ok(unshuffles_unchecked(k, n))
}

/// Like [`unshuffles`] but also accepts `k = 0`.
pub(crate) fn unshuffles_unchecked(k: usize, n: usize) -> Vec<Unshuffle> {
    let mut out = Vec::with_capacity(binomial(n, k));
    let mut chosen: Vec<usize> = (0..k).collect();
    loop {
        let mut perm = chosen.clone();
        perm.extend((0..n).filter(|i| !chosen.contains(i)));
        out.push(Unshuffle { perm, split: k });

        // next k-subset in lexicographic order
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if chosen[i] < n - k + i {
                chosen[i] += 1;
                for j in i + 1..k {
                    chosen[j] = chosen[j - 1] + 1;
                }
                break;
            }
        }
    }
}

pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1usize, |acc, i| acc * (n - i) / (i + 1))
}

fn check_lengths(degrees: &[Degree], perm: &[usize]) -> Result<()> {
    if degrees.len() != perm.len() {
        return Err(Error::domain(format!(
            "{} degrees for a permutation of length {}",
            degrees.len(),
            perm.len()
        )));
    }
    if !is_permutation(perm) {
        return Err(Error::domain(format!("{perm:?} is not a permutation")));
    }
    Ok(())
}

/// Sign `(-1)^σ ε(σ)` defined by
/// `v_1 ∧ … ∧ v_n = (-1)^σ ε(σ) v_{σ(1)} ∧ … ∧ v_{σ(n)}`:
/// the product over inversions of `-(-1)^{|v_i||v_j|}`.
///
/// `perm` may be any permutation; `degrees[i]` is the degree of `v_i`.
pub fn graded_sign(degrees: &[Degree], perm: &[usize]) -> Result<Sign> {
    check_lengths(degrees, perm)?;
    Ok(inversion_sign(degrees, perm, true))
}

/// Pure Koszul sign `ε(σ)`: the product over inversions of `(-1)^{|v_i||v_j|}`.
pub fn koszul_sign(degrees: &[Degree], perm: &[usize]) -> Result<Sign> {
    check_lengths(degrees, perm)?;
    Ok(inversion_sign(degrees, perm, false))
}

pub(crate) fn inversion_sign(degrees: &[Degree], perm: &[usize], exterior: bool) -> Sign {
    let mut sign = Sign::Plus;
    for p in 0..perm.len() {
        for q in p + 1..perm.len() {
            if perm[p] > perm[q] {
                sign *= Sign::koszul(degrees[perm[p]], degrees[perm[q]]);
                if exterior {
                    sign = -sign;
                }
            }
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent accumulator: bubble-sort the target arrangement back to
    /// the identity, one adjacent transposition at a time.
    fn bubble_sign(degrees: &[Degree], perm: &[usize], exterior: bool) -> Sign {
        let mut arr = perm.to_vec();
        let mut sign = Sign::Plus;
        let mut swapped = true;
        while swapped {
            swapped = false;
            for i in 0..arr.len().saturating_sub(1) {
                if arr[i] > arr[i + 1] {
                    let s = Sign::koszul(degrees[arr[i]], degrees[arr[i + 1]]);
                    sign *= if exterior { -s } else { s };
                    arr.swap(i, i + 1);
                    swapped = true;
                }
            }
        }
        sign
    }

    fn all_perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = vec![];
        for p in all_perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    fn is_unshuffle(p: &[usize], k: usize) -> bool {
        (0..p.len().saturating_sub(1))
            .filter(|&i| i + 1 != k)
            .all(|i| p[i] < p[i + 1])
    }

    #[test]
    fn unshuffles_small_cases() {
        let u = unshuffles(1, 1).unwrap();
        assert_eq!(u.len(), 1);
        assert_eq!(u[0].perm(), &[0]);

        let u = unshuffles(1, 2).unwrap();
        let perms: Vec<_> = u.iter().map(|s| s.perm().to_vec()).collect();
        assert_eq!(perms, vec![vec![0, 1], vec![1, 0]]);
    }

    #[test]
    fn unshuffles_match_brute_force_filter() {
        for n in 1..=6 {
            for k in 1..=n {
                let mut brute: Vec<Vec<usize>> = all_perms(n)
                    .into_iter()
                    .filter(|p| is_unshuffle(p, k))
                    .collect();
                brute.sort();
                let got: Vec<Vec<usize>> = unshuffles(k, n)
                    .unwrap()
                    .iter()
                    .map(|s| s.perm().to_vec())
                    .collect();
                assert_eq!(got, brute, "k = {k}, n = {n}");
            }
        }
        assert_eq!(unshuffles(2, 4).unwrap().len(), 6);
    }

    #[test]
    fn unshuffle_counts_sum_to_two_pow_n_minus_two() {
        for n in 2..=8 {
            let total: usize = (1..n).map(|k| unshuffles(k, n).unwrap().len()).sum();
            assert_eq!(total, (1 << n) - 2);
        }
    }

    #[test]
    fn unshuffles_domain_errors() {
        assert!(unshuffles(0, 3).is_err());
        assert!(unshuffles(4, 3).is_err());
    }

    #[test]
    fn unshuffle_constructor_validates() {
        assert!(Unshuffle::new(vec![1, 0, 2], 1).is_ok());
        assert!(Unshuffle::new(vec![2, 0, 1], 2).is_err());
        assert!(Unshuffle::new(vec![0, 0], 1).is_err());
    }

    #[test]
    fn graded_sign_examples() {
        let d = |v: &[i64]| v.iter().map(|&x| Degree(x)).collect::<Vec<_>>();
        assert_eq!(graded_sign(&d(&[3, 1, 0]), &[0, 1, 2]).unwrap(), Sign::Plus);
        assert_eq!(graded_sign(&d(&[0, 2]), &[1, 0]).unwrap(), Sign::Minus);
        assert_eq!(graded_sign(&d(&[1, 1]), &[1, 0]).unwrap(), Sign::Plus);
        assert!(graded_sign(&d(&[1, 1, 1]), &[1, 0]).is_err());
    }

    #[test]
    fn display_is_one_based() {
        let u = Unshuffle::new(vec![1, 0, 2], 1).unwrap();
        assert_eq!(u.to_string(), "(2 | 1 3)");
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn degrees_and_perm() -> impl Strategy<Value = (Vec<Degree>, Vec<usize>)> {
            (1usize..=6).prop_flat_map(|n| {
                (
                    proptest::collection::vec((-3i64..=3).prop_map(Degree), n),
                    Just((0..n).collect::<Vec<_>>()).prop_shuffle(),
                )
            })
        }

        proptest! {
            #[test]
            fn inversion_formula_matches_bubble_sort((deg, perm) in degrees_and_perm()) {
                prop_assert_eq!(graded_sign(&deg, &perm).unwrap(), bubble_sign(&deg, &perm, true));
                prop_assert_eq!(koszul_sign(&deg, &perm).unwrap(), bubble_sign(&deg, &perm, false));
            }

            #[test]
            fn graded_sign_is_multiplicative(
                (deg, sigma) in degrees_and_perm(),
                seed in any::<u64>(),
            ) {
                let n = deg.len();
                let mut tau: Vec<usize> = (0..n).collect();
                // cheap deterministic shuffle from the seed
                let mut s = seed;
                for i in (1..n).rev() {
                    s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                    tau.swap(i, (s >> 33) as usize % (i + 1));
                }
                let permuted: Vec<Degree> = sigma.iter().map(|&i| deg[i]).collect();
                let composite: Vec<usize> = tau.iter().map(|&t| sigma[t]).collect();
                let lhs = graded_sign(&deg, &composite).unwrap();
                let rhs = graded_sign(&deg, &sigma).unwrap() * graded_sign(&permuted, &tau).unwrap();
                prop_assert_eq!(lhs, rhs);
            }
        }
    }
}
