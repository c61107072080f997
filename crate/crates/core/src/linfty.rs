//! The exterior coalgebra on the suspension `sA`, coderivations built from
//! the brackets, and the relation family equivalent to `Q² = 0`.
//!
//! A letter `a` of a word has shifted degree `|a| + 1`; swapping adjacent
//! letters `v, w` costs `-(-1)^{|v|_s |w|_s}`. The brackets `F_D^k` are
//! graded symmetric in the unshifted degrees, so the coderivation uses the
//! décalage `ℓ_k(a_1, …, a_k) = (-1)^{Σ_i (k-i)(|a_i|+1)} F_D^k(a_1, …, a_k)`,
//! which is antisymmetric in the sense of `Λ(sA)`. With it the relation family
//!
//! `Σ_k (-1)^{k(n-k)} Σ_{σ ∈ Sh(k,n-k)} (-1)^σ ε(σ) ℓ_{n-k+1}(ℓ_k(a_σ(1..k)), a_σ(k+1..n)) = 0`
//!
//! holds exactly when `D² = 0`. `ℓ_1 = D` and `ℓ_2(a, b) = -[a, b]`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::{Element, GeneratorTable, Monomial};
use crate::brackets::{akman, operator_parity, parity_or_even};
use crate::diffop::Operator;
use crate::error::{Error, Result};
use crate::graded::{inversion_sign, unshuffles_unchecked, Degree, Parity, Scalar, Sign};
use crate::sampling::{select_tuples, Budget};

/// Degree offset of the suspension.
pub const SHIFT: i64 = 1;

/// A nonempty wedge word `a_1 ∧ … ∧ a_n` in `Λ(sA)` with homogeneous letters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Word {
    letters: Vec<Element>,
}

impl Word {
    pub fn new(letters: Vec<Element>) -> Result<Self> {
        let Some(first) = letters.first() else {
            return Err(Error::domain("the empty word is not allowed"));
        };
        for (i, a) in letters.iter().enumerate() {
            if !a.same_table(first.table()) {
                return Err(Error::TableMismatch);
            }
            if a.is_zero() || !a.is_homogeneous() {
                return Err(Error::domain(format!(
                    "letter {} must be a nonzero homogeneous element",
                    i + 1
                )));
            }
        }
        Ok(Word { letters })
    }

    pub fn from_monomials(table: &Arc<GeneratorTable>, ms: &[Monomial]) -> Result<Self> {
        Word::new(
            ms.iter()
                .map(|m| Element::monomial(table, m.clone(), Scalar::one()))
                .collect(),
        )
    }

    pub fn letters(&self) -> &[Element] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        self.letters[0].table()
    }

    pub fn shifted_degrees(&self) -> Vec<Degree> {
        self.letters
            .iter()
            .map(|a| a.degree().unwrap() + Degree(SHIFT))
            .collect()
    }

    /// Total shifted degree.
    pub fn degree(&self) -> Degree {
        self.shifted_degrees().into_iter().sum()
    }

    fn pick(&self, idx: &[usize]) -> Vec<Element> {
        idx.iter().map(|&i| self.letters[i].clone()).collect()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.letters.iter().enumerate() {
            if i > 0 {
                f.write_str(" ∧ ")?;
            }
            write!(f, "({a})")?;
        }
        Ok(())
    }
}

/// Put monomial letters into increasing order, returning the sign, or `None`
/// if the word vanishes (a repeated letter of even shifted degree).
pub(crate) fn canonicalize(
    table: &GeneratorTable,
    letters: &[Monomial],
) -> Option<(Vec<Monomial>, Sign)> {
    let mut perm: Vec<usize> = (0..letters.len()).collect();
    perm.sort_by(|&i, &j| letters[i].cmp(&letters[j]));
    let degrees: Vec<Degree> = letters
        .iter()
        .map(|m| m.degree(table) + Degree(SHIFT))
        .collect();
    let sorted: Vec<Monomial> = perm.iter().map(|&i| letters[i].clone()).collect();
    for w in sorted.windows(2) {
        if w[0] == w[1] && !(w[0].degree(table) + Degree(SHIFT)).is_odd() {
            return None;
        }
    }
    Some((sorted, inversion_sign(&degrees, &perm, true)))
}

/// A finite linear combination of words with monomial letters, in
/// canonical order.
#[derive(Clone, PartialEq, Eq)]
pub struct WordSum {
    table: Arc<GeneratorTable>,
    terms: BTreeMap<Vec<Monomial>, Scalar>,
}

impl WordSum {
    pub fn zero(table: &Arc<GeneratorTable>) -> Self {
        WordSum {
            table: table.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn from_word(w: &Word) -> Self {
        let mut s = WordSum::zero(w.table());
        s.add_letters(w.letters(), &Scalar::one());
        s
    }

    pub fn table(&self) -> &Arc<GeneratorTable> {
        &self.table
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&[Monomial], &Scalar)> {
        self.terms.iter().map(|(k, v)| (k.as_slice(), v))
    }

    pub fn coeff(&self, letters: &[Monomial]) -> Scalar {
        match canonicalize(&self.table, letters) {
            Some((key, s)) => s.apply(self.terms.get(&key).cloned().unwrap_or_else(Scalar::zero)),
            None => Scalar::zero(),
        }
    }

    fn add_canonical(&mut self, key: Vec<Monomial>, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    /// Add `c · a_1 ∧ … ∧ a_n`, expanding each letter into monomials.
    pub fn add_letters(&mut self, letters: &[Element], c: &Scalar) {
        let mut partial: Vec<(Vec<Monomial>, Scalar)> = vec![(Vec::new(), c.clone())];
        for a in letters {
            let mut next = Vec::new();
            for (ms, k) in &partial {
                for (m, ac) in a.terms() {
                    let mut v = ms.clone();
                    v.push(m.clone());
                    next.push((v, k * ac));
                }
            }
            partial = next;
        }
        for (ms, k) in partial {
            if let Some((key, s)) = canonicalize(&self.table, &ms) {
                self.add_canonical(key, s.apply(k));
            }
        }
    }

    pub fn add(&mut self, other: &WordSum) {
        for (k, v) in &other.terms {
            self.add_canonical(k.clone(), v.clone());
        }
    }

    pub fn scale(&self, c: &Scalar) -> WordSum {
        let mut out = WordSum::zero(&self.table);
        for (k, v) in &self.terms {
            out.add_canonical(k.clone(), v * c);
        }
        out
    }

    /// The words of length one, as an element of `A`.
    pub fn letters_part(&self) -> Element {
        let mut out = Element::zero(&self.table);
        for (k, v) in &self.terms {
            if k.len() == 1 {
                out += &Element::monomial(&self.table, k[0].clone(), v.clone());
            }
        }
        out
    }
}

impl fmt::Debug for WordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "WordSum({self})")
    }
}

impl fmt::Display for WordSum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (k, v)) in self.terms.iter().enumerate() {
            if i > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "{v}*")?;
            for (j, m) in k.iter().enumerate() {
                if j > 0 {
                    f.write_str("∧")?;
                }
                write!(
                    f,
                    "({})",
                    Element::monomial(&self.table, m.clone(), Scalar::one())
                )?;
            }
        }
        Ok(())
    }
}

/// `Δ(a_1 ∧ … ∧ a_n)` as `(left, right, sign)` triples: all unshuffles of
/// type `(k, n-k)` with `1 ≤ k ≤ n-1`, signed in shifted degrees.
pub fn coproduct(w: &Word) -> Vec<(Word, Word, Sign)> {
    let n = w.len();
    let degrees = w.shifted_degrees();
    let mut out = Vec::new();
    for k in 1..n {
        for sigma in unshuffles_unchecked(k, n) {
            let sign = inversion_sign(&degrees, sigma.perm(), true);
            let left = Word {
                letters: w.pick(sigma.left()),
            };
            let right = Word {
                letters: w.pick(sigma.right()),
            };
            out.push((left, right, sign));
        }
    }
    out
}

/// `(-1)^{Σ_i (k-i)(|a_i|+1)}`, the décalage sign for `ℓ_k`.
pub fn decalage_sign(parities: &[Parity]) -> Sign {
    let k = parities.len();
    let odd = parities
        .iter()
        .enumerate()
        .filter(|(i, p)| (k - 1 - i) % 2 == 1 && !p.is_odd())
        .count();
    Sign::pow(odd as i64)
}

/// `ℓ_k` on parity-homogeneous letters; `dp` is the parity of `D`.
fn ell(d: &Operator, dp: Parity, letters: &[Element]) -> Element {
    if letters.iter().any(Element::is_zero) {
        return Element::zero(d.table());
    }
    let parities: Vec<Parity> = letters.iter().map(parity_or_even).collect();
    akman(d, dp, letters).signed(decalage_sign(&parities))
}

/// The décalaged bracket `ℓ_k(a_1, …, a_k)` on homogeneous elements.
pub fn linfty_bracket(d: &Operator, args: &[Element]) -> Result<Element> {
    check_letters(args)?;
    let dp = operator_parity(d)?;
    Ok(ell(d, dp, args))
}

fn check_letters(args: &[Element]) -> Result<()> {
    if args.is_empty() {
        return Err(Error::domain("at least one argument is required"));
    }
    for (i, a) in args.iter().enumerate() {
        if !a.is_zero() && !a.is_homogeneous() {
            return Err(Error::domain(format!(
                "argument {} is not homogeneous; decompose it with grade_decompose first",
                i + 1
            )));
        }
    }
    Ok(())
}

/// Split an element by parity; zero parts are dropped.
pub(crate) fn parity_parts(a: &Element) -> Vec<Element> {
    let mut even = Element::zero(a.table());
    let mut odd = Element::zero(a.table());
    for (deg, part) in a.grade_decompose() {
        if deg.is_odd() {
            odd += &part;
        } else {
            even += &part;
        }
    }
    [even, odd].into_iter().filter(|e| !e.is_zero()).collect()
}

/// The coderivation extension of `ℓ_k` to a word of length `n`:
/// `Σ_{σ ∈ Sh(k,n-k)} (-1)^σ ε(σ) ℓ_k(v_σ(1..k)) ∧ v_σ(k+1..n)`, zero when `n < k`.
pub fn extend_coderivation(d: &Operator, k: usize, w: &Word) -> Result<WordSum> {
    if k == 0 {
        return Err(Error::domain("coderivation order must be at least 1"));
    }
    if !d.same_table(w.table()) {
        return Err(Error::TableMismatch);
    }
    let dp = operator_parity(d)?;
    let n = w.len();
    let mut out = WordSum::zero(w.table());
    if n < k {
        return Ok(out);
    }
    let degrees = w.shifted_degrees();
    for sigma in unshuffles_unchecked(k, n) {
        let sign = inversion_sign(&degrees, sigma.perm(), true);
        let head = ell(d, dp, &w.pick(sigma.left()));
        for part in parity_parts(&head) {
            let mut letters = vec![part];
            letters.extend(w.pick(sigma.right()));
            out.add_letters(&letters, &sign.to_scalar());
        }
    }
    Ok(out)
}

/// `Q_k` applied to a sum of words.
pub fn extend_coderivation_sum(d: &Operator, k: usize, s: &WordSum) -> Result<WordSum> {
    let mut out = WordSum::zero(s.table());
    for (letters, c) in s.terms() {
        let w = Word::from_monomials(s.table(), letters)?;
        out.add(&extend_coderivation(d, k, &w)?.scale(c));
    }
    Ok(out)
}

/// Left-hand side of the `n`-th relation on `args`, where `n = args.len()`.
pub fn linfty_relation(d: &Operator, args: &[Element]) -> Result<Element> {
    check_letters(args)?;
    for a in args {
        if !a.same_table(d.table()) {
            return Err(Error::TableMismatch);
        }
    }
    let dp = operator_parity(d)?;
    Ok(relation(d, dp, args))
}

fn relation(d: &Operator, dp: Parity, args: &[Element]) -> Element {
    let n = args.len();
    let degrees: Vec<Degree> = args
        .iter()
        .map(|a| parity_or_even(a).as_degree() + Degree(SHIFT))
        .collect();
    let mut out = Element::zero(d.table());
    for k in 1..=n {
        let pre = Sign::pow((k * (n - k)) as i64);
        for sigma in unshuffles_unchecked(k, n) {
            let sign = pre * inversion_sign(&degrees, sigma.perm(), true);
            let inner: Vec<Element> = sigma.left().iter().map(|&i| args[i].clone()).collect();
            let rest: Vec<Element> = sigma.right().iter().map(|&i| args[i].clone()).collect();
            for part in parity_parts(&ell(d, dp, &inner)) {
                let mut outer = vec![part];
                outer.extend(rest.iter().cloned());
                out += &ell(d, dp, &outer).signed(sign);
            }
        }
    }
    out
}

/// Outcome of testing one relation of the family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationReport {
    pub n: usize,
    pub tested: usize,
    pub population: u128,
    pub exhaustive: bool,
    pub passed: bool,
    pub failing_tuple: Option<Vec<Element>>,
    pub residual: Option<Element>,
}

/// Evaluate relations `1..=n_max` on monomial tuples within the budget.
pub fn verify_linfty(d: &Operator, n_max: usize, budget: &Budget) -> Result<Vec<RelationReport>> {
    if !d.is_odd() {
        return Err(Error::Hypothesis("the operator must be odd".into()));
    }
    let dp = Parity::Odd;
    let pool = budget.pool(d.table());
    let mut reports = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let sample = select_tuples(pool.len(), n, budget.max_tuples, budget.seed);
        let mut report = RelationReport {
            n,
            tested: 0,
            population: sample.population,
            exhaustive: sample.exhaustive,
            passed: true,
            failing_tuple: None,
            residual: None,
        };
        for t in &sample.tuples {
            let args: Vec<Element> = t.iter().map(|&i| pool[i].clone()).collect();
            report.tested += 1;
            let r = relation(d, dp, &args);
            if !r.is_zero() {
                report.passed = false;
                report.failing_tuple = Some(args);
                report.residual = Some(r);
                break;
            }
        }
        reports.push(report);
    }
    Ok(reports)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::brackets::{akman_bracket, bv_bracket};
    use crate::graded::{graded_sign, koszul_sign, scalar};
    use crate::text::{parse_element, parse_operator};

    fn ext3() -> Arc<GeneratorTable> {
        GeneratorTable::new([("xi1", 1), ("xi2", 1), ("xi3", 1)]).unwrap()
    }

    fn poly2() -> Arc<GeneratorTable> {
        GeneratorTable::new([("x1", 0), ("x2", 0), ("xi1", 1), ("xi2", 1)]).unwrap()
    }

    fn el(t: &Arc<GeneratorTable>, s: &str) -> Element {
        parse_element(t, s).unwrap()
    }

    fn op(t: &Arc<GeneratorTable>, s: &str) -> Operator {
        parse_operator(t, s).unwrap()
    }

    /// Symmetric form of the relation in unshifted degrees, used as an
    /// independent oracle: `Σ_k Σ_σ ε(σ) F^{n-k+1}(F^k(a_S), a_R)`.
    fn symmetric_relation(d: &Operator, args: &[Element]) -> Element {
        let n = args.len();
        let degrees: Vec<Degree> = args.iter().map(|a| a.degree().unwrap()).collect();
        let mut out = Element::zero(d.table());
        for k in 1..=n {
            for sigma in crate::graded::unshuffles(k, n).unwrap() {
                let s = koszul_sign(&degrees, sigma.perm()).unwrap();
                let inner: Vec<Element> = sigma.left().iter().map(|&i| args[i].clone()).collect();
                let f = akman_bracket(d, &inner).unwrap();
                for (_, part) in f.grade_decompose() {
                    let mut outer = vec![part];
                    outer.extend(sigma.right().iter().map(|&i| args[i].clone()));
                    out += &akman_bracket(d, &outer).unwrap().signed(s);
                }
            }
        }
        out
    }

    #[test]
    fn coproduct_small_words() {
        let t = poly2();
        let a = el(&t, "x1");
        let b = el(&t, "xi1");
        assert!(coproduct(&Word::new(vec![a.clone()]).unwrap()).is_empty());
        let w = Word::new(vec![a.clone(), b.clone()]).unwrap();
        let c = coproduct(&w);
        assert_eq!(c.len(), 2);
        assert_eq!(
            c[0],
            (
                Word::new(vec![a.clone()]).unwrap(),
                Word::new(vec![b.clone()]).unwrap(),
                Sign::Plus
            )
        );
        // shifted degrees 1 and 2: -(-1)^{2} = -1
        assert_eq!(c[1].2, Sign::Minus);
        assert_eq!(c[1].0.letters()[0], b);
        let w3 = Word::new(vec![a, b, el(&t, "xi1*xi2")]).unwrap();
        assert_eq!(coproduct(&w3).len(), 6);
    }

    /// Move letters one adjacent swap at a time, accumulating the swap sign.
    fn bubble_sign(degrees: &[Degree], target: &[usize]) -> Sign {
        let mut cur: Vec<usize> = (0..degrees.len()).collect();
        let mut sign = Sign::Plus;
        for (pos, &want) in target.iter().enumerate() {
            let mut at = cur.iter().position(|&x| x == want).unwrap();
            while at > pos {
                let (u, v) = (cur[at - 1], cur[at]);
                sign *= -Sign::koszul(degrees[u], degrees[v]);
                cur.swap(at - 1, at);
                at -= 1;
            }
        }
        sign
    }

    #[test]
    fn coproduct_signs_match_letter_moving() {
        let t = poly2();
        let w = Word::new(vec![
            el(&t, "x1"),
            el(&t, "xi1"),
            el(&t, "x2*xi2"),
            el(&t, "xi1*xi2"),
        ])
        .unwrap();
        let degrees = w.shifted_degrees();
        let mut count = 0;
        for k in 1..w.len() {
            for sigma in crate::graded::unshuffles(k, w.len()).unwrap() {
                let expected = bubble_sign(&degrees, sigma.perm());
                let got = coproduct(&w)
                    .into_iter()
                    .find(|(l, r, _)| {
                        l.letters() == w.pick(sigma.left()).as_slice()
                            && r.letters() == w.pick(sigma.right()).as_slice()
                    })
                    .unwrap()
                    .2;
                assert_eq!(got, expected);
                count += 1;
            }
        }
        assert_eq!(count, 14);
    }

    #[test]
    fn extension_examples() {
        let t = poly2();
        let d = op(&t, "d[x1]*d[xi1] + d[x2]*d[xi2]");
        let a = el(&t, "x1*xi2");
        let b = el(&t, "x2*xi1");
        let c = el(&t, "xi1");
        let q1 = extend_coderivation(&d, 1, &Word::new(vec![a.clone()]).unwrap()).unwrap();
        assert_eq!(q1.letters_part(), d.apply(&a).unwrap());
        let q2 =
            extend_coderivation(&d, 2, &Word::new(vec![a.clone(), b.clone()]).unwrap()).unwrap();
        assert_eq!(
            q2.letters_part(),
            linfty_bracket(&d, &[a.clone(), b.clone()]).unwrap()
        );
        let w = Word::new(vec![a.clone(), b.clone(), c.clone()]).unwrap();
        let q = extend_coderivation(&d, 2, &w).unwrap();
        let mut expected = WordSum::zero(&t);
        let degrees = w.shifted_degrees();
        for (l, r) in [([0, 1], 2), ([0, 2], 1), ([1, 2], 0)] {
            let perm = [l[0], l[1], r];
            let s = bubble_sign(&degrees, &perm);
            let head = linfty_bracket(&d, &w.pick(&l)).unwrap();
            expected.add_letters(&[head, w.letters()[r].clone()], &s.to_scalar());
        }
        assert_eq!(q, expected);
        assert!(extend_coderivation(&d, 3, &Word::new(vec![a]).unwrap())
            .unwrap()
            .is_zero());
    }

    #[test]
    fn low_brackets_match_the_bv_bracket() {
        let t = poly2();
        let d = op(&t, "d[x1]*d[xi1] + d[x2]*d[xi2]");
        for (a, b) in [
            ("x1*xi2", "x2*xi1"),
            ("xi1", "x1"),
            ("x1^2*xi1*xi2", "x1*xi1"),
        ] {
            let (a, b) = (el(&t, a), el(&t, b));
            assert_eq!(
                linfty_bracket(&d, std::slice::from_ref(&a)).unwrap(),
                d.apply(&a).unwrap()
            );
            assert_eq!(
                linfty_bracket(&d, &[a.clone(), b.clone()]).unwrap(),
                -bv_bracket(&d, &a, &b).unwrap()
            );
        }
    }

    #[test]
    fn decalaged_bracket_is_antisymmetric_in_shifted_degrees() {
        let t = poly2();
        let d = op(&t, "d[x1]*d[xi1] + d[x2]*d[xi2] + x1*d[xi1]*d[x1]*d[x2]");
        let args = [
            el(&t, "x1*xi2"),
            el(&t, "xi1"),
            el(&t, "x2^2"),
            el(&t, "x1*xi1*xi2"),
        ];
        let shifted: Vec<Degree> = args
            .iter()
            .map(|a| a.degree().unwrap() + Degree(1))
            .collect();
        let base = linfty_bracket(&d, &args).unwrap();
        for perm in [[1, 0, 2, 3], [0, 2, 1, 3], [3, 1, 2, 0], [2, 3, 0, 1]] {
            let permuted: Vec<Element> = perm.iter().map(|&i| args[i].clone()).collect();
            let s = graded_sign(&shifted, &perm).unwrap();
            assert_eq!(linfty_bracket(&d, &permuted).unwrap().signed(s), base);
        }
    }

    #[test]
    fn first_relation_is_the_square() {
        let t = poly2();
        let d = op(&t, "d[xi1] + xi1");
        let a = el(&t, "x1^2*xi2");
        let r = linfty_relation(&d, std::slice::from_ref(&a)).unwrap();
        assert_eq!(r, d.apply(&d.apply(&a).unwrap()).unwrap());
    }

    #[test]
    fn exterior_cubic_relations_hold_exhaustively() {
        let t = ext3();
        let d = op(&t, "d[xi1]*d[xi2]*d[xi3]");
        assert!(d.is_square_zero());
        let reports = verify_linfty(&d, 4, &Budget::new(3, 4096, 0)).unwrap();
        for r in &reports {
            assert!(r.exhaustive && r.passed, "{r:?}");
        }
        assert_eq!(reports[3].tested, 4096);
    }

    #[test]
    fn square_zero_with_multiplication_part() {
        let t = ext3();
        let d = op(&t, "xi1 + d[xi2]");
        assert!(d.is_square_zero());
        assert!(!d.constant_part().is_zero());
        let reports = verify_linfty(&d, 4, &Budget::new(3, 4096, 0)).unwrap();
        for r in &reports {
            assert!(r.exhaustive && r.passed, "{r:?}");
        }
    }

    #[test]
    fn violated_square_is_detected() {
        let t = poly2();
        let d = op(&t, "d[x1]*d[xi1] + d[x2]*d[xi2] + xi1");
        assert!(!d.is_square_zero());
        let reports = verify_linfty(&d, 2, &Budget::new(2, 400, 1)).unwrap();
        assert!(!reports[0].passed || !reports[1].passed);
        let failing = reports.iter().find(|r| !r.passed).unwrap();
        let args = failing.failing_tuple.clone().unwrap();
        assert_eq!(
            linfty_relation(&d, &args).unwrap(),
            failing.residual.clone().unwrap()
        );
    }

    #[test]
    fn even_operator_rejected() {
        let t = poly2();
        assert!(matches!(
            verify_linfty(&op(&t, "x1"), 2, &Budget::default()),
            Err(Error::Hypothesis(_))
        ));
    }

    #[test]
    fn relation_is_the_decalaged_symmetric_oracle() {
        let t = poly2();
        let d = op(
            &t,
            "d[x1]*d[xi1] + d[x2]*d[xi2] + xi1*d[x2] + x1*d[xi1]*d[x1]*d[x2]",
        );
        let pool = Budget::new(2, 0, 0).pool(&t);
        for n in 1..=3 {
            let sample = select_tuples(pool.len(), n, 150, 9);
            for tup in &sample.tuples {
                let args: Vec<Element> = tup.iter().map(|&i| pool[i].clone()).collect();
                let r = linfty_relation(&d, &args).unwrap();
                let s = symmetric_relation(&d, &args);
                let parities: Vec<Parity> = args.iter().map(parity_or_even).collect();
                assert_eq!(r, s.signed(decalage_sign(&parities)), "n = {n}");
            }
        }
    }

    #[test]
    fn coderivation_law() {
        let t = poly2();
        let d = op(&t, "d[x1]*d[xi1] + d[x2]*d[xi2] + x1*d[xi1]*d[x1]*d[x2]");
        let words = [
            vec!["x1*xi2", "xi1", "x2", "x1*xi1*xi2"],
            vec!["x1", "x2*xi1", "xi2", "x1^2", "xi1*xi2"],
            vec!["xi1", "xi2", "x1*x2"],
        ];
        for letters in words {
            let w = Word::new(letters.iter().map(|s| el(&t, s)).collect()).unwrap();
            for k in 1..=w.len() {
                // Q_k has bidegree (|D| + 1 - k, 1 - k) in (shifted degree, length);
                // passing it over a word uses the Koszul rule on both gradings.
                let lhs = tensor_coproduct(&extend_coderivation(&d, k, &w).unwrap());
                let mut rhs = Tensor::default();
                for (l, r, s) in coproduct(&w) {
                    let ql = extend_coderivation(&d, k, &l).unwrap();
                    let rw = WordSum::from_word(&r);
                    rhs.add_product(&ql, &rw, s.to_scalar());
                    let qr = extend_coderivation(&d, k, &r).unwrap();
                    let lw = WordSum::from_word(&l);
                    let koszul = Sign::koszul(Degree(-1 + 1 - k as i64), l.degree())
                        * Sign::koszul(Degree(1 - k as i64), Degree(l.len() as i64));
                    rhs.add_product(&lw, &qr, (s * koszul).to_scalar());
                }
                assert_eq!(lhs, rhs, "k = {k}");
            }
        }
    }

    #[derive(Default, Debug, PartialEq, Eq)]
    struct Tensor(BTreeMap<(Vec<Monomial>, Vec<Monomial>), Scalar>);

    impl Tensor {
        fn add(&mut self, l: Vec<Monomial>, r: Vec<Monomial>, c: Scalar) {
            let e = self
                .0
                .entry((l.clone(), r.clone()))
                .or_insert_with(Scalar::zero);
            *e += c;
            if e.is_zero() {
                self.0.remove(&(l, r));
            }
        }

        fn add_product(&mut self, a: &WordSum, b: &WordSum, c: Scalar) {
            for (l, x) in a.terms() {
                for (r, y) in b.terms() {
                    self.add(l.to_vec(), r.to_vec(), &c * x * y);
                }
            }
        }
    }

    fn tensor_coproduct(s: &WordSum) -> Tensor {
        let mut out = Tensor::default();
        for (letters, c) in s.terms() {
            let w = Word::from_monomials(s.table(), letters).unwrap();
            for (l, r, sign) in coproduct(&w) {
                let l = WordSum::from_word(&l);
                let r = WordSum::from_word(&r);
                out.add_product(&l, &r, sign.apply(c.clone()));
            }
        }
        out
    }

    #[test]
    fn coderivation_degree_shift() {
        let t = poly2();
        let d = op(&t, "d[x1]*d[xi1] + d[x2]*d[xi2] + x1*d[xi1]*d[x1]*d[x2]");
        let w = Word::new(
            ["x1*xi2", "xi1", "x2", "x1*xi1*xi2"]
                .iter()
                .map(|s| el(&t, s))
                .collect(),
        )
        .unwrap();
        for k in 1..=4 {
            let q = extend_coderivation(&d, k, &w).unwrap();
            assert!(!q.is_zero() || k > 2);
            for (letters, _) in q.terms() {
                let v = Word::from_monomials(&t, letters).unwrap();
                assert_eq!(v.len(), w.len() + 1 - k);
                assert_eq!(v.degree(), w.degree() + Degree(-1 + 1 - k as i64));
            }
        }
    }

    #[test]
    fn reduced_coassociativity() {
        let t = poly2();
        let w = Word::new(
            ["x1", "xi1", "x2*xi2", "xi2", "x1*x2"]
                .iter()
                .map(|s| el(&t, s))
                .collect(),
        )
        .unwrap();
        // (Δ ⊗ 1)Δ and (1 ⊗ Δ)Δ as maps to triples of canonical words
        let mut left: BTreeMap<[Vec<Monomial>; 3], Scalar> = BTreeMap::new();
        let mut right: BTreeMap<[Vec<Monomial>; 3], Scalar> = BTreeMap::new();
        let key = |w: &Word| -> (Vec<Monomial>, Sign) {
            let ms: Vec<Monomial> = w
                .letters()
                .iter()
                .map(|a| a.terms().next().unwrap().0.clone())
                .collect();
            canonicalize(&t, &ms).unwrap()
        };
        for (l, r, s) in coproduct(&w) {
            for (ll, lr, s2) in coproduct(&l) {
                let (a, sa) = key(&ll);
                let (b, sb) = key(&lr);
                let (c, sc) = key(&r);
                *left.entry([a, b, c]).or_insert_with(Scalar::zero) +=
                    (s * s2 * sa * sb * sc).to_scalar();
            }
            for (rl, rr, s2) in coproduct(&r) {
                let (a, sa) = key(&l);
                let (b, sb) = key(&rl);
                let (c, sc) = key(&rr);
                *right.entry([a, b, c]).or_insert_with(Scalar::zero) +=
                    (s * s2 * sa * sb * sc).to_scalar();
            }
        }
        left.retain(|_, v| !v.is_zero());
        right.retain(|_, v| !v.is_zero());
        assert_eq!(left, right);
        assert_eq!(left.len(), 150);
    }

    #[test]
    fn word_sum_canonical_form() {
        let t = poly2();
        let a = el(&t, "x1");
        let b = el(&t, "xi1");
        let mut s = WordSum::zero(&t);
        s.add_letters(&[b.clone(), a.clone()], &scalar(1));
        s.add_letters(&[a.clone(), b.clone()], &scalar(1));
        // b ∧ a = -(-1)^{2·1} a ∧ b = -a ∧ b
        assert!(s.is_zero());
        let mut s = WordSum::zero(&t);
        s.add_letters(&[a.clone(), a.clone()], &scalar(1));
        assert!(!s.is_zero(), "x1 has odd shifted degree");
        let mut s = WordSum::zero(&t);
        s.add_letters(&[b.clone(), b.clone()], &scalar(1));
        assert!(s.is_zero(), "xi1 has even shifted degree");
    }

    #[test]
    fn word_validation() {
        let t = poly2();
        assert!(Word::new(vec![]).is_err());
        assert!(Word::new(vec![el(&t, "x1 + xi1")]).is_err());
        assert!(Word::new(vec![Element::zero(&t)]).is_err());
    }
}
