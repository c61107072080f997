//! Test budgets and deterministic tuple selection.

use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{monomials_up_to, Element, GeneratorTable};
use crate::graded::Scalar;
use num_traits::One;

/// How much of a universally quantified identity to test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Largest total exponent of a test monomial.
    pub max_degree: u32,
    /// Largest number of tuples tested per check.
    pub max_tuples: usize,
    pub seed: u64,
}

impl Budget {
    pub const DEFAULT_MAX_DEGREE: u32 = 3;
    pub const DEFAULT_MAX_TUPLES: usize = 500;
    pub const DEFAULT_SEED: u64 = 20_240_601;

    pub fn new(max_degree: u32, max_tuples: usize, seed: u64) -> Self {
        Budget {
            max_degree,
            max_tuples,
            seed,
        }
    }

    /// Every monomial with total exponent at most `max_degree`, as elements.
    pub fn pool(&self, table: &std::sync::Arc<GeneratorTable>) -> Vec<Element> {
        monomials_up_to(table, self.max_degree)
            .into_iter()
            .map(|m| Element::monomial(table, m, Scalar::one()))
            .collect()
    }
}

impl Default for Budget {
    fn default() -> Self {
        Budget::new(
            Self::DEFAULT_MAX_DEGREE,
            Self::DEFAULT_MAX_TUPLES,
            Self::DEFAULT_SEED,
        )
    }
}

/// Index tuples drawn from a pool.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TupleSample {
    pub tuples: Vec<Vec<usize>>,
    /// True when every ordered tuple of the pool was included.
    pub exhaustive: bool,
    /// Number of ordered tuples in the pool, saturating.
    pub population: u128,
}

fn population(pool: usize, arity: usize) -> u128 {
    (0..arity).fold(1u128, |acc, _| acc.saturating_mul(pool as u128))
}

/// All ordered `arity`-tuples over `0..pool` when there are at most
/// `max_tuples` of them, otherwise `max_tuples` distinct tuples drawn with a
/// ChaCha8 generator seeded from `seed`.
pub fn select_tuples(pool: usize, arity: usize, max_tuples: usize, seed: u64) -> TupleSample {
    let population = population(pool, arity);
    if pool == 0 && arity > 0 {
        return TupleSample {
            tuples: Vec::new(),
            exhaustive: true,
            population: 0,
        };
    }
    if population <= max_tuples as u128 {
        let mut tuples = Vec::with_capacity(population as usize);
        let mut cur = vec![0usize; arity];
        loop {
            tuples.push(cur.clone());
            let mut i = arity;
            loop {
                if i == 0 {
                    return TupleSample {
                        tuples,
                        exhaustive: true,
                        population,
                    };
                }
                i -= 1;
                cur[i] += 1;
                if cur[i] < pool {
                    break;
                }
                cur[i] = 0;
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ ((arity as u64) << 48));
    let mut seen = BTreeSet::new();
    let mut tuples = Vec::with_capacity(max_tuples);
    let mut attempts = 0usize;
    while tuples.len() < max_tuples && attempts < max_tuples.saturating_mul(50) {
        attempts += 1;
        let t: Vec<usize> = (0..arity).map(|_| rng.gen_range(0..pool)).collect();
        if seen.insert(t.clone()) {
            tuples.push(t);
        }
    }
    TupleSample {
        tuples,
        exhaustive: false,
        population,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exhaustive_when_small() {
        let s = select_tuples(3, 2, 100, 7);
        assert!(s.exhaustive);
        assert_eq!(s.tuples.len(), 9);
        assert_eq!(s.tuples[1], vec![0, 1]);
        assert_eq!(s.population, 9);
    }

    #[test]
    fn sampled_is_deterministic_and_distinct() {
        let a = select_tuples(40, 3, 200, 11);
        let b = select_tuples(40, 3, 200, 11);
        assert!(!a.exhaustive);
        assert_eq!(a, b);
        let distinct: BTreeSet<_> = a.tuples.iter().collect();
        assert_eq!(distinct.len(), 200);
        assert_ne!(a.tuples, select_tuples(40, 3, 200, 12).tuples);
    }

    #[test]
    fn empty_pool() {
        assert!(select_tuples(0, 2, 10, 0).tuples.is_empty());
        assert_eq!(select_tuples(5, 0, 10, 0).tuples, vec![Vec::<usize>::new()]);
    }
}
