//! Seeded random PNF formulas and lasso words.
//!
//! A formula of exact size `n` is drawn by recursive descent: size 1 is a
//! leaf, size 2 a unary operator over a leaf, and larger sizes choose
//! uniformly among the PNF constructors that fit, splitting the remaining
//! size uniformly between binary operands. Case `i` of seed `s` uses
//! ChaCha8 seeded with `s` on stream `i`, so any failing case can be
//! regenerated from `(s, i)` alone.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::semantics::{LassoWord, Symbol};
use crate::syntax::Formula;

/// Generator for case `index` of `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

fn leaf<R: Rng>(rng: &mut R, aps: &[String]) -> Formula {
    // constants are rarer than literals
    if rng.gen_ratio(1, 8) {
        return if rng.gen() { Formula::True } else { Formula::False };
    }
    let atom = Formula::atom(aps.choose(rng).expect("at least one proposition").clone());
    if rng.gen() {
        atom
    } else {
        Formula::not(atom)
    }
}

/// A random PNF formula of exactly `size` (at least 1).
pub fn formula_of_size<R: Rng>(rng: &mut R, aps: &[String], size: usize) -> Formula {
    match size {
        0 | 1 => leaf(rng, aps),
        2 => {
            let body = leaf(rng, aps);
            unary(rng, body)
        }
        n => {
            if rng.gen_ratio(3, 7) {
                let body = formula_of_size(rng, aps, n - 1);
                unary(rng, body)
            } else {
                let left = rng.gen_range(1..=n - 2);
                let a = formula_of_size(rng, aps, left);
                let b = formula_of_size(rng, aps, n - 1 - left);
                match rng.gen_range(0..4) {
                    0 => Formula::and(a, b),
                    1 => Formula::or(a, b),
                    2 => Formula::until(a, b),
                    _ => Formula::release(a, b),
                }
            }
        }
    }
}

fn unary<R: Rng>(rng: &mut R, body: Formula) -> Formula {
    match rng.gen_range(0..3) {
        0 => Formula::next(body),
        1 => Formula::eventually(body),
        _ => Formula::always(body),
    }
}

/// A random PNF formula whose size is uniform in `1..=max_size`.
pub fn random_formula<R: Rng>(rng: &mut R, aps: &[String], max_size: usize) -> Formula {
    let size = rng.gen_range(1..=max_size.max(1));
    formula_of_size(rng, aps, size)
}

/// A random lasso over `P(aps)` with `|prefix| ≤ max_prefix` and
/// `1 ≤ |loop| ≤ max_loop`.
pub fn random_lasso<R: Rng>(rng: &mut R, aps: &[String], max_prefix: usize, max_loop: usize) -> LassoWord {
    let symbol = |rng: &mut R| Symbol::new(aps.iter().filter(|_| rng.gen::<bool>()).cloned());
    let prefix_len = rng.gen_range(0..=max_prefix);
    let loop_len = rng.gen_range(1..=max_loop.max(1));
    let prefix = (0..prefix_len).map(|_| symbol(rng)).collect();
    let cycle = (0..loop_len).map(|_| symbol(rng)).collect();
    LassoWord::new(prefix, cycle).expect("loop is non-empty")
}

/// Parameters of a random corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusSpec {
    pub seed: u64,
    pub count: usize,
    pub max_size: usize,
    pub aps: Vec<String>,
    pub lassos_per_formula: usize,
    pub max_prefix: usize,
    pub max_loop: usize,
}

impl CorpusSpec {
    pub fn aps_set(&self) -> BTreeSet<String> {
        self.aps.iter().cloned().collect()
    }

    /// Formula and lassos of case `index`.
    pub fn case(&self, index: usize) -> (Formula, Vec<LassoWord>) {
        let mut rng = case_rng(self.seed, index as u64);
        let f = random_formula(&mut rng, &self.aps, self.max_size);
        let lassos = (0..self.lassos_per_formula)
            .map(|_| random_lasso(&mut rng, &self.aps, self.max_prefix, self.max_loop))
            .collect();
        (f, lassos)
    }

    pub fn cases(&self) -> impl Iterator<Item = (Formula, Vec<LassoWord>)> + '_ {
        (0..self.count).map(|i| self.case(i))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn aps() -> Vec<String> {
        vec!["p".into(), "q".into()]
    }

    #[test]
    fn sizes_are_exact_and_pnf() {
        let mut rng = case_rng(7, 0);
        for size in 1..=15 {
            for _ in 0..20 {
                let f = formula_of_size(&mut rng, &aps(), size);
                assert_eq!(f.size(), size, "{f}");
                assert!(f.is_pnf());
            }
        }
    }

    #[test]
    fn cases_are_reproducible() {
        let spec = CorpusSpec {
            seed: 42,
            count: 5,
            max_size: 10,
            aps: aps(),
            lassos_per_formula: 3,
            max_prefix: 3,
            max_loop: 4,
        };
        let first: Vec<_> = spec.cases().collect();
        assert_eq!(first, spec.cases().collect::<Vec<_>>());
        assert_eq!(first[3], spec.case(3));
        for (_, lassos) in first {
            for w in lassos {
                assert!(w.prefix().len() <= 3 && (1..=4).contains(&w.cycle().len()));
            }
        }
    }
}
