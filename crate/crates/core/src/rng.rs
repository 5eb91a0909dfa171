//! A tiny deterministic generator (SplitMix64) plus draws for motives and
//! matrices. Hand-rolled so seeds reproduce byte-identically across
//! platforms and dependency upgrades, which golden tests rely on.

use crate::motive::{QStarMatrix, ToricOneMotive};
use crate::ratmult::QStarElem;
use crate::{Int, IntMatrix};

#[derive(Debug, Clone)]
pub struct DetRng {
    state: u64,
}

impl DetRng {
    pub fn new(seed: u64) -> Self {
        DetRng { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in `0..bound` (`bound > 0`).
    pub fn below(&mut self, bound: u64) -> u64 {
        assert!(bound > 0, "below: zero bound");
        self.next_u64() % bound
    }

    /// Uniform in `lo..=hi`.
    pub fn range_i64(&mut self, lo: i64, hi: i64) -> i64 {
        assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }

    pub fn pick<'a, T>(&mut self, items: &'a [T]) -> &'a T {
        &items[self.below(items.len() as u64) as usize]
    }

    pub fn int_matrix(&mut self, rows: usize, cols: usize, bound: i64) -> IntMatrix {
        IntMatrix::from_fn(rows, cols, |_, _| Int::from(self.range_i64(-bound, bound)))
    }

    /// A random ℚ* element supported on `primes` with exponents in
    /// `-max_exp..=max_exp`.
    pub fn qstar(&mut self, primes: &[u64], max_exp: i64) -> QStarElem {
        let negative = self.below(2) == 1;
        let exps = primes
            .iter()
            .map(|&p| (p, self.range_i64(-max_exp, max_exp)))
            .collect::<Vec<_>>();
        QStarElem::from_parts(negative, exps)
    }

    /// A random motive with entries drawn from the given pool.
    pub fn motive_from_pool(&mut self, r: usize, d: usize, pool: &[QStarElem]) -> ToricOneMotive {
        let entries = (0..r * d).map(|_| self.pick(pool).clone()).collect();
        ToricOneMotive::new(r, d, QStarMatrix::new(d, r, entries).unwrap())
            .expect("shape matches by construction")
    }

    /// A random motive supported on `primes`.
    pub fn motive(&mut self, r: usize, d: usize, primes: &[u64], max_exp: i64) -> ToricOneMotive {
        let entries = (0..r * d).map(|_| self.qstar(primes, max_exp)).collect();
        ToricOneMotive::new(r, d, QStarMatrix::new(d, r, entries).unwrap())
            .expect("shape matches by construction")
    }
}
