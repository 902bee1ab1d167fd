//! Small deterministic generator for the seeded randomized suites.
//!
//! A fixed in-tree generator keeps every report byte-stable across toolchain
//! and dependency updates.

use crate::polynomial::{Monomial, Polynomial};
use crate::rational::Rational;

/// splitmix64
#[derive(Clone, Debug)]
pub struct Rng(u64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(seed.wrapping_add(0x9e3779b97f4a7c15))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform in 0..n.
    pub fn below(&mut self, n: u64) -> u64 {
        assert!(n > 0);
        self.next_u64() % n
    }

    /// Small nonzero rational with numerator in -9..=9 and denominator in
    /// 1..=4.
    pub fn rational(&mut self) -> Rational {
        let num = self.below(19) as i64 - 9;
        let num = if num == 0 { 1 } else { num };
        let den = self.below(4) as i64 + 1;
        Rational::new(num, den)
    }

    /// Sparse polynomial in `nvars` variables with total degree at most
    /// `max_deg` and at most `max_terms` terms (at least one).
    pub fn polynomial(&mut self, nvars: usize, max_deg: u32, max_terms: usize) -> Polynomial {
        let terms = 1 + self.below(max_terms as u64) as usize;
        let mut p = Polynomial::zero();
        for _ in 0..terms {
            let mut exps = vec![0u32; nvars];
            let deg = self.below(max_deg as u64 + 1) as u32;
            for _ in 0..deg {
                if nvars > 0 {
                    let v = self.below(nvars as u64) as usize;
                    exps[v] += 1;
                }
            }
            p = &p + &Polynomial::monomial(Monomial::from_exponents(exps), self.rational());
        }
        if p.is_zero() {
            Polynomial::one()
        } else {
            p
        }
    }
}
