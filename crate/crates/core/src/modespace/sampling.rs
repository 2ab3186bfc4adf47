//! Seeded pseudo-random states for the property suites.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{FreeState, Generator, LStar, Monomial, Ring};
use crate::scalar::q_int;

/// Deterministic sampler of homogeneous normal-form states.
pub struct StateSampler {
    rng: ChaCha8Rng,
    max_weight: u32,
}

impl StateSampler {
    pub fn new(seed: u64, max_weight: u32) -> Self {
        StateSampler { rng: ChaCha8Rng::seed_from_u64(seed), max_weight }
    }

    pub fn rng(&mut self) -> &mut ChaCha8Rng {
        &mut self.rng
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        self.rng.gen_range(lo..=hi)
    }

    pub fn ring(&mut self) -> Ring {
        if self.rng.gen_bool(0.5) {
            Ring::Poly
        } else {
            Ring::Laurent
        }
    }

    /// A random monomial of exactly the given weight.
    pub fn monomial(&mut self, weight: u32, ring: Ring, with_lstar: bool) -> Monomial {
        let mut gens = vec![Generator::A, Generator::B];
        if with_lstar {
            gens.push(Generator::LStar);
        }
        let (mut a, mut b, mut l) = (Vec::new(), Vec::new(), Vec::new());
        let mut left = weight;
        while left > 0 {
            let g = *gens.choose(&mut self.rng).unwrap();
            // contributes `depth` to the weight, b-modes contribute depth - 1
            let w = self.rng.gen_range(1..=left);
            match g {
                Generator::A => a.push(w),
                Generator::B => b.push(w + 1),
                Generator::LStar => l.push(w),
            }
            left -= w;
        }
        let ground = match ring {
            Ring::Poly => self.rng.gen_range(0..=3),
            Ring::Laurent => self.rng.gen_range(-3..=3),
        };
        Monomial::new(&a, &b, &l, ground)
    }

    /// A homogeneous state with one to three terms and small integer coefficients.
    pub fn state_of_weight(&mut self, weight: u32, ring: Ring, with_lstar: bool) -> FreeState {
        loop {
            let terms = self.rng.gen_range(1..=3);
            let mut pairs = Vec::new();
            for _ in 0..terms {
                let mut c = self.rng.gen_range(-3..=3);
                if c == 0 {
                    c = 1;
                }
                pairs.push((q_int(c), self.monomial(weight, ring, with_lstar)));
            }
            let s = FreeState::from_terms(pairs, ring, LStar::Symbolic);
            if !s.is_zero() {
                return s;
            }
        }
    }

    pub fn state(&mut self, ring: Ring, with_lstar: bool) -> FreeState {
        let w = self.rng.gen_range(0..=self.max_weight);
        self.state_of_weight(w, ring, with_lstar)
    }

    /// A random state, sometimes reinterpreted as a vector of a specialised module.
    pub fn target(&mut self, ring: Ring) -> FreeState {
        if self.rng.gen_bool(0.25) {
            let n = self.rng.gen_range(-3..=3);
            self.state(ring, false).into_module(n).expect("sampled without λ* modes")
        } else {
            self.state(ring, true)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sampling_is_deterministic_and_homogeneous() {
        let mut s1 = StateSampler::new(7, 3);
        let mut s2 = StateSampler::new(7, 3);
        for _ in 0..20 {
            let a = s1.state(Ring::Laurent, true);
            let b = s2.state(Ring::Laurent, true);
            assert_eq!(a, b);
            assert!(a.homogeneous_weight().unwrap() <= 3);
        }
    }

    #[test]
    fn poly_samples_have_nonnegative_ground() {
        let mut s = StateSampler::new(1, 3);
        for _ in 0..50 {
            assert!(s.state(Ring::Poly, true).terms().all(|(m, _)| m.ground() >= 0));
        }
    }
}
