//! Seeded random X states and measurement bases.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::measure::MeasurementBasis;
use crate::qmat::XParams;

/// Uniform sampling on [-1, 1]^5 with rejection of non-positive matrices.
#[derive(Debug, Clone)]
pub struct StateSampler {
    rng: ChaCha8Rng,
    rejected: usize,
}

impl StateSampler {
    pub fn new(seed: u64) -> Self {
        StateSampler {
            rng: ChaCha8Rng::seed_from_u64(seed),
            rejected: 0,
        }
    }

    fn coef(&mut self) -> f64 {
        self.rng.gen_range(-1.0..=1.0)
    }

    fn accept(&mut self, draw: impl Fn(&mut Self) -> [f64; 5]) -> XParams {
        loop {
            let [a, b, cx, cy, cz] = draw(self);
            match XParams::new(a, b, cx, cy, cz) {
                Ok(p) => return p,
                Err(_) => self.rejected += 1,
            }
        }
    }

    pub fn state(&mut self) -> XParams {
        self.accept(|s| [s.coef(), s.coef(), s.coef(), s.coef(), s.coef()])
    }

    /// States with a = 0 (b free).
    pub fn state_a_zero(&mut self) -> XParams {
        self.accept(|s| [0.0, s.coef(), s.coef(), s.coef(), s.coef()])
    }

    pub fn bell_diagonal(&mut self) -> XParams {
        self.accept(|s| [0.0, 0.0, s.coef(), s.coef(), s.coef()])
    }

    /// theta uniform on [0, pi], phi uniform on [0, 2pi).
    pub fn basis(&mut self) -> MeasurementBasis {
        MeasurementBasis::new(
            self.rng.gen_range(0.0..=PI),
            self.rng.gen_range(0.0..2.0 * PI),
        )
    }

    pub fn unit(&mut self) -> f64 {
        self.rng.gen_range(0.0..=1.0)
    }

    /// Number of draws rejected so far by the positivity check.
    pub fn rejected(&self) -> usize {
        self.rejected
    }
}
