//! Randomized accuracy experiments and the term-count scaling bench.
//!
//! Samples are drawn from a counter-based stream keyed by `(seed, index)`, so
//! every sample can be regenerated on its own and results do not depend on
//! the number of worker threads.

mod bench;
mod stats;
mod sweep;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rug::Rational;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::frobenius::{validate, Branch, EquationSpec};
use crate::mpcore::ExactScalar;

pub use bench::{linear_fit, run_scaling_bench, BenchRow, LinearFit, ScalingReport, FIT_FROM_DIGITS};
pub use stats::{iqr, ks_distance, pearson, quantile, Quantiles};
pub use sweep::{
    run_error_sweep, run_wronskian_sweep, write_csv, ErrorRecord, ErrorSummary, PrecisionStats, WronskiMode, WronskiRecord,
    WronskiSummary, DELTA_RANGE, WRONSKI_RANGE,
};

/// Digits by which the reference run exceeds the largest requested precision.
pub const REFERENCE_EXTRA_DIGITS: u32 = 76;

#[derive(Debug, Clone, Serialize)]
pub struct SweepConfig {
    pub sample_count: usize,
    pub seed: u64,
    pub precisions: Vec<u32>,
    /// Evaluate ψ' too and report its errors.
    pub derivative: bool,
    pub max_terms: usize,
}

impl SweepConfig {
    pub fn new(sample_count: usize, seed: u64, precisions: Vec<u32>) -> Self {
        SweepConfig {
            sample_count,
            seed,
            precisions,
            derivative: false,
            max_terms: crate::frobenius::DEFAULT_MAX_TERMS,
        }
    }

    pub fn reference_digits(&self) -> Result<u32> {
        self.precisions
            .iter()
            .max()
            .map(|p| p + REFERENCE_EXTRA_DIGITS)
            .ok_or_else(|| Error::Config("precision list is empty".into()))
    }

    fn check(&self) -> Result<()> {
        if self.precisions.contains(&0) {
            return Err(Error::Config("precisions must be positive".into()));
        }
        self.reference_digits().map(|_| ())
    }
}

/// One random equation, evaluation point and branch.
#[derive(Debug, Clone, Serialize)]
pub struct Sample {
    pub index: usize,
    pub eq: EquationSpec,
    pub z: ExactScalar,
    pub branch: Branch,
    /// Draws rejected by validation before this one was accepted.
    pub redraws: u32,
}

const S_CHOICES: [(i64, i64); 4] = [(-1, 1), (-1, 3), (1, 3), (1, 1)];

fn uniform(rng: &mut ChaCha8Rng, half_width: f64) -> Rational {
    Rational::from_f64(rng.gen_range(-half_width..half_width)).expect("finite")
}

fn uniform_complex(rng: &mut ChaCha8Rng, half_width: f64) -> ExactScalar {
    ExactScalar::complex(uniform(rng, half_width), uniform(rng, half_width))
}

fn pick_s(rng: &mut ChaCha8Rng) -> ExactScalar {
    let mut part = || Rational::from(S_CHOICES[rng.gen_range(0..S_CHOICES.len())]);
    ExactScalar::complex(part(), part())
}

fn draw_once(rng: &mut ChaCha8Rng) -> (EquationSpec, ExactScalar, Branch) {
    let degree = rng.gen_range(1..=4usize);
    let s = pick_s(rng);
    let nu_plus = uniform_complex(rng, 10.0);
    let nu_minus = uniform_complex(rng, 10.0);
    let v = (0..=degree).map(|_| uniform_complex(rng, 5.0)).collect();
    let z = uniform_complex(rng, 20.0);
    let branch = if rng.gen::<bool>() { Branch::Plus } else { Branch::Minus };
    let eq = EquationSpec::new(s, nu_plus, nu_minus, v).expect("non-empty v");
    (eq, z, branch)
}

/// Draws sample `index` of the stream for `seed`. With `both_branches` the
/// sample must admit both branches (needed for Wronskians).
pub fn draw_sample(seed: u64, index: usize, both_branches: bool) -> Sample {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    let mut redraws = 0;
    loop {
        let (eq, z, branch) = draw_once(&mut rng);
        let ok = if both_branches {
            [Branch::Plus, Branch::Minus].iter().all(|b| validate(&eq, &z, *b).is_ok())
        } else {
            validate(&eq, &z, branch).is_ok()
        };
        if ok {
            return Sample {
                index,
                eq,
                z,
                branch,
                redraws,
            };
        }
        redraws += 1;
    }
}
