//! Ready-made inputs for the property checks.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{PropertyId, VerifierFixture};
use crate::error::Result;
use crate::qpft::ParamSet;
use crate::signal::{gaussian_pair, Signal};

/// Half-width of the reference support `[-20, 20)`.
pub const REFERENCE_HALF_SUPPORT: f64 = 20.0;

fn reference_dt(n: usize) -> f64 {
    2.0 * REFERENCE_HALF_SUPPORT / n as f64
}

/// Gaussian pair `e^{-t^2/sqrt2} + e^{-(t-4)^2/sqrt2}` on `n` points covering
/// `[-20, 20)` with `t = 0` on the grid; `g = f`.
pub fn gaussian_fixture(n: usize, params: ParamSet) -> Result<VerifierFixture> {
    let f = Signal::centered(reference_dt(n), n, |t| Complex64::new(gaussian_pair((0.0, 4.0), t), 0.0))?;
    Ok(VerifierFixture::new(f.clone(), params).with_g(f))
}

/// Random complex samples on the middle half of a centered grid, zero on the
/// outer quarters, so that shifts of up to `n/4` samples and reflections stay
/// inside the grid. `g` is an independent draw.
pub fn exact_fixture(seed: u64, n: usize, params: ParamSet) -> Result<VerifierFixture> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let draw = |rng: &mut ChaCha8Rng| -> Result<Signal> {
        let samples = (0..n)
            .map(|i| {
                if i >= n / 4 && i < n - n / 4 {
                    Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0))
                } else {
                    Complex64::default()
                }
            })
            .collect();
        Signal::new(samples, -((n / 2) as f64) * reference_dt(n), reference_dt(n))
    };
    let f = draw(&mut rng)?;
    let g = draw(&mut rng)?;
    Ok(VerifierFixture::new(f, params).with_g(g))
}

fn wd_bin(n: usize, dt: f64, b: f64) -> f64 {
    2.0 * PI / (n as f64 * 2.0 * dt * b.abs())
}

fn af_bin(n: usize, dt: f64, b: f64) -> f64 {
    2.0 * PI / (n as f64 * dt * b.abs())
}

/// Parameters whose time-shift frequency offsets land on the grid: for a
/// shift of `shift` samples, `(A+C) t0 / B` is `j_wd` AQWD bins and
/// `2 (C-A) t0 / B` is `j_af` AQAF bins.
#[allow(clippy::too_many_arguments)]
pub fn aligned_params(
    n: usize,
    dt: f64,
    shift: isize,
    j_wd: i32,
    j_af: i32,
    b: f64,
    d: f64,
    e: f64,
) -> Result<ParamSet> {
    let tau = shift as f64 * dt;
    let sum = j_wd as f64 * wd_bin(n, dt, b) * b / tau;
    let diff = j_af as f64 * af_bin(n, dt, b) * b / (2.0 * tau);
    ParamSet::new(0.5 * (sum - diff), b, 0.5 * (sum + diff), d, e)
}

/// Modulation frequency `u0` with `u0 / B` equal to `j` AQWD bins.
pub fn aligned_freq_shift(n: usize, dt: f64, b: f64, j: i32) -> f64 {
    j as f64 * b * wd_bin(n, dt, b)
}

/// The fixture each property is checked on by default at size `n`.
pub fn standard_fixture(id: PropertyId, n: usize) -> Result<VerifierFixture> {
    use PropertyId::*;
    let dt = reference_dt(n);
    match id {
        TimeShiftWd | TimeShiftAf | FreqShiftWd | FreqShiftAf | JointShiftWd | JointShiftAf => {
            let shift = (n / 16).max(1) as isize;
            let b = -1.5;
            let p = aligned_params(n, dt, shift, 3, -2, b, 0.7, -0.4)?;
            Ok(exact_fixture(7, n, p)?
                .with_shifts(shift as f64 * dt, aligned_freq_shift(n, dt, b, 5)))
        }
        ConjWd | ConjAf | SymmWd | SymmAf => {
            exact_fixture(11, n, ParamSet::new(0.4, -1.3, -0.7, 0.9, -0.5)?)
        }
        MarginalWd | ReconWd => gaussian_fixture(n, ParamSet::new(0.0, -1.0, 0.0, 2.0, 2.0)?),
        MoyalWd | MoyalAf | ReconAf => gaussian_fixture(n, ParamSet::new(1.0, -2.0, 1.0, 2.0, 1.0)?),
        MarginalAf | EnergyMarginal | AfSlice => {
            gaussian_fixture(n, ParamSet::new(0.2, -1.5, -0.1, 0.5, -0.3)?)
        }
    }
}
