//! Quadratic-phase Fourier transform, its kernel and chirp modulation.

use std::f64::consts::PI;
use std::fmt;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::signal::Signal;

/// The quintuple `(A, B, C, D, E)` of the quadratic-phase family, `B != 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamSet {
    a: f64,
    b: f64,
    c: f64,
    d: f64,
    e: f64,
}

impl ParamSet {
    pub fn new(a: f64, b: f64, c: f64, d: f64, e: f64) -> Result<Self> {
        if [a, b, c, d, e].iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument(
                "parameters must be finite".to_string(),
            ));
        }
        if b == 0.0 {
            return Err(Error::InvalidArgument("B must be nonzero".to_string()));
        }
        Ok(Self { a, b, c, d, e })
    }

    /// `(0, -1, 0, 0, 0)`: the classical Fourier setting.
    pub fn classical() -> Self {
        Self {
            a: 0.0,
            b: -1.0,
            c: 0.0,
            d: 0.0,
            e: 0.0,
        }
    }

    /// Parameter set whose AQWD/AQAF coincide with the LCT-domain
    /// distributions of the matrix `(a, b; c, d)`: `(d/2b, -1/b, a/2b, 0, 0)`.
    pub fn lct(a: f64, b: f64, d: f64) -> Result<Self> {
        if b == 0.0 {
            return Err(Error::InvalidArgument("LCT b must be nonzero".into()));
        }
        Self::new(d / (2.0 * b), -1.0 / b, a / (2.0 * b), 0.0, 0.0)
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> f64 {
        self.b
    }
    pub fn c(&self) -> f64 {
        self.c
    }
    pub fn d(&self) -> f64 {
        self.d
    }
    pub fn e(&self) -> f64 {
        self.e
    }

    pub fn as_array(&self) -> [f64; 5] {
        [self.a, self.b, self.c, self.d, self.e]
    }

    pub fn as_tuple(&self) -> (f64, f64, f64, f64, f64) {
        (self.a, self.b, self.c, self.d, self.e)
    }

    pub fn map(&self, kind: ParamMap) -> ParamSet {
        let ParamSet { a, b, c, d, e } = *self;
        let (a, b, c, d, e) = match kind {
            ParamMap::Hat | ParamMap::PrimeWdMarginal => (c, b, a, e, d),
            ParamMap::Tilde => (c, -b, a, e, d),
            ParamMap::PrimeAfMarginal => (a, b / 2.0, c, d, e),
            ParamMap::DoublePrimeAfMarginal => (c, -b / 2.0, a, e, d),
            ParamMap::Classical => return ParamSet::classical(),
            ParamMap::LinearNegated => (a, b, c, -d, -e),
        };
        ParamSet { a, b, c, d, e }
    }

    /// True when `A = C` and `D = E`: the distributions collapse to the
    /// unmodulated lag product with kernel `exp(i (2At + Bv + D) lag)`.
    pub fn is_qpft_reduction(&self) -> bool {
        self.a == self.c && self.d == self.e
    }

    /// Principal square root of `B / i`; modulus `sqrt|B|`.
    pub fn sqrt_b_over_i(&self) -> Complex64 {
        (Complex64::new(self.b, 0.0) / Complex64::i()).sqrt()
    }

    /// `sqrt(B / (2 pi i))`, the QWD/QAF normalization.
    pub fn sqrt_b_over_2pi_i(&self) -> Complex64 {
        (Complex64::new(self.b, 0.0) / Complex64::new(0.0, 2.0 * std::f64::consts::PI)).sqrt()
    }
}

impl fmt::Display for ParamSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{},{},{})", self.a, self.b, self.c, self.d, self.e)
    }
}

impl std::str::FromStr for ParamSet {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches('(').trim_end_matches(')');
        let vals: Vec<f64> = s
            .split(',')
            .map(|v| v.trim().parse::<f64>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|e| Error::InvalidArgument(format!("bad parameter list {s:?}: {e}")))?;
        match vals.as_slice() {
            &[a, b, c, d, e] => ParamSet::new(a, b, c, d, e),
            _ => Err(Error::InvalidArgument(format!(
                "expected 5 parameters A,B,C,D,E, got {}",
                vals.len()
            ))),
        }
    }
}

/// Derived parameter maps used by the property identities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ParamMap {
    /// `(C, B, A, E, D)`
    Hat,
    /// `(C, -B, A, E, D)`
    Tilde,
    /// `(C, B, A, E, D)`, the conjugate factor of the time marginal.
    PrimeWdMarginal,
    /// `(A, B/2, C, D, E)`
    PrimeAfMarginal,
    /// `(C, -B/2, A, E, D)`
    DoublePrimeAfMarginal,
    /// `(0, -1, 0, 0, 0)`
    Classical,
    /// `(A, B, C, -D, -E)`, the set that carries time reversal.
    LinearNegated,
}

/// `sqrt(B/i) * exp(i (A v^2 + B t v + C t^2 + D v + E t))`.
pub fn kernel(p: &ParamSet, nu: f64, t: f64) -> Complex64 {
    p.sqrt_b_over_i() * Complex64::cis(kernel_phase(p, nu, t))
}

#[inline]
pub(crate) fn kernel_phase(p: &ParamSet, nu: f64, t: f64) -> f64 {
    p.a * nu * nu + p.b * t * nu + p.c * t * t + p.d * nu + p.e * t
}

/// Riemann-sum QPFT `(1/sqrt(2 pi)) sum f[n] K(v, t_n) dt` at each frequency.
pub fn qpft_forward(p: &ParamSet, f: &Signal, nu_grid: &[f64]) -> Vec<Complex64> {
    let norm = p.sqrt_b_over_i() * (f.dt() / (2.0 * PI).sqrt());
    nu_grid
        .par_iter()
        .map(|&nu| {
            let s: Complex64 = f
                .samples()
                .iter()
                .enumerate()
                .map(|(n, &z)| z * Complex64::cis(kernel_phase(p, nu, f.time(n))))
                .sum();
            s * norm
        })
        .collect()
}

/// `f(t) exp(i (p t^2 + q t))` on the signal's own grid.
pub fn chirp_modulate(f: &Signal, p: f64, q: f64) -> Signal {
    if p == 0.0 && q == 0.0 {
        return f.clone();
    }
    f.map(|t, z| z * Complex64::cis(p * t * t + q * t))
}
