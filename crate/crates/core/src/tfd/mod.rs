//! Bilinear time-frequency distributions: WD, AF, QWD, QAF, AQWD, AQAF.
//!
//! All six share one discrete lag product. With `lag = 2 m dt` the half-lag
//! points `t +- lag/2` fall on samples `n +- m`, so no interpolation happens
//! inside the bilinear kernel. The frequency grid is chosen so that the
//! oscillatory factor at integer indices is an exact DFT twiddle; the inner
//! sums are then FFTs of chirp-premultiplied lag products.

mod engine;

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qpft::ParamSet;
use crate::signal::Signal;

pub use engine::{compute_tfd, lag_product, tf_axes, MIN_SAMPLES};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum TfKind {
    Wd,
    Af,
    Qwd,
    Qaf,
    Aqwd,
    Aqaf,
}

impl TfKind {
    pub const ALL: [TfKind; 6] = [
        TfKind::Wd,
        TfKind::Af,
        TfKind::Qwd,
        TfKind::Qaf,
        TfKind::Aqwd,
        TfKind::Aqaf,
    ];

    pub fn needs_params(self) -> bool {
        !matches!(self, TfKind::Wd | TfKind::Af)
    }

    /// Rows indexed by time (WD family) rather than by lag (AF family).
    pub fn is_wd_family(self) -> bool {
        matches!(self, TfKind::Wd | TfKind::Qwd | TfKind::Aqwd)
    }

    pub fn name(self) -> &'static str {
        match self {
            TfKind::Wd => "WD",
            TfKind::Af => "AF",
            TfKind::Qwd => "QWD",
            TfKind::Qaf => "QAF",
            TfKind::Aqwd => "AQWD",
            TfKind::Aqaf => "AQAF",
        }
    }
}

impl fmt::Display for TfKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TfKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "wd" => Ok(TfKind::Wd),
            "af" => Ok(TfKind::Af),
            "qwd" => Ok(TfKind::Qwd),
            "qaf" => Ok(TfKind::Qaf),
            "aqwd" => Ok(TfKind::Aqwd),
            "aqaf" => Ok(TfKind::Aqaf),
            other => Err(Error::InvalidArgument(format!("unknown distribution kind {other:?}"))),
        }
    }
}

/// Sampling grid of the signal a map was computed from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SourceGrid {
    pub n: usize,
    pub t0: f64,
    pub dt: f64,
}

impl SourceGrid {
    pub fn of(f: &Signal) -> Self {
        Self {
            n: f.len(),
            t0: f.t0(),
            dt: f.dt(),
        }
    }

    pub fn time(&self, n: usize) -> f64 {
        self.t0 + n as f64 * self.dt
    }

    /// Index of `t = 0` on the source grid, if present.
    pub fn zero_index(&self) -> Option<usize> {
        let pos = -self.t0 / self.dt;
        let idx = pos.round();
        ((pos - idx).abs() <= 1e-9 && idx >= 0.0 && (idx as usize) < self.n)
            .then_some(idx as usize)
    }
}

/// A complex distribution sampled on (time or lag) x frequency.
#[derive(Debug, Clone, PartialEq)]
pub struct TfMap {
    values: Vec<Complex64>,
    outer_axis: Vec<f64>,
    freq_axis: Vec<f64>,
    kind: TfKind,
    params: Option<ParamSet>,
    source: SourceGrid,
}

impl TfMap {
    pub fn new(
        values: Vec<Complex64>,
        outer_axis: Vec<f64>,
        freq_axis: Vec<f64>,
        kind: TfKind,
        params: Option<ParamSet>,
        source: SourceGrid,
    ) -> Result<Self> {
        if values.len() != outer_axis.len() * freq_axis.len() {
            return Err(Error::InvalidArgument(format!(
                "{} values do not fill a {}x{} map",
                values.len(),
                outer_axis.len(),
                freq_axis.len()
            )));
        }
        if outer_axis.is_empty() || freq_axis.is_empty() {
            return Err(Error::InvalidArgument("empty axis".into()));
        }
        if !strictly_increasing(&outer_axis) || !strictly_increasing(&freq_axis) {
            return Err(Error::InvalidArgument("axes must be strictly increasing".into()));
        }
        if kind.needs_params() != params.is_some() {
            return Err(if kind.needs_params() {
                Error::MissingParams(kind.name())
            } else {
                Error::UnexpectedParams(kind.name())
            });
        }
        Ok(Self {
            values,
            outer_axis,
            freq_axis,
            kind,
            params,
            source,
        })
    }

    pub fn rows(&self) -> usize {
        self.outer_axis.len()
    }

    pub fn cols(&self) -> usize {
        self.freq_axis.len()
    }

    pub fn kind(&self) -> TfKind {
        self.kind
    }

    pub fn params(&self) -> Option<&ParamSet> {
        self.params.as_ref()
    }

    pub fn source(&self) -> SourceGrid {
        self.source
    }

    pub fn outer_axis(&self) -> &[f64] {
        &self.outer_axis
    }

    pub fn freq_axis(&self) -> &[f64] {
        &self.freq_axis
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    #[inline]
    pub fn get(&self, row: usize, col: usize) -> Complex64 {
        self.values[row * self.cols() + col]
    }

    pub fn row(&self, row: usize) -> &[Complex64] {
        let w = self.cols();
        &self.values[row * w..(row + 1) * w]
    }

    /// Frequency bin width.
    pub fn freq_step(&self) -> f64 {
        if self.cols() < 2 {
            return 0.0;
        }
        self.freq_axis[1] - self.freq_axis[0]
    }

    /// Outer-axis step (`dt` for the WD family, `2 dt` for the AF family).
    pub fn outer_step(&self) -> f64 {
        if self.rows() < 2 {
            return 0.0;
        }
        self.outer_axis[1] - self.outer_axis[0]
    }

    /// Column whose frequency is the negation of `col`'s, if on the grid.
    pub fn negated_col(&self, col: usize) -> Option<usize> {
        let mid = self.cols() / 2;
        let k = col as isize - mid as isize;
        let j = mid as isize - k;
        (j >= 0 && (j as usize) < self.cols()).then_some(j as usize)
    }

    /// Row whose outer value is the negation of `row`'s, if on the grid.
    pub fn negated_row(&self, row: usize) -> Option<usize> {
        if self.kind.is_wd_family() {
            let c = -2.0 * self.source.t0 / self.source.dt;
            let ci = c.round();
            if (c - ci).abs() > 1e-9 {
                return None;
            }
            let j = ci as isize - row as isize;
            (j >= 0 && (j as usize) < self.rows()).then_some(j as usize)
        } else {
            let mid = self.rows() / 2;
            let m = row as isize - mid as isize;
            let j = mid as isize - m;
            (j >= 0 && (j as usize) < self.rows()).then_some(j as usize)
        }
    }

    /// Value at `row` and column index `col`, where `col` may lie outside
    /// `[0, cols)`: the discrete sum behind each column is periodic in
    /// frequency with period `cols * freq_step`, so off-grid columns are
    /// recovered exactly by wrapping and re-applying the column factor.
    /// Rows outside the map read as zero.
    pub fn extended(&self, row: isize, col: isize) -> Complex64 {
        if row < 0 || row as usize >= self.rows() {
            return Complex64::default();
        }
        let cols = self.cols() as isize;
        let wrapped = col.rem_euclid(cols);
        let v = self.get(row as usize, wrapped as usize);
        if wrapped == col {
            return v;
        }
        let p = self.params.as_ref();
        let nu = engine::freq_at(self.kind, p, &self.source, col);
        let nu_w = self.freq_axis[wrapped as usize];
        v * engine::column_factor(self.kind, p, &self.source, nu)
            / engine::column_factor(self.kind, p, &self.source, nu_w)
    }

    /// Row index of the outer value `-x` for row `row` (may be off the map).
    pub fn mirrored_row(&self, row: usize) -> Option<isize> {
        if self.kind.is_wd_family() {
            let c = -2.0 * self.source.t0 / self.source.dt;
            let ci = c.round();
            ((c - ci).abs() <= 1e-9).then_some(ci as isize - row as isize)
        } else {
            Some(2 * (self.rows() / 2) as isize - row as isize)
        }
    }

    /// Column index of the frequency `-v` for column `col` (may be off the map).
    pub fn mirrored_col(&self, col: usize) -> isize {
        2 * (self.cols() / 2) as isize - col as isize
    }

    pub fn max_abs(&self) -> f64 {
        self.values.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius(&self) -> f64 {
        self.values.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

fn strictly_increasing(v: &[f64]) -> bool {
    v.iter().all(|x| x.is_finite()) && v.windows(2).all(|w| w[0] < w[1])
}

/// `||a - b||_F / max(||a||_F, ||b||_F, 1e-300)`.
pub fn rel_frobenius(a: &[Complex64], b: &[Complex64]) -> f64 {
    assert_eq!(a.len(), b.len());
    let diff: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let na = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let nb = b.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    let den = na.max(nb);
    if den == 0.0 {
        0.0
    } else {
        diff / den
    }
}
