use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::{Fft, FftPlanner};

use super::{SourceGrid, TfKind, TfMap};
use crate::error::{Error, Result};
use crate::qpft::{chirp_modulate, ParamSet};
use crate::signal::Signal;

/// Smallest signal length the engines accept.
pub const MIN_SAMPLES: usize = 8;

/// `f_{C,E}[n+m] * conj(f_{A,D}[n-m])` at lag `2 m dt`; with no parameter set
/// the unmodulated product `f[n+m] conj(f[n-m])`. Indices off the grid
/// contribute zero.
pub fn lag_product(f: &Signal, params: Option<&ParamSet>, n: isize, m: isize) -> Complex64 {
    let (i, j) = (n + m, n - m);
    let x = f.at(i);
    let y = f.at(j);
    if x == Complex64::default() || y == Complex64::default() {
        return Complex64::default();
    }
    match params {
        None => x * y.conj(),
        Some(p) => {
            let ti = f.time(i as usize);
            let tj = f.time(j as usize);
            let phase = p.c() * ti * ti + p.e() * ti - p.a() * tj * tj - p.d() * tj;
            x * y.conj() * Complex64::cis(phase)
        }
    }
}

fn validate(kind: TfKind, params: Option<&ParamSet>, f: &Signal) -> Result<()> {
    match (kind.needs_params(), params.is_some()) {
        (true, false) => return Err(Error::MissingParams(kind.name())),
        (false, true) => return Err(Error::UnexpectedParams(kind.name())),
        _ => {}
    }
    if f.len() < MIN_SAMPLES {
        return Err(Error::GridTooSmall {
            min: MIN_SAMPLES,
            got: f.len(),
        });
    }
    Ok(())
}

/// Per-kind constants of the discrete engine.
struct Layout {
    /// Effective `B` of the oscillatory factor `exp(i B v x)`; `-1` for WD/AF.
    b_eff: f64,
    /// Quadrature step of the inner sum.
    step: f64,
    /// Transform length.
    len: usize,
}

impl Layout {
    fn new(kind: TfKind, params: Option<&ParamSet>, f: &Signal) -> Self {
        Self::of_grid(kind, params, &SourceGrid::of(f))
    }

    fn of_grid(kind: TfKind, params: Option<&ParamSet>, src: &SourceGrid) -> Self {
        let b_eff = params.filter(|_| kind.needs_params()).map_or(-1.0, |p| p.b());
        let step = if kind.is_wd_family() { 2.0 * src.dt } else { src.dt };
        Self {
            b_eff,
            step,
            len: src.n,
        }
    }

    fn freq_scale(&self) -> f64 {
        2.0 * PI / (self.len as f64 * self.step * self.b_eff.abs())
    }

    fn half(&self) -> isize {
        (self.len / 2) as isize
    }

    fn freq_axis(&self) -> Vec<f64> {
        let scale = self.freq_scale();
        (0..self.len)
            .map(|c| (c as isize - self.half()) as f64 * scale)
            .collect()
    }

    /// FFT bin holding ascending column `c`.
    fn bin(&self, c: usize) -> usize {
        (c as isize - self.half()).rem_euclid(self.len as isize) as usize
    }
}

/// Frequency of (possibly off-grid) column index `col`, by the axis formula.
pub(crate) fn freq_at(kind: TfKind, params: Option<&ParamSet>, src: &SourceGrid, col: isize) -> f64 {
    let layout = Layout::of_grid(kind, params, src);
    (col - layout.half()) as f64 * layout.freq_scale()
}

/// Per-column factor applied after the FFT: the outer phase of the kind, the
/// quadrature weight, and for the AF family the `exp(i B v t0)` left over
/// from `t_n = t0 + n dt`. Everything else in a column is periodic in `v`.
pub(crate) fn column_factor(
    kind: TfKind,
    params: Option<&ParamSet>,
    src: &SourceGrid,
    nu: f64,
) -> Complex64 {
    let layout = Layout::of_grid(kind, params, src);
    let mut z = match (kind, params) {
        (TfKind::Qwd | TfKind::Qaf, Some(p)) => {
            p.sqrt_b_over_2pi_i() * Complex64::cis(p.c() * nu * nu + p.e() * nu)
        }
        (TfKind::Aqwd | TfKind::Aqaf, Some(p)) => {
            p.b().abs() * Complex64::cis((p.a() - p.c()) * nu * nu + (p.d() - p.e()) * nu)
        }
        _ => Complex64::new(1.0, 0.0),
    } * layout.step;
    if !kind.is_wd_family() {
        z *= Complex64::cis(layout.b_eff * nu * src.t0);
    }
    z
}

fn outer_axis(kind: TfKind, f: &Signal) -> Vec<f64> {
    if kind.is_wd_family() {
        f.times().collect()
    } else {
        let half = (f.len() / 2) as isize;
        (-half..half).map(|m| 2.0 * m as f64 * f.dt()).collect()
    }
}

/// Outer (time or lag) axis and ascending frequency axis of `compute_tfd`.
///
/// `v_k = 2 pi k / (M * step * |B|)` with `step = 2 dt` for the WD family,
/// `dt` for the AF family, `M = N`, `k in [-M/2, M/2)`; `|B| = 1` for WD/AF.
pub fn tf_axes(kind: TfKind, params: Option<&ParamSet>, f: &Signal) -> Result<(Vec<f64>, Vec<f64>)> {
    validate(kind, params, f)?;
    let layout = Layout::new(kind, params, f);
    Ok((outer_axis(kind, f), layout.freq_axis()))
}

/// Computes one of the six distributions of `f` on the grid of [`tf_axes`].
pub fn compute_tfd(kind: TfKind, params: Option<&ParamSet>, f: &Signal) -> Result<TfMap> {
    validate(kind, params, f)?;
    let layout = Layout::new(kind, params, f);
    let outer = outer_axis(kind, f);
    let freq = layout.freq_axis();
    let n = f.len();
    let dt = f.dt();

    let (g1, g2) = match (kind, params) {
        (TfKind::Aqwd | TfKind::Aqaf, Some(p)) => (
            chirp_modulate(f, p.c(), p.e()).into_samples(),
            chirp_modulate(f, p.a(), p.d()).into_samples(),
        ),
        _ => (f.samples().to_vec(), f.samples().to_vec()),
    };

    let src = SourceGrid::of(f);
    let col_factor: Vec<Complex64> = freq
        .iter()
        .map(|&nu| column_factor(kind, params, &src, nu))
        .collect();

    // inner-variable chirp of the QWD/QAF kernel: exp(i (A x^2 + D x))
    let inner_chirp = |x: f64| -> Complex64 {
        match (kind, params) {
            (TfKind::Qwd | TfKind::Qaf, Some(p)) => Complex64::cis(p.a() * x * x + p.d() * x),
            _ => Complex64::new(1.0, 0.0),
        }
    };

    let fft: Arc<dyn Fft<f64>> = {
        let mut planner = FftPlanner::new();
        if layout.b_eff < 0.0 {
            planner.plan_fft_forward(layout.len)
        } else {
            planner.plan_fft_inverse(layout.len)
        }
    };

    let rows = outer.len();
    let cols = freq.len();
    let mut values = vec![Complex64::default(); rows * cols];
    let ni = n as isize;
    let half = layout.half();

    values
        .par_chunks_mut(cols)
        .enumerate()
        .for_each_init(
            || {
                (
                    vec![Complex64::default(); layout.len],
                    vec![Complex64::default(); fft.get_inplace_scratch_len()],
                )
            },
            |(buf, scratch), (row, out)| {
                buf.iter_mut().for_each(|z| *z = Complex64::default());
                if kind.is_wd_family() {
                    let t = row as isize;
                    let reach = t.min(ni - 1 - t);
                    for m in -reach..=reach {
                        let p = g1[(t + m) as usize] * g2[(t - m) as usize].conj();
                        let lag = 2.0 * m as f64 * dt;
                        buf[m.rem_euclid(layout.len as isize) as usize] = p * inner_chirp(lag);
                    }
                } else {
                    let m = row as isize - half;
                    let am = m.abs();
                    for t in am..(ni - am) {
                        let p = g1[(t + m) as usize] * g2[(t - m) as usize].conj();
                        buf[t as usize] = p * inner_chirp(f.time(t as usize));
                    }
                }
                fft.process_with_scratch(buf, scratch);
                for (c, o) in out.iter_mut().enumerate() {
                    *o = buf[layout.bin(c)] * col_factor[c];
                }
            },
        );

    TfMap::new(values, outer, freq, kind, params.copied(), SourceGrid::of(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::signal::{make_lfm, LfmComponent};

    fn ramp(n: usize) -> Signal {
        Signal::symmetric(1.0, n, |t| Complex64::new(1.0 + t, 0.5 * t * t)).unwrap()
    }

    #[test]
    fn lag_product_zero_lag() {
        let f = ramp(33);
        let p = ParamSet::new(0.4, -1.3, 1.1, 0.3, -0.8).unwrap();
        for n in [0isize, 5, 16, 32] {
            let t = f.time(n as usize);
            let z = f.at(n);
            let want = z.norm_sqr()
                * Complex64::cis((p.c() - p.a()) * t * t + (p.e() - p.d()) * t);
            assert!((lag_product(&f, Some(&p), n, 0) - want).norm() < 1e-14);
        }
        let reduced = ParamSet::new(0.7, -2.0, 0.7, 1.5, 1.5).unwrap();
        for n in 0..33isize {
            let got = lag_product(&f, Some(&reduced), n, 0);
            assert!((got.re - f.at(n).norm_sqr()).abs() < 1e-13 && got.im.abs() < 1e-13);
        }
    }

    #[test]
    fn lag_product_out_of_range_is_zero() {
        let f = ramp(16);
        assert_eq!(lag_product(&f, None, 2, 3), Complex64::default());
        assert_eq!(lag_product(&f, None, 14, 2), Complex64::default());
    }

    #[test]
    fn lag_product_matches_lfm_integrand() {
        let comp = LfmComponent::new(1.0, 0.1, 0.2);
        let r = make_lfm(&comp, 10.0, 201).unwrap();
        let p = ParamSet::new(0.0, -1.0, 0.0, 2.0, 2.0).unwrap();
        for (n, m) in [(100isize, 0isize), (100, 37), (60, -20), (150, 45)] {
            let t = r.time(n as usize);
            let lag = 2.0 * m as f64 * r.dt();
            let (x, y) = (t + lag / 2.0, t - lag / 2.0);
            let want = Complex64::cis(0.1 * x + 0.2 * x * x)
                * Complex64::cis(-(0.1 * y + 0.2 * y * y))
                * Complex64::cis(2.0 * x - 2.0 * y);
            assert!((lag_product(&r, Some(&p), n, m) - want).norm() < 1e-12);
        }
    }

    #[test]
    fn axes_follow_grid_formula() {
        let f = Signal::from_fn(0.0, 0.1, 256, |_| Complex64::new(1.0, 0.0)).unwrap();
        let (outer, freq) = tf_axes(TfKind::Wd, None, &f).unwrap();
        assert_eq!(outer.len(), 256);
        let want = 2.0 * PI / (256.0 * 0.2);
        assert!((freq[1] - freq[0] - want).abs() < 1e-14);
        assert_eq!(freq[128], 0.0);

        let p1 = ParamSet::new(0.0, -1.0, 0.0, 0.0, 0.0).unwrap();
        let p2 = ParamSet::new(0.0, -2.0, 0.0, 0.0, 0.0).unwrap();
        let (_, f1) = tf_axes(TfKind::Aqwd, Some(&p1), &f).unwrap();
        let (_, f2) = tf_axes(TfKind::Aqwd, Some(&p2), &f).unwrap();
        let span = |v: &[f64]| v[v.len() - 1] - v[0];
        assert!((span(&f2) - span(&f1) / 2.0).abs() < 1e-12);

        let (lags, _) = tf_axes(TfKind::Af, None, &f).unwrap();
        assert_eq!(lags.len(), 256);
        assert!((lags[0] + 25.6).abs() < 1e-12 && lags[128] == 0.0);
    }

    #[test]
    fn axes_match_computed_map() {
        let f = ramp(40);
        let p = ParamSet::new(0.2, 1.5, -0.3, 0.1, 0.0).unwrap();
        for kind in TfKind::ALL {
            let params = kind.needs_params().then_some(&p);
            let (outer, freq) = tf_axes(kind, params, &f).unwrap();
            let w = compute_tfd(kind, params, &f).unwrap();
            assert_eq!(w.outer_axis(), outer.as_slice());
            assert_eq!(w.freq_axis(), freq.as_slice());
        }
    }

    #[test]
    fn parameter_presence_is_checked() {
        let f = ramp(16);
        let p = ParamSet::classical();
        assert_eq!(compute_tfd(TfKind::Aqwd, None, &f), Err(Error::MissingParams("AQWD")));
        assert_eq!(compute_tfd(TfKind::Wd, Some(&p), &f), Err(Error::UnexpectedParams("WD")));
        let small = ramp(7);
        assert!(matches!(
            compute_tfd(TfKind::Wd, None, &small),
            Err(Error::GridTooSmall { .. })
        ));
    }

    #[test]
    fn extended_columns_continue_the_sum() {
        let f = ramp(24);
        let p = ParamSet::new(0.3, -1.4, 0.8, 0.2, -0.6).unwrap();
        let n = f.len() as isize;
        for kind in [TfKind::Aqwd, TfKind::Aqaf] {
            let w = compute_tfd(kind, Some(&p), &f).unwrap();
            let m = w.cols() as isize;
            for (row, col) in [(3usize, 2 + m), (10, -5), (20, 2 * m - 1), (7, 4)] {
                let nu = freq_at(kind, Some(&p), &w.source(), col);
                let outer = p.b().abs()
                    * Complex64::cis((p.a() - p.c()) * nu * nu + (p.d() - p.e()) * nu);
                let direct: Complex64 = if kind == TfKind::Aqwd {
                    (-n..n)
                        .map(|j| {
                            lag_product(&f, Some(&p), row as isize, j)
                                * Complex64::cis(p.b() * nu * 2.0 * j as f64 * f.dt())
                        })
                        .sum::<Complex64>()
                        * 2.0
                        * f.dt()
                } else {
                    let lag = row as isize - n / 2;
                    (0..n)
                        .map(|t| {
                            lag_product(&f, Some(&p), t, lag)
                                * Complex64::cis(p.b() * nu * f.time(t as usize))
                        })
                        .sum::<Complex64>()
                        * f.dt()
                };
                let got = w.extended(row as isize, col);
                assert!((got - outer * direct).norm() < 1e-12, "{kind} {row} {col}");
            }
            assert_eq!(w.extended(-1, 3), Complex64::default());
        }
    }

    #[test]
    fn zero_signal_gives_zero_map() {
        let z = Signal::symmetric(1.0, 32, |_| Complex64::default()).unwrap();
        let p = ParamSet::new(1.0, -2.0, 1.0, 2.0, 1.0).unwrap();
        for kind in TfKind::ALL {
            let w = compute_tfd(kind, kind.needs_params().then_some(&p), &z).unwrap();
            assert!(w.values().iter().all(|v| v.norm() == 0.0), "{kind}");
        }
    }
}
