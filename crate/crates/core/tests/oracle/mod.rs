//! Brute-force double-loop quadrature of the distribution integrals, used as
//! an independent reference for the FFT engines.
#![allow(dead_code)]

use std::f64::consts::PI;

use num_complex::Complex64;
use qptf_core::{ParamSet, Signal, TfKind};

/// Integrand factor multiplying `f(x+) conj f(x-)`, given `(x+, x-, outer, inner, nu)`
/// where `outer` is `t` (WD family) or the lag (AF family) and `inner` the
/// integration variable.
pub type Kernel<'a> = dyn Fn(f64, f64, f64, f64, f64) -> Complex64 + 'a;

pub struct Naive {
    pub outer: Vec<f64>,
    pub freq: Vec<f64>,
    pub values: Vec<Complex64>,
}

/// Ascending frequency grid `2 pi k / (N step |b|)`, `k in [-N/2, N - N/2)`.
pub fn freq_grid(n: usize, step: f64, b: f64) -> Vec<f64> {
    let h = (n / 2) as i64;
    (0..n as i64)
        .map(|c| 2.0 * PI * (c - h) as f64 / (n as f64 * step * b.abs()))
        .collect()
}

/// `sum_m f[n+m] conj f[n-m] K * 2 dt` over all in-range lags, per time row.
pub fn lag_integral(f: &Signal, freq: &[f64], kern: &Kernel) -> Naive {
    let n = f.len() as i64;
    let dt = f.dt();
    let s = f.samples();
    let mut values = Vec::with_capacity(f.len() * freq.len());
    for row in 0..n {
        let t = f.t0() + row as f64 * dt;
        for &nu in freq {
            let mut acc = Complex64::default();
            for m in -n..=n {
                let (i, j) = (row + m, row - m);
                if i < 0 || j < 0 || i >= n || j >= n {
                    continue;
                }
                let (xp, xm) = (f.t0() + i as f64 * dt, f.t0() + j as f64 * dt);
                let lag = 2.0 * m as f64 * dt;
                acc += s[i as usize] * s[j as usize].conj() * kern(xp, xm, t, lag, nu);
            }
            values.push(acc * 2.0 * dt);
        }
    }
    let outer = (0..n).map(|r| f.t0() + r as f64 * dt).collect();
    Naive { outer, freq: freq.to_vec(), values }
}

/// `sum_n f[n+m] conj f[n-m] K * dt` per lag row `m in [-N/2, N/2)`.
pub fn time_integral(f: &Signal, freq: &[f64], kern: &Kernel) -> Naive {
    let n = f.len() as i64;
    let dt = f.dt();
    let s = f.samples();
    let h = n / 2;
    let mut values = Vec::with_capacity(f.len() * freq.len());
    for m in -h..h {
        let lag = 2.0 * m as f64 * dt;
        for &nu in freq {
            let mut acc = Complex64::default();
            for k in 0..n {
                let (i, j) = (k + m, k - m);
                if i < 0 || j < 0 || i >= n || j >= n {
                    continue;
                }
                let t = f.t0() + k as f64 * dt;
                let (xp, xm) = (f.t0() + i as f64 * dt, f.t0() + j as f64 * dt);
                acc += s[i as usize] * s[j as usize].conj() * kern(xp, xm, lag, t, nu);
            }
            values.push(acc * dt);
        }
    }
    let outer = (-h..h).map(|m| 2.0 * m as f64 * dt).collect();
    Naive { outer, freq: freq.to_vec(), values }
}

fn sqrt_b_2pi_i(b: f64) -> Complex64 {
    (Complex64::new(b, 0.0) / Complex64::new(0.0, 2.0 * PI)).sqrt()
}

/// The defining integral of `kind`, evaluated cell by cell.
pub fn naive_tfd(kind: TfKind, params: Option<&ParamSet>, f: &Signal) -> Naive {
    let n = f.len();
    let dt = f.dt();
    let p = params.copied().unwrap_or_else(ParamSet::classical);
    let (a, b, c, d, e) = (p.a(), p.b(), p.c(), p.d(), p.e());
    let aq = move |xp: f64, xm: f64, nu: f64| {
        b.abs()
            * Complex64::cis((a - c) * nu * nu + (d - e) * nu)
            * Complex64::cis(c * xp * xp + e * xp - a * xm * xm - d * xm)
    };
    match kind {
        TfKind::Wd => lag_integral(f, &freq_grid(n, 2.0 * dt, 1.0), &|_, _, _, u, nu| {
            Complex64::cis(-nu * u)
        }),
        TfKind::Af => time_integral(f, &freq_grid(n, dt, 1.0), &|_, _, _, t, nu| {
            Complex64::cis(-nu * t)
        }),
        TfKind::Qwd => lag_integral(f, &freq_grid(n, 2.0 * dt, b), &|_, _, _, u, nu| {
            sqrt_b_2pi_i(b) * Complex64::cis(a * u * u + b * nu * u + c * nu * nu + d * u + e * nu)
        }),
        TfKind::Qaf => time_integral(f, &freq_grid(n, dt, b), &|_, _, _, t, nu| {
            sqrt_b_2pi_i(b) * Complex64::cis(a * t * t + b * nu * t + c * nu * nu + d * t + e * nu)
        }),
        TfKind::Aqwd => lag_integral(f, &freq_grid(n, 2.0 * dt, b), &|xp, xm, _, u, nu| {
            aq(xp, xm, nu) * Complex64::cis(b * nu * u)
        }),
        TfKind::Aqaf => time_integral(f, &freq_grid(n, dt, b), &|xp, xm, _, t, nu| {
            aq(xp, xm, nu) * Complex64::cis(b * nu * t)
        }),
    }
}

/// `|B| int f(t+u/2) f*(t-u/2) e^{i(2At+Bv+D)u} du` (A = C, D = E form).
pub fn reduced_wd(p: &ParamSet, f: &Signal) -> Naive {
    let (a, b, d) = (p.a(), p.b(), p.d());
    lag_integral(f, &freq_grid(f.len(), 2.0 * f.dt(), b), &|_, _, t, u, nu| {
        b.abs() * Complex64::cis((2.0 * a * t + b * nu + d) * u)
    })
}

/// `|B| int f(t+u/2) f*(t-u/2) e^{i(2Atu + Bvt + Du)} dt`.
pub fn reduced_af(p: &ParamSet, f: &Signal) -> Naive {
    let (a, b, d) = (p.a(), p.b(), p.d());
    time_integral(f, &freq_grid(f.len(), f.dt(), b), &|_, _, u, t, nu| {
        b.abs() * Complex64::cis(2.0 * a * t * u + b * nu * t + d * u)
    })
}

/// Linear-canonical-domain WD with matrix entries `(a, b, d)`:
/// `1/|b| e^{i(d-a) v^2/(2b)} int f_{a/2b}(t+u/2) f*_{d/2b}(t-u/2) e^{-i v u / b} du`.
pub fn lct_wd(a: f64, b: f64, d: f64, f: &Signal) -> Naive {
    lag_integral(f, &freq_grid(f.len(), 2.0 * f.dt(), 1.0 / b), &|xp, xm, _, u, nu| {
        Complex64::cis((d - a) * nu * nu / (2.0 * b))
            * Complex64::cis(a / (2.0 * b) * xp * xp - d / (2.0 * b) * xm * xm)
            * Complex64::cis(-nu * u / b)
            / b.abs()
    })
}

/// Ambiguity-function counterpart of [`lct_wd`].
pub fn lct_af(a: f64, b: f64, d: f64, f: &Signal) -> Naive {
    time_integral(f, &freq_grid(f.len(), f.dt(), 1.0 / b), &|xp, xm, _, t, nu| {
        Complex64::cis((d - a) * nu * nu / (2.0 * b))
            * Complex64::cis(a / (2.0 * b) * xp * xp - d / (2.0 * b) * xm * xm)
            * Complex64::cis(-nu * t / b)
            / b.abs()
    })
}

/// Random complex signal on a shifted, unevenly-offset grid.
pub fn random_signal(seed: u64, n: usize) -> Signal {
    // splitmix64; keeps the oracle free of the crate's own RNG plumbing
    let mut state = seed.wrapping_add(0x9E37_79B9_7F4A_7C15);
    let mut next = || {
        state = state.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        ((z ^ (z >> 31)) >> 11) as f64 / (1u64 << 53) as f64 * 2.0 - 1.0
    };
    let dt = 0.05 + 0.1 * next().abs();
    let t0 = -(n as f64) * dt / 2.0 + 0.3 * next();
    let samples = (0..n).map(|_| Complex64::new(next(), next())).collect();
    Signal::new(samples, t0, dt).unwrap()
}

pub fn rel_err(a: &[Complex64], b: &[Complex64]) -> f64 {
    let num: f64 = a.iter().zip(b).map(|(x, y)| (x - y).norm_sqr()).sum::<f64>().sqrt();
    let da: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let db: f64 = b.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    num / da.max(db).max(1e-300)
}

/// Composite Simpson on `[a, b]` with an even number of panels.
pub fn simpson(g: impl Fn(f64) -> Complex64, a: f64, b: f64, panels: usize) -> Complex64 {
    let panels = panels + panels % 2;
    let h = (b - a) / panels as f64;
    let mut acc = g(a) + g(b);
    for k in 1..panels {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * g(a + k as f64 * h);
    }
    acc * h / 3.0
}

fn lfm(c: &qptf_core::LfmComponent, t: f64) -> Complex64 {
    c.amp * Complex64::cis(c.nu0 * t + c.xi0 * t * t)
}

/// Defining AQWD (lag integral) or AQAF (time integral) of
/// `f1(x + s/2) conj f2(x - s/2)` over `[-T/2, T/2]`, by Simpson.
pub fn aq_cross_quadrature(
    kind: TfKind,
    p: &ParamSet,
    c1: &qptf_core::LfmComponent,
    c2: &qptf_core::LfmComponent,
    duration: f64,
    (x, nu): (f64, f64),
    panels: usize,
) -> Complex64 {
    let (a, b, c, d, e) = (p.a(), p.b(), p.c(), p.d(), p.e());
    let outer = b.abs() * Complex64::cis((a - c) * nu * nu + (d - e) * nu);
    let g = |s: f64| {
        let (t, u) = if kind == TfKind::Aqwd { (x, s) } else { (s, x) };
        let (xp, xm) = (t + u / 2.0, t - u / 2.0);
        let f1 = lfm(c1, xp) * Complex64::cis(c * xp * xp + e * xp);
        let f2 = lfm(c2, xm) * Complex64::cis(a * xm * xm + d * xm);
        f1 * f2.conj() * Complex64::cis(b * nu * s)
    };
    outer * simpson(g, -duration / 2.0, duration / 2.0, panels)
}

/// Defining QWD lag integral of a chirp over `[-T/2, T/2]`, by Simpson.
pub fn qwd_quadrature(
    p: &ParamSet,
    comp: &qptf_core::LfmComponent,
    duration: f64,
    (t, nu): (f64, f64),
    panels: usize,
) -> Complex64 {
    let (a, b, c, d, e) = (p.a(), p.b(), p.c(), p.d(), p.e());
    let norm = (Complex64::new(b, 0.0) / Complex64::new(0.0, 2.0 * PI)).sqrt();
    let g = |u: f64| {
        lfm(comp, t + u / 2.0)
            * lfm(comp, t - u / 2.0).conj()
            * Complex64::cis(a * u * u + b * nu * u + c * nu * nu + d * u + e * nu)
    };
    norm * simpson(g, -duration / 2.0, duration / 2.0, panels)
}
