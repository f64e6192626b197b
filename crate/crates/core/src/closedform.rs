//! Closed forms for LFM chirps: auto and cross terms of the AQWD/AQAF, the
//! QWD auto term, and the straight ridges they concentrate on when `A = C`.

use std::f64::consts::FRAC_PI_4;
use std::sync::OnceLock;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::qpft::ParamSet;
use crate::signal::LfmComponent;
use crate::tfd::TfKind;

/// `v = slope * x + intercept` in the `(t, v)` or `(lag, v)` plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineModel {
    pub slope: f64,
    pub intercept: f64,
}

impl LineModel {
    pub fn new(slope: f64, intercept: f64) -> Result<Self> {
        if !(slope.is_finite() && intercept.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "line coefficients must be finite, got ({slope}, {intercept})"
            )));
        }
        Ok(Self { slope, intercept })
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.slope * x + self.intercept
    }
}

/// Unnormalized `sin(x)/x`, `sinc(0) = 1`.
pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-8 {
        1.0 - x * x / 6.0
    } else {
        x.sin() / x
    }
}

const GL_ORDER: usize = 10;

/// Nodes and weights of 10-point Gauss-Legendre on [-1, 1].
fn gauss_legendre() -> &'static [(f64, f64); GL_ORDER] {
    static RULE: OnceLock<[(f64, f64); GL_ORDER]> = OnceLock::new();
    RULE.get_or_init(|| {
        let n = GL_ORDER;
        let mut rule = [(0.0, 0.0); GL_ORDER];
        for (i, slot) in rule.iter_mut().enumerate() {
            let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                // P_n(x) and P_n'(x) by the three-term recurrence
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let k = k as f64;
                    let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-16 {
                    break;
                }
            }
            *slot = (x, 2.0 / ((1.0 - x * x) * dp * dp));
        }
        rule
    })
}

/// `int_a^b exp(i(alpha x^2 + beta x)) dx`.
///
/// `alpha = 0` uses the antiderivative; otherwise composite 10-point
/// Gauss-Legendre with panels short enough that the phase moves by at most
/// pi/4 across each.
pub fn fresnel_segment(alpha: f64, beta: f64, a: f64, b: f64) -> Complex64 {
    let len = b - a;
    if len == 0.0 {
        return Complex64::default();
    }
    if alpha == 0.0 {
        if beta == 0.0 {
            return Complex64::new(len, 0.0);
        }
        // (e^{i beta b} - e^{i beta a}) / (i beta), written around the midpoint
        // to avoid cancellation for small beta * len
        let mid = 0.5 * (a + b);
        return Complex64::cis(beta * mid) * len * sinc(0.5 * beta * len);
    }
    let slope = (2.0 * alpha * a + beta).abs().max((2.0 * alpha * b + beta).abs());
    let by_slope = slope * len / FRAC_PI_4;
    let by_curvature = (alpha.abs() * len * len / FRAC_PI_4).sqrt();
    let panels = by_slope.max(by_curvature).ceil().max(1.0) as usize;
    let h = len / panels as f64;
    let rule = gauss_legendre();
    let mut acc = Complex64::default();
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        let mut panel = Complex64::default();
        for &(x, w) in rule {
            let s = mid + 0.5 * h * x;
            panel += w * Complex64::cis(alpha * s * s + beta * s);
        }
        acc += panel * (0.5 * h);
    }
    acc
}

fn require_kind(kind: TfKind, allowed: &[TfKind]) -> Result<()> {
    if allowed.contains(&kind) {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!(
            "{kind} has no closed form here (supported: {})",
            allowed.iter().map(|k| k.name()).collect::<Vec<_>>().join(", ")
        )))
    }
}

fn require_duration(duration: f64) -> Result<()> {
    if duration > 0.0 && duration.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("duration must be positive, got {duration}")))
    }
}

/// Integral over `[-T/2, T/2]` of `exp(i(alpha s^2 + beta s))`, in sinc form
/// when `alpha = 0`.
fn segment(alpha: f64, beta: f64, duration: f64) -> Complex64 {
    let h = 0.5 * duration;
    if alpha == 0.0 {
        Complex64::new(duration * sinc(h * beta), 0.0)
    } else {
        fresnel_segment(alpha, beta, -h, h)
    }
}

/// Closed-form AQWD, AQAF or QWD of the chirp `comp` whose lag (AQWD, QWD) or
/// time (AQAF) integral runs over `[-T/2, T/2]`; `point` is `(t, v)` or
/// `(lag, v)`.
pub fn lfm_auto_analytic(
    kind: TfKind,
    params: &ParamSet,
    comp: &LfmComponent,
    duration: f64,
    point: (f64, f64),
) -> Result<Complex64> {
    require_kind(kind, &[TfKind::Aqwd, TfKind::Aqaf, TfKind::Qwd])?;
    require_duration(duration)?;
    let (a, b, c, d, e) = params.as_tuple();
    let (x, nu) = point;
    let (xi, nu0) = (comp.xi0, comp.nu0);
    let power = comp.amp.norm_sqr();
    Ok(match kind {
        TfKind::Aqwd => {
            let beta = (2.0 * xi + c + a) * x + b * nu + nu0 + 0.5 * (d + e);
            let phase = (a - c) * (nu * nu - x * x) + (d - e) * (nu - x);
            power * b.abs() * Complex64::cis(phase) * segment(0.25 * (c - a), beta, duration)
        }
        TfKind::Aqaf => {
            let beta = (2.0 * xi + c + a) * x + b * nu + e - d;
            let phase = (a - c) * (nu * nu - 0.25 * x * x)
                + (d - e) * nu
                + 0.5 * (d + e) * x
                + nu0 * x;
            power * b.abs() * Complex64::cis(phase) * segment(c - a, beta, duration)
        }
        _ => {
            let beta = b * nu + nu0 + 2.0 * xi * x + d;
            params.sqrt_b_over_2pi_i()
                * power
                * Complex64::cis(c * nu * nu + e * nu)
                * segment(a, beta, duration)
        }
    })
}

/// Closed-form cross term `int f1(x + s/2) conj f2(x - s/2) ...` of the AQWD
/// or AQAF kernel for two chirps; `comp1 == comp2` gives the auto term.
pub fn cross_term_analytic(
    kind: TfKind,
    params: &ParamSet,
    comp1: &LfmComponent,
    comp2: &LfmComponent,
    duration: f64,
    point: (f64, f64),
) -> Result<Complex64> {
    require_kind(kind, &[TfKind::Aqwd, TfKind::Aqaf])?;
    require_duration(duration)?;
    let (a, b, c, d, e) = params.as_tuple();
    let (x, nu) = point;
    let amp = comp1.amp * comp2.amp.conj() * b.abs();
    let (xs, xd) = (comp1.xi0 + comp2.xi0, comp1.xi0 - comp2.xi0);
    let (ns, nd) = (comp1.nu0 + comp2.nu0, comp1.nu0 - comp2.nu0);
    Ok(if kind == TfKind::Aqwd {
        let m = 0.25 * (xd + c - a);
        let beta = (xs + a + c) * x + b * nu + 0.5 * (d + e) + 0.5 * ns;
        let phase = (a - c) * (nu * nu - x * x) + (d - e) * (nu - x) + xd * x * x + nd * x;
        amp * Complex64::cis(phase) * segment(m, beta, duration)
    } else {
        let big_n = xd + c - a;
        let beta = (xs + c + a) * x + b * nu + nd + e - d;
        let phase = (a - c) * (nu * nu - 0.25 * x * x)
            + (d - e) * nu
            + 0.5 * (d + e) * x
            + 0.25 * xd * x * x
            + 0.5 * ns * x;
        amp * Complex64::cis(phase) * segment(big_n, beta, duration)
    })
}

/// Straight ridge of the AQWD or AQAF of `comp` in the `A = C` regime.
pub fn predicted_ridge(kind: TfKind, params: &ParamSet, comp: &LfmComponent) -> Result<LineModel> {
    require_kind(kind, &[TfKind::Aqwd, TfKind::Aqaf])?;
    let (a, b, c, d, e) = params.as_tuple();
    if a != c {
        return Err(Error::Regime(format!(
            "ridge is a straight line only when A = C (A = {a}, C = {c})"
        )));
    }
    let slope = -(2.0 * comp.xi0 + 2.0 * a) / b;
    let intercept = if kind == TfKind::Aqwd {
        -(comp.nu0 + 0.5 * (d + e)) / b
    } else {
        -(e - d) / b
    };
    LineModel::new(slope, intercept)
}
