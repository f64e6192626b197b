//! LFM detection from distribution ridges: per-row peak picking, greedy line
//! clustering, least-squares line fits and inversion of the ridge equations
//! back to the chirp's initial frequency and rate.

use rayon::prelude::*;

use crate::closedform::LineModel;
use crate::error::{Error, Result};
use crate::qpft::ParamSet;
use crate::signal::{add_awgn, Signal};
use crate::tfd::{compute_tfd, TfKind, TfMap};

/// Points further than this many frequency bins from a ridge's line start a
/// new ridge; also the half-width of the band treated as on-ridge when
/// measuring the background level.
pub const RIDGE_BINS: f64 = 3.0;

/// For each row, `(outer value, v)` of the largest-magnitude cell, kept when
/// that magnitude reaches `threshold_frac` times the map's maximum. An
/// all-zero map gives no points.
pub fn extract_ridge(w: &TfMap, threshold_frac: f64) -> Result<Vec<(f64, f64)>> {
    Ok(row_peaks(w, threshold_frac)?
        .into_iter()
        .map(|(r, c)| (w.outer_axis()[r], w.freq_axis()[c]))
        .collect())
}

fn row_peaks(w: &TfMap, threshold_frac: f64) -> Result<Vec<(usize, usize)>> {
    if !(threshold_frac > 0.0 && threshold_frac <= 1.0) {
        return Err(Error::InvalidArgument(format!(
            "threshold fraction must lie in (0, 1], got {threshold_frac}"
        )));
    }
    let global = w.max_abs();
    if global == 0.0 {
        return Ok(Vec::new());
    }
    let cut = threshold_frac * global;
    Ok((0..w.rows())
        .filter_map(|r| {
            let (c, mag) = w
                .row(r)
                .iter()
                .map(|z| z.norm())
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |best, (c, m)| if m > best.1 { (c, m) } else { best });
            (mag >= cut).then_some((r, c))
        })
        .collect())
}

/// Least-squares line through `points` and the RMS of its residuals.
pub fn fit_line(points: &[(f64, f64)]) -> Result<(LineModel, f64)> {
    if points.len() < 2 {
        return Err(Error::Fit(format!("need at least 2 points, got {}", points.len())));
    }
    let n = points.len() as f64;
    let mx = points.iter().map(|p| p.0).sum::<f64>() / n;
    let my = points.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = points.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let spread = points.iter().map(|p| p.0.abs()).fold(0.0, f64::max).max(1.0);
    if sxx <= 1e-24 * spread * spread * n {
        return Err(Error::Fit("points share a single x value".into()));
    }
    let slope = sxy / sxx;
    let line = LineModel::new(slope, my - slope * mx)?;
    let rmse = (points.iter().map(|p| (p.1 - line.eval(p.0)).powi(2)).sum::<f64>() / n).sqrt();
    Ok((line, rmse))
}

/// Chirp parameters read off a ridge line. `nu0` is unavailable from
/// ambiguity-type ridges, whose intercept does not depend on it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LfmEstimate {
    pub nu0: Option<f64>,
    pub xi0: f64,
}

/// Inverts the AQWD ridge `(2 xi0 + 2A) t + B v + nu0 + (D+E)/2 = 0` or the
/// AQAF ridge `(2 xi0 + 2A) lag + B v + E - D = 0`.
pub fn estimate_lfm_params(line: &LineModel, params: &ParamSet, kind: TfKind) -> Result<LfmEstimate> {
    let (a, b, c, d, e) = params.as_tuple();
    if !matches!(kind, TfKind::Aqwd | TfKind::Aqaf) {
        return Err(Error::InvalidArgument(format!("{kind} ridges are not inverted here")));
    }
    if a != c {
        return Err(Error::Regime(format!(
            "ridge is a straight line only when A = C (A = {a}, C = {c})"
        )));
    }
    let xi0 = -b * line.slope / 2.0 - a;
    let nu0 = (kind == TfKind::Aqwd).then(|| -b * line.intercept - 0.5 * (d + e));
    Ok(LfmEstimate { nu0, xi0 })
}

/// Ridge inversion for any kind. WD/AF use the classical point; QWD/QAF use
/// the `A = 0` ridge `B v + nu0 + 2 xi0 t + D = 0` (resp. `2 xi0 lag + B v + D = 0`)
/// whatever `A` is, which is what a reader of the contour plot would do.
pub fn nominal_estimate(kind: TfKind, params: Option<&ParamSet>, line: &LineModel) -> Result<LfmEstimate> {
    match kind {
        TfKind::Wd | TfKind::Af => estimate_lfm_params(
            line,
            &ParamSet::classical(),
            if kind == TfKind::Wd { TfKind::Aqwd } else { TfKind::Aqaf },
        ),
        TfKind::Qwd | TfKind::Qaf => {
            let p = params.ok_or(Error::MissingParams(kind.name()))?;
            Ok(LfmEstimate {
                xi0: -p.b() * line.slope / 2.0,
                nu0: (kind == TfKind::Qwd).then(|| -p.b() * line.intercept - p.d()),
            })
        }
        TfKind::Aqwd | TfKind::Aqaf => {
            estimate_lfm_params(line, params.ok_or(Error::MissingParams(kind.name()))?, kind)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DetectionStatus {
    Detected,
    /// No row passed the threshold, or too few did to fit a line.
    NoRidge,
    /// A line was fitted but cannot be inverted for this kind and parameter set.
    NoEstimate,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DetectionReport {
    pub kind: TfKind,
    pub params: Option<ParamSet>,
    pub status: DetectionStatus,
    /// Fit of the largest ridge.
    pub line: Option<LineModel>,
    pub nu0_hat: Option<f64>,
    pub xi0_hat: Option<f64>,
    /// Global peak over the median magnitude away from the ridge.
    pub peak_ratio: f64,
    pub n_ridges: usize,
    /// Fits of all ridges, by ascending intercept.
    pub ridges: Vec<LineModel>,
    pub fit_rmse: Option<f64>,
    pub n_points: usize,
}

impl DetectionReport {
    pub fn detected(&self) -> bool {
        self.status == DetectionStatus::Detected
    }
}

/// Running least-squares sums of one ridge.
#[derive(Default, Clone)]
struct Cluster {
    members: Vec<(f64, f64)>,
    sx: f64,
    sy: f64,
    sxx: f64,
    sxy: f64,
}

impl Cluster {
    fn push(&mut self, p: (f64, f64)) {
        self.members.push(p);
        self.sx += p.0;
        self.sy += p.1;
        self.sxx += p.0 * p.0;
        self.sxy += p.0 * p.1;
    }

    fn predict(&self, x: f64) -> f64 {
        let n = self.members.len() as f64;
        let det = n * self.sxx - self.sx * self.sx;
        if self.members.len() < 2 || det.abs() <= 1e-12 * n * self.sxx.max(1.0) {
            return self.members.last().map_or(0.0, |p| p.1);
        }
        let slope = (n * self.sxy - self.sx * self.sy) / det;
        (self.sy - slope * self.sx) / n + slope * x
    }
}

/// Greedy assignment of points (in order) to the nearest ridge within
/// [`RIDGE_BINS`] bins of its current line, else to a new ridge. Ridges with
/// fewer than `max(3, 5%)` of the points are discarded.
fn cluster_ridges(points: &[(f64, f64)], bin: f64) -> Vec<Vec<(f64, f64)>> {
    let mut clusters: Vec<Cluster> = Vec::new();
    for &p in points {
        let best = clusters
            .iter()
            .enumerate()
            .map(|(i, c)| (i, (p.1 - c.predict(p.0)).abs() / bin))
            .filter(|&(_, d)| d <= RIDGE_BINS)
            .min_by(|a, b| a.1.total_cmp(&b.1));
        match best {
            Some((i, _)) => clusters[i].push(p),
            None => {
                let mut c = Cluster::default();
                c.push(p);
                clusters.push(c);
            }
        }
    }
    let min_size = 3.max((0.05 * points.len() as f64).ceil() as usize);
    clusters
        .into_iter()
        .filter(|c| c.members.len() >= min_size)
        .map(|c| c.members)
        .collect()
}

fn median(mut v: Vec<f64>) -> f64 {
    if v.is_empty() {
        return 0.0;
    }
    let mid = v.len() / 2;
    let (_, m, _) = v.select_nth_unstable_by(mid, f64::total_cmp);
    let upper = *m;
    if v.len() % 2 == 1 {
        upper
    } else {
        let lower = v[..mid].iter().copied().fold(f64::NEG_INFINITY, f64::max);
        0.5 * (lower + upper)
    }
}

fn peak_ratio(w: &TfMap, peaks: &[(usize, usize)]) -> f64 {
    let global = w.max_abs();
    if global == 0.0 {
        return 0.0;
    }
    let band = RIDGE_BINS as usize;
    let mut on_ridge = vec![None; w.rows()];
    for &(r, c) in peaks {
        on_ridge[r] = Some(c);
    }
    let mut off = Vec::with_capacity(w.rows() * w.cols());
    for (r, peak) in on_ridge.iter().enumerate() {
        for (c, z) in w.row(r).iter().enumerate() {
            if peak.is_some_and(|p| c.abs_diff(p) <= band) {
                continue;
            }
            off.push(z.norm());
        }
    }
    let bg = median(off);
    if bg == 0.0 {
        f64::INFINITY
    } else {
        global / bg
    }
}

/// Ridge extraction, clustering, fitting and estimation on a computed map.
pub fn detect_from_map(w: &TfMap, threshold_frac: f64) -> Result<DetectionReport> {
    let peaks = row_peaks(w, threshold_frac)?;
    let points: Vec<(f64, f64)> = peaks
        .iter()
        .map(|&(r, c)| (w.outer_axis()[r], w.freq_axis()[c]))
        .collect();
    let mut report = DetectionReport {
        kind: w.kind(),
        params: w.params().copied(),
        status: DetectionStatus::NoRidge,
        line: None,
        nu0_hat: None,
        xi0_hat: None,
        peak_ratio: peak_ratio(w, &peaks),
        n_ridges: 0,
        ridges: Vec::new(),
        fit_rmse: None,
        n_points: points.len(),
    };
    let clusters = cluster_ridges(&points, w.freq_step());
    let mut fits: Vec<(usize, LineModel, f64)> = clusters
        .iter()
        .filter_map(|c| fit_line(c).ok().map(|(l, e)| (c.len(), l, e)))
        .collect();
    report.n_ridges = fits.len();
    report.ridges = fits.iter().map(|f| f.1).collect();
    report.ridges.sort_by(|a, b| a.intercept.total_cmp(&b.intercept));
    // largest ridge; earlier clusters win ties
    fits.sort_by_key(|f| std::cmp::Reverse(f.0));
    let Some(&(_, line, rmse)) = fits.first() else {
        return Ok(report);
    };
    report.line = Some(line);
    report.fit_rmse = Some(rmse);
    match nominal_estimate(w.kind(), w.params(), &line) {
        Ok(est) => {
            report.status = DetectionStatus::Detected;
            report.xi0_hat = Some(est.xi0);
            report.nu0_hat = est.nu0;
        }
        Err(_) => report.status = DetectionStatus::NoEstimate,
    }
    Ok(report)
}

/// `compute_tfd` followed by [`detect_from_map`].
pub fn run_detection(
    f: &Signal,
    params: Option<&ParamSet>,
    kind: TfKind,
    threshold_frac: f64,
) -> Result<DetectionReport> {
    let params = params.filter(|_| kind.needs_params());
    detect_from_map(&compute_tfd(kind, params, f)?, threshold_frac)
}

/// One cell of [`snr_sweep`].
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub kind: TfKind,
    pub snr_db: f64,
    pub seed: u64,
    pub outcome: std::result::Result<DetectionReport, Error>,
}

/// Detection over `kinds x snrs_db x seeds`, in that nesting order, with one
/// parameter set for every kind (ignored for WD/AF). See [`snr_sweep_with`].
pub fn snr_sweep(
    f_clean: &Signal,
    params: &ParamSet,
    kinds: &[TfKind],
    snrs_db: &[f64],
    seeds: &[u64],
    threshold_frac: f64,
) -> Result<Vec<SweepRow>> {
    let configs: Vec<_> = kinds.iter().map(|&k| (k, Some(*params))).collect();
    snr_sweep_with(f_clean, &configs, snrs_db, seeds, threshold_frac)
}

/// Like [`snr_sweep`] with a parameter set per kind. The noise realization
/// depends on `(seed, snr)` only, so every configuration sees the same noisy
/// signal. Per-cell failures land in [`SweepRow::outcome`].
pub fn snr_sweep_with(
    f_clean: &Signal,
    configs: &[(TfKind, Option<ParamSet>)],
    snrs_db: &[f64],
    seeds: &[u64],
    threshold_frac: f64,
) -> Result<Vec<SweepRow>> {
    if configs.is_empty() || snrs_db.is_empty() || seeds.is_empty() {
        return Err(Error::InvalidArgument("sweep lists must be nonempty".into()));
    }
    let cells: Vec<(TfKind, Option<ParamSet>, f64, u64)> = configs
        .iter()
        .flat_map(|&(k, p)| {
            snrs_db
                .iter()
                .flat_map(move |&s| seeds.iter().map(move |&seed| (k, p, s, seed)))
        })
        .collect();
    Ok(cells
        .into_par_iter()
        .map(|(kind, params, snr_db, seed)| {
            let outcome = add_awgn(f_clean, snr_db, seed)
                .and_then(|f| run_detection(&f, params.as_ref(), kind, threshold_frac));
            SweepRow {
                kind,
                snr_db,
                seed,
                outcome,
            }
        })
        .collect())
}
