//! Pipelines behind each subcommand.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use qptf_core::detect::{detect_from_map, snr_sweep_with, DetectionReport, SweepRow};
use qptf_core::properties::{standard_fixture, verify_property, PropertyId};
use qptf_core::signal::{add_awgn, make_gaussian_pair, make_multicomponent, LfmComponent};
use qptf_core::{compute_tfd, ParamSet, Signal, TfKind, TfMap};

use crate::args::*;
use crate::io::{read_signal_csv, read_tfmap_csv, write_heatmap, write_signal_csv, write_tfmap_csv, HeatmapMode};
use crate::{Outcome, UsageError};

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn build_signal(s: &SignalArgs) -> Result<Signal> {
    let clean = if let Some(path) = &s.input {
        read_signal_csv(path)?
    } else if let Some(c) = s.gaussian_pair {
        make_gaussian_pair(c, s.half_support, s.n)?
    } else if !s.lfm.is_empty() {
        make_multicomponent(&s.lfm, s.half_support, s.n)?
    } else {
        return Err(usage("one of --lfm, --gaussian-pair or --input is required"));
    };
    match s.snr_db {
        Some(snr) => Ok(add_awgn(&clean, snr, s.seed)?),
        None => Ok(clean),
    }
}

fn check_params(kind: TfKind, lambda: Option<&ParamSet>) -> Result<()> {
    match (kind.needs_params(), lambda.is_some()) {
        (true, false) => Err(usage(format!("--lambda is required for {kind}"))),
        (false, true) => Err(usage(format!("{kind} takes no --lambda"))),
        _ => Ok(()),
    }
}

fn ensure_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}

/// To the file when one is given, else to stdout.
fn write_to(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:?}")).unwrap_or_default()
}

fn lambda_fields(p: Option<&ParamSet>) -> String {
    match p {
        Some(p) => p.as_array().map(|v| format!("{v:?}")).join(","),
        None => ",,,,".into(),
    }
}

pub const DETECT_HEADER: &str =
    "kind,A,B,C,D,E,status,slope,intercept,nu0_hat,xi0_hat,peak_ratio,n_ridges,fit_rmse,n_points";

pub fn detect_row(r: &DetectionReport) -> String {
    format!(
        "{},{},{:?},{},{},{},{},{:?},{},{},{}",
        r.kind,
        lambda_fields(r.params.as_ref()),
        r.status,
        opt(r.line.map(|l| l.slope)),
        opt(r.line.map(|l| l.intercept)),
        opt(r.nu0_hat),
        opt(r.xi0_hat),
        r.peak_ratio,
        r.n_ridges,
        opt(r.fit_rmse),
        r.n_points
    )
}

pub fn generate(a: &GenerateArgs) -> Result<Outcome> {
    let f = build_signal(&a.signal)?;
    ensure_dir(&a.out.out_dir)?;
    write_signal_csv(&f, &a.out.out_dir.join(&a.name))?;
    Ok(Outcome::Success)
}

pub fn transform(a: &TransformArgs) -> Result<Outcome> {
    check_params(a.kind, a.lambda.as_ref())?;
    if let Some(k) = a.contour {
        if !(2..=256).contains(&k) {
            return Err(usage("--contour must be in 2..=256"));
        }
    }
    let f = build_signal(&a.signal)?;
    let w = compute_tfd(a.kind, a.lambda.as_ref(), &f)?;
    let base = a.name.clone().unwrap_or_else(|| a.kind.name().to_ascii_lowercase());
    ensure_dir(&a.out.out_dir)?;
    write_map_files(&w, &a.out.out_dir, &base, a.contour)
}

fn write_map_files(w: &TfMap, dir: &Path, base: &str, contour: Option<u32>) -> Result<Outcome> {
    write_tfmap_csv(w, &dir.join(format!("{base}.csv")))?;
    write_heatmap(w, &dir.join(format!("{base}.pgm")), HeatmapMode::Magnitude)?;
    if let Some(k) = contour {
        write_heatmap(w, &dir.join(format!("{base}_contour.pgm")), HeatmapMode::Contour(k))?;
    }
    Ok(Outcome::Success)
}

pub fn detect(a: &DetectArgs) -> Result<Outcome> {
    let w = match (&a.from_csv, a.kind) {
        (Some(path), _) => read_tfmap_csv(path)?,
        (None, Some(kind)) => {
            check_params(kind, a.lambda.as_ref())?;
            compute_tfd(kind, a.lambda.as_ref(), &build_signal(&a.signal)?)?
        }
        (None, None) => return Err(usage("one of --from-csv or --kind is required")),
    };
    let report = detect_from_map(&w, a.threshold)?;
    write_to(&format!("{DETECT_HEADER}\n{}\n", detect_row(&report)), a.out.as_ref())?;
    Ok(if report.detected() { Outcome::Success } else { Outcome::DetectionFailed })
}

pub fn verify(a: &VerifyArgs) -> Result<Outcome> {
    let ids: Vec<PropertyId> = if a.all { PropertyId::ALL.to_vec() } else { a.property.clone() };
    let mut text = String::from("property,variant,rel_error,N,dt,M,best,tolerance,pass\n");
    let mut all_pass = true;
    for id in ids {
        let report = verify_property(id, &standard_fixture(id, a.n)?)?;
        all_pass &= report.passes();
        for (variant, err) in &report.variant_errors {
            let _ = writeln!(
                text,
                "{id},{variant},{err:?},{},{:?},{},{},{:?},{}",
                report.grid.n,
                report.grid.dt,
                report.grid.m,
                *variant == report.best_variant,
                id.tolerance(),
                *variant == report.best_variant && report.passes()
            );
        }
    }
    write_to(&text, a.out.as_ref())?;
    Ok(if all_pass { Outcome::Success } else { Outcome::ChecksFailed })
}

pub const SWEEP_HEADER: &str = "snr_db,seed,kind,A,B,C,D,E,status,slope,intercept,nu0_hat,xi0_hat,peak_ratio,n_ridges,fit_rmse,n_points,error";

fn sweep_row(r: &SweepRow, params: Option<&ParamSet>) -> String {
    match &r.outcome {
        Ok(rep) => format!("{:?},{},{},", r.snr_db, r.seed, detect_row(rep)),
        Err(e) => format!(
            "{:?},{},{},{},Error,,,,,,,,,{}",
            r.snr_db,
            r.seed,
            r.kind,
            lambda_fields(params),
            e.to_string().replace(',', ";")
        ),
    }
}

pub fn sweep(a: &SweepArgs) -> Result<Outcome> {
    for (kind, p) in &a.configs {
        check_params(*kind, p.as_ref())?;
    }
    if a.snrs.iter().any(|s| s.is_nan()) {
        return Err(usage("SNR values must be numbers or inf"));
    }
    let f = make_multicomponent(&a.lfm, a.half_support, a.n)?;
    let rows = snr_sweep_with(&f, &a.configs, &a.snrs, &a.seeds.0, a.threshold)?;
    let mut text = format!("{SWEEP_HEADER}\n");
    // rows are ordered config-major, so the parameter set is recoverable by position
    let per_config = a.snrs.len() * a.seeds.0.len();
    for (i, r) in rows.iter().enumerate() {
        text.push_str(&sweep_row(r, a.configs[i / per_config].1.as_ref()));
        text.push('\n');
    }
    write_to(&text, a.out.as_ref())?;
    Ok(Outcome::Success)
}

/// One map of a figure: kind, parameters, SNR (None = noiseless).
struct Panel {
    kind: TfKind,
    params: Option<ParamSet>,
    snr_db: Option<f64>,
}

fn panel(kind: TfKind, params: Option<[f64; 5]>, snr_db: Option<f64>) -> Panel {
    Panel {
        kind,
        params: params.map(|[a, b, c, d, e]| ParamSet::new(a, b, c, d, e).expect("recipe parameters are valid")),
        snr_db,
    }
}

const FIG5_LAMBDA: [f64; 5] = [0.0, -1.0, 0.0, 2.0, 2.0];
const FIG6_Q: [f64; 5] = [0.0, -2.0, 1.0, 2.0, 1.0];
const FIG6_AQ: [f64; 5] = [1.0, -2.0, 1.0, 2.0, 1.0];

fn mono() -> Vec<LfmComponent> {
    vec![LfmComponent::new(1.0, 0.1, 0.2)]
}

fn bi() -> Vec<LfmComponent> {
    vec![LfmComponent::new(1.0, 0.1, 0.2), LfmComponent::new(1.0, 0.3, 0.2)]
}

fn snr_tag(snr: Option<f64>) -> String {
    match snr {
        None => "clean".into(),
        Some(s) if s < 0.0 => format!("snrm{}", -s),
        Some(s) => format!("snr{s}"),
    }
}

pub fn figure(a: &FigureArgs) -> Result<Outcome> {
    if a.name == FigureName::Fig1Gaussian && a.lambda.is_none() {
        return Err(usage("fig1-gaussian requires --lambda A,B,C,D,E"));
    }
    if a.name != FigureName::Fig1Gaussian && a.lambda.is_some() {
        return Err(usage("--lambda is only accepted by fig1-gaussian"));
    }
    if !(2..=256).contains(&a.contour_levels) {
        return Err(usage("--contour-levels must be in 2..=256"));
    }
    use TfKind::*;
    let snrs = [None, Some(5.0), Some(10.0), Some(-5.0)];
    let (tag, comps, panels): (&str, Vec<LfmComponent>, Vec<Panel>) = match a.name {
        FigureName::Fig5 => ("fig5", mono(), snrs.iter().map(|&s| panel(Aqwd, Some(FIG5_LAMBDA), s)).collect()),
        FigureName::Fig7 => ("fig7", mono(), snrs.iter().map(|&s| panel(Aqaf, Some(FIG5_LAMBDA), s)).collect()),
        FigureName::Fig6 | FigureName::Fig11 => {
            let snr = if a.name == FigureName::Fig6 { 10.0 } else { 5.0 };
            let comps = if a.name == FigureName::Fig6 { mono() } else { bi() };
            let tag = if a.name == FigureName::Fig6 { "fig6" } else { "fig11" };
            (tag, comps, vec![panel(Wd, None, Some(snr)), panel(Qwd, Some(FIG6_Q), Some(snr)), panel(Aqwd, Some(FIG6_AQ), Some(snr))])
        }
        FigureName::Fig8 => (
            "fig8",
            mono(),
            vec![panel(Af, None, Some(10.0)), panel(Qaf, Some(FIG6_Q), Some(10.0)), panel(Aqaf, Some(FIG6_AQ), Some(10.0))],
        ),
        FigureName::Fig12 => (
            "fig12",
            bi(),
            vec![
                panel(Af, None, Some(5.0)),
                panel(Qaf, Some([0.0, -2.0, 1.0, 0.0, 1.0]), Some(5.0)),
                panel(Aqaf, Some([-2.0, 1.0, 1.0, -2.0, 1.0]), Some(5.0)),
                panel(Aqaf, Some([0.0, -2.0, 1.0, 0.0, 1.0]), Some(5.0)),
            ],
        ),
        FigureName::Fig1Gaussian => ("fig1_gaussian", Vec::new(), {
            let lam = a.lambda.map(|p| p.as_array());
            vec![panel(Wd, None, None), panel(Aqwd, lam, None), panel(Af, None, None), panel(Aqaf, lam, None)]
        }),
    };
    let clean = if comps.is_empty() {
        make_gaussian_pair((0.0, 4.0), 10.0, a.n)?
    } else {
        make_multicomponent(&comps, 10.0, a.n)?
    };

    let dir = &a.out.out_dir;
    ensure_dir(dir)?;
    let mut summary = format!("panel,snr_db,{DETECT_HEADER}\n");
    for (i, p) in panels.iter().enumerate() {
        let f = match p.snr_db {
            Some(snr) => add_awgn(&clean, snr, a.seed)?,
            None => clean.clone(),
        };
        let w = compute_tfd(p.kind, p.params.as_ref(), &f)?;
        let letter = (b'a' + i as u8) as char;
        let base = format!("{tag}_{letter}_{}_{}", p.kind.name().to_ascii_lowercase(), snr_tag(p.snr_db));
        write_map_files(&w, dir, &base, Some(a.contour_levels))?;
        let rep = detect_from_map(&w, a.threshold)?;
        let _ = writeln!(summary, "{letter},{},{}", opt(p.snr_db), detect_row(&rep));
    }
    fs::write(dir.join(format!("{tag}_detect.csv")), summary)?;
    Ok(Outcome::Success)
}
