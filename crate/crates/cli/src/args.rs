//! Command-line grammar.

use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use qptf_core::properties::PropertyId;
use qptf_core::signal::LfmComponent;
use qptf_core::{ParamSet, TfKind};

#[derive(Debug, Parser)]
#[command(name = "qptf", version, about = "Quadratic-phase Wigner distributions and ambiguity functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a sampled test signal as CSV.
    Generate(GenerateArgs),
    /// Compute one distribution; writes the map CSV and a PGM heatmap.
    Transform(TransformArgs),
    /// Ridge detection and chirp parameter estimation.
    Detect(DetectArgs),
    /// Check the distributions' identities on reference fixtures.
    Verify(VerifyArgs),
    /// Detection over kinds x SNRs x seeds.
    Sweep(SweepArgs),
    /// Reproduce a figure's maps, heatmaps and detections.
    Figure(FigureArgs),
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("source").args(["lfm", "gaussian_pair", "input"]).multiple(false)))]
pub struct SignalArgs {
    /// Chirp component AMP,NU0,XI0 (rad/s, rad/s^2); repeat for a sum.
    #[arg(long, value_parser = parse_lfm, allow_hyphen_values = true)]
    pub lfm: Vec<LfmComponent>,
    /// Two Gaussian beams centred at C1,C2.
    #[arg(long, value_name = "C1,C2", value_parser = parse_pair, allow_hyphen_values = true)]
    pub gaussian_pair: Option<(f64, f64)>,
    /// Signal CSV written by `generate`.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Signal spans [-H, H].
    #[arg(long, default_value_t = 10.0)]
    pub half_support: f64,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Add white Gaussian noise at this SNR.
    #[arg(long, allow_hyphen_values = true)]
    pub snr_db: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
}

#[derive(Debug, Clone, Args)]
pub struct OutDir {
    /// Output directory.
    #[arg(long, env = "QPTF_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[command(flatten)]
    pub signal: SignalArgs,
    #[command(flatten)]
    pub out: OutDir,
    /// File name inside the output directory.
    #[arg(long, default_value = "signal.csv")]
    pub name: String,
}

#[derive(Debug, Args)]
pub struct TransformArgs {
    #[arg(long, value_parser = parse_kind)]
    pub kind: TfKind,
    /// A,B,C,D,E; required for QWD/QAF/AQWD/AQAF, rejected for WD/AF.
    #[arg(long, value_parser = parse_lambda, allow_hyphen_values = true)]
    pub lambda: Option<ParamSet>,
    #[command(flatten)]
    pub signal: SignalArgs,
    #[command(flatten)]
    pub out: OutDir,
    /// Base name of the outputs; defaults to the kind.
    #[arg(long)]
    pub name: Option<String>,
    /// Also write a posterized heatmap with this many levels.
    #[arg(long)]
    pub contour: Option<u32>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("input_kind").args(["from_csv", "kind"]).required(true)))]
pub struct DetectArgs {
    /// Detect on a map CSV instead of computing one.
    #[arg(long, conflicts_with_all = ["lambda", "source"])]
    pub from_csv: Option<PathBuf>,
    #[arg(long, value_parser = parse_kind)]
    pub kind: Option<TfKind>,
    #[arg(long, value_parser = parse_lambda, allow_hyphen_values = true)]
    pub lambda: Option<ParamSet>,
    #[command(flatten)]
    pub signal: SignalArgs,
    /// Rows whose peak is below this fraction of the global peak are ignored.
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Write the report CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("which").args(["all", "property"]).required(true)))]
pub struct VerifyArgs {
    #[arg(long)]
    pub all: bool,
    /// Property name, e.g. MOYAL; repeatable.
    #[arg(long, value_parser = parse_property)]
    pub property: Vec<PropertyId>,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    /// KIND or KIND:A,B,C,D,E; repeatable.
    #[arg(long = "config", value_parser = parse_config, required = true, allow_hyphen_values = true)]
    pub configs: Vec<(TfKind, Option<ParamSet>)>,
    /// Comma-separated SNRs in dB; `inf` means noiseless.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    pub snrs: Vec<f64>,
    /// Seeds as a list `1,2,5` or an inclusive range `1..20`.
    #[arg(long, value_parser = parse_seeds, default_value = "1..20")]
    pub seeds: SeedList,
    #[arg(long, value_parser = parse_lfm, allow_hyphen_values = true, required = true)]
    pub lfm: Vec<LfmComponent>,
    #[arg(long, default_value_t = 10.0)]
    pub half_support: f64,
    #[arg(long, default_value_t = 1024)]
    pub n: usize,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedList(pub Vec<u64>);

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum FigureName {
    Fig5,
    Fig6,
    Fig7,
    Fig8,
    Fig11,
    Fig12,
    #[value(name = "fig1-gaussian")]
    Fig1Gaussian,
}

#[derive(Debug, Args)]
pub struct FigureArgs {
    #[arg(value_enum)]
    pub name: FigureName,
    /// Parameter set for fig1-gaussian (required there, rejected elsewhere).
    #[arg(long, value_parser = parse_lambda, allow_hyphen_values = true)]
    pub lambda: Option<ParamSet>,
    #[arg(long, default_value_t = 256)]
    pub n: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 8)]
    pub contour_levels: u32,
    #[arg(long, default_value_t = 0.5)]
    pub threshold: f64,
    #[command(flatten)]
    pub out: OutDir,
}

fn floats(s: &str, want: usize, what: &str) -> Result<Vec<f64>, String> {
    let v = s
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| format!("{t:?}: {e}")))
        .collect::<Result<Vec<_>, _>>()?;
    if v.len() != want {
        return Err(format!("{what} needs {want} comma-separated numbers, got {}", v.len()));
    }
    Ok(v)
}

pub fn parse_lambda(s: &str) -> Result<ParamSet, String> {
    let v = floats(s, 5, "A,B,C,D,E")?;
    ParamSet::new(v[0], v[1], v[2], v[3], v[4]).map_err(|e| e.to_string())
}

pub fn parse_lfm(s: &str) -> Result<LfmComponent, String> {
    let v = floats(s, 3, "AMP,NU0,XI0")?;
    Ok(LfmComponent::new(v[0], v[1], v[2]))
}

fn parse_pair(s: &str) -> Result<(f64, f64), String> {
    let v = floats(s, 2, "C1,C2")?;
    Ok((v[0], v[1]))
}

fn parse_kind(s: &str) -> Result<TfKind, String> {
    s.parse().map_err(|e: qptf_core::Error| e.to_string())
}

fn parse_property(s: &str) -> Result<PropertyId, String> {
    s.parse().map_err(|e: qptf_core::Error| e.to_string())
}

fn parse_config(s: &str) -> Result<(TfKind, Option<ParamSet>), String> {
    match s.split_once(':') {
        Some((k, lam)) => Ok((parse_kind(k)?, Some(parse_lambda(lam)?))),
        None => Ok((parse_kind(s)?, None)),
    }
}

fn parse_seeds(s: &str) -> Result<SeedList, String> {
    let num = |t: &str| t.trim().parse::<u64>().map_err(|e| format!("{t:?}: {e}"));
    let seeds = match s.split_once("..") {
        Some((lo, hi)) => {
            let (lo, hi) = (num(lo)?, num(hi.trim_start_matches('='))?);
            if lo > hi {
                return Err(format!("empty seed range {s}"));
            }
            (lo..=hi).collect()
        }
        None => s.split(',').map(num).collect::<Result<Vec<_>, _>>()?,
    };
    Ok(SeedList(seeds))
}
