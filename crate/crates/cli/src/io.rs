//! Map and signal files.
//!
//! Map CSV: `# KIND,A,B,C,D,E,N,dt,t0` (parameter fields empty for WD/AF),
//! then the frequency axis, then one `outer,re0,im0,re1,im1,...` line per row.
//! Numbers use Rust's shortest round-trip (`{:?}`) formatting, so rereading
//! is exact.

use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use anyhow::{anyhow, bail, ensure, Context, Result};
use num_complex::Complex64;
use qptf_core::tfd::SourceGrid;
use qptf_core::{ParamSet, Signal, TfKind, TfMap};

pub fn tfmap_to_csv(w: &TfMap) -> String {
    let mut out = String::with_capacity(w.values().len() * 40);
    let src = w.source();
    let lam = match w.params() {
        Some(p) => p.as_array().map(|v| format!("{v:?}")).join(","),
        None => ",,,,".to_string(),
    };
    let _ = writeln!(out, "# {},{lam},{},{:?},{:?}", w.kind().name(), src.n, src.dt, src.t0);
    join_into(&mut out, w.freq_axis().iter());
    for (r, x) in w.outer_axis().iter().enumerate() {
        let _ = write!(out, "{x:?}");
        for z in w.row(r) {
            let _ = write!(out, ",{:?},{:?}", z.re, z.im);
        }
        out.push('\n');
    }
    out
}

fn join_into<'a>(out: &mut String, vals: impl Iterator<Item = &'a f64>) {
    for (i, v) in vals.enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "{v:?}");
    }
    out.push('\n');
}

pub fn write_tfmap_csv(w: &TfMap, path: &Path) -> Result<()> {
    fs::write(path, tfmap_to_csv(w)).with_context(|| format!("writing {}", path.display()))
}

fn parse_f64(tok: &str, what: &str, line: usize) -> Result<f64> {
    tok.trim()
        .parse::<f64>()
        .map_err(|e| anyhow!("line {line}: bad {what} {tok:?}: {e}"))
}

pub fn read_tfmap_csv(path: &Path) -> Result<TfMap> {
    let file = fs::File::open(path).with_context(|| format!("opening {}", path.display()))?;
    let mut lines = BufReader::new(file).lines();
    let mut next = |n: usize| -> Result<Option<String>> {
        lines.next().transpose().with_context(|| format!("reading line {n}"))
    };

    let header = next(1)?.ok_or_else(|| anyhow!("empty map file"))?;
    let header = header
        .strip_prefix("# ")
        .ok_or_else(|| anyhow!("line 1: expected '# KIND,A,B,C,D,E,N,dt,t0'"))?;
    let fields: Vec<&str> = header.split(',').collect();
    ensure!(fields.len() == 9, "line 1: expected 9 fields, got {}", fields.len());
    let kind: TfKind = fields[0].parse()?;
    let params = if fields[1..6].iter().all(|f| f.trim().is_empty()) {
        None
    } else {
        let v = fields[1..6]
            .iter()
            .map(|f| parse_f64(f, "parameter", 1))
            .collect::<Result<Vec<_>>>()?;
        Some(ParamSet::new(v[0], v[1], v[2], v[3], v[4])?)
    };
    let n: usize = fields[6].trim().parse().context("line 1: bad N")?;
    let source = SourceGrid {
        n,
        dt: parse_f64(fields[7], "dt", 1)?,
        t0: parse_f64(fields[8], "t0", 1)?,
    };

    let freq_line = next(2)?.ok_or_else(|| anyhow!("missing frequency axis line"))?;
    let freq_axis = freq_line
        .split(',')
        .map(|t| parse_f64(t, "frequency", 2))
        .collect::<Result<Vec<_>>>()?;

    let mut outer_axis = Vec::new();
    let mut values = Vec::new();
    let mut lineno = 2;
    while let Some(line) = next(lineno + 1)? {
        lineno += 1;
        if line.trim().is_empty() {
            continue;
        }
        let toks: Vec<&str> = line.split(',').collect();
        ensure!(
            toks.len() == 1 + 2 * freq_axis.len(),
            "line {lineno}: expected {} fields, got {}",
            1 + 2 * freq_axis.len(),
            toks.len()
        );
        outer_axis.push(parse_f64(toks[0], "outer value", lineno)?);
        for pair in toks[1..].chunks_exact(2) {
            values.push(Complex64::new(
                parse_f64(pair[0], "real part", lineno)?,
                parse_f64(pair[1], "imaginary part", lineno)?,
            ));
        }
    }
    Ok(TfMap::new(values, outer_axis, freq_axis, kind, params, source)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HeatmapMode {
    Magnitude,
    /// Posterized to this many gray levels.
    Contour(u32),
}

/// 8-bit P5 bytes. Image row 0 is the smallest outer value, column 0 the
/// smallest frequency.
pub fn heatmap_bytes(w: &TfMap, mode: HeatmapMode) -> Result<Vec<u8>> {
    if let HeatmapMode::Contour(k) = mode {
        ensure!((2..=256).contains(&k), "contour levels must be in 2..=256, got {k}");
    }
    let mut out = format!("P5\n{} {}\n255\n", w.cols(), w.rows()).into_bytes();
    let max = w.max_abs();
    out.extend(w.values().iter().map(|z| {
        if max == 0.0 {
            return 0;
        }
        let frac = z.norm() / max;
        match mode {
            HeatmapMode::Magnitude => (255.0 * frac).round() as u8,
            HeatmapMode::Contour(k) => {
                let level = ((frac * k as f64).floor() as u32).min(k - 1);
                (255.0 * level as f64 / (k - 1) as f64).round() as u8
            }
        }
    }));
    Ok(out)
}

pub fn write_heatmap(w: &TfMap, path: &Path, mode: HeatmapMode) -> Result<()> {
    let bytes = heatmap_bytes(w, mode)?;
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

/// Signal CSV: `# t0,dt,N` then `t,re,im` per sample.
pub fn write_signal_csv(f: &Signal, path: &Path) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    let mut w = BufWriter::new(file);
    writeln!(w, "# {:?},{:?},{}", f.t0(), f.dt(), f.len())?;
    for (t, z) in f.times().zip(f.samples()) {
        writeln!(w, "{t:?},{:?},{:?}", z.re, z.im)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_signal_csv(path: &Path) -> Result<Signal> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let mut lines = text.lines();
    let header = lines
        .next()
        .and_then(|l| l.strip_prefix("# "))
        .ok_or_else(|| anyhow!("line 1: expected '# t0,dt,N'"))?;
    let h: Vec<&str> = header.split(',').collect();
    ensure!(h.len() == 3, "line 1: expected 3 fields");
    let t0 = parse_f64(h[0], "t0", 1)?;
    let dt = parse_f64(h[1], "dt", 1)?;
    let n: usize = h[2].trim().parse().context("line 1: bad N")?;
    let mut samples = Vec::with_capacity(n);
    for (i, line) in lines.enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let toks: Vec<&str> = line.split(',').collect();
        if toks.len() != 3 {
            bail!("line {}: expected t,re,im", i + 2);
        }
        samples.push(Complex64::new(
            parse_f64(toks[1], "real part", i + 2)?,
            parse_f64(toks[2], "imaginary part", i + 2)?,
        ));
    }
    ensure!(samples.len() == n, "header says {n} samples, found {}", samples.len());
    Ok(Signal::new(samples, t0, dt)?)
}
