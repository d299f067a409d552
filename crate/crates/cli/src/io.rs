//! File formats. Everything on disk uses 0-based half-open intervals; the
//! library works with 1-based inclusive segments, and the conversion happens
//! only here.

use std::fs;
use std::path::Path;

use anyhow::{bail, ensure, Context, Result};
use locomotif::{DiscoveryResult, Segment, TimeSeries};
use serde::{Deserialize, Serialize};

/// Reads a rectangular CSV with one row per time step. A first row that does
/// not parse as numbers is taken as a header.
pub fn read_series(path: &Path) -> Result<TimeSeries> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .with_context(|| format!("cannot read {}", path.display()))?;
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (line, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("{}: malformed CSV", path.display()))?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => {
                if let Some(bad) = row.iter().position(|v| !v.is_finite()) {
                    bail!("{}: line {} column {} is not finite", path.display(), line + 1, bad + 1);
                }
                rows.push(row);
            }
            Err(_) if line == 0 => continue,
            Err(e) => bail!("{}: line {}: {e}", path.display(), line + 1),
        }
    }
    ensure!(!rows.is_empty(), "{}: no data rows", path.display());
    TimeSeries::from_rows(&rows).with_context(|| format!("{}: not rectangular", path.display()))
}

pub fn write_series(path: &Path, ts: &TimeSeries) -> Result<()> {
    let mut writer = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    for t in 0..ts.len() {
        writer.write_record(ts.sample(t).iter().map(|v| v.to_string()))?;
    }
    writer.flush()?;
    Ok(())
}

/// Single column of 0/1 flags, no header.
pub fn read_mask(path: &Path, n: usize) -> Result<Vec<bool>> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let mask = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .enumerate()
        .map(|(i, l)| match l {
            "0" => Ok(false),
            "1" => Ok(true),
            other => bail!("{}: line {} is {other:?}, expected 0 or 1", path.display(), i + 1),
        })
        .collect::<Result<Vec<_>>>()?;
    ensure!(
        mask.len() == n,
        "{}: mask has {} entries but the series has {n} samples",
        path.display(),
        mask.len()
    );
    Ok(mask)
}

pub type Interval = [usize; 2];

pub fn to_interval(s: Segment) -> Interval {
    let (lo, hi) = s.to_half_open();
    [lo, hi]
}

pub fn to_segment(iv: Interval, n: usize) -> Result<Segment> {
    ensure!(iv[0] < iv[1] && iv[1] <= n, "interval [{}, {}) is invalid for n = {n}", iv[0], iv[1]);
    Ok(Segment::from_half_open(iv[0], iv[1])?)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifSetRecord {
    pub representative: Interval,
    pub members: Vec<Interval>,
    pub fitness: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MotifSetsFile {
    pub n: usize,
    pub motif_sets: Vec<MotifSetRecord>,
}

impl MotifSetsFile {
    pub fn from_result(n: usize, result: &DiscoveryResult) -> Self {
        let motif_sets = result
            .motif_sets
            .iter()
            .map(|m| MotifSetRecord {
                representative: to_interval(m.representative),
                members: m.members.iter().copied().map(to_interval).collect(),
                fitness: m.fitness.fitness,
            })
            .collect();
        MotifSetsFile { n, motif_sets }
    }

    pub fn segments(&self) -> Result<Vec<Vec<Segment>>> {
        self.motif_sets
            .iter()
            .map(|m| m.members.iter().map(|&iv| to_segment(iv, self.n)).collect())
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroundTruthFile {
    pub n: usize,
    pub gt_motif_sets: Vec<Vec<Interval>>,
}

impl GroundTruthFile {
    pub fn segments(&self) -> Result<Vec<Vec<Segment>>> {
        self.gt_motif_sets
            .iter()
            .map(|set| set.iter().map(|&iv| to_segment(iv, self.n)).collect())
            .collect()
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("{}: malformed JSON", path.display()))
}

/// Writes to `path`, or to standard output when absent.
pub fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => fs::write(p, format!("{text}\n")).with_context(|| format!("cannot write {}", p.display())),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}
