mod io;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, ensure, Context, Result};
use clap::{Args, Parser, Subcommand};
use locomotif::benchgen::{generate_many, LabeledInstancePool};
use locomotif::discovery::guidance_mask_from_rest;
use locomotif::evaluation::{evaluate, GroundTruth};
use locomotif::{locomotif, DiscoveryConfig};
use serde_json::json;

use crate::io::{GroundTruthFile, MotifSetsFile};

#[derive(Parser)]
#[command(name = "locomotif", version, about = "Variable-length time-warped motif discovery")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Discover motif sets in a series.
    Discover(DiscoverArgs),
    /// Score predicted motif sets against ground truth.
    Evaluate(EvaluateArgs),
    /// Generate benchmark series from a pool of labeled instances.
    Generate(GenerateArgs),
}

#[derive(Args)]
struct DiscoverArgs {
    /// CSV series, one row per time step.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    lmin: usize,
    #[arg(long)]
    lmax: usize,
    #[arg(long, default_value_t = 0.8)]
    rho: f64,
    /// Number of motif sets; all are returned when omitted.
    #[arg(long)]
    kappa: Option<usize>,
    #[arg(long, default_value_t = 0.5)]
    nu: f64,
    /// Only allow diagonal (equal-length) matches.
    #[arg(long)]
    no_warping: bool,
    #[arg(long, conflicts_with = "rest_guided")]
    start_mask: Option<PathBuf>,
    #[arg(long, conflicts_with = "rest_guided")]
    end_mask: Option<PathBuf>,
    /// Derive start and end masks from low-variance (rest) periods.
    #[arg(long, requires = "var_threshold")]
    rest_guided: bool,
    #[arg(long)]
    var_threshold: Option<f64>,
    #[arg(long, default_value_t = 0.33)]
    fraction: f64,
    /// Write JSON here instead of standard output.
    #[arg(long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct EvaluateArgs {
    #[arg(long)]
    gt: PathBuf,
    #[arg(long)]
    pred: PathBuf,
    /// Print metrics at full precision instead of 6 decimals.
    #[arg(long)]
    json_full: bool,
}

#[derive(Args)]
struct GenerateArgs {
    /// Directory with one subdirectory of CSV instances per class.
    #[arg(long)]
    instances: PathBuf,
    /// Number of series to generate.
    #[arg(long)]
    n: usize,
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = 2)]
    occurrences: usize,
    #[arg(long)]
    output: PathBuf,
}

fn discover(args: &DiscoverArgs) -> Result<()> {
    let ts = io::read_series(&args.input)?;
    let n = ts.len();
    let (start_mask, end_mask) = if args.rest_guided {
        let threshold = args.var_threshold.expect("enforced by clap");
        let (s, e) = guidance_mask_from_rest(&ts, args.lmax, threshold, args.fraction)?;
        (Some(s), Some(e))
    } else {
        let read = |p: &Option<PathBuf>| p.as_deref().map(|p| io::read_mask(p, n)).transpose();
        (read(&args.start_mask)?, read(&args.end_mask)?)
    };
    let mut config = DiscoveryConfig::new(args.lmin, args.lmax)
        .with_rho(args.rho)
        .with_nu(args.nu)
        .with_warping(!args.no_warping)
        .with_masks(start_mask, end_mask);
    if let Some(k) = args.kappa {
        config = config.with_kappa(k);
    }
    let result = locomotif(&ts, &config)?;
    let file = MotifSetsFile::from_result(n, &result);
    io::emit(args.output.as_deref(), &serde_json::to_string_pretty(&file)?)
}

fn evaluate_cmd(args: &EvaluateArgs) -> Result<()> {
    let gt: GroundTruthFile = io::read_json(&args.gt)?;
    let pred: MotifSetsFile = io::read_json(&args.pred)?;
    ensure!(
        gt.n == pred.n,
        "ground truth covers n = {} samples but the prediction covers n = {}",
        gt.n,
        pred.n
    );
    let truth = GroundTruth::new(gt.segments()?)?;
    let (matrix, scores) = evaluate(&truth, &pred.segments()?);
    let cells = serde_json::to_string(&matrix.cells)?;
    let text = if args.json_full {
        serde_json::to_string_pretty(&json!({
            "precision": scores.precision,
            "recall": scores.recall,
            "f1": scores.f1,
            "matching_matrix": matrix.cells,
        }))?
    } else {
        // fixed-point numbers are valid JSON, serde_json just never emits them
        format!(
            "{{\n  \"precision\": {:.6},\n  \"recall\": {:.6},\n  \"f1\": {:.6},\n  \"matching_matrix\": {cells}\n}}",
            scores.precision, scores.recall, scores.f1
        )
    };
    io::emit(None, &text)
}

fn sorted_entries(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut entries = fs::read_dir(dir)
        .with_context(|| format!("cannot list {}", dir.display()))?
        .map(|e| e.map(|e| e.path()))
        .collect::<std::io::Result<Vec<_>>>()?;
    entries.sort();
    Ok(entries)
}

fn read_pool(dir: &Path) -> Result<LabeledInstancePool> {
    let mut classes = BTreeMap::new();
    for class_dir in sorted_entries(dir)?.into_iter().filter(|p| p.is_dir()) {
        let label = class_dir
            .file_name()
            .and_then(|s| s.to_str())
            .context("class directory names must be valid UTF-8")?
            .to_string();
        let instances = sorted_entries(&class_dir)?
            .into_iter()
            .filter(|p| p.extension().is_some_and(|e| e.eq_ignore_ascii_case("csv")))
            .map(|p| io::read_series(&p))
            .collect::<Result<Vec<_>>>()?;
        classes.insert(label, instances);
    }
    if classes.is_empty() {
        bail!("{}: no class subdirectories found", dir.display());
    }
    Ok(LabeledInstancePool::new(classes)?)
}

fn generate(args: &GenerateArgs) -> Result<()> {
    let pool = read_pool(&args.instances)?;
    let benchmarks = generate_many(&pool, args.n, args.occurrences, args.seed)?;
    fs::create_dir_all(&args.output).with_context(|| format!("cannot create {}", args.output.display()))?;
    let mut manifest = Vec::with_capacity(benchmarks.len());
    for (i, b) in benchmarks.iter().enumerate() {
        io::write_series(&args.output.join(format!("series_{i}.csv")), &b.series)?;
        let gt = GroundTruthFile {
            n: b.series.len(),
            gt_motif_sets: b
                .ground_truth
                .sets()
                .iter()
                .map(|set| set.iter().copied().map(io::to_interval).collect())
                .collect(),
        };
        io::emit(
            Some(&args.output.join(format!("gt_{i}.json"))),
            &serde_json::to_string_pretty(&gt)?,
        )?;
        manifest.push(json!({
            "series": format!("series_{i}.csv"),
            "n": b.series.len(),
            "kappa": b.kappa(),
            "repeated_classes": b.repeated_classes,
            "separator_classes": b.separator_classes(),
        }));
    }
    io::emit(None, &serde_json::to_string_pretty(&json!({ "benchmarks": manifest }))?)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match &cli.command {
        Command::Discover(a) => discover(a),
        Command::Evaluate(a) => evaluate_cmd(a),
        Command::Generate(a) => generate(a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
