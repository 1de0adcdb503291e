//! The `maxtile` command line.
//!
//! Exit codes: 0 success, 1 I/O or other failure, 2 usage or parse error,
//! 3 inconsistent or infeasible marginals, 4 no convergence.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use maxtile_core::embed::embed_tile;
use maxtile_core::interestingness::{
    area_select, greedy_select_top, summarize_histograms, AreaRanked, InterestingnessConfig,
    RankedTile,
};
use maxtile_core::maxent::TraceEntry;
use maxtile_core::randomize::{
    sample_fast_with_stats, sample_naive_with_stats, sample_valued_with_stats,
    swap_randomize_with_stats, Method, SamplerConfig,
};
use maxtile_core::rng::derive_seed;
use maxtile_core::synth::{Categorical, TextLike};
use maxtile_core::tiles::{closed_size_histogram, mine_closed_tiles, MinerConfig, Tile};
use maxtile_core::{
    fit_traced, Family, FitError, FitOptions, Marginals, MaxEntModel, Solver, SparseBinaryMatrix,
};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::io::{self, Format, ReadError, Shape};
use crate::manifest::RunManifest;
use crate::model_file::{self, ModelFileError};
use crate::{config_file, report, tile_file};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Read { path: PathBuf, source: ReadError },
    #[error("{path}: {source}")]
    ModelFile {
        path: PathBuf,
        source: ModelFileError,
    },
    #[error("{0}")]
    Targets(FitError),
    #[error("{0}")]
    NotConverged(FitError),
    #[error("{0}")]
    Failed(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Read { .. } | CliError::ModelFile { .. } => 2,
            CliError::Targets(_) => 3,
            CliError::NotConverged(_) => 4,
            CliError::Failed(_) | CliError::Io(_) => 1,
        }
    }
}

fn failed(e: impl std::fmt::Display) -> CliError {
    CliError::Failed(e.to_string())
}

#[derive(Debug, Parser)]
#[command(
    name = "maxtile",
    version,
    about = "Maximum-entropy background models, randomization and tile ranking"
)]
#[command(args_override_self = true)]
pub struct Cli {
    /// Worker threads for replicate-parallel commands.
    #[arg(long, global = true, env = "MAXTILE_THREADS")]
    pub threads: Option<usize>,
    /// File of `key = value` lines used as default options.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

const SUBCOMMANDS: &[&str] = &["fit", "sample", "rank", "assess", "embed", "synth"];

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fit a model to a dataset's marginals or to explicit targets.
    Fit(FitArgs),
    /// Draw randomized databases from a model or by swapping a dataset.
    Sample(SampleArgs),
    /// Mine closed tiles and rank them.
    Rank(RankArgs),
    /// Compare closed-itemset counts per size with randomized data.
    Assess(AssessArgs),
    /// Append a k x k all-ones tile to a dataset.
    Embed(EmbedArgs),
    /// Write a synthetic benchmark-shaped dataset.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct InputArgs {
    /// Input format; guessed from the extension by default.
    #[arg(long, value_enum)]
    pub format: Option<Format>,
    /// Row count, for files that do not carry it.
    #[arg(long)]
    pub rows: Option<usize>,
    /// Column count, for files that do not carry it.
    #[arg(long)]
    pub cols: Option<usize>,
}

impl InputArgs {
    fn format(&self, path: &Path) -> Format {
        self.format.unwrap_or_else(|| Format::from_path(path))
    }

    fn shape(&self) -> Shape {
        Shape {
            rows: self.rows,
            cols: self.cols,
        }
    }

    fn load(&self, path: &Path) -> Result<SparseBinaryMatrix, CliError> {
        io::load_binary(path, self.format(path), self.shape()).map_err(|source| CliError::Read {
            path: path.to_path_buf(),
            source,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyArg {
    Bernoulli,
    Geometric,
    Exponential,
}

impl From<FamilyArg> for Family {
    fn from(f: FamilyArg) -> Family {
        match f {
            FamilyArg::Bernoulli => Family::Bernoulli,
            FamilyArg::Geometric => Family::Geometric,
            FamilyArg::Exponential => Family::Exponential,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SolverArg {
    Newton,
    Pgd,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MethodArg {
    Naive,
    Fast,
    Swap,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Method {
        match m {
            MethodArg::Naive => Method::Naive,
            MethodArg::Fast => Method::GeometricGap,
            MethodArg::Swap => Method::Swap,
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitOptionArgs {
    #[arg(long, value_enum, default_value = "newton")]
    pub solver: SolverArg,
    /// Stop when the squared gradient norm per multiplier is at most this.
    #[arg(long, default_value_t = 1e-12)]
    pub tol: f64,
    #[arg(long, default_value_t = 500)]
    pub max_iter: usize,
    /// Largest multiplier count solved by dense factorization.
    #[arg(long)]
    pub dense_limit: Option<usize>,
}

impl FitOptionArgs {
    fn options(&self) -> FitOptions {
        let defaults = FitOptions::default();
        FitOptions {
            dense_limit: self.dense_limit.unwrap_or(defaults.dense_limit),
            solver: match self.solver {
                SolverArg::Newton => Solver::Newton,
                SolverArg::Pgd => Solver::PreconditionedGradientDescent,
            },
            tol: self.tol,
            max_iter: self.max_iter,
            ..defaults
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct FitArgs {
    /// Dataset whose marginals are the targets.
    pub dataset: Option<PathBuf>,
    /// Targets file instead of a dataset: row sums on the first line,
    /// column sums on the second.
    #[arg(long, conflicts_with = "dataset")]
    pub targets: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "bernoulli")]
    pub family: FamilyArg,
    #[command(flatten)]
    pub fit: FitOptionArgs,
    /// Model file to write.
    #[arg(long)]
    pub out: PathBuf,
    /// Convergence trace CSV; defaults to the model path with `.trace.csv`.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Fimi,
    Triples,
    Csv,
}

impl OutputFormat {
    fn format(self) -> Format {
        match self {
            OutputFormat::Fimi => Format::Fimi,
            OutputFormat::Triples => Format::Triples,
            OutputFormat::Csv => Format::Csv,
        }
    }

    fn extension(self) -> &'static str {
        match self {
            OutputFormat::Fimi => "dat",
            OutputFormat::Triples => "txt",
            OutputFormat::Csv => "csv",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SampleArgs {
    /// Model file, for the naive and fast methods.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Dataset: swapped by the swap method, otherwise fitted first.
    #[arg(long)]
    pub dataset: Option<PathBuf>,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, value_enum, default_value = "fast")]
    pub method: MethodArg,
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Swap attempts per one in the dataset.
    #[arg(long, default_value_t = 5.0)]
    pub swap_multiplier: f64,
    #[arg(long, value_enum, default_value = "triples")]
    pub output_format: OutputFormat,
    #[command(flatten)]
    pub fit: FitOptionArgs,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Baseline {
    /// Greedy coverage by number of newly covered cells.
    Area,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct RankArgs {
    pub dataset: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    /// Minimum number of rows of a mined tile.
    #[arg(long)]
    pub min_support: usize,
    /// Code probability of the description length; the density by default.
    #[arg(long)]
    pub p: Option<f64>,
    /// Description-length budget in bits.
    #[arg(long)]
    pub budget: Option<f64>,
    /// Rank only this many tiles.
    #[arg(long)]
    pub top: Option<usize>,
    #[arg(long, value_enum)]
    pub baseline: Option<Baseline>,
    /// Use this fitted model instead of fitting the dataset.
    #[arg(long)]
    pub model: Option<PathBuf>,
    /// Rank the tiles in this file instead of mining.
    #[arg(long)]
    pub tiles: Option<PathBuf>,
    /// Report the rank of the first ranked tile containing the tile in this
    /// file.
    #[arg(long)]
    pub locate: Option<PathBuf>,
    /// Column names, one per line, for the table.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[command(flatten)]
    pub fit: FitOptionArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct AssessArgs {
    pub dataset: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long, default_value_t = 100)]
    pub samples: usize,
    #[arg(long, value_enum, default_value = "fast")]
    pub method: MethodArg,
    #[arg(long)]
    pub min_support: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 5.0)]
    pub swap_multiplier: f64,
    #[arg(long)]
    pub model: Option<PathBuf>,
    #[command(flatten)]
    pub fit: FitOptionArgs,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EmbedArgs {
    pub dataset: PathBuf,
    #[command(flatten)]
    pub input: InputArgs,
    #[arg(long)]
    pub k: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, default_value = "fimi")]
    pub output_format: OutputFormat,
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SynthKind {
    /// 900 x 5000 bag-of-words shape.
    Abstracts,
    /// 8124 x 120, 23 items per row.
    Mushroom,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct SynthArgs {
    #[arg(long, value_enum)]
    pub kind: SynthKind,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub rows: Option<usize>,
    #[arg(long, value_enum, default_value = "fimi")]
    pub output_format: OutputFormat,
    /// Output file; the manifest goes next to it.
    #[arg(long)]
    pub out: PathBuf,
}

/// Parses `args` (program name first), runs the command and returns the exit
/// code. Errors are reported on stderr.
pub fn run_from<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString>,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let args = match config_file::expand(args, SUBCOMMANDS) {
        Ok(a) => a,
        Err(e) => {
            eprintln!("error: {e}");
            return 2;
        }
    };
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return e.exit_code();
        }
    };
    match run(cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = cli.threads {
        pool = pool.num_threads(n);
    }
    let pool = pool.build().map_err(failed)?;
    pool.install(|| match cli.command {
        Command::Fit(a) => cmd_fit(&a),
        Command::Sample(a) => cmd_sample(&a),
        Command::Rank(a) => cmd_rank(&a),
        Command::Assess(a) => cmd_assess(&a),
        Command::Embed(a) => cmd_embed(&a),
        Command::Synth(a) => cmd_synth(&a),
    })
}

fn echo<T: Serialize>(args: &T) -> serde_json::Value {
    serde_json::to_value(args).unwrap_or(serde_json::Value::Null)
}

fn create_dir(dir: &Path) -> Result<(), CliError> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn parent_dir(path: &Path) -> PathBuf {
    match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
        _ => PathBuf::from("."),
    }
}

fn read_targets(path: &Path) -> Result<Marginals, CliError> {
    let err = |line, message: String| CliError::Read {
        path: path.to_path_buf(),
        source: ReadError::Parse { line, message },
    };
    let reader = BufReader::new(File::open(path)?);
    let mut lines = Vec::new();
    for (k, line) in reader.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let values = line
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .map(|t| {
                t.parse::<f64>()
                    .map_err(|_| err(k + 1, format!("`{t}` is not a number")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        lines.push((k + 1, values));
    }
    match <[_; 2]>::try_from(lines) {
        Ok([(_, rows), (_, cols)]) => Ok(Marginals::new(rows, cols)),
        Err(lines) => Err(err(
            lines.get(2).map_or(1, |l| l.0),
            "expected exactly two lines of targets".into(),
        )),
    }
}

fn fit_error(e: FitError) -> CliError {
    match e {
        FitError::NotConverged { .. } => CliError::NotConverged(e),
        other => CliError::Targets(other),
    }
}

fn fit_bernoulli(d: &SparseBinaryMatrix, options: &FitOptions) -> Result<MaxEntModel, CliError> {
    fit_traced(&d.marginals(), Family::Bernoulli, options)
        .map(|(m, _)| m)
        .map_err(fit_error)
}

fn load_model(path: &Path) -> Result<MaxEntModel, CliError> {
    model_file::load_model(path).map_err(|source| CliError::ModelFile {
        path: path.to_path_buf(),
        source,
    })
}

fn write_trace(path: &Path, trace: &[TraceEntry]) -> Result<(), CliError> {
    report::write_trace_csv(trace, BufWriter::new(File::create(path)?))?;
    Ok(())
}

fn cmd_fit(a: &FitArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("fit", echo(a), None);
    let family = Family::from(a.family);
    let targets = match (&a.dataset, &a.targets) {
        (Some(path), None) => {
            manifest.input(path);
            let format = a.input.format(path);
            let load = || -> Result<Marginals, ReadError> {
                if family == Family::Bernoulli {
                    Ok(io::load_binary(path, format, a.input.shape())?.marginals())
                } else {
                    Ok(io::load_valued(path, format, a.input.shape())?.marginals())
                }
            };
            manifest
                .time("load", load)
                .map_err(|source| CliError::Read {
                    path: path.clone(),
                    source,
                })?
        }
        (None, Some(path)) => {
            manifest.input(path);
            read_targets(path)?
        }
        _ => return Err(CliError::Usage("give a dataset or --targets".into())),
    };
    let options = a.fit.options();
    let result = manifest.time("fit", || fit_traced(&targets, family, &options));
    let trace_path = a
        .trace
        .clone()
        .unwrap_or_else(|| a.out.with_extension("trace.csv"));
    let out_dir = parent_dir(&a.out);
    create_dir(&out_dir)?;
    let (model, trace, outcome) = match result {
        Ok((model, trace)) => (model, trace, Ok(())),
        Err(FitError::NotConverged {
            iterations,
            gradient_norm,
            model,
            trace,
        }) => {
            let err = FitError::NotConverged {
                iterations,
                gradient_norm,
                model: model.clone(),
                trace: Vec::new(),
            };
            (*model, trace, Err(CliError::NotConverged(err)))
        }
        Err(e) => return Err(fit_error(e)),
    };
    model_file::save_model(&model, &a.out).map_err(failed)?;
    write_trace(&trace_path, &trace)?;
    manifest.output(&a.out);
    manifest.output(&trace_path);
    manifest.write(&out_dir)?;
    let c = model.convergence();
    eprintln!(
        "{} model: {} iterations, gradient norm {:e}, {} row and {} column groups",
        family.name(),
        c.iterations,
        c.gradient_norm,
        model.row_groups().len(),
        model.col_groups().len()
    );
    outcome
}

#[derive(Debug, Serialize)]
struct ReplicateStats {
    replicate: usize,
    seed: u64,
    file: String,
    draws: Option<u64>,
    ones: u64,
    attempted: Option<u64>,
    accepted: Option<u64>,
}

fn cmd_sample(a: &SampleArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("sample", echo(a), Some(a.seed));
    let method = Method::from(a.method);
    let config = SamplerConfig {
        seed: a.seed,
        method,
        swap_multiplier: a.swap_multiplier,
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    create_dir(&a.out)?;

    enum Source {
        Data(SparseBinaryMatrix),
        Model(MaxEntModel),
    }
    let source = match (method, &a.model, &a.dataset) {
        (Method::Swap, None, Some(path)) => {
            manifest.input(path);
            Source::Data(manifest.time("load", || a.input.load(path))?)
        }
        (Method::Swap, _, _) => {
            return Err(CliError::Usage(
                "the swap method needs --dataset and no --model".into(),
            ))
        }
        (_, Some(path), None) => {
            manifest.input(path);
            Source::Model(load_model(path)?)
        }
        (_, None, Some(path)) => {
            manifest.input(path);
            let d = manifest.time("load", || a.input.load(path))?;
            Source::Model(manifest.time("fit", || fit_bernoulli(&d, &a.fit.options()))?)
        }
        _ => {
            return Err(CliError::Usage(
                "model methods need exactly one of --model and --dataset".into(),
            ))
        }
    };

    let ext = a.output_format.extension();
    let run_one = |r: usize| -> Result<ReplicateStats, CliError> {
        let seed = derive_seed(a.seed, r as u64);
        let name = format!("sample_{r:04}.{ext}");
        let path = a.out.join(&name);
        let mut stats = ReplicateStats {
            replicate: r,
            seed,
            file: name,
            draws: None,
            ones: 0,
            attempted: None,
            accepted: None,
        };
        match &source {
            Source::Data(d) => {
                let (out, s) = swap_randomize_with_stats(d, &SamplerConfig { seed, ..config })
                    .map_err(failed)?;
                stats.ones = out.nnz() as u64;
                stats.attempted = Some(s.attempted);
                stats.accepted = Some(s.accepted);
                io::save_binary(&out, &path, a.output_format.format())?;
            }
            Source::Model(model) if model.family() == Family::Bernoulli => {
                let (out, s) = if method == Method::Naive {
                    sample_naive_with_stats(model, seed)
                } else {
                    sample_fast_with_stats(model, seed)
                }
                .map_err(failed)?;
                stats.ones = s.ones;
                stats.draws = Some(s.draws);
                io::save_binary(&out, &path, a.output_format.format())?;
            }
            Source::Model(model) => {
                let (out, s) = sample_valued_with_stats(model, seed).map_err(failed)?;
                stats.ones = s.ones;
                stats.draws = Some(s.draws);
                io::write_valued_triples(&out, BufWriter::new(File::create(&path)?))?;
            }
        }
        Ok(stats)
    };
    let stats = manifest.time("sample", || {
        (0..a.count)
            .into_par_iter()
            .map(run_one)
            .collect::<Result<Vec<_>, _>>()
    })?;

    for s in &stats {
        manifest.output(&a.out.join(&s.file));
    }
    let stats_path = a.out.join("stats.json");
    fs::write(
        &stats_path,
        serde_json::to_string_pretty(&stats).map_err(failed)? + "\n",
    )?;
    manifest.output(&stats_path);
    manifest.write(&a.out)?;
    Ok(())
}

#[derive(Debug, Serialize)]
struct Located {
    rows: Vec<usize>,
    cols: Vec<usize>,
    /// Rank of the first ranked tile containing it, if any.
    rank: Option<usize>,
    ranked: usize,
}

fn read_tile_file(path: &Path) -> Result<Vec<Tile>, CliError> {
    let reader = BufReader::new(File::open(path)?);
    tile_file::read_tiles(reader).map_err(|source| CliError::Read {
        path: path.to_path_buf(),
        source,
    })
}

fn cmd_rank(a: &RankArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("rank", echo(a), None);
    manifest.input(&a.dataset);
    let d = manifest.time("load", || a.input.load(&a.dataset))?;
    let miner = MinerConfig::new(a.min_support).map_err(|e| CliError::Usage(e.to_string()))?;
    let candidates = match &a.tiles {
        Some(path) => {
            manifest.input(path);
            read_tile_file(path)?
        }
        None => manifest
            .time("mine", || mine_closed_tiles(&d, &miner))
            .map_err(failed)?,
    };
    let target = match &a.locate {
        Some(path) => {
            manifest.input(path);
            let tiles = read_tile_file(path)?;
            match <[Tile; 1]>::try_from(tiles) {
                Ok([t]) => Some(t),
                Err(_) => {
                    return Err(CliError::Usage(
                        "--locate file must hold exactly one tile".into(),
                    ))
                }
            }
        }
        None => None,
    };
    let labels = match &a.labels {
        Some(path) => Some(
            fs::read_to_string(path)?
                .lines()
                .map(str::to_string)
                .collect::<Vec<_>>(),
        ),
        None => None,
    };
    create_dir(&a.out)?;
    if candidates.is_empty() {
        eprintln!("warning: no tiles with support at least {}", a.min_support);
    }
    let top = a.top.unwrap_or(usize::MAX);
    let jsonl = a.out.join("ranking.jsonl");
    let table = a.out.join("ranking.txt");
    let ranked_tiles: Vec<Tile> = if a.baseline == Some(Baseline::Area) {
        let ranked: Vec<AreaRanked> = manifest.time("rank", || area_select(&candidates, top));
        report::write_area_jsonl(&ranked, BufWriter::new(File::create(&jsonl)?))?;
        report::write_area_table(
            &ranked,
            labels.as_deref(),
            BufWriter::new(File::create(&table)?),
        )?;
        ranked.into_iter().map(|r| r.tile).collect()
    } else {
        let model = match &a.model {
            Some(path) => {
                manifest.input(path);
                load_model(path)?
            }
            None => manifest.time("fit", || fit_bernoulli(&d, &a.fit.options()))?,
        };
        let p = match a.p {
            Some(p) => p,
            None => d.density(),
        };
        let config =
            InterestingnessConfig::new(p, a.budget).map_err(|e| CliError::Usage(e.to_string()))?;
        let ranked: Vec<RankedTile> = manifest
            .time("rank", || {
                greedy_select_top(&model, &candidates, &config, top)
            })
            .map_err(failed)?;
        report::write_ranking_jsonl(&ranked, BufWriter::new(File::create(&jsonl)?))?;
        report::write_ranking_table(
            &ranked,
            labels.as_deref(),
            BufWriter::new(File::create(&table)?),
        )?;
        ranked.into_iter().map(|r| r.tile).collect()
    };
    manifest.output(&jsonl);
    manifest.output(&table);
    if let Some(tile) = target {
        let rank = ranked_tiles
            .iter()
            .position(|t| tile.is_subtile_of(t))
            .map(|p| p + 1);
        let located = Located {
            rows: tile.rows.clone(),
            cols: tile.cols.clone(),
            rank,
            ranked: ranked_tiles.len(),
        };
        let path = a.out.join("located.json");
        fs::write(
            &path,
            serde_json::to_string_pretty(&located).map_err(failed)? + "\n",
        )?;
        manifest.output(&path);
        match rank {
            Some(r) => eprintln!("located tile at rank {r}"),
            None => eprintln!(
                "located tile not among the {} ranked tiles",
                ranked_tiles.len()
            ),
        }
    }
    manifest.write(&a.out)?;
    Ok(())
}

fn cmd_assess(a: &AssessArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("assess", echo(a), Some(a.seed));
    manifest.input(&a.dataset);
    let d = manifest.time("load", || a.input.load(&a.dataset))?;
    let miner = MinerConfig::new(a.min_support).map_err(|e| CliError::Usage(e.to_string()))?;
    let method = Method::from(a.method);
    let config = SamplerConfig {
        seed: a.seed,
        method,
        swap_multiplier: a.swap_multiplier,
    };
    config
        .validate()
        .map_err(|e| CliError::Usage(e.to_string()))?;
    let model = match (&a.model, method) {
        (_, Method::Swap) => None,
        (Some(path), _) => {
            manifest.input(path);
            Some(load_model(path)?)
        }
        (None, _) => Some(manifest.time("fit", || fit_bernoulli(&d, &a.fit.options()))?),
    };
    let observed = manifest
        .time("mine", || closed_size_histogram(&d, &miner))
        .map_err(failed)?;
    let one = |r: usize| -> Result<Vec<u64>, CliError> {
        let seed = derive_seed(a.seed, r as u64);
        let sample = match (&model, method) {
            (_, Method::Swap) => {
                maxtile_core::randomize::swap_randomize(&d, &SamplerConfig { seed, ..config })
                    .map_err(failed)?
            }
            (Some(m), Method::Naive) => {
                maxtile_core::randomize::sample_naive(m, seed).map_err(failed)?
            }
            (Some(m), _) => maxtile_core::randomize::sample_fast(m, seed).map_err(failed)?,
            (None, _) => unreachable!("model methods fit or load a model"),
        };
        closed_size_histogram(&sample, &miner).map_err(failed)
    };
    let samples = manifest.time("samples", || {
        (0..a.samples)
            .into_par_iter()
            .map(one)
            .collect::<Result<Vec<_>, _>>()
    })?;
    let rows = summarize_histograms(&observed, &samples);
    create_dir(&a.out)?;
    let path = a.out.join("closed_sizes.csv");
    report::write_sizes_csv(&rows, BufWriter::new(File::create(&path)?))?;
    manifest.output(&path);
    manifest.write(&a.out)?;
    Ok(())
}

fn cmd_embed(a: &EmbedArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("embed", echo(a), Some(a.seed));
    manifest.input(&a.dataset);
    let d = manifest.time("load", || a.input.load(&a.dataset))?;
    let (e, tile) = embed_tile(&d, a.k, a.seed).map_err(|e| CliError::Usage(e.to_string()))?;
    create_dir(&a.out)?;
    let data = a
        .out
        .join(format!("embedded.{}", a.output_format.extension()));
    io::save_binary(&e, &data, a.output_format.format())?;
    let tile_path = a.out.join("embedded_tile.txt");
    let mut w = BufWriter::new(File::create(&tile_path)?);
    tile_file::write_tile(&tile, &mut w)?;
    w.flush()?;
    manifest.output(&data);
    manifest.output(&tile_path);
    manifest.write(&a.out)?;
    Ok(())
}

fn cmd_synth(a: &SynthArgs) -> Result<(), CliError> {
    let mut manifest = RunManifest::new("synth", echo(a), Some(a.seed));
    let d = manifest.time("generate", || match a.kind {
        SynthKind::Abstracts => {
            let spec = TextLike::abstracts();
            TextLike {
                n_rows: a.rows.unwrap_or(spec.n_rows),
                ..spec
            }
            .generate(a.seed)
        }
        SynthKind::Mushroom => {
            let spec = Categorical::mushroom();
            Categorical {
                n_rows: a.rows.unwrap_or(spec.n_rows),
                ..spec
            }
            .generate(a.seed)
        }
    });
    let dir = parent_dir(&a.out);
    create_dir(&dir)?;
    io::save_binary(&d, &a.out, a.output_format.format())?;
    manifest.output(&a.out);
    manifest.write(&dir)?;
    Ok(())
}
