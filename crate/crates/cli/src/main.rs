//! `gradmine` command-line front end.
//!
//! Exit status: 0 on success, 1 for data or runtime failures, 2 for usage
//! errors (bad flags, unparsable or invalid benchmark specs).

use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use gradmine::dataset::{load_dataset_with, CleaningOptions, Dataset, DropReason};
use gradmine::encoding::{SearchSpace, SpaceKind, ENUMERATION_LIMIT};
use gradmine::harness::{
    run_benchmark, scatter_extract, scatter_rows, write_report_csv, write_scatter_csv, BenchReport,
    BenchSpec, MineReport,
};
use gradmine::search::{run_miner, Algorithm, SearchConfig};

/// Attribute count up to which `mine` defaults to the exhaustive miner.
const EXHAUSTIVE_DEFAULT_MAX_ATTRS: usize = 10;

#[derive(Parser)]
#[command(name = "gradmine", version, about = "Gradual pattern mining with metaheuristic search")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Mine gradual patterns from a numeric CSV file.
    Mine(MineArgs),
    /// Show search-space bounds and optionally list every valid candidate.
    Space(SpaceArgs),
    /// Run a benchmark grid and write JSON/CSV reports.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum AlgoArg {
    Rs,
    Ls,
    Ga,
    Pso,
    Graank,
}

impl From<AlgoArg> for Algorithm {
    fn from(a: AlgoArg) -> Self {
        match a {
            AlgoArg::Rs => Algorithm::Rs,
            AlgoArg::Ls => Algorithm::Ls,
            AlgoArg::Ga => Algorithm::Ga,
            AlgoArg::Pso => Algorithm::Pso,
            AlgoArg::Graank => Algorithm::Graank,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SpaceArg {
    Numeric,
    Bitmap,
}

impl From<SpaceArg> for SpaceKind {
    fn from(s: SpaceArg) -> Self {
        match s {
            SpaceArg::Numeric => SpaceKind::Numeric,
            SpaceArg::Bitmap => SpaceKind::Bitmap,
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OutFormat {
    Text,
    Json,
}

#[derive(Args)]
struct InputArgs {
    /// Field delimiter of the input file.
    #[arg(long, default_value_t = ',')]
    delimiter: char,
    /// Treat the first line as data rather than a header.
    #[arg(long)]
    no_header: bool,
}

impl InputArgs {
    fn options(&self) -> Result<CleaningOptions> {
        if !self.delimiter.is_ascii() {
            return Err(usage("--delimiter must be a single ASCII character"));
        }
        Ok(CleaningOptions {
            delimiter: self.delimiter as u8,
            has_header: !self.no_header,
            ..CleaningOptions::default()
        })
    }
}

#[derive(Args)]
struct MineArgs {
    /// Input CSV file.
    #[arg(long)]
    data: PathBuf,
    /// Miner to run [default: graank for up to 10 attributes, ga otherwise].
    #[arg(long, value_enum)]
    algo: Option<AlgoArg>,
    /// Search space for the metaheuristics.
    #[arg(long, value_enum, default_value = "numeric")]
    space: SpaceArg,
    /// Minimum support for reported patterns.
    #[arg(long, default_value_t = 0.5)]
    min_sup: f64,
    /// Iterations.
    #[arg(long, default_value_t = 20)]
    iters: usize,
    #[arg(long, env = "GRADMINE_SEED", default_value_t = 0)]
    seed: u64,
    /// Local search step size [default: half the space width].
    #[arg(long)]
    step: Option<f64>,
    /// Genetic algorithm population size.
    #[arg(long, default_value_t = 10)]
    npop: usize,
    /// Crossover probability.
    #[arg(long, default_value_t = 0.75)]
    gamma: f64,
    /// Per-bit mutation probability.
    #[arg(long, default_value_t = 0.2)]
    mu: f64,
    /// Standard deviation of the Gaussian mutation shift.
    #[arg(long, default_value_t = 1.0)]
    mscale: f64,
    /// Swarm size.
    #[arg(long, default_value_t = 10)]
    nparticles: usize,
    /// Particle velocity clamp [default: the space width].
    #[arg(long)]
    vmax: Option<f64>,
    /// Attraction towards the personal best.
    #[arg(long, default_value_t = 1.0)]
    coef_p: f64,
    /// Attraction towards the global best.
    #[arg(long, default_value_t = 0.2)]
    coef_g: f64,
    /// Velocity inertia.
    #[arg(long, default_value_t = 1.0)]
    inertia: f64,
    #[arg(long, value_enum, default_value = "text")]
    out: OutFormat,
    /// Also write every evaluated candidate to this CSV file.
    #[arg(long)]
    scatter: Option<PathBuf>,
    #[command(flatten)]
    input: InputArgs,
}

impl MineArgs {
    fn config(&self) -> SearchConfig {
        SearchConfig {
            max_iterations: self.iters,
            seed: self.seed,
            sigma: self.min_sup,
            step_size: self.step,
            npop: self.npop,
            crossover_rate: self.gamma,
            mutation_rate: self.mu,
            mutation_scale: self.mscale,
            nparticles: self.nparticles,
            max_velocity: self.vmax,
            coef_p: self.coef_p,
            coef_g: self.coef_g,
            inertia: self.inertia,
        }
    }
}

#[derive(Args)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["attrs", "data"])))]
struct SpaceArgs {
    /// Attribute count.
    #[arg(long)]
    attrs: Option<usize>,
    /// Take the attribute count and names from a CSV file.
    #[arg(long)]
    data: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "numeric")]
    space: SpaceArg,
    /// Print every valid candidate as `decimal<TAB>bits<TAB>pattern`.
    #[arg(long)]
    list_valid: bool,
    #[command(flatten)]
    input: InputArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// JSON benchmark spec.
    #[arg(long, conflicts_with_all = ["data", "algo", "space", "reps", "min_sup", "iters"])]
    spec: Option<PathBuf>,
    /// Dataset file (repeatable).
    #[arg(long)]
    data: Vec<PathBuf>,
    /// Algorithms, comma separated.
    #[arg(long, value_enum, value_delimiter = ',')]
    algo: Vec<AlgoArg>,
    /// Search spaces, comma separated [default: numeric,bitmap].
    #[arg(long, value_enum, value_delimiter = ',')]
    space: Vec<SpaceArg>,
    #[arg(long)]
    reps: Option<usize>,
    #[arg(long)]
    min_sup: Option<f64>,
    #[arg(long)]
    iters: Option<usize>,
    /// Base seed; repetition r uses base + r.
    #[arg(long, env = "GRADMINE_SEED")]
    seed: Option<u64>,
    /// Write per-run scatter CSVs under `<out-dir>/scatter`.
    #[arg(long)]
    scatter: bool,
    #[arg(long)]
    out_dir: PathBuf,
}

/// Marks an error as a usage problem (exit status 2).
#[derive(Debug)]
struct UsageError(String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Mine(a) => cmd_mine(&a),
        Command::Space(a) => cmd_space(&a),
        Command::Bench(a) => cmd_bench(&a),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", describe(&e));
            if e.downcast_ref::<UsageError>().is_some() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

// Library errors already embed their source in the message, so a cause is
// only appended when it adds something.
fn describe(e: &anyhow::Error) -> String {
    let mut text = String::new();
    for cause in e.chain() {
        let msg = cause.to_string();
        if !text.contains(&msg) {
            if !text.is_empty() {
                text.push_str(": ");
            }
            text.push_str(&msg);
        }
    }
    text
}

fn load(path: &Path, input: &InputArgs) -> Result<Dataset> {
    let (d, report) = load_dataset_with(path, &input.options()?)
        .with_context(|| format!("loading {}", path.display()))?;
    for (name, reason) in &report.dropped_columns {
        let why = match reason {
            DropReason::Timestamp => "timestamp",
            DropReason::NonNumeric => "non-numeric",
        };
        eprintln!("note: dropped {why} column {name:?}");
    }
    if report.dropped_rows > 0 {
        eprintln!("note: dropped {} rows with missing values", report.dropped_rows);
    }
    Ok(d)
}

fn cmd_mine(a: &MineArgs) -> Result<()> {
    let config = a.config();
    config.validate().map_err(|e| usage(e.to_string()))?;
    let d = load(&a.data, &a.input)?;
    let (algorithm, defaulted) = match a.algo {
        Some(x) => (Algorithm::from(x), false),
        None if d.m() <= EXHAUSTIVE_DEFAULT_MAX_ATTRS => (Algorithm::Graank, true),
        None => (Algorithm::Ga, true),
    };
    let kind = if algorithm.is_stochastic() {
        SpaceKind::from(a.space)
    } else {
        SpaceKind::Numeric
    };
    let space = SearchSpace::build(d.m(), kind)?;
    let started = Instant::now();
    let result = run_miner(algorithm, &d, &space, &config)?;
    eprintln!("wall time: {:.6} s", started.elapsed().as_secs_f64());

    if let Some(path) = &a.scatter {
        let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_scatter_csv(&scatter_extract(&result), BufWriter::new(file))?;
    }

    let name = a.data.display().to_string();
    let report = MineReport::new(&name, &d, kind, &config, &result);
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match a.out {
        OutFormat::Json => {
            serde_json::to_writer_pretty(&mut out, &report)?;
            writeln!(out)?;
        }
        OutFormat::Text => write_mine_text(&mut out, &report, defaulted)?,
    }
    Ok(())
}

fn write_mine_text(out: &mut impl Write, r: &MineReport, defaulted: bool) -> io::Result<()> {
    let note = if defaulted { " (default)" } else { "" };
    writeln!(out, "algorithm: {}{note}, space: {}", r.algorithm, r.space)?;
    writeln!(out, "dataset: {} ({} objects, {} attributes)", r.dataset, r.objects, r.attributes)?;
    match &r.best {
        Some(b) => {
            writeln!(out, "best pattern: {} (candidate {})", b.pattern, b.candidate)?;
            writeln!(out, "support: {:.4} ({} concordant pairs)", b.support, b.concordant_pairs)?;
            writeln!(out, "fitness: {}", r.best_fitness)?;
        }
        None => writeln!(out, "best pattern: none")?,
    }
    writeln!(out, "evaluations: {}, invalid candidates: {}", r.evaluations, r.invalid_candidates)?;
    writeln!(
        out,
        "frequent patterns (min-sup {}): {}",
        r.config.sigma,
        r.frequent_patterns.len()
    )?;
    for f in &r.frequent_patterns {
        writeln!(out, "  {:.4}  {}", f.support, f.pattern)?;
    }
    Ok(())
}

fn cmd_space(a: &SpaceArgs) -> Result<()> {
    let (m, names) = match (&a.data, a.attrs) {
        (Some(path), _) => {
            let d = load(path, &a.input)?;
            (d.m(), Some(d.attribute_names().to_vec()))
        }
        (None, Some(m)) => (m, None),
        (None, None) => unreachable!("clap requires one of --attrs/--data"),
    };
    let space = SearchSpace::build(m, a.space.into()).map_err(|e| {
        if a.attrs.is_some() {
            usage(e.to_string())
        } else {
            e.into()
        }
    })?;
    let stdout = io::stdout();
    let mut out = BufWriter::new(stdout.lock());
    writeln!(
        out,
        "bounds: [{}, {}], valid: {}",
        space.lower(),
        space.upper(),
        space.valid_count()
    )?;
    if a.list_valid {
        for x in space.enumerate_valid_with_limit(ENUMERATION_LIMIT)? {
            let bits = space.decode(&x)?;
            let decoded = space.to_pattern(&x)?;
            let p = decoded.pattern().expect("enumerated candidates are valid");
            let label = match &names {
                Some(n) => p.render(n),
                None => p.to_string(),
            };
            writeln!(out, "{x}\t{bits}\t{label}")?;
        }
    }
    out.flush()?;
    Ok(())
}

fn bench_spec(a: &BenchArgs) -> Result<BenchSpec> {
    let mut spec = match &a.spec {
        Some(path) => {
            let text = fs::read_to_string(path)
                .with_context(|| format!("reading {}", path.display()))?;
            serde_json::from_str::<BenchSpec>(&text)
                .map_err(|e| usage(format!("invalid bench spec {}: {e}", path.display())))?
        }
        None => {
            let algorithms = if a.algo.is_empty() {
                vec![Algorithm::Rs, Algorithm::Ls, Algorithm::Ga, Algorithm::Pso]
            } else {
                a.algo.iter().map(|&x| x.into()).collect()
            };
            let mut spec = BenchSpec::new(a.data.clone(), algorithms);
            if !a.space.is_empty() {
                spec.spaces = a.space.iter().map(|&s| s.into()).collect();
            }
            if let Some(r) = a.reps {
                spec.repetitions = r;
            }
            if let Some(s) = a.min_sup {
                spec.sigma = s;
            }
            if let Some(t) = a.iters {
                spec.config.max_iterations = t;
            }
            if let Some(s) = a.seed {
                spec.base_seed = s;
            }
            spec
        }
    };
    spec.keep_trajectories |= a.scatter;
    spec.validate().map_err(|e| usage(e.to_string()))?;
    Ok(spec)
}

fn cmd_bench(a: &BenchArgs) -> Result<()> {
    let spec = bench_spec(a)?;
    let report = run_benchmark(&spec)?;
    fs::create_dir_all(&a.out_dir)
        .with_context(|| format!("creating {}", a.out_dir.display()))?;

    if spec.keep_trajectories {
        let dir = a.out_dir.join("scatter");
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        write_scatter_files(&report, &dir)?;
    }
    let json = a.out_dir.join("report.json");
    let mut w = BufWriter::new(File::create(&json).with_context(|| format!("creating {}", json.display()))?);
    serde_json::to_writer_pretty(&mut w, &report)?;
    writeln!(w)?;
    w.flush()?;
    let csv = a.out_dir.join("report.csv");
    write_report_csv(
        &report,
        BufWriter::new(File::create(&csv).with_context(|| format!("creating {}", csv.display()))?),
    )?;

    let stdout = io::stdout();
    let mut out = stdout.lock();
    write_bench_summary(&mut out, &report)?;
    writeln!(out, "wrote {} and {}", json.display(), csv.display())?;
    Ok(())
}

fn file_stem(dataset: &str) -> String {
    let stem = Path::new(dataset)
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "data".into());
    stem.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

fn write_scatter_files(report: &BenchReport, dir: &Path) -> Result<()> {
    let index: Vec<&PathBuf> = report.spec.datasets.iter().collect();
    for c in &report.cells {
        let i = index
            .iter()
            .position(|p| p.display().to_string() == c.dataset)
            .unwrap_or(0);
        let space = c.space.map_or("all", SpaceKind::name);
        for r in &c.runs {
            let Some(t) = &r.trajectory else { continue };
            let name = format!("{i}_{}_{}_{space}_rep{}.csv", file_stem(&c.dataset), c.algorithm, r.rep);
            let path = dir.join(name);
            let file = File::create(&path).with_context(|| format!("creating {}", path.display()))?;
            write_scatter_csv(&scatter_rows(t), BufWriter::new(file))?;
        }
    }
    Ok(())
}

fn write_bench_summary(out: &mut impl Write, report: &BenchReport) -> io::Result<()> {
    writeln!(
        out,
        "{:<24} {:<7} {:<8} {:>12} {:>6} {:>10} {:>8}",
        "dataset", "algo", "space", "mean time s", "valid", "invalid", "best"
    )?;
    for c in &report.cells {
        let space = c.space.map_or("-", SpaceKind::name);
        let dataset = file_stem(&c.dataset);
        match &c.error {
            Some(e) => writeln!(out, "{dataset:<24} {:<7} {space:<8} error: {e}", c.algorithm)?,
            None => writeln!(
                out,
                "{dataset:<24} {:<7} {space:<8} {:>12.6} {:>6} {:>10.1} {:>8.4}",
                c.algorithm,
                c.mean_wall_time.unwrap_or(f64::NAN),
                c.valid_pattern_count,
                c.invalid_candidate_count,
                c.best_support.unwrap_or(0.0),
            )?,
        }
    }
    if !report.wilcoxon.is_empty() {
        writeln!(out)?;
        writeln!(out, "numeric vs bitmap run time (Wilcoxon signed-rank, two-sided)")?;
        writeln!(out, "{:<7} {:>5} {:>8} {:>10}", "algo", "pairs", "W", "p-value")?;
        for w in &report.wilcoxon {
            match (&w.outcome, &w.error) {
                (Some(o), _) => writeln!(
                    out,
                    "{:<7} {:>5} {:>8} {:>10.4}",
                    w.algorithm, o.n, o.statistic, o.p_value
                )?,
                (None, e) => writeln!(
                    out,
                    "{:<7} {:>5} {:>8} {:>10}  ({})",
                    w.algorithm,
                    w.datasets.len(),
                    "-",
                    "-",
                    e.as_deref().unwrap_or("not computed")
                )?,
            }
        }
    }
    Ok(())
}
