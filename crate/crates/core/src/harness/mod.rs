//! Benchmark harness: repeated seeded runs per (dataset, algorithm, space)
//! cell, a paired signed-rank comparison of numeric versus bitmap run times,
//! and scatter extraction of every evaluated candidate.

mod wilcoxon;

use std::collections::BTreeMap;
use std::io::Write;
use std::path::PathBuf;

use num_bigint::BigUint;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

pub use wilcoxon::{wilcoxon_signed_rank, WilcoxonOutcome, EXACT_LIMIT};

use crate::baseline::DEFAULT_ATTRIBUTE_GUARD;
use crate::dataset::{load_dataset_with, CleaningOptions, Dataset};
use crate::encoding::{SearchSpace, SpaceKind};
use crate::fitness::check_sigma;
use crate::search::{graank_run, run_miner, Algorithm, SearchConfig, SearchResult, Trajectory};
use crate::serde_util;
use crate::{Error, Result};

pub const REPORT_SCHEMA_VERSION: u32 = 1;

fn default_spaces() -> Vec<SpaceKind> {
    vec![SpaceKind::Numeric, SpaceKind::Bitmap]
}

fn default_repetitions() -> usize {
    3
}

fn default_sigma() -> f64 {
    0.5
}

fn default_delimiter() -> char {
    ','
}

fn default_true() -> bool {
    true
}

fn default_guard() -> usize {
    DEFAULT_ATTRIBUTE_GUARD
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BenchSpec {
    pub datasets: Vec<PathBuf>,
    pub algorithms: Vec<Algorithm>,
    #[serde(default = "default_spaces")]
    pub spaces: Vec<SpaceKind>,
    #[serde(default = "default_repetitions")]
    pub repetitions: usize,
    #[serde(default = "default_sigma")]
    pub sigma: f64,
    /// Run `r` of a cell uses seed `base_seed + r`.
    #[serde(default)]
    pub base_seed: u64,
    /// Shared parameters; `sigma` and `seed` here are replaced by the fields above.
    #[serde(default)]
    pub config: SearchConfig,
    /// Per-algorithm partial patches over `config`, e.g. `{"ga": {"npop": 20}}`.
    #[serde(default)]
    pub overrides: BTreeMap<Algorithm, Map<String, Value>>,
    #[serde(default = "default_delimiter")]
    pub delimiter: char,
    #[serde(default = "default_true")]
    pub has_header: bool,
    /// Attribute limit for the exhaustive miner.
    #[serde(default = "default_guard")]
    pub graank_guard: usize,
    /// Keep full trajectories in the report (needed for scatter output).
    #[serde(default)]
    pub keep_trajectories: bool,
}

impl BenchSpec {
    pub fn new(datasets: Vec<PathBuf>, algorithms: Vec<Algorithm>) -> Self {
        Self {
            datasets,
            algorithms,
            spaces: default_spaces(),
            repetitions: default_repetitions(),
            sigma: default_sigma(),
            base_seed: 0,
            config: SearchConfig::default(),
            overrides: BTreeMap::new(),
            delimiter: default_delimiter(),
            has_header: true,
            graank_guard: default_guard(),
            keep_trajectories: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |msg: &str| Err(Error::BenchSpec(msg.to_owned()));
        if self.datasets.is_empty() {
            return fail("at least one dataset is required");
        }
        if self.algorithms.is_empty() {
            return fail("at least one algorithm is required");
        }
        if self.spaces.is_empty() {
            return fail("at least one search space is required");
        }
        if self.repetitions < 1 {
            return fail("repetitions must be >= 1");
        }
        if !self.delimiter.is_ascii() {
            return fail("delimiter must be a single ASCII character");
        }
        check_sigma(self.sigma)?;
        for a in &self.algorithms {
            self.config_for(*a, 0)?.validate()?;
        }
        Ok(())
    }

    /// Effective configuration for one run.
    pub fn config_for(&self, algorithm: Algorithm, rep: usize) -> Result<SearchConfig> {
        let mut base = serde_json::to_value(&self.config)?;
        if let (Some(patch), Value::Object(obj)) = (self.overrides.get(&algorithm), &mut base) {
            for (k, v) in patch {
                obj.insert(k.clone(), v.clone());
            }
        }
        let mut c: SearchConfig = serde_json::from_value(base)
            .map_err(|e| Error::BenchSpec(format!("override for {algorithm}: {e}")))?;
        c.sigma = self.sigma;
        c.seed = self.base_seed.wrapping_add(rep as u64);
        Ok(c)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunRecord {
    pub rep: usize,
    pub seed: u64,
    pub wall_time: f64,
    pub evaluations: u64,
    /// Distinct frequent patterns found.
    pub valid_patterns: usize,
    /// Evaluated candidates that do not decode to a pattern.
    pub invalid_candidates: usize,
    pub best_support: f64,
    pub best_pattern: Option<String>,
    #[serde(with = "serde_util::opt_biguint")]
    pub best_candidate: Option<BigUint>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trajectory: Option<Trajectory>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCell {
    pub dataset: String,
    pub algorithm: Algorithm,
    /// `None` for the exhaustive miner, which does not depend on the space.
    pub space: Option<SpaceKind>,
    pub objects: Option<usize>,
    pub attributes: Option<usize>,
    pub runs: Vec<RunRecord>,
    /// Per-run seconds.
    pub wall_times: Vec<f64>,
    pub mean_wall_time: Option<f64>,
    /// Process peak resident set after the cell, when the OS reports it.
    pub peak_rss_kib: Option<u64>,
    /// Distinct frequent patterns over all runs of the cell.
    pub valid_pattern_count: usize,
    /// Mean invalid candidates per run.
    pub invalid_candidate_count: f64,
    pub best_support: Option<f64>,
    pub error: Option<String>,
}

impl BenchCell {
    fn failed(dataset: &str, algorithm: Algorithm, space: Option<SpaceKind>, d: Option<&Dataset>, err: String) -> Self {
        Self {
            dataset: dataset.to_owned(),
            algorithm,
            space,
            objects: d.map(Dataset::n),
            attributes: d.map(Dataset::m),
            runs: Vec::new(),
            wall_times: Vec::new(),
            mean_wall_time: None,
            peak_rss_kib: peak_rss_kib(),
            valid_pattern_count: 0,
            invalid_candidate_count: 0.0,
            best_support: None,
            error: Some(err),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonRow {
    pub algorithm: Algorithm,
    pub datasets: Vec<String>,
    /// Mean wall times, paired by dataset.
    pub numeric: Vec<f64>,
    pub bitmap: Vec<f64>,
    pub outcome: Option<WilcoxonOutcome>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub schema_version: u32,
    pub spec: BenchSpec,
    pub cells: Vec<BenchCell>,
    pub wilcoxon: Vec<WilcoxonRow>,
}

impl BenchReport {
    pub fn cell(&self, dataset: &str, algorithm: Algorithm, space: Option<SpaceKind>) -> Option<&BenchCell> {
        self.cells
            .iter()
            .find(|c| c.dataset == dataset && c.algorithm == algorithm && c.space == space)
    }
}

/// Best-effort process high-water mark from `/proc/self/status`.
pub fn peak_rss_kib() -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    status
        .lines()
        .find_map(|l| l.strip_prefix("VmHWM:"))
        .and_then(|v| v.trim().trim_end_matches("kB").trim().parse().ok())
}

fn run_record(rep: usize, seed: u64, r: SearchResult, d: &Dataset, keep: bool) -> RunRecord {
    RunRecord {
        rep,
        seed,
        wall_time: r.wall_time.as_secs_f64(),
        evaluations: r.trajectory.evaluations,
        valid_patterns: r.frequent_patterns.len(),
        invalid_candidates: r.invalid_candidates(),
        best_support: r.best_support,
        best_pattern: r.best_pattern.as_ref().map(|p| p.render(d.attribute_names())),
        best_candidate: r.best_candidate.clone(),
        trajectory: keep.then(|| r.trajectory.clone()),
    }
}

fn assemble(dataset: &str, algorithm: Algorithm, space: Option<SpaceKind>, d: &Dataset, runs: Vec<(RunRecord, Vec<BigUint>)>) -> BenchCell {
    let mut distinct = std::collections::BTreeSet::new();
    for (_, frequent) in &runs {
        distinct.extend(frequent.iter().cloned());
    }
    let runs: Vec<RunRecord> = runs.into_iter().map(|(r, _)| r).collect();
    let wall_times: Vec<f64> = runs.iter().map(|r| r.wall_time).collect();
    let count = runs.len() as f64;
    BenchCell {
        dataset: dataset.to_owned(),
        algorithm,
        space,
        objects: Some(d.n()),
        attributes: Some(d.m()),
        mean_wall_time: Some(wall_times.iter().sum::<f64>() / count),
        wall_times,
        peak_rss_kib: peak_rss_kib(),
        valid_pattern_count: distinct.len(),
        invalid_candidate_count: runs.iter().map(|r| r.invalid_candidates as f64).sum::<f64>() / count,
        best_support: runs.iter().map(|r| r.best_support).reduce(f64::max),
        runs,
        error: None,
    }
}

fn run_cell(spec: &BenchSpec, name: &str, d: &Dataset, algorithm: Algorithm, kind: Option<SpaceKind>) -> BenchCell {
    let attempt = || -> Result<BenchCell> {
        let mut runs = Vec::new();
        match kind {
            None => {
                let c = spec.config_for(algorithm, 0)?;
                let r = graank_run(d, c.sigma, spec.graank_guard)?;
                let frequent = r.frequent_patterns.iter().map(|f| f.candidate.clone()).collect();
                runs.push((run_record(0, c.seed, r, d, spec.keep_trajectories), frequent));
            }
            Some(kind) => {
                let space = SearchSpace::build(d.m(), kind)?;
                for rep in 0..spec.repetitions {
                    let c = spec.config_for(algorithm, rep)?;
                    let r = run_miner(algorithm, d, &space, &c)?;
                    let frequent = r.frequent_patterns.iter().map(|f| f.candidate.clone()).collect();
                    runs.push((run_record(rep, c.seed, r, d, spec.keep_trajectories), frequent));
                }
            }
        }
        Ok(assemble(name, algorithm, kind, d, runs))
    };
    attempt().unwrap_or_else(|e| BenchCell::failed(name, algorithm, kind, Some(d), e.to_string()))
}

/// Runs every cell of the spec. Load and mining failures become cell
/// errors rather than aborting the benchmark.
pub fn run_benchmark(spec: &BenchSpec) -> Result<BenchReport> {
    spec.validate()?;
    let opts = CleaningOptions {
        delimiter: spec.delimiter as u8,
        has_header: spec.has_header,
        ..CleaningOptions::default()
    };
    let mut cells = Vec::new();
    for path in &spec.datasets {
        let name = path.display().to_string();
        let d = match load_dataset_with(path, &opts) {
            Ok((d, _)) => d,
            Err(e) => {
                for &a in &spec.algorithms {
                    if a.is_stochastic() {
                        for &k in &spec.spaces {
                            cells.push(BenchCell::failed(&name, a, Some(k), None, e.to_string()));
                        }
                    } else {
                        cells.push(BenchCell::failed(&name, a, None, None, e.to_string()));
                    }
                }
                continue;
            }
        };
        for &a in &spec.algorithms {
            if a.is_stochastic() {
                for &k in &spec.spaces {
                    cells.push(run_cell(spec, &name, &d, a, Some(k)));
                }
            } else {
                cells.push(run_cell(spec, &name, &d, a, None));
            }
        }
    }
    let wilcoxon = compare_spaces(spec, &cells);
    Ok(BenchReport {
        schema_version: REPORT_SCHEMA_VERSION,
        spec: spec.clone(),
        cells,
        wilcoxon,
    })
}

/// Pairs numeric and bitmap mean run times per dataset for every
/// stochastic algorithm benchmarked in both spaces.
pub fn compare_spaces(spec: &BenchSpec, cells: &[BenchCell]) -> Vec<WilcoxonRow> {
    let both = spec.spaces.contains(&SpaceKind::Numeric) && spec.spaces.contains(&SpaceKind::Bitmap);
    if !both {
        return Vec::new();
    }
    let mut rows = Vec::new();
    for &a in spec.algorithms.iter().filter(|a| a.is_stochastic()) {
        let mut row = WilcoxonRow {
            algorithm: a,
            datasets: Vec::new(),
            numeric: Vec::new(),
            bitmap: Vec::new(),
            outcome: None,
            error: None,
        };
        for path in &spec.datasets {
            let name = path.display().to_string();
            let mean = |k| {
                cells
                    .iter()
                    .find(|c| c.dataset == name && c.algorithm == a && c.space == Some(k))
                    .and_then(|c| c.mean_wall_time)
            };
            if let (Some(nu), Some(bm)) = (mean(SpaceKind::Numeric), mean(SpaceKind::Bitmap)) {
                row.datasets.push(name);
                row.numeric.push(nu);
                row.bitmap.push(bm);
            }
        }
        match wilcoxon_signed_rank(&row.numeric, &row.bitmap) {
            Ok(o) => row.outcome = Some(o),
            Err(e) => row.error = Some(e.to_string()),
        }
        rows.push(row);
    }
    rows
}

/// A single mining run flattened for output: patterns are rendered with
/// attribute names and wall time is left out so equal seeds give equal bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MineReport {
    pub schema_version: u32,
    pub dataset: String,
    pub objects: usize,
    pub attributes: usize,
    pub algorithm: Algorithm,
    pub space: SpaceKind,
    pub config: SearchConfig,
    pub best: Option<ReportedPattern>,
    #[serde(with = "serde_util::fitness")]
    pub best_fitness: f64,
    pub evaluations: u64,
    pub invalid_candidates: usize,
    pub frequent_patterns: Vec<ReportedPattern>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportedPattern {
    pub pattern: String,
    #[serde(with = "serde_util::biguint")]
    pub candidate: BigUint,
    pub concordant_pairs: u64,
    pub support: f64,
}

impl MineReport {
    pub fn new(dataset: &str, d: &Dataset, space: SpaceKind, config: &SearchConfig, r: &SearchResult) -> Self {
        let names = d.attribute_names();
        let best = match (&r.best_candidate, &r.best_pattern) {
            (Some(candidate), Some(p)) => Some(ReportedPattern {
                pattern: p.render(names),
                candidate: candidate.clone(),
                concordant_pairs: r.best_concordant_pairs,
                support: r.best_support,
            }),
            _ => None,
        };
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            dataset: dataset.to_owned(),
            objects: d.n(),
            attributes: d.m(),
            algorithm: r.algorithm,
            space,
            config: config.clone(),
            best,
            best_fitness: r.best_fitness,
            evaluations: r.trajectory.evaluations,
            invalid_candidates: r.invalid_candidates(),
            frequent_patterns: r
                .frequent_patterns
                .iter()
                .map(|f| ReportedPattern {
                    pattern: f.pattern.render(names),
                    candidate: f.candidate.clone(),
                    concordant_pairs: f.concordant_pairs,
                    support: f.support,
                })
                .collect(),
        }
    }
}

/// One evaluated candidate, ready for a position-versus-fitness plot.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScatterRow {
    pub iteration: usize,
    #[serde(with = "serde_util::biguint")]
    pub position: BigUint,
    /// `None` for the `+inf` sentinel.
    pub fitness: Option<f64>,
    pub valid: bool,
}

/// One row per trajectory step. Sentinel fitness becomes `None` and the row
/// is marked invalid.
pub fn scatter_extract(r: &SearchResult) -> Vec<ScatterRow> {
    scatter_rows(&r.trajectory)
}

pub fn scatter_rows(t: &Trajectory) -> Vec<ScatterRow> {
    t.steps
        .iter()
        .map(|s| {
            let fitness = s.fitness.is_finite().then_some(s.fitness);
            ScatterRow {
                iteration: s.iteration,
                position: s.candidate.clone(),
                fitness,
                valid: s.valid && fitness.is_some(),
            }
        })
        .collect()
}

/// `iteration,position,fitness,valid`; sentinel fitness is an empty field.
pub fn write_scatter_csv<W: Write>(rows: &[ScatterRow], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["iteration", "position", "fitness", "valid"])?;
    for r in rows {
        w.write_record([
            r.iteration.to_string(),
            r.position.to_string(),
            r.fitness.map(|f| f.to_string()).unwrap_or_default(),
            r.valid.to_string(),
        ])?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub const REPORT_CSV_HEADER: [&str; 13] = [
    "dataset",
    "algorithm",
    "space",
    "rep",
    "seed",
    "wall_time",
    "evaluations",
    "valid_patterns",
    "invalid_candidates",
    "best_support",
    "best_pattern",
    "peak_rss_kib",
    "error",
];

/// Flat report: one row per run, or one row per failed cell.
pub fn write_report_csv<W: Write>(report: &BenchReport, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(REPORT_CSV_HEADER)?;
    let opt = |v: Option<String>| v.unwrap_or_default();
    for c in &report.cells {
        let space = c.space.map(|s| s.to_string()).unwrap_or_else(|| "-".into());
        let rss = opt(c.peak_rss_kib.map(|v| v.to_string()));
        if c.runs.is_empty() {
            w.write_record([
                c.dataset.clone(),
                c.algorithm.to_string(),
                space.clone(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                String::new(),
                rss.clone(),
                opt(c.error.clone()),
            ])?;
        }
        for r in &c.runs {
            w.write_record([
                c.dataset.clone(),
                c.algorithm.to_string(),
                space.clone(),
                r.rep.to_string(),
                r.seed.to_string(),
                r.wall_time.to_string(),
                r.evaluations.to_string(),
                r.valid_patterns.to_string(),
                r.invalid_candidates.to_string(),
                r.best_support.to_string(),
                opt(r.best_pattern.clone()),
                rss.clone(),
                String::new(),
            ])?;
        }
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}
