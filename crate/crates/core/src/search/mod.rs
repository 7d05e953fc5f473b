//! Metaheuristic miners over a candidate search space.
//!
//! All four searchers share the same contract: a seeded [`ChaCha8Rng`] per
//! run (seeded with [`SearchConfig::seed`] through `seed_from_u64`), one
//! trajectory step per objective call, and best tracking over every
//! evaluation where a tie goes to the newer candidate. Invalid and zero-count
//! candidates cost an evaluation and show up in the trajectory but never
//! become a best, personal best or global best.

mod ga;
mod ls;
mod pso;
mod rs;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use ga::ga_grad;
pub use ls::ls_grad;
pub use pso::pso_grad;
pub use rs::rs_grad;

use crate::baseline;
use crate::dataset::Dataset;
use crate::encoding::{Decoded, GradualPattern, SearchSpace, SpaceKind};
use crate::fitness::{check_sigma, is_frequent, Evaluation, Evaluator};
use crate::serde_util;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Rs,
    Ls,
    Ga,
    Pso,
    Graank,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Rs,
        Algorithm::Ls,
        Algorithm::Ga,
        Algorithm::Pso,
        Algorithm::Graank,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Rs => "rs",
            Algorithm::Ls => "ls",
            Algorithm::Ga => "ga",
            Algorithm::Pso => "pso",
            Algorithm::Graank => "graank",
        }
    }

    /// Whether the run depends on the search space and seed.
    pub fn is_stochastic(self) -> bool {
        self != Algorithm::Graank
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.pad(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::UnknownAlgorithm(s.to_owned()))
    }
}

/// Run parameters. Every field has a default so partial JSON documents
/// deserialize into complete configurations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SearchConfig {
    /// Iterations `T`.
    pub max_iterations: usize,
    pub seed: u64,
    /// Minimum support for a pattern to be reported as frequent.
    pub sigma: f64,
    /// Local search neighbourhood radius. `None` uses half the space width.
    pub step_size: Option<f64>,
    /// Genetic algorithm population.
    pub npop: usize,
    /// Probability that the two parents are crossed rather than copied.
    pub crossover_rate: f64,
    /// Per-bit flip probability applied to each offspring.
    pub mutation_rate: f64,
    /// Standard deviation of the Gaussian shift added after bit flips.
    pub mutation_scale: f64,
    pub nparticles: usize,
    /// Velocity clamp. `None` uses the space width.
    pub max_velocity: Option<f64>,
    pub coef_p: f64,
    pub coef_g: f64,
    pub inertia: f64,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            max_iterations: 20,
            seed: 0,
            sigma: 0.5,
            step_size: None,
            npop: 10,
            crossover_rate: 0.75,
            mutation_rate: 0.2,
            mutation_scale: 1.0,
            nparticles: 10,
            max_velocity: None,
            coef_p: 1.0,
            coef_g: 0.2,
            inertia: 1.0,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::Config(msg));
        check_sigma(self.sigma)?;
        if self.max_iterations < 1 {
            return fail("max_iterations must be >= 1".into());
        }
        if self.npop < 2 {
            return fail(format!("npop must be >= 2, got {}", self.npop));
        }
        if self.nparticles < 1 {
            return fail("nparticles must be >= 1".into());
        }
        for (name, v) in [
            ("crossover_rate", self.crossover_rate),
            ("mutation_rate", self.mutation_rate),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return fail(format!("{name} must lie in [0, 1], got {v}"));
            }
        }
        for (name, v) in [("step_size", self.step_size), ("max_velocity", self.max_velocity)] {
            if let Some(v) = v {
                if v.is_nan() || v <= 0.0 {
                    return fail(format!("{name} must be positive, got {v}"));
                }
            }
        }
        for (name, v) in [
            ("mutation_scale", self.mutation_scale),
            ("coef_p", self.coef_p),
            ("coef_g", self.coef_g),
            ("inertia", self.inertia),
        ] {
            if !(v >= 0.0 && v.is_finite()) {
                return fail(format!("{name} must be a finite non-negative number, got {v}"));
            }
        }
        Ok(())
    }

    pub(crate) fn step_size_for(&self, s: &SearchSpace) -> f64 {
        self.step_size
            .unwrap_or_else(|| (width_f64(s) / 2.0).max(1.0))
    }

    pub(crate) fn max_velocity_for(&self, s: &SearchSpace) -> f64 {
        self.max_velocity.unwrap_or_else(|| width_f64(s).max(1.0))
    }
}

fn width_f64(s: &SearchSpace) -> f64 {
    use num_traits::ToPrimitive;
    s.width().to_f64().unwrap_or(f64::MAX)
}

/// One objective call.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Step {
    /// 0 for initialization, then `1..=T`.
    pub iteration: usize,
    #[serde(with = "serde_util::biguint")]
    pub candidate: BigUint,
    #[serde(with = "serde_util::fitness")]
    pub fitness: f64,
    pub valid: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Trajectory {
    pub steps: Vec<Step>,
    pub evaluations: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrequentPattern {
    #[serde(with = "serde_util::biguint")]
    pub candidate: BigUint,
    pub pattern: GradualPattern,
    pub concordant_pairs: u64,
    pub support: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchResult {
    pub algorithm: Algorithm,
    #[serde(with = "serde_util::opt_biguint")]
    pub best_candidate: Option<BigUint>,
    pub best_pattern: Option<GradualPattern>,
    pub best_support: f64,
    pub best_concordant_pairs: u64,
    #[serde(with = "serde_util::fitness")]
    pub best_fitness: f64,
    /// Distinct frequent candidates met during the run, by descending
    /// support then ascending candidate.
    pub frequent_patterns: Vec<FrequentPattern>,
    pub trajectory: Trajectory,
    #[serde(with = "serde_util::seconds")]
    pub wall_time: Duration,
}

impl SearchResult {
    /// Trajectory steps whose candidate does not decode to a pattern.
    pub fn invalid_candidates(&self) -> usize {
        self.trajectory.steps.iter().filter(|s| !s.valid).count()
    }
}

pub(crate) fn sort_frequent(v: &mut [FrequentPattern]) {
    v.sort_by(|a, b| {
        b.support
            .total_cmp(&a.support)
            .then_with(|| a.candidate.cmp(&b.candidate))
    });
}

/// Per-run bookkeeping: trajectory, best tracking and the frequent set.
///
/// Concordant counts are memoized per candidate; a repeated candidate still
/// counts as an objective call and still records a step.
pub(crate) struct Recorder<'e, 'a> {
    ev: &'e Evaluator<'a>,
    sigma: f64,
    pub iteration: usize,
    cache: HashMap<BigUint, (Decoded, u64)>,
    steps: Vec<Step>,
    best: Option<Evaluation>,
    frequent: BTreeMap<BigUint, FrequentPattern>,
}

impl<'e, 'a> Recorder<'e, 'a> {
    pub fn new(ev: &'e Evaluator<'a>, sigma: f64) -> Self {
        Self {
            ev,
            sigma,
            iteration: 0,
            cache: HashMap::new(),
            steps: Vec::new(),
            best: None,
            frequent: BTreeMap::new(),
        }
    }

    pub fn evaluate(&mut self, x: &BigUint) -> Result<f64> {
        let e = match self.cache.get(x) {
            Some((decoded, count)) => self.ev.recall(x, decoded.clone(), *count),
            None => {
                let e = self.ev.fitness_of(x)?;
                self.cache
                    .insert(x.clone(), (e.decoded.clone(), e.concordant_pairs));
                e
            }
        };
        self.steps.push(Step {
            iteration: self.iteration,
            candidate: x.clone(),
            fitness: e.fitness,
            valid: e.is_valid(),
        });
        if is_frequent(&e, self.sigma)? && !self.frequent.contains_key(x) {
            let pattern = e.pattern().expect("frequent implies valid").clone();
            self.frequent.insert(
                x.clone(),
                FrequentPattern {
                    candidate: x.clone(),
                    pattern,
                    concordant_pairs: e.concordant_pairs,
                    support: e.support,
                },
            );
        }
        let fitness = e.fitness;
        if e.is_usable() && self.best.as_ref().is_none_or(|b| fitness <= b.fitness) {
            self.best = Some(e);
        }
        Ok(fitness)
    }

    pub fn finish(self, algorithm: Algorithm, started: Instant) -> SearchResult {
        let mut frequent: Vec<FrequentPattern> = self.frequent.into_values().collect();
        sort_frequent(&mut frequent);
        let evaluations = self.steps.len() as u64;
        let (best_candidate, best_pattern, best_support, best_concordant_pairs, best_fitness) =
            match self.best {
                Some(b) => {
                    let pattern = b.pattern().cloned();
                    (Some(b.candidate), pattern, b.support, b.concordant_pairs, b.fitness)
                }
                None => (None, None, 0.0, 0, f64::INFINITY),
            };
        SearchResult {
            algorithm,
            best_candidate,
            best_pattern,
            best_support,
            best_concordant_pairs,
            best_fitness,
            frequent_patterns: frequent,
            trajectory: Trajectory {
                steps: self.steps,
                evaluations,
            },
            wall_time: started.elapsed(),
        }
    }
}

pub(crate) fn check_inputs(d: &Dataset, s: &SearchSpace, c: &SearchConfig) -> Result<()> {
    c.validate()?;
    if s.m() != d.m() {
        return Err(Error::Config(format!(
            "search space covers {} attributes but the dataset has {}",
            s.m(),
            d.m()
        )));
    }
    Ok(())
}

pub(crate) fn rng_for(c: &SearchConfig) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(c.seed)
}

/// Runs the named miner. The exhaustive miner ignores the space kind and the
/// iteration budget and always walks the numeric space.
pub fn run_miner(
    algorithm: Algorithm,
    d: &Dataset,
    s: &SearchSpace,
    c: &SearchConfig,
) -> Result<SearchResult> {
    match algorithm {
        Algorithm::Rs => rs_grad(d, s, c),
        Algorithm::Ls => ls_grad(d, s, c),
        Algorithm::Ga => ga_grad(d, s, c),
        Algorithm::Pso => pso_grad(d, s, c),
        Algorithm::Graank => graank_run(d, c.sigma, baseline::DEFAULT_ATTRIBUTE_GUARD),
    }
}

/// The exhaustive miner wrapped as a search run: one trajectory step per
/// valid candidate of the numeric space, in ascending order.
pub fn graank_run(d: &Dataset, sigma: f64, attribute_guard: usize) -> Result<SearchResult> {
    check_sigma(sigma)?;
    if d.m() > attribute_guard {
        return Err(Error::ResourceLimit {
            m: d.m(),
            limit: attribute_guard,
        });
    }
    let started = Instant::now();
    let space = SearchSpace::build(d.m(), SpaceKind::Numeric)?;
    let ev = Evaluator::new(d, &space);
    let mut rec = Recorder::new(&ev, sigma);
    for x in space.enumerate_valid_with_limit(attribute_guard)? {
        rec.evaluate(&x)?;
    }
    Ok(rec.finish(Algorithm::Graank, started))
}
