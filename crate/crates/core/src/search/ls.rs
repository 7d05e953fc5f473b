use std::time::Instant;

use rand::Rng;

use super::{check_inputs, rng_for, Algorithm, Recorder, SearchConfig, SearchResult};
use crate::dataset::Dataset;
use crate::encoding::SearchSpace;
use crate::fitness::Evaluator;
use crate::Result;

/// Stochastic hill climbing.
///
/// The start point is drawn uniformly and evaluated at iteration 0. Each
/// iteration proposes `clamp(round(x + u))` with `u ~ U[-step, step]` and
/// moves there when the proposal is no worse than the current point.
pub fn ls_grad(d: &Dataset, s: &SearchSpace, c: &SearchConfig) -> Result<SearchResult> {
    check_inputs(d, s, c)?;
    let started = Instant::now();
    let ev = Evaluator::new(d, s);
    let mut rec = Recorder::new(&ev, c.sigma);
    let mut rng = rng_for(c);
    let step = c.step_size_for(s);

    let mut current = s.sample(&mut rng);
    let mut current_fitness = rec.evaluate(&current)?;
    for t in 1..=c.max_iterations {
        rec.iteration = t;
        let u: f64 = rng.random_range(-step..=step);
        let proposal = s.offset(&current, u);
        let f = rec.evaluate(&proposal)?;
        if f <= current_fitness {
            current = proposal;
            current_fitness = f;
        }
    }
    Ok(rec.finish(Algorithm::Ls, started))
}
