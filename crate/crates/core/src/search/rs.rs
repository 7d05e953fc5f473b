use std::time::Instant;

use super::{check_inputs, rng_for, Algorithm, Recorder, SearchConfig, SearchResult};
use crate::dataset::Dataset;
use crate::encoding::SearchSpace;
use crate::fitness::Evaluator;
use crate::Result;

/// Random search: `T` independent uniform draws over the whole interval.
pub fn rs_grad(d: &Dataset, s: &SearchSpace, c: &SearchConfig) -> Result<SearchResult> {
    check_inputs(d, s, c)?;
    let started = Instant::now();
    let ev = Evaluator::new(d, s);
    let mut rec = Recorder::new(&ev, c.sigma);
    let mut rng = rng_for(c);
    for t in 1..=c.max_iterations {
        rec.iteration = t;
        let x = s.sample(&mut rng);
        rec.evaluate(&x)?;
    }
    Ok(rec.finish(Algorithm::Rs, started))
}
