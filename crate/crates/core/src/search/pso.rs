use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::ToPrimitive;
use rand::Rng;

use super::{check_inputs, rng_for, Algorithm, Recorder, SearchConfig, SearchResult};
use crate::dataset::Dataset;
use crate::encoding::SearchSpace;
use crate::fitness::Evaluator;
use crate::Result;

fn gap(to: &BigUint, from: &BigUint) -> f64 {
    (BigInt::from(to.clone()) - BigInt::from(from.clone()))
        .to_f64()
        .unwrap_or(0.0)
}

/// Particle swarm over integer positions with real-valued velocities.
///
/// Positions start uniform with zero velocity; personal bests start at the
/// positions and the global best at the first personal best. Each iteration
/// evaluates, per particle, its position, its personal best and the global
/// best (three objective calls), updating the incumbents with `<=`. Then every
/// particle moves by
/// `v = clamp(w*v + coef_p*r1*(pbest - x) + coef_g*r2*(gbest - x), +-vmax)`,
/// `x = clamp(round(x + v))`.
pub fn pso_grad(d: &Dataset, s: &SearchSpace, c: &SearchConfig) -> Result<SearchResult> {
    check_inputs(d, s, c)?;
    let started = Instant::now();
    let ev = Evaluator::new(d, s);
    let mut rec = Recorder::new(&ev, c.sigma);
    let mut rng = rng_for(c);
    let vmax = c.max_velocity_for(s);

    let mut pos: Vec<BigUint> = (0..c.nparticles).map(|_| s.sample(&mut rng)).collect();
    let mut vel = vec![0.0f64; c.nparticles];
    let mut pbest = pos.clone();
    let mut gbest = pbest[0].clone();

    for t in 1..=c.max_iterations {
        rec.iteration = t;
        for i in 0..c.nparticles {
            let cost_i = rec.evaluate(&pos[i])?;
            let cost_p = rec.evaluate(&pbest[i])?;
            let cost_g = rec.evaluate(&gbest)?;
            if cost_i.is_finite() && cost_i <= cost_p {
                pbest[i] = pos[i].clone();
            }
            if cost_i.is_finite() && cost_i <= cost_g {
                gbest = pos[i].clone();
            }
        }
        for i in 0..c.nparticles {
            let r1: f64 = rng.random();
            let r2: f64 = rng.random();
            let v = c.inertia * vel[i]
                + c.coef_p * r1 * gap(&pbest[i], &pos[i])
                + c.coef_g * r2 * gap(&gbest, &pos[i]);
            vel[i] = v.clamp(-vmax, vmax);
            pos[i] = s.offset(&pos[i], vel[i]);
        }
    }
    Ok(rec.finish(Algorithm::Pso, started))
}
