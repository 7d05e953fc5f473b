use std::time::Instant;

use num_bigint::{BigInt, BigUint};
use num_traits::One;
use rand::Rng;
use rand_distr::{Distribution, Normal};

use super::{check_inputs, rng_for, Algorithm, Recorder, SearchConfig, SearchResult};
use crate::dataset::Dataset;
use crate::encoding::SearchSpace;
use crate::fitness::Evaluator;
use crate::{Error, Result};

struct Member {
    candidate: BigUint,
    fitness: f64,
}

// Ascending fitness (+inf last), ties to the smaller candidate.
fn rank(pop: &mut [Member]) {
    pop.sort_by(|a, b| {
        a.fitness
            .total_cmp(&b.fitness)
            .then_with(|| a.candidate.cmp(&b.candidate))
    });
}

/// Single-point crossover on the `2m`-bit representation; `point` bits are
/// taken from the head of one parent and the rest from the other.
fn crossover(a: &BigUint, b: &BigUint, point: usize, bits: usize) -> (BigUint, BigUint) {
    let tail_mask = (BigUint::one() << (bits - point)) - 1u32;
    let head_mask = ((BigUint::one() << bits) - 1u32) ^ &tail_mask;
    (
        (a & &head_mask) | (b & &tail_mask),
        (b & &head_mask) | (a & &tail_mask),
    )
}

/// Genetic algorithm over integer candidates.
///
/// `npop` uniform members are evaluated at iteration 0. Each iteration takes
/// the two best members as parents, crosses them with probability
/// `crossover_rate` (otherwise copies them), and for each offspring evaluates
/// it, mutates it (per-bit flips at `mutation_rate`, then a Gaussian shift of
/// scale `mutation_scale`) and evaluates the mutant. The four new members join
/// the population, which is truncated back to `npop`. That is exactly four
/// objective calls per iteration.
pub fn ga_grad(d: &Dataset, s: &SearchSpace, c: &SearchConfig) -> Result<SearchResult> {
    check_inputs(d, s, c)?;
    let started = Instant::now();
    let ev = Evaluator::new(d, s);
    let mut rec = Recorder::new(&ev, c.sigma);
    let mut rng = rng_for(c);
    let bits = 2 * s.m();
    let shift = Normal::new(0.0, c.mutation_scale).map_err(|e| Error::Config(e.to_string()))?;

    let mut pop = Vec::with_capacity(c.npop + 4);
    for _ in 0..c.npop {
        let candidate = s.sample(&mut rng);
        let fitness = rec.evaluate(&candidate)?;
        pop.push(Member { candidate, fitness });
    }
    rank(&mut pop);

    for t in 1..=c.max_iterations {
        rec.iteration = t;
        let (p1, p2) = (&pop[0].candidate, &pop[1].candidate);
        let (c1, c2) = if rng.random::<f64>() < c.crossover_rate {
            let point = rng.random_range(1..bits);
            let (a, b) = crossover(p1, p2, point, bits);
            (s.clamp(&BigInt::from(a)), s.clamp(&BigInt::from(b)))
        } else {
            (p1.clone(), p2.clone())
        };
        for child in [c1, c2] {
            let fitness = rec.evaluate(&child)?;
            let mut mutant = child.clone();
            pop.push(Member {
                candidate: child,
                fitness,
            });
            for bit in 0..bits as u64 {
                if rng.random::<f64>() < c.mutation_rate {
                    let set = mutant.bit(bit);
                    mutant.set_bit(bit, !set);
                }
            }
            let mutant = s.offset(&s.clamp(&BigInt::from(mutant)), shift.sample(&mut rng));
            let fitness = rec.evaluate(&mutant)?;
            pop.push(Member {
                candidate: mutant,
                fitness,
            });
        }
        rank(&mut pop);
        pop.truncate(c.npop);
    }
    Ok(rec.finish(Algorithm::Ga, started))
}
