//! Concordant-pair counting, frequency support and candidate fitness.
//!
//! An unordered object pair `{o, o'}` is concordant with a pattern when one
//! of its two orientations moves every item's attribute strictly in the
//! item's direction. Ties on any item attribute disqualify the pair. Support
//! is the concordant count over `n(n-1)/2`; fitness is the inverse of the
//! concordant count, with `+inf` standing in for invalid candidates and
//! candidates that no pair respects.

use std::cmp::Ordering;
use std::sync::atomic::{AtomicU64, Ordering as AtomicOrdering};

use num_bigint::BigUint;

use crate::dataset::{object_pair_count, Dataset};
use crate::encoding::{Decoded, Direction, GradualPattern, SearchSpace};
use crate::{Error, Result};

/// Memory the per-attribute comparison bitsets may use before the index
/// falls back to pairwise rank comparison.
pub const DEFAULT_BITSET_BUDGET: usize = 64 << 20;

/// Per-dataset comparison structure shared by every evaluation.
///
/// Values are replaced by dense ranks. When the budget allows, each
/// attribute also stores, for every object `o`, the set of objects whose
/// value is strictly greater (and strictly smaller) than `o`'s, so that a
/// pattern's concordant pairs are a bitwise intersection per object.
#[derive(Debug, Clone)]
pub struct ConcordanceIndex {
    n: usize,
    ranks: Vec<Vec<u32>>,
    bitsets: Option<Bitsets>,
}

#[derive(Debug, Clone)]
struct Bitsets {
    words: usize,
    // [attribute][object * words + w]
    greater: Vec<Vec<u64>>,
    less: Vec<Vec<u64>>,
}

fn dense_ranks(values: &[f64]) -> Vec<u32> {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| {
        values[a]
            .partial_cmp(&values[b])
            .expect("dataset values are finite")
    });
    let mut ranks = vec![0u32; values.len()];
    let mut rank = 0u32;
    for w in 0..order.len() {
        if w > 0 && values[order[w]] != values[order[w - 1]] {
            rank += 1;
        }
        ranks[order[w]] = rank;
    }
    ranks
}

impl ConcordanceIndex {
    pub fn new(d: &Dataset) -> Self {
        Self::with_budget(d, DEFAULT_BITSET_BUDGET)
    }

    /// `budget` bounds the bitset memory in bytes; 0 forces pairwise mode.
    pub fn with_budget(d: &Dataset, budget: usize) -> Self {
        let n = d.n();
        let ranks: Vec<Vec<u32>> = (0..d.m()).map(|a| dense_ranks(d.column(a))).collect();
        let words = n.div_ceil(64);
        let needed = 2usize
            .saturating_mul(d.m())
            .saturating_mul(n)
            .saturating_mul(words)
            .saturating_mul(8);
        let bitsets = (needed <= budget).then(|| Bitsets::build(&ranks, n, words));
        Self { n, ranks, bitsets }
    }

    pub fn m(&self) -> usize {
        self.ranks.len()
    }

    pub fn uses_bitsets(&self) -> bool {
        self.bitsets.is_some()
    }

    fn check(&self, p: &GradualPattern) -> Result<()> {
        match p.items().iter().find(|it| it.attribute >= self.m()) {
            Some(it) => Err(Error::AttributeOutOfRange {
                index: it.attribute,
                m: self.m(),
            }),
            None => Ok(()),
        }
    }

    /// Number of concordant unordered object pairs.
    pub fn concordant_count(&self, p: &GradualPattern) -> Result<u64> {
        self.check(p)?;
        Ok(match &self.bitsets {
            Some(b) => b.count(p, self.n),
            None => self.count_pairwise(p),
        })
    }

    fn count_pairwise(&self, p: &GradualPattern) -> u64 {
        let items = p.items();
        let (first, rest) = items.split_first().expect("patterns have >= 2 items");
        let lead = &self.ranks[first.attribute];
        let mut count = 0u64;
        for i in 0..self.n {
            for j in i + 1..self.n {
                // orientation i -> j is forced by the first item
                let forward = match lead[i].cmp(&lead[j]) {
                    Ordering::Equal => continue,
                    Ordering::Less => first.direction == Direction::Up,
                    Ordering::Greater => first.direction == Direction::Down,
                };
                let ok = rest.iter().all(|it| {
                    let r = &self.ranks[it.attribute];
                    match r[i].cmp(&r[j]) {
                        Ordering::Equal => false,
                        Ordering::Less => (it.direction == Direction::Up) == forward,
                        Ordering::Greater => (it.direction == Direction::Down) == forward,
                    }
                });
                count += u64::from(ok);
            }
        }
        count
    }
}

impl Bitsets {
    fn build(ranks: &[Vec<u32>], n: usize, words: usize) -> Self {
        let mut greater = Vec::with_capacity(ranks.len());
        let mut less = Vec::with_capacity(ranks.len());
        for r in ranks {
            let mut order: Vec<usize> = (0..n).collect();
            order.sort_by_key(|&o| r[o]);
            greater.push(Self::sweep(r, order.iter().rev().copied(), n, words));
            less.push(Self::sweep(r, order.iter().copied(), n, words));
        }
        Self {
            words,
            greater,
            less,
        }
    }

    // Walks objects in rank order; each object's set holds everything seen in
    // strictly earlier rank groups.
    fn sweep(
        r: &[u32],
        order: impl Iterator<Item = usize>,
        n: usize,
        words: usize,
    ) -> Vec<u64> {
        let mut out = vec![0u64; n * words];
        let mut seen = vec![0u64; words];
        let mut group: Vec<usize> = Vec::new();
        let flush = |group: &mut Vec<usize>, seen: &mut Vec<u64>| {
            for &o in group.iter() {
                seen[o / 64] |= 1u64 << (o % 64);
            }
            group.clear();
        };
        for o in order {
            if let Some(&prev) = group.first() {
                if r[prev] != r[o] {
                    flush(&mut group, &mut seen);
                }
            }
            out[o * words..(o + 1) * words].copy_from_slice(&seen);
            group.push(o);
        }
        out
    }

    fn set(&self, attribute: usize, dir: Direction, o: usize) -> &[u64] {
        let table = match dir {
            Direction::Up => &self.greater[attribute],
            Direction::Down => &self.less[attribute],
        };
        &table[o * self.words..(o + 1) * self.words]
    }

    fn count(&self, p: &GradualPattern, n: usize) -> u64 {
        let items = p.items();
        let mut acc = vec![0u64; self.words];
        let mut total = 0u64;
        for o in 0..n {
            acc.copy_from_slice(self.set(items[0].attribute, items[0].direction, o));
            for it in &items[1..] {
                for (a, b) in acc.iter_mut().zip(self.set(it.attribute, it.direction, o)) {
                    *a &= b;
                }
            }
            // an ordered pair o -> o' satisfying every item rules out o' -> o,
            // so ordered counts equal unordered counts
            total += acc.iter().map(|w| u64::from(w.count_ones())).sum::<u64>();
        }
        total
    }
}

/// Concordant unordered pairs of `p` in `d`.
pub fn concordant_count(p: &GradualPattern, d: &Dataset) -> Result<u64> {
    ConcordanceIndex::with_budget(d, 0).concordant_count(p)
}

/// Frequency support of `p` in `d`, in `[0, 1]`.
pub fn support(p: &GradualPattern, d: &Dataset) -> Result<f64> {
    Ok(concordant_count(p, d)? as f64 / object_pair_count(d) as f64)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub candidate: BigUint,
    pub decoded: Decoded,
    pub concordant_pairs: u64,
    pub support: f64,
    /// `1 / concordant_pairs`, or `+inf` when the candidate is invalid or no
    /// pair is concordant.
    pub fitness: f64,
}

impl Evaluation {
    pub fn pattern(&self) -> Option<&GradualPattern> {
        self.decoded.pattern()
    }

    pub fn is_valid(&self) -> bool {
        self.decoded.is_valid()
    }

    /// Valid with at least one concordant pair: the only candidates a
    /// searcher may keep as a best, personal best or parent.
    pub fn is_usable(&self) -> bool {
        self.fitness.is_finite()
    }
}

/// `support >= sigma` for usable evaluations; invalid and zero-count
/// candidates are never frequent.
pub fn is_frequent(e: &Evaluation, sigma: f64) -> Result<bool> {
    check_sigma(sigma)?;
    Ok(e.is_usable() && e.support >= sigma)
}

pub(crate) fn check_sigma(sigma: f64) -> Result<()> {
    if (0.0..=1.0).contains(&sigma) {
        Ok(())
    } else {
        Err(Error::Sigma(sigma))
    }
}

/// Objective function bound to one dataset and search space.
///
/// Counts every call; the counter is atomic so one evaluator can serve
/// several concurrent runs.
#[derive(Debug)]
pub struct Evaluator<'a> {
    dataset: &'a Dataset,
    space: &'a SearchSpace,
    index: ConcordanceIndex,
    pairs: u64,
    calls: AtomicU64,
}

impl<'a> Evaluator<'a> {
    pub fn new(dataset: &'a Dataset, space: &'a SearchSpace) -> Self {
        Self::with_index(dataset, space, ConcordanceIndex::new(dataset))
    }

    pub fn with_index(dataset: &'a Dataset, space: &'a SearchSpace, index: ConcordanceIndex) -> Self {
        Self {
            dataset,
            space,
            index,
            pairs: object_pair_count(dataset),
            calls: AtomicU64::new(0),
        }
    }

    pub fn dataset(&self) -> &'a Dataset {
        self.dataset
    }

    pub fn space(&self) -> &'a SearchSpace {
        self.space
    }

    /// `|D'|`
    pub fn pair_count(&self) -> u64 {
        self.pairs
    }

    /// Objective calls so far.
    pub fn evaluations(&self) -> u64 {
        self.calls.load(AtomicOrdering::Relaxed)
    }

    pub fn concordant_count(&self, p: &GradualPattern) -> Result<u64> {
        self.index.concordant_count(p)
    }

    pub fn fitness_of(&self, x: &BigUint) -> Result<Evaluation> {
        let decoded = self.space.to_pattern(x)?;
        self.calls.fetch_add(1, AtomicOrdering::Relaxed);
        let concordant_pairs = match &decoded {
            Decoded::Pattern(p) => self.index.concordant_count(p)?,
            Decoded::Invalid(_) => 0,
        };
        Ok(self.evaluation(x.clone(), decoded, concordant_pairs))
    }

    /// Assembles an evaluation from a known count without touching the
    /// dataset; still counts as an objective call.
    pub(crate) fn recall(&self, x: &BigUint, decoded: Decoded, concordant_pairs: u64) -> Evaluation {
        self.calls.fetch_add(1, AtomicOrdering::Relaxed);
        self.evaluation(x.clone(), decoded, concordant_pairs)
    }

    fn evaluation(&self, candidate: BigUint, decoded: Decoded, concordant_pairs: u64) -> Evaluation {
        let fitness = if decoded.is_valid() && concordant_pairs > 0 {
            1.0 / concordant_pairs as f64
        } else {
            f64::INFINITY
        };
        Evaluation {
            candidate,
            decoded,
            concordant_pairs,
            support: concordant_pairs as f64 / self.pairs as f64,
            fitness,
        }
    }
}

/// One-shot evaluation of candidate `x`.
pub fn fitness_of(x: &BigUint, s: &SearchSpace, d: &Dataset) -> Result<Evaluation> {
    Evaluator::with_index(d, s, ConcordanceIndex::with_budget(d, 0)).fitness_of(x)
}

/// Literal reference implementation used to check the production paths.
///
/// Scans every unordered pair, tries both orientations and compares raw
/// values. Quadratic and allocation-free; meant for tests and small data.
pub mod oracle {
    use crate::dataset::Dataset;
    use crate::encoding::{Direction, GradualPattern};

    fn respects(p: &GradualPattern, d: &Dataset, from: usize, to: usize) -> bool {
        p.items().iter().all(|it| {
            let (a, b) = (d.value(from, it.attribute), d.value(to, it.attribute));
            match it.direction {
                Direction::Up => a < b,
                Direction::Down => a > b,
            }
        })
    }

    pub fn concordant_count(p: &GradualPattern, d: &Dataset) -> u64 {
        let mut count = 0;
        for o in 0..d.n() {
            for o2 in o + 1..d.n() {
                if respects(p, d, o, o2) || respects(p, d, o2, o) {
                    count += 1;
                }
            }
        }
        count
    }
}
