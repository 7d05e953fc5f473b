//! Exhaustive miner: every valid candidate of the numeric space is scored and
//! all frequent ones are returned.
//!
//! This is the completeness oracle for the metaheuristics. A level-wise
//! variant that prunes with anti-monotonicity (adding an item never raises
//! the concordant count) is available for larger attribute counts and
//! produces the same output.

use std::collections::HashSet;

use crate::dataset::Dataset;
use crate::encoding::{Direction, GradualItem, GradualPattern, SearchSpace, SpaceKind};
use crate::fitness::{check_sigma, ConcordanceIndex, Evaluator};
use crate::search::{sort_frequent, FrequentPattern};
use crate::{Error, Result};

pub const DEFAULT_ATTRIBUTE_GUARD: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Score all `3^m - 2m - 1` candidates.
    #[default]
    Exhaustive,
    /// Grow patterns one attribute at a time from frequent parents only.
    LevelWise,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GraankOptions {
    /// Largest attribute count accepted.
    pub attribute_guard: usize,
    pub strategy: Strategy,
}

impl Default for GraankOptions {
    fn default() -> Self {
        Self {
            attribute_guard: DEFAULT_ATTRIBUTE_GUARD,
            strategy: Strategy::Exhaustive,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct GraankOutcome {
    pub patterns: Vec<FrequentPattern>,
    /// Candidates scored against the data.
    pub evaluated_candidates: u64,
}

/// Every pattern with at least one concordant pair and support `>= sigma`,
/// by descending support then ascending candidate.
pub fn graank_mine(d: &Dataset, sigma: f64) -> Result<Vec<FrequentPattern>> {
    Ok(graank_mine_with(d, sigma, &GraankOptions::default())?.patterns)
}

pub fn graank_mine_with(d: &Dataset, sigma: f64, opts: &GraankOptions) -> Result<GraankOutcome> {
    check_sigma(sigma)?;
    if d.m() > opts.attribute_guard {
        return Err(Error::ResourceLimit {
            m: d.m(),
            limit: opts.attribute_guard,
        });
    }
    let space = SearchSpace::build(d.m(), SpaceKind::Numeric)?;
    let index = ConcordanceIndex::new(d);
    let ev = Evaluator::with_index(d, &space, index);
    let keep = |count: u64| count > 0 && count as f64 / ev.pair_count() as f64 >= sigma;

    let mut patterns = Vec::new();
    match opts.strategy {
        Strategy::Exhaustive => {
            for x in space.enumerate_valid_with_limit(opts.attribute_guard)? {
                let e = ev.fitness_of(&x)?;
                if keep(e.concordant_pairs) {
                    patterns.push(FrequentPattern {
                        pattern: e.pattern().expect("enumerated candidates are valid").clone(),
                        candidate: x,
                        concordant_pairs: e.concordant_pairs,
                        support: e.support,
                    });
                }
            }
        }
        Strategy::LevelWise => {
            let m = d.m();
            let dirs = [Direction::Up, Direction::Down];
            let mut level: Vec<GradualPattern> = Vec::new();
            for a in 0..m {
                for b in a + 1..m {
                    for da in dirs {
                        for db in dirs {
                            level.push(GradualPattern::new(vec![
                                GradualItem::new(a, da),
                                GradualItem::new(b, db),
                            ])?);
                        }
                    }
                }
            }
            let mut evaluated = 0u64;
            while !level.is_empty() {
                let mut frequent = Vec::new();
                for p in level {
                    evaluated += 1;
                    let count = ev.concordant_count(&p)?;
                    if keep(count) {
                        frequent.push(p.clone());
                        patterns.push(FrequentPattern {
                            candidate: p.candidate(m)?,
                            support: count as f64 / ev.pair_count() as f64,
                            concordant_pairs: count,
                            pattern: p,
                        });
                    }
                }
                level = extend(&frequent, m)?;
            }
            sort_frequent(&mut patterns);
            return Ok(GraankOutcome {
                patterns,
                evaluated_candidates: evaluated,
            });
        }
    }
    sort_frequent(&mut patterns);
    Ok(GraankOutcome {
        patterns,
        evaluated_candidates: ev.evaluations(),
    })
}

// Extends each frequent pattern with an item on a later attribute and keeps
// the extension only if every sub-pattern of the same size is frequent.
fn extend(frequent: &[GradualPattern], m: usize) -> Result<Vec<GradualPattern>> {
    let known: HashSet<&GradualPattern> = frequent.iter().collect();
    let mut next = Vec::new();
    for p in frequent {
        let last = p.items().last().expect("non-empty").attribute;
        for a in last + 1..m {
            for dir in [Direction::Up, Direction::Down] {
                let mut items = p.items().to_vec();
                items.push(GradualItem::new(a, dir));
                let all_subsets_frequent = (0..items.len() - 1).all(|skip| {
                    let sub: Vec<GradualItem> = items
                        .iter()
                        .enumerate()
                        .filter(|&(i, _)| i != skip)
                        .map(|(_, it)| *it)
                        .collect();
                    GradualPattern::new(sub).is_ok_and(|s| known.contains(&s))
                });
                if all_subsets_frequent {
                    next.push(GradualPattern::new(items)?);
                }
            }
        }
    }
    Ok(next)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fitness::oracle;
    use proptest::prelude::*;
    use Direction::{Down, Up};

    fn table2() -> Dataset {
        Dataset::new(
            vec!["age".into(), "sessions".into(), "marks".into()],
            vec![
                vec![23.0, 2.0, 55.0],
                vec![32.0, 4.0, 64.0],
                vec![40.0, 5.0, 78.0],
                vec![25.0, 5.0, 48.0],
            ],
        )
        .unwrap()
    }

    // Brute force over all 20 valid candidates with the literal pair scan.
    fn brute(d: &Dataset, sigma: f64) -> Vec<(GradualPattern, u64)> {
        let s = SearchSpace::build(d.m(), SpaceKind::Numeric).unwrap();
        let pairs = (d.n() * (d.n() - 1) / 2) as f64;
        let mut out: Vec<(GradualPattern, u64)> = s
            .enumerate_valid()
            .unwrap()
            .iter()
            .map(|x| s.to_pattern(x).unwrap().pattern().unwrap().clone())
            .map(|p| {
                let c = oracle::concordant_count(&p, d);
                (p, c)
            })
            .filter(|&(_, c)| c > 0 && c as f64 / pairs >= sigma)
            .collect();
        out.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| {
            a.0.candidate(d.m()).unwrap().cmp(&b.0.candidate(d.m()).unwrap())
        }));
        out
    }

    fn as_pairs(v: &[FrequentPattern]) -> Vec<(GradualPattern, u64)> {
        v.iter().map(|f| (f.pattern.clone(), f.concordant_pairs)).collect()
    }

    #[test]
    fn table2_half_support() {
        let d = table2();
        let got = graank_mine(&d, 0.5).unwrap();
        let up = GradualPattern::from_pairs(&[(0, Up), (1, Up)]).unwrap();
        for p in [up.clone(), up.complement()] {
            let f = got.iter().find(|f| f.pattern == p).expect("present");
            assert!((f.support - 0.6667).abs() < 1e-4);
        }
        assert_eq!(as_pairs(&got), brute(&d, 0.5));
    }

    #[test]
    fn table2_full_support_is_empty() {
        // every 2-item pattern loses the tied sessions pair (obj3, obj4) or
        // a crossing pair, so nothing reaches 6/6
        assert_eq!(brute(&table2(), 1.0), vec![]);
        assert_eq!(graank_mine(&table2(), 1.0).unwrap(), vec![]);
    }

    #[test]
    fn zero_threshold_drops_zero_count_patterns() {
        let d = table2();
        let got = graank_mine(&d, 0.0).unwrap();
        assert_eq!(as_pairs(&got), brute(&d, 0.0));
        assert!(got.len() < 20);
        assert!(got.iter().all(|f| f.concordant_pairs > 0));
        // {age-, sessions+, marks+} has no concordant pair
        let dead = GradualPattern::from_pairs(&[(0, Down), (1, Up), (2, Up)]).unwrap();
        assert!(got.iter().all(|f| f.pattern != dead));
    }

    #[test]
    fn guard_and_sigma_errors() {
        let names = (0..17).map(|i| format!("a{i}")).collect();
        let d = Dataset::new(names, vec![vec![0.0; 17], vec![1.0; 17]]).unwrap();
        assert!(matches!(
            graank_mine(&d, 0.5),
            Err(Error::ResourceLimit { m: 17, limit: 16 })
        ));
        assert!(matches!(graank_mine(&table2(), 1.2), Err(Error::Sigma(_))));
    }

    proptest! {
        #[test]
        fn level_wise_matches_exhaustive(
            rows in prop::collection::vec(prop::collection::vec(0i32..5, 5), 3..10),
            sigma in prop::sample::select(vec![0.0, 0.2, 0.3, 0.5, 0.8]),
        ) {
            let names = (0..5).map(|i| format!("a{i}")).collect();
            let rows = rows.into_iter().map(|r| r.into_iter().map(f64::from).collect()).collect();
            let d = Dataset::new(names, rows).unwrap();
            let full = graank_mine_with(&d, sigma, &GraankOptions::default()).unwrap();
            let lw = graank_mine_with(&d, sigma, &GraankOptions {
                strategy: super::Strategy::LevelWise,
                ..GraankOptions::default()
            }).unwrap();
            prop_assert_eq!(&lw.patterns, &full.patterns);
            prop_assert!(lw.evaluated_candidates <= full.evaluated_candidates);
            prop_assert_eq!(full.evaluated_candidates, 3u64.pow(5) - 11);
        }
    }
}
