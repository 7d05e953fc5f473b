//! Two-sided Wilcoxon signed-rank test for paired samples.

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::{Error, Result};

/// Largest non-zero pair count handled by the exact distribution.
pub const EXACT_LIMIT: usize = 25;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonOutcome {
    /// `min(W+, W-)`.
    pub statistic: f64,
    pub p_value: f64,
    /// Pairs with a non-zero difference.
    pub n: usize,
    pub zeros_dropped: usize,
    pub exact: bool,
}

/// Zero differences are dropped, absolute differences get midranks, and the
/// p-value comes from the exact null distribution of the signed rank sum for
/// up to [`EXACT_LIMIT`] pairs (ties included), otherwise from the normal
/// approximation with tie and continuity corrections.
///
/// Differences are `a[i] - b[i]` as computed in `f64`; two absolute
/// differences tie only when bit-identical.
pub fn wilcoxon_signed_rank(a: &[f64], b: &[f64]) -> Result<WilcoxonOutcome> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let diffs: Vec<f64> = a.iter().zip(b).map(|(x, y)| x - y).collect();
    let nonzero: Vec<f64> = diffs.iter().copied().filter(|&d| d != 0.0).collect();
    let zeros_dropped = diffs.len() - nonzero.len();
    let n = nonzero.len();
    if n < 5 {
        return Err(Error::TooFewDifferences(n));
    }

    let doubled = doubled_midranks(&nonzero);
    let total: u64 = doubled.iter().sum();
    let positive: u64 = nonzero
        .iter()
        .zip(&doubled)
        .filter(|(d, _)| **d > 0.0)
        .map(|(_, r)| r)
        .sum();
    let w2 = positive.min(total - positive);
    let statistic = w2 as f64 / 2.0;

    let (p_value, exact) = if n <= EXACT_LIMIT {
        (exact_two_sided(&doubled, w2), true)
    } else {
        (normal_two_sided(&nonzero, statistic), false)
    };
    Ok(WilcoxonOutcome {
        statistic,
        p_value,
        n,
        zeros_dropped,
        exact,
    })
}

/// Twice the midrank of each `|d|`, so tied ranks stay integral.
fn doubled_midranks(d: &[f64]) -> Vec<u64> {
    let mut order: Vec<usize> = (0..d.len()).collect();
    order.sort_by(|&i, &j| d[i].abs().total_cmp(&d[j].abs()));
    let mut ranks = vec![0u64; d.len()];
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && d[order[end]].abs() == d[order[start]].abs() {
            end += 1;
        }
        // positions start..end hold ranks start+1..=end; twice their mean
        let twice_mid = (start + 1 + end) as u64;
        for &i in &order[start..end] {
            ranks[i] = twice_mid;
        }
        start = end;
    }
    ranks
}

// Counts sign assignments by their positive rank sum; the null distribution
// is symmetric about total/2, so the two-sided tail is twice the lower one.
fn exact_two_sided(doubled: &[u64], w2: u64) -> f64 {
    let total: u64 = doubled.iter().sum();
    let mut counts = vec![0u64; total as usize + 1];
    counts[0] = 1;
    for &r in doubled {
        let r = r as usize;
        for s in (r..counts.len()).rev() {
            counts[s] += counts[s - r];
        }
    }
    let lower: u64 = counts[..=w2 as usize].iter().sum();
    let p = 2.0 * lower as f64 / 2f64.powi(doubled.len() as i32);
    p.min(1.0)
}

fn normal_two_sided(nonzero: &[f64], statistic: f64) -> f64 {
    let n = nonzero.len() as f64;
    let mean = n * (n + 1.0) / 4.0;
    let mut abs: Vec<f64> = nonzero.iter().map(|d| d.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let mut tie_term = 0.0;
    let mut i = 0;
    while i < abs.len() {
        let mut j = i + 1;
        while j < abs.len() && abs[j] == abs[i] {
            j += 1;
        }
        let t = (j - i) as f64;
        tie_term += t * t * t - t;
        i = j;
    }
    let var = n * (n + 1.0) * (2.0 * n + 1.0) / 24.0 - tie_term / 48.0;
    let z = ((statistic - mean).abs() - 0.5).max(0.0) / var.sqrt();
    erfc(z / std::f64::consts::SQRT_2).min(1.0)
}
