//! Paired Wilcoxon signed-rank test, two-sided.

use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, Normal};

use super::EvalError;

/// Significance level for `reject`.
pub const ALPHA: f64 = 0.01;
/// Largest effective sample size whose p-value is computed exactly.
pub const EXACT_MAX_N: usize = 12;
/// Fewest pairs accepted.
pub const MIN_PAIRS: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PMethod {
    /// Exact for small samples, normal approximation otherwise.
    #[default]
    Auto,
    Exact,
    Normal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonResult {
    /// Paired observations, zero differences included.
    pub pairs: usize,
    /// Pairs left after dropping zero differences.
    pub n: usize,
    /// Smaller of the positive and negative rank sums.
    pub t: f64,
    pub p: f64,
    pub reject: bool,
    pub exact: bool,
}

/// Average ranks of `values` (1-based), plus the sizes of tie groups.
fn average_ranks(values: &[f64]) -> (Vec<f64>, Vec<usize>) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = Vec::new();
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j + 2) as f64 / 2.0;
        for &k in &order[i..=j] {
            ranks[k] = avg;
        }
        if j > i {
            ties.push(j - i + 1);
        }
        i = j + 1;
    }
    (ranks, ties)
}

/// Share of the 2ⁿ sign assignments whose smaller rank sum is at most `t`.
fn exact_p(ranks: &[f64], t: f64) -> f64 {
    let n = ranks.len();
    let total: f64 = ranks.iter().sum();
    let mut hits = 0u64;
    for mask in 0u32..(1u32 << n) {
        let plus: f64 = (0..n).filter(|i| mask & (1 << i) != 0).map(|i| ranks[i]).sum();
        if plus.min(total - plus) <= t + 1e-9 {
            hits += 1;
        }
    }
    hits as f64 / (1u64 << n) as f64
}

fn normal_p(n: usize, t: f64, ties: &[usize]) -> f64 {
    let nf = n as f64;
    let mean = nf * (nf + 1.0) / 4.0;
    let tie_term: f64 = ties.iter().map(|&g| (g as f64).powi(3) - g as f64).sum::<f64>() / 48.0;
    let var = nf * (nf + 1.0) * (2.0 * nf + 1.0) / 24.0 - tie_term;
    if var <= 0.0 {
        return 1.0;
    }
    let z = ((t - mean + 0.5) / var.sqrt()).min(0.0);
    let phi = Normal::standard().cdf(z);
    (2.0 * phi).min(1.0)
}

pub fn wilcoxon(x: &[f64], y: &[f64]) -> Result<WilcoxonResult, EvalError> {
    wilcoxon_with(x, y, PMethod::Auto)
}

pub fn wilcoxon_with(x: &[f64], y: &[f64], method: PMethod) -> Result<WilcoxonResult, EvalError> {
    if x.len() != y.len() {
        return Err(EvalError::LengthMismatch(x.len(), y.len()));
    }
    if x.len() < MIN_PAIRS {
        return Err(EvalError::TooFewPairs(x.len()));
    }
    let diffs: Vec<f64> = x.iter().zip(y).map(|(a, b)| a - b).filter(|d| *d != 0.0).collect();
    if diffs.is_empty() {
        return Err(EvalError::DegenerateSample);
    }
    let magnitudes: Vec<f64> = diffs.iter().map(|d| d.abs()).collect();
    let (ranks, ties) = average_ranks(&magnitudes);
    let plus = diffs.iter().zip(&ranks).filter(|(d, _)| **d > 0.0).fold(0.0, |acc, (_, r)| acc + r);
    let minus = diffs.iter().zip(&ranks).filter(|(d, _)| **d < 0.0).fold(0.0, |acc, (_, r)| acc + r);
    let t = plus.min(minus);
    let n = diffs.len();
    let exact = match method {
        PMethod::Auto => n <= EXACT_MAX_N,
        PMethod::Exact => {
            if n > 24 {
                return Err(EvalError::ExactTooLarge(n));
            }
            true
        }
        PMethod::Normal => false,
    };
    let p = if exact { exact_p(&ranks, t) } else { normal_p(n, t, &ties) }.clamp(0.0, 1.0);
    Ok(WilcoxonResult { pairs: x.len(), n, t, p, reject: p < ALPHA, exact })
}
