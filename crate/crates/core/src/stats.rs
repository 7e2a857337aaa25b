//! Lexicon entropy and Kendall rank correlation.

use std::cmp::Ordering;

use statrs::function::erf::erfc;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub(crate) fn check_normalized<T: Scalar>(probs: &[T]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::InvalidInput("empty distribution".into()));
    }
    if let Some(p) = probs.iter().find(|p| !(**p >= T::zero() && **p <= T::one())) {
        return Err(Error::InvalidInput(format!("probability {p} outside [0, 1]")));
    }
    let total: f64 = probs.iter().map(|p| p.to_f64_lossy()).sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidInput(format!(
            "probabilities sum to {total}, not 1"
        )));
    }
    Ok(())
}

/// Shannon entropy in bits. Zero probabilities contribute nothing.
pub fn shannon_entropy_bits<T: Scalar>(probs: &[T]) -> Result<T> {
    check_normalized(probs)?;
    let h = probs
        .iter()
        .filter(|p| **p > T::zero())
        .map(|&p| -p * p.log2())
        .fold(T::zero(), |a, b| a + b);
    // rounding can leave -0.0 or a hair below zero for degenerate inputs
    Ok(h.max(T::zero()))
}

/// Hyperparameter values paired with the entropies they produced.
#[derive(Debug, Clone, PartialEq)]
pub struct PairedSeries {
    x: Vec<f64>,
    y: Vec<f64>,
}

impl PairedSeries {
    pub fn new(x: Vec<f64>, y: Vec<f64>) -> Result<Self> {
        if x.len() != y.len() {
            return Err(Error::InvalidInput(format!(
                "series lengths differ: {} vs {}",
                x.len(),
                y.len()
            )));
        }
        if x.len() < 2 {
            return Err(Error::InvalidInput(format!(
                "need at least 2 points, got {}",
                x.len()
            )));
        }
        if x.iter().chain(&y).any(|v| v.is_nan()) {
            return Err(Error::InvalidInput("series contains NaN".into()));
        }
        Ok(Self { x, y })
    }

    pub fn x(&self) -> &[f64] {
        &self.x
    }

    pub fn y(&self) -> &[f64] {
        &self.y
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CorrelationResult {
    pub tau: f64,
    /// Two-sided, normal approximation with tie correction.
    pub p_value: f64,
    pub n: usize,
}

fn cmp(a: f64, b: f64) -> Ordering {
    a.partial_cmp(&b).expect("NaN rejected by PairedSeries")
}

/// Per-group tie statistics: (pairs, sum t(t-1)(2t+5), sum t(t-1), sum t(t-1)(t-2)).
#[derive(Default)]
struct Ties {
    pairs: u64,
    v0: f64,
    v1: f64,
    v2: f64,
}

impl Ties {
    fn push(&mut self, t: u64) {
        let t = t as f64;
        self.pairs += (t as u64) * (t as u64).saturating_sub(1) / 2;
        self.v0 += t * (t - 1.0) * (2.0 * t + 5.0);
        self.v1 += t * (t - 1.0);
        self.v2 += t * (t - 1.0) * (t - 2.0);
    }

    fn of_sorted(values: impl Iterator<Item = f64>) -> Self {
        let mut ties = Ties::default();
        let mut prev: Option<f64> = None;
        let mut run = 0;
        for v in values {
            if prev == Some(v) {
                run += 1;
            } else {
                if run > 0 {
                    ties.push(run);
                }
                run = 1;
                prev = Some(v);
            }
        }
        ties.push(run);
        ties
    }
}

/// Counts inversions of `v` by merge sort, sorting it in place.
fn merge_count(v: &mut [f64], buf: &mut [f64]) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut swaps = merge_count(&mut v[..mid], &mut buf[..mid]) + merge_count(&mut v[mid..], &mut buf[mid..]);
    let (mut i, mut j, mut k) = (0, mid, 0);
    while i < mid && j < n {
        if v[j] < v[i] {
            buf[k] = v[j];
            swaps += (mid - i) as u64;
            j += 1;
        } else {
            buf[k] = v[i];
            i += 1;
        }
        k += 1;
    }
    buf[k..k + mid - i].copy_from_slice(&v[i..mid]);
    k += mid - i;
    buf[k..k + n - j].copy_from_slice(&v[j..n]);
    v.copy_from_slice(&buf[..n]);
    swaps
}

/// Kendall's tau-b with a two-sided p-value from the tie-corrected normal
/// approximation. `O(n log n)` (Knight's algorithm).
pub fn kendall_tau(series: &PairedSeries) -> Result<CorrelationResult> {
    let n = series.len();
    let mut pairs: Vec<(f64, f64)> = series.x.iter().copied().zip(series.y.iter().copied()).collect();
    pairs.sort_by(|a, b| cmp(a.0, b.0).then(cmp(a.1, b.1)));

    let x_ties = Ties::of_sorted(pairs.iter().map(|p| p.0));
    let mut joint_ties = 0u64;
    let mut run = 1u64;
    for w in pairs.windows(2) {
        if w[0] == w[1] {
            run += 1;
        } else {
            joint_ties += run * (run - 1) / 2;
            run = 1;
        }
    }
    joint_ties += run * (run - 1) / 2;

    let mut ys: Vec<f64> = pairs.iter().map(|p| p.1).collect();
    let mut buf = vec![0.0; n];
    let discordant = merge_count(&mut ys, &mut buf);
    let y_ties = Ties::of_sorted(ys.iter().copied());

    let total = (n as u64) * (n as u64 - 1) / 2;
    if x_ties.pairs == total {
        return Err(Error::UndefinedCorrelation("all x values are equal".into()));
    }
    if y_ties.pairs == total {
        return Err(Error::UndefinedCorrelation("all y values are equal".into()));
    }

    // concordant - discordant over pairs untied in both coordinates
    let untied_x = total - x_ties.pairs;
    let untied_y = total - y_ties.pairs;
    let s = (total + joint_ties) as f64 - (x_ties.pairs + y_ties.pairs) as f64 - 2.0 * discordant as f64;
    let tau = (s / ((untied_x as f64) * (untied_y as f64)).sqrt()).clamp(-1.0, 1.0);

    let nf = n as f64;
    let mut var = (nf * (nf - 1.0) * (2.0 * nf + 5.0) - x_ties.v0 - y_ties.v0) / 18.0
        + x_ties.v1 * y_ties.v1 / (2.0 * nf * (nf - 1.0));
    if n > 2 {
        var += x_ties.v2 * y_ties.v2 / (9.0 * nf * (nf - 1.0) * (nf - 2.0));
    }
    let p_value = if var > 0.0 {
        let z = s / var.sqrt();
        erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0)
    } else {
        1.0
    };
    Ok(CorrelationResult { tau, p_value, n })
}
