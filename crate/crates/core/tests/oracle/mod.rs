//! Independent oracles shared by the integration tests. Nothing here calls
//! into the sampling code it is used to check.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use statrs::distribution::{ChiSquared, ContinuousCDF};

pub fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Exact law of the per-category draw totals after `n` iterations of the
/// reference process with initial weights `alpha / s` each.
///
/// Every iteration enumerates all `s^beta` ordered draw sequences against
/// the weights frozen at the iteration start. Final weights are
/// `alpha / s + totals / beta`, so the totals identify the outcome.
pub fn enumerate_totals(alpha: &BigRational, beta: u32, s: usize, n: u32) -> BTreeMap<Vec<u64>, BigRational> {
    let mut layer: BTreeMap<Vec<u64>, BigRational> = BTreeMap::new();
    layer.insert(vec![0; s], BigRational::one());
    let base = alpha / BigRational::from_integer(BigInt::from(s as u64));
    let inc = rat(1, beta as i64);
    for _ in 0..n {
        let mut next: BTreeMap<Vec<u64>, BigRational> = BTreeMap::new();
        for (totals, p) in &layer {
            let weights: Vec<BigRational> = totals
                .iter()
                .map(|&t| &base + &inc * BigRational::from_integer(BigInt::from(t)))
                .collect();
            let mass = weights.iter().fold(BigRational::zero(), |a, w| a + w);
            let probs: Vec<BigRational> = weights.iter().map(|w| w / &mass).collect();
            for seq in 0..(s as u64).pow(beta) {
                let mut code = seq;
                let mut q = p.clone();
                let mut t = totals.clone();
                for _ in 0..beta {
                    let i = (code % s as u64) as usize;
                    code /= s as u64;
                    q *= &probs[i];
                    t[i] += 1;
                }
                *next.entry(t).or_insert_with(BigRational::zero) += q;
            }
        }
        layer = next;
    }
    layer
}

/// Pearson chi-square statistic and its upper-tail critical value at
/// `significance`, for observed counts against exact probabilities.
pub fn chi_square(
    expected: &BTreeMap<Vec<u64>, BigRational>,
    observed: &BTreeMap<Vec<u64>, u64>,
    samples: u64,
    significance: f64,
) -> (f64, f64) {
    let mut stat = 0.0;
    for (key, p) in expected {
        let e = p.to_f64().unwrap() * samples as f64;
        let o = *observed.get(key).unwrap_or(&0) as f64;
        stat += (o - e).powi(2) / e;
    }
    // an outcome outside the support is an immediate failure
    if observed.keys().any(|k| !expected.contains_key(k)) {
        stat = f64::INFINITY;
    }
    let dof = (expected.len() - 1).max(1) as f64;
    let critical = ChiSquared::new(dof).unwrap().inverse_cdf(1.0 - significance);
    (stat, critical)
}

/// Tau-b by direct comparison of all pairs.
pub fn tau_b_brute(x: &[f64], y: &[f64]) -> Option<f64> {
    let n = x.len();
    let (mut conc, mut disc, mut tie_x, mut tie_y) = (0i64, 0i64, 0i64, 0i64);
    for i in 0..n {
        for j in i + 1..n {
            let dx = x[i] - x[j];
            let dy = y[i] - y[j];
            if dx == 0.0 {
                tie_x += 1;
            }
            if dy == 0.0 {
                tie_y += 1;
            }
            if dx != 0.0 && dy != 0.0 {
                if (dx > 0.0) == (dy > 0.0) {
                    conc += 1;
                } else {
                    disc += 1;
                }
            }
        }
    }
    let total = (n * (n - 1) / 2) as i64;
    if tie_x == total || tie_y == total {
        return None;
    }
    Some((conc - disc) as f64 / (((total - tie_x) as f64) * ((total - tie_y) as f64)).sqrt())
}

/// Entropy in bits evaluated term by term with natural logs.
pub fn entropy_bits_ln(p: &[f64]) -> f64 {
    -p.iter().filter(|&&q| q > 0.0).map(|&q| q * q.ln()).sum::<f64>() / std::f64::consts::LN_2
}
