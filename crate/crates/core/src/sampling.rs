//! Categorical and multinomial sampling over unnormalized weights.

use rand::Rng;
use rand_distr::{Binomial, Distribution as _};

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::scalar::{is_positive, Weight};

/// Indexed prefix sums over non-negative weights (Fenwick / binary indexed
/// tree). Point updates and inverse-CDF search are `O(log n)`.
#[derive(Debug, Clone)]
pub struct PrefixSumTree<T> {
    // 1-based; tree[0] is unused
    tree: Vec<T>,
    total: T,
}

impl<T: Weight> PrefixSumTree<T> {
    pub fn new(weights: &[T]) -> Self {
        let n = weights.len();
        let mut tree = Vec::with_capacity(n + 1);
        tree.push(T::zero());
        tree.extend(weights.iter().cloned());
        for i in 1..=n {
            let parent = i + (i & i.wrapping_neg());
            if parent <= n {
                let v = tree[i].clone();
                tree[parent] = tree[parent].clone() + v;
            }
        }
        let total = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
        Self { tree, total }
    }

    pub fn len(&self) -> usize {
        self.tree.len() - 1
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn total(&self) -> &T {
        &self.total
    }

    pub fn add(&mut self, index: usize, delta: T) {
        self.total = self.total.clone() + delta.clone();
        let mut i = index + 1;
        while i < self.tree.len() {
            self.tree[i] = self.tree[i].clone() + delta.clone();
            i += i & i.wrapping_neg();
        }
    }

    /// Sum of the first `count` weights.
    pub fn prefix_sum(&self, count: usize) -> T {
        let mut acc = T::zero();
        let mut i = count;
        while i > 0 {
            acc = acc + self.tree[i].clone();
            i &= i - 1;
        }
        acc
    }

    /// Index `i` with `prefix_sum(i) <= target < prefix_sum(i + 1)`.
    /// Targets at or past the total land on the last index.
    pub fn find(&self, target: &T) -> usize {
        let n = self.len();
        let mut pos = 0;
        let mut rem = target.clone();
        let mut step = if n == 0 { 0 } else { 1 << (usize::BITS - 1 - n.leading_zeros()) };
        while step > 0 {
            let next = pos + step;
            if next <= n && self.tree[next] <= rem {
                pos = next;
                rem = rem - self.tree[next].clone();
            }
            step >>= 1;
        }
        pos.min(n - 1)
    }

    /// Inverse-CDF draw using one uniform variate.
    pub fn sample(&self, rng: &mut RandomStream) -> usize {
        let target = T::from_variate(rng.next_uniform()) * self.total.clone();
        self.find(&target)
    }
}

pub(crate) fn check_weights<T: Weight>(weights: &[T]) -> Result<()> {
    if weights.is_empty() {
        return Err(Error::InvalidInput("empty weight array".into()));
    }
    if let Some(i) = weights.iter().position(|w| !is_positive(w)) {
        return Err(Error::InvalidInput(format!(
            "weight {i} is not positive ({:?})",
            weights[i]
        )));
    }
    Ok(())
}

/// Draws index `i` with probability `weights[i] / sum(weights)` by a linear
/// inverse-CDF scan.
pub fn sample_categorical<T: Weight>(weights: &[T], rng: &mut RandomStream) -> Result<usize> {
    check_weights(weights)?;
    Ok(linear_search(weights, rng.next_uniform()))
}

/// Same draw as [`sample_categorical`] but through a [`PrefixSumTree`].
pub fn sample_categorical_indexed<T: Weight>(
    weights: &[T],
    rng: &mut RandomStream,
) -> Result<usize> {
    check_weights(weights)?;
    Ok(PrefixSumTree::new(weights).sample(rng))
}

pub(crate) fn linear_search<T: Weight>(weights: &[T], u: f64) -> usize {
    let total = weights.iter().cloned().fold(T::zero(), |a, b| a + b);
    let target = T::from_variate(u) * total;
    let mut acc = T::zero();
    for (i, w) in weights.iter().enumerate() {
        acc = acc + w.clone();
        if target < acc {
            return i;
        }
    }
    weights.len() - 1
}

/// Fills `counts` with one Multinomial(`trials`, weights / sum) draw using
/// the conditional-binomial decomposition: category `i` receives
/// Binomial(remaining trials, w_i / remaining mass).
pub fn sample_multinomial<T: Weight, R: Rng + ?Sized>(
    trials: u64,
    weights: &[T],
    counts: &mut [u64],
    rng: &mut R,
) -> Result<()> {
    check_weights(weights)?;
    if counts.len() != weights.len() {
        return Err(Error::InvalidInput(format!(
            "count buffer has length {}, expected {}",
            counts.len(),
            weights.len()
        )));
    }
    let k = weights.len();
    // suffix[i] = mass of categories i..k
    let mut suffix = vec![0.0f64; k + 1];
    for i in (0..k).rev() {
        suffix[i] = suffix[i + 1] + weights[i].approx_f64();
    }
    counts.fill(0);
    let mut remaining = trials;
    for i in 0..k {
        if remaining == 0 {
            break;
        }
        if i == k - 1 {
            counts[i] = remaining;
            break;
        }
        let p = (weights[i].approx_f64() / suffix[i]).clamp(0.0, 1.0);
        let c = Binomial::new(remaining, p)
            .map_err(|e| Error::InvalidInput(format!("binomial({remaining}, {p}): {e}")))?
            .sample(rng);
        counts[i] = c;
        remaining -= c;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_sums_match_naive() {
        let w: Vec<f64> = (1..=13).map(|x| x as f64).collect();
        let t = PrefixSumTree::new(&w);
        for k in 0..=w.len() {
            assert_eq!(t.prefix_sum(k), w[..k].iter().sum::<f64>());
        }
        assert_eq!(*t.total(), 91.0);
    }

    #[test]
    fn find_agrees_with_linear_scan_on_exact_sums() {
        let w = [3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0];
        let t = PrefixSumTree::new(&w);
        for step in 0..2500 {
            let u = step as f64 / 2500.0;
            let target = u * t.total();
            let fenwick = t.find(&target);
            assert_eq!(fenwick, linear_search(&w, u), "u = {u}");
        }
    }

    #[test]
    fn add_keeps_tree_consistent() {
        let mut w = vec![1.0; 10];
        let mut t = PrefixSumTree::new(&w);
        t.add(3, 2.5);
        t.add(9, 0.5);
        w[3] += 2.5;
        w[9] += 0.5;
        for k in 0..=10 {
            assert_eq!(t.prefix_sum(k), w[..k].iter().sum::<f64>());
        }
    }

    #[test]
    fn single_category_always_zero() {
        let mut rng = RandomStream::from_seed(1);
        for _ in 0..100 {
            assert_eq!(sample_categorical(&[5.0], &mut rng).unwrap(), 0);
            assert_eq!(sample_categorical_indexed(&[5.0], &mut rng).unwrap(), 0);
        }
    }

    #[test]
    fn rejects_bad_weights() {
        let mut rng = RandomStream::from_seed(1);
        assert!(matches!(
            sample_categorical::<f64>(&[], &mut rng),
            Err(Error::InvalidInput(_))
        ));
        assert!(sample_categorical(&[1.0, 0.0], &mut rng).is_err());
        assert!(sample_categorical(&[1.0, -2.0], &mut rng).is_err());
        assert!(sample_categorical(&[1.0, f64::NAN], &mut rng).is_err());
    }

    #[test]
    fn frequencies_match_weights() {
        for (w, expect) in [([1.0, 1.0], 0.5), ([3.0, 1.0], 0.75)] {
            let mut rng = RandomStream::from_seed(11);
            let draws = 100_000;
            let (mut lin, mut idx) = (0, 0);
            for _ in 0..draws {
                lin += (sample_categorical(&w, &mut rng).unwrap() == 0) as u32;
                idx += (sample_categorical_indexed(&w, &mut rng).unwrap() == 0) as u32;
            }
            assert!((lin as f64 / draws as f64 - expect).abs() < 0.01);
            assert!((idx as f64 / draws as f64 - expect).abs() < 0.01);
        }
    }

    #[test]
    fn multinomial_counts_sum_to_trials() {
        let mut rng = RandomStream::from_seed(5);
        let w = [0.5, 2.0, 1e-6, 3.0, 0.25];
        let mut counts = [0u64; 5];
        for trials in [0, 1, 2, 7, 1000, 1 << 20] {
            sample_multinomial(trials, &w, &mut counts, &mut rng).unwrap();
            assert_eq!(counts.iter().sum::<u64>(), trials);
        }
    }

    #[test]
    fn multinomial_mean_is_proportional() {
        let mut rng = RandomStream::from_seed(9);
        let w = [1.0, 2.0, 5.0];
        let mut counts = [0u64; 3];
        let mut acc = [0u64; 3];
        for _ in 0..20_000 {
            sample_multinomial(10, &w, &mut counts, &mut rng).unwrap();
            for (a, c) in acc.iter_mut().zip(counts) {
                *a += c;
            }
        }
        for (a, p) in acc.iter().zip([1.0 / 8.0, 2.0 / 8.0, 5.0 / 8.0]) {
            let mean = *a as f64 / 20_000.0;
            assert!((mean - 10.0 * p).abs() < 0.05, "{mean} vs {}", 10.0 * p);
        }
    }
}
