//! The finite-lexicon self-reinforcing process.
//!
//! A run starts with `s` weights of `alpha / s`. Each of `n` iterations
//! freezes the weights, draws `beta` indices i.i.d. from the frozen
//! categorical distribution and adds `1 / beta` to each drawn index. The
//! result is the weight vector divided by its total, `alpha + n`.

use std::str::FromStr;

use crate::error::{Error, Result};
use crate::rng::RandomStream;
use crate::sampling::{check_weights, sample_multinomial, PrefixSumTree};
use crate::scalar::{is_positive, Scalar, Weight};
use crate::stats::shannon_entropy_bits;

#[derive(Debug, Clone, PartialEq)]
pub struct ProcessParams<T> {
    /// Initial total weight mass.
    pub alpha: T,
    /// Draws per iteration.
    pub beta: u64,
    /// Number of weights (lexicon size).
    pub s: usize,
    /// Number of iterations.
    pub n: u64,
}

impl<T: Weight> ProcessParams<T> {
    pub fn new(alpha: T, beta: u64, s: usize, n: u64) -> Result<Self> {
        let params = Self { alpha, beta, s, n };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_positive(&self.alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {:?}",
                self.alpha
            )));
        }
        if self.beta == 0 {
            return Err(Error::InvalidParameter("beta must be at least 1".into()));
        }
        if self.s == 0 {
            return Err(Error::InvalidParameter("s must be at least 1".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Mode {
    /// One categorical draw per sample, through a prefix-sum tree.
    Reference,
    /// One multinomial count vector per iteration.
    #[default]
    Fast,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "reference" => Ok(Mode::Reference),
            "fast" => Ok(Mode::Fast),
            other => Err(Error::InvalidParameter(format!(
                "mode must be `reference` or `fast`, got `{other}`"
            ))),
        }
    }
}

/// Unnormalized weights and the number of completed iterations.
///
/// Every iteration adds exactly `unit` of mass, so the total after `k`
/// iterations is `unit * (alpha + k)`. `unit` is 1 except when scaling is
/// requested through [`WeightState::with_increment_scale`].
#[derive(Debug, Clone, PartialEq)]
pub struct WeightState<T> {
    weights: Vec<T>,
    iteration: u64,
    initial_mass: T,
    unit: T,
}

impl<T: Weight> WeightState<T> {
    /// Initial state with weights `scale * alpha / s` that grows by `scale`
    /// per iteration. The normalized trajectory does not depend on `scale`.
    pub fn with_increment_scale(alpha: T, s: usize, scale: T) -> Result<Self> {
        if !is_positive(&alpha) {
            return Err(Error::InvalidParameter(format!(
                "alpha must be positive, got {alpha:?}"
            )));
        }
        if s == 0 {
            return Err(Error::InvalidParameter("s must be at least 1".into()));
        }
        if !is_positive(&scale) {
            return Err(Error::InvalidParameter(format!(
                "increment scale must be positive, got {scale:?}"
            )));
        }
        let initial_mass = scale.clone() * alpha;
        let each = initial_mass.clone() / T::from_count(s as u64);
        Ok(Self {
            weights: vec![each; s],
            iteration: 0,
            initial_mass,
            unit: scale,
        })
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }

    pub fn iteration(&self) -> u64 {
        self.iteration
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    /// Closed-form total mass, `unit * (alpha + iteration)`.
    pub fn expected_mass(&self) -> T {
        self.initial_mass.clone() + self.unit.clone() * T::from_count(self.iteration)
    }

    /// Sum of the stored weights.
    pub fn mass(&self) -> T {
        self.weights.iter().cloned().fold(T::zero(), |a, b| a + b)
    }

    /// Divides every weight by [`expected_mass`](Self::expected_mass).
    pub fn normalize(&self) -> Distribution<T> {
        if self.weights.len() == 1 {
            return Distribution {
                probs: vec![T::one()],
            };
        }
        let mass = self.expected_mass();
        Distribution {
            probs: self.weights.iter().map(|w| w.clone() / mass.clone()).collect(),
        }
    }

    fn increment(&self, beta: u64) -> T {
        self.unit.clone() / T::from_count(beta)
    }
}

/// All weights `alpha / s`, iteration 0.
pub fn init_weights<T: Weight>(params: &ProcessParams<T>) -> Result<WeightState<T>> {
    params.validate()?;
    WeightState::with_increment_scale(params.alpha.clone(), params.s, T::one())
}

/// Normalized output of a run.
#[derive(Debug, Clone, PartialEq)]
pub struct Distribution<T> {
    probs: Vec<T>,
}

impl<T> Distribution<T> {
    pub fn probs(&self) -> &[T] {
        &self.probs
    }

    pub fn into_probs(self) -> Vec<T> {
        self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

impl<T: Scalar> Distribution<T> {
    /// Checks that every probability lies in `[0, 1]` and that they sum to 1
    /// within `1e-9`.
    pub fn new(probs: Vec<T>) -> Result<Self> {
        crate::stats::check_normalized(&probs)?;
        Ok(Self { probs })
    }

    pub fn entropy_bits(&self) -> T {
        shannon_entropy_bits(&self.probs).expect("normalized by construction")
    }
}

impl Distribution<num_rational::BigRational> {
    pub fn to_f64(&self) -> Distribution<f64> {
        Distribution {
            probs: self.probs.iter().map(Weight::approx_f64).collect(),
        }
    }
}

/// Reference iteration with a prefix-sum tree kept in sync with the
/// weights across iterations.
#[derive(Debug, Clone)]
pub struct ReferenceStepper<T> {
    tree: PrefixSumTree<T>,
    counts: Vec<u64>,
    touched: Vec<usize>,
}

impl<T: Weight> ReferenceStepper<T> {
    pub fn new(state: &WeightState<T>) -> Result<Self> {
        check_weights(&state.weights)?;
        Ok(Self {
            tree: PrefixSumTree::new(&state.weights),
            counts: vec![0; state.len()],
            touched: Vec::new(),
        })
    }

    pub fn step(
        &mut self,
        state: &mut WeightState<T>,
        beta: u64,
        rng: &mut RandomStream,
    ) -> Result<()> {
        self.step_inner(state, beta, rng, None)
    }

    /// Like [`step`](Self::step), appending each drawn index to `trace`.
    pub fn step_traced(
        &mut self,
        state: &mut WeightState<T>,
        beta: u64,
        rng: &mut RandomStream,
        trace: &mut Vec<usize>,
    ) -> Result<()> {
        self.step_inner(state, beta, rng, Some(trace))
    }

    fn step_inner(
        &mut self,
        state: &mut WeightState<T>,
        beta: u64,
        rng: &mut RandomStream,
        mut trace: Option<&mut Vec<usize>>,
    ) -> Result<()> {
        if beta == 0 {
            return Err(Error::InvalidParameter("beta must be at least 1".into()));
        }
        if self.tree.len() != state.len() {
            return Err(Error::InvalidInput(format!(
                "stepper built for {} weights, state has {}",
                self.tree.len(),
                state.len()
            )));
        }
        let inc = state.increment(beta);
        // the tree stays frozen for all draws of this iteration
        for _ in 0..beta {
            let i = self.tree.sample(rng);
            if self.counts[i] == 0 {
                self.touched.push(i);
            }
            self.counts[i] += 1;
            state.weights[i] = state.weights[i].clone() + inc.clone();
            if let Some(t) = trace.as_deref_mut() {
                t.push(i);
            }
        }
        for &i in &self.touched {
            let delta = inc.clone() * T::from_count(self.counts[i]);
            self.tree.add(i, delta);
            self.counts[i] = 0;
        }
        self.touched.clear();
        state.iteration += 1;
        Ok(())
    }
}

/// One reference iteration: `beta` categorical draws from the weights as
/// they stood at the start of the iteration, each adding `1 / beta`.
pub fn step<T: Weight>(state: &mut WeightState<T>, beta: u64, rng: &mut RandomStream) -> Result<()> {
    ReferenceStepper::new(state)?.step(state, beta, rng)
}

/// One iteration drawn as a single multinomial count vector over the frozen
/// weights. Same distribution as [`step`], `O(s)` instead of
/// `O(beta log s)`.
pub fn step_fast<T: Weight>(
    state: &mut WeightState<T>,
    beta: u64,
    rng: &mut RandomStream,
) -> Result<()> {
    let mut counts = vec![0; state.len()];
    step_fast_with(state, beta, rng, &mut counts)
}

fn step_fast_with<T: Weight>(
    state: &mut WeightState<T>,
    beta: u64,
    rng: &mut RandomStream,
    counts: &mut [u64],
) -> Result<()> {
    if beta == 0 {
        return Err(Error::InvalidParameter("beta must be at least 1".into()));
    }
    sample_multinomial(beta, &state.weights, counts, rng)?;
    let inc = state.increment(beta);
    for (w, &c) in state.weights.iter_mut().zip(counts.iter()) {
        if c > 0 {
            *w = w.clone() + inc.clone() * T::from_count(c);
        }
    }
    state.iteration += 1;
    Ok(())
}

/// Advances `state` by `iterations` steps in the given mode.
pub fn advance<T: Weight>(
    state: &mut WeightState<T>,
    beta: u64,
    iterations: u64,
    rng: &mut RandomStream,
    mode: Mode,
) -> Result<()> {
    match mode {
        Mode::Reference => {
            let mut stepper = ReferenceStepper::new(state)?;
            for _ in 0..iterations {
                stepper.step(state, beta, rng)?;
            }
        }
        Mode::Fast => {
            let mut counts = vec![0; state.len()];
            for _ in 0..iterations {
                step_fast_with(state, beta, rng, &mut counts)?;
            }
        }
    }
    Ok(())
}

/// Full run: initialize, iterate `n` times, normalize.
pub fn run<T: Weight>(
    params: &ProcessParams<T>,
    rng: &mut RandomStream,
    mode: Mode,
) -> Result<Distribution<T>> {
    let mut state = init_weights(params)?;
    advance(&mut state, params.beta, params.n, rng, mode)?;
    Ok(state.normalize())
}

/// Reference run with every weight and increment multiplied by `scale`,
/// returning the normalized result and every drawn index in order.
pub fn run_traced<T: Weight>(
    params: &ProcessParams<T>,
    scale: T,
    rng: &mut RandomStream,
) -> Result<(Distribution<T>, Vec<usize>)> {
    params.validate()?;
    let mut state = WeightState::with_increment_scale(params.alpha.clone(), params.s, scale)?;
    let mut stepper = ReferenceStepper::new(&state)?;
    let mut trace = Vec::with_capacity((params.beta * params.n) as usize);
    for _ in 0..params.n {
        stepper.step_traced(&mut state, params.beta, rng, &mut trace)?;
    }
    Ok((state.normalize(), trace))
}
