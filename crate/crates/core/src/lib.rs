//! Simulator and experiment harness for FiLex, a finite-lexicon
//! self-reinforcing stochastic process.
//!
//! The process keeps `s` weights that start at `alpha / s`. Each of `n`
//! iterations draws `beta` indices from the weights frozen at the start of
//! the iteration and adds `1 / beta` to every drawn weight. Lexicon entropy
//! is the Shannon entropy, in bits, of the normalized result.
//!
//! The process is generic over its weight arithmetic ([`Weight`]): `f64`
//! and `f32` for simulation, [`BigRational`](num_rational::BigRational) for
//! exact checks. Aliases for the common instantiations live here.

pub mod error;
pub mod process;
pub mod report;
pub mod rng;
pub mod sampling;
pub mod scalar;
pub mod stats;
pub mod sweep;

pub use error::{Error, Result};
pub use process::{
    advance, init_weights, run, run_traced, step, step_fast, Distribution, Mode, ProcessParams,
    ReferenceStepper, WeightState,
};
pub use rng::{derive_seed, RandomStream};
pub use sampling::{sample_categorical, sample_categorical_indexed, sample_multinomial, PrefixSumTree};
pub use scalar::{Scalar, Weight};
pub use stats::{kendall_tau, shannon_entropy_bits, CorrelationResult, PairedSeries};
pub use sweep::{
    canonical_experiment, canonical_experiments, correlate, correlation_table, log_sweep,
    run_experiment, ExperimentSpec, Param, Preset, RunRecord, SweepSpec, TableRow,
};

pub type Params = ProcessParams<f64>;
pub type Params32 = ProcessParams<f32>;
pub type ExactParams = ProcessParams<num_rational::BigRational>;

pub type State = WeightState<f64>;
pub type State32 = WeightState<f32>;
pub type ExactState = WeightState<num_rational::BigRational>;

pub type Dist = Distribution<f64>;
pub type Dist32 = Distribution<f32>;
pub type ExactDist = Distribution<num_rational::BigRational>;
