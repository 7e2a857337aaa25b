//! Logarithmic hyperparameter sweeps and the experiments built on them.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::process::{run, Mode, ProcessParams};
use crate::rng::{derive_seed, RandomStream};
use crate::scalar::Scalar;
use crate::stats::{kendall_tau, CorrelationResult, PairedSeries};

/// Per-weight initial mass used when alpha is tied to the lexicon size.
pub const COUPLED_WEIGHT_INIT: f64 = 5e-3;

/// Geometric sweep from `low` to `high` (both inclusive) in `steps` points,
/// floored when `integral`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepSpec<T = f64> {
    pub low: T,
    pub high: T,
    pub steps: usize,
    pub integral: bool,
}

impl<T: Scalar> SweepSpec<T> {
    pub fn new(low: T, high: T, steps: usize, integral: bool) -> Result<Self> {
        let spec = Self { low, high, steps, integral };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.low > T::zero() && self.low.is_finite()) {
            return Err(Error::InvalidParameter(format!("sweep low must be positive, got {}", self.low)));
        }
        if !(self.high > T::zero() && self.high.is_finite()) {
            return Err(Error::InvalidParameter(format!("sweep high must be positive, got {}", self.high)));
        }
        if self.steps < 2 {
            return Err(Error::InvalidParameter(format!(
                "sweep needs at least 2 steps, got {}",
                self.steps
            )));
        }
        if self.integral && self.low.floor() < T::one() {
            return Err(Error::InvalidParameter(format!(
                "integral sweep must start at 1 or above, got {}",
                self.low
            )));
        }
        Ok(())
    }
}

/// `low * (high / low)^(i / (steps - 1))` for `i = 0..steps`. The endpoints
/// are returned exactly; duplicates produced by flooring are kept.
pub fn log_sweep<T: Scalar>(spec: &SweepSpec<T>) -> Result<Vec<T>> {
    spec.validate()?;
    let last = spec.steps - 1;
    let ratio = spec.high / spec.low;
    let denom = T::from_u64_lossy(last as u64);
    Ok((0..spec.steps)
        .map(|i| {
            let v = match i {
                0 => spec.low,
                i if i == last => spec.high,
                i => spec.low * ratio.powf(T::from_u64_lossy(i as u64) / denom),
            };
            if spec.integral {
                v.floor()
            } else {
                v
            }
        })
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    Alpha,
    Beta,
    S,
    N,
}

impl Param {
    pub fn name(self) -> &'static str {
        match self {
            Param::Alpha => "alpha",
            Param::Beta => "beta",
            Param::S => "s",
            Param::N => "n",
        }
    }

    /// Row label in the correlation table.
    pub fn label(self, inverse: bool) -> &'static str {
        match (self, inverse) {
            (Param::Alpha, true) => "1/α",
            (Param::Alpha, false) => "α",
            (Param::Beta, _) => "β",
            (Param::S, _) => "S",
            (Param::N, _) => "N",
        }
    }

    fn is_integer(self) -> bool {
        !matches!(self, Param::Alpha)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "alpha" => Ok(Param::Alpha),
            "beta" => Ok(Param::Beta),
            "s" => Ok(Param::S),
            "n" => Ok(Param::N),
            other => Err(Error::InvalidParameter(format!(
                "unknown parameter `{other}` (expected alpha, beta, s or n)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Preset {
    #[default]
    Full,
    /// Every fourth sweep point.
    Reduced,
}

impl Preset {
    pub fn stride(self) -> usize {
        match self {
            Preset::Full => 1,
            Preset::Reduced => 4,
        }
    }
}

impl FromStr for Preset {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Preset::Full),
            "reduced" => Ok(Preset::Reduced),
            other => Err(Error::InvalidParameter(format!(
                "preset must be `full` or `reduced`, got `{other}`"
            ))),
        }
    }
}

/// One hyperparameter swept, the other three held fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub name: String,
    pub varied: Param,
    pub sweep: SweepSpec,
    /// Values for the non-varied parameters; the varied slot is ignored.
    /// With `alpha_coupled_to_s`, `fixed.alpha` is the per-weight initial
    /// mass and each point uses `alpha = fixed.alpha * s`.
    pub fixed: ProcessParams<f64>,
    pub alpha_coupled_to_s: bool,
    /// Correlate entropy against `1 / alpha` instead of `alpha`.
    pub correlate_inverse: bool,
    pub replicates: usize,
    pub master_seed: u64,
    pub preset: Preset,
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        self.sweep.validate()?;
        if self.varied.is_integer() && !self.sweep.integral {
            return Err(Error::InvalidParameter(format!(
                "sweep over integer parameter `{}` must be integral",
                self.varied
            )));
        }
        if self.alpha_coupled_to_s && self.varied != Param::S {
            return Err(Error::InvalidParameter(
                "alpha_coupled_to_s requires varying s".into(),
            ));
        }
        if self.correlate_inverse && self.varied != Param::Alpha {
            return Err(Error::InvalidParameter(
                "correlate_inverse requires varying alpha".into(),
            ));
        }
        if self.replicates == 0 {
            return Err(Error::InvalidParameter("replicates must be at least 1".into()));
        }
        Ok(())
    }

    /// Sweep values with their indices in the full sweep, thinned by the preset.
    pub fn points(&self) -> Result<Vec<(usize, f64)>> {
        let stride = self.preset.stride();
        Ok(log_sweep(&self.sweep)?
            .into_iter()
            .enumerate()
            .filter(|(i, _)| i % stride == 0)
            .collect())
    }

    /// Process parameters at one sweep value.
    pub fn params_at(&self, value: f64) -> Result<ProcessParams<f64>> {
        let mut p = self.fixed.clone();
        match self.varied {
            Param::Alpha => p.alpha = value,
            Param::Beta => p.beta = value as u64,
            Param::S => p.s = value as usize,
            Param::N => p.n = value as u64,
        }
        if self.alpha_coupled_to_s {
            p.alpha = self.fixed.alpha * p.s as f64;
        }
        p.validate()?;
        Ok(p)
    }

    pub fn with_preset(mut self, preset: Preset) -> Self {
        self.preset = preset;
        self
    }
}

/// The four sweeps behind the reported entropy curves and correlations:
/// alpha, beta, s (with alpha tied to s) and n.
pub fn canonical_experiments(master_seed: u64) -> Vec<ExperimentSpec> {
    let exp = |name: &str, varied, sweep, fixed: (f64, u64, usize, u64)| ExperimentSpec {
        name: name.to_string(),
        varied,
        sweep,
        fixed: ProcessParams {
            alpha: fixed.0,
            beta: fixed.1,
            s: fixed.2,
            n: fixed.3,
        },
        alpha_coupled_to_s: varied == Param::S,
        correlate_inverse: varied == Param::Alpha,
        replicates: 1,
        master_seed,
        preset: Preset::Full,
    };
    let ls = |low, high, steps, integral| SweepSpec { low, high, steps, integral };
    vec![
        exp("alpha", Param::Alpha, ls(1e-4, 1e-1, 200, false), (1e-4, 10, 64, 1_000)),
        exp("beta", Param::Beta, ls(8.0, 32768.0, 600, true), (1e-3, 8, 64, 10_000)),
        exp("s", Param::S, ls(8.0, 256.0, 400, true), (COUPLED_WEIGHT_INIT, 10, 8, 1_000)),
        exp("n", Param::N, ls(1e2, 1e6, 400, true), (1.0, 5, 64, 100)),
    ]
}

/// Looks up a canonical experiment by name (`alpha`, `beta`, `s`, `n`) or
/// by its letter (`a` to `d`).
pub fn canonical_experiment(name: &str, master_seed: u64) -> Option<ExperimentSpec> {
    let key = match name {
        "a" => "alpha",
        "b" => "beta",
        "c" => "s",
        "d" => "n",
        other => other,
    };
    canonical_experiments(master_seed)
        .into_iter()
        .find(|e| e.name == key)
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunRecord {
    pub experiment: String,
    pub param: Param,
    pub param_value: f64,
    pub replicate: usize,
    pub seed: u64,
    pub entropy_bits: f64,
}

fn worker_pool(workers: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::InvalidParameter(format!("cannot start {workers} workers: {e}")))
}

/// Runs every (sweep point, replicate) pair on up to `workers` threads
/// (0 = one per core). Records come back in (sweep index, replicate) order
/// and do not depend on the worker count.
pub fn run_experiment(spec: &ExperimentSpec, mode: Mode, workers: usize) -> Result<Vec<RunRecord>> {
    spec.validate()?;
    let tasks: Vec<(usize, f64, usize)> = spec
        .points()?
        .into_iter()
        .flat_map(|(i, v)| (0..spec.replicates).map(move |r| (i, v, r)))
        .collect();
    let tag = |index, value, e: Error| Error::AtPoint {
        experiment: spec.name.clone(),
        index,
        value,
        source: Box::new(e),
    };
    let run_one = |&(index, value, replicate): &(usize, f64, usize)| -> Result<RunRecord> {
        let params = spec.params_at(value).map_err(|e| tag(index, value, e))?;
        let seed = derive_seed(spec.master_seed, index as u64, replicate as u64);
        let mut rng = RandomStream::from_seed(seed);
        let dist = run(&params, &mut rng, mode).map_err(|e| tag(index, value, e))?;
        Ok(RunRecord {
            experiment: spec.name.clone(),
            param: spec.varied,
            param_value: value,
            replicate,
            seed,
            entropy_bits: dist.entropy_bits(),
        })
    };
    worker_pool(workers)?.install(|| tasks.par_iter().map(run_one).collect())
}

/// Kendall correlation between swept value (or its reciprocal) and entropy.
pub fn correlate(records: &[RunRecord], inverse: bool) -> Result<CorrelationResult> {
    let x = records
        .iter()
        .map(|r| if inverse { 1.0 / r.param_value } else { r.param_value })
        .collect();
    let y = records.iter().map(|r| r.entropy_bits).collect();
    kendall_tau(&PairedSeries::new(x, y)?)
}

#[derive(Debug)]
pub struct TableRow {
    pub experiment: String,
    pub param: Param,
    pub label: &'static str,
    pub result: Result<CorrelationResult>,
}

/// One row per experiment, in order of first appearance. Alpha sweeps are
/// correlated against `1 / alpha`.
pub fn correlation_table(records: &[RunRecord]) -> Vec<TableRow> {
    let mut groups: Vec<(&str, Param, Vec<RunRecord>)> = Vec::new();
    for r in records {
        match groups.iter_mut().find(|g| g.0 == r.experiment) {
            Some(g) => g.2.push(r.clone()),
            None => groups.push((&r.experiment, r.param, vec![r.clone()])),
        }
    }
    groups
        .into_iter()
        .map(|(name, param, recs)| {
            let inverse = param == Param::Alpha;
            TableRow {
                experiment: name.to_string(),
                param,
                label: param.label(inverse),
                result: correlate(&recs, inverse),
            }
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn five_point_decade_sweep() {
        let v: Vec<f64> = log_sweep(&SweepSpec::new(1e2, 1e6, 5, false).unwrap()).unwrap();
        for (got, want) in v.iter().zip([1e2, 1e3, 1e4, 1e5, 1e6]) {
            assert!(((got - want) / want).abs() < 1e-12, "{got} vs {want}");
        }
    }

    #[test]
    fn integral_buffer_sweep() {
        let v: Vec<f64> = log_sweep(&SweepSpec::new(8.0, 32768.0, 600, true).unwrap()).unwrap();
        assert_eq!(v.len(), 600);
        assert_eq!(v[0], 8.0);
        assert_eq!(v[599], 32768.0);
        assert!(v.iter().all(|x| x.fract() == 0.0));
        assert!(v.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn f32_sweep() {
        let v = log_sweep(&SweepSpec::new(1.0f32, 100.0, 3, false).unwrap()).unwrap();
        assert_eq!(v[0], 1.0);
        assert!((v[1] - 10.0).abs() < 1e-5);
        assert_eq!(v[2], 100.0);
    }

    #[test]
    fn sweep_validation() {
        assert!(SweepSpec::new(1.0, 10.0, 1, false).is_err());
        assert!(SweepSpec::new(0.0, 10.0, 5, false).is_err());
        assert!(SweepSpec::new(1.0, -1.0, 5, false).is_err());
        assert!(SweepSpec::new(0.5, 10.0, 5, true).is_err());
        let bad = SweepSpec { low: 1.0, high: 2.0, steps: 1, integral: false };
        assert!(matches!(log_sweep(&bad), Err(Error::InvalidParameter(_))));
    }

    #[test]
    fn canonical_rows() {
        let exps = canonical_experiments(0);
        assert_eq!(exps.len(), 4);
        let a = &exps[0];
        assert_eq!((a.fixed.beta, a.fixed.s, a.fixed.n), (10, 64, 1000));
        assert!(a.correlate_inverse);
        let c = &exps[2];
        let p = c.params_at(64.0).unwrap();
        assert!((p.alpha - 0.32).abs() < 1e-15);
        let d = &exps[3];
        let pts = d.points().unwrap();
        assert_eq!(pts.first().unwrap().1, 100.0);
        assert_eq!(pts.last().unwrap().1, 1e6);
        assert_eq!((d.fixed.alpha, d.fixed.beta, d.fixed.s), (1.0, 5, 64));
        for e in &exps {
            e.validate().unwrap();
        }
    }

    #[test]
    fn lookup_by_letter() {
        assert_eq!(canonical_experiment("b", 3).unwrap().varied, Param::Beta);
        assert_eq!(canonical_experiment("n", 3).unwrap().master_seed, 3);
        assert!(canonical_experiment("z", 3).is_none());
    }

    #[test]
    fn reduced_preset_is_every_fourth_point() {
        let e = canonical_experiment("alpha", 1).unwrap().with_preset(Preset::Reduced);
        let pts = e.points().unwrap();
        assert_eq!(pts.len(), 50);
        assert!(pts.iter().all(|(i, _)| i % 4 == 0));
    }

    #[test]
    fn coupling_flags_checked() {
        let mut e = canonical_experiment("beta", 1).unwrap();
        e.alpha_coupled_to_s = true;
        assert!(e.validate().is_err());
        let mut e = canonical_experiment("beta", 1).unwrap();
        e.correlate_inverse = true;
        assert!(e.validate().is_err());
        let mut e = canonical_experiment("beta", 1).unwrap();
        e.sweep.integral = false;
        assert!(e.validate().is_err());
    }

    fn small_n_sweep(replicates: usize) -> ExperimentSpec {
        ExperimentSpec {
            name: "tiny".into(),
            varied: Param::N,
            sweep: SweepSpec { low: 1.0, high: 50.0, steps: 6, integral: true },
            fixed: ProcessParams { alpha: 1.0, beta: 3, s: 8, n: 0 },
            alpha_coupled_to_s: false,
            correlate_inverse: false,
            replicates,
            master_seed: 17,
            preset: Preset::Full,
        }
    }

    #[test]
    fn record_count_and_order() {
        let recs = run_experiment(&small_n_sweep(2), Mode::Fast, 2).unwrap();
        assert_eq!(recs.len(), 12);
        for (k, r) in recs.iter().enumerate() {
            assert_eq!(r.replicate, k % 2);
            assert!(r.entropy_bits >= 0.0 && r.entropy_bits <= 3.0 + 1e-12);
        }
    }

    #[test]
    fn invalid_point_is_tagged() {
        let mut spec = small_n_sweep(1);
        spec.fixed.s = 0;
        let err = run_experiment(&spec, Mode::Fast, 1).unwrap_err();
        assert!(matches!(err, Error::AtPoint { index: 0, .. }), "{err}");
        assert!(err.to_string().contains("tiny"));
    }

    #[test]
    fn inverse_alpha_negates_tau() {
        let recs: Vec<RunRecord> = [(0.1, 5.0), (0.2, 4.0), (0.3, 4.5), (0.4, 3.0), (0.5, 2.0)]
            .iter()
            .map(|&(a, h)| RunRecord {
                experiment: "x".into(),
                param: Param::Alpha,
                param_value: a,
                replicate: 0,
                seed: 0,
                entropy_bits: h,
            })
            .collect();
        let direct = correlate(&recs, false).unwrap();
        let inverse = correlate(&recs, true).unwrap();
        assert_eq!(direct.tau, -inverse.tau);
        assert_eq!(direct.p_value, inverse.p_value);
        let table = correlation_table(&recs);
        assert_eq!(table.len(), 1);
        assert_eq!(table[0].label, "1/α");
    }
}
