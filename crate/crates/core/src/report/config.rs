use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::process::{Mode, ProcessParams};
use crate::sweep::{canonical_experiment, ExperimentSpec, Param, Preset, SweepSpec};

/// Flat `key = value` document. `#` starts a comment; blank lines are
/// ignored; keys may appear once.
#[derive(Debug, Clone, Default)]
pub struct KeyValues {
    entries: Vec<(String, String)>,
}

impl KeyValues {
    pub fn parse(text: &str) -> Result<Self> {
        let mut entries: Vec<(String, String)> = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected `key = value`", lineno + 1))
            })?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(Error::Config(format!("line {}: empty key", lineno + 1)));
            }
            if entries.iter().any(|(k, _)| *k == key) {
                return Err(Error::Config(format!("duplicate key: {key}")));
            }
            entries.push((key, value.trim().to_string()));
        }
        Ok(Self { entries })
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text)
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn contains(&self, key: &str) -> bool {
        self.get(key).is_some()
    }

    pub fn reject_unknown(&self, allowed: &[&str]) -> Result<()> {
        match self.entries.iter().find(|(k, _)| !allowed.contains(&k.as_str())) {
            Some((k, _)) => Err(Error::Config(format!("unknown key: {k}"))),
            None => Ok(()),
        }
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T>
    where
        T::Err: std::fmt::Display,
    {
        let raw = self
            .get(key)
            .ok_or_else(|| Error::Config(format!("missing key: {key}")))?;
        parse_value(key, raw)
    }

    fn optional<T: FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key).map(|raw| parse_value(key, raw)).transpose()
    }
}

fn parse_value<T: FromStr>(key: &str, raw: &str) -> Result<T>
where
    T::Err: std::fmt::Display,
{
    raw.parse()
        .map_err(|e| Error::Config(format!("invalid value for key {key}: `{raw}` ({e})")))
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub params: ProcessParams<f64>,
    pub seed: u64,
    pub mode: Mode,
    pub show_distribution: bool,
}

const RUN_KEYS: &[&str] = &["alpha", "beta", "s", "n", "seed", "mode", "show_distribution"];

/// Keys: `alpha`, `beta`, `s`, `n` (required); `seed`, `mode`,
/// `show_distribution` (optional).
pub fn parse_run_config(kv: &KeyValues) -> Result<RunConfig> {
    kv.reject_unknown(RUN_KEYS)?;
    let params = ProcessParams {
        alpha: kv.required("alpha")?,
        beta: kv.required("beta")?,
        s: kv.required("s")?,
        n: kv.required("n")?,
    };
    params
        .validate()
        .map_err(|e| Error::Config(e.to_string()))?;
    Ok(RunConfig {
        params,
        seed: kv.optional("seed")?.unwrap_or(0),
        mode: match kv.get("mode") {
            Some(m) => m.parse().map_err(|e: Error| Error::Config(e.to_string()))?,
            None => Mode::default(),
        },
        show_distribution: kv.optional("show_distribution")?.unwrap_or(false),
    })
}

const CANONICAL_KEYS: &[&str] = &["experiment", "master_seed", "replicates"];
const EXPLICIT_KEYS: &[&str] = &[
    "name",
    "varied",
    "low",
    "high",
    "steps",
    "integral",
    "alpha",
    "beta",
    "s",
    "n",
    "alpha_coupled_to_s",
    "correlate_inverse",
    "replicates",
    "master_seed",
];

/// Either `experiment = <alpha|beta|s|n|a|b|c|d>` naming a canonical
/// sweep, or an explicit sweep: `name`, `varied`, `low`, `high`, `steps`
/// and the three fixed parameters. Both forms accept `replicates` and
/// `master_seed`.
pub fn parse_experiment_config(kv: &KeyValues) -> Result<ExperimentSpec> {
    let master_seed = kv.optional("master_seed")?.unwrap_or(0);
    let replicates = kv.optional("replicates")?.unwrap_or(1);
    let spec = if let Some(name) = kv.get("experiment") {
        kv.reject_unknown(CANONICAL_KEYS)?;
        let mut spec = canonical_experiment(name, master_seed)
            .ok_or_else(|| Error::Config(format!("invalid value for key experiment: `{name}`")))?;
        spec.replicates = replicates;
        spec
    } else {
        kv.reject_unknown(EXPLICIT_KEYS)?;
        let varied: Param = kv.required("varied")?;
        let fixed_or = |key: &str, param: Param| -> Result<Option<String>> {
            if varied == param {
                if kv.contains(key) {
                    return Err(Error::Config(format!(
                        "key {key} is the varied parameter and cannot be fixed"
                    )));
                }
                Ok(None)
            } else {
                kv.required::<String>(key).map(Some)
            }
        };
        let alpha = fixed_or("alpha", Param::Alpha)?;
        let beta = fixed_or("beta", Param::Beta)?;
        let s = fixed_or("s", Param::S)?;
        let n = fixed_or("n", Param::N)?;
        let low: f64 = kv.required("low")?;
        let fixed = ProcessParams {
            alpha: alpha.map(|v| parse_value("alpha", &v)).transpose()?.unwrap_or(low),
            beta: beta.map(|v| parse_value("beta", &v)).transpose()?.unwrap_or(low as u64),
            s: s.map(|v| parse_value("s", &v)).transpose()?.unwrap_or(low as usize),
            n: n.map(|v| parse_value("n", &v)).transpose()?.unwrap_or(low as u64),
        };
        ExperimentSpec {
            name: kv.required("name")?,
            varied,
            sweep: SweepSpec {
                low,
                high: kv.required("high")?,
                steps: kv.required("steps")?,
                integral: kv.optional("integral")?.unwrap_or(varied != Param::Alpha),
            },
            fixed,
            alpha_coupled_to_s: kv.optional("alpha_coupled_to_s")?.unwrap_or(false),
            correlate_inverse: kv.optional("correlate_inverse")?.unwrap_or(false),
            replicates,
            master_seed,
            preset: Preset::Full,
        }
    };
    if spec.name.is_empty() || spec.name.contains([',', '"', '\n']) {
        return Err(Error::Config(format!(
            "invalid value for key name: `{}`",
            spec.name
        )));
    }
    spec.validate().map_err(|e| Error::Config(e.to_string()))?;
    Ok(spec)
}
