//! Configuration files: `[instance]`, `[policy]` and `[experiment]`
//! sections of `key = value` lines (TOML syntax). Unknown keys are errors.

use std::fmt;

use serde::Deserialize;
use sha2::{Digest, Sha256};

use crate::env::RegretMode;
use crate::harness::{
    ExperimentConfig, ImpairmentModel, InstanceConfig, MeansSource, OutputKind, PolicyConfig,
    PolicyKind, SweepConfig,
};
use crate::policies::PhaseMeanMode;

/// A configuration problem, located where possible.
#[derive(Clone, Debug, PartialEq)]
pub struct ConfigError {
    pub key: Option<String>,
    pub line: Option<usize>,
    pub message: String,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("config error")?;
        if let Some(line) = self.line {
            write!(f, " at line {line}")?;
        }
        if let Some(key) = &self.key {
            write!(f, " (key `{key}`)")?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    instance: RawInstance,
    policy: RawPolicy,
    #[serde(default)]
    experiment: RawExperiment,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    means: Option<Vec<f64>>,
    arms: Option<usize>,
    instance_seed: Option<u64>,
    optimal_arms: Option<usize>,
    window: u32,
    horizon: u64,
    impairment: Option<String>,
    d_value: Option<u32>,
    d_lo: Option<u32>,
    d_hi: Option<u32>,
    d_mean: Option<f64>,
    d_stddev_scale: Option<f64>,
    d_max: Option<u32>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPolicy {
    name: String,
    bucket_capacity: Option<usize>,
    phase_mean: Option<String>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawExperiment {
    runs: Option<u32>,
    master_seed: Option<u64>,
    regret: Option<String>,
    outputs: Option<Vec<String>>,
    sweep_optimal_arms: Option<Vec<usize>>,
    switch_window: Option<usize>,
    sweep_capacities: Option<Vec<usize>>,
    sweep_means: Option<Vec<f64>>,
}

/// Line (1-based) of `key` inside `[section]`.
fn locate(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, line) in text.lines().enumerate() {
        let trimmed = line.trim();
        if let Some(name) = trimmed.strip_prefix('[').and_then(|s| s.strip_suffix(']')) {
            current = name.trim().to_string();
            continue;
        }
        if current != section {
            continue;
        }
        if let Some((lhs, _)) = trimmed.split_once('=') {
            if lhs.trim() == key {
                return Some(i + 1);
            }
        }
    }
    None
}

fn line_of_offset(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

fn key_on_line(text: &str, line: usize) -> Option<String> {
    let l = text.lines().nth(line.checked_sub(1)?)?;
    let (lhs, _) = l.split_once('=')?;
    let key = lhs.trim();
    (!key.is_empty()).then(|| key.to_string())
}

fn unknown_field(message: &str) -> Option<String> {
    let rest = message.split("unknown field `").nth(1)?;
    Some(rest.split('`').next()?.to_string())
}

struct Validator<'a> {
    text: &'a str,
}

impl Validator<'_> {
    fn err(&self, section: &str, key: &str, message: impl Into<String>) -> ConfigError {
        ConfigError {
            key: Some(format!("{section}.{key}")),
            line: locate(self.text, section, key),
            message: message.into(),
        }
    }

    fn require<T: Copy>(
        &self,
        value: Option<T>,
        section: &str,
        key: &str,
        why: &str,
    ) -> Result<T, ConfigError> {
        value.ok_or_else(|| ConfigError {
            key: Some(format!("{section}.{key}")),
            line: None,
            message: format!("missing; required {why}"),
        })
    }

    fn reject<T>(
        &self,
        value: &Option<T>,
        section: &str,
        key: &str,
        why: &str,
    ) -> Result<(), ConfigError> {
        if value.is_some() {
            return Err(self.err(section, key, format!("not allowed {why}")));
        }
        Ok(())
    }
}

fn parse_instance(
    v: &Validator<'_>,
    raw: &RawInstance,
) -> Result<InstanceConfig<f64>, ConfigError> {
    let means = match (&raw.means, raw.arms) {
        (Some(_), Some(_)) => {
            return Err(v.err(
                "instance",
                "arms",
                "give either `means` or `arms`, not both",
            ));
        }
        (Some(means), None) => {
            v.reject(
                &raw.instance_seed,
                "instance",
                "instance_seed",
                "with explicit `means`",
            )?;
            v.reject(
                &raw.optimal_arms,
                "instance",
                "optimal_arms",
                "with explicit `means`",
            )?;
            if means.len() < 2 {
                return Err(v.err("instance", "means", "need at least 2 arms"));
            }
            if let Some(bad) = means.iter().find(|m| !(0.0..=1.0).contains(*m)) {
                return Err(v.err("instance", "means", format!("mean {bad} is outside [0, 1]")));
            }
            MeansSource::Explicit(means.clone())
        }
        (None, Some(arms)) => {
            if arms < 2 {
                return Err(v.err("instance", "arms", "need at least 2 arms"));
            }
            let optimal_arms = raw.optimal_arms.unwrap_or(1);
            if optimal_arms == 0 || optimal_arms > arms {
                return Err(v.err(
                    "instance",
                    "optimal_arms",
                    format!("must lie in 1..={arms} (instance.arms)"),
                ));
            }
            MeansSource::Random {
                arms,
                seed: raw.instance_seed.unwrap_or(0),
                optimal_arms,
            }
        }
        (None, None) => {
            return Err(ConfigError {
                key: Some("instance.means".into()),
                line: locate(v.text, "instance", "window"),
                message: "one of `instance.means` or `instance.arms` is required".into(),
            });
        }
    };
    if raw.window == 0 {
        return Err(v.err("instance", "window", "must be positive"));
    }
    if raw.horizon < 2 {
        return Err(v.err("instance", "horizon", "must be at least 2"));
    }
    let kind = raw.impairment.as_deref().unwrap_or("none");
    let exceeds = |key: &str, value: u32| {
        v.err(
            "instance",
            key,
            format!(
                "{value} exceeds instance.window = {} (line {})",
                raw.window,
                locate(v.text, "instance", "window").map_or("?".into(), |l| l.to_string())
            ),
        )
    };
    let allowed: &[&str] = match kind {
        "constant" => &["d_value"],
        "uniform" => &["d_lo", "d_hi"],
        "absnormal" => &["d_mean", "d_stddev_scale", "d_max"],
        "none" => &[],
        other => {
            return Err(v.err(
                "instance",
                "impairment",
                format!("unknown kind `{other}` (expected none, constant, uniform or absnormal)"),
            ));
        }
    };
    for (key, present) in [
        ("d_value", raw.d_value.is_some()),
        ("d_lo", raw.d_lo.is_some()),
        ("d_hi", raw.d_hi.is_some()),
        ("d_mean", raw.d_mean.is_some()),
        ("d_stddev_scale", raw.d_stddev_scale.is_some()),
        ("d_max", raw.d_max.is_some()),
    ] {
        if present && !allowed.contains(&key) {
            let hint = match (kind, key) {
                ("constant", "d_max") => " (d_value is the bound)",
                ("uniform", "d_max") => " (d_hi is the bound)",
                _ => "",
            };
            return Err(v.err(
                "instance",
                key,
                format!("not allowed with impairment = \"{kind}\"{hint}"),
            ));
        }
    }
    let impairment = match kind {
        "none" => ImpairmentModel::None,
        "constant" => {
            let value = v.require(
                raw.d_value,
                "instance",
                "d_value",
                "for impairment = \"constant\"",
            )?;
            if value > raw.window {
                return Err(exceeds("d_value", value));
            }
            ImpairmentModel::Constant(value)
        }
        "uniform" => {
            let lo = v.require(raw.d_lo, "instance", "d_lo", "for impairment = \"uniform\"")?;
            let hi = v.require(raw.d_hi, "instance", "d_hi", "for impairment = \"uniform\"")?;
            if lo > hi {
                return Err(v.err(
                    "instance",
                    "d_lo",
                    format!("d_lo = {lo} exceeds d_hi = {hi}"),
                ));
            }
            if hi > raw.window {
                return Err(exceeds("d_hi", hi));
            }
            ImpairmentModel::Uniform { lo, hi }
        }
        "absnormal" => {
            let mean = v.require(
                raw.d_mean,
                "instance",
                "d_mean",
                "for impairment = \"absnormal\"",
            )?;
            let scale = raw.d_stddev_scale.unwrap_or(0.5);
            let d_max = raw.d_max.unwrap_or(raw.window);
            if !(mean.is_finite() && mean >= 0.0) {
                return Err(v.err("instance", "d_mean", "must be a finite value >= 0"));
            }
            if !(scale.is_finite() && scale >= 0.0) {
                return Err(v.err("instance", "d_stddev_scale", "must be a finite value >= 0"));
            }
            if d_max > raw.window {
                return Err(exceeds("d_max", d_max));
            }
            ImpairmentModel::AbsNormal {
                mean,
                stddev_scale: scale,
                d_max,
            }
        }
        _ => unreachable!("impairment kind checked above"),
    };
    Ok(InstanceConfig {
        means,
        impairment,
        window: raw.window,
        horizon: raw.horizon,
    })
}

fn parse_policy(v: &Validator<'_>, raw: &RawPolicy) -> Result<PolicyConfig, ConfigError> {
    let kind: PolicyKind = raw
        .name
        .parse()
        .map_err(|e: crate::harness::HarnessError| v.err("policy", "name", e.to_string()))?;
    if let Some(c) = raw.bucket_capacity {
        if kind != PolicyKind::PhasedSe {
            return Err(v.err("policy", "bucket_capacity", "only applies to phased-se"));
        }
        if c == 0 {
            return Err(v.err("policy", "bucket_capacity", "must be positive"));
        }
    }
    let phase_mean = match raw.phase_mean.as_deref() {
        None | Some("empirical") => PhaseMeanMode::Empirical,
        Some("strict") => PhaseMeanMode::TargetCount,
        Some(other) => {
            return Err(v.err(
                "policy",
                "phase_mean",
                format!("unknown mode `{other}` (expected empirical or strict)"),
            ));
        }
    };
    Ok(PolicyConfig {
        kind,
        bucket_capacity: raw.bucket_capacity,
        phase_mean,
    })
}

fn parse_experiment(
    v: &Validator<'_>,
    raw: &RawExperiment,
    instance: InstanceConfig<f64>,
    policy: PolicyConfig,
) -> Result<ExperimentConfig<f64>, ConfigError> {
    let runs = raw.runs.unwrap_or(ExperimentConfig::<f64>::DEFAULT_RUNS);
    if runs == 0 {
        return Err(v.err("experiment", "runs", "must be at least 1"));
    }
    let regret = match raw.regret.as_deref() {
        None | Some("mean-optimal") => RegretMode::MeanOptimal,
        Some("oracle-impaired") => RegretMode::OracleImpaired,
        Some(other) => {
            return Err(v.err(
                "experiment",
                "regret",
                format!("unknown mode `{other}` (expected mean-optimal or oracle-impaired)"),
            ));
        }
    };
    let outputs = match &raw.outputs {
        None => vec![OutputKind::Curve, OutputKind::Summary],
        Some(list) => list
            .iter()
            .map(|o| match o.as_str() {
                "curve" => Ok(OutputKind::Curve),
                "traces" => Ok(OutputKind::Traces),
                "summary" => Ok(OutputKind::Summary),
                other => Err(v.err(
                    "experiment",
                    "outputs",
                    format!("unknown output `{other}` (expected curve, traces or summary)"),
                )),
            })
            .collect::<Result<Vec<_>, _>>()?,
    };
    let mut sweep = SweepConfig::default();
    if let Some(list) = &raw.sweep_optimal_arms {
        let k = instance.num_arms();
        if list.is_empty() || list.iter().any(|&n| n == 0 || n > k) {
            return Err(v.err(
                "experiment",
                "sweep_optimal_arms",
                format!("entries must lie in 1..={k}"),
            ));
        }
        sweep.optimal_arms = list.clone();
    }
    if let Some(w) = raw.switch_window {
        if w == 0 {
            return Err(v.err("experiment", "switch_window", "must be at least 1"));
        }
        sweep.switch_window = w;
    }
    if let Some(list) = &raw.sweep_capacities {
        if list.is_empty() || list.contains(&0) {
            return Err(v.err("experiment", "sweep_capacities", "entries must be positive"));
        }
        sweep.capacities = list.clone();
    }
    if let Some(list) = &raw.sweep_means {
        let cap = match instance.impairment {
            ImpairmentModel::AbsNormal { d_max, .. } => d_max,
            _ => instance.window,
        };
        if list.is_empty() || list.iter().any(|&m| !(0.0..=f64::from(cap)).contains(&m)) {
            return Err(v.err(
                "experiment",
                "sweep_means",
                format!("entries must lie in [0, {cap}]"),
            ));
        }
        sweep.impairment_means = list.clone();
    }
    Ok(ExperimentConfig {
        instance,
        policy,
        runs,
        master_seed: raw.master_seed.unwrap_or(0),
        regret,
        outputs,
        sweep,
    })
}

/// Parses and validates a configuration file. Defaults: 30 runs, master
/// seed 0, mean-optimal regret, empirical phase means.
pub fn parse_config(text: &str) -> Result<ExperimentConfig<f64>, ConfigError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let line = e.span().map(|s| line_of_offset(text, s.start));
        let key = unknown_field(e.message()).or_else(|| line.and_then(|l| key_on_line(text, l)));
        let line = match (&key, line) {
            (Some(k), _) if e.message().contains("unknown field") => text
                .lines()
                .position(|l| l.split_once('=').is_some_and(|(lhs, _)| lhs.trim() == k))
                .map(|i| i + 1)
                .or(line),
            _ => line,
        };
        ConfigError {
            key,
            line,
            message: e.message().trim().to_string(),
        }
    })?;
    let v = Validator { text };
    let instance = parse_instance(&v, &raw.instance)?;
    let policy = parse_policy(&v, &raw.policy)?;
    parse_experiment(&v, &raw.experiment, instance, policy)
}

/// Short content hash of a configuration text.
pub fn config_hash(text: &str) -> String {
    let digest = Sha256::digest(text.as_bytes());
    hex::encode(&digest[..8])
}
