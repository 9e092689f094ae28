//! Flat `key = value` run files.
//!
//! ```text
//! # always-ON cell, lowest load
//! scenario = table2
//! lambda_laa = 25
//! laa_service.family = lognormal
//! laa_service.cv = 0.5
//! ```
//!
//! Blank lines and `#` comments are skipped. Missing keys keep the LBT
//! with buffering defaults (`λ_ℓ = 25`); `scenario = table2` switches the
//! defaults to the always-ON cell before the other keys apply, whatever
//! their order. Any other scenario value is only a label. Unknown or
//! repeated keys are errors.

use std::collections::BTreeMap;

use laacoex_core::{
    DistributionSpec, Family, FastStartMode, ModelParams, SenseRelease, SimConfig, ThresholdMode,
};

use crate::CliError;

/// Names of the duration distributions that accept overrides.
pub const DISTRIBUTIONS: [&str; 7] = [
    "laa_interarrival",
    "wifi_interarrival",
    "laa_service",
    "wifi_service",
    "sense_duration",
    "on_duration",
    "off_duration",
];

/// Partial replacement for one exponential default.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DistOverride {
    pub family: Option<Family>,
    pub mean: Option<f64>,
    pub cv: Option<f64>,
}

impl DistOverride {
    fn is_empty(&self) -> bool {
        self.family.is_none() && self.mean.is_none() && self.cv.is_none()
    }

    /// `base` is the exponential default, `None` for a silent stream.
    fn apply(&self, base: Option<DistributionSpec>) -> Option<DistributionSpec> {
        if self.is_empty() {
            return base;
        }
        let mean = self.mean.or(base.map(|b| b.mean))?;
        let family = self
            .family
            .or(base.map(|b| b.family))
            .unwrap_or(Family::Exponential);
        Some(match family {
            Family::Exponential => DistributionSpec::exponential(mean),
            Family::Deterministic => DistributionSpec::deterministic(mean),
            Family::LogNormal => DistributionSpec::lognormal(mean, self.cv.unwrap_or(1.0)),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    /// Label written to the first CSV column.
    pub scenario: String,
    pub params: ModelParams,
    pub sessions: u64,
    pub seed: u64,
    pub replications: u32,
    pub warmup_fraction: f64,
    pub fast_start_mode: FastStartMode,
    /// Indexed like [`DISTRIBUTIONS`].
    pub overrides: [DistOverride; 7],
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            scenario: "table1".to_string(),
            params: ModelParams::default(),
            sessions: SimConfig::DEFAULT_SESSIONS,
            seed: 1,
            replications: 1,
            warmup_fraction: SimConfig::DEFAULT_WARMUP,
            fast_start_mode: FastStartMode::Exponential,
            overrides: [DistOverride::default(); 7],
        }
    }
}

impl RunConfig {
    pub fn sim_config(&self) -> SimConfig {
        let mut cfg = SimConfig::exponential(self.params)
            .with_sessions(self.sessions)
            .with_seed(self.seed)
            .with_replications(self.replications);
        cfg.warmup_fraction = self.warmup_fraction;
        cfg.fast_start_mode = self.fast_start_mode;
        let [a, b, c, d, e, f, g] = &self.overrides;
        cfg.laa_interarrival = a.apply(cfg.laa_interarrival);
        cfg.wifi_interarrival = b.apply(cfg.wifi_interarrival);
        cfg.laa_service = c.apply(Some(cfg.laa_service)).unwrap_or(cfg.laa_service);
        cfg.wifi_service = d.apply(Some(cfg.wifi_service)).unwrap_or(cfg.wifi_service);
        cfg.sense_duration = e
            .apply(Some(cfg.sense_duration))
            .unwrap_or(cfg.sense_duration);
        cfg.on_duration = f.apply(Some(cfg.on_duration)).unwrap_or(cfg.on_duration);
        cfg.off_duration = g.apply(Some(cfg.off_duration)).unwrap_or(cfg.off_duration);
        cfg
    }
}

/// Reads a run file from disk.
pub fn load_config(path: &str) -> Result<RunConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("cannot read {path}: {e}")))?;
    parse_config(&text)
}

pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut entries: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    for (n, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected `key = value`", n + 1)))?;
        let key = key.trim();
        if entries.insert(key, (n + 1, value.trim())).is_some() {
            return Err(CliError::Config(format!(
                "line {}: `{key}` given twice",
                n + 1
            )));
        }
    }

    let mut cfg = RunConfig::default();
    if let Some((line, v)) = entries.remove("scenario") {
        if v.is_empty() || v.contains(',') {
            return Err(bad(line, "scenario", v));
        }
        if v == "table2" {
            cfg.params = ModelParams::table2(cfg.params.lambda_laa);
        }
        cfg.scenario = v.to_string();
    }
    for (key, (line, v)) in entries {
        set(&mut cfg, key, v).map_err(|()| bad(line, key, v))?;
    }
    Ok(cfg)
}

fn bad(line: usize, key: &str, value: &str) -> CliError {
    CliError::Config(format!("line {line}: bad value `{value}` for `{key}`"))
}

fn set(cfg: &mut RunConfig, key: &str, v: &str) -> Result<(), ()> {
    let p = &mut cfg.params;
    match key {
        "lambda_laa" => p.lambda_laa = num(v)?,
        "lambda_wifi" => p.lambda_wifi = num(v)?,
        "mu_laa" => p.mu_laa = num(v)?,
        "mu_wifi" => p.mu_wifi = num(v)?,
        "mu_sense" => p.mu_sense = num(v)?,
        "mu_on" => p.mu_on = num(v)?,
        "mu_off" => p.mu_off = num(v)?,
        "fast_start_multiplier" => p.fast_start_multiplier = num(v)?,
        "D" => p.servers = v.parse().map_err(drop)?,
        "Q" => p.queue_capacity = v.parse().map_err(drop)?,
        "Q_theta" => p.queue_threshold = v.parse().map_err(drop)?,
        "lbt" => p.lbt_enabled = boolean(v)?,
        "buffering" => p.buffering_enabled = boolean(v)?,
        "threshold_mode" => {
            p.threshold_mode = match v {
                "strict" => ThresholdMode::Strict,
                "non_strict" | "non-strict" => ThresholdMode::NonStrict,
                _ => return Err(()),
            }
        }
        "sense_release" => {
            p.sense_release = match v {
                "wifi_held" => SenseRelease::WifiHeld,
                "channel_busy" => SenseRelease::ChannelBusy,
                "threshold_only" => SenseRelease::ThresholdOnly,
                _ => return Err(()),
            }
        }
        "sessions" => cfg.sessions = v.parse().map_err(drop)?,
        "seed" => cfg.seed = v.parse().map_err(drop)?,
        "replications" => cfg.replications = v.parse().map_err(drop)?,
        "warmup_fraction" => cfg.warmup_fraction = num(v)?,
        "fast_start_mode" => {
            cfg.fast_start_mode = match v {
                "exponential" => FastStartMode::Exponential,
                "immediate" => FastStartMode::Immediate,
                _ => return Err(()),
            }
        }
        _ => {
            let (name, field) = key.split_once('.').ok_or(())?;
            let k = DISTRIBUTIONS.iter().position(|d| *d == name).ok_or(())?;
            let o = &mut cfg.overrides[k];
            match field {
                "family" => o.family = Some(family(v)?),
                "mean" => o.mean = Some(num(v)?),
                "cv" => o.cv = Some(num(v)?),
                _ => return Err(()),
            }
        }
    }
    Ok(())
}

fn num(v: &str) -> Result<f64, ()> {
    v.parse::<f64>().ok().filter(|x| x.is_finite()).ok_or(())
}

fn boolean(v: &str) -> Result<bool, ()> {
    match v {
        "true" => Ok(true),
        "false" => Ok(false),
        _ => Err(()),
    }
}

fn family(v: &str) -> Result<Family, ()> {
    match v {
        "exponential" => Ok(Family::Exponential),
        "deterministic" => Ok(Family::Deterministic),
        "lognormal" => Ok(Family::LogNormal),
        _ => Err(()),
    }
}
