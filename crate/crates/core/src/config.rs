//! Flat `key = value` run configuration.
//!
//! Keys map one-to-one onto command-line overrides. Unknown keys are errors.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::pattern::PatternRegistry;
use crate::trainer::TrainerConfig;

/// Every scalar key, in the order [`RunConfig::to_text`] writes them.
/// Patterns use `pattern.0`, `pattern.1`, ... in addition.
pub const CONFIG_KEYS: &[&str] = &[
    "n",
    "m",
    "batch_size",
    "learn_pct",
    "survive_pct",
    "epsilon_initial",
    "epsilon_step",
    "epsilon_max",
    "stagnation_window",
    "max_batches",
    "seed",
    "hidden",
    "learning_rate",
    "checkpoint_every",
    "restarts",
];

pub fn is_config_key(key: &str) -> bool {
    CONFIG_KEYS.contains(&key) || pattern_slot(key).is_some()
}

fn pattern_slot(key: &str) -> Option<usize> {
    let idx = key.strip_prefix("pattern.")?;
    if idx.is_empty() || !idx.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    idx.parse().ok()
}

/// Raw key/value pairs before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConfigMap {
    entries: BTreeMap<String, String>,
}

impl ConfigMap {
    pub fn parse(text: &str) -> Result<Self> {
        let mut map = ConfigMap::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Parse(format!(
                    "line {}: expected `key = value`, found `{line}`",
                    lineno + 1
                ))
            })?;
            map.set(key.trim(), value.trim())?;
        }
        Ok(map)
    }

    /// Sets a key, rejecting names outside the schema.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        if !is_config_key(key) {
            return Err(Error::config(key, "unknown key"));
        }
        self.entries.insert(key.to_string(), value.to_string());
        Ok(())
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.entries.get(key).map(String::as_str)
    }

    fn value<T: FromStr>(&self, key: &str, default: T) -> Result<T> {
        match self.get(key) {
            None => Ok(default),
            Some(v) => v
                .parse()
                .map_err(|_| Error::config(key, format!("cannot parse `{v}`"))),
        }
    }

    fn required<T: FromStr>(&self, key: &str) -> Result<T> {
        let v = self
            .get(key)
            .ok_or_else(|| Error::config(key, "missing required key"))?;
        v.parse()
            .map_err(|_| Error::config(key, format!("cannot parse `{v}`")))
    }
}

/// A validated run configuration.
#[derive(Clone, Debug)]
pub struct RunConfig {
    pub trainer: TrainerConfig,
    /// Pattern specs as written, one per color.
    pub pattern_specs: Vec<String>,
    /// Write a checkpoint every this many batches; 0 disables periodic checkpoints.
    pub checkpoint_every: u64,
    /// Extra attempts with seeds `seed + 1`, `seed + 2`, ...
    pub restarts: u32,
}

impl RunConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Self::from_map(&ConfigMap::parse(text)?)
    }

    pub fn from_map(map: &ConfigMap) -> Result<Self> {
        Self::from_map_with(map, PatternRegistry::builtin())
    }

    pub fn from_map_with(map: &ConfigMap, registry: &PatternRegistry) -> Result<Self> {
        let n: usize = map.required("n")?;
        let m: usize = map.value("m", 2)?;
        if !(2..=10).contains(&m) {
            return Err(Error::config(
                "m",
                format!("color count must be in 2..=10, got {m}"),
            ));
        }
        for key in map.entries.keys() {
            if let Some(slot) = pattern_slot(key) {
                if slot >= m {
                    return Err(Error::config(
                        key.as_str(),
                        format!("only {m} colors configured"),
                    ));
                }
            }
        }
        let mut pattern_specs = Vec::with_capacity(m);
        let mut patterns = Vec::with_capacity(m);
        for i in 0..m {
            let key = format!("pattern.{i}");
            let spec = map
                .get(&key)
                .ok_or_else(|| Error::config(key.as_str(), "missing required key"))?;
            let pattern = registry
                .parse(spec)
                .map_err(|e| Error::config(key.as_str(), e.to_string()))?;
            pattern_specs.push(spec.to_string());
            patterns.push(pattern);
        }

        let mut t = TrainerConfig::new(n, m, patterns);
        t.batch_size = map.value("batch_size", t.batch_size)?;
        t.learn_pct = map.value("learn_pct", t.learn_pct)?;
        t.survive_pct = map.value("survive_pct", t.survive_pct)?;
        t.epsilon_initial = map.value("epsilon_initial", t.epsilon_initial)?;
        t.epsilon_step = map.value("epsilon_step", t.epsilon_step)?;
        t.epsilon_max = map.value("epsilon_max", t.epsilon_max)?;
        t.stagnation_window = map.value("stagnation_window", t.stagnation_window)?;
        t.max_batches = map.value("max_batches", t.max_batches)?;
        t.seed = map.value("seed", t.seed)?;
        t.learning_rate = map.value("learning_rate", t.learning_rate)?;
        if let Some(h) = map.get("hidden") {
            t.hidden_sizes = h
                .split(',')
                .map(|s| s.trim().parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| {
                    Error::config(
                        "hidden",
                        format!("expected comma-separated sizes, got `{h}`"),
                    )
                })?;
        }
        t.validate()?;

        Ok(Self {
            trainer: t,
            pattern_specs,
            checkpoint_every: map.value("checkpoint_every", 100)?,
            restarts: map.value("restarts", 0)?,
        })
    }

    /// Every key with its effective value; parses back to the same config.
    pub fn to_text(&self) -> String {
        let t = &self.trainer;
        let hidden: Vec<String> = t.hidden_sizes.iter().map(usize::to_string).collect();
        let mut out = String::new();
        let mut put = |k: &str, v: String| {
            let _ = writeln!(out, "{k} = {v}");
        };
        put("n", t.n.to_string());
        put("m", t.m.to_string());
        for (i, spec) in self.pattern_specs.iter().enumerate() {
            put(&format!("pattern.{i}"), spec.clone());
        }
        put("batch_size", t.batch_size.to_string());
        put("learn_pct", format!("{:?}", t.learn_pct));
        put("survive_pct", format!("{:?}", t.survive_pct));
        put("epsilon_initial", format!("{:?}", t.epsilon_initial));
        put("epsilon_step", format!("{:?}", t.epsilon_step));
        put("epsilon_max", format!("{:?}", t.epsilon_max));
        put("stagnation_window", t.stagnation_window.to_string());
        put("max_batches", t.max_batches.to_string());
        put("seed", t.seed.to_string());
        put("hidden", hidden.join(","));
        put("learning_rate", format!("{:?}", t.learning_rate));
        put("checkpoint_every", self.checkpoint_every.to_string());
        put("restarts", self.restarts.to_string());
        out
    }

    pub fn to_map(&self) -> ConfigMap {
        ConfigMap::parse(&self.to_text()).expect("emitted config is well formed")
    }
}
