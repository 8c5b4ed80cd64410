//! Trainer checkpoints: config echo, loop state, carried survivors, the
//! statistics so far and the policy blob. Restoring one continues the run
//! exactly where it stopped.

use std::fmt::Write as _;

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::graph::EdgeColoring;
use crate::pattern::reward;
use crate::policy::{PolicyNetwork, Trajectory};
use crate::trainer::{BatchStats, EpsilonSchedule, Trainer};

pub const CHECKPOINT_HEADER: &str = "RAMSEY-CEMA-CHECKPOINT v1";

/// Serializes the trainer together with the run configuration it came from.
pub fn write_checkpoint(config: &RunConfig, trainer: &Trainer) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{CHECKPOINT_HEADER}");
    let _ = writeln!(out, "[config]");
    out.push_str(&config.to_text());
    let _ = writeln!(out, "[state]");
    let _ = writeln!(out, "restart = {}", trainer.restart());
    let _ = writeln!(out, "seed = {}", trainer.seed());
    let _ = writeln!(out, "next_batch = {}", trainer.next_batch());
    let _ = writeln!(out, "next_stream = {}", trainer.next_stream());
    let _ = writeln!(out, "epsilon = {:?}", trainer.epsilon());
    let _ = writeln!(out, "stagnation = {}", trainer.stagnation());
    let best = trainer
        .best()
        .map_or_else(|| "none".to_string(), |b| b.coloring.to_compact());
    let _ = writeln!(out, "best = {best}");
    let _ = writeln!(out, "survivors = {}", trainer.survivors().len());
    for s in trainer.survivors() {
        let _ = writeln!(out, "survivor = {}", s.coloring.to_compact());
    }
    let _ = writeln!(out, "stats = {}", trainer.stats().len());
    for s in trainer.stats() {
        let _ = writeln!(out, "stat = {}", s.csv_row());
    }
    let _ = writeln!(out, "[policy]");
    out.push_str(&trainer.policy().to_text());
    out
}

/// Rebuilds the run configuration and trainer. Rewards of the stored
/// colorings are recounted.
pub fn read_checkpoint(text: &str) -> Result<(RunConfig, Trainer)> {
    let mut sections = Sections::split(text)?;
    let config = RunConfig::parse(sections.take("config")?)
        .map_err(|e| Error::checkpoint("config", e.to_string()))?;
    let state = sections.take("state")?;
    let policy = PolicyNetwork::from_text(sections.take("policy")?)?;

    let mut fields = state
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty())
        .map(|l| {
            l.split_once('=')
                .map(|(k, v)| (k.trim(), v.trim()))
                .ok_or_else(|| Error::checkpoint("state", format!("malformed line `{l}`")))
        });
    let mut field = |name: &str| -> Result<&str> {
        match fields.next() {
            Some(Ok((k, v))) if k == name => Ok(v),
            Some(Ok((k, _))) => Err(Error::checkpoint(
                name,
                format!("expected `{name}`, found `{k}`"),
            )),
            Some(Err(e)) => Err(e),
            None => Err(Error::checkpoint(name, "missing (truncated checkpoint?)")),
        }
    };
    fn number<T: std::str::FromStr>(name: &str, v: &str) -> Result<T> {
        v.parse()
            .map_err(|_| Error::checkpoint(name, format!("malformed value `{v}`")))
    }

    let restart: u32 = number("restart", field("restart")?)?;
    let seed: u64 = number("seed", field("seed")?)?;
    let next_batch: u64 = number("next_batch", field("next_batch")?)?;
    let next_stream: u64 = number("next_stream", field("next_stream")?)?;
    let epsilon: f64 = number("epsilon", field("epsilon")?)?;
    let stagnation: u64 = number("stagnation", field("stagnation")?)?;
    let best_text = field("best")?.to_string();
    let survivor_count: usize = number("survivors", field("survivors")?)?;
    let survivor_texts = (0..survivor_count)
        .map(|_| field("survivor").map(str::to_string))
        .collect::<Result<Vec<_>>>()?;
    let stat_count: usize = number("stats", field("stats")?)?;
    let stats = (0..stat_count)
        .map(|_| BatchStats::from_csv_row(field("stat")?))
        .collect::<Result<Vec<_>>>()?;
    if let Some(extra) = fields.next() {
        let line = extra.map(|(k, _)| k.to_string()).unwrap_or_default();
        return Err(Error::checkpoint(
            "state",
            format!("unexpected trailing field `{line}`"),
        ));
    }

    let t = &config.trainer;
    if seed != t.seed.wrapping_add(u64::from(restart)) {
        return Err(Error::checkpoint(
            "seed",
            "does not match config seed plus restart",
        ));
    }
    if next_stream != next_batch * t.batch_size as u64 {
        return Err(Error::checkpoint(
            "next_stream",
            "inconsistent with next_batch",
        ));
    }
    if policy.n() != t.n || policy.m() != t.m {
        return Err(Error::checkpoint(
            "policy",
            "network shape does not match config",
        ));
    }
    let score = |field: &str, text: &str| -> Result<Trajectory> {
        let coloring = EdgeColoring::from_compact(text)
            .map_err(|e| Error::checkpoint(field, e.to_string()))?;
        if coloring.n() != t.n || coloring.m() != t.m || !coloring.is_complete() {
            return Err(Error::checkpoint(field, "coloring does not match config"));
        }
        let reward = reward(&coloring, &t.patterns)?;
        Ok(Trajectory { coloring, reward })
    };
    let best = match best_text.as_str() {
        "none" => None,
        text => Some(score("best", text)?),
    };
    let survivors = survivor_texts
        .iter()
        .map(|s| score("survivor", s))
        .collect::<Result<Vec<_>>>()?;

    let trainer = Trainer {
        config: t.clone(),
        restart,
        policy,
        next_batch,
        schedule: EpsilonSchedule {
            epsilon,
            stagnation,
        },
        best,
        survivors,
        stats,
    };
    Ok((config, trainer))
}

struct Sections<'a> {
    parts: Vec<(&'a str, &'a str)>,
}

impl<'a> Sections<'a> {
    fn split(text: &'a str) -> Result<Self> {
        let body = text.strip_prefix(CHECKPOINT_HEADER).ok_or_else(|| {
            Error::checkpoint("header", format!("expected `{CHECKPOINT_HEADER}`"))
        })?;
        let mut parts = Vec::new();
        let mut rest = body;
        while let Some(start) = rest.find("\n[") {
            let after = &rest[start + 2..];
            let close = after
                .find(']')
                .ok_or_else(|| Error::checkpoint("section", "unterminated section header"))?;
            let name = &after[..close];
            let content_start = &after[close + 1..];
            let end = content_start.find("\n[").unwrap_or(content_start.len());
            parts.push((name, &content_start[..end]));
            rest = &content_start[end..];
        }
        Ok(Self { parts })
    }

    fn take(&mut self, name: &str) -> Result<&'a str> {
        let pos = self
            .parts
            .iter()
            .position(|(n, _)| *n == name)
            .ok_or_else(|| Error::checkpoint(name, "section missing (truncated checkpoint?)"))?;
        Ok(self.parts.remove(pos).1)
    }
}
