use std::fs::{File, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

use ramsey_cema::checkpoint::{read_checkpoint, write_checkpoint};
use ramsey_cema::config::{ConfigMap, RunConfig};
use ramsey_cema::trainer::{BatchStats, RunStatus, Trainer, STATS_HEADER};

use crate::{EXIT_EXHAUSTED, EXIT_OK};

/// Trailing `--key value` (or `--key=value`) arguments. `--out` and
/// `--workers` are accepted here as well so their position does not matter.
#[derive(Debug, Default)]
pub struct Overrides {
    pub pairs: Vec<(String, String)>,
    pub out: Option<PathBuf>,
    pub workers: Option<usize>,
}

impl Overrides {
    pub fn parse(args: &[String]) -> Result<Self, String> {
        let mut out = Overrides::default();
        let mut it = args.iter();
        while let Some(arg) = it.next() {
            let flag = arg.strip_prefix("--").ok_or_else(|| {
                format!("unexpected argument `{arg}`; overrides look like `--key value`")
            })?;
            let (key, value) = match flag.split_once('=') {
                Some((k, v)) => (k.to_string(), v.to_string()),
                None => {
                    let v = it
                        .next()
                        .ok_or_else(|| format!("`--{flag}` needs a value"))?;
                    (flag.to_string(), v.clone())
                }
            };
            let key = key.replace('-', "_");
            match key.as_str() {
                "out" => out.out = Some(PathBuf::from(value)),
                "workers" => {
                    out.workers = Some(
                        value
                            .parse()
                            .map_err(|_| format!("--workers: cannot parse `{value}`"))?,
                    )
                }
                _ => out.pairs.push((key, value)),
            }
        }
        Ok(out)
    }
}

struct Outputs {
    cert: PathBuf,
    stats: PathBuf,
    checkpoint: PathBuf,
}

impl Outputs {
    fn new(prefix: &Path) -> Self {
        let with = |ext: &str| {
            let mut s = prefix.as_os_str().to_owned();
            s.push(ext);
            PathBuf::from(s)
        };
        Outputs {
            cert: with(".cert"),
            stats: with(".stats.csv"),
            checkpoint: with(".ckpt"),
        }
    }
}

fn io_err(path: &Path, e: std::io::Error) -> String {
    format!("{}: {e}", path.display())
}

pub fn search(
    config_path: &Path,
    out: Option<PathBuf>,
    overrides: &[(String, String)],
) -> Result<u8, String> {
    let text = std::fs::read_to_string(config_path).map_err(|e| io_err(config_path, e))?;
    let mut map = ConfigMap::parse(&text).map_err(|e| e.to_string())?;
    for (k, v) in overrides {
        map.set(k, v).map_err(|e| e.to_string())?;
    }
    let config = RunConfig::from_map(&map).map_err(|e| e.to_string())?;
    let outputs = Outputs::new(&out.unwrap_or_else(|| config_path.with_extension("")));
    let trainer = Trainer::new(config.trainer.clone()).map_err(|e| e.to_string())?;
    let mut log = File::create(&outputs.stats).map_err(|e| io_err(&outputs.stats, e))?;
    writeln!(log, "{STATS_HEADER}").map_err(|e| io_err(&outputs.stats, e))?;
    drive(config, trainer, &outputs, log)
}

/// Keys a resume may change without breaking reproducibility.
const RESUME_KEYS: &[&str] = &["max_batches", "restarts", "checkpoint_every"];

pub fn resume(
    checkpoint: &Path,
    out: Option<PathBuf>,
    overrides: &[(String, String)],
) -> Result<u8, String> {
    let text = std::fs::read_to_string(checkpoint).map_err(|e| io_err(checkpoint, e))?;
    let (mut config, mut trainer) = read_checkpoint(&text).map_err(|e| e.to_string())?;
    for (k, v) in overrides {
        if !RESUME_KEYS.contains(&k.as_str()) {
            return Err(format!(
                "config key `{k}`: cannot be changed on resume (allowed: {})",
                RESUME_KEYS.join(", ")
            ));
        }
        let parse_err = || format!("config key `{k}`: cannot parse `{v}`");
        match k.as_str() {
            "max_batches" => {
                let b = v.parse().map_err(|_| parse_err())?;
                config.trainer.max_batches = b;
                trainer.set_max_batches(b);
            }
            "restarts" => config.restarts = v.parse().map_err(|_| parse_err())?,
            _ => config.checkpoint_every = v.parse().map_err(|_| parse_err())?,
        }
    }
    let outputs = Outputs::new(&out.unwrap_or_else(|| checkpoint.with_extension("")));
    let log = reopen_log(&outputs.stats, &trainer)?;
    drive(config, trainer, &outputs, log)
}

/// Rewrites the statistics log so it ends exactly where the checkpoint does:
/// rows of earlier restarts are kept, rows of the current restart come from
/// the checkpoint itself.
fn reopen_log(path: &Path, trainer: &Trainer) -> Result<File, String> {
    let mut kept = Vec::new();
    if let Ok(f) = File::open(path) {
        for line in BufReader::new(f).lines() {
            let line = line.map_err(|e| io_err(path, e))?;
            if line == STATS_HEADER || line.trim().is_empty() {
                continue;
            }
            let row =
                BatchStats::from_csv_row(&line).map_err(|e| format!("{}: {e}", path.display()))?;
            if row.restart < trainer.restart() {
                kept.push(line);
            }
        }
    }
    let mut log = File::create(path).map_err(|e| io_err(path, e))?;
    let mut body = format!("{STATS_HEADER}\n");
    for line in kept {
        body.push_str(&line);
        body.push('\n');
    }
    for row in trainer.stats() {
        body.push_str(&row.csv_row());
        body.push('\n');
    }
    log.write_all(body.as_bytes())
        .map_err(|e| io_err(path, e))?;
    drop(log);
    OpenOptions::new()
        .append(true)
        .open(path)
        .map_err(|e| io_err(path, e))
}

fn save_checkpoint(config: &RunConfig, trainer: &Trainer, path: &Path) -> Result<(), String> {
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(".tmp");
    let tmp = PathBuf::from(tmp);
    std::fs::write(&tmp, write_checkpoint(config, trainer)).map_err(|e| io_err(&tmp, e))?;
    std::fs::rename(&tmp, path).map_err(|e| io_err(path, e))
}

/// Runs the current attempt to completion, then any remaining restarts.
fn drive(
    config: RunConfig,
    mut trainer: Trainer,
    outputs: &Outputs,
    mut log: File,
) -> Result<u8, String> {
    loop {
        while !trainer.is_finished() {
            let row = trainer.step().map_err(|e| e.to_string())?;
            writeln!(log, "{}", row.csv_row()).map_err(|e| io_err(&outputs.stats, e))?;
            if config.checkpoint_every > 0
                && trainer.next_batch().is_multiple_of(config.checkpoint_every)
            {
                save_checkpoint(&config, &trainer, &outputs.checkpoint)?;
            }
        }
        save_checkpoint(&config, &trainer, &outputs.checkpoint)?;
        let outcome = trainer.outcome().map_err(|e| e.to_string())?;
        if let (RunStatus::Found, Some(cert)) = (outcome.status, &outcome.certificate) {
            let text = cert.to_text().map_err(|e| e.to_string())?;
            std::fs::write(&outputs.cert, text).map_err(|e| io_err(&outputs.cert, e))?;
            if let Some(bound) = &cert.implied_bound {
                println!("{bound}");
            }
            println!("certificate: {}", outputs.cert.display());
            return Ok(EXIT_OK);
        }
        let best = outcome
            .best
            .as_ref()
            .map_or_else(|| "none".to_string(), |b| b.total().to_string());
        eprintln!(
            "restart {}: budget of {} batches exhausted, best reward {best}",
            trainer.restart(),
            config.trainer.max_batches
        );
        if trainer.restart() >= config.restarts {
            println!("no certificate found (best reward {best})");
            return Ok(EXIT_EXHAUSTED);
        }
        trainer = Trainer::with_restart(config.trainer.clone(), trainer.restart() + 1)
            .map_err(|e| e.to_string())?;
    }
}
