use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

mod inspect;
mod run;

/// Exit status contract.
pub const EXIT_OK: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_EXHAUSTED: u8 = 2;
pub const EXIT_NOT_CRITICAL: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "ramsey-cema",
    version,
    about = "Cross-entropy search for critical edge-colorings of complete graphs"
)]
struct Cli {
    /// Worker threads for rollouts and counting (default: RAMSEY_CEMA_WORKERS, then all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run a search from a config file. Any config key can be overridden as `--key value`.
    Search {
        config: PathBuf,
        /// Output prefix for PREFIX.cert, PREFIX.stats.csv and PREFIX.ckpt (default: config path without extension).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Config overrides, e.g. `--batch_size 400 --seed 7`.
        #[arg(
            trailing_var_arg = true,
            allow_hyphen_values = true,
            value_name = "OVERRIDES"
        )]
        overrides: Vec<String>,
    },
    /// Continue a search from a checkpoint. Only max_batches, restarts and checkpoint_every may be overridden.
    Resume {
        checkpoint: PathBuf,
        /// Output prefix (default: checkpoint path without extension).
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(
            trailing_var_arg = true,
            allow_hyphen_values = true,
            value_name = "OVERRIDES"
        )]
        overrides: Vec<String>,
    },
    /// Check that a coloring has no monochromatic copy of its color's pattern.
    Verify {
        /// Certificate file or bare matrix.
        #[arg(required_unless_present = "fixture", conflicts_with = "fixture")]
        path: Option<PathBuf>,
        /// One of the bundled colorings: W5W7, K25K35, B3B6, B4B5.
        #[arg(long)]
        fixture: Option<String>,
        /// Pattern per color, in color order. Required for a bare matrix.
        #[arg(long = "pattern", value_name = "SPEC")]
        patterns: Vec<String>,
        /// Also check every single-vertex deletion.
        #[arg(long)]
        closure: bool,
    },
    /// Print the number of copies of a pattern in one color class.
    Count {
        /// Certificate file or bare matrix.
        path: PathBuf,
        #[arg(long, value_name = "SPEC")]
        pattern: String,
        #[arg(long)]
        color: u8,
        /// Number of colors in the matrix.
        #[arg(long, default_value_t = 2)]
        colors: usize,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let code = match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    };
    ExitCode::from(code)
}

fn dispatch(cli: Cli) -> Result<u8, String> {
    match cli.command {
        Command::Search {
            config,
            out,
            overrides,
        } => {
            let extra = run::Overrides::parse(&overrides)?;
            init_workers(extra.workers.or(cli.workers))?;
            run::search(&config, out.or(extra.out), &extra.pairs)
        }
        Command::Resume {
            checkpoint,
            out,
            overrides,
        } => {
            let extra = run::Overrides::parse(&overrides)?;
            init_workers(extra.workers.or(cli.workers))?;
            run::resume(&checkpoint, out.or(extra.out), &extra.pairs)
        }
        Command::Verify {
            path,
            fixture,
            patterns,
            closure,
        } => {
            init_workers(cli.workers)?;
            inspect::verify(path.as_deref(), fixture.as_deref(), &patterns, closure)
        }
        Command::Count {
            path,
            pattern,
            color,
            colors,
        } => {
            init_workers(cli.workers)?;
            inspect::count(&path, &pattern, color, colors)
        }
    }
}

fn init_workers(flag: Option<usize>) -> Result<(), String> {
    let workers = match flag {
        Some(w) => Some(w),
        None => match std::env::var("RAMSEY_CEMA_WORKERS") {
            Ok(v) if !v.trim().is_empty() => Some(
                v.trim()
                    .parse()
                    .map_err(|_| format!("RAMSEY_CEMA_WORKERS: cannot parse `{v}`"))?,
            ),
            _ => None,
        },
    };
    if let Some(w) = workers {
        if w == 0 {
            return Err("--workers must be at least 1".into());
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(w)
            .build_global()
            .map_err(|e| e.to_string())?;
    }
    Ok(())
}
