use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use filex_core::report::{
    format_float, format_table, parse_experiment_config, parse_run_config, read_records, render_svg,
    write_records, KeyValues, PlotSpec,
};
use filex_core::{canonical_experiment, correlation_table, run, run_experiment, Error, Mode, Param, Preset, RandomStream, RunRecord};

#[derive(Parser)]
#[command(name = "filex", version, about = "Finite-lexicon self-reinforcing process simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the process once and print the entropy of the result.
    Run {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's `mode`.
        #[arg(long)]
        mode: Option<Mode>,
        /// Overrides the config's `seed`.
        #[arg(long)]
        seed: Option<u64>,
        /// Also print the normalized distribution.
        #[arg(long)]
        show_distribution: bool,
    },
    /// Run a hyperparameter sweep and write one CSV row per run.
    Sweep {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, default_value = "fast")]
        mode: Mode,
        #[arg(long, default_value = "full")]
        preset: Preset,
        /// Worker threads; 0 uses one per core.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        /// Overrides the config's `master_seed`.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Print Kendall correlations between swept value and entropy.
    Table {
        #[arg(required = true)]
        csv: Vec<PathBuf>,
    },
    /// Plot entropy against the swept value as SVG.
    Plot {
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Optional keys: `x_label`, `log_x`, `s`.
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_usage() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}

fn dispatch(command: Command) -> Result<ExitCode, Error> {
    match command {
        Command::Run { config, mode, seed, show_distribution } => {
            let mut cfg = parse_run_config(&KeyValues::load(&config)?)?;
            if let Some(m) = mode {
                cfg.mode = m;
            }
            if let Some(s) = seed {
                cfg.seed = s;
            }
            let mut rng = RandomStream::from_seed(cfg.seed);
            let dist = run(&cfg.params, &mut rng, cfg.mode)?;
            println!("entropy_bits: {:.6}", dist.entropy_bits());
            if show_distribution || cfg.show_distribution {
                for (i, p) in dist.probs().iter().enumerate() {
                    println!("{i} {}", format_float(*p));
                }
            }
        }
        Command::Sweep { config, out, mode, preset, workers, seed } => {
            let mut spec = parse_experiment_config(&KeyValues::load(&config)?)?.with_preset(preset);
            if let Some(s) = seed {
                spec.master_seed = s;
            }
            let records = run_experiment(&spec, mode, workers)?;
            write_records(&out, &records)?;
            eprintln!("wrote {} records to {}", records.len(), out.display());
        }
        Command::Table { csv } => {
            let mut records = Vec::new();
            for path in &csv {
                records.extend(read_records(path)?);
            }
            let rows = correlation_table(&records);
            print!("{}", format_table(&rows));
            if rows.iter().any(|r| r.result.is_err()) {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Plot { csv, out, config } => {
            let records = read_records(&csv)?;
            let kv = match &config {
                Some(path) => KeyValues::load(path)?,
                None => KeyValues::default(),
            };
            let spec = plot_spec(&records, &kv)?;
            let svg = render_svg(&records, &spec)?;
            std::fs::write(&out, svg).map_err(|e| io_error(&out, e))?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn io_error(path: &Path, source: std::io::Error) -> Error {
    Error::Io { path: path.to_path_buf(), source }
}

/// Plot settings from the optional config, falling back to what the
/// records imply: the lexicon size comes from an S sweep's largest value or
/// from the canonical experiment of the same name.
fn plot_spec(records: &[RunRecord], kv: &KeyValues) -> Result<PlotSpec, Error> {
    kv.reject_unknown(&["x_label", "log_x", "s"])?;
    let first = records
        .first()
        .ok_or_else(|| Error::InvalidInput("no records to plot".into()))?;
    let x_label = kv
        .get("x_label")
        .map(str::to_string)
        .unwrap_or_else(|| first.param.label(false).to_string());
    let log_x = match kv.get("log_x") {
        Some(v) => v
            .parse()
            .map_err(|_| Error::Config(format!("invalid value for key log_x: `{v}`")))?,
        None => true,
    };
    let s = match kv.get("s") {
        Some(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&s| s > 0)
            .ok_or_else(|| Error::Config(format!("invalid value for key s: `{v}`")))?,
        None if first.param == Param::S => {
            records.iter().map(|r| r.param_value).fold(1.0, f64::max) as usize
        }
        None => canonical_experiment(&first.experiment, 0)
            .map(|e| e.fixed.s)
            .ok_or_else(|| Error::Config("missing key: s".into()))?,
    };
    // a one-word lexicon has zero entropy; keep a visible y range
    Ok(PlotSpec { x_label, log_x, y_max: (s as f64).log2().max(1.0) })
}
