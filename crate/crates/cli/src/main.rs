mod commands;
mod table;

use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context as _;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Deserialize;
use serde_json::{json, Value};
use zenolab::{PhysicalConfigF64, Tolerances};

use commands::{Context, Method, SweepGrid, SweepParam};

const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Parser, Debug)]
#[command(name = "zenolab", version, about = "Quasi-levels, poles and survival laws of a well-plus-barrier model")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    common: Common,
}

#[derive(Args, Debug)]
struct Common {
    /// Particle mass.
    #[arg(long, global = true)]
    m: Option<f64>,
    /// Inner well radius.
    #[arg(long, global = true)]
    a: Option<f64>,
    /// Outer barrier radius.
    #[arg(long, global = true)]
    b: Option<f64>,
    /// Barrier height.
    #[arg(long, global = true)]
    v0: Option<f64>,
    /// Flat JSON file with `m`, `a`, `b`, `v0`; flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Level ordinal (1-based).
    #[arg(long, global = true)]
    level: Option<usize>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Output file (default: stdout).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Analyze levels with a·ρ₀ below 0.5 as well.
    #[arg(long, global = true)]
    include_shallow: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Quasi-stationary levels.
    Levels,
    /// Spectral weight near one level: exact, quadratic and quartic forms.
    Spectrum {
        #[arg(long, default_value_t = 401)]
        samples: usize,
        /// Half-width of the window in units of γ.
        #[arg(long, default_value_t = 10.0)]
        window: f64,
    },
    /// Breit-Wigner pole and the two quartic poles per level.
    Poles,
    /// Survival curves on a uniform t̃ grid.
    Survival {
        #[arg(long, value_enum, default_value_t = Method::All)]
        method: Method,
        /// Upper end of the t̃ grid (default: 3·τ₁ in t̃).
        #[arg(long)]
        t_max: Option<f64>,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Crossover between the two-pole law and the exponential.
    Crossover,
    /// τ₂ across barrier widths or heights.
    Sweep {
        #[arg(long, value_enum)]
        sweep_param: SweepParam,
        #[arg(long)]
        sweep_from: Option<f64>,
        #[arg(long)]
        sweep_to: Option<f64>,
        #[arg(long, default_value_t = 11)]
        sweep_steps: usize,
    },
    /// Per-level table of poles, time constants and crossover times.
    Report,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Levels => "levels",
            Command::Spectrum { .. } => "spectrum",
            Command::Poles => "poles",
            Command::Survival { .. } => "survival",
            Command::Crossover => "crossover",
            Command::Sweep { .. } => "sweep",
            Command::Report => "report",
        }
    }

    fn options(&self) -> Value {
        match self {
            Command::Spectrum { samples, window } => json!({"samples": samples, "window": window}),
            Command::Survival { method, t_max, samples } => {
                json!({"method": value_name(method), "t_max": t_max, "samples": samples})
            }
            Command::Sweep { sweep_param, sweep_from, sweep_to, sweep_steps } => json!({
                "sweep_param": value_name(sweep_param),
                "sweep_from": sweep_from,
                "sweep_to": sweep_to,
                "sweep_steps": sweep_steps,
            }),
            _ => json!({}),
        }
    }
}

fn value_name<V: ValueEnum>(v: &V) -> String {
    v.to_possible_value().map(|p| p.get_name().to_string()).unwrap_or_default()
}

/// A failed run with its exit status.
#[derive(Debug)]
pub struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Self { code: 2, message: msg.into() }
    }

    pub fn no_levels(msg: impl Into<String>) -> Self {
        Self { code: 3, message: msg.into() }
    }
}

impl From<zenolab::Error> for Failure {
    fn from(e: zenolab::Error) -> Self {
        let code = if e.is_numerical() { 4 } else { 2 };
        Self { code, message: e.to_string() }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(e: anyhow::Error) -> Self {
        Self { code: 1, message: format!("{e:#}") }
    }
}

#[derive(Deserialize, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    m: Option<f64>,
    a: Option<f64>,
    b: Option<f64>,
    v0: Option<f64>,
}

fn resolve_config(common: &Common) -> Result<PhysicalConfigF64, Failure> {
    let file = match &common.config {
        Some(path) => {
            let text = fs::read_to_string(path)
                .map_err(|e| Failure::invalid(format!("cannot read {}: {e}", path.display())))?;
            serde_json::from_str::<FileConfig>(&text)
                .map_err(|e| Failure::invalid(format!("bad config file {}: {e}", path.display())))?
        }
        None => FileConfig::default(),
    };
    let pick = |flag: Option<f64>, from_file: Option<f64>, name: &str| {
        flag.or(from_file)
            .ok_or_else(|| Failure::invalid(format!("missing parameter {name} (flag --{name} or config file)")))
    };
    let config = PhysicalConfigF64::new(
        pick(common.m, file.m, "m")?,
        pick(common.a, file.a, "a")?,
        pick(common.b, file.b, "b")?,
        pick(common.v0, file.v0, "v0")?,
    );
    config.validate().into_result()?;
    Ok(config)
}

fn run(cli: &Cli) -> Result<(), Failure> {
    let common = &cli.common;
    let config = resolve_config(common)?;
    let tolerances = Tolerances::from_env();
    let ctx = Context::new(config, common.include_shallow, tolerances)?;
    let level = common.level;
    let table = match &cli.command {
        Command::Levels => commands::levels(&ctx)?,
        Command::Spectrum { samples, window } => {
            check_samples(*samples)?;
            commands::spectrum(&ctx, level, *samples, *window)?
        }
        Command::Poles => commands::poles(&ctx, level)?,
        Command::Survival { method, t_max, samples } => {
            check_samples(*samples)?;
            commands::survival(&ctx, level, *method, *t_max, *samples)?
        }
        Command::Crossover => commands::crossover_table(&ctx, level)?,
        Command::Sweep { sweep_param, sweep_from, sweep_to, sweep_steps } => {
            let grid = SweepGrid { param: *sweep_param, from: *sweep_from, to: *sweep_to, steps: *sweep_steps };
            commands::sweep(&ctx, level, &grid)?
        }
        Command::Report => commands::report(&ctx, level)?,
    };

    let mut buf = Vec::new();
    match common.format {
        Format::Csv => table.write_csv(&mut buf, VERSION)?,
        Format::Json => {
            let meta = json!({
                "version": VERSION,
                "subcommand": cli.command.name(),
                "config": ctx.config,
                "derived": ctx.params,
                "level": level,
                "include_shallow": common.include_shallow,
                "options": cli.command.options(),
                "tolerances": ctx.tolerances,
            });
            serde_json::to_writer_pretty(&mut buf, &table.to_json(meta)).context("serializing JSON")?;
            buf.push(b'\n');
        }
    }
    match &common.out {
        Some(path) => fs::write(path, &buf).with_context(|| format!("writing {}", path.display()))?,
        None => std::io::stdout().write_all(&buf).context("writing stdout")?,
    }
    Ok(())
}

fn check_samples(samples: usize) -> Result<(), Failure> {
    if samples < 2 {
        return Err(Failure::invalid("--samples must be at least 2"));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("zenolab: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
