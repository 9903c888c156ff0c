use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use tdnls::field::Axis;
use tdnls::scenario::{
    builtin, builtin_summaries, run, sweep, validate, ScenarioConfig, SweepGrid, SweepParam,
};

#[derive(Parser, Debug)]
#[command(name = "tdnls", version, about = "Schrödinger flows in time-dependent quadratic traps")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Run one scenario and write trace.csv, diagnostics.json and snapshots.
    Run {
        #[command(flatten)]
        source: Source,
        /// Output directory (default: runs/<name>).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run a template over a parameter grid and write sweep.csv.
    Sweep {
        #[command(flatten)]
        source: Source,
        /// Swept key with its values, `key=v1,v2,...`; repeatable.
        #[arg(long = "param", value_name = "KEY=V1,V2,...")]
        params: Vec<String>,
        /// Pair the parameter lists element-wise instead of taking their product.
        #[arg(long)]
        zip: bool,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        /// Output directory (default: runs/<name>-sweep).
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Static checks only; prints the report as JSON.
    Validate {
        #[command(flatten)]
        source: Source,
        /// Also print the resolved config.
        #[arg(long)]
        emit_config: bool,
    },
    /// List the builtin scenarios.
    ListScenarios {
        /// Print the full configs as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Args, Debug)]
struct Source {
    /// Scenario config (JSON).
    #[arg(long, conflicts_with = "scenario")]
    config: Option<PathBuf>,
    /// Builtin scenario name.
    #[arg(long)]
    scenario: Option<String>,
    /// `key=value` on a dotted path into the config; repeatable.
    #[arg(long = "override", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// Time step.
    #[arg(long)]
    dt: Option<f64>,
    /// Grid as `NxL` for every axis, or one `NxL` per axis separated by commas.
    #[arg(long)]
    grid: Option<String>,
}

impl Source {
    fn load(&self) -> Result<ScenarioConfig> {
        let mut cfg = match (&self.config, &self.scenario) {
            (Some(p), _) => ScenarioConfig::load(p)?,
            (None, Some(n)) => builtin(n).with_context(|| format!("no builtin scenario '{n}' (see list-scenarios)"))?,
            (None, None) => bail!("give --config PATH or --scenario NAME"),
        };
        let pairs = self
            .overrides
            .iter()
            .map(|o| o.split_once('=').with_context(|| format!("override '{o}' is not key=value")))
            .collect::<Result<Vec<_>>>()?;
        cfg = cfg.with_overrides(pairs)?;
        if let Some(dt) = self.dt {
            cfg.time.dt = dt;
        }
        if let Some(g) = &self.grid {
            cfg.grid = parse_grid(g, cfg.d)?;
        }
        Ok(cfg)
    }
}

fn parse_grid(spec: &str, d: usize) -> Result<Vec<Axis>> {
    let axes = spec
        .split(',')
        .map(|a| {
            let (n, l) = a.trim().split_once(['x', 'X']).with_context(|| format!("grid '{a}' is not NxL"))?;
            Ok(Axis { n: n.parse().with_context(|| format!("grid N '{n}'"))?, half_width: l.parse().with_context(|| format!("grid L '{l}'"))? })
        })
        .collect::<Result<Vec<_>>>()?;
    match axes.len() {
        1 => Ok(vec![axes[0]; d]),
        n if n == d => Ok(axes),
        n => bail!("grid lists {n} axes for d = {d}"),
    }
}

fn default_out(name: &str, suffix: &str) -> PathBuf {
    Path::new("runs").join(format!("{name}{suffix}"))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3e}")).unwrap_or_else(|| "-".into())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match dispatch(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn dispatch(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Run { source, out } => {
            let cfg = source.load()?;
            let out = out.unwrap_or_else(|| default_out(&cfg.name, ""));
            let report = run(&cfg, &out)?;
            println!("{}: {} after {} steps, t = {}", report.name, report.status.label(), report.steps, report.t_final);
            if let tdnls::scenario::RunStatus::Aborted { reason, .. } = &report.status {
                println!("  abort: {reason}");
            }
            for c in &report.checks {
                let verdict = match c.passed {
                    Some(true) => "pass",
                    Some(false) => "FAIL",
                    None => "info",
                };
                println!("  {verdict:4} {:<24} value {:>10}  bound {:>10}", c.check, fmt_opt(c.value), fmt_opt(c.threshold));
                if let Some(e) = &c.error {
                    println!("       {e}");
                }
            }
            println!("  output: {}", out.display());
            Ok(if report.passed { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Sweep { source, params, zip, jobs, out } => {
            let cfg = source.load()?;
            let params = params.iter().map(|p| SweepParam::parse(p)).collect::<tdnls::Result<Vec<_>>>()?;
            let out = out.unwrap_or_else(|| default_out(&cfg.name, "-sweep"));
            let table = sweep(&cfg, &SweepGrid::new(params, zip), jobs, Some(&out))?;
            println!("{} points, {} failed; table: {}", table.rows.len(), table.failures(), out.join("sweep.csv").display());
            Ok(if table.failures() == 0 { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Validate { source, emit_config } => {
            let cfg = source.load()?;
            let report = validate(&cfg);
            let mut doc = serde_json::json!({ "name": cfg.name, "valid": report.is_valid(), "report": report });
            if emit_config {
                doc["config"] = cfg.to_value()?;
            }
            println!("{}", serde_json::to_string_pretty(&doc)?);
            Ok(if report.is_valid() { ExitCode::SUCCESS } else { ExitCode::from(2) })
        }
        Command::ListScenarios { json } => {
            if json {
                let all: Vec<_> = builtin_summaries()
                    .iter()
                    .map(|(n, _)| builtin(n).expect("registered").to_value())
                    .collect::<tdnls::Result<_>>()?;
                println!("{}", serde_json::to_string_pretty(&all)?);
            } else {
                for (name, desc) in builtin_summaries() {
                    println!("{name:<22} {desc}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}
