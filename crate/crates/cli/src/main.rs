//! Scenario runner: configures grids and frame curves, executes the
//! verification suites, and writes machine-readable results.
//!
//! Exit status: 0 when every check passes, 1 when any check fails, 2 for
//! configuration or usage errors.

mod config;
mod report;
mod scenarios;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand};

use config::{resolve, Scenario, ScenarioConfig};
use report::{sci12, ArtifactWriter, RunReport};

#[derive(Parser)]
#[command(
    name = "framebundle",
    about = "Verification scenarios for quantum evolution across Galilean frames"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Execute one scenario and write its report and CSV artifacts.
    Run {
        /// Scenario name (see `list-scenarios`).
        #[arg(long)]
        scenario: Option<String>,
        /// JSON configuration document.
        #[arg(long)]
        config: Option<PathBuf>,
        /// key=value overrides applied on top of the config file.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
        /// Output directory for report.json and CSV files.
        #[arg(long, default_value = "out")]
        out: PathBuf,
    },
    /// List the available scenarios.
    ListScenarios,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match cli.command {
        Command::ListScenarios => {
            for scenario in Scenario::ALL {
                println!("{:22} {}", scenario.name(), scenario.describe());
            }
            ExitCode::SUCCESS
        }
        Command::Run {
            scenario,
            config,
            overrides,
            out,
        } => match run(scenario, config, overrides, out) {
            Ok(true) => ExitCode::SUCCESS,
            Ok(false) => ExitCode::from(1),
            Err(e) => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}

fn run(
    scenario: Option<String>,
    config_path: Option<PathBuf>,
    overrides: Vec<String>,
    out: PathBuf,
) -> anyhow::Result<bool> {
    let mut raw = match &config_path {
        Some(path) => ScenarioConfig::load(path)?,
        None => ScenarioConfig::default(),
    };
    if let Some(name) = scenario {
        raw.scenario = Some(name.parse()?);
    }
    for entry in &overrides {
        raw.apply_override(entry)?;
    }
    let cfg = resolve(&raw)?;

    let started = Instant::now();
    let mut report = RunReport::new(cfg.clone());
    let artifacts = ArtifactWriter::new(&out)?;
    scenarios::run_scenario(&cfg, &mut report, &artifacts)?;
    report.finish(started.elapsed().as_secs_f64());

    let report_path = artifacts.write_report(&report)?;
    for check in &report.checks {
        let op = match check.comparison {
            report::Comparison::AtMost => "<=",
            report::Comparison::AtLeast => ">=",
            report::Comparison::Within => "within",
        };
        println!(
            "[{}] {}: {} {} {}",
            if check.pass { "pass" } else { "FAIL" },
            check.name,
            sci12(check.measured),
            op,
            sci12(check.tolerance),
        );
    }
    println!(
        "{}: {} ({} checks, {:.2} s) — report at {}",
        cfg.scenario.name(),
        if report.pass { "PASS" } else { "FAIL" },
        report.checks.len(),
        report.wall_time_s,
        report_path.display()
    );
    Ok(report.pass)
}
