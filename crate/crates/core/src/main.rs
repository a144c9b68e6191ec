use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use nanomech_cat::config::{ExperimentConfig, Mode, RawConfig};
use nanomech_cat::error::{Error, Result};
use nanomech_cat::run::{run, RunReport};

#[derive(Parser)]
#[command(name = "nanomech-cat", version, about = "Coherent-state synthesis in a qubit-coupled nanomechanical resonator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Pulse-pair walk heralded by ground detections
    Walk(Common),
    /// Two-component cat state
    Cat(Common),
    /// Walk with per-pulse dephasing
    Decohere(Common),
    /// Compare the closed form against the Fock-space integrator
    OracleCheck(Common),
    /// Table of coherent labels
    AlphaTable(Common),
}

#[derive(Args)]
struct Common {
    /// Flat key = value config file
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Override or add a config entry, e.g. --set n=5
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    /// Output directory
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long)]
    format: Option<String>,
    /// xmin,xmax,pmin,pmax,nx,np
    #[arg(long, allow_hyphen_values = true)]
    grid: Option<String>,
    /// Reserved; every pipeline is deterministic
    #[arg(long)]
    seed: Option<u64>,
}

fn build_config(mode: Mode, c: &Common) -> Result<ExperimentConfig> {
    let mut raw = match &c.config {
        Some(path) => RawConfig::load(path)?,
        None => RawConfig::default(),
    };
    match raw.get("mode") {
        Some(m) if m != mode.name() => {
            return Err(Error::Config(format!("config mode {m:?} contradicts subcommand {mode}")));
        }
        Some(_) => {}
        None => raw.set("mode", mode.name())?,
    }
    for kv in &c.set {
        let (k, v) = kv.split_once('=').ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got {kv:?}")))?;
        if k.trim() == "mode" && v.trim() != mode.name() {
            return Err(Error::Config(format!("--set mode={v} contradicts subcommand {mode}")));
        }
        raw.set(k.trim(), v.trim())?;
    }
    if let Some(out) = &c.out {
        raw.set("output_dir", &out.to_string_lossy())?;
    }
    if let Some(f) = &c.format {
        raw.set("format", f)?;
    }
    if let Some(g) = &c.grid {
        raw.set("grid", g)?;
    }
    if let Some(s) = c.seed {
        raw.set("seed", &s.to_string())?;
    }
    ExperimentConfig::from_raw(&raw)
}

fn print_report(report: &RunReport) {
    for case in &report.cases {
        println!("[{}]", case.label);
        for line in &case.summary {
            println!("  {line}");
        }
        for (k, v) in &case.diagnostics {
            println!("  {k} = {v:.9e}");
        }
    }
    for out in &report.outputs {
        println!("wrote {}  sha256 {}", out.path, out.sha256);
    }
    for w in &report.warnings {
        eprintln!("warning: {w}");
    }
    println!("wall time {:.3} s", report.wall_time.as_secs_f64());
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (mode, common) = match &cli.command {
        Command::Walk(c) => (Mode::Walk, c),
        Command::Cat(c) => (Mode::Cat, c),
        Command::Decohere(c) => (Mode::Decohere, c),
        Command::OracleCheck(c) => (Mode::OracleCheck, c),
        Command::AlphaTable(c) => (Mode::AlphaTable, c),
    };
    match build_config(mode, common).and_then(|cfg| run(&cfg)) {
        Ok(report) => {
            print_report(&report);
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
