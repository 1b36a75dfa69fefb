mod commands;
mod input;
mod render;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{Context, Result};
use clap::{error::ErrorKind, Parser, Subcommand};
use serde_json::json;
use sumset_core::khovanskii::DEFAULT_SEED;

use commands::{Limits, Outcome};

const EXIT_USAGE: u8 = 1;
const EXIT_VIOLATION: u8 = 2;

#[derive(Debug, Parser)]
#[command(name = "sumset-geometry", version, about = "Exact geometry of sumsets of lattice point sets")]
struct Cli {
    /// Input document; standard input when absent or `-`.
    #[arg(short, long, global = true)]
    input: Option<PathBuf>,

    /// Seed for certificate replay.
    #[arg(long, global = true, default_value_t = DEFAULT_SEED)]
    seed: u64,

    /// Replay trials for the constant C.
    #[arg(long, global = true, default_value_t = 1000,
          value_parser = clap::value_parser!(u64).range(1..=1_000_000))]
    trials: u64,

    /// Largest |A| accepted for zonotope enumeration.
    #[arg(long, global = true, default_value_t = 14,
          value_parser = clap::value_parser!(u64).range(1..=20))]
    max_m: u64,

    /// Largest coordinate magnitude accepted in the input.
    #[arg(long, global = true, default_value_t = 64,
          value_parser = clap::value_parser!(i64).range(1..=1 << 20))]
    max_coord: i64,

    /// Largest h any command may reach.
    #[arg(long, global = true, default_value_t = 5000,
          value_parser = clap::value_parser!(u64).range(1..=100_000))]
    h_limit: u64,

    /// Bounding-box cell budget for sumset enumeration.
    #[arg(long, global = true, default_value_t = 1 << 30,
          value_parser = clap::value_parser!(u64).range(1..=1 << 34))]
    max_cells: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Vertices, facets and volume of conv(A).
    Hull,
    /// The h-fold sumset hA.
    Sumset {
        #[arg(long)]
        h: u64,
    },
    /// |hA| for h = 0..max-h and its eventual polynomial.
    Growth {
        #[arg(long)]
        max_h: u64,
        /// Writes columns h, count, poly_value.
        #[arg(long)]
        emit_csv: Option<PathBuf>,
    },
    /// Khovanskii's constant C with its certificate.
    ConstantC,
    /// The depth certificate rho.
    Rho,
    /// Checks that the lattice points of Δ(h, C) lie in hA.
    VerifyLemma2 {
        #[arg(long)]
        h_from: u64,
        #[arg(long)]
        h_to: u64,
    },
    /// Checks that lattice points deeper than rho in hΔ lie in hA.
    VerifyTheorem {
        #[arg(long)]
        h_from: u64,
        #[arg(long)]
        h_to: u64,
    },
    /// Ehrhart polynomial of conv(A) with coefficient checks.
    Ehrhart {
        #[arg(long)]
        verify_to: Option<u64>,
    },
    /// Full pipeline in one document.
    Report,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Hull => "hull",
            Command::Sumset { .. } => "sumset",
            Command::Growth { .. } => "growth",
            Command::ConstantC => "constant-c",
            Command::Rho => "rho",
            Command::VerifyLemma2 { .. } => "verify-lemma2",
            Command::VerifyTheorem { .. } => "verify-theorem",
            Command::Ehrhart { .. } => "ehrhart",
            Command::Report => "report",
        }
    }

    fn params(&self) -> serde_json::Value {
        match self {
            Command::Sumset { h } => json!({ "h": h }),
            Command::Growth { max_h, emit_csv } => json!({ "max_h": max_h, "emit_csv": emit_csv }),
            Command::VerifyLemma2 { h_from, h_to } | Command::VerifyTheorem { h_from, h_to } => {
                json!({ "h_from": h_from, "h_to": h_to })
            }
            Command::Ehrhart { verify_to } => json!({ "verify_to": verify_to }),
            _ => json!({}),
        }
    }
}

fn configure_threads() -> Result<()> {
    if let Ok(v) = std::env::var("SUMSET_GEOMETRY_THREADS") {
        let n: usize = v.trim().parse().context("SUMSET_GEOMETRY_THREADS must be a positive integer")?;
        if n == 0 {
            anyhow::bail!("SUMSET_GEOMETRY_THREADS must be a positive integer");
        }
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<u8> {
    configure_threads()?;
    let text = input::read_source(cli.input.as_deref())?;
    let parsed = input::parse_input(&text, cli.max_coord)?;
    if !parsed.duplicates.is_empty() {
        eprintln!("warning: dropped duplicate points {:?}", parsed.duplicates);
    }
    let limits = Limits {
        seed: cli.seed,
        trials: cli.trials,
        max_m: cli.max_m as usize,
        h_limit: cli.h_limit,
        max_cells: cli.max_cells,
    };
    let a = &parsed.set;
    let start = Instant::now();
    let Outcome { result, violation } = match &cli.command {
        Command::Hull => commands::hull(a)?,
        Command::Sumset { h } => commands::sumset(a, *h, &limits)?,
        Command::Growth { max_h, emit_csv } => commands::growth(a, *max_h, emit_csv.as_deref(), &limits)?,
        Command::ConstantC => commands::constant_c(a, &limits)?,
        Command::Rho => commands::rho(a, &limits)?,
        Command::VerifyLemma2 { h_from, h_to } => commands::verify_lemma2(a, *h_from, *h_to, &limits)?,
        Command::VerifyTheorem { h_from, h_to } => commands::verify_theorem(a, *h_from, *h_to, &limits)?,
        Command::Ehrhart { verify_to } => commands::ehrhart(a, *verify_to, &limits)?,
        Command::Report => commands::report(a, &limits)?,
    };
    let elapsed = start.elapsed();
    let doc = json!({
        "command": cli.command.name(),
        "input": parsed.spec,
        "params": {
            "command": cli.command.params(),
            "seed": cli.seed,
            "trials": cli.trials,
            "max_m": cli.max_m,
            "max_coord": cli.max_coord,
            "h_limit": cli.h_limit,
            "max_cells": cli.max_cells,
        },
        "result": result,
        "status": if violation { "violation" } else { "pass" },
        "timing": { "elapsed_ms": elapsed.as_millis() as u64 },
        "version": env!("CARGO_PKG_VERSION"),
    });
    println!("{}", serde_json::to_string_pretty(&doc)?);
    Ok(if violation { EXIT_VIOLATION } else { 0 })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE),
            };
        }
    };
    match run(&cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
