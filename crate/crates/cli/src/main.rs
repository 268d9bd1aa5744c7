use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use mlvc_cli::config::{ExperimentConfig, OutputSection, PdeSection};
use mlvc_cli::{cmd_ml_eval, cmd_pde, cmd_sweep, cmd_verify, CmdResult, Failure, VerifyOptions};

#[derive(Parser)]
#[command(name = "mlvc", version, about = "Mittag-Leffler oscillatory integral experiments")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Mittag-Leffler function evaluations
    Ml {
        #[command(subcommand)]
        cmd: MlCmd,
    },
    /// Sweep an oscillatory integral over a lambda grid described by a config file
    Sweep {
        config: PathBuf,
    },
    /// Run registered verification cases (`all` for the full registry)
    Verify {
        #[arg(required = true)]
        ids: Vec<String>,
        /// Also write a log-log SVG per case
        #[arg(long)]
        svg: bool,
        /// Output directory (MLF_OUT_DIR takes precedence)
        #[arg(long)]
        out: Option<String>,
    },
    /// Dispersive decay of the fractional Schrodinger-type demo
    Pde(PdeArgs),
}

#[derive(Subcommand)]
enum MlCmd {
    /// Evaluate E_{alpha,beta}(z)
    Eval {
        #[arg(long, allow_hyphen_values = true)]
        alpha: f64,
        #[arg(long, allow_hyphen_values = true)]
        beta: f64,
        /// e.g. `0+1i`, `-9.87`, `-2i`
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
}

#[derive(Args)]
struct PdeArgs {
    config: Option<PathBuf>,
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    ell: Option<f64>,
    #[arg(long)]
    mu: Option<f64>,
    #[arg(long)]
    svg: bool,
    #[arg(long)]
    out: Option<String>,
}

fn load(path: &PathBuf) -> Result<ExperimentConfig, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(ExperimentConfig::parse(&text)?)
}

fn pde(args: PdeArgs, out: &mut dyn Write) -> CmdResult {
    let mut cfg = match &args.config {
        Some(p) => load(p)?,
        None => ExperimentConfig::default(),
    };
    let mut sec = cfg.pde.take().unwrap_or_else(|| PdeSection::new(0.5, 0.5, 2.0));
    sec.alpha = args.alpha.unwrap_or(sec.alpha);
    sec.ell = args.ell.unwrap_or(sec.ell);
    sec.mu = args.mu.unwrap_or(sec.mu);
    cfg.pde = Some(sec);
    let output = OutputSection {
        dir: args.out.or(cfg.output.dir.clone()),
        svg: args.svg || cfg.output.svg,
        ..cfg.output.clone()
    };
    cmd_pde(&cfg.validate_pde()?, &output, out)
}

fn run(cli: Cli) -> CmdResult {
    let stdout = io::stdout();
    let mut out = stdout.lock();
    match cli.cmd {
        Cmd::Ml { cmd: MlCmd::Eval { alpha, beta, z } } => cmd_ml_eval(alpha, beta, &z, &mut out),
        Cmd::Sweep { config } => cmd_sweep(&load(&config)?, &mut out),
        Cmd::Verify { ids, svg, out: dir } => {
            let opts = VerifyOptions { dir, svg, ..VerifyOptions::default() };
            cmd_verify(&ids, &opts, &mut out)
        }
        Cmd::Pde(args) => pde(args, &mut out),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {f}");
            ExitCode::from(f.code)
        }
    }
}
