use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use hybeam::{ScenarioConfig, StructureChoice, SweepResult};

mod commands;

use commands::SweepParam;

/// Full- vs partial-connection hybrid beamforming: figure data, Monte Carlo
/// summaries, sweeps and regime decisions.
#[derive(Debug, Parser)]
#[command(name = "hybeam", version)]
struct Cli {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Seed recorded in the CSV header and used for random draws.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum StructureArg {
    Full,
    Partial,
    Both,
}

impl From<StructureArg> for StructureChoice {
    fn from(s: StructureArg) -> Self {
        match s {
            StructureArg::Full => StructureChoice::Full,
            StructureArg::Partial => StructureChoice::Partial,
            StructureArg::Both => StructureChoice::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ParamArg {
    Kappa,
    Spread,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ratio vs kappa for K = l_bs = 2 and M in {4, 8, 16, 32}.
    Fig2,
    /// Exact vs simplified ratio for K = l_bs in {4, 8, 16, 32}.
    Fig3,
    /// Exact vs full-multiplexing ratio against eta_F.
    Fig4,
    /// Exact vs loading-ratio approximation against A, l_bs = 16.
    Fig5,
    /// Monte Carlo gains and rates for a scenario file.
    Simulate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        n: u64,
        #[arg(long, value_enum, default_value = "both")]
        structure: StructureArg,
    },
    /// Regime decision and RF-chain threshold.
    Decide {
        #[arg(long)]
        m: usize,
        #[arg(long = "l-bs")]
        l_bs: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.5)]
        d: f64,
        #[arg(long, allow_negative_numbers = true)]
        kappa: f64,
    },
    /// Closed-form metrics (and simulated rates when --n > 0) over a parameter range.
    Sweep {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long, value_enum)]
        param: ParamArg,
        /// from:to:step, inclusive.
        #[arg(long)]
        range: String,
        #[arg(long, default_value_t = 0)]
        n: u64,
        #[arg(long, value_enum, default_value = "both")]
        structure: StructureArg,
    },
}

fn load_scenario(path: &Path) -> Result<ScenarioConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let config = ScenarioConfig::from_toml_str(&text).with_context(|| format!("{}", path.display()))?;
    config.validate().with_context(|| format!("{}", path.display()))?;
    Ok(config)
}

fn emit(out: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<()> {
    match out {
        Some(path) => {
            let mut file = io::BufWriter::new(fs::File::create(path).with_context(|| format!("creating {}", path.display()))?);
            write(&mut file)?;
            file.flush()?;
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock)?;
        }
    }
    Ok(())
}

fn emit_csv(out: Option<&Path>, result: &SweepResult) -> Result<()> {
    emit(out, |w| result.write_csv(w))
}

fn execute(cli: Cli) -> Result<()> {
    let out = cli.out.as_deref();
    match cli.command {
        Command::Fig2 => emit_csv(out, &commands::fig2(cli.seed)?),
        Command::Fig3 => emit_csv(out, &commands::fig3(cli.seed)?),
        Command::Fig4 => emit_csv(out, &commands::fig4(cli.seed)?),
        Command::Fig5 => emit_csv(out, &commands::fig5(cli.seed)?),
        Command::Simulate { scenario, n, structure } => {
            let config = load_scenario(&scenario)?;
            emit_csv(out, &commands::simulate(&config, n, cli.seed, structure.into())?)
        }
        Command::Decide { m, l_bs, k, d, kappa } => {
            let text = commands::decide(m, l_bs, k, d, kappa)?;
            emit(out, |w| w.write_all(text.as_bytes()))
        }
        Command::Sweep { scenario, param, range, n, structure } => {
            let config = load_scenario(&scenario)?;
            let param = match param {
                ParamArg::Kappa => SweepParam::Kappa,
                ParamArg::Spread => SweepParam::Spread,
            };
            let values = commands::parse_range(&range)?;
            emit_csv(out, &commands::sweep(&config, param, &values, n, cli.seed, structure.into())?)
        }
    }
}

fn is_broken_pipe(e: &anyhow::Error) -> bool {
    e.chain().any(|cause| cause.downcast_ref::<io::Error>().is_some_and(|io| io.kind() == io::ErrorKind::BrokenPipe))
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        // reader closed the pipe early, e.g. `hybeam fig2 | head`
        Err(e) if is_broken_pipe(&e) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
