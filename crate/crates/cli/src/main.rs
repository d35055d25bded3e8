use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use stripe_register::{commands, Bc, RunConfig};

#[derive(Parser)]
#[command(
    name = "nanostripe",
    version,
    about = "Spin-qubit register design beside a magnetized nanostripe"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// JSON run configuration; defaults reproduce the reference design
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides `output_dir`)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Material preset (overrides `material.preset`)
    #[arg(long, global = true)]
    preset: Option<Preset>,
    /// Boundary condition at the stripe faces (overrides `spinwave.bc`)
    #[arg(long, global = true)]
    bc: Option<BcArg>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Stray field map, field profile, gradient and homogeneity optimum
    Fieldmap,
    /// Spin-wave potential, eigenmodes and profiles
    Modes,
    /// Field-sweep absorption spectrum and line list
    Spectrum,
    /// Overlap, Ising and addressability checks (exit code 2 on failure)
    DesignCheck,
    /// T1 and T2 against position and temperature
    Decoherence,
}

#[derive(ValueEnum, Clone, Copy)]
enum Preset {
    Permalloy,
    Dysprosium,
}

#[derive(ValueEnum, Clone, Copy)]
enum BcArg {
    Dirichlet,
    Neumann,
}

fn run(cli: &Cli) -> anyhow::Result<bool> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::read(path)?,
        None => RunConfig::default(),
    };
    if let Some(out) = &cli.out {
        cfg.output_dir = out.clone();
    }
    if let Some(p) = cli.preset {
        cfg.material.preset = match p {
            Preset::Permalloy => "permalloy",
            Preset::Dysprosium => "dysprosium",
        }
        .into();
    }
    if let Some(bc) = cli.bc {
        cfg.spinwave.bc = match bc {
            BcArg::Dirichlet => Bc::Dirichlet,
            BcArg::Neumann => Bc::Neumann,
        };
    }
    cfg.validate()?;
    let out = cfg.output_dir.clone();
    let outcome = match cli.command {
        Command::Fieldmap => commands::fieldmap(&cfg, &out)?,
        Command::Modes => commands::modes(&cfg, &out)?,
        Command::Spectrum => commands::spectrum(&cfg, &out)?,
        Command::DesignCheck => commands::design_check(&cfg, &out)?,
        Command::Decoherence => commands::decoherence(&cfg, &out)?,
    };
    for f in &outcome.files {
        println!("wrote {}", f.display());
    }
    if !outcome.pass {
        eprintln!("design check failed");
    }
    Ok(outcome.pass)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
