use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use photomag::commands::{self, Report};
use photomag::sweep::Variable;
use photomag::{CliError, Context, Result, RunConfig};

/// Macrospin simulator for photo-magnetic switching in Co-doped garnet films.
#[derive(Parser, Debug)]
#[command(name = "photomag", version)]
struct Cli {
    /// Run configuration (`section.key = value` lines); defaults if omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory (overrides output.dir).
    #[arg(long, global = true)]
    out: Option<String>,
    /// Worker threads (overrides run.workers).
    #[arg(long, global = true)]
    workers: Option<String>,
    /// Pump polarization from [100], degrees.
    #[arg(long, global = true, allow_hyphen_values = true)]
    phi: Option<String>,
    /// Pump fluence, mJ/cm2.
    #[arg(long, global = true)]
    fluence: Option<String>,
    /// Pump wavelength, nm.
    #[arg(long, global = true)]
    lambda: Option<String>,
    /// Initial state label (L+, L-, S+, S-, or L+dn etc.).
    #[arg(long, global = true)]
    from: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Metastable states and their FMR frequencies.
    Minima,
    /// One pump pulse from the initial state.
    Switch,
    /// Field preparation protocol from every state.
    Relax,
    /// Switching outcome (or switched area) versus fluence.
    SweepFluence {
        /// switch or area
        #[arg(long)]
        observable: Option<String>,
    },
    /// Switching outcome and precession amplitude versus polarization.
    SweepPolarization,
    /// Switching outcome (or switched area) versus wavelength.
    SweepWavelength {
        /// switch or area
        #[arg(long)]
        observable: Option<String>,
    },
    /// Domain image under a Gaussian pump spot.
    Image,
    /// Heat, photon and per-bit energy budgets.
    Energetics,
    /// Point-group projection of a random susceptibility tensor.
    Tensor {
        /// 1, 4 or 4mm
        #[arg(long)]
        group: Option<String>,
    },
    /// Fits the pulse coupling to the threshold fluence and saves it.
    Calibrate,
}

fn apply_overrides(cli: &Cli, cfg: &mut RunConfig) -> Result<()> {
    let observable = match &cli.command {
        Command::SweepFluence { observable } | Command::SweepWavelength { observable } => observable.as_deref(),
        _ => None,
    };
    let group = match &cli.command {
        Command::Tensor { group } => group.as_deref(),
        _ => None,
    };
    for (key, value) in [
        ("output.dir", cli.out.as_deref()),
        ("run.workers", cli.workers.as_deref()),
        ("pulse.polarization", cli.phi.as_deref()),
        ("pulse.fluence", cli.fluence.as_deref()),
        ("pulse.wavelength", cli.lambda.as_deref()),
        ("pulse.initial", cli.from.as_deref()),
        ("sweep.observable", observable),
        ("tensor.group", group),
    ] {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<Report> {
    let mut cfg = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    let base = cli.config.as_deref().and_then(Path::parent).unwrap_or(Path::new("."));
    let file_cfg = cfg.clone();
    apply_overrides(cli, &mut cfg)?;
    if let Command::Calibrate = cli.command {
        // only the coupling is written back; flag overrides stay transient
        let mut ctx = Context::new(cfg, base)?;
        let mut report = commands::calibrate(&mut ctx, None)?;
        if let Some(path) = &cli.config {
            let mut saved = file_cfg;
            saved.pulse.coupling = ctx.cfg.pulse.coupling;
            std::fs::write(path, saved.to_text()).map_err(|e| CliError::io(path, e))?;
            report.summary.push(format!("updated {}", path.display()));
        }
        return Ok(report);
    }
    let ctx = Context::new(cfg, base)?;
    match &cli.command {
        Command::Minima => commands::minima(&ctx),
        Command::Switch => commands::switch(&ctx),
        Command::Relax => commands::relax(&ctx),
        Command::SweepFluence { .. } => commands::sweep(&ctx, Variable::Fluence),
        Command::SweepPolarization => commands::sweep(&ctx, Variable::Polarization),
        Command::SweepWavelength { .. } => commands::sweep(&ctx, Variable::Wavelength),
        Command::Image => commands::image(&ctx),
        Command::Energetics => commands::energetics(&ctx),
        Command::Tensor { .. } => commands::tensor(&ctx),
        Command::Calibrate => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            // a closed stdout (e.g. piped into `head`) is not an error
            let mut out = std::io::stdout().lock();
            for line in &report.summary {
                let _ = writeln!(out, "{line}");
            }
            for f in &report.files {
                let _ = writeln!(out, "wrote {}", f.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.machine_line());
            ExitCode::from(2)
        }
    }
}
