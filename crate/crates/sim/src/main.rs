use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};
use kronbf_sim::output::{self, PlotKind};
use kronbf_sim::{run_complexity_sweep, run_imperfect_csi, run_se_sweep, ExperimentConfig};

/// Joint active/passive IRS beamforming simulator.
#[derive(Parser)]
#[command(name = "kronbf", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Spectral efficiency versus SNR with perfect CSI.
    SeSweep(Common),
    /// Model complexity versus IRS size.
    Complexity(Common),
    /// Spectral efficiency versus channel estimation noise power.
    ImperfectCsi(Common),
}

#[derive(Args)]
struct Common {
    /// `key = value` config file; defaults are used for missing keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    trials: Option<usize>,
    /// Elevation spread around 90 degrees.
    #[arg(long)]
    delta_deg: Option<f64>,
    /// Output CSV path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write a matplotlib script that plots the CSV.
    #[arg(long)]
    plot_script: Option<PathBuf>,
    /// Do not print the summary table.
    #[arg(long)]
    quiet: bool,
}

impl Common {
    fn load(&self) -> anyhow::Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::from_file(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(t) = self.trials {
            cfg.trials = t;
        }
        if let Some(d) = self.delta_deg {
            cfg.delta_deg = d;
        }
        if let Some(o) = &self.out {
            cfg.out = o.clone();
        }
        if let Some(p) = &self.plot_script {
            cfg.plot_script = Some(p.clone());
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

fn main() -> anyhow::Result<()> {
    let cli = Cli::parse();
    let (common, kind) = match &cli.command {
        Command::SeSweep(c) => (c, PlotKind::SeVsSnr),
        Command::Complexity(c) => (c, PlotKind::Complexity),
        Command::ImperfectCsi(c) => (c, PlotKind::ImperfectCsi),
    };
    let cfg = common.load()?;
    let mut stdout = std::io::stdout().lock();
    match kind {
        PlotKind::Complexity => {
            let rows = run_complexity_sweep(&cfg)?;
            output::write_complexity(&cfg.out, &rows)?;
            if !common.quiet {
                output::print_complexity(&mut stdout, &rows)?;
            }
        }
        PlotKind::SeVsSnr | PlotKind::ImperfectCsi => {
            let records = if kind == PlotKind::SeVsSnr {
                run_se_sweep(&cfg)?
            } else {
                run_imperfect_csi(&cfg)?
            };
            output::write_records(&cfg.out, &records)?;
            if !common.quiet {
                output::print_summary(&mut stdout, &output::summarize(&records))?;
            }
        }
    }
    if let Some(script) = &cfg.plot_script {
        output::write_plot_script(script, kind, &cfg.out).context("plot script")?;
    }
    eprintln!("wrote {}", cfg.out.display());
    Ok(())
}
