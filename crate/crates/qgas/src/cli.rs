use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::{BetaTarget, Format, RunConfig, ZeroKind};

#[derive(Debug, Parser)]
#[command(
    name = "qgas",
    version,
    about = "Zeros and correlators of the q-deformed Bose gas"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: CommonArgs,
    #[command(flatten)]
    pub system: SystemArgs,
}

#[derive(Debug, Clone, Default, Args)]
pub struct CommonArgs {
    /// TOML run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR")]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum)]
    pub format: Option<Format>,
    /// Also write an SVG scatter plot.
    #[arg(long, global = true)]
    pub svg: bool,
    #[arg(long, global = true, value_name = "INT")]
    pub seed: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true, value_name = "INT")]
    pub threads: Option<usize>,
}

/// Overrides for the `[system]` section.
#[derive(Debug, Clone, Default, Args)]
pub struct SystemArgs {
    /// Level energies, comma separated.
    #[arg(
        long,
        global = true,
        value_delimiter = ',',
        allow_negative_numbers = true
    )]
    pub eps: Option<Vec<f64>>,
    /// Particle number N.
    #[arg(long, short = 'N', global = true)]
    pub particles: Option<usize>,
    /// Deformation parameter.
    #[arg(long, short = 'q', global = true)]
    pub q: Option<f64>,
    #[arg(long, global = true)]
    pub hbar: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Roots of the z-plane polynomials (Fisher and correlation zeros).
    ZerosPoly {
        /// Restrict to one polynomial.
        #[arg(long, value_enum)]
        kind: Option<ZeroKind>,
    },
    /// Zeros in the complex-temperature plane.
    ZerosBeta {
        #[arg(long, value_enum)]
        target: Option<BetaTarget>,
    },
    /// Correlator over a grid of time differences τ.
    Correlator {
        #[arg(long, allow_negative_numbers = true)]
        beta: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        tau_start: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        tau_stop: Option<f64>,
        #[arg(long)]
        points: Option<usize>,
    },
    /// Run the oracle suite and write a JSON report.
    OracleCheck {
        #[arg(long, hide = true)]
        corrupt_q: bool,
    },
    /// Fisher and correlation zeros for N = 5 and N = 7 at q = 2.
    Figure1,
    /// Redraw the SVG for a CSV written by zeros-poly or zeros-beta.
    Plot {
        input: PathBuf,
        #[arg(long, short = 'o')]
        output: Option<PathBuf>,
    },
}

impl Cli {
    /// Fold the flags into `cfg`; flags win over the file.
    pub fn apply(&self, cfg: &mut RunConfig) {
        let c = &self.common;
        if let Some(out) = &c.out {
            cfg.output.dir = out.clone();
        }
        if let Some(f) = c.format {
            cfg.output.format = f;
        }
        if c.svg {
            cfg.output.svg = true;
        }
        if let Some(seed) = c.seed {
            cfg.output.seed = seed;
        }
        if let Some(t) = c.threads {
            cfg.output.threads = Some(t);
        }
        let s = &self.system;
        if let Some(eps) = &s.eps {
            cfg.system.eps = eps.clone();
        }
        if let Some(n) = s.particles {
            cfg.system.particles = n;
        }
        if let Some(q) = s.q {
            cfg.system.q = q;
        }
        if let Some(h) = s.hbar {
            cfg.system.hbar = h;
        }
        match &self.command {
            Command::ZerosPoly { kind: Some(k) } => cfg.zeros_poly.kinds = vec![*k],
            Command::ZerosBeta { target: Some(t) } => cfg.zeros_beta.target = *t,
            Command::Correlator {
                beta,
                tau_start,
                tau_stop,
                points,
            } => {
                let cs = &mut cfg.correlator;
                cs.beta = beta.unwrap_or(cs.beta);
                cs.tau_start = tau_start.unwrap_or(cs.tau_start);
                cs.tau_stop = tau_stop.unwrap_or(cs.tau_stop);
                cs.points = points.unwrap_or(cs.points);
            }
            Command::OracleCheck { corrupt_q: true } => cfg.oracle.corrupt_q = true,
            _ => {}
        }
    }
}
