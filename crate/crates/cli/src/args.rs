//! Command-line surface.

use std::path::PathBuf;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::config::{Overrides, SchemeKind};

#[derive(Debug, Parser)]
#[command(
    name = "capillary-stokes",
    version,
    about = "Two-phase Stokes flow with surface tension near a flat interface"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub global: GlobalArgs,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Tabulate the boundary symbol over a grid of (lambda, tau).
    Symbol(SymbolArgs),
    /// Check the symbol identities, the DN map and the sector estimate.
    Verify(VerifyArgs),
    /// Exact linear evolution of single modes by contour inversion.
    LinearEvolve(EvolveArgs),
    /// Time-step the full interface problem from a config or preset.
    Simulate,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON run configuration.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Embedded configuration (capillary-decay, rayleigh-taylor-scan).
    #[arg(long, global = true, value_name = "NAME", conflicts_with = "config")]
    pub preset: Option<String>,
    /// Output directory.
    #[arg(long, global = true, value_name = "DIR", default_value = "out")]
    pub out: PathBuf,
    /// Worker threads; defaults to the machine's parallelism.
    #[arg(long, global = true, value_name = "N")]
    pub threads: Option<usize>,
    /// Treat a failing sector estimate as expected when gravity destabilizes.
    #[arg(long, global = true)]
    pub expect_unstable: bool,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub rho1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub rho2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu1: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub mu2: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub sigma: Option<f64>,
    #[arg(long, global = true, allow_negative_numbers = true)]
    pub gravity: Option<f64>,
    #[arg(long, global = true)]
    pub dt: Option<f64>,
    /// Final time (simulate and linear-evolve).
    #[arg(long, global = true)]
    pub t_end: Option<f64>,
    #[arg(long, global = true, value_enum)]
    pub scheme: Option<SchemeArg>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    QuasiStationary,
    FrozenFrequency,
}

impl GlobalArgs {
    pub fn overrides(&self) -> Overrides {
        Overrides {
            rho1: self.rho1,
            rho2: self.rho2,
            mu1: self.mu1,
            mu2: self.mu2,
            sigma: self.sigma,
            gravity: self.gravity,
            dt: self.dt,
            t_end: self.t_end,
            scheme: self.scheme.map(|s| match s {
                SchemeArg::QuasiStationary => SchemeKind::QuasiStationary,
                SchemeArg::FrozenFrequency => SchemeKind::FrozenFrequency,
            }),
        }
    }
}

/// `start:stop:count` (inclusive, evenly spaced) or a single value.
#[derive(Debug, Clone, PartialEq)]
pub struct Range {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl Range {
    pub fn single(x: f64) -> Self {
        Self { start: x, stop: x, count: 1 }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => Vec::new(),
            1 => vec![self.start],
            n => (0..n).map(|i| self.start + (self.stop - self.start) * i as f64 / (n - 1) as f64).collect(),
        }
    }
}

impl FromStr for Range {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parse = |t: &str| t.trim().parse::<f64>().map_err(|e| format!("'{t}': {e}"));
        let parts: Vec<&str> = s.split(':').collect();
        let range = match parts.as_slice() {
            [x] => Range::single(parse(x)?),
            [a, b, n] => Range {
                start: parse(a)?,
                stop: parse(b)?,
                count: n.trim().parse().map_err(|e| format!("count '{n}': {e}"))?,
            },
            _ => return Err(format!("expected VALUE or START:STOP:COUNT, got '{s}'")),
        };
        if !(range.start.is_finite() && range.stop.is_finite()) {
            return Err(format!("range bounds must be finite, got '{s}'"));
        }
        Ok(range)
    }
}

#[derive(Debug, Args)]
pub struct SymbolArgs {
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub lambda_re: Range,
    #[arg(long, default_value = "0", allow_hyphen_values = true)]
    pub lambda_im: Range,
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub tau: Range,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Inner radius of the sampled sector.
    #[arg(long, default_value_t = 0.1)]
    pub lambda0: f64,
    /// Half-angle opening beyond the right half-plane, in radians.
    #[arg(long, default_value_t = 0.1)]
    pub eta: f64,
    /// Radii per sample axis of the sector scan.
    #[arg(long, default_value_t = 64)]
    pub radii: usize,
}

#[derive(Debug, Args)]
pub struct EvolveArgs {
    #[arg(long, default_value = "1", allow_hyphen_values = true)]
    pub tau: Range,
    /// Time samples in [0, t_end].
    #[arg(long, default_value_t = 101)]
    pub samples: usize,
    /// Initial amplitude.
    #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
    pub h0: f64,
    /// Contour quadrature nodes.
    #[arg(long, default_value_t = 48)]
    pub nodes: usize,
}
