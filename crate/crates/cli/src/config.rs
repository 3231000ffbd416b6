//! JSON run configuration, embedded presets and flag overrides.

use std::f64::consts::PI;
use std::path::Path;

use capillary_core::stepper::{modal_height, ModeSpec, Scheme, SimConfig};
use capillary_core::{FluidParams, InterfaceState, TangentialGrid, VerticalGrid};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Config {
    pub params: ParamsSection,
    pub grid: GridSection,
    pub scheme: SchemeSection,
    pub initial: InitialSection,
    pub output: OutputSection,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsSection {
    pub rho1: f64,
    pub rho2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub sigma: f64,
    #[serde(default)]
    pub gravity: f64,
}

impl ParamsSection {
    pub fn to_params(&self) -> CliResult<FluidParams> {
        Ok(FluidParams::new(self.rho1, self.rho2, self.mu1, self.mu2, self.sigma, self.gravity)?)
    }
}

/// Moderately viscous lower liquid under a lighter, more viscous upper one.
pub const DEFAULT_PARAMS: ParamsSection =
    ParamsSection { rho1: 1.0, rho2: 0.85, mu1: 1.0, mu2: 20.0, sigma: 1.0, gravity: 0.0 };

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    pub dim: usize,
    pub length: f64,
    pub points: usize,
    /// Vertical truncation `Y` of each half-line.
    pub depth: f64,
    /// Number of vertical intervals per phase.
    pub levels: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeKind {
    QuasiStationary,
    FrozenFrequency,
}

impl From<SchemeKind> for Scheme {
    fn from(kind: SchemeKind) -> Self {
        match kind {
            SchemeKind::QuasiStationary => Scheme::QuasiStationary,
            SchemeKind::FrozenFrequency => Scheme::FrozenFrequency,
        }
    }
}

fn yes() -> bool {
    true
}

fn one() -> f64 {
    1.0
}

fn compat_tol() -> f64 {
    capillary_core::nonlinear::COMPATIBILITY_TOL
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SchemeSection {
    pub kind: SchemeKind,
    pub dt: f64,
    pub t_end: f64,
    #[serde(default = "yes")]
    pub nonlinear: bool,
    #[serde(default)]
    pub bulk_forcing: bool,
    #[serde(default = "one")]
    pub divergence_limit: f64,
    #[serde(default = "compat_tol")]
    pub compatibility_tol: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeEntry {
    pub index: [i64; 2],
    pub amplitude: f64,
    #[serde(default)]
    pub phase: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialSection {
    pub modes: Vec<ModeEntry>,
    #[serde(default)]
    pub mean: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    /// Complex amplitudes of the listed modes.
    #[default]
    Modes,
    /// Every height sample.
    Samples,
}

fn every_default() -> usize {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    #[serde(default = "every_default")]
    pub every: usize,
    #[serde(default)]
    pub format: OutputFormat,
    /// Tracked modes; empty means every initially excited mode.
    #[serde(default)]
    pub modes: Vec<[i64; 2]>,
    /// Also write measured growth rates of the tracked modes.
    #[serde(default)]
    pub growth_table: bool,
}

pub const PRESETS: [&str; 2] = ["capillary-decay", "rayleigh-taylor-scan"];

pub fn preset(name: &str) -> CliResult<Config> {
    match name {
        "capillary-decay" => {
            // One mode of an equal-phase pair; sigma tau / (4 mu) = 1/4, so
            // t_end is three decay times.
            let length = 2.0 * PI;
            Ok(Config {
                params: ParamsSection { rho1: 1.0, rho2: 1.0, mu1: 1.0, mu2: 1.0, sigma: 1.0, gravity: 0.0 },
                grid: GridSection { dim: 1, length, points: 16, depth: 8.0, levels: 32 },
                scheme: SchemeSection {
                    kind: SchemeKind::QuasiStationary,
                    dt: 0.005,
                    t_end: 12.0,
                    nonlinear: true,
                    bulk_forcing: false,
                    divergence_limit: 1.0,
                    compatibility_tol: compat_tol(),
                },
                initial: InitialSection {
                    modes: vec![ModeEntry { index: [1, 0], amplitude: 1e-4 * length, phase: 0.0 }],
                    mean: 0.0,
                },
                output: OutputSection {
                    every: 100,
                    format: OutputFormat::Modes,
                    modes: vec![[1, 0]],
                    growth_table: false,
                },
            })
        }
        "rayleigh-taylor-scan" => {
            // Heavy fluid on top; wavenumbers k/20 for k = 1..40 bracket the
            // capillary cutoff sqrt(gravity [[rho]] / sigma) = 1.
            let length = 40.0 * PI;
            let modes: Vec<ModeEntry> =
                (1..=40).map(|k| ModeEntry { index: [k, 0], amplitude: 1e-6 * length, phase: 0.0 }).collect();
            Ok(Config {
                params: ParamsSection { rho1: 1.0, rho2: 2.0, mu1: 1.0, mu2: 1.0, sigma: 1.0, gravity: 1.0 },
                grid: GridSection { dim: 1, length, points: 128, depth: 8.0, levels: 32 },
                scheme: SchemeSection {
                    kind: SchemeKind::QuasiStationary,
                    dt: 0.01,
                    t_end: 1.0,
                    nonlinear: true,
                    bulk_forcing: false,
                    divergence_limit: 1.0,
                    compatibility_tol: compat_tol(),
                },
                output: OutputSection {
                    every: 10,
                    format: OutputFormat::Modes,
                    modes: modes.iter().map(|m| m.index).collect(),
                    growth_table: true,
                },
                initial: InitialSection { modes, mean: 0.0 },
            })
        }
        other => Err(CliError::Usage(format!("unknown preset '{other}'; known presets: {}", PRESETS.join(", ")))),
    }
}

pub fn load(path: &Path) -> CliResult<Config> {
    let text = std::fs::read_to_string(path).map_err(CliError::io(path))?;
    serde_json::from_str(&text).map_err(|e| CliError::Usage(format!("{}: {e}", path.display())))
}

/// Field-by-field replacements from the command line.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub rho1: Option<f64>,
    pub rho2: Option<f64>,
    pub mu1: Option<f64>,
    pub mu2: Option<f64>,
    pub sigma: Option<f64>,
    pub gravity: Option<f64>,
    pub dt: Option<f64>,
    pub t_end: Option<f64>,
    pub scheme: Option<SchemeKind>,
}

impl Overrides {
    pub fn apply_params(&self, p: &mut ParamsSection) {
        let pairs = [
            (&mut p.rho1, self.rho1),
            (&mut p.rho2, self.rho2),
            (&mut p.mu1, self.mu1),
            (&mut p.mu2, self.mu2),
            (&mut p.sigma, self.sigma),
            (&mut p.gravity, self.gravity),
        ];
        for (slot, value) in pairs {
            if let Some(v) = value {
                *slot = v;
            }
        }
    }

    pub fn apply(&self, c: &mut Config) {
        self.apply_params(&mut c.params);
        if let Some(dt) = self.dt {
            c.scheme.dt = dt;
        }
        if let Some(t) = self.t_end {
            c.scheme.t_end = t;
        }
        if let Some(kind) = self.scheme {
            c.scheme.kind = kind;
        }
    }
}

impl Config {
    /// Modes written to the series: the configured list, else the initial modes.
    pub fn tracked_modes(&self) -> Vec<[i64; 2]> {
        if self.output.modes.is_empty() {
            self.initial.modes.iter().map(|m| m.index).collect()
        } else {
            self.output.modes.clone()
        }
    }

    /// Validated stepper configuration and initial height.
    pub fn build(&self) -> CliResult<(SimConfig, InterfaceState)> {
        let params = self.params.to_params()?;
        let g = &self.grid;
        let grid = TangentialGrid::new(g.dim, g.length, g.points)?;
        let vgrid = VerticalGrid::new(g.depth, g.levels)?;
        let s = &self.scheme;
        let mut sim = SimConfig::new(params, grid, vgrid, s.dt, s.t_end, s.kind.into())?;
        sim.nonlinear = s.nonlinear;
        sim.bulk_forcing = s.bulk_forcing;
        sim.divergence_limit = s.divergence_limit;
        sim.output_every = self.output.every;
        sim.validate()?;
        if !(s.compatibility_tol > 0.0) {
            return Err(CliError::Usage("scheme.compatibility_tol must be positive".into()));
        }
        let half = (g.points / 2) as i64;
        for idx in self.tracked_modes().iter().chain(self.initial.modes.iter().map(|m| &m.index)) {
            let in_range = idx.iter().take(g.dim).all(|k| k.abs() < half);
            let unused_zero = g.dim == 2 || idx[1] == 0;
            if !in_range || !unused_zero {
                return Err(CliError::Usage(format!(
                    "mode {idx:?} is not representable on a {}-point grid in {} dimension(s)",
                    g.points, g.dim
                )));
            }
        }
        let specs: Vec<ModeSpec> = self
            .initial
            .modes
            .iter()
            .map(|m| ModeSpec { index: m.index, amplitude: m.amplitude, phase: m.phase })
            .collect();
        let mut h0 = modal_height(&grid, &specs);
        for x in &mut h0.h {
            *x += self.initial.mean;
        }
        Ok((sim, h0))
    }
}
