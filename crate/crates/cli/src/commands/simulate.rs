use capillary_core::nonlinear::check_compatibility;
use capillary_core::stepper::{mode_amplitude, simulate, Series, Stepper};
use capillary_core::symbols::{capillary_cutoff, dispersion_root};
use capillary_core::{wavevector_norm, FluidParams, TangentialGrid};
use serde_json::{json, Value};

use super::{selected_config, usage};
use crate::args::GlobalArgs;
use crate::config::OutputFormat;
use crate::error::{CliError, CliResult};
use crate::output::{Csv, OutDir};

pub const SERIES: &str = "series.csv";
pub const GROWTH: &str = "growth_rates.csv";

/// Measured exponential rate of one tracked mode over the whole run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GrowthRow {
    pub index: [i64; 2],
    pub tau: f64,
    pub growth_rate: f64,
    /// Unstable root of the full symbol, if any.
    pub dispersion_root: Option<f64>,
}

/// `ln(|a(T)| / |a(0)|) / T` between the first and last records.
pub fn growth_rates(
    params: &FluidParams,
    grid: &TangentialGrid,
    series: &Series,
    modes: &[[i64; 2]],
) -> CliResult<Vec<GrowthRow>> {
    let (first, last) = (&series.records[0], series.last());
    let span = last.time - first.time;
    modes
        .iter()
        .map(|&index| {
            let tau = wavevector_norm(&grid.wavevector(grid.mode_slot(index)));
            let a0 = mode_amplitude(grid, &first.interface, index)?.norm();
            let a1 = mode_amplitude(grid, &last.interface, index)?.norm();
            let growth_rate = if span > 0.0 { (a1 / a0).ln() / span } else { f64::NAN };
            Ok(GrowthRow { index, tau, growth_rate, dispersion_root: dispersion_root(params, tau)? })
        })
        .collect()
}

/// Wavenumber where the measured rate turns from growth to decay, by
/// linear interpolation between the bracketing rows.
pub fn neutral_estimate(rows: &[GrowthRow]) -> Option<f64> {
    let mut sorted: Vec<&GrowthRow> = rows.iter().filter(|r| r.growth_rate.is_finite()).collect();
    sorted.sort_by(|a, b| a.tau.total_cmp(&b.tau));
    sorted.windows(2).find(|w| w[0].growth_rate > 0.0 && w[1].growth_rate <= 0.0).map(|w| {
        let (a, b) = (w[0], w[1]);
        a.tau + (b.tau - a.tau) * a.growth_rate / (a.growth_rate - b.growth_rate)
    })
}

fn column_name(prefix: &str, index: [i64; 2]) -> String {
    format!("{prefix}_{}_{}", index[0], index[1])
}

pub fn run(global: &GlobalArgs) -> CliResult<()> {
    let config = selected_config(global)?.ok_or_else(|| usage("simulate needs --config PATH or --preset NAME"))?;
    let (sim, h0) = config.build()?;
    let warning = sim.smallness_warning(&h0);
    if let Some(w) = &warning {
        eprintln!("warning: {w}");
    }

    let stepper = Stepper::new(sim.clone())?;
    let start = stepper.initial_state(h0.clone(), None)?;
    let compat =
        check_compatibility(&sim.params, &sim.grid, &sim.vgrid, &start.bulk, &h0, config.scheme.compatibility_tol)?;
    if !compat.passed() {
        eprintln!(
            "note: initial bulk fields exceed the compatibility tolerance {:e} (stress {:e}, divergence {:e}, jump {:e}); \
             vertical differencing of the reconstructed fields contributes O(dy^2)",
            compat.tolerance, compat.tangential_stress_residual, compat.divergence_residual, compat.jump_residual
        );
    }

    let series = simulate(&sim, h0, None)?;
    let tracked = config.tracked_modes();
    let csv = match config.output.format {
        OutputFormat::Modes => {
            let mut header = vec!["t".to_string()];
            for &m in &tracked {
                header.push(column_name("re", m));
                header.push(column_name("im", m));
            }
            let mut csv = Csv::new(&header);
            for r in &series.records {
                let mut row = vec![r.time];
                for &m in &tracked {
                    // Cosine amplitude: twice the complex Fourier coefficient.
                    let a = mode_amplitude(&sim.grid, &r.interface, m)? * 2.0;
                    row.extend([a.re, a.im]);
                }
                csv.row(&row);
            }
            csv
        }
        OutputFormat::Samples => {
            let header: Vec<String> =
                std::iter::once("t".to_string()).chain((0..sim.grid.len()).map(|i| format!("h_{i}"))).collect();
            let mut csv = Csv::new(&header);
            for r in &series.records {
                let row: Vec<f64> = std::iter::once(r.time).chain(r.interface.h.iter().copied()).collect();
                csv.row(&row);
            }
            csv
        }
    };

    let mut out = OutDir::create(&global.out)?;
    out.write(SERIES, csv.as_str())?;

    let mut growth_summary = Value::Null;
    if config.output.growth_table {
        let rows = growth_rates(&sim.params, &sim.grid, &series, &tracked)?;
        let mut table = Csv::new(&["tau", "growth_rate", "dispersion_root"]);
        for r in &rows {
            table.row(&[r.tau, r.growth_rate, r.dispersion_root.unwrap_or(f64::NAN)]);
        }
        out.write(GROWTH, table.as_str())?;
        growth_summary = json!({
            "neutral_tau_measured": neutral_estimate(&rows),
            "capillary_cutoff": capillary_cutoff(&sim.params),
        });
    }

    let last = series.last();
    let d = last.diagnostics;
    let summary = json!({
        "steps": last.step,
        "final_time": last.time,
        "completed": series.failure.is_none(),
        "failure": series.failure.as_ref().map(|e| e.to_string()),
        "final": {
            "mean": d.mean,
            "energy": d.energy,
            "max_height": d.max_height,
            "max_velocity": d.max_velocity,
        },
        "compatibility": {
            "passed": compat.passed(),
            "tangential_stress_residual": compat.tangential_stress_residual,
            "divergence_residual": compat.divergence_residual,
            "jump_residual": compat.jump_residual,
            "tolerance": compat.tolerance,
        },
        "smallness_warning": warning,
        "growth": growth_summary,
    });
    let resolved = serde_json::to_value(&config).expect("config serializes");
    out.finish(resolved, summary)?;

    match series.failure {
        Some(e) => Err(CliError::from(e)),
        None => Ok(()),
    }
}
