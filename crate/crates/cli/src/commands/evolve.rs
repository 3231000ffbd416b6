use capillary_core::laplace::{linear_mode_evolution, ContourSpec};
use capillary_core::symbols::dispersion_root;
use capillary_core::C64;
use serde_json::{json, Value};

use super::{params_json, resolved_params, usage};
use crate::args::{EvolveArgs, GlobalArgs};
use crate::error::CliResult;
use crate::output::{Csv, OutDir};
use crate::parallel;

pub const FILE: &str = "evolution.csv";
const DEFAULT_T_END: f64 = 10.0;

pub fn run(global: &GlobalArgs, args: &EvolveArgs, threads: usize) -> CliResult<()> {
    let section = resolved_params(global)?;
    let params = section.to_params()?;
    let spec = ContourSpec::new(args.nodes)?;
    let taus = args.tau.values();
    if taus.is_empty() {
        return Err(usage("empty wavenumber range"));
    }
    if let Some(t) = taus.iter().find(|t| !(**t > 0.0)) {
        return Err(usage(format!("wavenumbers must be > 0, got {t}")));
    }
    let t_end = global.t_end.unwrap_or(DEFAULT_T_END);
    if !(t_end >= 0.0 && t_end.is_finite()) || args.samples == 0 {
        return Err(usage("need t_end >= 0 and at least one time sample"));
    }
    let times: Vec<f64> = match args.samples {
        1 => vec![0.0],
        n => (0..n).map(|i| t_end * i as f64 / (n - 1) as f64).collect(),
    };
    let h0 = C64::new(args.h0, 0.0);

    let runs = parallel::map(&taus, threads, |&tau| linear_mode_evolution(&params, tau, h0, &times, &spec));
    let mut csv = Csv::new(&["t", "tau", "h_re", "h_im"]);
    let mut per_tau = Vec::new();
    for (&tau, run) in taus.iter().zip(runs) {
        let values = run?;
        for (&t, h) in times.iter().zip(&values) {
            csv.row(&[t, tau, h.re, h.im]);
        }
        let last = values.last().copied().unwrap_or(h0);
        per_tau.push(json!({
            "tau": tau,
            "final_h": [last.re, last.im],
            "growth_rate": dispersion_root(&params, tau)?,
        }));
    }

    let mut out = OutDir::create(&global.out)?;
    out.write(FILE, csv.as_str())?;
    let config = json!({
        "params": params_json(&section),
        "tau": [args.tau.start, args.tau.stop, args.tau.count],
        "t_end": t_end,
        "samples": args.samples,
        "h0": args.h0,
        "nodes": args.nodes,
    });
    out.finish(config, Value::Array(per_tau))?;
    Ok(())
}
