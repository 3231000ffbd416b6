use capillary_core::symbols::boundary_symbol;
use capillary_core::C64;
use serde_json::json;

use super::{params_json, resolved_params, usage};
use crate::args::{GlobalArgs, SymbolArgs};
use crate::error::CliResult;
use crate::output::{Csv, OutDir};

pub const FILE: &str = "symbol.csv";

pub fn run(global: &GlobalArgs, args: &SymbolArgs) -> CliResult<()> {
    let section = resolved_params(global)?;
    let params = section.to_params()?;
    let (re, im, taus) = (args.lambda_re.values(), args.lambda_im.values(), args.tau.values());
    if re.is_empty() || im.is_empty() || taus.is_empty() {
        return Err(usage("empty scan range"));
    }
    if let Some(t) = taus.iter().find(|t| !(**t > 0.0)) {
        return Err(usage(format!("wavenumbers must be > 0, got {t}")));
    }

    let mut csv = Csv::new(&["lambda_re", "lambda_im", "tau", "s_re", "s_im", "ratio"]);
    let mut flagged = 0usize;
    let mut rows = 0usize;
    for &lr in &re {
        for &li in &im {
            let lambda = C64::new(lr, li);
            for &tau in &taus {
                // Points off the principal branch are flagged with NaN.
                let s = boundary_symbol(&params, lambda, C64::new(tau, 0.0)).unwrap_or(C64::new(f64::NAN, f64::NAN));
                if s.is_nan() {
                    flagged += 1;
                }
                csv.row(&[lr, li, tau, s.re, s.im, s.norm() / (lambda.norm() + tau)]);
                rows += 1;
            }
        }
    }

    let mut out = OutDir::create(&global.out)?;
    out.write(FILE, csv.as_str())?;
    let config = json!({
        "params": params_json(&section),
        "lambda_re": [args.lambda_re.start, args.lambda_re.stop, args.lambda_re.count],
        "lambda_im": [args.lambda_im.start, args.lambda_im.stop, args.lambda_im.count],
        "tau": [args.tau.start, args.tau.stop, args.tau.count],
    });
    out.finish(config, json!({ "rows": rows, "flagged_rows": flagged }))?;
    Ok(())
}
