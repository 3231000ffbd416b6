//! Sampled certification of the sector estimate `|s| >= c (|lambda| + |tau|)`.
//!
//! The scans are plain loops over index ranges so callers can split the
//! outer radius index across workers and reduce with [`merge_certificates`].

use core::f64::consts::FRAC_PI_2;
use core::f64::consts::FRAC_PI_4;
use core::ops::Range;
#[allow(unused_imports)]
use num_traits::Float;

use super::{boundary_symbol, k_fn};
use crate::error::{Error, Result};
use crate::params::FluidParams;
use crate::{C64, ZERO};

/// Shells spanned by the radius scans, relative to `lambda0`.
const SHELL_DECADES: (f64, f64) = (-3.0, 3.0);

/// Smallest accepted total sample count.
pub const MIN_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SectorSampling {
    pub lambda_radii: usize,
    pub lambda_angles: usize,
    pub tau_radii: usize,
    pub tau_angles: usize,
}

impl Default for SectorSampling {
    fn default() -> Self {
        Self { lambda_radii: 64, lambda_angles: 64, tau_radii: 64, tau_angles: 3 }
    }
}

impl SectorSampling {
    pub fn total(&self) -> usize {
        self.lambda_radii * self.lambda_angles * self.tau_radii * self.tau_angles
    }
}

/// Outcome of a sector scan. `passed` iff `c_min > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SectorCertificate {
    pub c_min: f64,
    pub worst_lambda: C64,
    pub worst_tau: C64,
    pub samples: usize,
}

impl SectorCertificate {
    fn empty() -> Self {
        Self { c_min: f64::INFINITY, worst_lambda: ZERO, worst_tau: ZERO, samples: 0 }
    }

    pub fn passed(&self) -> bool {
        self.samples > 0 && self.c_min > 0.0 && self.c_min.is_finite()
    }
}

pub fn merge_certificates(parts: impl IntoIterator<Item = SectorCertificate>) -> SectorCertificate {
    parts.into_iter().fold(SectorCertificate::empty(), |acc, c| {
        let samples = acc.samples + c.samples;
        let best = if c.c_min < acc.c_min { c } else { acc };
        SectorCertificate { samples, ..best }
    })
}

fn log_shell(i: usize, count: usize, base: f64) -> f64 {
    let (lo, hi) = SHELL_DECADES;
    let frac = if count > 1 { i as f64 / (count - 1) as f64 } else { 0.5 };
    base * 10f64.powf(lo + (hi - lo) * frac)
}

fn spread(i: usize, count: usize, half_width: f64) -> f64 {
    if count > 1 {
        -half_width + 2.0 * half_width * i as f64 / (count - 1) as f64
    } else {
        0.0
    }
}

fn validate(lambda0: f64, eta: f64, sampling: &SectorSampling) -> Result<()> {
    if !(lambda0.is_finite() && lambda0 > 0.0) {
        return Err(Error::Usage(alloc::format!("lambda0 must be > 0, got {lambda0}")));
    }
    if !(eta > 0.0 && eta < FRAC_PI_4) {
        return Err(Error::Usage(alloc::format!("sector half-angle must lie in (0, pi/4), got {eta}")));
    }
    if sampling.total() < MIN_SAMPLES {
        return Err(Error::Usage(alloc::format!(
            "sample budget {} is below the minimum {MIN_SAMPLES}",
            sampling.total()
        )));
    }
    Ok(())
}

/// Scans the slice `radius_range` of the `lambda` radius index.
pub fn certify_range(
    params: &FluidParams,
    lambda0: f64,
    eta: f64,
    sampling: &SectorSampling,
    radius_range: Range<usize>,
) -> Result<SectorCertificate> {
    validate(lambda0, eta, sampling)?;
    let mut cert = SectorCertificate::empty();
    for i in radius_range.start..radius_range.end.min(sampling.lambda_radii) {
        let r = log_shell(i, sampling.lambda_radii, lambda0);
        for a in 0..sampling.lambda_angles {
            let lambda = C64::from_polar(r, spread(a, sampling.lambda_angles, FRAC_PI_2 + eta));
            for tr in 0..sampling.tau_radii {
                let t = log_shell(tr, sampling.tau_radii, lambda0);
                for ta in 0..sampling.tau_angles {
                    let tau = C64::from_polar(t, spread(ta, sampling.tau_angles, eta));
                    let s = boundary_symbol(params, lambda, tau)?;
                    let ratio = s.norm() / (lambda.norm() + tau.norm());
                    cert.samples += 1;
                    if !(ratio >= cert.c_min) {
                        cert.c_min = ratio;
                        cert.worst_lambda = lambda;
                        cert.worst_tau = tau;
                    }
                }
            }
        }
    }
    Ok(cert)
}

/// Full sector scan of `lambda in Sigma_{pi/2+eta}, |lambda| >= lambda0`,
/// `tau in Sigma_eta`.
pub fn certify_sector_bound(
    params: &FluidParams,
    lambda0: f64,
    eta: f64,
    sampling: &SectorSampling,
) -> Result<SectorCertificate> {
    certify_range(params, lambda0, eta, sampling, 0..sampling.lambda_radii)
}

/// Smallest `Re s` over a scan of the closed right half-plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignScan {
    pub min_re: f64,
    pub worst_lambda: C64,
    pub worst_tau: f64,
    pub samples: usize,
}

impl SignScan {
    pub fn all_positive(&self) -> bool {
        self.samples > 0 && self.min_re > 0.0
    }
}

/// Samples `Re s(lambda, tau)` for `Re lambda >= 0` (including `lambda = 0`)
/// and real `tau > 0`, on the same shells as the sector scan.
pub fn real_part_scan(params: &FluidParams, lambda0: f64, sampling: &SectorSampling) -> Result<SignScan> {
    validate(lambda0, 0.5, sampling)?;
    let mut scan = SignScan { min_re: f64::INFINITY, worst_lambda: ZERO, worst_tau: 0.0, samples: 0 };
    let lambdas = core::iter::once(ZERO).chain((0..sampling.lambda_radii).flat_map(|i| {
        let r = log_shell(i, sampling.lambda_radii, lambda0);
        (0..sampling.lambda_angles).map(move |a| C64::from_polar(r, spread(a, sampling.lambda_angles, FRAC_PI_2)))
    }));
    let tau_count = sampling.tau_radii * sampling.tau_angles;
    for lambda in lambdas {
        for tr in 0..tau_count {
            let tau = log_shell(tr, tau_count, lambda0);
            let s = boundary_symbol(params, lambda, C64::new(tau, 0.0))?;
            scan.samples += 1;
            if !(s.re >= scan.min_re) {
                scan.min_re = s.re;
                scan.worst_lambda = lambda;
                scan.worst_tau = tau;
            }
        }
    }
    Ok(scan)
}

/// Empirical constant `C` in `|k(z)| <= C / (1 + |z|)` over
/// `|arg z| <= max_angle`, `|z|` log-spaced in `[1e-6, 1e8]`.
pub fn k_decay_constant(params: &FluidParams, max_angle: f64, radii: usize, angles: usize) -> Result<f64> {
    let mut worst = 0.0f64;
    for i in 0..radii {
        let frac = if radii > 1 { i as f64 / (radii - 1) as f64 } else { 0.5 };
        let r = 10f64.powf(-6.0 + 14.0 * frac);
        for a in 0..angles {
            let z = C64::from_polar(r, spread(a, angles, max_angle));
            worst = worst.max(k_fn(params, z)?.norm() * (1.0 + r));
        }
    }
    Ok(worst)
}
