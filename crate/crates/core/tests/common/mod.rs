//! Shared helpers for the integration tests: random admissible points and
//! independent re-implementations of the closed-form symbols.
#![allow(dead_code)]

use capillary_core::{FluidParams, C64};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

pub fn rng(seed: u64) -> StdRng {
    StdRng::seed_from_u64(seed)
}

pub fn log_uniform(rng: &mut StdRng, lo: f64, hi: f64) -> f64 {
    (rng.gen_range(lo.ln()..hi.ln())).exp()
}

pub fn random_params(rng: &mut StdRng) -> FluidParams {
    FluidParams::new(
        log_uniform(rng, 0.1, 10.0),
        log_uniform(rng, 0.1, 10.0),
        log_uniform(rng, 0.1, 10.0),
        log_uniform(rng, 0.1, 10.0),
        log_uniform(rng, 0.1, 10.0),
        0.0,
    )
    .unwrap()
}

/// `lambda` in the sector `|arg| < 0.6 pi`, modulus in `[1e-3, 1e3]`.
pub fn random_lambda(rng: &mut StdRng) -> C64 {
    C64::from_polar(log_uniform(rng, 1e-3, 1e3), rng.gen_range(-0.6..0.6) * std::f64::consts::PI)
}

pub fn random_c(rng: &mut StdRng) -> C64 {
    C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))
}

pub fn random_wavevector(rng: &mut StdRng, dim: usize) -> [f64; 2] {
    let tau = log_uniform(rng, 1e-2, 1e2);
    if dim == 1 {
        [if rng.gen_bool(0.5) { tau } else { -tau }, 0.0]
    } else {
        let a: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        [tau * a.cos(), tau * a.sin()]
    }
}

/// Square root through the polar form, principal branch.
pub fn polar_sqrt(z: C64) -> C64 {
    let r = z.re.hypot(z.im).sqrt();
    let theta = z.im.atan2(z.re) / 2.0;
    C64::new(r * theta.cos(), r * theta.sin())
}

/// Independent evaluation of `n = (rho1+rho2) lambda/tau + 4 eta1 eta2/(eta1+eta2)`.
pub fn oracle_n(p: &FluidParams, lambda: C64, tau: f64) -> C64 {
    let w1 = polar_sqrt(p.rho1 * lambda + p.mu1 * tau * tau);
    let w2 = polar_sqrt(p.rho2 * lambda + p.mu2 * tau * tau);
    let e1 = p.mu1.sqrt() * w1 + p.mu2 * tau;
    let e2 = p.mu2.sqrt() * w2 + p.mu1 * tau;
    (p.rho1 + p.rho2) * lambda / tau + 4.0 * e1 * e2 / (e1 + e2)
}

/// `s = lambda + (sigma tau^2 - gravity [[rho]]) / n`.
pub fn oracle_s(p: &FluidParams, lambda: C64, tau: f64) -> C64 {
    lambda + (p.sigma * tau * tau - p.gravity * (p.rho2 - p.rho1)) / oracle_n(p, lambda, tau)
}

/// Plain bisection for a sign change of `f` on `[lo, hi]`.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    let flo = f(lo);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if (f(mid) > 0.0) == (flo > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

pub fn rel_err(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}
