//! Closed-form Fourier-Laplace symbols of the linearized two-phase problem.
//!
//! All square roots use the principal branch. An argument on the closed
//! negative real axis is rejected rather than continued across the cut.

mod certify;

pub use certify::{
    certify_range, certify_sector_bound, k_decay_constant, merge_certificates, real_part_scan, SectorCertificate,
    SectorSampling, SignScan,
};

use crate::error::{Error, Result};
use crate::params::{FluidParams, Phase};
use crate::{wavevector_norm, TanVec, Wavevector, C64, I, ZERO};
#[allow(unused_imports)]
use num_traits::Float;

/// Principal square root of `arg`, guarded against the branch cut.
pub(crate) fn guarded_sqrt(arg: C64, lambda: C64, tau: C64) -> Result<C64> {
    if !(arg.re.is_finite() && arg.im.is_finite()) || (arg.im == 0.0 && arg.re <= 0.0) {
        return Err(Error::Branch { lambda, tau });
    }
    Ok(arg.sqrt())
}

/// `omega_j = sqrt(rho_j lambda + mu_j tau^2)`.
pub fn omega(params: &FluidParams, phase: Phase, lambda: C64, tau: C64) -> Result<C64> {
    guarded_sqrt(params.rho(phase) * lambda + params.mu(phase) * tau * tau, lambda, tau)
}

/// Every intermediate symbol at one `(lambda, tau)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SymbolEval {
    pub lambda: C64,
    pub tau: C64,
    pub omega1: C64,
    pub omega2: C64,
    pub eta1: C64,
    pub eta2: C64,
    pub alpha: C64,
    pub beta: C64,
    pub gamma_sym: C64,
    pub delta: C64,
    pub m_sym: C64,
    pub n_sym: C64,
    /// Boundary symbol `lambda + (sigma tau^2 - gravity [[rho]]) / n`.
    pub s: C64,
}

impl SymbolEval {
    pub fn new(params: &FluidParams, lambda: C64, tau: C64) -> Result<Self> {
        if tau == ZERO {
            return Err(Error::SingularMode);
        }
        let omega1 = omega(params, Phase::Lower, lambda, tau)?;
        let omega2 = omega(params, Phase::Upper, lambda, tau)?;
        let (s1, s2) = (params.mu1.sqrt(), params.mu2.sqrt());
        let eta1 = s1 * omega1 + params.mu2 * tau;
        let eta2 = s2 * omega2 + params.mu1 * tau;
        let alpha = s1 * omega1 + s2 * omega2;
        let beta = (params.mu1 + params.mu2) * tau;
        let gamma_sym = (s2 * omega2 - s1 * omega1) - params.jump_mu() * tau;
        let delta = (omega1 * omega1 + omega2 * omega2) / tau;
        let m_sym = (alpha + beta) * (alpha + delta) - gamma_sym * gamma_sym;
        let n_sym = (params.rho1 + params.rho2) * lambda / tau + 4.0 / (1.0 / eta1 + 1.0 / eta2);
        let s = lambda + (params.sigma * tau * tau - params.gravity * params.jump_rho()) / n_sym;
        Ok(Self { lambda, tau, omega1, omega2, eta1, eta2, alpha, beta, gamma_sym, delta, m_sym, n_sym, s })
    }

    /// `d n / d lambda`.
    pub fn n_derivative(&self, params: &FluidParams) -> C64 {
        let d1 = params.mu1.sqrt() * params.rho1 / (2.0 * self.omega1);
        let d2 = params.mu2.sqrt() * params.rho2 / (2.0 * self.omega2);
        let (e1, e2) = (self.eta1, self.eta2);
        let sum = e1 + e2;
        (params.rho1 + params.rho2) / self.tau + 4.0 * (e2 * e2 * d1 + e1 * e1 * d2) / (sum * sum)
    }

    /// `d s / d lambda`.
    pub fn s_derivative(&self, params: &FluidParams) -> C64 {
        let load = params.sigma * self.tau * self.tau - params.gravity * params.jump_rho();
        C64::new(1.0, 0.0) - load * self.n_derivative(params) / (self.n_sym * self.n_sym)
    }
}

/// Dirichlet-to-Neumann matrix of one tangential mode, `(dim+1) x (dim+1)`,
/// stored in the leading block of a 3x3 array.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DnMatrix {
    pub dim: usize,
    pub entries: [[C64; 3]; 3],
    pub eval: SymbolEval,
    pub zeta: Wavevector,
}

impl DnMatrix {
    pub fn size(&self) -> usize {
        self.dim + 1
    }

    /// Matrix-vector product with `(v_b, w_b)`.
    pub fn apply(&self, v: &TanVec, w: C64) -> (TanVec, C64) {
        let n = self.dim;
        let mut x = [ZERO; 3];
        x[..n].copy_from_slice(&v[..n]);
        x[n] = w;
        let mut y = [ZERO; 3];
        for (r, yr) in y.iter_mut().enumerate().take(n + 1) {
            *yr = (0..=n).map(|c| self.entries[r][c] * x[c]).sum();
        }
        let mut gv = [ZERO; 2];
        gv[..n].copy_from_slice(&y[..n]);
        (gv, y[n])
    }
}

fn check_dim(dim: usize, xi: &Wavevector) -> Result<f64> {
    if dim != 1 && dim != 2 {
        return Err(Error::Usage(alloc::format!("tangential dimension must be 1 or 2, got {dim}")));
    }
    if dim == 1 && xi[1] != 0.0 {
        return Err(Error::Usage(alloc::format!("1-D wavevector has nonzero second component {}", xi[1])));
    }
    let tau = wavevector_norm(xi);
    if tau == 0.0 {
        return Err(Error::SingularMode);
    }
    Ok(tau)
}

fn zeta_dot(zeta: &Wavevector, v: &TanVec) -> C64 {
    zeta[0] * v[0] + zeta[1] * v[1]
}

pub fn dn_matrix(params: &FluidParams, lambda: C64, dim: usize, xi: &Wavevector) -> Result<DnMatrix> {
    let tau = check_dim(dim, xi)?;
    let eval = SymbolEval::new(params, lambda, C64::new(tau, 0.0))?;
    let zeta = [xi[0] / tau, xi[1] / tau];
    let mut entries = [[ZERO; 3]; 3];
    for r in 0..dim {
        for c in 0..dim {
            entries[r][c] = eval.beta * zeta[r] * zeta[c];
        }
        entries[r][r] += eval.alpha;
        entries[r][dim] = I * eval.gamma_sym * zeta[r];
        entries[dim][r] = -I * eval.gamma_sym * zeta[r];
    }
    entries[dim][dim] = eval.alpha + eval.delta;
    Ok(DnMatrix { dim, entries, eval, zeta })
}

/// Boundary velocity `(v_b, w_b)` whose normal-stress jump is `(g_v, g_w)`.
pub fn dn_inverse_apply(
    params: &FluidParams,
    lambda: C64,
    dim: usize,
    xi: &Wavevector,
    g_v: &TanVec,
    g_w: C64,
) -> Result<(TanVec, C64)> {
    let tau = check_dim(dim, xi)?;
    let e = SymbolEval::new(params, lambda, C64::new(tau, 0.0))?;
    dn_inverse_with(&e, dim, [xi[0] / tau, xi[1] / tau], g_v, g_w)
}

pub(crate) fn dn_inverse_with(
    e: &SymbolEval,
    dim: usize,
    zeta: Wavevector,
    g_v: &TanVec,
    g_w: C64,
) -> Result<(TanVec, C64)> {
    for (what, value) in [("n", e.n_sym), ("alpha + beta", e.alpha + e.beta), ("alpha", e.alpha)] {
        if value.norm() < 1e-300 {
            return Err(Error::Singularity { what, magnitude: value.norm() });
        }
    }
    let zg = zeta_dot(&zeta, g_v);
    let w_b = (I * e.gamma_sym * zg / (e.alpha + e.beta) + g_w) / e.n_sym;
    let zv = ((e.alpha + e.delta) * zg - I * e.gamma_sym * g_w) / ((e.alpha + e.beta) * e.n_sym);
    let mut v_b = [ZERO; 2];
    for j in 0..dim {
        v_b[j] = (g_v[j] - zeta[j] * (e.beta * zv + I * e.gamma_sym * w_b)) / e.alpha;
    }
    Ok((v_b, w_b))
}

/// `k(z) = [(rho1+rho2) z + 4 (1/eta1(z) + 1/eta2(z))^{-1}]^{-1}` at unit wavenumber.
pub fn k_fn(params: &FluidParams, z: C64) -> Result<C64> {
    let one = C64::new(1.0, 0.0);
    let r1 = guarded_sqrt(params.rho1 * z + params.mu1, z, one)?;
    let r2 = guarded_sqrt(params.rho2 * z + params.mu2, z, one)?;
    let e1 = params.mu1.sqrt() * r1 + params.mu2;
    let e2 = params.mu2.sqrt() * r2 + params.mu1;
    let denom = (params.rho1 + params.rho2) * z + 4.0 / (1.0 / e1 + 1.0 / e2);
    if denom.norm() < 1e-300 {
        return Err(Error::Singularity { what: "k denominator", magnitude: denom.norm() });
    }
    Ok(denom.inv())
}

/// `s(lambda, tau) = lambda + sigma tau k(z) - (gravity [[rho]] / tau) k(z)`, `z = lambda / tau^2`.
pub fn boundary_symbol(params: &FluidParams, lambda: C64, tau: C64) -> Result<C64> {
    if tau == ZERO {
        return Err(Error::SingularMode);
    }
    let k = k_fn(params, lambda / (tau * tau))?;
    let mut s = lambda + params.sigma * tau * k;
    if params.has_gravity() {
        s -= params.gravity * params.jump_rho() / tau * k;
    }
    Ok(s)
}

fn real_symbol(params: &FluidParams, lambda: f64, tau: f64) -> Result<f64> {
    Ok(boundary_symbol(params, C64::new(lambda, 0.0), C64::new(tau, 0.0))?.re)
}

/// Upper end of the growth-rate search interval.
pub fn growth_rate_ceiling(params: &FluidParams, tau: f64) -> f64 {
    1e6 * (params.sigma * tau + params.gravity * params.jump_rho().abs() / tau) / (params.rho1 + params.rho2)
}

/// Largest positive real root of `s(., tau)`, if any.
pub fn dispersion_root(params: &FluidParams, tau: f64) -> Result<Option<f64>> {
    if !(tau.is_finite() && tau > 0.0) {
        return Err(Error::Usage(alloc::format!("wavenumber must be > 0, got {tau}")));
    }
    if real_symbol(params, 0.0, tau)? >= 0.0 {
        return Ok(None);
    }
    let ceiling = growth_rate_ceiling(params, tau);
    let mut hi = ceiling * 1e-12;
    while real_symbol(params, hi, tau)? < 0.0 {
        hi *= 2.0;
        if hi > ceiling {
            return Ok(None);
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if real_symbol(params, mid, tau)? < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Wavenumber in `[tau_lo, tau_hi]` where the unstable root disappears,
/// located by bisection on the existence of [`dispersion_root`].
pub fn neutral_wavenumber(params: &FluidParams, tau_lo: f64, tau_hi: f64) -> Result<Option<f64>> {
    let unstable = |tau: f64| -> Result<bool> { Ok(dispersion_root(params, tau)?.is_some()) };
    if !(tau_lo > 0.0 && tau_hi > tau_lo) {
        return Err(Error::Usage(alloc::format!("bad wavenumber bracket [{tau_lo}, {tau_hi}]")));
    }
    if !unstable(tau_lo)? || unstable(tau_hi)? {
        return Ok(None);
    }
    let (mut lo, mut hi) = (tau_lo, tau_hi);
    while hi - lo > 1e-14 * hi {
        let mid = 0.5 * (lo + hi);
        if unstable(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(Some(0.5 * (lo + hi)))
}

/// Closed-form cutoff `sqrt(gravity [[rho]] / sigma)`; `None` when gravity
/// does not destabilize.
pub fn capillary_cutoff(params: &FluidParams) -> Option<f64> {
    let load = params.gravity * params.jump_rho();
    (load > 0.0).then(|| (load / params.sigma).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn omega_textbook_values() {
        let p = FluidParams::symmetric(1.0, 1.0, 1.0).unwrap();
        assert_eq!(omega(&p, Phase::Upper, c(0.0, 0.0), c(2.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert_eq!(omega(&p, Phase::Lower, c(3.0, 0.0), c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        assert!(matches!(omega(&p, Phase::Lower, c(-2.0, 0.0), c(1.0, 0.0)), Err(Error::Branch { .. })));
        assert!(matches!(omega(&p, Phase::Lower, c(0.0, 0.0), c(0.0, 0.0)), Err(Error::Branch { .. })));
    }

    #[test]
    fn equal_phases_decouple() {
        let p = FluidParams::new(1.3, 1.3, 0.7, 0.7, 1.0, 0.0).unwrap();
        let m = dn_matrix(&p, c(0.4, 2.0), 2, &[0.3, -1.1]).unwrap();
        assert!(m.eval.gamma_sym.norm() < 1e-15);
        for r in 0..2 {
            assert_eq!(m.entries[r][2], ZERO);
            assert_eq!(m.entries[2][r], ZERO);
        }
    }

    #[test]
    fn zero_wavenumber_is_singular() {
        let p = FluidParams::symmetric(1.0, 1.0, 1.0).unwrap();
        assert_eq!(dn_matrix(&p, c(1.0, 0.0), 1, &[0.0, 0.0]).unwrap_err(), Error::SingularMode);
        assert_eq!(boundary_symbol(&p, c(1.0, 0.0), ZERO).unwrap_err(), Error::SingularMode);
    }

    #[test]
    fn quasi_static_symbol() {
        let p = FluidParams::new(2.0, 5.0, 1.0, 1.0, 1.0, 0.0).unwrap();
        assert!((k_fn(&p, ZERO).unwrap() - c(0.25, 0.0)).norm() < 1e-15);
        let s = boundary_symbol(&p, ZERO, c(3.0, 0.0)).unwrap();
        assert!((s - c(0.75, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn inverse_special_cases() {
        let p = FluidParams::symmetric(1.0, 2.0, 1.0).unwrap();
        let (lambda, xi) = (c(1.5, 0.5), [0.6, 0.8]);
        let e = SymbolEval::new(&p, lambda, c(1.0, 0.0)).unwrap();
        let (v, w) = dn_inverse_apply(&p, lambda, 2, &xi, &[ZERO; 2], c(2.0, -1.0)).unwrap();
        assert_eq!(w, c(2.0, -1.0) / e.n_sym);
        assert!(v.iter().all(|x| x.norm() < 1e-15));
        let perp = [c(-0.8, 0.1), c(0.6, -0.075)];
        let (v, w) = dn_inverse_apply(&p, lambda, 2, &xi, &perp, ZERO).unwrap();
        assert!(w.norm() < 1e-15);
        for j in 0..2 {
            assert!((v[j] - perp[j] / e.alpha).norm() < 1e-15);
        }
    }

    #[test]
    fn no_root_without_gravity() {
        let p = FluidParams::new(1.0, 2.0, 0.5, 3.0, 1.0, 0.0).unwrap();
        for tau in [1e-3, 0.1, 1.0, 10.0] {
            assert_eq!(dispersion_root(&p, tau).unwrap(), None);
        }
    }

    #[test]
    fn unstable_root_is_a_zero_of_s() {
        let p = FluidParams::new(1.0, 2.0, 1.0, 1.0, 1.0, 1.0).unwrap();
        let root = dispersion_root(&p, 0.5).unwrap().unwrap();
        let s = boundary_symbol(&p, c(root, 0.0), c(0.5, 0.0)).unwrap();
        assert!(s.norm() < 1e-12);
        assert_eq!(dispersion_root(&p, 2.0).unwrap(), None);
    }
}
