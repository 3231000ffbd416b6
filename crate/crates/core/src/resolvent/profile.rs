//! Closed-form per-mode solutions of the two-phase resolvent problem with
//! prescribed interface velocity.
//!
//! The coefficients are stored in a form that stays finite as `lambda -> 0`:
//! `c_j = alpha_j d_j` with `d_j = omega_j / sqrt(mu_j) - tau`, and the
//! pressure amplitudes `beta_j = rho_j lambda alpha_j`.

use crate::error::{Error, Result};
use crate::params::{FluidParams, Phase};
use crate::symbols::omega;
use crate::{wavevector_norm, TanVec, Wavevector, C64, I, ZERO};
#[allow(unused_imports)]
use num_traits::Float;

/// Velocity and pressure of one mode at one height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeValue {
    pub v: TanVec,
    pub w: C64,
    pub pi: C64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Side {
    omega: C64,
    sqrt_mu: f64,
    /// `omega / sqrt(mu) - tau`, computed without cancellation.
    d: C64,
    c: C64,
    beta: C64,
    rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeProfile {
    pub lambda: C64,
    pub dim: usize,
    pub xi: Wavevector,
    pub tau: f64,
    pub v_b: TanVec,
    pub w_b: C64,
    lower: Side,
    upper: Side,
}

fn div_ixi(xi: &Wavevector, v: &TanVec) -> C64 {
    I * (xi[0] * v[0] + xi[1] * v[1])
}

/// `(exp(-d s) - 1) / d`, with the removable singularity at `d = 0`.
fn phi(d: C64, s: f64) -> C64 {
    let x = -d * s;
    if x.norm() < 0.5 {
        let mut term = C64::new(1.0, 0.0);
        let mut sum = term;
        for k in 2..24 {
            term *= x / k as f64;
            sum += term;
        }
        -s * sum
    } else {
        (x.exp() - 1.0) / d
    }
}

pub fn solve_mode_dirichlet(
    params: &FluidParams,
    lambda: C64,
    dim: usize,
    xi: &Wavevector,
    v_b: &TanVec,
    w_b: C64,
) -> Result<ModeProfile> {
    if dim != 1 && dim != 2 {
        return Err(Error::Usage(alloc::format!("tangential dimension must be 1 or 2, got {dim}")));
    }
    let tau = wavevector_norm(xi);
    if tau == 0.0 {
        return Err(Error::SingularMode);
    }
    let tau_c = C64::new(tau, 0.0);
    let div = div_ixi(xi, v_b);
    let side = |phase: Phase, sign: f64| -> Result<Side> {
        let omega = omega(params, phase, lambda, tau_c)?;
        let sqrt_mu = params.mu(phase).sqrt();
        let rho = params.rho(phase);
        let d = rho * lambda / (sqrt_mu * (omega + sqrt_mu * tau));
        let drive = sqrt_mu * div - sign * omega * w_b;
        Ok(Side { omega, sqrt_mu, d, c: -drive / (sqrt_mu * tau), beta: -(omega + sqrt_mu * tau) / tau * drive, rho })
    };
    let mut v = [ZERO; 2];
    v[..dim].copy_from_slice(&v_b[..dim]);
    Ok(ModeProfile {
        lambda,
        dim,
        xi: *xi,
        tau,
        v_b: v,
        w_b,
        lower: side(Phase::Lower, -1.0)?,
        upper: side(Phase::Upper, 1.0)?,
    })
}

impl ModeProfile {
    fn side(&self, phase: Phase) -> &Side {
        match phase {
            Phase::Lower => &self.lower,
            Phase::Upper => &self.upper,
        }
    }

    /// Pressure amplitude `rho_j lambda alpha_j`.
    pub fn beta(&self, phase: Phase) -> C64 {
        self.side(phase).beta
    }

    /// `alpha_j`, defined only for `lambda != 0`.
    pub fn alpha(&self, phase: Phase) -> Option<C64> {
        let s = self.side(phase);
        (self.lambda != ZERO).then(|| s.beta / (s.rho * self.lambda))
    }

    /// `a_j = v_b + i xi alpha_j`, defined only for `lambda != 0`.
    pub fn a(&self, phase: Phase) -> Option<TanVec> {
        let alpha = self.alpha(phase)?;
        let mut a = self.v_b;
        for j in 0..self.dim {
            a[j] += I * self.xi[j] * alpha;
        }
        Some(a)
    }

    /// Value at height `y`; `phase` picks the side and must agree with the
    /// sign of `y` unless `y == 0`.
    pub fn evaluate(&self, y: f64, phase: Phase) -> Result<ModeValue> {
        let sign = match phase {
            Phase::Upper => 1.0,
            Phase::Lower => -1.0,
        };
        if y * sign < 0.0 {
            return Err(Error::Usage(alloc::format!("height {y} lies outside the {phase:?} phase")));
        }
        let s = y.abs();
        let side = self.side(phase);
        let ratio = side.sqrt_mu / side.omega;
        let decay = (-side.omega * s / side.sqrt_mu).exp();
        let plain = (-self.tau * s).exp();
        let shape = plain * phi(side.d, s);
        let mut v = [ZERO; 2];
        for j in 0..self.dim {
            v[j] = self.v_b[j] * decay + I * self.xi[j] * side.c * shape;
        }
        let div = div_ixi(&self.xi, &self.v_b);
        let w = sign * (ratio * div * decay + self.tau * side.c * (ratio * decay - shape));
        Ok(ModeValue { v, w, pi: side.beta * plain })
    }

    /// One-sided `d/dy` of `(v, w)` at the interface.
    pub fn interface_slope(&self, phase: Phase) -> (TanVec, C64) {
        let side = self.side(phase);
        let sign = match phase {
            Phase::Upper => 1.0,
            Phase::Lower => -1.0,
        };
        let rate = side.omega / side.sqrt_mu;
        let mut dv = [ZERO; 2];
        for j in 0..self.dim {
            dv[j] = -sign * (rate * self.v_b[j] + I * self.xi[j] * side.c);
        }
        (dv, -div_ixi(&self.xi, &self.v_b))
    }

    /// Interface stress functional
    /// `(-[[mu dv/dy]] - [[mu i xi w]], -2 [[mu dw/dy]] + [[pi]])`.
    pub fn jump_functional(&self, params: &FluidParams) -> (TanVec, C64) {
        let (dv2, dw2) = self.interface_slope(Phase::Upper);
        let (dv1, dw1) = self.interface_slope(Phase::Lower);
        let jump_mu = params.jump_mu();
        let mut g_v = [ZERO; 2];
        for j in 0..self.dim {
            g_v[j] = -(params.mu2 * dv2[j] - params.mu1 * dv1[j]) - I * self.xi[j] * jump_mu * self.w_b;
        }
        let g_w = -2.0 * (params.mu2 * dw2 - params.mu1 * dw1) + self.upper.beta - self.lower.beta;
        (g_v, g_w)
    }

    /// Slowest vertical decay rate `min(Re omega_j / sqrt(mu_j), tau)`.
    pub fn decay_rate(&self) -> f64 {
        [self.lower, self.upper].iter().map(|s| s.omega.re / s.sqrt_mu).fold(self.tau, f64::min)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params() -> FluidParams {
        FluidParams::new(1.0, 2.5, 0.7, 3.0, 1.0, 0.0).unwrap()
    }

    #[test]
    fn trivial_data_gives_zero_profile() {
        let p = solve_mode_dirichlet(&params(), C64::new(1.0, 1.0), 1, &[2.0, 0.0], &[ZERO; 2], ZERO).unwrap();
        for y in [-1.0, 0.0, 0.5] {
            let phase = if y < 0.0 { Phase::Lower } else { Phase::Upper };
            let val = p.evaluate(y, phase).unwrap();
            assert_eq!(val, ModeValue { v: [ZERO; 2], w: ZERO, pi: ZERO });
        }
    }

    #[test]
    fn traces_reproduce_dirichlet_data() {
        let v_b = [C64::new(0.3, -1.2), C64::new(-0.4, 0.9)];
        let w_b = C64::new(1.1, 0.2);
        for lambda in [C64::new(0.0, 0.0), C64::new(2.0, -3.0)] {
            let p = solve_mode_dirichlet(&params(), lambda, 2, &[0.7, -1.3], &v_b, w_b).unwrap();
            for phase in [Phase::Lower, Phase::Upper] {
                let val = p.evaluate(0.0, phase).unwrap();
                assert!((val.w - w_b).norm() < 1e-12);
                for j in 0..2 {
                    assert!((val.v[j] - v_b[j]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn pressure_jump_reads_off_beta() {
        let p = solve_mode_dirichlet(
            &params(),
            C64::new(0.5, 0.5),
            1,
            &[1.0, 0.0],
            &[C64::new(1.0, 0.0), ZERO],
            C64::new(0.0, 1.0),
        )
        .unwrap();
        let jump = p.evaluate(0.0, Phase::Upper).unwrap().pi - p.evaluate(0.0, Phase::Lower).unwrap().pi;
        let expected = p.upper.rho * p.lambda * p.alpha(Phase::Upper).unwrap()
            - p.lower.rho * p.lambda * p.alpha(Phase::Lower).unwrap();
        assert!((jump - expected).norm() < 1e-12 * expected.norm());
    }

    #[test]
    fn wrong_side_is_rejected() {
        let p = solve_mode_dirichlet(&params(), C64::new(1.0, 0.0), 1, &[1.0, 0.0], &[ZERO; 2], ZERO).unwrap();
        assert!(p.evaluate(-0.1, Phase::Upper).is_err());
    }

    #[test]
    fn phi_series_matches_direct_form() {
        let d = C64::new(0.3, 0.2);
        for s in [0.1, 1.0, 1.6] {
            let direct = ((-d * s).exp() - 1.0) / d;
            assert!((phi(d, s) - direct).norm() < 1e-14);
        }
        assert_eq!(phi(ZERO, 2.0), C64::new(-2.0, 0.0));
    }
}
