//! Finite-difference oracle for one tangential mode of the resolvent
//! problem on the truncated line `[-Y, Y]`.
//!
//! Velocities live on the levels of both half-lines, the pressure on the
//! cell centres between them. Momentum is imposed at interior levels and
//! continuity at cell centres, both second order. The interface level of
//! each side carries half of the interface conditions; the far level
//! carries homogeneous Dirichlet data. Reported pressures are interpolated
//! back to the levels.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use super::banded::{BandLu, BandMatrix};
use super::profile::ModeValue;
use crate::error::{Error, Result};
use crate::grid::VerticalGrid;
use crate::params::{FluidParams, Phase};
use crate::symbols::omega;
use crate::{wavevector_norm, TanVec, Wavevector, C64, I, ZERO};

/// Minimum truncation in units of the slowest decay length.
pub const MIN_DECAY_LENGTHS: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InterfaceKind {
    /// Prescribed velocity on both sides of the interface.
    Dirichlet,
    /// Continuous velocity and prescribed stress jump.
    Jump,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum InterfaceData {
    Dirichlet { v: TanVec, w: C64 },
    Jump { g_v: TanVec, g_w: C64 },
}

impl InterfaceData {
    pub fn kind(&self) -> InterfaceKind {
        match self {
            InterfaceData::Dirichlet { .. } => InterfaceKind::Dirichlet,
            InterfaceData::Jump { .. } => InterfaceKind::Jump,
        }
    }
}

/// Body force `(f_v, f_w)` and divergence source `f_d` at one level.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ForcingSample {
    pub f_v: TanVec,
    pub f_w: C64,
    pub f_d: C64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ModeForcing {
    pub upper: Vec<ForcingSample>,
    pub lower: Vec<ForcingSample>,
}

impl ModeForcing {
    pub fn zeros(vgrid: &VerticalGrid) -> Self {
        let z = vec![ForcingSample::default(); vgrid.levels()];
        Self { upper: z.clone(), lower: z }
    }

    pub fn side(&self, phase: Phase) -> &[ForcingSample] {
        match phase {
            Phase::Upper => &self.upper,
            Phase::Lower => &self.lower,
        }
    }

    pub fn side_mut(&mut self, phase: Phase) -> &mut Vec<ForcingSample> {
        match phase {
            Phase::Upper => &mut self.upper,
            Phase::Lower => &mut self.lower,
        }
    }
}

/// Sampled solution; `upper[i]` and `lower[i]` sit at depth `i * dy`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericModeSolution {
    pub lambda: C64,
    pub dim: usize,
    pub xi: Wavevector,
    pub spacing: f64,
    pub upper: Vec<ModeValue>,
    pub lower: Vec<ModeValue>,
    /// Max-norm residual of the scaled discrete system.
    pub residual: f64,
}

impl NumericModeSolution {
    pub fn side(&self, phase: Phase) -> &[ModeValue] {
        match phase {
            Phase::Upper => &self.upper,
            Phase::Lower => &self.lower,
        }
    }

    pub fn trace(&self, phase: Phase) -> ModeValue {
        self.side(phase)[0]
    }

    /// Second-order one-sided `d/dy` of `(v, w)` at the interface.
    pub fn interface_slope(&self, phase: Phase) -> (TanVec, C64) {
        let s = self.side(phase);
        let sign = phase_sign(phase);
        let d = |f0: C64, f1: C64, f2: C64| sign * (-3.0 * f0 + 4.0 * f1 - f2) / (2.0 * self.spacing);
        let mut dv = [ZERO; 2];
        for (j, slot) in dv.iter_mut().enumerate().take(self.dim) {
            *slot = d(s[0].v[j], s[1].v[j], s[2].v[j]);
        }
        (dv, d(s[0].w, s[1].w, s[2].w))
    }

    /// `(-[[mu dv/dy]] - [[mu i xi w]], -2 [[mu dw/dy]] + [[pi]])`.
    pub fn stress_jump(&self, params: &FluidParams) -> (TanVec, C64) {
        let (dv2, dw2) = self.interface_slope(Phase::Upper);
        let (dv1, dw1) = self.interface_slope(Phase::Lower);
        let (u2, u1) = (self.trace(Phase::Upper), self.trace(Phase::Lower));
        let mut g_v = [ZERO; 2];
        for j in 0..self.dim {
            g_v[j] =
                -(params.mu2 * dv2[j] - params.mu1 * dv1[j]) - I * self.xi[j] * (params.mu2 * u2.w - params.mu1 * u1.w);
        }
        let g_w = -2.0 * (params.mu2 * dw2 - params.mu1 * dw1) + u2.pi - u1.pi;
        (g_v, g_w)
    }

    /// Largest `|u(0+) - u(0-)|`.
    pub fn velocity_jump(&self) -> f64 {
        let (a, b) = (self.upper[0], self.lower[0]);
        (0..self.dim).map(|j| (a.v[j] - b.v[j]).norm()).fold((a.w - b.w).norm(), f64::max)
    }
}

fn phase_sign(phase: Phase) -> f64 {
    match phase {
        Phase::Upper => 1.0,
        Phase::Lower => -1.0,
    }
}

/// Assembled and factored discrete operator for one `(lambda, xi)`; reusable
/// across right-hand sides of the same interface kind.
#[derive(Debug, Clone)]
pub struct ModeSystem {
    lambda: C64,
    dim: usize,
    xi: Wavevector,
    vgrid: VerticalGrid,
    kind: InterfaceKind,
    matrix: BandMatrix,
    lu: BandLu,
}

struct Layout {
    m: usize,
    k: usize,
}

impl Layout {
    fn node(&self, phase: Phase, level: usize) -> usize {
        match phase {
            Phase::Lower => self.m - level,
            Phase::Upper => self.m + 1 + level,
        }
    }

    fn index(&self, phase: Phase, level: usize, comp: usize) -> usize {
        self.node(phase, level) * self.k + comp
    }
}

/// Slowest vertical decay rate of the homogeneous solutions.
pub fn decay_rate(params: &FluidParams, lambda: C64, tau: f64) -> Result<f64> {
    let mut rate = tau;
    for phase in [Phase::Lower, Phase::Upper] {
        let om = omega(params, phase, lambda, C64::new(tau, 0.0))?;
        rate = rate.min(om.re / params.mu(phase).sqrt());
    }
    Ok(rate)
}

impl ModeSystem {
    pub fn new(
        params: &FluidParams,
        lambda: C64,
        dim: usize,
        xi: &Wavevector,
        vgrid: &VerticalGrid,
        kind: InterfaceKind,
    ) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Usage(alloc::format!("tangential dimension must be 1 or 2, got {dim}")));
        }
        let tau = wavevector_norm(xi);
        if tau == 0.0 {
            return Err(Error::SingularMode);
        }
        let rate = decay_rate(params, lambda, tau)?;
        if vgrid.truncation() * rate < MIN_DECAY_LENGTHS {
            return Err(Error::Usage(alloc::format!(
                "truncation Y = {} is below {MIN_DECAY_LENGTHS} decay lengths (rate {rate})",
                vgrid.truncation()
            )));
        }
        let m = vgrid.points();
        let k = dim + 2;
        let lay = Layout { m, k };
        let band = 4 * k - 1;
        let mut a = BandMatrix::zeros(2 * (m + 1) * k, band, band);
        let h = vgrid.spacing();
        let (w_comp, p_comp) = (dim, dim + 1);
        let one = C64::new(1.0, 0.0);

        for phase in [Phase::Lower, Phase::Upper] {
            let sign = phase_sign(phase);
            let mu = params.mu(phase);
            let omega2 = params.rho(phase) * lambda + mu * tau * tau;
            let col = |level: usize, comp: usize| lay.index(phase, level, comp);
            let row = |level: usize, r: usize| lay.node(phase, level) * k + r;

            for level in 1..m {
                // Momentum at nodes, scaled by h^2. Pressure cells sit at
                // depths (level -/+ 1/2) h.
                for comp in 0..=dim {
                    let r = row(level, comp);
                    a.add(r, col(level, comp), omega2 * h * h + 2.0 * mu);
                    a.add(r, col(level - 1, comp), C64::new(-mu, 0.0));
                    a.add(r, col(level + 1, comp), C64::new(-mu, 0.0));
                    if comp < dim {
                        a.add(r, col(level, p_comp), I * xi[comp] * 0.5 * h * h);
                        a.add(r, col(level - 1, p_comp), I * xi[comp] * 0.5 * h * h);
                    } else {
                        a.add(r, col(level, p_comp), C64::new(sign * h, 0.0));
                        a.add(r, col(level - 1, p_comp), C64::new(-sign * h, 0.0));
                    }
                }
            }
            // Continuity at cell centres, scaled by h.
            for cell in 0..m {
                let r = row(cell, p_comp);
                for j in 0..dim {
                    a.add(r, col(cell, j), I * xi[j] * 0.5 * h);
                    a.add(r, col(cell + 1, j), I * xi[j] * 0.5 * h);
                }
                a.add(r, col(cell + 1, w_comp), C64::new(sign, 0.0));
                a.add(r, col(cell, w_comp), C64::new(-sign, 0.0));
            }
            // Far field; the pressure slot of the last level is unused.
            for comp in 0..k {
                a.add(row(m, comp), col(m, comp), one);
            }
        }

        let lower_row = |r: usize| lay.node(Phase::Lower, 0) * k + r;
        let upper_row = |r: usize| lay.node(Phase::Upper, 0) * k + r;
        match kind {
            InterfaceKind::Dirichlet => {
                for comp in 0..=dim {
                    a.add(lower_row(comp), lay.index(Phase::Lower, 0, comp), one);
                    a.add(upper_row(comp), lay.index(Phase::Upper, 0, comp), one);
                }
            }
            InterfaceKind::Jump => {
                for comp in 0..=dim {
                    a.add(lower_row(comp), lay.index(Phase::Upper, 0, comp), one);
                    a.add(lower_row(comp), lay.index(Phase::Lower, 0, comp), -one);
                }
                // Stress rows scaled by h. One-sided d/dy on side j is
                // sign_j * (-3 f0 + 4 f1 - f2) / (2h); the interface pressure
                // is extrapolated from the first two cells.
                let slope = [(0usize, -1.5), (1, 2.0), (2, -0.5)];
                for comp in 0..=dim {
                    let r = upper_row(comp);
                    let factor = if comp < dim { 1.0 } else { 2.0 };
                    for &(lv, c) in &slope {
                        a.add(r, lay.index(Phase::Upper, lv, comp), C64::new(-factor * params.mu2 * c, 0.0));
                        a.add(r, lay.index(Phase::Lower, lv, comp), C64::new(-factor * params.mu1 * c, 0.0));
                    }
                    if comp < dim {
                        a.add(r, lay.index(Phase::Upper, 0, w_comp), -I * xi[comp] * params.mu2 * h);
                        a.add(r, lay.index(Phase::Lower, 0, w_comp), I * xi[comp] * params.mu1 * h);
                    } else {
                        for (cell, c) in [(0usize, 1.5), (1, -0.5)] {
                            a.add(r, lay.index(Phase::Upper, cell, p_comp), C64::new(c * h, 0.0));
                            a.add(r, lay.index(Phase::Lower, cell, p_comp), C64::new(-c * h, 0.0));
                        }
                    }
                }
            }
        }

        let lu = a.clone().factor()?;
        Ok(Self { lambda, dim, xi: *xi, vgrid: *vgrid, kind, matrix: a, lu })
    }

    pub fn kind(&self) -> InterfaceKind {
        self.kind
    }

    pub fn solve(&self, data: &InterfaceData, forcing: Option<&ModeForcing>) -> Result<NumericModeSolution> {
        if data.kind() != self.kind {
            return Err(Error::Usage(alloc::format!(
                "system assembled for {:?} data, got {:?}",
                self.kind,
                data.kind()
            )));
        }
        let (dim, m, k) = (self.dim, self.vgrid.points(), self.dim + 2);
        let lay = Layout { m, k };
        let h = self.vgrid.spacing();
        let mut b = vec![ZERO; self.matrix.size()];
        if let Some(f) = forcing {
            if f.upper.len() != m + 1 || f.lower.len() != m + 1 {
                return Err(Error::Usage(alloc::format!(
                    "forcing has {}/{} levels, grid has {}",
                    f.lower.len(),
                    f.upper.len(),
                    m + 1
                )));
            }
            for phase in [Phase::Lower, Phase::Upper] {
                let side = f.side(phase);
                for level in 0..=m {
                    let base = lay.node(phase, level) * k;
                    if level > 0 && level < m {
                        for j in 0..dim {
                            b[base + j] = side[level].f_v[j] * h * h;
                        }
                        b[base + dim] = side[level].f_w * h * h;
                    }
                    if level < m {
                        b[base + k - 1] = 0.5 * (side[level].f_d + side[level + 1].f_d) * h;
                    }
                }
            }
        }
        let lower = lay.node(Phase::Lower, 0) * k;
        let upper = lay.node(Phase::Upper, 0) * k;
        match *data {
            InterfaceData::Dirichlet { v, w } => {
                b[lower..lower + dim].copy_from_slice(&v[..dim]);
                b[upper..upper + dim].copy_from_slice(&v[..dim]);
                b[lower + dim] = w;
                b[upper + dim] = w;
            }
            InterfaceData::Jump { g_v, g_w } => {
                for j in 0..dim {
                    b[upper + j] = g_v[j] * h;
                }
                b[upper + dim] = g_w * h;
            }
        }
        let x = self.lu.solve(&b);
        let ax = self.matrix.mul_vec(&x);
        let scale = b.iter().chain(&x).fold(0.0f64, |s, c| s.max(c.norm())).max(f64::MIN_POSITIVE);
        let residual = ax.iter().zip(&b).fold(0.0f64, |r, (p, q)| r.max((p - q).norm())) / scale;
        let read = |phase: Phase| -> Vec<ModeValue> {
            let cell = |c: usize| x[lay.index(phase, c, dim + 1)];
            (0..=m)
                .map(|level| {
                    let base = lay.index(phase, level, 0);
                    let mut v = [ZERO; 2];
                    v[..dim].copy_from_slice(&x[base..base + dim]);
                    let pi = match level {
                        0 => 1.5 * cell(0) - 0.5 * cell(1),
                        l if l == m => 1.5 * cell(m - 1) - 0.5 * cell(m - 2),
                        l => 0.5 * (cell(l - 1) + cell(l)),
                    };
                    ModeValue { v, w: x[base + dim], pi }
                })
                .collect()
        };
        let out = NumericModeSolution {
            lambda: self.lambda,
            dim,
            xi: self.xi,
            spacing: h,
            upper: read(Phase::Upper),
            lower: read(Phase::Lower),
            residual,
        };
        if let Some(bad) = x.iter().position(|c| !(c.re.is_finite() && c.im.is_finite())) {
            return Err(Error::Discretization { pivot: f64::NAN, row: bad });
        }
        Ok(out)
    }
}

pub fn solve_mode_bvp(
    params: &FluidParams,
    lambda: C64,
    dim: usize,
    xi: &Wavevector,
    vgrid: &VerticalGrid,
    data: &InterfaceData,
    forcing: Option<&ModeForcing>,
) -> Result<NumericModeSolution> {
    ModeSystem::new(params, lambda, dim, xi, vgrid, data.kind())?.solve(data, forcing)
}

/// Numerical Dirichlet-to-Neumann map: stress jump of the discrete
/// solution with interface velocity `(v_b, w_b)`.
pub fn dn_numeric(
    params: &FluidParams,
    lambda: C64,
    dim: usize,
    xi: &Wavevector,
    vgrid: &VerticalGrid,
    v_b: &TanVec,
    w_b: C64,
) -> Result<(TanVec, C64)> {
    let sol = solve_mode_bvp(params, lambda, dim, xi, vgrid, &InterfaceData::Dirichlet { v: *v_b, w: w_b }, None)?;
    Ok(sol.stress_jump(params))
}
