//! Nonlinear terms of the flattened-interface system, evaluated on grid data.
//!
//! Tangential derivatives are spectral, vertical derivatives are second-order
//! finite differences, one-sided at the interface and at the far field.
//! Jumps are upper minus lower one-sided interface values.

use alloc::vec;
use alloc::vec::Vec;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fields::{BulkFields, InterfaceState, LayeredField};
use crate::grid::{TangentialGrid, VerticalGrid};
use crate::params::{FluidParams, Phase};
use crate::spectral::{derivative_modes, derivatives, forward_transform, gradient, inverse_transform};

const PHASES: [Phase; 2] = [Phase::Lower, Phase::Upper];

fn sign(phase: Phase) -> f64 {
    match phase {
        Phase::Upper => 1.0,
        Phase::Lower => -1.0,
    }
}

fn check_len(what: &str, got: usize, want: usize) -> Result<()> {
    if got != want {
        return Err(Error::Usage(alloc::format!("{what} has {got} samples, expected {want}")));
    }
    Ok(())
}

/// `d/dy`; `y` increases with the level index on the upper side and
/// decreases on the lower side.
pub fn vertical_derivative(vgrid: &VerticalGrid, field: &LayeredField) -> LayeredField {
    let (n, m, dy) = (field.ntan(), vgrid.points(), vgrid.spacing());
    let mut out = field.clone();
    for phase in PHASES {
        let src = field.side(phase);
        let dst = out.side_mut(phase);
        let f = |l: usize, p: usize| src[l * n + p];
        let scale = sign(phase) / (2.0 * dy);
        for p in 0..n {
            dst[p] = scale * (-3.0 * f(0, p) + 4.0 * f(1, p) - f(2, p));
            for l in 1..m {
                dst[l * n + p] = scale * (f(l + 1, p) - f(l - 1, p));
            }
            dst[m * n + p] = scale * (3.0 * f(m, p) - 4.0 * f(m - 1, p) + f(m - 2, p));
        }
    }
    out
}

/// `d^2/dy^2`, with four-point one-sided closures at both ends.
pub fn vertical_second_derivative(vgrid: &VerticalGrid, field: &LayeredField) -> LayeredField {
    let (n, m, dy) = (field.ntan(), vgrid.points(), vgrid.spacing());
    let mut out = field.clone();
    let inv = 1.0 / (dy * dy);
    for phase in PHASES {
        let src = field.side(phase);
        let dst = out.side_mut(phase);
        let f = |l: usize, p: usize| src[l * n + p];
        for p in 0..n {
            dst[p] = inv * (2.0 * f(0, p) - 5.0 * f(1, p) + 4.0 * f(2, p) - f(3, p));
            for l in 1..m {
                dst[l * n + p] = inv * (f(l + 1, p) - 2.0 * f(l, p) + f(l - 1, p));
            }
            dst[m * n + p] = inv * (2.0 * f(m, p) - 5.0 * f(m - 1, p) + 4.0 * f(m - 2, p) - f(m - 3, p));
        }
    }
    out
}

/// Spectral tangential gradient of every level.
pub fn tangential_gradient(grid: &TangentialGrid, field: &LayeredField) -> Result<Vec<LayeredField>> {
    let n = field.ntan();
    let mut out = vec![field.clone(); grid.dim()];
    for phase in PHASES {
        for level in 0..field.levels() {
            let modes = forward_transform(grid, field.level(phase, level))?;
            for (axis, target) in out.iter_mut().enumerate() {
                let d = inverse_transform(grid, &derivative_modes(grid, &modes, axis))?;
                target.side_mut(phase)[level * n..(level + 1) * n].copy_from_slice(&d);
            }
        }
    }
    Ok(out)
}

/// Geometric data of the interface graph.
#[derive(Debug, Clone)]
pub struct Geometry {
    pub grad: Vec<Vec<f64>>,
    pub hessian: Vec<Vec<Vec<f64>>>,
    pub laplacian: Vec<f64>,
    pub kappa: Vec<f64>,
    pub g_kappa: Vec<f64>,
}

impl Geometry {
    pub fn grad_sq(&self, p: usize) -> f64 {
        self.grad.iter().map(|g| g[p] * g[p]).sum()
    }
}

/// `G_kappa` at one point from the gradient, Hessian and Laplacian of `h`.
pub fn g_kappa_pointwise(grad: &[f64], hessian: &[&[f64]], laplacian: f64) -> f64 {
    let q: f64 = grad.iter().map(|g| g * g).sum();
    let root = (1.0 + q).sqrt();
    let mut quad = 0.0;
    for (i, gi) in grad.iter().enumerate() {
        for (j, gj) in grad.iter().enumerate() {
            quad += gi * hessian[i][j] * gj;
        }
    }
    q * laplacian / ((1.0 + root) * root) + quad / ((1.0 + q) * root)
}

/// Curvature `kappa = Delta h - G_kappa(h)` and `G_kappa(h)`.
pub fn curvature(grid: &TangentialGrid, h: &InterfaceState) -> Result<Geometry> {
    check_len("height field", h.h.len(), grid.len())?;
    let d = derivatives(grid, &h.h)?;
    let dim = grid.dim();
    let mut g_kappa = vec![0.0; grid.len()];
    let mut kappa = vec![0.0; grid.len()];
    for p in 0..grid.len() {
        let grad: Vec<f64> = (0..dim).map(|j| d.grad[j][p]).collect();
        let rows: Vec<Vec<f64>> = (0..dim).map(|i| (0..dim).map(|j| d.hessian[i][j][p]).collect()).collect();
        let refs: Vec<&[f64]> = rows.iter().map(|r| r.as_slice()).collect();
        g_kappa[p] = g_kappa_pointwise(&grad, &refs, d.laplacian[p]);
        kappa[p] = d.laplacian[p] - g_kappa[p];
    }
    Ok(Geometry { grad: d.grad, hessian: d.hessian, laplacian: d.laplacian, kappa, g_kappa })
}

/// Unit normal `(-grad h, 1) / sqrt(1 + |grad h|^2)` at one point.
pub fn normal_pointwise(grad: &[f64]) -> Vec<f64> {
    let root = (1.0 + grad.iter().map(|g| g * g).sum::<f64>()).sqrt();
    grad.iter().map(|g| -g / root).chain(core::iter::once(1.0 / root)).collect()
}

/// Outer normal of the lower phase (`dim + 1` component fields) and the
/// normal velocity `dh/dt / sqrt(1 + |grad h|^2)`.
pub fn normal_and_velocity(
    grid: &TangentialGrid,
    h: &InterfaceState,
    dh_dt: &[f64],
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    check_len("height rate", dh_dt.len(), grid.len())?;
    let grad = gradient(grid, &h.h)?;
    let mut nu = vec![vec![0.0; grid.len()]; grid.dim() + 1];
    let mut vel = vec![0.0; grid.len()];
    for p in 0..grid.len() {
        let g: Vec<f64> = grad.iter().map(|c| c[p]).collect();
        for (c, value) in normal_pointwise(&g).into_iter().enumerate() {
            nu[c][p] = value;
        }
        vel[p] = dh_dt[p] * nu[grid.dim()][p];
    }
    Ok((nu, vel))
}

/// Bulk right-hand sides `(F_v, F_w, F_d)`.
#[derive(Debug, Clone)]
pub struct BulkTerms {
    pub f_v: Vec<LayeredField>,
    pub f_w: LayeredField,
    pub f_d: LayeredField,
}

/// All six right-hand sides of the transformed system.
#[derive(Debug, Clone)]
pub struct NonlinearTerms {
    pub f_v: Vec<LayeredField>,
    pub f_w: LayeredField,
    pub f_d: LayeredField,
    pub g_v: Vec<Vec<f64>>,
    pub g_w: Vec<f64>,
    pub h: Vec<f64>,
}

impl NonlinearTerms {
    /// Evaluates every term, with the pressure and its jump read from `u.pi`.
    pub fn evaluate(
        params: &FluidParams,
        grid: &TangentialGrid,
        vgrid: &VerticalGrid,
        u: &BulkFields,
        h: &InterfaceState,
        dh_dt: &[f64],
    ) -> Result<Self> {
        let bulk = bulk_terms(params, grid, vgrid, u, &u.pi, h, dh_dt)?;
        let (g_v, g_w) = boundary_terms(params, grid, vgrid, u, &pressure_jump(&u.pi), h)?;
        let kin = kinematic_term(grid, u, h)?;
        Ok(Self { f_v: bulk.f_v, f_w: bulk.f_w, f_d: bulk.f_d, g_v, g_w, h: kin })
    }

    /// Largest absolute value over every field.
    pub fn sup_norm(&self) -> f64 {
        let sup = |f: &[f64]| f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        let bulk = self.f_v.iter().chain([&self.f_w, &self.f_d]).map(|f| f.sup_norm()).fold(0.0, f64::max);
        let iface = self.g_v.iter().map(|f| sup(f)).fold(sup(&self.g_w).max(sup(&self.h)), f64::max);
        bulk.max(iface)
    }
}

/// `[[pi]]`, upper minus lower interface values.
pub fn pressure_jump(pi: &LayeredField) -> Vec<f64> {
    pi.trace(Phase::Upper).iter().zip(pi.trace(Phase::Lower)).map(|(a, b)| a - b).collect()
}

fn check_state(grid: &TangentialGrid, vgrid: &VerticalGrid, u: &BulkFields, h: &InterfaceState) -> Result<()> {
    u.check_layout(grid, vgrid)?;
    check_len("height field", h.h.len(), grid.len())
}

pub fn bulk_terms(
    params: &FluidParams,
    grid: &TangentialGrid,
    vgrid: &VerticalGrid,
    u: &BulkFields,
    pi: &LayeredField,
    h: &InterfaceState,
    dh_dt: &[f64],
) -> Result<BulkTerms> {
    check_state(grid, vgrid, u, h)?;
    pi.check_layout(grid, vgrid)?;
    check_len("height rate", dh_dt.len(), grid.len())?;
    let dim = grid.dim();
    let n = grid.len();
    let geo = derivatives(grid, &h.h)?;
    let dy_pi = vertical_derivative(vgrid, pi);

    // Components 0..dim are v, component dim is w.
    let comps: Vec<&LayeredField> = u.v.iter().chain(core::iter::once(&u.w)).collect();
    let dy: Vec<LayeredField> = comps.iter().map(|f| vertical_derivative(vgrid, f)).collect();
    let dyy: Vec<LayeredField> = comps.iter().map(|f| vertical_second_derivative(vgrid, f)).collect();
    let dx: Vec<Vec<LayeredField>> = comps.iter().map(|f| tangential_gradient(grid, f)).collect::<Result<_>>()?;
    let dxy: Vec<Vec<LayeredField>> = dy.iter().map(|f| tangential_gradient(grid, f)).collect::<Result<_>>()?;

    let zero = LayeredField::zeros(grid, vgrid);
    let mut out: Vec<LayeredField> = vec![zero.clone(); dim + 1];
    let mut f_d = zero;
    for phase in PHASES {
        let (mu, rho) = (params.mu(phase), params.rho(phase));
        for level in 0..vgrid.levels() {
            for p in 0..n {
                let i = level * n + p;
                let at = |f: &LayeredField| f.side(phase)[i];
                let gh: Vec<f64> = (0..dim).map(|j| geo.grad[j][p]).collect();
                let gh_sq: f64 = gh.iter().map(|g| g * g).sum();
                let v: Vec<f64> = (0..dim).map(|j| at(&u.v[j])).collect();
                let w = at(&u.w);
                let gh_dot_v: f64 = gh.iter().zip(&v).map(|(a, b)| a * b).sum();
                for c in 0..=dim {
                    let dyc = at(&dy[c]);
                    let mixed: f64 = (0..dim).map(|j| gh[j] * at(&dxy[c][j])).sum();
                    let advect: f64 = (0..dim).map(|j| v[j] * at(&dx[c][j])).sum();
                    let mut value = mu * (-2.0 * mixed + gh_sq * at(&dyy[c]) - geo.laplacian[p] * dyc)
                        + rho * (-advect + gh_dot_v * dyc - w * dyc)
                        + rho * dh_dt[p] * dyc;
                    if c < dim {
                        value += at(&dy_pi) * gh[c];
                    }
                    out[c].side_mut(phase)[i] = value;
                }
                f_d.side_mut(phase)[i] = (0..dim).map(|j| gh[j] * at(&dy[j])).sum();
            }
        }
    }
    let f_w = out.pop().expect("dim + 1 components");
    Ok(BulkTerms { f_v: out, f_w, f_d })
}

/// One-sided interface data of one phase.
struct Trace {
    /// `dv_k/dy`, then `dw/dy` last.
    dy: Vec<Vec<f64>>,
    /// `dx[c][j]` is `d/dx_j` of component `c` (v then w).
    dx: Vec<Vec<Vec<f64>>>,
}

fn trace(grid: &TangentialGrid, vgrid: &VerticalGrid, u: &BulkFields, phase: Phase) -> Result<Trace> {
    let comps: Vec<&LayeredField> = u.v.iter().chain(core::iter::once(&u.w)).collect();
    let mut dy = Vec::new();
    let mut dx = Vec::new();
    for f in &comps {
        dy.push(vertical_derivative(vgrid, f).trace(phase).to_vec());
        dx.push(gradient(grid, f.trace(phase))?);
    }
    Ok(Trace { dy, dx })
}

/// Boundary terms `(G_v, G_w)`; `pressure_jump` is `[[pi]]` on the tangential grid.
pub fn boundary_terms(
    params: &FluidParams,
    grid: &TangentialGrid,
    vgrid: &VerticalGrid,
    u: &BulkFields,
    pressure_jump: &[f64],
    h: &InterfaceState,
) -> Result<(Vec<Vec<f64>>, Vec<f64>)> {
    check_state(grid, vgrid, u, h)?;
    let n = grid.len();
    let dim = grid.dim();
    check_len("pressure jump", pressure_jump.len(), n)?;
    let geo = curvature(grid, h)?;
    let up = trace(grid, vgrid, u, Phase::Upper)?;
    let lo = trace(grid, vgrid, u, Phase::Lower)?;
    let (mu1, mu2) = (params.mu1, params.mu2);
    let jump = |a: f64, b: f64| mu2 * a - mu1 * b;

    let mut g_v = vec![vec![0.0; n]; dim];
    let mut g_w = vec![0.0; n];
    for p in 0..n {
        let gh: Vec<f64> = (0..dim).map(|j| geo.grad[j][p]).collect();
        let gh_sq: f64 = gh.iter().map(|g| g * g).sum();
        let mu_dyv: Vec<f64> = (0..dim).map(|k| jump(up.dy[k][p], lo.dy[k][p])).collect();
        let mu_dyw = jump(up.dy[dim][p], lo.dy[dim][p]);
        let mu_dxw: Vec<f64> = (0..dim).map(|j| jump(up.dx[dim][j][p], lo.dx[dim][j][p])).collect();
        let gh_dot_dyv: f64 = gh.iter().zip(&mu_dyv).map(|(a, b)| a * b).sum();
        let capillary = pressure_jump[p] - params.sigma * (geo.laplacian[p] - geo.g_kappa[p]);
        for k in 0..dim {
            let strain: f64 =
                (0..dim).map(|j| jump(up.dx[k][j][p] + up.dx[j][k][p], lo.dx[k][j][p] + lo.dx[j][k][p]) * gh[j]).sum();
            g_v[k][p] = -strain + gh_sq * mu_dyv[k] + gh_dot_dyv * gh[k] - mu_dyw * gh[k] + capillary * gh[k];
        }
        let gh_dot_dxw: f64 = gh.iter().zip(&mu_dxw).map(|(a, b)| a * b).sum();
        g_w[p] = -gh_dot_dyv - gh_dot_dxw + gh_sq * mu_dyw - params.sigma * geo.g_kappa[p];
    }
    Ok((g_v, g_w))
}

/// `H = -(trace v | grad h)`.
pub fn kinematic_term(grid: &TangentialGrid, u: &BulkFields, h: &InterfaceState) -> Result<Vec<f64>> {
    check_len("height field", h.h.len(), grid.len())?;
    let grad = gradient(grid, &h.h)?;
    Ok((0..grid.len())
        .map(|p| {
            -(0..grid.dim())
                .map(|k| 0.5 * (u.v[k].trace(Phase::Upper)[p] + u.v[k].trace(Phase::Lower)[p]) * grad[k][p])
                .sum::<f64>()
        })
        .collect())
}

/// Transformed deformation tensor at the interface trace of one phase,
/// `(dim+1) x (dim+1)` component fields.
pub fn interface_deformation(
    grid: &TangentialGrid,
    vgrid: &VerticalGrid,
    u: &BulkFields,
    h: &InterfaceState,
    phase: Phase,
) -> Result<Vec<Vec<Vec<f64>>>> {
    check_state(grid, vgrid, u, h)?;
    let dim = grid.dim();
    let gh = gradient(grid, &h.h)?;
    let t = trace(grid, vgrid, u, phase)?;
    let n = grid.len();
    let mut d = vec![vec![vec![0.0; n]; dim + 1]; dim + 1];
    for p in 0..n {
        for i in 0..dim {
            for j in 0..dim {
                d[i][j][p] = t.dx[j][i][p] + t.dx[i][j][p] - (gh[i][p] * t.dy[j][p] + gh[j][p] * t.dy[i][p]);
            }
            let off = t.dy[i][p] + t.dx[dim][i][p] - gh[i][p] * t.dy[dim][p];
            d[dim][i][p] = off;
            d[i][dim][p] = off;
        }
        d[dim][dim][p] = 2.0 * t.dy[dim][p];
    }
    Ok(d)
}

/// Sup-norm residuals of the initial-data compatibility conditions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompatibilityReport {
    pub tangential_stress_residual: f64,
    pub divergence_residual: f64,
    pub jump_residual: f64,
    pub tolerance: f64,
}

impl CompatibilityReport {
    pub fn passed(&self) -> bool {
        self.tangential_stress_residual <= self.tolerance
            && self.divergence_residual <= self.tolerance
            && self.jump_residual <= self.tolerance
    }
}

pub const COMPATIBILITY_TOL: f64 = 1e-8;

pub fn check_compatibility(
    params: &FluidParams,
    grid: &TangentialGrid,
    vgrid: &VerticalGrid,
    u0: &BulkFields,
    h0: &InterfaceState,
    tolerance: f64,
) -> Result<CompatibilityReport> {
    check_state(grid, vgrid, u0, h0)?;
    let dim = grid.dim();
    let n = grid.len();
    let grad = gradient(grid, &h0.h)?;

    let mut stress = 0.0f64;
    let d_up = interface_deformation(grid, vgrid, u0, h0, Phase::Upper)?;
    let d_lo = interface_deformation(grid, vgrid, u0, h0, Phase::Lower)?;
    for p in 0..n {
        let g: Vec<f64> = grad.iter().map(|c| c[p]).collect();
        let nu = normal_pointwise(&g);
        let tangential = |d: &Vec<Vec<Vec<f64>>>, mu: f64| -> Vec<f64> {
            let dn: Vec<f64> = (0..=dim).map(|i| (0..=dim).map(|j| d[i][j][p] * nu[j]).sum()).collect();
            let normal: f64 = dn.iter().zip(&nu).map(|(a, b)| a * b).sum();
            dn.iter().zip(&nu).map(|(a, b)| mu * (a - normal * b)).collect()
        };
        let a = tangential(&d_up, params.mu2);
        let b = tangential(&d_lo, params.mu1);
        for (x, y) in a.iter().zip(&b) {
            stress = stress.max((x - y).abs());
        }
    }

    let zero_rate = vec![0.0; n];
    let f_d = bulk_terms(params, grid, vgrid, u0, &u0.pi, h0, &zero_rate)?.f_d;
    let dyw = vertical_derivative(vgrid, &u0.w);
    let dxv: Vec<Vec<LayeredField>> = u0.v.iter().map(|f| tangential_gradient(grid, f)).collect::<Result<_>>()?;
    let mut divergence = 0.0f64;
    for phase in PHASES {
        for i in 0..n * vgrid.levels() {
            let div: f64 = (0..dim).map(|j| dxv[j][j].side(phase)[i]).sum::<f64>() + dyw.side(phase)[i];
            divergence = divergence.max((div - f_d.side(phase)[i]).abs());
        }
    }

    Ok(CompatibilityReport {
        tangential_stress_residual: stress,
        divergence_residual: divergence,
        jump_residual: u0.velocity_jump(),
        tolerance,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn vertical_stencils_are_exact_on_cubics() {
        let grid = TangentialGrid::new(1, 1.0, 8).unwrap();
        let vgrid = VerticalGrid::new(2.0, 8).unwrap();
        let f = LayeredField::from_fn(&grid, &vgrid, |_, y, _| 1.0 + y - 0.5 * y * y);
        let d = vertical_derivative(&vgrid, &f);
        let dd = vertical_second_derivative(&vgrid, &f);
        for phase in PHASES {
            for l in 0..vgrid.levels() {
                let y = sign(phase) * vgrid.depth(l);
                assert!((d.level(phase, l)[3] - (1.0 - y)).abs() < 1e-12);
                assert!((dd.level(phase, l)[3] + 1.0).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn affine_interface_has_no_curvature() {
        let grad = [0.3];
        let hess: [&[f64]; 1] = [&[0.0]];
        assert_eq!(g_kappa_pointwise(&grad, &hess, 0.0), 0.0);
    }

    #[test]
    fn inclined_plane_normal() {
        let theta: f64 = 0.4;
        let nu = normal_pointwise(&[theta.tan()]);
        assert!((nu[0] + theta.sin()).abs() < 1e-15);
        assert!((nu[1] - theta.cos()).abs() < 1e-15);
    }
}
