//! Semi-implicit time stepping of the flattened-interface system.
//!
//! Each step treats the linear boundary symbol implicitly per Fourier mode,
//! frozen at a single frequency `lambda*`, and the nonlinear interface terms
//! explicitly from the previous state. The bulk fields are rebuilt from the
//! closed-form mode profiles after every step.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::fields::{BulkFields, InterfaceState, LayeredField};
use crate::grid::{TangentialGrid, VerticalGrid};
use crate::nonlinear::{boundary_terms, bulk_terms, kinematic_term, pressure_jump};
use crate::params::{FluidParams, Phase};
use crate::resolvent::{
    solve_mode_dirichlet, ForcingSample, InterfaceData, InterfaceKind, ModeForcing, ModeSystem, ModeValue,
    NumericModeSolution,
};
use crate::spectral::{dealias, forward_transform, inverse_transform};
use crate::symbols::{dn_inverse_with, SymbolEval};
use crate::{TanVec, Wavevector, C64, ZERO};

/// Frequency at which the resolvent symbols are frozen.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// `lambda* = 0`: the Stokes limit.
    QuasiStationary,
    /// `lambda* = 1/dt`.
    FrozenFrequency,
}

impl Scheme {
    pub fn frequency(self, dt: f64) -> f64 {
        match self {
            Scheme::QuasiStationary => 0.0,
            Scheme::FrozenFrequency => 1.0 / dt,
        }
    }
}

/// Height ratio `max|h| / L` above which the small-data regime is doubtful.
pub const SMALLNESS_WARNING: f64 = 0.05;

#[derive(Debug, Clone, PartialEq)]
pub struct SimConfig {
    pub params: FluidParams,
    pub grid: TangentialGrid,
    pub vgrid: VerticalGrid,
    pub dt: f64,
    pub t_end: f64,
    pub scheme: Scheme,
    /// Evaluate the interface nonlinearities `G_v`, `G_w`, `H`.
    pub nonlinear: bool,
    /// Experimental: route the bulk nonlinearities through the
    /// finite-difference mode solver.
    pub bulk_forcing: bool,
    /// Keep every `output_every`-th state (the final state is always kept).
    pub output_every: usize,
    /// A step fails once `max|h|` exceeds this multiple of the box length.
    pub divergence_limit: f64,
}

impl SimConfig {
    pub fn new(
        params: FluidParams,
        grid: TangentialGrid,
        vgrid: VerticalGrid,
        dt: f64,
        t_end: f64,
        scheme: Scheme,
    ) -> Result<Self> {
        let config = Self {
            params,
            grid,
            vgrid,
            dt,
            t_end,
            scheme,
            nonlinear: true,
            bulk_forcing: false,
            output_every: 1,
            divergence_limit: 1.0,
        };
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::Usage(alloc::format!("time step must be positive, got {}", self.dt)));
        }
        if !(self.t_end >= self.dt && self.t_end.is_finite()) {
            return Err(Error::Usage(alloc::format!(
                "end time {} must be finite and at least one step {}",
                self.t_end,
                self.dt
            )));
        }
        if self.output_every == 0 {
            return Err(Error::Usage("output cadence must be at least 1".into()));
        }
        if !(self.divergence_limit > 0.0) {
            return Err(Error::Usage("divergence limit must be positive".into()));
        }
        if self.vgrid.points() < 3 {
            return Err(Error::Usage("vertical grid needs at least 3 intervals".into()));
        }
        Ok(())
    }

    /// Number of steps to reach `t_end`; the last step may overshoot by
    /// less than one part in 1e9.
    pub fn steps(&self) -> usize {
        ((self.t_end / self.dt) * (1.0 - 1e-9)).ceil() as usize
    }

    pub fn frequency(&self) -> f64 {
        self.scheme.frequency(self.dt)
    }

    /// Warning text when the initial height leaves the small-data regime.
    pub fn smallness_warning(&self, h0: &InterfaceState) -> Option<String> {
        let ratio = h0.h.iter().fold(0.0f64, |m, x| m.max(x.abs())) / self.grid.length();
        (ratio > SMALLNESS_WARNING).then(|| {
            alloc::format!("initial height ratio max|h|/L = {ratio:.3} exceeds {SMALLNESS_WARNING}; small-data theory does not cover this run")
        })
    }
}

/// One Fourier component `amplitude * cos(xi . x + phase)` of the height.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModeSpec {
    pub index: [i64; 2],
    pub amplitude: f64,
    pub phase: f64,
}

pub fn modal_height(grid: &TangentialGrid, modes: &[ModeSpec]) -> InterfaceState {
    let k0 = 2.0 * core::f64::consts::PI / grid.length();
    InterfaceState::from_fn(grid, |x| {
        modes
            .iter()
            .map(|m| {
                let arg = k0 * (m.index[0] as f64 * x[0] + m.index[1] as f64 * x[1]) + m.phase;
                m.amplitude * arg.cos()
            })
            .sum()
    })
}

/// Complex amplitude of the mode with integer index `index`
/// (a real `a cos(xi.x)` has amplitude `a/2`).
pub fn mode_amplitude(grid: &TangentialGrid, h: &InterfaceState, index: [i64; 2]) -> Result<C64> {
    let modes = forward_transform(grid, &h.h)?;
    Ok(modes[grid.mode_slot(index)])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Diagnostics {
    pub mean: f64,
    /// `sum |h_k|^2` over nonzero modes.
    pub energy: f64,
    pub max_height: f64,
    pub max_velocity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimState {
    pub interface: InterfaceState,
    pub bulk: BulkFields,
    /// `(h^n - h^{n-1}) / dt`; zero before the first step.
    pub dh_dt: Vec<f64>,
    pub step: usize,
    pub diagnostics: Diagnostics,
}

fn diagnostics(h: &InterfaceState, h_hat: &[C64], bulk: &BulkFields) -> Diagnostics {
    let energy = h_hat.iter().skip(1).map(|c| c.norm_sqr()).sum();
    let max_velocity = bulk.v.iter().chain(core::iter::once(&bulk.w)).map(|f| f.sup_norm()).fold(0.0, f64::max);
    Diagnostics { mean: h_hat[0].re, energy, max_height: h.h.iter().fold(0.0f64, |m, x| m.max(x.abs())), max_velocity }
}

/// Per-mode data frozen for the whole run.
#[derive(Debug, Clone)]
struct ModeData {
    slot: usize,
    partner: usize,
    xi: Wavevector,
    zeta: Wavevector,
    tau: f64,
    eval: SymbolEval,
    /// `1 + dt (sigma tau^2 - gravity [[rho]]) / n(lambda*)`.
    denominator: C64,
    system: Option<ModeSystem>,
}

/// Mode-wise spectra of `(v, w, pi)` on every level: `[component][phase]`,
/// each `levels * ntan` long.
struct LayeredSpectra {
    data: Vec<[Vec<C64>; 2]>,
}

impl LayeredSpectra {
    fn zeros(components: usize, len: usize) -> Self {
        Self { data: (0..components).map(|_| [vec![ZERO; len], vec![ZERO; len]]).collect() }
    }

    #[allow(clippy::too_many_arguments)]
    fn set(&mut self, n: usize, f: usize, partner: usize, phase: Phase, level: usize, value: &ModeValue, dim: usize) {
        let side = phase.index() - 1;
        let mut put = |c: usize, z: C64| {
            self.data[c][side][level * n + f] = z;
            self.data[c][side][level * n + partner] = z.conj();
        };
        for j in 0..dim {
            put(j, value.v[j]);
        }
        put(dim, value.w);
        put(dim + 1, value.pi);
    }

    fn to_fields(&self, grid: &TangentialGrid, vgrid: &VerticalGrid) -> Result<BulkFields> {
        let n = grid.len();
        let dim = grid.dim();
        let mut out = BulkFields::zeros(grid, vgrid);
        for (c, sides) in self.data.iter().enumerate() {
            let target: &mut LayeredField = match c {
                c if c < dim => &mut out.v[c],
                c if c == dim => &mut out.w,
                _ => &mut out.pi,
            };
            for phase in [Phase::Lower, Phase::Upper] {
                for level in 0..vgrid.levels() {
                    let modes = &sides[phase.index() - 1][level * n..(level + 1) * n];
                    target.level_mut(phase, level).copy_from_slice(&inverse_transform(grid, modes)?);
                }
            }
        }
        Ok(out)
    }
}

/// Stepper with the per-mode symbols of one configuration precomputed.
#[derive(Debug, Clone)]
pub struct Stepper {
    config: SimConfig,
    modes: Vec<ModeData>,
}

impl Stepper {
    pub fn new(config: SimConfig) -> Result<Self> {
        config.validate()?;
        let grid = &config.grid;
        let params = &config.params;
        let lambda = C64::new(config.frequency(), 0.0);
        let gravity_load = params.gravity * params.jump_rho();
        let mut modes = Vec::new();
        for f in 0..grid.len() {
            let partner = grid.conjugate_partner(f);
            if f == 0 || grid.is_nyquist(f) || partner < f {
                continue;
            }
            let xi = grid.wavevector(f);
            let tau = crate::wavevector_norm(&xi);
            let eval = SymbolEval::new(params, lambda, C64::new(tau, 0.0))?;
            let denominator = 1.0 + config.dt * (params.sigma * tau * tau - gravity_load) / eval.n_sym;
            let system = if config.bulk_forcing {
                Some(ModeSystem::new(params, lambda, grid.dim(), &xi, &config.vgrid, InterfaceKind::Jump)?)
            } else {
                None
            };
            modes.push(ModeData {
                slot: f,
                partner,
                xi,
                zeta: [xi[0] / tau, xi[1] / tau],
                tau,
                eval,
                denominator,
                system,
            });
        }
        Ok(Self { config, modes })
    }

    pub fn config(&self) -> &SimConfig {
        &self.config
    }

    /// Initial state: `h0` with the bulk fields rebuilt from it unless `u0`
    /// is given.
    pub fn initial_state(&self, h0: InterfaceState, u0: Option<BulkFields>) -> Result<SimState> {
        let grid = &self.config.grid;
        if h0.h.len() != grid.len() {
            return Err(Error::Usage(alloc::format!(
                "initial height has {} samples, grid has {}",
                h0.h.len(),
                grid.len()
            )));
        }
        let h_hat = forward_transform(grid, &h0.h)?;
        let bulk = match u0 {
            Some(u) => {
                u.check_layout(grid, &self.config.vgrid)?;
                u
            }
            None => {
                let zeros = vec![ZERO; grid.len()];
                let g_v = vec![zeros.clone(); grid.dim()];
                self.reconstruct(&h_hat, &g_v, &zeros, None)?
            }
        };
        Ok(SimState {
            diagnostics: diagnostics(&h0, &h_hat, &bulk),
            interface: h0,
            bulk,
            dh_dt: vec![0.0; grid.len()],
            step: 0,
        })
    }

    /// Bulk fields for heights `h_hat` and interface terms `(g_v, g_w)`,
    /// plus optional per-mode forcing responses.
    fn reconstruct(
        &self,
        h_hat: &[C64],
        g_v: &[Vec<C64>],
        g_w: &[C64],
        responses: Option<&[Option<NumericModeSolution>]>,
    ) -> Result<BulkFields> {
        let (grid, vgrid, params) = (&self.config.grid, &self.config.vgrid, &self.config.params);
        let n = grid.len();
        let dim = grid.dim();
        let lambda = C64::new(self.config.frequency(), 0.0);
        let weight = -params.sigma;
        let gravity_load = params.gravity * params.jump_rho();
        let mut spectra = LayeredSpectra::zeros(dim + 2, n * vgrid.levels());
        for (i, md) in self.modes.iter().enumerate() {
            let f = md.slot;
            let gv: TanVec = [g_v[0][f], if dim == 2 { g_v[1][f] } else { ZERO }];
            let data_w = (weight * md.tau * md.tau + gravity_load) * h_hat[f] + g_w[f];
            let (v_b, w_b) = dn_inverse_with(&md.eval, dim, md.zeta, &gv, data_w)?;
            let profile = solve_mode_dirichlet(params, lambda, dim, &md.xi, &v_b, w_b)?;
            let response = responses.and_then(|r| r[i].as_ref());
            for phase in [Phase::Lower, Phase::Upper] {
                let sign = if phase == Phase::Upper { 1.0 } else { -1.0 };
                for level in 0..vgrid.levels() {
                    let mut value = profile.evaluate(sign * vgrid.depth(level), phase)?;
                    if let Some(r) = response {
                        let extra = r.side(phase)[level];
                        for j in 0..dim {
                            value.v[j] += extra.v[j];
                        }
                        value.w += extra.w;
                        value.pi += extra.pi;
                    }
                    spectra.set(n, f, md.partner, phase, level, &value, dim);
                }
            }
        }
        spectra.to_fields(grid, vgrid)
    }

    fn dealiased(&self, field: &[f64]) -> Result<Vec<C64>> {
        let mut modes = forward_transform(&self.config.grid, field)?;
        dealias(&self.config.grid, &mut modes);
        Ok(modes)
    }

    /// Per-mode forcing samples from the bulk nonlinearities.
    fn forcing(&self, state: &SimState) -> Result<Vec<ModeForcing>> {
        let (grid, vgrid) = (&self.config.grid, &self.config.vgrid);
        let dim = grid.dim();
        let terms =
            bulk_terms(&self.config.params, grid, vgrid, &state.bulk, &state.bulk.pi, &state.interface, &state.dh_dt)?;
        let mut out: Vec<ModeForcing> = self.modes.iter().map(|_| ModeForcing::zeros(vgrid)).collect();
        for phase in [Phase::Lower, Phase::Upper] {
            for level in 0..vgrid.levels() {
                let slice = |f: &LayeredField| f.level(phase, level).to_vec();
                let fv: Vec<Vec<C64>> = terms.f_v.iter().map(|f| self.dealiased(&slice(f))).collect::<Result<_>>()?;
                let fw = self.dealiased(&slice(&terms.f_w))?;
                let fd = self.dealiased(&slice(&terms.f_d))?;
                for (md, forcing) in self.modes.iter().zip(out.iter_mut()) {
                    let f = md.slot;
                    let mut sample = ForcingSample::default();
                    for j in 0..dim {
                        sample.f_v[j] = fv[j][f];
                    }
                    sample.f_w = fw[f];
                    sample.f_d = fd[f];
                    forcing.side_mut(phase)[level] = sample;
                }
            }
        }
        Ok(out)
    }

    pub fn step(&self, state: &SimState) -> Result<SimState> {
        let cfg = &self.config;
        let (grid, params) = (&cfg.grid, &cfg.params);
        let n = grid.len();
        let dim = grid.dim();
        let step = state.step + 1;

        // Explicit interface terms from the lagged state.
        let (g_v, g_w, kin) = if cfg.nonlinear {
            let (gv, gw) = boundary_terms(
                params,
                grid,
                &cfg.vgrid,
                &state.bulk,
                &pressure_jump(&state.bulk.pi),
                &state.interface,
            )?;
            let kin = kinematic_term(grid, &state.bulk, &state.interface)?;
            (
                gv.iter().map(|f| self.dealiased(f)).collect::<Result<Vec<_>>>()?,
                self.dealiased(&gw)?,
                self.dealiased(&kin)?,
            )
        } else {
            (vec![vec![ZERO; n]; dim], vec![ZERO; n], vec![ZERO; n])
        };

        let responses = if cfg.bulk_forcing && cfg.nonlinear {
            let forcing = self.forcing(state)?;
            let zero = InterfaceData::Jump { g_v: [ZERO; 2], g_w: ZERO };
            let mut out = Vec::with_capacity(self.modes.len());
            for (md, f) in self.modes.iter().zip(&forcing) {
                let system = md.system.as_ref().expect("systems are assembled when bulk forcing is on");
                out.push(Some(system.solve(&zero, Some(f))?));
            }
            Some(out)
        } else {
            None
        };

        let h_hat = forward_transform(grid, &state.interface.h)?;
        let mut next = vec![ZERO; n];
        next[0] = h_hat[0];
        for (i, md) in self.modes.iter().enumerate() {
            let f = md.slot;
            let gv: TanVec = [g_v[0][f], if dim == 2 { g_v[1][f] } else { ZERO }];
            let (_, w_g) = dn_inverse_with(&md.eval, dim, md.zeta, &gv, g_w[f])?;
            let mut drive = kin[f] + w_g;
            if let Some(r) = responses.as_ref().and_then(|r| r[i].as_ref()) {
                drive += 0.5 * (r.trace(Phase::Upper).w + r.trace(Phase::Lower).w);
            }
            let value = (h_hat[f] + cfg.dt * drive) / md.denominator;
            if !(value.re.is_finite() && value.im.is_finite()) {
                return Err(Error::Divergence { step, mode: f });
            }
            next[f] = value;
            next[md.partner] = value.conj();
        }

        let h = InterfaceState { h: inverse_transform(grid, &next)?, time: state.interface.time + cfg.dt };
        let limit = cfg.divergence_limit * grid.length();
        if let Some(p) = h.h.iter().position(|x| !(x.abs() <= limit)) {
            return Err(Error::Divergence { step, mode: p });
        }
        let bulk = self.reconstruct(&next, &g_v, &g_w, responses.as_deref())?;
        let dh_dt = h.h.iter().zip(&state.interface.h).map(|(a, b)| (a - b) / cfg.dt).collect();
        Ok(SimState { diagnostics: diagnostics(&h, &next, &bulk), interface: h, bulk, dh_dt, step })
    }
}

/// One step with a freshly prepared [`Stepper`].
pub fn step(state: &SimState, config: &SimConfig) -> Result<SimState> {
    Stepper::new(config.clone())?.step(state)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Record {
    pub step: usize,
    pub time: f64,
    pub interface: InterfaceState,
    pub diagnostics: Diagnostics,
}

impl Record {
    fn of(state: &SimState) -> Self {
        Self {
            step: state.step,
            time: state.interface.time,
            interface: state.interface.clone(),
            diagnostics: state.diagnostics,
        }
    }
}

/// Recorded states; `failure` holds the error that stopped the run early.
#[derive(Debug, Clone, PartialEq)]
pub struct Series {
    pub records: Vec<Record>,
    pub failure: Option<Error>,
}

impl Series {
    pub fn last(&self) -> &Record {
        self.records.last().expect("a series always holds the initial record")
    }
}

/// Runs from `initial` to the configured end time.
pub fn simulate(config: &SimConfig, h0: InterfaceState, u0: Option<BulkFields>) -> Result<Series> {
    let stepper = Stepper::new(config.clone())?;
    let mut state = stepper.initial_state(h0, u0)?;
    let mut records = vec![Record::of(&state)];
    let total = config.steps();
    for k in 1..=total {
        match stepper.step(&state) {
            Ok(next) => state = next,
            Err(e) => {
                if records.last().map(|r| r.step) != Some(state.step) {
                    records.push(Record::of(&state));
                }
                return Ok(Series { records, failure: Some(e) });
            }
        }
        if k % config.output_every == 0 || k == total {
            records.push(Record::of(&state));
        }
    }
    Ok(Series { records, failure: None })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn step_count_absorbs_rounding() {
        let params = FluidParams::symmetric(1.0, 1.0, 1.0).unwrap();
        let grid = TangentialGrid::new(1, 1.0, 8).unwrap();
        let vgrid = VerticalGrid::new(1.0, 8).unwrap();
        let cfg = SimConfig::new(params, grid, vgrid, 0.1, 1.0, Scheme::QuasiStationary).unwrap();
        assert_eq!(cfg.steps(), 10);
        let cfg = SimConfig { t_end: 1.05, ..cfg };
        assert_eq!(cfg.steps(), 11);
    }

    #[test]
    fn rejects_bad_time_step() {
        let params = FluidParams::symmetric(1.0, 1.0, 1.0).unwrap();
        let grid = TangentialGrid::new(1, 1.0, 8).unwrap();
        let vgrid = VerticalGrid::new(1.0, 8).unwrap();
        assert!(SimConfig::new(params, grid, vgrid, 0.0, 1.0, Scheme::QuasiStationary).is_err());
        assert!(SimConfig::new(params, grid, vgrid, 0.5, 0.1, Scheme::QuasiStationary).is_err());
    }
}
