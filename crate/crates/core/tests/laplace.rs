mod common;

use capillary_core::laplace::*;
use capillary_core::resolvent::{InterfaceData, InterfaceKind, ModeForcing, ModeSystem, NumericModeSolution};
use capillary_core::{FluidParams, Phase, VerticalGrid, C64};

const ZERO: C64 = C64::new(0.0, 0.0);

#[test]
fn textbook_pairs() {
    let spec = ContourSpec::default();
    let a = invert(|l| Ok(1.0 / (l + 2.0)), 1.0, &spec).unwrap();
    assert!((a - (-2.0f64).exp()).abs() < 1e-8 * (-2.0f64).exp());
    let b = invert(|l| Ok(1.0 / (l * l)), 3.0, &spec).unwrap();
    assert!((b - 3.0).abs() < 1e-8 * 3.0);
    let c = invert(|l| Ok(1.0 / (l * l + 1.0)), std::f64::consts::FRAC_PI_2, &spec).unwrap();
    assert!((c - 1.0).abs() < 1e-6);
}

#[test]
fn invalid_time_is_rejected() {
    assert!(invert(|l| Ok(1.0 / l), 0.0, &ContourSpec::default()).is_err());
}

fn heavy() -> FluidParams {
    FluidParams::new(0.01, 0.01, 10.0, 10.0, 1.0, 0.0).unwrap()
}

#[test]
fn heavy_viscosity_decay_follows_static_rate() {
    let p = heavy();
    let rate = p.sigma / (2.0 * (p.mu1 + p.mu2));
    let times: Vec<f64> = (0..=30).map(|i| i as f64 * 0.1 / rate).collect();
    let h = linear_mode_evolution(&p, 1.0, C64::new(1.0, 0.0), &times, &ContourSpec::default()).unwrap();
    // Regime monitor: the relevant frequencies satisfy rho |lambda| << mu tau^2.
    assert!(p.rho1 * rate / (p.mu1 * 1.0) < 1e-4);
    for (t, v) in times.iter().zip(&h) {
        let closed = (-rate * t).exp();
        assert!((v.re - closed).abs() < 0.02 * closed, "t = {t}: {v} vs {closed}");
        assert!(v.im.abs() < 1e-12);
    }
    for pair in h.windows(2) {
        assert!(pair[1].norm() <= pair[0].norm() + 1e-9);
    }
}

#[test]
fn continuity_at_time_zero() {
    let p = heavy();
    let rate = p.sigma / (2.0 * (p.mu1 + p.mu2));
    let h0 = C64::new(0.3, -0.2);
    let h = linear_mode_evolution(&p, 1.0, h0, &[0.0, 1e-6 / rate], &ContourSpec::default()).unwrap();
    assert_eq!(h[0], h0);
    assert!((h[1] - h0).norm() < 1e-4 * h0.norm());
}

#[test]
fn evolution_is_linear_in_initial_height() {
    let p = FluidParams::new(1.0, 1.3, 0.05, 0.02, 1.0, 0.0).unwrap();
    let times = [0.5, 2.0, 7.0];
    let spec = ContourSpec::default();
    let a = linear_mode_evolution(&p, 2.0, C64::new(1.0, 0.0), &times, &spec).unwrap();
    let k = C64::new(-0.4, 2.5);
    let b = linear_mode_evolution(&p, 2.0, k, &times, &spec).unwrap();
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(*y, k * *x);
    }
}

#[test]
fn node_doubling_is_stable() {
    for (p, tau) in [
        (heavy(), 1.0),
        (FluidParams::new(1.0, 1.0, 0.01, 0.01, 1.0, 0.0).unwrap(), 1.0),
        (FluidParams::new(1.0, 3.0, 1.0, 0.2, 2.0, 0.0).unwrap(), 0.3),
    ] {
        let times = [0.1, 1.0, 10.0, 50.0];
        let a = linear_mode_evolution(&p, tau, C64::new(1.0, 0.0), &times, &ContourSpec::new(48).unwrap()).unwrap();
        let b = linear_mode_evolution(&p, tau, C64::new(1.0, 0.0), &times, &ContourSpec::new(96).unwrap()).unwrap();
        for (x, y) in a.iter().zip(&b) {
            assert!((x - y).norm() < 1e-9 * x.norm().max(1e-3), "{x} vs {y}");
        }
    }
}

#[test]
fn underdamped_waves_are_split_off() {
    let p = FluidParams::new(1.0, 1.0, 0.01, 0.01, 1.0, 0.0).unwrap();
    let poles = symbol_poles(&p, 1.0).unwrap();
    assert_eq!(poles.len(), 2);
    assert!(poles[0].lambda.re < 0.0 && poles[0].lambda.im.abs() > 0.5);
    let s = capillary_core::symbols::boundary_symbol(&p, poles[0].lambda, C64::new(1.0, 0.0)).unwrap();
    assert!(s.norm() < 1e-12);
}

#[test]
fn unstable_mode_grows_at_dispersion_rate() {
    let p = FluidParams::new(1.0, 2.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    let root = capillary_core::symbols::dispersion_root(&p, 0.5).unwrap().unwrap();
    let times: Vec<f64> = (1..=20).map(|i| i as f64 * 2.0).collect();
    let h = linear_mode_evolution(&p, 0.5, C64::new(1.0, 0.0), &times, &ContourSpec::default()).unwrap();
    for pair in h.windows(2) {
        assert!(pair[1].re > pair[0].re);
    }
    let measured = (h[19].re / h[18].re).ln() / 2.0;
    assert!((measured - root).abs() < 1e-6 * root);
}

/// Implicit Euler on the coupled bulk/interface problem of one mode, using
/// the finite-difference resolvent at `lambda = 1/dt`.
fn implicit_euler(p: &FluidParams, tau: f64, t_end: f64, steps: usize, vg: &VerticalGrid) -> f64 {
    let dt = t_end / steps as f64;
    let sys = ModeSystem::new(p, C64::new(1.0 / dt, 0.0), 1, &[tau, 0.0], vg, InterfaceKind::Jump).unwrap();
    let load = p.sigma * tau * tau - p.gravity * p.jump_rho();
    let unit = sys.solve(&InterfaceData::Jump { g_v: [ZERO; 2], g_w: C64::new(-load, 0.0) }, None).unwrap();
    let b = unit.trace(Phase::Upper).w;
    let mut h = C64::new(1.0, 0.0);
    let mut u: Option<NumericModeSolution> = None;
    for _ in 0..steps {
        let mut forcing = ModeForcing::zeros(vg);
        if let Some(prev) = &u {
            for phase in [Phase::Lower, Phase::Upper] {
                let k = p.rho(phase) / dt;
                for (f, s) in forcing.side_mut(phase).iter_mut().zip(prev.side(phase)) {
                    f.f_v = [k * s.v[0], ZERO];
                    f.f_w = k * s.w;
                }
            }
        }
        let a = sys.solve(&InterfaceData::Jump { g_v: [ZERO; 2], g_w: ZERO }, Some(&forcing)).unwrap();
        let h_new = (h + dt * a.trace(Phase::Upper).w) / (1.0 - dt * b);
        let combine = |x: &[capillary_core::resolvent::ModeValue], y: &[capillary_core::resolvent::ModeValue]| {
            x.iter()
                .zip(y)
                .map(|(p, q)| capillary_core::resolvent::ModeValue {
                    v: [p.v[0] + h_new * q.v[0], ZERO],
                    w: p.w + h_new * q.w,
                    pi: p.pi + h_new * q.pi,
                })
                .collect::<Vec<_>>()
        };
        let next = NumericModeSolution {
            upper: combine(&a.upper, &unit.upper),
            lower: combine(&a.lower, &unit.lower),
            ..a.clone()
        };
        u = Some(next);
        h = h_new;
    }
    h.re
}

#[test]
fn contour_matches_time_domain_oracle() {
    let p = FluidParams::new(1.0, 1.5, 0.5, 0.8, 1.0, 0.0).unwrap();
    let tau = 1.0;
    let t_end = 2.0;
    let vg = VerticalGrid::new(12.0, 384).unwrap();
    let coarse = implicit_euler(&p, tau, t_end, 100, &vg);
    let fine = implicit_euler(&p, tau, t_end, 200, &vg);
    let extrapolated = 2.0 * fine - coarse;
    let exact = linear_mode_evolution(&p, tau, C64::new(1.0, 0.0), &[t_end], &ContourSpec::default()).unwrap()[0].re;
    let err = (extrapolated - exact).abs() / exact.abs();
    assert!(err < 5e-3, "oracle {extrapolated}, contour {exact}, coarse {coarse}, fine {fine}");
}
