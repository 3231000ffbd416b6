mod common;

use capillary_core::symbols::*;
use capillary_core::{Error, FluidParams, Phase, C64};
use common::*;
use proptest::prelude::*;
use rand::Rng;

fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[test]
fn omega_matches_polar_square_root() {
    let p = FluidParams::new(2.0, 2.0, 1.0, 1.0, 1.0, 0.0).unwrap();
    let got = omega(&p, Phase::Lower, c(0.0, 1.0), c(1.0, 0.0)).unwrap();
    let expected = polar_sqrt(c(1.0, 2.0));
    assert!((got - expected).norm() < 1e-15);
    assert!(got.re > 0.0);
}

#[test]
fn omega_has_positive_real_part_in_right_half_plane() {
    let mut r = rng(11);
    for _ in 0..2000 {
        let p = random_params(&mut r);
        let lambda = C64::from_polar(log_uniform(&mut r, 1e-6, 1e6), r.gen_range(-0.5..0.5) * std::f64::consts::PI);
        let tau = c(r.gen_range(0.0..10.0), 0.0);
        for phase in [Phase::Lower, Phase::Upper] {
            assert!(omega(&p, phase, lambda, tau).unwrap().re > 0.0);
        }
    }
}

#[test]
fn static_dn_matrix_is_diagonal_in_one_dimension() {
    let mut r = rng(12);
    for _ in 0..100 {
        let p = random_params(&mut r);
        let xi = random_wavevector(&mut r, 1);
        let tau = xi[0].abs();
        let m = dn_matrix(&p, c(0.0, 0.0), 1, &xi).unwrap();
        let diag = 2.0 * (p.mu1 + p.mu2) * tau;
        for i in 0..2 {
            for j in 0..2 {
                let expected = if i == j { diag } else { 0.0 };
                assert!((m.entries[i][j] - c(expected, 0.0)).norm() < 1e-12 * diag);
            }
        }
    }
}

#[test]
fn dn_matrix_equals_jump_functional_of_profiles() {
    let mut r = rng(13);
    for dim in [1, 2] {
        for _ in 0..500 {
            let p = random_params(&mut r);
            let lambda = random_lambda(&mut r);
            let xi = random_wavevector(&mut r, dim);
            let v = [random_c(&mut r), if dim == 2 { random_c(&mut r) } else { C64::new(0.0, 0.0) }];
            let w = random_c(&mut r);
            let m = dn_matrix(&p, lambda, dim, &xi).unwrap();
            let (gv, gw) = m.apply(&v, w);
            let prof = capillary_core::resolvent::solve_mode_dirichlet(&p, lambda, dim, &xi, &v, w).unwrap();
            let (hv, hw) = prof.jump_functional(&p);
            let scale = gv.iter().chain([&gw]).map(|z| z.norm()).fold(0.0, f64::max);
            for j in 0..dim {
                assert!((gv[j] - hv[j]).norm() < 1e-10 * scale);
            }
            assert!((gw - hw).norm() < 1e-10 * scale);
        }
    }
}

#[test]
fn dn_pattern_is_hermitian_at_real_frequencies() {
    let mut r = rng(14);
    for _ in 0..200 {
        let p = random_params(&mut r);
        let lambda = c(log_uniform(&mut r, 1e-3, 1e3), 0.0);
        let xi = random_wavevector(&mut r, 2);
        let m = dn_matrix(&p, lambda, 2, &xi).unwrap();
        let scale = m.entries[2][2].norm();
        for i in 0..2 {
            for j in 0..2 {
                assert!(m.entries[i][j].im.abs() < 1e-14 * scale);
                assert!((m.entries[i][j] - m.entries[j][i]).norm() < 1e-14 * scale);
            }
            assert!(m.entries[i][2].re.abs() < 1e-14 * scale);
            assert!((m.entries[2][i] + m.entries[i][2]).norm() < 1e-14 * scale);
        }
        assert!(m.entries[2][2].im.abs() < 1e-14 * scale);
    }
}

#[test]
fn factorization_of_m_holds_at_random_points() {
    let mut r = rng(15);
    for _ in 0..10_000 {
        let p = random_params(&mut r);
        let e = SymbolEval::new(&p, random_lambda(&mut r), c(log_uniform(&mut r, 1e-2, 1e2), 0.0)).unwrap();
        assert!(rel_err((e.alpha + e.beta) * e.n_sym, e.m_sym) < 1e-12, "{e:?}");
    }
}

#[test]
fn k_at_zero_and_infinity() {
    let mut r = rng(16);
    for _ in 0..100 {
        let p = random_params(&mut r);
        let k0 = k_fn(&p, c(0.0, 0.0)).unwrap();
        assert!((k0.re - 1.0 / (2.0 * (p.mu1 + p.mu2))).abs() < 1e-12 * k0.re);
    }
    let p = FluidParams::new(1.0, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap();
    for i in 0..8 {
        let arg = -0.75 * std::f64::consts::PI + 1.5 * std::f64::consts::PI * i as f64 / 7.0;
        let z = C64::from_polar(1e8, arg);
        assert!((z * k_fn(&p, z).unwrap() - c(0.5, 0.0)).norm() < 1e-3);
    }
}

#[test]
fn k_decays_like_one_over_z() {
    let p = FluidParams::new(1.0, 3.0, 0.5, 2.0, 1.0, 0.0).unwrap();
    let arg = 0.75 * std::f64::consts::PI;
    let coarse = k_decay_constant(&p, arg, 64, 33).unwrap();
    let fine = k_decay_constant(&p, arg, 256, 129).unwrap();
    assert!(coarse.is_finite() && coarse > 0.0);
    assert!(fine <= 1.05 * coarse, "calibrated {coarse}, refined scan {fine}");
}

#[test]
fn boundary_symbol_agrees_with_n_form() {
    let mut r = rng(17);
    for _ in 0..1000 {
        let p = random_params(&mut r);
        let lambda = random_lambda(&mut r);
        let tau = log_uniform(&mut r, 1e-2, 1e2);
        let s = boundary_symbol(&p, lambda, c(tau, 0.0)).unwrap();
        assert!(rel_err(s, oracle_s(&p, lambda, tau)) < 1e-12);
    }
}

#[test]
fn static_symbol_closed_forms() {
    let p = FluidParams::new(1.0, 4.0, 2.0, 3.0, 1.5, 0.0).unwrap();
    let s = boundary_symbol(&p, c(0.0, 0.0), c(2.0, 0.0)).unwrap();
    assert!((s.re - 1.5 * 2.0 / 10.0).abs() < 1e-14);
    let q = FluidParams::symmetric(2.0, 0.7, 1.3).unwrap();
    let s = boundary_symbol(&q, c(0.0, 0.0), c(3.0, 0.0)).unwrap();
    assert!((s.re - 1.3 * 3.0 / (4.0 * 0.7)).abs() < 1e-14);
}

#[test]
fn gravity_instability_has_a_positive_real_root() {
    let p = FluidParams::new(1.0, 2.0, 1.0, 1.5, 1.0, 1.0).unwrap();
    let tau = 0.6;
    assert!(oracle_s(&p, c(0.0, 0.0), tau).re < 0.0);
    assert!(oracle_s(&p, c(100.0, 0.0), tau).re > 0.0);
    let expected = bisect(|l| oracle_s(&p, c(l, 0.0), tau).re, 0.0, 100.0);
    let root = dispersion_root(&p, tau).unwrap().unwrap();
    assert!((root - expected).abs() < 1e-10 * expected);
}

#[test]
fn neutral_wavenumber_matches_capillary_cutoff() {
    let p = FluidParams::new(1.0, 2.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    let tau_c = neutral_wavenumber(&p, 0.05, 5.0).unwrap().unwrap();
    assert!((tau_c - 1.0).abs() < 0.01);
    assert_eq!(capillary_cutoff(&p), Some(1.0));
    assert_eq!(dispersion_root(&p, 2.0 * tau_c).unwrap(), None);
    for tau in [2.0, 3.0, 10.0] {
        assert!(oracle_s(&p, c(0.0, 0.0), tau).re > 0.0);
    }
}

#[test]
fn stable_configurations_have_no_growth() {
    let mut r = rng(18);
    for _ in 0..200 {
        let p = random_params(&mut r);
        let tau = log_uniform(&mut r, 1e-3, 1e3);
        assert_eq!(dispersion_root(&p, tau).unwrap(), None);
    }
}

fn sector_sets() -> [FluidParams; 3] {
    [
        FluidParams::symmetric(1.0, 1.0, 1.0).unwrap(),
        FluidParams::new(1.0, 1.0, 100.0, 1.0, 1.0, 0.0).unwrap(),
        FluidParams::new(100.0, 1.0, 1.0, 1.0, 1.0, 0.0).unwrap(),
    ]
}

#[test]
fn sector_certificate_passes_without_gravity() {
    let sampling = SectorSampling { lambda_radii: 32, lambda_angles: 32, tau_radii: 32, tau_angles: 3 };
    for p in sector_sets() {
        let cert = certify_sector_bound(&p, 0.1, 0.1, &sampling).unwrap();
        assert!(cert.passed(), "{cert:?}");
        let sign = real_part_scan(&p, 0.1, &sampling).unwrap();
        assert!(sign.all_positive(), "{sign:?}");
    }
}

#[test]
fn sector_certificate_degrades_under_gravity_instability() {
    let p = FluidParams::new(1.0, 2.0, 1.0, 1.0, 1.0, 1.0).unwrap();
    let sampling = SectorSampling { lambda_radii: 32, lambda_angles: 32, tau_radii: 32, tau_angles: 3 };
    let stable = certify_sector_bound(&FluidParams { gravity: 0.0, ..p }, 0.1, 0.1, &sampling).unwrap();
    let unstable = certify_sector_bound(&p, 0.1, 0.1, &sampling).unwrap();
    assert!(unstable.c_min < stable.c_min);
    let sign = real_part_scan(&p, 0.1, &sampling).unwrap();
    assert!(!sign.all_positive());
}

#[test]
fn branch_cut_is_reported() {
    let p = FluidParams::symmetric(1.0, 1.0, 1.0).unwrap();
    let err = boundary_symbol(&p, c(-4.0, 0.0), c(1.0, 0.0)).unwrap_err();
    assert!(matches!(err, Error::Branch { .. }));
}

proptest! {
    #[test]
    fn inverse_pair_is_identity(
        seed in any::<u64>(),
        dim in 1usize..=2,
    ) {
        let mut r = rng(seed);
        let p = random_params(&mut r);
        let lambda = random_lambda(&mut r);
        let xi = random_wavevector(&mut r, dim);
        let g = [random_c(&mut r), if dim == 2 { random_c(&mut r) } else { C64::new(0.0, 0.0) }];
        let gw = random_c(&mut r);
        let (v, w) = dn_inverse_apply(&p, lambda, dim, &xi, &g, gw).unwrap();
        let (hv, hw) = dn_matrix(&p, lambda, dim, &xi).unwrap().apply(&v, w);
        let scale = g.iter().chain([&gw]).map(|z| z.norm()).fold(0.0, f64::max);
        for j in 0..dim {
            prop_assert!((hv[j] - g[j]).norm() <= 1e-10 * scale);
        }
        prop_assert!((hw - gw).norm() <= 1e-10 * scale);
    }

    #[test]
    fn symbol_is_invariant_under_wavevector_rotation(seed in any::<u64>(), angle in 0.0..std::f64::consts::TAU) {
        let mut r = rng(seed);
        let p = random_params(&mut r);
        let lambda = random_lambda(&mut r);
        let tau = log_uniform(&mut r, 1e-2, 1e2);
        let a = dn_matrix(&p, lambda, 2, &[tau, 0.0]).unwrap();
        let b = dn_matrix(&p, lambda, 2, &[tau * angle.cos(), tau * angle.sin()]).unwrap();
        prop_assert!(rel_err(b.eval.s, a.eval.s) < 1e-13);
        prop_assert!(rel_err(b.entries[2][2], a.entries[2][2]) < 1e-13);
    }
}
