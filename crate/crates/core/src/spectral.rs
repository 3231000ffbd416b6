//! Discrete Fourier transform contract on the tangential torus.
//!
//! Normalization: `forward` divides by the number of samples, so mode 0 is
//! the arithmetic mean and `inverse` is a plain sum over modes.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::fft::fft_nd;
use crate::grid::TangentialGrid;
use crate::{C64, I, ZERO};

/// Relative tolerance on conjugate symmetry and residual imaginary parts.
pub const SYMMETRY_TOL: f64 = 1e-10;

pub fn forward_transform(grid: &TangentialGrid, field: &[f64]) -> Result<Vec<C64>> {
    if field.len() != grid.len() {
        return Err(Error::Usage(format!("field has {} samples, grid expects {}", field.len(), grid.len())));
    }
    let mut data: Vec<C64> = field.iter().map(|&x| C64::new(x, 0.0)).collect();
    fft_nd(&mut data, grid.points(), grid.dim(), false);
    // Project onto exact conjugate symmetry so that derivative symbols,
    // which preserve it bit for bit, never trip the check in `symmetrize`.
    let scale = 0.5 / grid.len() as f64;
    Ok((0..data.len()).map(|f| (data[f] + data[grid.conjugate_partner(f)].conj()) * scale).collect())
}

/// Checks conjugate symmetry and returns the symmetrized spectrum.
pub fn symmetrize(grid: &TangentialGrid, modes: &[C64]) -> Result<Vec<C64>> {
    if modes.len() != grid.len() {
        return Err(Error::Usage(format!("spectrum has {} modes, grid expects {}", modes.len(), grid.len())));
    }
    let scale = modes.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let mut worst = (0usize, 0.0f64);
    let mut out = Vec::with_capacity(modes.len());
    for (f, c) in modes.iter().enumerate() {
        let partner = modes[grid.conjugate_partner(f)].conj();
        let defect = (c - partner).norm();
        if defect > worst.1 {
            worst = (f, defect);
        }
        out.push((c + partner) * 0.5);
    }
    if scale > 0.0 && worst.1 > SYMMETRY_TOL * scale {
        return Err(Error::Asymmetric { mode: worst.0, defect: worst.1 / scale });
    }
    if !worst.1.is_finite() {
        return Err(Error::Asymmetric { mode: worst.0, defect: f64::INFINITY });
    }
    Ok(out)
}

pub fn inverse_transform(grid: &TangentialGrid, modes: &[C64]) -> Result<Vec<f64>> {
    let mut data = symmetrize(grid, modes)?;
    // The l1 norm of the spectrum bounds the sup norm of the field.
    let bound = data.iter().map(|c| c.norm()).sum::<f64>();
    fft_nd(&mut data, grid.points(), grid.dim(), true);
    let (worst, residual) =
        data.iter().enumerate().fold((0, 0.0f64), |acc, (i, c)| if c.im.abs() > acc.1 { (i, c.im.abs()) } else { acc });
    if !(residual <= SYMMETRY_TOL * bound) && residual > 0.0 {
        return Err(Error::Asymmetric { mode: worst, defect: residual / bound.max(f64::MIN_POSITIVE) });
    }
    Ok(data.into_iter().map(|c| c.re).collect())
}

/// Multiplies modes by the symbol of `d/dx_axis`. The Nyquist slot of that
/// axis is dropped so that real fields stay real.
pub fn derivative_modes(grid: &TangentialGrid, modes: &[C64], axis: usize) -> Vec<C64> {
    let half = (grid.points() / 2) as i64;
    modes
        .iter()
        .enumerate()
        .map(|(f, &c)| {
            let k = grid.mode_indices(f);
            if k[axis] == -half {
                ZERO
            } else {
                I * grid.wavevector(f)[axis] * c
            }
        })
        .collect()
}

/// `-|xi|^2` times the modes.
pub fn laplacian_modes(grid: &TangentialGrid, modes: &[C64]) -> Vec<C64> {
    modes
        .iter()
        .enumerate()
        .map(|(f, &c)| {
            let xi = grid.wavevector(f);
            -(xi[0] * xi[0] + xi[1] * xi[1]) * c
        })
        .collect()
}

/// Zeroes every mode outside the 2/3 truncation window.
pub fn dealias(grid: &TangentialGrid, modes: &mut [C64]) {
    for (f, c) in modes.iter_mut().enumerate() {
        if !grid.is_resolved(f) {
            *c = ZERO;
        }
    }
}

/// First and second tangential derivatives of a real field, computed spectrally.
#[derive(Debug, Clone)]
pub struct Derivatives {
    /// `grad[j]` is `d/dx_j`.
    pub grad: Vec<Vec<f64>>,
    /// `hessian[j][k]` is `d^2/dx_j dx_k`.
    pub hessian: Vec<Vec<Vec<f64>>>,
    pub laplacian: Vec<f64>,
}

pub fn gradient(grid: &TangentialGrid, field: &[f64]) -> Result<Vec<Vec<f64>>> {
    let modes = forward_transform(grid, field)?;
    (0..grid.dim()).map(|j| inverse_transform(grid, &derivative_modes(grid, &modes, j))).collect()
}

pub fn derivatives(grid: &TangentialGrid, field: &[f64]) -> Result<Derivatives> {
    let modes = forward_transform(grid, field)?;
    let dim = grid.dim();
    let mut grad = Vec::with_capacity(dim);
    let mut first = Vec::with_capacity(dim);
    for j in 0..dim {
        let d = derivative_modes(grid, &modes, j);
        grad.push(inverse_transform(grid, &d)?);
        first.push(d);
    }
    let mut hessian = alloc::vec![alloc::vec![Vec::new(); dim]; dim];
    for j in 0..dim {
        for k in j..dim {
            let second = if j == k {
                let xi2: Vec<C64> = modes
                    .iter()
                    .enumerate()
                    .map(|(f, &c)| {
                        let x = grid.wavevector(f)[j];
                        -x * x * c
                    })
                    .collect();
                xi2
            } else {
                derivative_modes(grid, &first[j], k)
            };
            let values = inverse_transform(grid, &second)?;
            hessian[k][j] = values.clone();
            hessian[j][k] = values;
        }
    }
    let mut laplacian = alloc::vec![0.0; grid.len()];
    for (j, row) in hessian.iter().enumerate() {
        for (acc, v) in laplacian.iter_mut().zip(&row[j]) {
            *acc += v;
        }
    }
    Ok(Derivatives { grad, hessian, laplacian })
}

/// Largest absolute sample.
pub fn sup_norm(field: &[f64]) -> f64 {
    field.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use core::f64::consts::PI;
    use rand::{Rng, SeedableRng};

    fn grid1(n: usize) -> TangentialGrid {
        TangentialGrid::new(1, 2.0, n).unwrap()
    }

    #[test]
    fn constant_field_has_only_mean() {
        let g = grid1(8);
        let m = forward_transform(&g, &[1.0; 8]).unwrap();
        assert!((m[0] - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!(m[1..].iter().all(|c| c.norm() < 1e-15));
    }

    #[test]
    fn single_harmonic() {
        let g = grid1(16);
        let f: Vec<f64> = (0..16).map(|i| (2.0 * PI * g.coords(i)[0] / g.length()).cos()).collect();
        let m = forward_transform(&g, &f).unwrap();
        for (i, c) in m.iter().enumerate() {
            let k = g.signed_index(i);
            let expect = if k.abs() == 1 { 0.5 } else { 0.0 };
            assert!((c - C64::new(expect, 0.0)).norm() < 1e-12, "mode {k}: {c}");
        }
    }

    #[test]
    fn delta_spectrum_inverts_to_constant() {
        let g = grid1(8);
        let mut m = alloc::vec![ZERO; 8];
        m[0] = C64::new(1.0, 0.0);
        let f = inverse_transform(&g, &m).unwrap();
        assert!(f.iter().all(|x| (x - 1.0).abs() < 1e-15));
    }

    #[test]
    fn random_round_trip_and_parseval() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(7);
        for dim in [1, 2] {
            let g = TangentialGrid::new(dim, 3.0, 16).unwrap();
            for _ in 0..100 {
                let f: Vec<f64> = (0..g.len()).map(|_| rng.gen_range(-1.0..1.0)).collect();
                let m = forward_transform(&g, &f).unwrap();
                let back = inverse_transform(&g, &m).unwrap();
                let norm = sup_norm(&f);
                let err = f.iter().zip(&back).fold(0.0f64, |e, (a, b)| e.max((a - b).abs()));
                assert!(err <= 1e-12 * norm);
                let lhs: f64 = m.iter().map(|c| c.norm_sqr()).sum::<f64>() * g.len() as f64;
                let rhs: f64 = f.iter().map(|x| x * x).sum();
                assert!((lhs - rhs).abs() <= 1e-10 * rhs);
            }
        }
    }

    #[test]
    fn injected_asymmetry_is_rejected() {
        let g = grid1(16);
        let f: Vec<f64> = (0..16).map(|i| (i as f64).sin()).collect();
        let mut m = forward_transform(&g, &f).unwrap();
        m[3] += C64::new(1e-3, 0.0);
        match inverse_transform(&g, &m) {
            Err(Error::Asymmetric { mode, .. }) => assert!(mode == 3 || mode == 13),
            other => panic!("expected asymmetry error, got {other:?}"),
        }
    }

    #[test]
    fn length_mismatch_is_usage_error() {
        let g = grid1(8);
        assert!(matches!(forward_transform(&g, &[0.0; 7]), Err(Error::Usage(_))));
    }

    #[test]
    fn spectral_derivatives_of_trig_field() {
        let g = TangentialGrid::new(2, 2.0 * PI, 16).unwrap();
        let f: Vec<f64> = (0..g.len())
            .map(|i| {
                let [x, y] = g.coords(i);
                (2.0 * x).sin() * y.cos()
            })
            .collect();
        let d = derivatives(&g, &f).unwrap();
        for i in 0..g.len() {
            let [x, y] = g.coords(i);
            assert!((d.grad[0][i] - 2.0 * (2.0 * x).cos() * y.cos()).abs() < 1e-12);
            assert!((d.grad[1][i] + (2.0 * x).sin() * y.sin()).abs() < 1e-12);
            assert!((d.hessian[0][1][i] + 2.0 * (2.0 * x).cos() * y.sin()).abs() < 1e-12);
            assert!((d.laplacian[i] + 5.0 * f[i]).abs() < 1e-12);
        }
    }
}
