//! In-place radix-2 FFT over `C64`; lengths are powers of two.

// Inherent once std is anywhere in the build graph.
#[allow(unused_imports)]
use num_traits::Float;

use crate::C64;

pub(crate) fn fft_in_place(data: &mut [C64], inverse: bool) {
    let n = data.len();
    debug_assert!(n.is_power_of_two());
    if n < 2 {
        return;
    }
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            data.swap(i, j);
        }
    }
    let sign = if inverse { 1.0 } else { -1.0 };
    let mut len = 2;
    while len <= n {
        let angle = sign * 2.0 * core::f64::consts::PI / len as f64;
        let half = len / 2;
        for start in (0..n).step_by(len) {
            for k in 0..half {
                // twiddles evaluated directly to avoid drift from repeated products
                let theta = angle * k as f64;
                let w = C64::new(Float::cos(theta), Float::sin(theta));
                let a = data[start + k];
                let b = data[start + k + half] * w;
                data[start + k] = a + b;
                data[start + k + half] = a - b;
            }
        }
        len <<= 1;
    }
}

/// Unnormalized transform of a `points^dim` array laid out row-major.
pub(crate) fn fft_nd(data: &mut [C64], points: usize, dim: usize, inverse: bool) {
    if dim == 1 {
        fft_in_place(data, inverse);
        return;
    }
    for row in data.chunks_mut(points) {
        fft_in_place(row, inverse);
    }
    let mut column = alloc::vec![C64::new(0.0, 0.0); points];
    for c in 0..points {
        for r in 0..points {
            column[r] = data[r * points + c];
        }
        fft_in_place(&mut column, inverse);
        for r in 0..points {
            data[r * points + c] = column[r];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn naive_dft(x: &[C64]) -> Vec<C64> {
        let n = x.len();
        (0..n)
            .map(|k| {
                x.iter().enumerate().fold(C64::new(0.0, 0.0), |acc, (j, v)| {
                    let th = -2.0 * core::f64::consts::PI * (j * k) as f64 / n as f64;
                    acc + v * C64::new(th.cos(), th.sin())
                })
            })
            .collect()
    }

    #[test]
    fn matches_naive_dft() {
        let x: Vec<C64> = (0..32).map(|i| C64::new((i as f64 * 0.37).sin(), (i as f64 * 1.3).cos())).collect();
        let mut y = x.clone();
        fft_in_place(&mut y, false);
        for (a, b) in y.iter().zip(naive_dft(&x)) {
            assert!((a - b).norm() < 1e-12);
        }
    }
}
