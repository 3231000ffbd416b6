//! Complex banded LU factorization with partial pivoting.
//!
//! Row `i` stores columns `i - kl ..= i + ku + kl`; the extra `kl` slots
//! absorb fill-in from row interchanges.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::{C64, ZERO};

/// Pivots below this fraction of the largest entry are treated as zero.
pub const PIVOT_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<C64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self { n, kl, ku, width, data: vec![ZERO; n * width] }
    }

    pub fn size(&self) -> usize {
        self.n
    }

    fn slot(&self, i: usize, j: usize) -> usize {
        debug_assert!(j + self.kl >= i && j <= i + self.ku + self.kl, "({i}, {j}) outside band");
        i * self.width + (j + self.kl - i)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        if j + self.kl < i || j > i + self.ku + self.kl {
            ZERO
        } else {
            self.data[self.slot(i, j)]
        }
    }

    pub fn add(&mut self, i: usize, j: usize, value: C64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "entry ({i}, {j}) outside the declared band");
        let s = self.slot(i, j);
        self.data[s] += value;
    }

    pub fn mul_vec(&self, x: &[C64]) -> Vec<C64> {
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku + 1).min(self.n);
                (lo..hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    pub fn factor(mut self) -> Result<BandLu> {
        let n = self.n;
        let scale = self.data.iter().fold(0.0f64, |m, c| m.max(c.norm()));
        let mut perm = vec![0usize; n];
        let reach = self.kl + self.ku;
        for k in 0..n {
            let last_row = (k + self.kl + 1).min(n);
            let mut p = k;
            let mut best = self.get(k, k).norm();
            for i in k + 1..last_row {
                let v = self.get(i, k).norm();
                if v > best {
                    best = v;
                    p = i;
                }
            }
            if !(best > PIVOT_TOL * scale) {
                return Err(Error::Discretization { pivot: best / scale.max(f64::MIN_POSITIVE), row: k });
            }
            perm[k] = p;
            let last_col = (k + reach + 1).min(n);
            if p != k {
                for j in k..last_col {
                    let (a, b) = (self.slot(k, j), self.slot(p, j));
                    self.data.swap(a, b);
                }
            }
            let pivot = self.data[self.slot(k, k)];
            for i in k + 1..last_row {
                let s = self.slot(i, k);
                let factor = self.data[s] / pivot;
                self.data[s] = factor;
                if factor == ZERO {
                    continue;
                }
                for j in k + 1..last_col {
                    let upper = self.data[self.slot(k, j)];
                    let t = self.slot(i, j);
                    self.data[t] -= factor * upper;
                }
            }
        }
        Ok(BandLu { lu: self, perm })
    }
}

#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
    perm: Vec<usize>,
}

impl BandLu {
    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let a = &self.lu;
        let n = a.n;
        let mut b = rhs.to_vec();
        for k in 0..n {
            b.swap(k, self.perm[k]);
            let bk = b[k];
            if bk == ZERO {
                continue;
            }
            for i in k + 1..(k + a.kl + 1).min(n) {
                b[i] -= a.data[a.slot(i, k)] * bk;
            }
        }
        for i in (0..n).rev() {
            let mut acc = b[i];
            for j in i + 1..(i + a.kl + a.ku + 1).min(n) {
                acc -= a.data[a.slot(i, j)] * b[j];
            }
            b[i] = acc / a.data[a.slot(i, i)];
        }
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};

    #[test]
    fn solves_random_banded_system_needing_pivots() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(3);
        let (n, kl, ku) = (40, 3, 2);
        let mut a = BandMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..(i + ku + 1).min(n) {
                // Small diagonal forces row interchanges.
                let scale = if i == j { 1e-3 } else { 1.0 };
                a.add(i, j, C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)) * scale);
            }
        }
        let x: Vec<C64> = (0..n).map(|i| C64::new(i as f64, 1.0 - i as f64)).collect();
        let b = a.mul_vec(&x);
        let lu = a.clone().factor().unwrap();
        let y = lu.solve(&b);
        let err = x.iter().zip(&y).fold(0.0f64, |m, (p, q)| m.max((p - q).norm()));
        assert!(err < 1e-9, "error {err}");
    }

    #[test]
    fn singular_matrix_is_reported() {
        let mut a = BandMatrix::zeros(3, 1, 1);
        a.add(0, 0, C64::new(1.0, 0.0));
        a.add(1, 0, C64::new(1.0, 0.0));
        a.add(2, 2, C64::new(1.0, 0.0));
        assert!(matches!(a.factor(), Err(Error::Discretization { row: 1, .. })));
    }
}
