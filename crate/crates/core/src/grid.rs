use alloc::format;

use crate::error::{Error, Result};
use crate::Wavevector;

/// Periodic tangential grid: `points` samples per dimension over a torus of
/// period `length`. Flat index for `dim == 2` is `i0 * points + i1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TangentialGrid {
    dim: usize,
    length: f64,
    points: usize,
}

impl TangentialGrid {
    pub fn new(dim: usize, length: f64, points: usize) -> Result<Self> {
        if dim != 1 && dim != 2 {
            return Err(Error::Usage(format!("tangential dimension must be 1 or 2, got {dim}")));
        }
        if !(length.is_finite() && length > 0.0) {
            return Err(Error::Usage(format!("period must be > 0, got {length}")));
        }
        if points < 8 || !points.is_power_of_two() {
            return Err(Error::Usage(format!("points per dimension must be a power of two >= 8, got {points}")));
        }
        Ok(Self { dim, length, points })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn points(&self) -> usize {
        self.points
    }

    /// Total number of samples, `points^dim`.
    pub fn len(&self) -> usize {
        self.points.pow(self.dim as u32)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn spacing(&self) -> f64 {
        self.length / self.points as f64
    }

    /// Signed wavenumber index in `-N/2 ..= N/2 - 1` for FFT slot `i`.
    pub fn signed_index(&self, i: usize) -> i64 {
        let n = self.points as i64;
        let i = i as i64;
        if i < n / 2 {
            i
        } else {
            i - n
        }
    }

    /// FFT slot holding signed wavenumber index `k`.
    pub fn slot(&self, k: i64) -> usize {
        k.rem_euclid(self.points as i64) as usize
    }

    /// Per-axis FFT slots of a flat index.
    pub fn split(&self, flat: usize) -> [usize; 2] {
        if self.dim == 1 {
            [flat, 0]
        } else {
            [flat / self.points, flat % self.points]
        }
    }

    pub fn join(&self, slots: [usize; 2]) -> usize {
        if self.dim == 1 {
            slots[0]
        } else {
            slots[0] * self.points + slots[1]
        }
    }

    /// Signed integer wavenumber indices of a flat mode index.
    pub fn mode_indices(&self, flat: usize) -> [i64; 2] {
        let s = self.split(flat);
        if self.dim == 1 {
            [self.signed_index(s[0]), 0]
        } else {
            [self.signed_index(s[0]), self.signed_index(s[1])]
        }
    }

    /// `xi_k = 2 pi k / L` for a flat mode index.
    pub fn wavevector(&self, flat: usize) -> Wavevector {
        let k = self.mode_indices(flat);
        let scale = 2.0 * core::f64::consts::PI / self.length;
        [scale * k[0] as f64, scale * k[1] as f64]
    }

    /// Flat index of the mode paired with `flat` under `k -> -k`.
    pub fn conjugate_partner(&self, flat: usize) -> usize {
        let k = self.mode_indices(flat);
        self.join([self.slot(-k[0]), if self.dim == 1 { 0 } else { self.slot(-k[1]) }])
    }

    /// True if any axis sits on the Nyquist index `-N/2`.
    pub fn is_nyquist(&self, flat: usize) -> bool {
        let half = (self.points / 2) as i64;
        let k = self.mode_indices(flat);
        k[0] == -half || (self.dim == 2 && k[1] == -half)
    }

    /// Modes kept by the 2/3 truncation rule.
    pub fn is_resolved(&self, flat: usize) -> bool {
        let cut = (self.points / 3) as i64;
        let k = self.mode_indices(flat);
        k[0].abs() <= cut && k[1].abs() <= cut
    }

    /// Physical coordinates of a sample.
    pub fn coords(&self, flat: usize) -> [f64; 2] {
        let s = self.split(flat);
        let dx = self.spacing();
        if self.dim == 1 {
            [dx * s[0] as f64, 0.0]
        } else {
            [dx * s[0] as f64, dx * s[1] as f64]
        }
    }

    /// Flat mode index of the signed wavenumber indices `k`.
    pub fn mode_slot(&self, k: [i64; 2]) -> usize {
        if self.dim == 1 {
            self.slot(k[0])
        } else {
            self.join([self.slot(k[0]), self.slot(k[1])])
        }
    }
}

/// Uniform truncation of the two half-lines `[-Y, 0)` and `(0, Y]`.
///
/// Level `i` of either side sits at distance `i * dy` from the interface,
/// so level 0 holds the one-sided interface values `0-` / `0+`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerticalGrid {
    truncation: f64,
    points: usize,
}

impl VerticalGrid {
    pub fn new(truncation: f64, points: usize) -> Result<Self> {
        if !(truncation.is_finite() && truncation > 0.0) {
            return Err(Error::Usage(format!("vertical truncation must be > 0, got {truncation}")));
        }
        if points < 4 {
            return Err(Error::Usage(format!("need at least 4 vertical intervals, got {points}")));
        }
        Ok(Self { truncation, points })
    }

    pub fn truncation(&self) -> f64 {
        self.truncation
    }

    /// Number of intervals `M` per half-line.
    pub fn points(&self) -> usize {
        self.points
    }

    /// Samples per half-line including the interface, `M + 1`.
    pub fn levels(&self) -> usize {
        self.points + 1
    }

    pub fn spacing(&self) -> f64 {
        self.truncation / self.points as f64
    }

    /// Distance from the interface of level `i`.
    pub fn depth(&self, level: usize) -> f64 {
        level as f64 * self.spacing()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn wavenumber_zero_appears_once() {
        for dim in [1, 2] {
            let g = TangentialGrid::new(dim, 3.0, 16).unwrap();
            let zeros = (0..g.len()).filter(|&f| g.wavevector(f) == [0.0, 0.0]).count();
            assert_eq!(zeros, 1);
        }
    }

    #[test]
    fn wavenumbers_are_integer_multiples() {
        let g = TangentialGrid::new(1, 5.0, 8).unwrap();
        let ks: alloc::vec::Vec<i64> = (0..8).map(|i| g.signed_index(i)).collect();
        assert_eq!(ks, [0, 1, 2, 3, -4, -3, -2, -1]);
        let scale = 2.0 * core::f64::consts::PI / 5.0;
        for f in 0..8 {
            assert_eq!(g.wavevector(f)[0], scale * g.signed_index(f) as f64);
        }
        assert!((g.spacing() - 5.0 / 8.0).abs() < 1e-16);
    }

    #[test]
    fn partners_and_nyquist() {
        let g = TangentialGrid::new(2, 1.0, 8).unwrap();
        for f in 0..g.len() {
            let p = g.conjugate_partner(f);
            assert_eq!(g.conjugate_partner(p), f);
            let (a, b) = (g.mode_indices(f), g.mode_indices(p));
            if !g.is_nyquist(f) {
                assert_eq!([a[0] + b[0], a[1] + b[1]], [0, 0]);
            }
        }
        assert!(g.is_nyquist(g.mode_slot([-4, 1])));
        assert!(!g.is_resolved(g.mode_slot([3, 0])));
        assert!(g.is_resolved(g.mode_slot([2, -2])));
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(TangentialGrid::new(3, 1.0, 8).is_err());
        assert!(TangentialGrid::new(1, 1.0, 12).is_err());
        assert!(TangentialGrid::new(1, 1.0, 4).is_err());
        assert!(TangentialGrid::new(1, -1.0, 8).is_err());
        assert!(VerticalGrid::new(0.0, 8).is_err());
        let v = VerticalGrid::new(12.0, 48).unwrap();
        assert_eq!(v.levels(), 49);
        assert_eq!(v.depth(48), 12.0);
    }
}
