use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::grid::{TangentialGrid, VerticalGrid};
use crate::params::Phase;

/// Real height field over the tangential grid at a given time.
#[derive(Debug, Clone, PartialEq)]
pub struct InterfaceState {
    pub h: Vec<f64>,
    pub time: f64,
}

impl InterfaceState {
    pub fn flat(grid: &TangentialGrid) -> Self {
        Self { h: vec![0.0; grid.len()], time: 0.0 }
    }

    pub fn from_fn(grid: &TangentialGrid, f: impl Fn([f64; 2]) -> f64) -> Self {
        Self { h: (0..grid.len()).map(|i| f(grid.coords(i))).collect(), time: 0.0 }
    }

    pub fn mean(&self) -> f64 {
        self.h.iter().sum::<f64>() / self.h.len() as f64
    }
}

/// A scalar sampled on tangential grid x both vertical half-lines.
///
/// Storage is `[level * ntan + p]` per side; level 0 holds the one-sided
/// interface value of that side.
#[derive(Debug, Clone, PartialEq)]
pub struct LayeredField {
    ntan: usize,
    levels: usize,
    pub upper: Vec<f64>,
    pub lower: Vec<f64>,
}

impl LayeredField {
    pub fn zeros(grid: &TangentialGrid, vgrid: &VerticalGrid) -> Self {
        let n = grid.len() * vgrid.levels();
        Self { ntan: grid.len(), levels: vgrid.levels(), upper: vec![0.0; n], lower: vec![0.0; n] }
    }

    /// Samples `f(x, y)`; at `y = 0` the `phase` argument tells the side.
    pub fn from_fn(grid: &TangentialGrid, vgrid: &VerticalGrid, f: impl Fn([f64; 2], f64, Phase) -> f64) -> Self {
        let mut out = Self::zeros(grid, vgrid);
        for level in 0..vgrid.levels() {
            let d = vgrid.depth(level);
            for p in 0..grid.len() {
                let x = grid.coords(p);
                out.upper[level * out.ntan + p] = f(x, d, Phase::Upper);
                out.lower[level * out.ntan + p] = f(x, -d, Phase::Lower);
            }
        }
        out
    }

    pub fn ntan(&self) -> usize {
        self.ntan
    }

    pub fn levels(&self) -> usize {
        self.levels
    }

    pub fn side(&self, phase: Phase) -> &[f64] {
        match phase {
            Phase::Upper => &self.upper,
            Phase::Lower => &self.lower,
        }
    }

    pub fn side_mut(&mut self, phase: Phase) -> &mut [f64] {
        match phase {
            Phase::Upper => &mut self.upper,
            Phase::Lower => &mut self.lower,
        }
    }

    pub fn level(&self, phase: Phase, level: usize) -> &[f64] {
        &self.side(phase)[level * self.ntan..(level + 1) * self.ntan]
    }

    pub fn level_mut(&mut self, phase: Phase, level: usize) -> &mut [f64] {
        let n = self.ntan;
        &mut self.side_mut(phase)[level * n..(level + 1) * n]
    }

    /// One-sided interface trace.
    pub fn trace(&self, phase: Phase) -> &[f64] {
        self.level(phase, 0)
    }

    pub fn check_layout(&self, grid: &TangentialGrid, vgrid: &VerticalGrid) -> Result<()> {
        if self.ntan != grid.len() || self.levels != vgrid.levels() {
            return Err(Error::Usage(format!(
                "field layout {}x{} does not match grids {}x{}",
                self.ntan,
                self.levels,
                grid.len(),
                vgrid.levels()
            )));
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut out = self.clone();
        out.upper.iter_mut().chain(out.lower.iter_mut()).for_each(|x| *x *= factor);
        out
    }

    pub fn sup_norm(&self) -> f64 {
        self.upper.iter().chain(&self.lower).fold(0.0, |m: f64, x| m.max(x.abs()))
    }
}

/// Sampled velocity `(v, w)` and pressure `pi` on both half-lines.
#[derive(Debug, Clone, PartialEq)]
pub struct BulkFields {
    /// Tangential components, one per tangential dimension.
    pub v: Vec<LayeredField>,
    pub w: LayeredField,
    pub pi: LayeredField,
}

impl BulkFields {
    pub fn zeros(grid: &TangentialGrid, vgrid: &VerticalGrid) -> Self {
        let z = LayeredField::zeros(grid, vgrid);
        Self { v: vec![z.clone(); grid.dim()], w: z.clone(), pi: z }
    }

    pub fn check_layout(&self, grid: &TangentialGrid, vgrid: &VerticalGrid) -> Result<()> {
        if self.v.len() != grid.dim() {
            return Err(Error::Usage(format!(
                "expected {} tangential velocity components, got {}",
                grid.dim(),
                self.v.len()
            )));
        }
        for f in self.v.iter().chain([&self.w, &self.pi]) {
            f.check_layout(grid, vgrid)?;
        }
        Ok(())
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self {
            v: self.v.iter().map(|f| f.scaled(factor)).collect(),
            w: self.w.scaled(factor),
            pi: self.pi.scaled(factor),
        }
    }

    /// Largest interface mismatch of the velocity, `max |u(0+) - u(0-)|`.
    pub fn velocity_jump(&self) -> f64 {
        self.v
            .iter()
            .chain(core::iter::once(&self.w))
            .flat_map(|f| f.trace(Phase::Upper).iter().zip(f.trace(Phase::Lower)))
            .fold(0.0, |m: f64, (a, b)| m.max((a - b).abs()))
    }
}
