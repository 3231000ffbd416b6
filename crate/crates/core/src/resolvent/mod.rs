//! Per-mode solution of the two-phase resolvent problem: closed-form
//! profiles and an independent finite-difference oracle.

mod banded;
mod bvp;
mod profile;

pub use banded::{BandLu, BandMatrix, PIVOT_TOL};
pub use bvp::{
    decay_rate, dn_numeric, solve_mode_bvp, ForcingSample, InterfaceData, InterfaceKind, ModeForcing, ModeSystem,
    NumericModeSolution, MIN_DECAY_LENGTHS,
};
pub use profile::{solve_mode_dirichlet, ModeProfile, ModeValue};
