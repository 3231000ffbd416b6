use alloc::format;

use crate::error::{Error, Result};

/// The two fluid phases. `Lower` occupies `y < 0` (index 1), `Upper`
/// occupies `y > 0` (index 2). Jumps are always upper minus lower.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Phase {
    Lower,
    Upper,
}

impl Phase {
    pub fn from_index(j: usize) -> Result<Self> {
        match j {
            1 => Ok(Phase::Lower),
            2 => Ok(Phase::Upper),
            _ => Err(Error::Usage(format!("phase index must be 1 or 2, got {j}"))),
        }
    }

    pub fn index(self) -> usize {
        match self {
            Phase::Lower => 1,
            Phase::Upper => 2,
        }
    }
}

/// Physical constants of the two-phase system.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FluidParams {
    pub rho1: f64,
    pub rho2: f64,
    pub mu1: f64,
    pub mu2: f64,
    pub sigma: f64,
    /// Gravitational acceleration; zero disables gravity.
    pub gravity: f64,
}

impl FluidParams {
    pub fn new(rho1: f64, rho2: f64, mu1: f64, mu2: f64, sigma: f64, gravity: f64) -> Result<Self> {
        let p = Self { rho1, rho2, mu1, mu2, sigma, gravity };
        p.validate()?;
        Ok(p)
    }

    /// Equal densities and viscosities in both phases, no gravity.
    pub fn symmetric(rho: f64, mu: f64, sigma: f64) -> Result<Self> {
        Self::new(rho, rho, mu, mu, sigma, 0.0)
    }

    pub fn validate(&self) -> Result<()> {
        let positive =
            [("rho1", self.rho1), ("rho2", self.rho2), ("mu1", self.mu1), ("mu2", self.mu2), ("sigma", self.sigma)];
        for (name, value) in positive {
            if !(value.is_finite() && value > 0.0) {
                return Err(Error::InvalidParams(format!("{name} must be finite and > 0, got {value}")));
            }
        }
        if !(self.gravity.is_finite() && self.gravity >= 0.0) {
            return Err(Error::InvalidParams(format!("gravity must be finite and >= 0, got {}", self.gravity)));
        }
        Ok(())
    }

    pub fn rho(&self, phase: Phase) -> f64 {
        match phase {
            Phase::Lower => self.rho1,
            Phase::Upper => self.rho2,
        }
    }

    pub fn mu(&self, phase: Phase) -> f64 {
        match phase {
            Phase::Lower => self.mu1,
            Phase::Upper => self.mu2,
        }
    }

    /// `[[rho]] = rho2 - rho1`.
    pub fn jump_rho(&self) -> f64 {
        self.rho2 - self.rho1
    }

    /// `[[mu]] = mu2 - mu1`.
    pub fn jump_mu(&self) -> f64 {
        self.mu2 - self.mu1
    }

    pub fn has_gravity(&self) -> bool {
        self.gravity > 0.0
    }

    /// Same fluids with the phases relabelled.
    pub fn swapped(&self) -> Self {
        Self { rho1: self.rho2, rho2: self.rho1, mu1: self.mu2, mu2: self.mu1, ..*self }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_non_positive_constants() {
        assert!(FluidParams::new(1.0, 1.0, -1.0, 1.0, 1.0, 0.0).is_err());
        assert!(FluidParams::new(1.0, 0.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(FluidParams::new(1.0, 1.0, 1.0, 1.0, 0.0, 0.0).is_err());
        assert!(FluidParams::new(1.0, 1.0, 1.0, 1.0, 1.0, -9.8).is_err());
        assert!(FluidParams::new(1.0, 1.0, 1.0, f64::NAN, 1.0, 0.0).is_err());
        assert!(FluidParams::new(1.0, 2.0, 3.0, 4.0, 5.0, 0.0).is_ok());
    }

    #[test]
    fn jumps_are_upper_minus_lower() {
        let p = FluidParams::new(1.0, 3.0, 2.0, 7.0, 1.0, 0.0).unwrap();
        assert_eq!(p.jump_rho(), 2.0);
        assert_eq!(p.jump_mu(), 5.0);
        assert_eq!(p.swapped().jump_mu(), -5.0);
        assert_eq!(Phase::from_index(2).unwrap(), Phase::Upper);
        assert!(Phase::from_index(3).is_err());
    }
}
