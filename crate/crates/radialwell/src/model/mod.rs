//! Physical data model shared by the solvers and the audits: units, geometry,
//! potentials, quantum numbers, and radial solutions.

mod mode;
mod potential;
mod spectrum;
mod units;

pub use mode::{ModeForm, RadialMode, SampledMode};
pub use potential::{Interior, PotentialSpec};
pub use spectrum::{BoundaryConditionFamily, Spectrum, SpectrumEntry};
pub use units::Units;

use serde::{Deserialize, Serialize};

/// Angular momentum channel. The magnetic quantum number is suppressed: the
/// radial problem is m-independent, and the only angular object that ever
/// enters is the constant s-wave harmonic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuantumChannel {
    pub l: u32,
}

impl QuantumChannel {
    /// The s-wave spherical harmonic, `Y_0^0 = (4 pi)^(-1/2)`.
    pub const Y00: f64 = 0.282_094_791_773_878_14;

    pub fn new(l: u32) -> Self {
        QuantumChannel { l }
    }

    /// `l(l+1)`, the centrifugal coupling in the radial equation.
    pub fn centrifugal(&self) -> f64 {
        (self.l * (self.l + 1)) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn s_wave_harmonic_is_unit_normalized() {
        // The full solid angle times |Y00|^2 is 1.
        assert!((4.0 * PI * QuantumChannel::Y00 * QuantumChannel::Y00 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn centrifugal_coupling() {
        assert_eq!(QuantumChannel::new(0).centrifugal(), 0.0);
        assert_eq!(QuantumChannel::new(3).centrifugal(), 12.0);
    }
}
