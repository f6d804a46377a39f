//! Physical scales of the Schrödinger problem.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Planck's constant and the (reduced) particle mass.
///
/// The defaults `hbar = 1`, `mu = 1/2` make `hbar^2 / 2 mu = 1`, so energies
/// coincide with squared wavenumbers and results are directly comparable
/// between tools without unit bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Units {
    pub hbar: f64,
    pub mu: f64,
}

impl Default for Units {
    fn default() -> Self {
        Units { hbar: 1.0, mu: 0.5 }
    }
}

impl Units {
    pub fn new(hbar: f64, mu: f64) -> Result<Self> {
        if !(hbar.is_finite() && hbar > 0.0 && mu.is_finite() && mu > 0.0) {
            return Err(Error::invalid(format!(
                "units require hbar > 0 and mu > 0, got hbar = {hbar}, mu = {mu}"
            )));
        }
        Ok(Units { hbar, mu })
    }

    /// `E = hbar^2 k^2 / 2 mu`, strictly increasing in `|k|`.
    pub fn energy_from_k(&self, k: f64) -> f64 {
        self.hbar * self.hbar * k * k / (2.0 * self.mu)
    }

    /// Inverse of `energy_from_k` on `k >= 0`.
    pub fn k_from_energy(&self, energy: f64) -> Result<f64> {
        if !(energy.is_finite() && energy >= 0.0) {
            return Err(Error::invalid(format!(
                "wavenumber is defined for energies >= 0, got {energy}"
            )));
        }
        Ok((2.0 * self.mu * energy).sqrt() / self.hbar)
    }

    /// `2 mu / hbar^2`, the factor converting V(r) to the coefficient that
    /// enters the radial equation.
    pub fn potential_scale(&self) -> f64 {
        2.0 * self.mu / (self.hbar * self.hbar)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_units_make_energy_the_squared_wavenumber() {
        let u = Units::default();
        assert_eq!(u.energy_from_k(3.0), 9.0);
        assert_eq!(u.potential_scale(), 1.0);
    }

    #[test]
    fn energy_is_monotone_and_invertible() {
        let u = Units::new(2.0, 3.0).unwrap();
        let ks = [0.0, 0.5, 1.0, 4.0, 11.0];
        for w in ks.windows(2) {
            assert!(u.energy_from_k(w[0]) < u.energy_from_k(w[1]));
        }
        for &k in &ks {
            let back = u.k_from_energy(u.energy_from_k(k)).unwrap();
            assert!((back - k).abs() <= 1e-14 * (1.0 + k));
        }
    }

    #[test]
    fn rejects_nonpositive_scales() {
        assert!(Units::new(0.0, 1.0).is_err());
        assert!(Units::new(1.0, -2.0).is_err());
        assert!(Units::new(f64::NAN, 1.0).is_err());
        assert!(Units::default().k_from_energy(-1.0).is_err());
    }
}
