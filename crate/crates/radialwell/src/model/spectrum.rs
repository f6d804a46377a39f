//! Eigenvalue lists and the boundary-condition families they answer to.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{QuantumChannel, RadialMode, Units};

/// Which condition closes the problem at the two ends of `(0, a)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BoundaryConditionFamily {
    /// `chi(0) = 0` and `chi(a) = 0`.
    Conventional,
    /// `chi(a) = 0` with the cosine radial part retained at the origin.
    /// Meaningful for `l = 0` only: the corresponding irregular solution at
    /// higher `l` is not square-integrable.
    HuangThomann,
}

impl BoundaryConditionFamily {
    pub fn requires_s_wave(&self) -> bool {
        matches!(self, BoundaryConditionFamily::HuangThomann)
    }

    pub fn validate_channel(&self, channel: QuantumChannel) -> Result<()> {
        if self.requires_s_wave() && channel.l > 0 {
            return Err(Error::FamilyRequiresSWave { l: channel.l });
        }
        Ok(())
    }
}

impl fmt::Display for BoundaryConditionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BoundaryConditionFamily::Conventional => write!(f, "conventional"),
            BoundaryConditionFamily::HuangThomann => write!(f, "huang-thomann"),
        }
    }
}

impl FromStr for BoundaryConditionFamily {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "conventional" => Ok(BoundaryConditionFamily::Conventional),
            "huang-thomann" => Ok(BoundaryConditionFamily::HuangThomann),
            other => Err(Error::invalid(format!(
                "unknown boundary-condition family {other:?}; \
                 expected \"conventional\" or \"huang-thomann\""
            ))),
        }
    }
}

/// One bound state: index, wavenumber, energy, interior node count.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumEntry {
    pub n: u32,
    pub k: f64,
    pub energy: f64,
    pub nodes: u32,
}

/// An ordered set of bound states for one channel and family.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    channel: QuantumChannel,
    family: BoundaryConditionFamily,
    radius: f64,
    units: Units,
    entries: Vec<SpectrumEntry>,
}

impl Spectrum {
    pub fn new(
        channel: QuantumChannel,
        family: BoundaryConditionFamily,
        radius: f64,
        units: Units,
        entries: Vec<SpectrumEntry>,
    ) -> Result<Self> {
        family.validate_channel(channel)?;
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid(format!(
                "spectrum radius must be positive, got {radius}"
            )));
        }
        for w in entries.windows(2) {
            if !(w[0].k < w[1].k) || w[0].n >= w[1].n {
                return Err(Error::invalid(format!(
                    "spectrum entries must be strictly ordered in n and k, \
                     got (n={}, k={}) before (n={}, k={})",
                    w[0].n, w[0].k, w[1].n, w[1].k
                )));
            }
        }
        for e in &entries {
            let expect = units.energy_from_k(e.k);
            if e.n == 0 || (e.energy - expect).abs() > 1e-12 * expect.abs().max(1.0) {
                return Err(Error::invalid(format!(
                    "entry n={} is inconsistent: E={} but k={} implies E={}",
                    e.n, e.energy, e.k, expect
                )));
            }
        }
        Ok(Spectrum {
            channel,
            family,
            radius,
            units,
            entries,
        })
    }

    pub fn channel(&self) -> QuantumChannel {
        self.channel
    }

    pub fn family(&self) -> BoundaryConditionFamily {
        self.family
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn units(&self) -> Units {
        self.units
    }

    pub fn entries(&self) -> &[SpectrumEntry] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// The analytic eigenmodes of the free well behind each entry: the
    /// regular solution for the conventional family, the cosine solution for
    /// huang-thomann. Meaningless for spectra of nonzero potentials, whose
    /// eigenfunctions only exist as integration output.
    pub fn well_modes(&self) -> Result<Vec<RadialMode>> {
        self.entries
            .iter()
            .map(|e| {
                let (regular, irregular) = match self.family {
                    BoundaryConditionFamily::Conventional => (1.0, 0.0),
                    BoundaryConditionFamily::HuangThomann => (0.0, 1.0),
                };
                RadialMode::analytic(e.k, self.channel, self.radius, regular, irregular)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn entry(n: u32, k: f64, units: &Units) -> SpectrumEntry {
        SpectrumEntry {
            n,
            k,
            energy: units.energy_from_k(k),
            nodes: n - 1,
        }
    }

    #[test]
    fn family_strings_round_trip() {
        for f in [
            BoundaryConditionFamily::Conventional,
            BoundaryConditionFamily::HuangThomann,
        ] {
            let s = f.to_string();
            assert_eq!(s.parse::<BoundaryConditionFamily>().unwrap(), f);
        }
        assert!("neumann".parse::<BoundaryConditionFamily>().is_err());
    }

    #[test]
    fn huang_thomann_is_s_wave_only() {
        let err = BoundaryConditionFamily::HuangThomann
            .validate_channel(QuantumChannel::new(2))
            .unwrap_err();
        assert!(matches!(err, Error::FamilyRequiresSWave { l: 2 }));
        assert!(BoundaryConditionFamily::HuangThomann
            .validate_channel(QuantumChannel::new(0))
            .is_ok());
    }

    #[test]
    fn construction_enforces_ordering_and_energy_consistency() {
        let u = Units::default();
        let good = Spectrum::new(
            QuantumChannel::new(0),
            BoundaryConditionFamily::Conventional,
            1.0,
            u,
            vec![entry(1, PI, &u), entry(2, 2.0 * PI, &u)],
        );
        assert!(good.is_ok());

        let unordered = Spectrum::new(
            QuantumChannel::new(0),
            BoundaryConditionFamily::Conventional,
            1.0,
            u,
            vec![entry(1, 2.0 * PI, &u), entry(2, PI, &u)],
        );
        assert!(unordered.is_err());

        let wrong_energy = Spectrum::new(
            QuantumChannel::new(0),
            BoundaryConditionFamily::Conventional,
            1.0,
            u,
            vec![SpectrumEntry {
                n: 1,
                k: PI,
                energy: 1.0,
                nodes: 0,
            }],
        );
        assert!(wrong_energy.is_err());
    }

    #[test]
    fn well_modes_follow_the_family() {
        let u = Units::default();
        let s = Spectrum::new(
            QuantumChannel::new(0),
            BoundaryConditionFamily::HuangThomann,
            1.0,
            u,
            vec![entry(1, 0.5 * PI, &u)],
        )
        .unwrap();
        let modes = s.well_modes().unwrap();
        assert_eq!(modes[0].amplitudes(), Some((0.0, 1.0)));
        let (chi, _) = modes[0].evaluate_chi(0.0).unwrap();
        assert_eq!(chi, 1.0);
    }
}
