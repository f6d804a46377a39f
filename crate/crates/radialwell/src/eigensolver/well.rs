//! Closed-form spectra of the empty spherical well.

use std::f64::consts::PI;

use crate::eigensolver::zeros::bessel_zeros;
use crate::error::{Error, Result};
use crate::model::{
    BoundaryConditionFamily, PotentialSpec, QuantumChannel, RadialMode, Spectrum, SpectrumEntry,
    Units,
};

/// Bound-state spectrum of the empty well of radius `a`.
///
/// Dirichlet modes quantize at `k_n = z_{nl} / a` where `z_{nl}` is the
/// n-th positive zero of `j_l`; the cosine family quantizes at
/// `k_n = (n - 1/2) pi / a`, the zeros of `cos(k a)`. Node counts are
/// measured on the constructed eigenfunctions rather than asserted.
pub fn well_spectrum(
    geometry: &PotentialSpec,
    channel: QuantumChannel,
    family: BoundaryConditionFamily,
    units: Units,
    n_max: u32,
) -> Result<Spectrum> {
    if !geometry.is_free() {
        return Err(Error::invalid(
            "closed-form spectra exist only for the empty well; use the shooting solver for a nonzero interior"
                .to_string(),
        ));
    }
    family.validate_channel(channel)?;
    let a = geometry.radius();
    let ks: Vec<f64> = match family {
        BoundaryConditionFamily::Conventional => bessel_zeros(channel.l, n_max)?
            .into_iter()
            .map(|z| z / a)
            .collect(),
        BoundaryConditionFamily::HuangThomann => {
            (1..=n_max).map(|n| (n as f64 - 0.5) * PI / a).collect()
        }
    };
    let (regular, irregular) = match family {
        BoundaryConditionFamily::Conventional => (1.0, 0.0),
        BoundaryConditionFamily::HuangThomann => (0.0, 1.0),
    };
    let mut entries = Vec::with_capacity(ks.len());
    for (i, k) in ks.into_iter().enumerate() {
        let mode = RadialMode::analytic(k, channel, a, regular, irregular)?;
        entries.push(SpectrumEntry {
            n: i as u32 + 1,
            k,
            energy: units.energy_from_k(k),
            nodes: mode.count_interior_nodes()?,
        });
    }
    Spectrum::new(channel, family, a, units, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn free(a: f64) -> PotentialSpec {
        PotentialSpec::zero(a).unwrap()
    }

    #[test]
    fn s_wave_dirichlet_levels_are_pi_multiples() {
        let s = well_spectrum(
            &free(1.0),
            QuantumChannel::new(0),
            BoundaryConditionFamily::Conventional,
            Units::default(),
            3,
        )
        .unwrap();
        for (i, e) in s.entries().iter().enumerate() {
            let n = i as f64 + 1.0;
            assert_relative_eq!(e.k, n * PI, max_relative = 1e-14);
            assert_relative_eq!(e.energy, (n * PI).powi(2), max_relative = 1e-14);
            assert_eq!(e.nodes, i as u32);
        }
    }

    #[test]
    fn cosine_family_levels_are_half_integer_multiples() {
        let s = well_spectrum(
            &free(1.0),
            QuantumChannel::new(0),
            BoundaryConditionFamily::HuangThomann,
            Units::default(),
            2,
        )
        .unwrap();
        assert_relative_eq!(s.entries()[0].k, 0.5 * PI, max_relative = 1e-14);
        assert_relative_eq!(s.entries()[1].k, 1.5 * PI, max_relative = 1e-14);
        assert_eq!(s.entries()[0].nodes, 0);
        assert_eq!(s.entries()[1].nodes, 1);
    }

    #[test]
    fn p_wave_level_scales_with_the_radius() {
        let s = well_spectrum(
            &free(2.0),
            QuantumChannel::new(1),
            BoundaryConditionFamily::Conventional,
            Units::default(),
            1,
        )
        .unwrap();
        assert_relative_eq!(
            s.entries()[0].k,
            4.493409457909064 / 2.0,
            max_relative = 1e-12
        );
    }

    #[test]
    fn radius_scaling_is_exact() {
        let a = 3.0;
        let unit = well_spectrum(
            &free(1.0),
            QuantumChannel::new(2),
            BoundaryConditionFamily::Conventional,
            Units::default(),
            5,
        )
        .unwrap();
        let scaled = well_spectrum(
            &free(a),
            QuantumChannel::new(2),
            BoundaryConditionFamily::Conventional,
            Units::default(),
            5,
        )
        .unwrap();
        for (u, s) in unit.entries().iter().zip(scaled.entries()) {
            assert_relative_eq!(s.k, u.k / a, max_relative = 1e-12);
            assert_relative_eq!(s.energy, u.energy / (a * a), max_relative = 1e-12);
        }
    }

    #[test]
    fn cosine_family_refuses_higher_partial_waves() {
        let err = well_spectrum(
            &free(1.0),
            QuantumChannel::new(1),
            BoundaryConditionFamily::HuangThomann,
            Units::default(),
            1,
        )
        .unwrap_err();
        assert!(matches!(err, Error::FamilyRequiresSWave { l: 1 }));
    }

    #[test]
    fn interacting_interiors_are_redirected() {
        let coulomb = PotentialSpec::coulomb_like(1.0, 1.0).unwrap();
        let err = well_spectrum(
            &coulomb,
            QuantumChannel::new(0),
            BoundaryConditionFamily::Conventional,
            Units::default(),
            1,
        )
        .unwrap_err();
        assert!(err.to_string().contains("shooting"));
    }

    #[test]
    fn zero_requested_levels_is_an_empty_spectrum() {
        let s = well_spectrum(
            &free(1.0),
            QuantumChannel::new(4),
            BoundaryConditionFamily::Conventional,
            Units::default(),
            0,
        )
        .unwrap();
        assert!(s.entries().is_empty());
    }
}
