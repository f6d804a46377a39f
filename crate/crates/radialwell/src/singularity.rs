//! Detection of the point source hidden at the origin by 1/r radial
//! behavior, and the small-r exponent analysis that backs it for general
//! interiors.
//!
//! For an s-wave mode psi = (chi / r) Y00, the combination
//! del^2 psi + k^2 psi vanishes pointwise away from r = 0, yet its
//! integral over a shrinking ball tends to -B sqrt(4 pi) when chi keeps a
//! cosine part chi(0) = B. The weak-form ball integral therefore measures
//! the delta coefficient directly, without differencing any singular
//! quantity: the divergence theorem turns it into a surface flux.

use crate::error::{Error, Result};
use crate::model::{PotentialSpec, QuantumChannel, RadialMode, Units};
use crate::quadrature::{integrate, QuadratureRule};

/// sqrt(4 pi), the full solid angle carried by Y00 = 1 / sqrt(4 pi).
pub const ROOT_4PI: f64 = 3.544_907_701_811_031_8;

/// Modes whose measured source weight exceeds this are rejected; genuine
/// weights are O(1) per unit cosine amplitude while numerical noise stays
/// below 1e-8.
pub const DELTA_SOURCE_TOLERANCE: f64 = 1e-4;

/// Shrinking-ball measurement of the origin source strength.
#[derive(Debug, Clone, PartialEq)]
pub struct DeltaWeightEstimate {
    /// Ball radii, strictly decreasing.
    pub epsilons: Vec<f64>,
    /// Surface-flux value at each ball radius.
    pub estimates: Vec<f64>,
    /// Two-point Richardson limit from the smallest pair of radii.
    pub extrapolated_weight: f64,
    /// Slope of log |estimate - limit| against log epsilon, when enough
    /// residuals clear the rounding floor; quadratic for cosine content.
    pub convergence_order: Option<f64>,
}

/// The default ball ladder, {1e-2, 1e-3, 1e-4, 1e-5} of the wall radius.
pub fn default_epsilon_ladder(radius: f64) -> Vec<f64> {
    [1e-2, 1e-3, 1e-4, 1e-5]
        .iter()
        .map(|s| s * radius)
        .collect()
}

/// Measure the delta-source weight of an s-wave mode.
///
/// Each estimate is the outward flux of psi through the sphere of radius
/// epsilon, sqrt(4 pi) (eps chi'(eps) - chi(eps)); its limit is the full
/// ball integral of del^2 psi + k^2 psi because the k^2 volume term it
/// omits vanishes as eps^2. Keeping the volume term would make every
/// estimate equal to the limit for trigonometric modes (see
/// [`ball_weight`]), which is a fine exactness check but would leave no
/// epsilon dependence to extrapolate or fit an order to.
pub fn delta_weight(mode: &RadialMode, epsilons: &[f64]) -> Result<DeltaWeightEstimate> {
    if mode.l() != 0 {
        return Err(Error::invalid(format!(
            "the delta probe applies to s-waves only: for l = {} the centrifugal term dominates the origin",
            mode.l()
        )));
    }
    if epsilons.len() < 2 {
        return Err(Error::invalid(
            "at least two ball radii are needed to extrapolate".to_string(),
        ));
    }
    for pair in epsilons.windows(2) {
        if !(pair[0] > pair[1]) {
            return Err(Error::invalid(
                "ball radii must be strictly decreasing".to_string(),
            ));
        }
    }
    if !(epsilons[0] <= mode.radius() && epsilons[epsilons.len() - 1] > 0.0) {
        return Err(Error::invalid(format!(
            "ball radii must lie inside (0, {}]",
            mode.radius()
        )));
    }
    let mut estimates = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let (chi, dchi) = mode.evaluate_chi(eps)?;
        estimates.push(ROOT_4PI * (eps * dchi - chi));
    }
    let small = estimates[estimates.len() - 1];
    let big = estimates[estimates.len() - 2];
    let rho = epsilons[epsilons.len() - 2] / epsilons[epsilons.len() - 1];
    let extrapolated_weight = small + (small - big) / (rho * rho - 1.0);
    let convergence_order = fit_order(epsilons, &estimates, extrapolated_weight);
    Ok(DeltaWeightEstimate {
        epsilons: epsilons.to_vec(),
        estimates,
        extrapolated_weight,
        convergence_order,
    })
}

/// Least-squares slope of ln |estimate - limit| versus ln epsilon over the
/// residuals that clear the rounding floor.
fn fit_order(epsilons: &[f64], estimates: &[f64], limit: f64) -> Option<f64> {
    let floor = 1e-13 * (1.0 + limit.abs());
    let points: Vec<(f64, f64)> = epsilons
        .iter()
        .zip(estimates)
        .filter(|(_, e)| (**e - limit).abs() > floor)
        .map(|(eps, e)| (eps.ln(), (*e - limit).abs().ln()))
        .collect();
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as f64;
    let (sx, sy) = points
        .iter()
        .fold((0.0, 0.0), |(sx, sy), (x, y)| (sx + x, sy + y));
    let (mx, my) = (sx / n, sy / n);
    let (num, den) = points.iter().fold((0.0, 0.0), |(num, den), (x, y)| {
        (num + (x - mx) * (y - my), den + (x - mx) * (x - mx))
    });
    (den > 0.0).then(|| num / den)
}

/// Full divergence-theorem ball integral at one radius: surface flux plus
/// the k^2 volume term by 64-point Gauss-Legendre.
///
/// For trigonometric s-wave modes this is independent of epsilon and equal
/// to the delta weight exactly, so it cross-checks [`delta_weight`] but
/// carries no convergence information.
pub fn ball_weight(mode: &RadialMode, epsilon: f64) -> Result<f64> {
    if mode.l() != 0 {
        return Err(Error::invalid(
            "the delta probe applies to s-waves only".to_string(),
        ));
    }
    if !(epsilon > 0.0 && epsilon <= mode.radius()) {
        return Err(Error::invalid(format!(
            "ball radius must lie inside (0, {}], got {epsilon}",
            mode.radius()
        )));
    }
    let (chi, dchi) = mode.evaluate_chi(epsilon)?;
    let flux = ROOT_4PI * (epsilon * dchi - chi);
    let rule = QuadratureRule::GaussLegendreComposite {
        points: 64,
        panels: 1,
    };
    let volume = integrate(
        |r| mode.evaluate_chi(r).expect("node inside the ball").0 * r,
        &rule,
        0.0,
        epsilon,
    )?;
    Ok(flux + mode.k() * mode.k() * ROOT_4PI * volume.value)
}

/// Small-r structure of the radial equation at one channel.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrobeniusResult {
    pub l: u32,
    /// Leading powers (l + 1, -l) of the two chi branches. The first is
    /// the regular branch chi ~ r^{l+1}; the second makes psi = chi/r
    /// behave as r^{-l-1}, which at l = 0 is the 1/r piece behind the
    /// delta source and at l > 0 is not square-integrable at all.
    pub exponents: (i64, i64),
    /// Coefficient c1 of the regular branch chi = r^{l+1}(1 + c1 r + ...),
    /// fed by the 1/r part of the interior; zero for bounded interiors.
    pub first_correction: f64,
}

/// Indicial exponents of chi at the origin for an admissible interior.
///
/// Any interior with r V bounded perturbs the series only from the c1
/// coefficient onward; the exponents are those of the free equation
/// because the centrifugal term outweighs a 1/r potential at both roots.
/// Interiors violating that bound are not constructible as
/// [`PotentialSpec`] values in the first place.
pub fn frobenius_indicial(
    potential: &PotentialSpec,
    channel: QuantumChannel,
    units: Units,
) -> FrobeniusResult {
    let l = channel.l;
    let u_minus1 = units.potential_scale() * potential.r_v_limit();
    FrobeniusResult {
        l,
        exponents: (l as i64 + 1, -(l as i64)),
        first_correction: u_minus1 / (2.0 * (l as f64 + 1.0)),
    }
}

/// Why a mode is excluded from the physical domain.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RejectionReason {
    /// An s-wave mode sources a delta of this measured weight at the
    /// origin, so it does not solve the stated equation on the full ball.
    DeltaSource { weight: f64 },
    /// The mode carries r^{-l} content at l > 0 and has no finite norm.
    NonNormalizable { l: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ModeAdmissibility {
    Accepted,
    Rejected(RejectionReason),
}

/// Apply the full origin exclusion logic to one mode.
///
/// l > 0 modes with irregular content are rejected as non-normalizable;
/// s-wave modes are probed for a delta source on the default ball ladder
/// and rejected when the measured weight exceeds
/// [`DELTA_SOURCE_TOLERANCE`]. Every accepted mode therefore satisfies
/// chi(0) = 0.
pub fn regularity_filter(mode: &RadialMode) -> Result<ModeAdmissibility> {
    if !mode.is_square_integrable() {
        return Ok(ModeAdmissibility::Rejected(
            RejectionReason::NonNormalizable { l: mode.l() },
        ));
    }
    if mode.l() == 0 {
        let ladder = default_epsilon_ladder(mode.radius());
        let estimate = delta_weight(mode, &ladder)?;
        if estimate.extrapolated_weight.abs() > DELTA_SOURCE_TOLERANCE {
            return Ok(ModeAdmissibility::Rejected(RejectionReason::DeltaSource {
                weight: estimate.extrapolated_weight,
            }));
        }
        return Ok(ModeAdmissibility::Accepted);
    }
    if let crate::model::ModeForm::Sampled(s) = mode.form() {
        // r^{-l} content in a sampled channel shows up as a first sample
        // far above the regular r^{l+1} profile.
        let max_abs = s.values().iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let irregular_scale = s.values()[0].abs() * s.grid()[0].powi(mode.l() as i32);
        if irregular_scale > 1e-4 * max_abs {
            return Ok(ModeAdmissibility::Rejected(
                RejectionReason::NonNormalizable { l: mode.l() },
            ));
        }
    }
    Ok(ModeAdmissibility::Accepted)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use std::f64::consts::PI;

    fn s_mode(k: f64, regular: f64, irregular: f64) -> RadialMode {
        RadialMode::analytic(k, QuantumChannel::new(0), 1.0, regular, irregular).unwrap()
    }

    #[test]
    fn sine_modes_carry_no_source() {
        let est = delta_weight(&s_mode(PI, 1.0, 0.0), &default_epsilon_ladder(1.0)).unwrap();
        assert!(
            est.extrapolated_weight.abs() < 1e-8,
            "weight {}",
            est.extrapolated_weight
        );
    }

    #[test]
    fn unit_cosine_weight_is_minus_root_4pi() {
        let est = delta_weight(&s_mode(1.0, 0.0, 1.0), &default_epsilon_ladder(1.0)).unwrap();
        assert_relative_eq!(est.extrapolated_weight, -ROOT_4PI, max_relative = 1e-9);
        // At finite ball radius the flux runs ahead of the limit by
        // (k eps)^2 / 2, the signature of the quadratic approach.
        let eps = est.epsilons[0];
        assert_relative_eq!(
            est.estimates[0],
            -ROOT_4PI * (1.0 + 0.5 * eps * eps),
            max_relative = 1e-7
        );
        let order = est.convergence_order.unwrap();
        assert!((order - 2.0).abs() < 0.1, "order {order}");
    }

    #[test]
    fn weight_is_linear_in_the_cosine_amplitude() {
        let ladder = default_epsilon_ladder(1.0);
        let full = delta_weight(&s_mode(2.0, 0.7, 1.0), &ladder).unwrap();
        let half = delta_weight(&s_mode(2.0, 0.35, 0.5), &ladder).unwrap();
        assert_relative_eq!(
            half.extrapolated_weight,
            0.5 * full.extrapolated_weight,
            max_relative = 1e-9
        );
        let minus_two = delta_weight(&s_mode(2.0, 0.0, -2.0), &ladder).unwrap();
        assert_relative_eq!(
            minus_two.extrapolated_weight,
            2.0 * ROOT_4PI,
            max_relative = 1e-9
        );
        assert!((minus_two.convergence_order.unwrap() - 2.0).abs() < 0.1);
    }

    #[test]
    fn ball_form_is_exact_at_any_radius() {
        let cos = s_mode(1.0, 0.0, 1.0);
        for eps in [0.5, 0.05, 1e-3] {
            assert_relative_eq!(
                ball_weight(&cos, eps).unwrap(),
                -ROOT_4PI,
                max_relative = 1e-10
            );
        }
        let sine = s_mode(PI, 1.0, 0.0);
        for eps in [0.5, 1e-2] {
            assert!(ball_weight(&sine, eps).unwrap().abs() < 1e-12);
        }
    }

    #[test]
    fn probe_rejects_higher_channels_and_bad_ladders() {
        let p = RadialMode::analytic(1.0, QuantumChannel::new(1), 1.0, 1.0, 0.0).unwrap();
        assert!(delta_weight(&p, &default_epsilon_ladder(1.0)).is_err());
        let s = s_mode(1.0, 1.0, 0.0);
        assert!(delta_weight(&s, &[1e-2, 1e-2]).is_err());
        assert!(delta_weight(&s, &[1e-3]).is_err());
        assert!(delta_weight(&s, &[2.0, 1e-3]).is_err());
    }

    #[test]
    fn indicial_exponents_are_potential_independent() {
        let units = Units::default();
        let free = PotentialSpec::zero(1.0).unwrap();
        let coulomb = PotentialSpec::coulomb_like(1.0, 1.0).unwrap();
        assert_eq!(
            frobenius_indicial(&free, QuantumChannel::new(0), units).exponents,
            (1, 0)
        );
        assert_eq!(
            frobenius_indicial(&coulomb, QuantumChannel::new(1), units).exponents,
            (2, -1)
        );
        assert_eq!(
            frobenius_indicial(&free, QuantumChannel::new(2), units).exponents,
            (3, -2)
        );
        for l in 0..=10 {
            let r = frobenius_indicial(&coulomb, QuantumChannel::new(l), units);
            let (s_plus, s_minus) = r.exponents;
            assert_eq!(s_plus + s_minus, 1);
            assert_eq!(s_plus * s_minus, -((l * (l + 1)) as i64));
        }
    }

    #[test]
    fn first_series_correction_tracks_the_interior() {
        let units = Units::default();
        let free = PotentialSpec::zero(1.0).unwrap();
        assert_eq!(
            frobenius_indicial(&free, QuantumChannel::new(3), units).first_correction,
            0.0
        );
        // For V = -alpha / r the regular branch is
        // chi = r^{l+1}(1 - mu alpha r / (hbar^2 (l+1)) + ...): the
        // correction is -1/(2(l+1)) at the default scales.
        let coulomb = PotentialSpec::coulomb_like(1.0, 1.0).unwrap();
        assert_relative_eq!(
            frobenius_indicial(&coulomb, QuantumChannel::new(0), units).first_correction,
            -0.5,
            max_relative = 1e-14
        );
        assert_relative_eq!(
            frobenius_indicial(&coulomb, QuantumChannel::new(1), units).first_correction,
            -0.25,
            max_relative = 1e-14
        );
    }

    #[test]
    fn filter_implements_the_full_exclusion_logic() {
        assert_eq!(
            regularity_filter(&s_mode(PI, 1.0, 0.0)).unwrap(),
            ModeAdmissibility::Accepted
        );
        match regularity_filter(&s_mode(1.0, 0.0, 1.0)).unwrap() {
            ModeAdmissibility::Rejected(RejectionReason::DeltaSource { weight }) => {
                assert_relative_eq!(weight, -ROOT_4PI, max_relative = 1e-4);
            }
            other => panic!("unexpected admissibility {other:?}"),
        }
        let neumann = RadialMode::analytic(2.0, QuantumChannel::new(3), 1.0, 0.0, 1.0).unwrap();
        assert_eq!(
            regularity_filter(&neumann).unwrap(),
            ModeAdmissibility::Rejected(RejectionReason::NonNormalizable { l: 3 })
        );
    }

    #[test]
    fn accepted_modes_vanish_at_the_origin() {
        for l in 0..=2u32 {
            let mode = RadialMode::analytic(2.0, QuantumChannel::new(l), 1.0, 1.3, 0.0).unwrap();
            assert_eq!(
                regularity_filter(&mode).unwrap(),
                ModeAdmissibility::Accepted
            );
            assert!(mode.evaluate_chi(0.0).unwrap().0.abs() < 1e-9);
        }
    }

    #[test]
    fn sampled_channels_pass_the_irregular_content_probe() {
        let analytic = RadialMode::analytic(5.0, QuantumChannel::new(1), 1.0, 1.0, 0.0).unwrap();
        let mut grid = vec![5e-7];
        let n = 300;
        for i in 1..=n {
            grid.push(i as f64 / n as f64);
        }
        let (mut values, mut derivatives) = (Vec::new(), Vec::new());
        for &r in &grid {
            let (v, d) = analytic.evaluate_chi(r).unwrap();
            values.push(v);
            derivatives.push(d);
        }
        let sampled =
            RadialMode::sampled(5.0, QuantumChannel::new(1), 1.0, grid, values, derivatives)
                .unwrap();
        assert_eq!(
            regularity_filter(&sampled).unwrap(),
            ModeAdmissibility::Accepted
        );
    }
}
