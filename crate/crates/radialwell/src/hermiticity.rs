//! Numerical adjudication of boundary conditions.
//!
//! Two integration-by-parts identities decide which mode families leave
//! the radial operators symmetric. For the Hamiltonian the leftover is the
//! Wronskian bracket [chi1 chi2' - chi1' chi2] evaluated at the wall minus
//! the origin; for the radial momentum -i hbar (d/dr + 1/r) it is
//! -i hbar [chi1 chi2] at the same two ends. Dirichlet modes kill both
//! brackets; cosine modes kill the first but not the second, which is the
//! whole dispute in executable form. Endpoint values are one-sided limits.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{ModeForm, RadialMode, Units};
use crate::quadrature::{integrate, QuadratureRule};

/// Thresholds separating discretization noise from genuine defects, which
/// are O(1) when present.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AuditTolerances {
    /// Bound on the quadrature residual of the symmetry identity.
    pub identity: f64,
    /// Bound on defect magnitudes before a verdict flips to failure.
    pub verdict: f64,
}

impl Default for AuditTolerances {
    fn default() -> Self {
        AuditTolerances {
            identity: 1e-8,
            verdict: 1e-6,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditVerdict {
    Pass,
    /// The Hamiltonian bracket survived at the endpoints.
    FailWronskian,
    /// |chi(0)| and |chi(a)| differ, so the radial momentum is not
    /// symmetric on this mode.
    FailEndpointBalance,
}

impl std::fmt::Display for AuditVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AuditVerdict::Pass => "pass",
            AuditVerdict::FailWronskian => "fail_wronskian",
            AuditVerdict::FailEndpointBalance => "fail_endpoint_balance",
        })
    }
}

/// Everything the boundary-condition audit measures for one mode.
#[derive(Debug, Clone, Copy)]
pub struct HermiticityReport {
    pub wronskian_defect: Complex64,
    pub pr_defect: Complex64,
    /// (|chi(0)|, |chi(a)|) of the normalized mode.
    pub endpoint_magnitudes: (f64, f64),
    /// Residual of the momentum symmetry identity, integrals included.
    pub quadrature_residual: f64,
    pub verdict: AuditVerdict,
    pub tolerances: AuditTolerances,
}

/// Endpoint bracket of the Hamiltonian identity,
/// [chi1 chi2' - chi1' chi2] at the wall minus the same bracket at the
/// origin. Vanishes for every same-l pair exactly when the boundary
/// conditions make H symmetric.
pub fn wronskian_defect(m1: &RadialMode, m2: &RadialMode) -> Result<Complex64> {
    check_pair(m1, m2)?;
    let ((o1, wall1), (o2, wall2)) = (endpoint_states(m1)?, endpoint_states(m2)?);
    let at_wall = wall1.0 * wall2.1 - wall1.1 * wall2.0;
    let at_origin = o1.0 * o2.1 - o1.1 * o2.0;
    Ok(Complex64::new(at_wall - at_origin, 0.0))
}

/// Endpoint bracket of the radial-momentum identity,
/// -i hbar [chi1(a) chi2(a) - chi1(0) chi2(0)]. Meaningful for normalized
/// modes, where any nonzero value is an O(1) obstruction.
pub fn pr_defect(m1: &RadialMode, m2: &RadialMode, units: Units) -> Result<Complex64> {
    check_pair(m1, m2)?;
    let ((o1, wall1), (o2, wall2)) = (endpoint_states(m1)?, endpoint_states(m2)?);
    Ok(Complex64::new(
        0.0,
        -units.hbar * (wall1.0 * wall2.0 - o1.0 * o2.0),
    ))
}

/// Quadrature check that the two radial-momentum matrix elements differ by
/// exactly the endpoint bracket: |<1|p_r|2> - <2|p_r|1>* - defect|.
///
/// Both matrix elements are integrated literally in terms of R = chi / r
/// with the measure r^2 dr, so the 1/r pieces of the operator and of the
/// modes must cancel numerically rather than symbolically. The lower limit
/// stays a hair above the origin; the omitted sliver is O(eps) against
/// bounded integrands.
pub fn pr_identity_residual(
    m1: &RadialMode,
    m2: &RadialMode,
    panels: u32,
    units: Units,
) -> Result<f64> {
    check_pair(m1, m2)?;
    if panels == 0 {
        return Err(Error::invalid("at least one panel is required".to_string()));
    }
    let a = m1.radius();
    let lo = (1e-10 * a).max(lower_limit(m1)).max(lower_limit(m2));
    let rule = QuadratureRule::GaussLegendreComposite {
        points: 32,
        panels: panels as usize,
    };
    let forward = integrate(|r| momentum_integrand(m1, m2, r), &rule, lo, a)?;
    let reverse = integrate(|r| momentum_integrand(m2, m1, r), &rule, lo, a)?;
    let ((o1, wall1), (o2, wall2)) = (endpoint_states(m1)?, endpoint_states(m2)?);
    let bracket = wall1.0 * wall2.0 - o1.0 * o2.0;
    Ok(units.hbar * (forward.value + reverse.value - bracket).abs())
}

/// Full boundary-condition audit of a single normalizable mode.
///
/// The mode is normalized first, then both endpoint brackets and the
/// quadrature identity are evaluated on the diagonal pair. The verdict
/// passes only if the Hamiltonian bracket vanishes and the endpoint
/// magnitudes balance.
pub fn audit(
    mode: &RadialMode,
    units: Units,
    tolerances: AuditTolerances,
) -> Result<HermiticityReport> {
    if !mode.is_square_integrable() {
        return Err(Error::NonNormalizable { l: mode.l() });
    }
    let normalized = mode.normalize()?;
    let wronskian = wronskian_defect(&normalized, &normalized)?;
    let momentum = pr_defect(&normalized, &normalized, units)?;
    let (origin, wall) = endpoint_states(&normalized)?;
    let magnitudes = (origin.0.abs(), wall.0.abs());
    let residual = pr_identity_residual(&normalized, &normalized, 16, units)?;
    let verdict = if wronskian.norm() > tolerances.verdict {
        AuditVerdict::FailWronskian
    } else if (magnitudes.0 - magnitudes.1).abs() > tolerances.verdict {
        AuditVerdict::FailEndpointBalance
    } else {
        AuditVerdict::Pass
    };
    Ok(HermiticityReport {
        wronskian_defect: wronskian,
        pr_defect: momentum,
        endpoint_magnitudes: magnitudes,
        quadrature_residual: residual,
        verdict,
        tolerances,
    })
}

fn check_pair(m1: &RadialMode, m2: &RadialMode) -> Result<()> {
    if m1.l() != m2.l() {
        return Err(Error::ChannelMismatch {
            l1: m1.l(),
            l2: m2.l(),
        });
    }
    if m1.radius() != m2.radius() {
        return Err(Error::invalid(format!(
            "modes live on different balls: radii {} and {}",
            m1.radius(),
            m2.radius()
        )));
    }
    Ok(())
}

/// One-sided (chi, chi') limits at the origin and the wall.
///
/// Analytic forms evaluate exactly. A sampled grid starts strictly inside,
/// so its origin limit is the linear extrapolation from the first sample,
/// an O(r_1) estimate with r_1 at most 1e-6 of the wall.
fn endpoint_states(mode: &RadialMode) -> Result<((f64, f64), (f64, f64))> {
    let wall = mode.evaluate_chi(mode.radius())?;
    let origin = match mode.form() {
        ModeForm::Analytic { .. } => mode.evaluate_chi(0.0)?,
        ModeForm::Sampled(s) => {
            let (r1, v1, d1) = (s.grid()[0], s.values()[0], s.derivatives()[0]);
            (v1 - r1 * d1, d1)
        }
    };
    Ok((origin, wall))
}

fn lower_limit(mode: &RadialMode) -> f64 {
    match mode.form() {
        ModeForm::Analytic { .. } => 0.0,
        ModeForm::Sampled(s) => s.grid()[0],
    }
}

/// Integrand of <m1| p_r |m2> in R-form, divided by -i hbar:
/// R1 (R2' + R2 / r) r^2.
fn momentum_integrand(m1: &RadialMode, m2: &RadialMode, r: f64) -> f64 {
    let (c1, _) = m1.evaluate_chi(r).expect("node inside both domains");
    let (c2, d2) = m2.evaluate_chi(r).expect("node inside both domains");
    let big_r1 = c1 / r;
    let big_r2 = c2 / r;
    let d_big_r2 = d2 / r - c2 / (r * r);
    big_r1 * (d_big_r2 + big_r2 / r) * r * r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::bessel_zeros;
    use crate::model::QuantumChannel;
    use approx::assert_relative_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    fn sine(k: f64) -> RadialMode {
        RadialMode::analytic(k, QuantumChannel::new(0), 1.0, 1.0, 0.0).unwrap()
    }

    fn cosine(k: f64) -> RadialMode {
        RadialMode::analytic(k, QuantumChannel::new(0), 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn dirichlet_pairs_leave_no_defects() {
        let (m1, m2) = (
            sine(PI).normalize().unwrap(),
            sine(2.0 * PI).normalize().unwrap(),
        );
        assert!(wronskian_defect(&m1, &m2).unwrap().norm() < 1e-12);
        assert!(pr_defect(&m1, &m2, Units::default()).unwrap().norm() < 1e-12);
    }

    #[test]
    fn cosine_pairs_still_satisfy_the_hamiltonian_bracket() {
        let (m1, m2) = (cosine(0.5 * PI), cosine(1.5 * PI));
        assert!(wronskian_defect(&m1, &m2).unwrap().norm() < 1e-12);
    }

    #[test]
    fn mixed_pair_matches_the_closed_form_bracket() {
        // chi1 = sin(pi r), chi2 = sin(1.3 pi r) on a unit ball: only the
        // wall term with chi1' = pi cos(pi) = -pi survives, leaving
        // pi sin(1.3 pi) = -pi (1 + sqrt 5)/4.
        let defect = wronskian_defect(&sine(PI), &sine(1.3 * PI)).unwrap();
        let expected = -PI * (1.0 + 5.0_f64.sqrt()) / 4.0;
        assert_relative_eq!(defect.re, expected, max_relative = 1e-12);
        assert!((expected - -2.5416018461576297).abs() < 1e-13);
        assert!(defect.im == 0.0);
    }

    #[test]
    fn cosine_ground_state_momentum_defect_is_two_i_hbar() {
        let mode = cosine(1.5 * PI).normalize().unwrap();
        let defect = pr_defect(&mode, &mode, Units::default()).unwrap();
        assert!(defect.re == 0.0);
        assert_relative_eq!(defect.im, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn mixed_family_momentum_defect_vanishes() {
        // One factor of each product vanishes at each endpoint.
        let dirichlet = sine(PI).normalize().unwrap();
        let cos = cosine(1.5 * PI).normalize().unwrap();
        assert!(
            pr_defect(&dirichlet, &cos, Units::default())
                .unwrap()
                .norm()
                < 1e-12
        );
    }

    #[test]
    fn momentum_defect_is_conjugate_antisymmetric() {
        let m1 = sine(1.1 * PI).normalize().unwrap();
        let m2 = cosine(2.2).normalize().unwrap();
        let fwd = pr_defect(&m1, &m2, Units::default()).unwrap();
        let rev = pr_defect(&m2, &m1, Units::default()).unwrap();
        assert!((fwd + rev.conj()).norm() < 1e-12);
    }

    #[test]
    fn identity_residual_is_small_for_eigenpairs() {
        let pairs = [
            (sine(PI), sine(2.0 * PI)),
            (cosine(1.5 * PI), cosine(1.5 * PI)),
        ];
        for (m1, m2) in pairs {
            let (m1, m2) = (m1.normalize().unwrap(), m2.normalize().unwrap());
            let residual = pr_identity_residual(&m1, &m2, 16, Units::default()).unwrap();
            assert!(residual < 1e-10, "residual {residual}");
        }
        let zs = bessel_zeros(1, 2).unwrap();
        let p1 = RadialMode::analytic(zs[0], QuantumChannel::new(1), 1.0, 1.0, 0.0)
            .unwrap()
            .normalize()
            .unwrap();
        let p2 = RadialMode::analytic(zs[1], QuantumChannel::new(1), 1.0, 1.0, 0.0)
            .unwrap()
            .normalize()
            .unwrap();
        let residual = pr_identity_residual(&p1, &p2, 16, Units::default()).unwrap();
        assert!(residual < 1e-10, "residual {residual}");
    }

    #[test]
    fn identity_holds_for_arbitrary_same_channel_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x1de0);
        for _ in 0..10 {
            let l = rng.gen_range(0..4u32);
            let mut make = |_: ()| {
                let k = rng.gen_range(0.5..15.0);
                let regular = rng.gen_range(-2.0..2.0f64);
                let irregular: f64 = if l == 0 {
                    rng.gen_range(-2.0..2.0)
                } else {
                    0.0
                };
                let (regular, irregular) = if regular.abs() + irregular.abs() < 0.1 {
                    (1.0, irregular)
                } else {
                    (regular, irregular)
                };
                RadialMode::analytic(k, QuantumChannel::new(l), 1.0, regular, irregular)
                    .unwrap()
                    .normalize()
                    .unwrap()
            };
            let (m1, m2) = (make(()), make(()));
            let residual = pr_identity_residual(&m1, &m2, 16, Units::default()).unwrap();
            assert!(residual < 1e-8, "l={l} residual {residual}");
        }
    }

    #[test]
    fn audit_passes_dirichlet_and_fails_cosine_states() {
        let report = audit(&sine(PI), Units::default(), AuditTolerances::default()).unwrap();
        assert_eq!(report.verdict, AuditVerdict::Pass);
        assert!(report.endpoint_magnitudes.0.abs() < 1e-12);
        assert!(report.endpoint_magnitudes.1.abs() < 1e-12);
        assert!(report.quadrature_residual < 1e-10);

        let report = audit(
            &cosine(1.5 * PI),
            Units::default(),
            AuditTolerances::default(),
        )
        .unwrap();
        assert_eq!(report.verdict, AuditVerdict::FailEndpointBalance);
        assert_relative_eq!(report.endpoint_magnitudes.0, 2.0_f64.sqrt(), epsilon = 1e-9);
        assert!(report.endpoint_magnitudes.1.abs() < 1e-12);
        assert_relative_eq!(report.pr_defect.im, 2.0, max_relative = 1e-12);
    }

    #[test]
    fn audit_rejects_modes_that_cannot_be_normalized() {
        let neumann = RadialMode::analytic(1.0, QuantumChannel::new(2), 1.0, 0.0, 1.0).unwrap();
        assert!(matches!(
            audit(&neumann, Units::default(), AuditTolerances::default()),
            Err(Error::NonNormalizable { l: 2 })
        ));
    }

    #[test]
    fn sampled_modes_audit_like_their_analytic_parents() {
        let analytic = sine(2.0 * PI);
        let mut grid = Vec::new();
        let mut r = 1e-7;
        while r < 0.01 {
            grid.push(r);
            r *= 1.6;
        }
        let n = 400;
        for i in 0..=n {
            grid.push(0.01 + (1.0 - 0.01) * i as f64 / n as f64);
        }
        let mut values = Vec::new();
        let mut derivatives = Vec::new();
        for &r in &grid {
            let (v, d) = analytic.evaluate_chi(r).unwrap();
            values.push(v);
            derivatives.push(d);
        }
        let sampled = RadialMode::sampled(
            2.0 * PI,
            QuantumChannel::new(0),
            1.0,
            grid,
            values,
            derivatives,
        )
        .unwrap();
        let report = audit(&sampled, Units::default(), AuditTolerances::default()).unwrap();
        assert_eq!(report.verdict, AuditVerdict::Pass);
        assert!(report.quadrature_residual < 1e-8);
    }

    #[test]
    fn cross_channel_comparisons_are_rejected() {
        let s = sine(PI);
        let p = RadialMode::analytic(PI, QuantumChannel::new(1), 1.0, 1.0, 0.0).unwrap();
        assert!(matches!(
            wronskian_defect(&s, &p),
            Err(Error::ChannelMismatch { l1: 0, l2: 1 })
        ));
        let other_ball = RadialMode::analytic(PI, QuantumChannel::new(0), 2.0, 1.0, 0.0).unwrap();
        assert!(wronskian_defect(&s, &other_ball).is_err());
    }
}
