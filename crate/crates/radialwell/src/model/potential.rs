//! The confining ball and the potential inside it.
//!
//! Interior potentials are restricted to the class with `r V(r)` bounded on
//! `(0, a]`. Within that class the centrifugal term dominates near the origin
//! and the small-r exponents of the radial solutions are those of the free
//! equation. Tabulated data is stored as the product `w(r) = r V(r)` and
//! interpolated linearly in `ln r`, which keeps `w` bounded between samples;
//! below the first sample `w` is held constant.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A fitted local power of `|V|` steeper than this rejects a table as
/// diverging faster than 1/r; the slack absorbs sampling noise on an exact
/// Coulomb tail.
const MAX_DIVERGENCE_POWER: f64 = 1.05;

/// What the potential does strictly inside the ball.
#[derive(Debug, Clone, PartialEq)]
pub enum Interior {
    Zero,
    /// `V(r) = -alpha / r`. Positive `alpha` attracts.
    CoulombLike {
        alpha: f64,
    },
    /// `(r, V)` pairs on `(0, a]`, strictly increasing in `r`.
    Tabulated {
        samples: Vec<(f64, f64)>,
    },
}

/// The ball radius plus the interior potential.
///
/// Serializes to and from the JSON file schema
/// `{"radius": .., "kind": "zero" | "coulomb" | "tabulated", "alpha"?: ..,
///   "samples"?: [[r, V], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "PotentialFile", into = "PotentialFile")]
pub struct PotentialSpec {
    radius: f64,
    interior: Interior,
}

impl PotentialSpec {
    pub fn zero(radius: f64) -> Result<Self> {
        Self::build(radius, Interior::Zero)
    }

    pub fn coulomb_like(radius: f64, alpha: f64) -> Result<Self> {
        if !alpha.is_finite() {
            return Err(Error::invalid(format!(
                "coulomb strength must be finite, got {alpha}"
            )));
        }
        Self::build(radius, Interior::CoulombLike { alpha })
    }

    pub fn tabulated(radius: f64, samples: Vec<(f64, f64)>) -> Result<Self> {
        Self::build(radius, Interior::Tabulated { samples })
    }

    fn build(radius: f64, interior: Interior) -> Result<Self> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid(format!(
                "ball radius must be positive and finite, got {radius}"
            )));
        }
        if let Interior::Tabulated { samples } = &interior {
            validate_table(radius, samples)?;
        }
        Ok(PotentialSpec { radius, interior })
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn interior(&self) -> &Interior {
        &self.interior
    }

    pub fn is_free(&self) -> bool {
        matches!(self.interior, Interior::Zero)
    }

    /// `V(r)` for `0 < r <= a`.
    pub fn evaluate(&self, r: f64) -> Result<f64> {
        Ok(self.r_times_v(r)? / r)
    }

    /// The bounded product `r V(r)` for `0 < r <= a`.
    pub fn r_times_v(&self, r: f64) -> Result<f64> {
        if !(r > 0.0 && r <= self.radius) {
            return Err(Error::OutsideDomain {
                r,
                radius: self.radius,
            });
        }
        Ok(match &self.interior {
            Interior::Zero => 0.0,
            Interior::CoulombLike { alpha } => -alpha,
            Interior::Tabulated { samples } => interpolate_w(samples, r),
        })
    }

    /// `lim_{r -> 0} r V(r)`, the coefficient that feeds the series start of
    /// the outward integration. Zero whenever V is bounded at the origin.
    pub fn r_v_limit(&self) -> f64 {
        match &self.interior {
            Interior::Zero => 0.0,
            Interior::CoulombLike { alpha } => -alpha,
            Interior::Tabulated { samples } => samples[0].0 * samples[0].1,
        }
    }
}

fn validate_table(radius: f64, samples: &[(f64, f64)]) -> Result<()> {
    if samples.len() < 2 {
        return Err(Error::invalid(
            "a tabulated potential needs at least two samples".to_string(),
        ));
    }
    for &(r, v) in samples {
        if !(r.is_finite() && v.is_finite()) || r <= 0.0 {
            return Err(Error::invalid(format!(
                "table entries must be finite with r > 0, got ({r}, {v})"
            )));
        }
    }
    if samples.windows(2).any(|w| w[0].0 >= w[1].0) {
        return Err(Error::invalid(
            "table radii must be strictly increasing".to_string(),
        ));
    }
    let last = samples.last().unwrap().0;
    if last > radius * (1.0 + 1e-12) {
        return Err(Error::invalid(format!(
            "table extends to r = {last}, beyond the ball radius {radius}"
        )));
    }
    // Screen the innermost panel for growth steeper than 1/r. Only a
    // heuristic: a finite table cannot prove a limit, but a fitted local
    // power beyond 1 at the smallest radii means the data contradicts the
    // admissibility class it claims. Steep local variation farther out is
    // harmless and is not screened.
    let (r0, v0) = samples[0];
    let (r1, v1) = samples[1];
    if v0.abs() > v1.abs() && v1 != 0.0 {
        let power = (v0.abs().ln() - v1.abs().ln()) / (r1 / r0).ln();
        if power > MAX_DIVERGENCE_POWER {
            return Err(Error::InadmissiblePotential {
                detail: format!(
                    "samples near r = {r0} grow as r^-{power:.2}, steeper than the r^-1 bound"
                ),
            });
        }
    }
    Ok(())
}

/// `w = r V` interpolated linearly in `ln r`, held constant beyond the table.
fn interpolate_w(samples: &[(f64, f64)], r: f64) -> f64 {
    let w_of = |i: usize| samples[i].0 * samples[i].1;
    if r <= samples[0].0 {
        return w_of(0);
    }
    let n = samples.len();
    if r >= samples[n - 1].0 {
        return w_of(n - 1);
    }
    let hi = samples.partition_point(|&(ri, _)| ri < r);
    let (r0, r1) = (samples[hi - 1].0, samples[hi].0);
    let t = (r / r0).ln() / (r1 / r0).ln();
    w_of(hi - 1) * (1.0 - t) + w_of(hi) * t
}

#[derive(Serialize, Deserialize)]
struct PotentialFile {
    radius: f64,
    kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    alpha: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    samples: Option<Vec<(f64, f64)>>,
}

impl TryFrom<PotentialFile> for PotentialSpec {
    type Error = Error;

    fn try_from(file: PotentialFile) -> Result<Self> {
        match file.kind.as_str() {
            "zero" => PotentialSpec::zero(file.radius),
            "coulomb" => {
                let alpha = file.alpha.ok_or_else(|| {
                    Error::invalid("kind \"coulomb\" requires the \"alpha\" field".to_string())
                })?;
                PotentialSpec::coulomb_like(file.radius, alpha)
            }
            "tabulated" => {
                let samples = file.samples.ok_or_else(|| {
                    Error::invalid("kind \"tabulated\" requires the \"samples\" field".to_string())
                })?;
                PotentialSpec::tabulated(file.radius, samples)
            }
            other => Err(Error::invalid(format!(
                "unknown potential kind {other:?}; expected \"zero\", \"coulomb\", or \"tabulated\""
            ))),
        }
    }
}

impl From<PotentialSpec> for PotentialFile {
    fn from(spec: PotentialSpec) -> Self {
        let (kind, alpha, samples) = match spec.interior {
            Interior::Zero => ("zero", None, None),
            Interior::CoulombLike { alpha } => ("coulomb", Some(alpha), None),
            Interior::Tabulated { samples } => ("tabulated", None, Some(samples)),
        };
        PotentialFile {
            radius: spec.radius,
            kind: kind.to_string(),
            alpha,
            samples,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_interior_vanishes_everywhere() {
        let p = PotentialSpec::zero(2.0).unwrap();
        assert_eq!(p.evaluate(1.3).unwrap(), 0.0);
        assert_eq!(p.r_v_limit(), 0.0);
        assert!(p.is_free());
    }

    #[test]
    fn coulomb_interior_matches_closed_form() {
        let p = PotentialSpec::coulomb_like(1.0, 2.5).unwrap();
        for r in [1e-6, 0.2, 1.0] {
            assert_relative_eq!(p.evaluate(r).unwrap(), -2.5 / r, max_relative = 1e-15);
            assert_eq!(p.r_times_v(r).unwrap(), -2.5);
        }
        assert_eq!(p.r_v_limit(), -2.5);
    }

    #[test]
    fn domain_is_the_open_ball() {
        let p = PotentialSpec::zero(1.0).unwrap();
        assert!(matches!(p.evaluate(0.0), Err(Error::OutsideDomain { .. })));
        assert!(p.evaluate(1.0 + 1e-9).is_err());
    }

    #[test]
    fn table_on_exact_coulomb_reproduces_it_between_samples() {
        let samples: Vec<(f64, f64)> = (1..=40)
            .map(|i| {
                let r = i as f64 / 40.0;
                (r, -1.0 / r)
            })
            .collect();
        let p = PotentialSpec::tabulated(1.0, samples).unwrap();
        // w is exactly constant, so any interpolation point is exact.
        for r in [0.011, 0.2371, 0.5, 0.99] {
            assert_relative_eq!(p.evaluate(r).unwrap(), -1.0 / r, max_relative = 1e-14);
        }
        // Constant continuation below the first sample keeps r V bounded.
        assert_relative_eq!(p.r_times_v(1e-7).unwrap(), -1.0, max_relative = 1e-14);
    }

    #[test]
    fn log_linear_interpolation_of_the_product() {
        let samples = vec![(0.1, 1.0), (0.4, 2.0), (1.0, 0.5)];
        let p = PotentialSpec::tabulated(1.0, samples).unwrap();
        // Midpoint in ln r between 0.1 and 0.4: r = 0.2, w halfway between
        // 0.1*1.0 = 0.1 and 0.4*2.0 = 0.8.
        let r = 0.2;
        assert_relative_eq!(p.r_times_v(r).unwrap(), 0.45, max_relative = 1e-12);
    }

    #[test]
    fn rejects_tables_steeper_than_one_over_r() {
        let samples: Vec<(f64, f64)> = (1..=20)
            .map(|i| {
                let r = i as f64 / 20.0;
                (r, -1.0 / (r * r))
            })
            .collect();
        let err = PotentialSpec::tabulated(1.0, samples).unwrap_err();
        assert!(matches!(err, Error::InadmissiblePotential { .. }));
        assert!(err.to_string().contains("r^-1"));
    }

    #[test]
    fn rejects_malformed_tables_and_geometry() {
        assert!(PotentialSpec::zero(-1.0).is_err());
        assert!(PotentialSpec::coulomb_like(1.0, f64::INFINITY).is_err());
        assert!(PotentialSpec::tabulated(1.0, vec![(0.5, 1.0)]).is_err());
        assert!(PotentialSpec::tabulated(1.0, vec![(0.5, 1.0), (0.5, 2.0)]).is_err());
        assert!(PotentialSpec::tabulated(1.0, vec![(0.5, 1.0), (1.5, 2.0)]).is_err());
        assert!(PotentialSpec::tabulated(1.0, vec![(0.0, 1.0), (0.5, 2.0)]).is_err());
    }

    #[test]
    fn json_round_trip_preserves_the_spec() {
        let p = PotentialSpec::coulomb_like(2.0, 1.25).unwrap();
        let text = serde_json::to_string(&p).unwrap();
        assert!(text.contains("\"kind\":\"coulomb\""));
        let back: PotentialSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, p);

        let t = PotentialSpec::tabulated(1.0, vec![(0.25, -1.0), (1.0, -0.25)]).unwrap();
        let back: PotentialSpec =
            serde_json::from_str(&serde_json::to_string(&t).unwrap()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn unknown_kind_is_a_parse_error() {
        let err = serde_json::from_str::<PotentialSpec>(r#"{"radius": 1.0, "kind": "morse"}"#)
            .unwrap_err();
        assert!(err.to_string().contains("unknown potential kind"));
    }
}
