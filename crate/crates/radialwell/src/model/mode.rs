//! Candidate radial solutions `chi(r) = r R(r)` on the ball.

use crate::error::{Error, Result};
use crate::model::QuantumChannel;
use crate::quadrature::gauss_legendre_nodes;
use crate::specfun::{riccati_c, riccati_s};

/// Sampled grids must reach at least this close to the origin, in units of
/// the ball radius.
const GRID_ORIGIN_FRACTION: f64 = 1e-6;

/// One candidate radial solution at fixed wavenumber and channel.
///
/// The analytic form stores amplitudes of the two independent free solutions
/// in Riccati-Bessel convention,
///
/// ```text
/// chi(r) = regular * (kr) j_l(kr) + irregular * (-(kr) n_l(kr))
/// ```
///
/// so that at `l = 0` it is literally `A sin(kr) + B cos(kr)` with
/// `A = regular` and `B = irregular`; the code evaluates those closed forms
/// directly there, keeping endpoint identities exact. The irregular amplitude
/// carries the `1/r` content of the full wavefunction near the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialMode {
    k: f64,
    channel: QuantumChannel,
    radius: f64,
    form: ModeForm,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ModeForm {
    Analytic { regular: f64, irregular: f64 },
    Sampled(SampledMode),
}

/// Numeric samples of `chi` with derivatives, interpolated by cubic Hermite
/// polynomials so the derivative stays continuous across panels.
#[derive(Debug, Clone, PartialEq)]
pub struct SampledMode {
    grid: Vec<f64>,
    values: Vec<f64>,
    derivatives: Vec<f64>,
}

impl RadialMode {
    pub fn analytic(
        k: f64,
        channel: QuantumChannel,
        radius: f64,
        regular: f64,
        irregular: f64,
    ) -> Result<Self> {
        check_k_radius(k, radius)?;
        if !(regular.is_finite() && irregular.is_finite()) {
            return Err(Error::invalid(format!(
                "mode amplitudes must be finite, got ({regular}, {irregular})"
            )));
        }
        Ok(RadialMode {
            k,
            channel,
            radius,
            form: ModeForm::Analytic { regular, irregular },
        })
    }

    pub fn sampled(
        k: f64,
        channel: QuantumChannel,
        radius: f64,
        grid: Vec<f64>,
        values: Vec<f64>,
        derivatives: Vec<f64>,
    ) -> Result<Self> {
        check_k_radius(k, radius)?;
        let samples = SampledMode::new(grid, values, derivatives, radius)?;
        Ok(RadialMode {
            k,
            channel,
            radius,
            form: ModeForm::Sampled(samples),
        })
    }

    pub fn k(&self) -> f64 {
        self.k
    }

    pub fn channel(&self) -> QuantumChannel {
        self.channel
    }

    pub fn l(&self) -> u32 {
        self.channel.l
    }

    pub fn radius(&self) -> f64 {
        self.radius
    }

    pub fn form(&self) -> &ModeForm {
        &self.form
    }

    /// The `(regular, irregular)` amplitude pair of an analytic mode.
    pub fn amplitudes(&self) -> Option<(f64, f64)> {
        match self.form {
            ModeForm::Analytic { regular, irregular } => Some((regular, irregular)),
            ModeForm::Sampled(_) => None,
        }
    }

    /// Whether the squared mode has a finite integral over the ball. The
    /// irregular solution behaves as `r^-l`, so any irregular admixture at
    /// `l > 0` diverges too fast at the origin.
    pub fn is_square_integrable(&self) -> bool {
        match self.form {
            ModeForm::Analytic { irregular, .. } => self.channel.l == 0 || irregular == 0.0,
            ModeForm::Sampled(_) => true,
        }
    }

    /// `chi(r)` and `d chi / dr` for `0 <= r <= radius`.
    ///
    /// An irregular analytic mode with `l > 0` evaluates to signed infinity
    /// at `r = 0`; sampled modes report a grid error below their first node.
    pub fn evaluate_chi(&self, r: f64) -> Result<(f64, f64)> {
        if !(r.is_finite() && (0.0..=self.radius).contains(&r)) {
            return Err(Error::OutsideDomain {
                r,
                radius: self.radius,
            });
        }
        match &self.form {
            ModeForm::Analytic { regular, irregular } => {
                self.evaluate_analytic(*regular, *irregular, r)
            }
            ModeForm::Sampled(samples) => samples.evaluate(r),
        }
    }

    fn evaluate_analytic(&self, regular: f64, irregular: f64, r: f64) -> Result<(f64, f64)> {
        let l = self.channel.l;
        let x = self.k * r;
        if l == 0 {
            return Ok((
                regular * x.sin() + irregular * x.cos(),
                self.k * (regular * x.cos() - irregular * x.sin()),
            ));
        }
        if r == 0.0 {
            if irregular == 0.0 {
                return Ok((0.0, 0.0));
            }
            // chi ~ irregular (2l-1)!! (kr)^-l.
            let inf = irregular.signum() * f64::INFINITY;
            return Ok((inf, -inf));
        }
        let (s, ds) = riccati_s(l, x)?;
        let mut value = regular * s;
        let mut slope = self.k * regular * ds;
        if irregular != 0.0 {
            let (c, dc) = riccati_c(l, x)?;
            value += irregular * c;
            slope += self.k * irregular * dc;
        }
        Ok((value, slope))
    }

    /// `integral of chi^2 over [0, radius]`.
    pub fn norm_squared(&self) -> Result<f64> {
        if !self.is_square_integrable() {
            return Err(Error::NonNormalizable { l: self.channel.l });
        }
        match &self.form {
            ModeForm::Analytic { .. } => {
                // 32-point panels resolve at most one oscillation each.
                let panels = 16.max((self.k * self.radius) as usize + 1);
                let (nodes, weights) = gauss_legendre_nodes(32);
                let width = self.radius / panels as f64;
                let mut total = 0.0;
                for p in 0..panels {
                    let mid = (p as f64 + 0.5) * width;
                    let half = 0.5 * width;
                    let mut panel = 0.0;
                    for (t, w) in nodes.iter().zip(&weights) {
                        let r = mid + half * t;
                        let (chi, _) = self.evaluate_chi(r)?;
                        panel += w * chi * chi;
                    }
                    total += panel * half;
                }
                Ok(total)
            }
            ModeForm::Sampled(samples) => Ok(samples.integral_of_square()),
        }
    }

    /// Rescale to unit norm, with the phase fixed so the first nonzero value
    /// of `chi` (coming from the origin) is positive.
    pub fn normalize(&self) -> Result<RadialMode> {
        let norm2 = self.norm_squared()?;
        if !(norm2 > 1e-300) {
            return Err(Error::invalid(
                "cannot normalize a mode with vanishing norm".to_string(),
            ));
        }
        let scale = self.leading_sign() / norm2.sqrt();
        let form = match &self.form {
            ModeForm::Analytic { regular, irregular } => ModeForm::Analytic {
                regular: regular * scale,
                irregular: irregular * scale,
            },
            ModeForm::Sampled(samples) => ModeForm::Sampled(samples.scaled(scale)),
        };
        Ok(RadialMode {
            form,
            ..self.clone()
        })
    }

    fn leading_sign(&self) -> f64 {
        match &self.form {
            // chi(0+) = irregular for l = 0; otherwise chi rises as
            // regular * r^(l+1) (irregular content at l > 0 never gets here).
            ModeForm::Analytic { regular, irregular } => {
                let lead = if *irregular != 0.0 {
                    *irregular
                } else {
                    *regular
                };
                if lead < 0.0 {
                    -1.0
                } else {
                    1.0
                }
            }
            ModeForm::Sampled(samples) => samples.leading_sign(),
        }
    }

    /// Strict sign changes of `chi` on the open interval `(0, radius)`.
    /// Endpoint zeros are not nodes.
    pub fn count_interior_nodes(&self) -> Result<u32> {
        // Enough resolution for several samples per half-oscillation.
        let waves = (self.k * self.radius / std::f64::consts::PI).ceil() as usize + 1;
        let n = 64 * waves.max(4);
        let mut max_abs = 0.0_f64;
        let mut values = Vec::with_capacity(n);
        for i in 0..n {
            let r = self.radius * (2 * i + 1) as f64 / (2 * n) as f64;
            let (chi, _) = self.evaluate_chi(r)?;
            values.push(chi);
            max_abs = max_abs.max(chi.abs());
        }
        let cutoff = 1e-12 * max_abs;
        let mut nodes = 0;
        let mut last_sign = 0.0;
        for v in values {
            if v.abs() <= cutoff {
                continue;
            }
            let sign = v.signum();
            if last_sign != 0.0 && sign != last_sign {
                nodes += 1;
            }
            last_sign = sign;
        }
        Ok(nodes)
    }
}

fn check_k_radius(k: f64, radius: f64) -> Result<()> {
    if !(k.is_finite() && k >= 0.0) {
        return Err(Error::invalid(format!(
            "wavenumber must be finite and non-negative, got {k}"
        )));
    }
    if !(radius.is_finite() && radius > 0.0) {
        return Err(Error::invalid(format!(
            "ball radius must be positive and finite, got {radius}"
        )));
    }
    Ok(())
}

impl SampledMode {
    fn new(grid: Vec<f64>, values: Vec<f64>, derivatives: Vec<f64>, radius: f64) -> Result<Self> {
        if grid.len() < 2 || grid.len() != values.len() || grid.len() != derivatives.len() {
            return Err(Error::invalid(format!(
                "sampled mode needs matching grid/value/derivative lists of length >= 2, \
                 got {}/{}/{}",
                grid.len(),
                values.len(),
                derivatives.len()
            )));
        }
        if grid.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::invalid(
                "sample grid must be strictly increasing".to_string(),
            ));
        }
        let first = grid[0];
        if !(first > 0.0 && first <= GRID_ORIGIN_FRACTION * radius) {
            return Err(Error::invalid(format!(
                "sample grid must start inside (0, {:.1e}] to cover the origin limit, \
                 got first point {first}",
                GRID_ORIGIN_FRACTION * radius
            )));
        }
        let mut grid = grid;
        let last = *grid.last().unwrap();
        if (last - radius).abs() > 1e-12 * radius {
            return Err(Error::invalid(format!(
                "sample grid must end at the ball radius {radius}, got {last}"
            )));
        }
        *grid.last_mut().unwrap() = radius;
        if values.iter().chain(&derivatives).any(|v| !v.is_finite()) {
            return Err(Error::invalid(
                "sampled values and derivatives must be finite".to_string(),
            ));
        }
        Ok(SampledMode {
            grid,
            values,
            derivatives,
        })
    }

    pub fn grid(&self) -> &[f64] {
        &self.grid
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn derivatives(&self) -> &[f64] {
        &self.derivatives
    }

    fn evaluate(&self, r: f64) -> Result<(f64, f64)> {
        let lo = self.grid[0];
        let hi = *self.grid.last().unwrap();
        if !(lo..=hi).contains(&r) {
            return Err(Error::OutsideGrid { r, lo, hi });
        }
        let idx = self.grid.partition_point(|&g| g < r);
        if self.grid[idx] == r {
            return Ok((self.values[idx], self.derivatives[idx]));
        }
        let (i, j) = (idx - 1, idx);
        let h = self.grid[j] - self.grid[i];
        let t = (r - self.grid[i]) / h;
        let (v0, v1) = (self.values[i], self.values[j]);
        let (d0, d1) = (self.derivatives[i], self.derivatives[j]);
        let t2 = t * t;
        let t3 = t2 * t;
        let value = (2.0 * t3 - 3.0 * t2 + 1.0) * v0
            + (t3 - 2.0 * t2 + t) * h * d0
            + (-2.0 * t3 + 3.0 * t2) * v1
            + (t3 - t2) * h * d1;
        let slope = (6.0 * t2 - 6.0 * t) * v0 / h
            + (3.0 * t2 - 4.0 * t + 1.0) * d0
            + (6.0 * t - 6.0 * t2) * v1 / h
            + (3.0 * t2 - 2.0 * t) * d1;
        Ok((value, slope))
    }

    /// Exact integral of the squared interpolant over the grid span: the
    /// square of a cubic has degree six, within reach of 4-point panels.
    /// The untabulated sliver [0, r_1] is closed by a trapezoid on the
    /// linearly extrapolated origin value, an O(r_1^3) correction that
    /// matters only for modes with chi(0) != 0.
    fn integral_of_square(&self) -> f64 {
        let (nodes, weights) = gauss_legendre_nodes(4);
        let at_zero = self.values[0] - self.grid[0] * self.derivatives[0];
        let mut total = 0.5 * self.grid[0] * (at_zero * at_zero + self.values[0] * self.values[0]);
        for w in self.grid.windows(2) {
            let half = 0.5 * (w[1] - w[0]);
            let mid = 0.5 * (w[0] + w[1]);
            let mut panel = 0.0;
            for (t, gw) in nodes.iter().zip(&weights) {
                let (chi, _) = self.evaluate(mid + half * t).expect("node inside grid");
                panel += gw * chi * chi;
            }
            total += panel * half;
        }
        total
    }

    fn scaled(&self, scale: f64) -> SampledMode {
        SampledMode {
            grid: self.grid.clone(),
            values: self.values.iter().map(|v| v * scale).collect(),
            derivatives: self.derivatives.iter().map(|d| d * scale).collect(),
        }
    }

    fn leading_sign(&self) -> f64 {
        let max_abs = self.values.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        let cutoff = 1e-12 * max_abs;
        for &v in &self.values {
            if v.abs() > cutoff {
                return v.signum();
            }
        }
        1.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfun::spherical_j;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    fn channel(l: u32) -> QuantumChannel {
        QuantumChannel::new(l)
    }

    fn sine_mode(k: f64) -> RadialMode {
        RadialMode::analytic(k, channel(0), 1.0, 1.0, 0.0).unwrap()
    }

    fn cosine_mode(k: f64) -> RadialMode {
        RadialMode::analytic(k, channel(0), 1.0, 0.0, 1.0).unwrap()
    }

    #[test]
    fn sine_mode_vanishes_at_the_wall() {
        let (chi, dchi) = sine_mode(PI).evaluate_chi(1.0).unwrap();
        assert!(chi.abs() < 1e-15);
        assert_abs_diff_eq!(dchi, -PI, epsilon = 1e-12);
    }

    #[test]
    fn cosine_mode_tends_to_one_at_the_origin() {
        for k in [0.7, PI, 11.0] {
            let m = cosine_mode(k);
            let (at_zero, slope) = m.evaluate_chi(0.0).unwrap();
            assert_eq!(at_zero, 1.0);
            assert_eq!(slope, 0.0);
            let (near, _) = m.evaluate_chi(1e-9).unwrap();
            assert_abs_diff_eq!(near, 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn l1_mode_at_the_first_bessel_zero_vanishes_at_the_wall() {
        let k = 4.493409457909064;
        let m = RadialMode::analytic(k, channel(1), 1.0, 1.0, 0.0).unwrap();
        let (chi, _) = m.evaluate_chi(1.0).unwrap();
        assert!(chi.abs() < 1e-12);
        // Consistency with the bare Bessel value.
        assert_abs_diff_eq!(chi, k * spherical_j(1, k).unwrap(), epsilon = 1e-14);
    }

    #[test]
    fn analytic_modes_satisfy_the_radial_equation() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x0de);
        let h = 1e-6;
        for _ in 0..100 {
            let l = rng.gen_range(0..=4u32);
            let k = rng.gen_range(1.0..20.0f64);
            let (a, b) = if l == 0 {
                (rng.gen_range(-2.0..2.0f64), rng.gen_range(-2.0..2.0f64))
            } else {
                (rng.gen_range(0.1..2.0f64), 0.0)
            };
            let m = RadialMode::analytic(k, channel(l), 1.0, a, b).unwrap();
            let r = rng.gen_range(0.05..0.95f64);
            let (chi, _) = m.evaluate_chi(r).unwrap();
            let (_, d_plus) = m.evaluate_chi(r + h).unwrap();
            let (_, d_minus) = m.evaluate_chi(r - h).unwrap();
            let second = (d_plus - d_minus) / (2.0 * h);
            let coeff = k * k - m.channel().centrifugal() / (r * r);
            let residual = (second + coeff * chi).abs();
            assert!(
                residual <= 1e-9 * (1.0 + second.abs()),
                "ODE residual {residual} at l={l}, k={k}, r={r}"
            );
        }
    }

    #[test]
    fn normalization_of_the_sine_ground_state_is_sqrt_two() {
        let n = sine_mode(PI).normalize().unwrap();
        let (a, b) = n.amplitudes().unwrap();
        // integral of sin^2(pi r) over [0,1] is 1/2.
        assert_relative_eq!(a, std::f64::consts::SQRT_2, max_relative = 1e-12);
        assert_eq!(b, 0.0);
    }

    #[test]
    fn normalization_of_the_cosine_mode_is_sqrt_two() {
        let n = cosine_mode(1.5 * PI).normalize().unwrap();
        let (_, b) = n.amplitudes().unwrap();
        // integral of cos^2(3 pi r / 2) over [0,1] is 1/2.
        assert_relative_eq!(b, std::f64::consts::SQRT_2, max_relative = 1e-12);
    }

    #[test]
    fn normalize_is_idempotent_and_fixes_the_phase() {
        let m = RadialMode::analytic(2.0 * PI, channel(0), 1.0, -0.4, 0.0).unwrap();
        let once = m.normalize().unwrap();
        let twice = once.normalize().unwrap();
        let (a1, _) = once.amplitudes().unwrap();
        let (a2, _) = twice.amplitudes().unwrap();
        assert!(a1 > 0.0);
        assert_relative_eq!(a1, a2, max_relative = 1e-12);
    }

    #[test]
    fn irregular_content_at_positive_l_is_not_normalizable() {
        let m = RadialMode::analytic(2.0, channel(1), 1.0, 0.0, 1.0).unwrap();
        assert!(!m.is_square_integrable());
        let err = m.normalize().unwrap_err();
        assert!(matches!(err, Error::NonNormalizable { l: 1 }));
        assert!(err.to_string().contains("r^-2"));

        // The divergence is visible in the truncated norm: integrating
        // chi^2 ~ r^-2l from eps grows like 1/eps for l = 1.
        let tail = |eps: f64| {
            let (nodes, weights) = gauss_legendre_nodes(64);
            let half = 0.5 * (1.0 - eps);
            let mid = 0.5 * (1.0 + eps);
            let mut total = 0.0;
            for (t, w) in nodes.iter().zip(&weights) {
                let (chi, _) = m.evaluate_chi(mid + half * t).unwrap();
                total += w * chi * chi;
            }
            total * half
        };
        let coarse = tail(1e-2);
        let fine = tail(1e-3);
        assert!(fine > 5.0 * coarse);
    }

    #[test]
    fn evaluation_outside_the_ball_is_rejected() {
        let m = sine_mode(PI);
        assert!(matches!(
            m.evaluate_chi(1.5),
            Err(Error::OutsideDomain { .. })
        ));
        assert!(m.evaluate_chi(-0.1).is_err());
        assert!(m.evaluate_chi(f64::NAN).is_err());
    }

    fn sampled_from_analytic(m: &RadialMode, n: usize) -> RadialMode {
        // Geometric spacing near the origin, then uniform out to the wall.
        let a = m.radius();
        let mut grid = vec![1e-7 * a, 3e-7 * a, 1e-6 * a, 1e-5 * a, 1e-4 * a, 1e-3 * a];
        for i in 1..=n {
            grid.push(0.002 * a + (a - 0.002 * a) * i as f64 / n as f64);
        }
        let mut values = Vec::new();
        let mut derivatives = Vec::new();
        for &r in &grid {
            let (v, d) = m.evaluate_chi(r).unwrap();
            values.push(v);
            derivatives.push(d);
        }
        RadialMode::sampled(m.k(), m.channel(), a, grid, values, derivatives).unwrap()
    }

    #[test]
    fn sampled_interpolation_tracks_the_analytic_mode() {
        let exact = RadialMode::analytic(2.0 * PI, channel(0), 1.0, 1.0, 0.3).unwrap();
        let sampled = sampled_from_analytic(&exact, 400);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let r = rng.gen_range(1e-3..1.0f64);
            let (ve, de) = exact.evaluate_chi(r).unwrap();
            let (vs, ds) = sampled.evaluate_chi(r).unwrap();
            assert_abs_diff_eq!(vs, ve, epsilon = 1e-9);
            assert_abs_diff_eq!(ds, de, epsilon = 1e-6);
        }
        // Stored nodes are reproduced exactly.
        let r = sampled.radius();
        let (v, _) = sampled.evaluate_chi(r).unwrap();
        let (ve, _) = exact.evaluate_chi(r).unwrap();
        assert_eq!(v, ve);
    }

    #[test]
    fn sampled_norm_matches_the_analytic_norm() {
        let exact = RadialMode::analytic(1.5 * PI, channel(0), 1.0, 0.7, 0.2).unwrap();
        let sampled = sampled_from_analytic(&exact, 800);
        assert_relative_eq!(
            sampled.norm_squared().unwrap(),
            exact.norm_squared().unwrap(),
            max_relative = 1e-9
        );
        let n = sampled.normalize().unwrap();
        assert_relative_eq!(n.norm_squared().unwrap(), 1.0, max_relative = 1e-9);
    }

    #[test]
    fn sampled_evaluation_below_the_grid_is_a_grid_error() {
        let exact = sine_mode(PI);
        let sampled = sampled_from_analytic(&exact, 50);
        let err = sampled.evaluate_chi(1e-9).unwrap_err();
        assert!(matches!(err, Error::OutsideGrid { .. }));
    }

    #[test]
    fn sampled_construction_rejects_bad_grids() {
        let c = channel(0);
        // Does not reach close enough to the origin.
        assert!(
            RadialMode::sampled(1.0, c, 1.0, vec![0.1, 0.5, 1.0], vec![0.0; 3], vec![0.0; 3])
                .is_err()
        );
        // Not strictly increasing.
        assert!(RadialMode::sampled(
            1.0,
            c,
            1.0,
            vec![1e-7, 1e-7, 1.0],
            vec![0.0; 3],
            vec![0.0; 3]
        )
        .is_err());
        // Does not end at the wall.
        assert!(RadialMode::sampled(
            1.0,
            c,
            1.0,
            vec![1e-7, 0.5, 0.9],
            vec![0.0; 3],
            vec![0.0; 3]
        )
        .is_err());
    }

    #[test]
    fn node_counts_follow_the_oscillation_index() {
        for n in 1..=6u32 {
            let m = sine_mode(n as f64 * PI);
            assert_eq!(m.count_interior_nodes().unwrap(), n - 1);
            let c = cosine_mode((n as f64 - 0.5) * PI);
            assert_eq!(c.count_interior_nodes().unwrap(), n - 1);
        }
    }
}
