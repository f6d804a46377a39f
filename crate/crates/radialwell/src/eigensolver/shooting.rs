//! Outward shooting for interiors where no closed form exists.
//!
//! A trial wavenumber k fixes the ODE chi'' = q(r) chi with
//! q = (2 mu / hbar^2) V + l(l+1)/r^2 - k^2. Integration starts just off
//! the origin on the regular branch chi ~ r^{l+1} and runs to the wall;
//! eigenvalues are the k where chi(a) = 0. Node counts bracket them (the
//! interior node count is nondecreasing in k and steps by one as each
//! level is crossed), so no level in the scanned range can be missed.

use std::cell::Cell;
use std::f64::consts::PI;

use crate::eigensolver::roots::brent;
use crate::error::{Error, Result};
use crate::model::{
    BoundaryConditionFamily, PotentialSpec, QuantumChannel, RadialMode, Spectrum, SpectrumEntry,
    Units,
};

/// How the radial equation is propagated from the series start to the wall.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Integrator {
    /// Dormand-Prince 5(4) embedded pair with per-step error control.
    AdaptiveRungeKutta,
    /// Fixed-lattice Numerov three-point scheme, offered as a cross-check.
    Numerov,
}

/// Tunables for the shooting solver.
#[derive(Debug, Clone, Copy)]
pub struct ShootingConfig {
    /// Start radius of the outward integration; at most 1e-6 of the wall.
    pub epsilon: f64,
    /// Initial step (adaptive) or lattice spacing (Numerov).
    pub step: f64,
    /// Wavenumber range searched for eigenvalues.
    pub k_bracket: (f64, f64),
    /// Relative error control for steps and root refinement.
    pub tolerance: f64,
    pub integrator: Integrator,
}

impl ShootingConfig {
    /// Defaults scaled to a well of radius `radius`.
    pub fn for_radius(radius: f64) -> Self {
        ShootingConfig {
            epsilon: 1e-8 * radius,
            step: 1e-3 * radius,
            k_bracket: (0.05 / radius, 150.0 / radius),
            tolerance: 1e-10,
            integrator: Integrator::AdaptiveRungeKutta,
        }
    }

    pub fn validate(&self, radius: f64) -> Result<()> {
        if !(radius.is_finite() && radius > 0.0) {
            return Err(Error::invalid(format!(
                "radius must be positive, got {radius}"
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon <= 1e-6 * radius) {
            return Err(Error::invalid(format!(
                "start radius must lie in (0, 1e-6 a]; got {} for a = {radius}",
                self.epsilon
            )));
        }
        if !(self.step.is_finite() && self.step > 0.0 && self.step <= radius) {
            return Err(Error::invalid(format!(
                "step must lie in (0, a]; got {}",
                self.step
            )));
        }
        let (lo, hi) = self.k_bracket;
        if !(lo.is_finite() && hi.is_finite() && 0.0 < lo && lo < hi) {
            return Err(Error::invalid(format!(
                "k bracket must satisfy 0 < k_lo < k_hi; got ({lo}, {hi})"
            )));
        }
        if !(self.tolerance.is_finite() && self.tolerance >= 100.0 * f64::EPSILON) {
            return Err(Error::invalid(format!(
                "tolerance must be at least {:.1e}; got {}",
                100.0 * f64::EPSILON,
                self.tolerance
            )));
        }
        Ok(())
    }
}

/// Outcome of one outward integration at a trial wavenumber.
#[derive(Debug, Clone, Copy)]
pub struct Shot {
    /// chi at the wall; zero at an eigenvalue.
    pub boundary_value: f64,
    /// One-sided derivative of chi at the wall.
    pub boundary_slope: f64,
    /// Strict sign changes of chi strictly inside (0, a).
    pub nodes: u32,
}

/// Integrate once at trial wavenumber `k` and report the wall values.
pub fn shoot(
    potential: &PotentialSpec,
    channel: QuantumChannel,
    units: Units,
    config: &ShootingConfig,
    k: f64,
) -> Result<Shot> {
    let shooter = Shooter::new(potential, channel, units, config)?;
    Ok(shooter.shot(k, config.epsilon)?.0)
}

/// Lowest `n_max` Dirichlet eigenvalues of the interacting radial problem.
///
/// The k range is scanned in increments of pi/(2a); each increment holds at
/// most one level generically, and intervals whose node count jumps by more
/// than one are bisected until the levels separate. Within an isolated
/// bracket the wall value changes sign and Brent refinement pins the root.
/// Levels below `k_bracket.0` are not searched for.
pub fn shooting_solve(
    potential: &PotentialSpec,
    channel: QuantumChannel,
    units: Units,
    config: &ShootingConfig,
    n_max: u32,
) -> Result<Spectrum> {
    let shooter = Shooter::new(potential, channel, units, config)?;
    let a = potential.radius();
    let want = n_max as usize;
    let mut found: Vec<FoundRoot> = Vec::with_capacity(want);
    if want > 0 {
        let (lo, hi) = config.k_bracket;
        let dk = PI / (2.0 * a);
        let mut prev = shooter.probe(lo)?;
        while found.len() < want && prev.k < hi {
            let cur = shooter.probe((prev.k + dk).min(hi))?;
            shooter.isolate(&prev, &cur, 0, want, &mut found)?;
            prev = cur;
        }
        if found.len() < want {
            return Err(Error::BracketExhausted {
                k_lo: lo,
                k_hi: hi,
                found: found.len(),
                requested: want,
            });
        }
        found.truncate(want);
    }
    let mut entries = Vec::with_capacity(found.len());
    for (i, root) in found.iter().enumerate() {
        shooter.start_radius_sensitivity(root);
        entries.push(SpectrumEntry {
            n: i as u32 + 1,
            k: root.k,
            energy: units.energy_from_k(root.k),
            nodes: root.nodes,
        });
    }
    Spectrum::new(
        channel,
        BoundaryConditionFamily::Conventional,
        a,
        units,
        entries,
    )
}

/// The normalized n-th eigenfunction, sampled on the integrator's own grid.
pub fn shooting_eigenfunction(
    potential: &PotentialSpec,
    channel: QuantumChannel,
    units: Units,
    config: &ShootingConfig,
    n: u32,
) -> Result<RadialMode> {
    if n == 0 {
        return Err(Error::invalid("state indices start at n = 1".to_string()));
    }
    if config.integrator == Integrator::Numerov {
        return Err(Error::invalid(
            "eigenfunction export needs the adaptive integrator: the fixed lattice starts too far from the origin to carry the mode"
                .to_string(),
        ));
    }
    let spectrum = shooting_solve(potential, channel, units, config, n)?;
    let k = spectrum.entries()[n as usize - 1].k;
    let shooter = Shooter::new(potential, channel, units, config)?;
    let (_, trace) = shooter.shot(k, config.epsilon)?;
    let mut grid = Vec::with_capacity(trace.len());
    let mut values = Vec::with_capacity(trace.len());
    let mut derivatives = Vec::with_capacity(trace.len());
    for (r, chi, dchi) in trace {
        grid.push(r);
        values.push(chi);
        derivatives.push(dchi);
    }
    RadialMode::sampled(k, channel, potential.radius(), grid, values, derivatives)?.normalize()
}

/// Sample points of one integration: (r, chi, chi').
type Trace = Vec<(f64, f64, f64)>;

#[derive(Debug, Clone, Copy)]
struct Probe {
    k: f64,
    value: f64,
    nodes: u32,
}

#[derive(Debug, Clone, Copy)]
struct FoundRoot {
    k: f64,
    nodes: u32,
    bracket: (f64, f64),
}

struct Shooter<'a> {
    potential: &'a PotentialSpec,
    channel: QuantumChannel,
    config: ShootingConfig,
    radius: f64,
    centrifugal: f64,
    /// 2 mu / hbar^2, multiplying V in the ODE coefficient.
    scale: f64,
    /// Coefficient of 1/r in the scaled potential near the origin.
    u_minus1: f64,
}

impl<'a> Shooter<'a> {
    fn new(
        potential: &'a PotentialSpec,
        channel: QuantumChannel,
        units: Units,
        config: &ShootingConfig,
    ) -> Result<Self> {
        config.validate(potential.radius())?;
        Ok(Shooter {
            potential,
            channel,
            config: *config,
            radius: potential.radius(),
            centrifugal: channel.centrifugal(),
            scale: units.potential_scale(),
            u_minus1: units.potential_scale() * potential.r_v_limit(),
        })
    }

    /// ODE coefficient q(r) with chi'' = q chi.
    fn q(&self, k: f64, r: f64) -> Result<f64> {
        // Stage abscissae may overshoot the wall by rounding; the step
        // itself never does.
        let r = r.min(self.radius);
        Ok(self.scale * self.potential.evaluate(r)? + self.centrifugal / (r * r) - k * k)
    }

    /// Regular-branch series chi = r^{l+1}(1 + c1 r + c2 r^2) and its
    /// derivative, valid while the dropped c3 term is negligible.
    fn series_start(&self, k: f64, r: f64) -> (f64, f64) {
        let l1 = self.channel.l as f64 + 1.0;
        let c1 = self.u_minus1 / (2.0 * l1);
        let c2 = (self.u_minus1 * c1 - k * k) / (2.0 * (2.0 * l1 + 1.0));
        let rl = r.powi(self.channel.l as i32);
        let chi = rl * r * (1.0 + r * (c1 + r * c2));
        let dchi = rl * (l1 + (l1 + 1.0) * c1 * r + (l1 + 2.0) * c2 * r * r);
        (chi, dchi)
    }

    fn start_radius(&self, epsilon: f64) -> f64 {
        match self.config.integrator {
            Integrator::AdaptiveRungeKutta => epsilon,
            // The lattice cannot resolve the centrifugal wall below a few
            // steps' distance, and the chi recovery map 1/(1 - h^2 q / 12)
            // must stay away from its pole.
            Integrator::Numerov => epsilon
                .max(1e-4 * self.radius)
                .max((self.channel.l as f64 + 1.0) * self.config.step),
        }
    }

    fn shot(&self, k: f64, epsilon: f64) -> Result<(Shot, Trace)> {
        match self.config.integrator {
            Integrator::AdaptiveRungeKutta => {
                let trace = self.propagate_adaptive(k, epsilon)?;
                let &(_, value, slope) = trace.last().expect("trace holds the start point");
                Ok((
                    Shot {
                        boundary_value: value,
                        boundary_slope: slope,
                        nodes: count_interior_sign_changes(&trace),
                    },
                    trace,
                ))
            }
            Integrator::Numerov => self.propagate_numerov(k, epsilon),
        }
    }

    fn probe(&self, k: f64) -> Result<Probe> {
        let (shot, _) = self.shot(k, self.config.epsilon)?;
        Ok(Probe {
            k,
            value: shot.boundary_value,
            nodes: shot.nodes,
        })
    }

    fn deriv(&self, k: f64, r: f64, y: [f64; 2]) -> Result<[f64; 2]> {
        Ok([y[1], self.q(k, r)? * y[0]])
    }

    fn propagate_adaptive(&self, k: f64, epsilon: f64) -> Result<Trace> {
        // Dormand-Prince 5(4) pair; the fifth-order result propagates and
        // the embedded difference drives the step controller.
        const C2: f64 = 1.0 / 5.0;
        const C3: f64 = 3.0 / 10.0;
        const C4: f64 = 4.0 / 5.0;
        const C5: f64 = 8.0 / 9.0;
        const A21: f64 = 1.0 / 5.0;
        const A31: f64 = 3.0 / 40.0;
        const A32: f64 = 9.0 / 40.0;
        const A41: f64 = 44.0 / 45.0;
        const A42: f64 = -56.0 / 15.0;
        const A43: f64 = 32.0 / 9.0;
        const A51: f64 = 19372.0 / 6561.0;
        const A52: f64 = -25360.0 / 2187.0;
        const A53: f64 = 64448.0 / 6561.0;
        const A54: f64 = -212.0 / 729.0;
        const A61: f64 = 9017.0 / 3168.0;
        const A62: f64 = -355.0 / 33.0;
        const A63: f64 = 46732.0 / 5247.0;
        const A64: f64 = 49.0 / 176.0;
        const A65: f64 = -5103.0 / 18656.0;
        const B1: f64 = 35.0 / 384.0;
        const B3: f64 = 500.0 / 1113.0;
        const B4: f64 = 125.0 / 192.0;
        const B5: f64 = -2187.0 / 6784.0;
        const B6: f64 = 11.0 / 84.0;
        const E1: f64 = 71.0 / 57600.0;
        const E3: f64 = -71.0 / 16695.0;
        const E4: f64 = 71.0 / 1920.0;
        const E5: f64 = -17253.0 / 339200.0;
        const E6: f64 = 22.0 / 525.0;
        const E7: f64 = -1.0 / 40.0;

        let a = self.radius;
        let tol = self.config.tolerance;
        let h_min = 1e-14 * a;
        let mut r = epsilon;
        let (chi0, dchi0) = self.series_start(k, r);
        let mut y = [chi0, dchi0];
        let mut trace: Trace = Vec::with_capacity(512);
        trace.push((r, y[0], y[1]));
        let mut h = self.config.step.min(0.25 * epsilon);
        let mut k1 = self.deriv(k, r, y)?;
        loop {
            let remaining = a - r;
            if remaining <= 0.0 {
                break;
            }
            let h_eff = h.min(remaining);
            let y2 = [y[0] + h_eff * A21 * k1[0], y[1] + h_eff * A21 * k1[1]];
            let k2 = self.deriv(k, r + C2 * h_eff, y2)?;
            let y3 = [
                y[0] + h_eff * (A31 * k1[0] + A32 * k2[0]),
                y[1] + h_eff * (A31 * k1[1] + A32 * k2[1]),
            ];
            let k3 = self.deriv(k, r + C3 * h_eff, y3)?;
            let y4 = [
                y[0] + h_eff * (A41 * k1[0] + A42 * k2[0] + A43 * k3[0]),
                y[1] + h_eff * (A41 * k1[1] + A42 * k2[1] + A43 * k3[1]),
            ];
            let k4 = self.deriv(k, r + C4 * h_eff, y4)?;
            let y5 = [
                y[0] + h_eff * (A51 * k1[0] + A52 * k2[0] + A53 * k3[0] + A54 * k4[0]),
                y[1] + h_eff * (A51 * k1[1] + A52 * k2[1] + A53 * k3[1] + A54 * k4[1]),
            ];
            let k5 = self.deriv(k, r + C5 * h_eff, y5)?;
            let y6 = [
                y[0] + h_eff
                    * (A61 * k1[0] + A62 * k2[0] + A63 * k3[0] + A64 * k4[0] + A65 * k5[0]),
                y[1] + h_eff
                    * (A61 * k1[1] + A62 * k2[1] + A63 * k3[1] + A64 * k4[1] + A65 * k5[1]),
            ];
            let k6 = self.deriv(k, r + h_eff, y6)?;
            let y_new = [
                y[0] + h_eff * (B1 * k1[0] + B3 * k3[0] + B4 * k4[0] + B5 * k5[0] + B6 * k6[0]),
                y[1] + h_eff * (B1 * k1[1] + B3 * k3[1] + B4 * k4[1] + B5 * k5[1] + B6 * k6[1]),
            ];
            let k7 = self.deriv(k, r + h_eff, y_new)?;
            let mut err_norm2 = 0.0;
            for i in 0..2 {
                let err = h_eff
                    * (E1 * k1[i] + E3 * k3[i] + E4 * k4[i] + E5 * k5[i] + E6 * k6[i] + E7 * k7[i]);
                let sc = 0.5 * tol * (y[i].abs() + y_new[i].abs() + 1e-300);
                err_norm2 += 0.5 * (err / sc) * (err / sc);
            }
            let err_norm = err_norm2.sqrt();
            let accepted = err_norm <= 1.0;
            if accepted {
                r = if h_eff >= remaining { a } else { r + h_eff };
                y = y_new;
                // Stage seven sits at (r + h, y_new), so it seeds the next
                // step for free.
                k1 = k7;
                trace.push((r, y[0], y[1]));
                if r >= a {
                    break;
                }
            }
            let factor = if err_norm.is_finite() {
                (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
            } else {
                0.2
            };
            h = h_eff * factor;
            if !accepted && h < h_min {
                return Err(Error::StepUnderflow { r, h_min: h });
            }
        }
        Ok(trace)
    }

    fn propagate_numerov(&self, k: f64, epsilon: f64) -> Result<(Shot, Trace)> {
        let a = self.radius;
        let r0 = self.start_radius(epsilon);
        if r0 >= 0.5 * a {
            return Err(Error::invalid(format!(
                "lattice spacing {} is too coarse for l = {}: the start radius reaches {r0}",
                self.config.step, self.channel.l
            )));
        }
        let n = (((a - r0) / self.config.step).ceil() as usize).max(8);
        let h = (a - r0) / n as f64;
        let h2 = h * h;
        let mut trace: Trace = Vec::with_capacity(n + 1);
        let grid_r = |i: usize| if i == n { a } else { r0 + i as f64 * h };
        let (chi0, _) = self.series_start(k, r0);
        let (chi1, _) = self.series_start(k, r0 + h);
        let mut f_prev = self.q(k, grid_r(0))?;
        let mut f_cur = self.q(k, grid_r(1))?;
        let mut w_prev = (1.0 - h2 * f_prev / 12.0) * chi0;
        let mut w_cur = (1.0 - h2 * f_cur / 12.0) * chi1;
        let mut chi_cur = chi1;
        // The chi' slot is not filled on the fixed lattice; the wall slope
        // below is one-sided and the trace never leaves this function as a
        // mode. Keep the last five chi values for that stencil.
        trace.push((grid_r(0), chi0, 0.0));
        trace.push((grid_r(1), chi1, 0.0));
        for i in 1..n {
            let w_next = 2.0 * w_cur - w_prev + h2 * f_cur * chi_cur;
            let f_next = self.q(k, grid_r(i + 1))?;
            let chi_next = w_next / (1.0 - h2 * f_next / 12.0);
            trace.push((grid_r(i + 1), chi_next, 0.0));
            w_prev = w_cur;
            w_cur = w_next;
            f_prev = f_cur;
            f_cur = f_next;
            chi_cur = chi_next;
        }
        let _ = f_prev;
        let m = trace.len();
        let slope = (25.0 * trace[m - 1].1 - 48.0 * trace[m - 2].1 + 36.0 * trace[m - 3].1
            - 16.0 * trace[m - 4].1
            + 3.0 * trace[m - 5].1)
            / (12.0 * h);
        let shot = Shot {
            boundary_value: trace[m - 1].1,
            boundary_slope: slope,
            nodes: count_interior_sign_changes(&trace),
        };
        Ok((shot, trace))
    }

    /// Deposit every eigenvalue inside (pa.k, pb.k] into `found`, in order.
    fn isolate(
        &self,
        pa: &Probe,
        pb: &Probe,
        depth: u32,
        cap: usize,
        found: &mut Vec<FoundRoot>,
    ) -> Result<()> {
        if found.len() >= cap {
            return Ok(());
        }
        let jump = pb.nodes as i64 - pa.nodes as i64;
        let flip = pa.value.signum() != pb.value.signum();
        if jump <= 0 && !flip {
            return Ok(());
        }
        if !flip {
            // A node registers only once the wall value clears the counting
            // threshold, a hair above the true crossing. A narrow interval
            // with a jump but no sign flip is that registration edge, and
            // the root itself was already caught on the flip side.
            if jump == 1 && pb.k - pa.k < 1e-6 * PI / (2.0 * self.radius) {
                return Ok(());
            }
            if depth >= 64 {
                return Err(Error::invalid(format!(
                    "eigenvalues near k = {:.6} are too close to separate",
                    0.5 * (pa.k + pb.k)
                )));
            }
            let mid = self.probe(0.5 * (pa.k + pb.k))?;
            self.isolate(pa, &mid, depth + 1, cap, found)?;
            return self.isolate(&mid, pb, depth + 1, cap, found);
        }
        if jump > 1 {
            if depth >= 64 {
                return Err(Error::invalid(format!(
                    "eigenvalues near k = {:.6} are too close to separate",
                    0.5 * (pa.k + pb.k)
                )));
            }
            let mid = self.probe(0.5 * (pa.k + pb.k))?;
            self.isolate(pa, &mid, depth + 1, cap, found)?;
            return self.isolate(&mid, pb, depth + 1, cap, found);
        }
        let k_root = self.refine(pa.k, pb.k, self.config.epsilon)?;
        if let Some(last) = found.last() {
            // A root sitting exactly on a shared scan point would otherwise
            // be claimed by both neighboring intervals.
            if (k_root - last.k).abs() <= 100.0 * self.config.tolerance * k_root.abs() {
                return Ok(());
            }
        }
        found.push(FoundRoot {
            k: k_root,
            nodes: pa.nodes,
            bracket: (pa.k, pb.k),
        });
        Ok(())
    }

    fn refine(&self, ka: f64, kb: f64, epsilon: f64) -> Result<f64> {
        let failure: Cell<Option<Error>> = Cell::new(None);
        let wall = |k: f64| match self.shot(k, epsilon) {
            Ok((shot, _)) => shot.boundary_value,
            Err(e) => {
                failure.set(Some(e));
                f64::NAN
            }
        };
        let out = brent(wall, ka, kb, self.config.tolerance * kb.abs(), 128);
        if let Some(e) = failure.take() {
            return Err(e);
        }
        out
    }

    /// Re-refine with the series start moved out tenfold; a shifted
    /// eigenvalue means the start truncation is not converged.
    fn start_radius_sensitivity(&self, root: &FoundRoot) {
        let eps2 = 10.0 * self.config.epsilon;
        if self.start_radius(eps2) == self.start_radius(self.config.epsilon) {
            return;
        }
        match self.refine(root.bracket.0, root.bracket.1, eps2) {
            Ok(k2) => {
                let shift = (k2 - root.k).abs();
                if shift > self.config.tolerance * (1.0 + root.k.abs()) {
                    log::warn!(
                        "eigenvalue k = {:.12} moved by {shift:.3e} when the series start shifted from {:.3e} to {:.3e}",
                        root.k,
                        self.config.epsilon,
                        eps2
                    );
                }
            }
            Err(e) => log::warn!(
                "start-radius sensitivity probe failed near k = {:.12}: {e}",
                root.k
            ),
        }
    }
}

/// Strict sign changes over a chi sample sequence, ignoring samples below
/// 1e-9 of the running amplitude so that the vanishing wall value of an
/// eigenfunction is not miscounted as structure.
fn count_interior_sign_changes(trace: &[(f64, f64, f64)]) -> u32 {
    let mut max_abs = 0.0_f64;
    let mut last = 0.0_f64;
    let mut nodes = 0;
    for &(_, chi, _) in trace {
        let abs = chi.abs();
        if abs > max_abs {
            max_abs = abs;
        }
        if abs > 1e-9 * max_abs {
            if last != 0.0 && chi.signum() != last.signum() {
                nodes += 1;
            }
            last = chi;
        }
    }
    nodes
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::eigensolver::{bessel_zeros, well_spectrum};
    use approx::assert_relative_eq;

    fn free() -> PotentialSpec {
        PotentialSpec::zero(1.0).unwrap()
    }

    fn coulomb() -> PotentialSpec {
        PotentialSpec::coulomb_like(1.0, 1.0).unwrap()
    }

    #[test]
    fn free_well_levels_match_the_closed_form() {
        let config = ShootingConfig::for_radius(1.0);
        for l in [0u32, 1, 2] {
            let spectrum = shooting_solve(
                &free(),
                QuantumChannel::new(l),
                Units::default(),
                &config,
                3,
            )
            .unwrap();
            let zeros = bessel_zeros(l, 3).unwrap();
            for (entry, z) in spectrum.entries().iter().zip(&zeros) {
                assert_relative_eq!(entry.k, z, max_relative = 1e-9);
            }
        }
    }

    #[test]
    fn node_counts_index_the_spectrum() {
        let config = ShootingConfig::for_radius(1.0);
        let spectrum = shooting_solve(
            &coulomb(),
            QuantumChannel::new(1),
            Units::default(),
            &config,
            4,
        )
        .unwrap();
        for (i, entry) in spectrum.entries().iter().enumerate() {
            assert_eq!(entry.nodes, i as u32);
            assert_eq!(entry.n, i as u32 + 1);
        }
    }

    #[test]
    fn numerov_cross_checks_the_adaptive_integrator() {
        let adaptive = ShootingConfig::for_radius(1.0);
        let numerov = ShootingConfig {
            integrator: Integrator::Numerov,
            step: 2e-4,
            ..adaptive
        };
        for (potential, l) in [(free(), 0u32), (free(), 1), (coulomb(), 0)] {
            let channel = QuantumChannel::new(l);
            let fine = shooting_solve(&potential, channel, Units::default(), &adaptive, 2).unwrap();
            let cross = shooting_solve(&potential, channel, Units::default(), &numerov, 2).unwrap();
            for (a, b) in fine.entries().iter().zip(cross.entries()) {
                assert_relative_eq!(a.k, b.k, max_relative = 1e-6);
            }
        }
    }

    #[test]
    fn coulomb_attraction_lowers_every_level() {
        let config = ShootingConfig::for_radius(1.0);
        let channel = QuantumChannel::new(0);
        let attracted = shooting_solve(&coulomb(), channel, Units::default(), &config, 3).unwrap();
        let empty = well_spectrum(
            &free(),
            channel,
            BoundaryConditionFamily::Conventional,
            Units::default(),
            3,
        )
        .unwrap();
        for (low, high) in attracted.entries().iter().zip(empty.entries()) {
            assert!(low.energy < high.energy);
        }
    }

    #[test]
    fn eigenfunction_is_normalized_and_vanishes_at_the_wall() {
        let config = ShootingConfig::for_radius(1.0);
        let mode = shooting_eigenfunction(
            &coulomb(),
            QuantumChannel::new(0),
            Units::default(),
            &config,
            2,
        )
        .unwrap();
        assert_relative_eq!(mode.norm_squared().unwrap(), 1.0, max_relative = 1e-8);
        let (wall, _) = mode.evaluate_chi(1.0).unwrap();
        assert!(wall.abs() < 1e-8);
        assert_eq!(mode.count_interior_nodes().unwrap(), 1);
    }

    #[test]
    fn eigenfunction_requires_the_adaptive_integrator() {
        let config = ShootingConfig {
            integrator: Integrator::Numerov,
            ..ShootingConfig::for_radius(1.0)
        };
        let err = shooting_eigenfunction(
            &free(),
            QuantumChannel::new(0),
            Units::default(),
            &config,
            1,
        )
        .unwrap_err();
        assert!(err.to_string().contains("adaptive"));
    }

    #[test]
    fn exhausted_bracket_reports_the_searched_range() {
        let config = ShootingConfig {
            k_bracket: (0.05, 2.0),
            ..ShootingConfig::for_radius(1.0)
        };
        let err = shooting_solve(
            &free(),
            QuantumChannel::new(0),
            Units::default(),
            &config,
            3,
        )
        .unwrap_err();
        match err {
            Error::BracketExhausted {
                k_hi,
                found,
                requested,
                ..
            } => {
                assert_eq!(k_hi, 2.0);
                assert_eq!(found, 0);
                assert_eq!(requested, 3);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn violent_potentials_underflow_the_step() {
        let wall = PotentialSpec::tabulated(1.0, vec![(1e-9, 1e30), (1.0, 1e30)]).unwrap();
        let config = ShootingConfig::for_radius(1.0);
        let err = shoot(
            &wall,
            QuantumChannel::new(0),
            Units::default(),
            &config,
            1.0,
        )
        .unwrap_err();
        assert!(matches!(err, Error::StepUnderflow { .. }));
    }

    #[test]
    fn zero_requested_levels_is_an_empty_spectrum() {
        let config = ShootingConfig::for_radius(1.0);
        let spectrum = shooting_solve(
            &free(),
            QuantumChannel::new(0),
            Units::default(),
            &config,
            0,
        )
        .unwrap();
        assert!(spectrum.entries().is_empty());
    }

    #[test]
    fn config_bounds_are_enforced() {
        let mut config = ShootingConfig::for_radius(1.0);
        config.epsilon = 1e-3;
        assert!(config.validate(1.0).is_err());
        config = ShootingConfig::for_radius(1.0);
        config.tolerance = 1e-15;
        assert!(config.validate(1.0).is_err());
        config = ShootingConfig::for_radius(1.0);
        config.k_bracket = (2.0, 1.0);
        assert!(config.validate(1.0).is_err());
        assert!(ShootingConfig::for_radius(1.0).validate(1.0).is_ok());
    }

    proptest::proptest! {
        #![proptest_config(proptest::prelude::ProptestConfig::with_cases(48))]
        // The staircase the level search walks on: interior nodes never
        // decrease with k.
        #[test]
        fn node_counts_are_monotone_in_k(
            k1 in 0.5..40.0f64,
            k2 in 0.5..40.0f64,
            l in 0..=3u32,
        ) {
            let (lo, hi) = if k1 <= k2 { (k1, k2) } else { (k2, k1) };
            let config = ShootingConfig::for_radius(1.0);
            let units = Units::default();
            let a = shoot(&free(), QuantumChannel::new(l), units, &config, lo).unwrap();
            let b = shoot(&free(), QuantumChannel::new(l), units, &config, hi).unwrap();
            proptest::prop_assert!(
                a.nodes <= b.nodes,
                "l={} k={}->{}: nodes {} -> {}", l, lo, hi, a.nodes, b.nodes
            );
        }
    }
}
