//! Deterministic numerical integration on an interval.
//!
//! Every inner product in the crate goes through [`integrate`] so that
//! normalization, hermiticity defects and the delta-weight estimates all share
//! one well-tested quadrature path. The default rule is composite
//! Gauss-Legendre, which is exact for polynomials of degree `2p - 1` per
//! panel and overkill-cheap for the smooth trigonometric and Bessel
//! integrands that appear here. All rules are open at the endpoints, so
//! integrable `1/r`-type behaviour against `r^(l+1)` modes is handled
//! without special casing.
//!
//! Evaluations are pure; panels are summed in a fixed order so results are
//! reproducible run to run.

use crate::error::{Error, Result};

/// Quadrature rule selection for [`integrate`].
#[derive(Debug, Clone, PartialEq)]
pub enum QuadratureRule {
    /// Fixed composite Gauss-Legendre: `points` nodes on each of `panels`
    /// equal subintervals. `points` must lie in `[4, 128]`.
    GaussLegendreComposite { points: usize, panels: usize },
    /// Recursive Simpson with a global absolute tolerance.
    AdaptiveSimpson { tolerance: f64 },
}

impl QuadratureRule {
    /// The crate-wide default: 32-point Gauss-Legendre on 16 panels.
    pub fn default_rule() -> Self {
        QuadratureRule::GaussLegendreComposite {
            points: 32,
            panels: 16,
        }
    }

    fn validate(&self) -> Result<()> {
        match self {
            QuadratureRule::GaussLegendreComposite { points, panels } => {
                if !(4..=128).contains(points) {
                    return Err(Error::invalid(format!(
                        "points per panel must lie in [4, 128], got {points}"
                    )));
                }
                if *panels == 0 {
                    return Err(Error::invalid("panel count must be positive"));
                }
                Ok(())
            }
            QuadratureRule::AdaptiveSimpson { tolerance } => {
                if !(tolerance.is_finite() && *tolerance > 0.0) {
                    return Err(Error::invalid("Simpson tolerance must be positive"));
                }
                Ok(())
            }
        }
    }
}

/// Value of an integral together with an a-posteriori error estimate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Integral {
    pub value: f64,
    /// For Gauss-Legendre: |I(panels) - I(2 panels)|. For Simpson: the
    /// accumulated Richardson estimate of the recursion.
    pub error_estimate: f64,
}

/// Integrate `f` over `(lo, hi)` with the given rule.
///
/// The interval must satisfy `lo < hi`. Endpoints are never evaluated by the
/// Gauss-Legendre path.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    rule: &QuadratureRule,
    lo: f64,
    hi: f64,
) -> Result<Integral> {
    rule.validate()?;
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(Error::invalid(format!(
            "integration domain must satisfy lo < hi, got [{lo}, {hi}]"
        )));
    }
    match rule {
        QuadratureRule::GaussLegendreComposite { points, panels } => {
            let coarse = gauss_composite(&f, *points, *panels, lo, hi);
            let fine = gauss_composite(&f, *points, 2 * panels, lo, hi);
            Ok(Integral {
                value: fine,
                error_estimate: (fine - coarse).abs(),
            })
        }
        QuadratureRule::AdaptiveSimpson { tolerance } => adaptive_simpson(&f, lo, hi, *tolerance),
    }
}

/// Convenience wrapper returning just the value with the default rule.
pub fn integrate_default<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> Result<f64> {
    Ok(integrate(f, &QuadratureRule::default_rule(), lo, hi)?.value)
}

fn gauss_composite<F: Fn(f64) -> f64>(
    f: &F,
    points: usize,
    panels: usize,
    lo: f64,
    hi: f64,
) -> f64 {
    let (nodes, weights) = gauss_legendre_nodes(points);
    let width = (hi - lo) / panels as f64;
    let mut total = 0.0;
    for p in 0..panels {
        let a = lo + p as f64 * width;
        let mid = a + 0.5 * width;
        let half = 0.5 * width;
        let mut panel_sum = 0.0;
        for (x, w) in nodes.iter().zip(weights.iter()) {
            panel_sum += w * f(mid + half * x);
        }
        total += half * panel_sum;
    }
    total
}

/// Nodes and weights of the `n`-point Gauss-Legendre rule on `[-1, 1]`.
///
/// Newton iteration on the Legendre polynomial, seeded with the Chebyshev
/// approximation to the roots (Numerical Recipes "gauleg"). Symmetric pairs
/// are generated from the lower half.
pub fn gauss_legendre_nodes(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Chebyshev seed for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() <= 1e-15 * x.abs().max(1.0) {
                let (_, d2) = legendre_with_derivative(n, x);
                dp = d2;
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Legendre polynomial P_n and its derivative by the three-term recurrence.
fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for j in 2..=n {
        let jf = j as f64;
        let p2 = ((2.0 * jf - 1.0) * x * p1 - (jf - 1.0) * p0) / jf;
        p0 = p1;
        p1 = p2;
    }
    // P'_n(x) = n (x P_n - P_{n-1}) / (x^2 - 1)
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

const SIMPSON_MAX_DEPTH: u32 = 50;

fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, lo: f64, hi: f64, tol: f64) -> Result<Integral> {
    let mid = 0.5 * (lo + hi);
    let flo = f(lo);
    let fmid = f(mid);
    let fhi = f(hi);
    let whole = simpson_panel(lo, hi, flo, fmid, fhi);
    let mut err_acc = 0.0;
    let value = simpson_recurse(
        f,
        lo,
        hi,
        flo,
        fmid,
        fhi,
        whole,
        tol,
        SIMPSON_MAX_DEPTH,
        &mut err_acc,
    )?;
    Ok(Integral {
        value,
        error_estimate: err_acc,
    })
}

fn simpson_panel(a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn simpson_recurse<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: u32,
    err_acc: &mut f64,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson_panel(a, m, fa, flm, fm);
    let right = simpson_panel(m, b, fm, frm, fb);
    let refined = left + right;
    let delta = refined - whole;
    if delta.abs() <= 15.0 * tol {
        *err_acc += delta.abs() / 15.0;
        return Ok(refined + delta / 15.0);
    }
    if depth == 0 {
        return Err(Error::QuadratureNonConvergence {
            previous: whole,
            latest: refined,
        });
    }
    let half_tol = 0.5 * tol;
    let l = simpson_recurse(f, a, m, fa, flm, fm, left, half_tol, depth - 1, err_acc)?;
    let r = simpson_recurse(f, m, b, fm, frm, fb, right, half_tol, depth - 1, err_acc)?;
    Ok(l + r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::PI;

    // Closed-form antiderivative oracle: int sin^2(c r) dr = r/2 - sin(2 c r)/(4 c).
    fn sin_sq_integral(c: f64, lo: f64, hi: f64) -> f64 {
        let anti = |r: f64| 0.5 * r - (2.0 * c * r).sin() / (4.0 * c);
        anti(hi) - anti(lo)
    }

    // Closed-form antiderivative oracle: int cos^2(c r) dr = r/2 + sin(2 c r)/(4 c).
    fn cos_sq_integral(c: f64, lo: f64, hi: f64) -> f64 {
        let anti = |r: f64| 0.5 * r + (2.0 * c * r).sin() / (4.0 * c);
        anti(hi) - anti(lo)
    }

    #[test]
    fn sin_squared_matches_antiderivative() {
        let rule = QuadratureRule::default_rule();
        let got = integrate(|r| (PI * r).sin().powi(2), &rule, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(got.value, sin_sq_integral(PI, 0.0, 1.0), epsilon = 1e-12);
        assert_abs_diff_eq!(got.value, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn constant_integrates_exactly() {
        let got = integrate_default(|_| 1.0, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(got, 1.0, epsilon = 1e-14);
    }

    #[test]
    fn cos_squared_matches_antiderivative() {
        let c = 1.5 * PI;
        let got = integrate_default(|r| (c * r).cos().powi(2), 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(got, cos_sq_integral(c, 0.0, 1.0), epsilon = 1e-12);
        assert_abs_diff_eq!(got, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn gauss_rule_is_exact_for_low_degree_polynomials() {
        // p points integrate degree <= 2p-1 exactly.
        for &p in &[4usize, 8, 16] {
            let max_deg = 2 * p - 1;
            for deg in 0..=max_deg {
                let rule = QuadratureRule::GaussLegendreComposite {
                    points: p,
                    panels: 1,
                };
                let got = integrate(|x| x.powi(deg as i32), &rule, 0.0, 1.0)
                    .unwrap()
                    .value;
                let exact = 1.0 / (deg as f64 + 1.0);
                assert_abs_diff_eq!(got, exact, epsilon = 1e-14);
            }
        }
    }

    #[test]
    fn adaptive_simpson_handles_oscillatory_integrand() {
        let rule = QuadratureRule::AdaptiveSimpson { tolerance: 1e-12 };
        let got = integrate(|r| (10.0 * r).sin().powi(2), &rule, 0.0, 2.0).unwrap();
        assert_abs_diff_eq!(got.value, sin_sq_integral(10.0, 0.0, 2.0), epsilon = 1e-10);
    }

    #[test]
    fn adaptive_simpson_reports_non_convergence() {
        // A step discontinuity defeats the Richardson criterion at tiny tolerance
        // once the depth budget runs out.
        let rule = QuadratureRule::AdaptiveSimpson { tolerance: 1e-300 };
        let err = integrate(|r| if r < 0.3 { 0.0 } else { 1.0 }, &rule, 0.0, 1.0);
        assert!(matches!(err, Err(Error::QuadratureNonConvergence { .. })));
    }

    #[test]
    fn rejects_bad_domains_and_rules() {
        assert!(integrate_default(|_| 1.0, 1.0, 0.0).is_err());
        let rule = QuadratureRule::GaussLegendreComposite {
            points: 2,
            panels: 4,
        };
        assert!(integrate(|_| 1.0, &rule, 0.0, 1.0).is_err());
    }

    #[test]
    fn linearity_and_interval_additivity() {
        let f = |r: f64| (3.0 * r).sin() * r;
        let g = |r: f64| (1.0 + r * r).ln();
        let whole = integrate_default(|r| 2.0 * f(r) - 0.5 * g(r), 0.0, 2.0).unwrap();
        let parts = 2.0 * integrate_default(f, 0.0, 2.0).unwrap()
            - 0.5 * integrate_default(g, 0.0, 2.0).unwrap();
        assert_abs_diff_eq!(whole, parts, epsilon = 1e-13);

        let split =
            integrate_default(f, 0.0, 0.7).unwrap() + integrate_default(f, 0.7, 2.0).unwrap();
        assert_abs_diff_eq!(
            integrate_default(f, 0.0, 2.0).unwrap(),
            split,
            epsilon = 1e-13
        );
    }

    #[test]
    fn error_estimate_is_attached() {
        let got = integrate(
            |r| (5.0 * r).cos(),
            &QuadratureRule::GaussLegendreComposite {
                points: 4,
                panels: 1,
            },
            0.0,
            1.0,
        )
        .unwrap();
        assert!(got.error_estimate >= 0.0);
        // The panel-doubling estimate must dominate the true error here.
        let exact = 5.0_f64.sin() / 5.0;
        assert!((got.value - exact).abs() <= got.error_estimate);
        let tight = integrate(
            |r| (5.0 * r).cos(),
            &QuadratureRule::default_rule(),
            0.0,
            1.0,
        )
        .unwrap();
        assert!(tight.error_estimate < 1e-13);
    }
}
