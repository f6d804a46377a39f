//! Spherical Bessel functions of the first and second kind.
//!
//! `j_l` is computed by Miller's downward recurrence normalized against the
//! `l = 0` closed form whenever the upward pass would be unstable (`x < l + 10`),
//! and by the upward three-term recurrence otherwise. `n_l` grows with order,
//! so the upward recurrence is stable everywhere. Both families satisfy
//!
//! ```text
//! f_{l-1}(x) + f_{l+1}(x) = (2l + 1) / x * f_l(x)        (DLMF 10.51.1)
//! f_l'(x)   = f_{l-1}(x) - (l + 1) / x * f_l(x)
//! ```
//!
//! For `x < 1e-3` a three-term power series (DLMF 10.53) replaces the closed
//! forms of `j_l`, avoiding the cancellation in expressions like
//! `sin x / x^2 - cos x / x`.
//!
//! All functions are pure and thread-safe.

use crate::error::{Error, Result};

/// Series/closed-form crossover for the first kind.
const SERIES_CUTOFF: f64 = 1e-3;

/// Value and derivative of one spherical Bessel function at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselEval {
    pub l: u32,
    pub x: f64,
    pub value: f64,
    pub derivative: f64,
}

impl BesselEval {
    /// Evaluate `j_l(x)` with its derivative.
    pub fn first_kind(l: u32, x: f64) -> Result<Self> {
        Ok(BesselEval {
            l,
            x,
            value: spherical_j(l, x)?,
            derivative: spherical_j_derivative(l, x)?,
        })
    }

    /// Evaluate `n_l(x)` with its derivative.
    pub fn second_kind(l: u32, x: f64) -> Result<Self> {
        Ok(BesselEval {
            l,
            x,
            value: spherical_n(l, x)?,
            derivative: spherical_n_derivative(l, x)?,
        })
    }
}

fn check_j_argument(x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::invalid(format!(
            "spherical Bessel argument must be finite and non-negative, got {x}"
        )));
    }
    Ok(())
}

fn check_n_argument(l: u32, x: f64) -> Result<()> {
    if !x.is_finite() || x < 0.0 {
        return Err(Error::invalid(format!(
            "spherical Neumann argument must be finite and non-negative, got {x}"
        )));
    }
    if x == 0.0 {
        return Err(Error::NeumannAtOrigin { l });
    }
    Ok(())
}

/// Spherical Bessel function of the first kind, `j_l(x)`.
///
/// `j_0(x) = sin x / x` with limit 1 at `x = 0`; `j_l(0) = 0` for `l >= 1`.
pub fn spherical_j(l: u32, x: f64) -> Result<f64> {
    check_j_argument(x)?;
    if x < SERIES_CUTOFF {
        return Ok(j_series(l, x));
    }
    Ok(j_by_recurrence(l, x))
}

/// Spherical Bessel function of the second kind (Neumann), `n_l(x)`.
///
/// Diverges as `x^-(l+1)` at the origin; `x` must be positive.
pub fn spherical_n(l: u32, x: f64) -> Result<f64> {
    check_n_argument(l, x)?;
    let n0 = -x.cos() / x;
    if l == 0 {
        return Ok(n0);
    }
    let n1 = -x.cos() / (x * x) - x.sin() / x;
    Ok(upward(l, x, n0, n1))
}

/// Derivative of the first kind, `j_l'(x)`.
pub fn spherical_j_derivative(l: u32, x: f64) -> Result<f64> {
    check_j_argument(x)?;
    if x < SERIES_CUTOFF {
        return Ok(j_series_derivative(l, x));
    }
    if l == 0 {
        return Ok(x.cos() / x - x.sin() / (x * x));
    }
    let jm1 = j_by_recurrence(l - 1, x);
    let jl = j_by_recurrence(l, x);
    Ok(jm1 - (l as f64 + 1.0) / x * jl)
}

/// Derivative of the second kind, `n_l'(x)`.
pub fn spherical_n_derivative(l: u32, x: f64) -> Result<f64> {
    check_n_argument(l, x)?;
    if l == 0 {
        return Ok(x.sin() / x + x.cos() / (x * x));
    }
    let nm1 = spherical_n(l - 1, x)?;
    let nl = spherical_n(l, x)?;
    Ok(nm1 - (l as f64 + 1.0) / x * nl)
}

/// Riccati-Bessel function of the first kind `S_l(x) = x j_l(x)` and its
/// derivative. `S_0(x) = sin x`.
pub fn riccati_s(l: u32, x: f64) -> Result<(f64, f64)> {
    if l == 0 {
        return Ok((x.sin(), x.cos()));
    }
    check_j_argument(x)?;
    if x == 0.0 {
        // S_l ~ x^{l+1} / (2l+1)!!
        return Ok((0.0, 0.0));
    }
    let j = spherical_j(l, x)?;
    let dj = spherical_j_derivative(l, x)?;
    Ok((x * j, j + x * dj))
}

/// Riccati-Bessel function of the second kind `C_l(x) = -x n_l(x)` and its
/// derivative. `C_0(x) = cos x`; for `l >= 1` it diverges as `x^-l` at zero.
pub fn riccati_c(l: u32, x: f64) -> Result<(f64, f64)> {
    if l == 0 {
        return Ok((x.cos(), -x.sin()));
    }
    let n = spherical_n(l, x)?;
    let dn = spherical_n_derivative(l, x)?;
    Ok((-x * n, -(n + x * dn)))
}

fn j_by_recurrence(l: u32, x: f64) -> f64 {
    let j0 = x.sin() / x;
    if l == 0 {
        return j0;
    }
    let j1 = x.sin() / (x * x) - x.cos() / x;
    if l == 1 {
        return j1;
    }
    if x >= l as f64 + 10.0 {
        upward(l, x, j0, j1)
    } else {
        miller_downward(l, x, j0)
    }
}

/// Upward three-term recurrence from the first two members.
fn upward(l: u32, x: f64, f0: f64, f1: f64) -> f64 {
    let mut prev = f0;
    let mut curr = f1;
    for m in 1..l {
        let next = (2.0 * m as f64 + 1.0) / x * curr - prev;
        prev = curr;
        curr = next;
    }
    curr
}

/// Miller's downward recurrence for `j_l`, normalized against `j_0`.
///
/// The start order must exceed both `l` and `x` by enough that the Neumann
/// admixture in the arbitrary seed has decayed below f64 resolution at order
/// `l`; the admixture shrinks roughly as `(x / 2m)^2` per order above `x`.
fn miller_downward(l: u32, x: f64, j0: f64) -> f64 {
    let start = l.max(x.ceil() as u32) + 30;
    let mut above = 0.0_f64;
    let mut curr = 1e-250_f64;
    let mut at_l = 0.0_f64;
    for m in (1..=start).rev() {
        let below = (2.0 * m as f64 + 1.0) / x * curr - above;
        above = curr;
        curr = below;
        if m - 1 == l {
            at_l = curr;
        }
        if curr.abs() > 1e250 {
            curr *= 1e-250;
            above *= 1e-250;
            at_l *= 1e-250;
        }
    }
    // curr now carries the unnormalized j_0.
    at_l * (j0 / curr)
}

/// Odd double factorial `(2l + 1)!!` as f64.
fn double_factorial_odd(l: u32) -> f64 {
    let mut out = 1.0;
    let mut m = 2 * l + 1;
    while m > 1 {
        out *= m as f64;
        m -= 2;
    }
    out
}

/// Three-term small-argument series, DLMF 10.53.1:
/// `j_l(x) = x^l/(2l+1)!! [1 - y/(2l+3) + y^2/(2 (2l+3)(2l+5))]`, `y = x^2/2`.
fn j_series(l: u32, x: f64) -> f64 {
    let y = 0.5 * x * x;
    let d1 = 2.0 * l as f64 + 3.0;
    let d2 = 2.0 * l as f64 + 5.0;
    let poly = 1.0 - y / d1 + y * y / (2.0 * d1 * d2);
    x.powi(l as i32) / double_factorial_odd(l) * poly
}

fn j_series_derivative(l: u32, x: f64) -> f64 {
    if l == 0 {
        // -j_1 expanded to the same order.
        return -x / 3.0 + x.powi(3) / 30.0;
    }
    let lf = l as f64;
    let d1 = 2.0 * lf + 3.0;
    let d2 = 2.0 * lf + 5.0;
    let poly = lf - (lf + 2.0) * x * x / (2.0 * d1) + (lf + 4.0) * x.powi(4) / (8.0 * d1 * d2);
    x.powi(l as i32 - 1) / double_factorial_odd(l) * poly
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use rand::{Rng, SeedableRng};
    use std::f64::consts::PI;

    /// Independent oracle for the first positive root of tan z = z:
    /// bisection on (pi, 3pi/2), where tan z - z changes sign and tan has
    /// no pole. This root is also the first zero of j_1.
    fn tan_z_equals_z_root() -> f64 {
        let f = |z: f64| z.tan() - z;
        let mut lo = PI + 1e-9;
        let mut hi = 1.5 * PI - 1e-9;
        assert!(f(lo) < 0.0 && f(hi) > 0.0);
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if f(mid) < 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-14 {
                break;
            }
        }
        0.5 * (lo + hi)
    }

    #[test]
    fn j0_closed_form_values() {
        assert!(spherical_j(0, PI).unwrap().abs() < 1e-15);
        assert_abs_diff_eq!(spherical_j(0, 0.0).unwrap(), 1.0);
        assert_abs_diff_eq!(
            spherical_j(0, 1.3).unwrap(),
            1.3_f64.sin() / 1.3,
            epsilon = 1e-15
        );
    }

    #[test]
    fn j_vanishes_at_origin_for_positive_order() {
        for l in 1..=8 {
            assert_eq!(spherical_j(l, 0.0).unwrap(), 0.0);
        }
    }

    #[test]
    fn j1_vanishes_at_first_tan_root() {
        let oracle = tan_z_equals_z_root();
        // Frozen from the bisection oracle above.
        assert_abs_diff_eq!(oracle, 4.493409457909064, epsilon = 1e-13);
        assert!(spherical_j(1, 4.493409457909064).unwrap().abs() < 1e-12);
        assert!(spherical_j(1, oracle).unwrap().abs() < 1e-12);
    }

    #[test]
    fn n0_closed_form_values() {
        assert!(spherical_n(0, 0.5 * PI).unwrap().abs() < 1e-15);
        assert_abs_diff_eq!(spherical_n(0, PI).unwrap(), 1.0 / PI, epsilon = 1e-15);
    }

    #[test]
    fn n1_matches_independent_closed_form() {
        // n_1(x) = -cos x / x^2 - sin x / x evaluated directly at x = 1.
        let expected = -(1.0_f64.cos()) - 1.0_f64.sin();
        assert_abs_diff_eq!(spherical_n(1, 1.0).unwrap(), expected, epsilon = 1e-14);
        assert_abs_diff_eq!(expected, -1.3817732906760363, epsilon = 1e-12);
    }

    #[test]
    fn neumann_rejects_origin() {
        let err = spherical_n(2, 0.0).unwrap_err();
        assert!(matches!(err, Error::NeumannAtOrigin { l: 2 }));
        assert!(err.to_string().contains("diverges"));
    }

    #[test]
    fn j0_derivative_closed_form() {
        // j_0'(pi/2) = cos(pi/2)/x - sin(pi/2)/x^2 = -4/pi^2.
        let x = 0.5 * PI;
        assert_abs_diff_eq!(
            spherical_j_derivative(0, x).unwrap(),
            -4.0 / (PI * PI),
            epsilon = 1e-14
        );
        assert_abs_diff_eq!(spherical_j_derivative(0, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn n0_derivative_against_finite_difference() {
        let x = PI;
        let h = 1e-6;
        let fd = (spherical_n(0, x + h).unwrap() - spherical_n(0, x - h).unwrap()) / (2.0 * h);
        assert_abs_diff_eq!(spherical_n_derivative(0, x).unwrap(), fd, epsilon = 1e-9);
        // Closed form sin x/x + cos x/x^2 at pi is -1/pi^2.
        assert_abs_diff_eq!(
            spherical_n_derivative(0, PI).unwrap(),
            -1.0 / (PI * PI),
            epsilon = 1e-14
        );
    }

    #[test]
    fn recurrence_holds_for_both_families() {
        let xs = [0.5, 1.0, 2.5, 7.0, 13.0, 26.0, 50.0];
        for &x in &xs {
            for l in 1..=20u32 {
                let scale = |f: fn(u32, f64) -> Result<f64>| -> (f64, f64) {
                    let lhs = f(l - 1, x).unwrap() + f(l + 1, x).unwrap();
                    let rhs = (2.0 * l as f64 + 1.0) / x * f(l, x).unwrap();
                    (lhs, rhs)
                };
                let (jl, jr) = scale(spherical_j);
                assert_relative_eq!(jl, jr, max_relative = 1e-10, epsilon = 1e-300);
                let (nl, nr) = scale(spherical_n);
                assert_relative_eq!(nl, nr, max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn cross_product_wronskian() {
        // j_l(x) n_l'(x) - j_l'(x) n_l(x) = 1/x^2   (DLMF 10.50.2)
        let xs = [0.5, 1.0, 3.0, 9.0, 20.0, 50.0];
        for &x in &xs {
            for l in 0..=20u32 {
                let w = spherical_j(l, x).unwrap() * spherical_n_derivative(l, x).unwrap()
                    - spherical_j_derivative(l, x).unwrap() * spherical_n(l, x).unwrap();
                assert_relative_eq!(w, 1.0 / (x * x), max_relative = 1e-10);
            }
        }
    }

    #[test]
    fn derivatives_match_finite_differences_at_random_points() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0x5eed);
        for _ in 0..200 {
            let l = rng.gen_range(0..=10u32);
            let x = rng.gen_range(0.1..30.0f64);
            let h = 1e-5 * x.max(1.0);
            let fd_j =
                (spherical_j(l, x + h).unwrap() - spherical_j(l, x - h).unwrap()) / (2.0 * h);
            let dj = spherical_j_derivative(l, x).unwrap();
            assert_abs_diff_eq!(dj, fd_j, epsilon = 1e-7);
            // Neumann values blow up at small x and large l; compare on the
            // magnitude-normalized scale there.
            let fd_n =
                (spherical_n(l, x + h).unwrap() - spherical_n(l, x - h).unwrap()) / (2.0 * h);
            let dn = spherical_n_derivative(l, x).unwrap();
            let scale = dn.abs().max(1.0);
            assert!(
                ((dn - fd_n) / scale).abs() < 1e-6,
                "n_{l}'({x}) = {dn} vs fd {fd_n}"
            );
        }
    }

    #[test]
    fn series_and_recurrence_agree_near_the_cutoff() {
        // Just above the switch the public path uses recurrences; the series
        // truncation error there is far below both, so they must coincide.
        let x = 2e-3;
        for l in 0..=6u32 {
            assert_relative_eq!(
                spherical_j(l, x).unwrap(),
                j_series(l, x),
                max_relative = 1e-10
            );
            assert_relative_eq!(
                spherical_j_derivative(l, x).unwrap(),
                j_series_derivative(l, x),
                max_relative = 1e-8
            );
        }
    }

    #[test]
    fn riccati_forms_reduce_to_sine_and_cosine() {
        let x = 1.234;
        let (s, ds) = riccati_s(0, x).unwrap();
        assert_abs_diff_eq!(s, x.sin(), epsilon = 1e-15);
        assert_abs_diff_eq!(ds, x.cos(), epsilon = 1e-15);
        let (c, dc) = riccati_c(0, x).unwrap();
        assert_abs_diff_eq!(c, x.cos(), epsilon = 1e-15);
        assert_abs_diff_eq!(dc, -x.sin(), epsilon = 1e-15);
        // And for l = 1 against the assembled closed forms.
        let (s1, _) = riccati_s(1, x).unwrap();
        assert_abs_diff_eq!(s1, x.sin() / x - x.cos(), epsilon = 1e-14);
        let (c1, _) = riccati_c(1, x).unwrap();
        assert_abs_diff_eq!(c1, x.cos() / x + x.sin(), epsilon = 1e-14);
    }

    #[test]
    fn bessel_eval_bundles_value_and_derivative() {
        let e = BesselEval::first_kind(3, 2.0).unwrap();
        assert_eq!(e.l, 3);
        assert_abs_diff_eq!(e.value, spherical_j(3, 2.0).unwrap());
        assert_abs_diff_eq!(e.derivative, spherical_j_derivative(3, 2.0).unwrap());
        let e = BesselEval::second_kind(2, 0.7).unwrap();
        assert_abs_diff_eq!(e.value, spherical_n(2, 0.7).unwrap());
    }

    proptest::proptest! {
        // S_l' C_l - S_l C_l' = 1 everywhere; the two sides are computed
        // by unrelated recurrence directions, so agreement pins both.
        #[test]
        fn riccati_cross_product_is_unit(x in 0.3..50.0f64, l in 0..=12u32) {
            let (s, ds) = riccati_s(l, x).unwrap();
            let (c, dc) = riccati_c(l, x).unwrap();
            let w = ds * c - s * dc;
            proptest::prop_assert!(
                (w - 1.0).abs() <= 1e-10 * (1.0 + l as f64),
                "l={} x={}: wronskian {}", l, x, w
            );
        }
    }
}
