//! Positive zeros of the spherical Bessel functions of the first kind.

use std::f64::consts::PI;

use crate::eigensolver::roots::brent;
use crate::error::{Error, Result};
use crate::specfun::spherical_j;

/// The first `n_max` positive zeros of `j_l`, ascending.
///
/// The `l = 0` ladder is exact: `j_0 = sin x / x` vanishes at multiples of
/// pi. Each higher order is obtained by Brent refinement inside brackets
/// formed by consecutive zeros of the order below; interlacing guarantees
/// exactly one zero per bracket, so none can be missed or duplicated.
pub fn bessel_zeros(l: u32, n_max: u32) -> Result<Vec<f64>> {
    let need = n_max as usize;
    let mut ladder: Vec<f64> = (1..=need + l as usize).map(|m| m as f64 * PI).collect();
    for order in 1..=l {
        let mut next = Vec::with_capacity(ladder.len().saturating_sub(1));
        for w in ladder.windows(2) {
            let z = brent(
                |x| spherical_j(order, x).expect("argument is positive"),
                w[0],
                w[1],
                1e-15 * w[1],
                100,
            )?;
            next.push(z);
        }
        ladder = next;
    }
    ladder.truncate(need);
    Ok(ladder)
}

/// The n-th positive zero of `j_l`, `n >= 1`.
pub fn bessel_zero(l: u32, n: u32) -> Result<f64> {
    if n == 0 {
        return Err(Error::invalid("zero indices start at n = 1".to_string()));
    }
    Ok(bessel_zeros(l, n)?[n as usize - 1])
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn s_wave_zeros_are_multiples_of_pi() {
        let zs = bessel_zeros(0, 4).unwrap();
        for (i, z) in zs.iter().enumerate() {
            assert_eq!(*z, (i as f64 + 1.0) * PI);
        }
        assert_relative_eq!(bessel_zero(0, 3).unwrap(), 3.0 * PI);
    }

    #[test]
    fn first_p_wave_zero_matches_the_tan_root() {
        // Independent value: the first positive solution of tan z = z,
        // frozen from a bisection on (pi, 3 pi / 2).
        let z = bessel_zero(1, 1).unwrap();
        assert!((z - 4.493409457909064).abs() < 1e-12);
    }

    #[test]
    fn reported_zeros_are_zeros() {
        for l in 0..=10u32 {
            for (n, z) in bessel_zeros(l, 6).unwrap().iter().enumerate() {
                let j = spherical_j(l, *z).unwrap();
                assert!(j.abs() < 1e-13, "j_{l} at claimed zero {n}: {z} gives {j}");
            }
        }
    }

    #[test]
    fn zeros_interlace_between_consecutive_orders() {
        for l in 0..=10u32 {
            let low = bessel_zeros(l, 11).unwrap();
            let high = bessel_zeros(l + 1, 10).unwrap();
            for n in 0..10 {
                assert!(
                    low[n] < high[n] && high[n] < low[n + 1],
                    "interlacing broken at l={l}, n={}",
                    n + 1
                );
            }
        }
    }

    #[test]
    fn index_zero_is_rejected() {
        assert!(bessel_zero(3, 0).is_err());
        assert!(bessel_zeros(3, 0).unwrap().is_empty());
    }
}
