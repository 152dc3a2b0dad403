//! J- and I-Bessel functions of positive integer order for real arguments.
//!
//! Small arguments use the ascending series. The alternating J series loses
//! roughly `log10(I_nu(x) / |J_nu(x)|)` digits, so it is only used while
//! `x^2/4 <= max(9, nu + 1)`; the I series has no cancellation and is used up
//! to `x = max(12, 2 nu)`. Larger arguments go through Miller's backward
//! recurrence, normalised by `J_0 + 2 sum J_2k = 1` and
//! `I_0 + 2 sum I_k = e^x` respectively.

use thiserror::Error;

use crate::arith::KahanSum;

/// Largest argument accepted by [`bessel_j`].
pub const J_MAX_ARG: f64 = 1e4;
/// Largest argument accepted by [`bessel_i`]; `e^x` overflows shortly after.
pub const I_MAX_ARG: f64 = 700.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum BesselError {
    #[error("order must be at least 1, got {0}")]
    UnsupportedOrder(u32),
    #[error("argument {x} outside the supported range [0, {max}]")]
    ArgumentOutOfRange { x: f64, max: f64 },
}

fn check(order: u32, x: f64, max: f64) -> Result<(), BesselError> {
    if order == 0 {
        return Err(BesselError::UnsupportedOrder(order));
    }
    if !(0.0..=max).contains(&x) {
        return Err(BesselError::ArgumentOutOfRange { x, max });
    }
    Ok(())
}

fn j_use_series(order: u32, x: f64) -> bool {
    0.25 * x * x <= f64::max(9.0, order as f64 + 1.0)
}

fn i_use_series(order: u32, x: f64) -> bool {
    x <= f64::max(12.0, 2.0 * order as f64)
}

/// `sum_j s^j (x/2)^{nu+2j} / (j! (nu+j)!)` with `s = -1` for J and `+1` for I.
fn ascending_series(order: u32, x: f64, sign: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for i in 1..=order {
        term *= half / i as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = sign * half * half;
    let mut sum = KahanSum::new();
    sum.add(term);
    let mut scale = term.abs();
    for j in 1..500u32 {
        term *= q / (j as f64 * (order + j) as f64);
        sum.add(term);
        scale = scale.max(term.abs());
        if term.abs() <= 1e-18 * sum.value().abs() && term.abs() <= 1e-18 * scale {
            break;
        }
    }
    sum.value()
}

fn miller_start(order: u32, x: f64) -> u32 {
    let n = f64::max(order as f64, x);
    let m = (n + 30.0 + (40.0 * n).sqrt()) as u32;
    m + (m & 1)
}

fn miller_j(order: u32, x: f64) -> f64 {
    const BIG: f64 = 1e250;
    let m = miller_start(order, x);
    let two_over_x = 2.0 / x;
    let mut next = 0.0; // J_{k+1}
    let mut cur = 1e-300; // J_k, k = m
    let mut norm = if m.is_multiple_of(2) { 2.0 * cur } else { 0.0 };
    let mut result = if m == order { cur } else { 0.0 };
    for k in (1..=m).rev() {
        let prev = k as f64 * two_over_x * cur - next;
        next = cur;
        cur = prev;
        let idx = k - 1;
        if idx == order {
            result = cur;
        }
        if idx == 0 {
            norm += cur;
        } else if idx % 2 == 0 {
            norm += 2.0 * cur;
        }
        if cur.abs() > BIG {
            cur /= BIG;
            next /= BIG;
            norm /= BIG;
            result /= BIG;
        }
    }
    result / norm
}

fn miller_i(order: u32, x: f64) -> f64 {
    const BIG: f64 = 1e250;
    let m = order.max((x + 30.0 + (80.0 * x).sqrt()) as u32 + order);
    let two_over_x = 2.0 / x;
    let mut next = 0.0;
    let mut cur = 1e-300;
    let mut norm = 2.0 * cur;
    let mut result = if m == order { cur } else { 0.0 };
    for k in (1..=m).rev() {
        let prev = k as f64 * two_over_x * cur + next;
        next = cur;
        cur = prev;
        let idx = k - 1;
        if idx == order {
            result = cur;
        }
        norm += if idx == 0 { cur } else { 2.0 * cur };
        if cur.abs() > BIG {
            cur /= BIG;
            next /= BIG;
            norm /= BIG;
            result /= BIG;
        }
    }
    (x + (result / norm).ln()).exp()
}

/// Bessel function of the first kind `J_nu(x)`, `nu >= 1`, `0 <= x <= 1e4`.
pub fn bessel_j(order: u32, x: f64) -> Result<f64, BesselError> {
    check(order, x, J_MAX_ARG)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(if j_use_series(order, x) {
        ascending_series(order, x, -1.0)
    } else {
        miller_j(order, x)
    })
}

/// Modified Bessel function `I_nu(x)`, `nu >= 1`, `0 <= x <= 700`.
pub fn bessel_i(order: u32, x: f64) -> Result<f64, BesselError> {
    check(order, x, I_MAX_ARG)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    Ok(if i_use_series(order, x) {
        ascending_series(order, x, 1.0)
    } else {
        miller_i(order, x)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn tiny_argument_is_leading_term() {
        assert!(rel(bessel_j(1, 1e-8).unwrap(), 5e-9) < 1e-2);
        assert!(rel(bessel_i(1, 1e-8).unwrap(), 5e-9) < 1e-2);
    }

    #[test]
    fn reference_values_at_one() {
        assert!(rel(bessel_j(1, 1.0).unwrap(), 0.440_050_585_744_933_5) < 1e-12);
        assert!(rel(bessel_i(1, 1.0).unwrap(), 0.565_159_103_992_485) < 1e-12);
    }

    #[test]
    fn three_term_recurrence_at_two() {
        let (j2, j3, j4) = (
            bessel_j(2, 2.0).unwrap(),
            bessel_j(3, 2.0).unwrap(),
            bessel_j(4, 2.0).unwrap(),
        );
        assert!((j2 + j4 - 3.0 * j3).abs() < 1e-10);
    }

    #[test]
    fn branches_agree_at_crossover() {
        for order in [1u32, 3, 11] {
            let x = 2.0 * f64::max(9.0, order as f64 + 1.0).sqrt();
            let s = ascending_series(order, x, -1.0);
            let m = miller_j(order, x);
            assert!(rel(m, s) < 1e-12, "J{order}: {s} vs {m}");
            let x = f64::max(12.0, 2.0 * order as f64);
            let s = ascending_series(order, x, 1.0);
            let m = miller_i(order, x);
            assert!(rel(m, s) < 1e-12, "I{order}: {s} vs {m}");
        }
    }

    #[test]
    fn large_arguments() {
        // mpmath, 30 digits
        assert!(rel(bessel_j(11, 22.0).unwrap(), 0.164_125_423_001_344_68) < 1e-11);
        assert!(rel(bessel_i(11, 22.0).unwrap(), 19_512_329.450_061_98) < 1e-11);
        assert!(rel(bessel_j(1, 100.0).unwrap(), -0.077_145_352_014_112_158) < 1e-10);
        assert!(rel(bessel_j(3, 5000.0).unwrap(), 0.009_122_721_983_477_489_8) < 1e-9);
    }

    #[test]
    fn range_guards() {
        assert!(bessel_j(0, 1.0).is_err());
        assert!(bessel_j(1, -1.0).is_err());
        assert!(bessel_j(1, 2e4).is_err());
        assert!(bessel_i(1, 701.0).is_err());
        assert!(bessel_i(1, f64::NAN).is_err());
    }
}
