//! Eta quotients, Eisenstein series, `Delta` and `j`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::Zero;

use super::{int, QSeries, QSeriesError};
use crate::arith::divisor_sigma;

/// One factor `eta(d tau)^r` of an eta quotient.
pub type EtaFactor = (u32, i32);

/// `prod_{n >= 1} (1 - q^{d n})` to `truncation`, from Euler's pentagonal
/// number theorem `sum_k (-1)^k q^{d k (3k - 1) / 2}`.
pub fn euler_product(d: u32, truncation: i64) -> QSeries {
    let d = d as i64;
    let mut terms = Vec::new();
    if truncation >= 0 {
        terms.push((0, int(1)));
    }
    for k in 1i64.. {
        let p1 = d * k * (3 * k - 1) / 2;
        if p1 > truncation {
            break;
        }
        let sign = if k % 2 == 0 { 1 } else { -1 };
        terms.push((p1, int(sign)));
        let p2 = d * k * (3 * k + 1) / 2;
        if p2 <= truncation {
            terms.push((p2, int(sign)));
        }
    }
    QSeries::from_terms(terms, truncation)
}

/// `prod_d eta(d tau)^{r_d}` expanded to `truncation`.
///
/// Requires `sum d r_d` divisible by 24 so the overall power of `q` is an
/// integer.
pub fn eta_quotient(factors: &[EtaFactor], truncation: i64) -> Result<QSeries, QSeriesError> {
    let weighted: i64 = factors.iter().map(|&(d, r)| d as i64 * r as i64).sum();
    if weighted % 24 != 0 {
        return Err(QSeriesError::NonIntegralPrefactor {
            numerator: weighted,
        });
    }
    let shift = weighted / 24;
    let rel = truncation - shift;
    if rel < 0 {
        return Ok(QSeries::zero(truncation));
    }
    let mut acc = QSeries::one(rel);
    for &(d, r) in factors {
        if r == 0 {
            continue;
        }
        let e = euler_product(d, rel).pow(r as i64)?;
        acc = &acc * &e;
    }
    Ok(acc.shift(shift))
}

/// Order of vanishing of an eta quotient on `Gamma_0(level)` at the cusp
/// `1/c`, `c | level`, measured in the local parameter of that cusp:
/// `(level / 24) sum_d gcd(c, d)^2 r_d / (gcd(c, level / c) c d)`.
pub fn eta_order_at_cusp(factors: &[EtaFactor], level: u64, c: u64) -> BigRational {
    assert!(level.is_multiple_of(c), "{c} does not divide {level}");
    let mut acc = BigRational::zero();
    for &(d, r) in factors {
        let d = d as u64;
        let g = c.gcd(&d);
        acc += BigRational::new(BigInt::from(g * g) * r, BigInt::from(d));
    }
    let width = c.gcd(&(level / c));
    acc * BigRational::new(BigInt::from(level), BigInt::from(24 * width * c))
}

/// Normalised Eisenstein series `E_2`, `E_4` or `E_6`.
pub fn eisenstein(weight: u32, truncation: i64) -> Result<QSeries, QSeriesError> {
    let scale: i64 = match weight {
        2 => -24,
        4 => 240,
        6 => -504,
        _ => return Err(QSeriesError::UnsupportedWeight(weight)),
    };
    let mut terms = vec![(0, int(1))];
    for n in 1..=truncation.max(0) {
        let s = BigInt::from(divisor_sigma(weight - 1, n as u64));
        terms.push((n, BigRational::from_integer(s * scale)));
    }
    Ok(QSeries::from_terms(terms, truncation))
}

/// `Delta = eta^24 = q prod (1 - q^n)^24`.
pub fn delta(truncation: i64) -> QSeries {
    eta_quotient(&[(1, 24)], truncation).expect("24 is divisible by 24")
}

/// `j = E_4^3 / Delta`, valuation -1.
pub fn j_invariant(truncation: i64) -> QSeries {
    let t = truncation + 2;
    let e4 = eisenstein(4, t).expect("weight 4 is supported");
    let num = e4.pow(3).expect("nonnegative power");
    num.div(&delta(t))
        .expect("Delta is nonzero")
        .truncate(truncation)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn delta_coefficients() {
        let d = delta(6);
        let tau = [0, 1, -24, 252, -1472, 4830, -6048];
        for (n, t) in tau.iter().enumerate().skip(1) {
            assert_eq!(d.coeff(n as i64).unwrap(), int(*t));
        }
        assert_eq!(d.valuation(), Some(1));
    }

    #[test]
    fn level_eleven_eta_product() {
        let f = eta_quotient(&[(1, 2), (11, 2)], 10).unwrap();
        let expect = [1, -2, -1, 2, 1, 2, -2, 0, -2, -2];
        for (i, a) in expect.iter().enumerate() {
            assert_eq!(f.coeff(i as i64 + 1).unwrap(), int(*a));
        }
    }

    #[test]
    fn non_integral_prefactor() {
        assert_eq!(
            eta_quotient(&[(1, 1)], 5),
            Err(QSeriesError::NonIntegralPrefactor { numerator: 1 })
        );
    }

    #[test]
    fn eisenstein_coefficients() {
        assert_eq!(eisenstein(4, 3).unwrap().coeff(1).unwrap(), int(240));
        assert_eq!(eisenstein(2, 3).unwrap().coeff(1).unwrap(), int(-24));
        assert_eq!(eisenstein(6, 3).unwrap().coeff(2).unwrap(), int(-16632));
        assert!(eisenstein(8, 3).is_err());
    }

    #[test]
    fn j_coefficients() {
        let j = j_invariant(3);
        assert_eq!(j.valuation(), Some(-1));
        assert_eq!(j.coeff(-1).unwrap(), int(1));
        assert_eq!(j.coeff(0).unwrap(), int(744));
        assert_eq!(j.coeff(1).unwrap(), int(196884));
        assert_eq!(j.coeff(2).unwrap(), int(21493760));
        assert_eq!(j.coeff(3).unwrap(), int(864299970));
        assert_eq!(j.truncation(), 3);
    }

    #[test]
    fn eisenstein_cubes_minus_squares() {
        let t = 30;
        let e4 = eisenstein(4, t).unwrap();
        let e6 = eisenstein(6, t).unwrap();
        let lhs = &e4.pow(3).unwrap() - &e6.pow(2).unwrap();
        assert_eq!(lhs, delta(t).scalar_mul(&int(1728)));
    }

    #[test]
    fn cusp_orders_of_delta_and_level_eleven_form() {
        // Delta vanishes to order 1 at the unique cusp.
        assert_eq!(eta_order_at_cusp(&[(1, 24)], 1, 1), int(1));
        // eta(tau)^2 eta(11 tau)^2 vanishes to order 1 at both cusps.
        let f = [(1, 2), (11, 2)];
        assert_eq!(eta_order_at_cusp(&f, 11, 1), int(1));
        assert_eq!(eta_order_at_cusp(&f, 11, 11), int(1));
    }
}
