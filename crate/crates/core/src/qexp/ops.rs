//! Coefficient-level operators: Bol, Hecke, principal parts and the de Rham
//! pairing.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{QSeries, QSeriesError};
use crate::arith::factorial;

/// `D^{k+1} h` with `D = q d/dq`: `a_n -> n^{k+1} a_n`.
pub fn bol(h: &QSeries, k: u32) -> QSeries {
    h.map_coeffs(|n, c| c * BigInt::from(n).pow(k + 1))
}

/// `T_p f = sum_{n >= 1} (a_{pn} + p^{k+1} a_{n/p}) q^n` on a cusp form
/// expansion in weight `k + 2`. Output truncation is `floor(T / p)`.
pub fn hecke_tp(f: &QSeries, p: u64, k: u32) -> Result<QSeries, QSeriesError> {
    if f.valuation_bound() < 1 {
        let a0 = f.coeff(f.valuation_bound().max(0).min(f.truncation()))?;
        return Err(QSeriesError::NonCuspidal(a0));
    }
    Ok(hecke_formula(f, p, k, 1))
}

/// The same coefficient formula applied over all `n`, including negative
/// exponents of a Laurent expansion. Whether this represents the Hecke
/// action on de Rham classes is not established; used for experiments only.
pub fn hecke_tp_laurent(f: &QSeries, p: u64, k: u32) -> QSeries {
    let v = f.valuation_bound().min(0);
    hecke_formula(f, p, k, v * p as i64)
}

fn hecke_formula(f: &QSeries, p: u64, k: u32, lo: i64) -> QSeries {
    let p = p as i64;
    let t = f.truncation().div_euclid(p);
    let pk = BigRational::from_integer(BigInt::from(p).pow(k + 1));
    let terms = (lo..=t).map(|n| {
        let mut c = f.coeff_or_zero(n * p);
        if n % p == 0 {
            c += f.coeff_or_zero(n / p) * &pk;
        }
        (n, c)
    });
    QSeries::from_terms(terms.collect::<Vec<_>>(), t)
}

/// Coefficients of `q^n`, `n <= 0`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PrincipalPart {
    pub coeffs: BTreeMap<i64, BigRational>,
}

impl PrincipalPart {
    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }
}

/// Restriction of `f` to nonpositive exponents. Fails if `f` is not known
/// up to `q^0`.
pub fn principal_part(f: &QSeries) -> Result<PrincipalPart, QSeriesError> {
    if f.truncation() < 0 {
        return Err(QSeriesError::UnknownValuation(f.truncation()));
    }
    let coeffs = f
        .terms()
        .take_while(|(n, _)| *n <= 0)
        .map(|(n, c)| (n, c.clone()))
        .collect();
    Ok(PrincipalPart { coeffs })
}

/// `<f, g> = k! sum_{n != 0} a_n(f) a_{-n}(g) / n^{k+1}`.
///
/// Needs `a_0(f) = 0` and enough of both expansions to see every nonzero
/// cross term: `T(f) >= -v(g)` and `T(g) >= -v(f)`.
pub fn de_rham_pairing(f: &QSeries, g: &QSeries, k: u32) -> Result<BigRational, QSeriesError> {
    let (vf, vg) = (f.valuation_bound(), g.valuation_bound());
    if f.truncation() < -vg || g.truncation() < -vf {
        return Err(QSeriesError::InsufficientTruncation {
            need_f: -vg,
            have_f: f.truncation(),
            need_g: -vf,
            have_g: g.truncation(),
        });
    }
    if f.truncation() >= 0 {
        let a0 = f.coeff_or_zero(0);
        if !a0.is_zero() {
            return Err(QSeriesError::NonCuspidal(a0));
        }
    }
    let mut acc = BigRational::zero();
    for (n, a) in f.terms() {
        if n == 0 || -n < vg {
            continue;
        }
        if -n > g.truncation() {
            break;
        }
        let b = g.coeff_or_zero(-n);
        if b.is_zero() {
            continue;
        }
        let denom = BigInt::from(n).pow(k + 1);
        acc += a * b / denom;
    }
    Ok(acc * BigRational::from_integer(factorial(k).into()))
}

/// `-sum_{n >= 1} a_n(f) a_{-n}(h)`, the closed form of `<f, D^{k+1} h>`
/// without the factor `k!`.
pub fn bol_cross_sum(f: &QSeries, h: &QSeries) -> BigRational {
    let mut acc = BigRational::zero();
    for (n, a) in f.terms() {
        if n >= 1 {
            acc -= a * h.coeff_or_zero(-n);
        }
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::super::{delta, eisenstein, eta_quotient, int, j_invariant};
    use super::*;

    #[test]
    fn bol_examples() {
        let h = QSeries::from_integers(-1, &[1], 3);
        assert_eq!(bol(&h, 0), QSeries::from_integers(-1, &[-1], 3));
        assert!(bol(&QSeries::one(5), 6).is_zero());
        let minus_j = -&j_invariant(3);
        let p = bol(&minus_j, 0);
        assert_eq!(
            p,
            QSeries::from_integers(-1, &[1, 0, -196884, -42987520, -2592899910], 3)
        );
    }

    #[test]
    fn hecke_on_delta_and_level_eleven() {
        let d = delta(40);
        assert_eq!(hecke_tp(&d, 2, 10).unwrap(), d.scalar_mul(&int(-24)).truncate(20));
        let f = eta_quotient(&[(1, 2), (11, 2)], 40).unwrap();
        assert_eq!(hecke_tp(&f, 2, 0).unwrap(), f.scalar_mul(&int(-2)).truncate(20));
        assert!(hecke_tp(&QSeries::zero(10), 3, 10).unwrap().is_zero());
        assert!(hecke_tp(&j_invariant(10), 2, 0).is_err());
    }

    #[test]
    fn principal_parts() {
        let f = QSeries::from_integers(-2, &[1, 0, 3, 1], 1);
        let pp = principal_part(&f).unwrap();
        assert_eq!(pp.coeffs.len(), 2);
        assert_eq!(pp.coeffs[&-2], int(1));
        assert_eq!(pp.coeffs[&0], int(3));
        assert!(principal_part(&delta(5)).unwrap().is_empty());
        let jp = principal_part(&j_invariant(2)).unwrap();
        assert_eq!(jp.coeffs.into_iter().collect::<Vec<_>>(), vec![(-1, int(1)), (0, int(744))]);
        assert!(principal_part(&QSeries::from_integers(-3, &[1], -2)).is_err());
    }

    #[test]
    fn bol_image_pairs_to_zero_with_delta() {
        let t = 6;
        let e4 = eisenstein(4, t + 4).unwrap();
        let e6 = eisenstein(6, t + 4).unwrap();
        let h = (&(&e4 * &e4) * &e6).div(&delta(t + 4).pow(2).unwrap()).unwrap();
        assert_eq!(h.coeff(-2).unwrap(), int(1));
        assert_eq!(h.coeff(-1).unwrap(), int(24));
        let d = delta(t);
        let dh = bol(&h, 10);
        assert_eq!(de_rham_pairing(&d, &dh, 10).unwrap(), int(0));
        assert_eq!(bol_cross_sum(&d, &h), int(0));
    }

    #[test]
    fn pairing_preconditions() {
        let f = QSeries::from_integers(-2, &[1], 0);
        let g = QSeries::from_integers(1, &[1, 1], 1);
        assert!(matches!(
            de_rham_pairing(&f, &g, 0),
            Err(QSeriesError::InsufficientTruncation { .. })
        ));
        let f0 = QSeries::from_integers(0, &[1, 1], 3);
        assert!(matches!(de_rham_pairing(&f0, &g, 0), Err(QSeriesError::NonCuspidal(_))));
        let d = delta(5);
        assert_eq!(de_rham_pairing(&d, &d, 10).unwrap(), int(0));
    }
}
