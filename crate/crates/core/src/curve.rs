//! Weierstrass models of elliptic curves over Q: invariants, point counts
//! over prime fields, and the modular parametrisation `x(q)` of `X_0(N)`.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::arith::{factorize, is_prime};
use crate::qexp::{QSeries, QSeriesError};

/// `y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeierstrassModel {
    pub a1: i64,
    pub a2: i64,
    pub a3: i64,
    pub a4: i64,
    pub a6: i64,
}

impl WeierstrassModel {
    pub const fn new(a1: i64, a2: i64, a3: i64, a4: i64, a6: i64) -> Self {
        Self { a1, a2, a3, a4, a6 }
    }

    pub fn b2(&self) -> i128 {
        (self.a1 * self.a1 + 4 * self.a2) as i128
    }

    pub fn b4(&self) -> i128 {
        (2 * self.a4 + self.a1 * self.a3) as i128
    }

    pub fn b6(&self) -> i128 {
        (self.a3 * self.a3 + 4 * self.a6) as i128
    }

    pub fn b8(&self) -> i128 {
        let (a1, a2, a3, a4, a6) = (
            self.a1 as i128,
            self.a2 as i128,
            self.a3 as i128,
            self.a4 as i128,
            self.a6 as i128,
        );
        a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    }

    pub fn c4(&self) -> i128 {
        let b2 = self.b2();
        b2 * b2 - 24 * self.b4()
    }

    pub fn c6(&self) -> i128 {
        let (b2, b4, b6) = (self.b2(), self.b4(), self.b6());
        -b2 * b2 * b2 + 36 * b2 * b4 - 216 * b6
    }

    pub fn discriminant(&self) -> i128 {
        let (b2, b4, b6, b8) = (self.b2(), self.b4(), self.b6(), self.b8());
        -b2 * b2 * b8 - 8 * b4 * b4 * b4 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    }

    pub fn is_singular(&self) -> bool {
        self.discriminant() == 0
    }

    /// `j = c4^3 / Delta`; `None` for singular models.
    pub fn j_invariant(&self) -> Option<BigRational> {
        let d = self.discriminant();
        if d == 0 {
            return None;
        }
        let c4 = BigInt::from(self.c4());
        Some(BigRational::new(&c4 * &c4 * &c4, BigInt::from(d)))
    }

    /// Number of projective points of the reduction modulo the prime `p`,
    /// the point at infinity included (singular reductions too).
    pub fn count_points(&self, p: u64) -> u64 {
        assert!(is_prime(p), "{p} is not prime");
        let p = p as i64;
        let m = |x: i64| x.rem_euclid(p);
        let (a1, a2, a3, a4, a6) = (m(self.a1), m(self.a2), m(self.a3), m(self.a4), m(self.a6));
        let mut count = 1u64;
        for x in 0..p {
            let rhs = m(m(m(x * x) * x) + m(a2 * m(x * x)) + m(a4 * x) + a6);
            for y in 0..p {
                if m(m(y * y) + m(a1 * m(x * y)) + m(a3 * y)) == rhs {
                    count += 1;
                }
            }
        }
        count
    }

    /// `a_p = p + 1 - #E(F_p)` for a minimal model; this also gives 0, 1, -1
    /// at additive, split and non-split multiplicative primes.
    pub fn trace_of_frobenius(&self, p: u64) -> i64 {
        p as i64 + 1 - self.count_points(p) as i64
    }

    /// Fourier coefficients `a_1..=a_{n_max}` of the weight-2 newform attached
    /// to the curve, from point counts and the Hecke recursion. `level` is the
    /// conductor.
    pub fn newform_coefficients(&self, level: u64, n_max: usize) -> Vec<i64> {
        let mut a = vec![0i64; n_max + 1];
        if n_max >= 1 {
            a[1] = 1;
        }
        for n in 2..=n_max as u64 {
            let fac = factorize(n);
            if fac.len() > 1 {
                a[n as usize] = fac
                    .iter()
                    .map(|&(p, e)| a[p.pow(e) as usize])
                    .product();
                continue;
            }
            let (p, e) = fac[0];
            a[n as usize] = if e == 1 {
                self.trace_of_frobenius(p)
            } else {
                let ap = a[p as usize];
                let bad = level.is_multiple_of(p);
                let prev = a[p.pow(e - 1) as usize];
                let prev2 = a[p.pow(e - 2) as usize];
                if bad {
                    ap * prev
                } else {
                    ap * prev - p as i64 * prev2
                }
            };
        }
        a
    }

    /// `g2 = c4 / 12` and `g3 = c6 / 216` of the lattice `Z omega_1 + Z omega_2`
    /// attached to the model, so that `x = wp - b2/12`.
    pub fn g2_g3(&self) -> (BigRational, BigRational) {
        (
            BigRational::new(self.c4().into(), 12.into()),
            BigRational::new(self.c6().into(), 216.into()),
        )
    }
}

impl fmt::Display for WeierstrassModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[{}, {}, {}, {}, {}]",
            self.a1, self.a2, self.a3, self.a4, self.a6
        )
    }
}

/// Coefficients `c_k` of `wp(z) = z^-2 + sum_{k >= 2} c_k z^{2k - 2}`,
/// returned as `(c_2, ..., c_{k_max})`.
pub fn weierstrass_p_laurent(
    g2: &BigRational,
    g3: &BigRational,
    k_max: usize,
) -> Vec<BigRational> {
    let mut c = vec![BigRational::zero(); k_max + 1];
    if k_max >= 2 {
        c[2] = g2 / BigRational::from_integer(20.into());
    }
    if k_max >= 3 {
        c[3] = g3 / BigRational::from_integer(28.into());
    }
    for k in 4..=k_max {
        let mut s = BigRational::zero();
        for m in 2..=k - 2 {
            s += &c[m] * &c[k - m];
        }
        let denom = BigInt::from((2 * k + 1) * (k - 3));
        c[k] = s * BigRational::new(3.into(), denom);
    }
    c.drain(..2);
    c
}

/// `x(q)` and `y(q)` of the modular parametrisation, from the weight-2
/// newform `f` of the curve: `z(q) = sum a_n q^n / n`,
/// `x = wp(z) - b2/12`, `2y + a1 x + a3 = q (dx/dq) / f`.
///
/// Both come back known to `T(f) - 3` (for `x`) and `T(f) - 4` (for `y`).
pub fn modular_parametrization(
    model: &WeierstrassModel,
    f: &QSeries,
) -> Result<(QSeries, QSeries), QSeriesError> {
    let tf = f.truncation();
    let z = f.map_coeffs(|n, c| c / BigRational::from_integer(n.into()));
    let z2 = &z * &z;
    let tx = tf - 3;
    let mut x = z2.invert()?.truncate(tx);
    let (g2, g3) = model.g2_g3();
    let k_max = (tx / 2 + 2).max(2) as usize;
    let c = weierstrass_p_laurent(&g2, &g3, k_max);
    // c[i] multiplies z^{2i + 2}
    let mut zpow = z2.truncate(tx);
    for ci in &c {
        if zpow.valuation_bound() > tx {
            break;
        }
        x = &x + &zpow.scalar_mul(ci).truncate(tx);
        zpow = &zpow * &z2.truncate(tx);
    }
    let b2 = BigRational::new(model.b2().into(), 12.into());
    x = &x - &QSeries::one(tx).scalar_mul(&b2);
    let dx = x.map_coeffs(|n, c| c * BigRational::from_integer(n.into()));
    let two_y_plus = dx.div(f)?;
    let a1 = BigRational::from_integer(model.a1.into());
    let a3 = BigRational::from_integer(model.a3.into());
    let rest = &(&two_y_plus - &x.scalar_mul(&a1)) - &QSeries::one(tx).scalar_mul(&a3);
    let y = rest.scalar_mul(&BigRational::new(1.into(), 2.into()));
    Ok((x, y))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qexp::eta_quotient;

    const X011: WeierstrassModel = WeierstrassModel::new(0, -1, 1, -10, -20);

    #[test]
    fn level_eleven_invariants() {
        assert_eq!(X011.b2(), -4);
        assert_eq!(X011.discriminant(), -161051);
        assert_eq!(X011.c4(), 496);
        assert_eq!(X011.c6(), 20008);
    }

    #[test]
    fn point_counts_match_eta_product() {
        let f = eta_quotient(&[(1, 2), (11, 2)], 40).unwrap();
        let a = X011.newform_coefficients(11, 40);
        for n in 1..=40 {
            assert_eq!(f.coeff(n).unwrap(), BigRational::from_integer(a[n as usize].into()));
        }
    }

    #[test]
    fn laurent_series_of_wp() {
        let g2 = BigRational::from_integer(3.into());
        let g3 = BigRational::from_integer(5.into());
        let c = weierstrass_p_laurent(&g2, &g3, 4);
        assert_eq!(c[0], BigRational::new(3.into(), 20.into()));
        assert_eq!(c[1], BigRational::new(5.into(), 28.into()));
        assert_eq!(c[2], BigRational::new(9.into(), 1200.into()));
    }

    #[test]
    fn parametrisation_lies_on_the_curve() {
        let f = eta_quotient(&[(1, 2), (11, 2)], 30).unwrap();
        let (x, y) = modular_parametrization(&X011, &f).unwrap();
        assert_eq!(x.valuation(), Some(-2));
        assert_eq!(y.valuation(), Some(-3));
        let lhs = &(&(&y * &y) + &(&x * &y).scalar_mul(&BigRational::from_integer(X011.a1.into())))
            + &y.scalar_mul(&BigRational::from_integer(X011.a3.into()));
        let cst = |v: i64| BigRational::from_integer(v.into());
        let x2 = &x * &x;
        let rhs = &(&(&(&x2 * &x) + &x2.scalar_mul(&cst(X011.a2))) + &x.scalar_mul(&cst(X011.a4)))
            + &QSeries::one(40).scalar_mul(&cst(X011.a6));
        let t = lhs.truncation().min(rhs.truncation());
        assert!(t >= 10);
        assert_eq!(lhs.truncate(t), rhs.truncate(t));
        // x f is the weight-2 dual form: simple pole, vanishing constant term.
        let g = &x * &f;
        assert_eq!(g.coeff(-1).unwrap(), cst(1));
        assert_eq!(g.coeff(0).unwrap(), cst(0));
    }
}
