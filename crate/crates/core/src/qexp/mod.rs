//! Truncated Laurent series in `q` with exact rational coefficients.
//!
//! A [`QSeries`] stores every coefficient from its valuation up to its
//! truncation `T`; coefficients above `T` are unknown and reading them is an
//! error. Products and inverses shrink `T` to what the operands certify.

mod dual;
mod eta;
mod ops;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

pub use dual::{
    dual_form_from_hauptmodul, dual_form_level1, hauptmodul, hauptmodul_eta_factors,
    HAUPTMODUL_LEVELS,
};
pub(crate) use dual::level_one_monomial;
pub use eta::{
    delta, eisenstein, eta_order_at_cusp, eta_quotient, euler_product, j_invariant, EtaFactor,
};
pub use ops::{
    bol, bol_cross_sum, de_rham_pairing, hecke_tp, hecke_tp_laurent, principal_part,
    PrincipalPart,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum QSeriesError {
    #[error("cannot invert a series that is zero up to its truncation")]
    ZeroInverse,
    #[error("coefficient of q^{n} requested but the series is only known up to q^{truncation}")]
    TruncationExceeded { n: i64, truncation: i64 },
    #[error("eta quotient prefactor {numerator}/24 is not an integer")]
    NonIntegralPrefactor { numerator: i64 },
    #[error("unsupported Eisenstein weight {0}")]
    UnsupportedWeight(u32),
    #[error("valuation is masked by truncation at q^{0}")]
    UnknownValuation(i64),
    #[error("pairing needs a_0(f) = 0, found {0}")]
    NonCuspidal(BigRational),
    #[error("pairing is not certified finite: need T(f) >= {need_f} (have {have_f}) and T(g) >= {need_g} (have {have_g})")]
    InsufficientTruncation {
        need_f: i64,
        have_f: i64,
        need_g: i64,
        have_g: i64,
    },
    #[error("no normalised dual form: weight {weight} at level {level} is not a supported rank-two case")]
    NoDualForm { level: u64, weight: u32 },
    #[error("linear system for the dual form is singular")]
    Singular,
}

/// `sum_{n = v}^{T} a_n q^n + O(q^{T+1})` with exact rational `a_n`.
#[derive(Clone, PartialEq, Eq)]
pub struct QSeries {
    start: i64,
    coeffs: Vec<BigRational>,
    truncation: i64,
}

impl QSeries {
    /// Builds a series whose coefficient list begins at `q^start`, known up to
    /// `q^truncation`. Leading zeros are stripped and entries past the
    /// truncation are dropped; missing entries below it are zero.
    pub fn new(start: i64, coeffs: Vec<BigRational>, truncation: i64) -> Self {
        let mut coeffs = coeffs;
        let keep = (truncation - start + 1).max(0) as usize;
        coeffs.truncate(keep);
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => Self::zero(truncation),
            Some(i) => {
                coeffs.drain(..i);
                coeffs.resize(keep - i, BigRational::zero());
                Self {
                    start: start + i as i64,
                    coeffs,
                    truncation,
                }
            }
        }
    }

    pub fn from_integers(start: i64, coeffs: &[i64], truncation: i64) -> Self {
        Self::new(
            start,
            coeffs.iter().map(|&c| BigRational::from_integer(c.into())).collect(),
            truncation,
        )
    }

    /// Builds from `(exponent, coefficient)` pairs; absent exponents are zero.
    pub fn from_terms<I>(terms: I, truncation: i64) -> Self
    where
        I: IntoIterator<Item = (i64, BigRational)>,
    {
        let terms: Vec<_> = terms.into_iter().filter(|(n, _)| *n <= truncation).collect();
        let Some(lo) = terms.iter().map(|(n, _)| *n).min() else {
            return Self::zero(truncation);
        };
        let mut coeffs = vec![BigRational::zero(); (truncation - lo + 1) as usize];
        for (n, c) in terms {
            coeffs[(n - lo) as usize] += c;
        }
        Self::new(lo, coeffs, truncation)
    }

    /// The zero series known up to `q^truncation`.
    pub fn zero(truncation: i64) -> Self {
        Self {
            start: truncation + 1,
            coeffs: Vec::new(),
            truncation,
        }
    }

    pub fn one(truncation: i64) -> Self {
        Self::monomial(0, BigRational::one(), truncation)
    }

    pub fn monomial(n: i64, c: BigRational, truncation: i64) -> Self {
        Self::from_terms([(n, c)], truncation)
    }

    /// Truncation `T`: coefficients are known for exponents `<= T`.
    pub fn truncation(&self) -> i64 {
        self.truncation
    }

    /// Exponent of the first nonzero coefficient, `None` if the series is zero
    /// up to its truncation.
    pub fn valuation(&self) -> Option<i64> {
        (!self.coeffs.is_empty()).then_some(self.start)
    }

    /// Lower bound for the true valuation: the valuation if known, otherwise
    /// `T + 1`.
    pub fn valuation_bound(&self) -> i64 {
        self.start
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `a_n`; zero below the valuation, an error above the truncation.
    pub fn coeff(&self, n: i64) -> Result<BigRational, QSeriesError> {
        if n > self.truncation {
            return Err(QSeriesError::TruncationExceeded {
                n,
                truncation: self.truncation,
            });
        }
        Ok(self.coeff_or_zero(n))
    }

    pub(crate) fn coeff_or_zero(&self, n: i64) -> BigRational {
        if n < self.start || n > self.truncation {
            BigRational::zero()
        } else {
            self.coeffs[(n - self.start) as usize].clone()
        }
    }

    fn coeff_ref(&self, n: i64) -> Option<&BigRational> {
        if n < self.start || n > self.truncation {
            None
        } else {
            Some(&self.coeffs[(n - self.start) as usize])
        }
    }

    /// `a_n` as a double.
    pub fn coeff_f64(&self, n: i64) -> Result<f64, QSeriesError> {
        Ok(rational_to_f64(&self.coeff(n)?))
    }

    /// Nonzero terms `(n, a_n)` in increasing order of `n`.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigRational)> {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(i, c)| (self.start + i as i64, c))
    }

    /// Forgets every coefficient above `truncation`.
    pub fn truncate(&self, truncation: i64) -> Self {
        if truncation >= self.truncation {
            return self.clone();
        }
        Self::new(self.start, self.coeffs.clone(), truncation)
    }

    /// Multiplies by `q^shift`.
    pub fn shift(&self, shift: i64) -> Self {
        Self {
            start: self.start + shift,
            coeffs: self.coeffs.clone(),
            truncation: self.truncation + shift,
        }
    }

    /// `f(q^d)`. Knowing `f` to `T` determines `f(q^d)` to `d (T + 1) - 1`.
    pub fn rescale(&self, d: u32) -> Self {
        assert!(d >= 1, "rescale factor must be positive");
        let d = d as i64;
        let truncation = d * (self.truncation + 1) - 1;
        Self::from_terms(self.terms().map(|(n, c)| (n * d, c.clone())), truncation)
    }

    pub fn scalar_mul(&self, c: &BigRational) -> Self {
        if c.is_zero() {
            return Self::zero(self.truncation);
        }
        Self {
            start: self.start,
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
            truncation: self.truncation,
        }
    }

    /// Applies `a_n -> phi(n, a_n)` to every stored coefficient.
    pub fn map_coeffs<F>(&self, mut phi: F) -> Self
    where
        F: FnMut(i64, &BigRational) -> BigRational,
    {
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| phi(self.start + i as i64, c))
            .collect();
        Self::new(self.start, coeffs, self.truncation)
    }

    /// Multiplicative inverse. With valuation `v` and truncation `T` the
    /// result has valuation `-v` and truncation `T - 2v`.
    pub fn invert(&self) -> Result<Self, QSeriesError> {
        let v = self.valuation().ok_or(QSeriesError::ZeroInverse)?;
        let len = self.coeffs.len();
        let a0_inv = self.coeffs[0].recip();
        let mut out: Vec<BigRational> = Vec::with_capacity(len);
        out.push(a0_inv.clone());
        for n in 1..len {
            let mut acc = BigRational::zero();
            for i in 1..=n {
                let a = &self.coeffs[i];
                if !a.is_zero() {
                    acc += a * &out[n - i];
                }
            }
            out.push(-acc * &a0_inv);
        }
        Ok(Self::new(-v, out, self.truncation - 2 * v))
    }

    /// Integer power; negative exponents go through [`QSeries::invert`].
    pub fn pow(&self, e: i64) -> Result<Self, QSeriesError> {
        let base = if e < 0 { self.invert()? } else { self.clone() };
        let mut e = e.unsigned_abs();
        let mut acc: Option<Self> = None;
        let mut sq = base;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => sq.clone(),
                    Some(a) => &a * &sq,
                });
            }
            e >>= 1;
            if e > 0 {
                sq = &sq * &sq;
            }
        }
        Ok(acc.unwrap_or_else(|| {
            // f^0 = 1 is exact only as far as f itself is known relative to its
            // leading term.
            let rel = self.truncation - self.start;
            Self::one(rel.max(0))
        }))
    }

    pub fn div(&self, other: &Self) -> Result<Self, QSeriesError> {
        Ok(self * &other.invert()?)
    }

    /// Evaluates the known part at a complex `q` in double precision.
    pub fn eval(&self, q: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * q + rational_to_f64(c);
        }
        acc * q.powi(self.start as i32)
    }
}

pub(crate) fn rational_to_f64(c: &BigRational) -> f64 {
    c.to_f64().unwrap_or_else(|| {
        // numerator or denominator too large for a direct conversion
        let (n, d) = (c.numer(), c.denom());
        let shift = n.bits().max(d.bits()) as i64 - 900;
        let n2 = (n >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
        let d2 = (d >> shift.max(0) as usize).to_f64().unwrap_or(f64::NAN);
        n2 / d2
    })
}

pub(crate) fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

impl Add for &QSeries {
    type Output = QSeries;

    fn add(self, rhs: &QSeries) -> QSeries {
        let truncation = self.truncation.min(rhs.truncation);
        let lo = self.start.min(rhs.start);
        if lo > truncation {
            return QSeries::zero(truncation);
        }
        let coeffs = (lo..=truncation)
            .map(|n| match (self.coeff_ref(n), rhs.coeff_ref(n)) {
                (Some(a), Some(b)) => a + b,
                (Some(a), None) => a.clone(),
                (None, Some(b)) => b.clone(),
                (None, None) => BigRational::zero(),
            })
            .collect();
        QSeries::new(lo, coeffs, truncation)
    }
}

impl Neg for &QSeries {
    type Output = QSeries;

    fn neg(self) -> QSeries {
        QSeries {
            start: self.start,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            truncation: self.truncation,
        }
    }
}

impl Sub for &QSeries {
    type Output = QSeries;

    fn sub(self, rhs: &QSeries) -> QSeries {
        self + &(-rhs)
    }
}

impl Mul for &QSeries {
    type Output = QSeries;

    fn mul(self, rhs: &QSeries) -> QSeries {
        let (v1, v2) = (self.start, rhs.start);
        let truncation = (self.truncation + v2).min(rhs.truncation + v1);
        if self.is_zero() || rhs.is_zero() {
            return QSeries::zero(truncation);
        }
        let len = (truncation - v1 - v2 + 1).max(0) as usize;
        let mut out = vec![BigRational::zero(); len];
        for (i, a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        QSeries::new(v1 + v2, out, truncation)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for QSeries {
            type Output = QSeries;
            fn $m(self, rhs: QSeries) -> QSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (n, c) in self.terms() {
            let (sign, mag) = if c.is_negative() { ("-", -c) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let unit = mag.is_one();
            match (n, unit) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}*q")?,
                (_, true) => write!(f, "q^{n}")?,
                (_, false) => write!(f, "{mag}*q^{n}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.truncation + 1)
    }
}
