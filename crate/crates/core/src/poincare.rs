//! Fourier coefficients of the Poincaré series `P_{m,k,N}` (weight `k`,
//! `Gamma_0(N)`) from their Kloosterman–Bessel expansion
//!
//! `a_n = delta_{m,n} + 2 pi (-1)^{k/2} (n/|m|)^{(k-1)/2}
//!        sum_{N | c} K(m, n; c)/c * B_{k-1}(4 pi sqrt(|m| n)/c)`
//!
//! with `B = J` for `m > 0` and `B = I` for `m < 0`.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{self, kloosterman_multiples, ArithError, KahanSum};
use crate::bessel::{bessel_i, bessel_j, BesselError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PoincareError {
    #[error("index m = 0 (Eisenstein series) is not supported")]
    ZeroIndex,
    #[error("weight must be even and at least 2, got {0}")]
    BadWeight(u32),
    #[error("level must be positive")]
    ZeroLevel,
    #[error("coefficient index n must be positive")]
    ZeroTarget,
    #[error("tail bound needs c >= {min:.1}, got c = {c_from}")]
    TailOutOfRange { c_from: u64, min: f64 },
    #[error("invalid control: {0}")]
    BadControl(String),
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Bessel(#[from] BesselError),
}

/// `(m, k, N, n)`: the coefficient `a_n(P_{m,k,N})`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PoincareParams {
    pub m: i64,
    pub weight: u32,
    pub level: u64,
    pub n: u64,
}

impl PoincareParams {
    pub fn new(m: i64, weight: u32, level: u64, n: u64) -> Result<Self, PoincareError> {
        validate(m, weight, level)?;
        if n == 0 {
            return Err(PoincareError::ZeroTarget);
        }
        Ok(Self { m, weight, level, n })
    }
}

fn validate(m: i64, weight: u32, level: u64) -> Result<(), PoincareError> {
    if m == 0 {
        return Err(PoincareError::ZeroIndex);
    }
    if weight < 2 || weight % 2 == 1 {
        return Err(PoincareError::BadWeight(weight));
    }
    if level == 0 {
        return Err(PoincareError::ZeroLevel);
    }
    Ok(())
}

/// When to stop summing over `c`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Control {
    /// Sum every multiple of `N` up to and including `c_max`.
    CMax(u64),
    /// Double the range until every requested tail bound is below `tol`,
    /// giving up at `cap`.
    Tol { tol: f64, cap: u64 },
}

impl Control {
    fn validate(&self) -> Result<(), PoincareError> {
        match *self {
            Control::Tol { tol, .. } if !(tol > 0.0) => {
                Err(PoincareError::BadControl(format!("tolerance {tol} must be positive")))
            }
            _ => Ok(()),
        }
    }
}

/// A numerically summed coefficient.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PoincareCoefficient {
    pub n: u64,
    pub value: f64,
    /// Largest modulus summed (a multiple of the level, or 0 if none was).
    pub c_max: u64,
    /// [`tail_bound`] from the next multiple of `N`; infinite while the
    /// small-argument regime has not been reached.
    pub tail_estimate: f64,
    pub terms_summed: u64,
    /// `Some(met)` under [`Control::Tol`], `None` under [`Control::CMax`].
    pub tol_met: Option<bool>,
}

/// `a_1..=a_{n_max}` of `P_{m,k,N}`; for `m < 0` the principal part is
/// exactly `q^{-|m|}`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PoincareExpansion {
    pub m: i64,
    pub weight: u32,
    pub level: u64,
    pub coeffs: Vec<PoincareCoefficient>,
}

impl PoincareExpansion {
    /// Exponent of the only principal-part term `q^{-|m|}` (coefficient 1).
    pub fn pole_order(&self) -> Option<u64> {
        (self.m < 0).then_some(self.m.unsigned_abs())
    }

    pub fn values(&self) -> Vec<f64> {
        self.coeffs.iter().map(|c| c.value).collect()
    }

    /// `a_n`, `n >= 1`.
    pub fn get(&self, n: u64) -> Option<f64> {
        self.coeffs.get((n as usize).checked_sub(1)?).map(|c| c.value)
    }

    /// True when every coefficient met its tolerance (always true under
    /// [`Control::CMax`]).
    pub fn converged(&self) -> bool {
        self.coeffs.iter().all(|c| c.tol_met != Some(false))
    }
}

/// `a_n(P_{m,k,N})` for one `n`.
pub fn poincare_coeff(
    params: PoincareParams,
    control: Control,
) -> Result<PoincareCoefficient, PoincareError> {
    let PoincareParams { m, weight, level, n } = params;
    let mut out = evaluate(m, weight, level, &[n], control)?;
    Ok(out.remove(0))
}

/// `a_n(P_{m,k,N})` for `n = 1..=n_max`, sharing the Kloosterman work.
pub fn poincare_qexp(
    m: i64,
    weight: u32,
    level: u64,
    n_max: u64,
    control: Control,
) -> Result<PoincareExpansion, PoincareError> {
    let ns: Vec<u64> = (1..=n_max).collect();
    let coeffs = evaluate(m, weight, level, &ns, control)?;
    Ok(PoincareExpansion {
        m,
        weight,
        level,
        coeffs,
    })
}

/// `a_n(P_{m,k,N})` for an arbitrary list of positive `n`.
pub fn poincare_coeffs(
    m: i64,
    weight: u32,
    level: u64,
    ns: &[u64],
    control: Control,
) -> Result<Vec<PoincareCoefficient>, PoincareError> {
    evaluate(m, weight, level, ns, control)
}

/// `max over e of (e + 1)/p^{e/4}` multiplied over primes: `d(c) <= A c^{1/4}`.
fn divisor_constant() -> f64 {
    [2u32, 3, 5, 7, 11, 13]
        .iter()
        .map(|&p| {
            (0..64)
                .map(|e| (e as f64 + 1.0) / (p as f64).powf(e as f64 / 4.0))
                .fold(1.0, f64::max)
        })
        .product()
}

/// Majorant of `|a_n - partial sum over c < c_from|`.
///
/// Each term is bounded with the Weil bound
/// `|K(m, n; c)| <= d(c) sqrt(gcd(m, n, c)) sqrt(c)` and
/// `|B_{k-1}(x)| <= (x/2)^{k-1}/(k-1)! e^{(x/2)^2}`. Then `d(c) <= A c^{1/4}`
/// turns the sum into `sum_j (N j)^{-s}` with `s = k - 3/4`, closed by an
/// integral comparison.
pub fn tail_bound(m: i64, n: u64, weight: u32, level: u64, c_from: u64) -> Result<f64, PoincareError> {
    validate(m, weight, level)?;
    if n == 0 {
        return Err(PoincareError::ZeroTarget);
    }
    let mn = (m.unsigned_abs() * n) as f64;
    let min = 4.0 * PI * mn.sqrt();
    if (c_from as f64) < min {
        return Err(PoincareError::TailOutOfRange { c_from, min });
    }
    let k = weight as f64;
    let x = 2.0 * PI * mn.sqrt();
    let j0 = c_from.div_ceil(level) as f64;
    let c0 = level as f64 * j0;
    let s = k - 0.75;
    let g = arith::gcd(m, n as i64) as f64;
    let scale = 2.0 * PI * (n as f64 / m.unsigned_abs() as f64).powf((k - 1.0) / 2.0);
    let bessel = x.powf(k - 1.0) / arith::factorial_f64(weight - 1) * (x / c0).powi(2).exp();
    let sum = (level as f64).powf(-s) * (j0.powf(-s) + j0.powf(1.0 - s) / (s - 1.0));
    Ok(scale * g.sqrt() * divisor_constant() * bessel * sum)
}

fn tail_or_inf(m: i64, n: u64, weight: u32, level: u64, c_from: u64) -> f64 {
    tail_bound(m, n, weight, level, c_from).unwrap_or(f64::INFINITY)
}

const FIRST_CHUNK: u64 = 4096;

fn evaluate(
    m: i64,
    weight: u32,
    level: u64,
    ns: &[u64],
    control: Control,
) -> Result<Vec<PoincareCoefficient>, PoincareError> {
    validate(m, weight, level)?;
    control.validate()?;
    if ns.contains(&0) {
        return Err(PoincareError::ZeroTarget);
    }
    let (j_max, tol) = match control {
        Control::CMax(c) => (c / level, None),
        Control::Tol { tol, cap } => (cap / level, Some(tol)),
    };
    let bs: Vec<i64> = ns.iter().map(|&n| n as i64).collect();
    let order = weight - 1;
    let use_j = m > 0;
    let mut acc = vec![KahanSum::new(); ns.len()];
    let mut j_done = 0u64;
    let mut chunk = FIRST_CHUNK;
    let tails_below = |j_done: u64, tol: f64| {
        ns.iter()
            .all(|&n| tail_or_inf(m, n, weight, level, level * (j_done + 1)) < tol)
    };
    while j_done < j_max {
        if let Some(tol) = tol {
            if j_done > 0 && tails_below(j_done, tol) {
                break;
            }
        }
        let j_lo = j_done + 1;
        let j_hi = (j_done + chunk).min(j_max);
        let table = kloosterman_multiples(m, &bs, level, j_lo, j_hi)?;
        let partial: Vec<Result<KahanSum, BesselError>> = ns
            .par_iter()
            .zip(table.par_iter())
            .zip(acc.par_iter())
            .map(|((&n, row), &start)| {
                let mut sum = start;
                let arg = 4.0 * PI * ((m.unsigned_abs() * n) as f64).sqrt();
                for (i, &kl) in row.iter().enumerate() {
                    let c = (level * (j_lo + i as u64)) as f64;
                    let x = arg / c;
                    let b = if use_j {
                        bessel_j(order, x)?
                    } else {
                        bessel_i(order, x)?
                    };
                    sum.add(kl / c * b);
                }
                Ok(sum)
            })
            .collect();
        for (a, p) in acc.iter_mut().zip(partial) {
            *a = p?;
        }
        j_done = j_hi;
        chunk *= 2;
    }
    let sign = if (weight / 2).is_multiple_of(2) { 1.0 } else { -1.0 };
    let tol_met = tol.map(|t| tails_below(j_done, t));
    Ok(ns
        .iter()
        .zip(&acc)
        .map(|(&n, a)| {
            let scale = 2.0
                * PI
                * sign
                * (n as f64 / m.unsigned_abs() as f64).powf((weight as f64 - 1.0) / 2.0);
            let delta = if m > 0 && m as u64 == n { 1.0 } else { 0.0 };
            let tail = tail_or_inf(m, n, weight, level, level * (j_done + 1));
            PoincareCoefficient {
                n,
                value: delta + scale * a.value(),
                c_max: level * j_done,
                tail_estimate: tail,
                terms_summed: j_done,
                tol_met: tol_met.map(|_| tol.is_some_and(|t| tail < t)),
            }
        })
        .collect())
}
