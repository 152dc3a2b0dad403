//! Periods and quasi-periods of elliptic curves, period matrices and the
//! single-valued matrix `S = P^-1 conj(P)`.

use std::f64::consts::PI;

use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::curve::WeierstrassModel;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PeriodError {
    #[error("the model is singular (zero discriminant)")]
    SingularCurve,
    #[error("tau = {0} is not in the upper half-plane")]
    NotUpperHalfPlane(Complex64),
    #[error("period matrix is singular")]
    SingularMatrix,
    #[error("P^-1 conj(P) has imaginary part {0:e}; the basis is inconsistent")]
    NonReal(f64),
    #[error("period matrix must be square of even size, got {0}x{1}")]
    BadShape(usize, usize),
}

fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn agm(mut a: f64, mut b: f64) -> f64 {
    for _ in 0..64 {
        if (a - b).abs() <= 1e-16 * a.abs() {
            break;
        }
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
    }
    0.5 * (a + b)
}

/// Real roots of `a x^3 + b x^2 + c x + d`, in decreasing order.
fn real_cubic_roots(a: f64, b: f64, c: f64, d: f64) -> Vec<f64> {
    let (p2, p1, p0) = (b / a, c / a, d / a);
    // x = t - p2/3, t^3 + p t + q = 0
    let shift = p2 / 3.0;
    let p = p1 - p2 * p2 / 3.0;
    let q = 2.0 * p2 * p2 * p2 / 27.0 - p2 * p1 / 3.0 + p0;
    let disc = (q / 2.0).powi(2) + (p / 3.0).powi(3);
    let mut roots = if disc < 0.0 {
        let r = (-p / 3.0).sqrt();
        let phi = (-q / (2.0 * r * r * r)).clamp(-1.0, 1.0).acos();
        (0..3)
            .map(|k| 2.0 * r * ((phi - 2.0 * PI * k as f64) / 3.0).cos() - shift)
            .collect::<Vec<_>>()
    } else {
        let s = disc.sqrt();
        vec![(-q / 2.0 + s).cbrt() + (-q / 2.0 - s).cbrt() - shift]
    };
    for x in roots.iter_mut() {
        for _ in 0..4 {
            let f = ((a * *x + b) * *x + c) * *x + d;
            let df = (3.0 * a * *x + 2.0 * b) * *x + c;
            if df != 0.0 {
                *x -= f / df;
            }
        }
    }
    roots.sort_by(|u, v| v.total_cmp(u));
    roots
}

/// A period lattice basis `(omega_1, omega_2)` of `dx / (2y + a1 x + a3)`,
/// with `omega_1` real positive and `Re(omega_2/omega_1)` in `(-1/2, 1/2]`.
pub fn curve_periods(model: &WeierstrassModel) -> Result<(Complex64, Complex64), PeriodError> {
    let disc = model.discriminant();
    if disc == 0 {
        return Err(PeriodError::SingularCurve);
    }
    let (b2, b4, b6) = (model.b2() as f64, model.b4() as f64, model.b6() as f64);
    let roots = real_cubic_roots(4.0, b2, 2.0 * b4, b6);
    let (w1, mut w2) = if disc > 0 {
        let (e1, e2, e3) = (roots[0], roots[1], roots[2]);
        let w1 = PI / agm((e1 - e3).sqrt(), (e1 - e2).sqrt());
        let w2 = c64(0.0, PI / agm((e1 - e3).sqrt(), (e2 - e3).sqrt()));
        (w1, w2)
    } else {
        let e1 = roots[0];
        let beta = 3.0 * e1 + b2 / 4.0;
        let alpha = (3.0 * e1 * e1 + 0.5 * b2 * e1 + 0.5 * b4).sqrt();
        let w1 = 2.0 * PI / agm(2.0 * alpha.sqrt(), (2.0 * alpha + beta).sqrt());
        let w2 = c64(-0.5 * w1, PI / agm(2.0 * alpha.sqrt(), (2.0 * alpha - beta).sqrt()));
        (w1, w2)
    };
    let shift = (w2.re / w1 - 0.5).ceil();
    w2 -= shift * w1;
    Ok((c64(w1, 0.0), w2))
}

/// `E_2(tau) = 1 - 24 sum sigma_1(n) q^n`, summed until the terms are
/// negligible; intended for `Im(tau) >= sqrt(3)/2`.
pub fn e2_at(tau: Complex64) -> Complex64 {
    let q = (c64(0.0, 2.0 * PI) * tau).exp();
    let mut acc = Complex64::new(0.0, 0.0);
    let mut qn = q;
    for n in 1..200u64 {
        let sigma: u64 = (1..=n).filter(|d| n % d == 0).sum();
        let term = qn * sigma as f64;
        acc += term;
        if term.norm() < 1e-20 {
            break;
        }
        qn *= q;
    }
    Complex64::new(1.0, 0.0) - acc * 24.0
}

/// Brings `tau = omega_2/omega_1` into the standard fundamental domain.
/// Returns the new basis and the integer matrix `[[a, b], [c, d]]` with
/// `(omega_2', omega_1') = M (omega_2, omega_1)`.
fn reduce_basis(
    mut w1: Complex64,
    mut w2: Complex64,
) -> (Complex64, Complex64, [[i64; 2]; 2]) {
    let mut m = [[1i64, 0], [0, 1]];
    for _ in 0..1000 {
        let n = (w2 / w1).re.round();
        w2 -= w1 * n;
        let ni = n as i64;
        m[0][0] -= ni * m[1][0];
        m[0][1] -= ni * m[1][1];
        if (w2 / w1).norm() < 1.0 - 1e-14 {
            (w1, w2) = (w2, -w1);
            m = [[-m[1][0], -m[1][1]], [m[0][0], m[0][1]]];
        } else {
            break;
        }
    }
    (w1, w2, m)
}

/// Weierstrass quasi-periods `eta_i = 2 zeta(omega_i / 2)` of the lattice,
/// via `eta_1 = pi^2 E_2(tau) / (3 omega_1)` on a reduced basis and the
/// Legendre relation `eta_1 omega_2 - eta_2 omega_1 = 2 pi i`.
pub fn weierstrass_quasi_periods(
    w1: Complex64,
    w2: Complex64,
) -> Result<(Complex64, Complex64), PeriodError> {
    let tau = w2 / w1;
    if !(tau.im > 0.0) {
        return Err(PeriodError::NotUpperHalfPlane(tau));
    }
    let (r1, r2, m) = reduce_basis(w1, w2);
    let two_pi_i = c64(0.0, 2.0 * PI);
    let h1 = e2_at(r2 / r1) * (PI * PI) / (r1 * 3.0);
    let h2 = (h1 * r2 - two_pi_i) / r1;
    // (h2, h1) = M (eta2, eta1), det M = 1
    let [[a, b], [c, d]] = m;
    let eta2 = h2 * d as f64 - h1 * b as f64;
    let eta1 = -h2 * c as f64 + h1 * a as f64;
    Ok((eta1, eta2))
}

/// Quasi-periods of `x dx / (2y + a1 x + a3)`, i.e. of `(wp - b2/12) dz`:
/// `eta_i = -eta_i^W - (b2/12) omega_i`.
pub fn quasi_periods(
    model: &WeierstrassModel,
    w1: Complex64,
    w2: Complex64,
) -> Result<(Complex64, Complex64), PeriodError> {
    let (h1, h2) = weierstrass_quasi_periods(w1, w2)?;
    let s = model.b2() as f64 / 12.0;
    Ok((-h1 - w1 * s, -h2 - w2 * s))
}

/// Periods of `(omega, eta) = (dz, x dz)` over an oriented homology basis.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PeriodLattice {
    pub omega1: Complex64,
    pub omega2: Complex64,
    pub eta1: Complex64,
    pub eta2: Complex64,
}

impl PeriodLattice {
    pub fn from_model(model: &WeierstrassModel) -> Result<Self, PeriodError> {
        let (omega1, omega2) = curve_periods(model)?;
        let (eta1, eta2) = quasi_periods(model, omega1, omega2)?;
        Ok(Self {
            omega1,
            omega2,
            eta1,
            eta2,
        })
    }

    pub fn tau(&self) -> Complex64 {
        self.omega2 / self.omega1
    }

    /// `P = [[omega1, eta1], [omega2, eta2]]`.
    pub fn period_matrix(&self) -> Matrix2<Complex64> {
        Matrix2::new(self.omega1, self.eta1, self.omega2, self.eta2)
    }

    /// `det P - 2 pi i`.
    pub fn legendre_residual(&self) -> Complex64 {
        self.omega1 * self.eta2 - self.omega2 * self.eta1 - c64(0.0, 2.0 * PI)
    }

    /// The lattice seen through another oriented homology basis,
    /// `(gamma_1, gamma_2) -> M (gamma_1, gamma_2)`, `M` in `SL_2(Z)`.
    pub fn change_basis(&self, m: [[i64; 2]; 2]) -> Self {
        let f = |x: i64| x as f64;
        Self {
            omega1: self.omega1 * f(m[0][0]) + self.omega2 * f(m[0][1]),
            omega2: self.omega1 * f(m[1][0]) + self.omega2 * f(m[1][1]),
            eta1: self.eta1 * f(m[0][0]) + self.eta2 * f(m[0][1]),
            eta2: self.eta1 * f(m[1][0]) + self.eta2 * f(m[1][1]),
        }
    }

    pub fn sv_matrix(&self) -> Result<SvMatrix, PeriodError> {
        let p = self.period_matrix();
        sv_matrix(&DMatrix::from_iterator(2, 2, p.iter().cloned()), 1)
    }
}

/// Real single-valued matrix of a motive of weight `n` and rank `2d`, with
/// blocks `A B / C D` of size `d`.
#[derive(Clone, Debug, PartialEq)]
pub struct SvMatrix {
    pub entries: DMatrix<f64>,
    pub weight: i32,
    pub half_rank: usize,
}

impl SvMatrix {
    pub fn new(entries: DMatrix<f64>, weight: i32) -> Result<Self, PeriodError> {
        let (r, c) = entries.shape();
        if r != c || r % 2 != 0 || r == 0 {
            return Err(PeriodError::BadShape(r, c));
        }
        Ok(Self {
            entries,
            weight,
            half_rank: r / 2,
        })
    }

    /// The rank-two matrix determined by `c = s21` and `rho = s11/s21`:
    /// `a = rho c`, `d = -a`, `b = (1 - a^2)/c`.
    pub fn rank_two(c: f64, rho: f64, weight: i32) -> Self {
        let a = rho * c;
        let b = (1.0 - a * a) / c;
        Self {
            entries: DMatrix::from_row_slice(2, 2, &[a, b, c, -a]),
            weight,
            half_rank: 1,
        }
    }

    fn block(&self, i: usize, j: usize) -> DMatrix<f64> {
        let d = self.half_rank;
        self.entries.view((i * d, j * d), (d, d)).into_owned()
    }

    pub fn a(&self) -> DMatrix<f64> {
        self.block(0, 0)
    }
    pub fn b(&self) -> DMatrix<f64> {
        self.block(0, 1)
    }
    pub fn c(&self) -> DMatrix<f64> {
        self.block(1, 0)
    }
    pub fn d(&self) -> DMatrix<f64> {
        self.block(1, 1)
    }

    pub fn s11(&self) -> f64 {
        self.entries[(0, 0)]
    }
    pub fn s21(&self) -> f64 {
        self.entries[(self.half_rank, 0)]
    }
}

/// `S = P^-1 conj(P)` for a `2d x 2d` period matrix of a weight-`n` motive.
pub fn sv_matrix(p: &DMatrix<Complex64>, weight: i32) -> Result<SvMatrix, PeriodError> {
    let (r, c) = p.shape();
    if r != c || r % 2 != 0 || r == 0 {
        return Err(PeriodError::BadShape(r, c));
    }
    let inv = p.clone().try_inverse().ok_or(PeriodError::SingularMatrix)?;
    let s = inv * p.map(|z| z.conj());
    let scale = s.iter().map(|z| z.norm()).fold(1.0, f64::max);
    let im = s.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if !im.is_finite() || im > 1e-9 * scale {
        return Err(PeriodError::NonReal(im));
    }
    SvMatrix::new(s.map(|z| z.re), weight)
}

/// Residuals of the polarisation relations of a single-valued matrix.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BlockReport {
    /// `|C - C^t|`
    pub c_symmetric: f64,
    /// `|D - (-1)^n A^t|`
    pub d_relation: f64,
    /// `|B - (1 - A^2) C^-1|`; `None` if `C` is singular.
    pub b_relation: Option<f64>,
    /// `|C A - (-1)^{n+1} A^t C|`
    pub ca_relation: f64,
    /// `|S^2 - 1|`
    pub involution: f64,
    /// `|Tr S|`
    pub trace: f64,
}

impl BlockReport {
    pub fn max_residual(&self) -> f64 {
        [
            self.c_symmetric,
            self.d_relation,
            self.b_relation.unwrap_or(f64::INFINITY),
            self.ca_relation,
            self.involution,
            self.trace,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }

    pub fn passes(&self, tol: f64) -> bool {
        self.max_residual() <= tol
    }
}

fn max_abs(m: &DMatrix<f64>) -> f64 {
    m.iter().fold(0.0, |acc, x| acc.max(x.abs()))
}

pub fn check_block_relations(s: &SvMatrix) -> BlockReport {
    let (a, b, c, d) = (s.a(), s.b(), s.c(), s.d());
    let sign = if s.weight % 2 == 0 { 1.0 } else { -1.0 };
    let id = DMatrix::<f64>::identity(s.half_rank, s.half_rank);
    let b_relation = c
        .clone()
        .try_inverse()
        .filter(|ci| ci.iter().all(|x| x.is_finite()))
        .map(|ci| max_abs(&(&b - (&id - &a * &a) * ci)));
    let n = s.entries.nrows();
    BlockReport {
        c_symmetric: max_abs(&(&c - c.transpose())),
        d_relation: max_abs(&(&d - a.transpose() * sign)),
        b_relation,
        ca_relation: max_abs(&(&c * &a + a.transpose() * &c * sign)),
        involution: max_abs(&(&s.entries * &s.entries - DMatrix::identity(n, n))),
        trace: s.entries.trace().abs(),
    }
}
