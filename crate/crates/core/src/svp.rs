//! Single-valued periods of the rank-two cusp-form motives.
//!
//! For a normalised newform `f` of weight `k + 2` spanning
//! `S_{k+2}(Gamma_0(N))`, the single-valued matrix is fixed by `c = s21` and
//! `rho = s11/s21`. Both can be read off Poincaré series:
//!
//! * `a_n(P_m) = -(k!/m^{k+1}) a_m(f) a_n(f) / c`,
//! * `a_n(P_{-1}) = k! (a_n(f) rho + a_n(g))` for the dual form `g`,
//!
//! (route B) or, in weight 2, from the periods of the curve `X_0(N)`
//! (route A).

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::arith::factorial_f64;
use crate::catalog::{self, cusp_form_dimension, newform_qexp, CatalogError, RankTwoCase};
use crate::curve::modular_parametrization;
use crate::linalg;
use crate::periods::{PeriodError, PeriodLattice, SvMatrix};
use crate::poincare::{poincare_coeffs, Control, PoincareCoefficient, PoincareError};
use crate::qexp::{
    self, dual_form_from_hauptmodul, dual_form_level1, hauptmodul, hecke_tp, level_one_monomial,
    QSeries, QSeriesError,
};

#[derive(Debug, Error)]
pub enum SvpError {
    #[error(transparent)]
    Catalog(#[from] CatalogError),
    #[error(transparent)]
    Poincare(#[from] PoincareError),
    #[error(transparent)]
    Period(#[from] PeriodError),
    #[error(transparent)]
    Series(#[from] QSeriesError),
    #[error("a_m(f) a_n(f) = 0 for every requested pair")]
    AllPairsVanish,
    #[error("route {route:?} is not available for ({level}, {weight})")]
    RouteUnavailable { level: u64, weight: u32, route: Route },
    #[error("({level}, {weight}) is not supported: {reason}")]
    Unsupported { level: u64, weight: u32, reason: &'static str },
    #[error("coefficient matrix is singular")]
    Singular,
    #[error("quadrature did not converge (last relative change {0:e})")]
    Quadrature(f64),
    #[error("series known to q^{have}, need q^{need} to resolve it on the fundamental domain")]
    TooFewTerms { need: i64, have: i64 },
}

/// Where single-valued data comes from.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Route {
    /// Route A: periods and quasi-periods of the elliptic curve `X_0(N)`.
    Periods,
    /// Route B: Kloosterman sums for Poincaré series.
    Poincare,
}

/// A measured Poincaré coefficient against the value predicted from `(c, rho)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct CoefficientResidual {
    pub m: i64,
    pub n: u64,
    pub measured: f64,
    pub predicted: f64,
    pub deviation: f64,
}

impl CoefficientResidual {
    fn new(m: i64, n: u64, measured: f64, predicted: f64) -> Self {
        Self {
            m,
            n,
            measured,
            predicted,
            deviation: measured - predicted,
        }
    }
}

/// The estimate of `c` from one pair `(m, n)`; `None` when `a_m(f) a_n(f) = 0`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PairEstimate {
    pub m: u64,
    pub n: u64,
    pub c: Option<f64>,
    pub a_n_pm: f64,
    pub tail_estimate: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SvRankTwoResult {
    pub level: u64,
    pub weight: u32,
    pub route: Route,
    pub c: f64,
    pub rho: Option<f64>,
    pub pairs: Vec<PairEstimate>,
    pub residuals: Vec<CoefficientResidual>,
    /// `|det P - 2 pi i|` (route A only).
    pub legendre_residual: Option<f64>,
}

impl SvRankTwoResult {
    /// The single-valued matrix `[[rho c, (1 - rho^2 c^2)/c], [c, -rho c]]`
    /// of the weight `k + 1` motive.
    pub fn sv_matrix(&self) -> Option<SvMatrix> {
        self.rho
            .map(|rho| SvMatrix::rank_two(self.c, rho, self.weight as i32 - 1))
    }

    /// Largest relative spread of the pairwise `c` estimates.
    pub fn pair_spread(&self) -> f64 {
        self.pairs
            .iter()
            .filter_map(|p| p.c)
            .map(|c| ((c - self.c) / self.c).abs())
            .fold(0.0, f64::max)
    }
}

fn coeff_f64(f: &QSeries, n: u64) -> Result<f64, SvpError> {
    Ok(f.coeff_f64(n as i64)?)
}

/// Evaluates `a_n(P_m)` for the given `n`, grouped by `m`.
fn coefficients_for(
    case: RankTwoCase,
    m: i64,
    ns: &[u64],
    control: Control,
) -> Result<Vec<PoincareCoefficient>, SvpError> {
    Ok(poincare_coeffs(m, case.weight, case.level, ns, control)?)
}

/// `c = s21` from `a_n(P_m) = -(k!/m^{k+1}) a_m(f) a_n(f) / c`.
///
/// The reported `c` comes from the pair with the smallest relative tail
/// bound; the others go into `pairs` and `residuals`.
pub fn rank2_c_from_poincare(
    case: RankTwoCase,
    pairs: &[(u64, u64)],
    control: Control,
) -> Result<SvRankTwoResult, SvpError> {
    let k = case.k();
    let t = pairs.iter().map(|&(m, n)| m.max(n)).max().unwrap_or(1) as i64;
    let f = newform_qexp(case, t)?;
    let kfact = factorial_f64(k);
    let mut ms: Vec<u64> = pairs.iter().map(|p| p.0).collect();
    ms.sort_unstable();
    ms.dedup();
    let mut estimates = Vec::new();
    for m in ms {
        let ns: Vec<u64> = pairs.iter().filter(|p| p.0 == m).map(|p| p.1).collect();
        let vals = coefficients_for(case, m as i64, &ns, control)?;
        let am = coeff_f64(&f, m)?;
        for (n, v) in ns.into_iter().zip(vals) {
            let an = coeff_f64(&f, n)?;
            let c = (am * an != 0.0)
                .then(|| -kfact * am * an / ((m as f64).powi(k as i32 + 1) * v.value));
            estimates.push(PairEstimate {
                m,
                n,
                c,
                a_n_pm: v.value,
                tail_estimate: v.tail_estimate,
            });
        }
    }
    let best = estimates
        .iter()
        .filter(|e| e.c.is_some())
        .min_by(|a, b| {
            let ra = a.tail_estimate / a.a_n_pm.abs();
            let rb = b.tail_estimate / b.a_n_pm.abs();
            ra.total_cmp(&rb)
        })
        .ok_or(SvpError::AllPairsVanish)?;
    let c = best.c.expect("filtered");
    let mut residuals = Vec::new();
    for e in &estimates {
        let am = coeff_f64(&f, e.m)?;
        let an = coeff_f64(&f, e.n)?;
        let predicted = -kfact * am * an / ((e.m as f64).powi(k as i32 + 1) * c);
        residuals.push(CoefficientResidual::new(e.m as i64, e.n, e.a_n_pm, predicted));
    }
    Ok(SvRankTwoResult {
        level: case.level,
        weight: case.weight,
        route: Route::Poincare,
        c,
        rho: None,
        pairs: estimates,
        residuals,
        legendre_residual: None,
    })
}

/// The dual form `g` of a rank-two case: a weakly holomorphic form of
/// weight `k + 2` with `a_{-1}(g) = 1/k!`, `a_0(g) = 0`, no pole outside the
/// cusp at infinity and vanishing at the other cusps.
///
/// Level 1 and the genus-0 levels 2..=9 also have `a_1(g) = 0`. In weight 2
/// it is `x(q) f` from the modular parametrisation, with `a_1(g)` as it
/// comes (`-1` at level 11).
pub fn dual_form(case: RankTwoCase, truncation: i64) -> Result<QSeries, SvpError> {
    let k = case.k();
    if case.weight == 2 {
        let model = catalog::curve_model(case.level)?;
        let f = newform_qexp(case, truncation + 4)?;
        let (x, _) = modular_parametrization(&model, &f)?;
        return Ok((&x * &f).truncate(truncation));
    }
    if case.level == 1 {
        return Ok(dual_form_level1(case.weight, truncation)?);
    }
    let t = hauptmodul(case.level, truncation).ok_or(SvpError::Unsupported {
        level: case.level,
        weight: case.weight,
        reason: "no hauptmodul for a weakly holomorphic dual form",
    })?;
    let f = newform_qexp(case, truncation + 2)?;
    Ok(dual_form_from_hauptmodul(&f, &t, k, truncation)?)
}

/// Whether [`rank2_rho`] can run `route` for `case`.
pub fn route_available(case: RankTwoCase, route: Route) -> bool {
    match route {
        Route::Periods => case.weight == 2,
        Route::Poincare => {
            case.weight == 2 || case.level == 1 || qexp::HAUPTMODUL_LEVELS.contains(&case.level)
        }
    }
}

/// `(c, rho)` of a rank-two case.
///
/// Route A reads `c = s21` and `rho = s11/s21` off the curve periods.
/// Route B takes `c` from `a_1(P_1)` and `rho = a_1(P_{-1})/k! - a_1(g)`,
/// with residuals `a_n(P_{-1}) - k! (a_n(f) rho + a_n(g))` for
/// `n = 1..=n_max`.
pub fn rank2_rho(
    case: RankTwoCase,
    route: Route,
    n_max: u64,
    control: Control,
) -> Result<SvRankTwoResult, SvpError> {
    if !route_available(case, route) {
        return Err(SvpError::RouteUnavailable {
            level: case.level,
            weight: case.weight,
            route,
        });
    }
    match route {
        Route::Periods => {
            let model = catalog::curve_model(case.level)?;
            let lattice = PeriodLattice::from_model(&model)?;
            let s = lattice.sv_matrix()?;
            Ok(SvRankTwoResult {
                level: case.level,
                weight: case.weight,
                route,
                c: s.s21(),
                rho: Some(s.s11() / s.s21()),
                pairs: Vec::new(),
                residuals: Vec::new(),
                legendre_residual: Some(lattice.legendre_residual().norm()),
            })
        }
        Route::Poincare => {
            let n_max = n_max.max(1);
            let mut out = rank2_c_from_poincare(case, &[(1, 1)], control)?;
            let t = n_max as i64;
            let f = newform_qexp(case, t)?;
            let g = dual_form(case, t)?;
            let kfact = factorial_f64(case.k());
            let ns: Vec<u64> = (1..=n_max).collect();
            let p = coefficients_for(case, -1, &ns, control)?;
            let rho = p[0].value / kfact - coeff_f64(&g, 1)?;
            let mut residuals = Vec::new();
            for (n, v) in ns.iter().zip(&p) {
                let predicted = kfact * (coeff_f64(&f, *n)? * rho + coeff_f64(&g, *n)?);
                residuals.push(CoefficientResidual::new(-1, *n, v.value, predicted));
            }
            out.rho = Some(rho);
            out.residuals.extend(residuals);
            Ok(out)
        }
    }
}

/// The closed-form predictions of `a_1(P_1)` and `a_1(P_{-1})` from the
/// periods of a weight-2 curve.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct PeriodPredictions {
    /// `-2 pi i / (omega1 conj(omega2) - conj(omega1) omega2)`
    pub a1_p1: f64,
    /// `(conj(omega1) eta2 - conj(omega2) eta1) / (omega1 conj(omega2) - conj(omega1) omega2) + a_1(x f)`
    pub a1_pm1: f64,
    /// Largest imaginary part discarded from the two expressions.
    pub imaginary_residual: f64,
    /// `a_1(x f)`, the offset from the dual form (`-1` at level 11).
    pub dual_offset: f64,
}

/// Evaluates the period expressions for `a_1(P_{±1})` at weight 2.
pub fn predicted_coeffs_from_periods(level: u64) -> Result<PeriodPredictions, SvpError> {
    let case = catalog::find_case(level, 2)?;
    let lattice = PeriodLattice::from_model(&catalog::curve_model(level)?)?;
    Ok(predictions_for(&lattice, coeff_f64(&dual_form(case, 2)?, 1)?))
}

/// [`predicted_coeffs_from_periods`] for an explicit lattice and dual offset.
pub fn predictions_for(lattice: &PeriodLattice, dual_offset: f64) -> PeriodPredictions {
    let PeriodLattice {
        omega1: w1,
        omega2: w2,
        eta1: e1,
        eta2: e2,
    } = *lattice;
    let den = w1 * w2.conj() - w1.conj() * w2;
    let p1 = Complex64::new(0.0, -2.0 * PI) / den;
    let pm1 = (w1.conj() * e2 - w2.conj() * e1) / den;
    PeriodPredictions {
        a1_p1: p1.re,
        a1_pm1: pm1.re + dual_offset,
        imaginary_residual: p1.im.abs().max(pm1.im.abs()),
        dual_offset,
    }
}

/// Closest fraction `p/q` with `q <= max_den`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RationalApprox {
    pub numer: i128,
    pub denom: u64,
    pub distance: f64,
}

impl RationalApprox {
    pub fn value(&self) -> f64 {
        self.numer as f64 / self.denom as f64
    }
}

/// Best rational approximation with bounded denominator, from the
/// continued fraction of `x` and its last semiconvergent.
pub fn nearest_rational(x: f64, max_den: u64) -> RationalApprox {
    assert!(max_den >= 1 && x.is_finite());
    let (mut p0, mut q0, mut p1, mut q1) = (0i128, 1i128, 1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        let ai = a as i128;
        let q2 = q0 + ai * q1;
        if q2 > max_den as i128 {
            break;
        }
        (p0, q0, p1, q1) = (p1, q1, p0 + ai * p1, q2);
        let frac = r - a;
        if frac <= f64::EPSILON * r.abs().max(1.0) {
            break;
        }
        r = 1.0 / frac;
    }
    let mut best = (p1, q1);
    let k = (max_den as i128 - q0) / q1;
    if k > 0 {
        let semi = (p0 + k * p1, q0 + k * q1);
        let d = |(p, q): (i128, i128)| (x - p as f64 / q as f64).abs();
        if d(semi) < d(best) {
            best = semi;
        }
    }
    RationalApprox {
        numer: best.0,
        denom: best.1 as u64,
        distance: (x - best.0 as f64 / best.1 as f64).abs(),
    }
}

/// `P_m = sum_i lambda_i P_{m_i}` solved from the first `d` coefficients.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalRelation {
    pub level: u64,
    pub weight: u32,
    pub m: u64,
    pub basis: Vec<u64>,
    pub dimension: u64,
    pub lambda: Vec<f64>,
    /// `mu_i = lambda_i (m/m_i)^{k+1}`, the coefficients of
    /// `m^{k+1} P_m = sum_i mu_i m_i^{k+1} P_{m_i}`.
    pub mu: Vec<f64>,
    /// Reconstruction of each `mu_i`.
    pub mu_rational: Vec<RationalApprox>,
    /// Deviations at `n = d+1..=n_max`.
    pub residuals: Vec<CoefficientResidual>,
}

impl RationalRelation {
    pub fn max_residual(&self) -> f64 {
        self.residuals.iter().map(|r| r.deviation.abs()).fold(0.0, f64::max)
    }
    pub fn max_distance(&self) -> f64 {
        self.mu_rational.iter().map(|r| r.distance).fold(0.0, f64::max)
    }
}

/// Denominator bound for the rational reconstructions of relations.
pub const RELATION_MAX_DEN: u64 = 10_000;

/// Expresses `P_m` in the basis `P_{m_1}, ..., P_{m_d}` of
/// `S_{k+2}(Gamma_0(N))`.
///
/// `lambda` has denominators as large as `m^{k+1}`, so the rational
/// reconstruction is run on `mu`; the two differ by powers of `m_i/m`.
pub fn poincare_rational_relations(
    level: u64,
    weight: u32,
    m: u64,
    basis: &[u64],
    n_max: u64,
    control: Control,
) -> Result<RationalRelation, SvpError> {
    let d = cusp_form_dimension(level, weight);
    if basis.len() as u64 != d || d == 0 {
        return Err(SvpError::Unsupported {
            level,
            weight,
            reason: "basis size must equal dim S_{k+2}(Gamma_0(N))",
        });
    }
    let n_max = n_max.max(d);
    let ns: Vec<u64> = (1..=n_max).collect();
    let target = poincare_coeffs(m as i64, weight, level, &ns, control)?;
    let mut cols = Vec::new();
    for &mi in basis {
        cols.push(poincare_coeffs(mi as i64, weight, level, &ns, control)?);
    }
    let d = d as usize;
    let a = DMatrix::from_fn(d, d, |i, j| cols[j][i].value);
    let b = DVector::from_fn(d, |i, _| target[i].value);
    let lambda = a.clone().lu().solve(&b).ok_or(SvpError::Singular)?;
    if !lambda.iter().all(|x| x.is_finite()) {
        return Err(SvpError::Singular);
    }
    let kp1 = weight as i32 - 1;
    let mu: Vec<f64> = basis
        .iter()
        .zip(lambda.iter())
        .map(|(&mi, l)| l * (m as f64 / mi as f64).powi(kp1))
        .collect();
    let mu_rational = mu.iter().map(|&x| nearest_rational(x, RELATION_MAX_DEN)).collect();
    let residuals = (d..n_max as usize)
        .map(|i| {
            let predicted: f64 = (0..d).map(|j| lambda[j] * cols[j][i].value).sum();
            CoefficientResidual::new(m as i64, ns[i], target[i].value, predicted)
        })
        .collect();
    Ok(RationalRelation {
        level,
        weight,
        m,
        basis: basis.to_vec(),
        dimension: d as u64,
        lambda: lambda.iter().copied().collect(),
        mu,
        mu_rational,
        residuals,
    })
}

/// A basis of `S_weight(Gamma_0(level))` with exact coefficients: the
/// monomials `Delta^a E_4^b E_6^c` at level 1, the catalog newform in the
/// rank-two cases.
pub fn cusp_form_basis(level: u64, weight: u32, truncation: i64) -> Result<Vec<QSeries>, SvpError> {
    if level == 1 {
        let mut out = Vec::new();
        let d = qexp::delta(truncation);
        let mut dpow = d.clone();
        for a in 1..=weight / 12 {
            if let Some(mono) = level_one_monomial(weight - 12 * a, truncation) {
                out.push(&dpow * &mono);
            }
            dpow = &dpow * &d;
        }
        return Ok(out);
    }
    match catalog::find_case(level, weight) {
        Ok(case) => Ok(vec![newform_qexp(case, truncation)?]),
        Err(_) => Err(SvpError::Unsupported {
            level,
            weight,
            reason: "cusp forms are only available at level 1 and in the rank-two table",
        }),
    }
}

/// One newform of a Hecke split, with its single-valued data.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NewformSv {
    /// `a_1..=a_{n_max}`, numerically (irrational in general).
    pub coeffs: Vec<f64>,
    pub c: f64,
    /// `a_1(sum_j m_j^{k+1} r_ji P_{-m_j}) / k!`, minus `a_1(g)` when the
    /// dual form is known.
    pub rho: f64,
    /// True when `rho` includes no unknown rational offset (`d = 1` with a
    /// constructed dual form).
    pub rho_exact: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct HeckeSplit {
    pub level: u64,
    pub weight: u32,
    pub newforms: Vec<NewformSv>,
    /// Root-mean-square residual of the least-squares solve for `1/c_i`.
    pub fit_residual: f64,
    /// `a_n(P_m)` reconstructed from the `c_i` against direct evaluation.
    pub reconstruction: Vec<CoefficientResidual>,
}

impl HeckeSplit {
    pub fn max_reconstruction_error(&self) -> f64 {
        self.reconstruction
            .iter()
            .map(|r| r.deviation.abs())
            .fold(0.0, f64::max)
    }
}

fn to_f64(c: &BigRational) -> f64 {
    crate::qexp::rational_to_f64(c)
}

/// Newforms of `S_weight(Gamma_0(level))` as eigenvectors of `T_2` (or the
/// single basis element when `d = 1`), normalised to `a_1 = 1`, with
/// coefficients `a_1..=a_{n_max}`.
pub fn numeric_newforms(level: u64, weight: u32, n_max: u64) -> Result<Vec<Vec<f64>>, SvpError> {
    let n_max = n_max.max(1);
    let k = weight - 2;
    let basis = cusp_form_basis(level, weight, 2 * n_max as i64 + 2)?;
    let d = basis.len();
    let coeff_rows: Vec<Vec<f64>> = basis
        .iter()
        .map(|b| (1..=n_max).map(|n| b.coeff_or_zero(n as i64)).map(|c| to_f64(&c)).collect())
        .collect();
    if d == 1 {
        let a1 = coeff_rows[0][0];
        return Ok(vec![coeff_rows[0].iter().map(|x| x / a1).collect()]);
    }
    if level != 1 {
        return Err(SvpError::Unsupported {
            level,
            weight,
            reason: "Hecke split beyond rank two is implemented at level 1",
        });
    }
    // T_2 in the basis, solved exactly from the first d coefficients.
    let probe: Vec<Vec<BigRational>> = (1..=d as i64)
        .map(|n| basis.iter().map(|b| b.coeff_or_zero(n)).collect())
        .collect();
    let mut t2 = DMatrix::<f64>::zeros(d, d);
    for (j, b) in basis.iter().enumerate() {
        let image = hecke_tp(b, 2, k)?;
        let rhs: Vec<BigRational> = (1..=d as i64).map(|n| image.coeff_or_zero(n)).collect();
        let x = linalg::solve(&probe, &rhs).ok_or(SvpError::Singular)?;
        for (i, xi) in x.iter().enumerate() {
            t2[(i, j)] = to_f64(xi);
        }
    }
    let mut eig: Vec<f64> = t2.complex_eigenvalues().iter().map(|z| z.re).collect();
    eig.sort_by(|a, b| b.total_cmp(a));
    let mut out = Vec::new();
    for lambda in eig {
        let shifted = &t2 - DMatrix::<f64>::identity(d, d) * lambda;
        let svd = shifted.svd(false, true);
        let v_t = svd.v_t.ok_or(SvpError::Singular)?;
        let (idx, _) = svd
            .singular_values
            .iter()
            .enumerate()
            .min_by(|a, b| a.1.total_cmp(b.1))
            .ok_or(SvpError::Singular)?;
        let v = v_t.row(idx);
        let coeffs: Vec<f64> = (0..n_max as usize)
            .map(|n| (0..d).map(|j| v[j] * coeff_rows[j][n]).sum())
            .collect();
        let a1 = coeffs[0];
        if a1.abs() < 1e-300 {
            return Err(SvpError::Singular);
        }
        out.push(coeffs.iter().map(|x| x / a1).collect());
    }
    Ok(out)
}

/// Splits `P_m` along the newforms `f_i` of `S_{k+2}(Gamma_0(N))`:
/// `c_i` from the least-squares solution of
/// `a_n(P_m) = -(k!/m^{k+1}) sum_i a_m(f_i) a_n(f_i) / c_i` over
/// `m in ms`, `n <= n_max`, and `rho_i` from `a_1` of
/// `sum_j m_j^{k+1} r_ji P_{-m_j}` with `m_j = 1..=d` and
/// `r = (a_{m_j}(f_i))^{-1}`.
pub fn hecke_split_sv(
    level: u64,
    weight: u32,
    ms: &[u64],
    n_max: u64,
    control: Control,
) -> Result<HeckeSplit, SvpError> {
    let k = weight - 2;
    let kfact = factorial_f64(k);
    let d = cusp_form_dimension(level, weight) as usize;
    if d == 0 {
        return Err(SvpError::Unsupported {
            level,
            weight,
            reason: "no cusp forms",
        });
    }
    let m_top = ms.iter().copied().max().unwrap_or(1).max(d as u64);
    let newforms = numeric_newforms(level, weight, n_max.max(m_top))?;
    let ns: Vec<u64> = (1..=n_max).collect();
    let kp1 = k as i32 + 1;
    // rows: (m, n); unknowns x_i = 1/c_i
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    let mut measured = Vec::new();
    for &m in ms {
        let vals = poincare_coeffs(m as i64, weight, level, &ns, control)?;
        for (i, &n) in ns.iter().enumerate() {
            let row: Vec<f64> = newforms
                .iter()
                .map(|f| -kfact / (m as f64).powi(kp1) * f[m as usize - 1] * f[n as usize - 1])
                .collect();
            rows.push(row);
            rhs.push(vals[i].value);
            measured.push((m, n, vals[i].value));
        }
    }
    let a = DMatrix::from_fn(rows.len(), d, |i, j| rows[i][j]);
    let b = DVector::from_vec(rhs);
    let svd = a.clone().svd(true, true);
    let x = svd.solve(&b, 1e-12).map_err(|_| SvpError::Singular)?;
    let fit = &a * &x - &b;
    let fit_residual = (fit.norm_squared() / b.len().max(1) as f64).sqrt();
    let reconstruction = measured
        .iter()
        .enumerate()
        .map(|(r, &(m, n, v))| {
            let predicted: f64 = (0..d).map(|j| rows[r][j] * x[j]).sum();
            CoefficientResidual::new(m as i64, n, v, predicted)
        })
        .collect();

    // rho_i from the negative-index series P_{-1}, ..., P_{-d}.
    let basis_idx: Vec<u64> = (1..=d as u64).collect();
    let amat = DMatrix::from_fn(d, d, |l, j| newforms[l][basis_idx[j] as usize - 1]);
    let r = amat.try_inverse().ok_or(SvpError::Singular)?;
    let mut a1_neg = Vec::new();
    for &mj in &basis_idx {
        a1_neg.push(poincare_coeffs(-(mj as i64), weight, level, &[1], control)?[0].value);
    }
    let dual = if d == 1 {
        let case = catalog::find_case(level, weight).ok();
        match case {
            Some(c) if route_available(c, Route::Poincare) => Some(coeff_f64(&dual_form(c, 2)?, 1)?),
            _ => None,
        }
    } else {
        None
    };
    let newforms = newforms
        .into_iter()
        .enumerate()
        .map(|(i, coeffs)| {
            let combo: f64 = (0..d)
                .map(|j| (basis_idx[j] as f64).powi(kp1) * r[(j, i)] * a1_neg[j])
                .sum();
            let rho = combo / kfact - dual.unwrap_or(0.0);
            NewformSv {
                coeffs: coeffs[..n_max as usize].to_vec(),
                c: 1.0 / x[i],
                rho,
                rho_exact: dual.is_some(),
            }
        })
        .collect();
    Ok(HeckeSplit {
        level,
        weight,
        newforms,
        fit_residual,
        reconstruction,
    })
}

/// One coefficient of a CM rationality check.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RationalityEntry {
    pub n: u64,
    pub value: f64,
    pub nearest: RationalApprox,
    /// False when `value` is too large for double precision to resolve its
    /// distance to a fraction at the tolerance; such entries do not count.
    pub resolved: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RationalityReport {
    pub level: u64,
    pub weight: u32,
    pub cm: bool,
    pub max_den: u64,
    pub tolerance: f64,
    pub entries: Vec<RationalityEntry>,
    pub pass: bool,
}

/// Tolerance and denominator bound shared by the CM rationality checks and
/// their negative controls. A real number lands within `tol` of some
/// fraction with denominator `<= max_den` with probability about
/// `0.6 tol max_den^2`, about 0.09 here, so a pass over ten coefficients
/// is not vacuous.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct RationalityCriterion {
    pub max_den: u64,
    pub tol: f64,
}

impl Default for RationalityCriterion {
    fn default() -> Self {
        Self {
            max_den: 12,
            tol: 1e-3,
        }
    }
}

/// Compares each `a_n(P_{-1})`, `n <= n_max`, with its nearest fraction of
/// bounded denominator. `pass` requires every resolved coefficient to be
/// within the tolerance.
pub fn cm_rationality_check(
    case: RankTwoCase,
    n_max: u64,
    control: Control,
    criterion: RationalityCriterion,
) -> Result<RationalityReport, SvpError> {
    let ns: Vec<u64> = (1..=n_max).collect();
    let vals = poincare_coeffs(-1, case.weight, case.level, &ns, control)?;
    let entries: Vec<RationalityEntry> = vals
        .iter()
        .map(|v| {
            let nearest = nearest_rational(v.value, criterion.max_den);
            let ulp = v.value.abs() * f64::EPSILON;
            RationalityEntry {
                n: v.n,
                value: v.value,
                nearest,
                resolved: 1e3 * ulp < criterion.tol,
            }
        })
        .collect();
    let pass = entries
        .iter()
        .filter(|e| e.resolved)
        .all(|e| e.nearest.distance <= criterion.tol);
    Ok(RationalityReport {
        level: case.level,
        weight: case.weight,
        cm: case.cm,
        max_den: criterion.max_den,
        tolerance: criterion.tol,
        entries,
        pass,
    })
}

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, z);
            for j in 2..=n {
                let p2 = ((2 * j - 1) as f64 * z * p1 - (j - 1) as f64 * p0) / j as f64;
                p0 = p1;
                p1 = p2;
            }
            if n == 1 {
                p0 = 1.0;
                p1 = z;
            }
            dp = n as f64 * (z * p1 - p0) / (z * z - 1.0);
            let dz = p1 / dp;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        let wi = 2.0 / ((1.0 - z * z) * dp * dp);
        w[i] = wi;
        w[n - 1 - i] = wi;
    }
    (x, w)
}

const PETERSSON_Y_MAX: f64 = 12.0;

fn petersson_at_level(f: &QSeries, weight: u32, panels: usize, order: usize) -> f64 {
    let (gx, gw) = gauss_legendre(order);
    let tau_q = |x: f64, y: f64| {
        let r = (-2.0 * PI * y).exp();
        Complex64::from_polar(r, 2.0 * PI * x)
    };
    let mut total = 0.0;
    // |f|^2 is even in x for real coefficients: integrate over [0, 1/2].
    let hx = 0.5 / panels as f64;
    for px in 0..panels {
        let x0 = px as f64 * hx;
        for (&u, &wu) in gx.iter().zip(&gw) {
            let x = x0 + 0.5 * hx * (u + 1.0);
            let y0 = (1.0 - x * x).sqrt();
            let ypanels = panels * ((PETERSSON_Y_MAX - y0).ceil() as usize);
            let hy = (PETERSSON_Y_MAX - y0) / ypanels as f64;
            let mut inner = 0.0;
            for py in 0..ypanels {
                let ya = y0 + py as f64 * hy;
                for (&v, &wv) in gx.iter().zip(&gw) {
                    let y = ya + 0.5 * hy * (v + 1.0);
                    let val = f.eval(tau_q(x, y)).norm_sqr() * y.powi(weight as i32 - 2);
                    inner += 0.5 * hy * wv * val;
                }
            }
            total += 0.5 * hx * wu * inner;
        }
    }
    2.0 * total
}

/// `(f, f)` = integral of `|f|^2 y^weight dx dy / y^2` over the standard
/// fundamental domain of `SL_2(Z)`, cut at `Im tau = 12`, by composite
/// Gauss–Legendre quadrature refined until two levels agree to `1e-11`.
pub fn petersson_norm_numeric(f: &QSeries, weight: u32) -> Result<f64, SvpError> {
    if f.is_zero() {
        return Ok(0.0);
    }
    // |q| <= e^{-pi sqrt 3} on the domain; the unknown tail starts at q^{T+1}.
    let need = 12;
    if f.truncation() < need {
        return Err(SvpError::TooFewTerms {
            need,
            have: f.truncation(),
        });
    }
    let mut prev = petersson_at_level(f, weight, 1, 20);
    let mut change = f64::INFINITY;
    for panels in [2usize, 4, 8] {
        let cur = petersson_at_level(f, weight, panels, 20);
        change = ((cur - prev) / cur).abs();
        if change < 1e-11 {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(SvpError::Quadrature(change))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_approximation() {
        let r = nearest_rational(0.333_333_333, 10);
        assert_eq!((r.numer, r.denom), (1, 3));
        let r = nearest_rational(-0.952086, 12);
        assert_eq!((r.numer, r.denom), (-11, 12));
        let r = nearest_rational(std::f64::consts::PI, 1000);
        assert_eq!((r.numer, r.denom), (355, 113));
        let r = nearest_rational(-49.0, 12);
        assert_eq!((r.numer, r.denom, r.distance), (-49, 1, 0.0));
        let r = nearest_rational(0.0, 5);
        assert_eq!((r.numer, r.denom), (0, 1));
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(10);
        let s: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(18)).sum();
        assert!((s - 2.0 / 19.0).abs() < 1e-14);
        assert!((w.iter().sum::<f64>() - 2.0).abs() < 1e-14);
    }

    #[test]
    fn level_one_basis_sizes() {
        assert_eq!(cusp_form_basis(1, 24, 5).unwrap().len(), 2);
        assert_eq!(cusp_form_basis(1, 12, 5).unwrap().len(), 1);
        assert!(cusp_form_basis(37, 2, 5).is_err());
    }

    #[test]
    fn weight_24_newforms() {
        let f = numeric_newforms(1, 24, 3).unwrap();
        let disc = 144169f64.sqrt();
        let mut a2: Vec<f64> = f.iter().map(|c| c[1]).collect();
        a2.sort_by(|a, b| b.total_cmp(a));
        assert!((a2[0] - (540.0 + 12.0 * disc)).abs() < 1e-8);
        assert!((a2[1] - (540.0 - 12.0 * disc)).abs() < 1e-8);
    }

    #[test]
    fn dual_forms_are_normalised() {
        for case in catalog::rank_two_table() {
            let g = dual_form(case, 6).unwrap();
            let kfact = factorial_f64(case.k());
            assert_eq!(g.valuation(), Some(-1), "{case:?}");
            assert!((g.coeff_f64(-1).unwrap() * kfact - 1.0).abs() < 1e-12);
            assert_eq!(g.coeff_f64(0).unwrap(), 0.0, "{case:?}");
            if case.weight > 2 {
                assert_eq!(g.coeff_f64(1).unwrap(), 0.0, "{case:?}");
            }
        }
    }
}
