//! The reproduction checks run by `svp verify` and the acceptance tests.
//!
//! Each check compares measured values with fixed expectations and reports
//! one PASS/FAIL verdict with the individual measurements behind it.

use std::f64::consts::PI;
use std::fmt;
use std::path::{Path, PathBuf};
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::arith::is_prime;
use crate::catalog::{self, newform_qexp_from, rank_two_table, Recipe, RankTwoCase};
use crate::periods::{check_block_relations, PeriodLattice};
use crate::poincare::{poincare_coeffs, poincare_qexp, Control, PoincareError};
use crate::qexp::{
    bol, de_rham_pairing, delta, dual_form_level1, eisenstein, hecke_tp, j_invariant, QSeries,
    QSeriesError,
};
use crate::svp::{
    self, cm_rationality_check, petersson_norm_numeric, poincare_rational_relations,
    predicted_coeffs_from_periods, rank2_c_from_poincare, rank2_rho, RationalityCriterion, Route,
    SvpError,
};

#[derive(Debug, Error)]
pub enum VerifyError {
    #[error(transparent)]
    Poincare(#[from] PoincareError),
    #[error(transparent)]
    Svp(#[from] SvpError),
    #[error(transparent)]
    Catalog(#[from] catalog::CatalogError),
    #[error(transparent)]
    Series(#[from] QSeriesError),
    #[error(transparent)]
    Period(#[from] crate::periods::PeriodError),
}

/// Which checks to run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    /// Skips the checks budgeted over 10 s.
    Fast,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
            Status::Error => "ERROR",
        })
    }
}

/// How a measurement is compared with its expectation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Compare {
    /// `|measured - expected| <= tolerance`
    Absolute,
    /// `|measured - expected| <= tolerance |expected|`
    Relative,
    /// `measured <= expected` (budgets and upper bounds)
    AtMost,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Measurement {
    pub label: String,
    pub measured: f64,
    pub expected: f64,
    pub tolerance: f64,
    pub compare: Compare,
    pub pass: bool,
}

impl Measurement {
    pub fn new(label: impl Into<String>, measured: f64, expected: f64, tolerance: f64, compare: Compare) -> Self {
        let err = (measured - expected).abs();
        let pass = match compare {
            Compare::Absolute => err <= tolerance,
            Compare::Relative => err <= tolerance * expected.abs(),
            Compare::AtMost => measured <= expected,
        };
        Self {
            label: label.into(),
            measured,
            expected,
            tolerance,
            compare,
            pass,
        }
    }

    fn abs(label: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        Self::new(label, measured, expected, tol, Compare::Absolute)
    }

    fn rel(label: impl Into<String>, measured: f64, expected: f64, tol: f64) -> Self {
        Self::new(label, measured, expected, tol, Compare::Relative)
    }

    fn at_most(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self::new(label, measured, bound, 0.0, Compare::AtMost)
    }

    /// An exact yes/no property: measured 1 when it holds.
    fn holds(label: impl Into<String>, ok: bool) -> Self {
        Self::new(label, if ok { 1.0 } else { 0.0 }, 1.0, 0.0, Compare::Absolute)
    }
}

impl fmt::Display for Measurement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "ok" } else { "MISMATCH" };
        match self.compare {
            Compare::AtMost => write!(
                f,
                "{}: {:.6e} <= {:.6e} [{verdict}]",
                self.label, self.measured, self.expected
            ),
            c => write!(
                f,
                "{}: measured {:.9}, expected {:.9}, tol {:.1e}{} [{verdict}]",
                self.label,
                self.measured,
                self.expected,
                self.tolerance,
                if c == Compare::Relative { " rel" } else { "" }
            ),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckReport {
    pub id: u32,
    pub title: &'static str,
    pub status: Status,
    pub seconds: f64,
    pub measurements: Vec<Measurement>,
    /// A failure that is understood and expected, with its explanation.
    pub known_deviation: Option<&'static str>,
    pub error: Option<String>,
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {:>2}  {} ({:.1} s)", self.status, self.id, self.title, self.seconds)?;
        if let Some(e) = &self.error {
            write!(f, "\n      error: {e}")?;
        }
        for m in &self.measurements {
            write!(f, "\n      {m}")?;
        }
        if let (Some(why), Status::Fail) = (self.known_deviation, self.status) {
            write!(f, "\n      known deviation: {why}")?;
        }
        Ok(())
    }
}

type CheckFn = fn(&CheckContext) -> Result<Vec<Measurement>, VerifyError>;

pub struct Check {
    pub id: u32,
    pub title: &'static str,
    /// Budgeted over 10 s; skipped by [`Suite::Fast`].
    pub slow: bool,
    pub known_deviation: Option<&'static str>,
    run: CheckFn,
}

/// Inputs shared by the checks.
#[derive(Clone, Debug)]
pub struct CheckContext {
    /// Directory holding the `.qexp` files.
    pub data_dir: PathBuf,
}

impl Default for CheckContext {
    fn default() -> Self {
        Self {
            data_dir: catalog::data_dir(),
        }
    }
}

const P_MINUS_TWO_NOTE: &str = "the expected coefficient -35 at n = 2 is a misprint: \
P_{-2,6,4}(tau) = P_{-1,6,2}(2 tau) and dim S_6(Gamma_0(2)) = 0 force \
q^-2 - 36 q^2 + 4096 q^4 - 97686 q^6 + ... exactly";

pub fn checks() -> Vec<Check> {
    let c = |id, title, slow, run: CheckFn| Check {
        id,
        title,
        slow,
        known_deviation: None,
        run,
    };
    vec![
        c(1, "P_{-1,2,1} against -Dj", true, check_j_derivative),
        Check {
            known_deviation: Some(P_MINUS_TWO_NOTE),
            ..c(2, "P_{-2,6,4} coefficients", false, check_p_minus_two)
        },
        c(3, "P_{-1,4,9} coefficients and CM rationality", false, check_p_nine),
        c(4, "period matrix and S of X_0(11)", false, check_level_eleven_periods),
        c(5, "a_1(P_{1,2,11}) and a_1(P_{-1,2,11}) by both routes", true, check_two_routes),
        c(6, "rank-two proportionality P_1 = lambda f", false, check_proportionality),
        c(7, "block relations of S for every weight-2 curve", false, check_block_relations_all),
        c(8, "exact de Rham pairing identities", false, check_pairings),
        c(9, "Hecke eigenforms and point counts", false, check_hecke),
        c(10, "Petersson norm of Delta against c(1, 12)", false, check_petersson),
        c(11, "rational relation P_3 = l1 P_1 + l2 P_2 in weight 24", false, check_relation),
        c(12, "CM rationality negative control", false, check_negative_control),
    ]
}

/// Runs the suite; `only` restricts to the given check ids.
pub fn run_suite(suite: Suite, only: Option<&[u32]>, ctx: &CheckContext) -> Vec<CheckReport> {
    checks()
        .into_iter()
        .filter(|c| only.is_none_or(|ids| ids.contains(&c.id)))
        .map(|c| {
            if suite == Suite::Fast && c.slow {
                return CheckReport {
                    id: c.id,
                    title: c.title,
                    status: Status::Skipped,
                    seconds: 0.0,
                    measurements: Vec::new(),
                    known_deviation: c.known_deviation,
                    error: None,
                };
            }
            run_check(&c, ctx)
        })
        .collect()
}

pub fn run_check(c: &Check, ctx: &CheckContext) -> CheckReport {
    let start = Instant::now();
    let result = (c.run)(ctx);
    let seconds = start.elapsed().as_secs_f64();
    let (status, measurements, error) = match result {
        Ok(ms) => {
            let ok = !ms.is_empty() && ms.iter().all(|m| m.pass);
            (if ok { Status::Pass } else { Status::Fail }, ms, None)
        }
        Err(e) => (Status::Error, Vec::new(), Some(e.to_string())),
    };
    CheckReport {
        id: c.id,
        title: c.title,
        status,
        seconds,
        measurements,
        known_deviation: c.known_deviation,
        error,
    }
}

fn check_j_derivative(_: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let expected = [-196884.0, -42987520.0, -2592899910.0];
    let p = poincare_qexp(-1, 2, 1, 3, Control::CMax(100_000))?;
    let mut out: Vec<Measurement> = expected
        .iter()
        .enumerate()
        .map(|(i, &e)| Measurement::rel(format!("a_{}(P_-1) series", i + 1), p.coeffs[i].value, e, 5e-3))
        .collect();
    let dj = bol(&(-&j_invariant(4)), 0);
    for (i, &e) in expected.iter().enumerate() {
        let exact = dj.coeff(i as i64 + 1)?;
        out.push(Measurement::holds(
            format!("a_{}(-Dj) = {e} exactly", i + 1),
            exact == BigRational::from_integer(BigInt::from(e as i64)),
        ));
    }
    out.push(Measurement::holds("-Dj has principal part q^-1", dj.coeff(-1)? == int(1) && dj.coeff(0)? == int(0)));
    Ok(out)
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

fn check_p_minus_two(_: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let start = Instant::now();
    let p = poincare_qexp(-2, 6, 4, 6, Control::CMax(10_000))?;
    let secs = start.elapsed().as_secs_f64();
    let expected = [(2, -35.0), (4, 4096.0), (6, -97686.0)];
    let mut out = Vec::new();
    for (n, e) in expected {
        out.push(Measurement::abs(format!("a_{n}"), p.get(n).unwrap_or(f64::NAN), e, 1e-4));
    }
    for n in [1, 3, 5] {
        out.push(Measurement::abs(format!("a_{n} (odd)"), p.get(n).unwrap_or(f64::NAN), 0.0, 1e-4));
    }
    out.push(Measurement::at_most("seconds", secs, 5.0));
    Ok(out)
}

fn check_p_nine(_: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let control = Control::Tol { tol: 1e-5, cap: 1_000_000 };
    let p = poincare_qexp(-1, 4, 9, 12, control)?;
    let mut out = Vec::new();
    for (n, e) in [(2, 2.0), (5, -49.0), (8, 48.0), (11, 771.0)] {
        out.push(Measurement::abs(format!("a_{n}"), p.get(n).unwrap_or(f64::NAN), e, 1e-4));
    }
    let off = (1..=12u64)
        .filter(|n| n % 3 != 2)
        .map(|n| p.get(n).unwrap_or(f64::NAN).abs())
        .fold(0.0, f64::max);
    out.push(Measurement::abs("max |a_n|, n != 2 mod 3", off, 0.0, 1e-4));
    let case = catalog::find_case(9, 4)?;
    let report = cm_rationality_check(case, 12, control, RationalityCriterion::default())?;
    out.push(Measurement::holds("CM rational reconstruction of (9, 4)", report.pass));
    Ok(out)
}

fn check_level_eleven_periods(_: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let lattice = PeriodLattice::from_model(&catalog::curve_model(11)?)?;
    let s = lattice.sv_matrix()?;
    let tol = 5e-6;
    let mut out = vec![
        Measurement::abs("omega_1", lattice.omega1.re, 1.269209, tol),
        Measurement::abs("Im omega_1", lattice.omega1.im, 0.0, tol),
        Measurement::abs("eta_1", lattice.eta1.re, -2.214333, tol),
        Measurement::abs("Im eta_1", lattice.eta1.im, 0.0, tol),
        Measurement::abs("Re omega_2", lattice.omega2.re, 0.634604, tol),
        Measurement::abs("Im omega_2", lattice.omega2.im, 1.458816, tol),
        Measurement::abs("Re eta_2", lattice.eta2.re, -1.107166, tol),
        Measurement::abs("Im eta_2", lattice.eta2.im, 2.405338, tol),
        Measurement::abs("s_11", s.entries[(0, 0)], -0.028238, tol),
        Measurement::abs("s_12", s.entries[(0, 1)], -1.695389, tol),
        Measurement::abs("s_21", s.entries[(1, 0)], -0.589364, tol),
        Measurement::abs("s_22", s.entries[(1, 1)], 0.028238, tol),
        Measurement::at_most("|det P - 2 pi i|", lattice.legendre_residual().norm(), 1e-10),
    ];
    let report = check_block_relations(&s);
    out.push(Measurement::at_most("|S^2 - 1|", report.involution, 1e-9));
    out.push(Measurement::at_most("|Tr S|", report.trace, 1e-9));
    Ok(out)
}

fn check_two_routes(_: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let pred = predicted_coeffs_from_periods(11)?;
    let start = Instant::now();
    let control = Control::CMax(1_000_000);
    let p1 = poincare_coeffs(1, 2, 11, &[1], control)?[0].value;
    let pm1 = poincare_coeffs(-1, 2, 11, &[1], control)?[0].value;
    let secs = start.elapsed().as_secs_f64();
    Ok(vec![
        Measurement::abs("a_1(P_1) from periods", pred.a1_p1, 1.696742, 1e-5),
        Measurement::abs("a_1(P_-1) from periods", pred.a1_pm1, -0.952086, 1e-5),
        Measurement::abs("a_1(P_1) from Kloosterman series", p1, 1.696742, 5e-3),
        Measurement::abs("a_1(P_-1) from Kloosterman series", pm1, -0.952086, 5e-3),
        Measurement::at_most("series seconds", secs, 60.0),
    ])
}

/// Tolerance on Poincaré coefficients: weight 2 converges like a power
/// `c^{-1/2}` of the cutoff, higher weights much faster.
fn weight_tolerance(weight: u32) -> f64 {
    if weight == 2 {
        5e-3
    } else {
        1e-4
    }
}

fn proportionality_control(weight: u32) -> Control {
    Control::CMax(if weight == 2 { 100_000 } else { 10_000 })
}

fn check_proportionality(ctx: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let mut out = Vec::new();
    for case in rank_two_table() {
        let spec = catalog::newform_spec(case)?;
        if matches!(spec.recipe, Recipe::File(_)) {
            continue;
        }
        let f = newform_qexp_from(case, 8, &ctx.data_dir)?;
        let ns: Vec<u64> = (1..=8).collect();
        let p = poincare_coeffs(1, case.weight, case.level, &ns, proportionality_control(case.weight))?;
        let worst = proportionality_defect(&f, &p.iter().map(|c| c.value).collect::<Vec<_>>())?;
        out.push(Measurement::abs(
            format!("({}, {}) max relative defect", case.level, case.weight),
            worst,
            0.0,
            weight_tolerance(case.weight),
        ));
    }
    Ok(out)
}

/// `max_n |a_n(P) - r a_n(f)| / (|r| max(1, |a_n(f)|))` with
/// `r = a_1(P)/a_1(f)`.
pub fn proportionality_defect(f: &QSeries, p: &[f64]) -> Result<f64, QSeriesError> {
    let r = p[0] / f.coeff_f64(1)?;
    let mut worst: f64 = 0.0;
    for (i, &v) in p.iter().enumerate() {
        let a = f.coeff_f64(i as i64 + 1)?;
        worst = worst.max((v - r * a).abs() / (r.abs() * a.abs().max(1.0)));
    }
    Ok(worst)
}

fn check_block_relations_all(_: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let mut out = Vec::new();
    for case in rank_two_table().into_iter().filter(|c| c.weight == 2) {
        let r = rank2_rho(case, Route::Periods, 1, Control::CMax(1))?;
        let s = r.sv_matrix().expect("route A gives rho");
        let rep = check_block_relations(&s);
        let worst = rep
            .c_symmetric
            .max(rep.d_relation)
            .max(rep.b_relation.unwrap_or(f64::INFINITY));
        out.push(Measurement::at_most(format!("level {} max residual", case.level), worst, 1e-8));
    }
    Ok(out)
}

fn random_laurent(rng: &mut ChaCha8Rng) -> QSeries {
    let start = rng.random_range(-4i64..=2);
    let t = rng.random_range(6i64..=10);
    let terms: Vec<(i64, BigRational)> = (start..=t)
        .filter(|&n| n != 0)
        .map(|n| {
            let num = rng.random_range(-9i64..=9);
            let den = rng.random_range(1i64..=5);
            (n, BigRational::new(num.into(), den.into()))
        })
        .collect();
    QSeries::from_terms(terms, t)
}

fn check_pairings(_: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut failures = 0;
    for _ in 0..50 {
        let f = random_laurent(&mut rng);
        let g = random_laurent(&mut rng);
        let k = 2 * rng.random_range(0u32..=5);
        let fg = de_rham_pairing(&f, &g, k)?;
        let gf = de_rham_pairing(&g, &f, k)?;
        if fg != -gf {
            failures += 1;
        }
    }
    let t = 14;
    let e4 = eisenstein(4, t)?;
    let e6 = eisenstein(6, t)?;
    let h = &(&(&e4 * &e4) * &e6) * &delta(t + 2).pow(-2)?;
    let exact_bol = de_rham_pairing(&delta(t), &bol(&h.truncate(8), 10), 10)?;
    let g = dual_form_level1(12, 12)?;
    let dg = de_rham_pairing(&delta(14), &g, 10)?;
    Ok(vec![
        Measurement::abs("antisymmetry failures in 50 random pairs", failures as f64, 0.0, 0.0),
        Measurement::holds("<Delta, D^11(E4^2 E6 / Delta^2)> = 0", exact_bol == int(0)),
        Measurement::holds("<Delta, g_12> = 1", dg == int(1)),
        Measurement::holds("a_0(g_12) = a_1(g_12) = 0", g.coeff(0)? == int(0) && g.coeff(1)? == int(0)),
        Measurement::holds("a_-1(g_12) = 1/10!", g.coeff(-1)? == BigRational::new(1.into(), 3_628_800.into())),
    ])
}

/// Exact Hecke eigen-relations and point counts for one catalog form.
pub fn hecke_defects(case: RankTwoCase, dir: &Path) -> Result<Vec<Measurement>, VerifyError> {
    let t = 210;
    let f = newform_qexp_from(case, t, dir)?;
    let mut out = Vec::new();
    let mut eigen = true;
    for p in [2u64, 3, 5, 7].into_iter().filter(|p| !case.level.is_multiple_of(*p)) {
        let tp = hecke_tp(&f, p, case.k())?;
        let ap = f.coeff(p as i64)?;
        let scaled = f.scalar_mul(&ap).truncate(tp.truncation());
        eigen &= tp == scaled;
    }
    let normalised = f.valuation() == Some(1) && f.coeff(1)? == int(1);
    out.push(Measurement::holds(
        format!("({}, {}) T_p f = a_p f for p in 2,3,5,7", case.level, case.weight),
        eigen && normalised,
    ));
    if let Some(model) = catalog::newform_spec(case)?.curve {
        let ok = (2..=13u64)
            .filter(|&p| is_prime(p) && !case.level.is_multiple_of(p))
            .all(|p| f.coeff(p as i64).ok() == Some(int(model.trace_of_frobenius(p))));
        out.push(Measurement::holds(
            format!("({}, 2) a_p = p + 1 - #E(F_p) for p <= 13", case.level),
            ok,
        ));
    }
    Ok(out)
}

fn check_hecke(ctx: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let mut out = Vec::new();
    for case in rank_two_table() {
        match hecke_defects(case, &ctx.data_dir) {
            Ok(ms) => out.extend(ms),
            Err(e) => out.push(Measurement::holds(
                format!("({}, {}) newform available: {e}", case.level, case.weight),
                false,
            )),
        }
    }
    Ok(out)
}

fn check_petersson(ctx: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let case = catalog::find_case(1, 12)?;
    let f = newform_qexp_from(case, 40, &ctx.data_dir)?;
    let norm = petersson_norm_numeric(&f, 12)?;
    let c = rank2_c_from_poincare(case, &[(1, 1)], Control::CMax(2000))?.c;
    Ok(vec![Measurement::rel(
        "(4 pi)^11 (Delta, Delta) against -c",
        (4.0 * PI).powi(11) * norm,
        -c,
        1e-4,
    )])
}

fn check_relation(_: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let r = poincare_rational_relations(1, 24, 3, &[1, 2], 8, Control::CMax(2000))?;
    let mut out = Vec::new();
    for (i, q) in r.mu_rational.iter().enumerate() {
        out.push(Measurement::at_most(
            format!("mu_{} = {:.6} distance to {}/{}", i + 1, r.mu[i], q.numer, q.denom),
            q.distance,
            1e-4,
        ));
        out.push(Measurement::at_most(
            format!("mu_{} denominator", i + 1),
            q.denom as f64,
            svp::RELATION_MAX_DEN as f64,
        ));
    }
    for res in &r.residuals {
        out.push(Measurement::abs(format!("residual at n = {}", res.n), res.deviation, 0.0, 5e-4));
    }
    Ok(out)
}

/// Control used for the CM rationality checks. Weight 2 sums ten thousand
/// multiples of the level (at least up to 1e5): its error decays only like
/// `(c_max / N)^{-1/2}`.
pub fn rationality_control(case: RankTwoCase) -> Control {
    Control::CMax(if case.weight == 2 {
        (10_000 * case.level).max(100_000)
    } else {
        10_000
    })
}

fn check_negative_control(_: &CheckContext) -> Result<Vec<Measurement>, VerifyError> {
    let criterion = RationalityCriterion::default();
    let mut out = Vec::new();
    for (level, weight, expect) in [(9, 4, true), (27, 2, true), (11, 2, false), (1, 12, false)] {
        let case = catalog::find_case(level, weight)?;
        let r = cm_rationality_check(case, 10, rationality_control(case), criterion)?;
        let verb = if expect { "passes" } else { "fails" };
        out.push(Measurement::holds(
            format!(
                "({level}, {weight}) reconstruction {verb} (denominator <= {}, tol {:.0e})",
                criterion.max_den, criterion.tol
            ),
            r.pass == expect,
        ));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn measurement_comparisons() {
        assert!(Measurement::abs("x", 1.0, 1.05, 0.1).pass);
        assert!(!Measurement::abs("x", 1.0, 1.2, 0.1).pass);
        assert!(Measurement::rel("x", 101.0, 100.0, 0.02).pass);
        assert!(!Measurement::rel("x", 103.0, 100.0, 0.02).pass);
        assert!(Measurement::at_most("x", 3.0, 5.0).pass);
        assert!(!Measurement::at_most("x", f64::NAN, 5.0).pass);
    }

    #[test]
    fn check_ids_are_one_to_twelve() {
        let ids: Vec<u32> = checks().iter().map(|c| c.id).collect();
        assert_eq!(ids, (1..=12).collect::<Vec<_>>());
    }
}
