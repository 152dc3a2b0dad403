//! The 29 pairs `(N, k + 2)` with `dim S_{k+2}(Gamma_0(N)) = 1`, recipes for
//! their normalised newforms, and elliptic-curve models for weight 2.

use std::fs;
use std::path::{Path, PathBuf};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::Serialize;
use thiserror::Error;

use crate::arith::{euler_phi, factorize, gcd};
use crate::curve::WeierstrassModel;
use crate::qexp::{self, delta, level_one_monomial, EtaFactor, QSeries, QSeriesError};

/// Environment variable overriding the directory holding `.qexp` files.
pub const DATA_DIR_ENV: &str = "SVP_DATA_DIR";

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("({level}, {weight}) is not a rank-two case")]
    NotInTable { level: u64, weight: u32 },
    #[error("level {0} is not a weight-2 rank-two level")]
    NoCurve(u64),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path} holds coefficients up to q^{have}, q^{need} requested")]
    TooShort { path: PathBuf, need: i64, have: i64 },
    #[error("recipe for ({level}, {weight}) does not give a normalised newform")]
    RecipeMismatch { level: u64, weight: u32 },
    #[error(transparent)]
    Series(#[from] QSeriesError),
}

/// One row of the rank-two table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct RankTwoCase {
    pub level: u64,
    pub weight: u32,
    pub cm: bool,
}

impl RankTwoCase {
    /// `k` in weight `k + 2`.
    pub fn k(&self) -> u32 {
        self.weight - 2
    }
}

/// How the newform of a case is produced.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Recipe {
    /// `prod eta(d tau)^{r_d}`.
    EtaQuotient(Vec<EtaFactor>),
    /// `Delta E_4^e4 E_6^e6` at level 1.
    LevelOne { e4: u32, e6: u32 },
    /// A shipped `.qexp` file, relative to the data directory.
    File(&'static str),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NewformSpec {
    pub case: RankTwoCase,
    pub recipe: Recipe,
    pub curve: Option<WeierstrassModel>,
}

const CM_CASES: [(u64, u32); 5] = [(9, 4), (27, 2), (32, 2), (36, 2), (49, 2)];

const TABLE: [(u64, u32); 29] = [
    (1, 12),
    (1, 16),
    (1, 18),
    (1, 20),
    (1, 22),
    (1, 26),
    (2, 8),
    (2, 10),
    (3, 6),
    (3, 8),
    (4, 6),
    (5, 4),
    (5, 6),
    (6, 4),
    (7, 4),
    (8, 4),
    (9, 4),
    (11, 2),
    (14, 2),
    (15, 2),
    (17, 2),
    (19, 2),
    (20, 2),
    (21, 2),
    (24, 2),
    (27, 2),
    (32, 2),
    (36, 2),
    (49, 2),
];

/// All rank-two cases, ordered by level then weight.
pub fn rank_two_table() -> Vec<RankTwoCase> {
    TABLE
        .iter()
        .map(|&(level, weight)| RankTwoCase {
            level,
            weight,
            cm: CM_CASES.contains(&(level, weight)),
        })
        .collect()
}

/// Looks up `(level, weight)` in the table.
pub fn find_case(level: u64, weight: u32) -> Result<RankTwoCase, CatalogError> {
    rank_two_table()
        .into_iter()
        .find(|c| c.level == level && c.weight == weight)
        .ok_or(CatalogError::NotInTable { level, weight })
}

/// `dim S_weight(Gamma_0(level))` for even `weight >= 2`, from the genus,
/// the elliptic points and the cusps of `X_0(level)`.
pub fn cusp_form_dimension(level: u64, weight: u32) -> u64 {
    assert!(level >= 1 && weight >= 2 && weight.is_multiple_of(2));
    let primes: Vec<u64> = factorize(level).into_iter().map(|(p, _)| p).collect();
    // index, elliptic points of order 2 and 3, cusps; all times 12 to stay integral
    let mu = primes.iter().fold(level, |acc, &p| acc / p * (p + 1)) as i64;
    let legendre = |p: u64, d: i64| -> i64 {
        // Kronecker symbol (d / p) for d in {-1, -3}
        if p == 2 {
            return if d == -1 { 0 } else { -1 };
        }
        if p == 3 && d == -3 {
            return 0;
        }
        let r = (d.rem_euclid(p as i64)) as u64;
        if crate::arith::euler_criterion(r, p) { 1 } else { -1 }
    };
    let nu2: i64 = if level.is_multiple_of(4) {
        0
    } else {
        primes.iter().map(|&p| 1 + legendre(p, -1)).product()
    };
    let nu3: i64 = if level.is_multiple_of(9) {
        0
    } else {
        primes.iter().map(|&p| 1 + legendre(p, -3)).product()
    };
    let cusps: i64 = (1..=level)
        .filter(|d| level.is_multiple_of(*d))
        .map(|d| euler_phi(gcd(d as i64, (level / d) as i64)) as i64)
        .sum();
    // 12 g = 12 + mu - 3 nu2 - 4 nu3 - 6 cusps
    let twelve_g = 12 + mu - 3 * nu2 - 4 * nu3 - 6 * cusps;
    let g = twelve_g / 12;
    if weight == 2 {
        return g as u64;
    }
    let k = weight as i64;
    let dim = (k - 1) * (g - 1) + (k / 2 - 1) * cusps + nu2 * (k / 4) + nu3 * (k / 3);
    dim.max(0) as u64
}

const CURVES_TXT: &str = include_str!("../data/curves.txt");

/// Minimal model of the elliptic curve `X_0(N)` for a weight-2 rank-two level.
pub fn curve_model(level: u64) -> Result<WeierstrassModel, CatalogError> {
    let curves = parse_curves(CURVES_TXT, Path::new("data/curves.txt"))?;
    curves
        .into_iter()
        .find(|(n, _)| *n == level)
        .map(|(_, m)| m)
        .ok_or(CatalogError::NoCurve(level))
}

/// Parses the curve file format: `N a1 a2 a3 a4 a6` per line, `#` comments.
pub fn parse_curves(
    text: &str,
    path: &Path,
) -> Result<Vec<(u64, WeierstrassModel)>, CatalogError> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_err = |message: String| CatalogError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 6 {
            return Err(parse_err(format!("expected 6 fields, found {}", fields.len())));
        }
        let n: u64 = fields[0]
            .parse()
            .map_err(|e| parse_err(format!("bad level {:?}: {e}", fields[0])))?;
        let mut a = [0i64; 5];
        for (slot, f) in a.iter_mut().zip(&fields[1..]) {
            *slot = f
                .parse()
                .map_err(|e| parse_err(format!("bad coefficient {f:?}: {e}")))?;
        }
        out.push((n, WeierstrassModel::new(a[0], a[1], a[2], a[3], a[4])));
    }
    Ok(out)
}

/// Recipe and optional curve for a table case.
pub fn newform_spec(case: RankTwoCase) -> Result<NewformSpec, CatalogError> {
    let level_one = |e4, e6| Recipe::LevelOne { e4, e6 };
    let recipe = match (case.level, case.weight) {
        (1, 12) => level_one(0, 0),
        (1, 16) => level_one(1, 0),
        (1, 18) => level_one(0, 1),
        (1, 20) => level_one(2, 0),
        (1, 22) => level_one(1, 1),
        (1, 26) => level_one(2, 1),
        (2, 8) => Recipe::EtaQuotient(vec![(1, 8), (2, 8)]),
        (2, 10) => Recipe::File("newform_2_10.qexp"),
        (3, 6) => Recipe::EtaQuotient(vec![(1, 6), (3, 6)]),
        (3, 8) => Recipe::File("newform_3_8.qexp"),
        (4, 6) => Recipe::EtaQuotient(vec![(2, 12)]),
        (5, 4) => Recipe::EtaQuotient(vec![(1, 4), (5, 4)]),
        (5, 6) => Recipe::File("newform_5_6.qexp"),
        (6, 4) => Recipe::EtaQuotient(vec![(1, 2), (2, 2), (3, 2), (6, 2)]),
        (7, 4) => Recipe::File("newform_7_4.qexp"),
        (8, 4) => Recipe::EtaQuotient(vec![(2, 4), (4, 4)]),
        (9, 4) => Recipe::EtaQuotient(vec![(3, 8)]),
        (11, 2) => Recipe::EtaQuotient(vec![(1, 2), (11, 2)]),
        (14, 2) => Recipe::EtaQuotient(vec![(1, 1), (2, 1), (7, 1), (14, 1)]),
        (15, 2) => Recipe::EtaQuotient(vec![(1, 1), (3, 1), (5, 1), (15, 1)]),
        (17, 2) => Recipe::File("newform_17_2.qexp"),
        (19, 2) => Recipe::File("newform_19_2.qexp"),
        (20, 2) => Recipe::EtaQuotient(vec![(2, 2), (10, 2)]),
        (21, 2) => Recipe::File("newform_21_2.qexp"),
        (24, 2) => Recipe::EtaQuotient(vec![(2, 1), (4, 1), (6, 1), (12, 1)]),
        (27, 2) => Recipe::EtaQuotient(vec![(3, 2), (9, 2)]),
        (32, 2) => Recipe::EtaQuotient(vec![(4, 2), (8, 2)]),
        (36, 2) => Recipe::EtaQuotient(vec![(6, 4)]),
        (49, 2) => Recipe::File("newform_49_2.qexp"),
        (level, weight) => return Err(CatalogError::NotInTable { level, weight }),
    };
    let curve = if case.weight == 2 {
        Some(curve_model(case.level)?)
    } else {
        None
    };
    Ok(NewformSpec {
        case,
        recipe,
        curve,
    })
}

/// Directory holding the shipped `.qexp` files.
pub fn data_dir() -> PathBuf {
    std::env::var_os(DATA_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| Path::new(env!("CARGO_MANIFEST_DIR")).join("data"))
}

/// Normalised newform of a table case, known to `truncation`.
pub fn newform_qexp(case: RankTwoCase, truncation: i64) -> Result<QSeries, CatalogError> {
    newform_qexp_from(case, truncation, &data_dir())
}

/// As [`newform_qexp`], reading `File` recipes from `dir`.
pub fn newform_qexp_from(
    case: RankTwoCase,
    truncation: i64,
    dir: &Path,
) -> Result<QSeries, CatalogError> {
    let spec = newform_spec(case)?;
    let f = match &spec.recipe {
        Recipe::EtaQuotient(factors) => qexp::eta_quotient(factors, truncation)?,
        Recipe::LevelOne { e4, e6 } => {
            let w = 4 * e4 + 6 * e6;
            let m = level_one_monomial(w, truncation).expect("even weight other than 2");
            &delta(truncation) * &m
        }
        Recipe::File(name) => {
            let path = dir.join(name);
            let f = load_qexp_file(&path)?;
            if f.truncation() < truncation {
                return Err(CatalogError::TooShort {
                    path,
                    need: truncation,
                    have: f.truncation(),
                });
            }
            f.truncate(truncation)
        }
    };
    let one = BigRational::from_integer(BigInt::from(1));
    if truncation >= 1 && (f.valuation() != Some(1) || f.coeff(1)? != one) {
        return Err(CatalogError::RecipeMismatch {
            level: case.level,
            weight: case.weight,
        });
    }
    Ok(f)
}

/// Reads the `.qexp` format: `<exponent> <rational>` per line, `#` comments,
/// strictly increasing exponents, absent exponents zero. The truncation is
/// the last exponent listed, or the value of a `# truncation: T` header if
/// present.
pub fn load_qexp_file(path: &Path) -> Result<QSeries, CatalogError> {
    let text = fs::read_to_string(path).map_err(|source| CatalogError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_qexp(&text, path)
}

pub fn parse_qexp(text: &str, path: &Path) -> Result<QSeries, CatalogError> {
    let mut terms = Vec::new();
    let mut last: Option<i64> = None;
    let mut declared: Option<i64> = None;
    for (i, raw) in text.lines().enumerate() {
        let parse_err = |message: String| CatalogError::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let (body, comment) = match raw.split_once('#') {
            Some((b, c)) => (b, Some(c)),
            None => (raw, None),
        };
        if let Some(t) = comment.and_then(|c| c.trim().strip_prefix("truncation:")) {
            declared = Some(
                t.trim()
                    .parse()
                    .map_err(|e| parse_err(format!("bad truncation {t:?}: {e}")))?,
            );
        }
        let body = body.trim();
        if body.is_empty() {
            continue;
        }
        let mut it = body.split_whitespace();
        let (Some(e), Some(c), None) = (it.next(), it.next(), it.next()) else {
            return Err(parse_err(format!("expected '<exponent> <rational>', found {body:?}")));
        };
        let n: i64 = e
            .parse()
            .map_err(|err| parse_err(format!("bad exponent {e:?}: {err}")))?;
        if last.is_some_and(|l| n <= l) {
            return Err(parse_err(format!("exponent {n} is not increasing")));
        }
        last = Some(n);
        let coeff = parse_rational(c).ok_or_else(|| parse_err(format!("bad rational {c:?}")))?;
        terms.push((n, coeff));
    }
    let truncation = match (declared, last) {
        (Some(t), Some(l)) if t < l => {
            return Err(CatalogError::Parse {
                path: path.to_path_buf(),
                line: 0,
                message: format!("declared truncation {t} below last exponent {l}"),
            })
        }
        (Some(t), _) => t,
        (None, Some(l)) => l,
        (None, None) => -1,
    };
    Ok(QSeries::from_terms(terms, truncation))
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.parse().ok()?;
            let q: BigInt = q.parse().ok()?;
            (q != BigInt::from(0)).then(|| BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

/// Writes a series in the `.qexp` format.
pub fn format_qexp(f: &QSeries, header: &str) -> String {
    let mut out = String::new();
    for line in header.lines() {
        out.push_str("# ");
        out.push_str(line);
        out.push('\n');
    }
    out.push_str(&format!("# truncation: {}\n", f.truncation()));
    for (n, c) in f.terms() {
        out.push_str(&format!("{n} {c}\n"));
    }
    out
}
