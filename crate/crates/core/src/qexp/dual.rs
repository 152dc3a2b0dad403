//! Weakly holomorphic forms `g` dual to a rank-two newform `f`: pole of order
//! one at the cusp at infinity only, `a_0(g) = a_1(g) = 0` and
//! `<f, g> = 1`, i.e. `a_{-1}(g) = 1/k!`.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::{delta, eisenstein, eta_quotient, j_invariant, EtaFactor, QSeries, QSeriesError};
use crate::arith::factorial;
use crate::linalg;

/// Levels `N` for which [`hauptmodul`] returns a generator of the function
/// field of `X_0(N)`.
pub const HAUPTMODUL_LEVELS: [u64; 9] = [1, 2, 3, 4, 5, 6, 7, 8, 9];

fn hauptmodul_factors(level: u64) -> Option<Vec<EtaFactor>> {
    let f = match level {
        2 => vec![(1, 24), (2, -24)],
        3 => vec![(1, 12), (3, -12)],
        4 => vec![(1, 8), (4, -8)],
        5 => vec![(1, 6), (5, -6)],
        6 => vec![(1, 5), (3, 1), (2, -1), (6, -5)],
        7 => vec![(1, 4), (7, -4)],
        8 => vec![(1, 4), (4, 2), (2, -2), (8, -4)],
        9 => vec![(1, 3), (9, -3)],
        _ => return None,
    };
    Some(f)
}

/// A modular function on `X_0(level)` with a simple pole at infinity and no
/// other poles: `j` at level 1, an eta quotient at levels 2..=9.
pub fn hauptmodul(level: u64, truncation: i64) -> Option<QSeries> {
    if level == 1 {
        return Some(j_invariant(truncation));
    }
    let factors = hauptmodul_factors(level)?;
    Some(eta_quotient(&factors, truncation).expect("hauptmodul prefactors are integral"))
}

/// The eta exponents of [`hauptmodul`] for `level >= 2`.
pub fn hauptmodul_eta_factors(level: u64) -> Option<Vec<EtaFactor>> {
    hauptmodul_factors(level)
}

fn solve_normalised(
    generators: &[QSeries],
    k: u32,
    truncation: i64,
) -> Result<QSeries, QSeriesError> {
    // Pick three independent generators from their low coefficients.
    let probe: Vec<Vec<BigRational>> = generators
        .iter()
        .map(|g| (-1..=6).map(|n| g.coeff_or_zero(n)).collect())
        .collect();
    let chosen = linalg::independent_rows(&probe);
    if chosen.len() != 3 {
        return Err(QSeriesError::Singular);
    }
    let basis: Vec<&QSeries> = chosen.iter().map(|&i| &generators[i]).collect();
    let a: Vec<Vec<BigRational>> = (-1..=1)
        .map(|n| basis.iter().map(|g| g.coeff_or_zero(n)).collect())
        .collect();
    let kfact = BigRational::from_integer(BigInt::from(factorial(k)));
    let b = vec![kfact.recip(), BigRational::zero(), BigRational::zero()];
    let x = linalg::solve(&a, &b).ok_or(QSeriesError::Singular)?;
    let mut g = QSeries::zero(truncation);
    for (xi, gi) in x.iter().zip(basis) {
        g = &g + &gi.scalar_mul(xi);
    }
    Ok(g)
}

/// Dual form in the span of `f t^e`, `e = 0, 1, 2`, where `f` is a cusp form
/// of valuation 1 and `t` a hauptmodul with a simple pole at infinity.
/// `f` must be known to `truncation + 2` and `t` to `truncation`.
pub fn dual_form_from_hauptmodul(
    f: &QSeries,
    t: &QSeries,
    k: u32,
    truncation: i64,
) -> Result<QSeries, QSeriesError> {
    let f = f.truncate(truncation + 2);
    let t = t.truncate(truncation);
    let ft = &f * &t;
    let ftt = &ft * &t;
    let gens = [f.truncate(truncation), ft.truncate(truncation), ftt.truncate(truncation)];
    solve_normalised(&gens, k, truncation)
}

/// The level-one Eisenstein monomial `E_4^b E_6^c` of weight `w`, with the
/// smallest possible power of `E_6`.
pub(crate) fn level_one_monomial(w: u32, truncation: i64) -> Option<QSeries> {
    if w % 2 == 1 || w == 2 {
        return None;
    }
    let c = if w.is_multiple_of(4) { 0 } else { 1 };
    let b = (w - 6 * c) / 4;
    let e4 = eisenstein(4, truncation).ok()?;
    let e6 = eisenstein(6, truncation).ok()?;
    Some(&e4.pow(b as i64).ok()? * &e6.pow(c as i64).ok()?)
}

/// Dual form for the level-one cusp form of weight `weight` (one of
/// 12, 16, 18, 20, 22, 26), solved in the span of `E_4^b E_6^c / Delta` with
/// `4b + 6c = weight + 12`.
pub fn dual_form_level1(weight: u32, truncation: i64) -> Result<QSeries, QSeriesError> {
    if !matches!(weight, 12 | 16 | 18 | 20 | 22 | 26) {
        return Err(QSeriesError::NoDualForm { level: 1, weight });
    }
    let k = weight - 2;
    let inner = truncation + 2;
    let inv_delta = delta(inner).invert()?;
    let e4 = eisenstein(4, inner)?;
    let e6 = eisenstein(6, inner)?;
    let target = weight + 12;
    let mut gens = Vec::new();
    for c in 0..=target / 6 {
        let rest = target - 6 * c;
        if !rest.is_multiple_of(4) {
            continue;
        }
        let b = rest / 4;
        let m = &e4.pow(b as i64)? * &e6.pow(c as i64)?;
        gens.push((&m * &inv_delta).truncate(truncation));
    }
    solve_normalised(&gens, k, truncation)
}

#[cfg(test)]
mod tests {
    use super::super::{de_rham_pairing, eta_order_at_cusp, int, principal_part};
    use super::*;

    #[test]
    fn weight_twelve_dual() {
        let g = dual_form_level1(12, 12).unwrap();
        let tenfact = BigRational::from_integer(BigInt::from(3_628_800));
        assert_eq!(g.valuation(), Some(-1));
        assert_eq!(g.coeff(-1).unwrap(), tenfact.recip());
        assert_eq!(g.coeff(0).unwrap(), int(0));
        assert_eq!(g.coeff(1).unwrap(), int(0));
        let d = delta(14);
        assert_eq!(de_rham_pairing(&d, &g, 10).unwrap(), int(1));
        let gg = de_rham_pairing(&g, &g, 10);
        assert_eq!(gg.unwrap(), int(0));
    }

    #[test]
    fn hauptmodul_route_matches_monomial_route() {
        for w in [12u32, 16, 18, 20, 22, 26] {
            let t = 10;
            let f = &delta(t + 2) * &level_one_monomial(w - 12, t + 2).unwrap();
            let g1 = dual_form_level1(w, t).unwrap();
            let g2 = dual_form_from_hauptmodul(&f, &j_invariant(t), w - 2, t).unwrap();
            assert_eq!(g1, g2, "weight {w}");
        }
    }

    #[test]
    fn hauptmoduln_have_single_simple_pole() {
        for n in 2..=9u64 {
            let fac = hauptmodul_factors(n).unwrap();
            for c in (1..=n).filter(|c| n % c == 0) {
                let ord = eta_order_at_cusp(&fac, n, c);
                let expect = if c == n { int(-1) } else { ord.clone().max(int(0)) };
                assert_eq!(ord, expect, "level {n}, cusp 1/{c}");
            }
            let t = hauptmodul(n, 3).unwrap();
            assert_eq!(t.valuation(), Some(-1));
            assert_eq!(principal_part(&t).unwrap().coeffs[&-1], int(1));
        }
        assert!(hauptmodul(10, 3).is_none());
    }

    #[test]
    fn unsupported_weight() {
        assert!(matches!(
            dual_form_level1(14, 5),
            Err(QSeriesError::NoDualForm { level: 1, weight: 14 })
        ));
    }
}
