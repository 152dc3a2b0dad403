use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use svp_core::arith::is_prime;
use svp_core::catalog::{cusp_form_dimension, curve_model, newform_qexp, newform_spec, rank_two_table};
use svp_core::curve::modular_parametrization;
use svp_core::qexp::{hecke_tp, QSeries};

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[test]
fn table_has_29_one_dimensional_cases() {
    let table = rank_two_table();
    assert_eq!(table.len(), 29);
    for case in &table {
        assert_eq!(cusp_form_dimension(case.level, case.weight), 1, "{case:?}");
    }
    let cm: Vec<(u64, u32)> = table.iter().filter(|c| c.cm).map(|c| (c.level, c.weight)).collect();
    assert_eq!(cm, [(9, 4), (27, 2), (32, 2), (36, 2), (49, 2)]);
}

#[test]
fn newforms_are_hecke_eigenforms() {
    for case in rank_two_table() {
        let f = newform_qexp(case, 120).unwrap();
        assert_eq!(f.coeff(1).unwrap(), int(1));
        for p in [2u64, 3, 5, 7, 11] {
            if case.level % p == 0 {
                continue;
            }
            let tp = hecke_tp(&f, p, case.k()).unwrap();
            let ap = f.coeff(p as i64).unwrap();
            assert_eq!(tp, f.scalar_mul(&ap).truncate(tp.truncation()), "{case:?} p = {p}");
        }
    }
}

#[test]
fn curve_traces_match_newform_coefficients() {
    for case in rank_two_table().into_iter().filter(|c| c.weight == 2) {
        let f = newform_qexp(case, 60).unwrap();
        let e = curve_model(case.level).unwrap();
        for p in (2..60u64).filter(|&p| is_prime(p) && case.level % p != 0) {
            let ap = p as i64 + 1 - e.count_points(p) as i64;
            assert_eq!(f.coeff(p as i64).unwrap(), int(ap), "level {} p = {p}", case.level);
        }
    }
}

fn is_integral(f: &QSeries) -> bool {
    f.terms().all(|(_, c)| c.is_integer())
}

#[test]
fn modular_parametrisations_are_integral_and_lie_on_the_curve() {
    for case in rank_two_table().into_iter().filter(|c| c.weight == 2) {
        let e = curve_model(case.level).unwrap();
        let f = newform_qexp(case, 30).unwrap();
        let (x, y) = modular_parametrization(&e, &f).unwrap();
        assert!(is_integral(&x) && is_integral(&y), "level {}", case.level);
        assert_eq!(x.valuation(), Some(-2));
        assert_eq!(y.valuation(), Some(-3));
        let t = y.truncation().min(x.truncation()) - 3;
        let (x, y) = (x.truncate(t), y.truncate(t));
        let a = |v: i64| int(v);
        let lhs = &(&y * &y) + &(&(&x * &y).scalar_mul(&a(e.a1)) + &y.scalar_mul(&a(e.a3)));
        let rhs = &(&(&(&x * &x) * &x) + &(&x * &x).scalar_mul(&a(e.a2)))
            + &(&x.scalar_mul(&a(e.a4)) + &QSeries::one(t).scalar_mul(&a(e.a6)));
        let diff = &lhs - &rhs;
        assert!(diff.terms().all(|(_, c)| c.is_zero()), "level {}", case.level);
    }
}

#[test]
fn cm_forms_vanish_at_inert_primes() {
    // CM by Q(sqrt -3) for 9, 27, 36; Q(i) for 32; Q(sqrt -7) for 49.
    for (level, weight, inert) in [
        (9u64, 4u32, vec![2i64, 5, 11, 17]),
        (27, 2, vec![2, 5, 11, 17]),
        (36, 2, vec![5, 11, 17]),
        (32, 2, vec![3, 7, 11, 19]),
        (49, 2, vec![3, 5, 13, 17]),
    ] {
        let case = rank_two_table().into_iter().find(|c| c.level == level && c.weight == weight).unwrap();
        assert!(newform_spec(case).is_ok());
        let f = newform_qexp(case, 20).unwrap();
        for p in inert {
            assert!(f.coeff(p).unwrap().is_zero(), "({level}, {weight}) a_{p}");
        }
    }
}
