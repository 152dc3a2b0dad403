use proptest::prelude::*;
use svp_core::catalog::find_case;
use svp_core::poincare::Control;
use svp_core::svp::{
    hecke_split_sv, nearest_rational, poincare_rational_relations, rank2_c_from_poincare,
    rank2_rho, route_available, Route, SvpError,
};

#[test]
fn cm_cases_have_vanishing_rho() {
    let r = rank2_rho(find_case(27, 2).unwrap(), Route::Periods, 1, Control::CMax(1)).unwrap();
    assert!(r.rho.unwrap().abs() < 1e-12);
    let r = rank2_rho(find_case(9, 4).unwrap(), Route::Poincare, 8, Control::CMax(10_000)).unwrap();
    assert!(r.rho.unwrap().abs() < 1e-9, "rho = {:?}", r.rho);
    assert!(r.residuals.iter().all(|x| x.deviation.abs() < 1e-6));
}

#[test]
fn routes_agree_at_level_eleven() {
    let case = find_case(11, 2).unwrap();
    let a = rank2_rho(case, Route::Periods, 1, Control::CMax(1)).unwrap();
    let b = rank2_rho(case, Route::Poincare, 4, Control::CMax(200_000)).unwrap();
    assert!(((a.c - b.c) / a.c).abs() < 5e-3, "{} vs {}", a.c, b.c);
    assert!((a.rho.unwrap() - b.rho.unwrap()).abs() < 5e-3);
    assert!(a.legendre_residual.unwrap() < 1e-10);
}

#[test]
fn periods_route_needs_a_curve() {
    let case = find_case(1, 12).unwrap();
    assert!(!route_available(case, Route::Periods));
    assert!(matches!(
        rank2_rho(case, Route::Periods, 1, Control::CMax(1)),
        Err(SvpError::RouteUnavailable { .. })
    ));
}

#[test]
fn pair_estimates_of_c_agree() {
    let case = find_case(1, 12).unwrap();
    let r = rank2_c_from_poincare(case, &[(1, 1), (1, 2), (2, 3), (3, 3)], Control::CMax(2000)).unwrap();
    assert!(r.pair_spread() < 1e-8, "spread {}", r.pair_spread());
}

#[test]
fn weight_24_newforms_solve_the_t2_polynomial() {
    let split = hecke_split_sv(1, 24, &[1, 2, 3], 8, Control::CMax(2000)).unwrap();
    assert_eq!(split.newforms.len(), 2);
    let (x, y) = (split.newforms[0].coeffs[1], split.newforms[1].coeffs[1]);
    // T_2 on S_24 has characteristic polynomial X^2 - 1080 X - 20468736.
    assert!((x + y - 1080.0).abs() < 1e-6);
    assert!(((x * y + 20468736.0) / 20468736.0).abs() < 1e-9);
    assert!(split.max_reconstruction_error() < 1e-3);
}

#[test]
fn weight_24_relation_is_rational() {
    let r = poincare_rational_relations(1, 24, 3, &[1, 2], 8, Control::CMax(2000)).unwrap();
    let got: Vec<(i128, u64)> = r.mu_rational.iter().map(|q| (q.numer, q.denom)).collect();
    assert_eq!(got, [(195660, 1), (-48, 1)]);
    assert!(r.max_residual() < 5e-4);
}

proptest! {
    #[test]
    fn nearest_rational_recovers_small_fractions(p in -500i64..500, q in 1u64..40, eps in -1e-9f64..1e-9) {
        let x = p as f64 / q as f64 + eps;
        let r = nearest_rational(x, 40);
        prop_assert_eq!(r.numer * q as i128, p as i128 * r.denom as i128);
        prop_assert!(r.distance <= 1e-9 + 1e-12);
    }
}
