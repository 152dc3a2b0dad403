use std::f64::consts::PI;

use proptest::prelude::*;
use svp_core::arith::{divisor_count, factorial_f64, gcd};
use svp_core::poincare::{poincare_coeffs, poincare_qexp, tail_bound, Control, PoincareError};

#[test]
fn p_minus_two_weight_six_level_four_is_exact() {
    // P_{-2,6,4}(tau) = P_{-1,6,2}(2 tau), and the latter is the unique form
    // q^-1 + O(q) in that space: q^-1 - 36 q + 4096 q^2 - 97686 q^3 + ...
    let p = poincare_qexp(-2, 6, 4, 6, Control::CMax(10_000)).unwrap();
    let expected = [0.0, -36.0, 0.0, 4096.0, 0.0, -97686.0];
    for (c, e) in p.coeffs.iter().zip(expected) {
        assert!((c.value - e).abs() < 1e-4, "a_{} = {}", c.n, c.value);
    }
}

#[test]
fn coefficients_vanish_off_the_support() {
    // Level 9, weight 4, m = -1: only n = 2 mod 3 survive.
    let p = poincare_qexp(-1, 4, 9, 15, Control::CMax(20_000)).unwrap();
    for c in &p.coeffs {
        if c.n % 3 != 2 {
            assert!(c.value.abs() < 1e-9, "a_{} = {}", c.n, c.value);
        }
    }
}

#[test]
fn doubling_the_cutoff_moves_less_than_the_tail_bound() {
    for (m, weight, level, c) in [(-1i64, 4u32, 9u64, 2000u64), (1, 12, 1, 500), (-2, 6, 4, 1000)] {
        let ns = [1u64, 2, 3];
        let a = poincare_coeffs(m, weight, level, &ns, Control::CMax(c)).unwrap();
        let b = poincare_coeffs(m, weight, level, &ns, Control::CMax(2 * c)).unwrap();
        for (x, y) in a.iter().zip(&b) {
            let bound = tail_bound(m, x.n, weight, level, x.c_max + 1).unwrap();
            assert!(bound.is_finite());
            assert!((x.value - y.value).abs() <= bound, "{m} {weight} {level} n={}", x.n);
        }
    }
}

/// The termwise majorant of the tail, summed exactly over `c_from <= c < c_to`.
fn brute_majorant(m: i64, n: u64, weight: u32, level: u64, c_from: u64, c_to: u64) -> f64 {
    let x = 2.0 * PI * ((m.unsigned_abs() * n) as f64).sqrt();
    let scale = 2.0 * PI * (n as f64 / m.unsigned_abs() as f64).powf((weight as f64 - 1.0) / 2.0);
    let g = (gcd(m, n as i64) as f64).sqrt();
    let mut sum = 0.0;
    let mut c = c_from.div_ceil(level) * level;
    while c < c_to {
        let cf = c as f64;
        let bessel = (x / cf).powi(weight as i32 - 1) / factorial_f64(weight - 1) * (x / cf).powi(2).exp();
        sum += divisor_count(c) as f64 * cf.powf(-0.5) * bessel;
        c += level;
    }
    scale * g * sum
}

#[test]
fn closed_form_dominates_the_brute_force_majorant() {
    for (m, n, weight, level, c_from) in [
        (1i64, 1u64, 2u32, 11u64, 100u64),
        (-1, 3, 4, 9, 200),
        (2, 4, 6, 4, 400),
        (1, 2, 12, 1, 50),
    ] {
        let closed = tail_bound(m, n, weight, level, c_from).unwrap();
        let brute = brute_majorant(m, n, weight, level, c_from, 2_000_000);
        assert!(brute <= closed, "({m}, {n}, {weight}, {level}): {brute} > {closed}");
    }
}

#[test]
fn tail_bound_needs_the_small_argument_regime() {
    assert!(matches!(
        tail_bound(-1, 100, 2, 1, 10),
        Err(PoincareError::TailOutOfRange { .. })
    ));
    let p = poincare_coeffs(-1, 2, 1, &[100], Control::CMax(10)).unwrap();
    assert!(p[0].tail_estimate.is_infinite());
}

#[test]
fn weight_two_level_eleven_settles_between_1e5_and_1e6() {
    let a = poincare_coeffs(1, 2, 11, &[1], Control::CMax(100_000)).unwrap()[0].value;
    let b = poincare_coeffs(1, 2, 11, &[1], Control::CMax(1_000_000)).unwrap()[0].value;
    assert!((a - b).abs() < 5e-3, "{a} vs {b}");
}

#[test]
fn tolerance_control_flags_unreachable_targets() {
    let p = poincare_qexp(-1, 4, 9, 3, Control::Tol { tol: 1e-12, cap: 2000 }).unwrap();
    assert!(!p.converged());
    assert!(p.coeffs.iter().all(|c| c.tol_met == Some(false)));
    let p = poincare_qexp(-1, 4, 9, 3, Control::Tol { tol: 1e-5, cap: 1_000_000 }).unwrap();
    assert!(p.converged());
}

#[test]
fn results_do_not_depend_on_thread_count() {
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| poincare_qexp(1, 2, 11, 6, Control::CMax(50_000)).unwrap().values())
    };
    let one = run(1);
    let four = run(4);
    assert_eq!(one.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), four.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]

    #[test]
    fn tail_bound_decreases_in_the_cutoff(n in 1u64..20, level in 1u64..30, w in 1u32..8) {
        let weight = 2 * w;
        let c0 = (4.0 * PI * (n as f64).sqrt()).ceil() as u64;
        let a = tail_bound(1, n, weight, level, c0).unwrap();
        let b = tail_bound(1, n, weight, level, 4 * c0 + level).unwrap();
        prop_assert!(b <= a);
    }
}
