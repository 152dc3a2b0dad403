use num_complex::Complex64;
use svp_core::catalog::{curve_model, rank_two_table};
use svp_core::periods::{check_block_relations, sv_matrix, PeriodLattice, SvMatrix};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

#[test]
fn level_eleven_period_matrix() {
    let lat = PeriodLattice::from_model(&curve_model(11).unwrap()).unwrap();
    let expect = [
        (lat.omega1, c(1.269209, 0.0)),
        (lat.eta1, c(-2.214333, 0.0)),
        (lat.omega2, c(0.634604, 1.458816)),
        (lat.eta2, c(-1.107166, 2.405338)),
    ];
    for (got, want) in expect {
        assert!((got - want).norm() < 5e-6, "{got} vs {want}");
    }
    assert!(lat.legendre_residual().norm() < 1e-10);
    let s = lat.sv_matrix().unwrap();
    let want = [-0.028238, -1.695389, -0.589364, 0.028238];
    for (got, want) in s.entries.transpose().iter().zip(want) {
        assert!((got - want).abs() < 5e-6, "{got} vs {want}");
    }
    let rep = check_block_relations(&s);
    assert!(rep.involution < 1e-9 && rep.trace < 1e-9, "{rep:?}");
    // b = (1 - a^2)/c from the printed entries
    let b = (1.0 - 0.028238f64.powi(2)) / -0.589364;
    assert!((b + 1.695389).abs() < 1e-5);
}

#[test]
fn every_weight_two_curve_satisfies_polarisation_relations() {
    for case in rank_two_table().into_iter().filter(|c| c.weight == 2) {
        let lat = PeriodLattice::from_model(&curve_model(case.level).unwrap()).unwrap();
        assert!(lat.tau().im > 0.0);
        assert!(lat.legendre_residual().norm() < 1e-10, "level {}", case.level);
        let rep = check_block_relations(&lat.sv_matrix().unwrap());
        assert!(rep.passes(1e-8), "level {}: {rep:?}", case.level);
    }
}

#[test]
fn homology_basis_change_leaves_s_unchanged() {
    let lat = PeriodLattice::from_model(&curve_model(19).unwrap()).unwrap();
    let s = lat.sv_matrix().unwrap();
    for m in [[[1, 1], [0, 1]], [[0, -1], [1, 0]], [[2, 3], [1, 2]], [[5, -2], [-7, 3]]] {
        let t = lat.change_basis(m).sv_matrix().unwrap();
        // S is expressed in the de Rham basis, which does not change
        assert!((&t.entries - &s.entries).abs().max() < 1e-9, "{m:?}");
    }
}

#[test]
fn de_rham_basis_change_conjugates_s() {
    let lat = PeriodLattice::from_model(&curve_model(11).unwrap()).unwrap();
    let p = lat.period_matrix();
    let p = nalgebra::DMatrix::from_iterator(2, 2, p.iter().cloned());
    let g = nalgebra::DMatrix::from_row_slice(2, 2, &[c(1.0, 0.5), c(0.2, 0.0), c(-0.3, 1.0), c(2.0, -1.0)]);
    let s = sv_matrix(&p, 1).unwrap();
    let sg = sv_matrix(&(&p * &g), 1);
    // P G is no longer a real-structure-compatible basis unless G is real;
    // compare the complex conjugation formula directly.
    let lhs = (&p * &g).try_inverse().unwrap() * (&p * &g).map(|z| z.conj());
    let rhs = g.clone().try_inverse().unwrap() * s.entries.map(|x| c(x, 0.0)) * g.map(|z| z.conj());
    assert!((lhs - rhs).iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-9);
    assert!(sg.is_err());
}

#[test]
fn rank_two_reconstruction_is_an_involution() {
    let s = SvMatrix::rank_two(-0.589364, 0.047913, 1);
    let rep = check_block_relations(&s);
    assert!(rep.passes(1e-8), "{rep:?}");
}
