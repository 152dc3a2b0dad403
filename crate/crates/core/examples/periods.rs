//! Periods, quasi-periods and the single-valued matrix of an elliptic curve.
//!
//!     cargo run --example periods -- <level>

use std::f64::consts::PI;

use svp_core::catalog::curve_model;
use svp_core::periods::{check_block_relations, PeriodLattice};

fn main() {
    let level: u64 = std::env::args().nth(1).map_or(11, |s| s.parse().expect("level"));
    let model = curve_model(level).expect("a weight-2 level of the table");
    let lattice = PeriodLattice::from_model(&model).unwrap();
    println!("omega_1 = {:.9}", lattice.omega1);
    println!("omega_2 = {:.9}", lattice.omega2);
    println!("eta_1   = {:.9}", lattice.eta1);
    println!("eta_2   = {:.9}", lattice.eta2);
    println!("|det P - 2 pi i| = {:.2e} (2 pi = {:.9})", lattice.legendre_residual().norm(), 2.0 * PI);

    let s = lattice.sv_matrix().unwrap();
    println!("S = [[{:.9}, {:.9}], [{:.9}, {:.9}]]", s.s11(), s.entries[(0, 1)], s.s21(), s.entries[(1, 1)]);
    let r = check_block_relations(&s);
    println!("|S^2 - 1| = {:.1e}, |Tr S| = {:.1e}", r.involution, r.trace);
}
