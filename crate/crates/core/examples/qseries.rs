//! Exact q-expansion algebra: Eisenstein series, Delta, j, the Bol operator
//! and the de Rham pairing.

use num_bigint::BigInt;
use num_rational::BigRational;
use svp_core::qexp::{bol, de_rham_pairing, delta, dual_form_level1, eisenstein, hecke_tp, j_invariant};

fn main() {
    let t = 6;
    println!("E4    = {}", eisenstein(4, t).unwrap());
    println!("Delta = {}", delta(t));
    println!("j     = {}", j_invariant(t));

    // -D j is the weakly holomorphic weight-2 form q^-1 - 196884 q - ...
    let minus_dj = bol(&(-&j_invariant(t)), 0);
    println!("-Dj   = {minus_dj}");

    let d = delta(30);
    let t2 = hecke_tp(&d, 2, 10).unwrap();
    println!("T_2 Delta = {} Delta: {}", d.coeff(2).unwrap(), t2 == d.scalar_mul(&d.coeff(2).unwrap()).truncate(t2.truncation()));

    let g = dual_form_level1(12, 12).unwrap();
    println!("g_12  = {g}");
    let pairing = de_rham_pairing(&delta(14), &g, 10).unwrap();
    println!("<Delta, g_12> = {pairing}");
    assert_eq!(pairing, BigRational::from_integer(BigInt::from(1)));
}
