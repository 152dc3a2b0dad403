//! Bessel functions J_nu and I_nu of integer order.
//!
//!     cargo run --example bessel -- <order> <x>

use svp_core::bessel::{bessel_i, bessel_j};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let order: u32 = args.first().map_or(11, |s| s.parse().expect("order"));
    let x: f64 = args.get(1).map_or(22.0, |s| s.parse().expect("x"));
    println!("J_{order}({x}) = {:.15e}", bessel_j(order, x).expect("x >= 0"));
    println!("I_{order}({x}) = {:.15e}", bessel_i(order, x).expect("x >= 0"));

    // Small arguments, where the Poincaré sums spend almost all their terms.
    for x in [1e-1, 1e-3, 1e-6] {
        println!("J_1({x:e}) = {:.15e}", bessel_j(1, x).unwrap());
    }
}
