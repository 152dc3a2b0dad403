//! Fourier coefficients of a Poincaré series from the Kloosterman–Bessel sum.
//!
//!     cargo run --release --example poincare -- <m> <weight> <level> <n_max> [c_max]

use std::time::Instant;

use svp_core::poincare::{poincare_qexp, Control};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let get = |i: usize, default: &str| args.get(i).cloned().unwrap_or_else(|| default.to_string());
    let m: i64 = get(0, "-1").parse().expect("m");
    let weight: u32 = get(1, "4").parse().expect("weight");
    let level: u64 = get(2, "9").parse().expect("level");
    let n_max: u64 = get(3, "12").parse().expect("n_max");
    let c_max: u64 = get(4, "10000").parse().expect("c_max");

    let start = Instant::now();
    let p = poincare_qexp(m, weight, level, n_max, Control::CMax(c_max)).expect("valid parameters");
    let elapsed = start.elapsed();
    if let Some(order) = p.pole_order() {
        println!("principal part: q^-{order}");
    }
    println!("{:>4} {:>24} {:>12}", "n", "a_n", "tail bound");
    for c in &p.coeffs {
        println!("{:>4} {:>24.12} {:>12.3e}", c.n, c.value, c.tail_estimate);
    }
    println!("summed {} moduli up to c = {} in {:.2?}", p.coeffs[0].terms_summed, p.coeffs[0].c_max, elapsed);
}
