//! `P_m` as a rational combination of a basis `P_{m_1}, ..., P_{m_d}` of
//! cusp forms.
//!
//!     cargo run --release --example rational_relations -- [level] [weight] [m] [m_1,m_2,...]

use svp_core::poincare::Control;
use svp_core::svp::poincare_rational_relations;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let level: u64 = args.first().map_or(1, |s| s.parse().expect("level"));
    let weight: u32 = args.get(1).map_or(24, |s| s.parse().expect("weight"));
    let m: u64 = args.get(2).map_or(3, |s| s.parse().expect("m"));
    let basis: Vec<u64> = args
        .get(3)
        .map_or("1,2", String::as_str)
        .split(',')
        .map(|s| s.parse().expect("basis index"))
        .collect();

    let r = poincare_rational_relations(level, weight, m, &basis, 8, Control::CMax(2000))
        .expect("relation solvable");
    println!("P_{m} in weight {weight}, level {level}, dim S = {}", r.dimension);
    for (((mi, l), mu), q) in basis.iter().zip(&r.lambda).zip(&r.mu).zip(&r.mu_rational) {
        println!(
            "  P_{mi}: lambda = {l:.6e}, mu = lambda (m/m_i)^(k+1) = {mu:.9} ~ {}/{} (distance {:.1e})",
            q.numer, q.denom, q.distance
        );
    }
    println!("max residual at n > d: {:.2e}", r.max_residual());
}
