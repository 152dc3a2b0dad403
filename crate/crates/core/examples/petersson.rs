//! Petersson norm of a level-1 cusp form by quadrature, compared with the
//! single-valued period `c` obtained from the Poincaré series `P_1`.
//!
//!     cargo run --release --example petersson -- [weight]

use std::f64::consts::PI;

use svp_core::catalog::{find_case, newform_qexp};
use svp_core::poincare::Control;
use svp_core::svp::{petersson_norm_numeric, rank2_c_from_poincare};

fn main() {
    let weight: u32 = std::env::args().nth(1).map_or(12, |s| s.parse().expect("weight"));
    let case = find_case(1, weight).expect("a level-1 rank-two weight");
    let f = newform_qexp(case, 40).expect("level-1 recipe");
    let norm = petersson_norm_numeric(&f, weight).expect("quadrature converges");
    let scaled = (4.0 * PI).powi(weight as i32 - 1) * norm;
    let c = rank2_c_from_poincare(case, &[(1, 1)], Control::CMax(2000)).expect("series").c;
    println!("(f, f)                = {norm:.12e}");
    println!("(4 pi)^(k+1) (f, f)   = {scaled:.12e}");
    println!("-c from a_1(P_1)      = {:.12e}", -c);
    println!("relative difference   = {:.2e}", ((scaled + c) / c).abs());
}
