//! Single-valued data `(c_i, rho_i)` per newform when `S_{k+2}` has several
//! Hecke eigenforms.
//!
//!     cargo run --release --example hecke_split -- [level] [weight]

use svp_core::poincare::Control;
use svp_core::svp::hecke_split_sv;

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let level: u64 = args.first().map_or(1, |s| s.parse().expect("level"));
    let weight: u32 = args.get(1).map_or(24, |s| s.parse().expect("weight"));

    let split = hecke_split_sv(level, weight, &[1, 2, 3], 8, Control::CMax(2000)).expect("split");
    for (i, f) in split.newforms.iter().enumerate() {
        println!(
            "f_{}: a_2 = {:.6}, c = {:.9e}, rho = {:.9e}{}",
            i + 1,
            f.coeffs[1],
            f.c,
            f.rho,
            if f.rho_exact { "" } else { " (up to a rational offset)" }
        );
    }
    println!("least-squares rms residual: {:.2e}", split.fit_residual);
    println!("max |a_n(P_m) reconstructed - direct|: {:.2e}", split.max_reconstruction_error());
}
