//! Single-valued periods `(c, rho)` of a rank-two case by both routes.
//!
//!     cargo run --release --example single_valued_rank2 -- [level] [weight] [c_max]

use svp_core::catalog::find_case;
use svp_core::periods::check_block_relations;
use svp_core::poincare::Control;
use svp_core::svp::{predicted_coeffs_from_periods, rank2_rho, route_available, Route};

fn main() {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let level: u64 = args.first().map_or(11, |s| s.parse().expect("level"));
    let weight: u32 = args.get(1).map_or(2, |s| s.parse().expect("weight"));
    let c_max: u64 = args.get(2).map_or(100_000, |s| s.parse().expect("c_max"));
    let case = find_case(level, weight).expect("a rank-two case");

    for route in [Route::Periods, Route::Poincare] {
        if !route_available(case, route) {
            println!("{route:?}: unavailable");
            continue;
        }
        let r = rank2_rho(case, route, 6, Control::CMax(c_max)).expect("route runs");
        let rho = r.rho.expect("rho");
        println!("{route:?}: c = {:.9}, rho = {:.9}", r.c, rho);
        if let Some(l) = r.legendre_residual {
            println!("  |det P - 2 pi i| = {l:.2e}");
        }
        for res in &r.residuals {
            println!(
                "  a_{}(P_{}) = {:.9} (predicted {:.9})",
                res.n, res.m, res.measured, res.predicted
            );
        }
        let s = r.sv_matrix().expect("rho known");
        println!("  block relations max residual {:.2e}", check_block_relations(&s).max_residual());
    }
    if weight == 2 {
        let p = predicted_coeffs_from_periods(level).expect("curve");
        println!(
            "period formulas: a_1(P_1) = {:.9}, a_1(P_-1) = {:.9}",
            p.a1_p1, p.a1_pm1
        );
    }
}
