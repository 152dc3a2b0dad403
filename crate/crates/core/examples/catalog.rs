//! The rank-two table: newforms, curves and point counts.

use svp_core::catalog::{curve_model, newform_qexp, newform_spec, rank_two_table};

fn main() {
    for case in rank_two_table() {
        let f = newform_qexp(case, 8).expect("shipped newform");
        let cm = if case.cm { " (CM)" } else { "" };
        println!("N = {:>2}, weight {:>2}{cm}: {f}", case.level, case.weight);
        if newform_spec(case).unwrap().curve.is_some() {
            let e = curve_model(case.level).unwrap();
            let counts: Vec<String> = [2u64, 3, 5, 7]
                .into_iter()
                .filter(|p| case.level % p != 0)
                .map(|p| format!("#E(F_{p}) = {}", e.count_points(p)))
                .collect();
            println!("        [{}, {}, {}, {}, {}]  {}", e.a1, e.a2, e.a3, e.a4, e.a6, counts.join(", "));
        }
    }
}
