//! Regenerates the shipped `.qexp` files for the rank-two newforms that have
//! no eta-quotient recipe in the catalog.
//!
//! Weight >= 4 forms are built as products of an eta quotient with a weight-2
//! (or weight-1 theta) series of the same level; the space is one-dimensional
//! so any normalised cusp form in it is the newform. Weight-2 forms come from
//! point counts on the curve model.
//!
//!     cargo run --release --example gen_newform_data -- [out_dir] [truncation]

use std::path::PathBuf;

use num_rational::BigRational;
use svp_core::catalog::{self, format_qexp};
use svp_core::qexp::{eisenstein, eta_quotient, QSeries};

fn rat(p: i64, q: i64) -> BigRational {
    BigRational::new(p.into(), q.into())
}

/// `(d E_2(d tau) - E_2(tau)) / (d - 1)`, constant term 1.
fn e2_combination(d: u32, t: i64) -> QSeries {
    let e2 = eisenstein(2, t).unwrap();
    let e2d = e2.rescale(d).truncate(t);
    (&e2d.scalar_mul(&rat(d as i64, 1)) - &e2).scalar_mul(&rat(1, d as i64 - 1))
}

/// Theta series of `x^2 + x y + 2 y^2`.
fn theta_7(t: i64) -> QSeries {
    let r = ((t as f64).sqrt() as i64) * 2 + 2;
    let mut counts = vec![0i64; t as usize + 1];
    for x in -r..=r {
        for y in -r..=r {
            let n = x * x + x * y + 2 * y * y;
            if n <= t {
                counts[n as usize] += 1;
            }
        }
    }
    QSeries::from_integers(0, &counts, t)
}

fn main() {
    let mut args = std::env::args().skip(1);
    let out: PathBuf = args.next().map(PathBuf::from).unwrap_or_else(catalog::data_dir);
    let t: i64 = args.next().map(|s| s.parse().expect("truncation")).unwrap_or(300);
    std::fs::create_dir_all(&out).expect("create output directory");

    let products: [(&str, Vec<(u32, i32)>, QSeries, &str); 4] = [
        (
            "newform_2_10.qexp",
            vec![(1, 8), (2, 8)],
            e2_combination(2, t),
            "S_10(Gamma_0(2)): eta(tau)^8 eta(2tau)^8 * (2 E2(2tau) - E2(tau))",
        ),
        (
            "newform_3_8.qexp",
            vec![(1, 6), (3, 6)],
            e2_combination(3, t),
            "S_8(Gamma_0(3)): eta(tau)^6 eta(3tau)^6 * (3 E2(3tau) - E2(tau)) / 2",
        ),
        (
            "newform_5_6.qexp",
            vec![(1, 4), (5, 4)],
            e2_combination(5, t),
            "S_6(Gamma_0(5)): eta(tau)^4 eta(5tau)^4 * (5 E2(5tau) - E2(tau)) / 4",
        ),
        (
            "newform_7_4.qexp",
            vec![(1, 3), (7, 3)],
            theta_7(t),
            "S_4(Gamma_0(7)): eta(tau)^3 eta(7tau)^3 * theta_{x^2+xy+2y^2}(tau)",
        ),
    ];
    for (name, eta, other, note) in products {
        let f = &eta_quotient(&eta, t).unwrap() * &other;
        let header = format!("{note}\nregenerate with: cargo run --example gen_newform_data");
        std::fs::write(out.join(name), format_qexp(&f, &header)).expect("write");
        println!("wrote {name} to q^{}", f.truncation());
    }

    for level in [17u64, 19, 21, 49] {
        let model = catalog::curve_model(level).unwrap();
        let a = model.newform_coefficients(level, t as usize);
        let f = QSeries::from_integers(0, &a, t);
        let name = format!("newform_{level}_2.qexp");
        let header = format!(
            "S_2(Gamma_0({level})): newform of the curve {model}, a_p = p + 1 - #E(F_p)\n\
             regenerate with: cargo run --example gen_newform_data"
        );
        std::fs::write(out.join(&name), format_qexp(&f, &header)).expect("write");
        println!("wrote {name} to q^{}", f.truncation());
    }
}
