//! Kloosterman sums, one modulus at a time or batched over multiples of a level.
//!
//!     cargo run --example kloosterman -- <a> <b> <c>

use svp_core::arith::{kloosterman, kloosterman_multiples, kloosterman_sum};

fn main() {
    let args: Vec<i64> = std::env::args()
        .skip(1)
        .map(|s| s.parse().expect("integer argument"))
        .collect();
    let (a, b, c) = match args[..] {
        [a, b, c] => (a, b, c as u64),
        _ => (1, 1, 3),
    };
    let full = kloosterman_sum(a, b, c).expect("c > 0");
    println!("K({a}, {b}; {c}) = {:.12} (imaginary part {:.1e})", full.re, full.im);

    // Every c = 11 j for j = 1..=10 in one pass, as the Poincaré sums use it.
    let batch = kloosterman_multiples(a, &[b], 11, 1, 10).expect("level > 0");
    for (j, k) in batch[0].iter().enumerate() {
        let c = 11 * (j as u64 + 1);
        let direct = kloosterman(a, b, c).unwrap();
        println!("c = {c:>4}: {k:>14.9}  direct {direct:>14.9}");
    }
}
