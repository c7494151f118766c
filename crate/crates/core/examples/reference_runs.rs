//! Long reference runs behind the acceptance tolerances.
//!
//! ```text
//! cargo run --release -p wordlab --example reference_runs [n]
//! ```
//!
//! Prints the running maximum of `A(m)/m` for the Fibonacci word and its
//! `sigma_2`, `sigma_4` images over a geometric series of prefix lengths.

use std::time::Instant;

use wordlab::forge::{prefix_of, FIBONACCI};
use wordlab::spectrum::curve_for_word;
use wordlab::subst::Substitution;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let top: usize = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(2_000_000);
    let fib = prefix_of(FIBONACCI, top)?;
    let mut n = 62_500;
    while n <= top {
        let start = Instant::now();
        let f = fib.prefix(n);
        let c = curve_for_word(&f, 5, 2000.min(n / 2), 1)?;
        println!(
            "fibonacci n={n} m=5..2000 running_max={:.10} argmax_m={} ({:.1}s)",
            c.running_max.unwrap(),
            c.argmax_m.unwrap(),
            start.elapsed().as_secs_f64()
        );
        for big_n in [2, 4] {
            let s = Substitution::sigma(big_n)?;
            let image = s.apply(&fib.prefix(n / big_n + 1))?.prefix(n);
            let c = curve_for_word(&image, 10, 2000.min(n / 2), 1)?;
            println!(
                "  sigma_{big_n} n={n} m=10..2000 running_max={:.10} (x{big_n} = {:.10}) argmax_m={}",
                c.running_max.unwrap(),
                c.running_max.unwrap() * big_n as f64,
                c.argmax_m.unwrap()
            );
        }
        n *= 2;
    }
    Ok(())
}
