//! Wall time of the k = 2 decision as the universe grows.

use std::time::Instant;

use maltsev_lab::oracle::random_algebra;
use maltsev_lab::{has_k_qwnu, Result};

fn main() -> Result<()> {
    println!(
        "{:>3} {:>10} {:>10} {:>8}",
        "n", "median ms", "tuples", "yes"
    );
    for n in 2..=10 {
        let mut times = Vec::new();
        let mut tuples = 0;
        let mut yes = 0;
        for seed in 0..15 {
            let alg = random_algebra(seed, n, &[2], true);
            let start = Instant::now();
            let report = has_k_qwnu(&alg, 2)?;
            times.push(start.elapsed().as_secs_f64() * 1e3);
            tuples += report.stats.tuples_generated;
            yes += report.is_yes() as usize;
        }
        times.sort_by(f64::total_cmp);
        println!(
            "{n:>3} {:>10.3} {:>10} {:>8}",
            times[times.len() / 2],
            tuples / 15,
            yes
        );
    }
    Ok(())
}
