//! n-local k-qWNU terms: the answer can only flip from yes to no as n grows.

use maltsev_lab::oracle::random_algebra;
use maltsev_lab::{has_n_local_k_qwnu, Result};

fn main() -> Result<()> {
    for seed in 0..6 {
        let alg = random_algebra(seed, 3, &[2], false);
        let row: Vec<&str> = (1..=3)
            .map(|n| has_n_local_k_qwnu(&alg, n, 2).map(|r| if r.is_yes() { "yes" } else { "no" }))
            .collect::<Result<_>>()?;
        println!("{:<20} k=2  n=1..3: {}", alg.name(), row.join(" "));
    }
    Ok(())
}
