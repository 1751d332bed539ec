//! Enumerate a clone slice by brute force and cross-check the subpower
//! decisions against it.

use maltsev_lab::oracle::{
    enumerate_clone_slice, oracle_find_quasi_siggers, oracle_find_qwnu, random_algebra,
    DEFAULT_CLONE_BUDGET,
};
use maltsev_lab::{has_k_qwnu, has_quasi_taylor, Result};

fn main() -> Result<()> {
    let alg = random_algebra(3, 2, &[2], false);
    let slice = enumerate_clone_slice(&alg, 2, DEFAULT_CLONE_BUDGET);
    println!(
        "{}: {} binary term operations",
        alg.name(),
        slice.tables.len()
    );

    let mut disagreements = 0;
    for seed in 0..40 {
        let alg = random_algebra(seed, 2 + seed as usize % 2, &[2], false);
        for k in 2..4 {
            let oracle = oracle_find_qwnu(&alg, k, DEFAULT_CLONE_BUDGET).verdict();
            let fast = has_k_qwnu(&alg, k)?.is_yes();
            if oracle.is_some_and(|v| v != fast) {
                disagreements += 1;
            }
        }
        let oracle = oracle_find_quasi_siggers(&alg, DEFAULT_CLONE_BUDGET).verdict();
        let fast = has_quasi_taylor(&alg)?.is_yes();
        if oracle.is_some_and(|v| v != fast) {
            disagreements += 1;
        }
    }
    println!("40 random algebras, {disagreements} disagreements");
    Ok(())
}
