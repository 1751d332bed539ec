//! Decide k-qWNU for a few algebras; print a witness or the refuting pair.

use maltsev_lab::io::{format_report, parse_algebra};
use maltsev_lab::{has_k_qwnu, Result};

const SEMILATTICE: &str = "algebra meet\nsize 2\nop meet 2\n0 0\n0 1\n";
const PROJECTION: &str = "algebra left\nsize 2\nop p 2\n0 0\n1 1\n";
const Z3: &str = "algebra z3\nsize 3\nop t 3\n\
0 2 1 1 0 2 2 1 0\n1 0 2 2 1 0 0 2 1\n2 1 0 0 2 1 1 0 2\n";

fn main() -> Result<()> {
    for (text, k) in [(SEMILATTICE, 3), (PROJECTION, 2), (Z3, 2), (Z3, 3)] {
        let alg = parse_algebra(text)?;
        let report = has_k_qwnu(&alg, k)?;
        println!("{}", format_report(&report, true));
    }
    Ok(())
}
