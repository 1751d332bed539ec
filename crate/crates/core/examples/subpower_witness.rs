//! Generate a subpower, pull a term out of its derivations and replay it.

use maltsev_lab::io::parse_algebra;
use maltsev_lab::subpower::find_constant;
use maltsev_lab::{extract_witness, generate_subpower, verify_witness, Result};

fn main() -> Result<()> {
    let alg = parse_algebra("algebra meet\nsize 2\nop meet 2\n0 0\n0 1\n")?;
    // displacement matrix for (r, s) = (1, 0), k = 3
    let gens = vec![vec![0, 1, 1], vec![1, 0, 1], vec![1, 1, 0]];
    let rel = generate_subpower(&alg, &gens)?;
    println!("{} tuples in {} rounds:", rel.len(), rel.rounds());
    for (i, t) in rel.tuples().enumerate() {
        println!("  {i:>2}: {t:?}  {:?}", rel.derivation(i));
    }
    let c = find_constant(&rel).expect("semilattice has a constant");
    let w = extract_witness(&rel, &[c; 3])?;
    verify_witness(&rel, &w)?;
    println!("{} gives {:?}", w.term, w.target);
    Ok(())
}
