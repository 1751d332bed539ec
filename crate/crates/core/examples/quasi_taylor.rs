//! Quasi Taylor via the quasi Siggers instances, against the diagonal 4x4
//! matrix. The two-element minority shows the diagonal test is too strict.

use maltsev_lab::io::{format_report, parse_algebra, parse_term};
use maltsev_lab::{check_quasi_siggers_identity, Decider, Result};

const MINORITY: &str = "algebra z2-minority\nsize 2\nop m 3\n0 1 1 0 1 0 0 1\n";
const NEGATION: &str = "algebra not\nsize 2\nop neg 1\n1 0\n";

fn main() -> Result<()> {
    let decider = Decider::default();
    let minority = parse_algebra(MINORITY)?;

    let exact = decider.has_quasi_taylor(&minority)?;
    println!("{}", format_report(&exact, true));
    let diagonal = decider.diagonal_siggers_test(&minority)?;
    println!("{}", format_report(&diagonal, false));

    // yet s(x0,x1,x2,x3) = m(x0,x2,x3) is a global quasi Siggers term
    let s = parse_term("(m x0 x2 x3)")?;
    println!(
        "{s} is quasi Siggers: {}\n",
        check_quasi_siggers_identity(&minority, &s)?
    );

    let not = parse_algebra(NEGATION)?;
    println!("{}", format_report(&decider.has_quasi_taylor(&not)?, false));
    Ok(())
}
