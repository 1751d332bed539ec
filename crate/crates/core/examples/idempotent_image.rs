//! Minimal unary idempotent term operation, its image, and the algebra
//! induced on that image.

use maltsev_lab::image::induced_algebra;
use maltsev_lab::io::{format_algebra, parse_algebra, parse_term};
use maltsev_lab::{has_k_qwnu, minimal_unary_idempotent, restrict_to_image, Result};

const CAP3: &str = "algebra cap3\nsize 3\nop g 2\n0 0 0\n0 1 1\n0 1 1\n";

fn main() -> Result<()> {
    let alg = parse_algebra(CAP3)?;
    let img = minimal_unary_idempotent(&alg)?;
    println!("alpha = {:?}, B = {:?}", img.alpha.images(), img.image);

    let g = parse_term("(g x0 x1)")?;
    let r = restrict_to_image(&alg, &img, &g, 2)?;
    println!("g on B (power {}): {:?}", r.power, r.table);

    let small = induced_algebra(&alg, &img)?;
    print!("{}", format_algebra(&small));
    for k in 2..4 {
        println!(
            "k={k}: A {:?}, induced {:?}",
            has_k_qwnu(&alg, k)?.answer,
            has_k_qwnu(&small, k)?.answer
        );
    }
    Ok(())
}
