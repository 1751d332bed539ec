//! Seeded random algebras written to a directory, then read back.

use maltsev_lab::io::{format_algebra, read_algebra};
use maltsev_lab::oracle::{corpus_file_name, random_algebra};
fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join("maltsev-lab-corpus");
    std::fs::create_dir_all(&dir)?;
    for seed in 0..5 {
        let alg = random_algebra(seed, 3, &[2, 1], seed % 2 == 0);
        let path = dir.join(corpus_file_name(seed, 3, &[2, 1], seed % 2 == 0));
        std::fs::write(&path, format_algebra(&alg))?;
        assert_eq!(read_algebra(&path)?, alg);
        println!("{}", path.display());
    }
    Ok(())
}
