//! Smooth digraphs, algebraic length 1 and loops.

use maltsev_lab::digraph::{has_algebraic_length_one, has_loop, is_smooth, Digraph};
use maltsev_lab::Result;

fn main() -> Result<()> {
    let graphs = [
        (
            "directed 3-cycle",
            Digraph::new(3, [(0, 1), (1, 2), (2, 0)])?,
        ),
        (
            "triangle 0->1->2, 0->2",
            Digraph::new(3, [(0, 1), (1, 2), (0, 2)])?,
        ),
        (
            "3-cycle plus 2-cycle",
            Digraph::new(4, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 0)])?,
        ),
        ("with a loop", Digraph::new(2, [(0, 1), (1, 1)])?),
    ];
    for (name, g) in &graphs {
        print!(
            "{name:<24} smooth={:<5} loop={:?}",
            is_smooth(g),
            has_loop(g)
        );
        match has_algebraic_length_one(g) {
            Some(w) => {
                let steps: Vec<String> = w
                    .steps
                    .iter()
                    .map(|s| format!("{}{}{}", s.from, if s.forward { "->" } else { "<-" }, s.to))
                    .collect();
                println!(" length-1 walk: {}", steps.join(" "));
            }
            None => println!(" no length-1 walk"),
        }
    }
    Ok(())
}
