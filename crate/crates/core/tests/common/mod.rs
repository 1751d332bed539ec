#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::path::PathBuf;

use maltsev_lab::digraph::Digraph;
use maltsev_lab::{Elem, FiniteAlgebra, Operation};
use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

pub fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("data")
        .join(name)
}

/// The 16 algebras `({0,1}, f)` with `f` binary; `f`'s table is the binary
/// expansion of `code` (entry `(x,y)` is bit `2x+y`).
pub fn two_element_binary(code: u32) -> FiniteAlgebra {
    let table = (0..4).map(|i| (code >> i) & 1).collect();
    FiniteAlgebra::new(
        format!("bin{code:02}"),
        2,
        vec![Operation::new("f", 2, table)],
    )
    .unwrap()
}

pub fn all_two_element_binary() -> Vec<FiniteAlgebra> {
    (0..16).map(two_element_binary).collect()
}

pub fn table_of(size: usize, arity: usize, f: impl Fn(&[Elem]) -> Elem) -> Vec<Elem> {
    let mut out = Vec::new();
    let mut args = vec![0; arity];
    let total = size.pow(arity as u32);
    for idx in 0..total {
        let mut r = idx;
        for slot in args.iter_mut().rev() {
            *slot = (r % size) as Elem;
            r /= size;
        }
        out.push(f(&args));
    }
    out
}

/// Closure by worklist: every new tuple is combined, in every argument
/// position, with all tuples known at that moment.
pub fn naive_closure(alg: &FiniteAlgebra, gens: &[Vec<Elem>]) -> BTreeSet<Vec<Elem>> {
    let width = gens[0].len();
    let mut known: Vec<Vec<Elem>> = Vec::new();
    let mut seen: HashSet<Vec<Elem>> = HashSet::new();
    let mut queue: VecDeque<Vec<Elem>> = VecDeque::new();
    for g in gens {
        if seen.insert(g.clone()) {
            queue.push_back(g.clone());
        }
    }
    for op in alg.ops() {
        if op.arity() == 0 {
            let c = vec![op.table()[0]; width];
            if seen.insert(c.clone()) {
                queue.push_back(c);
            }
        }
    }
    while let Some(t) = queue.pop_front() {
        known.push(t.clone());
        for op in alg.ops() {
            let m = op.arity();
            for pos in 0..m {
                let others = m - 1;
                let count = known.len().pow(others as u32);
                for c in 0..count {
                    let mut rest = c;
                    let mut picks = vec![0usize; others];
                    for p in picks.iter_mut().rev() {
                        *p = rest % known.len();
                        rest /= known.len();
                    }
                    let out: Vec<Elem> = (0..width)
                        .map(|col| {
                            let mut args = Vec::with_capacity(m);
                            let mut it = picks.iter();
                            for j in 0..m {
                                if j == pos {
                                    args.push(t[col]);
                                } else {
                                    args.push(known[*it.next().unwrap()][col]);
                                }
                            }
                            op.apply(alg.size(), &args)
                        })
                        .collect();
                    if seen.insert(out.clone()) {
                        queue.push_back(out);
                    }
                }
            }
        }
    }
    known.into_iter().collect()
}

/// Closed walk of net length 1 by exhaustive search over (vertex, height)
/// states. Heights never need to leave `±(|E| + 2|V| + 1)`: the cycle
/// contributions can be ordered so partial sums stay in that window.
pub fn brute_force_length_one(g: &Digraph) -> bool {
    let n = g.vertex_count();
    let bound = (g.edge_count() + 2 * n + 1) as i64;
    let width = (2 * bound + 1) as usize;
    let edges: Vec<(usize, usize)> = g.edges().collect();
    for start in 0..n {
        let mut seen = vec![false; n * width];
        let idx = |v: usize, h: i64| v * width + (h + bound) as usize;
        let mut queue = VecDeque::from([(start, 0i64)]);
        seen[idx(start, 0)] = true;
        while let Some((v, h)) = queue.pop_front() {
            for &(a, b) in &edges {
                let mut moves = Vec::new();
                if a == v {
                    moves.push((b, h + 1));
                }
                if b == v {
                    moves.push((a, h - 1));
                }
                for (w, hh) in moves {
                    if w == start && hh == 1 {
                        return true;
                    }
                    if hh.abs() <= bound && !seen[idx(w, hh)] {
                        seen[idx(w, hh)] = true;
                        queue.push_back((w, hh));
                    }
                }
            }
        }
    }
    false
}

/// Seeded stream for test inputs.
pub struct Rng(SplitMix64);

impl Rng {
    pub fn new(seed: u64) -> Self {
        Rng(SplitMix64::seed_from_u64(seed))
    }

    pub fn below(&mut self, n: usize) -> usize {
        (self.0.next_u64() % n as u64) as usize
    }

    pub fn range(&mut self, lo: usize, hi: usize) -> usize {
        lo + self.below(hi - lo + 1)
    }

    pub fn tuple(&mut self, size: usize, width: usize) -> Vec<Elem> {
        (0..width).map(|_| self.below(size) as Elem).collect()
    }
}
