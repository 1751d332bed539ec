//! Brute-force ground truth for small algebras.
//!
//! The oracle enumerates the `k`-ary part of the clone (all `k`-ary term
//! operations, as tables) and searches it directly for operations satisfying
//! the qWNU or quasi Siggers identities. It shares no code with the subpower
//! engine, so agreement between the two is meaningful evidence.
//!
//! Random algebras come from SplitMix64 (`rand_xoshiro::SplitMix64`, whose
//! state is the seed itself). Tables are filled operation by operation, in
//! row-major index order, with `next_u64() % n`; with the idempotent flag the
//! diagonal entries are overwritten afterwards. For seed 0 the generator
//! yields `0xe220a8397b1dcdaf, 0x6e789e6aa1b965f4, 0x06c45d188009454f, ...`.

use std::collections::HashSet;

use rand_core::{RngCore, SeedableRng};
use rand_xoshiro::SplitMix64;

use crate::algebra::{table_args, table_index, table_len, Elem, FiniteAlgebra, Operation};

pub const DEFAULT_CLONE_BUDGET: usize = 100_000;

/// The `k`-ary term operations found so far.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CloneSlice {
    pub arity: usize,
    /// Tables in discovery order, projections first.
    pub tables: Vec<Vec<Elem>>,
    /// True when the closure reached its fixed point within budget.
    pub complete: bool,
}

impl CloneSlice {
    pub fn contains(&self, table: &[Elem]) -> bool {
        self.tables.iter().any(|t| t == table)
    }
}

/// Outcome of an oracle search.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OracleResult {
    pub table: Option<Vec<Elem>>,
    /// The slice was exhausted; with `table == None` this is a definite "no".
    pub complete: bool,
    pub tables_explored: usize,
}

impl OracleResult {
    /// `Some(true)` found, `Some(false)` definitely absent, `None` unknown.
    pub fn verdict(&self) -> Option<bool> {
        match (&self.table, self.complete) {
            (Some(_), _) => Some(true),
            (None, true) => Some(false),
            (None, false) => None,
        }
    }
}

fn projections(size: usize, k: usize) -> Vec<Vec<Elem>> {
    let len = table_len(size, k).expect("slice too large");
    let mut args = vec![0; k];
    (0..k)
        .map(|i| {
            (0..len)
                .map(|idx| {
                    table_args(size, idx, &mut args);
                    args[i]
                })
                .collect()
        })
        .collect()
}

// Saturates {projections} under composition with basic operations. Stops at
// the first table accepted by `stop`, or when the table count passes `budget`.
fn saturate(
    alg: &FiniteAlgebra,
    k: usize,
    budget: usize,
    stop: &dyn Fn(&[Elem]) -> bool,
) -> (Vec<Vec<Elem>>, bool, Option<usize>) {
    let n = alg.size();
    let mut tables = projections(n, k);
    let mut seen: HashSet<Vec<Elem>> = tables.iter().cloned().collect();
    if let Some(i) = tables.iter().position(|t| stop(t)) {
        return (tables, false, Some(i));
    }
    if tables.len() > budget {
        return (tables, false, None);
    }
    let len = tables[0].len();

    let mut frontier_start = 0;
    let mut first = true;
    loop {
        let known = tables.len();
        let mut fresh = Vec::new();
        for op in alg.ops() {
            let m = op.arity();
            if m == 0 {
                if first {
                    fresh.push(vec![op.table()[0]; len]);
                }
                continue;
            }
            // All m-tuples over 0..known with at least one member >= frontier_start.
            let total = table_len(known, m).expect("combination count");
            let mut choice = vec![0; m];
            for c in 0..total {
                table_args(known, c, &mut choice);
                if choice.iter().all(|&i| (i as usize) < frontier_start) {
                    continue;
                }
                let mut args = vec![0; m];
                let out: Vec<Elem> = (0..len)
                    .map(|idx| {
                        for (a, &g) in args.iter_mut().zip(&choice) {
                            *a = tables[g as usize][idx];
                        }
                        op.table()[table_index(n, &args)]
                    })
                    .collect();
                fresh.push(out);
                // Flush regularly so the budget check sees growth early.
                if fresh.len() >= 4096 {
                    if let Some(done) = absorb(&mut tables, &mut seen, &mut fresh, budget, stop) {
                        return done;
                    }
                }
            }
        }
        if let Some(done) = absorb(&mut tables, &mut seen, &mut fresh, budget, stop) {
            return done;
        }
        first = false;
        if tables.len() == known {
            return (tables, true, None);
        }
        frontier_start = known;
    }
}

type Saturation = (Vec<Vec<Elem>>, bool, Option<usize>);

fn absorb(
    tables: &mut Vec<Vec<Elem>>,
    seen: &mut HashSet<Vec<Elem>>,
    fresh: &mut Vec<Vec<Elem>>,
    budget: usize,
    stop: &dyn Fn(&[Elem]) -> bool,
) -> Option<Saturation> {
    for t in fresh.drain(..) {
        if seen.contains(&t) {
            continue;
        }
        seen.insert(t.clone());
        let hit = stop(&t);
        tables.push(t);
        if hit {
            let i = tables.len() - 1;
            return Some((std::mem::take(tables), false, Some(i)));
        }
        if tables.len() > budget {
            return Some((std::mem::take(tables), false, None));
        }
    }
    None
}

/// All `k`-ary term operations of `alg`, up to `budget` tables.
pub fn enumerate_clone_slice(alg: &FiniteAlgebra, k: usize, budget: usize) -> CloneSlice {
    let (tables, complete, _) = saturate(alg, k, budget.max(k), &|_| false);
    CloneSlice {
        arity: k,
        tables,
        complete,
    }
}

fn search(
    alg: &FiniteAlgebra,
    k: usize,
    budget: usize,
    pred: &dyn Fn(&[Elem]) -> bool,
) -> OracleResult {
    let (tables, complete, hit) = saturate(alg, k, budget.max(k), pred);
    OracleResult {
        tables_explored: tables.len(),
        table: hit.map(|i| tables[i].clone()),
        complete,
    }
}

/// Index lists of the displaced tuples `(y,x,..,x), ..., (x,..,x,y)` for all
/// `x, y`.
fn displacement_indices(size: usize, k: usize) -> Vec<Vec<usize>> {
    let mut rows = Vec::new();
    let mut args = vec![0; k];
    for x in 0..size as Elem {
        for y in 0..size as Elem {
            rows.push(
                (0..k)
                    .map(|i| {
                        for (j, a) in args.iter_mut().enumerate() {
                            *a = if i == j { y } else { x };
                        }
                        table_index(size, &args)
                    })
                    .collect(),
            );
        }
    }
    rows
}

/// True iff the `k`-ary `table` satisfies the qWNU identities.
pub fn table_is_qwnu(size: usize, k: usize, table: &[Elem]) -> bool {
    displacement_indices(size, k)
        .iter()
        .all(|row| row.iter().all(|&i| table[i] == table[row[0]]))
}

/// True iff the 4-ary `table` satisfies `s(r,a,r,e) = s(a,r,e,a)`.
pub fn table_is_quasi_siggers(size: usize, table: &[Elem]) -> bool {
    let n = size as Elem;
    (0..n).all(|r| {
        (0..n).all(|a| {
            (0..n).all(|e| {
                table[table_index(size, &[r, a, r, e])] == table[table_index(size, &[a, r, e, a])]
            })
        })
    })
}

/// Searches the `k`-ary clone slice for a qWNU table.
pub fn oracle_find_qwnu(alg: &FiniteAlgebra, k: usize, budget: usize) -> OracleResult {
    let rows = displacement_indices(alg.size(), k);
    let pred = move |t: &[Elem]| {
        rows.iter()
            .all(|row| row.iter().all(|&i| t[i] == t[row[0]]))
    };
    search(alg, k, budget, &pred)
}

/// Searches the 4-ary clone slice for a quasi Siggers table.
pub fn oracle_find_quasi_siggers(alg: &FiniteAlgebra, budget: usize) -> OracleResult {
    let size = alg.size();
    let pred = move |t: &[Elem]| table_is_quasi_siggers(size, t);
    search(alg, 4, budget, &pred)
}

/// Deterministic random algebra on `n` elements with one operation per entry
/// of `signature` (named `f0`, `f1`, ...).
pub fn random_algebra(seed: u64, n: usize, signature: &[usize], idempotent: bool) -> FiniteAlgebra {
    assert!(n >= 1, "universe must be non-empty");
    let mut rng = SplitMix64::seed_from_u64(seed);
    let mut ops = Vec::with_capacity(signature.len());
    for (i, &arity) in signature.iter().enumerate() {
        let len = table_len(n, arity).expect("table too large");
        let mut table: Vec<Elem> = (0..len)
            .map(|_| (rng.next_u64() % n as u64) as Elem)
            .collect();
        if idempotent {
            for a in 0..n as Elem {
                table[table_index(n, &vec![a; arity])] = a;
            }
        }
        ops.push(Operation::new(format!("f{i}"), arity, table));
    }
    FiniteAlgebra::new(corpus_name(seed, n, signature, idempotent), n, ops)
        .expect("random tables are in range")
}

fn corpus_name(seed: u64, n: usize, signature: &[usize], idempotent: bool) -> String {
    let sig: Vec<String> = signature.iter().map(usize::to_string).collect();
    format!(
        "seed{seed}-n{n}-sig{}{}",
        sig.join("_"),
        if idempotent { "-idem" } else { "" }
    )
}

/// File name under which a corpus algebra is dumped: encodes seed, size,
/// signature and the idempotent flag.
pub fn corpus_file_name(seed: u64, n: usize, signature: &[usize], idempotent: bool) -> String {
    format!("{}.alg", corpus_name(seed, n, signature, idempotent))
}
