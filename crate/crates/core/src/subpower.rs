//! Subpower generation by worklist saturation.
//!
//! [`generate_subpower`] computes the subuniverse of `A^m` generated by a list
//! of `m`-tuples. Every tuple remembers how it was first found (a generator
//! index, or an operation applied to earlier tuples), which lets
//! [`extract_witness`] turn membership into an explicit term.
//!
//! Insertion order is canonical: generators first, then rounds. A round
//! applies each operation (in declaration order) to every argument combination
//! of tuples known at the start of the round, combinations taken in
//! lexicographic order of tuple indices and restricted to those mentioning at
//! least one tuple that was new in the previous round. Nullary operations fire
//! once, in the first round.

use std::collections::HashMap;

use crate::algebra::{table_len, Elem, FiniteAlgebra, Term, TermEvaluator};
use crate::error::{Error, Result};
use crate::limits::Limits;

// Widths whose full index space is at most this large get a dense lookup array.
const DENSE_INDEX_MAX: usize = 1 << 20;
const ABSENT: u32 = u32::MAX;

enum TupleIndex {
    Dense(Vec<u32>),
    Coded(HashMap<u64, u32>),
    Boxed(HashMap<Box<[Elem]>, u32>),
}

impl TupleIndex {
    fn new(size: usize, width: usize) -> Self {
        match table_len(size, width) {
            Some(len) if len <= DENSE_INDEX_MAX => TupleIndex::Dense(vec![ABSENT; len]),
            Some(len) if (len as u128) <= u64::MAX as u128 => TupleIndex::Coded(HashMap::new()),
            _ => {
                // len does not fit in usize; it may still fit in u64 on 32-bit targets,
                // but boxed keys are always correct.
                TupleIndex::Boxed(HashMap::new())
            }
        }
    }

    #[inline]
    fn code(size: usize, t: &[Elem]) -> u64 {
        t.iter().fold(0u64, |acc, &a| acc * size as u64 + a as u64)
    }

    fn get(&self, size: usize, t: &[Elem]) -> Option<u32> {
        let found = match self {
            TupleIndex::Dense(v) => v[Self::code(size, t) as usize],
            TupleIndex::Coded(m) => *m.get(&Self::code(size, t))?,
            TupleIndex::Boxed(m) => *m.get(t)?,
        };
        (found != ABSENT).then_some(found)
    }

    fn insert(&mut self, size: usize, t: &[Elem], at: u32) {
        match self {
            TupleIndex::Dense(v) => v[Self::code(size, t) as usize] = at,
            TupleIndex::Coded(m) => {
                m.insert(Self::code(size, t), at);
            }
            TupleIndex::Boxed(m) => {
                m.insert(t.into(), at);
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
enum Source {
    Generator(u32),
    Apply { op: u32, parents_at: u32 },
}

/// How a tuple of a [`TupleRelation`] was first obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Derivation<'a> {
    Generator(usize),
    Apply { op: usize, parents: &'a [u32] },
}

/// A set of equal-width tuples in canonical insertion order, each with the
/// derivation that first produced it.
pub struct TupleRelation {
    size: usize,
    width: usize,
    data: Vec<Elem>,
    sources: Vec<Source>,
    parents: Vec<u32>,
    generators: Vec<Elem>,
    generator_count: usize,
    index: TupleIndex,
    algebra: Option<FiniteAlgebra>,
    rounds: usize,
    productions: u64,
    complete: bool,
}

impl std::fmt::Debug for TupleRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("TupleRelation")
            .field("width", &self.width)
            .field("len", &self.len())
            .field("rounds", &self.rounds)
            .field("complete", &self.complete)
            .finish()
    }
}

impl TupleRelation {
    fn empty(size: usize, width: usize, algebra: Option<FiniteAlgebra>) -> Self {
        TupleRelation {
            size,
            width,
            data: Vec::new(),
            sources: Vec::new(),
            parents: Vec::new(),
            generators: Vec::new(),
            generator_count: 0,
            index: TupleIndex::new(size, width),
            algebra,
            rounds: 0,
            productions: 0,
            complete: true,
        }
    }

    /// A relation holding exactly `tuples` (duplicates dropped), each recorded
    /// as a generator. No algebra is attached.
    pub fn from_tuples(size: usize, width: usize, tuples: &[Vec<Elem>]) -> Result<Self> {
        let mut rel = TupleRelation::empty(size, width, None);
        rel.add_generators(tuples, usize::MAX)?;
        Ok(rel)
    }

    fn add_generators(&mut self, tuples: &[Vec<Elem>], max: usize) -> Result<()> {
        if self.width == 0 {
            return Err(Error::Argument("tuple width must be positive".into()));
        }
        for (g, t) in tuples.iter().enumerate() {
            if t.len() != self.width {
                return Err(Error::Argument(format!(
                    "generator {g} has width {}, expected {}",
                    t.len(),
                    self.width
                )));
            }
            if let Some(&a) = t.iter().find(|&&a| a as usize >= self.size) {
                return Err(Error::Argument(format!(
                    "generator {g} contains {a}, outside 0..{}",
                    self.size
                )));
            }
            self.generators.extend_from_slice(t);
            self.generator_count += 1;
            if self.index.get(self.size, t).is_none() {
                self.push(t, Source::Generator(g as u32), max)?;
            }
        }
        Ok(())
    }

    fn push(&mut self, t: &[Elem], source: Source, max: usize) -> Result<u32> {
        let at = self.sources.len();
        if at >= max || at >= ABSENT as usize {
            return Err(Error::resource(
                format!(
                    "subpower of width {} grew past its tuple budget",
                    self.width
                ),
                max,
            ));
        }
        self.data.extend_from_slice(t);
        self.sources.push(source);
        self.index.insert(self.size, t, at as u32);
        Ok(at as u32)
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Universe size of the underlying algebra.
    pub fn universe_size(&self) -> usize {
        self.size
    }

    pub fn len(&self) -> usize {
        self.sources.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sources.is_empty()
    }

    /// Number of generators as supplied, duplicates included.
    pub fn generator_count(&self) -> usize {
        self.generator_count
    }

    pub fn generator(&self, g: usize) -> &[Elem] {
        &self.generators[g * self.width..(g + 1) * self.width]
    }

    pub fn tuple(&self, i: usize) -> &[Elem] {
        &self.data[i * self.width..(i + 1) * self.width]
    }

    pub fn tuples(&self) -> impl Iterator<Item = &[Elem]> + '_ {
        self.data.chunks_exact(self.width.max(1))
    }

    pub fn index_of(&self, t: &[Elem]) -> Option<usize> {
        if t.len() != self.width || t.iter().any(|&a| a as usize >= self.size) {
            return None;
        }
        self.index.get(self.size, t).map(|i| i as usize)
    }

    pub fn contains(&self, t: &[Elem]) -> bool {
        self.index_of(t).is_some()
    }

    pub fn derivation(&self, i: usize) -> Derivation<'_> {
        match self.sources[i] {
            Source::Generator(g) => Derivation::Generator(g as usize),
            Source::Apply { op, parents_at } => {
                let arity = self
                    .algebra
                    .as_ref()
                    .map(|a| a.ops()[op as usize].arity())
                    .unwrap_or(0);
                let start = parents_at as usize;
                Derivation::Apply {
                    op: op as usize,
                    parents: &self.parents[start..start + arity],
                }
            }
        }
    }

    /// Recomputes tuple `i` from its derivation.
    pub fn replay(&self, i: usize) -> Vec<Elem> {
        match self.derivation(i) {
            Derivation::Generator(g) => self.generator(g).to_vec(),
            Derivation::Apply { op, parents } => {
                let alg = self
                    .algebra
                    .as_ref()
                    .expect("derived tuples imply an algebra");
                let op = &alg.ops()[op];
                let mut args = vec![0; parents.len()];
                (0..self.width)
                    .map(|c| {
                        for (slot, &p) in args.iter_mut().zip(parents) {
                            *slot = self.tuple(p as usize)[c];
                        }
                        op.apply(self.size, &args)
                    })
                    .collect()
            }
        }
    }

    /// The algebra the relation was generated in, if any.
    pub fn algebra(&self) -> Option<&FiniteAlgebra> {
        self.algebra.as_ref()
    }

    /// Closure rounds performed after the generators.
    pub fn rounds(&self) -> usize {
        self.rounds
    }

    /// Operation applications evaluated during generation.
    pub fn productions(&self) -> u64 {
        self.productions
    }

    /// False when generation stopped early on a target tuple.
    pub fn is_complete(&self) -> bool {
        self.complete
    }
}

type StopAt<'a> = &'a dyn Fn(&[Elem]) -> bool;

/// Configurable subpower generation.
pub struct SubpowerGenerator<'a> {
    alg: &'a FiniteAlgebra,
    limits: Limits,
    stop_at: Option<StopAt<'a>>,
}

impl<'a> SubpowerGenerator<'a> {
    pub fn new(alg: &'a FiniteAlgebra) -> Self {
        SubpowerGenerator {
            alg,
            limits: Limits::default(),
            stop_at: None,
        }
    }

    pub fn limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    /// Stop as soon as a tuple satisfying `target` enters the relation. The
    /// resulting relation is a canonical prefix of the full closure.
    pub fn stop_at(mut self, target: &'a dyn Fn(&[Elem]) -> bool) -> Self {
        self.stop_at = Some(target);
        self
    }

    pub fn generate(&self, generators: &[Vec<Elem>]) -> Result<TupleRelation> {
        let alg = self.alg;
        let size = alg.size();
        let width = generators
            .first()
            .map(Vec::len)
            .ok_or_else(|| Error::Argument("at least one generator is required".into()))?;
        let max = self.limits.max_tuples;
        let mut rel = TupleRelation::empty(size, width, Some(alg.clone()));
        rel.add_generators(generators, max)?;
        if let Some(stop) = self.stop_at {
            if rel.tuples().any(stop) {
                rel.complete = false;
                return Ok(rel);
            }
        }

        // Powers n^(m-1-j) for the widest operation.
        let max_arity = alg.max_arity();
        let mut weights = vec![1usize; max_arity];
        let mut scratch = vec![0 as Elem; width];
        let mut idx = vec![0usize; max_arity];

        let mut new_start = 0usize;
        let mut end = rel.len();
        let mut first_round = true;
        while first_round || new_start < end {
            rel.rounds += 1;
            for (oi, op) in alg.ops().iter().enumerate() {
                let m = op.arity();
                let table = op.table();
                if m == 0 {
                    if first_round {
                        rel.productions += 1;
                        scratch.fill(table[0]);
                        if self.offer(&mut rel, &scratch, oi, &[], max)? {
                            return Ok(rel);
                        }
                    }
                    continue;
                }
                if new_start >= end {
                    continue;
                }
                for (j, w) in weights[..m].iter_mut().enumerate() {
                    *w = size.pow((m - 1 - j) as u32);
                }
                let idx = &mut idx[..m];
                idx.fill(0);
                idx[m - 1] = new_start;
                loop {
                    rel.productions += 1;
                    for (c, slot) in scratch.iter_mut().enumerate() {
                        let mut code = 0usize;
                        for j in 0..m {
                            code += rel.data[idx[j] * width + c] as usize * weights[j];
                        }
                        *slot = table[code];
                    }
                    if self.offer(&mut rel, &scratch, oi, idx, max)? {
                        return Ok(rel);
                    }
                    // Odometer step over [0, end)^m, skipping all-old combinations.
                    let mut p = m;
                    let advanced = loop {
                        if p == 0 {
                            break false;
                        }
                        p -= 1;
                        idx[p] += 1;
                        if idx[p] < end {
                            break true;
                        }
                        idx[p] = 0;
                    };
                    if !advanced {
                        break;
                    }
                    if idx[..m - 1].iter().all(|&i| i < new_start) && idx[m - 1] < new_start {
                        idx[m - 1] = new_start;
                    }
                }
            }
            first_round = false;
            new_start = end;
            end = rel.len();
        }
        Ok(rel)
    }

    // Inserts a produced tuple if new; returns true when generation should stop.
    fn offer(
        &self,
        rel: &mut TupleRelation,
        t: &[Elem],
        op: usize,
        parents: &[usize],
        max: usize,
    ) -> Result<bool> {
        if rel.index.get(rel.size, t).is_some() {
            return Ok(false);
        }
        let parents_at = rel.parents.len() as u32;
        rel.parents.extend(parents.iter().map(|&p| p as u32));
        rel.push(
            t,
            Source::Apply {
                op: op as u32,
                parents_at,
            },
            max,
        )?;
        if let Some(stop) = self.stop_at {
            if stop(t) {
                rel.complete = false;
                return Ok(true);
            }
        }
        Ok(false)
    }
}

/// The subuniverse of `A^m` generated by `generators`, with default limits.
pub fn generate_subpower(alg: &FiniteAlgebra, generators: &[Vec<Elem>]) -> Result<TupleRelation> {
    SubpowerGenerator::new(alg).generate(generators)
}

/// Least `c` such that `(c, ..., c)` is in `rel`.
pub fn find_constant(rel: &TupleRelation) -> Option<Elem> {
    rel.tuples()
        .filter(|t| t.iter().all(|&a| a == t[0]))
        .map(|t| t[0])
        .min()
}

/// Least `u` (lexicographically) such that `b` copies of the `w`-tuple `u`,
/// concatenated, form a member of `rel`.
pub fn find_block_repeat(
    rel: &TupleRelation,
    block_width: usize,
    block_count: usize,
) -> Result<Option<Vec<Elem>>> {
    if block_width == 0 || block_width * block_count != rel.width() {
        return Err(Error::Argument(format!(
            "relation width {} is not {block_width} x {block_count}",
            rel.width()
        )));
    }
    Ok(rel
        .tuples()
        .filter(|t| is_block_repeat(t, block_width))
        .map(|t| t[..block_width].to_vec())
        .min())
}

pub(crate) fn is_block_repeat(t: &[Elem], block_width: usize) -> bool {
    let (first, rest) = t.split_at(block_width);
    rest.chunks_exact(block_width).all(|b| b == first)
}

/// Least `(q, r)` with `(q, q, r, r)` in `rel`; `q = r` is allowed.
pub fn find_qqrr(rel: &TupleRelation) -> Result<Option<(Elem, Elem)>> {
    if rel.width() != 4 {
        return Err(Error::Argument(format!(
            "(q,q,r,r) search needs width 4, got {}",
            rel.width()
        )));
    }
    Ok(rel
        .tuples()
        .filter(|t| is_qqrr(t))
        .map(|t| (t[0], t[2]))
        .min())
}

pub(crate) fn is_qqrr(t: &[Elem]) -> bool {
    t[0] == t[1] && t[2] == t[3]
}

/// A term over generator variables `x0..x(g-1)` together with the tuple it
/// produces when evaluated coordinate-wise on the generators.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WitnessTerm {
    pub term: Term,
    pub target: Vec<Elem>,
}

/// Builds a witness term for `target` from the derivation DAG, with the
/// default term-size cap.
pub fn extract_witness(rel: &TupleRelation, target: &[Elem]) -> Result<WitnessTerm> {
    extract_witness_with(rel, target, Limits::default().max_term_nodes)
}

/// [`extract_witness`] with an explicit cap on the number of term nodes.
/// The witness is replayed against the generators before it is returned.
pub fn extract_witness_with(
    rel: &TupleRelation,
    target: &[Elem],
    max_nodes: usize,
) -> Result<WitnessTerm> {
    let root = rel
        .index_of(target)
        .ok_or_else(|| Error::NotFound(format!("tuple {target:?} is not in the relation")))?;

    // Ancestors of root; parents always precede children, so a descending
    // sweep discovers them all.
    let mut needed = vec![false; root + 1];
    needed[root] = true;
    for i in (0..=root).rev() {
        if !needed[i] {
            continue;
        }
        if let Derivation::Apply { parents, .. } = rel.derivation(i) {
            for &p in parents {
                needed[p as usize] = true;
            }
        }
    }

    // Tree sizes first, so an exponential blow-up is refused before it is built.
    let mut sizes = vec![0usize; root + 1];
    for i in 0..=root {
        if !needed[i] {
            continue;
        }
        sizes[i] = match rel.derivation(i) {
            Derivation::Generator(_) => 1,
            Derivation::Apply { parents, .. } => parents
                .iter()
                .fold(1usize, |acc, &p| acc.saturating_add(sizes[p as usize])),
        };
    }
    if sizes[root] > max_nodes {
        return Err(Error::resource(
            format!("witness term for {target:?} has {} nodes", sizes[root]),
            max_nodes,
        ));
    }

    let mut terms: Vec<Option<Term>> = vec![None; root + 1];
    for i in 0..=root {
        if !needed[i] {
            continue;
        }
        terms[i] = Some(match rel.derivation(i) {
            Derivation::Generator(g) => Term::Var(g),
            Derivation::Apply { op, parents } => {
                let alg = rel.algebra().expect("derived tuples imply an algebra");
                Term::apply(
                    alg.ops()[op].symbol(),
                    parents
                        .iter()
                        .map(|&p| terms[p as usize].clone().expect("parent built"))
                        .collect(),
                )
            }
        });
    }
    let term = terms[root].take().expect("root built");
    let witness = WitnessTerm {
        term,
        target: target.to_vec(),
    };
    verify_witness(rel, &witness)?;
    Ok(witness)
}

/// Evaluates the witness coordinate-wise on the generators of `rel`.
pub fn verify_witness(rel: &TupleRelation, w: &WitnessTerm) -> Result<()> {
    if let Term::Var(g) = w.term {
        return if g < rel.generator_count() && rel.generator(g) == w.target.as_slice() {
            Ok(())
        } else {
            Err(Error::Invariant(format!("generator x{g} does not replay")))
        };
    }
    let alg = rel
        .algebra()
        .ok_or_else(|| Error::Invariant("witness replay needs an algebra".into()))?;
    let mut eval = TermEvaluator::new(alg, &w.term)?;
    let mut args = vec![0; rel.generator_count()];
    for c in 0..rel.width() {
        for (g, slot) in args.iter_mut().enumerate() {
            *slot = rel.generator(g)[c];
        }
        if eval.eval(&args)? != w.target[c] {
            return Err(Error::Invariant(format!(
                "witness {} does not replay to {:?} at coordinate {c}",
                w.term, w.target
            )));
        }
    }
    Ok(())
}
