//! Finite algebras given by operation tables, terms over them, and unary maps.
//!
//! The universe of an algebra of size `n` is always `0..n`. Operation tables
//! are stored row-major with the leftmost argument most significant, so the
//! entry for `f(a_0, ..., a_{m-1})` lives at `sum a_i * n^(m-1-i)`.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// An element of a finite universe.
pub type Elem = u32;

/// Row-major index of `args` in a table over a universe of `size` elements.
#[inline]
pub fn table_index(size: usize, args: &[Elem]) -> usize {
    args.iter().fold(0usize, |acc, &a| acc * size + a as usize)
}

/// Inverse of [`table_index`]: writes the argument tuple for `index` into `out`.
pub fn table_args(size: usize, mut index: usize, out: &mut [Elem]) {
    for slot in out.iter_mut().rev() {
        *slot = (index % size) as Elem;
        index /= size;
    }
}

/// `size^arity`, or `None` on overflow.
pub fn table_len(size: usize, arity: usize) -> Option<usize> {
    let mut len = 1usize;
    for _ in 0..arity {
        len = len.checked_mul(size)?;
    }
    Some(len)
}

/// A named basic operation together with its table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Operation {
    symbol: String,
    arity: usize,
    table: Vec<Elem>,
}

impl Operation {
    /// Builds an operation from a raw table. Validation against a universe
    /// happens when the operation is placed in a [`FiniteAlgebra`].
    pub fn new(symbol: impl Into<String>, arity: usize, table: Vec<Elem>) -> Self {
        Operation {
            symbol: symbol.into(),
            arity,
            table,
        }
    }

    /// Tabulates `f` over all argument tuples of `size^arity`.
    pub fn from_fn(
        symbol: impl Into<String>,
        size: usize,
        arity: usize,
        f: impl Fn(&[Elem]) -> Elem,
    ) -> Self {
        let len = table_len(size, arity).expect("operation table too large");
        let mut args = vec![0; arity];
        let table = (0..len)
            .map(|i| {
                table_args(size, i, &mut args);
                f(&args)
            })
            .collect();
        Operation::new(symbol, arity, table)
    }

    pub fn symbol(&self) -> &str {
        &self.symbol
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn table(&self) -> &[Elem] {
        &self.table
    }

    #[inline]
    pub fn apply(&self, size: usize, args: &[Elem]) -> Elem {
        debug_assert_eq!(args.len(), self.arity);
        self.table[table_index(size, args)]
    }
}

/// A finite algebra on `{0, ..., size - 1}` with an ordered list of basic
/// operations.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteAlgebra {
    name: String,
    size: usize,
    ops: Vec<Operation>,
}

impl FiniteAlgebra {
    /// Validates and builds an algebra.
    ///
    /// Rejects an empty universe, an empty signature, duplicate symbols,
    /// tables of the wrong length and out-of-range entries.
    pub fn new(name: impl Into<String>, size: usize, ops: Vec<Operation>) -> Result<Self> {
        let name = name.into();
        if size == 0 {
            return Err(Error::InvalidAlgebra("universe must be non-empty".into()));
        }
        if ops.is_empty() {
            return Err(Error::InvalidAlgebra(
                "at least one basic operation is required".into(),
            ));
        }
        let mut seen = BTreeSet::new();
        for op in &ops {
            if !seen.insert(op.symbol.as_str()) {
                return Err(Error::InvalidAlgebra(format!(
                    "duplicate operation symbol `{}`",
                    op.symbol
                )));
            }
            let expected = table_len(size, op.arity).ok_or_else(|| {
                Error::InvalidAlgebra(format!("table of `{}` is too large", op.symbol))
            })?;
            if op.table.len() != expected {
                return Err(Error::InvalidAlgebra(format!(
                    "table of `{}` has {} entries, expected {}",
                    op.symbol,
                    op.table.len(),
                    expected
                )));
            }
            if let Some(pos) = op.table.iter().position(|&v| v as usize >= size) {
                return Err(Error::InvalidAlgebra(format!(
                    "entry {} of `{}` is {}, outside 0..{}",
                    pos, op.symbol, op.table[pos], size
                )));
            }
        }
        Ok(FiniteAlgebra { name, size, ops })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn ops(&self) -> &[Operation] {
        &self.ops
    }

    pub fn op_index(&self, symbol: &str) -> Option<usize> {
        self.ops.iter().position(|op| op.symbol == symbol)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.iter().map(Operation::arity).max().unwrap_or(0)
    }

    /// Sum of the table sizes, the usual input-size measure `‖A‖`.
    pub fn norm(&self) -> usize {
        self.ops.iter().map(|op| op.table.len()).sum()
    }

    /// True iff every basic operation satisfies `f(a, ..., a) = a`.
    pub fn is_idempotent(&self) -> bool {
        self.idempotence_violation().is_none()
    }

    /// First `(operation index, element)` with `f(a, ..., a) != a`.
    pub fn idempotence_violation(&self) -> Option<(usize, Elem)> {
        let mut args = Vec::new();
        for (i, op) in self.ops.iter().enumerate() {
            for a in 0..self.size as Elem {
                args.clear();
                args.resize(op.arity, a);
                if op.apply(self.size, &args) != a {
                    return Some((i, a));
                }
            }
        }
        None
    }
}

/// A formal term: a variable or a basic-operation symbol applied to subterms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Term {
    Var(usize),
    Apply { symbol: String, args: Vec<Term> },
}

impl Term {
    pub fn var(index: usize) -> Self {
        Term::Var(index)
    }

    pub fn apply(symbol: impl Into<String>, args: Vec<Term>) -> Self {
        Term::Apply {
            symbol: symbol.into(),
            args,
        }
    }

    /// Largest variable index, if the term mentions any variable.
    pub fn max_var(&self) -> Option<usize> {
        match self {
            Term::Var(i) => Some(*i),
            Term::Apply { args, .. } => args.iter().filter_map(Term::max_var).max(),
        }
    }

    /// Minimal arity of an operation this term can describe.
    pub fn min_arity(&self) -> usize {
        self.max_var().map_or(0, |m| m + 1)
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) => 1,
            Term::Apply { args, .. } => 1 + args.iter().map(Term::size).sum::<usize>(),
        }
    }

    pub fn depth(&self) -> usize {
        match self {
            Term::Var(_) => 0,
            Term::Apply { args, .. } => 1 + args.iter().map(Term::depth).max().unwrap_or(0),
        }
    }

    /// Checks every symbol and arity against `alg`.
    pub fn check(&self, alg: &FiniteAlgebra) -> Result<()> {
        self.compile(alg).map(|_| ())
    }

    fn compile(&self, alg: &FiniteAlgebra) -> Result<Compiled> {
        match self {
            Term::Var(i) => Ok(Compiled::Var(*i)),
            Term::Apply { symbol, args } => {
                let op = alg.op_index(symbol).ok_or_else(|| {
                    Error::MalformedTerm(format!("unknown operation symbol `{symbol}`"))
                })?;
                let arity = alg.ops[op].arity;
                if args.len() != arity {
                    return Err(Error::MalformedTerm(format!(
                        "`{symbol}` has arity {arity} but is applied to {} arguments",
                        args.len()
                    )));
                }
                let args = args
                    .iter()
                    .map(|a| a.compile(alg))
                    .collect::<Result<Vec<_>>>()?;
                Ok(Compiled::Apply(op, args))
            }
        }
    }
}

/// Prefix notation: `x0`, `(f x0 (f x1 x2))`, `(c)` for constants.
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Term::Var(i) => write!(f, "x{i}"),
            Term::Apply { symbol, args } => {
                write!(f, "({symbol}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
        }
    }
}

impl std::str::FromStr for Term {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        crate::io::parse_term(s)
    }
}

impl serde::Serialize for Term {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for Term {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

// Symbols resolved to operation indices.
enum Compiled {
    Var(usize),
    Apply(usize, Vec<Compiled>),
}

impl Compiled {
    fn eval(&self, alg: &FiniteAlgebra, args: &[Elem], scratch: &mut Vec<Elem>) -> Elem {
        match self {
            Compiled::Var(i) => args[*i],
            Compiled::Apply(op, children) => {
                let base = scratch.len();
                for c in children {
                    let v = c.eval(alg, args, scratch);
                    scratch.push(v);
                }
                let v = alg.ops[*op].apply(alg.size, &scratch[base..]);
                scratch.truncate(base);
                v
            }
        }
    }

    // Whole-table evaluation: one column of n^k values per node.
    fn table(&self, alg: &FiniteAlgebra, arity: usize, len: usize) -> Vec<Elem> {
        match self {
            Compiled::Var(i) => {
                let mut args = vec![0; arity];
                (0..len)
                    .map(|idx| {
                        table_args(alg.size, idx, &mut args);
                        args[*i]
                    })
                    .collect()
            }
            Compiled::Apply(op, children) => {
                let op = &alg.ops[*op];
                let cols: Vec<Vec<Elem>> =
                    children.iter().map(|c| c.table(alg, arity, len)).collect();
                let mut args = vec![0; cols.len()];
                (0..len)
                    .map(|idx| {
                        for (slot, col) in args.iter_mut().zip(&cols) {
                            *slot = col[idx];
                        }
                        op.apply(alg.size, &args)
                    })
                    .collect()
            }
        }
    }
}

fn check_args(alg: &FiniteAlgebra, t: &Term, args: &[Elem]) -> Result<()> {
    if let Some(m) = t.max_var() {
        if m >= args.len() {
            return Err(Error::MalformedTerm(format!(
                "variable x{m} needs at least {} arguments, got {}",
                m + 1,
                args.len()
            )));
        }
    }
    if let Some(&a) = args.iter().find(|&&a| a as usize >= alg.size) {
        return Err(Error::MalformedTerm(format!(
            "argument {a} outside universe 0..{}",
            alg.size
        )));
    }
    Ok(())
}

/// Value of the term operation induced by `t` at `args`.
pub fn evaluate_term(alg: &FiniteAlgebra, t: &Term, args: &[Elem]) -> Result<Elem> {
    let compiled = t.compile(alg)?;
    check_args(alg, t, args)?;
    Ok(compiled.eval(alg, args, &mut Vec::new()))
}

/// Reusable evaluator for one term; avoids re-resolving symbols on every call.
pub struct TermEvaluator<'a> {
    alg: &'a FiniteAlgebra,
    compiled: Compiled,
    min_arity: usize,
    scratch: Vec<Elem>,
}

impl<'a> TermEvaluator<'a> {
    pub fn new(alg: &'a FiniteAlgebra, t: &Term) -> Result<Self> {
        Ok(TermEvaluator {
            alg,
            compiled: t.compile(alg)?,
            min_arity: t.min_arity(),
            scratch: Vec::new(),
        })
    }

    pub fn eval(&mut self, args: &[Elem]) -> Result<Elem> {
        if args.len() < self.min_arity || args.iter().any(|&a| a as usize >= self.alg.size) {
            return Err(Error::MalformedTerm(format!(
                "bad argument tuple {args:?} for a term of arity {}",
                self.min_arity
            )));
        }
        Ok(self.compiled.eval(self.alg, args, &mut self.scratch))
    }
}

/// Materializes the `arity`-ary term operation of `t` as a row-major table.
pub fn term_table(alg: &FiniteAlgebra, t: &Term, arity: usize) -> Result<Vec<Elem>> {
    let compiled = t.compile(alg)?;
    if t.min_arity() > arity {
        return Err(Error::MalformedTerm(format!(
            "term mentions x{} but arity is {arity}",
            t.min_arity() - 1
        )));
    }
    let len =
        table_len(alg.size, arity).ok_or_else(|| Error::resource("term table size", usize::MAX))?;
    Ok(compiled.table(alg, arity, len))
}

/// A unary map on the universe, `images[a]` being the value at `a`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct UnaryMap {
    images: Vec<Elem>,
}

impl UnaryMap {
    pub fn new(images: Vec<Elem>) -> Self {
        UnaryMap { images }
    }

    pub fn identity(size: usize) -> Self {
        UnaryMap::new((0..size as Elem).collect())
    }

    pub fn images(&self) -> &[Elem] {
        &self.images
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.images[a as usize]
    }

    /// `self ∘ inner`, i.e. `x ↦ self(inner(x))`.
    pub fn compose(&self, inner: &UnaryMap) -> UnaryMap {
        UnaryMap::new(inner.images.iter().map(|&a| self.apply(a)).collect())
    }

    /// Sorted image set.
    pub fn image(&self) -> Vec<Elem> {
        let set: BTreeSet<Elem> = self.images.iter().copied().collect();
        set.into_iter().collect()
    }

    pub fn is_idempotent(&self) -> bool {
        self.images.iter().all(|&a| self.apply(a) == a)
    }

    pub fn is_identity(&self) -> bool {
        self.images
            .iter()
            .enumerate()
            .all(|(i, &a)| a as usize == i)
    }
}

#[cfg(test)]
pub(crate) mod fixtures {
    use super::*;

    pub fn min2() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "meet",
            2,
            vec![Operation::from_fn("meet", 2, 2, |a| a[0].min(a[1]))],
        )
        .unwrap()
    }

    pub fn min3() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "meet3",
            3,
            vec![Operation::from_fn("f", 3, 2, |a| a[0].min(a[1]))],
        )
        .unwrap()
    }

    pub fn proj2() -> FiniteAlgebra {
        FiniteAlgebra::new("p1", 2, vec![Operation::new("p", 2, vec![0, 0, 1, 1])]).unwrap()
    }

    pub fn not2() -> FiniteAlgebra {
        FiniteAlgebra::new("not", 2, vec![Operation::new("neg", 1, vec![1, 0])]).unwrap()
    }

    pub fn cap3() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "cap",
            3,
            vec![Operation::from_fn("g", 3, 1, |a| a[0].min(1))],
        )
        .unwrap()
    }

    pub fn minority2() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "z2",
            2,
            vec![Operation::from_fn("m", 2, 3, |a| (a[0] + a[1] + a[2]) % 2)],
        )
        .unwrap()
    }

    pub fn maltsev3() -> FiniteAlgebra {
        FiniteAlgebra::new(
            "z3",
            3,
            vec![Operation::from_fn("t", 3, 3, |a| {
                (a[0] + 3 - a[1] + a[2]) % 3
            })],
        )
        .unwrap()
    }
}
