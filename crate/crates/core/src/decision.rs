//! Decision procedures for k-ary quasi weak near-unanimity terms and quasi
//! Taylor terms.
//!
//! Each procedure reduces a global question to finitely many subpower
//! membership checks, one per pair of elements (or of `n`-tuples):
//!
//! * k-qWNU: for every `(r, s)`, the subpower of `A^k` generated by the
//!   displaced tuples `(s, r, ..., r), ..., (r, ..., r, s)` must contain a
//!   constant tuple.
//! * n-local k-qWNU: the same with `r̄, s̄ ∈ A^n` and blocks of width `n`;
//!   a block-repeated tuple `(ū, ..., ū)` is required.
//! * quasi Taylor: for every `(a, b)`, the subpower of `A^4` generated by the
//!   columns of the matrix with rows `(a,b,a,b)`, `(b,a,b,b)`, `(a,b,a,a)`,
//!   `(b,a,a,b)` must contain a tuple `(q, q, r, r)`. These rows are the two
//!   sides of the quasi Siggers identity `s(r,a,r,e) = s(a,r,e,a)` at
//!   `(r,a,e) = (a,b,b)` and `(a,b,a)`, so a quasi Siggers term passes every
//!   pair, and a term found for every pair is a local quasi Taylor term.
//!
//! The diagonal matrix (`a` on the diagonal, `b` elsewhere) is kept as
//! [`Problem::DiagonalSiggers`]. It is sound but not complete: the two
//! element minority algebra has a quasi Siggers term yet fails it at `(0,1)`.
//!
//! Pairs are visited in lexicographic order and checked in parallel batches;
//! the reported refutation is always the least failing pair.

use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{table_args, table_len, Elem, FiniteAlgebra, Term, TermEvaluator};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::subpower::{
    extract_witness_with, is_block_repeat, is_qqrr, SubpowerGenerator, TupleRelation, WitnessTerm,
};

const BATCH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Problem {
    /// Does the algebra have a k-ary quasi WNU term?
    KQwnu,
    /// Does the (idempotent) algebra have a k-ary WNU term?
    KWnuIdemp,
    /// Does the algebra have n-local k-qWNU terms?
    NLocalKQwnu,
    /// Does the algebra have a quasi Taylor term?
    QuasiTaylor,
    /// Diagonal 4x4 Siggers matrix; sufficient for quasi Taylor only.
    DiagonalSiggers,
}

impl Problem {
    pub fn name(self) -> &'static str {
        match self {
            Problem::KQwnu => "has-k-qwnu",
            Problem::KWnuIdemp => "has-k-wnu-idemp",
            Problem::NLocalKQwnu => "has-n-local-k-qwnu",
            Problem::QuasiTaylor => "has-quasi-taylor",
            Problem::DiagonalSiggers => "diagonal-siggers",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Answer {
    Yes,
    No,
}

/// The witness for one checked pair.
///
/// For the qWNU problems `first`/`second` are `r̄`/`s̄` (`s̄` is the displaced
/// entry); for the Siggers problems they are `a`/`b`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PairWitness {
    pub first: Vec<Elem>,
    pub second: Vec<Elem>,
    pub term: Term,
    /// The tuple the term produces on the generators.
    pub tuple: Vec<Elem>,
    /// The equalities the term satisfies at this pair, spelled out.
    pub identities: String,
}

/// The least pair whose subpower lacks the required tuple.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Refutation {
    pub first: Vec<Elem>,
    pub second: Vec<Elem>,
    /// Size of the (complete) subpower that was searched.
    pub subpower_size: usize,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Stats {
    pub pairs_checked: usize,
    pub tuples_generated: usize,
    pub largest_subpower: usize,
    pub max_rounds: usize,
    pub productions: u64,
    pub elapsed_ms: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionReport {
    pub problem: Problem,
    pub algebra: String,
    pub k: usize,
    /// Locality `n` (1 for the plain qWNU problems, absent for quasi Taylor).
    pub n: Option<usize>,
    pub answer: Answer,
    pub witnesses: Vec<PairWitness>,
    pub refutation: Option<Refutation>,
    pub stats: Stats,
}

impl DecisionReport {
    pub fn is_yes(&self) -> bool {
        self.answer == Answer::Yes
    }
}

/// Generators for one pair: the columns of the displacement matrix.
///
/// For the qWNU problems `first = r̄`, `second = s̄`, width `k·n`; for quasi
/// Taylor `first = a`, `second = b`, width 4.
pub fn pair_generators(
    problem: Problem,
    k: usize,
    first: &[Elem],
    second: &[Elem],
) -> Vec<Vec<Elem>> {
    match problem {
        Problem::QuasiTaylor => {
            let (a, b) = (first[0], second[0]);
            let rows = [[a, b, a, b], [b, a, b, b], [a, b, a, a], [b, a, a, b]];
            (0..4)
                .map(|j| rows.iter().map(|row| row[j]).collect())
                .collect()
        }
        Problem::DiagonalSiggers => (0..4)
            .map(|j| {
                (0..4)
                    .map(|i| if i == j { first[0] } else { second[0] })
                    .collect()
            })
            .collect(),
        _ => (0..k)
            .map(|j| {
                (0..k)
                    .flat_map(|i| if i == j { second } else { first }.iter().copied())
                    .collect()
            })
            .collect(),
    }
}

fn target_pattern(problem: Problem, n: usize) -> impl Fn(&[Elem]) -> bool {
    move |t: &[Elem]| match problem {
        Problem::QuasiTaylor | Problem::DiagonalSiggers => is_qqrr(t),
        _ => is_block_repeat(t, n),
    }
}

/// Configuration for the decision procedures.
#[derive(Debug, Clone)]
pub struct Decider {
    pub limits: Limits,
    /// Check pairs on the rayon pool. Results are identical either way.
    pub parallel: bool,
}

impl Default for Decider {
    fn default() -> Self {
        Decider {
            limits: Limits::default(),
            parallel: true,
        }
    }
}

enum PairOutcome {
    Found(PairWitness, PairStats),
    Missing(Refutation, PairStats),
}

struct PairStats {
    tuples: usize,
    rounds: usize,
    productions: u64,
}

impl PairStats {
    fn of(rel: &TupleRelation) -> Self {
        PairStats {
            tuples: rel.len(),
            rounds: rel.rounds(),
            productions: rel.productions(),
        }
    }
}

impl Decider {
    pub fn new(limits: Limits) -> Self {
        Decider {
            limits,
            parallel: true,
        }
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }

    /// HAS-k-qWNU.
    pub fn has_k_qwnu(&self, alg: &FiniteAlgebra, k: usize) -> Result<DecisionReport> {
        check_k(k)?;
        self.run(alg, Problem::KQwnu, k, 1)
    }

    /// HAS-k-WNU-IDEMP: rejects non-idempotent input, then answers HAS-k-qWNU.
    pub fn has_k_wnu_idemp(&self, alg: &FiniteAlgebra, k: usize) -> Result<DecisionReport> {
        check_k(k)?;
        if let Some((op, a)) = alg.idempotence_violation() {
            let op = &alg.ops()[op];
            let args = vec![a; op.arity()];
            return Err(Error::Precondition(format!(
                "operation `{}` is not idempotent: {}{:?} = {}",
                op.symbol(),
                op.symbol(),
                args,
                op.apply(alg.size(), &args)
            )));
        }
        let mut report = self.run(alg, Problem::KQwnu, k, 1)?;
        report.problem = Problem::KWnuIdemp;
        for w in &report.witnesses {
            let mut eval = TermEvaluator::new(alg, &w.term)?;
            for a in 0..alg.size() as Elem {
                if eval.eval(&vec![a; k])? != a {
                    return Err(Error::Invariant(format!(
                        "witness {} of an idempotent algebra is not idempotent",
                        w.term
                    )));
                }
            }
        }
        Ok(report)
    }

    /// n-local k-qWNU terms, checked over all pairs of n-tuples.
    pub fn has_n_local_k_qwnu(
        &self,
        alg: &FiniteAlgebra,
        n: usize,
        k: usize,
    ) -> Result<DecisionReport> {
        check_k(k)?;
        if n == 0 {
            return Err(Error::Argument("locality n must be at least 1".into()));
        }
        self.run(alg, Problem::NLocalKQwnu, k, n)
    }

    /// HAS-QTAYLOR via the quasi Siggers instance matrix.
    pub fn has_quasi_taylor(&self, alg: &FiniteAlgebra) -> Result<DecisionReport> {
        self.run(alg, Problem::QuasiTaylor, 4, 1)
    }

    /// The diagonal 4x4 matrix. A yes implies a quasi Taylor term; a no
    /// proves nothing.
    pub fn diagonal_siggers_test(&self, alg: &FiniteAlgebra) -> Result<DecisionReport> {
        self.run(alg, Problem::DiagonalSiggers, 4, 1)
    }

    /// Complete subpower for one pair (no early stop), e.g. to re-examine a
    /// refutation.
    pub fn pair_subpower(
        &self,
        alg: &FiniteAlgebra,
        problem: Problem,
        k: usize,
        first: &[Elem],
        second: &[Elem],
    ) -> Result<TupleRelation> {
        SubpowerGenerator::new(alg)
            .limits(self.limits)
            .generate(&pair_generators(problem, k, first, second))
    }

    fn run(
        &self,
        alg: &FiniteAlgebra,
        problem: Problem,
        k: usize,
        n: usize,
    ) -> Result<DecisionReport> {
        let started = Instant::now();
        let size = alg.size();
        let pair_count = table_len(size, 2 * n)
            .filter(|&c| c <= self.limits.max_pairs)
            .ok_or_else(|| {
                Error::resource(
                    format!("{size}^{} pairs of {n}-tuples", 2 * n),
                    self.limits.max_pairs,
                )
            })?;

        let mut stats = Stats::default();
        let mut witnesses = Vec::new();
        let mut refutation = None;
        let mut start = 0;
        'batches: while start < pair_count {
            let end = (start + BATCH).min(pair_count);
            let outcomes: Vec<Result<PairOutcome>> = if self.parallel {
                (start..end)
                    .into_par_iter()
                    .map(|i| self.check_pair(alg, problem, k, n, i))
                    .collect()
            } else {
                (start..end)
                    .map(|i| self.check_pair(alg, problem, k, n, i))
                    .collect()
            };
            for outcome in outcomes {
                let (ps, missing) = match outcome? {
                    PairOutcome::Found(w, ps) => {
                        witnesses.push(w);
                        (ps, None)
                    }
                    PairOutcome::Missing(r, ps) => (ps, Some(r)),
                };
                stats.pairs_checked += 1;
                stats.tuples_generated += ps.tuples;
                stats.largest_subpower = stats.largest_subpower.max(ps.tuples);
                stats.max_rounds = stats.max_rounds.max(ps.rounds);
                stats.productions += ps.productions;
                if missing.is_some() {
                    refutation = missing;
                    break 'batches;
                }
            }
            start = end;
        }

        let answer = if refutation.is_none() {
            Answer::Yes
        } else {
            witnesses.clear();
            Answer::No
        };
        stats.elapsed_ms = duration_ms(started.elapsed());
        Ok(DecisionReport {
            problem,
            algebra: alg.name().to_string(),
            k,
            n: matches!(
                problem,
                Problem::KQwnu | Problem::KWnuIdemp | Problem::NLocalKQwnu
            )
            .then_some(n),
            answer,
            witnesses,
            refutation,
            stats,
        })
    }

    fn check_pair(
        &self,
        alg: &FiniteAlgebra,
        problem: Problem,
        k: usize,
        n: usize,
        pair_index: usize,
    ) -> Result<PairOutcome> {
        let mut digits = vec![0; 2 * n];
        table_args(alg.size(), pair_index, &mut digits);
        let (first, second) = digits.split_at(n);
        let generators = pair_generators(problem, k, first, second);
        let pattern = target_pattern(problem, n);
        let rel = SubpowerGenerator::new(alg)
            .limits(self.limits)
            .stop_at(&pattern)
            .generate(&generators)?;
        let ps = PairStats::of(&rel);
        let Some(found) = rel.tuples().position(&pattern) else {
            return Ok(PairOutcome::Missing(
                Refutation {
                    first: first.to_vec(),
                    second: second.to_vec(),
                    subpower_size: rel.len(),
                },
                ps,
            ));
        };
        let WitnessTerm { term, target } =
            extract_witness_with(&rel, rel.tuple(found), self.limits.max_term_nodes)?;
        let identities = match problem {
            Problem::QuasiTaylor => verify_siggers_instances(alg, &term, first[0], second[0])?,
            Problem::DiagonalSiggers => verify_siggers_pattern(alg, &term, first[0], second[0])?,
            _ => verify_local_qwnu(alg, &term, k, first, second)?,
        };
        Ok(PairOutcome::Found(
            PairWitness {
                first: first.to_vec(),
                second: second.to_vec(),
                term,
                tuple: target,
                identities,
            },
            ps,
        ))
    }
}

fn check_k(k: usize) -> Result<()> {
    if k < 2 {
        return Err(Error::Argument(format!("k must be at least 2, got {k}")));
    }
    Ok(())
}

fn duration_ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

fn fmt_tuple(t: &[Elem]) -> String {
    if t.len() == 1 {
        t[0].to_string()
    } else {
        let parts: Vec<String> = t.iter().map(Elem::to_string).collect();
        format!("({})", parts.join(","))
    }
}

/// Checks `t(s̄, r̄, ..., r̄) = ... = t(r̄, ..., r̄, s̄)` coordinate-wise and
/// returns the equalities in words.
pub fn verify_local_qwnu(
    alg: &FiniteAlgebra,
    t: &Term,
    k: usize,
    r: &[Elem],
    s: &[Elem],
) -> Result<String> {
    let mut eval = TermEvaluator::new(alg, t)?;
    let mut args = vec![0; k];
    let mut value = Vec::with_capacity(r.len());
    for c in 0..r.len() {
        let mut common = None;
        for i in 0..k {
            for (j, slot) in args.iter_mut().enumerate() {
                *slot = if i == j { s[c] } else { r[c] };
            }
            let v = eval.eval(&args)?;
            match common {
                None => common = Some(v),
                Some(u) if u != v => {
                    return Err(Error::Invariant(format!(
                        "witness {t} breaks the displacement equalities at r={}, s={}",
                        fmt_tuple(r),
                        fmt_tuple(s)
                    )))
                }
                _ => {}
            }
        }
        value.push(common.expect("k >= 2"));
    }
    let (r, s) = (fmt_tuple(r), fmt_tuple(s));
    let sides: Vec<String> = (0..k)
        .map(|i| {
            let args: Vec<&str> = (0..k)
                .map(|j| if i == j { s.as_str() } else { r.as_str() })
                .collect();
            format!("t({})", args.join(","))
        })
        .collect();
    Ok(format!("{} = {}", sides.join(" = "), fmt_tuple(&value)))
}

/// Checks `s(a,b,b,b) = s(b,a,b,b)` and `s(b,b,a,b) = s(b,b,b,a)`.
pub fn verify_siggers_pattern(alg: &FiniteAlgebra, t: &Term, a: Elem, b: Elem) -> Result<String> {
    let mut eval = TermEvaluator::new(alg, t)?;
    let q1 = eval.eval(&[a, b, b, b])?;
    let q2 = eval.eval(&[b, a, b, b])?;
    let r1 = eval.eval(&[b, b, a, b])?;
    let r2 = eval.eval(&[b, b, b, a])?;
    if q1 != q2 || r1 != r2 {
        return Err(Error::Invariant(format!(
            "witness {t} breaks the Siggers pattern at a={a}, b={b}"
        )));
    }
    Ok(format!(
        "s({a},{b},{b},{b}) = s({b},{a},{b},{b}) = {q1}; s({b},{b},{a},{b}) = s({b},{b},{b},{a}) = {r1}"
    ))
}

/// Checks `s(a,b,a,b) = s(b,a,b,b)` and `s(a,b,a,a) = s(b,a,a,b)`.
pub fn verify_siggers_instances(alg: &FiniteAlgebra, t: &Term, a: Elem, b: Elem) -> Result<String> {
    let mut eval = TermEvaluator::new(alg, t)?;
    let q1 = eval.eval(&[a, b, a, b])?;
    let q2 = eval.eval(&[b, a, b, b])?;
    let r1 = eval.eval(&[a, b, a, a])?;
    let r2 = eval.eval(&[b, a, a, b])?;
    if q1 != q2 || r1 != r2 {
        return Err(Error::Invariant(format!(
            "witness {t} breaks the Siggers instances at a={a}, b={b}"
        )));
    }
    Ok(format!(
        "s({a},{b},{a},{b}) = s({b},{a},{b},{b}) = {q1}; s({a},{b},{a},{a}) = s({b},{a},{a},{b}) = {r1}"
    ))
}

/// True iff `t` satisfies the global k-qWNU identities
/// `t(y,x,...,x) = t(x,y,...,x) = ... = t(x,...,x,y)` for all `x, y`.
pub fn check_qwnu_identities(alg: &FiniteAlgebra, t: &Term, k: usize) -> Result<bool> {
    if t.min_arity() > k {
        return Err(Error::MalformedTerm(format!(
            "term mentions x{} but k is {k}",
            t.min_arity() - 1
        )));
    }
    let mut eval = TermEvaluator::new(alg, t)?;
    let mut args = vec![0; k];
    for x in 0..alg.size() as Elem {
        for y in 0..alg.size() as Elem {
            let mut common = None;
            for i in 0..k {
                for (j, slot) in args.iter_mut().enumerate() {
                    *slot = if i == j { y } else { x };
                }
                let v = eval.eval(&args)?;
                if *common.get_or_insert(v) != v {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// True iff `s(r,a,r,e) = s(a,r,e,a)` for all `r, a, e`.
pub fn check_quasi_siggers_identity(alg: &FiniteAlgebra, s: &Term) -> Result<bool> {
    if s.min_arity() > 4 {
        return Err(Error::MalformedTerm(format!(
            "term mentions x{} but a Siggers term is 4-ary",
            s.min_arity() - 1
        )));
    }
    let mut eval = TermEvaluator::new(alg, s)?;
    let n = alg.size() as Elem;
    for r in 0..n {
        for a in 0..n {
            for e in 0..n {
                if eval.eval(&[r, a, r, e])? != eval.eval(&[a, r, e, a])? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

pub fn has_k_qwnu(alg: &FiniteAlgebra, k: usize) -> Result<DecisionReport> {
    Decider::default().has_k_qwnu(alg, k)
}

pub fn has_k_wnu_idemp(alg: &FiniteAlgebra, k: usize) -> Result<DecisionReport> {
    Decider::default().has_k_wnu_idemp(alg, k)
}

pub fn has_n_local_k_qwnu(alg: &FiniteAlgebra, n: usize, k: usize) -> Result<DecisionReport> {
    Decider::default().has_n_local_k_qwnu(alg, n, k)
}

pub fn has_quasi_taylor(alg: &FiniteAlgebra) -> Result<DecisionReport> {
    Decider::default().has_quasi_taylor(alg)
}
