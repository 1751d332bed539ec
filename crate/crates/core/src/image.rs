//! Unary term operations and the idempotent image of an algebra.
//!
//! A unary term operation `α` with inclusion-minimal image `B`, normalized so
//! that `α ∘ α = α`, turns every term operation `t` into an idempotent
//! operation on `B`: with `β(b) = α(t(b, ..., b))` a permutation of `B` and
//! `β^(p+1) = id`, the map `β^p ∘ α ∘ t` restricted to `B` fixes the diagonal.

use std::collections::BTreeSet;

use crate::algebra::{
    table_args, table_len, Elem, FiniteAlgebra, Operation, Term, TermEvaluator, UnaryMap,
};
use crate::error::{Error, Result};
use crate::limits::Limits;
use crate::subpower::SubpowerGenerator;

/// All unary term operations of `alg`, in canonical generation order
/// (identity first).
///
/// The maps are exactly the subuniverse of `A^n` generated by the identity
/// tuple `(0, 1, ..., n-1)`, so the subpower engine does the saturation.
pub fn unary_term_monoid(alg: &FiniteAlgebra, limits: &Limits) -> Result<Vec<UnaryMap>> {
    let identity: Vec<Elem> = (0..alg.size() as Elem).collect();
    let rel = SubpowerGenerator::new(alg)
        .limits(limits.with_max_tuples(limits.max_unary_maps))
        .generate(&[identity])
        .map_err(|e| match e {
            Error::Resource { limit, .. } => Error::resource("unary term monoid size", limit),
            other => other,
        })?;
    Ok(rel.tuples().map(|t| UnaryMap::new(t.to_vec())).collect())
}

/// The chosen `α` and its image `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IdempotentImage {
    pub alpha: UnaryMap,
    /// Sorted image of `alpha`.
    pub image: Vec<Elem>,
}

impl IdempotentImage {
    pub fn position(&self, a: Elem) -> Option<usize> {
        self.image.binary_search(&a).ok()
    }
}

fn is_subset(small: &[Elem], big: &[Elem]) -> bool {
    small.iter().all(|a| big.binary_search(a).is_ok())
}

/// Picks `α` with an inclusion-minimal image, lexicographically least image
/// among the minimal ones, first in generation order among maps with that
/// image, then raised to the power that makes it the identity on its image.
pub fn minimal_unary_idempotent(alg: &FiniteAlgebra) -> Result<IdempotentImage> {
    minimal_unary_idempotent_with(alg, &Limits::default())
}

pub fn minimal_unary_idempotent_with(
    alg: &FiniteAlgebra,
    limits: &Limits,
) -> Result<IdempotentImage> {
    let monoid = unary_term_monoid(alg, limits)?;
    let images: BTreeSet<Vec<Elem>> = monoid.iter().map(UnaryMap::image).collect();
    let image = images
        .iter()
        .find(|b| !images.iter().any(|c| c.len() < b.len() && is_subset(c, b)))
        .cloned()
        .expect("the monoid is never empty");
    let first = monoid
        .iter()
        .find(|u| u.image() == image)
        .expect("image came from the monoid");

    // first restricted to B is a permutation; its order brings it to the identity.
    let mut alpha = first.clone();
    let mut steps = 1;
    while !image.iter().all(|&b| alpha.apply(b) == b) {
        alpha = first.compose(&alpha);
        steps += 1;
        if steps > alg.size() * alg.size() + 1 {
            return Err(Error::Invariant(
                "minimal unary map does not permute its image".into(),
            ));
        }
    }
    debug_assert!(alpha.is_idempotent());
    debug_assert_eq!(alpha.image(), image);
    Ok(IdempotentImage { alpha, image })
}

/// An operation on the image set `B`, with values in `B`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RestrictedOp {
    /// The set `B`, sorted.
    pub domain: Vec<Elem>,
    pub arity: usize,
    /// Row-major over `B^arity` (arguments indexed by position in `domain`);
    /// entries are elements of `B` in the original labelling.
    pub table: Vec<Elem>,
    /// The exponent `p` used in `β^p ∘ α ∘ t`.
    pub power: usize,
}

impl RestrictedOp {
    /// Table with entries replaced by their positions in `domain`.
    pub fn relabeled(&self) -> Vec<Elem> {
        self.table
            .iter()
            .map(|v| self.domain.binary_search(v).expect("value in B") as Elem)
            .collect()
    }

    /// Value at arguments given as elements of `B`.
    pub fn apply(&self, args: &[Elem]) -> Option<Elem> {
        let n = self.domain.len();
        let mut idx = 0;
        for a in args {
            idx = idx * n + self.domain.binary_search(a).ok()?;
        }
        self.table.get(idx).copied()
    }
}

/// `β^p ∘ α ∘ t` on `B^arity`.
pub fn restrict_to_image(
    alg: &FiniteAlgebra,
    img: &IdempotentImage,
    t: &Term,
    arity: usize,
) -> Result<RestrictedOp> {
    if t.min_arity() > arity {
        return Err(Error::MalformedTerm(format!(
            "term mentions x{} but arity is {arity}",
            t.min_arity() - 1
        )));
    }
    let domain = &img.image;
    let mut eval = TermEvaluator::new(alg, t)?;
    let mut diag = vec![0; arity];

    // β as positions within B.
    let mut beta = Vec::with_capacity(domain.len());
    for &b in domain {
        diag.fill(b);
        let v = img.alpha.apply(eval.eval(&diag)?);
        beta.push(
            img.position(v)
                .ok_or_else(|| Error::Invariant(format!("α maps outside its image at {v}")))?,
        );
    }
    let distinct: BTreeSet<usize> = beta.iter().copied().collect();
    if distinct.len() != beta.len() {
        return Err(Error::Invariant(
            "β is not a permutation of the minimal image".into(),
        ));
    }

    // Least p >= 1 with β^(p+1) = id; beta_p holds β^p.
    let compose = |f: &[usize], g: &[usize]| g.iter().map(|&i| f[i]).collect::<Vec<_>>();
    let is_id = |f: &[usize]| f.iter().enumerate().all(|(i, &j)| i == j);
    let mut beta_p = beta.clone();
    let mut power = 1;
    while !is_id(&compose(&beta, &beta_p)) {
        beta_p = compose(&beta, &beta_p);
        power += 1;
    }

    let len = table_len(domain.len(), arity)
        .ok_or_else(|| Error::resource("restricted table size", usize::MAX))?;
    let mut pos = vec![0; arity];
    let mut args = vec![0; arity];
    let mut table = Vec::with_capacity(len);
    for i in 0..len {
        table_args(domain.len(), i, &mut pos);
        for (a, &p) in args.iter_mut().zip(&pos) {
            *a = domain[p as usize];
        }
        let v = img.alpha.apply(eval.eval(&args)?);
        let p = img.position(v).expect("α maps into B");
        table.push(domain[beta_p[p]]);
    }
    Ok(RestrictedOp {
        domain: domain.clone(),
        arity,
        table,
        power,
    })
}

/// The algebra on `B` (relabelled to `0..|B|`) whose operations are the
/// restrictions of the basic operations of `alg`. It is idempotent, and each
/// of its operations is the restriction of a term operation of `alg`.
pub fn induced_algebra(alg: &FiniteAlgebra, img: &IdempotentImage) -> Result<FiniteAlgebra> {
    let ops = alg
        .ops()
        .iter()
        .map(|op| {
            let t = Term::apply(op.symbol(), (0..op.arity()).map(Term::Var).collect());
            let r = restrict_to_image(alg, img, &t, op.arity())?;
            Ok(Operation::new(op.symbol(), op.arity(), r.relabeled()))
        })
        .collect::<Result<Vec<_>>>()?;
    FiniteAlgebra::new(format!("{}|B", alg.name()), img.image.len(), ops)
}
