//! `maltsev-lab`: deciding Maltsev conditions of finite algebras
//!
//! Algebras are operation tables over `{0, ..., n-1}`. The library decides
//! whether an algebra has a k-ary quasi weak near-unanimity (qWNU) term,
//! n-local k-qWNU terms, or a quasi Taylor term, by generating subpowers and
//! extracting witness terms from the derivations it records. A brute-force
//! clone oracle, the idempotent image construction and a small digraph lab
//! round it out.
//!
//! ## Examples
//!
//! The `examples/` directory is the main tour, one program per capability:
//!
//! - **`qwnu_decision`** - Decide k-qWNU, print witnesses or the refuting pair
//! - **`quasi_taylor`** - The 4-ary quasi Siggers check
//! - **`local_terms`** - n-local k-qWNU terms and their monotonicity in n
//! - **`idempotent_image`** - Minimal unary idempotent and the induced algebra
//! - **`subpower_witness`** - Generate a subpower, extract and replay a term
//! - **`loop_lemma`** - Smooth digraphs, algebraic length and loops
//! - **`clone_oracle`** - Enumerate clone slices and cross-check a decision
//! - **`random_corpus`** - Seeded random algebras written to disk
//! - **`scaling`** - Runtime of the k = 2 decision as the universe grows
//!
//! ```bash
//! cargo run --release --example qwnu_decision
//! cargo run --release --example loop_lemma
//! ```
//!
//! ## Quick start
//!
//! ```
//! use maltsev_lab::{has_k_qwnu, io::parse_algebra};
//!
//! let alg = parse_algebra("algebra m\nsize 2\nop meet 2\n0 0 0 1\n").unwrap();
//! let report = has_k_qwnu(&alg, 3).unwrap();
//! assert!(report.is_yes());
//! println!("{}", report.witnesses[0].term);
//! ```

pub mod algebra;
pub mod cli;
pub mod decision;
pub mod digraph;
mod error;
pub mod image;
pub mod io;
mod limits;
pub mod oracle;
pub mod subpower;

pub use algebra::{
    evaluate_term, term_table, Elem, FiniteAlgebra, Operation, Term, TermEvaluator, UnaryMap,
};
pub use decision::{
    check_quasi_siggers_identity, check_qwnu_identities, has_k_qwnu, has_k_wnu_idemp,
    has_n_local_k_qwnu, has_quasi_taylor, Answer, Decider, DecisionReport, Problem,
};
pub use error::{Error, Result};
pub use image::{minimal_unary_idempotent, restrict_to_image, IdempotentImage};
pub use limits::Limits;
pub use subpower::{
    extract_witness, generate_subpower, verify_witness, TupleRelation, WitnessTerm,
};
