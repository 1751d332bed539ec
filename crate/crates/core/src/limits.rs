/// Resource caps shared by the closure engines.
///
/// A computation that would cross one of these caps stops with
/// [`Error::Resource`](crate::Error::Resource) instead of returning a
/// partial (and possibly wrong) answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Maximum number of tuples held by one generated subpower.
    pub max_tuples: usize,
    /// Maximum size of the unary term-operation monoid.
    pub max_unary_maps: usize,
    /// Maximum node count of a single extracted witness term.
    pub max_term_nodes: usize,
    /// Maximum number of (r, s) pairs a decision procedure will enumerate.
    pub max_pairs: usize,
}

impl Limits {
    pub const DEFAULT_MAX_TUPLES: usize = 10_000_000;
    pub const DEFAULT_MAX_UNARY_MAPS: usize = 1_000_000;
    pub const DEFAULT_MAX_TERM_NODES: usize = 1_000_000;
    pub const DEFAULT_MAX_PAIRS: usize = 10_000_000;

    /// Same defaults, but with the tuple cap replaced.
    pub fn with_max_tuples(self, max_tuples: usize) -> Self {
        Limits { max_tuples, ..self }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_tuples: Self::DEFAULT_MAX_TUPLES,
            max_unary_maps: Self::DEFAULT_MAX_UNARY_MAPS,
            max_term_nodes: Self::DEFAULT_MAX_TERM_NODES,
            max_pairs: Self::DEFAULT_MAX_PAIRS,
        }
    }
}
