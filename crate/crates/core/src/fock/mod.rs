//! Exact operator engines: a symbolic continuous Fock space and a discrete one.

mod continuous;
mod discrete;
mod words;

pub(crate) use words::permutations;

pub use continuous::{Cell, CellFunction, FockEngine, FockVector};
pub use discrete::{
    clt_moment, discrete_weight, discrete_word_moment, order_patterns, CltExpansion, DiscreteState,
    MAX_WORD,
};
pub use words::{
    c_pi, pair_substitution, pairing_word, partition_of_word, poisson_moment_operator,
    position_moment, position_moment_for, scan_operator_words, scan_pairings,
    word_combinatorial_moment, word_vacuum_moment, Op, OpWord, VanishingScan,
};
