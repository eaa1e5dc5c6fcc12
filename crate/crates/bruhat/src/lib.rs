//! Bruhat order on the classical finite reflection groups at desk scale:
//! unsigned permutations, signed permutations, and even-signed
//! permutations.
//!
//! The crate provides group elements in window (one-line) notation,
//! reduced words over the standard generators, Bruhat comparisons and the
//! posets they generate, pattern containment, and classification of
//! elements by the shape of their principal ideal.
//!
//! # Conventions
//!
//! * An element of rank `n` is written as the window `(w(1), ..., w(n))`;
//!   signed kinds extend it to negative points by `w(-i) = -w(i)`.
//! * Products compose right-to-left: `(uv)(x) = u(v(x))`. Multiplying by a
//!   generator on the right permutes window positions, on the left window
//!   values.
//! * Generator letters are ordered `0 < 1' < 1 < 2 < ...`, where `0` is
//!   the sign change of the signed kind and `1'` the double transposition
//!   of the even-signed kind.
//! * Lengths, covers, and ranks all refer to the word length over these
//!   generators; all posets here are graded by it.
//!
//! Group-wide computations are bounded by [`MAX_ENUMERATED_GROUP`] and
//! poset constructions by a configurable cap (see
//! [`BruhatContext::with_max_poset_size`]), so runaway inputs fail fast
//! with a size error instead of exhausting memory.
//!
//! With the default `parallel` feature the bulk scans (group surveys,
//! avoidance classes, ideal atlases) fan out over a thread pool; disabling
//! it keeps the same API with sequential execution.

mod bits;
pub mod classify;
pub mod element;
pub mod order;
pub mod pattern;
pub mod poset;
mod util;
pub mod word;

pub use classify::{
    boolean_pattern_list, boolean_total, classify_intervals, classify_principal_ideals,
    closed_form_count, count_boolean_by_length, d_boolean_total_real, expand_rank_gf,
    h_last_difference, is_boolean, is_power_permutation, nearly_boolean_class,
    pattern_ideal_survey, power_ideal_check, ClassifyError, CountTable, IdealClass,
    NearlyBooleanClass, PowerCertificate, Provenance, RankGf, SurveyEntry,
};
pub use element::{
    generators, group_elements, group_order, ElementError, GroupElement, Kind, Letter, Side,
    MAX_ENUMERATED_GROUP,
};
pub use order::{BruhatContext, OrderError, DEFAULT_MAX_POSET};
pub use pattern::{
    avoidance_class, contains, count_occurrences, is_order_ideal, occurrences, Occurrence,
    PatternError, PatternSpec,
};
pub use poset::{Poset, PosetError, Predicates, MAX_POSET_SIZE};
pub use word::{
    all_reduced_words, decompose, first_reduced_word, Word, WordError, DEFAULT_WORD_CAP,
};
