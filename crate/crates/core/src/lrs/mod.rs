//! Linear recurrence sequences: representation, evaluation, closure, decomposition.

pub mod format;
pub mod model;

pub use format::{parse_raw, to_json, to_text};
pub use model::{
    degenerate_decomposition, validate_and_normalize, CompanionForm, Decomposition, Lrs, Pointwise, RawLrs,
    MAX_DECIDABLE_ORDER,
};
