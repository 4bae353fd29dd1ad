//! Reductions by involutions: path normalization, the `d = 4` tree-type
//! pipeline, the twin-star search and symmetry normalization.

mod d4;
mod normalize;
mod path;
mod trace;
mod twinstar;

pub use d4::{
    allowed_transition, least_isomorphism, reduce_d4, reduce_i8_to_targets, reduce_t16, reduce_t20, reduce_to_t19,
    type_sequence,
};
pub use normalize::{color_swap_word, symmetry_to_involutions, transposition_word, vertex_word};
pub use path::{reduce_to_path, reduce_to_path_detailed, PathReduction};
pub use trace::{Action, ReductionTrace, Step};
pub use twinstar::{
    sample_instance, search_twin_star, t19_representative, verify_twinstar_exhaustive, verify_twinstar_t19,
    InstanceRecord, Outcome, TwinStarReport, DEFAULT_BUDGET,
};
