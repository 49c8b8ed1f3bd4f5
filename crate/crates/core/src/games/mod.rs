//! Impartial games: a deduplicating store, misère and normal outcomes,
//! octal heap games, pretending functions, and the Generalized Mex Rule.

mod mexrule;
mod octal;
mod oracle;
mod pretend;
mod store;

pub use mexrule::{
    discriminant, extend_by_kernel_subset, gen_mex_check, is_complemented, Discriminant, KernelExtension,
    KernelSubsetError, MexCounterexample,
};
pub use octal::{
    grundy_sequence, octal_heap_game, octal_heap_games, octal_moves, OctalCode, OctalError, MAX_DIGITS,
};
pub use oracle::{
    check_pretension_parity, closure_games, closure_positions, grundy_of_position, outcome_misere_naive,
    outcome_normal_naive, phi_of, transition_of_positions, ClosureError, Oracle, Outcome, PositionCaps,
    PretensionReport, PretensionViolation,
};
pub use pretend::{
    almost_tame_check, check_phi_range, faithfulness_check, faithfulness_check_code, AlmostTameVerdict,
    FaithfulnessReport, HypothesisFailure, LabelConflict, PhiJson, PhiJsonError, PretendingFunction,
    MAX_PHI_DOMAIN,
};
pub use store::{
    mex, parse_position, GameId, GameJsonEntry, GameStore, GamesJson, GamesJsonError, Position,
    PositionParseError, MAX_TEXT_COMPONENTS,
};
