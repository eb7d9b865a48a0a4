//! Matching, maximum-likelihood and belief-propagation decoders.

mod blossom;
mod bp;
mod concat;
mod matching;
mod ml;

pub use blossom::{max_weight_matching, min_weight_perfect_matching};
pub use bp::{bp_decode, bp_posterior, ConcatenatedCode, BP_MAX_BLOCK};
pub use concat::{
    concat_analytics, is_fixed_point, level_error_exact, level_error_exact_f64, rational_to_f64, ConcatReport,
    MAX_LEVELS,
};
pub use matching::{
    decode_2d, decode_3d, spacetime_weights, DecodeResult, Defect, GraphNode, Match, MatchingDecoder, MatchingGraph,
};
pub use ml::{ml_decode, MlResult, ML_MAX_RANK};
