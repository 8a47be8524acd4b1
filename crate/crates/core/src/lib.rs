#![allow(clippy::needless_range_loop, clippy::neg_cmp_op_on_partial_ord, clippy::match_like_matches_macro)]

pub mod analysis;
pub mod coop;
pub mod env;
pub mod error;
pub mod fed;
pub mod graph;
pub mod harness;
pub mod matching;
pub mod oco;
pub mod par;
pub mod policy;
pub mod rng;
pub mod trace;
