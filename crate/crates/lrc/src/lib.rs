//! Locally repairable erasure codes over finite fields.
//!
//! A linear [n, k] code has locality r when every coordinate can be
//! recovered from at most r others. This crate builds such codes, measures
//! them, and checks them against the trade-offs that govern locality:
//!
//! - [`field`], [`matrix`]: arithmetic over GF(p^m) (log tables up to
//!   2^16) and deterministic row reduction on top of it.
//! - [`code`]: generator-column codes with encoding, erasure decoding,
//!   minimum distance, per-coordinate locality, and the hypergraph of
//!   minimal recovery sets.
//! - [`construct`]: systematic MDS bases, pyramid codes, a distance-4
//!   family with two-step repair, and randomized constructions that place
//!   points in general position subject to prescribed dependencies.
//! - [`bounds`]: the redundancy lower bound n - k >= ceil(k/r) + d - 2, a
//!   greedy certificate tracing it on a concrete code, structure checks
//!   for codes meeting it with equality, and the locality floor forced on
//!   heavy parities.
//! - [`gpc`]: generalized pyramid codes, where decodability of an erasure
//!   pattern is exactly Hall's condition and parity locality equals parity
//!   degree.
//!
//! Scalars are `u64` field elements throughout; matrices are row-major.
//! Randomized searches take explicit seeds and retry deterministically, so
//! every construction is reproducible from (parameters, seed).

pub mod bounds;
pub mod code;
pub mod construct;
pub mod error;
pub mod field;
pub mod gpc;
pub mod matrix;

pub use code::{
    CoordinateLocality, DecodeOutcome, DistanceMethod, Hyperedge, LinearCode,
    Locality, LocalityProfile, RecoveryHypergraph, RecoverySet,
};
pub use error::{Error, Result};
pub use field::Field;
pub use matrix::Matrix;
