//! Equivalent polar-like decoding of arbitrary binary linear codes.
//!
//! A code `C` with generator `G` is mapped onto a pruned polar graph through
//! a permutation `P`, a pruning matrix `R` and a shortening map `S`. The
//! resulting transformation exposes frozen-bit equations that SC / SCL
//! decoders consume directly, and a reliability cost that a search can
//! minimise.

pub mod codes;
pub mod decoder;
pub mod error;
pub mod gf2;
pub mod io;
pub mod polar;
pub mod reliability;
pub mod search;
pub mod sim;
pub mod transform;

pub use decoder::{mld, prepare_llr, sc_decode, scl_decode, DecodeResult, ScDecoder, SclDecoder};
pub use error::{Error, Result};
pub use gf2::{BitMatrix, Permutation};
pub use polar::PruningMatrix;
pub use reliability::{channel_z, ChannelParam, CostEvaluator};
pub use transform::{build_transformation, ShortenSpec, Transformation};
