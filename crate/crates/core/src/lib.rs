//! Encoding and decoding of concatenated, generalized concatenated and
//! matrix-product codes over finite fields.
//!
//! The decoders combine bounded-distance error-and-erasure decoding of
//! component codes with generalized minimum distance (GMD) decoding of the
//! outer codes. Small codes can be checked against brute-force oracles.

pub mod code;
pub mod concat;
pub mod config;
pub mod error;
pub mod galois;
pub mod gcc;
pub mod gmd;
pub mod matrix;
pub mod mpc;
pub mod oracle;
pub mod poly;
pub mod report;
mod rs;
pub mod selftest;
pub mod sim;
pub mod tower;

pub use code::{DecodeOutcome, ErasureSet, LinearCode};
pub use concat::{ConcatCode, DecodeOptions, ErasurePattern};
pub use error::{CodecError, Result};
pub use galois::{make_field, Field, FieldElement, Symbol};
pub use gcc::GccSpec;
pub use gmd::GmdMode;
pub use matrix::Matrix;
pub use mpc::MpcSpec;
pub use report::DecodeReport;
pub use tower::TowerView;
