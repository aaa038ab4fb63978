//! Channel-coding toolkit for DNA data storage.
//!
//! The library is organized around the three storage channels that make DNA
//! storage different from classic media:
//!
//! - [`vt`] and [`multidel`]: deletion-correcting codes for single sequences
//!   (Varshamov-Tenengolts codes and their weighted-modulo-sum generalization
//!   to `t` deletions over gap-constrained sequences).
//! - [`sliced`]: coding over an unordered set of `M` short sequences of equal
//!   length `L`, with sequence loss and substitution errors.
//! - [`dup`]: string-duplication systems for in-vivo storage, including
//!   de-duplication roots, the Polya stochastic model, and the
//!   irreducible-sequence duplication-correcting code.
//!
//! [`seqcore`] holds the shared bedrock: alphabets, sequences, error balls and
//! a generic seeded error channel. Everything is pure and deterministic given
//! an explicit seed; all exhaustive enumerations are desk-scale and guarded by
//! explicit bounds.

pub mod checks;
pub mod dup;
pub mod error;
pub mod multidel;
pub mod seqcore;
pub mod sliced;
pub mod vt;

pub use error::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
