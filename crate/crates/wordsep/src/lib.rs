//! Simulation and verification laboratory for word separation by small
//! quantum and affine finite automata.
//!
//! Two different words `x` and `y` are *separated* by an automaton when the
//! automaton tells them apart: exactly (accept one with probability 1, the
//! other with 0), with one-sided bounded error, or nondeterministically
//! (nonzero vs. exactly zero). This crate constructs the relevant machine
//! families, simulates them — exactly over arbitrary-precision rationals
//! where the construction permits, over complex floats otherwise — and
//! verifies the claimed separation modes at small scale.
//!
//! The main pieces:
//!
//! - [`exactnum`]: scalar backends (exact rationals, complex floats) and
//!   small dense vectors/matrices shared by every engine.
//! - [`words`]: words over finite alphabets, easy/hard pair classification
//!   and the hard-pair reduction to binary, positional encodings.
//! - [`freegroup`]: free-group words over two generators, derived-series
//!   membership via Reidemeister–Schreier rewriting.
//! - [`mcqfa`]: measure-once quantum finite automata and the rotation,
//!   swap-pair, orthogonal-generator and tensor constructions.
//! - [`afa`]: exact-rational affine finite automata — subtraction, encoding,
//!   bounded-error, 3-state-trick and tensored set machines.
//! - [`wordmap`]: numerical exploration of word maps on SU(2) — eigenphase
//!   maximization and construction of separating-machine certificates.
//! - [`baseline`]: brute-force minimal separating DFA oracle.
//! - [`report`]: separation reports and mode verification shared by the
//!   engines and the CLI.
//! - [`cli`]: the `wordsep` command-line front end.

pub mod afa;
pub mod baseline;
pub mod cli;
pub mod error;
pub mod exactnum;
pub mod freegroup;
pub mod mcqfa;
pub mod report;
pub mod wordmap;
pub mod words;

pub use error::Error;

/// Crate-wide result type.
pub type Result<T> = std::result::Result<T, Error>;
