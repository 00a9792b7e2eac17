//! Gene expression programming (GEP) for symbolic regression.
//!
//! Candidate models are multi-gene chromosomes in Karva notation. Each gene
//! decodes breadth-first into an expression tree and the trees are joined by
//! a linking function. Models are scored on two minimized objectives, the
//! root relative squared error (RRSE) on the training data and the number of
//! expressed nodes, and evolved with one of three loops:
//!
//! - plain single-objective GEP (RRSE only, one elite),
//! - NSGA-II (fast non-dominated sorting with crowding distance),
//! - SPEA2 (strength, raw fitness, k-NN density, truncated archive).
//!
//! The [`cli`] module carries the dotted `key = value` parameter-file reader
//! and the file-producing commands used by the `kexpr` binary.

pub mod cli;
pub mod engine;
pub mod error;
pub mod evalkit;
pub mod genome;
pub mod moea;
pub mod operators;

pub use error::{Error, ErrorKind, Result};
