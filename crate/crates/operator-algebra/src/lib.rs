//! Cuntz–Krieger operators acting on cylinder functions of an edge subshift, truncated to
//! a finite window of levels, together with the embedding of graph cohomology into the
//! graded pieces `Gr_{Nℓ}`.
//!
//! `√q` never appears: each relation is stated for `s_w` with the scalar `κ(w)⁻¹`
//! (`= q` on regular graphs) in front of every `s s†` product.

#![forbid(unsafe_code)]

mod af;
mod ck;
mod embed;

pub use af::{af_core_element, af_trace, AfCoreElement};
pub use ck::{build_operators, build_operators_with, toeplitz_defect, CkReport, OperatorSet, RelationCheck, Witness};
pub use embed::{embed_cohomology, embed_dual_graph, embed_generators, CohomologyEmbedding, Generator};

use graph_core::EdgeId;
use shift_dynamics::ShiftError;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OperatorError {
    #[error("truncation {got} is too small; need at least {min}")]
    Truncation { min: usize, got: usize },
    #[error("transition matrix has shape {got}, alphabet has {want} letters")]
    Shape { got: usize, want: usize },
    #[error("generator loops must share one length, got {0:?}")]
    UnequalLengths(Vec<usize>),
    #[error("path generator {index} has {have} edges, level {level} needs {}", level + 1)]
    PathTooShort { index: usize, level: usize, have: usize },
    #[error("no generator loops given")]
    NoLoops,
    #[error("word {0:?} is not admissible")]
    NotAdmissible(Vec<EdgeId>),
    #[error("the graded image of loop {loop_index} at N={n} vanishes at this truncation")]
    ZeroImage { loop_index: usize, n: usize },
    #[error(transparent)]
    Shift(#[from] ShiftError),
}
