//! The edge subshift of a finite graph, its word counts θ_n, boundary measures on tree
//! patches, and the filtration of cylinder functions `P_n`, `F_n = P_n/δP_{n−1}`, `Gr_n`
//! realised exactly over the rationals.

#![forbid(unsafe_code)]

mod filtration;
pub mod linalg;
mod measure;
mod sft;

pub use filtration::{filtration_data, FiltrationRow, FiltrationSpace, DEFAULT_WORD_CAP};
pub use linalg::{SparseMatrix, Q};
pub use measure::{cylinder_measure, shadow_measure, ShadowMeasure};
pub use sft::{build_sft, build_sft_with, ShiftSpace};

use graph_core::{EdgeId, GraphError, VertexId};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ShiftError {
    #[error("graph has sinks {0:?}; append tails first")]
    Sinks(Vec<VertexId>),
    #[error("letter {0} has no admissible continuation; append tails with terminal loops")]
    DeadEnd(EdgeId),
    #[error("residue cardinality must be at least 2, got {0}")]
    BadQ(u64),
    #[error("truncation must be at least {min}, got {got}")]
    Truncation { min: usize, got: usize },
    #[error("level {level} is beyond the truncation {truncation}")]
    Level { level: usize, truncation: usize },
    #[error("{words} words exceed the cap {cap}")]
    SizeCap { words: usize, cap: usize },
    #[error("word {0:?} is not admissible")]
    NotAdmissible(Vec<EdgeId>),
    #[error("edge {0} touches the patch frontier; its mass is truncated")]
    Truncated(EdgeId),
    #[error("Gram form degenerates on cylinders {0:?}")]
    Degenerate(Vec<Vec<EdgeId>>),
    #[error(transparent)]
    Graph(#[from] GraphError),
}
