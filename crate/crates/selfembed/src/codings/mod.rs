//! Trees that code a c.e. set or a jump into their self-embeddings.

pub mod singlepath;
pub mod staircase;
pub mod type3;

use thiserror::Error;

use crate::embedding::EmbeddingError;
use crate::oracles::OracleError;
use crate::tree::{NodeId, TreeError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CodingError {
    #[error("needs stage {needed} but horizon is {horizon}")]
    HorizonTooSmall { needed: u64, horizon: u64 },
    #[error("embedding escapes the frozen tree after {reached} steps")]
    EscapesHorizon { reached: usize },
    #[error("sigma has length {got}, expected {expected}")]
    BadSigmaLength { got: usize, expected: usize },
    #[error("string {0} enumerated twice")]
    DuplicateString(String),
    #[error("component at {0} has height above 3")]
    ComponentTooTall(NodeId),
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
}
