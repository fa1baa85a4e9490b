//! Oracle-relative synthesis of self-embeddings and what can be read off them.

mod cac;
mod synth;
mod walk;

pub use cac::{chain_or_antichain, stable_leaves, CacCertificate};
pub use synth::{
    child_order_code, synthesize_type1, synthesize_type2, synthesize_type3, BinaryDilation, Type3Embedding,
};
pub use walk::{
    branching_walk, decode_jump, find_expanding_node, jump_decode, DominatingWitness, EmbeddingSpace, Finiteness,
    JumpDecoding, StringSpace,
    WalkSpace,
};

use thiserror::Error;

use crate::codings::CodingError;
use crate::embedding::EmbeddingError;
use crate::oracles::OracleError;
use crate::tree::TreeError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AnalysisError {
    #[error("nothing found inside the horizon: {0}")]
    HorizonTooSmall(String),
    #[error("oracle gave no answer: {0}")]
    OracleFailure(String),
    #[error("no node grows under the map within the horizon")]
    NoGrowingNode,
    #[error("iteration leaves the known part of the tree after {reached} steps")]
    EscapesHorizon { reached: usize },
    #[error("no branching node between consecutive iterates up to j = {0}")]
    NoBranchingFound(usize),
    #[error("neither certificate reaches size {target} (chain {chain}, antichain {antichain})")]
    Undetermined { target: usize, chain: usize, antichain: usize },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Coding(#[from] CodingError),
    #[error(transparent)]
    Embedding(#[from] EmbeddingError),
    #[error(transparent)]
    Tree(#[from] TreeError),
}
