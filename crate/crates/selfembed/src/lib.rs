//! Self-embeddings of computable trees at finite horizon.
//!
//! Every infinite object is a stagewise presentation cut at a horizon, with
//! the facts no finite stage can decide supplied as [`stagewise::GroundTruth`].

pub mod adversary;
pub mod analysis;
pub mod cli;
pub mod codings;
pub mod embedding;
pub mod format;
pub mod oracles;
pub mod report;
pub mod stagewise;
pub mod tree;

pub use embedding::{find_embedding, verify_embedding, Embedding};
pub use stagewise::{GroundTruth, StagewiseTree, TreeType};
pub use tree::{BinaryString, ComponentKind, FiniteTree, NodeId};
