//! Mock c.e. sets, the liminf approximation stack and limit oracles.

mod approx;
mod ce;
mod limit;

pub use approx::{late_window_min, threshold_stage, ApproxStack};
pub use ce::{CeFamily, MockCeSet, Periodic};
pub use limit::{Branching, HonestOracle, LimitOracle, StructuralOracle};

use thiserror::Error;

use crate::tree::NodeId;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("element {0} enumerated at stage 0")]
    StageZero(u64),
    #[error("element {0} enumerated twice")]
    DuplicateElement(u64),
    #[error("two elements enumerated at stage {0}")]
    SameStage(u64),
    #[error("two sets receive an element at stage {0}")]
    Collision(u64),
    #[error("bad periodic generator for set {0}")]
    BadPeriodic(usize),
    #[error("needs stage {needed} but horizon is {horizon}")]
    HorizonTooSmall { needed: u64, horizon: u64 },
    #[error("presentation carries no ground truth")]
    MissingMetadata,
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
}
