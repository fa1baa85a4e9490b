//! Priority constructions run against replayable opponents.

pub mod cac;
mod doubles;
mod forest;
mod isomax;

pub use doubles::{shape_embeds, AdversaryPair, MapDouble, TreeDouble};
pub use forest::{materialize, CompactForest, Component, ForestEvent};
pub use isomax::{
    isomaxinf_run, isomaxinf_verify, key_name, lower_priority, ActRecord, DiagRecord, Fault, IsoRun, Outcome,
    StageRecord, Step, StrategyKey, StrategyState, WriteAction, WriteRecord,
};
