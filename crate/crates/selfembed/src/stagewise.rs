//! Stagewise presentations: a monotone sequence of finite trees.

use std::collections::{BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::tree::{FiniteTree, NodeId, TreeError};

/// One growth event.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeEvent {
    /// `node` becomes a new successor of `parent`.
    Attach { node: NodeId, parent: NodeId },
    /// `node` is inserted between `parent` and its successor `child`.
    Splice { node: NodeId, parent: NodeId, child: NodeId },
}

impl TreeEvent {
    pub fn node(&self) -> NodeId {
        match *self {
            TreeEvent::Attach { node, .. } | TreeEvent::Splice { node, .. } => node,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum TreeType {
    One,
    Two,
    Three,
}

impl TreeType {
    pub fn number(self) -> u8 {
        match self {
            TreeType::One => 1,
            TreeType::Two => 2,
            TreeType::Three => 3,
        }
    }
}

/// Facts about the limit tree that no finite stage can decide. Supplied by
/// the generator that built the presentation.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct GroundTruth {
    pub infinite_nodes: BTreeSet<NodeId>,
    pub maximal_infinite: Option<NodeId>,
    pub isolated_path: Option<Vec<NodeId>>,
    pub omega_nodes: BTreeSet<NodeId>,
    /// Last stage at which the generator could still change anything it
    /// declared; answers about later stages are stable.
    pub settled_by: u64,
}

impl GroundTruth {
    pub fn tree_type(&self) -> TreeType {
        if self.maximal_infinite.is_some() {
            TreeType::One
        } else if self.isolated_path.is_some() {
            TreeType::Two
        } else {
            TreeType::Three
        }
    }
}

/// A computable presentation truncated at `horizon` stages.
#[derive(Clone, Debug)]
pub struct StagewiseTree {
    root: NodeId,
    events: Vec<(u64, TreeEvent)>,
    parents: HashMap<NodeId, NodeId>,
    horizon: u64,
    truth: Option<GroundTruth>,
}

impl StagewiseTree {
    pub fn new(root: NodeId) -> Self {
        StagewiseTree { root, events: Vec::new(), parents: HashMap::new(), horizon: 0, truth: None }
    }

    pub fn root(&self) -> NodeId {
        self.root
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn set_horizon(&mut self, h: u64) {
        self.horizon = self.horizon.max(h);
    }

    pub fn truth(&self) -> Option<&GroundTruth> {
        self.truth.as_ref()
    }

    pub fn set_truth(&mut self, t: GroundTruth) {
        self.truth = Some(t);
    }

    pub fn events(&self) -> &[(u64, TreeEvent)] {
        &self.events
    }

    pub fn contains(&self, n: NodeId) -> bool {
        n == self.root || self.parents.contains_key(&n)
    }

    pub fn len(&self) -> usize {
        self.parents.len() + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Current parent of `n` in the live presentation.
    pub fn live_parent(&self, n: NodeId) -> Option<NodeId> {
        self.parents.get(&n).copied()
    }

    fn check_stage(&self, stage: u64) -> Result<(), TreeError> {
        match self.events.last() {
            Some(&(last, _)) if stage < last => Err(TreeError::StageOrder { got: stage, last }),
            _ => Ok(()),
        }
    }

    pub fn attach(&mut self, stage: u64, node: NodeId, parent: NodeId) -> Result<(), TreeError> {
        self.check_stage(stage)?;
        if self.contains(node) {
            return Err(TreeError::DuplicateNode(node));
        }
        if !self.contains(parent) {
            return Err(TreeError::OrphanParent { node, parent });
        }
        self.parents.insert(node, parent);
        self.events.push((stage, TreeEvent::Attach { node, parent }));
        self.horizon = self.horizon.max(stage);
        Ok(())
    }

    pub fn splice(&mut self, stage: u64, node: NodeId, parent: NodeId, child: NodeId) -> Result<(), TreeError> {
        self.check_stage(stage)?;
        if self.contains(node) {
            return Err(TreeError::DuplicateNode(node));
        }
        if self.parents.get(&child) != Some(&parent) {
            return Err(TreeError::BadSplice { node, parent, child });
        }
        self.parents.insert(node, parent);
        self.parents.insert(child, node);
        self.events.push((stage, TreeEvent::Splice { node, parent, child }));
        self.horizon = self.horizon.max(stage);
        Ok(())
    }

    /// Replays a single event (used when reading logs).
    pub fn apply(&mut self, stage: u64, ev: TreeEvent) -> Result<(), TreeError> {
        match ev {
            TreeEvent::Attach { node, parent } => self.attach(stage, node, parent),
            TreeEvent::Splice { node, parent, child } => self.splice(stage, node, parent, child),
        }
    }

    /// `T_s`: all events of stages `≤ s`.
    pub fn freeze(&self, s: u64) -> FiniteTree {
        let mut parents: HashMap<NodeId, NodeId> = HashMap::new();
        for &(st, ev) in &self.events {
            if st > s {
                break;
            }
            match ev {
                TreeEvent::Attach { node, parent } => {
                    parents.insert(node, parent);
                }
                TreeEvent::Splice { node, parent, child } => {
                    parents.insert(node, parent);
                    parents.insert(child, node);
                }
            }
        }
        FiniteTree::from_parent_map(self.root, &parents).expect("presentation is always a tree")
    }

    /// The tree at the horizon.
    pub fn final_tree(&self) -> FiniteTree {
        FiniteTree::from_parent_map(self.root, &self.parents).expect("presentation is always a tree")
    }

    /// Stage at which each node appeared (the root at stage 0).
    pub fn stage_of(&self) -> HashMap<NodeId, u64> {
        let mut m: HashMap<NodeId, u64> = self.events.iter().map(|&(s, e)| (e.node(), s)).collect();
        m.insert(self.root, 0);
        m
    }

    /// Stages at which at least one event happened, ascending.
    pub fn active_stages(&self) -> Vec<u64> {
        let mut v: Vec<u64> = self.events.iter().map(|e| e.0).collect();
        v.dedup();
        v
    }
}

pub fn classify_tree_type(p: &StagewiseTree) -> Result<TreeType, TreeError> {
    p.truth().map(|t| t.tree_type()).ok_or(TreeError::MissingMetadata)
}
