//! Oracles answering questions about the limit tree from declared ground truth.

use std::collections::BTreeSet;

use super::OracleError;
use crate::embedding::SuccessorOracle;
use crate::stagewise::{GroundTruth, StagewiseTree};
use crate::tree::{FiniteTree, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Branching {
    Finite(usize),
    Omega,
}

/// Successor relation plus branching function, nothing else.
pub trait StructuralOracle {
    fn successors_of(&self, n: NodeId) -> Result<Vec<NodeId>, OracleError>;
    fn branching_of(&self, n: NodeId) -> Result<Branching, OracleError>;

    /// `T_s(n)` is complete iff every node in it already has its full set of successors.
    fn complete_at(&self, t_s: &FiniteTree, n: NodeId) -> Result<bool, OracleError> {
        let below = t_s.descendants(n).map_err(|_| OracleError::UnknownNode(n))?;
        for x in below {
            match self.branching_of(x)? {
                Branching::Omega => return Ok(false),
                Branching::Finite(k) => {
                    let now = t_s.successors(x).map_err(|_| OracleError::UnknownNode(x))?;
                    if now.len() != k || now != self.successors_of(x)? {
                        return Ok(false);
                    }
                }
            }
        }
        Ok(true)
    }
}

/// The questions a jump oracle would answer about the presented tree.
pub trait LimitOracle: StructuralOracle {
    fn is_infinite(&self, n: NodeId) -> Result<bool, OracleError>;
    fn is_omega(&self, n: NodeId) -> Result<bool, OracleError> {
        Ok(self.branching_of(n)? == Branching::Omega)
    }
    /// Least stage `≤ horizon` satisfying `pred`.
    fn exists_stage(&self, pred: &mut dyn FnMut(u64) -> bool) -> Option<u64>;
}

/// Answers from a presentation's declared [`GroundTruth`] and its horizon tree.
pub struct HonestOracle<'a> {
    presentation: &'a StagewiseTree,
    truth: &'a GroundTruth,
    tree: FiniteTree,
    infinite: BTreeSet<NodeId>,
}

impl<'a> HonestOracle<'a> {
    pub fn new(p: &'a StagewiseTree) -> Result<Self, OracleError> {
        let truth = p.truth().ok_or(OracleError::MissingMetadata)?;
        let mut infinite = truth.infinite_nodes.clone();
        if let Some(path) = &truth.isolated_path {
            infinite.extend(path.iter().copied());
        }
        infinite.extend(truth.maximal_infinite);
        Ok(HonestOracle { presentation: p, truth, tree: p.final_tree(), infinite })
    }

    pub fn presentation(&self) -> &StagewiseTree {
        self.presentation
    }

    pub fn truth(&self) -> &GroundTruth {
        self.truth
    }

    pub fn horizon_tree(&self) -> &FiniteTree {
        &self.tree
    }
}

impl StructuralOracle for HonestOracle<'_> {
    fn successors_of(&self, n: NodeId) -> Result<Vec<NodeId>, OracleError> {
        self.tree.successors(n).map_err(|_| OracleError::UnknownNode(n))
    }

    fn branching_of(&self, n: NodeId) -> Result<Branching, OracleError> {
        if self.truth.omega_nodes.contains(&n) {
            return Ok(Branching::Omega);
        }
        self.tree.branching(n).map(Branching::Finite).map_err(|_| OracleError::UnknownNode(n))
    }
}

impl LimitOracle for HonestOracle<'_> {
    fn is_infinite(&self, n: NodeId) -> Result<bool, OracleError> {
        if !self.tree.contains(n) {
            return Err(OracleError::UnknownNode(n));
        }
        Ok(self.infinite.contains(&n))
    }

    fn exists_stage(&self, pred: &mut dyn FnMut(u64) -> bool) -> Option<u64> {
        (0..=self.presentation.horizon()).find(|&s| pred(s))
    }
}

impl SuccessorOracle for HonestOracle<'_> {
    fn is_successor(&self, n: NodeId, m: NodeId) -> Option<bool> {
        SuccessorOracle::is_successor(&self.tree, n, m)
    }
}
