//! An infinite chain or an infinite antichain, certified on a frozen tree.

use super::AnalysisError;
use crate::stagewise::StagewiseTree;
use crate::tree::{FiniteTree, NodeId};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CacCertificate {
    Chain(Vec<NodeId>),
    Antichain(Vec<NodeId>),
}

impl CacCertificate {
    pub fn nodes(&self) -> &[NodeId] {
        match self {
            CacCertificate::Chain(v) | CacCertificate::Antichain(v) => v,
        }
    }

    /// Pairwise comparable for chains, pairwise incomparable for antichains.
    pub fn verify(&self, t: &FiniteTree) -> bool {
        let v = self.nodes();
        let want = matches!(self, CacCertificate::Chain(_));
        v.iter().enumerate().all(|(i, &a)| {
            v[i + 1..].iter().all(|&b| a != b && (t.comparable(a, b) == Ok(want)))
        })
    }
}

/// Leaves of `T_horizon` that were already leaves at `horizon - margin`.
pub fn stable_leaves(p: &StagewiseTree, horizon: u64, margin: u64) -> Vec<NodeId> {
    let now = p.freeze(horizon);
    let then = p.freeze(horizon.saturating_sub(margin));
    now.leaves().into_iter().filter(|&x| then.contains(x) && then.is_leaf(x).unwrap_or(false)).collect()
}

/// Stable leaves if there are enough; otherwise a least-id chain through a
/// node whose subtree has no stable leaf.
pub fn chain_or_antichain(p: &StagewiseTree, horizon: u64, target: usize, margin: u64) -> Result<CacCertificate, AnalysisError> {
    let t = p.freeze(horizon);
    let leaves = stable_leaves(p, horizon, margin);
    if leaves.len() >= target {
        return Ok(CacCertificate::Antichain(leaves[..target].to_vec()));
    }
    let mut best = Vec::new();
    for x in t.sorted_nodes() {
        if t.descendants(x)?.iter().any(|y| leaves.contains(y)) {
            continue;
        }
        let mut chain = vec![x];
        while chain.len() < target {
            let last = *chain.last().expect("nonempty");
            match t.descendants(last)?.into_iter().filter(|&y| y != last).min() {
                Some(y) => chain.push(y),
                None => break,
            }
        }
        if chain.len() >= target {
            return Ok(CacCertificate::Chain(chain));
        }
        if chain.len() > best.len() {
            best = chain;
        }
    }
    Err(AnalysisError::Undetermined { target, chain: best.len(), antichain: leaves.len() })
}
