//! A finitely branching tree with exactly one path, the path coding `K`;
//! its hardened variant; and the spine gluing that turns a tree of small
//! components into a single-path tree and back.

use std::collections::{BTreeSet, HashMap};

use super::CodingError;
use crate::embedding::Embedding;
use crate::oracles::{LimitOracle, MockCeSet};
use crate::stagewise::{GroundTruth, StagewiseTree};
use crate::tree::{FiniteTree, NodeId};

/// The single-path tree on `0..=horizon`: node `s+1` hangs off `n_s`, the
/// highest ancestor `m` of `s` with `K_{s+1}[ht(m)] = K_s[ht(m)]`.
pub fn singlepath_build(k: &MockCeSet, horizon: u64) -> Result<StagewiseTree, CodingError> {
    let parents = singlepath_parents(k, horizon)?;
    let mut p = StagewiseTree::new(NodeId(0));
    for (t, &par) in parents.iter().enumerate().skip(1) {
        p.attach(t as u64, NodeId(t as u64), NodeId(par))?;
    }
    p.set_horizon(horizon);
    let path = p.final_tree().chain_to(NodeId(horizon))?;
    p.set_truth(GroundTruth {
        infinite_nodes: path.iter().copied().collect(),
        maximal_infinite: None,
        isolated_path: Some(path),
        omega_nodes: BTreeSet::new(),
        settled_by: k.last_stage(),
    });
    Ok(p)
}

/// `parents[t]` for `1 ≤ t ≤ horizon` (`parents[0]` unused).
fn singlepath_parents(k: &MockCeSet, horizon: u64) -> Result<Vec<u64>, CodingError> {
    if k.last_stage() > horizon {
        return Err(CodingError::HorizonTooSmall { needed: k.last_stage(), horizon });
    }
    for w in k.events().windows(2) {
        if w[0].1 == w[1].1 {
            return Err(CodingError::Precondition(format!("two elements enter at stage {}", w[1].1)));
        }
    }
    let mut parent = vec![0u64; horizon as usize + 1];
    let mut height = vec![0u64; horizon as usize + 1];
    for t in 1..=horizon {
        let s = t - 1;
        let mut n = s;
        if let Some(x) = k.enumerated_at(t) {
            while height[n as usize] > x {
                n = parent[n as usize];
            }
        }
        parent[t as usize] = n;
        height[t as usize] = height[n as usize] + 1;
    }
    Ok(parent)
}

/// The path read off through the successor relation: each step takes the
/// successor the oracle declares infinite.
pub fn path_extract(oracle: &dyn LimitOracle, root: NodeId) -> Result<Vec<NodeId>, CodingError> {
    let mut path = vec![root];
    loop {
        let x = *path.last().expect("nonempty");
        let mut next = None;
        for y in oracle.successors_of(x)? {
            if oracle.is_infinite(y)? {
                next = Some(y);
                break;
            }
        }
        match next {
            Some(y) => path.push(y),
            None => return Ok(path),
        }
    }
}

/// `max{m : ht(m) ≤ n}` in a frozen tree.
pub fn max_of_height_at_most(t: &FiniteTree, n: u32) -> Option<NodeId> {
    t.nodes().iter().copied().filter(|&m| t.height(m).is_ok_and(|h| h <= n)).max()
}

/// `K[n] = K_{x_n}[n]`; returns membership bits for `0..n_max`.
pub fn singlepath_decode(k: &MockCeSet, path: &[NodeId], n_max: usize) -> Result<Vec<bool>, CodingError> {
    let x = path.get(n_max).ok_or(CodingError::HorizonTooSmall {
        needed: n_max as u64,
        horizon: path.len().saturating_sub(1) as u64,
    })?;
    Ok((0..n_max).map(|i| k.contains_at(i as u64, x.0)).collect())
}

/// Decoding from a moved path node: `φ^n(m) ≥ x_n`, so `K[n] = K_{φ^n(m)}[n]`.
pub fn decode_from_embedding(phi: &Embedding, m: NodeId, n_max: usize, k: &MockCeSet) -> Result<Vec<bool>, CodingError> {
    let x = phi.apply_n(m, n_max).map_err(|_| CodingError::EscapesHorizon { reached: n_max })?;
    Ok((0..n_max).map(|i| k.contains_at(i as u64, x.0)).collect())
}

/// Violations of: every node has at most two successors, `m ⪰ n ⟹ m ≥ n`,
/// and `n` lies above the parent of `n+1`.
pub fn check_tech_conditions(t: &FiniteTree) -> Vec<String> {
    let mut bad = Vec::new();
    for &n in t.nodes() {
        if t.branching(n).expect("own node") > 2 {
            bad.push(format!("node {n} has more than two successors"));
        }
        if let Some(p) = t.parent(n).expect("own node") {
            if p > n {
                bad.push(format!("node {n} sits above the larger node {p}"));
            }
        }
        let next = NodeId(n.0 + 1);
        if t.contains(next) {
            let p = t.parent(next).expect("own node").expect("not the root");
            if !t.is_leq(p, n).expect("own nodes") {
                bad.push(format!("node {n} is not above the parent of {next}"));
            }
        }
    }
    bad
}

/// The hardened tree on even and odd ids: the single-path tree doubled, with
/// the leaves just off the guessed path stretched to pairwise distinct heights.
pub fn harden_weak(k: &MockCeSet, horizon: u64) -> Result<StagewiseTree, CodingError> {
    let parents = singlepath_parents(k, horizon)?;
    let mut p = StagewiseTree::new(NodeId(0));
    let mut height: HashMap<u64, u64> = HashMap::from([(0, 0)]);
    let mut children: HashMap<u64, Vec<u64>> = HashMap::new();
    let mut next_odd = 1u64;
    for t in 1..=horizon {
        let (par, node) = (2 * parents[t as usize], 2 * t);
        p.attach(t, NodeId(node), NodeId(par))?;
        children.entry(par).or_default().push(node);
        height.insert(node, height[&par] + 1);
        let mut leaves = Vec::new();
        let mut stack = vec![par];
        while let Some(x) = stack.pop() {
            match children.get(&x) {
                Some(c) if !c.is_empty() => stack.extend(c.iter().copied()),
                _ if x != node && x != par => leaves.push(x),
                _ => {}
            }
        }
        leaves.sort_by_key(|&l| (height[&l], l));
        let mut used: BTreeSet<u64> = BTreeSet::from([height[&node]]);
        for l in leaves {
            let mut target = height[&l] + 1;
            while used.contains(&target) {
                target += 1;
            }
            used.insert(target);
            let mut top = l;
            while height[&top] < target {
                let o = next_odd;
                next_odd += 2;
                p.attach(t, NodeId(o), NodeId(top))?;
                children.entry(top).or_default().push(o);
                height.insert(o, height[&top] + 1);
                top = o;
            }
        }
    }
    p.set_horizon(horizon);
    let path = p.final_tree().chain_to(NodeId(2 * horizon))?;
    p.set_truth(GroundTruth {
        infinite_nodes: path.iter().copied().collect(),
        maximal_infinite: None,
        isolated_path: Some(path),
        omega_nodes: BTreeSet::new(),
        settled_by: k.last_stage(),
    });
    Ok(p)
}

/// Nodes off `path` whose parent is on it.
pub fn just_off(t: &FiniteTree, path: &[NodeId]) -> Vec<NodeId> {
    let on: BTreeSet<NodeId> = path.iter().copied().collect();
    let mut out: Vec<NodeId> = path
        .iter()
        .flat_map(|&x| t.successors(x).expect("path node in tree"))
        .filter(|y| !on.contains(y))
        .collect();
    out.sort();
    out
}

/// A component tree hung along a fresh spine `a_0 ≺ a_1 ≺ …`, with the
/// root of the `i`th component a successor of `a_i`.
#[derive(Clone, Debug)]
pub struct GluedSpine {
    pub tree: FiniteTree,
    pub spine: Vec<NodeId>,
    pub original_root: NodeId,
    pub component_roots: Vec<NodeId>,
}

impl GluedSpine {
    /// Single-path presentation with everything present at stage 0.
    pub fn presentation(&self) -> StagewiseTree {
        let mut p = StagewiseTree::new(self.tree.root());
        for (n, par) in self.tree.events() {
            if let Some(par) = par {
                p.attach(0, n, par).expect("tree events are well ordered");
            }
        }
        p.set_truth(GroundTruth {
            infinite_nodes: self.spine.iter().copied().collect(),
            maximal_infinite: None,
            isolated_path: Some(self.spine.clone()),
            omega_nodes: BTreeSet::new(),
            settled_by: 0,
        });
        p
    }
}

/// Components are taken in increasing order of their root ids.
pub fn glue_spine(t: &FiniteTree) -> Result<GluedSpine, CodingError> {
    let roots = t.successors(t.root())?;
    for &r in &roots {
        if t.sub_height_idx(t.idx(r)?) > 2 {
            return Err(CodingError::ComponentTooTall(r));
        }
    }
    let fresh = t.nodes().iter().map(|n| n.0).max().unwrap_or(0) + 1;
    let count = roots.len().max(1);
    let spine: Vec<NodeId> = (0..count as u64).map(|i| NodeId(fresh + i)).collect();
    let mut events: Vec<(NodeId, Option<NodeId>)> = vec![(spine[0], None)];
    for w in spine.windows(2) {
        events.push((w[1], Some(w[0])));
    }
    let root_pos: HashMap<NodeId, usize> = roots.iter().enumerate().map(|(i, &r)| (r, i)).collect();
    for (n, par) in t.events() {
        match par {
            None => {}
            Some(p) if p == t.root() => events.push((n, Some(spine[root_pos[&n]]))),
            Some(p) => events.push((n, Some(p))),
        }
    }
    Ok(GluedSpine { tree: FiniteTree::from_events(events)?, spine, original_root: t.root(), component_roots: roots })
}

/// `x` lies on the path iff some node sits at least four levels above it.
pub fn detect_path(u: &FiniteTree) -> Vec<NodeId> {
    let mut b: Vec<NodeId> = u
        .nodes()
        .iter()
        .copied()
        .filter(|&x| u.sub_height_idx(u.idx(x).expect("own node")) >= 4)
        .collect();
    b.sort_by_key(|&x| u.height(x).expect("own node"));
    b
}

/// Removes the path `b` and puts a fresh root `rho` below everything left.
pub fn strip_path(u: &FiniteTree, b: &[NodeId], rho: NodeId) -> Result<FiniteTree, CodingError> {
    if u.contains(rho) {
        return Err(CodingError::Precondition(format!("root {rho} is not fresh")));
    }
    let on: BTreeSet<NodeId> = b.iter().copied().collect();
    let mut events = vec![(rho, None)];
    for (n, par) in u.events() {
        if on.contains(&n) {
            continue;
        }
        match par {
            Some(p) if !on.contains(&p) => events.push((n, Some(p))),
            _ => events.push((n, Some(rho))),
        }
    }
    Ok(FiniteTree::from_events(events)?)
}

/// `δ'` on the original tree: fixes the old root, agrees with `δ` elsewhere.
pub fn induce_component_embedding(delta: &Embedding, glued: &GluedSpine, original: std::sync::Arc<FiniteTree>) -> Result<Embedding, CodingError> {
    let spine: BTreeSet<NodeId> = glued.spine.iter().copied().collect();
    let mut map = std::collections::BTreeMap::from([(glued.original_root, glued.original_root)]);
    for (&x, &y) in &delta.map {
        if spine.contains(&x) {
            continue;
        }
        if spine.contains(&y) {
            return Err(CodingError::Precondition(format!("component node {x} mapped onto the spine")));
        }
        map.insert(x, y);
    }
    let source = std::sync::Arc::new(original.restrict(|n| map.contains_key(&n))?);
    Ok(Embedding::new(source, original, map))
}
