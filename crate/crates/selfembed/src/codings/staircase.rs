//! The staircase tree: chains above an ω-branching root whose heights form
//! strictly descending runs, cut by movable markers that settle only after
//! the coded set has settled below them.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use super::CodingError;
use crate::embedding::Embedding;
use crate::oracles::MockCeSet;
use crate::report::Check;
use crate::stagewise::{GroundTruth, StagewiseTree};
use crate::tree::{FiniteTree, NodeId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum GrowthMode {
    /// New chain nodes go above the current top (successor relation computable).
    ExtendTop,
    /// New chain nodes go between the component root and its successor
    /// (branching function computable).
    InsertBottom,
}

/// Marker positions, recorded at every stage where they moved.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MarkerTrace {
    snapshots: Vec<(u64, Vec<u64>)>,
}

impl MarkerTrace {
    /// Markers in force at stage `s`.
    pub fn at(&self, s: u64) -> &[u64] {
        let k = self.snapshots.partition_point(|&(t, _)| t <= s);
        &self.snapshots[k.saturating_sub(1)].1
    }

    /// `m_{i,s}`, if marker `i` still lies inside the realized window.
    pub fn marker(&self, i: usize, s: u64) -> Option<u64> {
        self.at(s).get(i).copied()
    }

    pub fn final_markers(&self) -> &[u64] {
        &self.snapshots.last().expect("initial snapshot").1
    }

    pub fn change_stages(&self) -> Vec<u64> {
        self.snapshots.iter().map(|s| s.0).collect()
    }
}

#[derive(Clone, Debug)]
pub struct Staircase {
    pub presentation: StagewiseTree,
    pub markers: MarkerTrace,
    /// Largest component root realized.
    pub top_component: u64,
    pub mode: GrowthMode,
}

impl Staircase {
    pub fn components(&self) -> impl Iterator<Item = u64> {
        (2..=self.top_component).step_by(2)
    }
}

/// Builds the staircase for `k` with components `2, 4, …` up to the least
/// even number `≥ horizon + 2`.
pub fn staircase_build(k: &MockCeSet, horizon: u64, mode: GrowthMode) -> Result<Staircase, CodingError> {
    let top = 2 * (horizon / 2 + 1);
    staircase_build_with(k, horizon, top, mode)
}

pub fn staircase_build_with(k: &MockCeSet, horizon: u64, top: u64, mode: GrowthMode) -> Result<Staircase, CodingError> {
    if k.last_stage() > horizon {
        return Err(CodingError::HorizonTooSmall { needed: k.last_stage(), horizon });
    }
    let mut b = Builder::new(top, mode);
    let mut markers: Vec<u64> = (2..=top).step_by(2).collect();
    let mut snapshots = vec![(0, markers.clone())];
    for &(x, t) in k.events() {
        let i = x as usize;
        if i >= markers.len() {
            continue;
        }
        let kk = (i..markers.len()).find(|&j| markers[j] >= t).ok_or(CodingError::HorizonTooSmall {
            needed: t,
            horizon: top,
        })?;
        markers.drain(i..kk);
        b.repair(t, &markers, if i == 0 { 0 } else { i - 1 });
        snapshots.push((t, markers.clone()));
    }
    let mut presentation = b.tree;
    presentation.set_horizon(horizon);
    presentation.set_truth(GroundTruth {
        infinite_nodes: BTreeSet::from([NodeId(0)]),
        maximal_infinite: Some(NodeId(0)),
        isolated_path: None,
        omega_nodes: BTreeSet::from([NodeId(0)]),
        settled_by: k.last_stage(),
    });
    Ok(Staircase { presentation, markers: MarkerTrace { snapshots }, top_component: top, mode })
}

struct Builder {
    tree: StagewiseTree,
    top: u64,
    mode: GrowthMode,
    /// indexed by `e/2 - 1`
    height: Vec<u64>,
    /// current top node (extend) or first chain node (insert)
    handle: Vec<NodeId>,
    next_odd: u64,
}

impl Builder {
    fn new(top: u64, mode: GrowthMode) -> Self {
        let mut b = Builder {
            tree: StagewiseTree::new(NodeId(0)),
            top,
            mode,
            height: Vec::new(),
            handle: Vec::new(),
            next_odd: 1,
        };
        for e in (2..=top).step_by(2) {
            b.tree.attach(0, NodeId(e), NodeId(0)).expect("fresh");
            let mut last = NodeId(e);
            let mut first = None;
            for _ in 0..e {
                let o = b.fresh();
                b.tree.attach(0, o, last).expect("fresh");
                first.get_or_insert(o);
                last = o;
            }
            b.height.push(e);
            b.handle.push(match mode {
                GrowthMode::ExtendTop => last,
                GrowthMode::InsertBottom => first.expect("e > 0"),
            });
        }
        b
    }

    fn fresh(&mut self) -> NodeId {
        let o = NodeId(self.next_odd);
        self.next_odd += 2;
        o
    }

    fn grow(&mut self, stage: u64, slot: usize, to: u64) {
        let e = NodeId(2 * (slot as u64 + 1));
        while self.height[slot] < to {
            let o = self.fresh();
            match self.mode {
                GrowthMode::ExtendTop => self.tree.attach(stage, o, self.handle[slot]).expect("fresh"),
                GrowthMode::InsertBottom => self.tree.splice(stage, o, e, self.handle[slot]).expect("fresh"),
            }
            self.handle[slot] = o;
            self.height[slot] += 1;
        }
    }

    /// Restores descending runs inside every block from `first_block` on,
    /// each block above the previous marker, raising heights as little as possible.
    fn repair(&mut self, stage: u64, markers: &[u64], first_block: usize) {
        let slot = |e: u64| (e / 2 - 1) as usize;
        let mut starts: Vec<(u64, Option<u64>)> = Vec::new();
        // block -1 runs from 2 to m_0 and has no lower bound
        if first_block == 0 && markers[0] > 2 {
            starts.push((2, None));
        }
        for b in first_block..markers.len() {
            starts.push((markers[b], if b == 0 { None } else { Some(markers[b - 1]) }));
        }
        for (n, &(start, below)) in starts.iter().enumerate() {
            let end = starts.get(n + 1).map_or(self.top + 2, |s| s.0);
            let lower = below.map_or(0, |m| self.height[slot(m)] + 1);
            let mut need_next = 0;
            let mut e = end - 2;
            loop {
                let need = self.height[slot(e)].max(lower).max(need_next);
                self.grow(stage, slot(e), need);
                need_next = need + 1;
                if e == start {
                    break;
                }
                e -= 2;
            }
        }
    }
}

/// Component root of a non-root node.
pub fn floor_component(t: &FiniteTree, m: NodeId) -> Option<NodeId> {
    t.ancestor_at(m, 1).ok().flatten()
}

/// Heights of the components `2, 4, …, top` in a frozen stage.
pub fn component_heights(t: &FiniteTree, top: u64) -> Vec<u64> {
    (2..=top)
        .step_by(2)
        .map(|e| {
            let i = t.idx(NodeId(e)).expect("component present from stage 0");
            t.sub_height_idx(i) as u64
        })
        .collect()
}

/// Descending runs between markers, each run above the marker before it,
/// and strictly rising marker heights. Returns a description of each failure.
pub fn check_runs(heights: &[u64], markers: &[u64], top: u64) -> Vec<String> {
    let h = |e: u64| heights[(e / 2 - 1) as usize];
    let mut bad = Vec::new();
    let mut bounds: Vec<u64> = vec![2];
    bounds.extend(markers.iter().copied().filter(|&m| m > 2));
    bounds.push(top + 2);
    for w in bounds.windows(2) {
        for e in (w[0]..w[1] - 2).step_by(2) {
            if h(e) <= h(e + 2) {
                bad.push(format!("heights of {} and {} do not descend", e, e + 2));
            }
        }
    }
    for (i, w) in markers.windows(2).enumerate() {
        if h(w[0]) >= h(w[1]) {
            bad.push(format!("marker {} at {} not taller than marker {} at {}", i + 1, w[1], i, w[0]));
        }
        let end = markers.get(i + 2).copied().unwrap_or(top + 2);
        for q in (w[1] + 2..end).step_by(2) {
            if h(q) <= h(w[0]) {
                bad.push(format!("component {} not above marker {} at {}", q, i, w[0]));
            }
        }
    }
    bad
}

/// `K[i] = K_{m_i}[i]` for `i ≤ i_max`.
pub fn check_settling(k: &MockCeSet, markers: &[u64], i_max: usize) -> Vec<usize> {
    (0..=i_max)
        .filter(|&i| match markers.get(i) {
            Some(&m) => k.prefix(m, i as u64) != k.limit_prefix(i as u64),
            None => true,
        })
        .collect()
}

/// Properties I-III at every frozen stage, as report entries.
pub fn property_checks(st: &Staircase, k: &MockCeSet, i_max: usize) -> Vec<Check> {
    let (mut rising, mut blocks) = (Vec::new(), Vec::new());
    for s in 0..=st.presentation.horizon() {
        let t = st.presentation.freeze(s);
        let h = component_heights(&t, st.top_component);
        for msg in check_runs(&h, st.markers.at(s), st.top_component) {
            let msg = format!("stage {s}: {msg}");
            if msg.contains("taller") {
                rising.push(msg);
            } else {
                blocks.push(msg);
            }
        }
    }
    let unsettled: Vec<String> =
        check_settling(k, st.markers.final_markers(), i_max).iter().map(|i| format!("K[{i}] not settled at its marker")).collect();
    vec![
        Check::from_failures("property_i", &rising, "marker heights rise at every stage"),
        Check::from_failures("property_ii", &blocks, "heights descend inside each block and clear the previous marker"),
        Check::from_failures("property_iii", &unsettled, format!("K[i] settled by marker i for i <= {i_max}")),
    ]
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decoded {
    pub psi: Vec<u64>,
    /// `bits[x]` is membership of `x`.
    pub bits: Vec<bool>,
}

/// Recovers `K` restricted to `0..=i_max` from a moved node of a self-embedding.
///
/// Marker 0 can itself move, so `ψ(i+1) ≥ m_i` and `K[i+1] = K_{ψ(i+2)}[i+1]`.
pub fn staircase_decode(phi: &Embedding, n: NodeId, i_max: usize, k: &MockCeSet) -> Result<Decoded, CodingError> {
    let t = &phi.target;
    if phi.get(n).is_none_or(|m| m == n) {
        return Err(CodingError::Precondition(format!("node {n} is not moved")));
    }
    let floor = |m: NodeId| floor_component(t, m).map(|c| c.0);
    let mut psi = vec![floor(n).ok_or_else(|| CodingError::Precondition("root is not coded".into()))?];
    let mut x = n;
    let mut steps = 0;
    while psi.len() < i_max + 3 {
        x = phi.get(x).ok_or(CodingError::EscapesHorizon { reached: steps })?;
        steps += 1;
        if let Some(c) = floor(x) {
            if c > *psi.last().expect("nonempty") {
                psi.push(c);
            }
        }
    }
    let bits = (0..=i_max).map(|x| k.contains_at(x as u64, psi[x + 2])).collect();
    Ok(Decoded { psi, bits })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample_k() -> MockCeSet {
        MockCeSet::one_at_a_time(vec![(3, 5), (0, 9), (5, 14), (1, 20), (2, 31)]).unwrap()
    }

    fn check_every_stage(st: &Staircase) {
        for s in 0..=st.presentation.horizon() {
            let t = st.presentation.freeze(s);
            let h = component_heights(&t, st.top_component);
            let bad = check_runs(&h, st.markers.at(s), st.top_component);
            assert!(bad.is_empty(), "stage {s}: {bad:?}");
            assert!(t.nodes().iter().all(|&x| x == NodeId(0) || t.branching(x).unwrap() <= 1));
        }
    }

    #[test]
    fn empty_k_keeps_heights() {
        let st = staircase_build(&MockCeSet::empty(), 40, GrowthMode::ExtendTop).unwrap();
        let t = st.presentation.final_tree();
        let h = component_heights(&t, st.top_component);
        assert!(h.iter().enumerate().all(|(i, &x)| x == 2 * (i as u64 + 1)));
        assert_eq!(st.markers.change_stages(), vec![0]);
    }

    #[test]
    fn single_event_moves_marker_zero() {
        let k = MockCeSet::new(vec![(0, 3)]).unwrap();
        let st = staircase_build(&k, 30, GrowthMode::ExtendTop).unwrap();
        assert_eq!(st.markers.marker(0, 2), Some(2));
        assert_eq!(st.markers.marker(0, 3), Some(4));
        check_every_stage(&st);
        assert!(check_settling(&k, st.markers.final_markers(), 5).is_empty());
    }

    #[test]
    fn properties_hold_in_both_modes() {
        for mode in [GrowthMode::ExtendTop, GrowthMode::InsertBottom] {
            let k = sample_k();
            let st = staircase_build(&k, 60, mode).unwrap();
            check_every_stage(&st);
            assert!(check_settling(&k, st.markers.final_markers(), 6).is_empty());
            let m = st.markers.final_markers();
            assert!(m.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn markers_never_decrease() {
        let st = staircase_build(&sample_k(), 60, GrowthMode::ExtendTop).unwrap();
        let stages = st.markers.change_stages();
        for w in stages.windows(2) {
            let (a, b) = (st.markers.at(w[0]), st.markers.at(w[1]));
            for i in 0..b.len() {
                assert!(a[i] <= b[i]);
            }
        }
    }

    #[test]
    fn literal_local_repair_is_not_enough() {
        // merging into one block can make its first chain taller than the next marker
        let k = MockCeSet::new(vec![(1, 9)]).unwrap();
        let st = staircase_build(&k, 30, GrowthMode::ExtendTop).unwrap();
        let h = component_heights(&st.presentation.final_tree(), st.top_component);
        let m = st.markers.final_markers();
        assert_eq!(m[1], 10);
        assert!(h[(m[1] / 2 - 1) as usize] > h[(m[0] / 2 - 1) as usize]);
        assert!(h[(m[1] / 2 - 1) as usize] > 10, "next block had to grow too");
    }
}
