//! Self-embeddings built with oracle help, one routine per tree type.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use super::AnalysisError;
use crate::codings::singlepath::path_extract;
use crate::codings::type3::{Relabeled, Type3Truth};
use crate::embedding::{embed_into_binary, find_embedding, find_rooted_embedding, kruskal_index, kruskal_index_by, KruskalIndex};
use crate::oracles::LimitOracle;
use crate::stagewise::StagewiseTree;
use crate::tree::{BinaryString, FiniteTree, NodeId};
use crate::Embedding;

/// The infinite node with no infinite successor, found by walking up from the root.
fn maximal_infinite(oracle: &dyn LimitOracle, root: NodeId) -> Result<NodeId, AnalysisError> {
    if !oracle.is_infinite(root)? {
        return Err(AnalysisError::Precondition("the tree is finite".into()));
    }
    let mut n = root;
    'up: loop {
        for y in oracle.successors_of(n)? {
            if oracle.is_infinite(y)? {
                n = y;
                continue 'up;
            }
        }
        return Ok(n);
    }
}

fn without_subtrees(t: &FiniteTree, roots: &[NodeId]) -> Result<BTreeSet<NodeId>, AnalysisError> {
    let mut out = BTreeSet::new();
    for &r in roots {
        out.extend(t.descendants(r)?);
    }
    Ok(out)
}

/// Sends `T(c_j)` for `j ≥ k` into `T(c_t)` with `t > j` increasing in `j`,
/// fixing everything else; stops at the first `j` without a target.
fn shift_components(t: &FiniteTree, comps: &[NodeId], k: usize) -> Result<Embedding, AnalysisError> {
    let subs = comps.iter().map(|&c| t.subtree(c)).collect::<Result<Vec<_>, _>>()?;
    let mut map = BTreeMap::new();
    let mut prev: Option<usize> = None;
    let mut stop = comps.len();
    for j in k..comps.len() {
        let start = prev.map_or(j + 1, |p| p + 1).max(j + 1);
        match (start..comps.len()).find_map(|u| find_embedding(&subs[j], &subs[u]).map(|e| (u, e))) {
            Some((u, e)) => {
                map.extend(e.map);
                prev = Some(u);
            }
            None => {
                stop = j;
                break;
            }
        }
    }
    if stop == k {
        return Err(AnalysisError::HorizonTooSmall(format!("component {k} has no later target")));
    }
    let dropped = without_subtrees(t, &comps[stop..])?;
    let moved = without_subtrees(t, &comps[k..stop])?;
    for &x in t.nodes() {
        if !dropped.contains(&x) && !moved.contains(&x) {
            map.insert(x, x);
        }
    }
    let source = t.restrict(|x| !dropped.contains(&x))?;
    Ok(Embedding::new(Arc::new(source), Arc::new(t.clone()), map))
}

/// Type 1: above the maximal infinite node `n`, shift each successor subtree
/// from index `k` on into a fresh later one.
pub fn synthesize_type1(p: &StagewiseTree, oracle: &dyn LimitOracle, k: usize) -> Result<Embedding, AnalysisError> {
    if let Some(truth) = p.truth() {
        if truth.settled_by > p.horizon() {
            return Err(AnalysisError::HorizonTooSmall(format!(
                "components settle at stage {} beyond horizon {}",
                truth.settled_by,
                p.horizon()
            )));
        }
    }
    let t = p.final_tree();
    let n = maximal_infinite(oracle, p.root())?;
    let comps = oracle.successors_of(n)?;
    if k >= comps.len() {
        return Err(AnalysisError::HorizonTooSmall(format!("only {} components", comps.len())));
    }
    shift_components(&t, &comps, k)
}

/// Type 2: shift the slabs `T(x_j) \ T(x_{j+1})` along the unique infinite path.
/// An ω-branching path node is handled by shifting its other successors instead.
pub fn synthesize_type2(p: &StagewiseTree, oracle: &dyn LimitOracle) -> Result<Embedding, AnalysisError> {
    let t = p.final_tree();
    let path = path_extract(oracle, p.root())?;
    for (j, &x) in path.iter().enumerate() {
        if oracle.is_omega(x)? {
            let next = path.get(j + 1).copied();
            let comps: Vec<NodeId> = oracle.successors_of(x)?.into_iter().filter(|&y| Some(y) != next).collect();
            let subs = comps.iter().map(|&c| t.subtree(c)).collect::<Result<Vec<_>, _>>()?;
            let k = match kruskal_index(&subs, subs.len()) {
                KruskalIndex::Index(k) => k,
                KruskalIndex::Inconsistent => {
                    return Err(AnalysisError::HorizonTooSmall(format!("successors of {x} give no Kruskal index")))
                }
            };
            return shift_components(&t, &comps, k);
        }
    }
    if path.len() < 3 {
        return Err(AnalysisError::HorizonTooSmall("path too short".into()));
    }
    let spine = &path[..path.len() - 1];
    let mut slabs = Vec::with_capacity(spine.len());
    for (j, &x) in spine.iter().enumerate() {
        let cut = without_subtrees(&t, &[path[j + 1]])?;
        slabs.push(t.subtree(x)?.restrict(|y| !cut.contains(&y))?);
    }
    let rooted = |a: &FiniteTree, b: &FiniteTree| find_rooted_embedding(a, b).is_some();
    let k = match kruskal_index_by(&slabs, slabs.len(), rooted) {
        KruskalIndex::Index(k) => k,
        KruskalIndex::Inconsistent => return Err(AnalysisError::HorizonTooSmall("slabs give no Kruskal index".into())),
    };
    let mut map = BTreeMap::new();
    let mut prev: Option<usize> = None;
    let mut stop = slabs.len();
    for j in k..slabs.len() {
        let start = prev.map_or(j + 1, |p| p + 1).max(j + 1);
        match (start..slabs.len()).find_map(|u| find_rooted_embedding(&slabs[j], &slabs[u]).map(|e| (u, e))) {
            Some((u, e)) => {
                map.extend(e.map);
                prev = Some(u);
            }
            None => {
                stop = j;
                break;
            }
        }
    }
    if stop == k {
        return Err(AnalysisError::HorizonTooSmall(format!("slab {k} has no later target")));
    }
    let moved = without_subtrees(&t, &[path[k]])?;
    let dropped = without_subtrees(&t, &[path[stop]])?;
    for &x in t.nodes() {
        if !moved.contains(&x) {
            map.insert(x, x);
        }
    }
    map.retain(|x, _| !dropped.contains(x));
    let source = t.restrict(|x| !dropped.contains(&x))?;
    Ok(Embedding::new(Arc::new(source), Arc::new(t), map))
}

/// `0` for the root, then `1^c 0` for a step to the successor labelled `c`.
/// On subtrees of `2^{<ω}` the label is the bit itself.
pub fn child_order_code(x: &BinaryString) -> BinaryString {
    let mut s = BinaryString::from_bits(vec![false]);
    for &b in x.bits() {
        if b {
            s.push(true);
        }
        s.push(false);
    }
    s
}

/// `φ: 2^{<ω} → T` on strings: `σ*b` goes to `β*b` for the first branching
/// `β` above `φ(σ)`.
#[derive(Clone, Debug)]
pub struct BinaryDilation {
    truth: Type3Truth,
    root_image: BinaryString,
}

impl BinaryDilation {
    pub fn new(truth: Type3Truth) -> Result<Self, AnalysisError> {
        let mut root_image = None;
        for b in [false, true] {
            let x = BinaryString::empty().child(b);
            if truth.is_infinite(&x)? {
                root_image = Some(x);
                break;
            }
        }
        let root_image = root_image.ok_or_else(|| AnalysisError::Precondition("no infinite node above the root".into()))?;
        Ok(BinaryDilation { truth, root_image })
    }

    pub fn truth(&self) -> &Type3Truth {
        &self.truth
    }

    pub fn apply(&self, sigma: &BinaryString) -> Result<BinaryString, AnalysisError> {
        let mut cur = self.root_image.clone();
        for &b in sigma.bits() {
            while !self.truth.is_level(cur.len()) {
                cur.push(false);
                if cur.len() >= self.truth.max_len() {
                    return Err(AnalysisError::HorizonTooSmall(format!("levels declared only below {}", self.truth.max_len())));
                }
            }
            cur.push(b);
        }
        Ok(cur)
    }
}

/// `α = φ ∘ β` on the string tree.
#[derive(Clone, Debug)]
pub struct Type3Embedding {
    pub phi: BinaryDilation,
}

impl Type3Embedding {
    pub fn new(truth: Type3Truth) -> Result<Self, AnalysisError> {
        Ok(Type3Embedding { phi: BinaryDilation::new(truth)? })
    }

    pub fn apply(&self, x: &BinaryString) -> Result<BinaryString, AnalysisError> {
        self.phi.apply(&child_order_code(x))
    }

    /// The same dilation after the universal coding of the relabeled copy.
    pub fn apply_universal(&self, rel: &Relabeled, n: NodeId) -> Result<BinaryString, AnalysisError> {
        self.phi.apply(&embed_into_binary(&rel.tree, n, &rel.tree)?)
    }
}

/// Type 3 on a frozen presentation: `φ` picks two infinite successors of
/// the first branching node above each image, `β` is the child-order coding.
/// The result is defined wherever the frozen tree is deep enough.
pub fn synthesize_type3(p: &StagewiseTree, oracle: &dyn LimitOracle) -> Result<Embedding, AnalysisError> {
    let t = p.final_tree();
    let root = t.root();
    let mut m: Option<(u32, NodeId)> = None;
    for x in t.sorted_nodes() {
        let h = t.height(x)?;
        if x != root && oracle.is_infinite(x)? && m.is_none_or(|(hm, _)| h < hm) {
            m = Some((h, x));
        }
    }
    let m = m.map(|(_, x)| x);
    let m = m.ok_or_else(|| AnalysisError::HorizonTooSmall("no infinite node above the root".into()))?;
    let mut split: BTreeMap<NodeId, Option<(NodeId, NodeId)>> = BTreeMap::new();
    let mut split_of = |x: NodeId| -> Result<Option<(NodeId, NodeId)>, AnalysisError> {
        if let Some(v) = split.get(&x) {
            return Ok(*v);
        }
        let mut below = t.descendants(x)?;
        below.sort_by_key(|&y| (t.height(y).unwrap_or(u32::MAX), y));
        let mut found = None;
        for y in below {
            if !oracle.is_infinite(y)? {
                continue;
            }
            let inf: Vec<NodeId> =
                oracle.successors_of(y)?.into_iter().filter(|&z| oracle.is_infinite(z).unwrap_or(false)).collect();
            if inf.len() >= 2 {
                found = Some((inf[0], inf[1]));
                break;
            }
        }
        split.insert(x, found);
        Ok(found)
    };
    let mut map = BTreeMap::new();
    map.insert(root, m);
    // breadth-first so parents are mapped first
    let mut order = t.sorted_nodes();
    order.sort_by_key(|&x| (t.height(x).unwrap_or(u32::MAX), x));
    for x in order.into_iter().skip(1) {
        let parent = t.parent(x)?.expect("non-root");
        let Some(&img) = map.get(&parent) else { continue };
        let c = t.successors(parent)?.iter().position(|&y| y == x).expect("child");
        // 1^c 0 applied to img
        let mut cur = img;
        let mut ok = true;
        for bit in std::iter::repeat_n(true, c).chain([false]) {
            match split_of(cur)? {
                Some((a, b)) => cur = if bit { b } else { a },
                None => {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            map.insert(x, cur);
        }
    }
    let source = t.restrict(|x| map.contains_key(&x))?;
    Ok(Embedding::new(Arc::new(source), Arc::new(t), map))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::codings::singlepath::singlepath_build;
    use crate::codings::staircase::{staircase_build, staircase_decode, GrowthMode};
    use crate::embedding::is_valid;
    use crate::oracles::{HonestOracle, MockCeSet};
    use crate::stagewise::GroundTruth;

    #[test]
    fn staircase_shift_decodes() {
        let k = MockCeSet::one_at_a_time(vec![(3, 5), (0, 9), (5, 14), (1, 20), (2, 31)]).unwrap();
        let st = staircase_build(&k, 300, GrowthMode::ExtendTop).unwrap();
        let o = HonestOracle::new(&st.presentation).unwrap();
        let phi = synthesize_type1(&st.presentation, &o, 0).unwrap();
        assert!(is_valid(&phi));
        let n0 = phi.target.successors(NodeId(0)).unwrap()[0];
        assert!(phi.map.values().all(|&y| y != n0));
        let d = staircase_decode(&phi, n0, 5, &k).unwrap();
        let want: Vec<bool> = (0..=5).map(|x| k.contains_at(x, u64::MAX)).collect();
        assert_eq!(d.bits, want);
    }

    #[test]
    fn chain_shifts_by_one() {
        let p = singlepath_build(&MockCeSet::empty(), 20).unwrap();
        let o = HonestOracle::new(&p).unwrap();
        let phi = synthesize_type2(&p, &o).unwrap();
        assert!(is_valid(&phi));
        assert_eq!(phi.get(NodeId(0)), Some(NodeId(1)));
        assert_eq!(phi.get(NodeId(5)), Some(NodeId(6)));
    }

    #[test]
    fn binary_tree_dilation() {
        let mut p = StagewiseTree::new(NodeId(0));
        let mut next = 1;
        let mut frontier = vec![NodeId(0)];
        for d in 1..=6 {
            let mut nf = Vec::new();
            for &x in &frontier {
                for _ in 0..2 {
                    p.attach(d, NodeId(next), x).unwrap();
                    nf.push(NodeId(next));
                    next += 1;
                }
            }
            frontier = nf;
        }
        let all: BTreeSet<NodeId> = (0..next).map(NodeId).collect();
        p.set_truth(GroundTruth { infinite_nodes: all, ..Default::default() });
        let o = HonestOracle::new(&p).unwrap();
        let a = synthesize_type3(&p, &o).unwrap();
        assert!(is_valid(&a));
        assert!(a.weakly_nontrivial());
        assert!(a.source.len() >= 7);
    }

    #[test]
    fn codes_and_dilation() {
        assert_eq!(child_order_code(&"101".parse().unwrap()).to_string(), "010010");
        let e = Type3Embedding::new(Type3Truth::from_padding(&[1; 40])).unwrap();
        let x: BinaryString = "0".parse().unwrap();
        let y: BinaryString = "01".parse().unwrap();
        let (ax, ay) = (e.apply(&x).unwrap(), e.apply(&y).unwrap());
        assert!(ax.is_prefix_of(&ay) && ax != ay);
        assert!(e.phi.truth().is_infinite(&ay).unwrap());
    }
}
