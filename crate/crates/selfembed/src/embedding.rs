//! Order embeddings between finite trees.
//!
//! An embedding is an injective map that preserves and reflects `⪯`. It need
//! not preserve roots, meets or levels. The search is exact: a memoized
//! recursion on (source node, target node) pairs, where the successors of a
//! source node must land on pairwise incomparable nodes strictly above the
//! image of that node.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::sync::Arc;

use thiserror::Error;

use crate::tree::{BinaryString, FiniteTree, NodeId};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum EmbeddingError {
    #[error("map is not defined on source node {0}")]
    PartialMap(NodeId),
    #[error("iterate escapes the frozen tree at node {node} (defined on {defined} of {total} nodes)")]
    EscapesHorizon { node: NodeId, defined: usize, total: usize },
    #[error("source nodes are not all nodes of the target")]
    NotSelfMap,
    #[error("successor oracle failed at node {0}")]
    OracleFailure(NodeId),
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
}

/// A finite map between two trees, not necessarily valid; see [`verify_embedding`].
#[derive(Clone, Debug)]
pub struct Embedding {
    pub source: Arc<FiniteTree>,
    pub target: Arc<FiniteTree>,
    pub map: BTreeMap<NodeId, NodeId>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    NotInTarget(NodeId),
    NotInjective(NodeId, NodeId),
    /// `a ⪯ b` in the source but the images are not strictly ordered.
    OrderNotPreserved(NodeId, NodeId),
    /// `a`, `b` incomparable in the source but their images are comparable.
    OrderNotReflected(NodeId, NodeId),
}

impl Embedding {
    pub fn new(source: Arc<FiniteTree>, target: Arc<FiniteTree>, map: BTreeMap<NodeId, NodeId>) -> Self {
        Embedding { source, target, map }
    }

    pub fn identity(t: Arc<FiniteTree>) -> Self {
        let map = t.nodes().iter().map(|&n| (n, n)).collect();
        Embedding { source: t.clone(), target: t, map }
    }

    pub fn get(&self, n: NodeId) -> Option<NodeId> {
        self.map.get(&n).copied()
    }

    /// Some node is moved.
    pub fn weakly_nontrivial(&self) -> bool {
        self.map.iter().any(|(a, b)| a != b)
    }

    /// Some node of `inner` is outside the image.
    pub fn nontrivial_within(&self, inner: &FiniteTree) -> bool {
        let image: HashSet<NodeId> = self.map.values().copied().collect();
        inner.nodes().iter().any(|n| !image.contains(n))
    }

    pub fn moved_nodes(&self) -> Vec<NodeId> {
        self.map.iter().filter(|(a, b)| a != b).map(|(a, _)| *a).collect()
    }

    /// `other ∘ self`.
    pub fn then(&self, other: &Embedding) -> Result<Embedding, EmbeddingError> {
        let mut map = BTreeMap::new();
        for (&a, &b) in &self.map {
            let c = other.get(b).ok_or(EmbeddingError::PartialMap(b))?;
            map.insert(a, c);
        }
        Ok(Embedding { source: self.source.clone(), target: other.target.clone(), map })
    }

    fn require_self_map(&self) -> Result<(), EmbeddingError> {
        if self.source.nodes().iter().all(|&n| self.target.contains(n)) {
            Ok(())
        } else {
            Err(EmbeddingError::NotSelfMap)
        }
    }

    /// `e^k` restricted to the nodes whose first `k` images stay in the
    /// domain. Needs the source to be a downward-closed part of the target.
    pub fn iterate_partial(&self, k: usize) -> Result<Embedding, EmbeddingError> {
        self.require_self_map()?;
        let mut map = BTreeMap::new();
        'node: for &x in self.source.nodes() {
            let mut y = x;
            for _ in 0..k {
                match self.get(y) {
                    Some(z) => y = z,
                    None => continue 'node,
                }
            }
            map.insert(x, y);
        }
        let source = Arc::new(
            self.source.restrict(|n| map.contains_key(&n)).map_err(|_| EmbeddingError::NotSelfMap)?,
        );
        Ok(Embedding { source, target: self.target.clone(), map })
    }

    /// The full `k`-fold composition, or `EscapesHorizon` when some node's
    /// iterate leaves the domain.
    pub fn iterate(&self, k: usize) -> Result<Embedding, EmbeddingError> {
        let part = self.iterate_partial(k)?;
        if part.map.len() == self.source.len() {
            return Ok(part);
        }
        let node = self
            .source
            .nodes()
            .iter()
            .copied()
            .filter(|n| !part.map.contains_key(n))
            .min()
            .expect("some node escaped");
        Err(EmbeddingError::EscapesHorizon { node, defined: part.map.len(), total: self.source.len() })
    }

    /// `e^k(x)` or the first node whose image is undefined.
    pub fn apply_n(&self, x: NodeId, k: usize) -> Result<NodeId, NodeId> {
        let mut y = x;
        for _ in 0..k {
            y = self.get(y).ok_or(y)?;
        }
        Ok(y)
    }
}

/// Checks a candidate embedding. `Err` only when the map is not total; the
/// `Ok` vector lists violations and is empty for a valid embedding.
pub fn verify_embedding(e: &Embedding) -> Result<Vec<Violation>, EmbeddingError> {
    let s = &e.source;
    let t = &e.target;
    for &n in s.nodes() {
        if !e.map.contains_key(&n) {
            return Err(EmbeddingError::PartialMap(n));
        }
    }
    let mut out = Vec::new();
    let mut img_idx: HashMap<NodeId, usize> = HashMap::new();
    let mut seen: HashMap<NodeId, NodeId> = HashMap::new();
    for &n in s.nodes() {
        let m = e.map[&n];
        match t.idx(m) {
            Ok(i) => {
                img_idx.insert(n, i);
            }
            Err(_) => out.push(Violation::NotInTarget(n)),
        }
        if let Some(&prev) = seen.get(&m) {
            out.push(Violation::NotInjective(prev, n));
        } else {
            seen.insert(m, n);
        }
    }
    if !out.is_empty() {
        return Ok(out);
    }
    for i in 0..s.len() {
        let x = s.id(i);
        let fx = img_idx[&x];
        if let Some(p) = s.parent_idx(i) {
            let fp = img_idx[&s.id(p)];
            if fp == fx || !t.leq_idx(fp, fx) {
                out.push(Violation::OrderNotPreserved(s.id(p), x));
            }
        }
        let kids = s.children_idx(i);
        for (a, &c1) in kids.iter().enumerate() {
            for &c2 in &kids[a + 1..] {
                let f1 = img_idx[&s.id(c1)];
                let f2 = img_idx[&s.id(c2)];
                if t.leq_idx(f1, f2) || t.leq_idx(f2, f1) {
                    out.push(Violation::OrderNotReflected(s.id(c1), s.id(c2)));
                }
            }
        }
    }
    Ok(out)
}

/// `Ok(true)` iff the map is a valid embedding.
pub fn is_valid(e: &Embedding) -> bool {
    matches!(verify_embedding(e), Ok(v) if v.is_empty())
}

const UNKNOWN: u8 = 0;
const NO: u8 = 1;
const YES: u8 = 2;

/// Per-call memo tables for one (source, target) pair.
struct Matcher<'a> {
    a: &'a FiniteTree,
    b: &'a FiniteTree,
    pins: HashMap<usize, usize>,
    can: Vec<u8>,
    emb: Vec<u8>,
    forest: HashMap<(u32, u128, u32), bool>,
    dist: HashMap<(u32, u128, u32, u32), bool>,
}

impl<'a> Matcher<'a> {
    fn new(a: &'a FiniteTree, b: &'a FiniteTree, pins: HashMap<usize, usize>) -> Self {
        let n = a.len() * b.len();
        Matcher { a, b, pins, can: vec![UNKNOWN; n], emb: vec![UNKNOWN; n], forest: HashMap::new(), dist: HashMap::new() }
    }

    fn key(&self, x: usize, y: usize) -> usize {
        x * self.b.len() + y
    }

    /// Can the subtree at `x` embed with `x ↦ y`?
    fn can(&mut self, x: usize, y: usize) -> bool {
        let k = self.key(x, y);
        if self.can[k] != UNKNOWN {
            return self.can[k] == YES;
        }
        let r = self.compute_can(x, y);
        self.can[k] = if r { YES } else { NO };
        r
    }

    fn compute_can(&mut self, x: usize, y: usize) -> bool {
        if let Some(&p) = self.pins.get(&x) {
            if p != y {
                return false;
            }
        }
        let (a, b) = (self.a, self.b);
        if a.size_idx(x) > b.size_idx(y) || a.sub_height_idx(x) > b.sub_height_idx(y) || a.leaves_idx(x) > b.leaves_idx(y) {
            return false;
        }
        let n = a.children_idx(x).len();
        if n == 0 {
            return true;
        }
        self.forest(x, full_mask(n), y)
    }

    /// Can the subtree at `x` embed somewhere in the subtree at `y`?
    fn emb(&mut self, x: usize, y: usize) -> bool {
        let k = self.key(x, y);
        if self.emb[k] != UNKNOWN {
            return self.emb[k] == YES;
        }
        let (a, b) = (self.a, self.b);
        let mut r = false;
        if a.size_idx(x) <= b.size_idx(y) && a.sub_height_idx(x) <= b.sub_height_idx(y) {
            r = self.can(x, y);
            if !r {
                for &c in b.children_idx(y) {
                    if self.emb(x, c) {
                        r = true;
                        break;
                    }
                }
            }
        }
        self.emb[k] = if r { YES } else { NO };
        r
    }

    /// Can the successors of `x` selected by `mask` go to pairwise
    /// incomparable nodes strictly above `y`?
    fn forest(&mut self, x: usize, mask: u128, y: usize) -> bool {
        if mask == 0 {
            return true;
        }
        if let Some(&r) = self.forest.get(&(x as u32, mask, y as u32)) {
            return r;
        }
        let r = self.matching(x, mask, y).is_some() || {
            let wide = self.a.children_idx(x).len() > 128;
            !wide && self.dist(x, mask, y, 0)
        };
        self.forest.insert((x as u32, mask, y as u32), r);
        r
    }

    /// Assignment of each selected successor of `x` to a distinct successor
    /// of `y`, tried in id order. A sufficient condition for `forest`.
    fn matching(&mut self, x: usize, mask: u128, y: usize) -> Option<Vec<(usize, usize)>> {
        let all = self.a.children_idx(x);
        let kids: Vec<usize> = if all.len() > 128 { all.to_vec() } else { bits(mask).map(|i| all[i]).collect() };
        let targets: Vec<usize> = self.b.children_idx(y).to_vec();
        if kids.len() > targets.len() {
            return None;
        }
        let mut adj: Vec<Vec<usize>> = Vec::with_capacity(kids.len());
        for &c in &kids {
            let mut row = Vec::new();
            for (j, &t) in targets.iter().enumerate() {
                if self.emb(c, t) {
                    row.push(j);
                }
            }
            if row.is_empty() {
                return None;
            }
            adj.push(row);
        }
        let mut owner: Vec<Option<usize>> = vec![None; targets.len()];
        for i in 0..kids.len() {
            let mut seen = vec![false; targets.len()];
            if !augment(i, &adj, &mut owner, &mut seen) {
                return None;
            }
        }
        let mut out = vec![(0, 0); kids.len()];
        for (j, o) in owner.iter().enumerate() {
            if let Some(i) = *o {
                out[i] = (kids[i], targets[j]);
            }
        }
        Some(out)
    }

    /// Distribute the selected successors of `x` over the successors of `y`
    /// from position `j` on, several per target subtree allowed.
    fn dist(&mut self, x: usize, mask: u128, y: usize, j: usize) -> bool {
        if mask == 0 {
            return true;
        }
        let targets = self.b.children_idx(y);
        if j >= targets.len() {
            return false;
        }
        let key = (x as u32, mask, y as u32, j as u32);
        if let Some(&r) = self.dist.get(&key) {
            return r;
        }
        let t = targets[j];
        let mut r = false;
        let mut sub = mask;
        loop {
            if self.group(x, sub, t) && self.dist(x, mask & !sub, y, j + 1) {
                r = true;
                break;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & mask;
        }
        self.dist.insert(key, r);
        r
    }

    /// Place the selected successors of `x` inside the subtree at `t`
    /// (`t` itself allowed for a single successor).
    fn group(&mut self, x: usize, sub: u128, t: usize) -> bool {
        match sub.count_ones() {
            0 => true,
            1 => {
                let c = self.a.children_idx(x)[sub.trailing_zeros() as usize];
                self.emb(c, t)
            }
            _ => self.forest(x, sub, t),
        }
    }

    /// Least-id node `z ⪰ t` with `can(c, z)`.
    fn place(&mut self, c: usize, t: usize) -> usize {
        let mut best: Option<usize> = None;
        let mut stack = vec![t];
        while let Some(z) = stack.pop() {
            if !self.emb(c, z) {
                continue;
            }
            if self.can(c, z) && best.is_none_or(|bz| self.b.id(z) < self.b.id(bz)) {
                best = Some(z);
            }
            stack.extend(self.b.children_idx(z).iter().copied());
        }
        best.expect("emb guaranteed a placement")
    }

    fn build(&mut self, x: usize, y: usize, out: &mut BTreeMap<NodeId, NodeId>) {
        debug_assert!(self.can(x, y));
        out.insert(self.a.id(x), self.b.id(y));
        let n = self.a.children_idx(x).len();
        if n > 0 {
            self.build_forest(x, full_mask(n), y, out);
        }
    }

    fn build_forest(&mut self, x: usize, mask: u128, y: usize, out: &mut BTreeMap<NodeId, NodeId>) {
        if mask == 0 {
            return;
        }
        if let Some(pairs) = self.matching(x, mask, y) {
            for (c, t) in pairs {
                let z = self.place(c, t);
                self.build(c, z, out);
            }
            return;
        }
        let targets = self.b.children_idx(y).to_vec();
        let mut rest = mask;
        for (j, &t) in targets.iter().enumerate() {
            if rest == 0 {
                break;
            }
            let mut sub = rest;
            loop {
                if self.group(x, sub, t) && self.dist(x, rest & !sub, y, j + 1) {
                    break;
                }
                assert!(sub != 0, "dist guaranteed a decomposition");
                sub = (sub - 1) & rest;
            }
            match sub.count_ones() {
                0 => {}
                1 => {
                    let c = self.a.children_idx(x)[sub.trailing_zeros() as usize];
                    let z = self.place(c, t);
                    self.build(c, z, out);
                }
                _ => self.build_forest(x, sub, t, out),
            }
            rest &= !sub;
        }
    }
}

fn augment(i: usize, adj: &[Vec<usize>], owner: &mut [Option<usize>], seen: &mut [bool]) -> bool {
    for &j in &adj[i] {
        if seen[j] {
            continue;
        }
        seen[j] = true;
        if owner[j].is_none_or(|o| augment(o, adj, owner, seen)) {
            owner[j] = Some(i);
            return true;
        }
    }
    false
}

fn full_mask(n: usize) -> u128 {
    if n >= 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

fn bits(mask: u128) -> impl Iterator<Item = usize> {
    (0..128).filter(move |i| mask >> i & 1 == 1)
}

fn sorted_indices(t: &FiniteTree) -> Vec<usize> {
    let mut v: Vec<usize> = (0..t.len()).collect();
    v.sort_by_key(|&i| t.id(i));
    v
}

/// Does `a` embed into `b`?
pub fn embeds(a: &FiniteTree, b: &FiniteTree) -> bool {
    let mut m = Matcher::new(a, b, HashMap::new());
    (0..b.len()).any(|y| m.can(0, y))
}

/// Deterministic witness search: the source root goes to the least-id
/// feasible target node, successors are placed subtree by subtree in id
/// order, each at the least-id feasible node.
pub fn find_embedding(a: &FiniteTree, b: &FiniteTree) -> Option<Embedding> {
    find_embedding_with(a, b, &[])
}

/// As [`find_embedding`], with some images fixed in advance.
pub fn find_embedding_with(a: &FiniteTree, b: &FiniteTree, pins: &[(NodeId, NodeId)]) -> Option<Embedding> {
    let mut pin_idx = HashMap::new();
    for &(x, y) in pins {
        pin_idx.insert(a.idx(x).ok()?, b.idx(y).ok()?);
    }
    let mut m = Matcher::new(a, b, pin_idx);
    let y = sorted_indices(b).into_iter().find(|&y| m.can(0, y))?;
    let mut map = BTreeMap::new();
    m.build(0, y, &mut map);
    Some(Embedding::new(Arc::new(a.clone()), Arc::new(b.clone()), map))
}

/// Embedding that sends root to root.
pub fn find_rooted_embedding(a: &FiniteTree, b: &FiniteTree) -> Option<Embedding> {
    find_embedding_with(a, b, &[(a.root(), b.root())])
}

/// A self-embedding of a finite tree that is not the identity. Any such map is
/// an automorphism, so it moves some node to another of the same height.
pub fn nontrivial_self_embedding(t: &FiniteTree) -> Option<Embedding> {
    for &x in t.nodes() {
        let h = t.height(x).ok()?;
        for &y in t.nodes() {
            if y != x && t.height(y).ok()? == h {
                if let Some(e) = find_embedding_with(t, t, &[(x, y)]) {
                    return Some(e);
                }
            }
        }
    }
    None
}

/// Answers the successor relation of a presentation.
pub trait SuccessorOracle {
    /// Is `m` an immediate successor of `n`?
    fn is_successor(&self, n: NodeId, m: NodeId) -> Option<bool>;
}

impl SuccessorOracle for FiniteTree {
    fn is_successor(&self, n: NodeId, m: NodeId) -> Option<bool> {
        Some(self.parent(m).ok()? == Some(n))
    }
}

/// The universal coding: the node with successor chain `n_0 ≺ … ≺ n_k`
/// goes to `1^{n_0} 0 1^{n_1} 0 … 1^{n_k} 0`.
pub fn embed_into_binary(t: &FiniteTree, n: NodeId, oracle: &dyn SuccessorOracle) -> Result<BinaryString, EmbeddingError> {
    let chain = t.chain_to(n).map_err(|_| EmbeddingError::UnknownNode(n))?;
    for w in chain.windows(2) {
        if oracle.is_successor(w[0], w[1]) != Some(true) {
            return Err(EmbeddingError::OracleFailure(w[1]));
        }
    }
    let mut s = BinaryString::empty();
    for m in chain {
        s.extend_bits(true, m.0 as usize);
        s.push(false);
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum KruskalIndex {
    Index(usize),
    Inconsistent,
}

/// Least `k` such that every `i` with `k ≤ i < window/2` has at least two
/// `j` with `i < j < window` and `seq[i] ↪ seq[j]`.
pub fn kruskal_index(seq: &[FiniteTree], window: usize) -> KruskalIndex {
    kruskal_index_by(seq, window, embeds)
}

/// As [`kruskal_index`] with a caller-supplied embeddability test.
pub fn kruskal_index_by(seq: &[FiniteTree], window: usize, rel: impl Fn(&FiniteTree, &FiniteTree) -> bool) -> KruskalIndex {
    let window = window.min(seq.len());
    let half = window / 2;
    let mut last_bad: Option<usize> = None;
    for i in 0..half {
        let hits = (i + 1..window).filter(|&j| rel(&seq[i], &seq[j])).take(2).count();
        if hits < 2 {
            last_bad = Some(i);
        }
    }
    match last_bad {
        None => KruskalIndex::Index(0),
        Some(i) if i + 1 < half => KruskalIndex::Index(i + 1),
        Some(_) => KruskalIndex::Inconsistent,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tree::{all_shapes, ComponentKind};

    /// Brute force: extend a partial injective map node by node, checking
    /// every pair as soon as both ends are assigned.
    pub(crate) fn brute_embeds(a: &FiniteTree, b: &FiniteTree) -> bool {
        fn go(a: &FiniteTree, b: &FiniteTree, k: usize, img: &mut Vec<usize>, used: &mut Vec<bool>) -> bool {
            if k == a.len() {
                return true;
            }
            for y in 0..b.len() {
                if used[y] {
                    continue;
                }
                let ok = (0..k).all(|x| {
                    a.leq_idx(x, k) == b.leq_idx(img[x], y) && a.leq_idx(k, x) == b.leq_idx(y, img[x])
                });
                if ok {
                    used[y] = true;
                    img.push(y);
                    if go(a, b, k + 1, img, used) {
                        return true;
                    }
                    img.pop();
                    used[y] = false;
                }
            }
            false
        }
        go(a, b, 0, &mut Vec::new(), &mut vec![false; b.len()])
    }

    #[test]
    fn chains() {
        let c3 = FiniteTree::chain(&[0, 1, 2]);
        let c5 = FiniteTree::chain(&[0, 1, 2, 3, 4]);
        let e = find_embedding(&c3, &c5).unwrap();
        assert!(is_valid(&e));
        assert!(find_embedding(&c5, &c3).is_none());
    }

    #[test]
    fn component_kinds() {
        let k = |c: ComponentKind| c.shape(0).unwrap();
        use ComponentKind::*;
        assert!(find_embedding(&k(C), &k(B)).is_none());
        assert!(find_embedding(&k(A), &k(B)).is_some());
    }

    #[test]
    fn verify_examples() {
        let c = Arc::new(FiniteTree::chain(&[0, 1, 2]));
        let id = Embedding::identity(c.clone());
        assert!(is_valid(&id));
        assert!(!id.weakly_nontrivial());
        let swap: BTreeMap<NodeId, NodeId> =
            [(0, 0), (1, 2), (2, 1)].iter().map(|&(a, b)| (NodeId(a), NodeId(b))).collect();
        let bad = Embedding::new(c.clone(), c.clone(), swap);
        assert!(!verify_embedding(&bad).unwrap().is_empty());
        let partial = Embedding::new(c.clone(), c, BTreeMap::new());
        assert_eq!(verify_embedding(&partial), Err(EmbeddingError::PartialMap(NodeId(0))));
    }

    #[test]
    fn iterate_shift() {
        let ids: Vec<u64> = (0..10).collect();
        let chain = Arc::new(FiniteTree::chain(&ids));
        let dom = Arc::new(chain.restrict(|n| n.0 < 9).unwrap());
        let map = (0..9).map(|i| (NodeId(i), NodeId(i + 1))).collect();
        let shift = Embedding::new(dom, chain.clone(), map);
        let three = shift.iterate_partial(3).unwrap();
        assert_eq!(three.map.len(), 7);
        assert!(three.map.iter().all(|(a, b)| b.0 == a.0 + 3));
        assert!(matches!(shift.iterate(3), Err(EmbeddingError::EscapesHorizon { .. })));
        let id = Embedding::identity(chain);
        assert_eq!(id.iterate(5).unwrap().map, id.map);
        assert_eq!(shift.iterate(0).unwrap().map.len(), 9);
    }

    #[test]
    fn universal_coding_examples() {
        let t = FiniteTree::chain(&[0, 1, 2]);
        assert_eq!(embed_into_binary(&t, NodeId(0), &t).unwrap().to_string(), "0");
        assert_eq!(embed_into_binary(&t, NodeId(2), &t).unwrap().to_string(), "010110");
        let s = FiniteTree::from_events(vec![(NodeId(0), None), (NodeId(3), Some(NodeId(0)))]).unwrap();
        assert_eq!(embed_into_binary(&s, NodeId(3), &s).unwrap().to_string(), "01110");
    }

    #[test]
    fn kruskal_examples() {
        let chains: Vec<FiniteTree> = (1..=50u64).map(|n| FiniteTree::chain(&(0..n).collect::<Vec<_>>())).collect();
        assert_eq!(kruskal_index(&chains, 50), KruskalIndex::Index(0));
        let mut starred = vec![FiniteTree::star(10)];
        starred.extend(chains[..49].iter().cloned());
        assert_eq!(kruskal_index(&starred, 50), KruskalIndex::Index(1));
        let constant = vec![FiniteTree::star(3); 20];
        assert_eq!(kruskal_index(&constant, 20), KruskalIndex::Index(0));
        let mut late = chains.clone();
        late[24] = FiniteTree::star(10);
        assert_eq!(kruskal_index(&late, 50), KruskalIndex::Inconsistent);
    }

    #[test]
    fn agrees_with_brute_force_up_to_five_nodes() {
        let shapes: Vec<FiniteTree> = (1..=5).flat_map(all_shapes).collect();
        for a in &shapes {
            for b in &shapes {
                let found = find_embedding(a, b);
                assert_eq!(found.is_some(), brute_embeds(a, b), "{} into {}", a.canonical_form(), b.canonical_form());
                if let Some(e) = found {
                    assert!(is_valid(&e));
                }
            }
        }
    }

    #[test]
    fn sharing_a_target_subtree_is_found() {
        // root with two leaves embeds into a chain that branches above the
        // root's only successor: needs two successors in one target subtree
        let a = FiniteTree::star(2);
        let b = FiniteTree::from_events(vec![
            (NodeId(0), None),
            (NodeId(1), Some(NodeId(0))),
            (NodeId(2), Some(NodeId(1))),
            (NodeId(3), Some(NodeId(1))),
        ])
        .unwrap();
        let e = find_embedding_with(&a, &b, &[(NodeId(0), NodeId(0))]).unwrap();
        assert!(is_valid(&e));
        assert_eq!(e.get(NodeId(0)), Some(NodeId(0)));
    }

    #[test]
    fn rigid_trees() {
        assert!(nontrivial_self_embedding(&FiniteTree::chain(&[0, 1, 2])).is_none());
        let e = nontrivial_self_embedding(&FiniteTree::star(2)).unwrap();
        assert_eq!(e.get(NodeId(1)), Some(NodeId(2)));
        // leaves at heights 1 and 2 under one root
        let t = FiniteTree::from_events([(NodeId(0), None), (NodeId(1), Some(NodeId(0))), (NodeId(2), Some(NodeId(0))), (NodeId(3), Some(NodeId(2)))]).unwrap();
        assert!(nontrivial_self_embedding(&t).is_none());
    }
}
