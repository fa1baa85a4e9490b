//! Finite rooted trees viewed as partial orders.
//!
//! A [`FiniteTree`] is an immutable snapshot. Node names are arbitrary
//! naturals; internally every node also has a dense index in insertion
//! order, which the embedding engine uses directly.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct NodeId(pub u64);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl From<u64> for NodeId {
    fn from(v: u64) -> Self {
        NodeId(v)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TreeError {
    #[error("node {0} appears twice")]
    DuplicateNode(NodeId),
    #[error("parent {parent} of node {node} is not present")]
    OrphanParent { node: NodeId, parent: NodeId },
    #[error("more than one root ({0} and {1})")]
    MultipleRoots(NodeId, NodeId),
    #[error("no root given")]
    NoRoot,
    #[error("unknown node {0}")]
    UnknownNode(NodeId),
    #[error("node {0} is kept but its parent is not")]
    NotDownwardClosed(NodeId),
    #[error("tree carries no ground-truth metadata")]
    MissingMetadata,
    #[error("splice of {node}: {child} is not a successor of {parent}")]
    BadSplice { node: NodeId, parent: NodeId, child: NodeId },
    #[error("stage {got} recorded after stage {last}")]
    StageOrder { got: u64, last: u64 },
}

/// A finite rooted tree. Children lists are sorted by id.
#[derive(Clone, Debug)]
pub struct FiniteTree {
    ids: Vec<NodeId>,
    index: HashMap<NodeId, usize>,
    parent: Vec<Option<usize>>,
    children: Vec<Vec<usize>>,
    depth: Vec<u32>,
    tin: Vec<u32>,
    tout: Vec<u32>,
    size: Vec<u32>,
    sub_height: Vec<u32>,
    leaf_count: Vec<u32>,
}

impl PartialEq for FiniteTree {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len()
            && self.ids.iter().all(|&n| {
                other.contains(n) && self.parent(n).ok() == other.parent(n).ok()
            })
    }
}

impl FiniteTree {
    /// Builds a tree from `(node, parent)` events where `None` marks the root.
    /// Parents must precede their children.
    pub fn from_events<I>(events: I) -> Result<Self, TreeError>
    where
        I: IntoIterator<Item = (NodeId, Option<NodeId>)>,
    {
        let mut ids = Vec::new();
        let mut index: HashMap<NodeId, usize> = HashMap::new();
        let mut parent = Vec::new();
        let mut root: Option<NodeId> = None;
        for (node, par) in events {
            if index.contains_key(&node) {
                return Err(TreeError::DuplicateNode(node));
            }
            let p = match par {
                None => {
                    if let Some(r) = root {
                        return Err(TreeError::MultipleRoots(r, node));
                    }
                    root = Some(node);
                    None
                }
                Some(p) => match index.get(&p) {
                    Some(&pi) => Some(pi),
                    None => return Err(TreeError::OrphanParent { node, parent: p }),
                },
            };
            if root.is_none() {
                return Err(TreeError::NoRoot);
            }
            index.insert(node, ids.len());
            ids.push(node);
            parent.push(p);
        }
        if ids.is_empty() {
            return Err(TreeError::NoRoot);
        }
        Ok(Self::finish(ids, index, parent))
    }

    /// Builds a tree from a root and a parent map given in any order.
    pub fn from_parent_map(root: NodeId, parents: &HashMap<NodeId, NodeId>) -> Result<Self, TreeError> {
        let mut kids: HashMap<NodeId, Vec<NodeId>> = HashMap::new();
        for (&c, &p) in parents {
            if c == root {
                return Err(TreeError::MultipleRoots(root, c));
            }
            kids.entry(p).or_default().push(c);
        }
        let mut events = Vec::with_capacity(parents.len() + 1);
        events.push((root, None));
        let mut queue = VecDeque::from([root]);
        while let Some(n) = queue.pop_front() {
            if let Some(cs) = kids.get_mut(&n) {
                cs.sort();
                for &c in cs.iter() {
                    events.push((c, Some(n)));
                    queue.push_back(c);
                }
            }
        }
        if events.len() != parents.len() + 1 {
            let placed: std::collections::HashSet<NodeId> = events.iter().map(|e| e.0).collect();
            let (&c, &p) = parents
                .iter()
                .filter(|(c, _)| !placed.contains(c))
                .min()
                .expect("some node unplaced");
            return Err(TreeError::OrphanParent { node: c, parent: p });
        }
        Self::from_events(events)
    }

    /// A chain `ids[0] ≺ ids[1] ≺ …`.
    pub fn chain(ids: &[u64]) -> Self {
        let ev = ids
            .iter()
            .enumerate()
            .map(|(i, &n)| (NodeId(n), if i == 0 { None } else { Some(NodeId(ids[i - 1])) }));
        Self::from_events(ev).expect("chain ids must be distinct")
    }

    /// A root `0` with `k` leaf children `1..=k`.
    pub fn star(k: u64) -> Self {
        let ev = std::iter::once((NodeId(0), None)).chain((1..=k).map(|i| (NodeId(i), Some(NodeId(0)))));
        Self::from_events(ev).expect("star")
    }

    /// Uniform size in `1..=max_nodes`, each node's parent uniform among the earlier ones.
    pub fn random<R: rand::Rng>(rng: &mut R, max_nodes: usize) -> Self {
        let n = rng.gen_range(1..=max_nodes.max(1));
        let ev = (0..n).map(|i| (NodeId(i as u64), (i > 0).then(|| NodeId(rng.gen_range(0..i) as u64))));
        Self::from_events(ev.collect::<Vec<_>>()).expect("parents precede children")
    }

    fn finish(ids: Vec<NodeId>, index: HashMap<NodeId, usize>, parent: Vec<Option<usize>>) -> Self {
        let n = ids.len();
        let mut children = vec![Vec::new(); n];
        let mut depth = vec![0u32; n];
        for i in 0..n {
            if let Some(p) = parent[i] {
                children[p].push(i);
                depth[i] = depth[p] + 1;
            }
        }
        for c in children.iter_mut() {
            c.sort_by_key(|&i| ids[i]);
        }
        let mut size = vec![1u32; n];
        let mut sub_height = vec![0u32; n];
        let mut leaf_count = vec![0u32; n];
        // parents precede children, so a reverse sweep is a post-order
        for i in (0..n).rev() {
            if children[i].is_empty() {
                leaf_count[i] = 1;
            }
            if let Some(p) = parent[i] {
                size[p] += size[i];
                sub_height[p] = sub_height[p].max(sub_height[i] + 1);
                leaf_count[p] += leaf_count[i];
            }
        }
        let mut tin = vec![0u32; n];
        let mut tout = vec![0u32; n];
        let mut clock = 0u32;
        let mut stack: Vec<(usize, usize)> = vec![(0, 0)];
        tin[0] = 0;
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next < children[v].len() {
                let c = children[v][*next];
                *next += 1;
                clock += 1;
                tin[c] = clock;
                stack.push((c, 0));
            } else {
                tout[v] = clock;
                stack.pop();
            }
        }
        FiniteTree { ids, index, parent, children, depth, tin, tout, size, sub_height, leaf_count }
    }

    pub fn len(&self) -> usize {
        self.ids.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ids.is_empty()
    }

    pub fn root(&self) -> NodeId {
        self.ids[0]
    }

    pub fn contains(&self, n: NodeId) -> bool {
        self.index.contains_key(&n)
    }

    /// Node ids in insertion order (every parent before its children).
    pub fn nodes(&self) -> &[NodeId] {
        &self.ids
    }

    pub fn sorted_nodes(&self) -> Vec<NodeId> {
        let mut v = self.ids.clone();
        v.sort();
        v
    }

    pub fn idx(&self, n: NodeId) -> Result<usize, TreeError> {
        self.index.get(&n).copied().ok_or(TreeError::UnknownNode(n))
    }

    pub(crate) fn id(&self, i: usize) -> NodeId {
        self.ids[i]
    }
    pub(crate) fn parent_idx(&self, i: usize) -> Option<usize> {
        self.parent[i]
    }
    pub(crate) fn children_idx(&self, i: usize) -> &[usize] {
        &self.children[i]
    }
    pub(crate) fn size_idx(&self, i: usize) -> u32 {
        self.size[i]
    }
    pub(crate) fn sub_height_idx(&self, i: usize) -> u32 {
        self.sub_height[i]
    }
    pub(crate) fn leaves_idx(&self, i: usize) -> u32 {
        self.leaf_count[i]
    }
    pub(crate) fn leq_idx(&self, a: usize, b: usize) -> bool {
        self.tin[a] <= self.tin[b] && self.tout[b] <= self.tout[a]
    }

    /// Number of strict predecessors of `n`.
    pub fn height(&self, n: NodeId) -> Result<u32, TreeError> {
        Ok(self.depth[self.idx(n)?])
    }

    /// Height of the tree: the largest node height.
    pub fn tree_height(&self) -> u32 {
        self.sub_height[0]
    }

    pub fn parent(&self, n: NodeId) -> Result<Option<NodeId>, TreeError> {
        Ok(self.parent[self.idx(n)?].map(|p| self.ids[p]))
    }

    pub fn successors(&self, n: NodeId) -> Result<Vec<NodeId>, TreeError> {
        Ok(self.children[self.idx(n)?].iter().map(|&c| self.ids[c]).collect())
    }

    pub fn branching(&self, n: NodeId) -> Result<usize, TreeError> {
        Ok(self.children[self.idx(n)?].len())
    }

    pub fn max_branching(&self) -> usize {
        self.children.iter().map(|c| c.len()).max().unwrap_or(0)
    }

    pub fn is_leaf(&self, n: NodeId) -> Result<bool, TreeError> {
        Ok(self.children[self.idx(n)?].is_empty())
    }

    /// Leaves sorted by id.
    pub fn leaves(&self) -> Vec<NodeId> {
        let mut v: Vec<NodeId> =
            (0..self.len()).filter(|&i| self.children[i].is_empty()).map(|i| self.ids[i]).collect();
        v.sort();
        v
    }

    /// `n ⪯ m`.
    pub fn is_leq(&self, n: NodeId, m: NodeId) -> Result<bool, TreeError> {
        Ok(self.leq_idx(self.idx(n)?, self.idx(m)?))
    }

    pub fn comparable(&self, n: NodeId, m: NodeId) -> Result<bool, TreeError> {
        Ok(self.is_leq(n, m)? || self.is_leq(m, n)?)
    }

    /// Ancestor of `n` at height `h` (`n` itself when `h = height(n)`).
    pub fn ancestor_at(&self, n: NodeId, h: u32) -> Result<Option<NodeId>, TreeError> {
        let mut i = self.idx(n)?;
        if h > self.depth[i] {
            return Ok(None);
        }
        while self.depth[i] > h {
            i = self.parent[i].expect("non-root has parent");
        }
        Ok(Some(self.ids[i]))
    }

    /// Predecessors of `n` from the root up to and including `n`.
    pub fn chain_to(&self, n: NodeId) -> Result<Vec<NodeId>, TreeError> {
        let mut i = self.idx(n)?;
        let mut out = vec![self.ids[i]];
        while let Some(p) = self.parent[i] {
            out.push(self.ids[p]);
            i = p;
        }
        out.reverse();
        Ok(out)
    }

    /// Infimum (longest common predecessor) of two nodes.
    pub fn meet(&self, a: NodeId, b: NodeId) -> Result<NodeId, TreeError> {
        let mut i = self.idx(a)?;
        let j = self.idx(b)?;
        while !self.leq_idx(i, j) {
            i = self.parent[i].expect("root is below everything");
        }
        Ok(self.ids[i])
    }

    /// `{m : n ⪯ m}` with the inherited order.
    pub fn subtree(&self, n: NodeId) -> Result<FiniteTree, TreeError> {
        let r = self.idx(n)?;
        let mut events = vec![(n, None)];
        let mut queue = VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            for &c in &self.children[v] {
                events.push((self.ids[c], Some(self.ids[v])));
                queue.push_back(c);
            }
        }
        FiniteTree::from_events(events)
    }

    /// Subtrees rooted at the root's successors.
    pub fn components(&self) -> Vec<FiniteTree> {
        self.children[0]
            .iter()
            .map(|&c| self.subtree(self.ids[c]).expect("present"))
            .collect()
    }

    /// Keeps the nodes selected by `keep`; the kept set must contain the
    /// root and be closed downward.
    pub fn restrict(&self, keep: impl Fn(NodeId) -> bool) -> Result<FiniteTree, TreeError> {
        let mut events = Vec::new();
        for i in 0..self.len() {
            let n = self.ids[i];
            if !keep(n) {
                continue;
            }
            match self.parent[i] {
                None => events.push((n, None)),
                Some(p) => {
                    if !keep(self.ids[p]) {
                        return Err(TreeError::NotDownwardClosed(n));
                    }
                    events.push((n, Some(self.ids[p])));
                }
            }
        }
        FiniteTree::from_events(events)
    }

    /// Nodes in the subtree of `n` (including `n`), in breadth-first order.
    pub fn descendants(&self, n: NodeId) -> Result<Vec<NodeId>, TreeError> {
        let r = self.idx(n)?;
        let mut out = Vec::new();
        let mut queue = VecDeque::from([r]);
        while let Some(v) = queue.pop_front() {
            out.push(self.ids[v]);
            queue.extend(self.children[v].iter().copied());
        }
        Ok(out)
    }

    /// `(node, parent)` events in insertion order.
    pub fn events(&self) -> Vec<(NodeId, Option<NodeId>)> {
        (0..self.len()).map(|i| (self.ids[i], self.parent[i].map(|p| self.ids[p]))).collect()
    }

    /// AHU canonical string of the subtree at index `i`.
    pub(crate) fn canon_idx(&self, i: usize) -> String {
        let mut memo: Vec<Option<String>> = vec![None; self.len()];
        for v in (0..self.len()).rev() {
            if !self.leq_idx(i, v) {
                continue;
            }
            let mut parts: Vec<&str> =
                self.children[v].iter().map(|&c| memo[c].as_deref().expect("post-order")).collect();
            parts.sort_unstable();
            let mut s = String::with_capacity(2 + parts.iter().map(|p| p.len()).sum::<usize>());
            s.push('(');
            for p in parts {
                s.push_str(p);
            }
            s.push(')');
            memo[v] = Some(s);
        }
        memo[i].take().expect("computed")
    }

    /// Canonical form of the whole tree; equal strings iff isomorphic.
    pub fn canonical_form(&self) -> String {
        self.canon_idx(0)
    }

    pub fn is_isomorphic(&self, other: &FiniteTree) -> bool {
        self.len() == other.len() && self.canonical_form() == other.canonical_form()
    }
}

/// Shapes of the small components used by the isomorphism-hardened construction.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ComponentKind {
    A,
    B,
    C,
    D,
    Other,
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ComponentKind::A => "A",
            ComponentKind::B => "B",
            ComponentKind::C => "C",
            ComponentKind::D => "D",
            ComponentKind::Other => "Other",
        };
        f.write_str(s)
    }
}

impl ComponentKind {
    /// A representative tree with ids starting at `base`.
    pub fn shape(self, base: u64) -> Option<FiniteTree> {
        let b = |k: u64| NodeId(base + k);
        let ev: Vec<(NodeId, Option<NodeId>)> = match self {
            ComponentKind::A => vec![(b(0), None), (b(1), Some(b(0))), (b(2), Some(b(0)))],
            ComponentKind::B => {
                vec![(b(0), None), (b(1), Some(b(0))), (b(2), Some(b(0))), (b(3), Some(b(1)))]
            }
            ComponentKind::C => (0..4).map(|k| (b(k), if k == 0 { None } else { Some(b(0)) })).collect(),
            ComponentKind::D => (0..5).map(|k| (b(k), if k == 0 { None } else { Some(b(0)) })).collect(),
            ComponentKind::Other => return None,
        };
        Some(FiniteTree::from_events(ev).expect("fixed shape"))
    }
}

pub fn classify_component(t: &FiniteTree) -> ComponentKind {
    classify_at(t, 0)
}

pub(crate) fn classify_at(t: &FiniteTree, r: usize) -> ComponentKind {
    let kids = t.children_idx(r);
    let leaf = |i: usize| t.children_idx(i).is_empty();
    let all_leaves = kids.iter().all(|&c| leaf(c));
    match kids.len() {
        2 if all_leaves => ComponentKind::A,
        2 => {
            let mut leaves = 0;
            let mut one_leaf_child = 0;
            for &c in kids {
                let ck = t.children_idx(c);
                if ck.is_empty() {
                    leaves += 1;
                } else if ck.len() == 1 && leaf(ck[0]) {
                    one_leaf_child += 1;
                }
            }
            if leaves == 1 && one_leaf_child == 1 {
                ComponentKind::B
            } else {
                ComponentKind::Other
            }
        }
        3 if all_leaves => ComponentKind::C,
        4 if all_leaves => ComponentKind::D,
        _ => ComponentKind::Other,
    }
}

/// All rooted unlabeled trees with exactly `n ≥ 1` nodes, one per
/// isomorphism class, with ids `0..n` in breadth-first order.
pub fn all_shapes(n: usize) -> Vec<FiniteTree> {
    let mut memo: BTreeMap<usize, Vec<String>> = BTreeMap::new();
    shape_codes(n, &mut memo).iter().map(|c| tree_from_code(c)).collect()
}

fn shape_codes(n: usize, memo: &mut BTreeMap<usize, Vec<String>>) -> Vec<String> {
    if let Some(v) = memo.get(&n) {
        return v.clone();
    }
    let mut out = Vec::new();
    if n == 1 {
        out.push("()".to_string());
    } else {
        // forests of total size n-1 as nonincreasing sequences of (size, code)
        let mut pieces: Vec<(usize, String)> = Vec::new();
        for s in 1..n {
            for c in shape_codes(s, memo) {
                pieces.push((s, c));
            }
        }
        let mut acc = Vec::new();
        forests(&pieces, 0, n - 1, &mut acc, &mut out);
    }
    out.sort();
    out.dedup();
    memo.insert(n, out.clone());
    out
}

fn forests(pieces: &[(usize, String)], start: usize, left: usize, acc: &mut Vec<usize>, out: &mut Vec<String>) {
    if left == 0 {
        let mut parts: Vec<&str> = acc.iter().map(|&i| pieces[i].1.as_str()).collect();
        parts.sort_unstable();
        out.push(format!("({})", parts.concat()));
        return;
    }
    for i in start..pieces.len() {
        if pieces[i].0 <= left {
            acc.push(i);
            forests(pieces, i, left - pieces[i].0, acc, out);
            acc.pop();
        }
    }
}

fn tree_from_code(code: &str) -> FiniteTree {
    let mut events = Vec::new();
    let mut stack: Vec<NodeId> = Vec::new();
    let mut next = 0u64;
    for ch in code.chars() {
        if ch == '(' {
            let id = NodeId(next);
            next += 1;
            events.push((id, stack.last().copied()));
            stack.push(id);
        } else {
            stack.pop();
        }
    }
    FiniteTree::from_events(events).expect("well-formed code")
}

/// A finite binary string. `Ord` is shortlex: shorter first, then lexicographic.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct BinaryString(Vec<bool>);

impl BinaryString {
    pub fn empty() -> Self {
        BinaryString(Vec::new())
    }
    pub fn from_bits(bits: Vec<bool>) -> Self {
        BinaryString(bits)
    }
    pub fn bits(&self) -> &[bool] {
        &self.0
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
    pub fn push(&mut self, b: bool) {
        self.0.push(b);
    }
    pub fn extend_bits(&mut self, b: bool, count: usize) {
        self.0.extend(std::iter::repeat_n(b, count));
    }
    pub fn child(&self, b: bool) -> Self {
        let mut v = self.0.clone();
        v.push(b);
        BinaryString(v)
    }
    /// `σ′`: drop the last bit. `None` for the empty string.
    pub fn parent(&self) -> Option<Self> {
        if self.0.is_empty() {
            None
        } else {
            Some(BinaryString(self.0[..self.0.len() - 1].to_vec()))
        }
    }
    pub fn prefix(&self, len: usize) -> Self {
        BinaryString(self.0[..len.min(self.0.len())].to_vec())
    }
    pub fn is_prefix_of(&self, other: &Self) -> bool {
        self.0.len() <= other.0.len() && other.0[..self.0.len()] == self.0[..]
    }
    /// Longest common prefix.
    pub fn infimum(&self, other: &Self) -> Self {
        let k = self.0.iter().zip(&other.0).take_while(|(a, b)| a == b).count();
        self.prefix(k)
    }
}

impl Ord for BinaryString {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for BinaryString {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "\"{self}\"")
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("not a binary string: {0:?}")]
pub struct BadBinaryString(pub String);

impl FromStr for BinaryString {
    type Err = BadBinaryString;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                _ => Err(BadBinaryString(s.to_string())),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BinaryString)
    }
}

impl From<BinaryString> for String {
    fn from(b: BinaryString) -> String {
        b.to_string()
    }
}

impl TryFrom<String> for BinaryString {
    type Error = BadBinaryString;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        s.parse()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ev(v: &[(u64, Option<u64>)]) -> Vec<(NodeId, Option<NodeId>)> {
        v.iter().map(|&(a, b)| (NodeId(a), b.map(NodeId))).collect()
    }

    #[test]
    fn build_examples() {
        let t = FiniteTree::from_events(ev(&[(0, None)])).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.root(), NodeId(0));
        let t = FiniteTree::from_events(ev(&[(0, None), (2, Some(0)), (4, Some(0)), (6, Some(2))])).unwrap();
        assert_eq!(t.successors(NodeId(0)).unwrap(), vec![NodeId(2), NodeId(4)]);
        assert_eq!(t.parent(NodeId(6)).unwrap(), Some(NodeId(2)));
        assert_eq!(
            FiniteTree::from_events(ev(&[(0, None), (1, Some(5))])).unwrap_err(),
            TreeError::OrphanParent { node: NodeId(1), parent: NodeId(5) }
        );
        assert!(matches!(
            FiniteTree::from_events(ev(&[(0, None), (1, None)])),
            Err(TreeError::MultipleRoots(_, _))
        ));
        assert!(matches!(
            FiniteTree::from_events(ev(&[(0, None), (0, Some(0))])),
            Err(TreeError::DuplicateNode(_))
        ));
    }

    #[test]
    fn queries_on_chain_and_star() {
        let c = FiniteTree::chain(&[0, 1, 2]);
        assert_eq!(c.height(NodeId(2)).unwrap(), 2);
        assert_eq!(c.tree_height(), 2);
        assert_eq!(c.leaves(), vec![NodeId(2)]);
        assert!(c.is_leq(NodeId(0), NodeId(2)).unwrap());
        assert!(!c.is_leq(NodeId(2), NodeId(1)).unwrap());
        let s = FiniteTree::star(4);
        assert_eq!(s.branching(NodeId(0)).unwrap(), 4);
        let comps = s.components();
        assert_eq!(comps.len(), 4);
        assert!(comps.iter().all(|c| c.len() == 1));
        assert_eq!(s.height(NodeId(9)), Err(TreeError::UnknownNode(NodeId(9))));
        assert_eq!(s.meet(NodeId(1), NodeId(3)).unwrap(), NodeId(0));
    }

    #[test]
    fn classify_shapes() {
        for k in [ComponentKind::A, ComponentKind::B, ComponentKind::C, ComponentKind::D] {
            assert_eq!(classify_component(&k.shape(10).unwrap()), k);
        }
        // three leaves, one of them given a child
        let t = FiniteTree::from_events(ev(&[(0, None), (1, Some(0)), (2, Some(0)), (3, Some(0)), (4, Some(1))]))
            .unwrap();
        assert_eq!(classify_component(&t), ComponentKind::Other);
    }

    #[test]
    fn shape_counts_match_known_sequence() {
        let counts: Vec<usize> = (1..=7).map(|n| all_shapes(n).len()).collect();
        assert_eq!(counts, vec![1, 1, 2, 4, 9, 20, 48]);
    }

    #[test]
    fn classification_is_exhaustive_up_to_six_nodes() {
        // exactly one shape per kind A–D exists, everything else is Other
        let mut seen = BTreeMap::new();
        for n in 1..=6 {
            for t in all_shapes(n) {
                *seen.entry(classify_component(&t)).or_insert(0) += 1;
            }
        }
        assert_eq!(seen[&ComponentKind::A], 1);
        assert_eq!(seen[&ComponentKind::B], 1);
        assert_eq!(seen[&ComponentKind::C], 1);
        assert_eq!(seen[&ComponentKind::D], 1);
        assert_eq!(seen[&ComponentKind::Other], 1 + 1 + 2 + 4 + 9 + 20 - 4);
    }

    #[test]
    fn binary_string_order_and_prefixes() {
        let a: BinaryString = "0010".parse().unwrap();
        let b: BinaryString = "0001".parse().unwrap();
        assert_eq!(a.infimum(&b).to_string(), "00");
        assert!("00".parse::<BinaryString>().unwrap().is_prefix_of(&a));
        let mut v: Vec<BinaryString> = ["1", "", "00", "01", "0"].iter().map(|s| s.parse().unwrap()).collect();
        v.sort();
        let shown: Vec<String> = v.iter().map(|s| s.to_string()).collect();
        assert_eq!(shown, vec!["", "0", "1", "00", "01"]);
        assert_eq!(a.parent().unwrap().to_string(), "001");
        assert!(BinaryString::empty().parent().is_none());
        assert!("012".parse::<BinaryString>().is_err());
    }

    #[test]
    fn restrict_requires_downward_closure() {
        let c = FiniteTree::chain(&[0, 1, 2, 3]);
        let r = c.restrict(|n| n.0 <= 1).unwrap();
        assert_eq!(r.len(), 2);
        assert_eq!(c.restrict(|n| n.0 != 1).unwrap_err(), TreeError::NotDownwardClosed(NodeId(2)));
    }

    #[test]
    fn canonical_form_detects_isomorphism() {
        let a = FiniteTree::from_events(ev(&[(0, None), (5, Some(0)), (7, Some(0)), (9, Some(5))])).unwrap();
        let b = FiniteTree::from_events(ev(&[(1, None), (2, Some(1)), (3, Some(1)), (4, Some(3))])).unwrap();
        assert!(a.is_isomorphic(&b));
        assert!(!a.is_isomorphic(&FiniteTree::star(3)));
    }
}
