//! From a nontrivial self-embedding of a binary branching tree to a function
//! dominating its branching levels, and from there to finiteness verdicts.

use std::collections::HashMap;
use std::fmt::Debug;
use std::hash::Hash;

use serde::Serialize;

use super::{AnalysisError, Type3Embedding};
use crate::codings::type3::Type3Truth;
use crate::oracles::CeFamily;
use crate::tree::{BinaryString, NodeId};
use crate::Embedding;

/// A tree with a self-map, a prefix structure and branching answers.
pub trait WalkSpace {
    type Node: Clone + Eq + Hash + Debug;

    fn height(&self, x: &Self::Node) -> usize;
    /// The predecessor of `x` at height `h ≤ height(x)`.
    fn prefix(&self, x: &Self::Node, h: usize) -> Self::Node;
    fn map(&self, x: &Self::Node) -> Result<Self::Node, AnalysisError>;
    fn is_branching(&self, x: &Self::Node) -> Result<bool, AnalysisError>;
    /// Successor `b` of a branching node.
    fn child(&self, x: &Self::Node, b: bool) -> Result<Self::Node, AnalysisError>;
    /// Where to look for a node that grows, in search order.
    fn candidates(&self) -> Vec<Self::Node>;

    fn is_proper_prefix(&self, x: &Self::Node, y: &Self::Node) -> bool {
        let h = self.height(x);
        h < self.height(y) && &self.prefix(y, h) == x
    }

    fn infimum(&self, x: &Self::Node, y: &Self::Node) -> Self::Node {
        let top = self.height(x).min(self.height(y));
        let mut h = 0;
        while h < top && self.prefix(x, h + 1) == self.prefix(y, h + 1) {
            h += 1;
        }
        self.prefix(x, h)
    }

    fn map_n(&self, x: &Self::Node, n: usize) -> Result<Self::Node, AnalysisError> {
        let mut y = x.clone();
        for i in 0..n {
            y = self.map(&y).map_err(|e| match e {
                AnalysisError::EscapesHorizon { .. } => AnalysisError::EscapesHorizon { reached: i },
                e => e,
            })?;
        }
        Ok(y)
    }
}

/// A frozen-tree embedding; branching answers come from a caller predicate.
pub struct EmbeddingSpace<'a> {
    pub delta: &'a Embedding,
    pub branching: Box<dyn Fn(NodeId) -> bool + 'a>,
}

impl WalkSpace for EmbeddingSpace<'_> {
    type Node = NodeId;

    fn height(&self, x: &NodeId) -> usize {
        self.delta.target.height(*x).map_or(0, |h| h as usize)
    }

    fn prefix(&self, x: &NodeId, h: usize) -> NodeId {
        self.delta.target.ancestor_at(*x, h as u32).ok().flatten().unwrap_or(*x)
    }

    fn map(&self, x: &NodeId) -> Result<NodeId, AnalysisError> {
        self.delta.get(*x).ok_or(AnalysisError::EscapesHorizon { reached: 0 })
    }

    fn is_branching(&self, x: &NodeId) -> Result<bool, AnalysisError> {
        Ok((self.branching)(*x))
    }

    fn child(&self, x: &NodeId, b: bool) -> Result<NodeId, AnalysisError> {
        let s = self.delta.target.successors(*x)?;
        s.get(b as usize).copied().ok_or(AnalysisError::EscapesHorizon { reached: 0 })
    }

    fn candidates(&self) -> Vec<NodeId> {
        let t = &self.delta.source;
        let mut v = t.sorted_nodes();
        v.sort_by_key(|&x| (t.height(x).unwrap_or(u32::MAX), x));
        v
    }
}

/// Strings under `α = φ ∘ β`, branching answered from the declared levels.
pub struct StringSpace<'a> {
    pub alpha: &'a Type3Embedding,
    pub truth: &'a Type3Truth,
    pub domain: Vec<BinaryString>,
}

impl WalkSpace for StringSpace<'_> {
    type Node = BinaryString;

    fn height(&self, x: &BinaryString) -> usize {
        x.len()
    }

    fn prefix(&self, x: &BinaryString, h: usize) -> BinaryString {
        x.prefix(h)
    }

    fn map(&self, x: &BinaryString) -> Result<BinaryString, AnalysisError> {
        self.alpha.apply(x)
    }

    fn is_branching(&self, x: &BinaryString) -> Result<bool, AnalysisError> {
        Ok(self.truth.is_branching(x)?)
    }

    fn child(&self, x: &BinaryString, b: bool) -> Result<BinaryString, AnalysisError> {
        Ok(x.child(b))
    }

    fn candidates(&self) -> Vec<BinaryString> {
        let mut v = self.domain.clone();
        v.sort();
        v
    }

    fn infimum(&self, x: &BinaryString, y: &BinaryString) -> BinaryString {
        x.infimum(y)
    }
}

/// `(ξ, k)` with `ξ ⊊ δ^k(ξ)`: start from a node `μ₀` that `δ` lifts, then
/// follow `μ_{i+1} = δ(μ_i)` cut to height `|μ₀|` until a value repeats.
pub fn find_expanding_node<S: WalkSpace>(space: &S, max_steps: usize) -> Result<(S::Node, usize), AnalysisError> {
    let mut mu0 = None;
    for x in space.candidates() {
        match space.map(&x) {
            Ok(y) if space.height(&y) > space.height(&x) => {
                mu0 = Some(x);
                break;
            }
            Ok(_) | Err(AnalysisError::EscapesHorizon { .. }) => {}
            Err(e) => return Err(e),
        }
    }
    let mu0 = mu0.ok_or(AnalysisError::NoGrowingNode)?;
    let level = space.height(&mu0);
    let mut seen: HashMap<S::Node, usize> = HashMap::new();
    let mut mu = mu0;
    for n in 0..max_steps {
        if let Some(&i) = seen.get(&mu) {
            let k = n - i;
            let xi = mu;
            let img = space.map_n(&xi, k)?;
            if !space.is_proper_prefix(&xi, &img) {
                return Err(AnalysisError::Precondition(format!("{xi:?} is not below its {k}-th image")));
            }
            return Ok((xi, k));
        }
        seen.insert(mu.clone(), n);
        let img = space.map(&mu)?;
        if space.height(&img) < level {
            return Err(AnalysisError::Precondition("map lowers a node".into()));
        }
        mu = space.prefix(&img, level);
    }
    Err(AnalysisError::EscapesHorizon { reached: max_steps })
}

/// Branching nodes interleaved with iterates of `ι = (δ^k)²`.
#[derive(Clone, Debug, Serialize)]
pub struct DominatingWitness<N> {
    pub xi: N,
    pub k: usize,
    /// `α = γ^{j-1}(ξ)` with `γ = δ^k`.
    pub j: usize,
    pub alpha: N,
    /// `ι^n(α)` for `n = 0..=levels`.
    pub iota_alpha: Vec<N>,
    pub beta_chain: Vec<N>,
    /// `c(n) = |ι^{n+1}(α)|`.
    pub c: Vec<usize>,
}

impl<N: Clone + Eq + Hash + Debug> DominatingWitness<N> {
    /// Re-checks `ι^n(α) ⊊ β_n ⊊ ι^{n+1}(α)` with `β_n` branching and `c` consistent.
    pub fn violations<S: WalkSpace<Node = N>>(&self, space: &S) -> Vec<String> {
        let mut out = Vec::new();
        for (n, b) in self.beta_chain.iter().enumerate() {
            let (lo, hi) = (&self.iota_alpha[n], &self.iota_alpha[n + 1]);
            if !space.is_proper_prefix(lo, b) {
                out.push(format!("ι^{n}(α) is not strictly below β_{n}"));
            }
            if !space.is_proper_prefix(b, hi) {
                out.push(format!("β_{n} is not strictly below ι^{}(α)", n + 1));
            }
            if !space.is_branching(b).unwrap_or(false) {
                out.push(format!("β_{n} is not branching"));
            }
            if self.c.get(n) != Some(&space.height(hi)) {
                out.push(format!("c({n}) disagrees with the iterate"));
            }
        }
        out
    }
}

/// Builds `levels` entries of the dominating sequence; `max_j` bounds the
/// search for the first branching node between consecutive iterates.
pub fn branching_walk<S: WalkSpace>(
    space: &S,
    levels: usize,
    max_j: usize,
    max_steps: usize,
) -> Result<DominatingWitness<S::Node>, AnalysisError> {
    let (xi, k) = find_expanding_node(space, max_steps)?;
    let gamma = |x: &S::Node| space.map_n(x, k);
    let iota = |x: &S::Node| space.map_n(x, 2 * k);
    let mut lo = gamma(&xi)?;
    let mut prev = xi.clone();
    let mut found = None;
    for j in 1..=max_j {
        let hi = gamma(&lo)?;
        for h in space.height(&lo)..space.height(&hi) {
            let b = space.prefix(&hi, h);
            if space.is_branching(&b)? {
                found = Some((j, prev.clone(), b));
                break;
            }
        }
        if found.is_some() {
            break;
        }
        prev = lo;
        lo = hi;
    }
    let (j, alpha, beta0) = found.ok_or(AnalysisError::NoBranchingFound(max_j))?;
    let mut iota_alpha = vec![alpha.clone()];
    let mut beta_chain = vec![beta0];
    let mut c = Vec::new();
    for n in 0..levels {
        let next = iota(&iota_alpha[n])?;
        c.push(space.height(&next));
        iota_alpha.push(next);
        if n + 1 < levels {
            let b = &beta_chain[n];
            let left = iota(&space.child(b, false)?)?;
            let right = iota(&space.child(b, true)?)?;
            beta_chain.push(space.infimum(&left, &right));
        }
    }
    let w = DominatingWitness { xi, k, j, alpha, iota_alpha, beta_chain, c };
    let bad = w.violations(space);
    if !bad.is_empty() {
        return Err(AnalysisError::Precondition(bad.join("; ")));
    }
    Ok(w)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Finiteness {
    Finite,
    Infinite,
}

/// `A_n` is declared finite iff the schedule has no `A_n` event after `c(n)`.
pub fn decode_jump(c: &[u64], family: &CeFamily) -> Vec<Finiteness> {
    c.iter()
        .enumerate()
        .map(|(n, &bound)| if family.has_event_after(n, bound) { Finiteness::Infinite } else { Finiteness::Finite })
        .collect()
}

/// A dominating witness on a type-3 tree and the finiteness verdicts read from it.
#[derive(Clone, Debug)]
pub struct JumpDecoding {
    pub witness: DominatingWitness<BinaryString>,
    pub verdicts: Vec<Finiteness>,
}

/// Walks `α = φ ∘ β` over `domain` with branching answered by `truth`, and
/// decodes `A_0 … A_{levels-1}` from `c`. `truth` must declare enough levels
/// to cover `|ι^{levels}(α)|`.
pub fn jump_decode(
    truth: &Type3Truth,
    domain: Vec<BinaryString>,
    family: &CeFamily,
    levels: usize,
) -> Result<JumpDecoding, AnalysisError> {
    let alpha = Type3Embedding::new(truth.clone())?;
    let space = StringSpace { alpha: &alpha, truth, domain };
    let witness = branching_walk(&space, levels, 20, 1000)?;
    let c: Vec<u64> = witness.c.iter().map(|&x| x as u64).collect();
    let verdicts = decode_jump(&c, family);
    Ok(JumpDecoding { witness, verdicts })
}
