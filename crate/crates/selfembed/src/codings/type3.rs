//! A c.e. subtree of binary strings whose branching levels follow the
//! approximation stack, tracked exactly up to a fixed depth.

use std::collections::{BTreeMap, HashMap, HashSet};

use super::CodingError;
use crate::oracles::ApproxStack;
use crate::stagewise::{GroundTruth, StagewiseTree};
use crate::tree::{BinaryString, FiniteTree, NodeId};

/// `0^{a(0)} σ(0) 0^{a(1)} σ(1) … 0^{a(n)} σ(n)` for given padding lengths.
pub fn tau_from(a: &[u64], sigma: &BinaryString) -> Result<BinaryString, CodingError> {
    if sigma.len() != a.len() {
        return Err(CodingError::BadSigmaLength { got: sigma.len(), expected: a.len() });
    }
    let mut out = BinaryString::empty();
    for (&pad, &bit) in a.iter().zip(sigma.bits()) {
        out.extend_bits(false, pad as usize);
        out.push(bit);
    }
    Ok(out)
}

/// `τ_{n,s}^σ`.
pub fn tau_string(stack: &ApproxStack, n: usize, s: u64, sigma: &BinaryString) -> Result<BinaryString, CodingError> {
    if n > stack.n_max() {
        return Err(CodingError::Precondition(format!("stack tracks n ≤ {}", stack.n_max())));
    }
    let a: Vec<u64> = (0..=n).map(|i| stack.a_stage(i, s)).collect();
    tau_from(&a, sigma)
}

/// A string of length at most 63, bit `i` at position `i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
struct Short {
    len: u8,
    bits: u64,
}

impl Short {
    const ROOT: Short = Short { len: 0, bits: 0 };

    fn from_string(s: &BinaryString) -> Option<Short> {
        if s.len() > 63 {
            return None;
        }
        let bits = s.bits().iter().enumerate().fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i));
        Some(Short { len: s.len() as u8, bits })
    }

    fn to_string(self) -> BinaryString {
        BinaryString::from_bits((0..self.len).map(|i| self.bits >> i & 1 == 1).collect())
    }

    fn child(self, b: bool) -> Short {
        Short { len: self.len + 1, bits: self.bits | ((b as u64) << self.len) }
    }

    fn prefix(self, len: u8) -> Short {
        let mask = if len >= 64 { u64::MAX } else { (1u64 << len) - 1 };
        Short { len, bits: self.bits & mask }
    }

    fn is_prefix_of(self, other: Short) -> bool {
        self.len <= other.len && other.prefix(self.len) == self
    }

    /// Shortlex position, used to order nodes within a stage.
    fn shortlex_key(self) -> (u8, u64) {
        (self.len, self.bits.reverse_bits())
    }
}

#[derive(Clone, Debug)]
enum StageAdd {
    /// Every new string extends some `τ` at least `depth` long: the strings
    /// added below the cut are exactly those that are 0 off `free`.
    Pattern { free: u64 },
    /// Short `τ`s: the new strings themselves.
    Explicit { added: Vec<Short> },
}

/// The enumeration cut at string length `depth`.
#[derive(Clone, Debug)]
pub struct Type3Tree {
    depth: usize,
    horizon: u64,
    /// `stages[t-1]` describes what stage `t` adds.
    stages: Vec<StageAdd>,
    /// Every string of length `≤ depth` in `T_horizon`, with the stage it appeared.
    first_seen: HashMap<Short, u64>,
}

impl Type3Tree {
    /// Runs stages `1..=horizon`. Stage `s+1` adds, for each `σ` of length
    /// `s+1`, the shortlex-least extension of `τ_{s,s}^σ` not yet present.
    pub fn build(stack: &ApproxStack, horizon: u64, depth: usize) -> Result<Self, CodingError> {
        if depth > 62 || depth == 0 {
            return Err(CodingError::Precondition("depth must lie in 1..=62".into()));
        }
        if stack.n_max() < depth {
            return Err(CodingError::Precondition(format!("stack must track n ≥ {depth}")));
        }
        if horizon > stack.horizon() {
            return Err(CodingError::HorizonTooSmall { needed: horizon, horizon: stack.horizon() });
        }
        let mut tree = Type3Tree { depth, horizon, stages: Vec::new(), first_seen: HashMap::new() };
        let mut seen_patterns: HashSet<u64> = HashSet::new();
        for t in 1..=horizon {
            let s = t - 1;
            let mut free = 0u64;
            let mut pos = 0u64;
            let mut long = false;
            let mut pads = Vec::new();
            for i in 0..=s as usize {
                let a = stack.a_stage(i, s);
                pads.push(a);
                pos += a;
                if pos >= depth as u64 {
                    long = true;
                    break;
                }
                free |= 1 << pos;
                pos += 1;
            }
            if pos >= depth as u64 {
                long = true;
            }
            if long {
                if seen_patterns.insert(free) {
                    tree.add_pattern(free, t);
                }
                tree.stages.push(StageAdd::Pattern { free });
            } else {
                let added = tree.add_explicit(&pads, t)?;
                tree.stages.push(StageAdd::Explicit { added });
            }
        }
        Ok(tree)
    }

    fn insert_with_prefixes(&mut self, x: Short, t: u64) {
        for l in 0..=x.len {
            self.first_seen.entry(x.prefix(l)).or_insert(t);
        }
    }

    fn add_pattern(&mut self, free: u64, t: u64) {
        let mut stack = vec![Short::ROOT];
        while let Some(x) = stack.pop() {
            self.first_seen.entry(x).or_insert(t);
            if (x.len as usize) < self.depth {
                stack.push(x.child(false));
                if free >> x.len & 1 == 1 {
                    stack.push(x.child(true));
                }
            }
        }
    }

    fn add_explicit(&mut self, pads: &[u64], t: u64) -> Result<Vec<Short>, CodingError> {
        let n = pads.len();
        let mut added = Vec::with_capacity(1 << n);
        for code in 0..(1u64 << n) {
            let sigma = BinaryString::from_bits((0..n).map(|i| code >> (n - 1 - i) & 1 == 1).collect());
            let tau = Short::from_string(&tau_from(pads, &sigma)?).expect("shorter than depth");
            let alpha = self.least_fresh_extension(tau)?;
            added.push(alpha);
        }
        for &a in &added {
            self.insert_with_prefixes(a, t);
        }
        Ok(added)
    }

    fn least_fresh_extension(&self, tau: Short) -> Result<Short, CodingError> {
        for extra in 0..=(self.depth - tau.len as usize) as u8 {
            for tail in 0..(1u64 << extra) {
                // lexicographic order on the tail: first appended bit is most significant
                let mut x = tau;
                for i in (0..extra).rev() {
                    x = x.child(tail >> i & 1 == 1);
                }
                if !self.first_seen.contains_key(&x) {
                    return Ok(x);
                }
            }
        }
        Err(CodingError::Precondition(format!("no fresh extension of {} below depth {}", tau.to_string(), self.depth)))
    }

    pub fn depth(&self) -> usize {
        self.depth
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    /// Stage at which `x` appeared, for `|x| ≤ depth`.
    pub fn first_stage(&self, x: &BinaryString) -> Option<u64> {
        Short::from_string(x).and_then(|k| self.first_seen.get(&k).copied())
    }

    pub fn contains_at(&self, x: &BinaryString, s: u64) -> bool {
        self.first_stage(x).is_some_and(|t| t <= s)
    }

    /// Does stage `t` add a string extending `x` (so `T(x)` grows)?
    pub fn grows_at(&self, x: &BinaryString, t: u64) -> bool {
        let Some(k) = Short::from_string(x) else { return false };
        if k.len as usize > self.depth || t == 0 || t > self.horizon {
            return false;
        }
        match &self.stages[t as usize - 1] {
            StageAdd::Pattern { free } => {
                let mask = if k.len == 0 { 0 } else { (1u64 << k.len) - 1 };
                k.bits & mask & !free == 0
            }
            StageAdd::Explicit { added } => added.iter().any(|&a| k.is_prefix_of(a)),
        }
    }

    /// Stages in `(after, horizon]` at which `T(x)` grows.
    pub fn growth_stages(&self, x: &BinaryString, after: u64) -> Vec<u64> {
        (after + 1..=self.horizon).filter(|&t| self.grows_at(x, t)).collect()
    }

    /// Both children gain nodes at `≥ min_growth` stages after `after`.
    pub fn looks_branching(&self, x: &BinaryString, after: u64, min_growth: usize) -> bool {
        x.len() < self.depth
            && [false, true].iter().all(|&b| {
                let c = x.child(b);
                self.contains_at(&c, self.horizon) && self.growth_stages(&c, after).len() >= min_growth
            })
    }

    /// Nodes of length `≤ depth` in `T_s`, ordered by appearance then shortlex.
    pub fn nodes_at(&self, s: u64) -> Vec<BinaryString> {
        let mut v: Vec<(u64, Short)> = self.first_seen.iter().filter(|(_, &t)| t <= s).map(|(&k, &t)| (t, k)).collect();
        v.sort_by_key(|&(t, k)| (t, k.shortlex_key()));
        v.into_iter().map(|(_, k)| k.to_string()).collect()
    }

    /// The cut tree as a stagewise presentation over enumeration indices.
    pub fn presentation(&self) -> Result<(StagewiseTree, Vec<BinaryString>), CodingError> {
        let strings = self.nodes_at(self.horizon);
        let stages: Vec<u64> = strings.iter().map(|x| self.first_stage(x).expect("listed")).collect();
        let rel = relabel_computable(&strings)?;
        let mut p = StagewiseTree::new(NodeId(0));
        for (i, x) in strings.iter().enumerate().skip(1) {
            let parent = rel.index[&x.parent().expect("not root")];
            p.attach(stages[i], NodeId(i as u64), NodeId(parent as u64))?;
        }
        p.set_horizon(self.horizon);
        p.set_truth(GroundTruth::default());
        Ok((p, strings))
    }
}

/// Declared facts about the limit tree: the padding lengths `a(n)`.
#[derive(Clone, Debug)]
pub struct Type3Truth {
    /// `b(n)`, the `n`th branching level.
    levels: Vec<u64>,
}

impl Type3Truth {
    pub fn from_stack(stack: &ApproxStack, n_max: usize) -> Self {
        // running max keeps this linear in n_max
        let mut f = 0;
        let mut a = Vec::with_capacity(n_max + 1);
        for i in 0..=n_max {
            f = f.max(stack.family().last_event_of_finite(i));
            a.push(f.max(stack.h_true(i)));
        }
        Self::from_padding(&a)
    }

    pub fn from_padding(a: &[u64]) -> Self {
        let mut levels = Vec::with_capacity(a.len());
        let mut pos = 0;
        for &x in a {
            pos += x;
            levels.push(pos);
            pos += 1;
        }
        Type3Truth { levels }
    }

    /// The levels below `len` must all be declared.
    fn covered(&self, len: usize) -> bool {
        self.levels.last().is_some_and(|&b| b as usize + 1 >= len)
    }

    pub fn levels(&self) -> &[u64] {
        &self.levels
    }

    pub fn is_level(&self, p: usize) -> bool {
        self.levels.binary_search(&(p as u64)).is_ok()
    }

    /// `T(x)` infinite iff `x` is 0 everywhere except at branching levels.
    pub fn is_infinite(&self, x: &BinaryString) -> Result<bool, CodingError> {
        if !self.covered(x.len()) {
            return Err(CodingError::HorizonTooSmall { needed: x.len() as u64, horizon: self.max_len() as u64 });
        }
        Ok(x.bits().iter().enumerate().all(|(p, &b)| !b || self.is_level(p)))
    }

    pub fn is_branching(&self, x: &BinaryString) -> Result<bool, CodingError> {
        Ok(self.is_infinite(x)? && self.is_level(x.len()))
    }

    /// Longest string the declared levels cover.
    pub fn max_len(&self) -> usize {
        self.levels.last().map_or(0, |&b| b as usize + 1)
    }

    /// Shortest branching node extending `x` (possibly `x` itself).
    pub fn next_branching(&self, x: &BinaryString) -> Result<BinaryString, CodingError> {
        if !self.is_infinite(x)? {
            return Err(CodingError::Precondition(format!("{x} has a finite subtree")));
        }
        let mut y = x.clone();
        while !self.is_level(y.len()) {
            y.push(false);
            if !self.covered(y.len()) {
                return Err(CodingError::HorizonTooSmall { needed: y.len() as u64, horizon: self.max_len() as u64 });
            }
        }
        Ok(y)
    }
}

/// Result of relabeling a string enumeration by enumeration index.
#[derive(Clone, Debug)]
pub struct Relabeled {
    pub tree: FiniteTree,
    pub strings: Vec<BinaryString>,
    pub index: BTreeMap<BinaryString, usize>,
}

impl Relabeled {
    /// `m` is a successor of `n` iff `string(m)' = string(n)`.
    pub fn is_successor(&self, n: NodeId, m: NodeId) -> Option<bool> {
        let a = self.strings.get(n.0 as usize)?;
        let b = self.strings.get(m.0 as usize)?;
        Some(b.parent().as_ref() == Some(a))
    }

    pub fn leq(&self, n: NodeId, m: NodeId) -> Option<bool> {
        Some(self.strings.get(n.0 as usize)?.is_prefix_of(self.strings.get(m.0 as usize)?))
    }
}

/// Node `n` is the `n`th enumerated string; the order is string extension.
/// The enumeration must list every string after its initial segments.
pub fn relabel_computable(strings: &[BinaryString]) -> Result<Relabeled, CodingError> {
    let mut index = BTreeMap::new();
    let mut events = Vec::with_capacity(strings.len());
    for (i, x) in strings.iter().enumerate() {
        if index.insert(x.clone(), i).is_some() {
            return Err(CodingError::DuplicateString(x.to_string()));
        }
        let parent = match x.parent() {
            None => None,
            Some(p) => Some(NodeId(*index.get(&p).ok_or_else(|| {
                CodingError::Precondition(format!("{x} enumerated before its initial segment {p}"))
            })? as u64)),
        };
        events.push((NodeId(i as u64), parent));
    }
    Ok(Relabeled { tree: FiniteTree::from_events(events)?, strings: strings.to_vec(), index })
}
