//! A binary branching tree with no c.e. chain or antichain among the listed
//! enumerations, built by finite injury.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use crate::report::Check;
use crate::stagewise::StagewiseTree;
use crate::tree::NodeId;

/// Replayable enumerations of node ids; each sees the tree at the start of a stage.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Enumerator {
    Empty,
    /// Always follows the smaller-id successor from the root.
    Leftmost,
    Rightmost,
    Leaves,
    All,
    /// Current leaves, but only from stage `from` on.
    LateLeaves { from: u64 },
}

impl Enumerator {
    pub const NAMES: [&'static str; 6] = ["empty", "leftmost", "rightmost", "leaves", "all", "late-leaves"];

    pub fn name(&self) -> &'static str {
        match self {
            Enumerator::Empty => "empty",
            Enumerator::Leftmost => "leftmost",
            Enumerator::Rightmost => "rightmost",
            Enumerator::Leaves => "leaves",
            Enumerator::All => "all",
            Enumerator::LateLeaves { .. } => "late-leaves",
        }
    }

    /// The six shipped enumerators, `LateLeaves` starting at stage 120.
    pub fn shipped() -> Vec<Enumerator> {
        vec![
            Enumerator::Empty,
            Enumerator::Leftmost,
            Enumerator::Leaves,
            Enumerator::Rightmost,
            Enumerator::All,
            Enumerator::LateLeaves { from: 120 },
        ]
    }

    fn visit(&self, t: &CacTree, s: u64) -> Vec<NodeId> {
        let branch = |pick: fn(&[NodeId]) -> NodeId| {
            let mut out = vec![t.root];
            let mut x = t.root;
            while let Some(ch) = t.children.get(&x) {
                x = pick(ch);
                out.push(x);
            }
            out
        };
        match self {
            Enumerator::Empty => Vec::new(),
            Enumerator::Leftmost => branch(|c| *c.iter().min().expect("pair")),
            Enumerator::Rightmost => branch(|c| *c.iter().max().expect("pair")),
            Enumerator::Leaves => t.leaves(),
            Enumerator::All => t.parent.keys().copied().collect(),
            Enumerator::LateLeaves { from } => {
                if s >= *from {
                    t.leaves()
                } else {
                    Vec::new()
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
struct CacTree {
    root: NodeId,
    parent: BTreeMap<NodeId, Option<NodeId>>,
    children: HashMap<NodeId, Vec<NodeId>>,
}

impl CacTree {
    fn new() -> Self {
        let parent = [(NodeId(0), None)].into_iter().collect();
        CacTree { root: NodeId(0), parent, children: HashMap::new() }
    }

    fn add(&mut self, node: NodeId, parent: NodeId) {
        self.parent.insert(node, Some(parent));
        self.children.entry(parent).or_default().push(node);
    }

    fn fresh(&self) -> NodeId {
        NodeId(self.parent.keys().next_back().map_or(0, |n| n.0 + 1))
    }

    fn leaves(&self) -> Vec<NodeId> {
        self.parent.keys().filter(|n| !self.children.contains_key(n)).copied().collect()
    }

    fn leq(&self, a: NodeId, mut b: NodeId) -> bool {
        loop {
            if a == b {
                return true;
            }
            match self.parent.get(&b).copied().flatten() {
                Some(p) => b = p,
                None => return false,
            }
        }
    }

    fn comparable(&self, a: NodeId, b: NodeId) -> bool {
        self.leq(a, b) || self.leq(b, a)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CacAction {
    /// Step 1 of an even requirement: a leaf pair is added.
    Extend,
    /// Step 1 of an odd requirement: its restraint is copied.
    Define,
    Succeed,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CacRecord {
    pub stage: u64,
    /// Enumerations first seen this stage, as `(e, node)`.
    pub enumerated: Vec<(usize, NodeId)>,
    pub actor: Option<usize>,
    pub action: Option<CacAction>,
    pub witness: Option<NodeId>,
    /// New nodes as `(node, parent)`, with the requirement that added them.
    pub added: Vec<(NodeId, NodeId, usize)>,
    pub initialized: Vec<usize>,
    /// Restraints after the stage, as `(requirement, node)`.
    pub restraints: Vec<(usize, NodeId)>,
    pub succeeded: Vec<usize>,
}

#[derive(Clone, Debug, Default)]
struct Req {
    r: Option<NodeId>,
    succeeded: bool,
}

pub struct CacRun {
    pub tree: StagewiseTree,
    pub trace: Vec<CacRecord>,
}

/// Runs stages `1..=horizon`. Requirements beyond the listed enumerators face
/// the empty set. With `fault`, the lowest-priority requirement adds a pair
/// below the leftmost leaf at that stage, ignoring every restraint.
pub fn cac_build(ws: &[Enumerator], horizon: u64, fault: Option<u64>) -> CacRun {
    let mut t = CacTree::new();
    let mut out = StagewiseTree::new(NodeId(0));
    let mut w: Vec<BTreeSet<NodeId>> = vec![BTreeSet::new(); ws.len()];
    let mut reqs: Vec<Req> = Vec::new();
    let mut trace = Vec::new();
    for s in 1..=horizon {
        let mut rec = CacRecord {
            stage: s,
            enumerated: Vec::new(),
            actor: None,
            action: None,
            witness: None,
            added: Vec::new(),
            initialized: Vec::new(),
            restraints: Vec::new(),
            succeeded: Vec::new(),
        };
        for (e, en) in ws.iter().enumerate() {
            for x in en.visit(&t, s) {
                if w[e].insert(x) {
                    rec.enumerated.push((e, x));
                }
            }
        }
        let mut i = 0;
        loop {
            if reqs.len() <= i {
                reqs.push(Req::default());
            }
            let e = i / 2;
            let empty = BTreeSet::new();
            let we = w.get(e).unwrap_or(&empty);
            let req = &reqs[i];
            if req.r.is_none() {
                if i % 2 == 0 {
                    let above = if i == 0 { t.root } else { reqs[i - 1].r.expect("higher restraint") };
                    let a = t.leaves().into_iter().find(|&l| t.leq(above, l)).expect("a leaf above");
                    let b = t.fresh();
                    let c = NodeId(b.0 + 1);
                    for n in [b, c] {
                        t.add(n, a);
                        out.attach(s, n, a).expect("fresh node");
                        rec.added.push((n, a, i));
                    }
                    reqs[i].r = Some(b);
                    rec.action = Some(CacAction::Extend);
                } else {
                    reqs[i].r = reqs[i - 1].r;
                    rec.action = Some(CacAction::Define);
                }
                break;
            }
            if !req.succeeded {
                let r = req.r.expect("defined");
                if let Some(&x) = we.iter().find(|&&x| t.parent.contains_key(&x) && t.leq(r, x)) {
                    let new_r = if i % 2 == 0 {
                        let z = t.parent[&x].expect("x lies above a restraint");
                        *t.children[&z].iter().find(|&&y| y != x).expect("binary")
                    } else {
                        x
                    };
                    reqs[i] = Req { r: Some(new_r), succeeded: true };
                    rec.action = Some(CacAction::Succeed);
                    rec.witness = Some(x);
                    break;
                }
            }
            i += 1;
        }
        rec.actor = Some(i);
        for j in i + 1..reqs.len() {
            if reqs[j].r.is_some() {
                rec.initialized.push(j);
            }
        }
        reqs.truncate(i + 1);
        if fault == Some(s) {
            let a = t.leaves()[0];
            let b = t.fresh();
            for n in [b, NodeId(b.0 + 1)] {
                t.add(n, a);
                out.attach(s, n, a).expect("fresh node");
                rec.added.push((n, a, reqs.len()));
            }
        }
        for (j, q) in reqs.iter().enumerate() {
            if let Some(r) = q.r {
                rec.restraints.push((j, r));
            }
            if q.succeeded {
                rec.succeeded.push(j);
            }
        }
        trace.push(rec);
    }
    out.set_horizon(horizon);
    CacRun { tree: out, trace }
}

/// How a requirement stands at the end of a trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum CacCase {
    /// The witness was enumerated and the restraint moved past it.
    Succeeded { witness: NodeId, restraint: NodeId, since: u64 },
    /// The restraint never moved and nothing enumerated lies above it.
    Stable { restraint: NodeId, since: u64 },
}

/// Audits a trace; `requirements` is how many requirements must be settled
/// (twice the number of enumerators).
pub fn cac_verify(trace: &[CacRecord], requirements: usize) -> (Vec<Check>, BTreeMap<usize, CacCase>) {
    let mut t = CacTree::new();
    let mut w: BTreeMap<usize, BTreeSet<NodeId>> = BTreeMap::new();
    let mut restraints: BTreeMap<usize, NodeId> = BTreeMap::new();
    // requirement -> (stage of last change, witness)
    let mut since: BTreeMap<usize, (u64, Option<NodeId>)> = BTreeMap::new();
    let mut added_at: Vec<(u64, NodeId)> = Vec::new();
    let mut branching = Vec::new();
    let mut discipline = Vec::new();
    let mut succeeded = BTreeSet::new();
    for rec in trace {
        let s = rec.stage;
        for &(e, x) in &rec.enumerated {
            w.entry(e).or_default().insert(x);
        }
        for &(n, p, by) in &rec.added {
            if !t.parent.contains_key(&p) || t.parent.contains_key(&n) {
                branching.push(format!("stage {s}: bad addition {n} under {p}"));
                continue;
            }
            for (&j, &r) in restraints.range(..by) {
                if !t.leq(r, p) {
                    discipline.push(format!("stage {s}: {n} added by R{by} outside the restraint {r} of R{j}"));
                }
            }
            t.add(n, p);
            added_at.push((s, n));
        }
        for p in rec.added.iter().map(|a| a.1).collect::<BTreeSet<_>>() {
            let k = t.children.get(&p).map_or(0, Vec::len);
            if k != 2 {
                branching.push(format!("stage {s}: {p} has {k} successors"));
            }
        }
        let next: BTreeMap<usize, NodeId> = rec.restraints.iter().copied().collect();
        for (&j, &r) in &next {
            let won = rec.action == Some(CacAction::Succeed) && rec.actor == Some(j);
            if won || restraints.get(&j) != Some(&r) {
                since.insert(j, (s, if won { rec.witness } else { None }));
            }
        }
        since.retain(|j, _| next.contains_key(j));
        restraints = next;
        succeeded = rec.succeeded.iter().copied().collect();
    }
    let mut cases = BTreeMap::new();
    let mut case_failures = Vec::new();
    for i in 0..requirements {
        let (Some(&r), Some(&(s0, witness))) = (restraints.get(&i), since.get(&i)) else {
            case_failures.push(format!("R{i}: no restraint at the horizon"));
            continue;
        };
        let we = w.get(&(i / 2)).cloned().unwrap_or_default();
        let escaped: Vec<String> =
            added_at.iter().filter(|(s, n)| *s > s0 && !t.leq(r, *n)).map(|x| x.1.to_string()).collect();
        if !escaped.is_empty() {
            case_failures.push(format!("R{i}: nodes {} added after stage {s0} outside {r}", escaped.join(",")));
        }
        let case = match (succeeded.contains(&i), witness) {
            (true, Some(x)) => {
                let cert = if i % 2 == 0 { !t.comparable(x, r) } else { x == r };
                if !we.contains(&x) || !cert {
                    case_failures.push(format!("R{i}: witness {x} does not certify restraint {r}"));
                }
                CacCase::Succeeded { witness: x, restraint: r, since: s0 }
            }
            (true, None) => {
                case_failures.push(format!("R{i}: succeeded without a witness"));
                continue;
            }
            (false, _) => {
                if let Some(x) = we.iter().find(|&&x| t.parent.contains_key(&x) && t.leq(r, x)) {
                    case_failures.push(format!("R{i}: {x} was enumerated above the stable restraint {r}"));
                }
                CacCase::Stable { restraint: r, since: s0 }
            }
        };
        cases.insert(i, case);
    }
    let checks = vec![
        Check::from_failures("binary_branching", &branching, "every node is a leaf or has exactly two successors"),
        Check::from_failures("restraint_discipline", &discipline, "every addition respects higher-priority restraints"),
        Check::from_failures(
            "requirement_cases",
            &case_failures,
            format!("{requirements} requirements each settled in one certified case"),
        ),
    ];
    (checks, cases)
}

/// The tree a trace describes.
pub fn final_tree(trace: &[CacRecord]) -> StagewiseTree {
    let mut out = StagewiseTree::new(NodeId(0));
    for rec in trace {
        for &(n, p, _) in &rec.added {
            let _ = out.attach(rec.stage, n, p);
        }
    }
    out.set_horizon(trace.last().map_or(0, |r| r.stage));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_empty_is_a_spine() {
        let run = cac_build(&[Enumerator::Empty, Enumerator::Empty], 40, None);
        let (checks, cases) = cac_verify(&run.trace, 4);
        assert!(checks.iter().all(Check::passed), "{checks:?}");
        assert!(cases.values().all(|c| matches!(c, CacCase::Stable { .. })));
        let t = run.tree.final_tree();
        assert_eq!(t.max_branching(), 2);
        assert_eq!(t.len(), 2 * 20 + 1);
    }

    #[test]
    fn leftmost_chain_is_avoided() {
        let run = cac_build(&[Enumerator::Leftmost], 60, None);
        let (checks, cases) = cac_verify(&run.trace, 2);
        assert!(checks.iter().all(Check::passed), "{checks:?}");
        let CacCase::Succeeded { witness, restraint, .. } = cases[&0] else { panic!("{:?}", cases[&0]) };
        let t = run.tree.final_tree();
        assert!(!t.comparable(witness, restraint).unwrap());
    }

    #[test]
    fn leaves_antichain_is_blocked() {
        let run = cac_build(&[Enumerator::Empty, Enumerator::Leaves], 60, None);
        let (checks, cases) = cac_verify(&run.trace, 4);
        assert!(checks.iter().all(Check::passed), "{checks:?}");
        assert!(matches!(cases[&3], CacCase::Succeeded { witness, restraint, .. } if witness == restraint));
    }

    #[test]
    fn fault_breaks_discipline() {
        let run = cac_build(&Enumerator::shipped(), 200, Some(150));
        let (checks, _) = cac_verify(&run.trace, 12);
        let failed: Vec<&str> = checks.iter().filter(|c| !c.passed()).map(|c| c.name.as_str()).collect();
        assert!(failed.contains(&"restraint_discipline"), "{checks:?}");
    }
}
