//! Height-four trees kept as lists of small component shapes.

use serde::{Deserialize, Serialize};

use crate::stagewise::{GroundTruth, StagewiseTree};
use crate::tree::{ComponentKind, NodeId, TreeError};

pub(crate) fn rank(k: ComponentKind) -> usize {
    match k {
        ComponentKind::A => 0,
        ComponentKind::B => 1,
        ComponentKind::C => 2,
        ComponentKind::D => 3,
        ComponentKind::Other => 4,
    }
}

/// A level-one subtree: its small components in creation order.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Component {
    subs: Vec<ComponentKind>,
    counts: [usize; 5],
}

impl Component {
    /// One A, one B and `k` D's.
    pub fn born(k: usize) -> Self {
        let mut c = Component::default();
        c.push(ComponentKind::A);
        c.push(ComponentKind::B);
        for _ in 0..k {
            c.push(ComponentKind::D);
        }
        c
    }

    pub fn subs(&self) -> &[ComponentKind] {
        &self.subs
    }

    pub fn push(&mut self, k: ComponentKind) -> usize {
        self.subs.push(k);
        self.counts[rank(k)] += 1;
        self.subs.len() - 1
    }

    pub fn change(&mut self, i: usize, to: ComponentKind) {
        self.counts[rank(self.subs[i])] -= 1;
        self.counts[rank(to)] += 1;
        self.subs[i] = to;
    }

    pub fn count(&self, k: ComponentKind) -> usize {
        self.counts[rank(k)]
    }

    pub fn find(&self, k: ComponentKind) -> Option<usize> {
        self.subs.iter().position(|&x| x == k)
    }

    /// Number of type D components.
    pub fn d(&self) -> u64 {
        self.count(ComponentKind::D) as u64
    }

    /// Every small component has one of the four shapes.
    pub fn well_formed(&self) -> bool {
        self.count(ComponentKind::Other) == 0
    }

    /// Same number of each shape.
    pub fn isomorphic(&self, other: &Component) -> bool {
        self.counts == other.counts
    }
}

/// A change to a compact forest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum ForestEvent {
    Born { comp: usize },
    Add { comp: usize, shape: ComponentKind },
    Change { comp: usize, sub: usize, to: ComponentKind },
}

#[derive(Clone, Debug, Default)]
pub struct CompactForest {
    pub comps: Vec<Component>,
    /// The presented structure stopped looking like a height-four tree.
    pub broken: bool,
}

impl CompactForest {
    pub fn apply(&mut self, ev: ForestEvent) {
        match ev {
            ForestEvent::Born { comp } => {
                if self.comps.len() <= comp {
                    self.comps.resize_with(comp + 1, Component::default);
                }
                self.comps[comp] = Component::born(comp);
            }
            ForestEvent::Add { comp, shape } => {
                self.comps[comp].push(shape);
            }
            ForestEvent::Change { comp, sub, to } => self.comps[comp].change(sub, to),
        }
    }
}

/// The literal tree: root 0, fresh ids in event order.
pub fn materialize(log: &[(u64, ForestEvent)]) -> Result<StagewiseTree, TreeError> {
    let mut p = StagewiseTree::new(NodeId(0));
    let mut next = 1u64;
    let mut fresh = || {
        next += 1;
        NodeId(next - 1)
    };
    // per component: its root, and per small component its root and leaves
    let mut roots: Vec<NodeId> = Vec::new();
    let mut subs: Vec<Vec<(NodeId, Vec<NodeId>)>> = Vec::new();
    let add_shape = |p: &mut StagewiseTree, s: u64, at: NodeId, k: ComponentKind, fresh: &mut dyn FnMut() -> NodeId| {
        let r = fresh();
        p.attach(s, r, at)?;
        let leaves = match k {
            ComponentKind::A => 2,
            ComponentKind::B => 2,
            ComponentKind::C => 3,
            _ => 4,
        };
        let mut ls = Vec::new();
        for _ in 0..leaves {
            let l = fresh();
            p.attach(s, l, r)?;
            ls.push(l);
        }
        if k == ComponentKind::B {
            p.attach(s, fresh(), ls[0])?;
        }
        Ok::<_, TreeError>((r, ls))
    };
    for &(s, ev) in log {
        match ev {
            ForestEvent::Born { comp } => {
                let r = fresh();
                p.attach(s, r, NodeId(0))?;
                if roots.len() <= comp {
                    roots.resize(comp + 1, NodeId(0));
                    subs.resize_with(comp + 1, Vec::new);
                }
                roots[comp] = r;
                for k in Component::born(comp).subs() {
                    let x = add_shape(&mut p, s, r, *k, &mut fresh)?;
                    subs[comp].push(x);
                }
            }
            ForestEvent::Add { comp, shape } => {
                let x = add_shape(&mut p, s, roots[comp], shape, &mut fresh)?;
                subs[comp].push(x);
            }
            ForestEvent::Change { comp, sub, to } => {
                let (r, ls) = subs[comp][sub].clone();
                let n = fresh();
                match to {
                    ComponentKind::B => p.attach(s, n, ls[0])?,
                    _ => {
                        p.attach(s, n, r)?;
                        subs[comp][sub].1.push(n);
                    }
                }
            }
        }
    }
    let horizon = log.last().map_or(0, |e| e.0);
    p.set_horizon(horizon);
    p.set_truth(GroundTruth {
        maximal_infinite: Some(NodeId(0)),
        omega_nodes: [NodeId(0)].into_iter().collect(),
        settled_by: horizon,
        ..Default::default()
    });
    Ok(p)
}
