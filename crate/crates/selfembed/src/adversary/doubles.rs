//! Replayable opponents: a presented tree and a partial map on it.

use std::collections::{BTreeSet, HashMap};

use super::forest::{rank, CompactForest, ForestEvent};
use crate::embedding::find_rooted_embedding;
use crate::tree::ComponentKind;

/// Which small shapes embed into which, root to root.
pub fn shape_embeds(a: ComponentKind, b: ComponentKind) -> bool {
    match (a.shape(0), b.shape(100)) {
        (Some(x), Some(y)) => find_rooted_embedding(&x, &y).is_some(),
        _ => false,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TreeDouble {
    /// Presents nothing.
    Empty,
    /// Replays the construction's own tree `delay` stages late.
    Mirror { delay: u64 },
    /// As the mirror, and every `period` stages gives each component an extra D.
    Inflate { delay: u64, period: u64 },
    /// As the mirror until `stage`, then grows past height four.
    Tall { delay: u64, stage: u64 },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum MapDouble {
    None,
    /// Sends component `j` into component `j+1`, shape by shape.
    Shift,
}

type Sub = (usize, usize);

/// The shift map, extended greedily and never retracted.
#[derive(Clone, Debug, Default)]
struct ShiftMap {
    root: Vec<Option<usize>>,
    image: HashMap<Sub, Sub>,
    preimage: HashMap<Sub, Sub>,
    /// Unused target sub-indices per component and shape rank.
    free: Vec<[BTreeSet<usize>; 5]>,
    pending: Vec<BTreeSet<usize>>,
    /// Mapped subs whose shape no longer embeds into the image shape.
    broken: Vec<BTreeSet<usize>>,
    seen_subs: Vec<usize>,
}

impl ShiftMap {
    fn grow(&mut self, f: &CompactForest) {
        let n = f.comps.len();
        if self.root.len() < n {
            self.root.resize(n, None);
            self.free.resize_with(n, Default::default);
            self.pending.resize_with(n, BTreeSet::new);
            self.broken.resize_with(n, BTreeSet::new);
            self.seen_subs.resize(n, 0);
        }
        for (c, comp) in f.comps.iter().enumerate() {
            for i in self.seen_subs[c]..comp.subs().len() {
                self.free[c][rank(comp.subs()[i])].insert(i);
                self.pending[c].insert(i);
            }
            self.seen_subs[c] = comp.subs().len();
        }
    }

    fn shape_changed(&mut self, f: &CompactForest, c: usize, i: usize, from: ComponentKind) {
        let to = f.comps[c].subs()[i];
        if self.free[c][rank(from)].remove(&i) {
            self.free[c][rank(to)].insert(i);
        }
        if let Some(&(tc, ti)) = self.image.get(&(c, i)) {
            self.recheck(f, (c, i), (tc, ti));
        }
        if let Some(&src) = self.preimage.get(&(c, i)) {
            self.recheck(f, src, (c, i));
        }
    }

    fn recheck(&mut self, f: &CompactForest, (c, i): Sub, (tc, ti): Sub) {
        if shape_embeds(f.comps[c].subs()[i], f.comps[tc].subs()[ti]) {
            self.broken[c].remove(&i);
        } else {
            self.broken[c].insert(i);
        }
    }

    fn extend(&mut self, f: &CompactForest) {
        for c in 0..f.comps.len() {
            if c + 1 >= f.comps.len() || !f.comps[c].well_formed() {
                continue;
            }
            let t = c + 1;
            self.root[c] = Some(t);
            let todo: Vec<usize> = self.pending[c].iter().copied().collect();
            for i in todo {
                let shape = f.comps[c].subs()[i];
                let prefs: &[ComponentKind] = match shape {
                    ComponentKind::A => &[ComponentKind::A, ComponentKind::C, ComponentKind::D, ComponentKind::B],
                    ComponentKind::B => &[ComponentKind::B],
                    ComponentKind::C => &[ComponentKind::C, ComponentKind::D],
                    ComponentKind::D => &[ComponentKind::D],
                    ComponentKind::Other => &[],
                };
                let target = prefs.iter().find_map(|&k| self.free[t][rank(k)].iter().next().copied());
                if let Some(j) = target {
                    let k = f.comps[t].subs()[j];
                    self.free[t][rank(k)].remove(&j);
                    self.image.insert((c, i), (t, j));
                    self.preimage.insert((t, j), (c, i));
                    self.pending[c].remove(&i);
                }
            }
        }
    }
}

/// One opponent `(φ_e, f_i)`.
#[derive(Clone, Debug)]
pub struct AdversaryPair {
    pub label: String,
    pub tree: TreeDouble,
    pub map: MapDouble,
    forest: CompactForest,
    cursor: usize,
    shift: ShiftMap,
}

impl AdversaryPair {
    pub fn new(label: impl Into<String>, tree: TreeDouble, map: MapDouble) -> Self {
        AdversaryPair {
            label: label.into(),
            tree,
            map,
            forest: CompactForest::default(),
            cursor: 0,
            shift: ShiftMap::default(),
        }
    }

    pub fn forest(&self) -> &CompactForest {
        &self.forest
    }

    fn apply(&mut self, ev: ForestEvent) {
        let before = match ev {
            ForestEvent::Change { comp, sub, .. } => Some(self.forest.comps[comp].subs()[sub]),
            _ => None,
        };
        self.forest.apply(ev);
        if self.map == MapDouble::Shift {
            self.shift.grow(&self.forest);
            if let (ForestEvent::Change { comp, sub, .. }, Some(from)) = (ev, before) {
                self.shift.shape_changed(&self.forest, comp, sub, from);
            }
        }
    }

    /// Advances to stage `s`, reading the construction's event log.
    pub fn step(&mut self, s: u64, log: &[(u64, ForestEvent)]) {
        let delay = match self.tree {
            TreeDouble::Empty => return,
            TreeDouble::Mirror { delay } | TreeDouble::Inflate { delay, .. } | TreeDouble::Tall { delay, .. } => delay,
        };
        while self.cursor < log.len() && log[self.cursor].0 + delay <= s {
            let ev = log[self.cursor].1;
            self.cursor += 1;
            self.apply(ev);
        }
        match self.tree {
            TreeDouble::Inflate { period, .. } if period > 0 && s > 0 && s.is_multiple_of(period) => {
                for comp in 0..self.forest.comps.len() {
                    self.apply(ForestEvent::Add { comp, shape: ComponentKind::D });
                }
            }
            TreeDouble::Tall { stage, .. } if s >= stage => self.forest.broken = true,
            _ => {}
        }
        if self.map == MapDouble::Shift {
            self.shift.extend(&self.forest);
        }
    }

    pub fn image_comp(&self, u: usize) -> Option<usize> {
        self.shift.root.get(u).copied().flatten()
    }

    pub fn image_sub(&self, u: usize, i: usize) -> Option<(usize, usize)> {
        self.shift.image.get(&(u, i)).copied()
    }

    /// The map is defined on all of component `u` and embeds it into component `v`.
    pub fn embeds(&self, u: usize, v: usize) -> bool {
        self.map == MapDouble::Shift
            && self.image_comp(u) == Some(v)
            && self.shift.pending.get(u).is_some_and(BTreeSet::is_empty)
            && self.shift.broken.get(u).is_some_and(BTreeSet::is_empty)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ComponentKind::*;

    #[test]
    fn shape_table() {
        for (a, b, want) in [
            (A, C, true),
            (A, D, true),
            (C, D, true),
            (C, B, false),
            (B, C, false),
            (B, D, false),
            (D, C, false),
            (B, B, true),
        ] {
            assert_eq!(shape_embeds(a, b), want, "{a} into {b}");
        }
    }

    #[test]
    fn shift_breaks_when_source_outgrows_target() {
        let log: Vec<(u64, ForestEvent)> = (0..4).map(|k| (k, ForestEvent::Born { comp: k as usize })).collect();
        let mut p = AdversaryPair::new("0,0", TreeDouble::Mirror { delay: 0 }, MapDouble::Shift);
        p.step(3, &log);
        assert!(p.embeds(1, 2));
        let mut log = log;
        log.push((4, ForestEvent::Change { comp: 2, sub: 0, to: C }));
        p.step(4, &log);
        assert!(p.embeds(1, 2));
        log.push((5, ForestEvent::Change { comp: 1, sub: 0, to: B }));
        p.step(5, &log);
        assert!(!p.embeds(1, 2));
    }
}
