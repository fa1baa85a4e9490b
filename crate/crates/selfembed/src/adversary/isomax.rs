//! A type-1 tree of height four whose components defeat every listed
//! (tree, map) opponent, built on a tree of strategies.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};

use super::doubles::{shape_embeds, AdversaryPair};
use super::forest::{CompactForest, Component, ForestEvent};
use crate::report::Check;
use crate::tree::ComponentKind;

/// Strategy outcomes, highest priority first.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Outcome {
    UInf,
    VInf,
    Fin,
    Triv,
}

impl Outcome {
    pub fn letter(self) -> char {
        match self {
            Outcome::UInf => 'u',
            Outcome::VInf => 'v',
            Outcome::Fin => 'f',
            Outcome::Triv => 't',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        Some(match c {
            'u' => Outcome::UInf,
            'v' => Outcome::VInf,
            'f' => Outcome::Fin,
            't' => Outcome::Triv,
            _ => return None,
        })
    }
}

/// A node of the tree of strategies, written as its outcome letters.
pub type StrategyKey = Vec<Outcome>;

pub fn key_name(k: &[Outcome]) -> String {
    k.iter().map(|o| o.letter()).collect()
}

fn parse_key(s: &str) -> Vec<Outcome> {
    s.chars().filter_map(Outcome::from_letter).collect()
}

/// `k` has lower priority than `than`: it extends it properly or lies to its right.
pub fn lower_priority(k: &[Outcome], than: &[Outcome]) -> bool {
    for (a, b) in k.iter().zip(than) {
        if a != b {
            return a > b;
        }
    }
    k.len() > than.len()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Step {
    One,
    Two,
    Four,
}

#[derive(Clone, Debug)]
pub struct StrategyState {
    pub a: u64,
    /// Chosen components of the opponent's tree.
    pub uv: Option<(usize, usize)>,
    pub u: u64,
    pub v: u64,
    pub step: Step,
    /// `(u, v)` pairs already set up for.
    pub setups: BTreeSet<(u64, u64)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum WriteAction {
    AddA,
    AToC,
    AToB,
    /// Only produced by fault injection.
    AddC,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WriteRecord {
    pub writer: String,
    pub component: u64,
    pub action: WriteAction,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiagRecord {
    pub component: u64,
    pub new_shape: ComponentKind,
    pub image_shape: ComponentKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActRecord {
    pub strategy: String,
    pub step: Step,
    pub outcome: Outcome,
    pub a: u64,
    /// `None` is `∞`.
    pub b: Option<u64>,
    pub u: Option<u64>,
    pub v: Option<u64>,
    /// `max` of the `u` and `v` values `a` must exceed.
    pub a_bound: Option<u64>,
    pub setup: Option<(u64, u64)>,
    pub writes: Vec<WriteRecord>,
    pub diag: Option<DiagRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StageRecord {
    pub stage: u64,
    pub acts: Vec<ActRecord>,
    pub late_writes: Vec<WriteRecord>,
    pub initialized: Vec<String>,
    pub live: Vec<String>,
}

/// Lets the last acting strategy write into a component another strategy protects.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fault {
    pub stage: u64,
}

pub struct IsoRun {
    pub ours: CompactForest,
    pub log: Vec<(u64, ForestEvent)>,
    pub trace: Vec<StageRecord>,
    pub pairs: Vec<AdversaryPair>,
    pub states: BTreeMap<StrategyKey, StrategyState>,
}

struct Runner {
    ours: CompactForest,
    log: Vec<(u64, ForestEvent)>,
    pairs: Vec<AdversaryPair>,
    states: BTreeMap<StrategyKey, StrategyState>,
}

impl Runner {
    fn write(&mut self, s: u64, writer: &[Outcome], comp: usize, action: WriteAction) -> WriteRecord {
        let ev = match action {
            WriteAction::AddA => ForestEvent::Add { comp, shape: ComponentKind::A },
            WriteAction::AddC => ForestEvent::Add { comp, shape: ComponentKind::C },
            WriteAction::AToC | WriteAction::AToB => {
                let sub = self.ours.comps[comp].find(ComponentKind::A).expect("has an A");
                let to = if action == WriteAction::AToC { ComponentKind::C } else { ComponentKind::B };
                ForestEvent::Change { comp, sub, to }
            }
        };
        self.ours.apply(ev);
        self.log.push((s, ev));
        WriteRecord { writer: key_name(writer), component: comp as u64, action }
    }

    /// Larger than every parameter currently in use.
    fn large(&self) -> u64 {
        self.states.values().flat_map(|st| [st.a, st.u, st.v]).max().map_or(0, |m| m) + 1
    }

    fn setup(&mut self, s: u64, key: &[Outcome], u: u64, v: u64, writes: &mut Vec<WriteRecord>) {
        let (ui, vi) = (u as usize, v as usize);
        if vi >= self.ours.comps.len() || ui >= self.ours.comps.len() {
            return;
        }
        if !self.states.get_mut(key).expect("present").setups.insert((u, v)) {
            return;
        }
        if self.ours.comps[ui].count(ComponentKind::A) == 0 {
            writes.push(self.write(s, key, ui, WriteAction::AddA));
        }
        if self.ours.comps[vi].count(ComponentKind::A) > 0 {
            writes.push(self.write(s, key, vi, WriteAction::AToC));
        }
    }

    fn act(&mut self, s: u64, key: &StrategyKey) -> ActRecord {
        if !self.states.contains_key(key) {
            let a = self.large();
            let st = StrategyState { a, uv: None, u: 0, v: 0, step: Step::One, setups: BTreeSet::new() };
            self.states.insert(key.clone(), st);
        }
        let mut b: Option<u64> = None;
        let mut bound: Option<u64> = None;
        for i in 0..key.len() {
            let alpha = &self.states[&key[..i]];
            let (for_b, for_a) = match key[i] {
                Outcome::VInf => (Some(alpha.v), Some(alpha.u)),
                Outcome::UInf => (Some(alpha.u), None),
                Outcome::Fin => (None, Some(alpha.v)),
                Outcome::Triv => (None, None),
            };
            if let Some(x) = for_b {
                b = Some(b.map_or(x, |y| y.min(x)));
            }
            if let Some(x) = for_a {
                bound = Some(bound.map_or(x, |y| y.max(x)));
            }
        }
        let below_b = |x: u64| b.is_none_or(|b| x < b);
        let st = &self.states[key];
        let mut rec = ActRecord {
            strategy: key_name(key),
            step: st.step,
            outcome: Outcome::Triv,
            a: st.a,
            b,
            u: None,
            v: None,
            a_bound: bound,
            setup: None,
            writes: Vec::new(),
            diag: None,
        };
        let pair = &self.pairs[key.len()];
        let forest = pair.forest();
        if forest.broken {
            return rec;
        }
        let shaped = |c: &Component| c.well_formed() && c.count(ComponentKind::B) > 0;
        let current = st.uv.map(|(uc, vc)| (uc, vc, &forest.comps[uc], &forest.comps[vc]));
        if let Some((_, _, cu, cv)) = current {
            if !cu.well_formed() || !cv.well_formed() {
                return rec;
            }
        }
        let mut writes = Vec::new();
        match st.step {
            Step::One => {
                let a = st.a;
                let found = forest.comps.iter().enumerate().find_map(|(uc, cu)| {
                    if !shaped(cu) || cu.d() <= a {
                        return None;
                    }
                    let vc = pair.image_comp(uc)?;
                    let cv = forest.comps.get(vc)?;
                    (vc != uc && shaped(cv) && below_b(cv.d()) && cu.d() < cv.d() && pair.embeds(uc, vc))
                        .then_some((uc, vc, cu.d(), cv.d()))
                });
                let Some((uc, vc, u, v)) = found else { return rec };
                let st = self.states.get_mut(key).expect("present");
                st.uv = Some((uc, vc));
                st.u = u;
                st.v = v;
                st.step = Step::Two;
                self.setup(s, key, u, v, &mut writes);
                rec.setup = Some((u, v));
                rec.u = Some(u);
                rec.v = Some(v);
                rec.outcome = Outcome::Fin;
            }
            Step::Two | Step::Four => {
                let (uc, vc, cu, cv) = current.expect("components fixed after step 1");
                let (cu, cv) = (cu.clone(), cv.clone());
                let (u, v) = (cu.d(), cv.d());
                let (ut, vt) = (st.u, st.v);
                let step = st.step;
                let iso = |ours: &CompactForest| {
                    ours.comps.get(u as usize).is_some_and(|t| t.isomorphic(&cu))
                        && ours.comps.get(v as usize).is_some_and(|t| t.isomorphic(&cv))
                };
                let embeds = pair.embeds(uc, vc);
                let designated = cu.find(ComponentKind::A).and_then(|i| pair.image_sub(uc, i));
                let image_shape = designated.map(|(c, j)| forest.comps[c].subs()[j]);
                rec.u = Some(u);
                rec.v = Some(v);
                let st = self.states.get_mut(key).expect("present");
                st.u = u;
                st.v = v;
                rec.outcome = if u > ut {
                    st.step = Step::Two;
                    Outcome::UInf
                } else if v > vt {
                    st.step = Step::Two;
                    Outcome::VInf
                } else if step == Step::Four || !(u < v && below_b(v)) {
                    Outcome::Fin
                } else {
                    self.setup(s, key, u, v, &mut writes);
                    rec.setup = Some((u, v));
                    let tu = &self.ours.comps[u as usize];
                    let new_shape = match image_shape {
                        Some(ComponentKind::B) => Some(ComponentKind::C),
                        Some(ComponentKind::C) | Some(ComponentKind::D) => Some(ComponentKind::B),
                        _ => None,
                    };
                    if let (true, true, Some(new_shape), true) =
                        (iso(&self.ours), embeds, new_shape, tu.count(ComponentKind::A) == 1)
                    {
                        let action = if new_shape == ComponentKind::C { WriteAction::AToC } else { WriteAction::AToB };
                        writes.push(self.write(s, key, u as usize, action));
                        rec.diag = Some(DiagRecord {
                            component: u,
                            new_shape,
                            image_shape: image_shape.expect("matched"),
                        });
                        self.states.get_mut(key).expect("present").step = Step::Four;
                    }
                    Outcome::Fin
                };
            }
        }
        rec.writes = writes;
        rec
    }
}

/// Runs stages `0..=horizon` against `pairs`, one requirement per pair.
pub fn isomaxinf_run(pairs: Vec<AdversaryPair>, horizon: u64, fault: Option<Fault>) -> IsoRun {
    let mut r = Runner { ours: CompactForest::default(), log: Vec::new(), pairs, states: BTreeMap::new() };
    let mut trace = Vec::new();
    for s in 0..=horizon {
        let born = ForestEvent::Born { comp: s as usize };
        r.ours.apply(born);
        r.log.push((s, born));
        for p in r.pairs.iter_mut() {
            p.step(s, &r.log);
        }
        let mut rec = StageRecord { stage: s, acts: Vec::new(), late_writes: Vec::new(), initialized: Vec::new(), live: Vec::new() };
        let mut key: StrategyKey = Vec::new();
        if !r.pairs.is_empty() {
            let last = (s as usize).min(r.pairs.len() - 1);
            loop {
                let act = r.act(s, &key);
                let o = act.outcome;
                rec.acts.push(act);
                if key.len() == last {
                    break;
                }
                key.push(o);
            }
            let lower: Vec<StrategyKey> = r.states.keys().filter(|k| lower_priority(k, &key)).cloned().collect();
            for k in lower {
                r.states.remove(&k);
                rec.initialized.push(key_name(&k));
            }
        }
        if fault.is_some_and(|f| f.stage == s) {
            let target = r.states.iter().find_map(|(k, st)| {
                (k != &key && st.setups.contains(&(st.u, st.v))).then_some(st.v as usize)
            });
            if let Some(c) = target {
                let w = r.write(s, &key, c, WriteAction::AddC);
                rec.late_writes.push(w);
            }
        }
        rec.live = r.states.keys().map(|k| key_name(k)).collect();
        trace.push(rec);
    }
    IsoRun { ours: r.ours, log: r.log, trace, pairs: r.pairs, states: r.states }
}

/// Audits a trace; every check is recomputed from the records alone.
pub fn isomaxinf_verify(trace: &[StageRecord], stable_by: u64) -> Vec<Check> {
    let mut aprop = Vec::new();
    let mut protect = Vec::new();
    let mut reset = Vec::new();
    let mut audit = Vec::new();
    let mut diag = Vec::new();
    let mut diag_count = 0;
    let mut late = BTreeSet::new();
    let mut counts: Vec<[i64; 4]> = Vec::new();
    // component -> (owner, which parameter, value)
    let mut prot: HashMap<u64, (String, char, u64)> = HashMap::new();
    let mut params: HashMap<String, (u64, u64)> = HashMap::new();
    // a foreign write is only a violation if the owner survives the stage
    let check_write = |w: &WriteRecord, prot: &HashMap<u64, (String, char, u64)>, stage: u64, out: &mut Vec<(String, String)>| {
        if let Some((owner, _, _)) = prot.get(&w.component) {
            if owner != &w.writer {
                let msg = format!("stage {stage}: '{}' wrote {:?} into component {} protected by '{owner}'", w.writer, w.action, w.component);
                out.push((owner.clone(), msg));
            }
        }
    };
    for rec in trace {
        let s = rec.stage;
        if counts.len() <= s as usize {
            counts.resize(s as usize + 1, [0; 4]);
        }
        counts[s as usize] = [1, 1, 0, s as i64];
        let mut touched: BTreeSet<u64> = [s].into_iter().collect();
        let mut all_writes: Vec<&WriteRecord> = Vec::new();
        let mut foreign = Vec::new();
        for act in &rec.acts {
            if let Some(bound) = act.a_bound {
                if act.a <= bound {
                    aprop.push(format!("stage {s}: '{}' has a = {} ≤ {bound}", act.strategy, act.a));
                }
            }
            if let (Some(u), Some(v)) = (act.u, act.v) {
                if let Some(&(pu, pv)) = params.get(&act.strategy) {
                    prot.retain(|_, (o, which, val)| {
                        !(o == &act.strategy && ((*which == 'u' && *val != u) || (*which == 'v' && *val != v)))
                    });
                    let _ = (pu, pv);
                }
                params.insert(act.strategy.clone(), (u, v));
            }
            for w in &act.writes {
                check_write(w, &prot, s, &mut foreign);
            }
            if let Some((u, v)) = act.setup {
                prot.insert(u, (act.strategy.clone(), 'u', u));
                prot.insert(v, (act.strategy.clone(), 'v', v));
            }
            if let Some(d) = &act.diag {
                diag_count += 1;
                if shape_embeds(d.new_shape, d.image_shape) {
                    diag.push(format!("stage {s}: {} still embeds into {}", d.new_shape, d.image_shape));
                }
            }
            all_writes.extend(&act.writes);
        }
        for w in &rec.late_writes {
            check_write(w, &prot, s, &mut foreign);
        }
        all_writes.extend(&rec.late_writes);
        for w in all_writes {
            let c = &mut counts[w.component as usize];
            match w.action {
                WriteAction::AddA => c[0] += 1,
                WriteAction::AddC => c[2] += 1,
                WriteAction::AToC => {
                    c[0] -= 1;
                    c[2] += 1
                }
                WriteAction::AToB => {
                    c[0] -= 1;
                    c[1] += 1
                }
            }
            touched.insert(w.component);
            if s > stable_by {
                late.insert(w.component);
            }
        }
        for k in touched {
            let [a, b, c, d] = counts[k as usize];
            if !(0..=1).contains(&a) || b < 1 || c < 0 || d != k as i64 {
                audit.push(format!("stage {s}: component {k} has A={a} B={b} C={c} D={d}"));
            }
        }
        let dropped: BTreeSet<&String> = rec.initialized.iter().collect();
        protect.extend(foreign.into_iter().filter(|(o, _)| !dropped.contains(o)).map(|(_, m)| m));
        prot.retain(|_, (o, _, _)| !dropped.contains(o));
        for k in &dropped {
            params.remove(*k);
        }
        if let Some(last) = rec.acts.last() {
            let lk = parse_key(&last.strategy);
            for k in &rec.live {
                if lower_priority(&parse_key(k), &lk) {
                    reset.push(format!("stage {s}: '{k}' survives below '{}'", last.strategy));
                }
            }
        }
    }
    let b_growth = b_growth_failures(trace);
    vec![
        Check::from_failures("aprop1", &aprop, "a exceeds the protected parameters at every act"),
        Check::from_failures("setup_protection", &protect, "no foreign write into a protected component"),
        Check::from_failures(
            "stabilization",
            &late.iter().map(|c| format!("component {c} written after stage {stable_by}")).collect::<Vec<_>>(),
            format!("no component changes after stage {stable_by}"),
        ),
        Check::from_failures("priority_reset", &reset, "lower-priority strategies reset when a stage ends"),
        Check::from_failures("component_audit", &audit, "≤1 A, ≥1 B, exactly k D in every T_k"),
        Check::from_failures("diagonalization", &diag, format!("{diag_count} diagonalizations, each blocks the map")),
        Check::from_failures("b_growth", &b_growth, "b never falls for strategies on the final path"),
    ]
}

/// Along the final stage's path, `b` at the end is at least its value at mid-window.
fn b_growth_failures(trace: &[StageRecord]) -> Vec<String> {
    let Some(last) = trace.last() else { return Vec::new() };
    let mid = last.stage / 2;
    let key = |b: Option<u64>| b.unwrap_or(u64::MAX);
    let mut out = Vec::new();
    for act in &last.acts {
        let earlier = trace
            .iter()
            .filter(|r| r.stage >= mid)
            .flat_map(|r| r.acts.iter())
            .find(|a| a.strategy == act.strategy);
        if let Some(e) = earlier {
            if key(act.b) < key(e.b) {
                out.push(format!("'{}' has b {:?} after {:?}", act.strategy, act.b, e.b));
            }
        }
    }
    out
}
