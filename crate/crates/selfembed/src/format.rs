//! Line-oriented text formats: trees, embeddings, schedules, adversary configs.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use thiserror::Error;

use crate::adversary::cac::Enumerator;
use crate::adversary::{AdversaryPair, MapDouble, TreeDouble};
use crate::oracles::{CeFamily, MockCeSet, OracleError, Periodic};
use crate::stagewise::{StagewiseTree, TreeEvent};
use crate::tree::{FiniteTree, NodeId, TreeError};

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error(transparent)]
    Tree(#[from] TreeError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

fn syntax(line: usize, msg: impl Into<String>) -> FormatError {
    FormatError::Syntax { line: line + 1, msg: msg.into() }
}

fn num<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T, FormatError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| syntax(line, format!("bad {what} '{tok}'")))
}

/// Content lines with their indices; blank lines and `#` comments other than
/// stage markers are dropped.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().map(|(i, l)| (i, l.trim())).filter(|(_, l)| !l.is_empty())
}

/// `treev1`: `<node> <parent>` per attachment, `<node> <parent> <child>` per
/// splice, `<root> .` once, `# stage <s>` before each stage's events.
pub fn write_treev1(p: &StagewiseTree) -> String {
    let mut out = format!("{} .\n", p.root());
    let mut current = None;
    for &(s, ev) in p.events() {
        if current != Some(s) {
            let _ = writeln!(out, "# stage {s}");
            current = Some(s);
        }
        let _ = match ev {
            TreeEvent::Attach { node, parent } => writeln!(out, "{node} {parent}"),
            TreeEvent::Splice { node, parent, child } => writeln!(out, "{node} {parent} {child}"),
        };
    }
    // quiet final stages still count toward the horizon
    if current.map_or(p.horizon() > 0, |s| s < p.horizon()) {
        let _ = writeln!(out, "# stage {}", p.horizon());
    }
    out
}

pub fn parse_treev1(text: &str) -> Result<StagewiseTree, FormatError> {
    let mut p: Option<StagewiseTree> = None;
    let mut stage = 0;
    for (i, l) in lines(text) {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks[0].starts_with('#') {
            if toks.get(1) == Some(&"stage") || toks[0] == "#stage" {
                stage = num(toks.last().copied(), i, "stage")?;
            }
            continue;
        }
        let node = NodeId(num(Some(toks[0]), i, "node")?);
        if toks.get(1) == Some(&".") {
            if p.is_some() {
                return Err(syntax(i, "second root line"));
            }
            p = Some(StagewiseTree::new(node));
            continue;
        }
        let tree = p.as_mut().ok_or_else(|| syntax(i, "event before the root line"))?;
        let parent = NodeId(num(toks.get(1).copied(), i, "parent")?);
        let ev = match toks.get(2) {
            None => TreeEvent::Attach { node, parent },
            Some(c) => TreeEvent::Splice { node, parent, child: NodeId(num(Some(c), i, "child")?) },
        };
        if toks.len() > 3 {
            return Err(syntax(i, "trailing tokens"));
        }
        tree.apply(stage, ev).map_err(|e| syntax(i, e.to_string()))?;
    }
    let mut p = p.ok_or(FormatError::Tree(TreeError::NoRoot))?;
    p.set_horizon(p.horizon().max(stage));
    Ok(p)
}

/// A finite tree in `treev1` (stage markers ignored).
pub fn parse_finite_tree(text: &str) -> Result<FiniteTree, FormatError> {
    Ok(parse_treev1(text)?.final_tree())
}

pub fn write_finite_tree(t: &FiniteTree) -> String {
    let mut out = String::new();
    for (n, p) in t.events() {
        let _ = match p {
            None => writeln!(out, "{n} ."),
            Some(p) => writeln!(out, "{n} {p}"),
        };
    }
    out
}

pub fn write_embedding(map: &BTreeMap<NodeId, NodeId>) -> String {
    map.iter().map(|(a, b)| format!("{a} -> {b}\n")).collect()
}

pub fn parse_embedding(text: &str) -> Result<BTreeMap<NodeId, NodeId>, FormatError> {
    let mut map = BTreeMap::new();
    for (i, l) in lines(text) {
        if l.starts_with('#') {
            continue;
        }
        let (a, b) = l.split_once("->").ok_or_else(|| syntax(i, "expected '<src> -> <dst>'"))?;
        let a = NodeId(num(Some(a.trim()), i, "source")?);
        let b = NodeId(num(Some(b.trim()), i, "target")?);
        if map.insert(a, b).is_some() {
            return Err(syntax(i, format!("{a} mapped twice")));
        }
    }
    Ok(map)
}

/// A schedule file: a family `A_0, A_1, …` and a single set `K` side by side.
#[derive(Clone, Debug, Default)]
pub struct Schedule {
    pub family: CeFamily,
    pub k: MockCeSet,
    /// Sets the file declared finite.
    pub declared_finite: Vec<usize>,
}

/// Lines: `stage <s> set <n>`, `stage <s> elem <x>`, `finite <n> …`,
/// `periodic <n> <offset> <period>`, `filler <n>`.
pub fn parse_schedule(text: &str) -> Result<Schedule, FormatError> {
    let mut explicit = Vec::new();
    let mut elems = Vec::new();
    let mut periodic = Vec::new();
    let mut filler = None;
    let mut declared_finite = Vec::new();
    for (i, l) in lines(text) {
        let mut toks = l.split_whitespace();
        match toks.next() {
            Some(c) if c.starts_with('#') => continue,
            Some("stage") => {
                let s: u64 = num(toks.next(), i, "stage")?;
                match toks.next() {
                    Some("set") => explicit.push((s, num(toks.next(), i, "set")?)),
                    Some("elem") => elems.push((num(toks.next(), i, "element")?, s)),
                    _ => return Err(syntax(i, "expected 'set' or 'elem'")),
                }
            }
            Some("finite") => {
                for t in toks.by_ref() {
                    declared_finite.push(num(Some(t), i, "set")?);
                }
            }
            Some("periodic") => periodic.push(Periodic {
                set: num(toks.next(), i, "set")?,
                offset: num(toks.next(), i, "offset")?,
                period: num(toks.next(), i, "period")?,
            }),
            Some("filler") => filler = Some(num(toks.next(), i, "set")?),
            Some(other) => return Err(syntax(i, format!("unknown directive '{other}'"))),
            None => {}
        }
        if toks.next().is_some() {
            return Err(syntax(i, "trailing tokens"));
        }
    }
    let family = CeFamily::new(explicit, periodic, filler)?;
    if let Some(&n) = declared_finite.iter().find(|&&n| family.is_infinite(n)) {
        return Err(FormatError::Syntax { line: 0, msg: format!("set {n} declared finite but has a generator") });
    }
    Ok(Schedule { family, k: MockCeSet::new(elems)?, declared_finite })
}

pub fn write_k_schedule(k: &MockCeSet) -> String {
    k.events().iter().map(|(x, s)| format!("stage {s} elem {x}\n")).collect()
}

/// An adversary config: `pair <e,i> tree=<name> map=<name> [delay=…] [period=…] [stage=…]`
/// lines and `w <e> enum=<name> [from=…]` lines.
#[derive(Debug, Default)]
pub struct AdversaryConfig {
    pub pairs: Vec<AdversaryPair>,
    pub enumerators: Vec<Enumerator>,
}

pub fn parse_adversary_config(text: &str) -> Result<AdversaryConfig, FormatError> {
    let mut cfg = AdversaryConfig::default();
    let mut ws: BTreeMap<usize, Enumerator> = BTreeMap::new();
    for (i, l) in lines(text) {
        let mut toks = l.split_whitespace();
        let head = toks.next().unwrap_or("");
        if head.starts_with('#') {
            continue;
        }
        let label = toks.next().ok_or_else(|| syntax(i, "missing index"))?;
        let mut kv = BTreeMap::new();
        for t in toks {
            let (k, v) = t.split_once('=').ok_or_else(|| syntax(i, format!("expected key=value, got '{t}'")))?;
            kv.insert(k, v);
        }
        let param = |k: &str, default: u64| -> Result<u64, FormatError> {
            kv.get(k).map_or(Ok(default), |v| num(Some(v), i, k))
        };
        match head {
            "pair" => {
                let delay = param("delay", 1)?;
                let tree = match kv.get("tree").copied() {
                    Some("empty") => TreeDouble::Empty,
                    Some("mirror") => TreeDouble::Mirror { delay },
                    Some("inflate") => TreeDouble::Inflate { delay, period: param("period", 7)? },
                    Some("tall") => TreeDouble::Tall { delay, stage: param("stage", 40)? },
                    other => return Err(syntax(i, format!("unknown tree builtin {other:?}"))),
                };
                let map = match kv.get("map").copied() {
                    Some("none") => MapDouble::None,
                    Some("shift") => MapDouble::Shift,
                    other => return Err(syntax(i, format!("unknown map builtin {other:?}"))),
                };
                cfg.pairs.push(AdversaryPair::new(label, tree, map));
            }
            "w" => {
                let e: usize = num(Some(label), i, "index")?;
                let en = match kv.get("enum").copied() {
                    Some("empty") => Enumerator::Empty,
                    Some("leftmost") => Enumerator::Leftmost,
                    Some("rightmost") => Enumerator::Rightmost,
                    Some("leaves") => Enumerator::Leaves,
                    Some("all") => Enumerator::All,
                    Some("late-leaves") => Enumerator::LateLeaves { from: param("from", 120)? },
                    other => return Err(syntax(i, format!("unknown enumerator {other:?}"))),
                };
                if ws.insert(e, en).is_some() {
                    return Err(syntax(i, format!("W_{e} declared twice")));
                }
            }
            other => return Err(syntax(i, format!("unknown directive '{other}'"))),
        }
    }
    for (k, (e, en)) in ws.into_iter().enumerate() {
        if e != k {
            return Err(FormatError::Syntax { line: 0, msg: format!("W indices must be 0..n, missing {k}") });
        }
        cfg.enumerators.push(en);
    }
    Ok(cfg)
}
