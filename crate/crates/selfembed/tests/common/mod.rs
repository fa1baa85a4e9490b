//! Brute-force oracles shared by the integration tests.
#![allow(dead_code)]

use std::collections::BTreeMap;

use selfembed::tree::all_shapes;
use selfembed::{FiniteTree, NodeId};

/// Tries every injective node map, pruning as soon as an assigned pair
/// disagrees on `⪯` in either direction.
pub fn brute_embeds(a: &FiniteTree, b: &FiniteTree) -> bool {
    fn go(a: &[NodeId], b: &[NodeId], ta: &FiniteTree, tb: &FiniteTree, img: &mut Vec<NodeId>) -> bool {
        let k = img.len();
        if k == a.len() {
            return true;
        }
        for &y in b {
            if img.contains(&y) {
                continue;
            }
            let ok = (0..k).all(|i| {
                ta.is_leq(a[i], a[k]).unwrap() == tb.is_leq(img[i], y).unwrap()
                    && ta.is_leq(a[k], a[i]).unwrap() == tb.is_leq(y, img[i]).unwrap()
            });
            if ok {
                img.push(y);
                if go(a, b, ta, tb, img) {
                    return true;
                }
                img.pop();
            }
        }
        false
    }
    go(a.nodes(), b.nodes(), a, b, &mut Vec::new())
}

/// Injective, total on `a`, and `x ⪯ y ⟺ f(x) ⪯ f(y)`.
pub fn brute_is_embedding(a: &FiniteTree, b: &FiniteTree, map: &BTreeMap<NodeId, NodeId>) -> bool {
    let total = a.nodes().iter().all(|x| map.get(x).is_some_and(|&y| b.contains(y)));
    let mut imgs: Vec<NodeId> = map.values().copied().collect();
    imgs.sort();
    imgs.dedup();
    total
        && imgs.len() == map.len()
        && a.nodes().iter().all(|&x| {
            a.nodes().iter().all(|&y| a.is_leq(x, y).unwrap() == b.is_leq(map[&x], map[&y]).unwrap())
        })
}

/// Least `k` with every `k ≤ i < window/2` embedding into at least two later
/// members of the window; `None` when no `k < window/2` works.
pub fn brute_kruskal(seq: &[FiniteTree], window: usize) -> Option<usize> {
    let window = window.min(seq.len());
    let half = window / 2;
    let good = |i: usize| (i + 1..window).filter(|&j| brute_embeds(&seq[i], &seq[j])).count() >= 2;
    (0..half).find(|&k| (k..half).all(good))
}

/// Every shape with `1..=n` nodes.
pub fn shapes_up_to(n: usize) -> Vec<FiniteTree> {
    (1..=n).flat_map(all_shapes).collect()
}

/// A tree from a parent vector: node `i+1` hangs off `parents[i] mod (i+1)`.
pub fn from_parents(parents: &[usize]) -> FiniteTree {
    let ev = std::iter::once((NodeId(0), None))
        .chain(parents.iter().enumerate().map(|(i, &p)| (NodeId(i as u64 + 1), Some(NodeId((p % (i + 1)) as u64)))));
    FiniteTree::from_events(ev.collect::<Vec<_>>()).unwrap()
}
