mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use selfembed::embedding::{
    find_embedding, find_embedding_with, is_valid, kruskal_index, kruskal_index_by, nontrivial_self_embedding,
    verify_embedding, Embedding, KruskalIndex,
};
use selfembed::tree::all_shapes;
use selfembed::{FiniteTree, NodeId};

use common::{brute_embeds, brute_is_embedding, brute_kruskal, from_parents, shapes_up_to};

#[test]
fn shape_counts_are_frozen() {
    let counts: Vec<usize> = (1..=7).map(|n| all_shapes(n).len()).collect();
    assert_eq!(counts, [1, 1, 2, 4, 9, 20, 48]);
}

#[test]
fn embeddable_pairs_are_frozen() {
    let shapes = shapes_up_to(7);
    let brute = shapes.iter().flat_map(|a| shapes.iter().map(move |b| (a, b))).filter(|(a, b)| brute_embeds(a, b)).count();
    assert_eq!(brute, 1010);
    let fast = shapes.iter().flat_map(|a| shapes.iter().map(move |b| (a, b))).filter(|(a, b)| find_embedding(a, b).is_some()).count();
    assert_eq!(fast, 1010);
}

#[test]
fn kruskal_fixtures() {
    let chains: Vec<FiniteTree> = (1..=50).map(|n| FiniteTree::chain(&(0..n).collect::<Vec<_>>())).collect();
    assert_eq!(kruskal_index(&chains, 50), KruskalIndex::Index(0));
    let mut starred = vec![FiniteTree::star(10)];
    starred.extend(chains[..49].iter().cloned());
    assert_eq!(kruskal_index(&starred, 50), KruskalIndex::Index(1));
    // the last element of the first half has nothing after it
    let mut tail = chains[..10].to_vec();
    tail[4] = FiniteTree::star(12);
    assert_eq!(kruskal_index(&tail, 10), KruskalIndex::Inconsistent);
}

#[test]
fn kruskal_matches_brute_force_on_seeds() {
    for seed in 0..8 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq: Vec<FiniteTree> = (0..24).map(|_| FiniteTree::random(&mut rng, 5)).collect();
        let want = brute_kruskal(&seq, 24).map_or(KruskalIndex::Inconsistent, KruskalIndex::Index);
        assert_eq!(kruskal_index(&seq, 24), want, "seed {seed}");
    }
}

#[test]
fn kruskal_by_isomorphism_is_stricter() {
    let chains: Vec<FiniteTree> = (1..=20).map(|n| FiniteTree::chain(&(0..n).collect::<Vec<_>>())).collect();
    assert_eq!(kruskal_index_by(&chains, 20, |a, b| a.is_isomorphic(b)), KruskalIndex::Inconsistent);
}

fn parents(max: usize) -> impl Strategy<Value = Vec<usize>> {
    prop::collection::vec(0usize..64, 0..max)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn search_agrees_with_brute_force(pa in parents(6), pb in parents(8)) {
        let (a, b) = (from_parents(&pa), from_parents(&pb));
        let got = find_embedding(&a, &b);
        prop_assert_eq!(got.is_some(), brute_embeds(&a, &b));
        if let Some(e) = got {
            prop_assert!(brute_is_embedding(&a, &b, &e.map));
            prop_assert!(verify_embedding(&e).unwrap().is_empty());
        }
    }

    #[test]
    fn every_tree_embeds_into_itself(p in parents(10)) {
        let t = from_parents(&p);
        let e = find_embedding(&t, &t).unwrap();
        prop_assert!(is_valid(&e));
        prop_assert!(is_valid(&Embedding::identity(Arc::new(t))));
    }

    #[test]
    fn embeddings_compose(pa in parents(4), pb in parents(6), pc in parents(8)) {
        let (a, b, c) = (from_parents(&pa), from_parents(&pb), from_parents(&pc));
        if let (Some(f), Some(g)) = (find_embedding(&a, &b), find_embedding(&b, &c)) {
            let h = f.then(&g).unwrap();
            prop_assert!(brute_is_embedding(&a, &c, &h.map));
        }
    }

    #[test]
    fn pins_are_respected(pa in parents(5), pb in parents(7), x in 0u64..6, y in 0u64..8) {
        let (a, b) = (from_parents(&pa), from_parents(&pb));
        let (x, y) = (NodeId(x % a.len() as u64), NodeId(y % b.len() as u64));
        if let Some(e) = find_embedding_with(&a, &b, &[(x, y)]) {
            prop_assert_eq!(e.get(x), Some(y));
            prop_assert!(brute_is_embedding(&a, &b, &e.map));
        }
    }

    #[test]
    fn a_corrupted_map_is_caught(pa in parents(6), pb in parents(8), i in 0usize..8, j in 0usize..8) {
        let (a, b) = (from_parents(&pa), from_parents(&pb));
        if let Some(e) = find_embedding(&a, &b) {
            let (x, y) = (a.nodes()[i % a.len()], b.nodes()[j % b.len()]);
            let mut map = e.map.clone();
            map.insert(x, y);
            let bad = Embedding::new(e.source.clone(), e.target.clone(), map.clone());
            prop_assert_eq!(is_valid(&bad), brute_is_embedding(&a, &b, &map));
        }
    }

    #[test]
    fn self_embeddings_move_something(p in parents(8)) {
        let t = from_parents(&p);
        if let Some(e) = nontrivial_self_embedding(&t) {
            prop_assert!(is_valid(&e));
            prop_assert!(!e.moved_nodes().is_empty());
        }
    }
}
