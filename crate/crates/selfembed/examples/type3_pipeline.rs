//! Type-3 tree from an approximation stack, the jump decoding, and the embedding.

use std::collections::BTreeSet;

use selfembed::analysis::{jump_decode, Type3Embedding};
use selfembed::codings::type3::{Type3Tree, Type3Truth};
use selfembed::oracles::{ApproxStack, CeFamily, MockCeSet, Periodic};

fn stack(n_max: usize, horizon: u64) -> ApproxStack {
    let fam = CeFamily::new(vec![(1, 0)], vec![Periodic { set: 3, offset: 2, period: 3 }], Some(1)).unwrap();
    ApproxStack::new(fam, MockCeSet::new(vec![(0, 1)]).unwrap(), n_max, horizon).unwrap()
}

fn main() {
    let s = stack(24, 2000);
    let t3 = Type3Tree::build(&s, 2000, 24).unwrap();
    let b: Vec<u64> = (0..=4).map(|n| s.b_true(n)).collect();
    println!("branching levels b = {b:?}");
    let looks: BTreeSet<usize> = t3
        .nodes_at(2000)
        .iter()
        .filter(|x| x.len() as u64 <= b[4] && t3.looks_branching(x, 1000, 3))
        .map(|x| x.len())
        .collect();
    println!("lengths that keep growing after stage 1000: {looks:?}");

    let truth = Type3Truth::from_stack(&stack(400, 2000), 400);
    let dec = jump_decode(&truth, t3.nodes_at(2000), s.family(), 4).unwrap();
    println!("c = {:?}", dec.witness.c);
    println!("verdicts {:?}", dec.verdicts);

    let e = Type3Embedding::new(truth).unwrap();
    for x in ["", "0", "1", "01"] {
        let x = x.parse().unwrap();
        println!("alpha({x}) = {}", e.apply(&x).unwrap());
    }
}
