//! Chain or antichain certificates among settled nodes.

use selfembed::analysis::chain_or_antichain;
use selfembed::{NodeId, StagewiseTree};

fn main() {
    // a comb with 40 teeth
    let mut comb = StagewiseTree::new(NodeId(0));
    let (mut next, mut top) = (1, NodeId(0));
    for s in 1..=100 {
        let spine = NodeId(next);
        comb.attach(s, spine, top).unwrap();
        next += 1;
        if s <= 40 {
            comb.attach(s, NodeId(next), top).unwrap();
            next += 1;
        }
        top = spine;
    }
    let c = chain_or_antichain(&comb, 100, 30, 10).unwrap();
    println!("comb: {c:?} verified {}", c.verify(&comb.final_tree()));

    // two chains that keep growing
    let mut twin = StagewiseTree::new(NodeId(0));
    let mut tops = [NodeId(0), NodeId(0)];
    for s in 1..=60 {
        for t in tops.iter_mut() {
            twin.attach(s, NodeId(next), *t).unwrap();
            *t = NodeId(next);
            next += 1;
        }
    }
    let c = chain_or_antichain(&twin, 60, 30, 10).unwrap();
    println!("twin chains: {c:?} verified {}", c.verify(&twin.final_tree()));
}
