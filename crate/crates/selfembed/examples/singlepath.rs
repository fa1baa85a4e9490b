//! Single-path coding, path extraction, decoding and the hardened variant.

use selfembed::codings::singlepath::{
    check_tech_conditions, harden_weak, just_off, path_extract, singlepath_build, singlepath_decode,
};
use selfembed::embedding::nontrivial_self_embedding;
use selfembed::oracles::{HonestOracle, MockCeSet};
use selfembed::NodeId;

fn main() {
    let k = MockCeSet::one_at_a_time(vec![(3, 5), (0, 9), (5, 14), (1, 20), (2, 31)]).unwrap();
    let p = singlepath_build(&k, 500).unwrap();
    let t = p.final_tree();
    println!("{} nodes, max branching {}, tech violations {:?}", t.len(), t.max_branching(), check_tech_conditions(&t));

    let oracle = HonestOracle::new(&p).unwrap();
    let path = path_extract(&oracle, NodeId(0)).unwrap();
    println!("path {:?}", &path[..10]);
    println!("decoded {:?}", singlepath_decode(&k, &path, 9).unwrap());

    let h = harden_weak(&k, 500).unwrap();
    let ht = h.final_tree();
    let hp = h.truth().and_then(|g| g.isolated_path.clone()).unwrap();
    for n in just_off(&ht, &hp) {
        let side = ht.subtree(n).unwrap();
        println!("side tree at {n}: {} nodes, rigid {}", side.len(), nontrivial_self_embedding(&side).is_none());
    }
}
