//! Staircase coding of K, a synthesized type-1 self-embedding, and K read back.

use selfembed::analysis::synthesize_type1;
use selfembed::codings::staircase::{property_checks, staircase_build, staircase_decode, GrowthMode};
use selfembed::oracles::{HonestOracle, MockCeSet};
use selfembed::NodeId;

fn main() {
    let k = MockCeSet::one_at_a_time(vec![(3, 5), (0, 9), (5, 14), (1, 20), (2, 31)]).unwrap();
    let st = staircase_build(&k, 300, GrowthMode::ExtendTop).unwrap();
    println!("{} nodes, final markers {:?}", st.presentation.len(), &st.markers.final_markers()[..6]);
    for c in property_checks(&st, &k, 5) {
        println!("  {:<12} {:?}", c.name, c.status);
    }

    let oracle = HonestOracle::new(&st.presentation).unwrap();
    let phi = synthesize_type1(&st.presentation, &oracle, 0).unwrap();
    let start = phi.target.successors(NodeId(0)).unwrap()[0];
    let d = staircase_decode(&phi, start, 5, &k).unwrap();
    let truth: Vec<bool> = (0..=5).map(|x| k.contains_at(x, u64::MAX)).collect();
    println!("psi {:?}", d.psi);
    println!("decoded {:?}\nactual  {truth:?}", d.bits);
}
