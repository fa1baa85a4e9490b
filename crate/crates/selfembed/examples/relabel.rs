//! Relabel an enumeration of strings by enumeration index.

use selfembed::codings::type3::{relabel_computable, Type3Tree};
use selfembed::oracles::{ApproxStack, CeFamily, MockCeSet, Periodic};
use selfembed::NodeId;

fn main() {
    let fam = CeFamily::new(vec![(1, 0)], vec![Periodic { set: 3, offset: 2, period: 3 }], Some(1)).unwrap();
    let stack = ApproxStack::new(fam, MockCeSet::new(vec![(0, 1)]).unwrap(), 12, 200).unwrap();
    let (_, strings) = Type3Tree::build(&stack, 200, 12).unwrap().presentation().unwrap();
    let rel = relabel_computable(&strings[..40]).unwrap();
    for n in 0..12u64 {
        let kids: Vec<u64> = (0..40).filter(|&m| rel.is_successor(NodeId(n), NodeId(m)) == Some(true)).collect();
        println!("{n:>2} = {:<8} successors {kids:?}", rel.strings[n as usize].to_string());
    }
}
