use std::collections::BTreeSet;

use proptest::prelude::*;

use selfembed::analysis::synthesize_type1;
use selfembed::codings::singlepath::{
    check_tech_conditions, max_of_height_at_most, path_extract, singlepath_build, singlepath_decode,
};
use selfembed::codings::staircase::{property_checks, staircase_build, staircase_decode, GrowthMode};
use selfembed::codings::type3::{relabel_computable, tau_from, Type3Truth};
use selfembed::oracles::{HonestOracle, MockCeSet};
use selfembed::{BinaryString, NodeId};

/// A one-at-a-time set: distinct elements below 6 at distinct stages in `1..=40`.
fn k_set() -> impl Strategy<Value = MockCeSet> {
    (prop::sample::subsequence((0u64..6).collect::<Vec<_>>(), 0..=6), prop::collection::btree_set(1u64..=40, 6))
        .prop_shuffle_elements()
        .prop_map(|(xs, stages)| MockCeSet::one_at_a_time(xs.into_iter().zip(stages).collect()).unwrap())
}

trait ShuffleFirst {
    fn prop_shuffle_elements(self) -> BoxedStrategy<(Vec<u64>, BTreeSet<u64>)>;
}

impl<S: Strategy<Value = (Vec<u64>, BTreeSet<u64>)> + 'static> ShuffleFirst for S {
    fn prop_shuffle_elements(self) -> BoxedStrategy<(Vec<u64>, BTreeSet<u64>)> {
        self.prop_flat_map(|(xs, st)| (Just(xs).prop_shuffle(), Just(st))).boxed()
    }
}

fn bits(k: &MockCeSet, upto: u64) -> Vec<bool> {
    (0..=upto).map(|x| k.contains_at(x, u64::MAX)).collect()
}

fn binary(max: usize) -> impl Strategy<Value = BinaryString> {
    prop::collection::vec(any::<bool>(), 0..max).prop_map(BinaryString::from_bits)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn staircase_properties_hold(k in k_set()) {
        for mode in [GrowthMode::ExtendTop, GrowthMode::InsertBottom] {
            let st = staircase_build(&k, 150, mode).unwrap();
            for c in property_checks(&st, &k, 3) {
                prop_assert!(c.passed(), "{:?} {:?}", mode, c);
            }
        }
    }

    #[test]
    fn singlepath_decodes(k in k_set()) {
        let p = singlepath_build(&k, 200).unwrap();
        let t = p.final_tree();
        prop_assert!(check_tech_conditions(&t).is_empty());
        prop_assert!(t.max_branching() <= 2);
        let o = HonestOracle::new(&p).unwrap();
        let path = path_extract(&o, NodeId(0)).unwrap();
        for n in 0..=8u32 {
            prop_assert_eq!(Some(path[n as usize]), max_of_height_at_most(&t, n));
        }
        prop_assert_eq!(singlepath_decode(&k, &path, 6).unwrap(), bits(&k, 5));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(4))]

    // the orbit needs i_max + 3 components with rising floors, so the
    // horizon must leave room for them
    #[test]
    fn staircase_decodes_through_synthesized_map(k in k_set()) {
        let st = staircase_build(&k, 300, GrowthMode::ExtendTop).unwrap();
        let o = HonestOracle::new(&st.presentation).unwrap();
        let phi = synthesize_type1(&st.presentation, &o, 0).unwrap();
        let n0 = phi.target.successors(NodeId(0)).unwrap()[0];
        let d = staircase_decode(&phi, n0, 3, &k).unwrap();
        prop_assert_eq!(d.bits, bits(&k, 3));
    }
}

proptest! {
    #[test]
    fn tau_pads_before_each_bit(a in prop::collection::vec(0u64..5, 1..6), seed in binary(6)) {
        let mut s = seed.bits().to_vec();
        s.resize(a.len(), false);
        let sigma = BinaryString::from_bits(s);
        let tau = tau_from(&a, &sigma).unwrap();
        prop_assert_eq!(tau.len() as u64, a.iter().sum::<u64>() + a.len() as u64);
        let truth = Type3Truth::from_padding(&a);
        // the bits of σ sit exactly on the branching levels
        for (i, &lvl) in truth.levels().iter().enumerate() {
            prop_assert_eq!(tau.bits()[lvl as usize], sigma.bits()[i]);
        }
        prop_assert!(truth.is_infinite(&tau.prefix(tau.len())).unwrap());
    }

    #[test]
    fn relabel_matches_prefix_order(strings in prop::collection::btree_set(binary(7), 1..40)) {
        // close under prefixes and list shortest first
        let mut all: BTreeSet<(usize, BinaryString)> = BTreeSet::new();
        for s in &strings {
            for l in 0..=s.len() {
                all.insert((l, s.prefix(l)));
            }
        }
        let list: Vec<BinaryString> = all.into_iter().map(|(_, s)| s).collect();
        let rel = relabel_computable(&list).unwrap();
        for n in 0..list.len() {
            for m in 0..list.len() {
                let (a, b) = (NodeId(n as u64), NodeId(m as u64));
                prop_assert_eq!(rel.is_successor(a, b), Some(list[m].parent().as_ref() == Some(&list[n])));
                prop_assert_eq!(rel.leq(a, b), Some(rel.tree.is_leq(a, b).unwrap()));
            }
        }
    }
}

#[test]
fn relabel_rejects_children_before_parents() {
    let s = |t: &str| BinaryString::try_from(t.to_string()).unwrap();
    assert!(relabel_computable(&[s(""), s("01"), s("0")]).is_err());
    assert!(relabel_computable(&[s(""), s("0"), s("0")]).is_err());
}
