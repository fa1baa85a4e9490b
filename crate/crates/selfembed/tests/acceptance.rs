//! One line per acceptance criterion. Exits nonzero if a criterion fails
//! that is not listed in `UNATTAINABLE`.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use selfembed::adversary::cac::{cac_build, cac_verify, Enumerator};
use selfembed::adversary::{isomaxinf_run, isomaxinf_verify, AdversaryPair, Fault, MapDouble, TreeDouble};
use selfembed::analysis::{
    chain_or_antichain, jump_decode, synthesize_type1, CacCertificate, Finiteness,
};
use selfembed::codings::singlepath::{
    check_tech_conditions, harden_weak, just_off, max_of_height_at_most, path_extract, singlepath_build,
    singlepath_decode,
};
use selfembed::codings::staircase::{property_checks, staircase_build, staircase_decode, GrowthMode};
use selfembed::codings::type3::{relabel_computable, Type3Tree, Type3Truth};
use selfembed::embedding::{
    find_embedding, is_valid, kruskal_index, nontrivial_self_embedding, verify_embedding, KruskalIndex,
};
use selfembed::oracles::{
    late_window_min, threshold_stage, ApproxStack, CeFamily, HonestOracle, MockCeSet, Periodic,
};
use selfembed::report::Check;
use selfembed::tree::ComponentKind;
use selfembed::{BinaryString, FiniteTree, NodeId, StagewiseTree};

use common::{brute_embeds, brute_kruskal, shapes_up_to};

/// Criteria that cannot pass as stated; the reason is printed with the line.
const UNATTAINABLE: &[(u32, &str)] = &[(
    11,
    "a window of 50 cannot confirm index 24 when it holds a 6-node tree with fewer than two later copies",
)];

/// Minimum stages of agreement after an approximation threshold.
const THRESHOLD_MARGIN: u64 = 1000;
/// Stages after which growth must be seen for a type-3 node to count as branching.
const TYPE3_AFTER: u64 = 1000;
const TYPE3_MIN_GROWTH: usize = 3;

fn k5() -> MockCeSet {
    MockCeSet::one_at_a_time(vec![(3, 5), (0, 9), (5, 14), (1, 20), (2, 31)]).unwrap()
}

fn bits(k: &MockCeSet, upto: u64) -> Vec<bool> {
    (0..=upto).map(|x| k.contains_at(x, u64::MAX)).collect()
}

/// The family used for the type-3 criteria: `A_0` finite, `A_1` fills every
/// free stage, `A_2` empty, `A_3` periodic; `K = {0}`.
fn type3_stack(n_max: usize, horizon: u64) -> ApproxStack {
    let fam = CeFamily::new(vec![(1, 0)], vec![Periodic { set: 3, offset: 2, period: 3 }], Some(1)).unwrap();
    ApproxStack::new(fam, MockCeSet::new(vec![(0, 1)]).unwrap(), n_max, horizon).unwrap()
}

fn c1() -> Result<String, String> {
    let shapes = shapes_up_to(7);
    let mut found = 0;
    for a in &shapes {
        for b in &shapes {
            let got = find_embedding(a, b);
            if got.is_some() != brute_embeds(a, b) {
                return Err(format!("disagree on {} -> {}", a.canonical_form(), b.canonical_form()));
            }
            if let Some(e) = got {
                if !verify_embedding(&e).map_err(|e| e.to_string())?.is_empty() {
                    return Err(format!("bad witness {} -> {}", a.canonical_form(), b.canonical_form()));
                }
                found += 1;
            }
        }
    }
    Ok(format!("{} shapes, {} ordered pairs, {found} embeddable", shapes.len(), shapes.len() * shapes.len()))
}

fn c2() -> Result<String, String> {
    use ComponentKind::*;
    let t = |k: ComponentKind| k.shape(0).unwrap();
    let yes = [(A, B), (A, C), (A, D), (C, D)];
    let no = [(C, B), (B, C), (B, D), (D, C)];
    for (x, y) in yes {
        if find_embedding(&t(x), &t(y)).is_none() {
            return Err(format!("{x} should embed into {y}"));
        }
    }
    for (x, y) in no {
        if find_embedding(&t(x), &t(y)).is_some() {
            return Err(format!("{x} should not embed into {y}"));
        }
    }
    Ok("4 found, 4 not-found".into())
}

fn c3() -> Result<String, String> {
    let start = Instant::now();
    let horizon = 10_000;
    let mocks = vec![
        (
            CeFamily::new(vec![(2, 0), (4, 0), (9, 2)], vec![Periodic { set: 1, offset: 3, period: 5 }], Some(3)).unwrap(),
            MockCeSet::new(vec![(1, 6)]).unwrap(),
        ),
        (
            CeFamily::new(vec![(1, 0)], vec![Periodic { set: 3, offset: 2, period: 3 }], Some(1)).unwrap(),
            MockCeSet::new(vec![(0, 1)]).unwrap(),
        ),
        (
            CeFamily::new(vec![(6, 1), (40, 1), (7, 4), (300, 0)], vec![Periodic { set: 2, offset: 1, period: 4 }], Some(3))
                .unwrap(),
            MockCeSet::one_at_a_time(vec![(2, 10), (0, 50), (4, 90)]).unwrap(),
        ),
    ];
    let mut worst_threshold = 0;
    for (m, (fam, k)) in mocks.into_iter().enumerate() {
        let st = ApproxStack::new(fam, k, 4, horizon).map_err(|e| e.to_string())?;
        let from = (horizon / 2) as usize;
        for n in 0..=4 {
            let (f, a) = (st.f_true(n), st.a_true(n));
            if late_window_min(&st.f_series(n), from) != Some(f) {
                return Err(format!("mock {m}: liminf f({n}) off"));
            }
            if late_window_min(&st.g_series(n), from) != Some(f) {
                return Err(format!("mock {m}: liminf g({n}) off"));
            }
            let series = st.a_series(n);
            if late_window_min(&series, from) != Some(a) {
                return Err(format!("mock {m}: liminf a({n}) off"));
            }
            for k in a + 1..=a + 5 {
                let th = threshold_stage(&series, a, k);
                if th + THRESHOLD_MARGIN > horizon {
                    return Err(format!("mock {m}: a({n}) threshold for k={k} at {th}"));
                }
                worst_threshold = worst_threshold.max(th);
            }
        }
        let sc = st.simultaneous_correct(4).len();
        if sc < 10 {
            return Err(format!("mock {m}: only {sc} simultaneous-correct stages"));
        }
    }
    let took = start.elapsed();
    if took > Duration::from_secs(30) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("3 mocks, latest threshold {worst_threshold}, {took:.2?}"))
}

fn c4() -> Result<String, String> {
    let k = k5();
    let st = staircase_build(&k, 300, GrowthMode::ExtendTop).map_err(|e| e.to_string())?;
    let bad: Vec<Check> = property_checks(&st, &k, 5).into_iter().filter(|c| !c.passed()).collect();
    if !bad.is_empty() {
        return Err(format!("{bad:?}"));
    }
    let o = HonestOracle::new(&st.presentation).map_err(|e| e.to_string())?;
    let phi = synthesize_type1(&st.presentation, &o, 0).map_err(|e| e.to_string())?;
    if !is_valid(&phi) {
        return Err("synthesized map is not an embedding".into());
    }
    let n0 = phi.target.successors(NodeId(0)).unwrap()[0];
    let d = staircase_decode(&phi, n0, 5, &k).map_err(|e| e.to_string())?;
    if d.bits != bits(&k, 5) {
        return Err(format!("decoded {:?}", d.bits));
    }
    Ok(format!("301 stages, ψ = {:?}", &d.psi[..6]))
}

fn c5() -> Result<String, String> {
    let k = k5();
    let p = singlepath_build(&k, 500).map_err(|e| e.to_string())?;
    let t = p.final_tree();
    let tech = check_tech_conditions(&t);
    if !tech.is_empty() {
        return Err(format!("tech: {tech:?}"));
    }
    if t.max_branching() > 2 {
        return Err("not binary".into());
    }
    let o = HonestOracle::new(&p).map_err(|e| e.to_string())?;
    let path = path_extract(&o, NodeId(0)).map_err(|e| e.to_string())?;
    for n in 0..=12u32 {
        if Some(path[n as usize]) != max_of_height_at_most(&t, n) {
            return Err(format!("x_{n} is not the largest node of height ≤ {n}"));
        }
    }
    let dec = singlepath_decode(&k, &path, 9).map_err(|e| e.to_string())?;
    if dec != bits(&k, 8) {
        return Err(format!("decoded {dec:?}"));
    }
    let h = harden_weak(&k, 500).map_err(|e| e.to_string())?;
    let ht = h.final_tree();
    let hpath = h.truth().and_then(|g| g.isolated_path.clone()).ok_or("hardened tree has no path")?;
    let sides = just_off(&ht, &hpath);
    for &n in &sides {
        if nontrivial_self_embedding(&ht.subtree(n).unwrap()).is_some() {
            return Err(format!("side tree at {n} has a nontrivial self-embedding"));
        }
    }
    Ok(format!("{} nodes, K[0..=8] decoded, {} rigid side trees", t.len(), sides.len()))
}

fn c6() -> Result<String, String> {
    let start = Instant::now();
    let (horizon, depth) = (2000, 24);
    let stack = type3_stack(depth, horizon);
    let t3 = Type3Tree::build(&stack, horizon, depth).map_err(|e| e.to_string())?;
    let b: Vec<u64> = (0..=4).map(|n| stack.b_true(n)).collect();
    let seen: BTreeSet<u64> = t3
        .nodes_at(horizon)
        .into_iter()
        .filter(|x| x.len() as u64 <= b[4] && t3.looks_branching(x, TYPE3_AFTER, TYPE3_MIN_GROWTH))
        .map(|x| x.len() as u64)
        .collect();
    if seen != b.iter().copied().collect() {
        return Err(format!("branching lengths {seen:?}, expected {b:?}"));
    }
    let oracle = type3_stack(400, horizon);
    let truth = Type3Truth::from_stack(&oracle, 400);
    let dec = jump_decode(&truth, t3.nodes_at(horizon), stack.family(), 4).map_err(|e| e.to_string())?;
    for (n, (&c, &bn)) in dec.witness.c.iter().zip(&b).take(4).enumerate() {
        if (c as u64) < bn {
            return Err(format!("c({n}) = {c} < b({n}) = {bn}"));
        }
    }
    let want: Vec<Finiteness> = (0..=3)
        .map(|n| if stack.family().is_infinite(n) { Finiteness::Infinite } else { Finiteness::Finite })
        .collect();
    if dec.verdicts != want {
        return Err(format!("verdicts {:?}", dec.verdicts));
    }
    let took = start.elapsed();
    if took > Duration::from_secs(120) {
        return Err(format!("took {took:?}"));
    }
    Ok(format!("b = {b:?}, c = {:?}, {took:.2?}", dec.witness.c))
}

/// The tree of a prefix-closed set of strings, node `i` for `strings[i]`.
fn string_tree(strings: &[BinaryString]) -> FiniteTree {
    let pos = |x: &BinaryString| strings.iter().position(|y| y == x).map(|i| NodeId(i as u64));
    let ev: Vec<(NodeId, Option<NodeId>)> =
        strings.iter().enumerate().map(|(i, x)| (NodeId(i as u64), x.parent().and_then(|p| pos(&p)))).collect();
    FiniteTree::from_events(ev).unwrap()
}

fn c7() -> Result<String, String> {
    let stack = type3_stack(12, 200);
    let t3 = Type3Tree::build(&stack, 200, 12).map_err(|e| e.to_string())?;
    let (_, strings) = t3.presentation().map_err(|e| e.to_string())?;
    if strings.len() < 200 {
        return Err(format!("only {} strings enumerated", strings.len()));
    }
    let rel = relabel_computable(&strings[..200]).map_err(|e| e.to_string())?;
    let first = |n: usize| rel.tree.restrict(|x| x.0 < n as u64).unwrap();
    let (r50, s50) = (first(50), string_tree(&strings[..50]));
    if find_embedding(&r50, &s50).is_none() || find_embedding(&s50, &r50).is_none() {
        return Err("50-node truncations are not mutually embeddable".into());
    }
    for n in 0..200u64 {
        for m in 0..200u64 {
            let want = strings[m as usize].parent().as_ref() == Some(&strings[n as usize]);
            if rel.is_successor(NodeId(n), NodeId(m)) != Some(want) {
                return Err(format!("successor test wrong on ({n}, {m})"));
            }
        }
    }
    Ok("50-node truncations embed both ways, 40000 successor queries agree".into())
}

fn mirror_pairs() -> Vec<AdversaryPair> {
    vec![
        AdversaryPair::new("0,0", TreeDouble::Mirror { delay: 2 }, MapDouble::Shift),
        AdversaryPair::new("1,1", TreeDouble::Mirror { delay: 5 }, MapDouble::Shift),
        AdversaryPair::new("2,0", TreeDouble::Mirror { delay: 11 }, MapDouble::Shift),
        AdversaryPair::new("3,2", TreeDouble::Tall { delay: 1, stage: 40 }, MapDouble::Shift),
        AdversaryPair::new("4,0", TreeDouble::Empty, MapDouble::None),
    ]
}

fn c8() -> Result<String, String> {
    let run = isomaxinf_run(mirror_pairs(), 1000, None);
    let checks = isomaxinf_verify(&run.trace, 900);
    let bad: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
    if !bad.is_empty() {
        return Err(format!("{bad:?}"));
    }
    let diags = run.trace.iter().flat_map(|r| &r.acts).filter(|a| a.diag.is_some()).count();
    if diags == 0 {
        return Err("no diagonalization happened".into());
    }
    let faulty = isomaxinf_run(mirror_pairs(), 1000, Some(Fault { stage: 500 }));
    let failed: Vec<String> =
        isomaxinf_verify(&faulty.trace, 900).into_iter().filter(|c| !c.passed()).map(|c| c.name).collect();
    if failed != ["setup_protection"] {
        return Err(format!("fault fixture failed {failed:?}"));
    }
    Ok(format!("{} checks pass, {diags} diagonalizations, fault trips setup_protection only", checks.len()))
}

fn c9() -> Result<String, String> {
    let ws = Enumerator::shipped();
    let run = cac_build(&ws, 500, None);
    let (checks, cases) = cac_verify(&run.trace, 2 * ws.len());
    let bad: Vec<&Check> = checks.iter().filter(|c| !c.passed()).collect();
    if !bad.is_empty() {
        return Err(format!("{bad:?}"));
    }
    let t = run.tree.final_tree();
    let kids: BTreeSet<usize> = t.nodes().iter().map(|&x| t.branching(x).unwrap()).collect();
    if !kids.is_subset(&BTreeSet::from([0, 2])) {
        return Err(format!("branching values {kids:?}"));
    }
    if cases.len() != 2 * ws.len() {
        return Err(format!("{} of {} requirements settled", cases.len(), 2 * ws.len()));
    }
    let won = cases.values().filter(|c| matches!(c, selfembed::adversary::cac::CacCase::Succeeded { .. })).count();
    Ok(format!("{} nodes, {won} succeeded, {} stable", t.len(), cases.len() - won))
}

fn c10() -> Result<String, String> {
    // a comb: one tooth per stage for 40 stages, then only the spine grows
    let mut comb = StagewiseTree::new(NodeId(0));
    let mut next = 1;
    let mut top = NodeId(0);
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
    let anti = chain_or_antichain(&comb, 100, 30, 10).map_err(|e| e.to_string())?;
    if !matches!(&anti, CacCertificate::Antichain(v) if v.len() == 30) || !anti.verify(&comb.final_tree()) {
        return Err(format!("comb gave {anti:?}"));
    }
    // two chains that never stop growing: no stable leaf
    let mut twin = StagewiseTree::new(NodeId(0));
    let mut tops = [NodeId(0), NodeId(0)];
    for s in 1..=60 {
        for top in tops.iter_mut() {
            twin.attach(s, NodeId(next), *top).unwrap();
            *top = NodeId(next);
            next += 1;
        }
    }
    let chain = chain_or_antichain(&twin, 60, 30, 10).map_err(|e| e.to_string())?;
    if !matches!(&chain, CacCertificate::Chain(v) if v.len() == 30) || !chain.verify(&twin.final_tree()) {
        return Err(format!("twin chains gave {chain:?}"));
    }
    Ok("30-antichain on the 40-tooth comb, 30-chain on the leafless twin".into())
}

fn c11() -> Result<String, String> {
    let mut ks = Vec::new();
    let mut inconsistent = Vec::new();
    for seed in 0..20u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let seq: Vec<FiniteTree> = (0..50).map(|_| FiniteTree::random(&mut rng, 6)).collect();
        let got = kruskal_index(&seq, 50);
        let want = brute_kruskal(&seq, 50);
        match (got, want) {
            (KruskalIndex::Index(k), Some(w)) if k == w => ks.push(k),
            (KruskalIndex::Inconsistent, None) => inconsistent.push(seed),
            _ => return Err(format!("seed {seed}: {got:?} but brute force gives {want:?}")),
        }
    }
    let chains: Vec<FiniteTree> = (1..=50).map(|n| FiniteTree::chain(&(0..n).collect::<Vec<_>>())).collect();
    if kruskal_index(&chains, 50) != KruskalIndex::Index(0) {
        return Err("increasing chains".into());
    }
    let mut starred = vec![FiniteTree::star(10)];
    starred.extend((1..=49).map(|n| FiniteTree::chain(&(0..n).collect::<Vec<_>>())));
    if kruskal_index(&starred, 50) != KruskalIndex::Index(1) {
        return Err("star-prefixed sequence".into());
    }
    if !inconsistent.is_empty() {
        return Err(format!(
            "chains k=0 and star k=1 hold; {} of 20 random sequences inconsistent (seeds {inconsistent:?}), the rest give k in {ks:?}",
            inconsistent.len()
        ));
    }
    Ok(format!("k values {ks:?}"))
}

type Criterion = fn() -> Result<String, String>;

fn main() {
    let criteria: Vec<(u32, &str, Criterion)> = vec![
        (1, "find_embedding agrees with brute force on all trees with at most 7 nodes", c1),
        (2, "component embedding table", c2),
        (3, "approximation stack liminfs, thresholds and simultaneous correctness", c3),
        (4, "staircase properties and decode through a synthesized self-embedding", c4),
        (5, "single-path tree, path, decoding and rigid hardened side trees", c5),
        (6, "type-3 branching levels, domination and jump verdicts", c6),
        (7, "computable relabeling of the type-3 enumeration", c7),
        (8, "isomaxinf against mirrored opponents, with a fault fixture", c8),
        (9, "chain/antichain construction against six enumerators", c9),
        (10, "chain or antichain certificates", c10),
        (11, "Kruskal window index", c11),
    ];
    let mut unexpected = 0;
    for (n, title, f) in criteria {
        let start = Instant::now();
        let res = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let known = UNATTAINABLE.iter().find(|u| u.0 == n);
        match (&res, known) {
            (Ok(d), _) => println!("[PASS] {n:>2} {title}: {d} ({:.2?})", start.elapsed()),
            (Err(d), Some((_, why))) => println!("[FAIL] {n:>2} {title}: {d}; unattainable: {why}"),
            (Err(d), None) => {
                unexpected += 1;
                println!("[FAIL] {n:>2} {title}: {d}");
            }
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
