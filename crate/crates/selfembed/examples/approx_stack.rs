//! Limit approximations f, g and a of a mock c.e. family.

use selfembed::oracles::{late_window_min, threshold_stage, ApproxStack, CeFamily, MockCeSet, Periodic};

fn main() {
    let fam = CeFamily::new(vec![(2, 0), (4, 0), (9, 2)], vec![Periodic { set: 1, offset: 3, period: 5 }], Some(3)).unwrap();
    let st = ApproxStack::new(fam, MockCeSet::new(vec![(1, 6)]).unwrap(), 4, 10_000).unwrap();
    for n in 0..=4 {
        let a = st.a_series(n);
        println!(
            "n={n}: f={} liminf f={:?}  a={} liminf a={:?}  threshold for a+1 at stage {}",
            st.f_true(n),
            late_window_min(&st.f_series(n), 5000),
            st.a_true(n),
            late_window_min(&a, 5000),
            threshold_stage(&a, st.a_true(n), st.a_true(n) + 1),
        );
    }
    let sc = st.simultaneous_correct(4);
    println!("{} stages correct for all n <= 4, first few {:?}", sc.len(), &sc[..sc.len().min(8)]);
}
