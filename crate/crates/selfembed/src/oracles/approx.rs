//! The approximations f, g, h and a to the settling stages of a family.

use std::collections::HashMap;

use super::{CeFamily, MockCeSet, OracleError};

/// Memoized `g(n,s)` for `n ≤ n_max`, `s ≤ horizon`, plus on-demand `f`, `h`, `a`.
#[derive(Clone, Debug)]
pub struct ApproxStack {
    family: CeFamily,
    k: MockCeSet,
    n_max: usize,
    horizon: u64,
    /// `g[s][n]`
    g: Vec<Vec<u64>>,
}

impl ApproxStack {
    pub fn new(family: CeFamily, k: MockCeSet, n_max: usize, horizon: u64) -> Result<Self, OracleError> {
        let needed = family.settled_by().max(k.last_stage());
        if needed > horizon {
            return Err(OracleError::HorizonTooSmall { needed, horizon });
        }
        let mut stack = ApproxStack { family, k, n_max, horizon, g: Vec::new() };
        stack.fill_g();
        Ok(stack)
    }

    fn fill_g(&mut self) {
        // prefix tuples (g(0,s),..,g(n,s)) interned as chains of ids
        let mut intern: HashMap<(u32, u64), u32> = HashMap::new();
        let mut count: Vec<u64> = Vec::new();
        let mut g = Vec::with_capacity(self.horizon as usize + 1);
        for s in 0..=self.horizon {
            let mut row = Vec::with_capacity(self.n_max + 1);
            let mut ids = Vec::with_capacity(self.n_max + 1);
            let mut parent = u32::MAX;
            let mut m = 0;
            row.push(self.family.f_stage(0, s));
            for n in 0..=self.n_max {
                let v = row[n];
                let next = intern.len() as u32;
                let id = *intern.entry((parent, v)).or_insert(next);
                if id as usize == count.len() {
                    count.push(0);
                }
                ids.push(id);
                parent = id;
                m = m.max(v);
                if n < self.n_max {
                    let k = count[id as usize];
                    row.push(self.family.f_stage(n + 1, k + m));
                }
            }
            for id in ids {
                count[id as usize] += 1;
            }
            g.push(row);
        }
        self.g = g;
    }

    pub fn family(&self) -> &CeFamily {
        &self.family
    }

    pub fn k_set(&self) -> &MockCeSet {
        &self.k
    }

    pub fn horizon(&self) -> u64 {
        self.horizon
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn f_stage(&self, n: usize, s: u64) -> u64 {
        self.family.f_stage(n, s)
    }

    /// Panics outside the memoized range.
    pub fn g_stage(&self, n: usize, s: u64) -> u64 {
        self.g[s as usize][n]
    }

    /// Last stage `≤ s` at which `K[n+1]` changed.
    pub fn h_stage(&self, n: usize, s: u64) -> u64 {
        self.k.last_change_below(n as u64 + 1, s)
    }

    pub fn a_stage(&self, n: usize, s: u64) -> u64 {
        self.g_stage(n, s).max(self.h_stage(n, s))
    }

    pub fn f_true(&self, n: usize) -> u64 {
        self.family.f_true(n)
    }

    pub fn h_true(&self, n: usize) -> u64 {
        self.k.last_change_below(n as u64 + 1, u64::MAX)
    }

    /// `h` settles, so the liminf of `max(g,h)` is `max(f,h)`.
    pub fn a_true(&self, n: usize) -> u64 {
        self.f_true(n).max(self.h_true(n))
    }

    /// `b(n) = n + Σ_{i≤n} a(i)`.
    pub fn b_true(&self, n: usize) -> u64 {
        n as u64 + (0..=n).map(|i| self.a_true(i)).sum::<u64>()
    }

    /// Stages `≤ horizon` where `g(i,s) = f(i)` for every `i ≤ n`.
    pub fn simultaneous_correct(&self, n: usize) -> Vec<u64> {
        let truth: Vec<u64> = (0..=n).map(|i| self.f_true(i)).collect();
        (0..=self.horizon).filter(|&s| (0..=n).all(|i| self.g_stage(i, s) == truth[i])).collect()
    }

    pub fn f_series(&self, n: usize) -> Vec<u64> {
        (0..=self.horizon).map(|s| self.f_stage(n, s)).collect()
    }

    pub fn g_series(&self, n: usize) -> Vec<u64> {
        (0..=self.horizon).map(|s| self.g_stage(n, s)).collect()
    }

    pub fn a_series(&self, n: usize) -> Vec<u64> {
        (0..=self.horizon).map(|s| self.a_stage(n, s)).collect()
    }
}

/// Minimum over `values[from..]`: the finite stand-in for a liminf.
pub fn late_window_min(values: &[u64], from: usize) -> Option<u64> {
    values.get(from..)?.iter().copied().min()
}

/// Least `s` such that every later value is `truth` or exceeds `k`.
pub fn threshold_stage(values: &[u64], truth: u64, k: u64) -> u64 {
    values.iter().rposition(|&v| v != truth && v <= k).map_or(0, |p| p as u64 + 1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::Periodic;

    fn mock() -> ApproxStack {
        let fam = CeFamily::new(
            vec![(2, 0), (4, 0), (9, 2)],
            vec![Periodic { set: 1, offset: 3, period: 5 }],
            Some(3),
        )
        .unwrap();
        ApproxStack::new(fam, MockCeSet::new(vec![(1, 6)]).unwrap(), 4, 2000).unwrap()
    }

    #[test]
    fn g_base_is_f() {
        let st = mock();
        for s in 0..=st.horizon() {
            assert_eq!(st.g_stage(0, s), st.f_stage(0, s));
        }
    }

    #[test]
    fn liminfs_match_truth() {
        let st = mock();
        for n in 0..=4 {
            let from = 1000;
            assert_eq!(late_window_min(&st.f_series(n), from), Some(st.f_true(n)), "f {n}");
            assert_eq!(late_window_min(&st.g_series(n), from), Some(st.f_true(n)), "g {n}");
            assert_eq!(late_window_min(&st.a_series(n), from), Some(st.a_true(n)), "a {n}");
        }
        assert!(st.simultaneous_correct(4).len() >= 10);
    }

    #[test]
    fn trivial_and_bounds() {
        let st = ApproxStack::new(CeFamily::default(), MockCeSet::empty(), 3, 50).unwrap();
        assert!((0..=3).all(|n| st.a_true(n) == 0));
        let fam = CeFamily::new(vec![(3, 0), (7, 1), (5, 2)], vec![], None).unwrap();
        let st = ApproxStack::new(fam, MockCeSet::new(vec![(0, 9)]).unwrap(), 2, 100).unwrap();
        assert!(st.a_true(2) >= 9);
        let fam = CeFamily::new(vec![(300, 0)], vec![], None).unwrap();
        assert!(matches!(
            ApproxStack::new(fam, MockCeSet::empty(), 1, 100),
            Err(OracleError::HorizonTooSmall { .. })
        ));
    }

    #[test]
    fn threshold_examples() {
        assert_eq!(threshold_stage(&[5, 1, 2, 9, 1], 1, 3), 3);
        assert_eq!(threshold_stage(&[1, 1], 1, 3), 0);
    }
}
