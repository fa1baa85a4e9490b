//! Finitely described enumerations standing in for c.e. sets.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::OracleError;

/// A c.e. set given by its enumeration events `(element, stage)`.
/// `x ∈ K_s` iff `x` was enumerated at some stage `≤ s`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct MockCeSet {
    events: Vec<(u64, u64)>,
    pub declared_complete: bool,
}

impl MockCeSet {
    /// Events are sorted by stage; stages start at 1.
    pub fn new(mut events: Vec<(u64, u64)>) -> Result<Self, OracleError> {
        events.sort_by_key(|&(x, s)| (s, x));
        let mut seen = BTreeSet::new();
        for &(x, s) in &events {
            if s == 0 {
                return Err(OracleError::StageZero(x));
            }
            if !seen.insert(x) {
                return Err(OracleError::DuplicateElement(x));
            }
        }
        Ok(MockCeSet { events, declared_complete: true })
    }

    pub fn empty() -> Self {
        MockCeSet { events: Vec::new(), declared_complete: true }
    }

    /// As [`MockCeSet::new`] but also requiring at most one element per stage.
    pub fn one_at_a_time(events: Vec<(u64, u64)>) -> Result<Self, OracleError> {
        let k = Self::new(events)?;
        for w in k.events.windows(2) {
            if w[0].1 == w[1].1 {
                return Err(OracleError::SameStage(w[1].1));
            }
        }
        Ok(k)
    }

    pub fn events(&self) -> &[(u64, u64)] {
        &self.events
    }

    /// `K_s[n] = {x ∈ K_s : x < n}`.
    pub fn prefix(&self, s: u64, n: u64) -> BTreeSet<u64> {
        self.events.iter().filter(|&&(x, t)| t <= s && x < n).map(|&(x, _)| x).collect()
    }

    /// `K[n]` in the limit.
    pub fn limit_prefix(&self, n: u64) -> BTreeSet<u64> {
        self.prefix(u64::MAX, n)
    }

    pub fn contains_at(&self, x: u64, s: u64) -> bool {
        self.events.iter().any(|&(y, t)| y == x && t <= s)
    }

    /// The element enumerated at exactly stage `s`, if any.
    pub fn enumerated_at(&self, s: u64) -> Option<u64> {
        self.events.iter().find(|&&(_, t)| t == s).map(|&(x, _)| x)
    }

    /// Last stage at which anything was enumerated (0 if nothing).
    pub fn last_stage(&self) -> u64 {
        self.events.last().map_or(0, |e| e.1)
    }

    /// Last stage `≤ s` at which an element `< n` entered (0 if none).
    pub fn last_change_below(&self, n: u64, s: u64) -> u64 {
        self.events.iter().filter(|&&(x, t)| x < n && t <= s).map(|&(_, t)| t).max().unwrap_or(0)
    }
}

/// A periodic generator: the set receives an element at `offset + j·period`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Periodic {
    pub set: usize,
    pub offset: u64,
    pub period: u64,
}

impl Periodic {
    fn fires(&self, s: u64) -> bool {
        s >= self.offset && (s - self.offset).is_multiple_of(self.period)
    }
    fn last_at_or_before(&self, s: u64) -> Option<u64> {
        if s < self.offset {
            None
        } else {
            Some(s - (s - self.offset) % self.period)
        }
    }
}

/// A uniformly enumerated family `A_0, A_1, …`: at most one set gets an
/// element per stage. Sets with a periodic generator, and the optional
/// filler set (which receives every stage nobody else claims), are the
/// infinite ones; all others are finite.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CeFamily {
    explicit: BTreeMap<u64, usize>,
    per_set: BTreeMap<usize, Vec<u64>>,
    periodic: Vec<Periodic>,
    filler: Option<usize>,
}

impl CeFamily {
    pub fn new(explicit: Vec<(u64, usize)>, periodic: Vec<Periodic>, filler: Option<usize>) -> Result<Self, OracleError> {
        let mut ex = BTreeMap::new();
        let mut per_set: BTreeMap<usize, Vec<u64>> = BTreeMap::new();
        for (s, n) in explicit {
            if s == 0 {
                return Err(OracleError::StageZero(n as u64));
            }
            if ex.insert(s, n).is_some() {
                return Err(OracleError::Collision(s));
            }
            per_set.entry(n).or_default().push(s);
        }
        for p in &periodic {
            if p.period == 0 || p.offset == 0 {
                return Err(OracleError::BadPeriodic(p.set));
            }
            if Some(p.set) == filler || per_set.contains_key(&p.set) {
                return Err(OracleError::BadPeriodic(p.set));
            }
            if let Some((&s, _)) = ex.iter().find(|(&s, _)| p.fires(s)) {
                return Err(OracleError::Collision(s));
            }
        }
        for (i, p) in periodic.iter().enumerate() {
            for q in &periodic[i + 1..] {
                if p.set == q.set {
                    return Err(OracleError::BadPeriodic(p.set));
                }
                let g = gcd(p.period, q.period);
                if p.offset % g == q.offset % g {
                    return Err(OracleError::Collision(first_common(p, q)));
                }
            }
        }
        if let Some(f) = filler {
            if per_set.contains_key(&f) {
                return Err(OracleError::BadPeriodic(f));
            }
        }
        for v in per_set.values_mut() {
            v.sort_unstable();
        }
        Ok(CeFamily { explicit: ex, per_set, periodic, filler })
    }

    /// Which set gets an element at stage `s`.
    pub fn fires(&self, s: u64) -> Option<usize> {
        if s == 0 {
            return None;
        }
        if let Some(&n) = self.explicit.get(&s) {
            return Some(n);
        }
        if let Some(p) = self.periodic.iter().find(|p| p.fires(s)) {
            return Some(p.set);
        }
        self.filler
    }

    pub fn is_infinite(&self, n: usize) -> bool {
        Some(n) == self.filler || self.periodic.iter().any(|p| p.set == n)
    }

    /// Sets mentioned anywhere in the description.
    pub fn mentioned_sets(&self) -> BTreeSet<usize> {
        let mut s: BTreeSet<usize> = self.per_set.keys().copied().collect();
        s.extend(self.periodic.iter().map(|p| p.set));
        s.extend(self.filler);
        s
    }

    pub fn filler(&self) -> Option<usize> {
        self.filler
    }

    pub fn periodic(&self) -> &[Periodic] {
        &self.periodic
    }

    pub fn explicit(&self) -> &BTreeMap<u64, usize> {
        &self.explicit
    }

    /// Last stage `≤ s` at which `A_n` got an element.
    pub fn last_event_at_or_before(&self, n: usize, s: u64) -> Option<u64> {
        if s == 0 {
            return None;
        }
        if Some(n) == self.filler {
            let mut t = s;
            while t >= 1 {
                if self.fires(t) == Some(n) {
                    return Some(t);
                }
                t -= 1;
            }
            return None;
        }
        if let Some(p) = self.periodic.iter().find(|p| p.set == n) {
            return p.last_at_or_before(s);
        }
        let v = self.per_set.get(&n)?;
        match v.partition_point(|&t| t <= s) {
            0 => None,
            k => Some(v[k - 1]),
        }
    }

    /// Does `A_n` get an element at some stage `> s`?
    pub fn has_event_after(&self, n: usize, s: u64) -> bool {
        if self.is_infinite(n) {
            return true;
        }
        self.per_set.get(&n).is_some_and(|v| v.last().is_some_and(|&t| t > s))
    }

    /// Last event of a finite set (0 for empty or infinite sets).
    pub fn last_event_of_finite(&self, n: usize) -> u64 {
        if self.is_infinite(n) {
            return 0;
        }
        self.per_set.get(&n).and_then(|v| v.last().copied()).unwrap_or(0)
    }

    /// Least stage by which every finite set among `A_0..A_n` is complete.
    pub fn f_true(&self, n: usize) -> u64 {
        (0..=n).map(|j| self.last_event_of_finite(j)).max().unwrap_or(0)
    }

    /// Last stage at which any finite set received an element.
    pub fn settled_by(&self) -> u64 {
        self.per_set.values().filter_map(|v| v.last().copied()).max().unwrap_or(0)
    }

    /// The three-case approximation `f(n,s)`.
    pub fn f_stage(&self, n: usize, s: u64) -> u64 {
        let last: Vec<Option<u64>> = (0..=n).map(|j| self.last_event_at_or_before(j, s)).collect();
        if last.iter().all(|l| l.is_none()) {
            return 0;
        }
        let i = match self.fires(s) {
            Some(i) if i <= n => i,
            _ => return last.iter().flatten().copied().max().unwrap_or(0),
        };
        let t = self.last_event_at_or_before(i, s - 1).unwrap_or(0);
        // j ∉ I iff A_j got nothing in (t, s]
        (0..=n)
            .filter(|&j| last[j].is_none_or(|l| l <= t))
            .filter_map(|j| last[j])
            .max()
            .unwrap_or(0)
    }
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

fn first_common(p: &Periodic, q: &Periodic) -> u64 {
    let mut s = p.offset.max(q.offset);
    while !(p.fires(s) && q.fires(s)) {
        s += 1;
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn prefix_examples() {
        let k = MockCeSet::new(vec![(2, 1), (5, 3)]).unwrap();
        assert_eq!(k.prefix(2, 10), BTreeSet::from([2]));
        assert!(k.prefix(0, 100).is_empty());
        assert_eq!(k.prefix(3, 5), BTreeSet::from([2]));
        assert!(MockCeSet::new(vec![(1, 1), (1, 2)]).is_err());
        assert!(MockCeSet::one_at_a_time(vec![(1, 2), (3, 2)]).is_err());
    }

    #[test]
    fn f_stage_hand_example() {
        // A0@1, A1@2, A1@3
        let fam = CeFamily::new(vec![(1, 0), (2, 1), (3, 1)], vec![], None).unwrap();
        assert_eq!(fam.f_stage(1, 3), 1);
        assert_eq!(fam.f_stage(1, 0), 0);
    }

    #[test]
    fn f_true_examples() {
        let fam = CeFamily::new(vec![(4, 0)], vec![Periodic { set: 1, offset: 1, period: 2 }], None).unwrap();
        assert_eq!(fam.f_true(1), 4);
        let all_inf = CeFamily::new(vec![], vec![Periodic { set: 0, offset: 1, period: 2 }], Some(1)).unwrap();
        assert_eq!(all_inf.f_true(1), 0);
        let fin = CeFamily::new(vec![(3, 0), (7, 1), (5, 2)], vec![], None).unwrap();
        assert_eq!(fin.f_true(2), 7);
    }

    #[test]
    fn collisions_are_rejected() {
        assert!(CeFamily::new(vec![(3, 0)], vec![Periodic { set: 1, offset: 1, period: 2 }], None).is_err());
        let p = Periodic { set: 1, offset: 1, period: 4 };
        let q = Periodic { set: 2, offset: 5, period: 6 };
        assert!(CeFamily::new(vec![], vec![p, q], None).is_err());
        let q = Periodic { set: 2, offset: 2, period: 6 };
        assert!(CeFamily::new(vec![], vec![p, q], None).is_ok());
    }

    #[test]
    fn filler_takes_unclaimed_stages() {
        let fam = CeFamily::new(vec![(2, 0)], vec![Periodic { set: 1, offset: 3, period: 3 }], Some(2)).unwrap();
        let got: Vec<Option<usize>> = (0..8).map(|s| fam.fires(s)).collect();
        assert_eq!(got, vec![None, Some(2), Some(0), Some(1), Some(2), Some(2), Some(1), Some(2)]);
        assert_eq!(fam.last_event_at_or_before(2, 6), Some(5));
        assert_eq!(fam.last_event_at_or_before(1, 5), Some(3));
    }
}
