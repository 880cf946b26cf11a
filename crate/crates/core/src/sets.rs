//! Cells of a fixed-leading-term class, as used by the lead-shifting bijections.
//!
//! All statistics come from the 0-flaw embedding. In the unbounded family
//! `P_{n,n+k;<=n+k}` the sequence already parks, and `k` is its number of empty spaces.
//! In the bounded family `P_{n;<=s;k}`, `k` is the number of flaws.

use crate::parking::{embed, park, LeadingStats, PreferenceSet};

/// Leading statistics and the embedded empty spaces of one preference set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Profile {
    pub stats: LeadingStats,
    pub empty_spaces: Vec<usize>,
}

impl Profile {
    /// Panics on the empty sequence, which has no leading term.
    pub fn of(pref: &PreferenceSet) -> Self {
        let e = embed(pref);
        let o = park(&e);
        let stats = crate::parking::leading_stats(&e, &o).expect("nonempty embedded sequence");
        Self {
            stats,
            empty_spaces: o.empty_spaces,
        }
    }

    fn tight(&self) -> bool {
        let s = &self.stats;
        s.tau + s.h == s.l && s.t == 1
    }

    /// Car 1 can move one step right inside its own tree: `τ > l − h` or `t ≥ 2`.
    pub fn shift_source(&self) -> bool {
        !self.tight()
    }

    /// Image side of the in-tree shift: for leading term `l + 1`, `l ≥ g + 1`.
    pub fn shift_target(&self) -> bool {
        self.stats.l >= self.stats.g + 2
    }

    /// Car 1 must move to the next tree: tight and `h ≤ k − 1`.
    pub fn root_shift_source(&self, k: usize) -> bool {
        self.tight() && self.stats.h + 1 <= k
    }

    /// Image side of the root shift: for leading term `l + 1`, `l = g`.
    pub fn root_shift_target(&self) -> bool {
        self.stats.l == self.stats.g + 1
    }

    /// Tight with every empty space below the leading term: `h = k`.
    pub fn critical(&self, k: usize) -> bool {
        self.tight() && self.stats.h == k
    }

    /// `k`-th smallest empty space of the embedding (1-based), or 0.
    pub fn kth_empty(&self, k: usize) -> usize {
        if k == 0 {
            return 0;
        }
        self.empty_spaces.get(k - 1).copied().unwrap_or(0)
    }

    // Bounded family, k flaws.

    pub fn bounded_shift_source(&self, k: usize) -> bool {
        self.stats.h + 1 <= k && !self.tight()
    }

    pub fn bounded_shift_target(&self, k: usize) -> bool {
        self.stats.h + 1 <= k && self.shift_target()
    }

    pub fn bounded_root_shift_source(&self, k: usize) -> bool {
        self.tight() && self.stats.h + 2 <= k
    }

    pub fn bounded_root_shift_target(&self, k: usize) -> bool {
        self.stats.h + 1 <= k && self.root_shift_target()
    }

    /// Tight with `h = k − 1`.
    pub fn bounded_critical(&self, k: usize) -> bool {
        k >= 1 && self.tight() && self.stats.h + 1 == k
    }

    /// Largest empty space lies below the leading term.
    pub fn low_gap(&self) -> bool {
        self.stats.m_a < self.stats.l
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::ClassSpec;
    use crate::enumerate::{ClassIter, DEFAULT_BUDGET};

    fn members(spec: ClassSpec) -> Vec<PreferenceSet> {
        ClassIter::new(spec, DEFAULT_BUDGET).unwrap().collect()
    }

    #[test]
    fn unbounded_cells_partition() {
        for n in 1..=4 {
            for k in 0..=2 {
                let m = n + k;
                for l in 1..=m {
                    for p in members(ClassSpec::exact(n, m, m, 0, Some(l)).unwrap()) {
                        let pr = Profile::of(&p);
                        let cells = [pr.shift_source(), pr.root_shift_source(k), pr.critical(k)];
                        assert_eq!(cells.iter().filter(|&&c| c).count(), 1, "{p}");
                        if l >= 2 {
                            assert!(pr.shift_target() ^ pr.root_shift_target(), "{p}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bounded_cells_partition() {
        for n in 2..=5 {
            for s in 1..=n {
                for k in 1..n {
                    for l in 1..=s {
                        for p in members(ClassSpec::bounded(n, s, k, Some(l)).unwrap()) {
                            let pr = Profile::of(&p);
                            let cells = [
                                pr.bounded_shift_source(k),
                                pr.bounded_root_shift_source(k),
                                pr.bounded_critical(k),
                                pr.low_gap(),
                            ];
                            assert_eq!(cells.iter().filter(|&&c| c).count(), 1, "{p} k={k}");
                        }
                    }
                }
            }
        }
    }
}
