//! Exhaustive certification of the forest correspondence and of every lead surgery as a
//! bijection between explicitly enumerated cells.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::class::ClassSpec;
use crate::enumerate::ClassIter;
use crate::error::Result;
use crate::forest::{enumerate_forests, from_forest, in_bounded_family, to_forest};
use crate::parking::{park, rank_permutation, specification, PreferenceSet};
use crate::sets::Profile;
use crate::surgery::{
    promote_lead_subtree, replace_leading, shift_lead_to_next_root, shift_lead_within_tree, split_lead_subtree,
    Direction, Family,
};

/// Bounds for [`verify_bijections`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct BijectionRanges {
    /// Round trip and statistic transport.
    pub round_trip_n: usize,
    /// Every forest maps back onto the class.
    pub forests_n: usize,
    /// Lead surgeries, both families, plus promotion and splitting.
    pub surgery_n: usize,
    /// Empty spaces in the unbounded family.
    pub k_max: usize,
}

impl Default for BijectionRanges {
    fn default() -> Self {
        Self {
            round_trip_n: 5,
            forests_n: 4,
            surgery_n: 4,
            k_max: 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct BijectionCheck {
    pub name: String,
    pub params: String,
    /// Elements examined.
    pub size: usize,
    pub pass: bool,
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BijectionReport {
    pub checks: Vec<BijectionCheck>,
    /// Sets where forest membership disagrees with "every entry `<= s`". The correct
    /// criterion also requires exactly `k` flaws over `n` spaces; this records how far the
    /// weaker reading is off.
    pub max_entry_reading_disagreements: usize,
}

impl BijectionReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    pub fn failures(&self) -> usize {
        self.checks.iter().filter(|c| !c.pass).count()
    }
}

fn members(spec: ClassSpec) -> Result<Vec<PreferenceSet>> {
    Ok(ClassIter::new(spec, crate::enumerate::DEFAULT_BUDGET)?.collect())
}

fn unbounded(n: usize, k: usize, l: Option<usize>) -> Result<Vec<PreferenceSet>> {
    members(ClassSpec::exact(n, n + k, n + k, 0, l)?)
}

fn bounded(n: usize, s: usize, k: usize, l: usize) -> Result<Vec<PreferenceSet>> {
    members(ClassSpec::bounded(n, s, k, Some(l))?)
}

struct Collector {
    report: BijectionReport,
}

impl Collector {
    fn push(&mut self, name: &str, params: String, size: usize, failure: Option<String>) {
        self.report.checks.push(BijectionCheck {
            name: name.to_string(),
            params,
            size,
            pass: failure.is_none(),
            detail: failure,
        });
    }

    /// `fwd` maps `source` injectively onto `target`, and `bwd` inverts it.
    fn bijection(
        &mut self,
        name: &str,
        params: String,
        source: &[PreferenceSet],
        target: &[PreferenceSet],
        fwd: impl Fn(&PreferenceSet) -> Result<PreferenceSet>,
        bwd: impl Fn(&PreferenceSet) -> Result<PreferenceSet>,
    ) {
        let failure = (|| {
            let mut image = BTreeSet::new();
            for a in source {
                let b = fwd(a).map_err(|e| format!("forward {a}: {e}"))?;
                let back = bwd(&b).map_err(|e| format!("backward {b}: {e}"))?;
                if &back != a {
                    return Err(format!("{a} -> {b} -> {back}"));
                }
                image.insert(b);
            }
            if image.len() != source.len() {
                return Err(format!("{} sources, {} images", source.len(), image.len()));
            }
            let target: BTreeSet<PreferenceSet> = target.iter().cloned().collect();
            if image != target {
                return Err(format!("image has {} elements, target {}", image.len(), target.len()));
            }
            Ok(())
        })()
        .err();
        self.push(name, params, source.len(), failure);
    }
}

/// Runs every certification in range.
pub fn verify_bijections(ranges: BijectionRanges) -> Result<BijectionReport> {
    let mut c = Collector {
        report: BijectionReport::default(),
    };
    forest_checks(&mut c, ranges)?;
    worked_instances(&mut c)?;
    unbounded_surgeries(&mut c, ranges.surgery_n, ranges.k_max)?;
    bounded_surgeries(&mut c, ranges.surgery_n)?;
    Ok(c.report)
}

fn forest_checks(c: &mut Collector, r: BijectionRanges) -> Result<()> {
    for n in 1..=r.round_trip_n {
        for k in 0..=r.k_max {
            let class = unbounded(n, k, None)?;
            let params = format!("n={n} k={k}");
            let mut failure = None;
            let mut membership = None;
            for a in &class {
                let f = to_forest(a)?;
                let rank = rank_permutation(a);
                let spec = specification(a).r;
                if from_forest(&f) != *a {
                    failure.get_or_insert_with(|| format!("{a} does not round-trip"));
                } else if f.forest_order().sigma_inv != rank.pi_inverse || f.forest_specification() != spec {
                    failure.get_or_insert_with(|| format!("{a}: order or specification not transported"));
                }
                let restricted = a.with_spaces(n).ok();
                for s in 1..=n {
                    let in_class = restricted
                        .as_ref()
                        .is_some_and(|b| b.max_entry() <= s && park(b).flaws == k);
                    let max_only = a.max_entry() <= s;
                    if in_bounded_family(&f, s) != in_class {
                        membership.get_or_insert_with(|| format!("{a} at s={s}"));
                    }
                    if in_bounded_family(&f, s) != max_only {
                        c.report.max_entry_reading_disagreements += 1;
                    }
                }
            }
            c.push("round trip and statistic transport", params.clone(), class.len(), failure);
            c.push("bounded forests are the bounded class", params, class.len(), membership);
        }
    }
    for n in 1..=r.forests_n {
        for k in 0..=r.k_max {
            let forests = enumerate_forests(n, k);
            let failure = (|| {
                let mut image = BTreeSet::new();
                for f in &forests {
                    let a = from_forest(f);
                    if to_forest(&a).map_err(|e| e.to_string())? != *f {
                        return Err(format!("forest of {a} does not round-trip"));
                    }
                    image.insert(a);
                }
                let class: BTreeSet<PreferenceSet> = unbounded(n, k, None).map_err(|e| e.to_string())?.into_iter().collect();
                if image != class {
                    return Err(format!("{} forests reach {} of {} sets", forests.len(), image.len(), class.len()));
                }
                Ok(())
            })()
            .err();
            c.push("forests map onto the class", format!("n={n} k={k}"), forests.len(), failure);
        }
    }
    Ok(())
}

fn worked_instances(c: &mut Collector) -> Result<()> {
    let cases: [(&str, Vec<usize>, usize, Vec<usize>); 2] = [
        ("in-tree shift instance", vec![2, 4, 8, 12, 9, 1, 12, 8, 4, 12, 1, 3], 14, vec![3, 4, 8, 12, 9, 1, 12, 8, 4, 12, 1, 3]),
        ("root shift instance", vec![3, 10, 4, 10, 7, 1, 4, 1, 10, 7], 12, vec![4, 10, 5, 10, 4, 1, 5, 1, 10, 4]),
    ];
    for (i, (name, a, m, want)) in cases.into_iter().enumerate() {
        let a = PreferenceSet::new(a, m)?;
        let map = if i == 0 { shift_lead_within_tree } else { shift_lead_to_next_root };
        let failure = match map(&a, Family::Unbounded, Direction::Forward) {
            Ok(b) if b.entries() == want.as_slice() => match map(&b, Family::Unbounded, Direction::Backward) {
                Ok(back) if back == a => None,
                Ok(back) => Some(format!("backward gave {back}")),
                Err(e) => Some(e.to_string()),
            },
            Ok(b) => Some(format!("forward gave {b}")),
            Err(e) => Some(e.to_string()),
        };
        c.push(name, a.to_string(), 1, failure);
    }
    Ok(())
}

fn unbounded_surgeries(c: &mut Collector, n_max: usize, k_max: usize) -> Result<()> {
    let fam = Family::Unbounded;
    for n in 1..=n_max {
        for k in 0..=k_max {
            for l in 1..n + k {
                let src = unbounded(n, k, Some(l))?;
                let tgt = unbounded(n, k, Some(l + 1))?;
                let params = format!("n={n} k={k} l={l}");
                let pick = |v: &[PreferenceSet], f: &dyn Fn(&Profile) -> bool| -> Vec<PreferenceSet> {
                    v.iter().filter(|a| f(&Profile::of(a))).cloned().collect()
                };
                let a1 = pick(&src, &|p| p.shift_source());
                let c1 = pick(&tgt, &|p| p.shift_target());
                let a2 = pick(&src, &|p| p.root_shift_source(k));
                let c2 = pick(&tgt, &|p| p.root_shift_target());
                let a3 = pick(&src, &|p| p.critical(k));
                let parts = a1.len() + a2.len() + a3.len() == src.len() && c1.len() + c2.len() == tgt.len();
                c.push(
                    "lead cells partition the class",
                    params.clone(),
                    src.len() + tgt.len(),
                    (!parts).then(|| format!("{}+{}+{} of {}; {}+{} of {}", a1.len(), a2.len(), a3.len(), src.len(), c1.len(), c2.len(), tgt.len())),
                );
                c.bijection(
                    "in-tree shift",
                    params.clone(),
                    &a1,
                    &c1,
                    |a| shift_lead_within_tree(a, fam, Direction::Forward),
                    |b| shift_lead_within_tree(b, fam, Direction::Backward),
                );
                c.bijection(
                    "root shift",
                    params,
                    &a2,
                    &c2,
                    |a| shift_lead_to_next_root(a, fam, Direction::Forward),
                    |b| shift_lead_to_next_root(b, fam, Direction::Backward),
                );
            }
            for l in k + 1..=n + k {
                let a3: Vec<_> = unbounded(n, k, Some(l))?.into_iter().filter(|a| Profile::of(a).critical(k)).collect();
                let c3: Vec<_> = unbounded(n, k + 1, Some(n + k + 1))?
                    .into_iter()
                    .filter(|b| Profile::of(b).stats.m_a == l)
                    .collect();
                let only_lead = a3.iter().all(|a| {
                    replace_leading(a, fam, Direction::Forward).is_ok_and(|b| a.entries()[1..] == b.entries()[1..])
                });
                c.push(
                    "lead replacement keeps the tail",
                    format!("n={n} k={k} l={l}"),
                    a3.len(),
                    (!only_lead).then(|| "a non-leading entry changed".to_string()),
                );
                c.bijection(
                    "lead replacement",
                    format!("n={n} k={k} l={l}"),
                    &a3,
                    &c3,
                    |a| replace_leading(a, fam, Direction::Forward),
                    |b| replace_leading(b, fam, Direction::Backward),
                );
            }
        }
    }
    for n in 2..=n_max {
        c.bijection(
            "lead split",
            format!("n={n}"),
            &unbounded(n, 0, Some(2))?,
            &bounded(n, n, 1, n)?,
            |a| split_lead_subtree(a, Direction::Forward),
            |b| split_lead_subtree(b, Direction::Backward),
        );
    }
    Ok(())
}

fn bounded_surgeries(c: &mut Collector, n_max: usize) -> Result<()> {
    for n in 1..=n_max {
        for s in 1..=n {
            let fam = Family::Bounded { s };
            for k in 1..n {
                for l in 1..s {
                    let src = bounded(n, s, k, l)?;
                    let tgt = bounded(n, s, k, l + 1)?;
                    let params = format!("n={n} s={s} k={k} l={l}");
                    let a1: Vec<_> = src.iter().filter(|a| Profile::of(a).bounded_shift_source(k)).cloned().collect();
                    let c1: Vec<_> = tgt.iter().filter(|a| Profile::of(a).bounded_shift_target(k)).cloned().collect();
                    let a2: Vec<_> = src.iter().filter(|a| Profile::of(a).bounded_root_shift_source(k)).cloned().collect();
                    let c2: Vec<_> = tgt.iter().filter(|a| Profile::of(a).bounded_root_shift_target(k)).cloned().collect();
                    c.bijection(
                        "bounded in-tree shift",
                        params.clone(),
                        &a1,
                        &c1,
                        |a| shift_lead_within_tree(a, fam, Direction::Forward),
                        |b| shift_lead_within_tree(b, fam, Direction::Backward),
                    );
                    c.bijection(
                        "bounded root shift",
                        params,
                        &a2,
                        &c2,
                        |a| shift_lead_to_next_root(a, fam, Direction::Forward),
                        |b| shift_lead_to_next_root(b, fam, Direction::Backward),
                    );
                }
                for l in k + 1..s.saturating_sub(1) {
                    let a3: Vec<_> = bounded(n, s, k, l)?.into_iter().filter(|a| Profile::of(a).bounded_critical(k)).collect();
                    let c3: Vec<_> = bounded(n, s, k + 1, s)?.into_iter().filter(|b| Profile::of(b).kth_empty(k) == l).collect();
                    c.bijection(
                        "bounded lead replacement",
                        format!("n={n} s={s} k={k} l={l}"),
                        &a3,
                        &c3,
                        |a| replace_leading(a, fam, Direction::Forward),
                        |b| replace_leading(b, fam, Direction::Backward),
                    );
                }
                if s >= k + 2 {
                    c.bijection(
                        "lead promotion",
                        format!("n={n} s={s} k={k}"),
                        &bounded(n, s, k, 1)?,
                        &bounded(n, s, k + 1, s)?,
                        |a| promote_lead_subtree(a, s, Direction::Forward),
                        |b| promote_lead_subtree(b, s, Direction::Backward),
                    );
                }
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_ranges_certify() {
        let r = verify_bijections(BijectionRanges {
            round_trip_n: 3,
            forests_n: 3,
            surgery_n: 3,
            k_max: 1,
        })
        .unwrap();
        let bad: Vec<_> = r.checks.iter().filter(|c| !c.pass).collect();
        assert!(bad.is_empty(), "{bad:#?}");
        assert!(r.max_entry_reading_disagreements > 0);
    }

    #[test]
    fn a_failed_inverse_is_reported() {
        let mut c = Collector {
            report: BijectionReport::default(),
        };
        let src = unbounded(2, 0, Some(2)).unwrap();
        let tgt = bounded(2, 2, 1, 2).unwrap();
        c.bijection("broken", String::new(), &src, &tgt, |a| split_lead_subtree(a, Direction::Forward), |b| Ok(b.clone()));
        assert!(!c.report.passed());
    }
}
