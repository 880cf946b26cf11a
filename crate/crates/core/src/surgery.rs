//! Bijections between cells of fixed-leading-term classes, realised as surgery on the
//! forest of the 0-flaw embedding.
//!
//! Breadth-first indices below count the root of the tree as the 0-th vertex.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forest::{from_forest, to_forest, LabeledForest, Node};
use crate::parking::{embed, park, PreferenceSet};
use crate::sets::Profile;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Forward,
    Backward,
}

impl FromStr for Direction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "forward" => Ok(Self::Forward),
            "backward" => Ok(Self::Backward),
            _ => Err(Error::Parse(format!("direction must be forward or backward, got `{s}`"))),
        }
    }
}

/// Which class a preference set is read in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// 0-flaw sets over `n + k` spaces; `k` is the number of empty spaces.
    Unbounded,
    /// Sets over `n` spaces with entries `<= s`; `k` is the number of flaws.
    Bounded { s: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Surgery {
    /// Lead `l → l + 1` inside the tree of car 1.
    ShiftWithinTree,
    /// Lead `l → l + 1` by moving car 1 under the next root.
    ShiftToNextRoot,
    /// Lead `l` → top lead with one more empty space or flaw.
    ReplaceLeading,
    /// Bounded lead `1 → s`, one more flaw.
    PromoteLeadSubtree,
    /// 0-flaw lead `2 → n`, one flaw.
    SplitLeadSubtree,
}

pub const SURGERY_IDS: [(&str, Surgery, &str); 5] = [
    ("shift", Surgery::ShiftWithinTree, "move car 1 one position right within its tree"),
    ("root-shift", Surgery::ShiftToNextRoot, "move car 1 under the next root"),
    ("replace-lead", Surgery::ReplaceLeading, "replace a critical lead by the top lead"),
    ("promote", Surgery::PromoteLeadSubtree, "lead 1 with k flaws to lead s with k+1 flaws"),
    ("split", Surgery::SplitLeadSubtree, "lead 2 parking functions to lead n with one flaw"),
];

impl Surgery {
    pub fn id(self) -> &'static str {
        SURGERY_IDS.iter().find(|e| e.1 == self).map(|e| e.0).expect("every surgery has an id")
    }

    pub fn from_id(id: &str) -> Result<Self> {
        SURGERY_IDS
            .iter()
            .find(|e| e.0 == id)
            .map(|e| e.1)
            .ok_or_else(|| Error::Parse(format!("unknown bijection `{id}`")))
    }

    pub fn apply(self, pref: &PreferenceSet, family: Family, dir: Direction) -> Result<PreferenceSet> {
        match self {
            Self::ShiftWithinTree => shift_lead_within_tree(pref, family, dir),
            Self::ShiftToNextRoot => shift_lead_to_next_root(pref, family, dir),
            Self::ReplaceLeading => replace_leading(pref, family, dir),
            Self::PromoteLeadSubtree => match family {
                Family::Bounded { s } => promote_lead_subtree(pref, s, dir),
                Family::Unbounded => Err(Error::InvalidClass("promote needs an entry bound s".into())),
            },
            Self::SplitLeadSubtree => split_lead_subtree(pref, dir),
        }
    }

    /// Same map on the forest of the embedding of `n + k` spaces.
    pub fn apply_to_forest(self, f: &LabeledForest, family: Family, dir: Direction) -> Result<LabeledForest> {
        let alpha = from_forest(f);
        let alpha = match family {
            Family::Unbounded => alpha,
            Family::Bounded { .. } => alpha.with_spaces(f.n())?,
        };
        to_forest(&embed(&self.apply(&alpha, family, dir)?))
    }
}

impl fmt::Display for Surgery {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

fn not_member(set: &'static str, pref: &PreferenceSet, why: &str) -> Error {
    Error::Membership {
        set,
        detail: format!("{pref} over {} spaces: {why}", pref.m()),
    }
}

/// Checks the family, returns `k` and the 0-flaw embedding.
fn enter(pref: &PreferenceSet, family: Family, set: &'static str) -> Result<(usize, PreferenceSet)> {
    if pref.n() == 0 {
        return Err(not_member(set, pref, "no leading term"));
    }
    let flaws = park(pref).flaws;
    match family {
        Family::Unbounded if flaws > 0 => Err(not_member(set, pref, "not every car parks")),
        Family::Unbounded => Ok((pref.m() - pref.n(), pref.clone())),
        Family::Bounded { s } if pref.m() != pref.n() => Err(not_member(set, pref, &format!("needs exactly n spaces for bound {s}"))),
        Family::Bounded { s } if pref.max_entry() > s => Err(not_member(set, pref, &format!("entry above {s}"))),
        Family::Bounded { .. } => Ok((flaws, embed(pref))),
    }
}

fn leave(embedded: PreferenceSet, family: Family) -> Result<PreferenceSet> {
    match family {
        Family::Unbounded => Ok(embedded),
        Family::Bounded { .. } => embedded.with_spaces(embedded.n()),
    }
}

fn check_image(out: &PreferenceSet, ok: bool, what: &str) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(Error::Inconsistent(format!("{what} produced {out} outside its target")))
    }
}

/// Car 1 with its subtree, removed from `T_h` and listed after the root.
fn tree_without_lead(f: &LabeledForest, h: usize) -> Vec<Node> {
    std::iter::once(Node::Root(h))
        .chain(f.bfs_from(Node::Root(h), &[1]).into_iter().map(Node::Car))
        .collect()
}

/// Forward: cut the subtree of car 1 and hang it from the `(l − g)`-th vertex of what
/// remains of its tree. Backward: from the `(l − 1 − g)`-th, where `l + 1` is the lead.
pub fn shift_lead_within_tree(pref: &PreferenceSet, family: Family, dir: Direction) -> Result<PreferenceSet> {
    const SET: &str = "in-tree shift domain";
    let (k, e) = enter(pref, family, SET)?;
    let p = Profile::of(&e);
    let st = p.stats;
    let (member, l) = match (dir, family) {
        (Direction::Forward, Family::Unbounded) => (p.shift_source() && st.l + 1 <= e.m(), st.l),
        (Direction::Forward, Family::Bounded { s }) => (p.bounded_shift_source(k) && st.l < s, st.l),
        (Direction::Backward, Family::Unbounded) => (st.l >= 2 && p.shift_target(), st.l - 1),
        (Direction::Backward, Family::Bounded { .. }) => (st.l >= 2 && p.bounded_shift_target(k), st.l - 1),
    };
    if !member {
        return Err(not_member(SET, pref, "car 1 cannot shift within its tree"));
    }
    let f = to_forest(&e)?;
    let list = tree_without_lead(&f, st.h);
    let idx = match dir {
        Direction::Forward => l - st.g,
        Direction::Backward => l - 1 - st.g,
    };
    let target = *list
        .get(idx)
        .ok_or_else(|| Error::Inconsistent(format!("tree {} of {pref} has no vertex {idx}", st.h)))?;
    let out = from_forest(&f.reattach(1, target)?);
    let lead = out.leading().expect("nonempty");
    check_image(&out, lead == if dir == Direction::Forward { l + 1 } else { l }, "in-tree shift")?;
    leave(out, family)
}

/// Forward: move car 1 under `R_{h+1}`. Backward: car 1 hangs from `R_h`; move it under
/// the last vertex of `T_{h−1}`.
pub fn shift_lead_to_next_root(pref: &PreferenceSet, family: Family, dir: Direction) -> Result<PreferenceSet> {
    const SET: &str = "root shift domain";
    let (k, e) = enter(pref, family, SET)?;
    let p = Profile::of(&e);
    let st = p.stats;
    let member = match (dir, family) {
        (Direction::Forward, Family::Unbounded) => p.root_shift_source(k),
        (Direction::Forward, Family::Bounded { s }) => p.bounded_root_shift_source(k) && st.l < s,
        (Direction::Backward, Family::Unbounded) => p.root_shift_target(),
        (Direction::Backward, Family::Bounded { .. }) => p.bounded_root_shift_target(k),
    };
    if !member {
        return Err(not_member(SET, pref, "car 1 cannot change roots"));
    }
    let f = to_forest(&e)?;
    let target = match dir {
        Direction::Forward => Node::Root(st.h + 1),
        Direction::Backward => {
            if st.h == 0 || f.parent(1) != Node::Root(st.h) {
                return Err(Error::Inconsistent(format!("car 1 of {pref} does not hang from R{}", st.h)));
            }
            f.bfs(st.h - 1).last().map_or(Node::Root(st.h - 1), |&c| Node::Car(c))
        }
    };
    let out = from_forest(&f.reattach(1, target)?);
    let want = if dir == Direction::Forward { st.l + 1 } else { st.l - 1 };
    check_image(&out, out.leading() == Some(want), "root shift")?;
    leave(out, family)
}

/// Unbounded: critical lead `l` over `n + k` spaces ↔ lead `n + k + 1` over one more space
/// whose largest empty space is `l`. Bounded: critical lead `l` with `k` flaws ↔ lead `s`
/// with `k + 1` flaws whose `k`-th empty space is `l`.
pub fn replace_leading(pref: &PreferenceSet, family: Family, dir: Direction) -> Result<PreferenceSet> {
    const SET: &str = "lead replacement domain";
    let (k, e) = enter(pref, family, SET)?;
    let p = Profile::of(&e);
    let n = pref.n();
    match (dir, family) {
        (Direction::Forward, Family::Unbounded) => {
            if !p.critical(k) {
                return Err(not_member(SET, pref, "lead is not critical"));
            }
            let m = n + k + 1;
            pref.with_spaces(m)?.with_leading(m)
        }
        (Direction::Forward, Family::Bounded { s }) => {
            if !p.bounded_critical(k) {
                return Err(not_member(SET, pref, "lead is not critical"));
            }
            let out = pref.with_leading(s)?;
            check_image(&out, park(&out).flaws == k + 1, "lead replacement")?;
            Ok(out)
        }
        (Direction::Backward, Family::Unbounded) => {
            if pref.leading() != Some(pref.m()) || k == 0 {
                return Err(not_member(SET, pref, "lead is not the last space"));
            }
            let out = pref.with_leading(p.stats.m_a)?.with_spaces(pref.m() - 1)?;
            let ok = park(&out).flaws == 0 && Profile::of(&out).critical(k - 1);
            check_image(&out, ok, "lead replacement")?;
            Ok(out)
        }
        (Direction::Backward, Family::Bounded { s }) => {
            if pref.leading() != Some(s) || k < 2 {
                return Err(not_member(SET, pref, "needs lead s and at least two flaws"));
            }
            let out = pref.with_leading(p.kth_empty(k - 1))?;
            let ok = park(&out).flaws == k - 1 && Profile::of(&out).bounded_critical(k - 1);
            check_image(&out, ok, "lead replacement")?;
            Ok(out)
        }
    }
}

/// Lead 1 with `k >= 1` flaws ↔ lead `s` with `k + 1` flaws, for `k + 2 <= s <= n`.
/// Forward: the subtree of car 1 becomes the tree of a new root `R_1`, later roots shift up,
/// and a fresh car 1 hangs from the `(s − 1 − k − μ_k)`-th vertex of the last tree.
pub fn promote_lead_subtree(pref: &PreferenceSet, s: usize, dir: Direction) -> Result<PreferenceSet> {
    const SET: &str = "lead promotion domain";
    let family = Family::Bounded { s };
    let (k, e) = enter(pref, family, SET)?;
    let n = pref.n();
    let want_lead = if dir == Direction::Forward { 1 } else { s };
    let min_k = if dir == Direction::Forward { 1 } else { 2 };
    let base_k = if dir == Direction::Forward { k } else { k.saturating_sub(1) };
    if pref.leading() != Some(want_lead) || k < min_k || base_k + 2 > s || s > n {
        return Err(not_member(SET, pref, &format!("needs lead {want_lead}, k + 2 <= s <= n")));
    }
    let f = to_forest(&e)?;
    let g = match dir {
        Direction::Forward => {
            let mu_k = f.mu()[k];
            let last: Vec<Node> = tree_without_lead(&f, k).into_iter().map(|v| shift_root(v, 1)).collect();
            let j = (s - 1 - k)
                .checked_sub(mu_k)
                .filter(|&j| j < last.len())
                .ok_or_else(|| Error::Inconsistent(format!("no attachment vertex for {pref}")))?;
            let mut parent: Vec<Node> = f
                .parents()
                .iter()
                .map(|&p| match p {
                    Node::Car(1) => Node::Root(1),
                    other => shift_root(other, 1),
                })
                .collect();
            parent[0] = last[j];
            LabeledForest::new(k + 1, parent)?
        }
        Direction::Backward => {
            if !f.is_leaf(1) || f.tree_of(1) != k {
                return Err(Error::Inconsistent(format!("car 1 of {pref} is not a leaf of the last tree")));
            }
            let mut parent: Vec<Node> = f
                .parents()
                .iter()
                .map(|&p| match p {
                    Node::Root(1) => Node::Car(1),
                    Node::Root(i) if i >= 2 => Node::Root(i - 1),
                    other => other,
                })
                .collect();
            parent[0] = Node::Root(0);
            LabeledForest::new(k - 1, parent)?
        }
    };
    let out = from_forest(&g).with_spaces(n)?;
    let ok = park(&out).flaws == if dir == Direction::Forward { k + 1 } else { k - 1 }
        && out.leading() == Some(if dir == Direction::Forward { s } else { 1 })
        && out.max_entry() <= s;
    check_image(&out, ok, "lead promotion")?;
    Ok(out)
}

fn shift_root(v: Node, by: usize) -> Node {
    match v {
        Node::Root(i) if i >= 1 => Node::Root(i + by),
        other => other,
    }
}

/// Lead-2 parking functions ↔ lead `n` with one flaw over `n` spaces. Forward: the subtree of
/// car 1 becomes `T_0` rooted at a new `R_0`, the rest becomes `T_1`, and a fresh car 1 hangs
/// from the `(n − 1 − a)`-th vertex of `T_1`, `a` being the size of the cut subtree.
pub fn split_lead_subtree(pref: &PreferenceSet, dir: Direction) -> Result<PreferenceSet> {
    const SET: &str = "lead split domain";
    let n = pref.n();
    let (k, e) = enter(pref, Family::Bounded { s: n }, SET)?;
    let (want_lead, want_k) = if dir == Direction::Forward { (2, 0) } else { (n, 1) };
    if n < 2 || pref.leading() != Some(want_lead) || k != want_k {
        return Err(not_member(SET, pref, &format!("needs lead {want_lead} and {want_k} flaws")));
    }
    let f = to_forest(&e)?;
    let g = match dir {
        Direction::Forward => {
            let cut = f.subtree(1);
            let a = cut.len();
            let rest: Vec<Node> = std::iter::once(Node::Root(1))
                .chain(f.bfs_from(Node::Root(0), &[1]).into_iter().map(Node::Car))
                .collect();
            let j = (n - 1)
                .checked_sub(a)
                .filter(|&j| j < rest.len())
                .ok_or_else(|| Error::Inconsistent(format!("no attachment vertex for {pref}")))?;
            let mut parent: Vec<Node> = f
                .parents()
                .iter()
                .map(|&p| match p {
                    Node::Car(1) => Node::Root(0),
                    Node::Root(0) => Node::Root(1),
                    other => other,
                })
                .collect();
            parent[0] = rest[j];
            LabeledForest::new(1, parent)?
        }
        Direction::Backward => {
            if !f.is_leaf(1) || f.tree_of(1) != 1 {
                return Err(Error::Inconsistent(format!("car 1 of {pref} is not a leaf of T_1")));
            }
            let w = *f
                .bfs_from(Node::Root(1), &[1])
                .first()
                .ok_or_else(|| Error::Inconsistent(format!("T_1 of {pref} has no vertex besides car 1")))?;
            let mut parent: Vec<Node> = f
                .parents()
                .iter()
                .map(|&p| match p {
                    Node::Root(0) => Node::Car(1),
                    Node::Root(1) => Node::Root(0),
                    other => other,
                })
                .collect();
            parent[0] = Node::Car(w);
            LabeledForest::new(0, parent)?
        }
    };
    let out = from_forest(&g).with_spaces(n)?;
    let ok = park(&out).flaws == 1 - want_k && out.leading() == Some(if dir == Direction::Forward { n } else { 2 });
    check_image(&out, ok, "lead split")?;
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::ClassSpec;
    use crate::enumerate::{ClassIter, DEFAULT_BUDGET};
    use std::collections::BTreeSet;

    fn ps(a: &[usize], m: usize) -> PreferenceSet {
        PreferenceSet::new(a.to_vec(), m).unwrap()
    }

    fn members(spec: ClassSpec) -> Vec<PreferenceSet> {
        ClassIter::new(spec, DEFAULT_BUDGET).unwrap().collect()
    }

    fn unbounded(n: usize, k: usize, l: usize) -> Vec<PreferenceSet> {
        members(ClassSpec::exact(n, n + k, n + k, 0, Some(l)).unwrap())
    }

    fn bounded(n: usize, s: usize, k: usize, l: usize) -> Vec<PreferenceSet> {
        members(ClassSpec::bounded(n, s, k, Some(l)).unwrap())
    }

    /// Forward maps `source` injectively onto `target`, and backward undoes it.
    fn assert_bijection(
        source: &[PreferenceSet],
        target: &[PreferenceSet],
        fwd: impl Fn(&PreferenceSet) -> Result<PreferenceSet>,
        bwd: impl Fn(&PreferenceSet) -> Result<PreferenceSet>,
        ctx: &str,
    ) {
        let image: BTreeSet<PreferenceSet> = source
            .iter()
            .map(|a| {
                let b = fwd(a).unwrap_or_else(|e| panic!("{ctx}: forward {a}: {e}"));
                assert_eq!(&bwd(&b).unwrap_or_else(|e| panic!("{ctx}: backward {b}: {e}")), a, "{ctx}");
                b
            })
            .collect();
        assert_eq!(image.len(), source.len(), "{ctx}: not injective");
        let target: BTreeSet<PreferenceSet> = target.iter().cloned().collect();
        assert_eq!(image, target, "{ctx}: image differs from target");
    }

    #[test]
    fn shift_worked_example() {
        let a = ps(&[2, 4, 8, 12, 9, 1, 12, 8, 4, 12, 1, 3], 14);
        let b = shift_lead_within_tree(&a, Family::Unbounded, Direction::Forward).unwrap();
        assert_eq!(b.entries(), &[3, 4, 8, 12, 9, 1, 12, 8, 4, 12, 1, 3]);
        assert_eq!(shift_lead_within_tree(&b, Family::Unbounded, Direction::Backward).unwrap(), a);
    }

    #[test]
    fn root_shift_worked_example() {
        let a = ps(&[3, 10, 4, 10, 7, 1, 4, 1, 10, 7], 12);
        let b = shift_lead_to_next_root(&a, Family::Unbounded, Direction::Forward).unwrap();
        assert_eq!(b.entries(), &[4, 10, 5, 10, 4, 1, 5, 1, 10, 4]);
        assert_eq!(shift_lead_to_next_root(&b, Family::Unbounded, Direction::Backward).unwrap(), a);
        let f = to_forest(&b).unwrap();
        let t = crate::forest::label_triplets(&f);
        assert_eq!(f.parent(1), Node::Root(1));
        assert_eq!(t.cars[0], (4, 3));
    }

    #[test]
    fn replace_and_split_small_examples() {
        let b = replace_leading(&ps(&[2, 1], 2), Family::Unbounded, Direction::Forward).unwrap();
        assert_eq!(b, ps(&[3, 1], 3));
        assert_eq!(park(&b).empty_spaces, vec![2]);
        let b = split_lead_subtree(&ps(&[2, 1], 2), Direction::Forward).unwrap();
        assert_eq!(b, ps(&[2, 2], 2));
        assert_eq!(split_lead_subtree(&b, Direction::Backward).unwrap(), ps(&[2, 1], 2));
    }

    #[test]
    fn domains_are_enforced() {
        let a = ps(&[1, 1], 2);
        assert!(matches!(
            replace_leading(&a, Family::Unbounded, Direction::Forward),
            Err(Error::Membership { .. })
        ));
        assert!(shift_lead_within_tree(&ps(&[2, 2], 2), Family::Unbounded, Direction::Forward).is_err());
        assert!(split_lead_subtree(&ps(&[1, 2], 2), Direction::Forward).is_err());
        assert!(promote_lead_subtree(&ps(&[1, 1, 1], 3), 3, Direction::Forward).is_err());
        assert!(Surgery::PromoteLeadSubtree
            .apply(&ps(&[1], 1), Family::Unbounded, Direction::Forward)
            .is_err());
    }

    #[test]
    fn unbounded_cells_are_in_bijection() {
        for n in 1..=4 {
            for k in 0..=2 {
                for l in 1..n + k {
                    let src = unbounded(n, k, l);
                    let tgt = unbounded(n, k, l + 1);
                    let ctx = format!("n={n} k={k} l={l}");
                    let a1: Vec<_> = src.iter().filter(|a| Profile::of(a).shift_source()).cloned().collect();
                    let c1: Vec<_> = tgt.iter().filter(|a| Profile::of(a).shift_target()).cloned().collect();
                    assert_bijection(
                        &a1,
                        &c1,
                        |a| shift_lead_within_tree(a, Family::Unbounded, Direction::Forward),
                        |b| shift_lead_within_tree(b, Family::Unbounded, Direction::Backward),
                        &format!("shift {ctx}"),
                    );
                    let a2: Vec<_> = src.iter().filter(|a| Profile::of(a).root_shift_source(k)).cloned().collect();
                    let c2: Vec<_> = tgt.iter().filter(|a| Profile::of(a).root_shift_target()).cloned().collect();
                    assert_bijection(
                        &a2,
                        &c2,
                        |a| shift_lead_to_next_root(a, Family::Unbounded, Direction::Forward),
                        |b| shift_lead_to_next_root(b, Family::Unbounded, Direction::Backward),
                        &format!("root shift {ctx}"),
                    );
                }
                for l in k + 1..=n + k {
                    let a3: Vec<_> = unbounded(n, k, l).into_iter().filter(|a| Profile::of(a).critical(k)).collect();
                    let c3: Vec<_> = unbounded(n, k + 1, n + k + 1)
                        .into_iter()
                        .filter(|b| Profile::of(b).stats.m_a == l)
                        .collect();
                    assert_bijection(
                        &a3,
                        &c3,
                        |a| replace_leading(a, Family::Unbounded, Direction::Forward),
                        |b| replace_leading(b, Family::Unbounded, Direction::Backward),
                        &format!("replace n={n} k={k} l={l}"),
                    );
                }
            }
        }
    }

    #[test]
    fn tail_moves_exactly_when_a_parent_rank_moves() {
        use crate::parking::rank_permutation;
        for k in 0..=1 {
            for l in 1..3 + k {
                for a in unbounded(3, k, l) {
                    let Ok(b) = shift_lead_within_tree(&a, Family::Unbounded, Direction::Forward) else { continue };
                    let fa = to_forest(&a).unwrap();
                    let (ra, rb) = (rank_permutation(&a).pi, rank_permutation(&b).pi);
                    let has_tail_child = |f: &LabeledForest, c| f.children(Node::Car(c)).iter().any(|&x| x != 1);
                    let parents_kept = (1..=3).all(|c| !has_tail_child(&fa, c) || ra[c - 1] == rb[c - 1]);
                    assert_eq!(a.entries()[1..] == b.entries()[1..], parents_kept, "{a} -> {b}");
                }
            }
        }
    }

    #[test]
    fn lead_replacement_touches_only_the_first_entry() {
        for n in 1..=4 {
            for k in 0..=2 {
                for l in k + 1..=n + k {
                    for a in unbounded(n, k, l) {
                        if let Ok(b) = replace_leading(&a, Family::Unbounded, Direction::Forward) {
                            assert_eq!(a.entries()[1..], b.entries()[1..]);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bounded_cells_are_in_bijection() {
        for n in 1..=5 {
            for s in 1..=n {
                for k in 1..n {
                    let fam = Family::Bounded { s };
                    for l in 1..s {
                        let src = bounded(n, s, k, l);
                        let tgt = bounded(n, s, k, l + 1);
                        let ctx = format!("n={n} s={s} k={k} l={l}");
                        let a1: Vec<_> = src.iter().filter(|a| Profile::of(a).bounded_shift_source(k)).cloned().collect();
                        let c1: Vec<_> = tgt.iter().filter(|a| Profile::of(a).bounded_shift_target(k)).cloned().collect();
                        assert_bijection(
                            &a1,
                            &c1,
                            |a| shift_lead_within_tree(a, fam, Direction::Forward),
                            |b| shift_lead_within_tree(b, fam, Direction::Backward),
                            &format!("shift {ctx}"),
                        );
                        let a2: Vec<_> = src.iter().filter(|a| Profile::of(a).bounded_root_shift_source(k)).cloned().collect();
                        let c2: Vec<_> = tgt.iter().filter(|a| Profile::of(a).bounded_root_shift_target(k)).cloned().collect();
                        assert_bijection(
                            &a2,
                            &c2,
                            |a| shift_lead_to_next_root(a, fam, Direction::Forward),
                            |b| shift_lead_to_next_root(b, fam, Direction::Backward),
                            &format!("root shift {ctx}"),
                        );
                    }
                    for l in k + 1..s.saturating_sub(1) {
                        let a3: Vec<_> = bounded(n, s, k, l).into_iter().filter(|a| Profile::of(a).bounded_critical(k)).collect();
                        let c3: Vec<_> = bounded(n, s, k + 1, s).into_iter().filter(|b| Profile::of(b).kth_empty(k) == l).collect();
                        assert_bijection(
                            &a3,
                            &c3,
                            |a| replace_leading(a, fam, Direction::Forward),
                            |b| replace_leading(b, fam, Direction::Backward),
                            &format!("replace n={n} s={s} k={k} l={l}"),
                        );
                    }
                }
            }
        }
    }

    #[test]
    fn promotion_is_a_bijection() {
        for n in 3..=5 {
            for k in 1..n {
                for s in k + 2..=n {
                    assert_bijection(
                        &bounded(n, s, k, 1),
                        &bounded(n, s, k + 1, s),
                        |a| promote_lead_subtree(a, s, Direction::Forward),
                        |b| promote_lead_subtree(b, s, Direction::Backward),
                        &format!("promote n={n} s={s} k={k}"),
                    );
                }
            }
        }
        assert_eq!(bounded(5, 4, 1, 1).len(), 23);
        assert_eq!(bounded(4, 3, 1, 1).len(), 1);
    }

    #[test]
    fn split_is_a_bijection() {
        for n in 2..=5 {
            assert_bijection(
                &unbounded(n, 0, 2),
                &bounded(n, n, 1, n),
                |a| split_lead_subtree(a, Direction::Forward),
                |b| split_lead_subtree(b, Direction::Backward),
                &format!("split n={n}"),
            );
        }
        assert_eq!(unbounded(4, 0, 2).len(), 34);
    }

    #[test]
    fn forest_level_maps_agree() {
        let a = ps(&[3, 10, 4, 10, 7, 1, 4, 1, 10, 7], 12);
        let f = to_forest(&a).unwrap();
        let g = Surgery::ShiftToNextRoot
            .apply_to_forest(&f, Family::Unbounded, Direction::Forward)
            .unwrap();
        assert_eq!(from_forest(&g).entries(), &[4, 10, 5, 10, 4, 1, 5, 1, 10, 4]);
        for (id, op, _) in SURGERY_IDS {
            assert_eq!(Surgery::from_id(id).unwrap(), op);
            assert_eq!(op.to_string(), id);
        }
    }
}
