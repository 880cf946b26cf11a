//! Rooted forests on `{R_0..R_k} ∪ [n]`, their triplet labelling, and the bijection with
//! 0-flaw preference sets over `n + k` spaces.
//!
//! Children are always kept in increasing label order, and every breadth-first position
//! below is taken in that canonical form.

use std::collections::VecDeque;
use std::fmt;

use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::parking::{park, rank_permutation, PreferenceSet};

/// A vertex: one of the artificial roots, or a car label in `[n]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Node {
    Root(usize),
    Car(usize),
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Node::Root(i) => write!(f, "R{i}"),
            Node::Car(c) => write!(f, "{c}"),
        }
    }
}

impl Serialize for Node {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Node::Root(i) => s.collect_str(&format_args!("R{i}")),
            Node::Car(c) => s.serialize_u64(*c as u64),
        }
    }
}

impl<'de> Deserialize<'de> for Node {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Car(usize),
            Tag(String),
        }
        match Repr::deserialize(d)? {
            Repr::Car(0) => Err(de::Error::custom("car labels are 1-based")),
            Repr::Car(c) => Ok(Node::Car(c)),
            Repr::Tag(t) => t
                .strip_prefix('R')
                .and_then(|i| i.parse().ok())
                .map(Node::Root)
                .ok_or_else(|| de::Error::custom(format!("bad root tag `{t}`"))),
        }
    }
}

/// A forest of `k + 1` trees `T_0..T_k`, tree `T_i` rooted at `R_i`, on the cars `[n]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LabeledForest {
    k: usize,
    /// `parent[c - 1]` is the parent of car `c`.
    parent: Vec<Node>,
    root_kids: Vec<Vec<usize>>,
    car_kids: Vec<Vec<usize>>,
    /// Tree index of each car.
    tree: Vec<usize>,
}

impl LabeledForest {
    /// Validates that `parent` describes `k + 1` trees with the given roots.
    pub fn new(k: usize, parent: Vec<Node>) -> Result<Self> {
        let n = parent.len();
        let mut root_kids = vec![Vec::new(); k + 1];
        let mut car_kids = vec![Vec::new(); n];
        for (i, &p) in parent.iter().enumerate() {
            let c = i + 1;
            match p {
                Node::Root(r) if r > k => {
                    return Err(Error::Forest(format!("car {c} hangs from R{r} but k={k}")))
                }
                Node::Root(r) => root_kids[r].push(c),
                Node::Car(q) if q == 0 || q > n => {
                    return Err(Error::Forest(format!("car {c} hangs from unknown car {q}")))
                }
                Node::Car(q) if q == c => return Err(Error::Forest(format!("car {c} is its own parent"))),
                Node::Car(q) => car_kids[q - 1].push(c),
            }
        }
        // children were pushed in increasing label order already
        let mut tree = vec![usize::MAX; n];
        for (r, kids) in root_kids.iter().enumerate() {
            let mut queue: VecDeque<usize> = kids.iter().copied().collect();
            while let Some(c) = queue.pop_front() {
                tree[c - 1] = r;
                queue.extend(car_kids[c - 1].iter().copied());
            }
        }
        if let Some(c) = tree.iter().position(|&t| t == usize::MAX) {
            return Err(Error::Forest(format!("car {} lies on a cycle", c + 1)));
        }
        Ok(Self {
            k,
            parent,
            root_kids,
            car_kids,
            tree,
        })
    }

    pub fn n(&self) -> usize {
        self.parent.len()
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn parent(&self, car: usize) -> Node {
        self.parent[car - 1]
    }

    pub fn parents(&self) -> &[Node] {
        &self.parent
    }

    /// Children of `node` in increasing label order.
    pub fn children(&self, node: Node) -> &[usize] {
        match node {
            Node::Root(r) => &self.root_kids[r],
            Node::Car(c) => &self.car_kids[c - 1],
        }
    }

    pub fn is_leaf(&self, car: usize) -> bool {
        self.car_kids[car - 1].is_empty()
    }

    /// Index of the tree containing `car`.
    pub fn tree_of(&self, car: usize) -> usize {
        self.tree[car - 1]
    }

    /// Non-root vertices of `T_i` in breadth-first order.
    pub fn bfs(&self, i: usize) -> Vec<usize> {
        self.bfs_from(Node::Root(i), &[])
    }

    /// Breadth-first cars below `start`, skipping the subtrees rooted at `skip`.
    pub fn bfs_from(&self, start: Node, skip: &[usize]) -> Vec<usize> {
        let mut out = Vec::new();
        let mut queue: VecDeque<usize> = self.children(start).iter().copied().filter(|c| !skip.contains(c)).collect();
        while let Some(c) = queue.pop_front() {
            out.push(c);
            queue.extend(self.car_kids[c - 1].iter().copied().filter(|c| !skip.contains(c)));
        }
        out
    }

    /// `car` and all its descendants.
    pub fn subtree(&self, car: usize) -> Vec<usize> {
        let mut out = vec![car];
        out.extend(self.bfs_from(Node::Car(car), &[]));
        out
    }

    /// Number of vertices of `T_i`, root included.
    pub fn tree_size(&self, i: usize) -> usize {
        1 + self.tree.iter().filter(|&&t| t == i).count()
    }

    /// `μ_i`: non-root vertices in `T_0..T_{i-1}`.
    pub fn mu(&self) -> Vec<usize> {
        let mut mu = Vec::with_capacity(self.k + 1);
        let mut acc = 0;
        for i in 0..=self.k {
            mu.push(acc);
            acc += self.tree_size(i) - 1;
        }
        mu
    }

    /// Tree by tree, then by height, then by parent order, then by label.
    pub fn forest_order(&self) -> ForestOrder {
        let sigma_inv: Vec<usize> = (0..=self.k).flat_map(|i| self.bfs(i)).collect();
        let mut sigma = vec![0; sigma_inv.len()];
        for (pos, &c) in sigma_inv.iter().enumerate() {
            sigma[c - 1] = pos + 1;
        }
        ForestOrder { sigma_inv, sigma }
    }

    /// Child counts of `R_0`, the cars of `T_0` in order, `R_1`, …, truncated to `n + k`.
    pub fn forest_specification(&self) -> Vec<usize> {
        let mut r = Vec::with_capacity(self.n() + self.k + 1);
        for i in 0..=self.k {
            r.push(self.root_kids[i].len());
            r.extend(self.bfs(i).into_iter().map(|c| self.car_kids[c - 1].len()));
        }
        r.truncate(self.n() + self.k);
        r
    }

    /// Same forest with `car` (and its subtree) moved under `new_parent`.
    pub fn reattach(&self, car: usize, new_parent: Node) -> Result<Self> {
        let mut parent = self.parent.clone();
        parent[car - 1] = new_parent;
        Self::new(self.k, parent)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ForestRecord::from(self)).expect("forest records serialize")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let rec: ForestRecord = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
        rec.try_into()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ParentRecord {
    child: usize,
    parent: Node,
}

/// Text form: `{"k":2,"parents":[{"child":1,"parent":"R0"},…]}`, sorted by child.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
struct ForestRecord {
    k: usize,
    parents: Vec<ParentRecord>,
}

impl From<&LabeledForest> for ForestRecord {
    fn from(f: &LabeledForest) -> Self {
        Self {
            k: f.k,
            parents: f
                .parent
                .iter()
                .enumerate()
                .map(|(i, &p)| ParentRecord { child: i + 1, parent: p })
                .collect(),
        }
    }
}

impl TryFrom<ForestRecord> for LabeledForest {
    type Error = Error;

    fn try_from(rec: ForestRecord) -> Result<Self> {
        let n = rec.parents.len();
        let mut parent = vec![None; n];
        for p in rec.parents {
            if p.child == 0 || p.child > n {
                return Err(Error::Forest(format!("child {} outside [1, {n}]", p.child)));
            }
            if parent[p.child - 1].replace(p.parent).is_some() {
                return Err(Error::Forest(format!("car {} has two parents", p.child)));
            }
        }
        LabeledForest::new(rec.k, parent.into_iter().map(|p| p.expect("every slot filled")).collect())
    }
}

impl Serialize for LabeledForest {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        ForestRecord::from(self).serialize(s)
    }
}

/// `sigma_inv[j - 1]` is the `j`-th car in forest order; `sigma` is its inverse.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ForestOrder {
    pub sigma_inv: Vec<usize>,
    pub sigma: Vec<usize>,
}

/// `(value, rank)` labels: roots carry `(0, μ_i)`, car `j` carries `(a_j, π(j))`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TripletForest {
    pub forest: LabeledForest,
    pub mu: Vec<usize>,
    /// `cars[j - 1] = (y_j, z_j)`.
    pub cars: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct TripletRecord {
    k: usize,
    roots: Vec<(Node, usize, usize)>,
    cars: Vec<(usize, usize, usize)>,
}

impl TripletForest {
    pub fn to_json(&self) -> String {
        let rec = TripletRecord {
            k: self.forest.k(),
            roots: self.mu.iter().enumerate().map(|(i, &mu)| (Node::Root(i), 0, mu)).collect(),
            cars: self.cars.iter().enumerate().map(|(i, &(y, z))| (i + 1, y, z)).collect(),
        };
        serde_json::to_string(&rec).expect("triplet records serialize")
    }

    /// Second entries in label order.
    pub fn values(&self) -> Vec<usize> {
        self.cars.iter().map(|&(y, _)| y).collect()
    }
}

/// Third entries by breadth-first position offset by `μ_i`; second entries from the parent:
/// `μ_i + i + 1` under `R_i`, `z_parent + i + 1` under a car of `T_i`.
pub fn label_triplets(f: &LabeledForest) -> TripletForest {
    let mu = f.mu();
    let mut cars = vec![(0, 0); f.n()];
    for (i, &mu_i) in mu.iter().enumerate().take(f.k() + 1) {
        for (pos, c) in f.bfs(i).into_iter().enumerate() {
            cars[c - 1].1 = mu_i + pos + 1;
        }
    }
    for (i, &mu_i) in mu.iter().enumerate().take(f.k() + 1) {
        for c in f.bfs(i) {
            cars[c - 1].0 = match f.parent(c) {
                Node::Root(_) => mu_i + i + 1,
                Node::Car(q) => cars[q - 1].1 + i + 1,
            };
        }
    }
    TripletForest {
        forest: f.clone(),
        mu,
        cars,
    }
}

/// The forest of a 0-flaw preference set over `n + k` spaces: with `R_i` placed at position
/// `m_i + 1` and the cars filling the other positions in rank order, each car hangs from the
/// vertex whose position is its preferred space.
pub fn to_forest(pref: &PreferenceSet) -> Result<LabeledForest> {
    let outcome = park(pref);
    if outcome.flaws > 0 {
        return Err(Error::Membership {
            set: "0-flaw preference sets",
            detail: format!("{pref} leaves {} cars unparked in {} spaces", outcome.flaws, pref.m()),
        });
    }
    let k = outcome.empty_spaces.len();
    let total = pref.n() + k + 1;
    let mut at = vec![Node::Root(0); total + 1];
    let mut ranks = rank_permutation(pref).pi_inverse.into_iter();
    let mut roots = outcome.empty_spaces.iter().map(|&e| e + 1).peekable();
    let mut next_root = 1;
    for (pos, slot) in at.iter_mut().enumerate().skip(2) {
        if roots.peek() == Some(&pos) {
            roots.next();
            *slot = Node::Root(next_root);
            next_root += 1;
        } else {
            *slot = Node::Car(ranks.next().expect("n cars fill the remaining positions"));
        }
    }
    let parent = pref.entries().iter().map(|&a| at[a]).collect();
    LabeledForest::new(k, parent).map_err(|e| Error::Inconsistent(format!("forest of {pref}: {e}")))
}

/// Reads the second triplet entries in label order, over `n + k` spaces.
pub fn from_forest(f: &LabeledForest) -> PreferenceSet {
    PreferenceSet::new(label_triplets(f).values(), f.n() + f.k()).expect("triplet values lie in [1, n+k]")
}

/// Membership in the sub-family matching `P_{n;<=s;k}`: `T_k` has at least `n + k − s + 1`
/// non-root vertices and the cars at forest positions `s − k..=n` are leaves.
pub fn in_bounded_family(f: &LabeledForest, s: usize) -> bool {
    let (n, k) = (f.n(), f.k());
    if n == 0 {
        return true;
    }
    if s <= k || f.tree_size(k) - 1 < n + k + 1 - s {
        return false;
    }
    let order = f.forest_order();
    order.sigma_inv[s - k - 1..].iter().all(|&c| f.is_leaf(c))
}

/// Every forest of `k + 1` trees on the cars `[n]`, in lexicographic order of parent lists.
pub fn enumerate_forests(n: usize, k: usize) -> Vec<LabeledForest> {
    let choices: Vec<Node> = (0..=k).map(Node::Root).chain((1..=n).map(Node::Car)).collect();
    let mut out = Vec::new();
    let mut idx = vec![0usize; n];
    loop {
        let parent: Vec<Node> = idx.iter().map(|&i| choices[i]).collect();
        if let Ok(f) = LabeledForest::new(k, parent) {
            out.push(f);
        }
        let mut i = n;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            idx[i] += 1;
            if idx[i] < choices.len() {
                break;
            }
            idx[i] = 0;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::class::ClassSpec;
    use crate::enumerate::{ClassIter, DEFAULT_BUDGET};
    use crate::parking::specification;
    use std::collections::HashSet;

    const WORKED: [usize; 12] = [6, 1, 8, 12, 7, 12, 5, 8, 12, 2, 1, 5];

    fn ps(a: &[usize], m: usize) -> PreferenceSet {
        PreferenceSet::new(a.to_vec(), m).unwrap()
    }

    fn zero_flaw(n: usize, k: usize) -> Vec<PreferenceSet> {
        let m = n + k;
        ClassIter::new(ClassSpec::exact(n, m, m, 0, None).unwrap(), DEFAULT_BUDGET)
            .unwrap()
            .collect()
    }

    #[test]
    fn worked_example_forest() {
        let f = to_forest(&ps(&WORKED, 14)).unwrap();
        assert_eq!(f.k(), 2);
        assert_eq!(f.children(Node::Root(0)), &[2, 11]);
        assert_eq!(f.children(Node::Root(1)), &[7, 12]);
        assert_eq!(f.children(Node::Root(2)), &[4, 6, 9]);
        assert_eq!(f.forest_order().sigma_inv, vec![2, 11, 10, 7, 12, 1, 5, 3, 8, 4, 6, 9]);
        assert_eq!(f.forest_specification(), vec![2, 1, 0, 0, 2, 1, 1, 2, 0, 0, 0, 3, 0, 0]);
        assert_eq!(from_forest(&f).entries(), &WORKED);
    }

    #[test]
    fn worked_example_triplets() {
        let t = label_triplets(&to_forest(&ps(&WORKED, 14)).unwrap());
        assert_eq!(t.mu, vec![0, 3, 9]);
        assert_eq!(t.cars[2 - 1], (1, 1));
        assert_eq!(t.cars[4 - 1], (12, 10));
        assert_eq!(t.values(), WORKED.to_vec());
        let pi = rank_permutation(&ps(&WORKED, 14)).pi;
        assert_eq!(t.cars.iter().map(|c| c.1).collect::<Vec<_>>(), pi);
    }

    #[test]
    fn small_orders_and_specifications() {
        let f = LabeledForest::new(0, vec![Node::Root(0); 3]).unwrap();
        assert_eq!(f.forest_order().sigma_inv, vec![1, 2, 3]);
        assert_eq!(f.forest_specification(), vec![3, 0, 0]);
        assert_eq!(from_forest(&f).entries(), &[1, 1, 1]);

        let f = LabeledForest::new(1, vec![Node::Root(0), Node::Car(1), Node::Root(1)]).unwrap();
        assert_eq!(f.forest_order().sigma_inv, vec![1, 2, 3]);

        let f = LabeledForest::new(1, vec![Node::Root(1); 3]).unwrap();
        assert_eq!(f.forest_specification(), vec![0, 3, 0, 0]);

        let single = label_triplets(&LabeledForest::new(0, vec![]).unwrap());
        assert_eq!(single.mu, vec![0]);
        assert!(single.cars.is_empty());
    }

    #[test]
    fn invalid_forests_are_rejected() {
        assert!(LabeledForest::new(0, vec![Node::Car(2), Node::Car(1)]).is_err());
        assert!(LabeledForest::new(0, vec![Node::Root(1)]).is_err());
        assert!(LabeledForest::new(0, vec![Node::Car(1)]).is_err());
        assert!(LabeledForest::new(0, vec![Node::Car(5)]).is_err());
        assert!(to_forest(&ps(&[2, 2], 2)).is_err());
    }

    #[test]
    fn json_round_trip() {
        let f = to_forest(&ps(&WORKED, 14)).unwrap();
        let text = f.to_json();
        assert!(text.starts_with(r#"{"k":2,"parents":[{"child":1,"parent":7},{"child":2,"parent":"R0"}"#));
        let g = LabeledForest::from_json(&text).unwrap();
        assert_eq!(f, g);
        assert_eq!(g.to_json(), text);
        assert!(LabeledForest::from_json(r#"{"k":0,"parents":[{"child":1,"parent":"X0"}]}"#).is_err());
        assert!(LabeledForest::from_json(r#"{"k":0,"parents":[{"child":1,"parent":"R0"},{"child":1,"parent":"R0"}]}"#).is_err());
        let t = label_triplets(&f).to_json();
        assert!(t.contains(r#""roots":[["R0",0,0],["R1",0,3],["R2",0,9]]"#));
        assert!(t.contains("[4,12,10]"));
    }

    #[test]
    fn round_trip_and_statistic_transport_exhaustive() {
        for n in 0..=5 {
            for k in 0..=2 {
                for p in zero_flaw(n, k) {
                    let f = to_forest(&p).unwrap();
                    assert_eq!(f.k(), k);
                    assert_eq!(from_forest(&f), p);
                    assert_eq!(f.forest_order().sigma_inv, rank_permutation(&p).pi_inverse);
                    assert_eq!(f.forest_specification(), specification(&p).r);
                    let t = label_triplets(&f);
                    for c in 1..=n {
                        let (y, z) = t.cars[c - 1];
                        let i = f.tree_of(c);
                        let expect = match f.parent(c) {
                            Node::Root(_) => t.mu[i] + i + 1,
                            Node::Car(q) => t.cars[q - 1].1 + i + 1,
                        };
                        assert_eq!(y, expect);
                        assert!(t.mu[i] < z && (i == k || z <= t.mu[i + 1]));
                    }
                }
            }
        }
    }

    #[test]
    fn forests_and_preferences_are_in_bijection() {
        for n in 0..=4 {
            for k in 0..=2 {
                let forests = enumerate_forests(n, k);
                let expected = if n == 0 { 1 } else { (k + 1) * (n + k + 1).pow(n as u32 - 1) };
                assert_eq!(forests.len(), expected);
                let images: HashSet<PreferenceSet> = forests.iter().map(from_forest).collect();
                assert_eq!(images.len(), forests.len());
                let class: HashSet<PreferenceSet> = zero_flaw(n, k).into_iter().collect();
                assert_eq!(images, class);
                for f in &forests {
                    assert_eq!(&to_forest(&from_forest(f)).unwrap(), f);
                }
            }
        }
    }

    #[test]
    fn bounded_family_matches_bounded_classes() {
        // membership holds exactly for embeddings of P_{n;<=s;k}
        for n in 1..=5 {
            for k in 0..=2 {
                for p in zero_flaw(n, k) {
                    let f = to_forest(&p).unwrap();
                    for s in 1..=n {
                        let in_class = p.max_entry() <= s
                            && park(&p.with_spaces(n).unwrap()).flaws == k;
                        assert_eq!(in_bounded_family(&f, s), in_class, "{p} s={s}");
                    }
                }
            }
        }
        let members: Vec<_> = ClassIter::new(ClassSpec::bounded(4, 3, 1, None).unwrap(), DEFAULT_BUDGET)
            .unwrap()
            .collect();
        assert_eq!(members.len(), 19);
        for p in members {
            assert!(in_bounded_family(&to_forest(&crate::parking::embed(&p)).unwrap(), 3));
        }
    }

    #[test]
    fn non_leaf_last_vertex_is_never_bounded() {
        for f in enumerate_forests(4, 1) {
            let last = *f.forest_order().sigma_inv.last().unwrap();
            if !f.is_leaf(last) {
                assert!((1..=4).all(|s| !in_bounded_family(&f, s)));
            }
        }
    }
}
