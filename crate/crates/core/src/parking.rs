//! Preference sets, the parking process, and per-sequence statistics.
//!
//! Spaces and cars are 1-based everywhere in the public API.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::class::ClassSpec;
use crate::error::{Error, Result};

/// A sequence of preferred spaces `a_1..a_n` over `m` spaces, each entry in `[1, m]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct PreferenceSet {
    m: usize,
    entries: Vec<usize>,
}

impl PreferenceSet {
    pub fn new(entries: Vec<usize>, m: usize) -> Result<Self> {
        if let Some((i, &a)) = entries.iter().enumerate().find(|(_, &a)| a == 0 || a > m) {
            return Err(Error::InvalidPreference(format!(
                "entry {} is {a}, outside [1, {m}]",
                i + 1
            )));
        }
        Ok(Self { m, entries })
    }

    /// Parses comma-separated 1-based entries, e.g. `"6,1,8"`.
    pub fn parse(text: &str, m: usize) -> Result<Self> {
        Self::new(parse_entries(text)?, m)
    }

    pub fn n(&self) -> usize {
        self.entries.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn entries(&self) -> &[usize] {
        &self.entries
    }

    pub fn into_entries(self) -> Vec<usize> {
        self.entries
    }

    /// The leading term `a_1`, if any.
    pub fn leading(&self) -> Option<usize> {
        self.entries.first().copied()
    }

    pub fn max_entry(&self) -> usize {
        self.entries.iter().copied().max().unwrap_or(0)
    }

    /// Same entries over a different number of spaces.
    pub fn with_spaces(&self, m: usize) -> Result<Self> {
        Self::new(self.entries.clone(), m)
    }

    /// Same tail with `a_1` replaced.
    pub fn with_leading(&self, lead: usize) -> Result<Self> {
        let mut entries = self.entries.clone();
        match entries.first_mut() {
            Some(a) => *a = lead,
            None => return Err(Error::InvalidPreference("empty preference set".into())),
        }
        Self::new(entries, self.m)
    }
}

impl fmt::Display for PreferenceSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, a) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{a}")?;
        }
        Ok(())
    }
}

/// Parses a comma-separated list of positive integers. Parentheses and spaces are ignored.
pub fn parse_entries(text: &str) -> Result<Vec<usize>> {
    let body = text.trim().trim_start_matches('(').trim_end_matches(')').trim();
    if body.is_empty() {
        return Ok(Vec::new());
    }
    body.split(',')
        .map(|tok| {
            usize::from_str(tok.trim())
                .map_err(|e| Error::Parse(format!("bad entry `{}`: {e}", tok.trim())))
        })
        .collect()
}

/// Result of running the parking process.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParkingOutcome {
    /// Space taken by each car, `None` for an unparked car.
    pub assignment: Vec<Option<usize>>,
    pub occupied: Vec<usize>,
    pub empty_spaces: Vec<usize>,
    pub flaws: usize,
}

/// Cars arrive in index order; each takes its preferred space or the first free space to its
/// right, and is unparked when none exists.
pub fn park(pref: &PreferenceSet) -> ParkingOutcome {
    let m = pref.m();
    let mut taken = vec![false; m + 2];
    let mut assignment = Vec::with_capacity(pref.n());
    let mut flaws = 0;
    for &a in pref.entries() {
        match (a..=m).find(|&j| !taken[j]) {
            Some(j) => {
                taken[j] = true;
                assignment.push(Some(j));
            }
            None => {
                flaws += 1;
                assignment.push(None);
            }
        }
    }
    let (occupied, empty_spaces) = (1..=m).partition(|&j| taken[j]);
    ParkingOutcome {
        assignment,
        occupied,
        empty_spaces,
        flaws,
    }
}

/// Views a flawed preference set in `m + flaws` spaces, where every car parks.
pub fn embed(pref: &PreferenceSet) -> PreferenceSet {
    let flaws = park(pref).flaws;
    pref.with_spaces(pref.m() + flaws)
        .expect("adding spaces keeps entries in range")
}

/// Membership in the class named by `spec`.
pub fn classify(pref: &PreferenceSet, spec: &ClassSpec) -> bool {
    if pref.n() != spec.n || pref.entries().iter().any(|&a| a > spec.s) {
        return false;
    }
    if let Some(l) = spec.l {
        if pref.leading() != Some(l) {
            return false;
        }
    }
    match pref.with_spaces(spec.m) {
        Ok(p) => park(&p).flaws == spec.k,
        Err(_) => false,
    }
}

/// Occupancy histogram: `r[i-1]` cars prefer space `i`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Specification {
    pub r: Vec<usize>,
}

pub fn specification(pref: &PreferenceSet) -> Specification {
    let mut r = vec![0; pref.m()];
    for &a in pref.entries() {
        r[a - 1] += 1;
    }
    Specification { r }
}

/// Stable 1-based rank of each entry, ties broken by index.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankPermutation {
    pub pi: Vec<usize>,
    pub pi_inverse: Vec<usize>,
}

pub fn rank_permutation(pref: &PreferenceSet) -> RankPermutation {
    let a = pref.entries();
    let mut pi_inverse: Vec<usize> = (1..=a.len()).collect();
    pi_inverse.sort_by_key(|&i| (a[i - 1], i));
    let mut pi = vec![0; a.len()];
    for (rank, &i) in pi_inverse.iter().enumerate() {
        pi[i - 1] = rank + 1;
    }
    RankPermutation { pi, pi_inverse }
}

/// Statistics of the leading term, read off the 0-flaw embedding.
/// `m_a`, `g` and `h` are 0 when no qualifying empty space exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct LeadingStats {
    pub l: usize,
    /// Multiplicity of `a_1`.
    pub t: usize,
    /// Largest empty space.
    pub m_a: usize,
    /// Largest empty space below `l`.
    pub g: usize,
    /// Number of empty spaces below `l`.
    pub h: usize,
    /// `1 + #{j : a_j < l}`.
    pub tau: usize,
}

impl LeadingStats {
    /// Embeds `pref` and computes its statistics.
    pub fn of(pref: &PreferenceSet) -> Result<Self> {
        let e = embed(pref);
        leading_stats(&e, &park(&e))
    }
}

pub fn leading_stats(pref: &PreferenceSet, outcome: &ParkingOutcome) -> Result<LeadingStats> {
    let l = pref
        .leading()
        .ok_or_else(|| Error::InvalidPreference("empty preference set has no leading term".into()))?;
    if outcome.assignment.len() != pref.n() || outcome.flaws != 0 {
        return Err(Error::Inconsistent(
            "leading statistics need the 0-flaw outcome of the embedding".into(),
        ));
    }
    let a = pref.entries();
    let below: Vec<usize> = outcome.empty_spaces.iter().copied().filter(|&e| e < l).collect();
    Ok(LeadingStats {
        l,
        t: a.iter().filter(|&&x| x == l).count(),
        m_a: outcome.empty_spaces.last().copied().unwrap_or(0),
        g: below.last().copied().unwrap_or(0),
        h: below.len(),
        tau: a.iter().filter(|&&x| x < l).count() + 1,
    })
}

/// Split of the specification and of `π⁻¹` at the empty spaces `m_1 < … < m_k`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Decomposition {
    /// `μ_i = m_i − i`, with `μ_0 = 0`.
    pub mu: Vec<usize>,
    /// `t_i = m_{i+1} − m_i − 1` with `m_0 = 0`, `m_{k+1} = m + 1`.
    pub t: Vec<usize>,
    pub r_blocks: Vec<Vec<usize>>,
    pub sigma_blocks: Vec<Vec<usize>>,
}

pub fn decompose(pref: &PreferenceSet, outcome: &ParkingOutcome) -> Result<Decomposition> {
    let m = pref.m();
    let spec = specification(pref);
    let rank = rank_permutation(pref);
    let empties = &outcome.empty_spaces;
    if empties.windows(2).any(|w| w[0] >= w[1]) || empties.iter().any(|&e| e == 0 || e > m) {
        return Err(Error::Inconsistent(format!(
            "empty spaces {empties:?} are not increasing within [1, {m}]"
        )));
    }
    if let Some(&e) = empties.iter().find(|&&e| spec.r[e - 1] > 0) {
        return Err(Error::Inconsistent(format!(
            "space {e} is claimed empty but {} cars prefer it",
            spec.r[e - 1]
        )));
    }
    let mut bounds = Vec::with_capacity(empties.len() + 2);
    bounds.push(0);
    bounds.extend_from_slice(empties);
    bounds.push(m + 1);

    let mut d = Decomposition {
        mu: Vec::new(),
        t: Vec::new(),
        r_blocks: Vec::new(),
        sigma_blocks: Vec::new(),
    };
    for (i, w) in bounds.windows(2).enumerate() {
        let mu = w[0] - i;
        let t = w[1] - w[0] - 1;
        if mu + t > pref.n() {
            return Err(Error::Inconsistent(format!(
                "block {i} would need ranks up to {} of {}",
                mu + t,
                pref.n()
            )));
        }
        d.mu.push(mu);
        d.t.push(t);
        d.r_blocks.push(spec.r[w[0]..w[1] - 1].to_vec());
        d.sigma_blocks.push(rank.pi_inverse[mu..mu + t].to_vec());
    }
    Ok(d)
}
