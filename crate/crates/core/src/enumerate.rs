//! Brute-force enumeration of classes: the ground truth every formula is checked against.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigUint;
use rayon::prelude::*;

use crate::class::ClassSpec;
use crate::error::{Error, Result};
use crate::parking::{classify, PreferenceSet};

pub const DEFAULT_BUDGET: u64 = 10_000_000;

fn candidates(spec: &ClassSpec) -> u128 {
    (0..spec.n).fold(1u128, |acc, _| acc.saturating_mul(spec.s as u128))
}

fn check_budget(spec: &ClassSpec, budget: u64) -> Result<()> {
    let c = candidates(spec);
    if c > budget as u128 {
        return Err(Error::BudgetExceeded {
            candidates: c,
            budget,
        });
    }
    Ok(())
}

/// Members of a class in lexicographic order of entries.
pub struct ClassIter {
    spec: ClassSpec,
    current: Option<Vec<usize>>,
}

impl ClassIter {
    pub fn new(spec: ClassSpec, budget: u64) -> Result<Self> {
        check_budget(&spec, budget)?;
        let start = if spec.n == 0 {
            Some(Vec::new())
        } else {
            Some(vec![1; spec.n])
        };
        Ok(Self {
            spec,
            current: start,
        })
    }

    fn advance(&mut self) {
        let Some(cur) = self.current.as_mut() else {
            return;
        };
        for i in (0..cur.len()).rev() {
            if cur[i] < self.spec.s {
                cur[i] += 1;
                return;
            }
            cur[i] = 1;
        }
        self.current = None;
    }
}

impl Iterator for ClassIter {
    type Item = PreferenceSet;

    fn next(&mut self) -> Option<PreferenceSet> {
        while let Some(cur) = self.current.clone() {
            self.advance();
            let p = PreferenceSet::new(cur, self.spec.m).expect("entries bounded by s <= m");
            if classify(&p, &self.spec) {
                return Some(p);
            }
        }
        None
    }
}

pub fn enumerate_class(spec: &ClassSpec) -> Result<ClassIter> {
    ClassIter::new(*spec, DEFAULT_BUDGET)
}

/// Counts of every `(k, l)` cell over `[1, s]^n` parked in `m` spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Histogram {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    /// `cells[k][l]`; column 0 holds the empty sequence when `n = 0`.
    cells: Vec<Vec<u64>>,
}

impl Histogram {
    pub fn build(n: usize, m: usize, s: usize, budget: u64) -> Result<Self> {
        let spec = ClassSpec::exact(n, m, s, 0, None)?;
        check_budget(&spec, budget)?;
        let mut cells = vec![vec![0u64; s + 1]; n + 1];
        if n == 0 {
            cells[0][0] = 1;
            return Ok(Self { n, m, s, cells });
        }
        let columns: Vec<Vec<u64>> = (1..=s)
            .into_par_iter()
            .map(|l| {
                if m < 127 {
                    column_bitmask(n, m, s, l)
                } else {
                    column_generic(n, m, s, l)
                }
            })
            .collect();
        for (l, col) in (1..=s).zip(columns) {
            for (k, c) in col.into_iter().enumerate() {
                cells[k][l] = c;
            }
        }
        Ok(Self { n, m, s, cells })
    }

    pub fn cell(&self, k: usize, l: usize) -> u64 {
        self.cells
            .get(k)
            .and_then(|row| row.get(l))
            .copied()
            .unwrap_or(0)
    }

    pub fn count(&self, k: usize, l: Option<usize>) -> u64 {
        match l {
            Some(0) => 0,
            Some(l) => self.cell(k, l),
            None => self.cells.get(k).map(|r| r.iter().sum()).unwrap_or(0),
        }
    }
}

fn column_bitmask(n: usize, m: usize, s: usize, l: usize) -> Vec<u64> {
    fn dfs(left: usize, occ: u128, flaws: usize, all: u128, s: usize, out: &mut [u64]) {
        if left == 0 {
            out[flaws] += 1;
            return;
        }
        for v in 1..=s {
            let free = all & !occ & (!0u128 << v);
            if free == 0 {
                dfs(left - 1, occ, flaws + 1, all, s, out);
            } else {
                dfs(left - 1, occ | (free & free.wrapping_neg()), flaws, all, s, out);
            }
        }
    }
    let all: u128 = ((1u128 << (m + 1)) - 1) & !1;
    let mut out = vec![0u64; n + 1];
    dfs(n - 1, 1u128 << l, 0, all, s, &mut out);
    out
}

fn column_generic(n: usize, m: usize, s: usize, l: usize) -> Vec<u64> {
    let mut out = vec![0u64; n + 1];
    let mut cur = vec![1usize; n];
    cur[0] = l;
    loop {
        let p = PreferenceSet::new(cur.clone(), m).expect("bounded entries");
        out[crate::parking::park(&p).flaws] += 1;
        let mut i = n;
        loop {
            if i == 1 {
                return out;
            }
            i -= 1;
            if cur[i] < s {
                cur[i] += 1;
                break;
            }
            cur[i] = 1;
        }
    }
}

/// Anything that can report the size of a class.
pub trait CountSource: Sync {
    fn count(&self, spec: &ClassSpec) -> Result<BigUint>;
}

/// Brute-force counter that caches one histogram per `(n, m, s)`.
pub struct Oracle {
    budget: u64,
    cache: Mutex<HashMap<(usize, usize, usize), Arc<Histogram>>>,
}

impl Default for Oracle {
    fn default() -> Self {
        Self::new(DEFAULT_BUDGET)
    }
}

impl Oracle {
    pub fn new(budget: u64) -> Self {
        Self {
            budget,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn budget(&self) -> u64 {
        self.budget
    }

    pub fn histogram(&self, n: usize, m: usize, s: usize) -> Result<Arc<Histogram>> {
        if let Some(h) = self.cache.lock().unwrap().get(&(n, m, s)) {
            return Ok(Arc::clone(h));
        }
        let h = Arc::new(Histogram::build(n, m, s, self.budget)?);
        self.cache
            .lock()
            .unwrap()
            .insert((n, m, s), Arc::clone(&h));
        Ok(h)
    }

    pub fn count_u64(&self, spec: &ClassSpec) -> Result<u64> {
        if spec.trivially_empty() || (spec.n > 0 && spec.k >= spec.n) {
            return Ok(0);
        }
        Ok(self.histogram(spec.n, spec.m, spec.s)?.count(spec.k, spec.l))
    }

    /// Shorthand for `P^l_{n,m;<=s;k}`.
    pub fn p(&self, n: usize, m: usize, s: usize, k: usize, l: Option<usize>) -> Result<BigUint> {
        self.count(&ClassSpec::exact(n, m, s, k, l)?)
    }
}

impl CountSource for Oracle {
    fn count(&self, spec: &ClassSpec) -> Result<BigUint> {
        self.count_u64(spec).map(BigUint::from)
    }
}

pub fn count_class(spec: &ClassSpec) -> Result<BigUint> {
    count_class_with_budget(spec, DEFAULT_BUDGET)
}

pub fn count_class_with_budget(spec: &ClassSpec, budget: u64) -> Result<BigUint> {
    Oracle::new(budget).count(spec)
}

/// Counts class members satisfying `pred`, by direct enumeration.
pub fn count_where<F>(spec: &ClassSpec, budget: u64, pred: F) -> Result<u64>
where
    F: Fn(&PreferenceSet) -> bool,
{
    Ok(ClassIter::new(*spec, budget)?.filter(|p| pred(p)).count() as u64)
}

/// Number of 0-flaw preference sets of `n` cars over `m` spaces: `(m+1-n)(m+1)^(n-1)`.
pub fn count_pf(n: usize, m: usize) -> Result<BigUint> {
    if n > m {
        return Err(crate::error::out_of_range("count_pf", format!("n={n} > m={m}")));
    }
    if n == 0 {
        return Ok(BigUint::from(1u32));
    }
    Ok(BigUint::from(m + 1 - n) * BigUint::from(m + 1).pow(n as u32 - 1))
}
