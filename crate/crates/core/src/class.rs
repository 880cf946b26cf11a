use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Names the class of `n`-car preference sets over `m` spaces with entries `<= s`,
/// exactly `k` flaws and, optionally, leading term `l`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ClassSpec {
    pub n: usize,
    pub m: usize,
    pub s: usize,
    pub k: usize,
    pub l: Option<usize>,
}

impl ClassSpec {
    /// Applies the defaults `m = n`, `s = m`, `k = 0`, then validates.
    pub fn new(
        n: usize,
        m: Option<usize>,
        s: Option<usize>,
        k: Option<usize>,
        l: Option<usize>,
    ) -> Result<Self> {
        let m = m.unwrap_or(n);
        Self::exact(n, m, s.unwrap_or(m), k.unwrap_or(0), l)
    }

    pub fn exact(n: usize, m: usize, s: usize, k: usize, l: Option<usize>) -> Result<Self> {
        if s > m {
            return Err(Error::InvalidClass(format!("entry bound s={s} exceeds m={m}")));
        }
        if n > 0 && s == 0 {
            return Err(Error::InvalidClass("entry bound s must be at least 1".into()));
        }
        if l == Some(0) {
            return Err(Error::InvalidClass("leading term is 1-based".into()));
        }
        Ok(Self { n, m, s, k, l })
    }

    /// `P_{n;<=s;k}` with `m = n`.
    pub fn bounded(n: usize, s: usize, k: usize, l: Option<usize>) -> Result<Self> {
        Self::exact(n, n, s, k, l)
    }

    /// True when the class is empty for structural reasons alone.
    pub fn trivially_empty(&self) -> bool {
        match self.l {
            Some(l) => self.n == 0 || l > self.s,
            None => false,
        }
    }

    pub fn with_leading(self, l: Option<usize>) -> Self {
        Self { l, ..self }
    }
}

impl fmt::Display for ClassSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "P[n={},m={},s<={},k={}", self.n, self.m, self.s, self.k)?;
        if let Some(l) = self.l {
            write!(f, ",l={l}")?;
        }
        f.write_str("]")
    }
}
