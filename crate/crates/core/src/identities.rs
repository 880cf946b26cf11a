//! Count identities between leading-term classes, checked by brute force on both sides.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use serde::Serialize;

use crate::enumerate::Oracle;
use crate::error::{Error, Result};

/// Identifier and statement of each registered identity family.
pub const IDENTITY_FAMILIES: &[(&str, &str)] = &[
    ("lead-plateau", "p^1_{n,n+k} = p^l_{n,n+k} for 2 <= l <= k+1"),
    ("lead-plateau-bounded", "p^1_{n;<=s;k} = p^l_{n;<=s;k} for 2 <= l <= k"),
    ("lead-one-to-top", "p^s_{n;<=s;k+1} = p^1_{n;<=s;k} for k >= 1, k+2 <= s <= n"),
    ("top-lead-extra-car", "p^s_{n+1;<=s;k} = p_{n;<=s;k} for k+1 <= s <= n"),
    ("lead-two-to-top", "p^n_{n;1} = p^2_n for n >= 2"),
    ("top-lead-unbounded", "p^{n+k}_{n,n+k} = p_{n-1,n+k-1} for n >= 1"),
    ("top-lead-gap", "p^n_{n;1} - p^{n-1}_{n;1} = p_{n-2} for n >= 2"),
    ("lead-one-extra-car", "p^1_{n+1;<=s;k} = p_{n;<=s;k+1} for k >= 1, k+2 <= s <= n"),
];

/// Inclusive bounds on the parameters swept by [`verify_identities`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Ranges {
    pub n_max: usize,
    /// Bounds `k` for families over `P_{n,n+k}`; bounded families run `k` up to `n - 1`.
    pub k_max: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IdentityCheckResult {
    pub identity_id: String,
    pub params: BTreeMap<String, usize>,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub lhs: BigInt,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub rhs: BigInt,
    pub pass: bool,
    /// Parameters of the failing tuple, when `pass` is false.
    pub witness: Option<String>,
}

struct Collector<'a> {
    id: &'static str,
    oracle: &'a Oracle,
    out: Vec<IdentityCheckResult>,
}

impl Collector<'_> {
    fn p(&self, n: usize, m: usize, s: usize, k: usize, l: Option<usize>) -> Result<BigInt> {
        Ok(self.oracle.p(n, m, s, k, l)?.into())
    }

    fn push(&mut self, params: &[(&str, usize)], lhs: BigInt, rhs: BigInt) {
        let params: BTreeMap<String, usize> = params.iter().map(|(k, v)| (k.to_string(), *v)).collect();
        let pass = lhs == rhs;
        let witness = (!pass).then(|| {
            params
                .iter()
                .map(|(k, v)| format!("{k}={v}"))
                .collect::<Vec<_>>()
                .join(" ")
        });
        self.out.push(IdentityCheckResult {
            identity_id: self.id.to_string(),
            params,
            lhs,
            rhs,
            pass,
            witness,
        });
    }
}

/// Evaluates both sides of every in-range instance of `family` by brute force.
pub fn verify_identities(family: &str, ranges: Ranges, oracle: &Oracle) -> Result<Vec<IdentityCheckResult>> {
    let id = IDENTITY_FAMILIES
        .iter()
        .map(|f| f.0)
        .find(|&f| f == family)
        .ok_or_else(|| Error::UnknownIdentity(family.to_string()))?;
    let mut c = Collector {
        id,
        oracle,
        out: Vec::new(),
    };
    let Ranges { n_max, k_max } = ranges;
    match id {
        "lead-plateau" => {
            for n in 1..=n_max {
                for k in 0..=k_max {
                    let m = n + k;
                    let first = c.p(n, m, m, 0, Some(1))?;
                    for l in 2..=k + 1 {
                        let v = c.p(n, m, m, 0, Some(l))?;
                        c.push(&[("n", n), ("k", k), ("l", l)], first.clone(), v);
                    }
                }
            }
        }
        "lead-plateau-bounded" => {
            for n in 1..=n_max {
                for s in 1..=n {
                    for k in 1..n {
                        let first = c.p(n, n, s, k, Some(1))?;
                        for l in 2..=k.min(s) {
                            let v = c.p(n, n, s, k, Some(l))?;
                            c.push(&[("n", n), ("s", s), ("k", k), ("l", l)], first.clone(), v);
                        }
                    }
                }
            }
        }
        "lead-one-to-top" => {
            for n in 1..=n_max {
                for k in 1..=n {
                    for s in k + 2..=n {
                        let lhs = c.p(n, n, s, k + 1, Some(s))?;
                        let rhs = c.p(n, n, s, k, Some(1))?;
                        c.push(&[("n", n), ("s", s), ("k", k)], lhs, rhs);
                    }
                }
            }
        }
        "top-lead-extra-car" => {
            for n in 1..=n_max {
                for k in 0..n {
                    for s in k + 1..=n {
                        let lhs = c.p(n + 1, n + 1, s, k, Some(s))?;
                        let rhs = c.p(n, n, s, k, None)?;
                        c.push(&[("n", n), ("s", s), ("k", k)], lhs, rhs);
                    }
                }
            }
        }
        "lead-two-to-top" => {
            for n in 2..=n_max {
                let lhs = c.p(n, n, n, 1, Some(n))?;
                let rhs = c.p(n, n, n, 0, Some(2))?;
                c.push(&[("n", n)], lhs, rhs);
            }
        }
        "top-lead-unbounded" => {
            for n in 1..=n_max {
                for k in 0..=k_max {
                    let lhs = c.p(n, n + k, n + k, 0, Some(n + k))?;
                    let rhs = c.p(n - 1, n + k - 1, n + k - 1, 0, None)?;
                    c.push(&[("n", n), ("k", k)], lhs, rhs);
                }
            }
        }
        "top-lead-gap" => {
            for n in 2..=n_max {
                let lhs = c.p(n, n, n, 1, Some(n))? - c.p(n, n, n, 1, Some(n - 1))?;
                let rhs = c.p(n - 2, n - 2, n - 2, 0, None)?;
                c.push(&[("n", n)], lhs, rhs);
            }
        }
        "lead-one-extra-car" => {
            for n in 1..=n_max {
                for k in 1..=n {
                    for s in k + 2..=n {
                        let lhs = c.p(n + 1, n + 1, s, k, Some(1))?;
                        let rhs = c.p(n, n, s, k + 1, None)?;
                        c.push(&[("n", n), ("s", s), ("k", k)], lhs, rhs);
                    }
                }
            }
        }
        _ => unreachable!("registered family without a driver"),
    }
    Ok(c.out)
}
