//! Closed-form counts and leading-term recurrences, evaluated over any [`CountSource`].
//!
//! Notation in comments: `p^l_{n,m;<=s;k}` is the size of the class with `n` cars, `m`
//! spaces, entries `<= s`, `k` flaws and leading term `l`; `m` defaults to `n`, `s` to `m`.

use num_bigint::{BigInt, BigUint};
use num_integer::binomial;
use serde::Serialize;

use crate::class::ClassSpec;
use crate::enumerate::{count_where, CountSource, Oracle};
use crate::error::{out_of_range, Error, Result};
use crate::sets::Profile;

fn choose(n: usize, k: usize) -> BigUint {
    if k > n {
        BigUint::from(0u32)
    } else {
        binomial(BigUint::from(n), BigUint::from(k))
    }
}

fn p<C: CountSource + ?Sized>(
    src: &C,
    n: usize,
    m: usize,
    s: usize,
    k: usize,
    l: Option<usize>,
) -> Result<BigUint> {
    src.count(&ClassSpec::exact(n, m, s, k, l)?)
}

fn require(op: &'static str, ok: bool, detail: impl FnOnce() -> String) -> Result<()> {
    if ok {
        Ok(())
    } else {
        Err(out_of_range(op, detail()))
    }
}

/// `p_{n;<=s;k}` split by the last empty space of the embedding.
/// Needs `1 <= s <= n`, `1 <= k <= s-1`.
pub fn count_by_last_gap<C: CountSource + ?Sized>(src: &C, n: usize, s: usize, k: usize) -> Result<BigUint> {
    require("count_by_last_gap", s >= 1 && s <= n && k >= 1 && k < s, || {
        format!("n={n} s={s} k={k}")
    })?;
    let mut total = BigUint::from(0u32);
    for i in 1..=s - k {
        let low = s - i - 1;
        total += choose(n, n + k + i - s)
            * p(src, s - i - k, low, low, 0, None)?
            * p(src, n + k + i - s, n + k + i - s, i, 0, None)?;
    }
    Ok(total)
}

/// `p^1_{n,n+k}` by deleting the leading 1: `p_{n-1,n+k}`. Needs `n >= 1`.
pub fn lead_one_by_dropping<C: CountSource + ?Sized>(src: &C, n: usize, k: usize) -> Result<BigUint> {
    require("lead_one_by_dropping", n >= 1, || format!("n={n}"))?;
    p(src, n - 1, n + k, n + k, 0, None)
}

/// `p^1_{n,n+k}` as a convolution over the last empty space. Needs `n, k >= 1`.
/// Also evaluates [`lead_one_by_dropping`] and fails if the two disagree.
pub fn lead_one_by_last_gap<C: CountSource + ?Sized>(src: &C, n: usize, k: usize) -> Result<BigUint> {
    require("lead_one_by_last_gap", n >= 1 && k >= 1, || format!("n={n} k={k}"))?;
    let mut total = BigUint::from(0u32);
    for i in 1..=n {
        let m = i + k - 1;
        total += choose(n - 1, i - 1) * p(src, i, m, m, 0, Some(1))? * p(src, n - i, n - i, n - i, 0, None)?;
    }
    let dropped = lead_one_by_dropping(src, n, k)?;
    if dropped != total {
        return Err(Error::Inconsistent(format!(
            "leading-one counts disagree at n={n} k={k}: {total} vs {dropped}"
        )));
    }
    Ok(total)
}

/// `p^l_{n,n+k} - p^{l+1}_{n,n+k}`. Needs `k+1 <= l <= n+k-1`.
pub fn lead_step<C: CountSource + ?Sized>(src: &C, n: usize, k: usize, l: usize) -> Result<BigUint> {
    require("lead_step", l >= k + 1 && l + 1 <= n + k, || format!("n={n} k={k} l={l}"))?;
    critical_count(src, n, k, l)
}

/// Size of the tight cell with every empty space below the leading term,
/// inside `P^l_{n,n+k}`. Needs `k+1 <= l <= n+k`.
pub fn critical_count<C: CountSource + ?Sized>(src: &C, n: usize, k: usize, l: usize) -> Result<BigUint> {
    require("critical_count", n >= 1 && l >= k + 1 && l <= n + k, || {
        format!("n={n} k={k} l={l}")
    })?;
    let below = l - k - 1;
    let above = n + k - l;
    Ok(choose(n - 1, below) * p(src, below, l - 1, l - 1, 0, None)? * p(src, above, above, above, 0, None)?)
}

/// `p^1_{n;<=s;k}` by the last empty space. Needs `k >= 1`, `k+1 <= s <= n`.
pub fn lead_one_bounded<C: CountSource + ?Sized>(src: &C, n: usize, s: usize, k: usize) -> Result<BigUint> {
    require("lead_one_bounded", k >= 1 && s >= k + 1 && s <= n, || {
        format!("n={n} s={s} k={k}")
    })?;
    let mut total = BigUint::from(0u32);
    for i in 1..s - k {
        let high = n + k + i - s;
        let low = s - i - 1;
        total += choose(n - 1, s - i - k - 1)
            * p(src, high, high, i, 0, None)?
            * p(src, s - k - i, low, low, 0, Some(1))?;
    }
    Ok(total)
}

/// Members of `P^l_{n;<=s;k}` whose largest embedded empty space is below `l`.
/// Needs `k >= 1`, `k <= l <= s-1`, `s <= n`.
pub fn low_gap_count<C: CountSource + ?Sized>(src: &C, n: usize, s: usize, k: usize, l: usize) -> Result<BigUint> {
    require("low_gap_count", k >= 1 && l >= k && l < s && s <= n, || {
        format!("n={n} s={s} k={k} l={l}")
    })?;
    let mut total = BigUint::from(0u32);
    for i in k - 1..=l.saturating_sub(2) {
        if i + 2 > l {
            break;
        }
        let tail = n + k - i - 1;
        total += choose(n - 1, i + 1 - k)
            * p(src, i + 1 - k, i, i, 0, None)?
            * p(src, tail, tail, s - i - 1, 0, Some(l - i - 1))?;
    }
    Ok(total)
}

/// `p^{l+1}_{n;<=s;k} - p^l_{n;<=s;k}`, which may be negative.
/// Needs `k >= 1`, `k <= l <= s-1`, `s <= n`.
pub fn lead_step_bounded<C: CountSource + ?Sized>(src: &C, n: usize, s: usize, k: usize, l: usize) -> Result<BigInt> {
    require("lead_step_bounded", k >= 1 && l >= k && l < s && s <= n, || {
        format!("n={n} s={s} k={k} l={l}")
    })?;
    let big = |x: BigUint| BigInt::from(x);
    let mut total = BigInt::from(0);
    for i in k - 1..l.saturating_sub(1) {
        let tail = n + k - i - 1;
        let hi = p(src, tail, tail, s - i - 1, 0, Some(l - i))?;
        let lo = p(src, tail, tail, s - i - 1, 0, Some(l - i - 1))?;
        total += big(choose(n - 1, i + 1 - k) * p(src, i + 1 - k, i, i, 0, None)?) * (big(hi) - big(lo));
    }
    let tail = n + k - l;
    let one = p(src, tail, tail, s - l, 0, Some(1))?;
    let top = p(src, tail, tail, s - l, 1, Some(s - l))?;
    total += big(choose(n - 1, l - k) * p(src, l - k, l - 1, l - 1, 0, None)?) * (big(one) - big(top));
    Ok(total)
}

/// Size of the tight cell with `h = k-1` inside `P^l_{n;<=s;k}`.
/// Needs `k >= 1`, `k+1 <= l <= s-2`.
pub fn critical_count_bounded<C: CountSource + ?Sized>(
    src: &C,
    n: usize,
    s: usize,
    k: usize,
    l: usize,
) -> Result<BigUint> {
    require("critical_count_bounded", k >= 1 && l >= k + 1 && l + 2 <= s && s <= n, || {
        format!("n={n} s={s} k={k} l={l}")
    })?;
    let tail = n + k - l;
    Ok(choose(n - 1, l - k) * p(src, l - k, l - 1, l - 1, 0, None)? * p(src, tail, tail, s - l, 1, Some(s - l))?)
}

/// A counting formula together with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "formula", rename_all = "kebab-case")]
pub enum Formula {
    ParkingFunctions { n: usize, m: usize },
    LastGap { n: usize, s: usize, k: usize },
    LeadOneDrop { n: usize, k: usize },
    LeadOneConvolution { n: usize, k: usize },
    LeadStep { n: usize, k: usize, l: usize },
    LeadOneBounded { n: usize, s: usize, k: usize },
    LowGap { n: usize, s: usize, k: usize, l: usize },
    LeadStepBounded { n: usize, s: usize, k: usize, l: usize },
    Critical { n: usize, k: usize, l: usize },
    CriticalBounded { n: usize, s: usize, k: usize, l: usize },
}

/// Identifier, arguments used, and a one-line description, for every formula.
pub const FORMULA_IDS: &[(&str, &str, &str)] = &[
    ("pf", "n m", "0-flaw sets of n cars in m spaces"),
    ("last-gap", "n s k", "p_{n;<=s;k} split by the last empty space"),
    ("lead-one-drop", "n k", "p^1_{n,n+k} by deleting the leading 1"),
    ("lead-one-convolution", "n k", "p^1_{n,n+k} split by the last empty space"),
    ("lead-step", "n k l", "p^l_{n,n+k} - p^{l+1}_{n,n+k}"),
    ("lead-one-bounded", "n s k", "p^1_{n;<=s;k} split by the last empty space"),
    ("low-gap", "n s k l", "members of P^l_{n;<=s;k} with every gap below l"),
    ("lead-step-bounded", "n s k l", "p^{l+1}_{n;<=s;k} - p^l_{n;<=s;k}"),
    ("critical", "n k l", "tight members of P^l_{n,n+k} with every gap below l"),
    ("critical-bounded", "n s k l", "tight members of P^l_{n;<=s;k} with k-1 gaps below l"),
];

impl Formula {
    /// Builds a formula from its identifier and the class fields it reads.
    pub fn from_id(id: &str, spec: &ClassSpec) -> Result<Self> {
        let ClassSpec { n, m, s, k, l } = *spec;
        let need_l = || l.ok_or_else(|| out_of_range("formula", format!("`{id}` needs a leading term")));
        Ok(match id {
            "pf" => Self::ParkingFunctions { n, m },
            "last-gap" => Self::LastGap { n, s, k },
            "lead-one-drop" => Self::LeadOneDrop { n, k },
            "lead-one-convolution" => Self::LeadOneConvolution { n, k },
            "lead-step" => Self::LeadStep { n, k, l: need_l()? },
            "lead-one-bounded" => Self::LeadOneBounded { n, s, k },
            "low-gap" => Self::LowGap { n, s, k, l: need_l()? },
            "lead-step-bounded" => Self::LeadStepBounded { n, s, k, l: need_l()? },
            "critical" => Self::Critical { n, k, l: need_l()? },
            "critical-bounded" => Self::CriticalBounded { n, s, k, l: need_l()? },
            other => {
                return Err(Error::Parse(format!(
                    "unknown formula `{other}`; expected one of {}",
                    FORMULA_IDS.iter().map(|f| f.0).collect::<Vec<_>>().join(", ")
                )))
            }
        })
    }

    pub fn id(&self) -> &'static str {
        match self {
            Self::ParkingFunctions { .. } => "pf",
            Self::LastGap { .. } => "last-gap",
            Self::LeadOneDrop { .. } => "lead-one-drop",
            Self::LeadOneConvolution { .. } => "lead-one-convolution",
            Self::LeadStep { .. } => "lead-step",
            Self::LeadOneBounded { .. } => "lead-one-bounded",
            Self::LowGap { .. } => "low-gap",
            Self::LeadStepBounded { .. } => "lead-step-bounded",
            Self::Critical { .. } => "critical",
            Self::CriticalBounded { .. } => "critical-bounded",
        }
    }

    /// Evaluates the closed form; inner class sizes come from `src`.
    pub fn evaluate<C: CountSource + ?Sized>(&self, src: &C) -> Result<BigInt> {
        Ok(match *self {
            Self::ParkingFunctions { n, m } => crate::enumerate::count_pf(n, m)?.into(),
            Self::LastGap { n, s, k } => count_by_last_gap(src, n, s, k)?.into(),
            Self::LeadOneDrop { n, k } => lead_one_by_dropping(src, n, k)?.into(),
            Self::LeadOneConvolution { n, k } => lead_one_by_last_gap(src, n, k)?.into(),
            Self::LeadStep { n, k, l } => lead_step(src, n, k, l)?.into(),
            Self::LeadOneBounded { n, s, k } => lead_one_bounded(src, n, s, k)?.into(),
            Self::LowGap { n, s, k, l } => low_gap_count(src, n, s, k, l)?.into(),
            Self::LeadStepBounded { n, s, k, l } => lead_step_bounded(src, n, s, k, l)?,
            Self::Critical { n, k, l } => critical_count(src, n, k, l)?.into(),
            Self::CriticalBounded { n, s, k, l } => critical_count_bounded(src, n, s, k, l)?.into(),
        })
    }

    /// The quantity the formula claims to count, measured by brute force.
    pub fn brute(&self, oracle: &Oracle) -> Result<BigInt> {
        let c = |n, m, s, k, l| -> Result<BigInt> { Ok(oracle.p(n, m, s, k, l)?.into()) };
        Ok(match *self {
            Self::ParkingFunctions { n, m } => {
                if n > m {
                    return Err(out_of_range("pf", format!("n={n} > m={m}")));
                }
                c(n, m, m, 0, None)?
            }
            Self::LastGap { n, s, k } => c(n, n, s, k, None)?,
            Self::LeadOneDrop { n, k } | Self::LeadOneConvolution { n, k } => c(n, n + k, n + k, 0, Some(1))?,
            Self::LeadStep { n, k, l } => c(n, n + k, n + k, 0, Some(l))? - c(n, n + k, n + k, 0, Some(l + 1))?,
            Self::LeadOneBounded { n, s, k } => c(n, n, s, k, Some(1))?,
            Self::LowGap { n, s, k, l } => {
                let spec = ClassSpec::bounded(n, s, k, Some(l))?;
                count_where(&spec, oracle.budget(), |p| Profile::of(p).low_gap())?.into()
            }
            Self::LeadStepBounded { n, s, k, l } => c(n, n, s, k, Some(l + 1))? - c(n, n, s, k, Some(l))?,
            Self::Critical { n, k, l } => {
                let spec = ClassSpec::exact(n, n + k, n + k, 0, Some(l))?;
                count_where(&spec, oracle.budget(), |p| Profile::of(p).critical(k))?.into()
            }
            Self::CriticalBounded { n, s, k, l } => {
                let spec = ClassSpec::bounded(n, s, k, Some(l))?;
                count_where(&spec, oracle.budget(), |p| Profile::of(p).bounded_critical(k))?.into()
            }
        })
    }

    /// Every parameter tuple with `n <= n_max` inside the formula's range. Families over
    /// `P_{n,n+k}` take `k <= k_max`.
    pub fn all_in_range(n_max: usize, k_max: usize) -> Vec<Formula> {
        let mut out = Vec::new();
        for n in 0..=n_max {
            for m in n..=n_max {
                out.push(Self::ParkingFunctions { n, m });
            }
        }
        for n in 1..=n_max {
            for k in 0..=k_max {
                out.push(Self::LeadOneDrop { n, k });
                if k >= 1 {
                    out.push(Self::LeadOneConvolution { n, k });
                }
                for l in k + 1..n + k {
                    out.push(Self::LeadStep { n, k, l });
                }
                for l in k + 1..=n + k {
                    out.push(Self::Critical { n, k, l });
                }
            }
            for s in 1..=n {
                for k in 1..s {
                    out.push(Self::LastGap { n, s, k });
                    out.push(Self::LeadOneBounded { n, s, k });
                    for l in k..s {
                        out.push(Self::LowGap { n, s, k, l });
                        out.push(Self::LeadStepBounded { n, s, k, l });
                    }
                    for l in k + 1..s.saturating_sub(1) {
                        out.push(Self::CriticalBounded { n, s, k, l });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FormulaValue {
    pub id: String,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub value: BigInt,
}

/// A brute-force count next to an optional formula value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountReport {
    pub spec: ClassSpec,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub brute: BigInt,
    pub formula: Option<FormulaValue>,
    #[serde(rename = "match")]
    pub matches: bool,
}

impl CountReport {
    pub fn brute_only(spec: ClassSpec, brute: BigInt) -> Self {
        Self {
            spec,
            brute,
            formula: None,
            matches: false,
        }
    }

    pub fn compare(spec: ClassSpec, formula: &Formula, oracle: &Oracle) -> Result<Self> {
        let brute = formula.brute(oracle)?;
        let value = formula.evaluate(oracle)?;
        Ok(Self {
            spec,
            matches: brute == value,
            brute,
            formula: Some(FormulaValue {
                id: formula.id().to_string(),
                value,
            }),
        })
    }
}
