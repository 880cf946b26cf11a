//! Coefficient-level comparison of the generating functions against brute-force counts,
//! plus the agreement of every pair of independent constructions.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use serde::Serialize;

use crate::enumerate::Oracle;
use crate::error::Result;
use crate::gf::{scaled, Engine};
use crate::series::{MultiSeries, Y};

/// Degrees swept by [`verify_series`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SeriesRanges {
    /// `x`-degree for the single-variable families.
    pub univariate: u32,
    /// `x`-degree for `F`, `W` and the bivariate and trivariate closed forms.
    pub multivariate: u32,
    /// Largest flaw count over `n + k` spaces.
    pub k_max: u32,
}

impl Default for SeriesRanges {
    fn default() -> Self {
        Self {
            univariate: 7,
            multivariate: 6,
            k_max: 3,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CoefficientCheck {
    /// Series and slice, e.g. `D[k=1,s=0]`.
    pub series: String,
    pub n: u32,
    /// `n!` or `(n−1)!` times the coefficient of `x^n`.
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub value: BigRational,
    #[serde(serialize_with = "crate::decimal::serialize")]
    pub oracle: BigUint,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualCheck {
    pub name: String,
    pub pass: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SeriesReport {
    pub coefficients: Vec<CoefficientCheck>,
    pub duals: Vec<DualCheck>,
    /// Terms of the raw `F` expansion outside its support, dropped by projection.
    pub discarded_f_terms: usize,
}

impl SeriesReport {
    pub fn passed(&self) -> bool {
        self.coefficients.iter().all(|c| c.pass) && self.duals.iter().all(|d| d.pass)
    }

    pub fn failures(&self) -> usize {
        self.coefficients.iter().filter(|c| !c.pass).count() + self.duals.iter().filter(|d| !d.pass).count()
    }
}

/// `P^l_{n;<=bound;k}` with the empty cases `bound <= 0` and `l <= 0` made explicit.
fn bounded(o: &Oracle, n: u32, bound: i64, k: u32, lead: Option<i64>) -> Result<BigUint> {
    if bound <= 0 || lead.is_some_and(|l| l <= 0) {
        return Ok(BigUint::default());
    }
    let n = n as usize;
    o.p(n, n, bound as usize, k as usize, lead.map(|l| l as usize))
}

/// `P^l_{n,n+k}` with `s = n + k`.
fn unbounded(o: &Oracle, n: u32, k: u32, lead: Option<u32>) -> Result<BigUint> {
    let m = (n + k) as usize;
    o.p(n as usize, m, m, 0, lead.map(|l| l as usize))
}

struct Collector<'a> {
    oracle: &'a Oracle,
    report: SeriesReport,
}

impl Collector<'_> {
    fn coefficient(&mut self, series: String, n: u32, c: &BigRational, full: bool, oracle: BigUint) {
        let value = scaled(c, n, full);
        let pass = value == BigRational::from_integer(BigInt::from(oracle.clone()));
        self.report.coefficients.push(CoefficientCheck {
            series,
            n,
            value,
            oracle,
            pass,
        });
    }

    fn univariate(&mut self, series: String, s: &MultiSeries, ns: impl Iterator<Item = u32>, full: bool, count: impl Fn(u32) -> Result<BigUint>) -> Result<()> {
        for n in ns {
            let oracle = count(n)?;
            self.coefficient(series.clone(), n, &s.coeff([n, 0, 0, 0]), full, oracle);
        }
        Ok(())
    }

    fn dual(&mut self, name: String, a: &MultiSeries, b: &MultiSeries) {
        let pass = (a - b).is_zero();
        self.report.duals.push(DualCheck { name, pass });
    }

    fn vanishes(&mut self, name: &str, residual: &MultiSeries) {
        self.report.duals.push(DualCheck {
            name: name.to_string(),
            pass: residual.is_zero(),
        });
    }
}

/// Checks every scaled coefficient with `n >= 1` against the oracle, and every dual
/// construction against its partner.
///
/// Scalings: `n!` for `Q_k, R_k, D_{k,s}`; `(n−1)!` for `I_k, H_{l,k}, M_{s,k}, F, W`.
pub fn verify_series(ranges: SeriesRanges, oracle: &Oracle) -> Result<SeriesReport> {
    let mut c = Collector {
        oracle,
        report: SeriesReport::default(),
    };
    univariate_checks(&mut c, &Engine::new(ranges.univariate), ranges.k_max)?;
    multivariate_checks(&mut c, &Engine::new(ranges.multivariate))?;
    Ok(c.report)
}

fn univariate_checks(c: &mut Collector, e: &Engine, k_max: u32) -> Result<()> {
    let big_n = e.degree();
    let o = c.oracle;
    c.vanishes("x P(x) exp(-x P(x)) = x", &e.inverse_identity_residual()?);
    for k in 0..=k_max {
        c.univariate(format!("Q[k={k}]"), &e.q(k), 1..=big_n, true, |n| unbounded(o, n, k, None))?;
        c.univariate(format!("I[k={k}]"), &e.i(k), 1..=big_n, false, |n| unbounded(o, n, k, Some(1)))?;
        c.dual(format!("I[k={k}] product = recurrence"), &e.i(k), &e.i_recurrence(k));
        let hk = e.h_bivariate(k)?;
        for l in 0..big_n {
            let h = e.h(l, k);
            c.univariate(format!("H[l={l},k={k}]"), &h, l + 1..=big_n, false, |n| unbounded(o, n, k, Some(n + k - l)))?;
            c.dual(format!("H[l={l},k={k}] recurrence = closed form"), &h, &hk.slice(Y, l));
        }
    }
    for k in 0..big_n {
        let r = e.r(k);
        c.univariate(format!("R[k={k}]"), &r, 1..=big_n, true, |n| bounded(o, n, n as i64 - k as i64, 0, None))?;
        c.dual(format!("R[k={k}] finite sum = bivariate slice"), &r, &e.r_slice(k));
    }
    for k in 1..big_n {
        for s in 0..big_n - k {
            let d = e.d(k, s)?;
            let bound = |n: u32| n as i64 - s as i64;
            c.univariate(format!("D[k={k},s={s}]"), &d, 1..=big_n, true, |n| bounded(o, n, bound(n), k, None))?;
            c.dual(format!("D[k={k},s={s}] finite sum = product"), &d, &e.d_product(k, s)?);
            let m = e.m(s, k)?;
            c.univariate(format!("M[s={s},k={k}]"), &m, 1..=big_n, false, |n| bounded(o, n, bound(n), k, Some(1)))?;
        }
    }
    Ok(())
}

fn multivariate_checks(c: &mut Collector, e: &Engine) -> Result<()> {
    let big_n = e.degree();
    let o = c.oracle;
    c.vanishes("D closed form", &e.d_closed_residual()?);
    c.vanishes("M closed form", &e.m_closed_residual()?);

    let (f, discarded) = e.f_with_discarded();
    c.report.discarded_f_terms = *discarded;
    for n in 1..=big_n {
        for s in 0..n {
            for k in 0..=s {
                let oracle = bounded(o, n, (n - k) as i64, 0, Some((n - s) as i64))?;
                c.coefficient(format!("F[s={s},k={k}]"), n, &f.coeff([n, s, k, 0]), false, oracle);
            }
        }
    }

    let rb = e.r_bivariate();
    let ib = e.i_bivariate(big_n)?;
    let hb = e.h_trivariate(big_n)?;
    for n in 1..=big_n {
        for k in 0..=n {
            let oracle = bounded(o, n, n as i64 - k as i64, 0, None)?;
            c.coefficient(format!("R(x,y)[k={k}]"), n, &rb.coeff([n, k, 0, 0]), true, oracle);
            let oracle = unbounded(o, n, k, Some(1))?;
            c.coefficient(format!("I(x,y)[k={k}]"), n, &ib.coeff([n, k, 0, 0]), false, oracle);
            for l in 0..n {
                let oracle = unbounded(o, n, k, Some(n + k - l))?;
                c.coefficient(format!("H(x,y,z)[l={l},k={k}]"), n, &hb.coeff([n, l, k, 0]), false, oracle);
            }
        }
    }

    for k in 1..big_n {
        for s in 0..=big_n - k {
            let up = e.w_ascending(k, s)?;
            let down = e.w_descending(k, s)?;
            for (i, (w, w2)) in up.iter().zip(&down).enumerate() {
                let l = s + i as u32;
                c.dual(format!("W[k={k},s={s},l={l}] ascending = descending"), w, w2);
                for n in k + l..=big_n {
                    let oracle = bounded(o, n, n as i64 - s as i64, k, Some(n as i64 - l as i64))?;
                    c.coefficient(format!("W[k={k},s={s},l={l}]"), n, &w.coeff([n, 0, 0, 0]), false, oracle);
                }
            }
        }
    }
    c.vanishes("W closed form", &e.w_closed_residual()?);
    Ok(())
}
