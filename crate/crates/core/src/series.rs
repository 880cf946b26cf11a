//! Truncated power series over exact rationals in up to four variables `x, y, z, v`.
//!
//! A series is the residue modulo the monomial ideal generated by `var^(t+1)` for every
//! variable with a finite truncation `t`, so every stored coefficient is exact. Binary
//! operations truncate to the componentwise minimum.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

pub type Exponent = [u32; 4];
/// Per-variable maximum degree; `None` means unbounded.
pub type Truncation = [Option<u32>; 4];

pub const X: usize = 0;
pub const Y: usize = 1;
pub const Z: usize = 2;
pub const V: usize = 3;
pub const VARIABLE_NAMES: [&str; 4] = ["x", "y", "z", "v"];

pub const UNBOUNDED: Truncation = [None; 4];

pub fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

pub fn integer(n: impl Into<BigInt>) -> BigRational {
    BigRational::from_integer(n.into())
}

pub fn factorial(n: u32) -> BigUint {
    (1..=n).fold(BigUint::one(), |acc, i| acc * i)
}

fn min_trunc(a: &Truncation, b: &Truncation) -> Truncation {
    std::array::from_fn(|i| match (a[i], b[i]) {
        (Some(p), Some(q)) => Some(p.min(q)),
        (p, None) => p,
        (None, q) => q,
    })
}

fn fits(e: &Exponent, t: &Truncation) -> bool {
    e.iter().zip(t).all(|(&d, t)| t.is_none_or(|t| d <= t))
}

#[derive(Clone, PartialEq, Eq)]
pub struct MultiSeries {
    trunc: Truncation,
    coeffs: BTreeMap<Exponent, BigRational>,
}

impl MultiSeries {
    pub fn zero(trunc: Truncation) -> Self {
        Self {
            trunc,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(c: BigRational, trunc: Truncation) -> Self {
        Self::monomial([0; 4], c, trunc)
    }

    pub fn one(trunc: Truncation) -> Self {
        Self::constant(BigRational::one(), trunc)
    }

    pub fn monomial(e: Exponent, c: BigRational, trunc: Truncation) -> Self {
        Self::from_terms([(e, c)], trunc)
    }

    pub fn var(i: usize, trunc: Truncation) -> Self {
        let mut e = [0; 4];
        e[i] = 1;
        Self::monomial(e, BigRational::one(), trunc)
    }

    /// Drops zeros and terms outside the truncation; repeated exponents accumulate.
    pub fn from_terms(terms: impl IntoIterator<Item = (Exponent, BigRational)>, trunc: Truncation) -> Self {
        let mut coeffs: BTreeMap<Exponent, BigRational> = BTreeMap::new();
        for (e, c) in terms {
            if fits(&e, &trunc) {
                *coeffs.entry(e).or_insert_with(BigRational::zero) += c;
            }
        }
        coeffs.retain(|_, c| !c.is_zero());
        Self { trunc, coeffs }
    }

    /// `Σ c_n var^n` from a coefficient list.
    pub fn univariate(var: usize, coeffs: impl IntoIterator<Item = BigRational>, trunc: Truncation) -> Self {
        Self::from_terms(
            coeffs.into_iter().enumerate().map(|(n, c)| {
                let mut e = [0; 4];
                e[var] = n as u32;
                (e, c)
            }),
            trunc,
        )
    }

    pub fn truncation(&self) -> Truncation {
        self.trunc
    }

    pub fn coeff(&self, e: Exponent) -> BigRational {
        self.coeffs.get(&e).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigRational)> {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Variables that occur with positive degree.
    pub fn variables(&self) -> Vec<usize> {
        (0..4).filter(|&i| self.coeffs.keys().any(|e| e[i] > 0)).collect()
    }

    pub fn constant_term(&self) -> BigRational {
        self.coeff([0; 4])
    }

    pub fn truncate(&self, trunc: Truncation) -> Self {
        Self::from_terms(self.coeffs.clone(), min_trunc(&self.trunc, &trunc))
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::from_terms(self.coeffs.iter().map(|(e, a)| (*e, a * c)), self.trunc)
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::one(self.trunc);
        let mut base = self.clone();
        let mut k = k;
        while k > 0 {
            if k & 1 == 1 {
                acc = &acc * &base;
            }
            k >>= 1;
            if k > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Keeps the terms whose exponent satisfies `keep`.
    pub fn retain(&self, keep: impl Fn(&Exponent) -> bool) -> Self {
        Self {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().filter(|(e, _)| keep(e)).map(|(e, c)| (*e, c.clone())).collect(),
        }
    }

    /// Coefficient of `var^d`, as a series in the remaining variables.
    pub fn slice(&self, var: usize, d: u32) -> Self {
        // The slice is constant in `var`, so it is exact in that direction.
        let mut t = self.trunc;
        t[var] = None;
        Self::from_terms(
            self.coeffs.iter().filter(|(e, _)| e[var] == d).map(|(e, c)| {
                let mut e = *e;
                e[var] = 0;
                (e, c.clone())
            }),
            t,
        )
    }

    /// Exchanges two variables.
    pub fn swap(&self, a: usize, b: usize) -> Self {
        let mut t = self.trunc;
        t.swap(a, b);
        Self::from_terms(
            self.coeffs.iter().map(|(e, c)| {
                let mut e = *e;
                e.swap(a, b);
                (e, c.clone())
            }),
            t,
        )
    }

    /// Fails when some variable with infinite truncation occurs in a non-constant term.
    fn require_nilpotent_part(&self, op: &str) -> Result<()> {
        match self.variables().into_iter().find(|&i| self.trunc[i].is_none()) {
            Some(i) => Err(Error::IllFounded(format!("{op} needs a finite truncation in {}", VARIABLE_NAMES[i]))),
            None => Ok(()),
        }
    }

    /// Multiplicative inverse; needs a nonzero constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self.constant_term();
        if c0.is_zero() {
            return Err(Error::NotDivisible("inverse of a series with zero constant term".into()));
        }
        self.require_nilpotent_part("inverse")?;
        // Newton step q ← q(2 − aq) doubles the number of correct orders.
        let two = Self::constant(integer(2), self.trunc);
        let mut q = Self::constant(c0.recip(), self.trunc);
        loop {
            let next = &q * &(&two - &(self * &q));
            if next == q {
                return Ok(q);
            }
            q = next;
        }
    }

    /// `Σ S^j / j!`; needs a zero constant term.
    pub fn exp(&self) -> Result<Self> {
        if !self.constant_term().is_zero() {
            return Err(Error::NonzeroConstant);
        }
        self.require_nilpotent_part("exp")?;
        let mut sum = Self::one(self.trunc);
        let mut term = Self::one(self.trunc);
        for j in 1i64.. {
            term = (&term * self).scale(&rational(1, j));
            if term.is_zero() {
                break;
            }
            sum = &sum + &term;
        }
        Ok(sum)
    }

    /// Replaces `var` by `t`. Exact when `t^(d+1)` vanishes in the result truncation, `d`
    /// being the truncation of `var`; otherwise the composition is ill-founded.
    pub fn substitute(&self, var: usize, t: &Self) -> Result<Self> {
        let mut trunc = min_trunc(&self.trunc, &t.trunc);
        trunc[var] = t.trunc[var];
        let top = self.coeffs.keys().map(|e| e[var]).max().unwrap_or(0);
        if let Some(d) = self.trunc[var] {
            if !t.truncate(trunc).pow(d + 1).is_zero() {
                return Err(Error::IllFounded(format!(
                    "substituting into {} truncated at degree {d} leaves higher powers",
                    VARIABLE_NAMES[var]
                )));
            }
        }
        let mut groups: BTreeMap<u32, Vec<(Exponent, BigRational)>> = BTreeMap::new();
        for (e, c) in &self.coeffs {
            let mut rest = *e;
            rest[var] = 0;
            groups.entry(e[var]).or_default().push((rest, c.clone()));
        }
        let t = t.truncate(trunc);
        let mut out = Self::zero(trunc);
        let mut power = Self::one(trunc);
        for j in 0..=top {
            if let Some(g) = groups.remove(&j) {
                out = &out + &(&Self::from_terms(g, trunc) * &power);
            }
            if j < top {
                power = &power * &t;
            }
        }
        Ok(out)
    }

    /// Monomial rescaling: the exponent of `target` becomes `e[target] + Σ shift[j]·e[j]`.
    /// `shift[target]` must be 0. Negative shifts lower the retained degree of `target` so
    /// that every kept coefficient stays exact; a negative resulting exponent is an error.
    pub fn monomial_shift(&self, target: usize, shift: [i64; 4]) -> Result<Self> {
        if shift[target] != 0 {
            return Err(Error::IllFounded("a rescaling cannot shift its own variable".into()));
        }
        let mut trunc = self.trunc;
        let depends = self.coeffs.keys().any(|e| e[target] > 0);
        if let Some(t) = self.trunc[target] {
            let mut lost = 0i64;
            for (j, &sh) in shift.iter().enumerate() {
                if sh < 0 {
                    match self.trunc[j] {
                        Some(tj) => lost += -sh * tj as i64,
                        None if depends => {
                            return Err(Error::IllFounded(format!(
                                "negative shift by unbounded {}",
                                VARIABLE_NAMES[j]
                            )))
                        }
                        None => {}
                    }
                }
            }
            if depends {
                if lost > t as i64 {
                    return Err(Error::IllFounded("rescaling leaves no exact coefficients".into()));
                }
                trunc[target] = Some(t - lost as u32);
            }
        }
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (e, c) in &self.coeffs {
            let d = e[target] as i64 + shift.iter().zip(e).map(|(&s, &x)| s * x as i64).sum::<i64>();
            if d < 0 {
                return Err(Error::IllFounded(format!("rescaling produces a negative exponent at {e:?}")));
            }
            let mut e = *e;
            e[target] = d as u32;
            terms.push((e, c.clone()));
        }
        Ok(Self::from_terms(terms, trunc))
    }

    /// Divides by the monomial `m`; every term must be a multiple of it. Truncations drop by
    /// the exponents of `m`, since the missing high terms would feed those degrees.
    pub fn divide_by_monomial(&self, m: Exponent) -> Result<Self> {
        let mut trunc = self.trunc;
        for i in 0..4 {
            if let Some(t) = trunc[i] {
                trunc[i] = Some(t.checked_sub(m[i]).ok_or_else(|| {
                    Error::NotDivisible(format!("truncation below the divisor in {}", VARIABLE_NAMES[i]))
                })?);
            }
        }
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for (e, c) in &self.coeffs {
            if (0..4).any(|i| e[i] < m[i]) {
                return Err(Error::NotDivisible(format!("term {e:?} is not a multiple of {m:?}")));
            }
            terms.push((std::array::from_fn(|i| e[i] - m[i]), c.clone()));
        }
        Ok(Self::from_terms(terms, trunc))
    }

    /// Largest monomial dividing every term.
    pub fn monomial_content(&self) -> Exponent {
        let mut g = [u32::MAX; 4];
        for e in self.coeffs.keys() {
            for i in 0..4 {
                g[i] = g[i].min(e[i]);
            }
        }
        if self.coeffs.is_empty() {
            [0; 4]
        } else {
            g
        }
    }

    /// Coefficient scaled by `w`, which must give an integer.
    pub fn scaled_integer(&self, e: Exponent, w: &BigUint) -> Result<BigInt> {
        let c = self.coeff(e) * integer(BigInt::from(w.clone()));
        if c.is_integer() {
            Ok(c.to_integer())
        } else {
            Err(Error::Inconsistent(format!("scaled coefficient at {e:?} is {c}, not an integer")))
        }
    }

    /// Exponents retained under the truncation with bounded degrees `max` where unbounded.
    pub fn retained_box(&self, max: Exponent) -> impl Iterator<Item = Exponent> {
        let hi: [u32; 4] = std::array::from_fn(|i| self.trunc[i].map_or(max[i], |t| t.min(max[i])));
        (0..=hi[0]).flat_map(move |a| {
            (0..=hi[1]).flat_map(move |b| (0..=hi[2]).flat_map(move |c| (0..=hi[3]).map(move |d| [a, b, c, d])))
        })
    }
}

impl fmt::Debug for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiSeries[{:?}] {}", self.trunc, self)
    }
}

impl fmt::Display for MultiSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.is_empty() {
            return f.write_str("0");
        }
        for (i, (e, c)) in self.coeffs.iter().enumerate() {
            let sign = if c.is_negative() { "-" } else { "+" };
            if i > 0 {
                write!(f, " {sign} ")?;
            } else if c.is_negative() {
                f.write_str("-")?;
            }
            let mono: Vec<String> = (0..4)
                .filter(|&j| e[j] > 0)
                .map(|j| match e[j] {
                    1 => VARIABLE_NAMES[j].to_string(),
                    d => format!("{}^{d}", VARIABLE_NAMES[j]),
                })
                .collect();
            let a = c.abs();
            match (mono.is_empty(), a.is_one()) {
                (true, _) => write!(f, "{a}")?,
                (false, true) => write!(f, "{}", mono.join("*"))?,
                (false, false) => write!(f, "{a}*{}", mono.join("*"))?,
            }
        }
        Ok(())
    }
}

impl Add for &MultiSeries {
    type Output = MultiSeries;

    fn add(self, rhs: &MultiSeries) -> MultiSeries {
        let trunc = min_trunc(&self.trunc, &rhs.trunc);
        MultiSeries::from_terms(
            self.coeffs.iter().chain(rhs.coeffs.iter()).map(|(e, c)| (*e, c.clone())),
            trunc,
        )
    }
}

impl Sub for &MultiSeries {
    type Output = MultiSeries;

    fn sub(self, rhs: &MultiSeries) -> MultiSeries {
        self + &(-rhs)
    }
}

impl Neg for &MultiSeries {
    type Output = MultiSeries;

    fn neg(self) -> MultiSeries {
        MultiSeries {
            trunc: self.trunc,
            coeffs: self.coeffs.iter().map(|(e, c)| (*e, -c)).collect(),
        }
    }
}

impl Mul for &MultiSeries {
    type Output = MultiSeries;

    fn mul(self, rhs: &MultiSeries) -> MultiSeries {
        let trunc = min_trunc(&self.trunc, &rhs.trunc);
        let (small, large) = if self.len() <= rhs.len() { (self, rhs) } else { (rhs, self) };
        let large: Vec<(&Exponent, &BigRational)> = large.coeffs.iter().filter(|(e, _)| fits(e, &trunc)).collect();
        let mut acc: HashMap<Exponent, BigRational> = HashMap::new();
        for (e1, c1) in small.coeffs.iter().filter(|(e, _)| fits(e, &trunc)) {
            for &(e2, c2) in &large {
                let e: Exponent = std::array::from_fn(|i| e1[i] + e2[i]);
                if fits(&e, &trunc) {
                    let p = c1 * c2;
                    match acc.get_mut(&e) {
                        Some(a) => *a += p,
                        None => {
                            acc.insert(e, p);
                        }
                    }
                }
            }
        }
        MultiSeries::from_terms(acc, trunc)
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for MultiSeries {
            type Output = MultiSeries;
            fn $m(self, rhs: MultiSeries) -> MultiSeries {
                (&self).$m(&rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

/// A quotient whose denominator, after removing its monomial content, is a unit.
#[derive(Debug, Clone)]
pub struct SeriesFraction {
    pub numerator: MultiSeries,
    pub denominator: MultiSeries,
}

impl SeriesFraction {
    pub fn new(numerator: MultiSeries, denominator: MultiSeries) -> Self {
        Self { numerator, denominator }
    }

    pub fn expand(&self) -> Result<MultiSeries> {
        let g = self.denominator.monomial_content();
        let den = self.denominator.divide_by_monomial(g)?;
        if den.constant_term().is_zero() {
            return Err(Error::NotDivisible(format!(
                "denominator {} has no unit lowest term after removing {g:?}",
                self.denominator
            )));
        }
        let num = self.numerator.divide_by_monomial(g)?;
        Ok(&num * &den.inverse()?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const T2: Truncation = [Some(2), None, None, None];

    fn x(t: Truncation) -> MultiSeries {
        MultiSeries::var(X, t)
    }

    #[test]
    fn arithmetic_basics() {
        let one = MultiSeries::one(T2);
        let p = (&one + &x(T2)) * (&one - &x(T2));
        assert_eq!(p, &one - &x(T2).pow(2));
        assert_eq!(x(T2).pow(0), one);
        assert!(x(T2).pow(3).is_zero());
        assert_eq!(p.to_string(), "1 - x^2");
    }

    #[test]
    fn exp_of_simple_arguments() {
        let t = [Some(6), Some(6), None, None];
        assert_eq!(MultiSeries::zero(t).exp().unwrap(), MultiSeries::one(t));
        let e = x(t).exp().unwrap();
        for n in 0..=6u32 {
            assert_eq!(e.coeff([n, 0, 0, 0]), integer(1) / integer(BigInt::from(factorial(n))));
        }
        let exy = (x(t) * MultiSeries::var(Y, t)).exp().unwrap();
        for a in 0..=6u32 {
            for b in 0..=6u32 {
                let want = if a == b { integer(1) / integer(BigInt::from(factorial(a))) } else { integer(0) };
                assert_eq!(exy.coeff([a, b, 0, 0]), want);
            }
        }
        assert_eq!(MultiSeries::one(t).exp(), Err(Error::NonzeroConstant));
        assert!(MultiSeries::var(Z, t).exp().is_err());
    }

    #[test]
    fn inverse_and_fractions() {
        let t = [Some(5), Some(5), None, None];
        let one = MultiSeries::one(t);
        let geo = (&one - &x(t)).inverse().unwrap();
        assert!((0..=5).all(|n| geo.coeff([n, 0, 0, 0]) == integer(1)));
        assert!(x(t).inverse().is_err());
        // x(1+y) / (x(1-y)) expands after removing the common x
        let y = MultiSeries::var(Y, t);
        let f = SeriesFraction::new(&x(t) * &(&one + &y), &x(t) * &(&one - &y)).expand().unwrap();
        assert_eq!(f.truncation()[X], Some(4));
        assert_eq!(f.coeff([0, 3, 0, 0]), integer(2));
        let bad = SeriesFraction::new(one.clone(), &y - &x(t));
        assert!(matches!(bad.expand(), Err(Error::NotDivisible(_))));
    }

    #[test]
    fn substitution_and_rescaling() {
        let t = [Some(4), Some(4), Some(4), None];
        let s = MultiSeries::univariate(X, (1..=5).map(integer), t);
        assert_eq!(s.substitute(X, &x(t)).unwrap(), s);
        let xy = &x(t) * &MultiSeries::var(Y, t);
        let via_sub = s.substitute(X, &xy).unwrap();
        assert_eq!(via_sub, s.monomial_shift(Y, [1, 0, 0, 0]).unwrap());
        assert_eq!(via_sub.coeff([3, 3, 0, 0]), integer(4));
        // x → 1 + x does not terminate in a truncated ring
        assert!(s.substitute(X, &(&MultiSeries::one(t) + &x(t))).is_err());
        // y/x-type shifts are refused when they would leave negative exponents
        let y = MultiSeries::var(Y, t);
        assert!(y.monomial_shift(X, [0, -1, 0, 0]).is_err());
        let shifted = (&y * &x(t)).monomial_shift(X, [0, -1, 0, 0]).unwrap();
        assert_eq!(shifted.truncation()[X], Some(0));
    }

    #[test]
    fn monomial_division() {
        let t = [Some(4), Some(4), None, None];
        let s = &x(t) * &(&MultiSeries::one(t) + &MultiSeries::var(Y, t));
        assert_eq!(s.monomial_content(), [1, 0, 0, 0]);
        let q = s.divide_by_monomial([1, 0, 0, 0]).unwrap();
        assert_eq!(q.truncation()[X], Some(3));
        assert!(s.divide_by_monomial([0, 1, 0, 0]).is_err());
    }

    fn arb_series() -> impl Strategy<Value = MultiSeries> {
        prop::collection::vec(((0u32..4, 0u32..3), -5i64..6, 1i64..4), 0..8).prop_map(|terms| {
            MultiSeries::from_terms(
                terms.into_iter().map(|((a, b), n, d)| ([a, b, 0, 0], rational(n, d))),
                [Some(3), Some(2), None, None],
            )
        })
    }

    fn arb_nil() -> impl Strategy<Value = MultiSeries> {
        arb_series().prop_map(|s| s.retain(|e| *e != [0; 4]))
    }

    proptest! {
        #[test]
        fn ring_laws(a in arb_series(), b in arb_series(), c in arb_series()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &b, &b * &a);
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&(&a + &b) - &b, a);
        }

        #[test]
        fn exp_is_a_homomorphism(a in arb_nil(), b in arb_nil()) {
            prop_assert_eq!((&a + &b).exp().unwrap(), &a.exp().unwrap() * &b.exp().unwrap());
        }

        #[test]
        fn inverse_inverts(a in arb_nil()) {
            let u = &MultiSeries::one(a.truncation()) + &a;
            prop_assert_eq!(&u * &u.inverse().unwrap(), MultiSeries::one(a.truncation()));
        }
    }
}
