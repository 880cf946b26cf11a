//! Exponential generating functions of the counted classes, each built along two routes.
//!
//! Every series is truncated in `x` only. Variables `y, z, v` index a parameter that never
//! exceeds the degree in `x` on the true support, so after computing with a finite bound the
//! engine drops that bound and the remaining coefficients are complete.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;

use crate::error::{out_of_range, Result};
use crate::series::{factorial, integer, MultiSeries, SeriesFraction, Truncation, V, X, Y, Z};

/// Cached building blocks at a fixed `x`-degree.
pub struct Engine {
    n: u32,
    p: MultiSeries,
    r: OnceLock<MultiSeries>,
    f: OnceLock<(MultiSeries, usize)>,
}

fn recip_factorial(n: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(factorial(n)))
}

fn int_pow(b: u32, e: u32) -> BigInt {
    num_traits::pow(BigInt::from(b), e as usize)
}

/// Drops the bound on `vars`; the caller guarantees no term beyond it exists.
fn complete_in(s: &MultiSeries, vars: &[usize]) -> MultiSeries {
    let mut t = s.truncation();
    for &v in vars {
        t[v] = None;
    }
    MultiSeries::from_terms(s.terms().map(|(e, c)| (*e, c.clone())), t)
}

impl Engine {
    pub fn new(n: u32) -> Self {
        let t = [Some(n), None, None, None];
        let p = MultiSeries::univariate(
            X,
            (0..=n).map(|k| match k {
                0 => integer(1),
                _ => integer(int_pow(k + 1, k - 1)) * recip_factorial(k),
            }),
            t,
        );
        Self {
            n,
            p,
            r: OnceLock::new(),
            f: OnceLock::new(),
        }
    }

    pub fn degree(&self) -> u32 {
        self.n
    }

    fn trunc(&self) -> Truncation {
        [Some(self.n), None, None, None]
    }

    /// Truncation with every variable bounded by the `x`-degree.
    fn boxed(&self) -> Truncation {
        [Some(self.n); 4]
    }

    fn var(&self, i: usize) -> MultiSeries {
        MultiSeries::var(i, self.trunc())
    }

    fn one(&self) -> MultiSeries {
        MultiSeries::one(self.trunc())
    }

    fn x_power(&self, d: u32, c: BigRational) -> MultiSeries {
        MultiSeries::monomial([d, 0, 0, 0], c, self.trunc())
    }

    /// Tree function `P(x) = Σ (n+1)^(n−1) x^n / n!`.
    pub fn p(&self) -> &MultiSeries {
        &self.p
    }

    /// `P(xy)`.
    pub fn p_xy(&self) -> MultiSeries {
        self.p.monomial_shift(Y, [1, 0, 0, 0]).expect("positive rescaling")
    }

    /// `x P(x) e^(−x P(x)) − x`, which vanishes.
    pub fn inverse_identity_residual(&self) -> Result<MultiSeries> {
        let xp = &self.var(X) * &self.p;
        let e = (-&xp).exp()?;
        Ok(&(&xp * &e) - &self.var(X))
    }

    /// 0-flaw sets over `n + k` spaces: `P^(k+1)`.
    pub fn q(&self, k: u32) -> MultiSeries {
        self.p.pow(k + 1)
    }

    /// `Σ_{i<=j} (−1)^i (c − i)^i x^i / i!`.
    fn alternating(&self, c: u32, j: i64) -> MultiSeries {
        if j < 0 {
            return MultiSeries::zero(self.trunc());
        }
        MultiSeries::univariate(
            X,
            (0..=j as u32).map(|i| {
                let sign = if i % 2 == 0 { integer(1) } else { integer(-1) };
                sign * integer(int_pow(c - i, i)) * recip_factorial(i)
            }),
            self.trunc(),
        )
    }

    /// Bounded 0-flaw sets `P_{n;<=n−k}` by the finite-sum formula.
    pub fn r(&self, k: u32) -> MultiSeries {
        &(&self.p * &self.alternating(k + 1, k as i64)) - &self.alternating(k, k as i64 - 1)
    }

    /// `R(x, y) = (P(x) − y) / (e^(xy) − y)`, whose `y^k` slice is `R_k`.
    pub fn r_bivariate(&self) -> &MultiSeries {
        self.r.get_or_init(|| {
            let t = self.boxed();
            let y = MultiSeries::var(Y, t);
            let xy = &MultiSeries::var(X, t) * &y;
            let num = &self.p.truncate(t) - &y;
            let den = &xy.exp().expect("xy has no constant term") - &y;
            let r = SeriesFraction::new(num, den).expand().expect("unit denominator");
            complete_in(&r, &[Y])
        })
    }

    pub fn r_slice(&self, k: u32) -> MultiSeries {
        complete_in(&self.r_bivariate().slice(Y, k), &[Z, V])
    }

    /// `k`-flaw sets with entries `<= n − s`, by the finite-sum formula.
    pub fn d(&self, k: u32, s: u32) -> Result<MultiSeries> {
        if k == 0 {
            return Err(out_of_range("d", "needs k >= 1"));
        }
        let c = k + s;
        Ok(&(&self.p.pow(k + 1) * &self.alternating(c + 1, c as i64)) - &(&self.p.pow(k) * &self.alternating(c, c as i64 - 1)))
    }

    /// Same series as the product `Q_{k−1} · R_{s+k}`, with `R` read from `R(x, y)`.
    pub fn d_product(&self, k: u32, s: u32) -> Result<MultiSeries> {
        if k == 0 {
            return Err(out_of_range("d_product", "needs k >= 1"));
        }
        Ok(&self.q(k - 1) * &self.r_slice(s + k))
    }

    /// `Σ_{k>=1, s>=0} D_{k,s}(x) y^s z^k`.
    pub fn d_grid(&self) -> Result<MultiSeries> {
        let mut terms = Vec::new();
        for k in 1..=self.n {
            for s in 0..=self.n - k {
                let d = self.d(k, s)?;
                terms.extend(d.terms().map(|(e, c)| ([e[0], s, k, 0], c.clone())));
            }
        }
        Ok(MultiSeries::from_terms(terms, self.trunc()))
    }

    /// `R(x, z P(x))`.
    fn r_at_zp(&self) -> Result<MultiSeries> {
        let zp = &self.var(Z) * &self.p;
        self.r_bivariate().substitute(Y, &zp)
    }

    /// `(y − zP) D − zP [R(x,y) − R(x,zP)]`, which vanishes.
    pub fn d_closed_residual(&self) -> Result<MultiSeries> {
        let zp = &self.var(Z) * &self.p;
        let lhs = &(&self.var(Y) - &zp) * &self.d_grid()?;
        let rhs = &zp * &(self.r_bivariate() - &self.r_at_zp()?);
        Ok(&lhs - &rhs)
    }

    /// Lead-1 0-flaw sets over `n + k` spaces: `x P^(k+2)`.
    pub fn i(&self, k: u32) -> MultiSeries {
        &self.var(X) * &self.p.pow(k + 2)
    }

    /// `I_0 = x P^2`, `I_k = I_{k−1} P`.
    pub fn i_recurrence(&self, k: u32) -> MultiSeries {
        let mut acc = &self.var(X) * &self.p.pow(2);
        for _ in 0..k {
            acc = &acc * &self.p;
        }
        acc
    }

    /// `I(x, y) = x P^2 / (1 − y P)`; its `y`-degree is bounded by `y_max`.
    pub fn i_bivariate(&self, y_max: u32) -> Result<MultiSeries> {
        let t = [Some(self.n), Some(y_max), None, None];
        let p = self.p.truncate(t);
        let num = &(&MultiSeries::var(X, t) * &p) * &p;
        let den = &MultiSeries::one(t) - &(&MultiSeries::var(Y, t) * &p);
        SeriesFraction::new(num, den).expand()
    }

    /// Lead `n + k − l` over `n + k` spaces, by the recurrence in `l` from `H_{0,k} = x P^(k+1)`.
    pub fn h(&self, l: u32, k: u32) -> MultiSeries {
        let pk = self.p.pow(k + 1);
        let ik = self.i(k);
        let mut acc = &self.var(X) * &pk;
        for j in 1..=l {
            let drop = self.x_power(j, ik.coeff([j, 0, 0, 0]));
            let add = &self.x_power(j + 1, self.p.coeff([j, 0, 0, 0])) * &pk;
            acc = &(&acc - &drop) + &add;
        }
        acc
    }

    /// `H_k(x, y) = x P(xy) [P^(k+1) − y P(xy)^(k+1)] / (1 − y)`.
    pub fn h_bivariate(&self, k: u32) -> Result<MultiSeries> {
        let t = self.boxed();
        let pxy = self.p_xy().truncate(t);
        let y = MultiSeries::var(Y, t);
        let inner = &self.p.truncate(t).pow(k + 1) - &(&y * &pxy.pow(k + 1));
        let num = &(&MultiSeries::var(X, t) * &pxy) * &inner;
        let h = SeriesFraction::new(num, &MultiSeries::one(t) - &y).expand()?;
        Ok(complete_in(&h, &[Y, Z, V]))
    }

    /// `H(x, y, z) = x P(xy) / (1 − y) [P / (1 − zP) − y P(xy) / (1 − z P(xy))]`; its
    /// `z`-degree is bounded by `z_max`.
    pub fn h_trivariate(&self, z_max: u32) -> Result<MultiSeries> {
        let t = [Some(self.n), Some(self.n), Some(z_max), None];
        let one = MultiSeries::one(t);
        let (y, z) = (MultiSeries::var(Y, t), MultiSeries::var(Z, t));
        let p = self.p.truncate(t);
        let pxy = self.p_xy().truncate(t);
        let a = SeriesFraction::new(p.clone(), &one - &(&z * &p)).expand()?;
        let b = SeriesFraction::new(&y * &pxy, &one - &(&z * &pxy)).expand()?;
        let h = SeriesFraction::new(&(&MultiSeries::var(X, t) * &pxy) * &(&a - &b), &one - &y).expand()?;
        Ok(complete_in(&h, &[Y]))
    }

    /// Lead-1 `k`-flaw sets with entries `<= n − s`: `R_{s+k} I_{k−1}`.
    pub fn m(&self, s: u32, k: u32) -> Result<MultiSeries> {
        if k == 0 {
            return Err(out_of_range("m", "needs k >= 1"));
        }
        Ok(&self.r(s + k) * &self.i(k - 1))
    }

    pub fn m_grid(&self) -> Result<MultiSeries> {
        let mut terms = Vec::new();
        for k in 1..=self.n {
            for s in 0..=self.n - k {
                let m = self.m(s, k)?;
                terms.extend(m.terms().map(|(e, c)| ([e[0], s, k, 0], c.clone())));
            }
        }
        Ok(MultiSeries::from_terms(terms, self.trunc()))
    }

    /// `(y − zP) M − x z P^2 [R(x,y) − R(x,zP)]`, which vanishes.
    pub fn m_closed_residual(&self) -> Result<MultiSeries> {
        let zp = &self.var(Z) * &self.p;
        let lhs = &(&self.var(Y) - &zp) * &self.m_grid()?;
        let rhs = &(&(&self.var(X) * &zp) * &self.p) * &(self.r_bivariate() - &self.r_at_zp()?);
        Ok(&lhs - &rhs)
    }

    /// `F(x, y, z)` with `[x^n y^s z^k]` scaled by `(n−1)!` counting `P^(n−s)_{n;<=n−k}`,
    /// restricted to its support `k <= s < n`, and the number of discarded terms.
    pub fn f_with_discarded(&self) -> &(MultiSeries, usize) {
        self.f.get_or_init(|| {
            let t = [Some(self.n), Some(self.n), Some(self.n), None];
            let one = MultiSeries::one(t);
            let (x, y, z) = (MultiSeries::var(X, t), MultiSeries::var(Y, t), MultiSeries::var(Z, t));
            let p = self.p.truncate(t);
            let pxy = self.p_xy().truncate(t);
            let pxyz = pxy.monomial_shift(Z, [1, 0, 0, 0]).expect("positive rescaling");
            let yz = &y * &z;
            let first = SeriesFraction::new(&pxy * &(&p - &(&y * &pxy)), &one - &y).expand().expect("unit");
            let second = SeriesFraction::new(&(&z * &pxyz) * &(&p - &(&yz * &pxyz)), &one - &yz)
                .expand()
                .expect("unit");
            let den = &(&x * &yz).exp().expect("no constant term") - &z;
            let raw = SeriesFraction::new(&x * &(&first - &second), den).expand().expect("unit");
            let kept = raw.retain(|e| e[2] <= e[1] && e[1] < e[0]);
            (complete_in(&kept, &[Y, Z]), raw.len() - kept.len())
        })
    }

    pub fn f(&self) -> &MultiSeries {
        &self.f_with_discarded().0
    }

    /// `F_{κ,σ}(x)`: the `y^σ z^κ` slice.
    pub fn f_slice(&self, kappa: u32, sigma: u32) -> MultiSeries {
        self.f().slice(Y, sigma).slice(Z, kappa)
    }

    /// `W_{k,s,s}`, and `W_{k,0,0}` through the lead-promotion and lead-split identities.
    pub fn w_base(&self, k: u32, s: u32) -> Result<MultiSeries> {
        match (k, s) {
            (0, _) => Err(out_of_range("w", "needs k >= 1")),
            (1, 0) => Ok(&(&self.var(X) * &self.p) * &(&self.p - &self.one())),
            (_, 0) => self.m(0, k - 1),
            _ => Ok(&self.var(X) * &self.d(k, s - 1)?),
        }
    }

    /// `W_{k,s,l−1} − W_{k,s,l}` for `l >= s + 1`.
    fn w_step(&self, k: u32, s: u32, l: u32) -> Result<MultiSeries> {
        let b = self.m(s, k)?.coeff([k + l - 1, 0, 0, 0]);
        let e = self.d(1, s + k - 1)?.coeff([l + k - 1, 0, 0, 0]);
        let inner = &(&self.f_slice(s + k, l + k - 1) - &self.f_slice(s + k, l + k)) - &self.x_power(l + k, e);
        Ok(&self.x_power(k + l - 1, b) + &(&self.q(k - 1) * &inner))
    }

    /// `W_{k,s,l}` for `l = s..=n−k`, ascending from the base case.
    pub fn w_ascending(&self, k: u32, s: u32) -> Result<Vec<MultiSeries>> {
        let mut out = vec![self.w_base(k, s)?];
        for l in s + 1..=self.n.saturating_sub(k) {
            let next = out.last().expect("base") - &self.w_step(k, s, l)?;
            out.push(next);
        }
        Ok(out)
    }

    /// `W_{k,s,l}` for `l = s..=n−k`, descending from `W_{k,s,n−k+1} = 0`.
    pub fn w_descending(&self, k: u32, s: u32) -> Result<Vec<MultiSeries>> {
        let top = self.n.saturating_sub(k) + 1;
        let mut cur = MultiSeries::zero(self.trunc());
        let mut out = Vec::new();
        for l in (s + 1..=top).rev() {
            cur = &cur + &self.w_step(k, s, l)?;
            out.push(cur.clone());
        }
        out.reverse();
        Ok(out)
    }

    /// `Σ W_{k,s,l}(x) y^l z^s v^k` over `k >= 1`, `0 <= s <= l`, `k + l <= n`.
    pub fn w_grid(&self) -> Result<MultiSeries> {
        let mut terms = Vec::new();
        for k in 1..=self.n {
            for s in 0..=self.n - k {
                for (i, w) in self.w_ascending(k, s)?.into_iter().enumerate() {
                    let l = s + i as u32;
                    terms.extend(w.terms().map(|(e, c)| ([e[0], l, s, k], c.clone())));
                }
            }
        }
        Ok(MultiSeries::from_terms(terms, self.trunc()))
    }

    /// Closed form for `W` with its three denominators `(y − 1)(yz − vP(xy))(yz − vP(x))`
    /// multiplied out; the returned difference vanishes.
    pub fn w_closed_residual(&self) -> Result<MultiSeries> {
        let (x, y, z, v) = (self.var(X), self.var(Y), self.var(Z), self.var(V));
        let p = &self.p;
        let pxy = self.p_xy();
        let yz = &y * &z;
        let d1 = &yz - &(&v * &pxy);
        let d2 = &yz - &(&v * p);
        let r = self.r_bivariate();
        // R(xy, z)
        let r_xy_z = r.swap(Y, Z).monomial_shift(Y, [1, 0, 0, 0])?;
        // R(xy, v/y · T) for T = P(x), P(xy)
        let r_xy_vy = r.swap(Y, V).monomial_shift(Y, [1, 0, 0, -1])?;
        let a1 = r_xy_vy.substitute(V, &(&v * p))?;
        let a2 = r_xy_vy.substitute(V, &(&v * &pxy))?;
        // F(x, y, v/y · P(x))
        let f_vy = self.f().swap(Z, V).monomial_shift(Y, [0, 0, 0, -1])?.substitute(V, &(&v * p))?;

        let lhs = &(&(&(&y - &self.one()) * &d1) * &d2) * &self.w_grid()?;
        let bracket = &(&(&(&(&y * &pxy) * &d2) - &(p * &d1)) * &r_xy_z) + &(&(&(p * &d1) * &a1) - &(&(&(&y * &pxy) * &d2) * &a2));
        let first = &(&(&(&x * &y) * &v) * &pxy) * &bracket;
        let second = &(&(&(&y - &self.one()) * &d1) * &(&v * p)) * &(self.f() - &f_vy);
        Ok(&lhs - &(&first + &second))
    }
}

/// `(n−1)!·c`, or `n!·c` when `full`.
pub fn scaled(c: &BigRational, n: u32, full: bool) -> BigRational {
    let f = if full { factorial(n) } else { factorial(n.saturating_sub(1)) };
    c * integer(BigInt::from(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rational;

    fn coeff_int(s: &MultiSeries, n: u32, full: bool) -> BigInt {
        let c = scaled(&s.coeff([n, 0, 0, 0]), n, full);
        assert!(c.is_integer(), "{c}");
        c.to_integer()
    }

    #[test]
    fn tree_function() {
        let e = Engine::new(8);
        assert_eq!(e.p().coeff([5, 0, 0, 0]), rational(1296, 120));
        assert_eq!(e.p().coeff([0, 0, 0, 0]), integer(1));
        assert!(e.inverse_identity_residual().unwrap().is_zero());
    }

    #[test]
    fn square_of_p_is_a_convolution() {
        let e = Engine::new(8);
        let sq = e.p().pow(2);
        for n in 0..=8u32 {
            let conv: BigRational = (0..=n).map(|i| e.p().coeff([i, 0, 0, 0]) * e.p().coeff([n - i, 0, 0, 0])).sum();
            assert_eq!(sq.coeff([n, 0, 0, 0]), conv);
        }
    }

    #[test]
    fn spot_values() {
        let e = Engine::new(7);
        assert_eq!(coeff_int(&e.q(1), 3, true), 50.into());
        assert_eq!(coeff_int(&e.q(3), 2, true), 24.into());
        assert_eq!(e.q(0), *e.p());
        assert_eq!(coeff_int(&e.r(1), 4, true), 61.into());
        assert_eq!(coeff_int(&e.r(2), 5, true), 206.into());
        assert_eq!(e.r(0), *e.p());
        assert_eq!(coeff_int(&e.d(1, 0).unwrap(), 3, true), 10.into());
        assert_eq!(coeff_int(&e.d(2, 0).unwrap(), 4, true), 23.into());
        assert_eq!(coeff_int(&e.d(1, 1).unwrap(), 6, true), 5361.into());
        assert_eq!(coeff_int(&e.i(1), 3, false), 15.into());
        assert_eq!(coeff_int(&e.i(0), 1, false), 1.into());
        assert_eq!(coeff_int(&e.i(2), 4, false), 196.into());
        assert_eq!(coeff_int(&e.h(0, 0), 4, false), 16.into());
        assert_eq!(coeff_int(&e.h(1, 1), 3, false), 12.into());
        assert_eq!(coeff_int(&e.h(0, 3), 2, false), 4.into());
        assert_eq!(coeff_int(&e.m(0, 1).unwrap(), 4, false), 13.into());
        assert_eq!(coeff_int(&e.m(1, 1).unwrap(), 5, false), 23.into());
        assert_eq!(coeff_int(&e.m(0, 2).unwrap(), 5, false), 27.into());
    }

    #[test]
    fn f_slices_follow_the_table_convention() {
        let e = Engine::new(6);
        let at = |n: u32, s: u32, k: u32| scaled(&e.f().coeff([n, s, k, 0]), n, false);
        assert_eq!(at(3, 0, 0), integer(3));
        assert_eq!(at(4, 1, 1), integer(16));
        assert_eq!(at(2, 1, 0), integer(2));
        assert!(e.f_with_discarded().1 > 0);
    }

    #[test]
    fn w_spot_values_and_descent() {
        let e = Engine::new(6);
        let w = |k, s, l| e.w_ascending(k, s).unwrap()[(l - s) as usize].clone();
        assert_eq!(coeff_int(&w(1, 1, 1), 5, false), 107.into());
        assert_eq!(coeff_int(&w(1, 0, 0), 4, false), 34.into());
        assert_eq!(coeff_int(&w(2, 0, 0), 5, false), 165.into());
        for k in 1..=3 {
            for s in 0..=3 {
                let up = e.w_ascending(k, s).unwrap();
                let down = e.w_descending(k, s).unwrap();
                assert_eq!(up, down, "k={k} s={s}");
            }
        }
    }

    #[test]
    fn dual_routes_agree() {
        let e = Engine::new(6);
        for k in 1..=3 {
            for s in 0..=3 {
                assert_eq!(e.d(k, s).unwrap(), e.d_product(k, s).unwrap());
            }
        }
        for k in 0..=4 {
            assert_eq!(e.r(k), e.r_slice(k));
            assert_eq!(e.i(k), e.i_recurrence(k));
        }
        let ib = e.i_bivariate(4).unwrap();
        let hb = e.h_trivariate(3).unwrap();
        for k in 0..=3 {
            assert_eq!(ib.slice(Y, k), e.i(k).truncate(ib.slice(Y, k).truncation()));
            let hk = e.h_bivariate(k).unwrap();
            for l in 0..6 {
                assert_eq!(hk.slice(Y, l), e.h(l, k), "l={l} k={k}");
                assert_eq!(hb.slice(Y, l).slice(Z, k), e.h(l, k).truncate(hb.slice(Y, l).slice(Z, k).truncation()));
            }
        }
        assert!(e.d_closed_residual().unwrap().is_zero());
        assert!(e.m_closed_residual().unwrap().is_zero());
    }

    #[test]
    fn w_closed_form_holds() {
        let e = Engine::new(5);
        let r = e.w_closed_residual().unwrap();
        assert!(r.is_zero(), "{} nonzero terms", r.len());
    }
}
