//! Exact series for infinite and finite q-shifted factorials.
//!
//! `(z;q)_∞` and `1/(z;q)_∞` are never approximated: they are represented by
//! the two Euler expansions
//!
//! ```text
//!   1/(z;q)_∞ = Σ z^k / (q;q)_k
//!   (z;q)_∞   = Σ (-1)^k q^{k(k-1)/2} z^k / (q;q)_k
//! ```
//!
//! where `z = c·t^i s^j` is a monomial in the series variables.

use num_traits::One;

use super::series::{total, Deg, PolySeries};
use crate::qcore::pochhammer::qfact;
use crate::qcore::scalar::{binom2, pow_u};
use crate::qcore::{ExactScalar, MultiPoly};

fn euler_series(c: &MultiPoly, q: &ExactScalar, mono: Deg, vars: &[&str], order: u32, inverse: bool) -> PolySeries {
    assert!(total(mono) >= 1, "Euler expansion needs a positive-degree monomial");
    let mut s = PolySeries::one(vars, order);
    if c.is_zero() {
        return s;
    }
    let step = total(mono);
    let mut ck = MultiPoly::one();
    let mut k = 1u32;
    while k * step <= order {
        ck = ck.mul_ref(c);
        let mut w = qfact(q, k).recip();
        if !inverse {
            w *= pow_u(q, binom2(k as u64));
            if k % 2 == 1 {
                w = -w;
            }
        }
        s.set((mono.0 * k, mono.1 * k), ck.scale(&w));
        k += 1;
    }
    s
}

/// `(c z;q)_∞` as a series in `z = t^i s^j`.
pub fn inf_poch_series(c: &MultiPoly, q: &ExactScalar, mono: Deg, vars: &[&str], order: u32) -> PolySeries {
    euler_series(c, q, mono, vars, order, false)
}

/// `1/(c z;q)_∞` as a series in `z = t^i s^j`.
pub fn inf_poch_inv_series(c: &MultiPoly, q: &ExactScalar, mono: Deg, vars: &[&str], order: u32) -> PolySeries {
    euler_series(c, q, mono, vars, order, true)
}

/// `(ct;q)_∞` through `t^order`.
pub fn euler_expand(c: &MultiPoly, q: &ExactScalar, order: u32) -> PolySeries {
    inf_poch_series(c, q, (1, 0), &["t"], order)
}

/// `1/(ct;q)_∞` through `t^order`.
pub fn euler_inv_expand(c: &MultiPoly, q: &ExactScalar, order: u32) -> PolySeries {
    inf_poch_inv_series(c, q, (1, 0), &["t"], order)
}

/// Partial sum of `Σ (a;q)_k (ct)^k / (q;q)_k` through `t^order`.
pub fn cauchy_expand(a: &MultiPoly, c: &MultiPoly, q: &ExactScalar, order: u32) -> PolySeries {
    let mut s = PolySeries::one(&["t"], order);
    let mut ak = MultiPoly::one();
    let mut ck = MultiPoly::one();
    let mut qk = ExactScalar::one();
    for k in 1..=order {
        ak = ak.mul_ref(&(MultiPoly::one() - a.scale(&qk)));
        qk *= q;
        ck = ck.mul_ref(c);
        s.set((k, 0), ak.mul_ref(&ck).scale(&qfact(q, k).recip()));
    }
    s
}

/// `(p;q)_n` for a series-valued parameter `p`.
pub fn finite_poch_series(p: &PolySeries, q: &ExactScalar, n: u32) -> PolySeries {
    let vars: Vec<&str> = p.vars().iter().map(String::as_str).collect();
    let one = PolySeries::one(&vars, p.order());
    let mut acc = one.clone();
    let mut qk = ExactScalar::one();
    for _ in 0..n {
        acc = &acc * &(&one - &p.scale_scalar(&qk));
        qk *= q;
    }
    acc
}

/// Fixes the series variables, truncation order and base for a whole
/// computation so products can be written compactly.
#[derive(Clone, Debug)]
pub struct SeriesCtx {
    vars: Vec<String>,
    order: u32,
    q: ExactScalar,
}

impl SeriesCtx {
    pub fn new(vars: &[&str], order: u32, q: ExactScalar) -> Self {
        Self { vars: vars.iter().map(|v| v.to_string()).collect(), order, q }
    }

    pub fn q(&self) -> &ExactScalar {
        &self.q
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn vars(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    pub fn one(&self) -> PolySeries {
        PolySeries::one(&self.vars(), self.order)
    }

    pub fn zero(&self) -> PolySeries {
        PolySeries::zero(&self.vars(), self.order)
    }

    pub fn constant(&self, c: MultiPoly) -> PolySeries {
        PolySeries::constant(&self.vars(), self.order, c)
    }

    /// `c t^i s^j`.
    pub fn mono(&self, c: MultiPoly, deg: Deg) -> PolySeries {
        PolySeries::monomial(&self.vars(), self.order, deg, c)
    }

    /// `(c t^i s^j; q)_∞`.
    pub fn inf(&self, c: &MultiPoly, deg: Deg) -> PolySeries {
        inf_poch_series(c, &self.q, deg, &self.vars(), self.order)
    }

    /// `1/(c t^i s^j; q)_∞`.
    pub fn inf_inv(&self, c: &MultiPoly, deg: Deg) -> PolySeries {
        inf_poch_inv_series(c, &self.q, deg, &self.vars(), self.order)
    }

    /// Product of `(c t^i s^j; q)_∞` over `num` divided by the same over `den`.
    pub fn inf_ratio(&self, num: &[(MultiPoly, Deg)], den: &[(MultiPoly, Deg)]) -> PolySeries {
        let mut acc = self.one();
        for (c, d) in num {
            acc = &acc * &self.inf(c, *d);
        }
        for (c, d) in den {
            acc = &acc * &self.inf_inv(c, *d);
        }
        acc
    }

    /// `(p;q)_n` for a series parameter.
    pub fn poch(&self, p: &PolySeries, n: u32) -> PolySeries {
        finite_poch_series(p, &self.q, n)
    }

    /// `1/(p;q)_n`; `p` must have zero constant term or a scalar one.
    pub fn poch_inv(&self, p: &PolySeries, n: u32) -> crate::error::Result<PolySeries> {
        self.poch(p, n).try_inv()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{int, rat};

    #[test]
    fn euler_examples() {
        let q = rat(1, 2);
        assert_eq!(euler_expand(&MultiPoly::zero(), &q, 4), PolySeries::one(&["t"], 4));
        let e = euler_expand(&MultiPoly::one(), &q, 2);
        assert_eq!(e.coeff((1, 0)), MultiPoly::constant(int(-2)));
        assert_eq!(e.coeff((2, 0)), MultiPoly::constant(rat(4, 3)));
        let y = MultiPoly::var("y");
        let ey = euler_expand(&y, &q, 1);
        assert_eq!(ey.coeff((1, 0)), y.scale(&int(-2)));
        let ei = euler_inv_expand(&MultiPoly::one(), &q, 2);
        assert_eq!(ei.coeff((1, 0)), MultiPoly::constant(int(2)));
        assert_eq!(ei.coeff((2, 0)), MultiPoly::constant(rat(8, 3)));
    }

    #[test]
    fn euler_pair_is_reciprocal() {
        let q = rat(2, 7);
        let c = MultiPoly::var("x") + MultiPoly::constant(rat(1, 3));
        let p = &euler_expand(&c, &q, 7) * &euler_inv_expand(&c, &q, 7);
        assert_eq!(p, PolySeries::one(&["t"], 7));
    }

    #[test]
    fn cauchy_specialisations() {
        let q = rat(1, 3);
        let c = MultiPoly::var("x");
        assert_eq!(cauchy_expand(&MultiPoly::one(), &c, &q, 5), PolySeries::one(&["t"], 5));
        assert_eq!(cauchy_expand(&MultiPoly::zero(), &c, &q, 5), euler_inv_expand(&c, &q, 5));
    }

    #[test]
    fn series_inverse_of_product_matches_inverse_expansion() {
        let q = rat(1, 3);
        let f = euler_expand(&MultiPoly::one(), &q, 5);
        assert_eq!(f.try_inv().unwrap(), euler_inv_expand(&MultiPoly::one(), &q, 5));
    }
}
