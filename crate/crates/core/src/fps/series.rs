use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use super::coeff::Coeff;
use crate::error::{QrsError, Result};
use crate::qcore::{ExactScalar, MultiPoly, PolyJson};

/// Exponent pair `(i, j)` of `t^i s^j`; univariate series keep `j = 0`.
pub type Deg = (u32, u32);

pub fn total(d: Deg) -> u32 {
    d.0 + d.1
}

/// Truncated power series in one or two variables.
///
/// Coefficients are known through total degree `order`; nothing above it is
/// stored. Binary operations keep the smaller of the two orders.
#[derive(Clone, Debug, PartialEq)]
pub struct TruncSeries<R> {
    vars: Vec<String>,
    order: u32,
    coeffs: BTreeMap<Deg, R>,
}

/// Series with polynomial coefficients, the workhorse of exact mode.
pub type PolySeries = TruncSeries<MultiPoly>;

impl<R: Coeff> TruncSeries<R> {
    pub fn zero(vars: &[&str], order: u32) -> Self {
        assert!(
            (1..=2).contains(&vars.len()),
            "series take one or two variables, got {vars:?}"
        );
        Self {
            vars: vars.iter().map(|v| v.to_string()).collect(),
            order,
            coeffs: BTreeMap::new(),
        }
    }

    pub fn constant(vars: &[&str], order: u32, c: R) -> Self {
        Self::monomial(vars, order, (0, 0), c)
    }

    pub fn one(vars: &[&str], order: u32) -> Self {
        Self::constant(vars, order, R::one_elem())
    }

    /// `c * t^i s^j`, dropped if above the order.
    pub fn monomial(vars: &[&str], order: u32, deg: Deg, c: R) -> Self {
        let mut s = Self::zero(vars, order);
        s.set(deg, c);
        s
    }

    pub fn from_coeffs<I: IntoIterator<Item = (Deg, R)>>(vars: &[&str], order: u32, it: I) -> Self {
        let mut s = Self::zero(vars, order);
        for (d, c) in it {
            let v = s.coeff(d).plus(&c);
            s.set(d, v);
        }
        s
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn is_bivariate(&self) -> bool {
        self.vars.len() == 2
    }

    pub fn coeff(&self, d: Deg) -> R {
        self.coeffs.get(&d).cloned().unwrap_or_else(R::zero_elem)
    }

    pub fn coeffs(&self) -> impl Iterator<Item = (&Deg, &R)> {
        self.coeffs.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Stores `c` at `d`; ignores degrees above the order and zero values.
    pub fn set(&mut self, d: Deg, c: R) {
        assert!(self.is_bivariate() || d.1 == 0, "second exponent on a univariate series");
        if total(d) > self.order || c.is_zero_elem() {
            self.coeffs.remove(&d);
        } else {
            self.coeffs.insert(d, c);
        }
    }

    /// Lowest total degree carrying a nonzero coefficient.
    pub fn valuation(&self) -> Option<u32> {
        self.coeffs.keys().map(|&d| total(d)).min()
    }

    /// All degrees up to the order, graded by total degree.
    pub fn degrees(&self) -> Vec<Deg> {
        let mut out = Vec::new();
        for n in 0..=self.order {
            if self.is_bivariate() {
                for i in (0..=n).rev() {
                    out.push((i, n - i));
                }
            } else {
                out.push((n, 0));
            }
        }
        out
    }

    pub fn truncate(&self, order: u32) -> Self {
        let order = order.min(self.order);
        Self {
            vars: self.vars.clone(),
            order,
            coeffs: self
                .coeffs
                .iter()
                .filter(|(d, _)| total(**d) <= order)
                .map(|(d, c)| (*d, c.clone()))
                .collect(),
        }
    }

    /// Re-expresses the series over `vars`, which must contain every
    /// variable of `self`.
    pub fn embed(&self, vars: &[String]) -> Result<Self> {
        if vars == self.vars.as_slice() {
            return Ok(self.clone());
        }
        let mismatch = || QrsError::VariableMismatch { left: self.vars.clone(), right: vars.to_vec() };
        if vars.len() < self.vars.len() || vars.len() > 2 {
            return Err(mismatch());
        }
        let pos: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).ok_or_else(mismatch))
            .collect::<Result<_>>()?;
        let coeffs = self
            .coeffs
            .iter()
            .map(|(d, c)| {
                let mut e = [0u32; 2];
                e[pos[0]] += d.0;
                if pos.len() > 1 {
                    e[pos[1]] += d.1;
                }
                ((e[0], e[1]), c.clone())
            })
            .collect();
        Ok(Self { vars: vars.to_vec(), order: self.order, coeffs })
    }

    fn union_vars(&self, other: &Self) -> Result<Vec<String>> {
        if self.vars == other.vars {
            return Ok(self.vars.clone());
        }
        let mut u = self.vars.clone();
        for v in &other.vars {
            if !u.contains(v) {
                u.push(v.clone());
            }
        }
        if u.len() > 2 {
            return Err(QrsError::VariableMismatch { left: self.vars.clone(), right: other.vars.clone() });
        }
        Ok(u)
    }

    fn aligned(&self, other: &Self) -> Result<(Self, Self)> {
        let u = self.union_vars(other)?;
        Ok((self.embed(&u)?, other.embed(&u)?))
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        let (mut a, b) = self.aligned(other)?;
        a = a.truncate(b.order);
        for (d, c) in b.coeffs {
            let v = a.coeff(d).plus(&c);
            a.set(d, v);
        }
        Ok(a)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.negate())
    }

    pub fn negate(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            order: self.order,
            coeffs: self.coeffs.iter().map(|(d, c)| (*d, c.negate())).collect(),
        }
    }

    /// Multiplies every coefficient by a ring element.
    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self { vars: self.vars.clone(), order: self.order, coeffs: BTreeMap::new() };
        for (d, x) in &self.coeffs {
            out.set(*d, x.times(c));
        }
        out
    }

    pub fn scale_scalar(&self, r: &ExactScalar) -> Self {
        let mut out = Self { vars: self.vars.clone(), order: self.order, coeffs: BTreeMap::new() };
        for (d, x) in &self.coeffs {
            out.set(*d, x.scaled(r));
        }
        out
    }

    /// Product with the exact monomial `c * t^i s^j`; the order rises by
    /// `i + j` since no information is lost.
    pub fn shift(&self, deg: Deg, c: &R) -> Self {
        let order = self.order + total(deg);
        let mut out = Self { vars: self.vars.clone(), order, coeffs: BTreeMap::new() };
        for (d, x) in &self.coeffs {
            out.set((d.0 + deg.0, d.1 + deg.1), x.times(c));
        }
        out
    }

    /// Cauchy product truncated to the smaller order.
    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        let (a, b) = self.aligned(other)?;
        let order = a.order.min(b.order);
        let mut acc: BTreeMap<Deg, R> = BTreeMap::new();
        for (da, ca) in &a.coeffs {
            let ta = total(*da);
            if ta > order {
                continue;
            }
            for (db, cb) in &b.coeffs {
                if ta + total(*db) > order {
                    continue;
                }
                let d = (da.0 + db.0, da.1 + db.1);
                let p = ca.times(cb);
                match acc.get_mut(&d) {
                    Some(v) => *v = v.plus(&p),
                    None => {
                        acc.insert(d, p);
                    }
                }
            }
        }
        acc.retain(|_, c| !c.is_zero_elem());
        Ok(Self { vars: a.vars, order, coeffs: acc })
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one(&self.var_refs(), self.order);
        for _ in 0..n {
            acc = &acc * self;
        }
        acc
    }

    fn var_refs(&self) -> Vec<&str> {
        self.vars.iter().map(String::as_str).collect()
    }

    /// Multiplicative inverse through the same order.
    pub fn try_inv(&self) -> Result<Self> {
        let inv0 = self.coeff((0, 0)).try_inv().ok_or(QrsError::NotInvertible)?;
        let mut g = Self::zero(&self.var_refs(), self.order);
        g.set((0, 0), inv0.clone());
        for d in self.degrees().into_iter().skip(1) {
            let mut acc = R::zero_elem();
            for (e, ge) in &g.coeffs {
                if e.0 <= d.0 && e.1 <= d.1 && *e != d {
                    let f = self.coeff((d.0 - e.0, d.1 - e.1));
                    if !f.is_zero_elem() {
                        acc = acc.plus(&f.times(ge));
                    }
                }
            }
            g.set(d, acc.times(&inv0).negate());
        }
        Ok(g)
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> TruncSeries<S> {
        let mut out = TruncSeries::<S> { vars: self.vars.clone(), order: self.order, coeffs: BTreeMap::new() };
        for (d, c) in &self.coeffs {
            out.set(*d, f(c));
        }
        out
    }

    /// First degree (in key order) at which the two series differ, up to the
    /// smaller order.
    pub fn first_difference(&self, other: &Self) -> Result<Option<(Deg, R)>> {
        let (a, b) = self.aligned(other)?;
        let order = a.order.min(b.order);
        let mut keys: Vec<Deg> = a.coeffs.keys().chain(b.coeffs.keys()).copied().collect();
        keys.sort();
        keys.dedup();
        for d in keys {
            if total(d) > order {
                continue;
            }
            let diff = a.coeff(d).minus(&b.coeff(d));
            if !diff.is_zero_elem() {
                return Ok(Some((d, diff)));
            }
        }
        Ok(None)
    }
}

/// Product of two series; fails when their variables cannot be merged.
pub fn series_mul<R: Coeff>(f: &TruncSeries<R>, g: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    f.try_mul(g)
}

/// Inverse of a series whose constant term is a unit.
pub fn series_inv<R: Coeff>(f: &TruncSeries<R>) -> Result<TruncSeries<R>> {
    f.try_inv()
}

impl<R: Coeff> Mul for &TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn mul(self, rhs: Self) -> TruncSeries<R> {
        self.try_mul(rhs).expect("series variables must be compatible")
    }
}

impl<R: Coeff> Add for &TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn add(self, rhs: Self) -> TruncSeries<R> {
        self.try_add(rhs).expect("series variables must be compatible")
    }
}

impl<R: Coeff> Sub for &TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn sub(self, rhs: Self) -> TruncSeries<R> {
        self.try_sub(rhs).expect("series variables must be compatible")
    }
}

impl<R: Coeff> Neg for &TruncSeries<R> {
    type Output = TruncSeries<R>;
    fn neg(self) -> TruncSeries<R> {
        self.negate()
    }
}

/// Wire form: `{"vars": [...], "order": N, "coeffs": [{"deg": [...], "poly": ...}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesJson {
    pub vars: Vec<String>,
    pub order: u32,
    pub coeffs: Vec<SeriesTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeriesTermJson {
    pub deg: Vec<u32>,
    pub poly: PolyJson,
}

impl PolySeries {
    pub fn to_json(&self) -> SeriesJson {
        SeriesJson {
            vars: self.vars.clone(),
            order: self.order,
            coeffs: self
                .coeffs
                .iter()
                .map(|(d, p)| SeriesTermJson {
                    deg: if self.is_bivariate() { vec![d.0, d.1] } else { vec![d.0] },
                    poly: p.to_json(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &SeriesJson) -> Result<Self> {
        if !(1..=2).contains(&j.vars.len()) {
            return Err(QrsError::Parse(format!("series needs one or two variables, got {:?}", j.vars)));
        }
        let vars: Vec<&str> = j.vars.iter().map(String::as_str).collect();
        let mut s = Self::zero(&vars, j.order);
        for t in &j.coeffs {
            if t.deg.len() != vars.len() {
                return Err(QrsError::Parse(format!("degree {:?} does not match {:?}", t.deg, j.vars)));
            }
            let d = (t.deg[0], t.deg.get(1).copied().unwrap_or(0));
            s.set(d, MultiPoly::from_json(&t.poly)?);
        }
        Ok(s)
    }
}
