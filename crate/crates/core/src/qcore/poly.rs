//! Sparse multivariate polynomials over the rationals in named indeterminates.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use super::scalar::{display_rational, format_rational, parse_rational, pow_u, to_f64, ExactScalar};
use crate::error::{QrsError, Result};

/// Polynomial with exact rational coefficients.
///
/// Variables are kept sorted by name; every exponent vector is dense over
/// that list. Combining polynomials over different variable sets promotes
/// both to the union. Zero coefficients are never stored.
#[derive(Clone, Debug, Default)]
pub struct MultiPoly {
    vars: Vec<String>,
    terms: BTreeMap<Vec<u32>, ExactScalar>,
}

fn union_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut out: Vec<String> = a.iter().chain(b.iter()).cloned().collect();
    out.sort();
    out.dedup();
    out
}

impl MultiPoly {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::constant(ExactScalar::one())
    }

    pub fn constant(c: ExactScalar) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Vec::new(), c);
        }
        Self { vars: Vec::new(), terms }
    }

    pub fn var(name: &str) -> Self {
        Self::monomial(name, 1, ExactScalar::one())
    }

    /// `coef * name^exp`.
    pub fn monomial(name: &str, exp: u32, coef: ExactScalar) -> Self {
        if coef.is_zero() {
            return Self::zero();
        }
        let mut terms = BTreeMap::new();
        terms.insert(vec![exp], coef);
        Self { vars: vec![name.to_string()], terms }
    }

    /// Builds a polynomial from `(exponents, coefficient)` pairs over `vars`
    /// given in any order.
    pub fn from_terms<I>(vars: &[&str], terms: I) -> Self
    where
        I: IntoIterator<Item = (Vec<u32>, ExactScalar)>,
    {
        let mut order: Vec<usize> = (0..vars.len()).collect();
        order.sort_by(|&i, &j| vars[i].cmp(vars[j]));
        let sorted: Vec<String> = order.iter().map(|&i| vars[i].to_string()).collect();
        let mut out = BTreeMap::new();
        for (exp, c) in terms {
            assert_eq!(exp.len(), vars.len(), "exponent vector length mismatch");
            let e: Vec<u32> = order.iter().map(|&i| exp[i]).collect();
            accumulate(&mut out, e, c);
        }
        out.retain(|_, c| !c.is_zero());
        Self { vars: sorted, terms: out }
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &ExactScalar)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The value if the polynomial is a constant.
    pub fn as_constant(&self) -> Option<ExactScalar> {
        match self.terms.len() {
            0 => Some(ExactScalar::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                e.iter().all(|&x| x == 0).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn constant_term(&self) -> ExactScalar {
        let z = vec![0; self.vars.len()];
        self.terms.get(&z).cloned().unwrap_or_else(ExactScalar::zero)
    }

    fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Re-expresses `self` over a superset of its variables.
    pub fn with_vars(&self, vars: &[String]) -> Self {
        if vars == self.vars.as_slice() {
            return self.clone();
        }
        let map: Vec<usize> = self
            .vars
            .iter()
            .map(|v| vars.iter().position(|w| w == v).expect("target variable set must be a superset"))
            .collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| {
                let mut ne = vec![0; vars.len()];
                for (i, &x) in e.iter().enumerate() {
                    ne[map[i]] = x;
                }
                (ne, c.clone())
            })
            .collect();
        Self { vars: vars.to_vec(), terms }
    }

    /// Drops variables that do not occur.
    pub fn trim(&self) -> Self {
        let used: Vec<usize> = (0..self.vars.len())
            .filter(|&i| self.terms.keys().any(|e| e[i] > 0))
            .collect();
        if used.len() == self.vars.len() {
            return self.clone();
        }
        let vars = used.iter().map(|&i| self.vars[i].clone()).collect();
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (used.iter().map(|&i| e[i]).collect(), c.clone()))
            .collect();
        Self { vars, terms }
    }

    fn aligned(&self, other: &Self) -> (Self, Self) {
        if self.vars == other.vars {
            return (self.clone(), other.clone());
        }
        let u = union_vars(&self.vars, &other.vars);
        (self.with_vars(&u), other.with_vars(&u))
    }

    pub fn add_ref(&self, other: &Self) -> Self {
        if other.is_zero() {
            return self.clone();
        }
        if self.is_zero() {
            return other.clone();
        }
        let (mut a, b) = self.aligned(other);
        for (e, c) in b.terms {
            accumulate(&mut a.terms, e, c);
        }
        a.terms.retain(|_, c| !c.is_zero());
        a
    }

    pub fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }

    pub fn neg_ref(&self) -> Self {
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }

    pub fn mul_ref(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        if let Some(c) = other.as_constant() {
            return self.scale(&c);
        }
        if let Some(c) = self.as_constant() {
            return other.scale(&c);
        }
        let (a, b) = self.aligned(other);
        let mut out = BTreeMap::new();
        for (ea, ca) in &a.terms {
            for (eb, cb) in &b.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                accumulate(&mut out, e, ca * cb);
            }
        }
        out.retain(|_, c| !c.is_zero());
        Self { vars: a.vars, terms: out }
    }

    pub fn scale(&self, c: &ExactScalar) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        Self {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect(),
        }
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut acc = Self::one();
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            n >>= 1;
            if n > 0 {
                base = base.mul_ref(&base);
            }
        }
        acc
    }

    /// Degree in one variable (0 for the zero polynomial or an absent variable).
    pub fn degree_in(&self, var: &str) -> u32 {
        match self.var_index(var) {
            Some(i) => self.terms.keys().map(|e| e[i]).max().unwrap_or(0),
            None => 0,
        }
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|e| e.iter().sum()).max().unwrap_or(0)
    }

    /// Coefficient of `var^k`, as a polynomial in the remaining variables.
    pub fn coefficient(&self, var: &str, k: u32) -> Self {
        let Some(i) = self.var_index(var) else {
            return if k == 0 { self.clone() } else { Self::zero() };
        };
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e[i] == k)
            .map(|(e, c)| {
                let mut e = e.clone();
                e[i] = 0;
                (e, c.clone())
            })
            .collect();
        Self { vars: self.vars.clone(), terms }.trim()
    }

    /// Part of total degree `degree` in the variables `among`.
    pub fn homogeneous_part(&self, among: &[&str], degree: u32) -> Self {
        let idx: Vec<usize> = among.iter().filter_map(|v| self.var_index(v)).collect();
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| idx.iter().map(|&i| e[i]).sum::<u32>() == degree)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Self { vars: self.vars.clone(), terms }
    }

    /// `p(..., c*var, ...)`.
    pub fn scale_var(&self, var: &str, c: &ExactScalar) -> Self {
        let Some(i) = self.var_index(var) else {
            return self.clone();
        };
        let mut out = BTreeMap::new();
        for (e, x) in &self.terms {
            let v = x * pow_u(c, e[i] as u64);
            if !v.is_zero() {
                accumulate(&mut out, e.clone(), v);
            }
        }
        Self { vars: self.vars.clone(), terms: out }
    }

    /// Substitutes a polynomial for a variable.
    pub fn subs(&self, var: &str, value: &MultiPoly) -> Self {
        if self.var_index(var).is_none() {
            return self.clone();
        }
        let deg = self.degree_in(var);
        let mut acc = Self::zero();
        let mut power = Self::one();
        for k in 0..=deg {
            let c = self.coefficient(var, k);
            if !c.is_zero() {
                acc = acc.add_ref(&c.mul_ref(&power));
            }
            if k < deg {
                power = power.mul_ref(value);
            }
        }
        acc
    }

    pub fn subs_scalar(&self, var: &str, value: &ExactScalar) -> Self {
        self.subs(var, &Self::constant(value.clone()))
    }

    pub fn rename(&self, from: &str, to: &str) -> Self {
        if self.var_index(from).is_none() {
            return self.clone();
        }
        self.subs(from, &Self::var(to))
    }

    /// Exact evaluation. Every variable that occurs must be bound.
    pub fn eval(&self, bindings: &BTreeMap<String, ExactScalar>) -> Result<ExactScalar> {
        let vals = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| match bindings.get(v) {
                Some(x) => Ok(Some(x.clone())),
                None if self.terms.keys().all(|e| e[i] == 0) => Ok(None),
                None => Err(QrsError::UnboundVariable(v.clone())),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut acc = ExactScalar::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    t *= pow_u(vals[i].as_ref().unwrap(), x as u64);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Double-precision complex evaluation.
    pub fn eval_complex(&self, bindings: &HashMap<String, Complex64>) -> Result<Complex64> {
        let vals = self
            .vars
            .iter()
            .enumerate()
            .map(|(i, v)| match bindings.get(v) {
                Some(x) => Ok(*x),
                None if self.terms.keys().all(|e| e[i] == 0) => Ok(Complex64::new(0.0, 0.0)),
                None => Err(QrsError::UnboundVariable(v.clone())),
            })
            .collect::<Result<Vec<_>>>()?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            let mut t = Complex64::new(to_f64(c), 0.0);
            for (i, &x) in e.iter().enumerate() {
                if x > 0 {
                    t *= vals[i].powu(x);
                }
            }
            acc += t;
        }
        Ok(acc)
    }

    /// Exact quotient by `divisor`, viewed as polynomials in `var`. The
    /// leading coefficient of `divisor` in `var` must be a nonzero scalar.
    /// Returns `None` when the division leaves a remainder.
    pub fn div_exact(&self, divisor: &MultiPoly, var: &str) -> Option<MultiPoly> {
        let d = divisor.degree_in(var);
        let lc = divisor.coefficient(var, d).as_constant()?;
        if lc.is_zero() {
            return None;
        }
        let inv = lc.recip();
        let mut rem = self.clone();
        let mut quot = Self::zero();
        while !rem.is_zero() {
            let r = rem.degree_in(var);
            if r < d {
                return None;
            }
            let lead = rem.coefficient(var, r);
            let term = lead.mul_ref(&Self::monomial(var, r - d, inv.clone()));
            rem = rem.sub_ref(&term.mul_ref(divisor));
            quot = quot.add_ref(&term);
            if rem.degree_in(var) == r && !rem.coefficient(var, r).is_zero() {
                return None;
            }
        }
        Some(quot)
    }

    pub fn to_json(&self) -> PolyJson {
        PolyJson {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .map(|(e, c)| TermJson { exp: e.clone(), coef: format_rational(c) })
                .collect(),
        }
    }

    pub fn from_json(j: &PolyJson) -> Result<Self> {
        let vars: Vec<&str> = j.vars.iter().map(String::as_str).collect();
        let mut terms = Vec::with_capacity(j.terms.len());
        for t in &j.terms {
            if t.exp.len() != vars.len() {
                return Err(QrsError::Parse(format!(
                    "term exponent {:?} does not match variables {:?}",
                    t.exp, j.vars
                )));
            }
            terms.push((t.exp.clone(), parse_rational(&t.coef)?));
        }
        Ok(Self::from_terms(&vars, terms))
    }
}

fn accumulate(map: &mut BTreeMap<Vec<u32>, ExactScalar>, e: Vec<u32>, c: ExactScalar) {
    match map.get_mut(&e) {
        Some(x) => *x += c,
        None => {
            map.insert(e, c);
        }
    }
}

/// Wire form: `{"vars": [...], "terms": [{"exp": [...], "coef": "p/q"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub vars: Vec<String>,
    pub terms: Vec<TermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermJson {
    pub exp: Vec<u32>,
    pub coef: String,
}

impl PartialEq for MultiPoly {
    fn eq(&self, other: &Self) -> bool {
        if self.vars == other.vars {
            return self.terms == other.terms;
        }
        let (a, b) = self.aligned(other);
        a.terms == b.terms
    }
}

impl Eq for MultiPoly {}

impl From<ExactScalar> for MultiPoly {
    fn from(c: ExactScalar) -> Self {
        Self::constant(c)
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (e, c) in self.terms.iter().rev() {
            let neg = c.is_negative();
            let a = c.abs();
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            first = false;
            let mono: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &x)| x > 0)
                .map(|(i, &x)| {
                    if x == 1 {
                        self.vars[i].clone()
                    } else {
                        format!("{}^{}", self.vars[i], x)
                    }
                })
                .collect();
            if mono.is_empty() {
                write!(f, "{}", display_rational(&a))?;
            } else if a.is_one() {
                write!(f, "{}", mono.join("*"))?;
            } else {
                write!(f, "{}*{}", display_rational(&a), mono.join("*"))?;
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($tr:ident, $m:ident, $imp:ident) => {
        impl $tr<&MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                self.$imp(rhs)
            }
        }
        impl $tr<MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                self.$imp(&rhs)
            }
        }
        impl $tr<&MultiPoly> for MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: &MultiPoly) -> MultiPoly {
                self.$imp(rhs)
            }
        }
        impl $tr<MultiPoly> for &MultiPoly {
            type Output = MultiPoly;
            fn $m(self, rhs: MultiPoly) -> MultiPoly {
                self.$imp(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);

impl Neg for MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

impl Neg for &MultiPoly {
    type Output = MultiPoly;
    fn neg(self) -> MultiPoly {
        self.neg_ref()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::scalar::{int, rat};

    fn x() -> MultiPoly {
        MultiPoly::var("x")
    }
    fn y() -> MultiPoly {
        MultiPoly::var("y")
    }

    #[test]
    fn eval_examples() {
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), int(1));
        b.insert("y".to_string(), int(1));
        assert_eq!((x() - y()).eval(&b).unwrap(), int(0));

        let q = rat(1, 2);
        let p = (x() - y()) * (x() - y().scale(&q));
        let mut b = BTreeMap::new();
        b.insert("x".to_string(), int(2));
        b.insert("y".to_string(), int(1));
        assert_eq!(p.eval(&b).unwrap(), rat(3, 2));

        assert_eq!(MultiPoly::one().eval(&BTreeMap::new()).unwrap(), int(1));
    }

    #[test]
    fn unbound_variable_is_an_error() {
        let err = (x() + y()).eval(&BTreeMap::new()).unwrap_err();
        assert!(matches!(err, QrsError::UnboundVariable(_)));
    }

    #[test]
    fn union_promotion_and_equality() {
        let a = x() + MultiPoly::one();
        let b = y();
        let s = &a + &b;
        assert_eq!(s.vars(), &["x".to_string(), "y".to_string()]);
        assert_eq!(&s - &b, a);
        assert!((&s - &s).is_zero());
    }

    #[test]
    fn exact_division() {
        let p = (x() - y()) * (x() + y().scale(&rat(1, 3)));
        let q = p.div_exact(&(x() - y()), "x").unwrap();
        assert_eq!(q, x() + y().scale(&rat(1, 3)));
        assert!((x() * x() + MultiPoly::one()).div_exact(&(x() - y()), "x").is_none());
    }

    #[test]
    fn substitution_and_coefficients() {
        let p = x() * x() * y() + x().scale(&int(3));
        assert_eq!(p.coefficient("x", 2), y());
        assert_eq!(p.subs("x", &y()), y() * y() * y() + y().scale(&int(3)));
        assert_eq!(p.scale_var("x", &int(2)), x() * x() * y().scale(&int(4)) + x().scale(&int(6)));
    }

    #[test]
    fn json_round_trip() {
        let p = x() * x() - (x() * y()).scale(&rat(3, 2)) + (y() * y()).scale(&rat(1, 2));
        let j = p.to_json();
        let s = serde_json::to_string(&j).unwrap();
        assert!(s.contains("\"coef\":\"-3/2\""));
        let back = MultiPoly::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn display_is_readable() {
        let p = x() * x() - (x() * y()).scale(&rat(3, 2)) + MultiPoly::one();
        assert_eq!(p.to_string(), "x^2 - 3/2*x*y + 1");
    }
}
