//! Laurent polynomials in a single variable `z = e^{iθ}` with polynomial
//! coefficients in the remaining symbols.

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

use super::poly::MultiPoly;
use super::scalar::{int, ExactScalar};
use crate::error::{QrsError, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LaurentPoly {
    var: String,
    terms: BTreeMap<i64, MultiPoly>,
}

impl LaurentPoly {
    pub fn zero(var: &str) -> Self {
        Self { var: var.to_string(), terms: BTreeMap::new() }
    }

    pub fn one(var: &str) -> Self {
        Self::monomial(var, 0, MultiPoly::one())
    }

    /// `coef * var^exp`.
    pub fn monomial(var: &str, exp: i64, coef: MultiPoly) -> Self {
        let mut terms = BTreeMap::new();
        if !coef.is_zero() {
            terms.insert(exp, coef);
        }
        Self { var: var.to_string(), terms }
    }

    pub fn var(&self) -> &str {
        &self.var
    }

    pub fn terms(&self) -> impl Iterator<Item = (&i64, &MultiPoly)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, exp: i64) -> MultiPoly {
        self.terms.get(&exp).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.var, other.var, "Laurent variable mismatch");
        let mut terms = self.terms.clone();
        for (e, c) in &other.terms {
            let v = terms.remove(e).unwrap_or_default().add_ref(c);
            if !v.is_zero() {
                terms.insert(*e, v);
            }
        }
        Self { var: self.var.clone(), terms }
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.var, other.var, "Laurent variable mismatch");
        let mut terms: BTreeMap<i64, MultiPoly> = BTreeMap::new();
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e = ea + eb;
                let v = terms.remove(&e).unwrap_or_default().add_ref(&ca.mul_ref(cb));
                if !v.is_zero() {
                    terms.insert(e, v);
                }
            }
        }
        Self { var: self.var.clone(), terms }
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        let terms = self
            .terms
            .iter()
            .map(|(e, x)| (*e, x.mul_ref(c)))
            .filter(|(_, x)| !x.is_zero())
            .collect();
        Self { var: self.var.clone(), terms }
    }

    /// Invariant under `z -> 1/z`.
    pub fn is_symmetric(&self) -> bool {
        self.terms.iter().all(|(e, c)| self.coefficient(-e) == *c)
    }

    /// Folds a symmetric Laurent polynomial into a polynomial in
    /// `x = (z + 1/z)/2` using `z^k + z^{-k} = 2 T_k(x)`.
    pub fn to_cos_poly(&self, xvar: &str) -> Result<MultiPoly> {
        if !self.is_symmetric() {
            return Err(QrsError::NotSymmetric);
        }
        let max = self.terms.keys().map(|e| e.unsigned_abs()).max().unwrap_or(0) as usize;
        let cheb = chebyshev_t(max, xvar);
        let mut acc = self.coefficient(0);
        for k in 1..=max {
            let c = self.coefficient(k as i64);
            if !c.is_zero() {
                acc = acc.add_ref(&c.mul_ref(&cheb[k].scale(&int(2))));
            }
        }
        Ok(acc)
    }

    /// Evaluates at a complex point `z`, with the other symbols bound.
    pub fn eval_complex(&self, z: Complex64, bindings: &HashMap<String, Complex64>) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for (e, c) in &self.terms {
            acc += c.eval_complex(bindings)? * z.powi(*e as i32);
        }
        Ok(acc)
    }
}

/// `T_0 .. T_n` in the variable `xvar`.
pub fn chebyshev_t(n: usize, xvar: &str) -> Vec<MultiPoly> {
    let x = MultiPoly::var(xvar);
    let mut out = vec![MultiPoly::one()];
    if n >= 1 {
        out.push(x.clone());
    }
    let two_x = x.scale(&ExactScalar::from_integer(2.into()));
    for k in 2..=n {
        let next = two_x.mul_ref(&out[k - 1]).sub_ref(&out[k - 2]);
        out.push(next);
    }
    out
}

/// The symmetric polynomial `z^k + z^{-k}`, convenient in tests.
pub fn cos_harmonic(var: &str, k: i64) -> LaurentPoly {
    LaurentPoly::monomial(var, k, MultiPoly::one()).add(&LaurentPoly::monomial(var, -k, MultiPoly::one()))
}

impl Default for LaurentPoly {
    fn default() -> Self {
        Self::zero("z")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn z_times_inverse_is_one() {
        let z = LaurentPoly::monomial("z", 1, MultiPoly::one());
        let zi = LaurentPoly::monomial("z", -1, MultiPoly::one());
        assert_eq!(z.mul(&zi), LaurentPoly::one("z"));
    }

    #[test]
    fn chebyshev_folding() {
        // z^2 + z^-2 = 2(2x^2 - 1)
        let p = cos_harmonic("z", 2).to_cos_poly("x").unwrap();
        let x = MultiPoly::var("x");
        assert_eq!(p, (x.clone() * x).scale(&int(4)) - MultiPoly::constant(int(2)));
        let asym = LaurentPoly::monomial("z", 1, MultiPoly::one());
        assert_eq!(asym.to_cos_poly("x"), Err(QrsError::NotSymmetric));
    }
}
