//! q-shifted factorials and Gaussian binomial coefficients.

use num_traits::{One, Zero};

use super::poly::MultiPoly;
use super::scalar::{pow_i, pow_u, ExactScalar};
use crate::error::{QrsError, Result};

/// `(a;q)_n` for a scalar `a` and any integer `n`.
///
/// Negative orders use `(a;q)_{-n} = 1 / (a q^{-n}; q)_n`.
pub fn qpoch_scalar(a: &ExactScalar, q: &ExactScalar, n: i64) -> Result<ExactScalar> {
    if n >= 0 {
        let mut acc = ExactScalar::one();
        let mut qk = ExactScalar::one();
        for _ in 0..n {
            acc *= ExactScalar::one() - a * &qk;
            qk *= q;
        }
        return Ok(acc);
    }
    let m = -n;
    if q.is_zero() {
        return Err(QrsError::DivisionByZero("negative-order q-shifted factorial with q = 0".into()));
    }
    let shifted = a * pow_i(q, -m)?;
    let den = qpoch_scalar(&shifted, q, m)?;
    if den.is_zero() {
        return Err(QrsError::DivisionByZero(format!("(a;q)_{n} has a vanishing factor")));
    }
    Ok(den.recip())
}

/// `(a;q)_n` with a polynomial `a`. Negative `n` is only defined when `a`
/// is a scalar.
pub fn qpoch(a: &MultiPoly, q: &ExactScalar, n: i64) -> Result<MultiPoly> {
    if n < 0 {
        let c = a
            .as_constant()
            .ok_or_else(|| QrsError::NotScalar(format!("({a};q)_{n} with symbolic argument")))?;
        return qpoch_scalar(&c, q, n).map(MultiPoly::constant);
    }
    let mut acc = MultiPoly::one();
    let mut qk = ExactScalar::one();
    for _ in 0..n {
        acc = acc.mul_ref(&(MultiPoly::one() - a.scale(&qk)));
        qk *= q;
    }
    Ok(acc)
}

/// `(q;q)_n`.
pub fn qfact(q: &ExactScalar, n: u32) -> ExactScalar {
    let mut acc = ExactScalar::one();
    let mut qk = q.clone();
    for _ in 0..n {
        acc *= ExactScalar::one() - &qk;
        qk *= q;
    }
    acc
}

/// Gaussian coefficient `[n, k]_q`; zero when `k` is outside `0..=n`.
pub fn qbinom(n: i64, k: i64, q: &ExactScalar) -> ExactScalar {
    if n < 0 || k < 0 || k > n {
        return ExactScalar::zero();
    }
    let k = k.min(n - k) as u32;
    let n = n as u32;
    // prod_{i<k} (1 - q^{n-i}) / (1 - q^{i+1}); stays exact even when q is a
    // root of unity as long as the ratio is formed at the end.
    let mut num = ExactScalar::one();
    let mut den = ExactScalar::one();
    for i in 0..k {
        num *= ExactScalar::one() - pow_u(q, (n - i) as u64);
        den *= ExactScalar::one() - pow_u(q, (i + 1) as u64);
    }
    if den.is_zero() {
        // q is a root of unity among +-1; fall back to the Pascal recurrence.
        return qbinom_pascal(n as i64, k as i64, q);
    }
    num / den
}

fn qbinom_pascal(n: i64, k: i64, q: &ExactScalar) -> ExactScalar {
    let mut row = vec![ExactScalar::one()];
    for m in 1..=n {
        let mut next = vec![ExactScalar::one(); (m + 1) as usize];
        for j in 1..m {
            let j = j as usize;
            next[j] = &row[j - 1] + pow_u(q, j as u64) * &row[j];
        }
        row = next;
    }
    row[k as usize].clone()
}

/// `[n, k]` as a polynomial in the symbol `q`, obtained by exact division
/// of `(q;q)_n` by `(q;q)_k (q;q)_{n-k}`.
pub fn qbinom_symbolic(n: i64, k: i64) -> MultiPoly {
    if n < 0 || k < 0 || k > n {
        return MultiPoly::zero();
    }
    let qfact_sym = |m: i64| -> MultiPoly {
        let mut acc = MultiPoly::one();
        for i in 1..=m {
            acc = acc.mul_ref(&(MultiPoly::one() - MultiPoly::monomial("q", i as u32, ExactScalar::one())));
        }
        acc
    };
    let num = qfact_sym(n);
    let den = qfact_sym(k).mul_ref(&qfact_sym(n - k));
    num.div_exact(&den, "q").expect("Gaussian coefficient always divides exactly")
}
