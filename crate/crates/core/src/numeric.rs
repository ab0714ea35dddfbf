//! Double-precision evaluation of q-shifted factorials, basic hypergeometric
//! sums and the polynomial families, for the identities that only make
//! sense at complex points.

use num_complex::Complex64;

use crate::error::{QrsError, Result};
use crate::quadrature::poch_inf;

pub type C64 = Complex64;

/// Largest allowed magnitude of a series argument.
pub const GUARD: f64 = 0.9;

/// `(a;q)_n` with a real base.
pub fn cpoch(a: C64, q: f64, n: u32) -> C64 {
    let mut acc = C64::new(1.0, 0.0);
    let mut qk = 1.0;
    for _ in 0..n {
        acc *= C64::new(1.0, 0.0) - a * qk;
        qk *= q;
    }
    acc
}

/// `(q;q)_n`.
pub fn fqfact(q: f64, n: u32) -> f64 {
    (1..=n).map(|k| 1.0 - q.powi(k as i32)).product()
}

/// Gaussian coefficient in double precision.
pub fn fqbinom(n: u32, k: u32, q: f64) -> f64 {
    if k > n {
        return 0.0;
    }
    let k = k.min(n - k);
    (0..k).map(|i| (1.0 - q.powi((n - i) as i32)) / (1.0 - q.powi((i + 1) as i32))).product()
}

/// Product of `(c;base)_∞` over the list.
pub fn inf_prod(factors: &[(C64, f64)]) -> Result<C64> {
    factors.iter().try_fold(C64::new(1.0, 0.0), |acc, (c, b)| Ok(acc * poch_inf(*c, *b)?))
}

/// Rejects arguments whose magnitude exceeds the guard.
pub fn guard(name: &str, z: C64) -> Result<()> {
    if z.norm() > GUARD {
        return Err(QrsError::GuardViolated(format!("|{name}| = {:.4} exceeds {GUARD}", z.norm())));
    }
    Ok(())
}

/// Sums `term(0) + term(1) + ...` until both the current term and the
/// geometric tail bound with ratio `ratio` stay below `tol/10` for three
/// consecutive indices.
pub fn sum_until_converged(mut term: impl FnMut(u32) -> C64, ratio: f64, tol: f64) -> Result<C64> {
    if !(0.0..1.0).contains(&ratio) {
        return Err(QrsError::GuardViolated(format!("tail ratio {ratio} is not below 1")));
    }
    const MAX_TERMS: u32 = 20_000;
    let target = tol / 10.0;
    let mut acc = C64::new(0.0, 0.0);
    let mut quiet = 0;
    for n in 0..MAX_TERMS {
        let t = term(n);
        if !t.is_finite() {
            return Err(QrsError::GuardViolated(format!("term {n} is not finite")));
        }
        acc += t;
        let m = t.norm();
        if m <= target && m * ratio / (1.0 - ratio) <= target {
            quiet += 1;
            if quiet >= 3 {
                return Ok(acc);
            }
        } else {
            quiet = 0;
        }
    }
    Err(QrsError::GuardViolated(format!("series did not converge within {MAX_TERMS} terms")))
}

/// `r+1 φ r (upper; lower; q, z)` in double precision.
pub fn phi_numeric(upper: &[C64], lower: &[C64], q: f64, z: C64, tol: f64) -> Result<C64> {
    guard("argument", z)?;
    let one = C64::new(1.0, 0.0);
    let mut term = one;
    let mut last = 0u32;
    sum_until_converged(
        |n| {
            while last < n {
                let k = last;
                let qk = q.powi(k as i32);
                let mut r = z / (1.0 - q * qk);
                for a in upper {
                    r *= one - a * qk;
                }
                for b in lower {
                    r /= one - b * qk;
                }
                term *= r;
                last += 1;
            }
            term
        },
        z.norm().max(q.abs()).min(GUARD),
        tol,
    )
}

/// `H_n(cos θ; a|q) = Σ_k [n,k] (a e^{iθ};q)_k e^{i(n-2k)θ}`.
pub fn big_hermite_f(n: u32, theta: f64, a: C64, q: f64) -> C64 {
    let e = C64::from_polar(1.0, theta);
    (0..=n)
        .map(|k| cpoch(a * e, q, k) * C64::from_polar(1.0, (n as f64 - 2.0 * k as f64) * theta) * fqbinom(n, k, q))
        .sum()
}

/// `H_n(cos θ|q)`.
pub fn hermite_f(n: u32, theta: f64, q: f64) -> C64 {
    big_hermite_f(n, theta, C64::new(0.0, 0.0), q)
}

/// `P_n(x,y)` at complex points.
pub fn cauchy_f(n: u32, x: C64, y: C64, q: f64) -> C64 {
    (0..n).map(|k| x - y * q.powi(k as i32)).product()
}

/// `h_n(x,y|q)` at complex points.
pub fn brs_f(n: u32, x: C64, y: C64, q: f64) -> C64 {
    (0..=n).map(|k| cauchy_f(k, x, y, q) * fqbinom(n, k, q)).sum()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn euler_identity_numerically() {
        let q = 0.4;
        let z = c(0.3);
        let lhs = sum_until_converged(|n| z.powi(n as i32) / fqfact(q, n), 0.3, 1e-14).unwrap();
        let rhs = 1.0 / poch_inf(z, q).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn q_binomial_theorem_numerically() {
        let q = 0.35;
        let (a, z) = (C64::new(0.2, 0.4), C64::new(-0.3, 0.2));
        let lhs = phi_numeric(&[a], &[], q, z, 1e-14).unwrap();
        let rhs = poch_inf(a * z, q).unwrap() / poch_inf(z, q).unwrap();
        assert!((lhs - rhs).norm() < 1e-13);
    }

    #[test]
    fn guard_rejects_large_arguments() {
        assert!(phi_numeric(&[c(0.1)], &[], 0.5, c(0.95), 1e-10).is_err());
        assert!(sum_until_converged(|_| c(1.0), 1.0, 1e-10).is_err());
    }

    #[test]
    fn hermite_matches_bivariate_form() {
        let q = 0.45;
        let a = C64::new(0.3, -0.1);
        for th in [0.2, 1.3, 2.9] {
            let e = C64::from_polar(1.0, th);
            for n in 0..10 {
                let lhs = big_hermite_f(n, th, a, q);
                let rhs = e.powi(n as i32) * brs_f(n, e.powi(-2), a / e, q);
                assert!((lhs - rhs).norm() < 1e-10);
                assert!(hermite_f(n, th, q).im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn gaussian_binomial_values() {
        assert!((fqbinom(3, 1, 0.5) - 1.75).abs() < 1e-15);
        assert_eq!(fqbinom(3, 4, 0.5), 0.0);
        assert!((fqfact(0.5, 2) - 0.375).abs() < 1e-15);
    }
}
