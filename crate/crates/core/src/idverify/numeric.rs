//! Numeric-complex and quadrature cases.

use num_complex::Complex64;

use super::{Outcome, Params};
use crate::error::Result;
use crate::numeric::{big_hermite_f, brs_f, fqfact, guard, hermite_f, inf_prod, phi_numeric, sum_until_converged};
use crate::quadrature::{askey_wilson_check, closed_form_check, ortho_matrix_deviation};

type C64 = Complex64;

/// Number of random points per numeric case.
pub const DRAWS: usize = 5;
const DEFAULT_TOL: f64 = 1e-10;

fn cr(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn e(theta: f64) -> C64 {
    C64::from_polar(1.0, theta)
}

/// Evaluates `draw` at [`DRAWS`] seeded points and reports the largest
/// residual together with the point where it occurred.
fn run_draws(
    p: &mut Params,
    q_default: Option<f64>,
    mut draw: impl FnMut(&mut Params, f64, f64) -> Result<(f64, String)>,
) -> Result<Outcome> {
    let tol = p.float("tol", DEFAULT_TOL)?;
    let q_fixed = match q_default {
        Some(d) => Some(p.float("q", d)?),
        None => p.float_opt("q")?,
    };
    if let Some(q) = q_fixed {
        guard("q", cr(q))?;
    }
    p.record("draws", DRAWS.to_string());
    let mut worst = (0.0f64, String::new());
    for _ in 0..DRAWS {
        let q = match q_fixed {
            Some(q) => q,
            None => p.uniform(0.1, 0.6),
        };
        let (r, at) = draw(p, q, tol)?;
        if !(r <= worst.0) {
            worst = (r, format!("q = {q}, {at}"));
        }
    }
    Ok(Outcome::Numeric { residual: worst.0, tol, witness: format!("largest residual {:.3e} at {}", worst.0, worst.1) })
}

/// Tail ratio used for generating-function sums in `t`.
fn ratio(t: f64) -> f64 {
    t.abs().sqrt()
}

pub(super) fn phi32_transform(p: &mut Params, _order: u32) -> Result<Outcome> {
    run_draws(p, Some(0.3), |p, q, tol| {
        // Generic parameters: a, b, c of modulus near one, d, e small, so
        // both arguments stay inside the guard.
        let mut pick = |lo: f64, hi: f64| {
            let r = p.uniform(lo, hi);
            let th = p.uniform(0.0, std::f64::consts::TAU);
            C64::from_polar(r, th)
        };
        let (a, b, c) = (pick(0.6, 0.95), pick(0.6, 0.95), pick(0.6, 0.95));
        let (d, ee) = (pick(0.1, 0.3), pick(0.1, 0.3));
        let lhs = phi_numeric(&[a, b, c], &[d, ee], q, d * ee / (a * b * c), tol)?;
        let pre = inf_prod(&[(ee / a, q), (d * ee / (b * c), q)])? / inf_prod(&[(ee, q), (d * ee / (a * b * c), q)])?;
        let rhs = pre * phi_numeric(&[a, d / b, d / c], &[d, d * ee / (b * c)], q, ee / a, tol)?;
        let generic = (lhs - rhs).norm();
        // The instance relating the two Poisson kernel forms.
        let pt = PoissonPoint::draw(p);
        let instance = (pt.bivariate_rhs(q, tol)? - pt.kernel_rhs(q, tol)?).norm();
        Ok((generic.max(instance), format!("a = {a}, b = {b}, c = {c}, d = {d}, e = {ee}; {}", pt.describe())))
    })
}

/// A point `(θ, β, a, b, t)` for the Poisson kernel checks.
struct PoissonPoint {
    theta: f64,
    beta: f64,
    a: f64,
    b: f64,
    t: f64,
}

impl PoissonPoint {
    fn draw(p: &mut Params) -> Self {
        Self {
            theta: p.uniform(0.0, std::f64::consts::PI),
            beta: p.uniform(0.0, std::f64::consts::PI),
            a: p.signed(0.1, 0.5),
            b: p.signed(0.1, 0.5),
            t: p.uniform(0.1, 0.4),
        }
    }

    fn describe(&self) -> String {
        format!("theta = {}, beta = {}, a = {}, b = {}, t = {}", self.theta, self.beta, self.a, self.b, self.t)
    }

    /// `Σ H_n(cos θ;a|q) H_n(cos β;b|q) t^n/(q;q)_n`.
    fn lhs(&self, q: f64, tol: f64) -> Result<C64> {
        sum_until_converged(
            |n| {
                big_hermite_f(n, self.theta, cr(self.a), q) * big_hermite_f(n, self.beta, cr(self.b), q)
                    * (self.t.powi(n as i32) / fqfact(q, n))
            },
            ratio(self.t),
            tol,
        )
    }

    /// The substitution `x = e^{-2iθ}, y = ae^{-iθ}, u = e^{-2iβ},
    /// v = be^{-iβ}, t -> te^{i(θ+β)}`.
    fn substituted(&self) -> [C64; 5] {
        let (et, eb) = (e(self.theta), e(self.beta));
        [et.powi(-2), self.a / et, eb.powi(-2), self.b / eb, self.t * et * eb]
    }

    /// `Σ h_n(x,y|q) h_n(u,v|q) T^n/(q;q)_n` at the substituted point.
    fn bivariate_lhs(&self, q: f64, tol: f64) -> Result<C64> {
        let [x, y, u, v, tt] = self.substituted();
        sum_until_converged(|n| brs_f(n, x, y, q) * brs_f(n, u, v, q) * tt.powi(n as i32) / fqfact(q, n), ratio(self.t), tol)
    }

    /// Bivariate Mehler right side at the substituted point.
    fn bivariate_rhs(&self, q: f64, tol: f64) -> Result<C64> {
        let [x, y, u, v, tt] = self.substituted();
        let pre = inf_prod(&[(y * tt, q), (v * x * tt, q)])? / inf_prod(&[(tt, q), (x * tt, q), (u * x * tt, q)])?;
        Ok(pre * phi_numeric(&[y, x * tt, v / u], &[y * tt, v * x * tt], q, u * tt, tol)?)
    }

    /// Nonsymmetric Poisson kernel right side.
    fn kernel_rhs(&self, q: f64, tol: f64) -> Result<C64> {
        let (et, eb) = (e(self.theta), e(self.beta));
        let (a, b, t) = (self.a, self.b, self.t);
        let num = inf_prod(&[(a * t * eb, q), (b / eb, q), (cr(t * t), q)])?;
        let den = inf_prod(&[(t * et * eb, q), (t * et / eb, q), (t / (et * eb), q), (t * eb / et, q)])?;
        let phi = phi_numeric(&[t * et * eb, t * eb / et, cr(a * t / b)], &[a * t * eb, cr(t * t)], q, b / eb, tol)?;
        Ok(num / den * phi)
    }
}

pub(super) fn nonsym_poisson(p: &mut Params, _order: u32) -> Result<Outcome> {
    run_draws(p, Some(0.3), |p, q, tol| {
        let pt = PoissonPoint::draw(p);
        let lhs = pt.lhs(q, tol)?;
        let kernel = pt.kernel_rhs(q, tol)?;
        let biv_l = pt.bivariate_lhs(q, tol)?;
        let biv_r = pt.bivariate_rhs(q, tol)?;
        let r = (lhs - kernel).norm().max((biv_l - biv_r).norm()).max((biv_r - kernel).norm());
        Ok((r, pt.describe()))
    })
}

pub(super) fn rogers_big(p: &mut Params, _order: u32) -> Result<Outcome> {
    run_draws(p, None, |p, q, tol| {
        let theta = p.uniform(0.0, std::f64::consts::PI);
        let a = p.signed(0.1, 0.5);
        let t = p.uniform(0.1, 0.4);
        let s = p.uniform(0.1, 0.4);
        let et = e(theta);
        let lhs = sum_until_converged(
            |total| {
                let w: f64 = (0..=total)
                    .map(|n| t.powi(n as i32) * s.powi((total - n) as i32) / (fqfact(q, n) * fqfact(q, total - n)))
                    .sum();
                big_hermite_f(total, theta, cr(a), q) * w
            },
            ratio(t.max(s)),
            tol,
        )?;
        let pre = inf_prod(&[(cr(a * s), q)])? / inf_prod(&[(s * et, q), (s / et, q), (t / et, q)])?;
        let rhs = pre * phi_numeric(&[a / et, s / et], &[cr(a * s)], q, t * et, tol)?;
        Ok(((lhs - rhs).norm(), format!("theta = {theta}, a = {a}, t = {t}, s = {s}")))
    })
}

/// A draw `(θ, a, t)` shared by the generating-function cases.
fn gf_point(p: &mut Params) -> (f64, f64, f64) {
    (p.uniform(0.0, std::f64::consts::PI), p.signed(0.1, 0.5), p.uniform(0.1, 0.4))
}

fn describe(theta: f64, a: f64, t: f64) -> String {
    format!("theta = {theta}, a = {a}, t = {t}")
}

pub(super) fn gf_its_1(p: &mut Params, _order: u32) -> Result<Outcome> {
    run_draws(p, None, |p, q, tol| {
        let (theta, a, t) = gf_point(p);
        let q2 = q * q;
        let lhs = sum_until_converged(|n| hermite_f(2 * n, theta, q) * (t.powi(n as i32) / fqfact(q2, n)), ratio(t), tol)?;
        let e2 = e(2.0 * theta);
        let rhs = inf_prod(&[(cr(-t), q)])? / inf_prod(&[(t * e2, q2), (t / e2, q2)])?;
        Ok(((lhs - rhs).norm(), describe(theta, a, t)))
    })
}

pub(super) fn gf_its_2(p: &mut Params, _order: u32) -> Result<Outcome> {
    run_draws(p, None, |p, q, tol| {
        let (theta, a, t) = gf_point(p);
        let q2 = q * q;
        let lhs = sum_until_converged(|n| hermite_f(n, theta, q2) * (t.powi(n as i32) / fqfact(q, n)), ratio(t), tol)?;
        let et = e(theta);
        let rhs = inf_prod(&[(cr(q * t * t), q2)])? / inf_prod(&[(t * et, q), (t / et, q)])?;
        Ok(((lhs - rhs).norm(), describe(theta, a, t)))
    })
}

pub(super) fn gen_big_1(p: &mut Params, _order: u32) -> Result<Outcome> {
    run_draws(p, None, |p, q, tol| {
        let (theta, a, t) = gf_point(p);
        let q2 = q * q;
        let lhs = sum_until_converged(
            |n| {
                let w: f64 = (0..=n / 2)
                    .map(|k| {
                        let r = n - 2 * k;
                        q.powi((r * r.saturating_sub(1) / 2) as i32) * a.powi(r as i32) * t.powi((n - k) as i32)
                            / (fqfact(q2, k) * fqfact(q, r))
                    })
                    .sum();
                big_hermite_f(n, theta, cr(a), q) * w
            },
            ratio(t),
            tol,
        )?;
        let e2 = e(2.0 * theta);
        let rhs = inf_prod(&[(cr(a * a * t), q2), (cr(-t), q)])? / inf_prod(&[(t * e2, q2), (t / e2, q2)])?;
        Ok(((lhs - rhs).norm(), describe(theta, a, t)))
    })
}

pub(super) fn gen_big_2(p: &mut Params, _order: u32) -> Result<Outcome> {
    run_draws(p, None, |p, q, tol| {
        let (theta, a, t) = gf_point(p);
        let q2 = q * q;
        let lhs = sum_until_converged(
            |n| {
                let w: f64 = (0..=n)
                    .map(|k| {
                        let sign = if k % 2 == 1 { -1.0 } else { 1.0 };
                        sign * q.powi((k * k) as i32) * a.powi(k as i32) * t.powi((n + k) as i32)
                            / (fqfact(q2, k) * fqfact(q, n - k))
                    })
                    .sum();
                big_hermite_f(n, theta, cr(a), q2) * w
            },
            ratio(t),
            tol,
        )?;
        let et = e(theta);
        let rhs = inf_prod(&[(cr(a * t), q), (cr(q * t * t), q2)])? / inf_prod(&[(t * et, q), (t / et, q)])?;
        Ok(((lhs - rhs).norm(), describe(theta, a, t)))
    })
}

pub(super) fn gf_big(p: &mut Params, _order: u32) -> Result<Outcome> {
    run_draws(p, None, |p, q, tol| {
        let (theta, a, t) = gf_point(p);
        let lhs =
            sum_until_converged(|n| big_hermite_f(n, theta, cr(a), q) * (t.powi(n as i32) / fqfact(q, n)), ratio(t), tol)?;
        let et = e(theta);
        let rhs = inf_prod(&[(cr(a * t), q)])? / inf_prod(&[(t * et, q), (t / et, q)])?;
        Ok(((lhs - rhs).norm(), describe(theta, a, t)))
    })
}

pub(super) fn ortho_big(p: &mut Params, _order: u32) -> Result<Outcome> {
    let q = p.float("q", 0.4)?;
    let a = p.float("a", 0.3)?;
    let nmax = p.nat("n")?.unwrap_or(5);
    let tol = p.float("tol", 1e-8)?;
    let (dev, (n, m)) = ortho_matrix_deviation(nmax, a, q, tol * 1e-3)?;
    Ok(Outcome::Numeric {
        residual: dev,
        tol,
        witness: format!("largest deviation {dev:.3e} at n = {n}, m = {m} (n, m <= {nmax})"),
    })
}

pub(super) fn askey_wilson(p: &mut Params, _order: u32) -> Result<Outcome> {
    let a = p.float("a", 0.3)?;
    let b = p.float("b", 0.25)?;
    let c = p.float("c", 0.2)?;
    let d = p.float("d", 0.1)?;
    let q = p.float("q", 0.5)?;
    let tol = p.float("tol", 1e-8)?;
    Ok(Outcome::Report(askey_wilson_check(a, b, c, d, q, tol)))
}

pub(super) fn closed_h(p: &mut Params, _order: u32) -> Result<Outcome> {
    let q = p.float("q", 0.3)?;
    let a = p.float("a", 0.1)?;
    let t = p.float("t", 0.2)?;
    let tol = p.float("tol", 1e-7)?;
    let id = p.id().to_string();
    let r = closed_form_check(&id, q, a, t, tol)
        .ok_or_else(|| crate::error::QrsError::UnknownIdentity(id.clone()))?;
    Ok(Outcome::Report(r))
}

#[cfg(test)]
mod tests {
    use crate::idverify::verify;
    use crate::report::Status;
    use std::collections::BTreeMap;

    #[test]
    fn numeric_cases_pass_with_defaults() {
        let none = BTreeMap::new();
        for id in ["phi32-transform", "nonsym-poisson", "rogers-big", "gf-its-1", "gf-its-2", "gen-big-1", "gen-big-2", "gf-big"] {
            let r = verify(id, 0, &none, 0).unwrap();
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
    }

    #[test]
    fn numeric_cases_are_deterministic() {
        let none = BTreeMap::new();
        let a = verify("nonsym-poisson", 0, &none, 11).unwrap();
        let b = verify("nonsym-poisson", 0, &none, 11).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn guard_violation_is_an_error() {
        let p: BTreeMap<String, String> = [("q".to_string(), "0.95".to_string())].into_iter().collect();
        assert!(verify("gf-big", 0, &p, 0).is_err());
    }

    #[test]
    fn quadrature_cases_pass() {
        let none = BTreeMap::new();
        for id in ["askey-wilson", "closed-H-qq", "closed-H-mqq", "closed-H-q2q", "closed-H-q2q3"] {
            let r = verify(id, 0, &none, 0).unwrap();
            assert_eq!(r.status, Status::Pass, "{r:?}");
        }
    }
}
