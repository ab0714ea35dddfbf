//! The q-derivative `D_q`, the q-exponential operator `T(bD_q)`, the
//! homogeneous q-difference operator `D_xy` and the homogeneous q-shift
//! operator `E(D_xy)`, all acting on exact representations.
//!
//! `T(bD_q)` lowers the degree in `a` by one for every power of `b` it
//! produces, so the output is graded: `b = b0·β` with `β` kept as a second
//! series variable named `b`. Through total degree `N` in `(a, β)` the
//! result depends only on the operand's coefficients up to `a^N`, which
//! makes truncated checks exact.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::error::{QrsError, Result};
use crate::families::{brs_poly, cauchy_poly, CauchyExpansion};
use crate::fps::{Deg, PhiParam, PhiSpec, PolySeries, SeriesCtx};
use crate::fps::phi_series;
use crate::qcore::scalar::{pow_i, pow_u};
use crate::qcore::{qbinom, qfact, qpoch, ExactScalar, MultiPoly};
use crate::report::{series_witness, IdentityReport, Mode};

/// Name of the operator variable.
pub const AVAR: &str = "a";
/// Name of the grading variable carrying powers of `b`.
pub const BVAR: &str = "b";

fn require_a_series(f: &PolySeries) {
    assert!(
        !f.is_bivariate() && f.vars()[0] == AVAR,
        "operand must be a series in `{AVAR}`, got {:?}",
        f.vars()
    );
}

fn dq_raw(f: &PolySeries, q: &ExactScalar, order: u32) -> PolySeries {
    let mut out = PolySeries::zero(&[AVAR], order);
    for (d, c) in f.coeffs() {
        let n = d.0;
        if n == 0 {
            continue;
        }
        out.set((n - 1, 0), c.scale(&(ExactScalar::one() - pow_u(q, n as u64))));
    }
    out
}

/// `D_q f(a) = (f(a) - f(aq))/a`; the result is known to one order less.
pub fn dq_apply(f: &PolySeries, q: &ExactScalar) -> PolySeries {
    require_a_series(f);
    if f.order() == 0 {
        return PolySeries::zero(&[AVAR], 0);
    }
    dq_raw(f, q, f.order() - 1)
}

/// `f(c a)` for a series in `a`.
pub fn scale_a(f: &PolySeries, c: &ExactScalar) -> PolySeries {
    let mut out = PolySeries::zero(&[AVAR], f.order());
    for (d, x) in f.coeffs() {
        out.set(*d, x.scale(&pow_u(c, d.0 as u64)));
    }
    out
}

/// `T(bD_q) f = Σ_n b^n D_q^n f / (q;q)_n` with `b = b0·β`, as a series in
/// `(a, β)` through total degree `order`.
pub fn t_op_apply(b0: &MultiPoly, f: &PolySeries, q: &ExactScalar, order: u32) -> PolySeries {
    require_a_series(f);
    let f = f.truncate(order);
    let mut out = PolySeries::zero(&[AVAR, BVAR], order);
    // The operand is the polynomial of its stored coefficients, so the
    // operator sum stops once D_q has consumed every power of a.
    let mut cur = f.clone();
    let mut bn = MultiPoly::one();
    for n in 0..=order {
        if cur.is_zero() {
            break;
        }
        let w = qfact(q, n).recip();
        for (d, c) in cur.coeffs() {
            let v = out.coeff((d.0, n)).add_ref(&c.mul_ref(&bn).scale(&w));
            out.set((d.0, n), v);
        }
        cur = dq_raw(&cur, q, order);
        bn = bn.mul_ref(b0);
    }
    out
}

/// Collapses the `β` grading of a [`t_op_apply`] result whose operand was a
/// polynomial, giving a polynomial in `a`.
pub fn ungrade(f: &PolySeries) -> MultiPoly {
    f.coeffs().fold(MultiPoly::zero(), |acc, (d, c)| {
        acc.add_ref(&c.mul_ref(&MultiPoly::monomial(AVAR, d.0, ExactScalar::one())))
    })
}

/// `D_xy` in the Cauchy basis: `P_k -> (1 - q^k) P_{k-1}`.
pub fn dxy_apply(f: &CauchyExpansion, q: &ExactScalar) -> CauchyExpansion {
    let c = f.coeffs();
    CauchyExpansion::new(
        (1..c.len()).map(|k| c[k].scale(&(ExactScalar::one() - pow_u(q, k as u64)))).collect(),
    )
}

/// `D_xy f = (f(x, y/q) - f(qx, y)) / (x - y/q)` computed on the monomial
/// form by exact division.
pub fn dxy_symbolic(f: &MultiPoly, q: &ExactScalar) -> Result<MultiPoly> {
    if q.is_zero() {
        return Err(QrsError::DivisionByZero("D_xy needs q != 0".into()));
    }
    let qi = q.recip();
    let num = f.scale_var("y", &qi).sub_ref(&f.scale_var("x", q));
    let den = MultiPoly::var("x").sub_ref(&MultiPoly::var("y").scale(&qi));
    num.div_exact(&den, "x")
        .ok_or_else(|| QrsError::DivisionByZero("D_xy quotient is not exact".into()))
}

/// `E(D_xy)` on a single Cauchy expansion by the basis rule
/// `P_k -> h_k(x,y|q)`.
pub fn e_op_basis(f: &CauchyExpansion, q: &ExactScalar) -> MultiPoly {
    f.coeffs()
        .iter()
        .enumerate()
        .fold(MultiPoly::zero(), |acc, (k, c)| acc.add_ref(&c.mul_ref(&brs_poly(k as u32, q))))
}

/// `E(D_xy)` on a single Cauchy expansion as `Σ_j D_xy^j / (q;q)_j`.
pub fn e_op_series(f: &CauchyExpansion, q: &ExactScalar) -> MultiPoly {
    let mut acc = CauchyExpansion::zero();
    let mut cur = f.clone();
    let mut j = 0u32;
    while !cur.is_zero() {
        acc = acc.add(&cur.scale(&MultiPoly::constant(qfact(q, j).recip())));
        cur = dxy_apply(&cur, q);
        j += 1;
    }
    acc.to_monomial(q)
}

/// A series in `t` (or `t, s`) whose coefficients are Cauchy expansions,
/// with every Cauchy index bounded by `cap`.
#[derive(Clone, Debug, PartialEq)]
pub struct CauchySeriesOperand {
    vars: Vec<String>,
    order: u32,
    cap: usize,
    coeffs: BTreeMap<Deg, CauchyExpansion>,
}

impl CauchySeriesOperand {
    pub fn new(vars: &[&str], order: u32, cap: usize) -> Self {
        assert!((1..=2).contains(&vars.len()));
        Self { vars: vars.iter().map(|v| v.to_string()).collect(), order, cap, coeffs: BTreeMap::new() }
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn cap(&self) -> usize {
        self.cap
    }

    pub fn coeff(&self, d: Deg) -> CauchyExpansion {
        self.coeffs.get(&d).cloned().unwrap_or_default()
    }

    /// Stores a coefficient; fails if it uses a Cauchy index above the cap.
    pub fn set(&mut self, d: Deg, c: CauchyExpansion) -> Result<()> {
        if let Some(k) = c.degree() {
            if k > self.cap {
                return Err(QrsError::CapExceeded { index: k, cap: self.cap });
            }
        }
        if d.0 + d.1 <= self.order {
            if c.is_zero() {
                self.coeffs.remove(&d);
            } else {
                self.coeffs.insert(d, c);
            }
        }
        Ok(())
    }

    /// Converts a series with coefficients in `x, y` coefficient-wise.
    pub fn from_monomial(f: &PolySeries, q: &ExactScalar, cap: usize) -> Result<Self> {
        let vars: Vec<&str> = f.vars().iter().map(String::as_str).collect();
        let mut out = Self::new(&vars, f.order(), cap);
        for (d, c) in f.coeffs() {
            out.set(*d, CauchyExpansion::from_monomial(c, q)?)?;
        }
        Ok(out)
    }

    pub fn to_monomial(&self, q: &ExactScalar) -> PolySeries {
        let vars: Vec<&str> = self.vars.iter().map(String::as_str).collect();
        PolySeries::from_coeffs(&vars, self.order, self.coeffs.iter().map(|(d, c)| (*d, c.to_monomial(q))))
    }
}

/// `E(D_xy)` applied coefficient-wise; the basis rule and the operator
/// series are both evaluated and must agree.
pub fn e_op_apply(f: &CauchySeriesOperand, q: &ExactScalar) -> Result<PolySeries> {
    let vars: Vec<&str> = f.vars.iter().map(String::as_str).collect();
    let mut out = PolySeries::zero(&vars, f.order);
    for (d, c) in &f.coeffs {
        let by_basis = e_op_basis(c, q);
        let by_series = e_op_series(c, q);
        if by_basis != by_series {
            return Err(QrsError::NotInCauchySpan(format!(
                "E(D_xy) routes disagree at {d:?}: {}",
                by_basis.sub_ref(&by_series)
            )));
        }
        out.set(*d, by_basis);
    }
    Ok(out)
}

fn var(name: &str) -> MultiPoly {
    MultiPoly::var(name)
}

/// Spectator values for the `T(bD_q)` lemmas. Any entry may be a symbol or
/// a constant polynomial.
#[derive(Clone, Debug)]
pub struct TopParams {
    pub b0: MultiPoly,
    pub s: MultiPoly,
    pub t: MultiPoly,
    pub v: MultiPoly,
    pub q: ExactScalar,
}

impl TopParams {
    /// `b0 = 1` with `s, t, v` symbolic.
    pub fn symbolic(q: ExactScalar) -> Self {
        Self { b0: MultiPoly::one(), s: var("s"), t: var("t"), v: var("v"), q }
    }
}

/// Both sides of `T(bD_q){(av;q)_∞/(as,at;q)_∞} =
/// (bv;q)_∞/(as,bs,bt;q)_∞ · 2φ1(v/t, bs; bv; q, at)`.
pub fn lemma22_sides(p: &TopParams, order: u32) -> Result<(PolySeries, PolySeries)> {
    let a_ctx = SeriesCtx::new(&[AVAR], order, p.q.clone());
    let operand = a_ctx.inf_ratio(&[(p.v.clone(), (1, 0))], &[(p.s.clone(), (1, 0)), (p.t.clone(), (1, 0))]);
    let lhs = t_op_apply(&p.b0, &operand, &p.q, order);

    let ctx = SeriesCtx::new(&[AVAR, BVAR], order, p.q.clone());
    let bs = p.b0.mul_ref(&p.s);
    let bt = p.b0.mul_ref(&p.t);
    let bv = p.b0.mul_ref(&p.v);
    let pre = ctx.inf_ratio(&[(bv.clone(), (0, 1))], &[(p.s.clone(), (1, 0)), (bs.clone(), (0, 1)), (bt, (0, 1))]);
    let phi = PhiSpec {
        upper: vec![
            PhiParam::Ratio { num: p.v.clone(), den: p.t.clone() },
            PhiParam::Series(ctx.mono(bs, (0, 1))),
        ],
        lower: vec![ctx.mono(bv, (0, 1))],
        base: p.q.clone(),
        argument: ctx.mono(MultiPoly::one(), (1, 0)),
    };
    let rhs = pre.try_mul(&phi_series(&phi, order)?)?;
    Ok((lhs, rhs))
}

/// Spectators for the three-parameter version; `v` must be a nonzero
/// scalar because the argument carries `1/v`.
#[derive(Clone, Debug)]
pub struct ZwParams {
    pub b0: MultiPoly,
    pub s: MultiPoly,
    pub t: MultiPoly,
    pub v: ExactScalar,
    pub w: MultiPoly,
    pub q: ExactScalar,
}

/// Both sides of the `T(bD_q)` relation with three denominator parameters
/// `s, t, w`, whose right side is a `3φ2` with argument `abstw/v`.
pub fn zhang_wang_sides(p: &ZwParams, order: u32) -> Result<(PolySeries, PolySeries)> {
    if p.v.is_zero() {
        return Err(QrsError::ParamOutOfDomain { name: "v".into(), reason: "must be nonzero".into() });
    }
    let v = MultiPoly::constant(p.v.clone());
    let a_ctx = SeriesCtx::new(&[AVAR], order, p.q.clone());
    let operand = a_ctx.inf_ratio(
        &[(v.clone(), (1, 0))],
        &[(p.s.clone(), (1, 0)), (p.t.clone(), (1, 0)), (p.w.clone(), (1, 0))],
    );
    let lhs = t_op_apply(&p.b0, &operand, &p.q, order);

    let ctx = SeriesCtx::new(&[AVAR, BVAR], order, p.q.clone());
    let b = |c: &MultiPoly| p.b0.mul_ref(c);
    let stw = p.s.mul_ref(&p.t).mul_ref(&p.w);
    let arg_coef = b(&stw).scale(&p.v.recip());
    let pre = ctx.inf_ratio(
        &[(v.clone(), (1, 0)), (b(&v), (0, 1)), (arg_coef, (1, 1))],
        &[
            (p.s.clone(), (1, 0)),
            (p.t.clone(), (1, 0)),
            (p.w.clone(), (1, 0)),
            (b(&p.s), (0, 1)),
            (b(&p.t), (0, 1)),
            (b(&p.w), (0, 1)),
        ],
    );
    // (v/s, v/t, v/w;q)_n (abstw/v)^n = Π(s - vq^k)(t - vq^k)(w - vq^k) (ab/v)^n
    let phi = PhiSpec {
        upper: vec![
            PhiParam::Ratio { num: v.clone(), den: p.s.clone() },
            PhiParam::Ratio { num: v.clone(), den: p.t.clone() },
            PhiParam::Ratio { num: v.clone(), den: p.w.clone() },
        ],
        lower: vec![ctx.mono(v.clone(), (1, 0)), ctx.mono(b(&v), (0, 1))],
        base: p.q.clone(),
        argument: ctx.mono(p.b0.scale(&p.v.recip()), (1, 1)),
    };
    let rhs = pre.try_mul(&phi_series(&phi, order)?)?;
    Ok((lhs, rhs))
}

fn param_map(pairs: &[(&str, String)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}

/// Exact check of the three-parameter relation together with its `w = 0`
/// reduction to [`lemma22_sides`].
pub fn zhang_wang_check(
    b: &ExactScalar,
    s: &ExactScalar,
    t: &ExactScalar,
    v: &ExactScalar,
    w: &ExactScalar,
    q: &ExactScalar,
    order: u32,
) -> IdentityReport {
    use crate::qcore::format_rational as f;
    let params = param_map(&[("b", f(b)), ("s", f(s)), ("t", f(t)), ("v", f(v)), ("w", f(w)), ("q", f(q))]);
    let report = IdentityReport::new(
        "zhang-wang",
        "q-exponential operator on a ratio with three denominator parameters",
        Mode::ExactSeries,
        order,
        params,
    );
    let c = |r: &ExactScalar| MultiPoly::constant(r.clone());
    let zw = ZwParams { b0: c(b), s: c(s), t: c(t), v: v.clone(), w: c(w), q: q.clone() };
    let outcome = (|| -> Result<Option<String>> {
        let (lhs, rhs) = zhang_wang_sides(&zw, order)?;
        if let Some(wit) = series_witness(&lhs, &rhs) {
            return Ok(Some(wit));
        }
        let reduced = ZwParams { w: MultiPoly::zero(), ..zw.clone() };
        let (_, zw_rhs) = zhang_wang_sides(&reduced, order)?;
        let tp = TopParams { b0: c(b), s: c(s), t: c(t), v: c(v), q: q.clone() };
        let (l22_lhs, l22_rhs) = lemma22_sides(&tp, order)?;
        if let Some(wit) = series_witness(&l22_lhs, &l22_rhs) {
            return Ok(Some(format!("two-parameter form: {wit}")));
        }
        Ok(series_witness(&zw_rhs, &l22_rhs).map(|wit| format!("w = 0 reduction: {wit}")))
    })();
    match outcome {
        Ok(w) => report.exact_outcome(w),
        Err(e) => report.failed(&e.to_string()),
    }
}

/// `(yt;q)_∞/(xt;q)_∞ · P_n(x,y)/(yt;q)_n` built from the generating
/// function and an exact series inverse, with coefficients in `x, y`.
pub fn lemma23_operand(n: u32, q: &ExactScalar, order: u32) -> Result<PolySeries> {
    let ctx = SeriesCtx::new(&["t"], order, q.clone());
    let gf = ctx.inf_ratio(&[(var("y"), (1, 0))], &[(var("x"), (1, 0))]);
    let yt = ctx.mono(var("y"), (1, 0));
    let div = ctx.poch_inv(&yt, n)?;
    Ok(gf.try_mul(&div)?.scale(&cauchy_poly(n, q)))
}

/// Right side `(yt;q)_∞/(t,xt;q)_∞ Σ_k [n,k] (y,xt;q)_k/(yt;q)_k x^{n-k}`.
pub fn lemma23_rhs(n: u32, q: &ExactScalar, order: u32) -> Result<PolySeries> {
    let ctx = SeriesCtx::new(&["t"], order, q.clone());
    let pre = ctx.inf_ratio(&[(var("y"), (1, 0))], &[(MultiPoly::one(), (1, 0)), (var("x"), (1, 0))]);
    let xt = ctx.mono(var("x"), (1, 0));
    let yt = ctx.mono(var("y"), (1, 0));
    let mut sum = ctx.zero();
    for k in 0..=n {
        let c = qpoch(&var("y"), q, k as i64)?
            .mul_ref(&var("x").pow(n - k))
            .scale(&qbinom(n as i64, k as i64, q));
        let term = ctx.poch(&xt, k).try_mul(&ctx.poch_inv(&yt, k)?)?.scale(&c);
        sum = sum.try_add(&term)?;
    }
    pre.try_mul(&sum)
}

/// Both sides of the `E(D_xy)` lemma: the operator applied to
/// [`lemma23_operand`] and [`lemma23_rhs`].
pub fn lemma23_sides(n: u32, q: &ExactScalar, order: u32) -> Result<(PolySeries, PolySeries)> {
    let operand = lemma23_operand(n, q, order)?;
    let cauchy = CauchySeriesOperand::from_monomial(&operand, q, (n + order) as usize)?;
    Ok((e_op_apply(&cauchy, q)?, lemma23_rhs(n, q, order)?))
}

/// Leibniz rule for `D_q`: returns both sides of
/// `D_q^n{fg} = Σ_k q^{k(k-n)} [n,k] D_q^k{f} D_q^{n-k}{g(q^k a)}`.
pub fn leibniz_sides(f: &PolySeries, g: &PolySeries, n: u32, q: &ExactScalar) -> Result<(PolySeries, PolySeries)> {
    let iter = |mut s: PolySeries, k: u32| {
        for _ in 0..k {
            s = dq_apply(&s, q);
        }
        s
    };
    let lhs = iter(f.try_mul(g)?, n);
    let mut rhs: Option<PolySeries> = None;
    for k in 0..=n {
        let w = pow_i(q, k as i64 * (k as i64 - n as i64))? * qbinom(n as i64, k as i64, q);
        let term = iter(f.clone(), k).try_mul(&iter(scale_a(g, &pow_u(q, k as u64)), n - k))?.scale_scalar(&w);
        rhs = Some(match rhs {
            None => term,
            Some(r) => r.try_add(&term)?,
        });
    }
    let rhs = rhs.expect("n >= 0 gives at least one term").truncate(lhs.order());
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::families::rs_poly;
    use crate::qcore::{int, rat};

    fn a_series(coeffs: &[ExactScalar], order: u32) -> PolySeries {
        PolySeries::from_coeffs(
            &[AVAR],
            order,
            coeffs.iter().enumerate().map(|(i, c)| ((i as u32, 0), MultiPoly::constant(c.clone()))),
        )
    }

    #[test]
    fn dq_examples() {
        let q = rat(1, 3);
        let one = PolySeries::one(&[AVAR], 4);
        assert!(dq_apply(&one, &q).is_zero());
        let a2 = PolySeries::monomial(&[AVAR], 4, (2, 0), MultiPoly::one());
        let d = dq_apply(&a2, &q);
        assert_eq!(d.order(), 3);
        assert_eq!(d.coeff((1, 0)), MultiPoly::constant(int(1) - &q * &q));
    }

    #[test]
    fn t_of_monomial_is_rogers_szego() {
        let q = rat(2, 5);
        for n in 0..8 {
            let an = PolySeries::monomial(&[AVAR], n, (n, 0), MultiPoly::one());
            let got = ungrade(&t_op_apply(&MultiPoly::one(), &an, &q, n));
            assert_eq!(got, rs_poly(n, &q).rename("x", AVAR), "n = {n}");
        }
    }

    #[test]
    fn t_with_zero_b_is_identity() {
        let q = rat(1, 2);
        let f = a_series(&[rat(1, 2), rat(3, 1), rat(-1, 7), rat(2, 3)], 3);
        let g = t_op_apply(&MultiPoly::zero(), &f, &q, 3);
        assert_eq!(ungrade(&g), ungrade(&f.map_coeffs(|c| c.clone())));
        assert!(g.coeffs().all(|(d, _)| d.1 == 0));
    }

    #[test]
    fn t_is_linear() {
        let q = rat(1, 3);
        let f = a_series(&[rat(1, 2), rat(3, 1), rat(-1, 7)], 5);
        let g = a_series(&[rat(0, 1), rat(2, 9), rat(4, 1), rat(1, 1)], 5);
        let b = MultiPoly::constant(rat(3, 4));
        let lhs = t_op_apply(&b, &(&f + &g.scale_scalar(&rat(5, 2))), &q, 5);
        let rhs = &t_op_apply(&b, &f, &q, 5) + &t_op_apply(&b, &g, &q, 5).scale_scalar(&rat(5, 2));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn leibniz_rule() {
        let q = rat(2, 7);
        let f = a_series(&[rat(1, 2), rat(3, 1), rat(-1, 7), rat(2, 3), rat(1, 5), rat(0, 1), rat(7, 1)], 6);
        let g = a_series(&[rat(1, 1), rat(-2, 9), rat(4, 1), rat(0, 1), rat(1, 3), rat(5, 4), rat(1, 8)], 6);
        for n in 0..=4 {
            let (l, r) = leibniz_sides(&f, &g, n, &q).unwrap();
            assert_eq!(l, r, "n = {n}");
        }
    }

    #[test]
    fn dxy_basis_rule_and_symbolic_quotient() {
        let q = rat(1, 2);
        assert!(dxy_apply(&CauchyExpansion::basis(0, MultiPoly::one()), &q).is_zero());
        let p3 = dxy_apply(&CauchyExpansion::basis(3, MultiPoly::one()), &q);
        assert_eq!(p3, CauchyExpansion::basis(2, MultiPoly::constant(int(1) - rat(1, 8))));
        let e = CauchyExpansion::new((0..9).map(|k| MultiPoly::constant(rat(k * k - 3, k + 1))).collect());
        let via_basis = dxy_apply(&e, &q).to_monomial(&q);
        assert_eq!(dxy_symbolic(&e.to_monomial(&q), &q).unwrap(), via_basis);
    }

    #[test]
    fn e_on_cauchy_basis() {
        let q = rat(1, 3);
        for n in 0..7 {
            let e = CauchyExpansion::basis(n, MultiPoly::one());
            assert_eq!(e_op_basis(&e, &q), brs_poly(n as u32, &q));
            assert_eq!(e_op_series(&e, &q), brs_poly(n as u32, &q));
        }
    }

    #[test]
    fn e_maps_cauchy_gf_to_h_gf() {
        let q = rat(2, 5);
        let n = 7;
        let ctx = SeriesCtx::new(&["t"], n, q.clone());
        let pgf = ctx.inf_ratio(&[(var("y"), (1, 0))], &[(var("x"), (1, 0))]);
        let hgf = ctx.inf_ratio(&[(var("y"), (1, 0))], &[(var("x"), (1, 0)), (MultiPoly::one(), (1, 0))]);
        let op = CauchySeriesOperand::from_monomial(&pgf, &q, n as usize).unwrap();
        assert_eq!(e_op_apply(&op, &q).unwrap(), hgf);
    }

    #[test]
    fn cap_is_enforced_and_raising_it_changes_nothing() {
        let q = rat(1, 2);
        let operand = lemma23_operand(3, &q, 5).unwrap();
        assert!(matches!(
            CauchySeriesOperand::from_monomial(&operand, &q, 6),
            Err(QrsError::CapExceeded { .. })
        ));
        let small = CauchySeriesOperand::from_monomial(&operand, &q, 8).unwrap();
        let big = CauchySeriesOperand::from_monomial(&operand, &q, 20).unwrap();
        assert_eq!(e_op_apply(&small, &q).unwrap(), e_op_apply(&big, &q).unwrap());
    }

    #[test]
    fn lemma23_operand_has_shifted_cauchy_coefficients() {
        let q = rat(1, 3);
        let (n, order) = (2, 5);
        let op = CauchySeriesOperand::from_monomial(&lemma23_operand(n, &q, order).unwrap(), &q, 16).unwrap();
        for m in 0..=order {
            let want = CauchyExpansion::basis((n + m) as usize, MultiPoly::constant(qfact(&q, m).recip()));
            assert_eq!(op.coeff((m, 0)), want, "t^{m}");
        }
    }

    #[test]
    fn lemma22_exact() {
        let (l, r) = lemma22_sides(&TopParams::symbolic(rat(1, 2)), 6).unwrap();
        assert_eq!(series_witness(&l, &r), None);
    }

    #[test]
    fn lemma22_with_rational_spectators() {
        let c = |n, d| MultiPoly::constant(rat(n, d));
        let p = TopParams { b0: c(2, 3), s: c(1, 5), t: c(1, 4), v: c(1, 3), q: rat(1, 3) };
        let (l, r) = lemma22_sides(&p, 8).unwrap();
        assert_eq!(series_witness(&l, &r), None);
    }

    #[test]
    fn zhang_wang_example() {
        let r = zhang_wang_check(&rat(1, 7), &rat(1, 5), &rat(1, 4), &rat(1, 3), &rat(1, 6), &rat(1, 2), 8);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn zhang_wang_b_zero_gives_operand() {
        let c = |n, d| MultiPoly::constant(rat(n, d));
        let p = ZwParams { b0: MultiPoly::zero(), s: c(1, 5), t: c(1, 4), v: rat(1, 3), w: c(1, 6), q: rat(1, 2) };
        let (l, r) = zhang_wang_sides(&p, 6).unwrap();
        assert_eq!(l, r);
        assert!(l.coeffs().all(|(d, _)| d.1 == 0));
    }

    #[test]
    fn zhang_wang_symbolic_spectators() {
        let p = ZwParams {
            b0: MultiPoly::one(),
            s: var("s"),
            t: var("t"),
            v: rat(2, 3),
            w: var("w"),
            q: rat(1, 3),
        };
        let (l, r) = zhang_wang_sides(&p, 5).unwrap();
        assert_eq!(series_witness(&l, &r), None);
    }

    #[test]
    fn lemma23_exact() {
        let q = rat(2, 5);
        for n in 0..=3 {
            let (l, r) = lemma23_sides(n, &q, 6).unwrap();
            assert_eq!(series_witness(&l, &r), None, "n = {n}");
        }
    }
}
