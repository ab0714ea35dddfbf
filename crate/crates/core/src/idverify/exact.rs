//! Exact-series and exact-polynomial cases.

use std::collections::HashMap;

use num_traits::{One, Zero};

use super::{Outcome, Params};
use crate::error::Result;
use crate::families::{
    big_qhermite, big_qhermite_laurent, brs_poly, cauchy_poly, change_base_big_sum, change_base_c, change_base_c_sum,
    hx_via_hxa, hxa_via_hx, qhermite, qhermite_laurent, rs_poly,
};
use crate::fps::{phi_series, PhiParam, PhiSpec, PolySeries, SeriesCtx};
use crate::qcore::scalar::{binom2, pow_u};
use crate::qcore::{qbinom, qfact, qpoch, rat, ExactScalar, MultiPoly};
use crate::qops::{
    e_op_apply, lemma22_sides, lemma23_operand, lemma23_sides, zhang_wang_check, CauchySeriesOperand, TopParams,
};
use crate::report::{poly_witness, series_witness};

fn var(s: &str) -> MultiPoly {
    MultiPoly::var(s)
}

fn one() -> MultiPoly {
    MultiPoly::one()
}

fn c(r: ExactScalar) -> MultiPoly {
    MultiPoly::constant(r)
}

fn gauss(n: u32, k: u32, q: &ExactScalar) -> ExactScalar {
    if k > n {
        ExactScalar::zero()
    } else {
        qbinom(n as i64, k as i64, q)
    }
}

/// `(-1)^k q^{k(k-1)/2}`.
fn euler_sign(k: u32, q: &ExactScalar) -> ExactScalar {
    let v = pow_u(q, binom2(k as u64));
    if k % 2 == 1 {
        -v
    } else {
        v
    }
}

/// `h_n(u,v|q)`.
fn brs_uv(n: u32, q: &ExactScalar) -> MultiPoly {
    brs_poly(n, q).rename("x", "u").rename("y", "v")
}

/// Memoised products of the one- and two-variable Rogers-Szegő
/// polynomials.
struct Products {
    q: ExactScalar,
    brs: HashMap<(u32, u32), MultiPoly>,
    rs: HashMap<(u32, u32), MultiPoly>,
}

impl Products {
    fn new(q: &ExactScalar) -> Self {
        Self { q: q.clone(), brs: HashMap::new(), rs: HashMap::new() }
    }

    fn hh(&mut self, i: u32, j: u32) -> MultiPoly {
        let key = (i.min(j), i.max(j));
        let q = &self.q;
        self.brs.entry(key).or_insert_with(|| brs_poly(i, q).mul_ref(&brs_poly(j, q))).clone()
    }

    fn rr(&mut self, i: u32, j: u32) -> MultiPoly {
        let key = (i.min(j), i.max(j));
        let q = &self.q;
        self.rs.entry(key).or_insert_with(|| rs_poly(i, q).mul_ref(&rs_poly(j, q))).clone()
    }
}

fn ctx1(q: &ExactScalar, order: u32) -> SeriesCtx {
    SeriesCtx::new(&["t"], order, q.clone())
}

fn ctx2(q: &ExactScalar, order: u32) -> SeriesCtx {
    SeriesCtx::new(&["t", "s"], order, q.clone())
}

/// `Σ f(n) t^n` through the context order.
fn uni_series(ctx: &SeriesCtx, mut f: impl FnMut(u32) -> Result<MultiPoly>) -> Result<PolySeries> {
    let mut s = ctx.zero();
    for n in 0..=ctx.order() {
        s.set((n, 0), f(n)?);
    }
    Ok(s)
}

/// `Σ f(n, m) t^n s^m` through total degree `order`.
fn bi_series(ctx: &SeriesCtx, mut f: impl FnMut(u32, u32) -> Result<MultiPoly>) -> Result<PolySeries> {
    let mut s = ctx.zero();
    for total in 0..=ctx.order() {
        for n in 0..=total {
            s.set((n, total - n), f(n, total - n)?);
        }
    }
    Ok(s)
}

fn inv_qf(q: &ExactScalar, n: u32) -> ExactScalar {
    qfact(q, n).recip()
}

fn series_outcome(lhs: &PolySeries, rhs: &PolySeries) -> Outcome {
    Outcome::Exact(series_witness(lhs, rhs))
}

/// Runs `check(n, m)` over the requested index pairs, stopping at the first
/// disagreement.
fn for_pairs(
    p: &mut Params,
    order: u32,
    mut check: impl FnMut(u32, u32) -> Result<Option<String>>,
) -> Result<Outcome> {
    let n = p.nat("n")?;
    let m = p.nat("m")?;
    let ns = n.map_or(0..=order, |v| v..=v);
    let ms = m.map_or(0..=order, |v| v..=v);
    for n in ns {
        for m in ms.clone() {
            if let Some(w) = check(n, m)? {
                return Ok(Outcome::Exact(Some(format!("n = {n}, m = {m}: {w}"))));
            }
        }
    }
    Ok(Outcome::Exact(None))
}

fn for_single(p: &mut Params, order: u32, mut check: impl FnMut(u32) -> Result<Option<String>>) -> Result<Outcome> {
    let ns = p.nat("n")?.map_or(0..=order, |v| v..=v);
    for n in ns {
        if let Some(w) = check(n)? {
            return Ok(Outcome::Exact(Some(format!("n = {n}: {w}"))));
        }
    }
    Ok(Outcome::Exact(None))
}

// ---------------------------------------------------------------------------
// Generating functions

fn mehler_rs_rhs(ctx: &SeriesCtx) -> PolySeries {
    let x = var("x");
    let y = var("y");
    let xy = x.mul_ref(&y);
    ctx.inf_ratio(&[(xy.clone(), (2, 0))], &[(one(), (1, 0)), (x, (1, 0)), (y, (1, 0)), (xy, (1, 0))])
}

pub(super) fn mehler_rs(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let ctx = ctx1(&q, order);
    let lhs = uni_series(&ctx, |n| {
        Ok(rs_poly(n, &q).mul_ref(&rs_poly(n, &q).rename("x", "y")).scale(&inv_qf(&q, n)))
    })?;
    Ok(series_outcome(&lhs, &mehler_rs_rhs(&ctx)))
}

fn rogers_rs_rhs(ctx: &SeriesCtx, prod: &mut Products) -> Result<PolySeries> {
    let q = ctx.q().clone();
    let sum = bi_series(ctx, |n, m| Ok(prod.rr(n, m).scale(&(inv_qf(&q, n) * inv_qf(&q, m)))))?;
    ctx.inf(&var("x"), (1, 1)).try_mul(&sum)
}

pub(super) fn rogers_rs(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let ctx = ctx2(&q, order);
    let mut prod = Products::new(&q);
    let lhs = bi_series(&ctx, |n, m| Ok(rs_poly(n + m, &q).scale(&(inv_qf(&q, n) * inv_qf(&q, m)))))?;
    Ok(series_outcome(&lhs, &rogers_rs_rhs(&ctx, &mut prod)?))
}

/// `(yt, vxt;q)_∞/(t, xt, uxt;q)_∞ · 3φ2(y, xt, v/u; yt, vxt; q, ut)` with
/// the four symbols replaced by the given polynomials.
fn mehler_brs_rhs(ctx: &SeriesCtx, x: &MultiPoly, y: &MultiPoly, u: &MultiPoly, v: &MultiPoly) -> Result<PolySeries> {
    let vx = v.mul_ref(x);
    let ux = u.mul_ref(x);
    let pre = ctx.inf_ratio(
        &[(y.clone(), (1, 0)), (vx.clone(), (1, 0))],
        &[(one(), (1, 0)), (x.clone(), (1, 0)), (ux, (1, 0))],
    );
    let phi = PhiSpec {
        upper: vec![
            PhiParam::Series(ctx.constant(y.clone())),
            PhiParam::Series(ctx.mono(x.clone(), (1, 0))),
            PhiParam::Ratio { num: v.clone(), den: u.clone() },
        ],
        lower: vec![ctx.mono(y.clone(), (1, 0)), ctx.mono(vx, (1, 0))],
        base: ctx.q().clone(),
        argument: ctx.mono(one(), (1, 0)),
    };
    pre.try_mul(&phi_series(&phi, ctx.order())?)
}

/// Both sides of the bivariate Mehler formula with `x, y, u, v` symbolic.
pub fn mehler_brs_sides(q: &ExactScalar, order: u32) -> Result<(PolySeries, PolySeries)> {
    let ctx = ctx1(q, order);
    let lhs = uni_series(&ctx, |n| Ok(brs_poly(n, q).mul_ref(&brs_uv(n, q)).scale(&inv_qf(q, n))))?;
    let rhs = mehler_brs_rhs(&ctx, &var("x"), &var("y"), &var("u"), &var("v"))?;
    Ok((lhs, rhs))
}

/// The left side obtained by applying `E(D_xy)` to
/// `Σ_k P_k(u,v) t^k/(q;q)_k · (yt;q)_∞/(xt;q)_∞ · P_k(x,y)/(yt;q)_k`.
fn mehler_brs_operator_route(q: &ExactScalar, order: u32) -> Result<PolySeries> {
    let ctx = ctx1(q, order);
    let mut operand = ctx.zero();
    for k in 0..=order {
        let w = cauchy_poly(k, q).rename("x", "u").rename("y", "v").scale(&inv_qf(q, k));
        let term = ctx.mono(w, (k, 0)).try_mul(&lemma23_operand(k, q, order)?)?;
        operand = operand.try_add(&term)?;
    }
    let cauchy = CauchySeriesOperand::from_monomial(&operand, q, 2 * order as usize)?;
    e_op_apply(&cauchy, q)
}

pub(super) fn mehler_brs(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let (lhs, rhs) = mehler_brs_sides(&q, order)?;
    if let Some(w) = series_witness(&lhs, &rhs) {
        return Ok(Outcome::Exact(Some(w)));
    }
    let routed = mehler_brs_operator_route(&q, order)?;
    Ok(Outcome::Exact(series_witness(&routed, &lhs).map(|w| format!("operator route: {w}"))))
}

pub(super) fn mehler_reduction(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let ctx = ctx1(&q, order);
    let z = MultiPoly::zero();
    let reduced = mehler_brs_rhs(&ctx, &var("x"), &z, &var("y"), &z)?;
    if let Some(w) = series_witness(&reduced, &mehler_rs_rhs(&ctx)) {
        return Ok(Outcome::Exact(Some(format!("right sides: {w}"))));
    }
    for n in 0..=order {
        let h = brs_poly(n, &q);
        let lhs_term = h.subs_scalar("y", &ExactScalar::zero()).mul_ref(&brs_uv(n, &q).subs_scalar("v", &ExactScalar::zero()));
        let classical = rs_poly(n, &q).mul_ref(&rs_poly(n, &q).rename("x", "u"));
        if lhs_term != classical {
            return Ok(Outcome::Exact(Some(format!("left side term {n} does not reduce"))));
        }
    }
    Ok(Outcome::Exact(None))
}

pub(super) fn lemma22(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let (lhs, rhs) = lemma22_sides(&TopParams::symbolic(q), order)?;
    Ok(series_outcome(&lhs, &rhs))
}

pub(super) fn zhang_wang(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let b = p.exact("b", rat(1, 3))?;
    let s = p.exact("s", rat(1, 5))?;
    let t = p.exact("t", rat(2, 7))?;
    let v = p.exact("v", rat(3, 4))?;
    let w = p.exact("w", rat(1, 6))?;
    Ok(Outcome::Report(zhang_wang_check(&b, &s, &t, &v, &w, &q, order)))
}

pub(super) fn lemma23(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let ns = p.nat("n")?.map_or(0..=order.min(6), |v| v..=v);
    for n in ns {
        let (lhs, rhs) = lemma23_sides(n, &q, order)?;
        if let Some(w) = series_witness(&lhs, &rhs) {
            return Ok(Outcome::Exact(Some(format!("n = {n}: {w}"))));
        }
    }
    Ok(Outcome::Exact(None))
}

/// `(ys;q)_∞/(s, xs, xt;q)_∞ · 2φ1(y, xs; ys; q, t)`.
fn rogers_brs_rhs(ctx: &SeriesCtx, y: &MultiPoly) -> Result<PolySeries> {
    let x = var("x");
    let pre = ctx.inf_ratio(&[(y.clone(), (0, 1))], &[(one(), (0, 1)), (x.clone(), (0, 1)), (x.clone(), (1, 0))]);
    let phi = PhiSpec {
        upper: vec![PhiParam::Series(ctx.constant(y.clone())), PhiParam::Series(ctx.mono(x, (0, 1)))],
        lower: vec![ctx.mono(y.clone(), (0, 1))],
        base: ctx.q().clone(),
        argument: ctx.mono(one(), (1, 0)),
    };
    pre.try_mul(&phi_series(&phi, ctx.order())?)
}

/// Both sides of the bivariate Rogers formula in `(t, s)`.
pub fn rogers_brs_sides(q: &ExactScalar, order: u32) -> Result<(PolySeries, PolySeries)> {
    let ctx = ctx2(q, order);
    let lhs = bi_series(&ctx, |n, m| Ok(brs_poly(n + m, q).scale(&(inv_qf(q, n) * inv_qf(q, m)))))?;
    Ok((lhs, rogers_brs_rhs(&ctx, &var("y"))?))
}

/// `E(D_xy)` applied to `Σ_n t^n/(q;q)_n · (ys;q)_∞/(xs;q)_∞ · P_n/(ys;q)_n`.
fn rogers_brs_operator_route(q: &ExactScalar, order: u32) -> Result<PolySeries> {
    let ctx = ctx2(q, order);
    let gf = ctx.inf_ratio(&[(var("y"), (0, 1))], &[(var("x"), (0, 1))]);
    let ys = ctx.mono(var("y"), (0, 1));
    let mut operand = ctx.zero();
    for n in 0..=order {
        let g = gf.try_mul(&ctx.poch_inv(&ys, n)?)?.scale(&cauchy_poly(n, q));
        let term = ctx.mono(c(inv_qf(q, n)), (n, 0)).try_mul(&g)?;
        operand = operand.try_add(&term)?;
    }
    let cauchy = CauchySeriesOperand::from_monomial(&operand, q, 2 * order as usize)?;
    e_op_apply(&cauchy, q)
}

pub(super) fn rogers_brs(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let (lhs, rhs) = rogers_brs_sides(&q, order)?;
    if let Some(w) = series_witness(&lhs, &rhs) {
        return Ok(Outcome::Exact(Some(w)));
    }
    let routed = rogers_brs_operator_route(&q, order)?;
    Ok(Outcome::Exact(series_witness(&routed, &lhs).map(|w| format!("operator route: {w}"))))
}

fn rogers2_lhs(ctx: &SeriesCtx, y: &MultiPoly) -> Result<PolySeries> {
    let q = ctx.q().clone();
    bi_series(ctx, |n, m| {
        let mut acc = MultiPoly::zero();
        for k in 0..=n.min(m) {
            let w = euler_sign(k, &q) * inv_qf(&q, k) * inv_qf(&q, n - k) * inv_qf(&q, m - k);
            acc = acc.add_ref(&brs_poly(n + m - k, &q).mul_ref(&y.pow(k)).scale(&w));
        }
        Ok(acc)
    })
}

fn rogers2_rhs(ctx: &SeriesCtx, prod: &mut Products) -> Result<PolySeries> {
    let q = ctx.q().clone();
    let sum = bi_series(ctx, |n, m| Ok(prod.hh(n, m).scale(&(inv_qf(&q, n) * inv_qf(&q, m)))))?;
    ctx.inf(&var("x"), (1, 1)).try_mul(&sum)
}

pub(super) fn rogers2_brs(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let ctx = ctx2(&q, order);
    let mut prod = Products::new(&q);
    let lhs = rogers2_lhs(&ctx, &var("y"))?;
    Ok(series_outcome(&lhs, &rogers2_rhs(&ctx, &mut prod)?))
}

pub(super) fn rogers_reduction(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let ctx = ctx2(&q, order);
    let mut prod = Products::new(&q);
    let classical = rogers_rs_rhs(&ctx, &mut prod)?;
    let first = rogers_brs_rhs(&ctx, &MultiPoly::zero())?;
    if let Some(w) = series_witness(&first, &classical) {
        return Ok(Outcome::Exact(Some(format!("2phi1 form at y = 0: {w}"))));
    }
    let lhs = bi_series(&ctx, |n, m| Ok(rs_poly(n + m, &q).scale(&(inv_qf(&q, n) * inv_qf(&q, m)))))?;
    let second = rogers2_lhs(&ctx, &MultiPoly::zero())?.map_coeffs(|c| c.subs_scalar("y", &ExactScalar::zero()));
    if let Some(w) = series_witness(&second, &lhs) {
        return Ok(Outcome::Exact(Some(format!("second form at y = 0: {w}"))));
    }
    let second_rhs = rogers2_rhs(&ctx, &mut prod)?.map_coeffs(|c| c.subs_scalar("y", &ExactScalar::zero()));
    Ok(Outcome::Exact(series_witness(&second_rhs, &classical).map(|w| format!("product side at y = 0: {w}"))))
}

// ---------------------------------------------------------------------------
// Linearization and connection formulas

/// Coefficients of `h_n(x|q) h_m(x|q) = Σ_k [n,k][m,k](q;q)_k x^k h_{n+m-2k}(x|q)`
/// by index `n + m - 2k`.
fn linear_rs_combination(n: u32, m: u32, q: &ExactScalar) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::zero(); (n + m + 1) as usize];
    for k in 0..=n.min(m) {
        let w = gauss(n, k, q) * gauss(m, k, q) * qfact(q, k);
        out[(n + m - 2 * k) as usize] = var("x").pow(k).scale(&w);
    }
    out
}

fn eval_with(comb: &[MultiPoly], f: impl Fn(u32) -> MultiPoly) -> MultiPoly {
    comb.iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .fold(MultiPoly::zero(), |acc, (j, c)| acc.add_ref(&c.mul_ref(&f(j as u32))))
}

pub(super) fn linear_rs(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let mut prod = Products::new(&q);
    for_pairs(p, order, |n, m| {
        let rhs = eval_with(&linear_rs_combination(n, m, &q), |j| rs_poly(j, &q));
        Ok(poly_witness("product", &prod.rr(n, m), &rhs))
    })
}

/// Both sides of the double-sum linearization, with the products on the
/// right taken from `prod_fn`.
fn cor32_sides(
    n: u32,
    m: u32,
    q: &ExactScalar,
    h: &impl Fn(u32) -> MultiPoly,
    mut prod_fn: impl FnMut(u32, u32) -> MultiPoly,
    y: &MultiPoly,
) -> Result<(MultiPoly, MultiPoly)> {
    let mut lhs = MultiPoly::zero();
    let mut rhs = MultiPoly::zero();
    for k in 0..=n {
        let yk = qpoch(y, q, k as i64)?.scale(&gauss(n, k, q));
        for l in 0..=m {
            let pl = cauchy_poly(l, q).subs("y", y).scale(&gauss(m, l, q));
            let base = yk.mul_ref(&pl);
            lhs = lhs.add_ref(&base.mul_ref(&h(n + m - k - l)));
            rhs = rhs.add_ref(&base.mul_ref(&prod_fn(n - k, m - l)).scale(&pow_u(q, (k * l) as u64)));
        }
    }
    Ok((lhs, rhs))
}

/// Coefficients of the single-index bivariate linearization by index
/// `n + m - 2l - k`.
fn cor34_combination(n: u32, m: u32, q: &ExactScalar) -> Vec<MultiPoly> {
    let mut out = vec![MultiPoly::zero(); (n + m + 1) as usize];
    let top = n.min(m);
    for l in 0..=top {
        for k in 0..=top - l {
            let w = gauss(m, l, q)
                * gauss(n, l, q)
                * gauss(m - l, k, q)
                * gauss(n - l, k, q)
                * qfact(q, k)
                * qfact(q, l)
                * euler_sign(k, q);
            if w.is_zero() {
                continue;
            }
            let idx = (n + m - 2 * l - k) as usize;
            let term = var("x").pow(l).mul_ref(&var("y").pow(k)).scale(&w);
            out[idx] = out[idx].add_ref(&term);
        }
    }
    out
}

pub(super) fn linear_brs_double(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let mut prod = Products::new(&q);
    let h = |j| brs_poly(j, &q);
    for_pairs(p, order, |n, m| {
        let (lhs, rhs) = cor32_sides(n, m, &q, &h, |i, j| prod.hh(i, j), &var("y"))?;
        if let Some(w) = poly_witness("double sum", &lhs, &rhs) {
            return Ok(Some(w));
        }
        // The products on the right rewritten by the single-index formula.
        let (_, rhs_lin) =
            cor32_sides(n, m, &q, &h, |i, j| eval_with(&cor34_combination(i, j, &q), |k| brs_poly(k, &q)), &var("y"))?;
        Ok(poly_witness("double sum with linearized products", &lhs, &rhs_lin))
    })
}

pub(super) fn hlm_relation(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let mut prod = Products::new(&q);
    for_pairs(p, order, |n, m| {
        let mut acc = MultiPoly::zero();
        for k in 0..=n.min(m) {
            let w = gauss(n, k, &q) * gauss(m, k, &q) * qfact(&q, k) * euler_sign(k, &q);
            let a = var("x").pow(k).mul_ref(&prod.hh(n - k, m - k));
            let b = var("y").pow(k).mul_ref(&brs_poly(n + m - k, &q));
            acc = acc.add_ref(&a.sub_ref(&b).scale(&w));
        }
        Ok(poly_witness("alternating sum", &acc, &MultiPoly::zero()))
    })
}

pub(super) fn linear_brs_simple(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let mut prod = Products::new(&q);
    for_pairs(p, order, |n, m| {
        let rhs = eval_with(&cor34_combination(n, m, &q), |j| brs_poly(j, &q));
        Ok(poly_witness("product", &prod.hh(n, m), &rhs))
    })
}

/// `Σ_k [n,k] y^k h_{n-k}(x,y|q)`.
fn awilson_sum(n: u32, q: &ExactScalar) -> MultiPoly {
    (0..=n).fold(MultiPoly::zero(), |acc, k| {
        acc.add_ref(&var("y").pow(k).mul_ref(&brs_poly(n - k, q)).scale(&gauss(n, k, q)))
    })
}

/// Left and right of the mixed linearization.
fn cor35_sides(n: u32, m: u32, q: &ExactScalar) -> (MultiPoly, MultiPoly) {
    let lhs = eval_with(&linear_rs_combination(n, m, q), |j| rs_poly(j, q));
    let rhs = awilson_sum(n, q).mul_ref(&awilson_sum(m, q));
    (lhs, rhs)
}

pub(super) fn linear_mixed(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    for_pairs(p, order, |n, m| {
        let (lhs, rhs) = cor35_sides(n, m, &q);
        Ok(poly_witness("mixed product", &lhs, &rhs))
    })
}

pub(super) fn linear_reduction(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let zero = ExactScalar::zero();
    let mut prod = Products::new(&q);
    for_pairs(p, order, |n, m| {
        let classical = eval_with(&linear_rs_combination(n, m, &q), |j| rs_poly(j, &q));
        let simple = eval_with(&cor34_combination(n, m, &q), |j| brs_poly(j, &q)).subs_scalar("y", &zero);
        if let Some(w) = poly_witness("single-index form at y = 0", &simple, &classical) {
            return Ok(Some(w));
        }
        let (mixed_l, mixed_r) = cor35_sides(n, m, &q);
        if let Some(w) = poly_witness("mixed form at y = 0", &mixed_r.subs_scalar("y", &zero), &prod.rr(n, m)) {
            return Ok(Some(w));
        }
        if let Some(w) = poly_witness("mixed form left side", &mixed_l, &classical) {
            return Ok(Some(w));
        }
        // Double-sum form at y = 0 with its products replaced by the
        // classical linearization.
        let h = |j| rs_poly(j, &q);
        let (lhs, rhs) = cor32_sides(
            n,
            m,
            &q,
            &h,
            |i, j| eval_with(&linear_rs_combination(i, j, &q), |k| rs_poly(k, &q)),
            &MultiPoly::zero(),
        )?;
        Ok(poly_witness("double-sum form at y = 0", &lhs, &rhs))
    })
}

pub(super) fn awilson_special(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    for_single(p, order, |n| Ok(poly_witness("expansion", &rs_poly(n, &q), &awilson_sum(n, &q))))
}

pub(super) fn its_inverse(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    for_single(p, order, |n| {
        let rhs = (0..=n).fold(MultiPoly::zero(), |acc, k| {
            acc.add_ref(&var("y").pow(k).mul_ref(&rs_poly(n - k, &q)).scale(&(gauss(n, k, &q) * euler_sign(k, &q))))
        });
        Ok(poly_witness("expansion", &brs_poly(n, &q), &rhs))
    })
}

/// Scalar weight of `x^k h_{n-k} h_{m-k}` in the Askey-Ismail formula.
fn askey_ismail_weight(n: u32, m: u32, k: u32, q: &ExactScalar) -> ExactScalar {
    gauss(n, k, q) * gauss(m, k, q) * qfact(q, k) * euler_sign(k, q)
}

/// `Σ_k [n,k][m,k](q;q)_k q^{C(k,2)} (-x)^k f(n-k, m-k)`.
fn askey_ismail_rhs(n: u32, m: u32, q: &ExactScalar, mut f: impl FnMut(u32, u32) -> MultiPoly) -> MultiPoly {
    (0..=n.min(m)).fold(MultiPoly::zero(), |acc, k| {
        acc.add_ref(&var("x").pow(k).mul_ref(&f(n - k, m - k)).scale(&askey_ismail_weight(n, m, k, q)))
    })
}

/// Both sides of the identity mixing `h(x|q)` and products of `h(x,y|q)`.
fn mixed_sides(n: u32, m: u32, q: &ExactScalar, prod: &mut Products) -> (MultiPoly, MultiPoly) {
    let mut lhs = MultiPoly::zero();
    let my = var("y").scale(&-ExactScalar::one());
    for j in 0..=n {
        for k in 0..=m {
            let w = gauss(n, j, q) * gauss(m, k, q) * pow_u(q, binom2(j as u64) + binom2(k as u64));
            lhs = lhs.add_ref(&my.pow(j + k).mul_ref(&rs_poly(n + m - j - k, q)).scale(&w));
        }
    }
    let rhs = askey_ismail_rhs(n, m, q, |i, j| prod.hh(i, j));
    (lhs, rhs)
}

pub(super) fn askey_ismail(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let zero = ExactScalar::zero();
    let mut prod = Products::new(&q);
    for_pairs(p, order, |n, m| {
        let rhs = askey_ismail_rhs(n, m, &q, |i, j| prod.rr(i, j));
        if let Some(w) = poly_witness("expansion", &rs_poly(n + m, &q), &rhs) {
            return Ok(Some(w));
        }
        let (ml, mr) = mixed_sides(n, m, &q, &mut prod);
        if let Some(w) = poly_witness("mixed identity at y = 0, left", &ml.subs_scalar("y", &zero), &rs_poly(n + m, &q)) {
            return Ok(Some(w));
        }
        if let Some(w) = poly_witness("mixed identity at y = 0, right", &mr.subs_scalar("y", &zero), &rhs) {
            return Ok(Some(w));
        }
        // Composition with the linearization, in the formal basis
        // x^r h_{n+m-2r}: must collapse to h_{n+m}.
        for r in 0..=n.min(m) {
            let mut acc = ExactScalar::zero();
            for k in 0..=r {
                let j = r - k;
                acc += askey_ismail_weight(n, m, k, &q)
                    * gauss(n - k, j, &q)
                    * gauss(m - k, j, &q)
                    * qfact(&q, j);
            }
            let want = if r == 0 { ExactScalar::one() } else { ExactScalar::zero() };
            if acc != want {
                return Ok(Some(format!(
                    "inverse composition: coefficient of x^{r} h_{} is {acc}, expected {want}",
                    n + m - 2 * r
                )));
            }
        }
        Ok(None)
    })
}

pub(super) fn mixed_identity(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    let mut prod = Products::new(&q);
    for_pairs(p, order, |n, m| {
        let (lhs, rhs) = mixed_sides(n, m, &q, &mut prod);
        Ok(poly_witness("identity", &lhs, &rhs))
    })
}

// ---------------------------------------------------------------------------
// q-Hermite families

pub(super) fn cb_hermite(p: &mut Params, order: u32) -> Result<Outcome> {
    let pp = p.exact_base_or("p", rat(1, 3))?;
    let q = p.exact_base_or("q", rat(1, 2))?;
    let spot = change_base_c(2, 1, &pp, &q);
    if spot != &pp - &q {
        return Ok(Outcome::Exact(Some(format!("c_(2,0) = {spot}, expected p - q"))));
    }
    for_single(p, order, |n| Ok(poly_witness("change of base", &change_base_c_sum(n, &pp, &q), &qhermite(n, &pp))))
}

pub(super) fn cb_big(p: &mut Params, order: u32) -> Result<Outcome> {
    let pp = p.exact_base_or("p", rat(1, 3))?;
    let q = p.exact_base_or("q", rat(1, 2))?;
    let a = p.exact("a", rat(1, 4))?;
    let av = c(a.clone());
    for_single(p, order, |n| {
        Ok(poly_witness("change of base", &change_base_big_sum(n, &a, &pp, &q), &big_qhermite(n, &av, &pp)))
    })
}

pub(super) fn hxa_hx(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    for_single(p, order, |n| {
        let lhs = big_qhermite_laurent(n, &var("a"), &q);
        let rhs = hxa_via_hx(n, &q);
        Ok((lhs != rhs).then(|| format!("Laurent forms differ: {:?}", lhs.add(&rhs.scale(&c(-ExactScalar::one()))))))
    })
}

pub(super) fn hx_hxa(p: &mut Params, order: u32) -> Result<Outcome> {
    let q = p.exact_base("q")?;
    for_single(p, order, |n| {
        let lhs = qhermite_laurent(n, &q);
        let rhs = hx_via_hxa(n, &q);
        Ok((lhs != rhs).then(|| format!("Laurent forms differ: {:?}", lhs.add(&rhs.scale(&c(-ExactScalar::one()))))))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::idverify::verify;
    use crate::report::{IdentityReport, Mode, Status};
    use std::collections::BTreeMap;

    fn q_param(q: &str) -> BTreeMap<String, String> {
        [("q".to_string(), q.to_string())].into_iter().collect()
    }

    #[test]
    fn mehler_first_coefficient() {
        let q = rat(2, 5);
        let (lhs, rhs) = mehler_brs_sides(&q, 3).unwrap();
        let x = var("x");
        let y = var("y");
        let want = one().add_ref(&x).sub_ref(&y).mul_ref(&one().add_ref(&var("u")).sub_ref(&var("v")));
        // (q;q)_1 times the t^1 coefficient
        let scale = ExactScalar::one() - &q;
        assert_eq!(lhs.coeff((1, 0)).scale(&scale), want);
        assert_eq!(rhs.coeff((1, 0)).scale(&scale), want);
    }

    #[test]
    fn mehler_passes_exactly() {
        let r = verify("mehler-brs", 5, &q_param("2/5"), 0).unwrap();
        assert_eq!(r.status, Status::ExactPass, "{r:?}");
    }

    #[test]
    fn rogers_first_coefficient() {
        let q = rat(1, 3);
        let (lhs, rhs) = rogers_brs_sides(&q, 1).unwrap();
        let want = one().add_ref(&var("x")).sub_ref(&var("y")).scale(&rat(3, 2));
        assert_eq!(lhs.coeff((1, 0)), want);
        assert_eq!(rhs.coeff((1, 0)), want);
    }

    #[test]
    fn sabotaged_coefficient_is_caught() {
        let q = rat(1, 2);
        let (lhs, mut rhs) = mehler_brs_sides(&q, 4).unwrap();
        let bumped = rhs.coeff((3, 0)).add_ref(&var("u").scale(&rat(1, 1000)));
        rhs.set((3, 0), bumped);
        let w = series_witness(&lhs, &rhs).expect("perturbation must be detected");
        assert!(w.contains("t^3"), "{w}");
        let r = IdentityReport::new("mehler-brs", "", Mode::ExactSeries, 4, BTreeMap::new()).exact_outcome(Some(w));
        assert_eq!(r.status, Status::Fail);
    }

    #[test]
    fn small_orders_of_every_exact_case_pass() {
        for case in crate::idverify::registry().iter().filter(|c| c.mode.is_exact()) {
            let r = verify(case.id, 3, &q_param("1/3"), 0);
            match r {
                Ok(r) => assert!(r.passed(), "{r:?}"),
                Err(e) => {
                    // cb cases take q but it must stay a valid base
                    panic!("{}: {e}", case.id)
                }
            }
        }
    }

    #[test]
    fn change_of_base_at_negative_p() {
        let params: BTreeMap<String, String> =
            [("p", "-2/5"), ("q", "2/5")].iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let r = verify("cb-hermite", 8, &params, 0).unwrap();
        assert_eq!(r.status, Status::ExactPass, "{r:?}");
    }

    #[test]
    fn truncation_monotone() {
        let q = rat(1, 2);
        let (l6, _) = rogers_brs_sides(&q, 6).unwrap();
        let (l4, r4) = rogers_brs_sides(&q, 4).unwrap();
        assert_eq!(l6.truncate(4), l4);
        assert_eq!(series_witness(&l4, &r4), None);
    }
}
