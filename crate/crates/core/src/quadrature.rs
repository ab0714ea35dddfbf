//! Infinite products in double precision, adaptive Gauss-Kronrod quadrature
//! on `[0, π]`, and the weight-function integrals built from them.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{QrsError, Result};
use crate::families::big_qhermite_laurent;
use crate::qcore::scalar::{from_f64, to_f64};
use crate::qcore::MultiPoly;
use crate::report::{IdentityReport, Mode};

type C64 = Complex64;

/// Tail tolerance for truncating `(c;q)_∞`.
pub const PRODUCT_EPS: f64 = 1e-17;
/// Evaluation budget of [`integrate`].
pub const EVAL_BUDGET: usize = 2_000_000;

/// Number of factors kept for base `q`.
pub fn truncation_index(q: f64) -> usize {
    if q == 0.0 {
        return 1;
    }
    (PRODUCT_EPS.ln() / q.abs().ln()).ceil() as usize + 8
}

/// `(c;q)_∞` for a real base with `|q| < 1`.
pub fn poch_inf(c: C64, q: f64) -> Result<C64> {
    if !(q.abs() < 1.0) {
        return Err(QrsError::ParamOutOfDomain { name: "base".into(), reason: format!("|{q}| >= 1") });
    }
    let k = truncation_index(q);
    let mut acc = C64::new(1.0, 0.0);
    let mut qk = 1.0;
    for _ in 0..k {
        acc *= C64::new(1.0, 0.0) - c * qk;
        qk *= q;
        if qk == 0.0 {
            break;
        }
    }
    Ok(acc)
}

/// A product `Π (c_i; base_i)_∞`.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct ProductSpec {
    pub factors: Vec<(C64, f64)>,
}

pub fn inf_product(prod: &ProductSpec) -> Result<C64> {
    prod.factors.iter().try_fold(C64::new(1.0, 0.0), |acc, (c, b)| Ok(acc * poch_inf(*c, *b)?))
}

/// `(c e^{ikθ}; base)_∞` as a function of `θ`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaFactor {
    pub coef: C64,
    pub harmonic: i32,
    pub base: f64,
}

impl ThetaFactor {
    pub fn new(coef: f64, harmonic: i32, base: f64) -> Self {
        Self { coef: C64::new(coef, 0.0), harmonic, base }
    }

    /// The factor and its complex conjugate partner `(c e^{-ikθ}; base)_∞`.
    pub fn pair(coef: f64, harmonic: i32, base: f64) -> [Self; 2] {
        [Self::new(coef, harmonic, base), Self::new(coef, -harmonic, base)]
    }

    fn eval(&self, theta: f64) -> Result<C64> {
        poch_inf(self.coef * C64::from_polar(1.0, self.harmonic as f64 * theta), self.base)
    }
}

/// `prefactor/(2π) · ∫_0^π Π numer / Π denom · extra(θ) dθ`.
#[derive(Clone, Debug)]
pub struct IntegralSpec {
    pub numer: Vec<ThetaFactor>,
    pub denom: Vec<ThetaFactor>,
    pub prefactor: f64,
    pub tol: f64,
}

impl IntegralSpec {
    /// The integrand without the `prefactor/(2π)` constant.
    pub fn integrand(&self, theta: f64) -> Result<C64> {
        let mut v = C64::new(1.0, 0.0);
        for f in &self.numer {
            v *= f.eval(theta)?;
        }
        for f in &self.denom {
            v /= f.eval(theta)?;
        }
        Ok(v)
    }
}

/// Weight `(e^{2iθ}, e^{-2iθ}; q)_∞`.
pub fn weight(q: f64) -> [ThetaFactor; 2] {
    ThetaFactor::pair(1.0, 2, q)
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Clone, Copy, Debug)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    err: f64,
}

fn gk15(f: &mut impl FnMut(f64) -> Result<f64>, a: f64, b: f64) -> Result<Panel> {
    let c = 0.5 * (a + b);
    let h = 0.5 * (b - a);
    let fc = f(c)?;
    let mut kron = WGK[7] * fc;
    let mut gauss = WG[3] * fc;
    for i in 0..7 {
        let dx = h * XGK[i];
        let s = f(c - dx)? + f(c + dx)?;
        kron += WGK[i] * s;
        if i % 2 == 1 {
            gauss += WG[i / 2] * s;
        }
    }
    Ok(Panel { a, b, value: kron * h, err: ((kron - gauss) * h).abs() })
}

/// Result of [`integrate`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quad {
    pub value: f64,
    pub error: f64,
    pub evals: usize,
}

/// Adaptive Gauss-Kronrod (7/15) quadrature of `f` on `[a, b]`: the panel
/// with the largest error estimate is halved until the summed estimate is
/// below `tol`.
pub fn integrate_fn(mut f: impl FnMut(f64) -> Result<f64>, a: f64, b: f64, tol: f64) -> Result<Quad> {
    let mut panels = vec![gk15(&mut f, a, b)?];
    let mut evals = 15;
    loop {
        let err: f64 = panels.iter().map(|p| p.err).sum();
        if err <= tol {
            break;
        }
        if evals + 30 > EVAL_BUDGET {
            return Err(QrsError::Quadrature(format!(
                "no convergence after {evals} evaluations: error estimate {err:.3e} over {} panels, tol {tol:.1e}",
                panels.len()
            )));
        }
        let (i, _) = panels
            .iter()
            .enumerate()
            .max_by(|x, y| x.1.err.total_cmp(&y.1.err))
            .expect("at least one panel");
        let p = panels.swap_remove(i);
        let mid = 0.5 * (p.a + p.b);
        panels.push(gk15(&mut f, p.a, mid)?);
        panels.push(gk15(&mut f, mid, p.b)?);
        evals += 30;
    }
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    Ok(Quad {
        value: panels.iter().map(|p| p.value).sum(),
        error: panels.iter().map(|p| p.err).sum(),
        evals,
    })
}

/// `prefactor/(2π) ∫_0^π` of the integrand, real part.
pub fn integrate(integral: &IntegralSpec) -> Result<Quad> {
    integrate_weighted(integral, |_| C64::new(1.0, 0.0))
}

/// As [`integrate`], with an extra factor in the integrand.
pub fn integrate_weighted(integral: &IntegralSpec, extra: impl Fn(f64) -> C64) -> Result<Quad> {
    let scale = integral.prefactor / (2.0 * PI);
    let tol = if scale != 0.0 { integral.tol / scale.abs() } else { integral.tol };
    let q = integrate_fn(|th| Ok((integral.integrand(th)? * extra(th)).re), 0.0, PI, tol)?;
    Ok(Quad { value: q.value * scale, error: q.error * scale.abs(), evals: q.evals })
}

/// Left and right sides of the Askey-Wilson integral.
pub fn askey_wilson_sides(a: f64, b: f64, c: f64, d: f64, q: f64, tol: f64) -> Result<(f64, f64)> {
    let mut denom = Vec::new();
    for p in [a, b, c, d] {
        denom.extend(ThetaFactor::pair(p, 1, q));
    }
    let integral = IntegralSpec {
        numer: weight(q).to_vec(),
        denom,
        prefactor: poch_inf(C64::new(q, 0.0), q)?.re,
        tol,
    };
    let lhs = integrate(&integral)?.value;
    let r = |x: f64| poch_inf(C64::new(x, 0.0), q).map(|v| v.re);
    let rhs = r(a * b * c * d)? / (r(a * b)? * r(a * c)? * r(a * d)? * r(b * c)? * r(b * d)? * r(c * d)?);
    Ok((lhs, rhs))
}

fn fparams(pairs: &[(&str, f64)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), format!("{v}"))).collect()
}

fn check_domain(pairs: &[(&str, f64)]) -> Result<()> {
    for (name, v) in pairs {
        if !(v.abs() < 1.0) {
            return Err(QrsError::ParamOutOfDomain { name: name.to_string(), reason: format!("|{v}| >= 1") });
        }
    }
    Ok(())
}

pub const AW_REF: &str = "Askey-Wilson integral of the four-parameter weight";

/// Relative error of the quadrature against the closed product.
pub fn askey_wilson_check(a: f64, b: f64, c: f64, d: f64, q: f64, tol: f64) -> IdentityReport {
    let ps = [("a", a), ("b", b), ("c", c), ("d", d), ("q", q)];
    let report = IdentityReport::new("askey-wilson", AW_REF, Mode::Quadrature, 0, fparams(&ps));
    let run = || -> Result<(f64, f64)> {
        check_domain(&ps)?;
        askey_wilson_sides(a, b, c, d, q, tol * 1e-3)
    };
    match run() {
        Ok((lhs, rhs)) => {
            let rel = (lhs - rhs).abs() / rhs.abs().max(f64::MIN_POSITIVE);
            report.numeric_outcome(rel, tol, || format!("quadrature {lhs:.15e} vs product {rhs:.15e}"))
        }
        Err(e) => report.failed(&e.to_string()),
    }
}

/// `H_n(x;a|q)` at `z = e^{iθ}` from the exact Laurent form, with `a` and
/// `q` taken as the exact rationals equal to the given doubles.
pub struct HermiteEval {
    terms: Vec<(i32, f64)>,
}

impl HermiteEval {
    pub fn new(n: u32, a: f64, q: f64) -> Result<Self> {
        let lp = big_qhermite_laurent(n, &MultiPoly::constant(from_f64(a)?), &from_f64(q)?);
        let terms = lp
            .terms()
            .map(|(e, c)| (*e as i32, to_f64(&c.constant_term())))
            .collect();
        Ok(Self { terms })
    }

    pub fn eval(&self, theta: f64) -> C64 {
        self.terms.iter().map(|(e, c)| C64::from_polar(*c, *e as f64 * theta)).sum()
    }
}

/// `(q;q)_∞/(2π) ∫ H_n H_m w(θ)/(ae^{iθ},ae^{-iθ};q)_∞ dθ`.
pub fn ortho_value(n: u32, m: u32, a: f64, q: f64, tol: f64) -> Result<f64> {
    check_domain(&[("a", a), ("q", q)])?;
    let hn = HermiteEval::new(n, a, q)?;
    let hm = HermiteEval::new(m, a, q)?;
    let integral = IntegralSpec {
        numer: weight(q).to_vec(),
        denom: ThetaFactor::pair(a, 1, q).to_vec(),
        prefactor: poch_inf(C64::new(q, 0.0), q)?.re,
        tol,
    };
    Ok(integrate_weighted(&integral, |th| hn.eval(th) * hm.eval(th))?.value)
}

pub const ORTHO_REF: &str = "orthogonality of the continuous big q-Hermite polynomials";

/// Compares the orthogonality integral with `(q;q)_n δ_{nm}`.
pub fn ortho_check(n: u32, m: u32, a: f64, q: f64, tol: f64) -> IdentityReport {
    let mut params = fparams(&[("a", a), ("q", q)]);
    params.insert("n".into(), n.to_string());
    params.insert("m".into(), m.to_string());
    let report = IdentityReport::new("ortho-big", ORTHO_REF, Mode::Quadrature, 0, params);
    match ortho_value(n, m, a, q, tol * 1e-3) {
        Ok(v) => {
            let want = if n == m { crate::numeric::fqfact(q, n) } else { 0.0 };
            let r = (v - want).abs();
            report.numeric_outcome(r, tol, || format!("integral {v:.15e}, expected {want:.15e}"))
        }
        Err(e) => report.failed(&e.to_string()),
    }
}

/// Largest deviation of the orthogonality matrix for `n, m <= nmax`, with
/// the worst entry.
pub fn ortho_matrix_deviation(nmax: u32, a: f64, q: f64, tol: f64) -> Result<(f64, (u32, u32))> {
    let mut worst = (0.0, (0, 0));
    for n in 0..=nmax {
        for m in n..=nmax {
            let v = ortho_value(n, m, a, q, tol)?;
            let want = if n == m { crate::numeric::fqfact(q, n) } else { 0.0 };
            let r = (v - want).abs();
            if r > worst.0 {
                worst = (r, (n, m));
            }
        }
    }
    Ok(worst)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum JhiKind {
    J,
    H,
    I,
}

impl JhiKind {
    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "J" | "j" => Some(JhiKind::J),
            "H" | "h" => Some(JhiKind::H),
            "I" | "i" => Some(JhiKind::I),
            _ => None,
        }
    }
}

/// The integrals of the generating functions against the big q-Hermite
/// weight, prefactors included.
pub fn jhi_eval(kind: JhiKind, p: f64, q: f64, a: f64, t: f64, tol: f64) -> Result<f64> {
    check_domain(&[("p", p), ("q", q), ("a", a), ("t", t)])?;
    let r = |c: f64, base: f64| poch_inf(C64::new(c, 0.0), base).map(|v| v.re);
    let integral = match kind {
        JhiKind::J => IntegralSpec {
            numer: weight(q).to_vec(),
            denom: [ThetaFactor::pair(a, 1, q), ThetaFactor::pair(t, 2, p * p)].concat(),
            prefactor: r(q, q)? * r(a * a * t, p * p)? * r(-t, p)?,
            tol,
        },
        JhiKind::H => IntegralSpec {
            numer: weight(q * q).to_vec(),
            denom: [ThetaFactor::pair(a, 1, q * q), ThetaFactor::pair(t, 1, p)].concat(),
            prefactor: r(q * q, q * q)? * r(a * t, p)? * r(p * t * t, p * p)?,
            tol,
        },
        JhiKind::I => IntegralSpec {
            numer: weight(q).to_vec(),
            denom: [ThetaFactor::pair(a, 1, q), ThetaFactor::pair(t, 1, p)].concat(),
            prefactor: r(q, q)? * r(a * t, p)?,
            tol,
        },
    };
    Ok(integrate(&integral)?.value)
}

/// The four `H_{p,q}(a,t)` cases with closed product values, as
/// `(id, p, q', closed value)` for a base `q`.
pub fn closed_form_cases(q: f64, a: f64, t: f64) -> Result<Vec<(&'static str, f64, f64, f64)>> {
    let r = |c: f64, base: f64| poch_inf(C64::new(c, 0.0), base).map(|v| v.re);
    let q2 = q * q;
    let q4 = q2 * q2;
    let q6 = q4 * q2;
    Ok(vec![
        ("closed-H-qq", q, q, 1.0),
        ("closed-H-mqq", -q, q, 1.0),
        ("closed-H-q2q", q2, q, r(q2 * t * t, q4)?),
        ("closed-H-q2q3", q2, q * q2, r(a * t * t * t * q6, q6)? / r(t * t * q4, q4)?),
    ])
}

pub const CLOSED_REF: &str = "closed product values of the H-integral at special bases";

/// Quadrature of one of the closed-form cases, by id.
pub fn closed_form_check(id: &str, q: f64, a: f64, t: f64, tol: f64) -> Option<IdentityReport> {
    let params = fparams(&[("q", q), ("a", a), ("t", t)]);
    let cases = match closed_form_cases(q, a, t) {
        Ok(c) => c,
        Err(e) => {
            let report = IdentityReport::new(id, CLOSED_REF, Mode::Quadrature, 0, params);
            return Some(report.failed(&e.to_string()));
        }
    };
    let (id, p, qq, want) = cases.into_iter().find(|c| c.0 == id)?;
    let report = IdentityReport::new(id, CLOSED_REF, Mode::Quadrature, 0, params);
    Some(match jhi_eval(JhiKind::H, p, qq, a, t, tol * 1e-3) {
        Ok(v) => report.numeric_outcome((v - want).abs(), tol, || format!("integral {v:.15e} vs product {want:.15e}")),
        Err(e) => report.failed(&e.to_string()),
    })
}

/// Quadrature of `H_{p,q}(a,t)` against each closed product.
pub fn closed_forms_suite(q: f64, a: f64, t: f64, tol: f64) -> Vec<IdentityReport> {
    CLOSED_IDS.iter().filter_map(|id| closed_form_check(id, q, a, t, tol)).collect()
}

pub const CLOSED_IDS: [&str; 4] = ["closed-H-qq", "closed-H-mqq", "closed-H-q2q", "closed-H-q2q3"];

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn products() {
        assert_eq!(poch_inf(C64::new(0.0, 0.0), 0.5).unwrap(), C64::new(1.0, 0.0));
        let v = poch_inf(C64::new(0.5, 0.0), 0.5).unwrap().re;
        assert!((v - 0.288_788_095_086_602_4).abs() < 1e-15, "{v}");
        let c = C64::new(0.3, -0.7);
        let r = poch_inf(c, 0.6).unwrap() / poch_inf(c * 0.6, 0.6).unwrap();
        assert!((r - (1.0 - c)).norm() < 1e-14);
        assert!(poch_inf(c, 1.0).is_err());
    }

    #[test]
    fn product_against_exact_partial_products() {
        use crate::qcore::{qfact, rat};
        let exact = to_f64(&qfact(&rat(1, 2), 60));
        assert!((poch_inf(C64::new(0.5, 0.0), 0.5).unwrap().re - exact).abs() < 1e-15);
    }

    #[test]
    fn truncation_doubling_is_stable() {
        for q in [0.3, -0.5, 0.9] {
            let c = C64::new(0.4, 0.3);
            let k = truncation_index(q);
            let mut twice = C64::new(1.0, 0.0);
            let mut qk = 1.0;
            for _ in 0..2 * k {
                twice *= C64::new(1.0, 0.0) - c * qk;
                qk *= q;
            }
            let once = poch_inf(c, q).unwrap();
            assert!((once - twice).norm() / twice.norm() < 1e-13);
        }
    }

    #[test]
    fn simple_integrals() {
        let one = integrate_fn(|_| Ok(1.0), 0.0, PI, 1e-12).unwrap();
        assert!((one.value - PI).abs() < 1e-12);
        let c2 = integrate_fn(|t| Ok(t.cos().powi(2)), 0.0, PI, 1e-12).unwrap();
        assert!((c2.value - PI / 2.0).abs() < 1e-12);
    }

    #[test]
    fn budget_exhaustion_is_an_error() {
        let r = integrate_fn(|t| Ok(if t < 1.0 { 0.0 } else { 1.0 / (t - 1.0).abs().sqrt() }), 0.0, 2.0, 1e-300);
        assert!(matches!(r, Err(QrsError::Quadrature(_))));
    }

    #[test]
    fn weight_mass_is_one() {
        let (l, r) = askey_wilson_sides(0.0, 0.0, 0.0, 0.0, 0.5, 1e-12).unwrap();
        assert!((l - 1.0).abs() < 1e-10 && (r - 1.0).abs() < 1e-15);
    }

    #[test]
    fn askey_wilson_example() {
        let r = askey_wilson_check(0.3, 0.25, 0.2, 0.1, 0.5, 1e-8);
        assert!(r.passed(), "{r:?}");
    }

    #[test]
    fn three_parameter_askey_wilson() {
        let (a, b, c, q) = (0.3, -0.2, 0.4, 0.45);
        let (l, _) = askey_wilson_sides(a, b, c, 0.0, q, 1e-12).unwrap();
        let r = |x: f64| poch_inf(C64::new(x, 0.0), q).unwrap().re;
        assert!((l - 1.0 / (r(a * b) * r(a * c) * r(b * c))).abs() < 1e-9);
    }

    #[test]
    fn integrands_are_real() {
        let integral = IntegralSpec {
            numer: weight(0.4).to_vec(),
            denom: [ThetaFactor::pair(0.3, 1, 0.4), ThetaFactor::pair(0.2, 2, 0.16)].concat(),
            prefactor: 1.0,
            tol: 1e-10,
        };
        for i in 0..20 {
            let v = integral.integrand(i as f64 * 0.157).unwrap();
            assert!(v.im.abs() < 1e-12);
        }
    }

    #[test]
    fn orthogonality_examples() {
        assert!((ortho_value(0, 0, 0.0, 0.5, 1e-12).unwrap() - 1.0).abs() < 1e-10);
        assert!(ortho_check(2, 3, 0.3, 0.4, 1e-8).passed());
        let v = ortho_value(3, 3, 0.3, 0.4, 1e-12).unwrap();
        assert!((v - 0.6 * 0.84 * 0.936).abs() < 1e-9);
    }

    #[test]
    fn i_and_h_at_equal_bases_are_one() {
        let (q, a, t) = (0.4, 0.2, 0.3);
        assert!((jhi_eval(JhiKind::I, q, q, a, t, 1e-11).unwrap() - 1.0).abs() < 1e-8);
        assert!((jhi_eval(JhiKind::H, q, q, a, t, 1e-11).unwrap() - 1.0).abs() < 1e-7);
        let h = jhi_eval(JhiKind::H, q * q, q, a, t, 1e-11).unwrap();
        let want = poch_inf(C64::new(q * q * t * t, 0.0), q.powi(4)).unwrap().re;
        assert!((h - want).abs() < 1e-7);
    }

    #[test]
    fn closed_forms() {
        for r in closed_forms_suite(0.3, 0.1, 0.2, 1e-7) {
            assert!(r.passed(), "{r:?}");
        }
        for r in closed_forms_suite(0.3, 0.1, 0.0, 1e-7) {
            assert!(r.passed(), "{r:?}");
        }
    }

    #[test]
    fn closed_form_q2q3_at_zero_a() {
        let cases = closed_form_cases(0.3, 0.0, 0.2).unwrap();
        let r = |x: f64, b: f64| poch_inf(C64::new(x, 0.0), b).unwrap().re;
        assert!((cases[3].3 - 1.0 / r(0.04 * 0.0081, 0.0081)).abs() < 1e-15);
    }
}
