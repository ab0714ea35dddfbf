//! Cauchy polynomials, Rogers-Szegő polynomials (one and two variables),
//! continuous q-Hermite and big q-Hermite polynomials, and the linear
//! relations between them.
//!
//! Polynomials in `x, y` use those variable names; the big q-Hermite family
//! keeps its parameter as the symbol `a` unless a value is substituted.

use std::collections::HashMap;
use std::sync::{OnceLock, RwLock};

use num_traits::{One, Zero};

use crate::error::{QrsError, Result};
use crate::qcore::scalar::{binom2, pow_u};
use crate::qcore::{qbinom, ExactScalar, LaurentPoly, MultiPoly};

/// Variable used for `z = e^{iθ}` in Laurent forms.
pub const ZVAR: &str = "z";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FamilyId {
    Cauchy,
    RogersSzego,
    BivariateRs,
    QHermite,
    BigQHermite,
}

impl FamilyId {
    pub const ALL: [FamilyId; 5] =
        [FamilyId::Cauchy, FamilyId::RogersSzego, FamilyId::BivariateRs, FamilyId::QHermite, FamilyId::BigQHermite];

    /// Short name used on the command line.
    pub fn name(self) -> &'static str {
        match self {
            FamilyId::Cauchy => "cauchy",
            FamilyId::RogersSzego => "rs",
            FamilyId::BivariateRs => "brs",
            FamilyId::QHermite => "qhermite",
            FamilyId::BigQHermite => "big-qhermite",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|f| f.name() == s)
    }
}

type MemoKey = (FamilyId, u32, ExactScalar);

fn memo() -> &'static RwLock<HashMap<MemoKey, MultiPoly>> {
    static MEMO: OnceLock<RwLock<HashMap<MemoKey, MultiPoly>>> = OnceLock::new();
    MEMO.get_or_init(|| RwLock::new(HashMap::new()))
}

fn cached(family: FamilyId, n: u32, q: &ExactScalar, build: impl FnOnce() -> MultiPoly) -> MultiPoly {
    let key = (family, n, q.clone());
    if let Some(p) = memo().read().expect("memo poisoned").get(&key) {
        return p.clone();
    }
    let p = build();
    memo().write().expect("memo poisoned").entry(key).or_insert(p).clone()
}

fn gauss(n: u32, k: u32, q: &ExactScalar) -> ExactScalar {
    qbinom(n as i64, k as i64, q)
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

/// `P_n(x,y) = (x-y)(x-qy)...(x-q^{n-1}y)`.
pub fn cauchy_poly(n: u32, q: &ExactScalar) -> MultiPoly {
    cached(FamilyId::Cauchy, n, q, || {
        let x = MultiPoly::var("x");
        let y = MultiPoly::var("y");
        let mut acc = MultiPoly::one();
        let mut qk = ExactScalar::one();
        for _ in 0..n {
            acc = acc.mul_ref(&x.sub_ref(&y.scale(&qk)));
            qk *= q;
        }
        acc
    })
}

/// `h_n(x,y|q) = Σ_k [n,k] P_k(x,y)`.
pub fn brs_poly(n: u32, q: &ExactScalar) -> MultiPoly {
    cached(FamilyId::BivariateRs, n, q, || {
        (0..=n).fold(MultiPoly::zero(), |acc, k| acc.add_ref(&cauchy_poly(k, q).scale(&gauss(n, k, q))))
    })
}

/// `h_n(x|q) = Σ_k [n,k] x^k`.
pub fn rs_poly(n: u32, q: &ExactScalar) -> MultiPoly {
    cached(FamilyId::RogersSzego, n, q, || {
        MultiPoly::from_terms(&["x"], (0..=n).map(|k| (vec![k], gauss(n, k, q))))
    })
}

/// `(c z; q)_k` as a Laurent polynomial in `z`.
fn laurent_poch(c: &MultiPoly, q: &ExactScalar, k: u32) -> LaurentPoly {
    let mut acc = LaurentPoly::one(ZVAR);
    let mut qj = ExactScalar::one();
    for _ in 0..k {
        let factor = LaurentPoly::one(ZVAR).add(&LaurentPoly::monomial(ZVAR, 1, c.scale(&(-&qj))));
        acc = acc.mul(&factor);
        qj *= q;
    }
    acc
}

/// `H_n(x;a|q) = Σ_k [n,k] (az;q)_k z^{n-2k}` with `z = e^{iθ}`.
pub fn big_qhermite_laurent(n: u32, a: &MultiPoly, q: &ExactScalar) -> LaurentPoly {
    let mut acc = LaurentPoly::zero(ZVAR);
    for k in 0..=n {
        let term = laurent_poch(a, q, k)
            .mul(&LaurentPoly::monomial(ZVAR, n as i64 - 2 * k as i64, MultiPoly::constant(gauss(n, k, q))));
        acc = acc.add(&term);
    }
    acc
}

/// `H_n(x|q)` in the variable `z`.
pub fn qhermite_laurent(n: u32, q: &ExactScalar) -> LaurentPoly {
    big_qhermite_laurent(n, &MultiPoly::zero(), q)
}

/// `H_n(x;a|q)` as a polynomial in `x` and the symbol `a`.
pub fn big_qhermite_symbolic(n: u32, q: &ExactScalar) -> MultiPoly {
    cached(FamilyId::BigQHermite, n, q, || {
        big_qhermite_laurent(n, &MultiPoly::var("a"), q)
            .to_cos_poly("x")
            .expect("big q-Hermite Laurent form is symmetric")
    })
}

/// `H_n(x;a|q)` as a polynomial in `x` with `a` replaced by the given value.
pub fn big_qhermite(n: u32, a: &MultiPoly, q: &ExactScalar) -> MultiPoly {
    big_qhermite_symbolic(n, q).subs("a", a)
}

/// `H_n(x|q)` as a polynomial in `x`.
pub fn qhermite(n: u32, q: &ExactScalar) -> MultiPoly {
    cached(FamilyId::QHermite, n, q, || {
        qhermite_laurent(n, q).to_cos_poly("x").expect("q-Hermite Laurent form is symmetric")
    })
}

/// The polynomial of a family; the big q-Hermite family keeps `a` symbolic.
pub fn expand(family: FamilyId, n: u32, q: &ExactScalar) -> MultiPoly {
    match family {
        FamilyId::Cauchy => cauchy_poly(n, q),
        FamilyId::RogersSzego => rs_poly(n, q),
        FamilyId::BivariateRs => brs_poly(n, q),
        FamilyId::QHermite => qhermite(n, q),
        FamilyId::BigQHermite => big_qhermite_symbolic(n, q),
    }
}

/// `H_n(x;a|q)` expanded in `H_{n-k}(x|q)`, built in the Laurent basis with
/// `a` symbolic.
pub fn hxa_via_hx(n: u32, q: &ExactScalar) -> LaurentPoly {
    let a = MultiPoly::var("a");
    let mut acc = LaurentPoly::zero(ZVAR);
    for k in 0..=n {
        let c = a.pow(k).scale(&(gauss(n, k, q) * euler_sign(k, q)));
        acc = acc.add(&qhermite_laurent(n - k, q).scale(&c));
    }
    acc
}

/// `H_n(x|q)` expanded in `H_{n-k}(x;a|q)`, in the Laurent basis.
pub fn hx_via_hxa(n: u32, q: &ExactScalar) -> LaurentPoly {
    let a = MultiPoly::var("a");
    let mut acc = LaurentPoly::zero(ZVAR);
    for k in 0..=n {
        let c = a.pow(k).scale(&gauss(n, k, q));
        acc = acc.add(&big_qhermite_laurent(n - k, &a, q).scale(&c));
    }
    acc
}

/// A combination `Σ c_n f_n` of a polynomial family, stored by index.
pub type Combination = Vec<MultiPoly>;

/// Rewrites `Σ c_n h_n(x|q)` as `Σ d_n h_n(x,y|q)` using
/// `h_n(x|q) = Σ_k [n,k] y^k h_{n-k}(x,y|q)`.
pub fn rs_to_brs(c: &[MultiPoly], q: &ExactScalar) -> Combination {
    transform(c, q, |_, _| ExactScalar::one())
}

/// Inverse of [`rs_to_brs`], via
/// `h_n(x,y|q) = Σ_k [n,k] (-1)^k q^{k(k-1)/2} y^k h_{n-k}(x|q)`.
pub fn brs_to_rs(c: &[MultiPoly], q: &ExactScalar) -> Combination {
    transform(c, q, |k, q| euler_sign(k, q))
}

fn transform(c: &[MultiPoly], q: &ExactScalar, weight: impl Fn(u32, &ExactScalar) -> ExactScalar) -> Combination {
    let y = MultiPoly::var("y");
    let mut out = vec![MultiPoly::zero(); c.len()];
    for (n, cn) in c.iter().enumerate() {
        if cn.is_zero() {
            continue;
        }
        let n = n as u32;
        for k in 0..=n {
            let w = gauss(n, k, q) * weight(k, q);
            let idx = (n - k) as usize;
            out[idx] = out[idx].add_ref(&cn.mul_ref(&y.pow(k)).scale(&w));
        }
    }
    out
}

/// `Σ c_n h_n(x|q)` as a polynomial.
pub fn eval_rs_combination(c: &[MultiPoly], q: &ExactScalar) -> MultiPoly {
    c.iter()
        .enumerate()
        .fold(MultiPoly::zero(), |acc, (n, cn)| acc.add_ref(&cn.mul_ref(&rs_poly(n as u32, q))))
}

/// `Σ c_n h_n(x,y|q)` as a polynomial.
pub fn eval_brs_combination(c: &[MultiPoly], q: &ExactScalar) -> MultiPoly {
    c.iter()
        .enumerate()
        .fold(MultiPoly::zero(), |acc, (n, cn)| acc.add_ref(&cn.mul_ref(&brs_poly(n as u32, q))))
}

/// Both sides of the two relations between `h_n(x|q)` and `h_n(x,y|q)`.
#[derive(Clone, Debug)]
pub struct BivariateRelation {
    /// `h_n(x|q)` and `Σ [n,k] y^k h_{n-k}(x,y|q)`.
    pub forward: (MultiPoly, MultiPoly),
    /// `h_n(x,y|q)` and `Σ [n,k] (-1)^k q^{C(k,2)} y^k h_{n-k}(x|q)`.
    pub inverse: (MultiPoly, MultiPoly),
}

pub fn h_to_bivariate(n: u32, q: &ExactScalar) -> BivariateRelation {
    let mut unit = vec![MultiPoly::zero(); n as usize + 1];
    unit[n as usize] = MultiPoly::one();
    BivariateRelation {
        forward: (rs_poly(n, q), eval_brs_combination(&rs_to_brs(&unit, q), q)),
        inverse: (brs_poly(n, q), eval_rs_combination(&brs_to_rs(&unit, q), q)),
    }
}

/// The coefficient `c_{n,n-2k}(p,q)` of `H_{n-2k}(x|q)` in `H_n(x|p)`.
pub fn change_base_c(n: u32, k: u32, p: &ExactScalar, q: &ExactScalar) -> ExactScalar {
    assert!(2 * k <= n, "change of base index out of range");
    let (n, k) = (n as i64, k as i64);
    let mut acc = ExactScalar::zero();
    for j in 0..=k {
        let mut term = pow_u(p, (k - j) as u64) * pow_u(q, binom2((j + 1) as u64)) * qbinom(n - 2 * k + j, j, q);
        let bracket = qbinom(n, k - j, p) - pow_u(p, (n - 2 * k + 2 * j + 1) as u64) * qbinom(n, k - j - 1, p);
        term *= bracket;
        if j % 2 == 1 {
            term = -term;
        }
        acc += term;
    }
    acc
}

/// `Σ_j c_{n,n-2j}(p,q) H_{n-2j}(x|q)`.
pub fn change_base_c_sum(n: u32, p: &ExactScalar, q: &ExactScalar) -> MultiPoly {
    (0..=n / 2).fold(MultiPoly::zero(), |acc, j| {
        acc.add_ref(&qhermite(n - 2 * j, q).scale(&change_base_c(n, j, p, q)))
    })
}

/// Coefficients `e_m` with `H_n(x;a|p) = Σ_m e_m H_m(x;a|q)`, for
/// `m = 0..=n`, obtained by going through `H(x|p)` and `H(x|q)`.
pub fn change_base_big(n: u32, a: &ExactScalar, p: &ExactScalar, q: &ExactScalar) -> Vec<(u32, ExactScalar)> {
    let mut e = vec![ExactScalar::zero(); n as usize + 1];
    for j in 0..=n {
        let outer = gauss(n, j, p) * euler_sign(j, p) * pow_u(a, j as u64);
        if outer.is_zero() {
            continue;
        }
        let r = n - j;
        for l in 0..=r / 2 {
            let c = &outer * change_base_c(r, l, p, q);
            let s = r - 2 * l;
            for m in 0..=s {
                e[(s - m) as usize] += &c * gauss(s, m, q) * pow_u(a, m as u64);
            }
        }
    }
    e.into_iter().enumerate().map(|(m, c)| (m as u32, c)).collect()
}

/// `Σ_m e_m H_m(x;a|q)` for the coefficients of [`change_base_big`].
pub fn change_base_big_sum(n: u32, a: &ExactScalar, p: &ExactScalar, q: &ExactScalar) -> MultiPoly {
    let av = MultiPoly::constant(a.clone());
    change_base_big(n, a, p, q)
        .into_iter()
        .fold(MultiPoly::zero(), |acc, (m, c)| acc.add_ref(&big_qhermite(m, &av, q).scale(&c)))
}

/// A finite combination `Σ c_k P_k(x,y)` with coefficients free of `x, y`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct CauchyExpansion {
    coeffs: Vec<MultiPoly>,
}

impl CauchyExpansion {
    pub fn new(mut coeffs: Vec<MultiPoly>) -> Self {
        while coeffs.last().is_some_and(MultiPoly::is_zero) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self::default()
    }

    /// `c P_k`.
    pub fn basis(k: usize, c: MultiPoly) -> Self {
        let mut coeffs = vec![MultiPoly::zero(); k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[MultiPoly] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> MultiPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Largest index with a nonzero coefficient.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let len = self.coeffs.len().max(other.coeffs.len());
        Self::new((0..len).map(|k| self.coeff(k).add_ref(&other.coeff(k))).collect())
    }

    pub fn scale(&self, c: &MultiPoly) -> Self {
        Self::new(self.coeffs.iter().map(|x| x.mul_ref(c)).collect())
    }

    /// Expands into the monomial basis in `x, y`.
    pub fn to_monomial(&self, q: &ExactScalar) -> MultiPoly {
        self.coeffs
            .iter()
            .enumerate()
            .fold(MultiPoly::zero(), |acc, (k, c)| acc.add_ref(&c.mul_ref(&cauchy_poly(k as u32, q))))
    }

    /// Recovers the Cauchy coefficients of a polynomial in `x, y`; fails
    /// when the polynomial is not in their span.
    pub fn from_monomial(f: &MultiPoly, q: &ExactScalar) -> Result<Self> {
        let xy = ["x", "y"];
        let top = f.degree_in("x") + f.degree_in("y");
        let mut coeffs = Vec::with_capacity(top as usize + 1);
        for k in 0..=top {
            let part = f.homogeneous_part(&xy, k);
            let c = part.coefficient("x", k);
            if c.degree_in("y") > 0 {
                return Err(QrsError::NotInCauchySpan(format!("degree {k} part depends on y at x^{k}")));
            }
            if part != c.mul_ref(&cauchy_poly(k, q)) {
                return Err(QrsError::NotInCauchySpan(format!("degree {k} part is not a multiple of P_{k}")));
            }
            coeffs.push(c);
        }
        Ok(Self::new(coeffs))
    }
}
