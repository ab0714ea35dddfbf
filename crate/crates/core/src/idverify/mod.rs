//! Registry of named identities and the engine that checks them.
//!
//! Every case binds some symbols to values and keeps the rest symbolic.
//! Exact cases compare every coefficient; numeric cases evaluate both sides
//! at seeded random points; quadrature cases integrate.

mod exact;
mod numeric;

use std::collections::{BTreeMap, BTreeSet};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{QrsError, Result};
use crate::qcore::scalar::abs_lt_one;
use crate::qcore::{format_rational, parse_rational, rat, ExactScalar};
use crate::report::{IdentityReport, Mode};

pub use exact::{mehler_brs_sides, rogers_brs_sides};

/// Outcome of a case body before it is wrapped in a report.
#[derive(Clone, Debug)]
pub enum Outcome {
    /// `None` when both sides agree exactly.
    Exact(Option<String>),
    Numeric { residual: f64, tol: f64, witness: String },
    Report(IdentityReport),
}

type CaseFn = fn(&mut Params, u32) -> Result<Outcome>;

/// A registered identity.
#[derive(Clone, Copy)]
pub struct IdentityCase {
    pub id: &'static str,
    pub paper_ref: &'static str,
    pub mode: Mode,
    pub default_order: u32,
    /// Symbols that stay symbolic in exact modes.
    pub symbolic: &'static [&'static str],
    /// Parameters that are bound to values (given or drawn).
    pub bound: &'static [&'static str],
    pub domain: &'static str,
    run: CaseFn,
}

impl std::fmt::Debug for IdentityCase {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("IdentityCase")
            .field("id", &self.id)
            .field("mode", &self.mode)
            .field("default_order", &self.default_order)
            .finish()
    }
}

macro_rules! case {
    ($id:expr, $ref:expr, $mode:ident, $ord:expr, [$($s:expr),*], [$($b:expr),*], $dom:expr, $f:path) => {
        IdentityCase {
            id: $id,
            paper_ref: $ref,
            mode: Mode::$mode,
            default_order: $ord,
            symbolic: &[$($s),*],
            bound: &[$($b),*],
            domain: $dom,
            run: $f,
        }
    };
}

const EXACT_Q: &str = "0 < |q| < 1 rational";
const NUM_DOM: &str = "q in [0.1, 0.6], t in [0.1, 0.4], |a|, |b| in [0.1, 0.5]; |argument| <= 0.9";

static REGISTRY: &[IdentityCase] = &[
    case!("mehler-rs", "Mehler formula for h_n(x|q)", ExactSeries, 8, ["x", "y"], ["q"], EXACT_Q, exact::mehler_rs),
    case!("rogers-rs", "Rogers formula for h_n(x|q)", ExactSeries, 8, ["x"], ["q"], EXACT_Q, exact::rogers_rs),
    case!("linear-rs", "linearization of h_n(x|q) h_m(x|q)", ExactPoly, 6, ["x"], ["q", "n", "m"], EXACT_Q, exact::linear_rs),
    case!(
        "mehler-brs",
        "Mehler formula for h_n(x,y|q) with a 3phi2 sum",
        ExactSeries,
        8,
        ["x", "y", "u", "v"],
        ["q"],
        EXACT_Q,
        exact::mehler_brs
    ),
    case!(
        "mehler-reduction",
        "Mehler formula for h_n(x,y|q) at y = v = 0, u -> y",
        ExactSeries,
        8,
        ["x", "y"],
        ["q"],
        EXACT_Q,
        exact::mehler_reduction
    ),
    case!(
        "phi32-transform",
        "3phi2 transformation, generic and as used for the Poisson kernel",
        NumericComplex,
        0,
        [],
        ["q", "tol"],
        NUM_DOM,
        numeric::phi32_transform
    ),
    case!(
        "nonsym-poisson",
        "nonsymmetric Poisson kernel for H_n(x;a|q)",
        NumericComplex,
        0,
        [],
        ["q", "tol"],
        NUM_DOM,
        numeric::nonsym_poisson
    ),
    case!(
        "lemma-2.2",
        "T(bD_q) on (av;q)/(as,at;q) as a 2phi1",
        ExactSeries,
        8,
        ["s", "t", "v"],
        ["q"],
        EXACT_Q,
        exact::lemma22
    ),
    case!(
        "zhang-wang",
        "T(bD_q) on (av;q)/(as,at,aw;q) as a 3phi2, with its w = 0 reduction",
        ExactSeries,
        8,
        [],
        ["q", "b", "s", "t", "v", "w"],
        EXACT_Q,
        exact::zhang_wang
    ),
    case!(
        "lemma-2.3",
        "E(D_xy) on (yt;q)/(xt;q) P_n(x,y)/(yt;q)_n",
        ExactSeries,
        8,
        ["x", "y"],
        ["q", "n"],
        EXACT_Q,
        exact::lemma23
    ),
    case!(
        "rogers-brs",
        "Rogers formula for h_n(x,y|q) with a 2phi1 sum",
        ExactSeries,
        8,
        ["x", "y"],
        ["q"],
        EXACT_Q,
        exact::rogers_brs
    ),
    case!(
        "rogers-reduction",
        "Rogers formulas for h_n(x,y|q) at y = 0",
        ExactSeries,
        8,
        ["x"],
        ["q"],
        EXACT_Q,
        exact::rogers_reduction
    ),
    case!(
        "rogers-big",
        "Rogers formula for H_n(x;a|q)",
        NumericComplex,
        0,
        [],
        ["q", "tol"],
        NUM_DOM,
        numeric::rogers_big
    ),
    case!(
        "linear-brs-double",
        "linearization of h_n(x,y|q) h_m(x,y|q) as a double sum",
        ExactPoly,
        6,
        ["x", "y"],
        ["q", "n", "m"],
        EXACT_Q,
        exact::linear_brs_double
    ),
    case!(
        "hlm-relation",
        "alternating relation between products and single h_n(x,y|q)",
        ExactPoly,
        8,
        ["x", "y"],
        ["q", "n", "m"],
        EXACT_Q,
        exact::hlm_relation
    ),
    case!(
        "rogers2-brs",
        "second Rogers-type formula for h_n(x,y|q)",
        ExactSeries,
        7,
        ["x", "y"],
        ["q"],
        EXACT_Q,
        exact::rogers2_brs
    ),
    case!(
        "linear-brs-simple",
        "single-index linearization of h_n(x,y|q) h_m(x,y|q)",
        ExactPoly,
        6,
        ["x", "y"],
        ["q", "n", "m"],
        EXACT_Q,
        exact::linear_brs_simple
    ),
    case!(
        "linear-mixed",
        "linearization of h_n(x|q) h_m(x|q) through h_n(x,y|q)",
        ExactPoly,
        6,
        ["x", "y"],
        ["q", "n", "m"],
        EXACT_Q,
        exact::linear_mixed
    ),
    case!(
        "linear-reduction",
        "bivariate linearization formulas at y = 0",
        ExactPoly,
        6,
        ["x"],
        ["q", "n", "m"],
        EXACT_Q,
        exact::linear_reduction
    ),
    case!(
        "awilson-special",
        "h_n(x|q) in terms of h_k(x,y|q)",
        ExactPoly,
        8,
        ["x", "y"],
        ["q", "n"],
        EXACT_Q,
        exact::awilson_special
    ),
    case!(
        "its-inverse",
        "h_n(x,y|q) in terms of h_k(x|q)",
        ExactPoly,
        8,
        ["x", "y"],
        ["q", "n"],
        EXACT_Q,
        exact::its_inverse
    ),
    case!(
        "askey-ismail",
        "Askey-Ismail formula for h_{n+m}(x|q)",
        ExactPoly,
        6,
        ["x"],
        ["q", "n", "m"],
        EXACT_Q,
        exact::askey_ismail
    ),
    case!(
        "mixed-identity",
        "h_{n+m-j-k}(x|q) sum against products of h_n(x,y|q)",
        ExactPoly,
        6,
        ["x", "y"],
        ["q", "n", "m"],
        EXACT_Q,
        exact::mixed_identity
    ),
    case!(
        "cb-hermite",
        "q-Hermite change of base H_n(x|p) in H_k(x|q)",
        ExactPoly,
        8,
        ["x"],
        ["p", "q", "n"],
        "0 < |p|, |q| < 1 rational",
        exact::cb_hermite
    ),
    case!(
        "cb-big",
        "change of base for H_n(x;a|p) in H_k(x;a|q)",
        ExactPoly,
        6,
        ["x"],
        ["p", "q", "a", "n"],
        "0 < |p|, |q| < 1 rational, a rational",
        exact::cb_big
    ),
    case!(
        "hxa-hx",
        "H_n(x;a|q) expanded in H_k(x|q)",
        ExactPoly,
        8,
        ["z", "a"],
        ["q", "n"],
        EXACT_Q,
        exact::hxa_hx
    ),
    case!(
        "hx-hxa",
        "H_n(x|q) expanded in H_k(x;a|q)",
        ExactPoly,
        8,
        ["z", "a"],
        ["q", "n"],
        EXACT_Q,
        exact::hx_hxa
    ),
    case!(
        "gf-its-1",
        "generating function of H_{2n}(x|q) over (q^2;q^2)_n",
        NumericComplex,
        0,
        [],
        ["q", "tol"],
        NUM_DOM,
        numeric::gf_its_1
    ),
    case!(
        "gf-its-2",
        "generating function of H_n(x|q^2) over (q;q)_n",
        NumericComplex,
        0,
        [],
        ["q", "tol"],
        NUM_DOM,
        numeric::gf_its_2
    ),
    case!(
        "gen-big-1",
        "generating function of H_n(x;a|q) with (a^2t;q^2) numerator",
        NumericComplex,
        0,
        [],
        ["q", "tol"],
        NUM_DOM,
        numeric::gen_big_1
    ),
    case!(
        "gen-big-2",
        "generating function of H_n(x;a|q^2) with (at;q) numerator",
        NumericComplex,
        0,
        [],
        ["q", "tol"],
        NUM_DOM,
        numeric::gen_big_2
    ),
    case!(
        "gf-big",
        "generating function of H_n(x;a|q)",
        NumericComplex,
        0,
        [],
        ["q", "tol"],
        NUM_DOM,
        numeric::gf_big
    ),
    case!(
        "ortho-big",
        "orthogonality of H_n(x;a|q)",
        Quadrature,
        0,
        [],
        ["q", "a", "n", "tol"],
        "|a|, |q| < 1",
        numeric::ortho_big
    ),
    case!(
        "askey-wilson",
        "Askey-Wilson integral",
        Quadrature,
        0,
        [],
        ["a", "b", "c", "d", "q", "tol"],
        "|a|, |b|, |c|, |d|, |q| < 1",
        numeric::askey_wilson
    ),
    case!(
        "closed-H-qq",
        "H-integral at p = q equals 1",
        Quadrature,
        0,
        [],
        ["q", "a", "t", "tol"],
        "|q|, |a|, |t| < 1",
        numeric::closed_h
    ),
    case!(
        "closed-H-mqq",
        "H-integral at p = -q equals 1",
        Quadrature,
        0,
        [],
        ["q", "a", "t", "tol"],
        "|q|, |a|, |t| < 1",
        numeric::closed_h
    ),
    case!(
        "closed-H-q2q",
        "H-integral at p = q^2 as (q^2t^2;q^4)",
        Quadrature,
        0,
        [],
        ["q", "a", "t", "tol"],
        "|q|, |a|, |t| < 1",
        numeric::closed_h
    ),
    case!(
        "closed-H-q2q3",
        "H-integral at p = q^2, base q^3 as a product quotient",
        Quadrature,
        0,
        [],
        ["q", "a", "t", "tol"],
        "|q|, |a|, |t| < 1",
        numeric::closed_h
    ),
];

pub fn registry() -> &'static [IdentityCase] {
    REGISTRY
}

pub fn find(id: &str) -> Option<&'static IdentityCase> {
    REGISTRY.iter().find(|c| c.id == id)
}

/// FNV-1a, used to derive a per-case seed that does not depend on the
/// standard library's hasher.
pub fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= b as u64;
        h = h.wrapping_mul(0x0000_0100_0000_01b3);
    }
    h
}

/// Rationals that unspecified exact bases are drawn from.
pub const EXACT_BASES: [(i64, i64); 7] = [(1, 2), (1, 3), (2, 5), (2, 3), (3, 5), (1, 4), (3, 4)];

/// Parameter access for a case body: given values are parsed and checked,
/// missing ones come from defaults or the seeded generator, and everything
/// used is recorded for the report.
pub struct Params<'a> {
    id: &'a str,
    given: &'a BTreeMap<String, String>,
    used: BTreeSet<String>,
    resolved: BTreeMap<String, String>,
    rng: ChaCha8Rng,
}

impl<'a> Params<'a> {
    pub fn new(id: &'a str, given: &'a BTreeMap<String, String>, seed: u64) -> Self {
        Self {
            id,
            given,
            used: BTreeSet::new(),
            resolved: BTreeMap::new(),
            rng: ChaCha8Rng::seed_from_u64(seed ^ fnv1a(id)),
        }
    }

    pub fn id(&self) -> &str {
        self.id
    }

    fn take(&mut self, name: &str) -> Option<&'a str> {
        self.used.insert(name.to_string());
        self.given.get(name).map(String::as_str)
    }

    pub fn record(&mut self, name: &str, value: String) {
        self.resolved.insert(name.to_string(), value);
    }

    fn parse_exact(name: &str, s: &str) -> Result<ExactScalar> {
        parse_rational(s).map_err(|e| {
            if s.trim().parse::<f64>().is_ok() {
                QrsError::ParamOutOfDomain {
                    name: name.to_string(),
                    reason: format!("`{s}` is not exact; write rationals as num/den"),
                }
            } else {
                e
            }
        })
    }

    /// An exact rational with a fixed default.
    pub fn exact(&mut self, name: &str, default: ExactScalar) -> Result<ExactScalar> {
        let v = match self.take(name) {
            Some(s) => Self::parse_exact(name, s)?,
            None => default,
        };
        self.record(name, format_rational(&v));
        Ok(v)
    }

    /// An exact base with `0 < |q| < 1`; drawn from [`EXACT_BASES`] when
    /// not given.
    pub fn exact_base(&mut self, name: &str) -> Result<ExactScalar> {
        let v = match self.take(name) {
            Some(s) => Self::parse_exact(name, s)?,
            None => {
                let (n, d) = EXACT_BASES[self.rng.gen_range(0..EXACT_BASES.len())];
                rat(n, d)
            }
        };
        check_base(name, &v)?;
        self.record(name, format_rational(&v));
        Ok(v)
    }

    /// An exact base with a fixed default.
    pub fn exact_base_or(&mut self, name: &str, default: ExactScalar) -> Result<ExactScalar> {
        let v = self.exact(name, default)?;
        check_base(name, &v)?;
        Ok(v)
    }

    /// A float; rationals `num/den` are accepted as well.
    pub fn float_opt(&mut self, name: &str) -> Result<Option<f64>> {
        let Some(s) = self.take(name) else {
            return Ok(None);
        };
        let v = match s.trim().parse::<f64>() {
            Ok(v) => v,
            Err(_) => crate::qcore::scalar::to_f64(&parse_rational(s)?),
        };
        if !v.is_finite() {
            return Err(QrsError::ParamOutOfDomain { name: name.into(), reason: "not finite".into() });
        }
        self.record(name, format!("{v}"));
        Ok(Some(v))
    }

    pub fn float(&mut self, name: &str, default: f64) -> Result<f64> {
        match self.float_opt(name)? {
            Some(v) => Ok(v),
            None => {
                self.record(name, format!("{default}"));
                Ok(default)
            }
        }
    }

    pub fn nat(&mut self, name: &str) -> Result<Option<u32>> {
        let Some(s) = self.take(name) else {
            return Ok(None);
        };
        let v = s
            .trim()
            .parse::<u32>()
            .map_err(|_| QrsError::Parse(format!("`{s}` is not a nonnegative integer for {name}")))?;
        self.record(name, v.to_string());
        Ok(Some(v))
    }

    pub fn uniform(&mut self, lo: f64, hi: f64) -> f64 {
        self.rng.gen_range(lo..hi)
    }

    /// Magnitude uniform in `[lo, hi)` with a random sign.
    pub fn signed(&mut self, lo: f64, hi: f64) -> f64 {
        let m = self.rng.gen_range(lo..hi);
        if self.rng.gen_bool(0.5) {
            m
        } else {
            -m
        }
    }

    fn finish(&self) -> Result<()> {
        for k in self.given.keys() {
            if !self.used.contains(k) {
                return Err(QrsError::ParamOutOfDomain {
                    name: k.clone(),
                    reason: format!("not a parameter of {}", self.id),
                });
            }
        }
        Ok(())
    }
}

fn check_base(name: &str, v: &ExactScalar) -> Result<()> {
    use num_traits::Zero;
    if v.is_zero() || !abs_lt_one(v) {
        return Err(QrsError::ParamOutOfDomain { name: name.into(), reason: format!("need 0 < |{name}| < 1") });
    }
    Ok(())
}

fn is_domain_error(e: &QrsError) -> bool {
    matches!(
        e,
        QrsError::UnknownIdentity(_) | QrsError::ParamOutOfDomain { .. } | QrsError::GuardViolated(_) | QrsError::Parse(_)
    )
}

/// Runs one case. Parameter and guard problems are errors; anything that
/// goes wrong while building or comparing the two sides is a failed report.
pub fn verify(id: &str, order: u32, params: &BTreeMap<String, String>, seed: u64) -> Result<IdentityReport> {
    let case = find(id).ok_or_else(|| QrsError::UnknownIdentity(id.to_string()))?;
    let mut p = Params::new(case.id, params, seed);
    let outcome = (case.run)(&mut p, order);
    p.finish()?;
    let report = IdentityReport::new(case.id, case.paper_ref, case.mode, order, p.resolved.clone());
    Ok(match outcome {
        Ok(Outcome::Exact(w)) => report.exact_outcome(w),
        Ok(Outcome::Numeric { residual, tol, witness }) => report.numeric_outcome(residual, tol, || witness),
        Ok(Outcome::Report(r)) => IdentityReport { order, params: report.params, paper_ref: report.paper_ref, ..r },
        Err(e) if is_domain_error(&e) => return Err(e),
        Err(e) => report.failed(&e.to_string()),
    })
}

/// Runs every case with default parameters, in parallel; reports come back
/// in registry order. `None` uses each case's default order.
pub fn verify_all(order: Option<u32>, seed: u64) -> Vec<IdentityReport> {
    let empty = BTreeMap::new();
    REGISTRY
        .par_iter()
        .map(|c| {
            let ord = order.unwrap_or(c.default_order);
            verify(c.id, ord, &empty, seed).unwrap_or_else(|e| {
                IdentityReport::new(c.id, c.paper_ref, c.mode, ord, BTreeMap::new()).failed(&e.to_string())
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_plentiful() {
        let ids: BTreeSet<_> = registry().iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), registry().len());
        assert!(registry().len() >= 28);
        for id in ["mehler-brs", "lemma-2.2", "zhang-wang", "lemma-2.3", "closed-H-q2q3", "askey-wilson"] {
            assert!(find(id).is_some(), "{id}");
        }
    }

    #[test]
    fn fnv_is_stable() {
        assert_eq!(fnv1a(""), 0xcbf2_9ce4_8422_2325);
        assert_eq!(fnv1a("a"), 0xaf63_dc4c_8601_ec8c);
    }

    #[test]
    fn unknown_ids_and_parameters_are_errors() {
        let none = BTreeMap::new();
        assert!(matches!(verify("nope", 4, &none, 0), Err(QrsError::UnknownIdentity(_))));
        let mut bad = BTreeMap::new();
        bad.insert("zeta".to_string(), "1/2".to_string());
        assert!(matches!(verify("mehler-rs", 2, &bad, 0), Err(QrsError::ParamOutOfDomain { .. })));
        let mut float = BTreeMap::new();
        float.insert("q".to_string(), "0.5".to_string());
        assert!(matches!(verify("mehler-rs", 2, &float, 0), Err(QrsError::ParamOutOfDomain { .. })));
        let mut big = BTreeMap::new();
        big.insert("q".to_string(), "3/2".to_string());
        assert!(verify("mehler-rs", 2, &big, 0).is_err());
    }

    #[test]
    fn drawn_bases_depend_on_seed_only() {
        let none = BTreeMap::new();
        let a = verify("linear-rs", 2, &none, 7).unwrap();
        let b = verify("linear-rs", 2, &none, 7).unwrap();
        assert_eq!(a, b);
        assert!(a.params.contains_key("q"));
    }
}
