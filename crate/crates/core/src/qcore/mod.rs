//! Exact scalars, polynomials, Laurent polynomials and q-Pochhammer symbols.

pub mod laurent;
pub mod pochhammer;
pub mod poly;
pub mod scalar;

use std::collections::{BTreeMap, HashMap};

use num_complex::Complex64;

pub use laurent::LaurentPoly;
pub use pochhammer::{qbinom, qbinom_symbolic, qfact, qpoch, qpoch_scalar};
pub use poly::{MultiPoly, PolyJson};
pub use scalar::{format_rational, int, parse_rational, rat, ExactScalar};

use crate::error::Result;

/// Either an exact or a complex value, as produced by [`poly_eval`].
#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Exact(ExactScalar),
    Complex(Complex64),
}

/// Bindings for [`poly_eval`]: all exact or all complex.
#[derive(Clone, Debug)]
pub enum Bindings {
    Exact(BTreeMap<String, ExactScalar>),
    Complex(HashMap<String, Complex64>),
}

pub fn poly_eval(p: &MultiPoly, bindings: &Bindings) -> Result<Value> {
    match bindings {
        Bindings::Exact(b) => p.eval(b).map(Value::Exact),
        Bindings::Complex(b) => p.eval_complex(b).map(Value::Complex),
    }
}
