//! Basic hypergeometric series `r+1 φ r` expanded as exact truncated series.

use num_traits::{One, Zero};

use super::series::PolySeries;
use crate::error::{QrsError, Result};
use crate::qcore::scalar::pow_u;
use crate::qcore::{ExactScalar, MultiPoly};

/// An upper parameter of a φ-series.
#[derive(Clone, Debug)]
pub enum PhiParam {
    /// `(p;q)_n` with `p` a series (constants are degree-0 series).
    Series(PolySeries),
    /// The ratio `num/den` homogenised against one factor of `den` taken
    /// from the argument: contributes `prod_{k<n} (den - num q^k)`, so that
    /// `den = 0` stays meaningful. The `argument` field must already have
    /// that factor removed.
    Ratio { num: MultiPoly, den: MultiPoly },
}

#[derive(Clone, Debug)]
pub struct PhiSpec {
    pub upper: Vec<PhiParam>,
    pub lower: Vec<PolySeries>,
    pub base: ExactScalar,
    pub argument: PolySeries,
}

impl PhiSpec {
    /// The `r+1 φ r` shape used throughout; other shapes are still summed.
    pub fn is_standard_shape(&self) -> bool {
        self.upper.len() == self.lower.len() + 1
    }
}

/// `Σ_n (upper;q)_n / (q, lower;q)_n · argument^n` through total degree
/// `order` of the series variables.
pub fn phi_series(phi: &PhiSpec, order: u32) -> Result<PolySeries> {
    let q = &phi.base;
    let arg = phi.argument.truncate(order);
    let vars: Vec<&str> = arg.vars().iter().map(String::as_str).collect();
    let one = PolySeries::one(&vars, arg.order());
    let Some(v) = arg.valuation() else {
        return Ok(one);
    };
    if v == 0 {
        return Err(QrsError::ParamOutOfDomain {
            name: "argument".into(),
            reason: "argument has a nonzero constant term, the series does not truncate".into(),
        });
    }
    let mut term = one.clone();
    let mut sum = one.clone();
    let mut n = 1u32;
    while n * v <= arg.order() {
        let qk = pow_u(q, (n - 1) as u64);
        let mut num = arg.clone();
        for p in &phi.upper {
            num = match p {
                PhiParam::Series(s) => num.try_mul(&one.try_sub(&s.scale_scalar(&qk))?)?,
                PhiParam::Ratio { num: a, den: b } => num.scale(&b.sub_ref(&a.scale(&qk))),
            };
        }
        let qn = ExactScalar::one() - pow_u(q, n as u64);
        if qn.is_zero() {
            return Err(QrsError::DivisionByZero(format!("(q;q)_{n} vanishes")));
        }
        let mut den = PolySeries::constant(&vars, arg.order(), MultiPoly::constant(qn));
        for l in &phi.lower {
            den = den.try_mul(&one.try_sub(&l.scale_scalar(&qk))?)?;
        }
        let den_inv = den.try_inv().map_err(|_| {
            QrsError::DivisionByZero(format!("lower parameter factor at n = {n} is not invertible"))
        })?;
        term = term.try_mul(&num)?.try_mul(&den_inv)?;
        sum = sum.try_add(&term)?;
        n += 1;
    }
    Ok(sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fps::euler::cauchy_expand;
    use crate::qcore::rat;

    #[test]
    fn zero_argument_gives_one() {
        let phi = PhiSpec {
            upper: vec![PhiParam::Series(PolySeries::constant(&["t"], 5, MultiPoly::var("y")))],
            lower: vec![],
            base: rat(1, 2),
            argument: PolySeries::zero(&["t"], 5),
        };
        assert_eq!(phi_series(&phi, 5).unwrap(), PolySeries::one(&["t"], 5));
    }

    #[test]
    fn cancelling_parameters_give_cauchy() {
        // 2phi1(y, xs; ys; q, t) at s = 0 is 1phi0(y; q, t).
        let q = rat(1, 3);
        let n = 6;
        let y = MultiPoly::var("y");
        let t = PolySeries::monomial(&["t"], n, (1, 0), MultiPoly::one());
        let phi = PhiSpec {
            upper: vec![
                PhiParam::Series(PolySeries::constant(&["t"], n, y.clone())),
                PhiParam::Series(PolySeries::zero(&["t"], n)),
            ],
            lower: vec![PolySeries::zero(&["t"], n)],
            base: q.clone(),
            argument: t,
        };
        assert_eq!(phi_series(&phi, n).unwrap(), cauchy_expand(&y, &MultiPoly::one(), &q, n));
    }

    #[test]
    fn unit_constant_argument_rejected() {
        let phi = PhiSpec {
            upper: vec![],
            lower: vec![],
            base: rat(1, 2),
            argument: PolySeries::one(&["t"], 3),
        };
        assert!(phi_series(&phi, 3).is_err());
    }
}
