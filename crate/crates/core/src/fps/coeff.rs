use std::fmt::Debug;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::qcore::scalar::to_f64;
use crate::qcore::{ExactScalar, MultiPoly};

/// Coefficient ring of a [`TruncSeries`](super::TruncSeries).
pub trait Coeff: Clone + PartialEq + Debug + Send + Sync {
    fn zero_elem() -> Self;
    fn one_elem() -> Self;
    fn is_zero_elem(&self) -> bool;
    fn plus(&self, other: &Self) -> Self;
    fn minus(&self, other: &Self) -> Self;
    fn times(&self, other: &Self) -> Self;
    fn negate(&self) -> Self;
    fn from_scalar(r: &ExactScalar) -> Self;
    /// Multiplicative inverse when it exists in the ring.
    fn try_inv(&self) -> Option<Self>;

    fn scaled(&self, r: &ExactScalar) -> Self {
        self.times(&Self::from_scalar(r))
    }
}

impl Coeff for MultiPoly {
    fn zero_elem() -> Self {
        MultiPoly::zero()
    }
    fn one_elem() -> Self {
        MultiPoly::one()
    }
    fn is_zero_elem(&self) -> bool {
        self.num_terms() == 0
    }
    fn plus(&self, other: &Self) -> Self {
        self.add_ref(other)
    }
    fn minus(&self, other: &Self) -> Self {
        self.sub_ref(other)
    }
    fn times(&self, other: &Self) -> Self {
        self.mul_ref(other)
    }
    fn negate(&self) -> Self {
        self.neg_ref()
    }
    fn from_scalar(r: &ExactScalar) -> Self {
        MultiPoly::constant(r.clone())
    }
    fn try_inv(&self) -> Option<Self> {
        let c = self.as_constant()?;
        (!Zero::is_zero(&c)).then(|| MultiPoly::constant(c.recip()))
    }
    fn scaled(&self, r: &ExactScalar) -> Self {
        self.scale(r)
    }
}

impl Coeff for ExactScalar {
    fn zero_elem() -> Self {
        Zero::zero()
    }
    fn one_elem() -> Self {
        One::one()
    }
    fn is_zero_elem(&self) -> bool {
        Zero::is_zero(self)
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_scalar(r: &ExactScalar) -> Self {
        r.clone()
    }
    fn try_inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Coeff for Complex64 {
    fn zero_elem() -> Self {
        Complex64::new(0.0, 0.0)
    }
    fn one_elem() -> Self {
        Complex64::new(1.0, 0.0)
    }
    fn is_zero_elem(&self) -> bool {
        self.re == 0.0 && self.im == 0.0
    }
    fn plus(&self, other: &Self) -> Self {
        self + other
    }
    fn minus(&self, other: &Self) -> Self {
        self - other
    }
    fn times(&self, other: &Self) -> Self {
        self * other
    }
    fn negate(&self) -> Self {
        -self
    }
    fn from_scalar(r: &ExactScalar) -> Self {
        Complex64::new(to_f64(r), 0.0)
    }
    fn try_inv(&self) -> Option<Self> {
        (!Coeff::is_zero_elem(self)).then(|| self.inv())
    }
}
