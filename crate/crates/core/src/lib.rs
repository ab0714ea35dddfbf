//! Exact and numerical machinery for Rogers-Szegő polynomials, their
//! bivariate extension, continuous (big) q-Hermite polynomials and the
//! q-operator calculus, together with an engine that machine-checks the
//! identities relating them.

pub mod error;
pub mod families;
pub mod fps;
pub mod idverify;
pub mod numeric;
pub mod qcore;
pub mod qops;
pub mod quadrature;
pub mod report;
pub use error::{QrsError, Result};
