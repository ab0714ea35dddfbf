//! Truncated formal power series in one or two variables, Euler product
//! expansions and basic hypergeometric partial sums.

pub mod coeff;
pub mod euler;
pub mod phi;
pub mod series;

pub use coeff::Coeff;
pub use euler::{
    cauchy_expand, euler_expand, euler_inv_expand, finite_poch_series, inf_poch_inv_series, inf_poch_series,
    SeriesCtx,
};
pub use phi::{phi_series, PhiParam, PhiSpec};
pub use series::{series_inv, series_mul, total, Deg, PolySeries, SeriesJson, TruncSeries};
