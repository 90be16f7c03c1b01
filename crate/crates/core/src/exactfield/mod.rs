//! Exact arithmetic: the constant field K = Q(ζ24), polynomials and rational
//! functions over K, and the two derivation charts.

mod cycnum;
mod expr;
mod poly;
mod ratfn;
pub mod roots;

pub use cycnum::{CycNum, DEGREE, UNITS_MOD_24};
pub use expr::parse_constant;
pub use poly::Poly;
pub use ratfn::{Chart, RatFn};
