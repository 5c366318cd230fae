//! Exact arithmetic in radical extension towers of the Gaussian rationals.

mod gauss;
mod literal;
mod tower;

pub use gauss::{rational_sqrt, GaussRat};
pub use literal::parse_constant;
pub use tower::{
    arith, collapse_level, extend_cubic, extend_sqrt, ArithOp, Ctx, FieldError, Level, Rep, Tower,
    TowerElem, DEFAULT_MAX_DEPTH,
};
