//! Grossone numbers: finite sums `c·①^e·(ln ①)^m` with rational `e` and
//! `m ∈ {0, 1}`, plus truncated series and the infinigon expansions.

mod coeff;
mod formulas;
mod number;
mod series;
mod text;

pub use coeff::Coeff;
pub use formulas::{
    classify_order, eval_delta_asymptotic, eval_delta_asymptotic_to, eval_one_minus_d2, rho,
    tile_base, tile_count, InfinigonOrder, TileCount,
};
pub use number::{GrossNumber, Term};
pub use series::{
    gross_cos, gross_inverse, gross_ln, gross_sin, gross_sqrt, ln1p, TruncationOrder,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GrossError {
    #[error("product needs (ln go)^2, outside the supported fragment")]
    LogOverflow,
    #[error("series argument {0} is not infinitesimal")]
    NotInfinitesimal(String),
    #[error("{0} is not positive")]
    NotPositive(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("parity of {0} is undecidable")]
    ParityUndecidable(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
}
