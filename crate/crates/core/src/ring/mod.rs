//! Exact scalars and the truncated power-series kernel for `A = k[x]_(x)`
//! and its completion `k[[x]]`.

mod scalar;
mod series;

pub use scalar::{Field, Scalar};
pub use series::{Ctx, Series, Valuation};

use thiserror::Error;

use crate::text::ParseError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RingError {
    #[error("field mismatch: {left} vs {right}")]
    FieldMismatch { left: Field, right: Field },
    #[error("series is not a unit")]
    NotAUnit,
    #[error("not divisible: order {order} below divisor order {divisor_order}")]
    NotDivisible { order: u32, divisor_order: u32 },
    #[error("precision exhausted")]
    PrecisionExhausted,
    #[error("division by zero")]
    DivisionByZero,
    #[error("{0} is not a prime below 2^31")]
    InvalidModulus(u32),
    #[error(transparent)]
    Parse(#[from] ParseError),
}
