//! Lifting arcs through the smooth model.
//!
//! A vector `t = (t_[r], t_free)` with entries in `xk[[x]]` gives the arc
//! `y'' = y' + d·G(y')·t`, which lies on `V(I)` exactly when `g(t) = 0`.
//! [`make_lift`] fixes `t_free` and solves `g = 0` for `t_[r]` by Newton
//! iteration; [`extract_t`] inverts the map on strict lifts through
//! `t = H(y')·(y'' - y')/d²`. The offset family [`offset_lift`] /
//! [`extract_params`] parametrizes lifts congruent to a strict reference on
//! `t` modulo `x^(2c+1)`. [`oracle_enumerate`] is a brute-force jet
//! enumerator over `F_q` with its own arithmetic.

mod hensel;
mod lift;
mod oracle;
mod search;

pub use hensel::{hensel_solve, HenselOutcome};
pub use lift::{
    extract_params, extract_t, lift_at, lift_batch, make_lift, offset_lift, LiftResult,
};
pub use oracle::{oracle_enumerate, JetSet, ORACLE_BUDGET};
pub use search::{find_strict_reference, ReferenceSearch, SearchStage, SEARCH_NODE_BUDGET};

use thiserror::Error;

use crate::desing::DesingError;
use crate::polyring::PolyError;
use crate::ring::{RingError, Valuation};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArcError {
    #[error("expected {expected} entries, got {got}")]
    Arity { expected: usize, got: usize },
    #[error("entry {index} has order {order}; entries must lie in xA'")]
    NotInMaximalIdeal { index: usize, order: Valuation },
    #[error("target precision {target} exceeds the attainable precision {attainable}")]
    PrecisionExhausted { target: u32, attainable: u32 },
    #[error("Newton iteration stalled at residual order {order} after {iterations} steps")]
    NoProgress { iterations: u32, order: u32 },
    #[error("not a strict lift: ord(y''{index} - y'{index}) {order} is below 2c+1 = {need}")]
    NotStrict {
        index: usize,
        order: Valuation,
        need: u32,
    },
    #[error("not in the offset family: ord(t{index} - t~{index}) {order} is below 2c+1 = {need}")]
    OutOfFamily {
        index: usize,
        order: Valuation,
        need: u32,
    },
    #[error("the arc does not satisfy g(t) = 0: {0}")]
    ResidualNonzero(String),
    #[error("reconstruction mismatch: {0}")]
    Mismatch(String),
    #[error("oracle needs a finite field")]
    FieldNotFinite,
    #[error("oracle length m = {m} is below 2c+1 = {min}")]
    OracleLength { m: u32, min: u32 },
    #[error("enumeration budget exceeded: {cells} free coefficients, at most {budget} allowed")]
    BudgetExceeded { cells: u32, budget: u32 },
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Desing(#[from] DesingError),
}

#[cfg(test)]
mod tests;
