//! Input validation and the explicit smooth model.
//!
//! From `B = A[Y]/I`, a subsystem `f` with a Jacobian minor `M`, an element
//! `N` of `((f) : I)` and a jet `y'` with `ord(NM(y')) = e < c`, the model
//! consists of:
//!
//! * the bordered Jacobian `H` and `G = N·adj(H)`, so `GH = HG = P·Id`
//!   with `P = NM`;
//! * `d = P(y')` of order exactly `c` (after scaling `N` by a power of `x`);
//! * `a = f(y')/d²` and `Q` with `f(y' + d·G(y')·T) = d²(a + T_[r] + Q)`;
//! * the equations `g = a + T_[r] + Q` and the localizations `s`, `s'`.
//!
//! `T1..Tr` pair with the equations and `T(r+1)..Tn` are the free
//! coordinates, matched to the non-minor `Y` columns in increasing order.

mod model;
mod problem;
mod verify;

pub use model::{
    arc_substitution, build_border, build_model, compute_g, normalize_certificate,
    taylor_decompose, Border, Normalized, SmoothModel,
};
pub use problem::{
    validate_problem, Certificate, Check, FailureKind, Mode, Problem, ValidationReport,
    CHECK_COFACTOR, CHECK_JET, CHECK_ORDER,
};
pub use verify::{verify_model, VerifyReport};

use thiserror::Error;

use crate::polyring::PolyError;
use crate::ring::RingError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DesingError {
    #[error("invalid problem: {message}")]
    Invalid { kind: FailureKind, message: String },
    #[error("order condition violated: e = {e} is not below c = {c}")]
    OrderTooHigh { e: u32, c: u32 },
    #[error("exact division failed in {context}: {source}")]
    NotDivisible { context: String, source: RingError },
    #[error("a{index} has order 0; expected a in xA^r")]
    OrderViolation { index: usize },
    #[error("construction identity failed: {0}")]
    IdentityFailed(String),
    #[error(transparent)]
    Poly(#[from] PolyError),
}

impl DesingError {
    /// Exit-code class: structural problems versus certificate/order
    /// failures. Internal identity failures count as the latter.
    pub fn is_structural(&self) -> bool {
        matches!(
            self,
            DesingError::Invalid {
                kind: FailureKind::Structural,
                ..
            }
        )
    }
}

#[cfg(test)]
mod tests;
