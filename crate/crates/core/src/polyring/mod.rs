//! Sparse polynomials in `Y1..Yn, T1..Tn` over series coefficients, and
//! polynomial matrices with determinant and adjugate.

mod matrix;
mod poly;

pub use matrix::{jacobian, PolyMatrix, SeriesMatrix};
pub use poly::{Monomial, Poly};

use std::fmt;

use thiserror::Error;

use crate::ring::RingError;
use crate::text::ParseError;

/// A polynomial variable; indices are 0-based internally and printed 1-based.
/// `x` is never a variable, it lives in the coefficients.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    Y(usize),
    T(usize),
}

impl fmt::Display for Var {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Var::Y(i) => write!(f, "Y{}", i + 1),
            Var::T(i) => write!(f, "T{}", i + 1),
        }
    }
}

/// `n` variables in each of the `Y` and `T` namespaces.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VarSpace {
    n: usize,
}

impl VarSpace {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "a variable space needs at least one Y variable");
        Self { n }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub(crate) fn slot(&self, v: Var) -> usize {
        match v {
            Var::Y(i) => i,
            Var::T(i) => self.n + i,
        }
    }

    pub(crate) fn var_at(&self, slot: usize) -> Var {
        if slot < self.n {
            Var::Y(slot)
        } else {
            Var::T(slot - self.n)
        }
    }

    pub fn ys(&self) -> impl Iterator<Item = Var> {
        (0..self.n).map(Var::Y)
    }

    pub fn ts(&self) -> impl Iterator<Item = Var> {
        (0..self.n).map(Var::T)
    }
}

/// Which namespaces a parsed polynomial may mention.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Namespaces {
    pub y: bool,
    pub t: bool,
}

impl Namespaces {
    pub const Y: Self = Self { y: true, t: false };
    pub const T: Self = Self { y: false, t: true };
    pub const ALL: Self = Self { y: true, t: true };
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown variable {name} at position {pos}")]
    UnknownVariable { name: String, pos: usize },
    #[error("no value supplied for variable {0}")]
    MissingVariable(Var),
    #[error("substitution images live in different variable spaces or fields")]
    NamespaceMismatch,
    #[error(transparent)]
    Ring(#[from] RingError),
}
