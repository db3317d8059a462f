//! Exact arc lifting over the discrete valuation ring `A = k[x]_(x)`.
//!
//! Given an ideal `I ⊂ A[Y]`, a subsystem `f` with a Jacobian minor `M`, a
//! certificate `N` with `N·I ⊂ (f)` and a jet `y'` known modulo `x^(2c+1)`,
//! [`desing`] builds a standard smooth `A`-algebra through which every arc
//! extending the jet factors, and [`arcs`] lifts, extracts and parametrizes
//! those arcs by Newton iteration.

pub mod arcs;
pub mod cli;
pub mod desing;
pub mod polyring;
pub mod ring;
pub mod rng;
pub mod text;

#[cfg(test)]
mod testutil;
