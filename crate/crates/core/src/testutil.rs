//! Problems shared by the unit tests.

use crate::desing::{Certificate, Mode, Problem};
use crate::polyring::{Namespaces, Poly, VarSpace};
use crate::ring::{Ctx, Field, Series};

pub fn problem(
    ctx: Ctx,
    n: usize,
    ideal: &[&str],
    f: &[usize],
    minor: &[usize],
    c: Option<u32>,
    jet: &[&str],
) -> Problem {
    let space = VarSpace::new(n);
    let ideal: Vec<Poly> = ideal
        .iter()
        .map(|s| Poly::parse(s, ctx, space, Namespaces::Y).unwrap())
        .collect();
    let jet: Vec<Series> = jet.iter().map(|s| Series::parse(s, ctx).unwrap()).collect();
    Problem {
        ctx,
        n,
        certificate: Certificate::trivial(ctx, space, ideal.len(), f),
        ideal,
        f_idx: f.to_vec(),
        minor_cols: minor.to_vec(),
        c,
        jet,
        jet_prec: ctx.n_work,
        mode: Mode::Dvr,
    }
}

pub fn f5() -> Ctx {
    Ctx::new(Field::prime(5).unwrap(), 40)
}

/// Cusp `Y1^2 - Y2^3` at `(x^3, x^2)`, `c = 4`.
pub fn e1_in(ctx: Ctx) -> Problem {
    problem(
        ctx,
        2,
        &["Y1^2 - Y2^3"],
        &[0],
        &[0],
        Some(4),
        &["x^3", "x^2"],
    )
}

pub fn e1() -> Problem {
    e1_in(Ctx::rational())
}

/// Node `Y1*Y2 - x^6` at `(x^2, x^4)`, `c = 5`.
pub fn e3_in(ctx: Ctx) -> Problem {
    problem(
        ctx,
        2,
        &["Y1*Y2 - x^6"],
        &[0],
        &[0],
        Some(5),
        &["x^2", "x^4"],
    )
}

pub fn e3() -> Problem {
    e3_in(Ctx::rational())
}

/// `Y1 = Y2^2` at `(x^2 + x^5, x)` with the minor in column 2: `a ≠ 0`.
pub fn parabola_in(ctx: Ctx) -> Problem {
    problem(
        ctx,
        2,
        &["Y1 - Y2^2"],
        &[0],
        &[1],
        None,
        &["x^2 + x^5", "x"],
    )
}

/// Cusp at `(x^3 + x^6, x^2)`, `c = 4`: no strict lift exists.
pub fn cusp_beta_in(ctx: Ctx) -> Problem {
    problem(
        ctx,
        2,
        &["Y1^2 - Y2^3"],
        &[0],
        &[0],
        Some(4),
        &["x^3 + x^6", "x^2"],
    )
}

pub fn ser(s: &str) -> Series {
    Series::parse(s, Ctx::rational()).unwrap()
}

pub fn ser_in(s: &str, ctx: Ctx) -> Series {
    Series::parse(s, ctx).unwrap()
}
