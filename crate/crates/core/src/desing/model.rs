use std::collections::BTreeMap;

use super::problem::{validate_problem, Certificate, Problem};
use super::DesingError;
use crate::polyring::{jacobian, Poly, PolyMatrix, SeriesMatrix, Var, VarSpace};
use crate::ring::{Ctx, Series, Valuation};

/// Certificate rescaled so that `d = P(y')` has order exactly `c`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Normalized {
    pub shift: u32,
    pub certificate: Certificate,
    pub p: Poly,
    pub d: Series,
}

/// Scales `N` and the cofactors by `x^(c-e)`.
pub fn normalize_certificate(p: &Problem, e: u32, c: u32) -> Result<Normalized, DesingError> {
    if e >= c {
        return Err(DesingError::OrderTooHigh { e, c });
    }
    let shift = c - e;
    let xs = Series::x_pow(p.ctx, shift);
    let certificate = Certificate {
        n: p.certificate.n.scale(&xs),
        cofactors: p
            .certificate
            .cofactors
            .iter()
            .map(|row| row.iter().map(|q| q.scale(&xs)).collect())
            .collect(),
    };
    let pp = &certificate.n * &p.minor();
    let d = pp.eval(&p.y_prime(), &[])?;
    if d.valuation() != Valuation::Finite(c) {
        return Err(DesingError::IdentityFailed(format!(
            "ord(d) is {}, expected {c}",
            d.valuation()
        )));
    }
    Ok(Normalized {
        shift,
        certificate,
        p: pp,
        d,
    })
}

/// The Jacobian of `f` bordered by unit rows for the non-minor columns.
/// `perm` lists the minor columns first; `det(H) = sign·M`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Border {
    pub h: PolyMatrix,
    pub perm: Vec<usize>,
    pub sign: i64,
}

pub fn build_border(p: &Problem) -> Result<Border, DesingError> {
    let space = p.space();
    let ys: Vec<Var> = space.ys().collect();
    let jac = jacobian(&p.f(), &ys);
    let free = p.free_cols();
    let mut rows: Vec<Vec<Poly>> = (0..jac.rows()).map(|i| jac.row(i).to_vec()).collect();
    for &j in &free {
        rows.push(
            (0..p.n)
                .map(|k| {
                    if k == j {
                        Poly::one(p.ctx, space)
                    } else {
                        Poly::zero(p.ctx, space)
                    }
                })
                .collect(),
        );
    }
    let h = PolyMatrix::from_rows(rows);
    let perm: Vec<usize> = p.minor_cols.iter().chain(&free).copied().collect();
    let inversions = (0..perm.len())
        .flat_map(|i| (i + 1..perm.len()).map(move |j| (i, j)))
        .filter(|&(i, j)| perm[i] > perm[j])
        .count();
    let sign = if inversions % 2 == 0 { 1 } else { -1 };
    let signed_minor = p.minor().scale(&Series::from_ints(p.ctx, &[sign]));
    if !h.det().agrees_with(&signed_minor) {
        return Err(DesingError::IdentityFailed(
            "det(H) differs from the signed minor".into(),
        ));
    }
    Ok(Border { h, perm, sign })
}

/// `G = sign·N·adj(H)`, checked against `GH = HG = P·Id`, and `G(y')`.
pub fn compute_g(
    border: &Border,
    n_norm: &Poly,
    p_poly: &Poly,
    y: &[Series],
) -> Result<(PolyMatrix, SeriesMatrix), DesingError> {
    let h = &border.h;
    let ctx = n_norm.ctx();
    let factor = n_norm.scale(&Series::from_ints(ctx, &[border.sign]));
    let g = h.adjugate().scale(&factor);
    let target = PolyMatrix::identity(ctx, n_norm.space(), h.rows()).scale(p_poly);
    if !g.mul(h).agrees_to(&target, ctx.n_work) || !h.mul(&g).agrees_to(&target, ctx.n_work) {
        return Err(DesingError::IdentityFailed(
            "GH = HG = P*Id does not hold".into(),
        ));
    }
    let gy = g.eval(y, &[])?;
    Ok((g, gy))
}

/// `Y_i ↦ y'_i + d·Σ_j Gy[i][j]·T_j`.
pub fn arc_substitution(
    space: VarSpace,
    y: &[Series],
    d: &Series,
    gy: &SeriesMatrix,
) -> BTreeMap<Var, Poly> {
    (0..space.n())
        .map(|i| {
            let mut img = Poly::constant(space, y[i].clone());
            for j in 0..space.n() {
                let coeff = d * gy.get(i, j);
                img = &img + &Poly::var(d.ctx(), space, Var::T(j)).scale(&coeff);
            }
            (Var::Y(i), img)
        })
        .collect()
}

/// Splits `f(y' + d·Gy·T)` into `d²·a` and `d²·(T_[r] + Q)`.
pub fn taylor_decompose(
    p: &Problem,
    y: &[Series],
    d: &Series,
    gy: &SeriesMatrix,
) -> Result<(Vec<Series>, Vec<Poly>), DesingError> {
    let space = p.space();
    let map = arc_substitution(space, y, d, gy);
    let d2 = d * d;
    let mut a = Vec::new();
    let mut q = Vec::new();
    for (i, fi) in p.f().iter().enumerate() {
        let big_f = fi.subst(&map)?;
        let f0 = big_f.constant_term();
        let ai = f0
            .div_exact(&d2)
            .map_err(|source| DesingError::NotDivisible {
                context: format!("f{}(y')/d^2", i + 1),
                source,
            })?;
        if ai.valuation() == Valuation::Finite(0) {
            return Err(DesingError::OrderViolation { index: i + 1 });
        }
        let rest = &big_f - &Poly::constant(space, f0);
        let qi = &rest
            .div_exact(&d2)
            .map_err(|source| DesingError::NotDivisible {
                context: format!("(F{} - F{}(0))/d^2", i + 1, i + 1),
                source,
            })?
            - &Poly::var(p.ctx, space, Var::T(i));
        if qi.min_t_degree().is_some_and(|k| k < 2) {
            return Err(DesingError::IdentityFailed(format!(
                "Q{} has terms of T-degree below 2",
                i + 1
            )));
        }
        a.push(ai);
        q.push(qi);
    }
    Ok((a, q))
}

/// The constructed data: `C = (A[T]/(g))_{s s'}` together with the map
/// `Y ↦ y' + d·G(y')·T`.
#[derive(Clone, Debug)]
pub struct SmoothModel {
    pub(crate) problem: Problem,
    pub(crate) c: u32,
    pub(crate) e: u32,
    pub(crate) y_prime: Vec<Series>,
    pub(crate) minor: Poly,
    pub(crate) normalized: Normalized,
    pub(crate) border: Border,
    pub(crate) g_mat: PolyMatrix,
    pub(crate) gy: SeriesMatrix,
    pub(crate) hy: SeriesMatrix,
    pub(crate) a: Vec<Series>,
    pub(crate) q: Vec<Poly>,
    pub(crate) eqs: Vec<Poly>,
    pub(crate) dq: PolyMatrix,
    pub(crate) loc_s: Poly,
    pub(crate) loc_s_prime: Poly,
}

fn equations(space: VarSpace, a: &[Series], q: &[Poly]) -> Vec<Poly> {
    a.iter()
        .zip(q)
        .enumerate()
        .map(|(i, (ai, qi))| {
            &(&Poly::constant(space, ai.clone()) + &Poly::var(ai.ctx(), space, Var::T(i))) + qi
        })
        .collect()
}

fn q_jacobian(q: &[Poly]) -> PolyMatrix {
    let vars: Vec<Var> = (0..q.len()).map(Var::T).collect();
    jacobian(q, &vars)
}

fn plus_identity(m: &PolyMatrix, ctx: Ctx, space: VarSpace) -> PolyMatrix {
    let rows = (0..m.rows())
        .map(|i| {
            (0..m.cols())
                .map(|j| {
                    if i == j {
                        m.get(i, j) + &Poly::one(ctx, space)
                    } else {
                        m.get(i, j).clone()
                    }
                })
                .collect()
        })
        .collect();
    PolyMatrix::from_rows(rows)
}

pub fn build_model(p: &Problem) -> Result<SmoothModel, DesingError> {
    let report = validate_problem(p);
    if !report.all_passed() {
        return Err(report.into());
    }
    let (c, e) = (report.c.expect("resolved"), report.e.expect("measured"));
    let ctx = p.ctx;
    let space = p.space();
    let y = p.y_prime();
    let normalized = normalize_certificate(p, e, c)?;
    let border = build_border(p)?;
    let (g_mat, gy) = compute_g(&border, &normalized.certificate.n, &normalized.p, &y)?;
    let hy = border.h.eval(&y, &[])?;
    let (a, q) = taylor_decompose(p, &y, &normalized.d, &gy)?;
    let eqs = equations(space, &a, &q);
    let dq = q_jacobian(&q);
    let loc_s = plus_identity(&dq, ctx, space).det();
    if !loc_s.constant_term().agrees_with(&Series::one(ctx)) {
        return Err(DesingError::IdentityFailed(
            "s does not have constant term 1".into(),
        ));
    }
    let map = arc_substitution(space, &y, &normalized.d, &gy);
    let loc_s_prime = normalized
        .p
        .subst(&map)?
        .div_exact(&normalized.d)
        .map_err(|source| DesingError::NotDivisible {
            context: "P(y' + d*Gy*T)/d".into(),
            source,
        })?;
    if loc_s_prime
        .constant_term()
        .coeff(0)
        .is_none_or(|s| !s.is_one())
    {
        return Err(DesingError::IdentityFailed(
            "s' does not have constant term 1 mod x".into(),
        ));
    }
    Ok(SmoothModel {
        problem: p.clone(),
        c,
        e,
        y_prime: y,
        minor: p.minor(),
        normalized,
        border,
        g_mat,
        gy,
        hy,
        a,
        q,
        eqs,
        dq,
        loc_s,
        loc_s_prime,
    })
}

impl SmoothModel {
    pub fn problem(&self) -> &Problem {
        &self.problem
    }

    pub fn ctx(&self) -> Ctx {
        self.problem.ctx
    }

    pub fn space(&self) -> VarSpace {
        self.problem.space()
    }

    pub fn n(&self) -> usize {
        self.problem.n
    }

    pub fn r(&self) -> usize {
        self.problem.r()
    }

    pub fn param_count(&self) -> usize {
        self.n() - self.r()
    }

    pub fn c(&self) -> u32 {
        self.c
    }

    pub fn e(&self) -> u32 {
        self.e
    }

    /// Precision to which `a`, `Q` and `g` are known: `N_work - 2c`.
    pub fn precision(&self) -> u32 {
        self.ctx().n_work - 2 * self.c
    }

    pub fn y_prime(&self) -> &[Series] {
        &self.y_prime
    }

    pub fn minor(&self) -> &Poly {
        &self.minor
    }

    pub fn shift(&self) -> u32 {
        self.normalized.shift
    }

    pub fn n_norm(&self) -> &Poly {
        &self.normalized.certificate.n
    }

    pub fn certificate(&self) -> &Certificate {
        &self.normalized.certificate
    }

    pub fn p(&self) -> &Poly {
        &self.normalized.p
    }

    pub fn d(&self) -> &Series {
        &self.normalized.d
    }

    pub fn h(&self) -> &PolyMatrix {
        &self.border.h
    }

    pub fn perm(&self) -> &[usize] {
        &self.border.perm
    }

    pub fn sign(&self) -> i64 {
        self.border.sign
    }

    pub fn g_matrix(&self) -> &PolyMatrix {
        &self.g_mat
    }

    pub fn gy(&self) -> &SeriesMatrix {
        &self.gy
    }

    pub fn hy(&self) -> &SeriesMatrix {
        &self.hy
    }

    pub fn a(&self) -> &[Series] {
        &self.a
    }

    pub fn q(&self) -> &[Poly] {
        &self.q
    }

    /// `g_i = a_i + T_i + Q_i`.
    pub fn equations(&self) -> &[Poly] {
        &self.eqs
    }

    /// `(∂Q_i/∂T_j)` for `i, j ≤ r`.
    pub fn dq(&self) -> &PolyMatrix {
        &self.dq
    }

    pub fn loc_s(&self) -> &Poly {
        &self.loc_s
    }

    pub fn loc_s_prime(&self) -> &Poly {
        &self.loc_s_prime
    }

    /// Y columns matched to the free coordinates `T(r+1)..Tn`.
    pub fn free_cols(&self) -> Vec<usize> {
        self.problem.free_cols()
    }

    /// The same model with `Q` replaced; `g` and `∂Q/∂T` follow suit.
    /// Intended for checking that [`verify_model`](super::verify_model)
    /// notices altered data.
    pub fn with_q(mut self, q: Vec<Poly>) -> Self {
        assert_eq!(q.len(), self.r(), "Q must have r components");
        self.eqs = equations(self.space(), &self.a, &q);
        self.dq = q_jacobian(&q);
        self.q = q;
        self
    }
}
