use std::collections::BTreeMap;
use std::fmt;

use super::model::SmoothModel;
use super::problem::Check;
use crate::polyring::{Poly, PolyMatrix, Var};
use crate::ring::{Series, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
}

impl VerifyReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "{}: {verdict} ({})", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn check(name: &'static str, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        passed,
        detail: detail.into(),
    }
}

/// Re-derives every identity of the model from its stored pieces by direct
/// multiplication, without reusing any derived intermediate.
pub fn verify_model(m: &SmoothModel) -> VerifyReport {
    let ctx = m.ctx();
    let space = m.space();
    let n = m.n();
    let r = m.r();
    let nw = ctx.n_work;
    let mut checks = Vec::new();

    let p_id = PolyMatrix::identity(ctx, space, n).scale(m.p());
    let gh = m.g_matrix().mul(m.h()).agrees_to(&p_id, nw);
    let hg = m.h().mul(m.g_matrix()).agrees_to(&p_id, nw);
    checks.push(check(
        "GH = HG = P*Id",
        gh && hg,
        format!("GH {gh}, HG {hg}"),
    ));

    let gy_ok = m
        .g_matrix()
        .eval(m.y_prime(), &[])
        .map(|g| (0..n).all(|i| (0..n).all(|j| g.get(i, j).agrees_with(m.gy().get(i, j)))))
        .unwrap_or(false);
    checks.push(check("Gy = G(y')", gy_ok, ""));

    let d_ord = m.d().valuation();
    checks.push(check(
        "ord(d) = c",
        d_ord == Valuation::Finite(m.c())
            && m.p()
                .eval(m.y_prime(), &[])
                .is_ok_and(|v| v.agrees_with(m.d())),
        format!("ord(d) {d_ord}, c = {}", m.c()),
    ));

    // Y_i -> y'_i + sum_j (d*Gy_ij) T_j, built term by term.
    let mut subst = BTreeMap::new();
    for i in 0..n {
        let mut img = Poly::constant(space, m.y_prime()[i].clone());
        for j in 0..n {
            let coeff = m.d().clone() * m.gy().get(i, j).clone();
            img = img + Poly::var(ctx, space, Var::T(j)).scale(&coeff);
        }
        subst.insert(Var::Y(i), img);
    }
    let d2 = Poly::constant(space, m.d().clone() * m.d().clone());
    let f = m.problem().f();
    let mut bad = Vec::new();
    for (i, fi) in f.iter().enumerate().take(r) {
        let lhs = match fi.subst(&subst) {
            Ok(v) => v,
            Err(_) => {
                bad.push(i + 1);
                continue;
            }
        };
        let inner = Poly::constant(space, m.a()[i].clone())
            + Poly::var(ctx, space, Var::T(i))
            + m.q()[i].clone();
        if !lhs.agrees_to(&(&d2 * &inner), nw) {
            bad.push(i + 1);
        }
    }
    checks.push(check(
        "f(y' + d*Gy*T) = d^2 (a + T + Q)",
        bad.is_empty(),
        if bad.is_empty() {
            format!("all {r} components at precision {nw}")
        } else {
            format!("fails for components {bad:?}")
        },
    ));

    let g_ok = (0..r).all(|i| {
        let rebuilt = Poly::constant(space, m.a()[i].clone())
            + Poly::var(ctx, space, Var::T(i))
            + m.q()[i].clone();
        rebuilt.agrees_with(&m.equations()[i])
    });
    checks.push(check("g = a + T + Q", g_ok, ""));

    let a_ok = m.a().iter().all(|a| a.valuation().lower_bound() >= 1);
    checks.push(check("a in xA^r", a_ok, ""));

    let q_ok = m.q().iter().all(|q| {
        q.terms().all(|(mono, _)| {
            mono.t_degree(space) >= 2 && space.ys().all(|v| mono.exponent(space, v) == 0)
        })
    });
    checks.push(check("Q in (T)^2", q_ok, ""));

    let s_rows: Vec<Vec<Poly>> = (0..r)
        .map(|i| {
            (0..r)
                .map(|j| {
                    let dij = m.q()[i].diff(Var::T(j));
                    if i == j {
                        dij + Poly::one(ctx, space)
                    } else {
                        dij
                    }
                })
                .collect()
        })
        .collect();
    let s = PolyMatrix::from_rows(s_rows).det();
    let s_ok = s.agrees_with(m.loc_s()) && m.loc_s().constant_term().agrees_with(&Series::one(ctx));
    checks.push(check("s = det(Id + dQ/dT), s(0) = 1", s_ok, ""));

    let s1 = m.loc_s_prime().constant_term();
    let s1_ok = s1.coeff(0).is_some_and(|v| v.is_one())
        && m.p()
            .subst(&subst)
            .is_ok_and(|ps| ps.agrees_to(&m.loc_s_prime().scale(m.d()), nw));
    checks.push(check("d*s' = P(y' + d*Gy*T), s'(0) = 1 mod x", s1_ok, ""));

    let cert = m.certificate();
    let gens = &m.problem().ideal;
    let cof_ok = gens.iter().enumerate().all(|(j, gen)| {
        let mut rhs = Poly::zero(ctx, space);
        for (k, fk) in f.iter().enumerate() {
            rhs = rhs + &cert.cofactors[j][k] * fk;
        }
        (&cert.n * gen).agrees_with(&rhs)
    });
    checks.push(check("N*I_j = sum_k c_jk f_k", cof_ok, ""));

    VerifyReport { checks }
}
