use super::lift::{make_lift, LiftResult};
use crate::desing::SmoothModel;
use crate::ring::{Field, Scalar, Series};

/// Maximum number of trial lifts the layered search may run.
pub const SEARCH_NODE_BUDGET: usize = 20_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchStage {
    /// `t_free = 0` already gave a strict lift.
    Canonical,
    /// Found by the coefficient-by-coefficient search.
    Layered,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReferenceSearch {
    Found {
        lift: LiftResult,
        stage: SearchStage,
    },
    /// Nothing found within the search depth. Not a proof that no strict
    /// lift exists.
    NotFound { depth: u32 },
}

/// Looks for a strict lift: first `t_free = 0`, then layer by layer.
///
/// With `s0` the least order of an entry of `G(y')`, the coefficient of
/// `x^(j+s0)` in `G(y')·t` is affine in the `x^j`-layer of `t_free`, with
/// matrix the `x^s0`-part of the free columns of `G(y')`; strictness asks
/// these coefficients to vanish for `j + s0 ≤ c`. Over `F_q` every solution
/// of every layer is tried with backtracking; over `Q` one particular
/// solution per layer is taken.
pub fn find_strict_reference(m: &SmoothModel, depth: u32) -> ReferenceSearch {
    let ctx = m.ctx();
    let k = m.param_count();
    if let Ok(lift) = make_lift(m, &vec![Series::zero(ctx); k]) {
        if lift.strict {
            return ReferenceSearch::Found {
                lift,
                stage: SearchStage::Canonical,
            };
        }
    }
    let s0 = m.gy().min_valuation();
    if k == 0 || s0 >= m.c() {
        return ReferenceSearch::NotFound { depth };
    }
    let layers = (m.c() - s0).min(depth);
    let l: Vec<Vec<Scalar>> = (0..m.n())
        .map(|i| {
            (m.r()..m.n())
                .map(|j| m.gy().get(i, j).coeff(s0).expect("known"))
                .collect()
        })
        .collect();
    let mut search = Layered {
        m,
        s0,
        layers,
        l,
        nodes: 0,
        coeffs: vec![Vec::new(); k],
    };
    match search.descend(1) {
        Some(lift) => ReferenceSearch::Found {
            lift,
            stage: SearchStage::Layered,
        },
        None => ReferenceSearch::NotFound { depth },
    }
}

struct Layered<'a> {
    m: &'a SmoothModel,
    s0: u32,
    layers: u32,
    l: Vec<Vec<Scalar>>,
    nodes: usize,
    /// Per free coordinate, coefficients of `x^1..x^(j-1)`.
    coeffs: Vec<Vec<Scalar>>,
}

impl Layered<'_> {
    fn t_free(&self) -> Vec<Series> {
        let ctx = self.m.ctx();
        self.coeffs
            .iter()
            .map(|cs| {
                let mut v = vec![Scalar::zero(ctx.field)];
                v.extend(cs.iter().cloned());
                Series::from_coeffs(ctx, v, ctx.n_work)
            })
            .collect()
    }

    fn lift(&mut self) -> Option<LiftResult> {
        if self.nodes >= SEARCH_NODE_BUDGET {
            return None;
        }
        self.nodes += 1;
        make_lift(self.m, &self.t_free()).ok()
    }

    fn descend(&mut self, j: u32) -> Option<LiftResult> {
        let lift = self.lift()?;
        if j > self.layers {
            return lift.strict.then_some(lift);
        }
        let gt = self.m.gy().mul_vec(&lift.t);
        let rhs: Vec<Scalar> = gt
            .iter()
            .map(|s| -&s.coeff(j + self.s0).expect("known"))
            .collect();
        let field = self.m.ctx().field;
        let (part, kernel) = solve_affine(&self.l, &rhs, field)?;
        for u in solutions(&part, &kernel, field) {
            for (cs, ui) in self.coeffs.iter_mut().zip(&u) {
                cs.push(ui.clone());
            }
            if let Some(found) = self.descend(j + 1) {
                return Some(found);
            }
            for cs in &mut self.coeffs {
                cs.pop();
            }
            if self.nodes >= SEARCH_NODE_BUDGET {
                return None;
            }
        }
        None
    }
}

/// All solutions over `F_q` (particular plus kernel combinations), or the
/// particular one alone over `Q`.
fn solutions(part: &[Scalar], kernel: &[Vec<Scalar>], field: Field) -> Vec<Vec<Scalar>> {
    let q = match field {
        Field::Prime(p) => p as u64,
        Field::Rational => return vec![part.to_vec()],
    };
    let dim = kernel.len() as u32;
    let total = q.saturating_pow(dim).min(SEARCH_NODE_BUDGET as u64);
    (0..total)
        .map(|mut idx| {
            let mut u = part.to_vec();
            for v in kernel {
                let w = Scalar::from_i64((idx % q) as i64, field);
                idx /= q;
                for (ui, vi) in u.iter_mut().zip(v) {
                    *ui = &*ui + &(&w * vi);
                }
            }
            u
        })
        .collect()
}

/// Solves `a·u = b` by reduction to row echelon form; returns a particular
/// solution (free unknowns zero) and a kernel basis.
fn solve_affine(
    a: &[Vec<Scalar>],
    b: &[Scalar],
    field: Field,
) -> Option<(Vec<Scalar>, Vec<Vec<Scalar>>)> {
    let cols = a.first().map_or(0, Vec::len);
    let mut rows: Vec<Vec<Scalar>> = a
        .iter()
        .zip(b)
        .map(|(row, bi)| row.iter().chain(std::iter::once(bi)).cloned().collect())
        .collect();
    let mut pivots = Vec::new();
    let mut top = 0;
    for col in 0..cols {
        let Some(p) = (top..rows.len()).find(|&i| !rows[i][col].is_zero()) else {
            continue;
        };
        rows.swap(top, p);
        let inv = rows[top][col].inv().expect("nonzero pivot");
        rows[top] = rows[top].iter().map(|v| v * &inv).collect();
        for i in 0..rows.len() {
            if i != top && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                let pivot_row = rows[top].clone();
                for (v, pv) in rows[i].iter_mut().zip(&pivot_row) {
                    *v = &*v - &(&f * pv);
                }
            }
        }
        pivots.push(col);
        top += 1;
    }
    if rows[top..].iter().any(|row| !row[cols].is_zero()) {
        return None;
    }
    let mut part = vec![Scalar::zero(field); cols];
    for (i, &pc) in pivots.iter().enumerate() {
        part[pc] = rows[i][cols].clone();
    }
    let kernel = (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|fc| {
            let mut v = vec![Scalar::zero(field); cols];
            v[fc] = Scalar::one(field);
            for (i, &pc) in pivots.iter().enumerate() {
                v[pc] = -&rows[i][fc];
            }
            v
        })
        .collect();
    Some((part, kernel))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: i64) -> Scalar {
        Scalar::from_i64(v, Field::Rational)
    }

    #[test]
    fn affine_solver_particular_and_kernel() {
        // u1 + 2u2 = 3, 2u1 + 4u2 = 6
        let a = vec![vec![q(1), q(2)], vec![q(2), q(4)]];
        let (part, ker) = solve_affine(&a, &[q(3), q(6)], Field::Rational).unwrap();
        assert_eq!(part, vec![q(3), q(0)]);
        assert_eq!(ker, vec![vec![q(-2), q(1)]]);
        assert!(solve_affine(&a, &[q(3), q(7)], Field::Rational).is_none());
    }

    #[test]
    fn finite_field_solutions_are_enumerated() {
        let f5 = Field::prime(5).unwrap();
        let a = vec![vec![Scalar::zero(f5)]];
        let (part, ker) = solve_affine(&a, &[Scalar::zero(f5)], f5).unwrap();
        assert_eq!(solutions(&part, &ker, f5).len(), 5);
        assert_eq!(solutions(&part, &ker, Field::Rational).len(), 1);
    }
}
