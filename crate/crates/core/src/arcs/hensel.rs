use super::ArcError;
use crate::desing::SmoothModel;
use crate::ring::{Series, Valuation};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselOutcome {
    /// `t_[r]`, known modulo `x^target`.
    pub t: Vec<Series>,
    pub iterations: u32,
}

fn check_in_max_ideal(v: &[Series], offset: usize) -> Result<(), ArcError> {
    for (i, s) in v.iter().enumerate() {
        if s.valuation() == Valuation::Finite(0) || s.prec() == 0 {
            return Err(ArcError::NotInMaximalIdeal {
                index: offset + i + 1,
                order: s.valuation(),
            });
        }
    }
    Ok(())
}

/// Solves `g(t_[r], t_free) = 0` modulo `x^target` by Newton iteration
/// from `t0`, with `J = Id + ∂Q/∂T_[r]`.
pub fn hensel_solve(
    m: &SmoothModel,
    t_free: &[Series],
    t0: &[Series],
    target: u32,
) -> Result<HenselOutcome, ArcError> {
    let r = m.r();
    if t_free.len() != m.param_count() {
        return Err(ArcError::Arity {
            expected: m.param_count(),
            got: t_free.len(),
        });
    }
    if t0.len() != r {
        return Err(ArcError::Arity {
            expected: r,
            got: t0.len(),
        });
    }
    check_in_max_ideal(t0, 0)?;
    check_in_max_ideal(t_free, r)?;
    let attainable = t_free
        .iter()
        .map(Series::prec)
        .fold(m.precision(), u32::min);
    if target > attainable {
        return Err(ArcError::PrecisionExhausted { target, attainable });
    }

    let mut t: Vec<Series> = t0.iter().map(|s| s.truncate(target)).collect();
    let mut last: Option<u32> = None;
    let mut iterations = 0;
    loop {
        let ts: Vec<Series> = t.iter().chain(t_free).cloned().collect();
        let residual = m
            .equations()
            .iter()
            .map(|g| g.eval(&[], &ts))
            .collect::<Result<Vec<_>, _>>()?;
        let order = residual
            .iter()
            .map(|s| s.valuation().lower_bound())
            .min()
            .unwrap_or(target);
        if order >= target {
            return Ok(HenselOutcome { t, iterations });
        }
        if residual.iter().all(Series::is_zero_at_prec) {
            return Err(ArcError::PrecisionExhausted {
                target,
                attainable: order,
            });
        }
        if last.is_some_and(|prev| order <= prev) {
            return Err(ArcError::NoProgress { iterations, order });
        }
        last = Some(order);
        let jac = m.dq().eval(&[], &ts)?;
        let rows = (0..r)
            .map(|i| {
                (0..r)
                    .map(|j| {
                        let e = jac.get(i, j).clone();
                        if i == j {
                            e + Series::one(m.ctx())
                        } else {
                            e
                        }
                    })
                    .collect()
            })
            .collect();
        let step = crate::polyring::SeriesMatrix::from_rows(rows).solve_unit(&residual)?;
        t = t
            .iter()
            .zip(&step)
            .map(|(a, b)| (a - b).truncate(target))
            .collect();
        iterations += 1;
    }
}
