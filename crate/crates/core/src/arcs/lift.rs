use std::thread;

use super::hensel::hensel_solve;
use super::ArcError;
use crate::desing::SmoothModel;
use crate::ring::Series;

/// An arc `y'' = y' + d·G(y')·t` on `V(I)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LiftResult {
    /// `(t_[r], t_free)`.
    pub t: Vec<Series>,
    pub y: Vec<Series>,
    /// Lower bound for `min_i ord f_i(y'')`.
    pub residual_f: u32,
    /// Lower bound for `min_j ord I_j(y'')`.
    pub residual_i: u32,
    /// `y'' ≡ y' mod x^(2c+1)`.
    pub strict: bool,
    /// Newton steps spent on `t_[r]`.
    pub iterations: u32,
}

impl LiftResult {
    /// Precision to which every coordinate of `y''` is known.
    pub fn prec(&self) -> u32 {
        self.y.iter().map(Series::prec).min().unwrap_or(0)
    }
}

fn apply(m: &SmoothModel, t: &[Series]) -> Vec<Series> {
    m.gy()
        .mul_vec(t)
        .iter()
        .zip(m.y_prime())
        .map(|(v, y)| y + &(m.d() * v))
        .collect()
}

fn is_strict(m: &SmoothModel, y: &[Series]) -> bool {
    let need = 2 * m.c() + 1;
    y.iter()
        .zip(m.y_prime())
        .all(|(a, b)| (a - b).valuation().lower_bound() >= need)
}

fn residual(gens: &[crate::polyring::Poly], y: &[Series]) -> Result<u32, ArcError> {
    let mut out = u32::MAX;
    for g in gens {
        out = out.min(g.eval(y, &[])?.valuation().lower_bound());
    }
    Ok(out)
}

fn assemble(m: &SmoothModel, t: Vec<Series>, iterations: u32) -> Result<LiftResult, ArcError> {
    let y = apply(m, &t);
    let prec = y.iter().map(Series::prec).min().unwrap_or(0);
    let residual_f = residual(&m.problem().f(), &y)?;
    let residual_i = residual(&m.problem().ideal, &y)?;
    if residual_f < prec {
        return Err(ArcError::ResidualNonzero(format!(
            "ord f(y'') >= {residual_f} is below the precision {prec}"
        )));
    }
    if residual_i + m.c() < prec {
        return Err(ArcError::ResidualNonzero(format!(
            "ord I(y'') >= {residual_i} is below {prec} - c"
        )));
    }
    let strict = is_strict(m, &y);
    Ok(LiftResult {
        t,
        y,
        residual_f,
        residual_i,
        strict,
        iterations,
    })
}

fn lift_from(m: &SmoothModel, t_free: &[Series], seed: &[Series]) -> Result<LiftResult, ArcError> {
    let target = t_free
        .iter()
        .map(Series::prec)
        .fold(m.precision(), u32::min);
    let sol = hensel_solve(m, t_free, seed, target)?;
    let t: Vec<Series> = sol.t.into_iter().chain(t_free.iter().cloned()).collect();
    assemble(m, t, sol.iterations)
}

/// The lift at a full vector `t` with no solving; residuals are still checked.
pub fn lift_at(m: &SmoothModel, t: &[Series]) -> Result<LiftResult, ArcError> {
    if t.len() != m.n() {
        return Err(ArcError::Arity {
            expected: m.n(),
            got: t.len(),
        });
    }
    assemble(m, t.to_vec(), 0)
}

/// Lifts with free coordinates `t_free`, solving for `t_[r]` from zero
/// up to `min(N_work - 2c, prec t_free)`.
pub fn make_lift(m: &SmoothModel, t_free: &[Series]) -> Result<LiftResult, ArcError> {
    let zeros = vec![Series::zero(m.ctx()); m.r()];
    lift_from(m, t_free, &zeros)
}

/// [`make_lift`] over many inputs on scoped threads; results keep the input order.
pub fn lift_batch(m: &SmoothModel, inputs: &[Vec<Series>]) -> Vec<Result<LiftResult, ArcError>> {
    let workers = thread::available_parallelism()
        .map_or(1, |n| n.get())
        .min(inputs.len().max(1));
    let chunk = inputs.len().div_ceil(workers).max(1);
    thread::scope(|s| {
        let handles: Vec<_> = inputs
            .chunks(chunk)
            .map(|part| s.spawn(move || part.iter().map(|t| make_lift(m, t)).collect::<Vec<_>>()))
            .collect();
        handles
            .into_iter()
            .flat_map(|h| h.join().expect("lift worker panicked"))
            .collect()
    })
}

/// Recovers `t = H(y')·(y'' - y')/d²` from a strict lift and checks that it
/// solves `g` and maps back onto `y''`.
pub fn extract_t(m: &SmoothModel, y: &[Series]) -> Result<Vec<Series>, ArcError> {
    if y.len() != m.n() {
        return Err(ArcError::Arity {
            expected: m.n(),
            got: y.len(),
        });
    }
    let need = 2 * m.c() + 1;
    let d2 = m.d() * m.d();
    let mut eps = Vec::with_capacity(y.len());
    for (i, (a, b)) in y.iter().zip(m.y_prime()).enumerate() {
        let diff = a.checked_sub(b)?;
        if diff.valuation().lower_bound() < need {
            return Err(ArcError::NotStrict {
                index: i + 1,
                order: diff.valuation(),
                need,
            });
        }
        eps.push(diff.div_exact(&d2)?);
    }
    let t = m.hy().mul_vec(&eps);
    for (i, g) in m.equations().iter().enumerate() {
        let v = g.eval(&[], &t)?;
        if !v.is_zero_at_prec() {
            return Err(ArcError::ResidualNonzero(format!("g{}(t) = {v}", i + 1)));
        }
    }
    let back = apply(m, &t);
    if let Some(i) = (0..y.len()).find(|&i| !back[i].agrees_with(&y[i])) {
        return Err(ArcError::Mismatch(format!(
            "y' + d*Gy*t differs from y'' in coordinate {}",
            i + 1
        )));
    }
    Ok(t)
}

fn require_strict(m: &SmoothModel, reference: &LiftResult) -> Result<(), ArcError> {
    if reference.strict {
        return Ok(());
    }
    let need = 2 * m.c() + 1;
    let (index, order) = reference
        .y
        .iter()
        .zip(m.y_prime())
        .enumerate()
        .map(|(i, (a, b))| (i + 1, (a - b).valuation()))
        .find(|(_, v)| v.lower_bound() < need)
        .unwrap_or((0, crate::ring::Valuation::AtLeast(0)));
    Err(ArcError::NotStrict { index, order, need })
}

/// The lift with `t_free = t~_free + x^(2c+1)·z`, where `t~` is the
/// reference's `t`; Newton is seeded at `t~_[r]`.
pub fn offset_lift(
    m: &SmoothModel,
    reference: &LiftResult,
    z: &[Series],
) -> Result<LiftResult, ArcError> {
    if z.len() != m.param_count() {
        return Err(ArcError::Arity {
            expected: m.param_count(),
            got: z.len(),
        });
    }
    require_strict(m, reference)?;
    let shift = 2 * m.c() + 1;
    let tt = extract_t(m, &reference.y)?;
    let (seed, free) = tt.split_at(m.r());
    let t_free: Vec<Series> = free
        .iter()
        .zip(z)
        .map(|(a, b)| a + &b.mul_x_pow(shift))
        .collect();
    let out = lift_from(m, &t_free, seed)?;
    if !out.strict {
        return Err(ArcError::Mismatch("offset lift is not strict".into()));
    }
    if let Some(i) = (0..m.n()).find(|&i| !out.y[i].agrees_to(&reference.y[i], shift)) {
        return Err(ArcError::Mismatch(format!(
            "offset lift leaves the reference class modulo x^{shift} in coordinate {}",
            i + 1
        )));
    }
    Ok(out)
}

/// Inverse of [`offset_lift`]: `z = (t_free - t~_free)/x^(2c+1)`.
pub fn extract_params(
    m: &SmoothModel,
    reference: &LiftResult,
    y: &[Series],
) -> Result<Vec<Series>, ArcError> {
    require_strict(m, reference)?;
    let shift = 2 * m.c() + 1;
    let t = extract_t(m, y)?;
    let tt = extract_t(m, &reference.y)?;
    let r = m.r();
    let mut z = Vec::with_capacity(m.param_count());
    for j in r..m.n() {
        let diff = t[j].checked_sub(&tt[j])?;
        if diff.valuation().lower_bound() < shift {
            return Err(ArcError::OutOfFamily {
                index: j + 1,
                order: diff.valuation(),
                need: shift,
            });
        }
        z.push(diff.div_x_pow(shift)?);
    }
    let again = offset_lift(m, reference, &z)?;
    if let Some(i) = (0..m.n()).find(|&i| !again.y[i].agrees_with(&y[i])) {
        return Err(ArcError::Mismatch(format!(
            "offset_lift(z) differs from the arc in coordinate {}",
            i + 1
        )));
    }
    Ok(z)
}
