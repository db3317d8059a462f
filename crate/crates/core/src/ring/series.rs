//! Truncated power series in `x` with effective-precision tracking.
//!
//! A [`Series`] stands for an element of `k[[x]]` known modulo
//! `x^prec`. Every operation propagates the precision that is actually
//! guaranteed, capped at the working precision of its [`Ctx`].

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::{Field, RingError, Scalar};
use crate::text::{self, format_power};

/// Coefficient field plus the working precision `N_work` that caps every
/// series built in this context.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Ctx {
    pub field: Field,
    pub n_work: u32,
}

impl Ctx {
    pub const DEFAULT_N_WORK: u32 = 40;

    pub fn new(field: Field, n_work: u32) -> Self {
        Self { field, n_work }
    }

    pub fn rational() -> Self {
        Self::new(Field::Rational, Self::DEFAULT_N_WORK)
    }
}

/// Order of vanishing of a series, or the sentinel "≥ prec" when every
/// known coefficient is zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(u32),
    AtLeast(u32),
}

impl Valuation {
    pub fn lower_bound(self) -> u32 {
        match self {
            Valuation::Finite(k) | Valuation::AtLeast(k) => k,
        }
    }

    pub fn finite(self) -> Option<u32> {
        match self {
            Valuation::Finite(k) => Some(k),
            Valuation::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(f, "{k}"),
            Valuation::AtLeast(k) => write!(f, ">= {k}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series {
    ctx: Ctx,
    /// Exponents `0..coeffs.len()`, trailing zeros stripped, `len <= prec`.
    coeffs: Vec<Scalar>,
    prec: u32,
}

impl Series {
    pub fn from_coeffs(ctx: Ctx, mut coeffs: Vec<Scalar>, prec: u32) -> Self {
        let prec = prec.min(ctx.n_work);
        coeffs.truncate(prec as usize);
        debug_assert!(coeffs.iter().all(|c| c.field() == ctx.field));
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Self { ctx, coeffs, prec }
    }

    /// Exact integer coefficients, `coeffs[k]` on `x^k`.
    pub fn from_ints(ctx: Ctx, coeffs: &[i64]) -> Self {
        let v = coeffs
            .iter()
            .map(|&c| Scalar::from_i64(c, ctx.field))
            .collect();
        Self::from_coeffs(ctx, v, ctx.n_work)
    }

    pub fn zero(ctx: Ctx) -> Self {
        Self::from_coeffs(ctx, Vec::new(), ctx.n_work)
    }

    /// Zero known only modulo `x^prec`.
    pub fn zero_to(ctx: Ctx, prec: u32) -> Self {
        Self::from_coeffs(ctx, Vec::new(), prec)
    }

    pub fn one(ctx: Ctx) -> Self {
        Self::constant(ctx, Scalar::one(ctx.field))
    }

    pub fn constant(ctx: Ctx, c: Scalar) -> Self {
        Self::monomial(ctx, c, 0)
    }

    pub fn monomial(ctx: Ctx, c: Scalar, k: u32) -> Self {
        let mut v = vec![Scalar::zero(ctx.field); k as usize];
        v.push(c);
        Self::from_coeffs(ctx, v, ctx.n_work)
    }

    pub fn x_pow(ctx: Ctx, k: u32) -> Self {
        Self::monomial(ctx, Scalar::one(ctx.field), k)
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn field(&self) -> Field {
        self.ctx.field
    }

    /// Effective precision: the value is known modulo `x^prec`.
    pub fn prec(&self) -> u32 {
        self.prec
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    /// Coefficient of `x^k`; `None` when `k` is at or beyond the precision.
    pub fn coeff(&self, k: u32) -> Option<Scalar> {
        if k >= self.prec {
            return None;
        }
        Some(
            self.coeffs
                .get(k as usize)
                .cloned()
                .unwrap_or_else(|| Scalar::zero(self.field())),
        )
    }

    pub fn valuation(&self) -> Valuation {
        match self.coeffs.iter().position(|c| !c.is_zero()) {
            Some(k) => Valuation::Finite(k as u32),
            None => Valuation::AtLeast(self.prec),
        }
    }

    pub fn is_zero_at_prec(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Units of `k[[x]]` are the series with nonzero constant term.
    pub fn is_unit(&self) -> bool {
        self.valuation() == Valuation::Finite(0)
    }

    /// Forget everything at and beyond `x^p`.
    pub fn truncate(&self, p: u32) -> Self {
        Self::from_coeffs(self.ctx, self.coeffs.clone(), p.min(self.prec))
    }

    /// Same coefficients, precision raised to the working cap: used to
    /// promote a truncation to an exact element of `A`.
    pub fn as_exact(&self) -> Self {
        Self::from_coeffs(self.ctx, self.coeffs.clone(), self.ctx.n_work)
    }

    /// Coefficient-wise equality below the smaller of the two precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.ctx == other.ctx && self.agrees_to(other, self.prec.min(other.prec))
    }

    /// Coefficient-wise equality below `x^p`; false if either side is not
    /// known that far.
    pub fn agrees_to(&self, other: &Self, p: u32) -> bool {
        if self.prec < p || other.prec < p {
            return false;
        }
        (0..p).all(|k| self.coeff(k) == other.coeff(k))
    }

    fn check_ctx(&self, other: &Self) -> Result<(), RingError> {
        if self.ctx != other.ctx {
            return Err(RingError::FieldMismatch {
                left: self.ctx.field,
                right: other.ctx.field,
            });
        }
        Ok(())
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ctx(other)?;
        let prec = self.prec.min(other.prec);
        let len = self.coeffs.len().max(other.coeffs.len()).min(prec as usize);
        let zero = Scalar::zero(self.field());
        let v = (0..len)
            .map(|k| self.coeffs.get(k).unwrap_or(&zero) + other.coeffs.get(k).unwrap_or(&zero))
            .collect();
        Ok(Self::from_coeffs(self.ctx, v, prec))
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, RingError> {
        self.checked_add(&-other)
    }

    /// `prec = min(a.prec + ord b, b.prec + ord a, N_work)`.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, RingError> {
        self.check_ctx(other)?;
        let oa = self.valuation().lower_bound();
        let ob = other.valuation().lower_bound();
        let prec = (self.prec.saturating_add(ob))
            .min(other.prec.saturating_add(oa))
            .min(self.ctx.n_work);
        let len = (self.coeffs.len() + other.coeffs.len())
            .saturating_sub(1)
            .min(prec as usize);
        let mut v = vec![Scalar::zero(self.field()); len];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() || i >= len {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                if !b.is_zero() {
                    v[i + j] = &v[i + j] + &(a * b);
                }
            }
        }
        Ok(Self::from_coeffs(self.ctx, v, prec))
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return Self::zero(self.ctx);
        }
        let v = self.coeffs.iter().map(|a| a * c).collect();
        Self::from_coeffs(self.ctx, v, self.prec)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ctx);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplication by `x^k`, gaining `k` digits of precision.
    pub fn mul_x_pow(&self, k: u32) -> Self {
        let mut v = vec![Scalar::zero(self.field()); k as usize];
        v.extend(self.coeffs.iter().cloned());
        Self::from_coeffs(self.ctx, v, self.prec.saturating_add(k))
    }

    /// Exact division by `x^k`, losing `k` digits of precision.
    pub fn div_x_pow(&self, k: u32) -> Result<Self, RingError> {
        if let Valuation::Finite(o) = self.valuation() {
            if o < k {
                return Err(RingError::NotDivisible {
                    order: o,
                    divisor_order: k,
                });
            }
        }
        if self.prec <= k {
            return Err(RingError::PrecisionExhausted);
        }
        let v = self.coeffs.iter().skip(k as usize).cloned().collect();
        Ok(Self::from_coeffs(self.ctx, v, self.prec - k))
    }

    /// Inverse of a unit, same precision.
    pub fn inv_unit(&self) -> Result<Self, RingError> {
        if !self.is_unit() {
            return Err(RingError::NotAUnit);
        }
        let a0_inv = self.coeffs[0].inv()?;
        let n = self.prec as usize;
        let zero = Scalar::zero(self.field());
        let mut r: Vec<Scalar> = Vec::with_capacity(n);
        r.push(a0_inv.clone());
        for k in 1..n {
            let mut s = zero.clone();
            for j in 1..=k.min(self.coeffs.len().saturating_sub(1)) {
                s = &s + &(&self.coeffs[j] * &r[k - j]);
            }
            r.push(-&(&a0_inv * &s));
        }
        Ok(Self::from_coeffs(self.ctx, r, self.prec))
    }

    /// Exact quotient `self / divisor`. The divisor's order is stripped off
    /// exactly, so the quotient loses `ord(divisor)` digits of precision.
    pub fn div_exact(&self, divisor: &Self) -> Result<Self, RingError> {
        self.check_ctx(divisor)?;
        let k = divisor
            .valuation()
            .finite()
            .ok_or(RingError::DivisionByZero)?;
        let num = self.div_x_pow(k)?;
        let unit = divisor.div_x_pow(k)?;
        num.checked_mul(&unit.inv_unit()?)
    }

    pub fn parse(text: &str, ctx: Ctx) -> Result<Self, RingError> {
        let expr = text::parse_expr(text)?;
        let mut acc = Self::zero(ctx);
        for t in &expr.terms {
            if let Some(&(_, idx, _)) = t.vars.first() {
                return Err(RingError::Parse(text::ParseError {
                    pos: t.pos,
                    message: format!("series may only use x (found variable with index {idx})"),
                }));
            }
            let c = Scalar::from_fraction(&t.num, &t.den, ctx.field).map_err(|_| {
                RingError::Parse(text::ParseError {
                    pos: t.pos,
                    message: "denominator vanishes in the field".into(),
                })
            })?;
            acc = &acc + &Self::monomial(ctx, c, t.x_exp);
        }
        if let Some((k, _)) = expr.big_o {
            acc = acc.truncate(k);
        }
        Ok(acc)
    }

    /// Parses an integer into the context's field.
    pub fn from_bigint(ctx: Ctx, v: &BigInt) -> Self {
        Self::constant(ctx, Scalar::from_bigint(v, ctx.field))
    }

    /// Renders the known nonzero terms `(coefficient, "x^k")` in ascending order.
    pub(crate) fn terms_with_x(&self) -> impl Iterator<Item = (&Scalar, String)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(k, c)| {
                let mono = if k == 0 {
                    String::new()
                } else {
                    format_power("x", k as u32)
                };
                (c, mono)
            })
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let body = text::format_terms(self.terms_with_x());
        if self.prec >= self.ctx.n_work {
            return f.write_str(&body);
        }
        let o = format!("O({})", format_power("x", self.prec));
        if self.coeffs.is_empty() {
            f.write_str(&o)
        } else {
            write!(f, "{body} + {o}")
        }
    }
}

macro_rules! binop {
    ($tr:ident, $m:ident, $checked:ident) => {
        impl $tr for &Series {
            type Output = Series;
            fn $m(self, rhs: &Series) -> Series {
                self.$checked(rhs).expect("series context mismatch")
            }
        }
        impl $tr for Series {
            type Output = Series;
            fn $m(self, rhs: Series) -> Series {
                (&self).$m(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Series {
    type Output = Series;
    fn neg(self) -> Series {
        let v = self.coeffs.iter().map(|c| -c).collect();
        Series::from_coeffs(self.ctx, v, self.prec)
    }
}

impl Neg for Series {
    type Output = Series;
    fn neg(self) -> Series {
        -&self
    }
}
