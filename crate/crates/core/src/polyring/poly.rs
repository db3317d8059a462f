use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::{Namespaces, PolyError, Var, VarSpace};
use crate::ring::{Ctx, RingError, Scalar, Series};
use crate::text::{self, format_power, ParseError, VarKind};

/// Exponent vector over `(Y1..Yn, T1..Tn)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(Vec<u32>);

impl Monomial {
    pub fn one(space: VarSpace) -> Self {
        Monomial(vec![0; 2 * space.n()])
    }

    pub fn var(space: VarSpace, v: Var) -> Self {
        let mut m = Self::one(space);
        m.0[space.slot(v)] = 1;
        m
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn exponent(&self, space: VarSpace, v: Var) -> u32 {
        self.0[space.slot(v)]
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn t_degree(&self, space: VarSpace) -> u32 {
        self.0[space.n()..].iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Self) -> Self {
        Monomial(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Print order: total degree ascending, then exponent vectors
    /// lexicographically descending.
    fn print_cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }

    fn render(&self, space: VarSpace) -> String {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &e)| e > 0)
            .map(|(slot, &e)| format_power(&space.var_at(slot).to_string(), e))
            .collect::<Vec<_>>()
            .join("*")
    }
}

/// A polynomial with [`Series`] coefficients. Zero-at-precision
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    ctx: Ctx,
    space: VarSpace,
    terms: BTreeMap<Monomial, Series>,
}

impl Poly {
    pub fn zero(ctx: Ctx, space: VarSpace) -> Self {
        Self {
            ctx,
            space,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(space: VarSpace, c: Series) -> Self {
        Self::term(space, Monomial::one(space), c)
    }

    pub fn one(ctx: Ctx, space: VarSpace) -> Self {
        Self::constant(space, Series::one(ctx))
    }

    pub fn var(ctx: Ctx, space: VarSpace, v: Var) -> Self {
        Self::term(space, Monomial::var(space, v), Series::one(ctx))
    }

    pub fn term(space: VarSpace, m: Monomial, c: Series) -> Self {
        let mut p = Self::zero(c.ctx(), space);
        p.add_term(m, c);
        p
    }

    pub fn ctx(&self) -> Ctx {
        self.ctx
    }

    pub fn space(&self) -> VarSpace {
        self.space
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Series)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, m: &Monomial) -> Series {
        self.terms
            .get(m)
            .cloned()
            .unwrap_or_else(|| Series::zero(self.ctx))
    }

    pub fn constant_term(&self) -> Series {
        self.coeff(&Monomial::one(self.space))
    }

    fn add_term(&mut self, m: Monomial, c: Series) {
        let sum = match self.terms.remove(&m) {
            Some(old) => &old + &c,
            None => c,
        };
        if !sum.is_zero_at_prec() {
            self.terms.insert(m, sum);
        }
    }

    fn check_compatible(&self, other: &Self) {
        assert_eq!(self.ctx, other.ctx, "polynomial context mismatch");
        assert_eq!(
            self.space, other.space,
            "polynomial variable space mismatch"
        );
    }

    pub fn uses(&self, v: Var) -> bool {
        let slot = self.space.slot(v);
        self.terms.keys().any(|m| m.0[slot] > 0)
    }

    /// Whether some coefficient involves a positive power of `x`.
    pub fn uses_x(&self) -> bool {
        self.terms
            .values()
            .any(|c| c.coeffs().iter().skip(1).any(|s| !s.is_zero()))
    }

    /// Smallest total `T`-degree over all terms, `None` for zero.
    pub fn min_t_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.t_degree(self.space)).min()
    }

    pub fn scale(&self, c: &Series) -> Self {
        let mut out = Self::zero(self.ctx, self.space);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a * c);
        }
        out
    }

    /// Divides every coefficient exactly by `c`.
    pub fn div_exact(&self, c: &Series) -> Result<Self, RingError> {
        let mut out = Self::zero(self.ctx, self.space);
        for (m, a) in &self.terms {
            out.add_term(m.clone(), a.div_exact(c)?);
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.ctx, self.space);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    pub fn diff(&self, v: Var) -> Self {
        let slot = self.space.slot(v);
        let mut out = Self::zero(self.ctx, self.space);
        for (m, c) in &self.terms {
            let e = m.0[slot];
            if e == 0 {
                continue;
            }
            let mut dm = m.clone();
            dm.0[slot] -= 1;
            out.add_term(dm, c.scale(&Scalar::from_i64(e as i64, self.ctx.field)));
        }
        out
    }

    /// Evaluates at `Y = ys`, `T = ts`. Either slice may be shorter than
    /// `n` as long as the polynomial does not use the missing variables.
    pub fn eval(&self, ys: &[Series], ts: &[Series]) -> Result<Series, PolyError> {
        let n = self.space.n();
        let mut powers: BTreeMap<(usize, u32), Series> = BTreeMap::new();
        let mut acc = Series::zero(self.ctx);
        for (m, c) in &self.terms {
            let mut val = c.clone();
            for (slot, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let base = if slot < n {
                    ys.get(slot)
                } else {
                    ts.get(slot - n)
                }
                .ok_or(PolyError::MissingVariable(self.space.var_at(slot)))?;
                if base.ctx() != self.ctx {
                    return Err(RingError::FieldMismatch {
                        left: self.ctx.field,
                        right: base.field(),
                    }
                    .into());
                }
                let p = powers.entry((slot, e)).or_insert_with(|| base.pow(e));
                val = &val * p;
            }
            acc = &acc + &val;
        }
        Ok(acc)
    }

    /// Replaces every variable by its image. The map must cover each
    /// variable the polynomial uses; all images share one space.
    pub fn subst(&self, map: &BTreeMap<Var, Poly>) -> Result<Poly, PolyError> {
        let mut images = map.values();
        let space = match images.next() {
            Some(first) => {
                if images.any(|p| p.space != first.space || p.ctx != first.ctx)
                    || first.ctx != self.ctx
                {
                    return Err(PolyError::NamespaceMismatch);
                }
                first.space
            }
            None => self.space,
        };
        let mut powers: BTreeMap<(Var, u32), Poly> = BTreeMap::new();
        let mut out = Poly::zero(self.ctx, space);
        for (m, c) in &self.terms {
            let mut val = Poly::constant(space, c.clone());
            for (slot, &e) in m.0.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let v = self.space.var_at(slot);
                let img = map.get(&v).ok_or(PolyError::MissingVariable(v))?;
                let p = powers.entry((v, e)).or_insert_with(|| img.pow(e));
                val = &val * p;
            }
            out = &out + &val;
        }
        Ok(out)
    }

    /// Every coefficient of `self - other` vanishes below `x^prec`.
    pub fn agrees_to(&self, other: &Self, prec: u32) -> bool {
        self.check_compatible(other);
        let keys: std::collections::BTreeSet<&Monomial> =
            self.terms.keys().chain(other.terms.keys()).collect();
        keys.into_iter().all(|m| {
            let d = &self.coeff(m) - &other.coeff(m);
            d.valuation().lower_bound() >= prec
        })
    }

    /// Every coefficient of `self - other` vanishes at its precision.
    pub fn agrees_with(&self, other: &Self) -> bool {
        (self - other).is_zero()
    }

    /// Smallest coefficient precision, `None` for the zero polynomial.
    pub fn min_prec(&self) -> Option<u32> {
        self.terms.values().map(Series::prec).min()
    }

    /// Terms in print order.
    fn print_terms(&self) -> Vec<(&Monomial, &Series)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.print_cmp(b.0));
        v
    }

    pub fn parse(
        text: &str,
        ctx: Ctx,
        space: VarSpace,
        allowed: Namespaces,
    ) -> Result<Self, PolyError> {
        let expr = text::parse_expr(text)?;
        if let Some((_, pos)) = expr.big_o {
            return Err(ParseError {
                pos,
                message: "O(x^k) is not allowed in a polynomial".into(),
            }
            .into());
        }
        let mut out = Poly::zero(ctx, space);
        for t in &expr.terms {
            let c = Scalar::from_fraction(&t.num, &t.den, ctx.field).map_err(|_| ParseError {
                pos: t.pos,
                message: "denominator vanishes in the field".into(),
            })?;
            let mut m = Monomial::one(space);
            for &(kind, idx, e) in &t.vars {
                let (ok, v) = match kind {
                    VarKind::Y => (allowed.y, Var::Y(idx.wrapping_sub(1))),
                    VarKind::T => (allowed.t, Var::T(idx.wrapping_sub(1))),
                };
                if !ok || idx == 0 || idx > space.n() {
                    let letter = if kind == VarKind::Y { 'Y' } else { 'T' };
                    return Err(PolyError::UnknownVariable {
                        name: format!("{letter}{idx}"),
                        pos: t.pos,
                    });
                }
                m.0[space.slot(v)] += e;
            }
            out.add_term(m, Series::monomial(ctx, c, t.x_exp));
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut pieces: Vec<(&Scalar, String)> = Vec::new();
        for (m, c) in self.print_terms() {
            let vars = m.render(self.space);
            for (s, xs) in c.terms_with_x() {
                let mono = match (xs.is_empty(), vars.is_empty()) {
                    (true, _) => vars.clone(),
                    (false, true) => xs,
                    (false, false) => format!("{xs}*{vars}"),
                };
                pieces.push((s, mono));
            }
        }
        f.write_str(&text::format_terms(pieces))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        self.check_compatible(rhs);
        let mut out = self.clone();
        for (m, c) in &rhs.terms {
            out.add_term(m.clone(), c.clone());
        }
        out
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            ctx: self.ctx,
            space: self.space,
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        self.check_compatible(rhs);
        let mut out = Poly::zero(self.ctx, self.space);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                out.add_term(ma.mul(mb), ca * cb);
            }
        }
        out
    }
}

macro_rules! owned_binop {
    ($tr:ident, $m:ident) => {
        impl $tr for Poly {
            type Output = Poly;
            fn $m(self, rhs: Poly) -> Poly {
                (&self).$m(&rhs)
            }
        }
    };
}

owned_binop!(Add, add);
owned_binop!(Sub, sub);
owned_binop!(Mul, mul);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Field;
    use proptest::prelude::*;

    fn sp() -> VarSpace {
        VarSpace::new(2)
    }

    fn p(text: &str) -> Poly {
        Poly::parse(text, Ctx::rational(), sp(), Namespaces::ALL).unwrap()
    }

    fn s(text: &str) -> Series {
        Series::parse(text, Ctx::rational()).unwrap()
    }

    #[test]
    fn parse_examples() {
        let cusp = p("Y1^2 - Y2^3");
        assert_eq!(cusp.len(), 2);
        assert_eq!(cusp.to_string(), "Y1^2 - Y2^3");
        assert_eq!(p("1"), Poly::one(Ctx::rational(), sp()));
        let node = p("Y1*Y2 - x^6");
        assert_eq!(node.constant_term(), s("-x^6"));
        assert_eq!(node.to_string(), "-x^6 + Y1*Y2");
    }

    #[test]
    fn parse_errors() {
        assert!(matches!(
            Poly::parse("Y3", Ctx::rational(), sp(), Namespaces::ALL),
            Err(PolyError::UnknownVariable { .. })
        ));
        assert!(matches!(
            Poly::parse("T1", Ctx::rational(), sp(), Namespaces::Y),
            Err(PolyError::UnknownVariable { .. })
        ));
        assert!(matches!(
            Poly::parse("Y1^^2", Ctx::rational(), sp(), Namespaces::ALL),
            Err(PolyError::Parse(ParseError { pos: 3, .. }))
        ));
        assert!(Poly::parse("Y1 + O(x^3)", Ctx::rational(), sp(), Namespaces::ALL).is_err());
    }

    #[test]
    fn print_order_is_graded() {
        let g = p("-16*x^16*T2^3 - 3*x^10*T2^2 + 6*x^6*T1*T2 + x^2*T1^2 + T1");
        assert_eq!(
            g.to_string(),
            "T1 + x^2*T1^2 + 6*x^6*T1*T2 - 3*x^10*T2^2 - 16*x^16*T2^3"
        );
        assert_eq!(p("x*T1 + T1").to_string(), "T1 + x*T1");
        assert_eq!(Poly::zero(Ctx::rational(), sp()).to_string(), "0");
    }

    #[test]
    fn eval_examples() {
        let y = [s("x^3"), s("x^2")];
        let v = p("Y1^2 - Y2^3").eval(&y, &[]).unwrap();
        assert!(v.is_zero_at_prec());
        assert!(v.prec() >= 12);
        assert_eq!(p("Y1").eval(&y, &[]).unwrap(), s("x^3"));
        assert_eq!(p("2*Y1").eval(&y, &[]).unwrap(), s("2*x^3"));
        assert_eq!(
            p("T1").eval(&y, &[]),
            Err(PolyError::MissingVariable(Var::T(0)))
        );
    }

    #[test]
    fn subst_examples() {
        let mut m = BTreeMap::new();
        m.insert(Var::Y(0), p("x^3 + 2*x^5*T1 + 6*x^9*T2"));
        let out = p("Y1^2").subst(&m).unwrap();
        assert!(out.agrees_with(&p(
            "x^6 + 4*x^8*T1 + 12*x^12*T2 + 4*x^10*T1^2 + 24*x^14*T1*T2 + 36*x^18*T2^2"
        )));
        let mut m = BTreeMap::new();
        m.insert(Var::Y(1), p("x^2 + 4*x^8*T2"));
        let out = p("Y2^3").subst(&m).unwrap();
        assert!(out.agrees_with(&p("x^6 + 12*x^12*T2 + 48*x^18*T2^2 + 64*x^24*T2^3")));
        let id: BTreeMap<_, _> = sp()
            .ys()
            .chain(sp().ts())
            .map(|v| (v, Poly::var(Ctx::rational(), sp(), v)))
            .collect();
        let q = p("Y1*T2 - 3*x*Y2^2 + 7");
        assert_eq!(q.subst(&id).unwrap(), q);
        assert!(matches!(
            p("Y2").subst(&BTreeMap::new()),
            Err(PolyError::MissingVariable(Var::Y(1)))
        ));
    }

    #[test]
    fn subst_rejects_mixed_spaces() {
        let other = Poly::parse("Y1", Ctx::rational(), VarSpace::new(3), Namespaces::ALL).unwrap();
        let mut m = BTreeMap::new();
        m.insert(Var::Y(0), p("Y2"));
        m.insert(Var::Y(1), other);
        assert_eq!(p("Y1").subst(&m), Err(PolyError::NamespaceMismatch));
    }

    #[test]
    fn diff_examples() {
        assert_eq!(p("Y1^2 - Y2^3").diff(Var::Y(0)), p("2*Y1"));
        assert!(p("x^5 + 3").diff(Var::Y(0)).is_zero());
        assert_eq!(p("Y1*Y2 - x^6").diff(Var::Y(0)), p("Y2"));
    }

    #[test]
    fn prime_field_parsing_reduces() {
        let f5 = Ctx::new(Field::Prime(5), 40);
        let q = Poly::parse("6*x^6*T1*T2 - 3*x^10*T2^2", f5, sp(), Namespaces::ALL).unwrap();
        assert_eq!(q.to_string(), "x^6*T1*T2 + 2*x^10*T2^2");
    }

    fn small_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec((-4i64..5, 0u32..3, 0u32..3, 0u32..3, 0u32..2), 0..5).prop_map(
            |ts| {
                let ctx = Ctx::rational();
                let mut out = Poly::zero(ctx, sp());
                for (c, xe, a, b, t) in ts {
                    let mut m = Monomial::one(sp());
                    m.0[0] = a;
                    m.0[1] = b;
                    m.0[2] = t;
                    out.add_term(m, Series::monomial(ctx, Scalar::from_i64(c, ctx.field), xe));
                }
                out
            },
        )
    }

    fn point() -> impl Strategy<Value = Vec<Series>> {
        proptest::collection::vec(proptest::collection::vec(-3i64..4, 0..4), 4).prop_map(|vs| {
            vs.iter()
                .map(|v| Series::from_ints(Ctx::rational(), v))
                .collect()
        })
    }

    proptest! {
        #[test]
        fn subst_then_eval_is_eval_of_images(a in small_poly(), i1 in small_poly(), i2 in small_poly(), pt in point()) {
            let mut m = BTreeMap::new();
            m.insert(Var::Y(0), i1.clone());
            m.insert(Var::Y(1), i2.clone());
            m.insert(Var::T(0), Poly::var(Ctx::rational(), sp(), Var::T(0)));
            m.insert(Var::T(1), Poly::var(Ctx::rational(), sp(), Var::T(1)));
            let (ys, ts) = pt.split_at(2);
            let lhs = a.subst(&m).unwrap().eval(ys, ts).unwrap();
            let imgs = [i1.eval(ys, ts).unwrap(), i2.eval(ys, ts).unwrap()];
            let rhs = a.eval(&imgs, ts).unwrap();
            prop_assert!(lhs.agrees_with(&rhs));
        }

        #[test]
        fn product_rule(a in small_poly(), b in small_poly()) {
            for v in [Var::Y(0), Var::Y(1), Var::T(0)] {
                let lhs = (&a * &b).diff(v);
                let rhs = &(&a * &b.diff(v)) + &(&b * &a.diff(v));
                prop_assert!(lhs.agrees_with(&rhs));
            }
        }

        #[test]
        fn print_parse_round_trip(a in small_poly()) {
            let text = a.to_string();
            let back = Poly::parse(&text, Ctx::rational(), sp(), Namespaces::ALL).unwrap();
            prop_assert_eq!(back, a);
        }
    }

    #[test]
    fn print_parse_corpus() {
        let corpus = [
            "Y1^2 - Y2^3",
            "-x^6 + Y1*Y2",
            "T1 + x^2*T1^2 + 6*x^6*T1*T2 - 3*x^10*T2^2 - 16*x^16*T2^3",
            "T1 + x^6*T1*T2 - x^8*T2^2",
            "1 + 2*x^2*T1 + 6*x^6*T2",
            "1",
            "0",
            "-1",
            "x",
            "3/4*x^12 + 1/2*x^19",
            "-x + Y1",
            "2*x*Y1",
            "-3*Y2^2",
            "x^5 - Y2^2 + Y1^3",
            "x*T1 - x^2*T2",
            "Y1*T1*T2",
            "-1/2 + Y2",
            "Y1^2*Y2 - 7/3*x^4*Y2^3",
            "T2^4",
            "x^39*Y1",
        ];
        for t in corpus {
            assert_eq!(p(t).to_string(), t, "round trip of {t}");
        }
    }
}
