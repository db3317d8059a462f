use std::fmt;

use super::ArcError;
use crate::desing::{validate_problem, Problem};
use crate::ring::{Field, Scalar, Series};

/// Largest `n·(m - (2c+1))` the enumerator accepts.
pub const ORACLE_BUDGET: u32 = 24;

/// All `y ∈ (F_q[x]/x^m)^n` with `y ≡ y' mod x^(2c+1)` and `I(y) ≡ 0 mod x^m`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct JetSet {
    pub q: u32,
    pub m: u32,
    pub c: u32,
    /// Sorted; each jet is `n` coefficient vectors of length `m`.
    pub jets: Vec<Vec<Vec<u32>>>,
}

impl JetSet {
    pub fn len(&self) -> usize {
        self.jets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.jets.is_empty()
    }

    /// Whether the truncation of `y` modulo `x^m` is in the set. False when
    /// `y` is not known modulo `x^m`.
    pub fn contains_arc(&self, y: &[Series]) -> bool {
        let mut jet = Vec::with_capacity(y.len());
        for s in y {
            if s.prec() < self.m || s.field() != Field::Prime(self.q) {
                return false;
            }
            let coords: Vec<u32> = (0..self.m)
                .map(|k| match s.coeff(k) {
                    Some(Scalar::Prime { value, .. }) => value,
                    _ => 0,
                })
                .collect();
            jet.push(coords);
        }
        self.jets.binary_search(&jet).is_ok()
    }

    pub fn lines(&self) -> Vec<String> {
        self.jets
            .iter()
            .map(|jet| {
                let parts: Vec<String> = jet.iter().map(|v| render(v)).collect();
                format!("({})", parts.join(", "))
            })
            .collect()
    }
}

impl fmt::Display for JetSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for line in self.lines() {
            writeln!(f, "{line}")?;
        }
        Ok(())
    }
}

fn render(v: &[u32]) -> String {
    let terms: Vec<String> = v
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| {
            let mono = match k {
                0 => String::new(),
                1 => "x".to_string(),
                _ => format!("x^{k}"),
            };
            match (c, k) {
                (_, 0) => c.to_string(),
                (1, _) => mono,
                _ => format!("{c}*{mono}"),
            }
        })
        .collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

/// A generator as `(coefficient in x, exponents of Y)` pairs over `u64`.
type Gen = Vec<(Vec<u64>, Vec<u32>)>;

struct Enumerator {
    q: u64,
    m: usize,
    gens: Vec<Gen>,
    y: Vec<Vec<u64>>,
    out: Vec<Vec<Vec<u32>>>,
}

impl Enumerator {
    fn mul(&self, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
        let mut out = vec![0; len];
        for (i, &ai) in a.iter().enumerate().take(len) {
            if ai == 0 {
                continue;
            }
            for (j, &bj) in b.iter().enumerate().take(len - i) {
                out[i + j] = (out[i + j] + ai * bj) % self.q;
            }
        }
        out
    }

    /// Whether every generator vanishes at `y` modulo `x^len`.
    fn kills(&self, len: usize) -> bool {
        self.gens.iter().all(|gen| {
            let mut acc = vec![0u64; len];
            for (coeff, exps) in gen {
                let mut term: Vec<u64> = coeff.iter().take(len).copied().collect();
                term.resize(len, 0);
                for (i, &e) in exps.iter().enumerate() {
                    for _ in 0..e {
                        term = self.mul(&term, &self.y[i], len);
                    }
                }
                for (a, t) in acc.iter_mut().zip(&term) {
                    *a = (*a + t) % self.q;
                }
            }
            acc.iter().all(|&v| v == 0)
        })
    }

    fn walk(&mut self, k: usize) {
        if k == self.m {
            let jet = self
                .y
                .iter()
                .map(|v| v.iter().map(|&c| c as u32).collect())
                .collect();
            self.out.push(jet);
            return;
        }
        let n = self.y.len();
        let choices = self.q.pow(n as u32);
        for idx in 0..choices {
            let mut rest = idx;
            for i in (0..n).rev() {
                self.y[i][k] = rest % self.q;
                rest /= self.q;
            }
            if self.kills(k + 1) {
                self.walk(k + 1);
            }
        }
        for coord in &mut self.y {
            coord[k] = 0;
        }
    }
}

fn residue(s: &Scalar) -> u64 {
    match s {
        Scalar::Prime { value, .. } => *value as u64,
        Scalar::Rational(_) => unreachable!("field checked"),
    }
}

/// Exhaustive enumeration of the jets of order `m` over `y' mod x^(2c+1)`,
/// pruning on `I(y) ≡ 0 mod x^(k+1)` coefficient layer by layer.
pub fn oracle_enumerate(p: &Problem, m: u32) -> Result<JetSet, ArcError> {
    let q = match p.ctx.field {
        Field::Prime(q) => q,
        Field::Rational => return Err(ArcError::FieldNotFinite),
    };
    let report = validate_problem(p);
    if !report.all_passed() {
        return Err(ArcError::Desing(report.into()));
    }
    let c = report.c.expect("resolved");
    let fixed = 2 * c + 1;
    if m < fixed {
        return Err(ArcError::OracleLength { m, min: fixed });
    }
    let cells = p.n as u32 * (m - fixed);
    if cells > ORACLE_BUDGET {
        return Err(ArcError::BudgetExceeded {
            cells,
            budget: ORACLE_BUDGET,
        });
    }
    let space = p.space();
    let gens = p
        .ideal
        .iter()
        .map(|g| {
            g.terms()
                .map(|(mono, s)| {
                    let coeff = s.coeffs().iter().map(residue).collect();
                    let exps = space.ys().map(|v| mono.exponent(space, v)).collect();
                    (coeff, exps)
                })
                .collect()
        })
        .collect();
    let y = p
        .jet
        .iter()
        .map(|s| {
            (0..m)
                .map(|k| match s.coeff(k) {
                    Some(v) if k < fixed => residue(&v),
                    _ => 0,
                })
                .collect()
        })
        .collect();
    let mut e = Enumerator {
        q: q as u64,
        m: m as usize,
        gens,
        y,
        out: Vec::new(),
    };
    if e.kills(fixed as usize) {
        e.walk(fixed as usize);
    }
    e.out.sort();
    Ok(JetSet {
        q,
        m,
        c,
        jets: e.out,
    })
}
