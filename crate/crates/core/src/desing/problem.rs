use std::fmt;

use super::DesingError;
use crate::polyring::{jacobian, Poly, Var, VarSpace};
use crate::ring::{Ctx, Series, Valuation};

/// Whether the ideal lives over `A` or comes from a `k`-algebra `k[Y]/J`
/// (no `x` in the generators), tensored up to `A`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Mode {
    #[default]
    Dvr,
    Variety,
}

/// Witness of `N ∈ ((f) : I)`: `N·I_j = Σ_k cofactors[j][k]·f_k` for every
/// ideal generator `I_j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub n: Poly,
    pub cofactors: Vec<Vec<Poly>>,
}

impl Certificate {
    /// `N = 1` with `I_j = f_k` whenever `f_idx[k] == j`. Only a valid
    /// certificate when `f` lists every generator.
    pub fn trivial(ctx: Ctx, space: VarSpace, n_gens: usize, f_idx: &[usize]) -> Self {
        let cofactors = (0..n_gens)
            .map(|j| {
                f_idx
                    .iter()
                    .map(|&i| {
                        if i == j {
                            Poly::one(ctx, space)
                        } else {
                            Poly::zero(ctx, space)
                        }
                    })
                    .collect()
            })
            .collect();
        Self {
            n: Poly::one(ctx, space),
            cofactors,
        }
    }
}

/// Input of the construction: `B = A[Y]/I`, the subsystem `f`, the minor,
/// the certificate, `c` and the jet `y'` known modulo `x^jet_prec`.
#[derive(Clone, Debug)]
pub struct Problem {
    pub ctx: Ctx,
    pub n: usize,
    pub ideal: Vec<Poly>,
    /// 0-based generator indices selecting `f`.
    pub f_idx: Vec<usize>,
    /// 0-based `Y` columns of the minor, in order.
    pub minor_cols: Vec<usize>,
    pub certificate: Certificate,
    pub c: Option<u32>,
    pub jet: Vec<Series>,
    pub jet_prec: u32,
    pub mode: Mode,
}

impl Problem {
    pub fn space(&self) -> VarSpace {
        VarSpace::new(self.n)
    }

    pub fn r(&self) -> usize {
        self.f_idx.len()
    }

    pub fn f(&self) -> Vec<Poly> {
        self.f_idx.iter().map(|&i| self.ideal[i].clone()).collect()
    }

    /// Precision to which the jet is actually known.
    pub fn jet_eff_prec(&self) -> u32 {
        self.jet
            .iter()
            .map(Series::prec)
            .fold(self.jet_prec, u32::min)
    }

    /// The representative `y' ∈ A^n`: the jet truncated at its known
    /// precision and read as an exact element.
    pub fn y_prime(&self) -> Vec<Series> {
        let p = self.jet_eff_prec();
        self.jet.iter().map(|s| s.truncate(p).as_exact()).collect()
    }

    /// The minor `M = det(∂f_i/∂Y_j)_{j ∈ minor_cols}`.
    pub fn minor(&self) -> Poly {
        let vars: Vec<Var> = self.minor_cols.iter().map(|&j| Var::Y(j)).collect();
        jacobian(&self.f(), &vars).det()
    }

    /// Y columns outside the minor, ascending.
    pub fn free_cols(&self) -> Vec<usize> {
        (0..self.n)
            .filter(|j| !self.minor_cols.contains(j))
            .collect()
    }

    /// `Σ_k c_jk f_k` for generator `j` against `N·I_j`.
    pub(crate) fn cofactor_residual(&self, cert: &Certificate, j: usize) -> Poly {
        let f = self.f();
        let mut rhs = Poly::zero(self.ctx, self.space());
        for (k, fk) in f.iter().enumerate() {
            rhs = &rhs + &(&cert.cofactors[j][k] * fk);
        }
        &(&cert.n * &self.ideal[j]) - &rhs
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

/// Which class of failure a report carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FailureKind {
    /// Malformed input, or a jet that does not kill `I` modulo `x^(2c+1)`.
    Structural,
    /// Cofactor identity or order condition violated.
    CertificateOrOrder,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub structural: Vec<String>,
    pub checks: Vec<Check>,
    /// Measured `ord(P(y') mod x^(2c+1))` when finite.
    pub e: Option<u32>,
    /// `c` after resolving an omitted value to `e + 1`.
    pub c: Option<u32>,
}

pub const CHECK_COFACTOR: &str = "cofactor_identity";
pub const CHECK_JET: &str = "jet_on_ideal";
pub const CHECK_ORDER: &str = "order_condition";

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        self.structural.is_empty()
            && !self.checks.is_empty()
            && self.checks.iter().all(|c| c.passed)
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failure(&self) -> Option<FailureKind> {
        if self.all_passed() {
            return None;
        }
        if !self.structural.is_empty() || self.check(CHECK_JET).is_some_and(|c| !c.passed) {
            return Some(FailureKind::Structural);
        }
        Some(FailureKind::CertificateOrOrder)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.structural {
            writeln!(f, "structure: FAIL ({s})")?;
        }
        for c in &self.checks {
            let verdict = if c.passed { "pass" } else { "FAIL" };
            writeln!(f, "{}: {verdict} ({})", c.name, c.detail)?;
        }
        Ok(())
    }
}

fn structural_errors(p: &Problem) -> Vec<String> {
    let mut errs = Vec::new();
    if p.n == 0 {
        errs.push("n must be at least 1".into());
        return errs;
    }
    let space = p.space();
    if p.ideal.is_empty() {
        errs.push("ideal has no generators".into());
    }
    let all_polys = p
        .ideal
        .iter()
        .chain(std::iter::once(&p.certificate.n))
        .chain(p.certificate.cofactors.iter().flatten());
    for q in all_polys {
        if q.space() != space || q.ctx() != p.ctx {
            errs.push("polynomial lives in a different variable space or field".into());
            break;
        }
        if space.ts().any(|v| q.uses(v)) {
            errs.push("ideal and certificate may only use Y variables".into());
            break;
        }
    }
    if p.f_idx.is_empty() {
        errs.push("f selects no generators".into());
    }
    if p.f_idx.iter().any(|&i| i >= p.ideal.len()) {
        errs.push("f index out of range".into());
    }
    if has_duplicates(&p.f_idx) {
        errs.push("f indices are not distinct".into());
    }
    let r = p.r();
    if r > p.n {
        errs.push(format!("r = {r} exceeds n = {}", p.n));
    }
    if p.minor_cols.len() != r {
        errs.push(format!(
            "minor has {} columns, expected r = {r}",
            p.minor_cols.len()
        ));
    }
    if p.minor_cols.iter().any(|&j| j >= p.n) {
        errs.push("minor column out of range".into());
    }
    if has_duplicates(&p.minor_cols) {
        errs.push("minor columns are not distinct".into());
    }
    if p.jet.len() != p.n {
        errs.push(format!(
            "jet has {} entries, expected n = {}",
            p.jet.len(),
            p.n
        ));
    }
    if p.jet.iter().any(|s| s.ctx() != p.ctx) {
        errs.push("jet lives in a different field".into());
    }
    let cof = &p.certificate.cofactors;
    if cof.len() != p.ideal.len() || cof.iter().any(|row| row.len() != r) {
        errs.push(format!("cofactor matrix must be {} x {r}", p.ideal.len()));
    }
    if p.c == Some(0) {
        errs.push("c must be at least 1".into());
    }
    if p.mode == Mode::Variety && p.ideal.iter().any(Poly::uses_x) {
        errs.push("variety mode: generators may not involve x".into());
    }
    errs
}

fn has_duplicates(v: &[usize]) -> bool {
    let mut s = v.to_vec();
    s.sort_unstable();
    s.windows(2).any(|w| w[0] == w[1])
}

/// Runs the structural checks, then in order: the cofactor identity, the
/// vanishing of every generator at `y'` modulo `x^(2c+1)`, and the order
/// condition `e < c`.
pub fn validate_problem(p: &Problem) -> ValidationReport {
    let mut report = ValidationReport {
        structural: structural_errors(p),
        ..Default::default()
    };
    if !report.structural.is_empty() {
        return report;
    }
    let y = p.y_prime();
    let p_poly = &p.certificate.n * &p.minor();
    let py = match p_poly.eval(&y, &[]) {
        Ok(v) => v,
        Err(err) => {
            report
                .structural
                .push(format!("cannot evaluate N*M at the jet: {err}"));
            return report;
        }
    };

    let c = match p.c {
        Some(c) => c,
        None => match py.truncate(p.jet_eff_prec()).valuation() {
            Valuation::Finite(e) => e + 1,
            Valuation::AtLeast(k) => {
                report.checks.push(Check {
                    name: CHECK_ORDER,
                    passed: false,
                    detail: format!(
                        "degenerate: N*M vanishes at the jet modulo x^{k}; c cannot be chosen"
                    ),
                });
                return report;
            }
        },
    };
    report.c = Some(c);
    let need = 2 * c + 1;
    if p.ctx.n_work <= need {
        report.structural.push(format!(
            "working precision {} must exceed 2c+1 = {need}",
            p.ctx.n_work
        ));
        return report;
    }
    if p.jet_eff_prec() < need {
        report.structural.push(format!(
            "jet known modulo x^{} but 2c+1 = {need} is required",
            p.jet_eff_prec()
        ));
        return report;
    }

    let bad: Vec<usize> = (0..p.ideal.len())
        .filter(|&j| !p.cofactor_residual(&p.certificate, j).is_zero())
        .collect();
    report.checks.push(Check {
        name: CHECK_COFACTOR,
        passed: bad.is_empty(),
        detail: if bad.is_empty() {
            "N*I_j = sum_k c_jk f_k for every generator".into()
        } else {
            let list: Vec<String> = bad.iter().map(|j| format!("I{}", j + 1)).collect();
            format!("identity fails for {}", list.join(", "))
        },
    });

    let mut jet_detail = Vec::new();
    let mut jet_ok = true;
    for (j, gen) in p.ideal.iter().enumerate() {
        let v = gen.eval(&y, &[]).expect("structure checked").valuation();
        let ok = v.lower_bound() >= need;
        jet_ok &= ok;
        jet_detail.push(format!("ord I{}(y') {v}", j + 1));
    }
    report.checks.push(Check {
        name: CHECK_JET,
        passed: jet_ok,
        detail: format!("{}; need >= {need}", jet_detail.join(", ")),
    });

    let check = match py.truncate(need).valuation() {
        Valuation::Finite(e) => {
            report.e = Some(e);
            Check {
                name: CHECK_ORDER,
                passed: e < c,
                detail: format!("e = {e}, c = {c}, need e < c"),
            }
        }
        Valuation::AtLeast(k) => Check {
            name: CHECK_ORDER,
            passed: false,
            detail: format!("degenerate: N*M vanishes at the jet modulo x^{k}"),
        },
    };
    report.checks.push(check);
    report
}

impl From<ValidationReport> for DesingError {
    fn from(r: ValidationReport) -> Self {
        let mut msgs = r.structural.clone();
        msgs.extend(
            r.checks
                .iter()
                .filter(|c| !c.passed)
                .map(|c| format!("{}: {}", c.name, c.detail)),
        );
        DesingError::Invalid {
            kind: r.failure().unwrap_or(FailureKind::Structural),
            message: msgs.join("; "),
        }
    }
}
