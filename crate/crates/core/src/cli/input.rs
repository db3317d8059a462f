use serde::Deserialize;

use super::CliError;
use crate::desing::{Certificate, Mode, Problem};
use crate::polyring::{Namespaces, Poly, VarSpace};
use crate::ring::{Ctx, Field, Series};

/// The JSON problem file.
#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProblemFile {
    pub field: FieldSpec,
    pub n: usize,
    pub ideal: Vec<String>,
    pub f: Vec<usize>,
    pub minor_cols: Vec<usize>,
    #[serde(default)]
    pub certificate: Option<CertificateSpec>,
    #[serde(default)]
    pub c: Option<u32>,
    pub jet: Vec<String>,
    pub jet_prec: u32,
    #[serde(default)]
    pub n_work: Option<u32>,
    #[serde(default)]
    pub mode: ModeSpec,
}

#[derive(Clone, Copy, Debug, Deserialize, PartialEq, Eq)]
#[serde(tag = "type", deny_unknown_fields)]
pub enum FieldSpec {
    Q,
    Fp { p: u32 },
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CertificateSpec {
    #[serde(rename = "N")]
    pub n: String,
    pub cofactors: Vec<Vec<String>>,
}

#[derive(Clone, Copy, Debug, Default, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
pub enum ModeSpec {
    #[default]
    Dvr,
    Variety,
}

/// Environment variable overriding the default working precision.
pub const NWORK_ENV: &str = "ARCLIFT_NWORK";

impl ProblemFile {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Parse(format!("problem file: {e}")))
    }

    /// Working precision: flag, then file, then environment, then the default.
    pub fn resolve_n_work(&self, flag: Option<u32>, env: Option<&str>) -> Result<u32, CliError> {
        let env = match env {
            Some(s) => Some(s.trim().parse::<u32>().map_err(|_| {
                CliError::Parse(format!("{NWORK_ENV}: not a natural number: {s:?}"))
            })?),
            None => None,
        };
        let n = flag.or(self.n_work).or(env).unwrap_or(Ctx::DEFAULT_N_WORK);
        if n == 0 {
            return Err(CliError::Parse("n_work must be positive".into()));
        }
        Ok(n)
    }

    pub fn into_problem(self, n_work: u32) -> Result<Problem, CliError> {
        let field = match self.field {
            FieldSpec::Q => Field::Rational,
            FieldSpec::Fp { p } => {
                Field::prime(p).map_err(|e| CliError::Parse(format!("field: {e}")))?
            }
        };
        let ctx = Ctx::new(field, n_work);
        if self.n == 0 {
            return Err(CliError::Structural("n must be at least 1".into()));
        }
        let space = VarSpace::new(self.n);
        let poly = |s: &str, what: String| {
            Poly::parse(s, ctx, space, Namespaces::Y)
                .map_err(|e| CliError::Parse(format!("{what}: {e}")))
        };
        let ideal = self
            .ideal
            .iter()
            .enumerate()
            .map(|(i, s)| poly(s, format!("ideal[{i}]")))
            .collect::<Result<Vec<_>, _>>()?;
        let jet = self
            .jet
            .iter()
            .enumerate()
            .map(|(i, s)| {
                Series::parse(s, ctx).map_err(|e| CliError::Parse(format!("jet[{i}]: {e}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        let zero_based = |v: &[usize]| {
            v.iter()
                .map(|&i| i.checked_sub(1).unwrap_or(usize::MAX))
                .collect::<Vec<_>>()
        };
        let f_idx = zero_based(&self.f);
        let minor_cols = zero_based(&self.minor_cols);
        let certificate = match &self.certificate {
            Some(spec) => Certificate {
                n: poly(&spec.n, "certificate.N".into())?,
                cofactors: spec
                    .cofactors
                    .iter()
                    .enumerate()
                    .map(|(j, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(k, s)| poly(s, format!("certificate.cofactors[{j}][{k}]")))
                            .collect::<Result<Vec<_>, _>>()
                    })
                    .collect::<Result<Vec<_>, _>>()?,
            },
            None => {
                let mut sorted = f_idx.clone();
                sorted.sort_unstable();
                if sorted != (0..ideal.len()).collect::<Vec<_>>() {
                    return Err(CliError::Structural(
                        "a certificate is required unless f lists every ideal generator".into(),
                    ));
                }
                Certificate::trivial(ctx, space, ideal.len(), &f_idx)
            }
        };
        Ok(Problem {
            ctx,
            n: self.n,
            ideal,
            f_idx,
            minor_cols,
            certificate,
            c: self.c,
            jet,
            jet_prec: self.jet_prec,
            mode: match self.mode {
                ModeSpec::Dvr => Mode::Dvr,
                ModeSpec::Variety => Mode::Variety,
            },
        })
    }
}

/// Reads and parses a problem file with the working-precision precedence
/// applied.
pub fn load_problem(
    text: &str,
    n_work_flag: Option<u32>,
    env: Option<&str>,
) -> Result<Problem, CliError> {
    let file = ProblemFile::from_json(text)?;
    let n_work = file.resolve_n_work(n_work_flag, env)?;
    file.into_problem(n_work)
}

/// Comma-separated series list.
pub fn parse_series_list(text: &str, ctx: Ctx, what: &str) -> Result<Vec<Series>, CliError> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',')
        .enumerate()
        .map(|(i, s)| {
            Series::parse(s.trim(), ctx).map_err(|e| CliError::Parse(format!("{what}[{i}]: {e}")))
        })
        .collect()
}
