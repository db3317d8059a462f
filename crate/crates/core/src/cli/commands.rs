use std::fmt::Display;
use std::fs;

use serde_json::{json, Map, Value};

use super::input::{load_problem, parse_series_list};
use super::{
    CliError, Command, Common, ExtractArgs, Format, LiftArgs, OracleArgs, Outcome, RoundtripArgs,
};
use crate::arcs::{
    extract_params, extract_t, find_strict_reference, lift_at, lift_batch, make_lift, offset_lift,
    oracle_enumerate, LiftResult, ReferenceSearch, SearchStage,
};
use crate::desing::{
    build_model, validate_problem, verify_model, Check, FailureKind, Problem, SmoothModel,
};
use crate::ring::Series;
use crate::rng::SplitMix64;

/// A report under construction: text lines and a JSON object side by side.
struct Doc {
    text: String,
    json: Map<String, Value>,
}

impl Doc {
    fn new(command: &str) -> Self {
        let mut doc = Doc {
            text: String::new(),
            json: Map::new(),
        };
        doc.put("command", command, json!(command));
        doc
    }

    fn put(&mut self, key: &str, text: impl Display, value: Value) {
        self.text.push_str(&format!("{key} = {text}\n"));
        self.json.insert(key.to_string(), value);
    }

    fn put_num(&mut self, key: &str, v: impl Display + Into<Value> + Copy) {
        self.put(key, v, v.into());
    }

    fn put_str(&mut self, key: &str, v: impl Display) {
        let s = v.to_string();
        self.put(key, &s, json!(s));
    }

    fn line(&mut self, s: impl Display) {
        self.text.push_str(&format!("{s}\n"));
    }

    fn set(&mut self, key: &str, v: Value) {
        self.json.insert(key.to_string(), v);
    }
}

fn strings<T: Display>(items: &[T]) -> Vec<String> {
    items.iter().map(ToString::to_string).collect()
}

fn tuple<T: Display>(items: &[T]) -> String {
    format!("({})", strings(items).join(", "))
}

fn load(common: &Common, n_work: Option<u32>, env: Option<&str>) -> Result<Problem, CliError> {
    let text = fs::read_to_string(&common.problem)
        .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", common.problem.display())))?;
    load_problem(&text, n_work.or(common.n_work), env)
}

fn header(doc: &mut Doc, p: &Problem) {
    doc.put_str("field", p.ctx.field);
    doc.put_num("n_work", p.ctx.n_work);
}

fn checks_json(checks: &[Check]) -> Value {
    Value::Array(
        checks
            .iter()
            .map(|c| json!({"name": c.name, "passed": c.passed, "detail": c.detail}))
            .collect(),
    )
}

fn emit_checks(doc: &mut Doc, prefix: &str, checks: &[Check]) {
    for c in checks {
        let verdict = if c.passed { "pass" } else { "FAIL" };
        doc.line(format!("{prefix} {} = {verdict} ({})", c.name, c.detail));
    }
}

fn model(doc: &mut Doc, p: Problem) -> Result<SmoothModel, CliError> {
    let m = build_model(&p)?;
    doc.put_num("e", m.e());
    doc.put_num("c", m.c());
    doc.put_num("model_precision", m.precision());
    doc.put_num("param_count", m.param_count() as u64);
    Ok(m)
}

fn validate(doc: &mut Doc, common: &Common, env: Option<&str>) -> Result<(), CliError> {
    let p = load(common, None, env)?;
    header(doc, &p);
    let report = validate_problem(&p);
    for s in &report.structural {
        doc.line(format!("structure = FAIL ({s})"));
    }
    doc.set("structural", json!(report.structural));
    emit_checks(doc, "check", &report.checks);
    doc.set("checks", checks_json(&report.checks));
    if let Some(e) = report.e {
        doc.put_num("e", e);
    }
    if let Some(c) = report.c {
        doc.put_num("c", c);
    }
    let first_failure = || {
        report
            .structural
            .first()
            .cloned()
            .or_else(|| {
                report
                    .checks
                    .iter()
                    .find(|c| !c.passed)
                    .map(|c| format!("{}: {}", c.name, c.detail))
            })
            .unwrap_or_default()
    };
    match report.failure() {
        None => Ok(()),
        Some(FailureKind::Structural) => Err(CliError::Structural(first_failure())),
        Some(FailureKind::CertificateOrOrder) => Err(CliError::Certificate(first_failure())),
    }
}

fn desingularize(doc: &mut Doc, common: &Common, env: Option<&str>) -> Result<(), CliError> {
    let p = load(common, None, env)?;
    header(doc, &p);
    let m = model(doc, p)?;
    doc.put_num("shift", m.shift());
    doc.put_str("N", m.n_norm());
    doc.put_str("M", m.minor());
    doc.put_str("P", m.p());
    doc.put_str("d", m.d());
    doc.put_str("H", m.h());
    doc.put_str("G", m.g_matrix());
    doc.put_str("Gy", m.gy());
    doc.put_str("Hy", m.hy());
    for (i, a) in m.a().iter().enumerate() {
        doc.line(format!("a{} = {a}", i + 1));
    }
    doc.set("a", json!(strings(m.a())));
    for (i, q) in m.q().iter().enumerate() {
        doc.line(format!("Q{} = {q}", i + 1));
    }
    doc.set("Q", json!(strings(m.q())));
    for (i, g) in m.equations().iter().enumerate() {
        doc.line(format!("g{} = {g}", i + 1));
    }
    doc.set("g", json!(strings(m.equations())));
    doc.put_str("loc_s", m.loc_s());
    doc.put_str("loc_s'", m.loc_s_prime());
    let free: Vec<String> = m
        .free_cols()
        .iter()
        .enumerate()
        .map(|(k, col)| format!("T{}:Y{}", m.r() + k + 1, col + 1))
        .collect();
    doc.put("free", free.join(", "), json!(free));
    let report = verify_model(&m);
    emit_checks(doc, "verify", &report.checks);
    doc.set("verify", checks_json(&report.checks));
    if !report.all_passed() {
        let failed: Vec<&str> = report
            .checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| c.name)
            .collect();
        return Err(CliError::Certificate(format!(
            "model verification failed: {}",
            failed.join(", ")
        )));
    }
    Ok(())
}

fn emit_lift(doc: &mut Doc, prefix: &str, lift: &LiftResult) -> Map<String, Value> {
    for (i, t) in lift.t.iter().enumerate() {
        doc.line(format!("{prefix}t{} = {t}", i + 1));
    }
    for (i, y) in lift.y.iter().enumerate() {
        doc.line(format!("{prefix}y''{} = {y}", i + 1));
    }
    doc.line(format!("{prefix}precision = {}", lift.prec()));
    doc.line(format!("{prefix}residual_f >= {}", lift.residual_f));
    doc.line(format!("{prefix}residual_I >= {}", lift.residual_i));
    doc.line(format!("{prefix}strict = {}", lift.strict));
    doc.line(format!("{prefix}iterations = {}", lift.iterations));
    let mut obj = Map::new();
    obj.insert("t".into(), json!(strings(&lift.t)));
    obj.insert("y".into(), json!(strings(&lift.y)));
    obj.insert("precision".into(), json!(lift.prec()));
    obj.insert("residual_f".into(), json!(lift.residual_f));
    obj.insert("residual_I".into(), json!(lift.residual_i));
    obj.insert("strict".into(), json!(lift.strict));
    obj.insert("iterations".into(), json!(lift.iterations));
    obj
}

fn series_arg(
    m: &SmoothModel,
    text: &str,
    what: &str,
    len: usize,
) -> Result<Vec<Series>, CliError> {
    let v = parse_series_list(text, m.ctx(), what)?;
    if v.len() != len {
        return Err(CliError::Parse(format!(
            "{what}: expected {len} entries, got {}",
            v.len()
        )));
    }
    Ok(v)
}

/// The supplied reference arc, or the result of the strict-reference search.
fn reference(
    doc: &mut Doc,
    m: &SmoothModel,
    supplied: Option<&str>,
    depth: u32,
) -> Result<LiftResult, CliError> {
    let (lift, stage) = match supplied {
        Some(text) => {
            let y = series_arg(m, text, "reference", m.n())?;
            let t = extract_t(m, &y)?;
            (lift_at(m, &t)?, "supplied")
        }
        None => match find_strict_reference(m, depth) {
            ReferenceSearch::Found { lift, stage } => {
                let stage = match stage {
                    SearchStage::Canonical => "canonical",
                    SearchStage::Layered => "layered",
                };
                (lift, stage)
            }
            ReferenceSearch::NotFound { depth } => {
                doc.put_str("reference_stage", "none");
                return Err(CliError::NotFound(format!(
                    "no strict reference found within search depth {depth}"
                )));
            }
        },
    };
    doc.put_str("reference_stage", stage);
    let obj = emit_lift(doc, "reference.", &lift);
    doc.set("reference", Value::Object(obj));
    Ok(lift)
}

fn lift(doc: &mut Doc, args: &LiftArgs, env: Option<&str>) -> Result<(), CliError> {
    let p = load(&args.common, args.prec, env)?;
    header(doc, &p);
    let m = model(doc, p)?;
    let k = m.param_count();
    let mut lifts = Vec::new();
    let mut failure = None;
    if let Some(text) = &args.source.t_free {
        let t_free = series_arg(&m, text, "t_free", k)?;
        lifts.push((None, make_lift(&m, &t_free)));
    } else if let Some(text) = &args.source.params {
        let z = series_arg(&m, text, "params", k)?;
        let reference = reference(doc, &m, args.reference.as_deref(), args.search_depth)?;
        lifts.push((Some(z.clone()), offset_lift(&m, &reference, &z)));
    } else if let Some(v) = &args.source.random {
        let (seed, count) = (v[0], v[1]);
        let mut rng = SplitMix64::new(seed);
        let inputs: Vec<Vec<Series>> = (0..count)
            .map(|_| (0..k).map(|_| rng.series(m.ctx(), 1, 6)).collect())
            .collect();
        doc.put_num("seed", seed);
        doc.put_num("count", count);
        for r in lift_batch(&m, &inputs) {
            lifts.push((None, r));
        }
    }
    let multiple = lifts.len() > 1;
    let mut out = Vec::new();
    for (i, (z, res)) in lifts.into_iter().enumerate() {
        let prefix = if multiple {
            format!("lift{}.", i + 1)
        } else {
            String::new()
        };
        if let Some(z) = &z {
            doc.line(format!("{prefix}z = {}", tuple(z)));
        }
        match res {
            Ok(l) => {
                let mut obj = emit_lift(doc, &prefix, &l);
                if let Some(z) = z {
                    obj.insert("z".into(), json!(strings(&z)));
                }
                out.push(Value::Object(obj));
            }
            Err(e) => {
                doc.line(format!("{prefix}error = {e}"));
                out.push(json!({"error": e.to_string()}));
                failure.get_or_insert(CliError::from(e));
            }
        }
    }
    doc.set("lifts", Value::Array(out));
    failure.map_or(Ok(()), Err)
}

fn extract(doc: &mut Doc, args: &ExtractArgs, env: Option<&str>) -> Result<(), CliError> {
    let p = load(&args.common, None, env)?;
    header(doc, &p);
    let m = model(doc, p)?;
    let y = series_arg(&m, &args.arc, "arc", m.n())?;
    let t = extract_t(&m, &y)?;
    doc.put("t", tuple(&t), json!(strings(&t)));
    doc.put_num("t_precision", t.iter().map(Series::prec).min().unwrap_or(0));
    if let Some(text) = &args.reference {
        let reference = reference(doc, &m, Some(text), 0)?;
        let z = extract_params(&m, &reference, &y)?;
        doc.put("z", tuple(&z), json!(strings(&z)));
        doc.put_num("z_precision", z.iter().map(Series::prec).min().unwrap_or(0));
    }
    Ok(())
}

/// Coefficients below `prec` where `a` and `b` differ or are unknown.
fn discrepancy(a: &Series, b: &Series, prec: u32) -> u32 {
    (0..prec)
        .filter(|&k| match (a.coeff(k), b.coeff(k)) {
            (Some(u), Some(v)) => u != v,
            _ => true,
        })
        .count() as u32
}

fn roundtrip(doc: &mut Doc, args: &RoundtripArgs, env: Option<&str>) -> Result<(), CliError> {
    let p = load(&args.common, None, env)?;
    header(doc, &p);
    let m = model(doc, p)?;
    let reference = reference(doc, &m, args.reference.as_deref(), args.search_depth)?;
    let contract = m.ctx().n_work.saturating_sub(4 * m.c() + 1);
    doc.put_num("seed", args.seed);
    doc.put_num("count", args.count);
    doc.put_num("contract_precision", contract);
    let mut rng = SplitMix64::new(args.seed);
    let mut worst = 0;
    let mut draws = Vec::new();
    for i in 0..args.count {
        let z: Vec<Series> = (0..m.param_count())
            .map(|_| rng.series(m.ctx(), 0, 5))
            .collect();
        let y = offset_lift(&m, &reference, &z)?;
        let back = extract_params(&m, &reference, &y.y)?;
        let miss: u32 = z
            .iter()
            .zip(&back)
            .map(|(a, b)| discrepancy(a, b, contract))
            .sum();
        worst = worst.max(miss);
        doc.line(format!(
            "draw{} = {} -> {} discrepancy {miss}",
            i + 1,
            tuple(&z),
            tuple(&back)
        ));
        draws.push(json!({"z": strings(&z), "recovered": strings(&back), "discrepancy": miss}));
    }
    doc.set("draws", Value::Array(draws));
    doc.put_num("max_discrepancy", worst);
    if worst > 0 {
        return Err(CliError::Failure(format!(
            "recovered parameters differ below x^{contract} in {worst} coefficients"
        )));
    }
    Ok(())
}

fn oracle(doc: &mut Doc, args: &OracleArgs, env: Option<&str>) -> Result<(), CliError> {
    let p = load(&args.common, None, env)?;
    header(doc, &p);
    let jets = oracle_enumerate(&p, args.prec)?;
    doc.put_num("q", jets.q);
    doc.put_num("m", jets.m);
    doc.put_num("jets", jets.len() as u64);
    let lines = jets.lines();
    for l in &lines {
        doc.line(format!("jet {l}"));
    }
    doc.set("jet_list", json!(lines));
    let m = model(doc, p)?;
    let reference = match find_strict_reference(&m, args.search_depth) {
        ReferenceSearch::Found { lift, .. } => Some(lift),
        ReferenceSearch::NotFound { .. } => None,
    };
    let mut rng = SplitMix64::new(args.seed);
    let mut sampled = 0u32;
    let mut contained = 0u32;
    if let Some(reference) = &reference {
        for _ in 0..args.samples {
            let z: Vec<Series> = (0..m.param_count())
                .map(|_| rng.series(m.ctx(), 0, 5))
                .collect();
            let y = offset_lift(&m, reference, &z)?;
            sampled += 1;
            if jets.contains_arc(&y.y) {
                contained += 1;
            }
        }
    }
    doc.put_num("samples", sampled);
    doc.put(
        "contained",
        format!("{contained}/{sampled}"),
        json!(contained),
    );
    if contained < sampled {
        return Err(CliError::Failure(format!(
            "{} sampled lifts fall outside the enumerated jets",
            sampled - contained
        )));
    }
    Ok(())
}

fn render(doc: Doc, format: Format) -> String {
    match format {
        Format::Text => doc.text,
        Format::Json => {
            let mut s =
                serde_json::to_string_pretty(&Value::Object(doc.json)).expect("serializable");
            s.push('\n');
            s
        }
    }
}

pub(super) fn dispatch(command: Command, env: Option<&str>) -> Outcome {
    let (name, common) = match &command {
        Command::Validate(c) => ("validate", c),
        Command::Desingularize(c) => ("desingularize", c),
        Command::Lift(a) => ("lift", &a.common),
        Command::Extract(a) => ("extract", &a.common),
        Command::Roundtrip(a) => ("roundtrip", &a.common),
        Command::Oracle(a) => ("oracle", &a.common),
    };
    let mut doc = Doc::new(name);
    let result = match &command {
        Command::Validate(c) => validate(&mut doc, c, env),
        Command::Desingularize(c) => desingularize(&mut doc, c, env),
        Command::Lift(a) => lift(&mut doc, a, env),
        Command::Extract(a) => extract(&mut doc, a, env),
        Command::Roundtrip(a) => roundtrip(&mut doc, a, env),
        Command::Oracle(a) => oracle(&mut doc, a, env),
    };
    let (status, code, mut stderr) = match &result {
        Ok(()) => ("ok", 0, String::new()),
        Err(e) => (
            e.status(),
            e.exit_code(),
            format!("arclift: {}: {e}\n", e.status()),
        ),
    };
    if let Err(e) = &result {
        doc.put_str("error", e);
    }
    doc.put_str("status", status);
    doc.put_num("exit_code", code);
    let rendered = render(doc, common.format);
    match &common.out {
        Some(path) => match fs::write(path, &rendered) {
            Ok(()) => Outcome {
                stdout: String::new(),
                stderr,
                code,
            },
            Err(e) => {
                stderr.push_str(&format!(
                    "arclift: failure: cannot write {}: {e}\n",
                    path.display()
                ));
                Outcome {
                    stdout: rendered,
                    stderr,
                    code: 1,
                }
            }
        },
        None => Outcome {
            stdout: rendered,
            stderr,
            code,
        },
    }
}
