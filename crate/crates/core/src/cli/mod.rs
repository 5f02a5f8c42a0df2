//! Subcommands. Each returns the text for stdout and an exit code:
//! 0 success, 1 failed check, 2 bad input, 3 frozen direction, 4 graph not
//! closed.

use std::fmt::Write as _;

use serde_json::{json, Value};

use tropiclust::character::Limits;
use tropiclust::graph::exchange_graph;
use tropiclust::lattice::IntMatrix;
use tropiclust::quantum::{check_quantum_datum, solve_quantization, transport_lambda, QuantumDatum};
use tropiclust::poly::RationalFn;
use tropiclust::random::{random_path, rng_from};
use tropiclust::seed::{fixtures, generalized_mutate, GeneralizedVars, Seed};
use tropiclust::seed::json::{parse_seed_file, seed_value, SeedFile};
use tropiclust::suite::{run_suite, SuiteOptions, SuiteReport};
use tropiclust::tropical::{initial_state, TropicalState};
use tropiclust::Error;

use crate::Source;

pub mod trace;

pub const EXIT_FAILED: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_FROZEN: u8 = 3;
pub const EXIT_NOT_CLOSED: u8 = 4;

pub struct Output {
    pub stdout: String,
    pub stderr: Option<String>,
    pub code: u8,
}

impl Output {
    fn ok(stdout: String) -> Self {
        Self { stdout, stderr: None, code: 0 }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub code: u8,
    pub message: String,
    /// Anything already produced.
    pub stdout: String,
}

impl CliError {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Self { code, message: format!("error: {}", message.into()), stdout: String::new() }
    }

    pub fn usage(message: impl Into<String>) -> Self {
        Self::new(EXIT_INPUT, message)
    }

    /// Error raised while taking step `step` (1-based) of a path.
    pub fn at_step(step: usize, k: &str, e: Error) -> Self {
        let code = match e {
            Error::FrozenDirection(_) => EXIT_FROZEN,
            Error::UnknownLabel(_) | Error::Parse(_) | Error::InvalidSeed(_) | Error::UnsupportedRank(_) => EXIT_INPUT,
            _ => EXIT_FAILED,
        };
        Self::new(code, format!("step {step} (mutation at `{k}`): {e}"))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::FrozenDirection(_) => EXIT_FROZEN,
            Error::GrowthLimit(_) | Error::ExactDivisionFailure(_) | Error::DivisibilityFailure { .. } => EXIT_FAILED,
            _ => EXIT_INPUT,
        };
        Self::new(code, e.to_string())
    }
}

/// Reads the seed and checks it, together with its quantum datum.
pub fn load(src: &Source) -> Result<SeedFile, CliError> {
    let file = load_unchecked(src)?;
    let report = file.seed.validate();
    if !report.is_valid() {
        return Err(CliError::usage(format!("invalid seed:\n{report}")));
    }
    if let Some(l) = &file.lambda {
        let q = QuantumDatum::new(l.clone())?;
        let qr = check_quantum_datum(&file.seed, &q);
        if !qr.is_valid() {
            return Err(CliError::usage(format!("invalid quantum datum:\n{}", qr.to_string().trim_end())));
        }
    }
    Ok(file)
}

fn load_unchecked(src: &Source) -> Result<SeedFile, CliError> {
    if let Some(name) = &src.fixture {
        return Ok(SeedFile { seed: fixtures::by_name(name)?, lambda: None });
    }
    let path = src.file.as_ref().expect("clap requires a source");
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    Ok(parse_seed_file(&text)?)
}

pub fn parse_path(path: &str) -> Vec<String> {
    path.split(',').map(str::trim).filter(|s| !s.is_empty()).map(String::from).collect()
}

/// Follows `path` from the root, naming the step that fails.
pub fn walk(root: &TropicalState, path: &[String]) -> Result<Vec<TropicalState>, CliError> {
    let mut out = vec![root.clone()];
    for (i, k) in path.iter().enumerate() {
        let next = out[i].mutate(k).map_err(|e| CliError::at_step(i + 1, k, e))?;
        out.push(next);
    }
    Ok(out)
}

/// Right-aligned table with row and column labels.
pub fn table(m: &IntMatrix, indent: &str) -> String {
    let rows = m.rows().labels();
    let cols = m.cols().labels();
    let dense = m.to_dense();
    let mut w = rows.iter().map(String::len).max().unwrap_or(0);
    w = w.max(cols.iter().map(String::len).max().unwrap_or(0));
    for r in &dense {
        for x in r {
            w = w.max(x.to_string().len());
        }
    }
    let mut out = String::new();
    let _ = write!(out, "{indent}{:>w$}", "");
    for c in cols {
        let _ = write!(out, " {c:>w$}");
    }
    out.push('\n');
    for (r, row) in rows.iter().zip(&dense) {
        let _ = write!(out, "{indent}{r:>w$}");
        for x in row {
            let _ = write!(out, " {:>w$}", x.to_string());
        }
        out.push('\n');
    }
    out
}

fn int_json(x: &num_bigint::BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(x.to_string()),
    }
}

/// `{"rows": [...], "cols": [...], "entries": [[...], ...]}`.
pub fn matrix_json(m: &IntMatrix) -> Value {
    let entries: Vec<Value> = m.to_dense().iter().map(|r| Value::Array(r.iter().map(int_json).collect())).collect();
    json!({"rows": m.rows().labels(), "cols": m.cols().labels(), "entries": entries})
}

pub fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

pub fn validate(src: &Source) -> Result<Output, CliError> {
    let file = load_unchecked(src)?;
    let report = file.seed.validate();
    let mut out = format!("seed: {report}\n");
    let mut ok = report.is_valid();
    if let Some(l) = &file.lambda {
        let q = QuantumDatum::new(l.clone())?;
        let qr = check_quantum_datum(&file.seed, &q);
        ok &= qr.is_valid();
        out.push_str("quantum datum:\n");
        for line in qr.to_string().lines() {
            let _ = writeln!(out, "  {line}");
        }
    }
    if ok {
        Ok(Output::ok(out))
    } else {
        Err(CliError { code: EXIT_INPUT, message: "error: validation failed".into(), stdout: out })
    }
}

pub fn graph(src: &Source, max_seeds: usize, dot: bool, as_json: bool) -> Result<Output, CliError> {
    let file = load(src)?;
    let g = exchange_graph(&file.seed, max_seeds)?;
    let stdout = if dot {
        g.to_dot()
    } else if as_json {
        pretty(&g.to_json())
    } else {
        let mut out = format!("{}\n", g.summary());
        for n in &g.nodes {
            let _ = writeln!(out, "  n{} [{}] {}", n.id, n.path.join(","), n.key);
        }
        for e in &g.edges {
            let _ = writeln!(out, "  n{} -- n{} ({})", e.from, e.to, e.direction);
        }
        out
    };
    if g.closed || as_json {
        return Ok(Output::ok(stdout));
    }
    Ok(Output { stdout, stderr: Some(format!("error: {}", g.summary())), code: EXIT_NOT_CLOSED })
}

pub struct AuditArgs {
    pub depth: usize,
    pub samples: usize,
    pub rng: u64,
    pub max_terms: usize,
    pub characters: bool,
    pub quantum: bool,
    pub json: bool,
}

fn report_json(r: &SuiteReport, a: &AuditArgs) -> Value {
    let fail = |f: &tropiclust::suite::Failure| json!({"path": f.path, "suite": f.suite, "check": f.check, "detail": f.detail});
    json!({
        "passed": r.passed(),
        "depth": a.depth,
        "samples": a.samples,
        "rng": a.rng,
        "paths": r.paths,
        "steps": r.steps,
        "character_steps": r.character_steps,
        "quantum_steps": r.quantum_steps,
        "truncated": r.truncated,
        "quantized": r.quantized,
        "g_sums": r.g_sums.iter().map(int_json).collect::<Vec<_>>(),
        "cokernel": r.cokernel,
        "notes": r.notes.len(),
        "failures": r.failures.iter().map(fail).collect::<Vec<_>>(),
    })
}

pub fn audit(src: &Source, a: &AuditArgs) -> Result<Output, CliError> {
    let file = load(src)?;
    let q = file.lambda.clone().map(QuantumDatum::new).transpose()?;
    let opts = SuiteOptions {
        depth: a.depth,
        samples: a.samples,
        rng_seed: a.rng,
        characters: a.characters,
        quantum: a.quantum,
        limits: Limits { max_terms: Some(a.max_terms), max_entry: SuiteOptions::default().limits.max_entry },
        stop_on_growth: false,
    };
    if file.seed.is_generalized() {
        return generalized_audit(&file.seed, a);
    }
    let report = run_suite(&file.seed, q.as_ref(), &opts)?;
    let stdout = if a.json {
        pretty(&report_json(&report, a))
    } else {
        format!("audit: depth {}, samples {}, rng {}\n{report}", a.depth, a.samples, a.rng)
    };
    if report.passed() {
        Ok(Output::ok(stdout))
    } else {
        let msg = format!("error: {} invariant failures", report.failures.len());
        Ok(Output { stdout, stderr: Some(msg), code: EXIT_FAILED })
    }
}

pub fn quantize(src: &Source, as_json: bool) -> Result<Output, CliError> {
    let file = load(src)?;
    let sol = solve_quantization(&file.seed);
    if as_json {
        let v = match &sol {
            Some(s) => json!({
                "quantizable": true,
                "lambda": matrix_json(s.particular.matrix()),
                "homogeneous": s.homogeneous.iter().map(matrix_json).collect::<Vec<_>>(),
            }),
            None => json!({"quantizable": false, "lambda": null, "homogeneous": []}),
        };
        return Ok(Output::ok(pretty(&v)));
    }
    let Some(s) = sol else {
        return Ok(Output::ok("no compatible quantum datum\n".into()));
    };
    let mut out = String::from("compatible quantum datum:\n");
    out.push_str(&table(s.particular.matrix(), "  "));
    let _ = writeln!(out, "homogeneous solutions: {}", s.homogeneous.len());
    for (i, h) in s.homogeneous.iter().enumerate() {
        let _ = writeln!(out, "  [{}]", i + 1);
        out.push_str(&table(h, "  "));
    }
    Ok(Output::ok(out))
}

pub fn export(src: &Source, path: &str, attach: bool) -> Result<Output, CliError> {
    let file = load(src)?;
    let q = match &file.lambda {
        Some(l) => Some(QuantumDatum::new(l.clone())?),
        None if attach => Some(
            solve_quantization(&file.seed)
                .ok_or_else(|| CliError::new(EXIT_FAILED, "no compatible quantum datum"))?
                .particular,
        ),
        None => None,
    };
    let states = walk(&initial_state(&file.seed)?, &parse_path(path))?;
    let last = states.last().expect("root");
    let lambda = q.map(|q| transport_lambda(last, &q)).transpose()?.map(QuantumDatum::into_matrix);
    Ok(Output::ok(pretty(&seed_value(last.current(), lambda.as_ref()))))
}

/// Generalized seeds carry no tropical layer here: walk random paths and
/// check that every variable is a Laurent polynomial and that each step is
/// an involution.
fn generalized_audit(seed: &Seed, a: &AuditArgs) -> Result<Output, CliError> {
    let lat = seed.lattice();
    let mut root = GeneralizedVars::new();
    for l in lat.labels() {
        root.insert(l.clone(), RationalFn::var(lat, l)?);
    }
    let mut rng = rng_from(a.rng);
    let (mut steps, mut failures) = (0usize, Vec::new());
    for _ in 0..a.samples {
        let path = random_path(&mut rng, seed, a.depth);
        let (mut vars, mut s) = (root.clone(), seed.clone());
        for (i, k) in path.iter().enumerate() {
            let (v, t) = generalized_mutate(&vars, &s, k)?;
            steps += 1;
            let here = path[..=i].join(",");
            for (l, x) in &v {
                if !x.is_laurent() {
                    failures.push(format!("path [{here}] laurent: {l}: {}", x.render("a")));
                }
            }
            if generalized_mutate(&v, &t, k)? != (vars.clone(), s.clone()) {
                failures.push(format!("path [{here}] involution: mutating again at {k} does not return"));
            }
            (vars, s) = (v, t);
        }
    }
    let passed = failures.is_empty();
    let stdout = if a.json {
        pretty(&json!({
            "passed": passed,
            "generalized": true,
            "depth": a.depth,
            "samples": a.samples,
            "rng": a.rng,
            "paths": a.samples,
            "steps": steps,
            "failures": failures,
        }))
    } else {
        let mut out = format!("audit (generalized): depth {}, samples {}, rng {}\n", a.depth, a.samples, a.rng);
        let _ = writeln!(out, "paths: {}\nsteps: {steps}", a.samples);
        if passed {
            out.push_str("all checks passed\n");
        } else {
            let _ = writeln!(out, "{} failures:", failures.len());
            for f in &failures {
                let _ = writeln!(out, "  {f}");
            }
        }
        out
    };
    if passed {
        Ok(Output::ok(stdout))
    } else {
        let msg = format!("error: {} invariant failures", failures.len());
        Ok(Output { stdout, stderr: Some(msg), code: EXIT_FAILED })
    }
}
