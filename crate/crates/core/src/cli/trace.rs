//! `trace`: the data after each step of a mutation path.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use serde_json::{json, Map, Value};

use tropiclust::character::{initial_characters, CharacterState, Limits};
use tropiclust::poly::RationalFn;
use tropiclust::quantum::{solve_quantization, transport_lambda, QuantumDatum};
use tropiclust::seed::{generalized_mutate, GeneralizedVars};
use tropiclust::seed::json::SeedFile;
use tropiclust::seed::Seed;
use tropiclust::tropical::{initial_state, TropicalState};

use super::{load, matrix_json, parse_path, pretty, table, walk, CliError, Output};
use crate::Source;

const ALL: [&str; 7] = ["b", "g", "c", "f", "a", "x", "lambda"];

fn parse_show(show: Option<&str>, generalized: bool) -> Result<BTreeSet<&'static str>, CliError> {
    let default = if generalized { "b,a" } else { "b,g,c" };
    let mut out = BTreeSet::new();
    for item in show.unwrap_or(default).split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let item = item.to_ascii_lowercase();
        let Some(k) = ALL.iter().find(|k| **k == item) else {
            return Err(CliError::usage(format!("--show: unknown item `{item}` (known: {})", ALL.join(","))));
        };
        if generalized && !matches!(*k, "b" | "a") {
            return Err(CliError::usage(format!("--show {k} is not available with --generalized (use b,a)")));
        }
        out.insert(*k);
    }
    Ok(out)
}

/// One step of a trace.
struct Record {
    step: usize,
    direction: Option<String>,
    path: Vec<String>,
    seed: Seed,
    trop: Option<TropicalState>,
    chars: Option<CharacterState>,
    general: Option<GeneralizedVars>,
    lambda: Option<QuantumDatum>,
}

pub fn run(
    src: &Source,
    path: &str,
    show: Option<&str>,
    as_json: bool,
    generalized: bool,
    max_terms: usize,
) -> Result<Output, CliError> {
    let show = parse_show(show, generalized)?;
    let file = load(src)?;
    let path = parse_path(path);
    let records = if generalized {
        generalized_records(&file.seed, &path)?
    } else {
        classical_records(&file, &path, &show, max_terms)?
    };
    let missing_lambda = show.contains("lambda") && records.first().is_some_and(|r| r.lambda.is_none());
    if as_json {
        let v: Vec<Value> = records.iter().map(|r| record_json(r, &show)).collect();
        return Ok(Output::ok(pretty(&Value::Array(v))));
    }
    let mut out = String::new();
    if missing_lambda {
        out.push_str("no compatible quantum datum\n");
    }
    for r in &records {
        render_text(&mut out, r, &show);
    }
    Ok(Output::ok(out))
}

fn classical_records(
    file: &SeedFile,
    path: &[String],
    show: &BTreeSet<&str>,
    max_terms: usize,
) -> Result<Vec<Record>, CliError> {
    let states = walk(&initial_state(&file.seed)?, path)?;
    let want_chars = ["f", "a", "x"].iter().any(|k| show.contains(k));
    let mut chars = Vec::new();
    if want_chars {
        let limits = Limits { max_terms: Some(max_terms), max_entry: None };
        let mut cs = initial_characters(&file.seed)?.with_limits(limits);
        chars.push(cs.clone());
        for (i, k) in path.iter().enumerate() {
            cs = cs.mutate(k).map_err(|e| CliError::at_step(i + 1, k, e))?;
            chars.push(cs.clone());
        }
    }
    let q = if show.contains("lambda") {
        match &file.lambda {
            Some(l) => Some(QuantumDatum::new(l.clone())?),
            None => solve_quantization(&file.seed).map(|s| s.particular),
        }
    } else {
        None
    };
    let mut chars = chars.into_iter();
    states
        .into_iter()
        .enumerate()
        .map(|(i, st)| {
            let lambda = q.as_ref().map(|q| transport_lambda(&st, q)).transpose()?;
            Ok(Record {
                step: i,
                direction: i.checked_sub(1).map(|j| path[j].clone()),
                path: st.path().to_vec(),
                seed: st.current().clone(),
                chars: chars.next(),
                trop: Some(st),
                general: None,
                lambda,
            })
        })
        .collect()
}

fn generalized_records(seed: &Seed, path: &[String]) -> Result<Vec<Record>, CliError> {
    if seed.theta().is_none() {
        return Err(CliError::usage("--generalized needs a seed with exchange polynomials (`theta`)"));
    }
    let lat = seed.lattice();
    let mut vars = GeneralizedVars::new();
    for l in lat.labels() {
        vars.insert(l.clone(), RationalFn::var(lat, l)?);
    }
    let mut s = seed.clone();
    let mut out = vec![Record {
        step: 0,
        direction: None,
        path: Vec::new(),
        seed: s.clone(),
        trop: None,
        chars: None,
        general: Some(vars.clone()),
        lambda: None,
    }];
    for (i, k) in path.iter().enumerate() {
        let (v, t) = generalized_mutate(&vars, &s, k).map_err(|e| CliError::at_step(i + 1, k, e))?;
        vars = v;
        s = t;
        out.push(Record {
            step: i + 1,
            direction: Some(k.clone()),
            path: path[..=i].to_vec(),
            seed: s.clone(),
            trop: None,
            chars: None,
            general: Some(vars.clone()),
            lambda: None,
        });
    }
    Ok(out)
}

fn a_variables(r: &Record) -> Vec<(String, &RationalFn)> {
    if let Some(g) = &r.general {
        return r.seed.lattice().labels().iter().map(|l| (l.clone(), &g[l])).collect();
    }
    r.chars.as_ref().map(|c| c.a_variables().map(|(l, v)| (l.to_string(), v)).collect()).unwrap_or_default()
}

fn render_text(out: &mut String, r: &Record, show: &BTreeSet<&str>) {
    match &r.direction {
        None => out.push_str("step 0: initial seed\n"),
        Some(k) => {
            let _ = writeln!(out, "step {}: mutation at {} (path {})", r.step, k, r.path.join(","));
        }
    }
    if show.contains("b") {
        out.push_str("  B:\n");
        out.push_str(&table(r.seed.b(), "    "));
    }
    if let Some(t) = &r.trop {
        if show.contains("g") {
            out.push_str("  G:\n");
            out.push_str(&table(t.g(), "    "));
        }
        if show.contains("c") {
            out.push_str("  C:\n");
            out.push_str(&table(t.c(), "    "));
        }
    }
    if let Some(c) = &r.chars {
        if show.contains("f") {
            for (l, f) in c.f_polynomials() {
                let _ = writeln!(out, "  F[{l}] = {}", f.render("y"));
            }
        }
    }
    if show.contains("a") {
        for (l, a) in a_variables(r) {
            let _ = writeln!(out, "  A[{l}] = {}", a.render_factored("a"));
        }
    }
    if let Some(c) = &r.chars {
        if show.contains("x") {
            for (l, x) in c.x_variables() {
                let _ = writeln!(out, "  X[{l}] = {}", x.render_factored("y"));
            }
        }
    }
    if let Some(q) = &r.lambda {
        out.push_str("  lambda:\n");
        out.push_str(&table(q.matrix(), "    "));
    }
}

fn record_json(r: &Record, show: &BTreeSet<&str>) -> Value {
    let mut m = Map::new();
    m.insert("step".into(), json!(r.step));
    m.insert("direction".into(), json!(r.direction));
    m.insert("path".into(), json!(r.path));
    if show.contains("b") {
        m.insert("B".into(), matrix_json(r.seed.b()));
    }
    if let Some(t) = &r.trop {
        if show.contains("g") {
            m.insert("G".into(), matrix_json(t.g()));
        }
        if show.contains("c") {
            m.insert("C".into(), matrix_json(t.c()));
        }
    }
    let strings = |it: Vec<(String, String)>| Value::Object(it.into_iter().map(|(k, v)| (k, Value::String(v))).collect());
    if let Some(c) = &r.chars {
        if show.contains("f") {
            m.insert("F".into(), strings(c.f_polynomials().map(|(l, f)| (l.to_string(), f.render("y"))).collect()));
        }
        if show.contains("x") {
            m.insert("X".into(), strings(c.x_variables().map(|(l, x)| (l.to_string(), x.render("y"))).collect()));
        }
    }
    if show.contains("a") {
        m.insert("A".into(), strings(a_variables(r).into_iter().map(|(l, a)| (l, a.render("a"))).collect()));
    }
    if show.contains("lambda") {
        m.insert("lambda".into(), r.lambda.as_ref().map(|q| matrix_json(q.matrix())).unwrap_or(Value::Null));
    }
    Value::Object(m)
}
