//! Seed files: JSON with labels, frozen labels, multipliers, sparse `B`,
//! optional exchange polynomials and optional `Λ`.
//!
//! ```json
//! {"labels":["1","2"],"frozen":[],"d":{"1":1,"2":1},"B":{"1,2":-1,"2,1":1}}
//! ```
//!
//! A file may instead name a built-in seed with `{"fixture":"a2"}`.
//! Integers are JSON numbers, or decimal strings when they do not fit in 64
//! bits.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;
use serde_json::{Map, Value};

use super::{fixtures, ExchangePolynomial, Seed};
use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, LabeledLattice};

/// A parsed seed file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeedFile {
    pub seed: Seed,
    /// Quantum datum, all labels × all labels.
    pub lambda: Option<IntMatrix>,
}

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

fn int(v: &Value, what: &str) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| perr(format!("{what}: expected an integer, got {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| perr(format!("{what}: `{s}` is not an integer"))),
        other => Err(perr(format!("{what}: expected an integer, got {other}"))),
    }
}

fn int_value(x: &BigInt) -> Value {
    match i64::try_from(x) {
        Ok(v) => Value::from(v),
        Err(_) => Value::String(x.to_string()),
    }
}

fn strings(v: Option<&Value>, what: &str) -> Result<Vec<String>> {
    match v {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(xs)) => xs
            .iter()
            .map(|x| match x {
                Value::String(s) => Ok(s.clone()),
                Value::Number(n) => Ok(n.to_string()),
                other => Err(perr(format!("{what}: expected a label, got {other}"))),
            })
            .collect(),
        Some(other) => Err(perr(format!("{what}: expected an array, got {other}"))),
    }
}

fn object<'a>(v: Option<&'a Value>, what: &str) -> Result<Option<&'a Map<String, Value>>> {
    match v {
        None | Some(Value::Null) => Ok(None),
        Some(Value::Object(m)) => Ok(Some(m)),
        Some(other) => Err(perr(format!("{what}: expected an object, got {other}"))),
    }
}

fn split_key(k: &str, what: &str) -> Result<(String, String)> {
    let (r, c) = k.split_once(',').ok_or_else(|| perr(format!("{what}: key `{k}` is not `row,col`")))?;
    Ok((r.trim().to_string(), c.trim().to_string()))
}

fn matrix_entries(m: &Map<String, Value>, what: &str) -> Result<Vec<(String, String, BigInt)>> {
    m.iter()
        .map(|(k, v)| {
            let (r, c) = split_key(k, what)?;
            Ok((r, c, int(v, &format!("{what}[{k}]"))?))
        })
        .collect()
}

fn parse_lambda(root: &Map<String, Value>, seed: &Seed) -> Result<Option<IntMatrix>> {
    let Some(m) = object(root.get("lambda"), "lambda")? else {
        return Ok(None);
    };
    let lat = seed.lattice();
    let mut l = IntMatrix::zeros(lat, lat);
    for (r, c, x) in matrix_entries(m, "lambda")? {
        l.set(&r, &c, x)?;
    }
    Ok(Some(l))
}

pub fn parse_seed_value(v: &Value) -> Result<SeedFile> {
    let root = v.as_object().ok_or_else(|| perr("seed file must be a JSON object"))?;
    if let Some(name) = root.get("fixture").or_else(|| root.get("fixtures")) {
        let name = name.as_str().ok_or_else(|| perr("fixture: expected a name"))?;
        let seed = fixtures::by_name(name)?;
        let lambda = parse_lambda(root, &seed)?;
        return Ok(SeedFile { seed, lambda });
    }
    let labels = strings(root.get("labels"), "labels")?;
    if let Some(bad) = labels.iter().find(|l| l.contains(',') || l.trim() != l.as_str()) {
        return Err(perr(format!("label `{bad}` may not contain commas or surrounding spaces")));
    }
    let frozen = strings(root.get("frozen"), "frozen")?;
    let mut d = vec![BigInt::from(1); labels.len()];
    if let Some(m) = object(root.get("d"), "d")? {
        for (k, v) in m {
            let i = labels.iter().position(|l| l == k).ok_or_else(|| Error::UnknownLabel(k.clone()))?;
            d[i] = int(v, &format!("d[{k}]"))?;
        }
    }
    let lattice = LabeledLattice::new(&labels, &frozen, &d)?.shared();
    let mutable = lattice.mutable_part()?.shared();
    let mut b = IntMatrix::zeros(&lattice, &mutable);
    let bm = object(root.get("B"), "B")?.ok_or_else(|| perr("missing exchange matrix `B`"))?;
    for (r, c, x) in matrix_entries(bm, "B")? {
        lattice.require(&r)?;
        if lattice.is_frozen_label(&c)? {
            if x.is_zero() {
                continue;
            }
            return Err(perr(format!("B[{r},{c}]: columns are mutable labels only")));
        }
        b.set(&r, &c, x)?;
    }
    let mut seed = Seed::new(lattice, b)?;
    if let Some(t) = object(root.get("theta"), "theta")? {
        let mut theta = BTreeMap::new();
        for (k, v) in t {
            let cs = v.as_array().ok_or_else(|| perr(format!("theta[{k}]: expected a coefficient list")))?;
            let cs = cs.iter().map(|c| int(c, &format!("theta[{k}]"))).collect::<Result<Vec<_>>>()?;
            theta.insert(k.clone(), ExchangePolynomial::new(cs));
        }
        seed = seed.with_theta(theta)?;
    }
    let lambda = parse_lambda(root, &seed)?;
    Ok(SeedFile { seed, lambda })
}

pub fn parse_seed_file(text: &str) -> Result<SeedFile> {
    let v: Value = serde_json::from_str(text).map_err(|e| perr(format!("invalid JSON: {e}")))?;
    parse_seed_value(&v)
}

fn matrix_value(m: &IntMatrix) -> Value {
    let entries: BTreeMap<String, Value> = m.iter().map(|(r, c, x)| (format!("{r},{c}"), int_value(x))).collect();
    Value::Object(entries.into_iter().collect())
}

/// Deterministic JSON value: labels in declaration order, map keys sorted,
/// zero entries omitted.
pub fn seed_value(seed: &Seed, lambda: Option<&IntMatrix>) -> Value {
    let lat = seed.lattice();
    let mut root = Map::new();
    root.insert("labels".into(), Value::from(lat.labels().to_vec()));
    root.insert("frozen".into(), Value::from(lat.frozen_labels().map(String::from).collect::<Vec<_>>()));
    let d: Map<String, Value> =
        (0..lat.len()).map(|i| (lat.label(i).to_string(), int_value(lat.d(i)))).collect();
    root.insert("d".into(), Value::Object(d));
    root.insert("B".into(), matrix_value(seed.b()));
    if let Some(theta) = seed.theta() {
        let t: Map<String, Value> = theta
            .iter()
            .map(|(k, p)| (k.clone(), Value::Array(p.coeffs().iter().map(int_value).collect())))
            .collect();
        root.insert("theta".into(), Value::Object(t));
    }
    if let Some(l) = lambda {
        root.insert("lambda".into(), matrix_value(l));
    }
    Value::Object(root)
}

impl SeedFile {
    pub fn to_value(&self) -> Value {
        seed_value(&self.seed, self.lambda.as_ref())
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_value()).expect("serializable")
    }
}
