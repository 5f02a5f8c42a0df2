//! Built-in seeds.

use std::collections::BTreeMap;

use super::{ExchangePolynomial, Seed};
use crate::error::{Error, Result};

/// Rank-2 finite type, `b12 = -1`, `b21 = 1`.
pub fn a2() -> Seed {
    Seed::from_dense(&["1", "2"], &[], &[1, 1], &[vec![0, -1], vec![1, 0]]).expect("A2 fixture")
}

/// Three vertices with doubled arrows around a cycle.
pub fn markov() -> Seed {
    Seed::from_dense(
        &["1", "2", "3"],
        &[],
        &[1, 1, 1],
        &[vec![0, -2, 2], vec![2, 0, -2], vec![-2, 2, 0]],
    )
    .expect("Markov fixture")
}

/// Generalized rank-2 seed with `θ1 = 1 + z + z²`, `θ2 = 1 + z`.
pub fn cns() -> Seed {
    let s = Seed::from_dense(&["1", "2"], &[], &[1, 1], &[vec![0, -1], vec![2, 0]]).expect("CNS fixture");
    let theta = BTreeMap::from([
        ("1".to_string(), ExchangePolynomial::new([1, 1, 1])),
        ("2".to_string(), ExchangePolynomial::new([1, 1])),
    ]);
    s.with_theta(theta).expect("CNS fixture")
}

/// [`a2`] with one frozen row `f`, `b_f1 = 1`, `b_f2 = 0`.
pub fn a2f() -> Seed {
    Seed::from_dense(&["1", "2", "f"], &["f"], &[1, 1, 1], &[vec![0, -1], vec![1, 0], vec![1, 0]])
        .expect("A2 frozen fixture")
}

pub const NAMES: [&str; 4] = ["a2", "markov", "cns", "a2f"];

pub fn by_name(name: &str) -> Result<Seed> {
    match name.to_ascii_lowercase().as_str() {
        "a2" => Ok(a2()),
        "markov" => Ok(markov()),
        "cns" => Ok(cns()),
        "a2f" => Ok(a2f()),
        other => Err(Error::Parse(format!("unknown fixture `{other}` (known: {})", NAMES.join(", ")))),
    }
}

pub fn all() -> Vec<(&'static str, Seed)> {
    NAMES.iter().map(|n| (*n, by_name(n).unwrap())).collect()
}
