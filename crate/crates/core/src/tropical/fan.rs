use num_bigint::BigInt;
use num_traits::Signed;

use super::TropicalState;
use crate::error::{Error, Result};
use crate::lattice::linalg::solve_injective;
use crate::lattice::{multiplier_matrix, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum PairVerdict {
    SameCone,
    /// No interior point `Σ λ_i g_i` with `1 ≤ λ_i ≤ bound` of either cone lies
    /// in the interior of the other.
    Disjoint,
    /// A common interior lattice point, in mutable coordinates.
    Overlap(Vec<BigInt>),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConePair {
    pub first: usize,
    pub second: usize,
    pub verdict: PairVerdict,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanReport {
    /// Per state: does `Cᵀ D G = D` hold on the mutable blocks.
    pub duality: Vec<bool>,
    pub pairs: Vec<ConePair>,
}

impl FanReport {
    pub fn passed(&self) -> bool {
        self.duality.iter().all(|x| *x) && self.pairs.iter().all(|p| !matches!(p.verdict, PairVerdict::Overlap(_)))
    }
}

/// Mutable g-vectors of a state, as sorted rows of integers.
fn cone(st: &TropicalState) -> Vec<Vec<BigInt>> {
    let g = st.g_mutable_block().to_dense();
    let n = g.len();
    (0..n).map(|j| (0..n).map(|i| g[i][j].clone()).collect()).collect()
}

fn strictly_inside(generators: &[Vec<BigInt>], p: &[BigInt]) -> bool {
    let n = p.len();
    let a: Vec<Vec<BigInt>> = (0..n).map(|i| generators.iter().map(|g| g[i].clone()).collect()).collect();
    let b: Vec<Vec<BigInt>> = p.iter().map(|x| vec![x.clone()]).collect();
    match solve_injective(&a, &b) {
        Ok(Some(x)) => x.iter().all(|r| r[0].is_positive()),
        _ => false,
    }
}

fn search(from: &[Vec<BigInt>], into: &[Vec<BigInt>], bound: u32) -> Option<Vec<BigInt>> {
    let n = from.len();
    let mut lambda = vec![1u32; n];
    loop {
        let p: Vec<BigInt> = (0..n)
            .map(|i| from.iter().zip(&lambda).map(|(g, l)| &g[i] * BigInt::from(*l)).sum())
            .collect();
        if strictly_inside(into, &p) {
            return Some(p);
        }
        let mut i = 0;
        loop {
            if i == n {
                return None;
            }
            if lambda[i] < bound {
                lambda[i] += 1;
                break;
            }
            lambda[i] = 1;
            i += 1;
        }
    }
}

/// Checks the duality certificate at every state and looks for common
/// interior points of the mutable g-vector cones of every pair of states,
/// trying coefficients up to `bound`.
pub fn g_fan_check(states: &[TropicalState], bound: u32) -> Result<FanReport> {
    if let Some(first) = states.first() {
        if states.iter().any(|s| s.root() != first.root()) {
            return Err(Error::RootMismatch);
        }
    }
    let duality = states
        .iter()
        .map(|st| {
            let d = multiplier_matrix(st.root().mutable_lattice());
            st.c()
                .transpose()
                .try_mul(&d)
                .and_then(|m| m.try_mul(&st.g_mutable_block()))
                .is_ok_and(|m: IntMatrix| m == d)
        })
        .collect();
    let cones: Vec<Vec<Vec<BigInt>>> = states.iter().map(cone).collect();
    let mut pairs = Vec::new();
    for i in 0..states.len() {
        for j in i + 1..states.len() {
            let (mut a, mut b) = (cones[i].clone(), cones[j].clone());
            a.sort();
            b.sort();
            let verdict = if a == b {
                PairVerdict::SameCone
            } else if let Some(p) = search(&cones[i], &cones[j], bound).or_else(|| search(&cones[j], &cones[i], bound)) {
                PairVerdict::Overlap(p)
            } else {
                PairVerdict::Disjoint
            };
            pairs.push(ConePair { first: i, second: j, verdict });
        }
    }
    Ok(FanReport { duality, pairs })
}
