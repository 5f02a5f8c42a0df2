//! Reproducible random seeds and mutation paths.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::seed::Seed;

/// Bounds for [`random_seed`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedShape {
    pub min_rank: usize,
    pub max_rank: usize,
    pub max_entry: i64,
    pub max_d: i64,
    pub max_frozen: usize,
}

impl Default for SeedShape {
    fn default() -> Self {
        Self { min_rank: 2, max_rank: 4, max_entry: 3, max_d: 3, max_frozen: 2 }
    }
}

pub fn rng_from(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A valid seed with mutable labels `1..n` and frozen labels `f1, f2, ...`,
/// drawn by rejection sampling.
pub fn random_seed<R: Rng>(rng: &mut R, shape: &SeedShape) -> Seed {
    loop {
        if let Some(s) = attempt(rng, shape) {
            return s;
        }
    }
}

fn attempt<R: Rng>(rng: &mut R, shape: &SeedShape) -> Option<Seed> {
    let n = rng.gen_range(shape.min_rank..=shape.max_rank);
    let nf = rng.gen_range(0..=shape.max_frozen);
    let d: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=shape.max_d)).collect();
    let e = shape.max_entry;
    let mut b = vec![vec![0i64; n]; n + nf];
    for i in 0..n {
        for j in i + 1..n {
            let x = rng.gen_range(-e..=e);
            // d_i b_ij = -d_j b_ji
            if (d[i] * x) % d[j] != 0 {
                return None;
            }
            let y = -(d[i] * x) / d[j];
            if y.abs() > e {
                return None;
            }
            b[i][j] = x;
            b[j][i] = y;
        }
    }
    for row in b.iter_mut().skip(n) {
        for x in row.iter_mut() {
            *x = rng.gen_range(-e..=e);
        }
    }
    let mut labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
    let frozen: Vec<String> = (1..=nf).map(|i| format!("f{i}")).collect();
    labels.extend(frozen.iter().cloned());
    let mut dd = d;
    dd.extend(std::iter::repeat(1).take(nf));
    let s = Seed::from_dense(&labels, &frozen, &dd, &b).ok()?;
    s.validate().is_valid().then_some(s)
}

/// A uniformly random sequence of mutable directions, never repeating the
/// previous direction.
pub fn random_path<R: Rng>(rng: &mut R, s: &Seed, len: usize) -> Vec<String> {
    let dirs = s.directions();
    let mut out: Vec<String> = Vec::with_capacity(len);
    for _ in 0..len {
        let choices: Vec<&String> = dirs.iter().filter(|d| out.last() != Some(*d) || dirs.len() == 1).collect();
        out.push((*choices.choose(rng).expect("at least one direction")).clone());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seeds_are_valid_and_reproducible() {
        let shape = SeedShape::default();
        let mut a = rng_from(7);
        let mut b = rng_from(7);
        for _ in 0..50 {
            let s = random_seed(&mut a, &shape);
            assert!(s.validate().is_valid());
            assert!(s.b().max_abs_entry() <= 3.into());
            let m = s.mutable_lattice().len();
            assert!((2..=4).contains(&m));
            assert!(s.lattice().len() - m <= 2);
            assert_eq!(s, random_seed(&mut b, &shape));
        }
    }

    #[test]
    fn paths_avoid_immediate_repeats() {
        let mut r = rng_from(1);
        let s = random_seed(&mut r, &SeedShape::default());
        let p = random_path(&mut r, &s, 20);
        assert_eq!(p.len(), 20);
        assert!(p.windows(2).all(|w| w[0] != w[1]));
    }
}
