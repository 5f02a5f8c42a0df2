//! Smith normal form over the integers, with unimodular transforms.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// `left * a * right = diag(diagonal, 0, ...)`, with `diagonal` positive and
/// each entry dividing the next. `left` and `right` are unimodular.
#[derive(Debug, Clone)]
pub struct SmithForm {
    pub diagonal: Vec<BigInt>,
    pub left: Vec<Vec<BigInt>>,
    pub right: Vec<Vec<BigInt>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n)
        .map(|i| (0..n).map(|j| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect()
}

struct Work {
    a: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    rows: usize,
    cols: usize,
}

impl Work {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap(i, j);
        self.u.swap(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        for r in &mut self.a {
            r.swap(i, j);
        }
        for r in &mut self.v {
            r.swap(i, j);
        }
    }

    // row_i += c * row_j
    fn add_row(&mut self, i: usize, j: usize, c: &BigInt) {
        for k in 0..self.cols {
            let x = &self.a[j][k] * c;
            self.a[i][k] += x;
        }
        for k in 0..self.rows {
            let x = &self.u[j][k] * c;
            self.u[i][k] += x;
        }
    }

    // col_i += c * col_j
    fn add_col(&mut self, i: usize, j: usize, c: &BigInt) {
        for r in 0..self.rows {
            let x = &self.a[r][j] * c;
            self.a[r][i] += x;
        }
        for r in 0..self.cols {
            let x = &self.v[r][j] * c;
            self.v[r][i] += x;
        }
    }

    fn negate_row(&mut self, i: usize) {
        for x in &mut self.a[i] {
            *x = -&*x;
        }
        for x in &mut self.u[i] {
            *x = -&*x;
        }
    }

    fn smallest_in(&self, t: usize) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize)> = None;
        for i in t..self.rows {
            for j in t..self.cols {
                if self.a[i][j].is_zero() {
                    continue;
                }
                if best.is_none_or(|(bi, bj)| self.a[i][j].abs() < self.a[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        best
    }
}

pub fn smith_form(a: &[Vec<BigInt>], cols: usize) -> SmithForm {
    let rows = a.len();
    let mut w = Work { a: a.to_vec(), u: identity(rows), v: identity(cols), rows, cols };
    let mut diagonal = Vec::new();
    let mut t = 0;
    while t < rows.min(cols) {
        let Some((pi, pj)) = w.smallest_in(t) else { break };
        w.swap_rows(t, pi);
        w.swap_cols(t, pj);
        loop {
            let mut dirty = false;
            for i in t + 1..rows {
                if w.a[i][t].is_zero() {
                    continue;
                }
                let q = w.a[i][t].div_floor(&w.a[t][t]);
                w.add_row(i, t, &-q);
                if !w.a[i][t].is_zero() {
                    dirty = true;
                }
            }
            for j in t + 1..cols {
                if w.a[t][j].is_zero() {
                    continue;
                }
                let q = w.a[t][j].div_floor(&w.a[t][t]);
                w.add_col(j, t, &-q);
                if !w.a[t][j].is_zero() {
                    dirty = true;
                }
            }
            if dirty {
                // move the smallest remaining entry of row/column t onto the pivot
                let mut best = (t, t);
                for i in t + 1..rows {
                    if !w.a[i][t].is_zero() && w.a[i][t].abs() < w.a[best.0][best.1].abs() {
                        best = (i, t);
                    }
                }
                for j in t + 1..cols {
                    if !w.a[t][j].is_zero() && w.a[t][j].abs() < w.a[best.0][best.1].abs() {
                        best = (t, j);
                    }
                }
                w.swap_rows(t, best.0);
                w.swap_cols(t, best.1);
                continue;
            }
            // pivot must divide the rest of the block
            let p = w.a[t][t].clone();
            let offender = (t + 1..rows)
                .flat_map(|i| (t + 1..cols).map(move |j| (i, j)))
                .find(|&(i, j)| !w.a[i][j].is_multiple_of(&p));
            match offender {
                Some((i, _)) => w.add_row(t, i, &BigInt::one()),
                None => break,
            }
        }
        if w.a[t][t].is_negative() {
            w.negate_row(t);
        }
        diagonal.push(w.a[t][t].clone());
        t += 1;
    }
    SmithForm { diagonal, left: w.u, right: w.v }
}

/// Isomorphism type of a finitely generated abelian group `Z^free ⊕ ⊕ Z/t_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cokernel {
    /// Invariant factors greater than 1, each dividing the next.
    pub torsion: Vec<BigInt>,
    pub free_rank: usize,
}

impl Cokernel {
    pub fn is_trivial(&self) -> bool {
        self.torsion.is_empty() && self.free_rank == 0
    }
}

impl fmt::Display for Cokernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts = Vec::new();
        if self.free_rank > 0 {
            parts.push(if self.free_rank == 1 { "Z".to_string() } else { format!("Z^{}", self.free_rank) });
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        write!(f, "{}", parts.join(" + "))
    }
}

/// Cokernel of `a` viewed as a map from the column lattice to the row lattice.
pub fn smith_cokernel(a: &IntMatrix) -> Cokernel {
    let snf = smith_form(&a.to_dense(), a.cols().len());
    Cokernel {
        torsion: snf.diagonal.iter().filter(|x| !x.is_one()).cloned().collect(),
        free_rank: a.rows().len() - snf.rank(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    fn mul(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
        let n = b.first().map_or(0, |r| r.len());
        a.iter()
            .map(|r| (0..n).map(|j| r.iter().zip(b).map(|(x, br)| x * &br[j]).sum()).collect())
            .collect()
    }

    #[test]
    fn transforms_reproduce_diagonal() {
        let a = big(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
        let s = smith_form(&a, 3);
        assert_eq!(s.diagonal, vec![BigInt::from(2), 6.into(), 12.into()]);
        let d = mul(&mul(&s.left, &a), &s.right);
        for (i, r) in d.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                let want = if i == j { s.diagonal[i].clone() } else { BigInt::zero() };
                assert_eq!(*x, want);
            }
        }
    }

    #[test]
    fn zero_and_rectangular() {
        let s = smith_form(&big(&[&[0, 0], &[0, 0]]), 2);
        assert!(s.diagonal.is_empty());
        let s = smith_form(&big(&[&[0, -1], &[1, 0], &[1, 0]]), 2);
        assert_eq!(s.diagonal, vec![BigInt::one(), BigInt::one()]);
    }
}
