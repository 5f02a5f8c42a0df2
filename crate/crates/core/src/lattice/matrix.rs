use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::labeled::{ensure_same, Lattice};
use super::vector::IntVector;
use crate::error::{Error, Result};

/// Sparse integer matrix indexed by (row label, column label).
#[derive(Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: Lattice,
    cols: Lattice,
    entries: BTreeMap<(usize, usize), BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: &Lattice, cols: &Lattice) -> Self {
        Self { rows: rows.clone(), cols: cols.clone(), entries: BTreeMap::new() }
    }

    pub fn identity(lattice: &Lattice) -> Self {
        let mut m = Self::zeros(lattice, lattice);
        for i in 0..lattice.len() {
            m.entries.insert((i, i), BigInt::one());
        }
        m
    }

    /// The identity on the labels the two lattices share, zero elsewhere.
    pub fn inclusion(rows: &Lattice, cols: &Lattice) -> Self {
        let mut m = Self::zeros(rows, cols);
        for j in 0..cols.len() {
            if let Some(i) = rows.position(cols.label(j)) {
                m.entries.insert((i, j), BigInt::one());
            }
        }
        m
    }

    /// Row-major dense constructor; rows and columns in declaration order.
    pub fn from_rows<I: Into<BigInt> + Clone>(rows: &Lattice, cols: &Lattice, data: &[Vec<I>]) -> Result<Self> {
        if data.len() != rows.len() || data.iter().any(|r| r.len() != cols.len()) {
            return Err(Error::IncompatibleLattices(format!(
                "expected a {}x{} array",
                rows.len(),
                cols.len()
            )));
        }
        let mut m = Self::zeros(rows, cols);
        for (i, r) in data.iter().enumerate() {
            for (j, x) in r.iter().enumerate() {
                m.set_at(i, j, x.clone().into());
            }
        }
        Ok(m)
    }

    pub fn from_columns(rows: &Lattice, cols: &Lattice, columns: &[IntVector]) -> Result<Self> {
        if columns.len() != cols.len() {
            return Err(Error::IncompatibleLattices("column count".into()));
        }
        let mut m = Self::zeros(rows, cols);
        for (j, c) in columns.iter().enumerate() {
            ensure_same(c.lattice(), rows, "column lattice")?;
            for (i, x) in c.nonzero() {
                m.entries.insert((i, j), x.clone());
            }
        }
        Ok(m)
    }

    pub fn rows(&self) -> &Lattice {
        &self.rows
    }

    pub fn cols(&self) -> &Lattice {
        &self.cols
    }

    pub fn get(&self, row: &str, col: &str) -> Result<BigInt> {
        Ok(self.at(self.rows.require(row)?, self.cols.require(col)?))
    }

    pub fn set(&mut self, row: &str, col: &str, x: BigInt) -> Result<()> {
        let (i, j) = (self.rows.require(row)?, self.cols.require(col)?);
        self.set_at(i, j, x);
        Ok(())
    }

    pub(crate) fn at(&self, i: usize, j: usize) -> BigInt {
        self.entries.get(&(i, j)).cloned().unwrap_or_default()
    }

    pub(crate) fn set_at(&mut self, i: usize, j: usize, x: BigInt) {
        if x.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), x);
        }
    }

    pub(crate) fn add_at(&mut self, i: usize, j: usize, x: &BigInt) {
        if x.is_zero() {
            return;
        }
        let e = self.entries.entry((i, j)).or_default();
        *e += x;
        if e.is_zero() {
            self.entries.remove(&(i, j));
        }
    }

    /// Nonzero entries as ((row position, column position), value).
    pub(crate) fn nonzero(&self) -> impl Iterator<Item = ((usize, usize), &BigInt)> {
        self.entries.iter().map(|(&k, v)| (k, v))
    }

    /// Nonzero entries as (row label, column label, value).
    pub fn iter(&self) -> impl Iterator<Item = (&str, &str, &BigInt)> {
        self.entries
            .iter()
            .map(move |(&(i, j), v)| (self.rows.label(i), self.cols.label(j), v))
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn column(&self, col: &str) -> Result<IntVector> {
        Ok(self.column_at(self.cols.require(col)?))
    }

    pub(crate) fn column_at(&self, j: usize) -> IntVector {
        let mut v = IntVector::zero(&self.rows);
        for i in 0..self.rows.len() {
            if let Some(x) = self.entries.get(&(i, j)) {
                v.set_at(i, x.clone());
            }
        }
        v
    }

    pub fn row(&self, row: &str) -> Result<IntVector> {
        let i = self.rows.require(row)?;
        let mut v = IntVector::zero(&self.cols);
        for j in 0..self.cols.len() {
            if let Some(x) = self.entries.get(&(i, j)) {
                v.set_at(j, x.clone());
            }
        }
        Ok(v)
    }

    pub(crate) fn set_column_at(&mut self, j: usize, v: &IntVector) {
        for i in 0..self.rows.len() {
            self.entries.remove(&(i, j));
        }
        for (i, x) in v.nonzero() {
            self.entries.insert((i, j), x.clone());
        }
    }

    pub fn transpose(&self) -> Self {
        Self {
            rows: self.cols.clone(),
            cols: self.rows.clone(),
            entries: self.entries.iter().map(|(&(i, j), x)| ((j, i), x.clone())).collect(),
        }
    }

    pub fn neg(&self) -> Self {
        Self {
            rows: self.rows.clone(),
            cols: self.cols.clone(),
            entries: self.entries.iter().map(|(&k, x)| (k, -x)).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut m = Self::zeros(&self.rows, &self.cols);
        if !c.is_zero() {
            for (&k, x) in &self.entries {
                m.entries.insert(k, x * c);
            }
        }
        m
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.rows, &other.rows, "matrix sum rows")?;
        ensure_same(&self.cols, &other.cols, "matrix sum columns")?;
        let mut m = self.clone();
        for (&(i, j), x) in &other.entries {
            m.add_at(i, j, x);
        }
        Ok(m)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    /// Matrix product; the column lattice of `self` must be the row lattice of `rhs`.
    pub fn try_mul(&self, rhs: &Self) -> Result<Self> {
        ensure_same(&self.cols, &rhs.rows, "matrix product")?;
        let mut by_row: Vec<Vec<(usize, &BigInt)>> = vec![Vec::new(); rhs.rows.len()];
        for (&(k, j), x) in &rhs.entries {
            by_row[k].push((j, x));
        }
        let mut m = Self::zeros(&self.rows, &rhs.cols);
        for (&(i, k), a) in &self.entries {
            for &(j, b) in &by_row[k] {
                m.add_at(i, j, &(a * b));
            }
        }
        Ok(m)
    }

    pub fn try_apply(&self, v: &IntVector) -> Result<IntVector> {
        ensure_same(&self.cols, v.lattice(), "matrix-vector product")?;
        let mut out = IntVector::zero(&self.rows);
        for (&(i, j), a) in &self.entries {
            if let Some(x) = v.at_ref(j) {
                out.add_at(i, &(a * x));
            }
        }
        Ok(out)
    }

    /// Restriction to the given row and column labels (each must exist here).
    pub fn restrict(&self, rows: &Lattice, cols: &Lattice) -> Result<Self> {
        let rmap: Vec<usize> = rows
            .labels()
            .iter()
            .map(|l| self.rows.require(l))
            .collect::<Result<_>>()?;
        let cmap: Vec<usize> = cols
            .labels()
            .iter()
            .map(|l| self.cols.require(l))
            .collect::<Result<_>>()?;
        let mut m = Self::zeros(rows, cols);
        for (i, &ri) in rmap.iter().enumerate() {
            for (j, &cj) in cmap.iter().enumerate() {
                if let Some(x) = self.entries.get(&(ri, cj)) {
                    m.entries.insert((i, j), x.clone());
                }
            }
        }
        Ok(m)
    }

    /// Same entries on lattices with identical label sequences.
    pub fn rehome(&self, rows: &Lattice, cols: &Lattice) -> Result<Self> {
        if rows.labels() != self.rows.labels() || cols.labels() != self.cols.labels() {
            return Err(Error::IncompatibleLattices("label sequences differ".into()));
        }
        Ok(Self { rows: rows.clone(), cols: cols.clone(), entries: self.entries.clone() })
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows.len())
            .map(|i| (0..self.cols.len()).map(|j| self.at(i, j)).collect())
            .collect()
    }

    pub fn sum_of_entries(&self) -> BigInt {
        self.entries.values().sum()
    }

    pub fn max_abs_entry(&self) -> BigInt {
        self.entries.values().map(|x| x.abs()).max().unwrap_or_default()
    }

    pub fn is_square_on_same_labels(&self) -> bool {
        self.rows.labels() == self.cols.labels()
    }

    /// Exact determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> Result<BigInt> {
        if self.rows.len() != self.cols.len() {
            return Err(Error::IncompatibleLattices("determinant of a non-square matrix".into()));
        }
        Ok(bareiss_det(self.to_dense()))
    }

    /// Rank over the rationals.
    pub fn rank(&self) -> usize {
        rank_of(self.to_dense())
    }
}

pub(crate) fn bareiss_det(mut a: Vec<Vec<BigInt>>) -> BigInt {
    let n = a.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&r| !a[r][k].is_zero()) {
                Some(r) => {
                    a.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

pub(crate) fn rank_of(mut a: Vec<Vec<BigInt>>) -> usize {
    let rows = a.len();
    let cols = a.first().map_or(0, |r| r.len());
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..rows).find(|&r| !a[r][c].is_zero()) else { continue };
        a.swap(rank, p);
        for r in 0..rows {
            if r != rank && !a[r][c].is_zero() {
                let g = a[rank][c].gcd(&a[r][c]);
                let (fp, fr) = (&a[r][c] / &g, &a[rank][c] / &g);
                for k in 0..cols {
                    let v = &a[r][k] * &fr - &a[rank][k] * &fp;
                    a[r][k] = v;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[")?;
        for i in 0..self.rows.len() {
            if i > 0 {
                write!(f, "; ")?;
            }
            for j in 0..self.cols.len() {
                if j > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{}", self.at(i, j))?;
            }
        }
        write!(f, "]")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LabeledLattice;

    fn lat(n: usize) -> Lattice {
        let labels: Vec<String> = (1..=n).map(|i| i.to_string()).collect();
        LabeledLattice::plain(&labels).unwrap().shared()
    }

    #[test]
    fn product_and_transpose() {
        let l = lat(2);
        let a = IntMatrix::from_rows(&l, &l, &[vec![1, 2], vec![0, 1]]).unwrap();
        let b = IntMatrix::from_rows(&l, &l, &[vec![1, -2], vec![0, 1]]).unwrap();
        assert_eq!(a.try_mul(&b).unwrap(), IntMatrix::identity(&l));
        assert_eq!(a.transpose().to_dense()[1][0], BigInt::from(2));
        assert_eq!(a.determinant().unwrap(), BigInt::one());
    }

    #[test]
    fn determinant_and_rank() {
        let l = lat(3);
        let markov = IntMatrix::from_rows(&l, &l, &[vec![0, -2, 2], vec![2, 0, -2], vec![-2, 2, 0]]).unwrap();
        assert!(markov.determinant().unwrap().is_zero());
        assert_eq!(markov.rank(), 2);
        let m = IntMatrix::from_rows(&l, &l, &[vec![0, 2, 1], vec![1, 0, 3], vec![4, 1, 0]]).unwrap();
        // 0*(0-3) - 2*(0-12) + 1*(1-0) = 25
        assert_eq!(m.determinant().unwrap(), BigInt::from(25));
    }

    #[test]
    fn restrict_by_labels() {
        let d = [BigInt::one(), BigInt::one(), BigInt::one()];
        let all = LabeledLattice::new(&["1", "2", "f"], &["f"], &d).unwrap().shared();
        let mutable = all.mutable_part().unwrap().shared();
        let m = IntMatrix::from_rows(&all, &all, &[vec![1, 2, 3], vec![4, 5, 6], vec![7, 8, 9]]).unwrap();
        let r = m.restrict(&mutable, &mutable).unwrap();
        assert_eq!(r.to_dense(), vec![vec![BigInt::from(1), 2.into()], vec![4.into(), 5.into()]]);
        assert_eq!(m.get("f", "2").unwrap(), BigInt::from(8));
    }
}
