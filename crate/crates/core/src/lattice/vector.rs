use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use super::labeled::{ensure_same, Lattice};
use crate::error::{Error, Result};

/// Sparse integer vector over a labeled lattice. Absent coordinates are zero.
#[derive(Clone, PartialEq, Eq)]
pub struct IntVector {
    lattice: Lattice,
    // keyed by label position; never stores zeros
    coords: BTreeMap<usize, BigInt>,
}

impl IntVector {
    pub fn zero(lattice: &Lattice) -> Self {
        Self { lattice: lattice.clone(), coords: BTreeMap::new() }
    }

    pub fn basis(lattice: &Lattice, label: &str) -> Result<Self> {
        let i = lattice.require(label)?;
        let mut v = Self::zero(lattice);
        v.coords.insert(i, BigInt::from(1));
        Ok(v)
    }

    pub fn from_pairs<S: AsRef<str>, I: Into<BigInt>>(
        lattice: &Lattice,
        pairs: impl IntoIterator<Item = (S, I)>,
    ) -> Result<Self> {
        let mut v = Self::zero(lattice);
        for (l, x) in pairs {
            let i = lattice.require(l.as_ref())?;
            v.add_at(i, &x.into());
        }
        Ok(v)
    }

    /// Coordinates given in the lattice's declaration order.
    pub fn from_dense<I: Into<BigInt> + Clone>(lattice: &Lattice, xs: &[I]) -> Result<Self> {
        if xs.len() != lattice.len() {
            return Err(Error::IncompatibleLattices(format!(
                "{} coordinates for a rank {} lattice",
                xs.len(),
                lattice.len()
            )));
        }
        let mut v = Self::zero(lattice);
        for (i, x) in xs.iter().enumerate() {
            v.set_at(i, x.clone().into());
        }
        Ok(v)
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn get(&self, label: &str) -> Result<BigInt> {
        Ok(self.at(self.lattice.require(label)?))
    }

    pub fn set(&mut self, label: &str, x: BigInt) -> Result<()> {
        let i = self.lattice.require(label)?;
        self.set_at(i, x);
        Ok(())
    }

    pub(crate) fn at(&self, i: usize) -> BigInt {
        self.coords.get(&i).cloned().unwrap_or_default()
    }

    pub(crate) fn at_ref(&self, i: usize) -> Option<&BigInt> {
        self.coords.get(&i)
    }

    pub(crate) fn set_at(&mut self, i: usize, x: BigInt) {
        if x.is_zero() {
            self.coords.remove(&i);
        } else {
            self.coords.insert(i, x);
        }
    }

    pub(crate) fn add_at(&mut self, i: usize, x: &BigInt) {
        if x.is_zero() {
            return;
        }
        let e = self.coords.entry(i).or_default();
        *e += x;
        if e.is_zero() {
            self.coords.remove(&i);
        }
    }

    pub(crate) fn nonzero(&self) -> impl Iterator<Item = (usize, &BigInt)> {
        self.coords.iter().map(|(&i, x)| (i, x))
    }

    /// Nonzero coordinates as (label, value), in declaration order.
    pub fn iter(&self) -> impl Iterator<Item = (&str, &BigInt)> {
        self.coords.iter().map(move |(&i, x)| (self.lattice.label(i), x))
    }

    pub fn dense(&self) -> Vec<BigInt> {
        (0..self.lattice.len()).map(|i| self.at(i)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coords.values().all(|x| x.is_positive())
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        let mut v = Self::zero(&self.lattice);
        if c.is_zero() {
            return v;
        }
        for (&i, x) in &self.coords {
            v.coords.insert(i, x * c);
        }
        v
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        ensure_same(&self.lattice, &other.lattice, "vector sum")?;
        let mut v = self.clone();
        for (&i, x) in &other.coords {
            v.add_at(i, x);
        }
        Ok(v)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn sum_of_entries(&self) -> BigInt {
        self.coords.values().sum()
    }

    /// Sign decomposition `v = v_plus - v_minus` with both parts nonnegative.
    pub fn sign_split(&self) -> (Self, Self) {
        let mut plus = Self::zero(&self.lattice);
        let mut minus = Self::zero(&self.lattice);
        for (&i, x) in &self.coords {
            if x.is_positive() {
                plus.coords.insert(i, x.clone());
            } else {
                minus.coords.insert(i, -x);
            }
        }
        (plus, minus)
    }
}

/// Free-function form of [`IntVector::sign_split`].
pub fn sign_split(v: &IntVector) -> (IntVector, IntVector) {
    v.sign_split()
}

impl Neg for &IntVector {
    type Output = IntVector;
    fn neg(self) -> IntVector {
        IntVector {
            lattice: self.lattice.clone(),
            coords: self.coords.iter().map(|(&i, x)| (i, -x)).collect(),
        }
    }
}

impl Add for &IntVector {
    type Output = IntVector;
    /// Panics on lattice mismatch; use [`IntVector::try_add`] otherwise.
    fn add(self, rhs: &IntVector) -> IntVector {
        self.try_add(rhs).expect("vector lattices differ")
    }
}

impl Sub for &IntVector {
    type Output = IntVector;
    fn sub(self, rhs: &IntVector) -> IntVector {
        self.try_sub(rhs).expect("vector lattices differ")
    }
}

impl fmt::Debug for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for IntVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for i in 0..self.lattice.len() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", self.at(i))?;
        }
        write!(f, ")")
    }
}
