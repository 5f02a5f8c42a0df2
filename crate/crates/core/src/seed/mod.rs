//! Seeds: exchange matrices over labeled lattices, validation and mutation.

pub mod fixtures;
mod generalized;
pub mod json;
mod mutation;
mod relabel;

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{IntMatrix, LabeledLattice, Lattice};

pub use generalized::{generalized_mutate, GeneralizedVars};
pub use mutation::{ef_matrices, mutate_matrix, mutate_seed, Sign};
pub use relabel::{canonical_key, canonical_key_tagged, find_relabeling, find_relabeling_tagged, Relabeling};

/// One-variable integer polynomial `c0 + c1 z + ... + cd z^d`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExchangePolynomial(pub Vec<BigInt>);

impl ExchangePolynomial {
    pub fn new<I: Into<BigInt>>(coeffs: impl IntoIterator<Item = I>) -> Self {
        let mut c: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        while c.len() > 1 && c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        Self(c)
    }

    pub fn degree(&self) -> usize {
        self.0.len().saturating_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_reciprocal(&self) -> bool {
        self.0.iter().eq(self.0.iter().rev())
    }
}

impl fmt::Display for ExchangePolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.0.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 if c.is_one() => write!(f, "z")?,
                1 => write!(f, "{c}*z")?,
                _ if c.is_one() => write!(f, "z^{i}")?,
                _ => write!(f, "{c}*z^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// An exchange matrix `B` (all labels × mutable labels) with its symmetrizer,
/// plus optional exchange polynomials for generalized seeds.
#[derive(Clone, PartialEq, Eq)]
pub struct Seed {
    lattice: Lattice,
    mutable: Lattice,
    b: IntMatrix,
    theta: Option<BTreeMap<String, ExchangePolynomial>>,
}

impl Seed {
    /// Builds a seed without validating it; see [`validate_seed`].
    pub fn new(lattice: Lattice, b: IntMatrix) -> Result<Self> {
        let mutable = lattice.mutable_part()?.shared();
        if b.rows().labels() != lattice.labels() || b.cols().labels() != mutable.labels() {
            return Err(Error::IncompatibleLattices(
                "B must have all labels as rows and the mutable labels as columns".into(),
            ));
        }
        let b = b.rehome(&lattice, &mutable)?;
        Ok(Self { lattice, mutable, b, theta: None })
    }

    /// Convenience constructor from a dense row-major array.
    pub fn from_dense<S: AsRef<str>>(
        labels: &[S],
        frozen: &[S],
        d: &[i64],
        b: &[Vec<i64>],
    ) -> Result<Self> {
        let d: Vec<BigInt> = d.iter().map(|&x| x.into()).collect();
        let lattice = LabeledLattice::new(labels, frozen, &d)?.shared();
        let mutable = lattice.mutable_part()?.shared();
        let b = IntMatrix::from_rows(&lattice, &mutable, b)?;
        Self::new(lattice, b)
    }

    pub fn with_theta(mut self, theta: BTreeMap<String, ExchangePolynomial>) -> Result<Self> {
        for k in theta.keys() {
            if self.lattice.is_frozen_label(k)? {
                return Err(Error::InvalidSeed(format!("exchange polynomial on frozen `{k}`")));
            }
        }
        self.theta = Some(theta);
        Ok(self)
    }

    pub fn without_theta(mut self) -> Self {
        self.theta = None;
        self
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn mutable_lattice(&self) -> &Lattice {
        &self.mutable
    }

    pub fn b(&self) -> &IntMatrix {
        &self.b
    }

    pub fn theta(&self) -> Option<&BTreeMap<String, ExchangePolynomial>> {
        self.theta.as_ref()
    }

    pub fn is_generalized(&self) -> bool {
        self.theta.is_some()
    }

    /// `ε_{row,col}`
    pub fn entry(&self, row: &str, col: &str) -> Result<BigInt> {
        self.b.get(row, col)
    }

    /// Position of a mutable direction within the mutable lattice.
    pub fn direction(&self, k: &str) -> Result<usize> {
        if self.lattice.is_frozen_label(k)? {
            return Err(Error::FrozenDirection(k.to_string()));
        }
        self.mutable.require(k)
    }

    /// Degree of the exchange polynomial at a mutable label (1 when absent).
    pub fn theta_degree(&self, k: &str) -> usize {
        self.theta
            .as_ref()
            .and_then(|t| t.get(k))
            .map_or(1, |p| p.degree().max(1))
    }

    /// Principal (mutable × mutable) block of `B`.
    pub fn principal_part(&self) -> IntMatrix {
        self.b.restrict(&self.mutable, &self.mutable).expect("mutable labels are rows of B")
    }

    /// Mutable directions in declaration order.
    pub fn directions(&self) -> Vec<String> {
        self.mutable.labels().to_vec()
    }

    pub(crate) fn with_b(&self, b: IntMatrix) -> Self {
        Self { lattice: self.lattice.clone(), mutable: self.mutable.clone(), b, theta: self.theta.clone() }
    }
}

impl fmt::Debug for Seed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Seed")
            .field("lattice", &self.lattice)
            .field("B", &self.b)
            .field("theta", &self.theta)
            .finish()
    }
}

/// A single failed seed invariant.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NonzeroDiagonal { label: String, value: BigInt },
    Symmetrizer { row: String, col: String, lhs: BigInt, rhs: BigInt },
    ThetaConstantTerm { label: String },
    ThetaLeadingCoefficient { label: String },
    ThetaNotReciprocal { label: String },
    ThetaDegreeMismatch { label: String, row: String },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NonzeroDiagonal { label, value } => {
                write!(f, "nonzero diagonal at mutable {label} (value {value})")
            }
            Violation::Symmetrizer { row, col, lhs, rhs } => write!(
                f,
                "symmetrizer violation at ({row}, {col}): d_{row}*b_{row}{col} = {lhs} but -d_{col}*b_{col}{row} = {rhs}"
            ),
            Violation::ThetaConstantTerm { label } => {
                write!(f, "exchange polynomial at {label} must have constant term 1")
            }
            Violation::ThetaLeadingCoefficient { label } => {
                write!(f, "exchange polynomial at {label} must have positive leading coefficient")
            }
            Violation::ThetaNotReciprocal { label } => {
                write!(f, "exchange polynomial at {label} is not reciprocal")
            }
            Violation::ThetaDegreeMismatch { label, row } => write!(
                f,
                "entry ({row}, {label}) is not divisible by the degree of the exchange polynomial at {label}"
            ),
        }
    }
}

/// Every violated invariant; empty iff the seed is valid.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_valid() {
            return write!(f, "valid");
        }
        for (i, v) in self.violations.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

/// Checks the diagonal, the symmetrizer and (for generalized seeds) the
/// exchange polynomials.
///
/// For generalized seeds the symmetrizer condition is applied to the reduced
/// matrix whose column `Y` is divided by `deg θ_Y`.
pub fn validate_seed(s: &Seed) -> ValidationReport {
    let mut violations = Vec::new();
    let lat = &s.lattice;
    let m = &s.mutable;
    let deg = |k: &str| BigInt::from(s.theta_degree(k));

    if let Some(theta) = &s.theta {
        for (k, p) in theta {
            if p.coeffs().first().is_none_or(|c| !c.is_one()) {
                violations.push(Violation::ThetaConstantTerm { label: k.clone() });
            }
            if p.coeffs().last().is_none_or(|c| !c.is_positive()) {
                violations.push(Violation::ThetaLeadingCoefficient { label: k.clone() });
            }
            if !p.is_reciprocal() {
                violations.push(Violation::ThetaNotReciprocal { label: k.clone() });
            }
        }
        for j in 0..m.len() {
            let k = m.label(j);
            let dk = deg(k);
            for i in 0..lat.len() {
                if !s.b.at(i, j).is_multiple_of(&dk) {
                    violations.push(Violation::ThetaDegreeMismatch {
                        label: k.to_string(),
                        row: lat.label(i).to_string(),
                    });
                }
            }
        }
    }

    // reduced entry b_{X,Y} / deg θ_Y (exact whenever the checks above pass)
    let reduced = |i: usize, j: usize| -> BigInt { s.b.at(i, j).div_floor(&deg(m.label(j))) };
    for j in 0..m.len() {
        let i = lat.position(m.label(j)).expect("mutable label in lattice");
        let v = s.b.at(i, j);
        if !v.is_zero() {
            violations.push(Violation::NonzeroDiagonal { label: m.label(j).to_string(), value: v });
        }
    }
    for a in 0..m.len() {
        for b in a + 1..m.len() {
            let (x, y) = (m.label(a), m.label(b));
            let (ix, iy) = (lat.position(x).unwrap(), lat.position(y).unwrap());
            let lhs = lat.d(ix) * reduced(ix, b);
            let rhs = -(lat.d(iy) * reduced(iy, a));
            if lhs != rhs {
                violations.push(Violation::Symmetrizer {
                    row: x.to_string(),
                    col: y.to_string(),
                    lhs,
                    rhs,
                });
            }
        }
    }
    ValidationReport { violations }
}

impl Seed {
    pub fn validate(&self) -> ValidationReport {
        validate_seed(self)
    }

    pub fn ensure_valid(&self) -> Result<()> {
        let r = validate_seed(self);
        if r.is_valid() {
            Ok(())
        } else {
            Err(Error::InvalidSeed(r.to_string()))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixtures_validate() {
        for s in fixtures::all() {
            assert!(validate_seed(&s.1).is_valid(), "{} invalid: {}", s.0, validate_seed(&s.1));
        }
    }

    #[test]
    fn nonzero_diagonal_reported() {
        let s = Seed::from_dense(&["1", "2"], &[], &[1, 1], &[vec![1, -1], vec![1, 0]]).unwrap();
        let r = validate_seed(&s);
        assert_eq!(r.violations.len(), 1);
        assert_eq!(r.to_string(), "nonzero diagonal at mutable 1 (value 1)");
    }

    #[test]
    fn symmetrizer_violation_reported() {
        let s = Seed::from_dense(&["1", "2"], &[], &[1, 2], &[vec![0, -1], vec![1, 0]]).unwrap();
        let r = validate_seed(&s);
        assert_eq!(
            r.violations,
            vec![Violation::Symmetrizer {
                row: "1".into(),
                col: "2".into(),
                lhs: BigInt::from(-1),
                rhs: BigInt::from(-2),
            }]
        );
    }

    #[test]
    fn theta_checks() {
        let s = fixtures::cns();
        let mut theta = s.theta().unwrap().clone();
        theta.insert("2".into(), ExchangePolynomial::new([2, 1]));
        let bad = s.clone().without_theta().with_theta(theta).unwrap();
        let r = validate_seed(&bad);
        assert!(r.violations.contains(&Violation::ThetaConstantTerm { label: "2".into() }));
        assert!(r.violations.contains(&Violation::ThetaNotReciprocal { label: "2".into() }));
        // the CNS matrix is not skew-symmetrizable by d = (1, 1) without reduction
        assert!(!validate_seed(&s.without_theta()).is_valid());
    }

    #[test]
    fn frozen_direction_rejected() {
        let s = fixtures::a2f();
        assert!(matches!(s.direction("f"), Err(Error::FrozenDirection(_))));
        assert!(matches!(s.direction("x"), Err(Error::UnknownLabel(_))));
        assert_eq!(s.direction("2").unwrap(), 1);
    }
}
