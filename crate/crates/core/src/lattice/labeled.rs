use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use crate::error::{Error, Result};

/// A finite free abelian group with a named basis.
///
/// Each basis element carries a frozen flag and a positive multiplier `d`.
/// Labels keep their declaration order, which is also the order used for
/// every rendering and serialization.
#[derive(Clone, PartialEq, Eq)]
pub struct LabeledLattice {
    labels: Vec<String>,
    frozen: Vec<bool>,
    d: Vec<BigInt>,
    index: HashMap<String, usize>,
}

/// Lattices are shared between the vectors and matrices built over them.
pub type Lattice = Arc<LabeledLattice>;

impl LabeledLattice {
    pub fn new<S: AsRef<str>>(labels: &[S], frozen: &[S], d: &[BigInt]) -> Result<Self> {
        if labels.is_empty() {
            return Err(Error::InvalidLattice("no labels".into()));
        }
        if d.len() != labels.len() {
            return Err(Error::InvalidLattice(format!(
                "{} labels but {} multipliers",
                labels.len(),
                d.len()
            )));
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, l) in labels.iter().enumerate() {
            let l = l.as_ref();
            if l.is_empty() {
                return Err(Error::InvalidLattice("empty label".into()));
            }
            if index.insert(l.to_string(), i).is_some() {
                return Err(Error::InvalidLattice(format!("duplicate label `{l}`")));
            }
        }
        let mut is_frozen = vec![false; labels.len()];
        for f in frozen {
            let i = *index
                .get(f.as_ref())
                .ok_or_else(|| Error::InvalidLattice(format!("frozen label `{}` not declared", f.as_ref())))?;
            is_frozen[i] = true;
        }
        for (l, m) in labels.iter().zip(d) {
            if !m.is_positive() {
                return Err(Error::InvalidLattice(format!(
                    "multiplier of `{}` must be positive, got {m}",
                    l.as_ref()
                )));
            }
        }
        Ok(Self {
            labels: labels.iter().map(|l| l.as_ref().to_string()).collect(),
            frozen: is_frozen,
            d: d.to_vec(),
            index,
        })
    }

    /// All multipliers 1, nothing frozen.
    pub fn plain<S: AsRef<str>>(labels: &[S]) -> Result<Self> {
        let d = vec![BigInt::one(); labels.len()];
        Self::new(labels, &[] as &[S], &d)
    }

    pub fn with_multipliers<S: AsRef<str>>(labels: &[S], d: &[i64]) -> Result<Self> {
        let d: Vec<BigInt> = d.iter().map(|&x| BigInt::from(x)).collect();
        Self::new(labels, &[] as &[S], &d)
    }

    pub fn shared(self) -> Lattice {
        Arc::new(self)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    pub fn require(&self, label: &str) -> Result<usize> {
        self.position(label).ok_or_else(|| Error::UnknownLabel(label.to_string()))
    }

    pub fn contains(&self, label: &str) -> bool {
        self.index.contains_key(label)
    }

    pub fn is_frozen(&self, i: usize) -> bool {
        self.frozen[i]
    }

    pub fn is_frozen_label(&self, label: &str) -> Result<bool> {
        Ok(self.frozen[self.require(label)?])
    }

    pub fn d(&self, i: usize) -> &BigInt {
        &self.d[i]
    }

    pub fn multipliers(&self) -> &[BigInt] {
        &self.d
    }

    pub fn frozen_labels(&self) -> impl Iterator<Item = &str> {
        self.labels
            .iter()
            .zip(&self.frozen)
            .filter(|(_, &f)| f)
            .map(|(l, _)| l.as_str())
    }

    pub fn mutable_labels(&self) -> impl Iterator<Item = &str> {
        self.labels
            .iter()
            .zip(&self.frozen)
            .filter(|(_, &f)| !f)
            .map(|(l, _)| l.as_str())
    }

    pub fn mutable_count(&self) -> usize {
        self.frozen.iter().filter(|f| !**f).count()
    }

    /// The sublattice spanned by the mutable labels (nothing frozen there).
    pub fn mutable_part(&self) -> Result<Self> {
        let labels: Vec<&str> = self.mutable_labels().collect();
        if labels.is_empty() {
            return Err(Error::InvalidLattice("no mutable labels".into()));
        }
        let d: Vec<BigInt> = (0..self.len())
            .filter(|&i| !self.frozen[i])
            .map(|i| self.d[i].clone())
            .collect();
        Self::new(&labels, &[], &d)
    }

    /// The lattice with the given labels removed, keeping order and flags.
    pub fn without<S: AsRef<str>>(&self, removed: &[S]) -> Result<Self> {
        for r in removed {
            self.require(r.as_ref())?;
        }
        let keep: Vec<usize> = (0..self.len())
            .filter(|&i| !removed.iter().any(|r| r.as_ref() == self.labels[i]))
            .collect();
        let labels: Vec<&str> = keep.iter().map(|&i| self.labels[i].as_str()).collect();
        let frozen: Vec<&str> = keep
            .iter()
            .filter(|&&i| self.frozen[i])
            .map(|&i| self.labels[i].as_str())
            .collect();
        let d: Vec<BigInt> = keep.iter().map(|&i| self.d[i].clone()).collect();
        Self::new(&labels, &frozen, &d)
    }

    /// Same labels in the same order with the same flags and multipliers.
    pub fn same_as(&self, other: &Self) -> bool {
        std::ptr::eq(self, other) || self == other
    }
}

impl std::hash::Hash for LabeledLattice {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.labels.hash(state);
        self.frozen.hash(state);
        self.d.hash(state);
    }
}

impl fmt::Debug for LabeledLattice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut l = f.debug_list();
        for i in 0..self.len() {
            let tag = if self.frozen[i] { "*" } else { "" };
            l.entry(&format_args!("{}{}(d={})", self.labels[i], tag, self.d[i]));
        }
        l.finish()
    }
}

pub(crate) fn ensure_same(a: &LabeledLattice, b: &LabeledLattice, what: &str) -> Result<()> {
    if a.same_as(b) {
        Ok(())
    } else {
        Err(Error::IncompatibleLattices(format!("{what}: {a:?} vs {b:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_input() {
        assert!(LabeledLattice::plain::<&str>(&[]).is_err());
        assert!(LabeledLattice::plain(&["1", "1"]).is_err());
        let d = [BigInt::from(1), BigInt::from(0)];
        assert!(LabeledLattice::new(&["1", "2"], &[], &d).is_err());
        let d = [BigInt::from(1), BigInt::from(1)];
        assert!(LabeledLattice::new(&["1", "2"], &["3"], &d).is_err());
    }

    #[test]
    fn mutable_part_drops_frozen() {
        let d = [BigInt::from(1), BigInt::from(2), BigInt::from(1)];
        let l = LabeledLattice::new(&["1", "2", "f"], &["f"], &d).unwrap();
        let m = l.mutable_part().unwrap();
        assert_eq!(m.labels(), &["1".to_string(), "2".to_string()]);
        assert_eq!(m.d(1), &BigInt::from(2));
        assert_eq!(l.frozen_labels().collect::<Vec<_>>(), vec!["f"]);
        let w = l.without(&["2"]).unwrap();
        assert_eq!(w.labels().len(), 2);
        assert!(w.is_frozen(1));
    }
}
