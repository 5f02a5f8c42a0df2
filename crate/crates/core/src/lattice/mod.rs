//! Labeled integer lattices and the linear algebra over them.

mod labeled;
pub mod linalg;
mod matrix;
mod ops;
pub mod snf;
mod vector;

pub use labeled::{LabeledLattice, Lattice};
pub(crate) use labeled::ensure_same;
pub use matrix::IntMatrix;
pub use ops::{lattice_adjoint, multiplier_matrix, pair, weighted_adjoint};
pub use snf::{smith_cokernel, Cokernel};
pub use vector::{sign_split, IntVector};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// `[a]_+ = max(a, 0)`
pub fn pos(a: &BigInt) -> BigInt {
    if a.is_positive() {
        a.clone()
    } else {
        BigInt::zero()
    }
}

/// `[a]_- = max(-a, 0)`
pub fn neg(a: &BigInt) -> BigInt {
    if a.is_negative() {
        -a
    } else {
        BigInt::zero()
    }
}
