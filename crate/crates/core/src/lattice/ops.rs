use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;

use super::matrix::IntMatrix;
use super::vector::IntVector;
use crate::error::{Error, Result};

/// Pairing of a class over the simples with a class over the objects,
/// extended bilinearly from `<S_X, Y> = d_X δ_{X,Y}`.
///
/// Every label of `simple_class`'s lattice must also label `object_class`'s
/// lattice with the same multiplier.
pub fn pair(simple_class: &IntVector, object_class: &IntVector) -> Result<BigInt> {
    let s = simple_class.lattice();
    let o = object_class.lattice();
    let mut total = BigInt::zero();
    for i in 0..s.len() {
        let label = s.label(i);
        let j = o.position(label).ok_or_else(|| {
            Error::IncompatibleLattices(format!("simple label `{label}` has no object counterpart"))
        })?;
        if s.d(i) != o.d(j) {
            return Err(Error::IncompatibleLattices(format!("multiplier of `{label}` differs")));
        }
        if let (Some(x), Some(y)) = (simple_class.at_ref(i), object_class.at_ref(j)) {
            total += x * s.d(i) * y;
        }
    }
    Ok(total)
}

/// Adjoint with respect to the weighted pairings:
/// `A*_{U,V} = d_row(V)^{-1} · A_{V,U} · d_col(U)`, so that
/// `Σ_U (A* x)_U y_U / d_col(U) = Σ_V x_V (A y)_V / d_row(V)`: adjointness
/// for the forms weighted by inverse multipliers, the duals of [`pair`].
///
/// Multipliers are given in declaration order of the row and column lattices
/// of `a`. Fails if some entry is not integral.
pub fn weighted_adjoint(a: &IntMatrix, d_row: &[BigInt], d_col: &[BigInt]) -> Result<IntMatrix> {
    if d_row.len() != a.rows().len() || d_col.len() != a.cols().len() {
        return Err(Error::IncompatibleLattices("multiplier count".into()));
    }
    let mut out = IntMatrix::zeros(a.cols(), a.rows());
    for ((v, u), x) in a.nonzero() {
        let (q, r) = (x * &d_col[u]).div_rem(&d_row[v]);
        if !r.is_zero() {
            return Err(Error::DivisibilityFailure {
                row: a.cols().label(u).to_string(),
                col: a.rows().label(v).to_string(),
            });
        }
        out.set_at(u, v, q);
    }
    Ok(out)
}

/// [`weighted_adjoint`] using the multipliers stored on the lattices.
pub fn lattice_adjoint(a: &IntMatrix) -> Result<IntMatrix> {
    let d_row = a.rows().multipliers().to_vec();
    let d_col = a.cols().multipliers().to_vec();
    weighted_adjoint(a, &d_row, &d_col)
}

/// Diagonal matrix of multipliers on a lattice.
pub fn multiplier_matrix(lattice: &super::Lattice) -> IntMatrix {
    let mut m = IntMatrix::zeros(lattice, lattice);
    for i in 0..lattice.len() {
        m.set_at(i, i, lattice.d(i).clone());
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{LabeledLattice, Lattice};

    fn lat(d: &[i64]) -> Lattice {
        let labels: Vec<String> = (1..=d.len()).map(|i| i.to_string()).collect();
        LabeledLattice::with_multipliers(&labels, d).unwrap().shared()
    }

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn pair_examples() {
        let l = lat(&[1, 1]);
        let e1 = IntVector::basis(&l, "1").unwrap();
        let e2 = IntVector::basis(&l, "2").unwrap();
        assert_eq!(pair(&e1, &e1).unwrap(), BigInt::from(1));
        assert_eq!(pair(&e1, &e2).unwrap(), BigInt::from(0));

        let l = lat(&[2, 1]);
        let x = IntVector::from_dense(&l, &[2, 1]).unwrap();
        let y = IntVector::from_dense(&l, &[1, -1]).unwrap();
        assert_eq!(pair(&x, &y).unwrap(), BigInt::from(3));
    }

    #[test]
    fn pair_rejects_foreign_labels() {
        let a = lat(&[1, 1, 1]);
        let b = lat(&[1, 1]);
        assert!(matches!(
            pair(&IntVector::zero(&a), &IntVector::zero(&b)),
            Err(Error::IncompatibleLattices(_))
        ));
        // simples on a sublattice pair fine with the bigger object lattice
        assert!(pair(&IntVector::zero(&b), &IntVector::zero(&a)).is_ok());
    }

    #[test]
    fn adjoint_examples() {
        let l = lat(&[1, 1]);
        let id = IntMatrix::identity(&l);
        assert_eq!(weighted_adjoint(&id, &ints(&[3, 3]), &ints(&[3, 3])).unwrap(), id);

        let a = IntMatrix::from_rows(&l, &l, &[vec![1, 2], vec![0, 1]]).unwrap();
        let t = IntMatrix::from_rows(&l, &l, &[vec![1, 0], vec![2, 1]]).unwrap();
        assert_eq!(weighted_adjoint(&a, &ints(&[1, 1]), &ints(&[1, 1])).unwrap(), t);

        let a = IntMatrix::from_rows(&l, &l, &[vec![2, 0], vec![0, 1]]).unwrap();
        assert_eq!(weighted_adjoint(&a, &ints(&[2, 1]), &ints(&[1, 1])).unwrap(), id);
    }

    #[test]
    fn adjoint_divisibility_failure() {
        let l = lat(&[1, 1]);
        let a = IntMatrix::from_rows(&l, &l, &[vec![1, 1], vec![0, 1]]).unwrap();
        assert!(matches!(
            weighted_adjoint(&a, &ints(&[2, 1]), &ints(&[1, 1])),
            Err(Error::DivisibilityFailure { .. })
        ));
    }
}
