use num_traits::Signed;

use super::QuantumDatum;
use crate::error::{Error, Result};
use crate::lattice::IntMatrix;
use crate::seed::Seed;

/// `Λ = H - Hᵀ` for a matrix of Hom dimensions `H[X][Y] = dim Hom(X, Y)`.
pub fn lambda_from_hom(h: &IntMatrix) -> Result<QuantumDatum> {
    if !h.is_square_on_same_labels() {
        return Err(Error::InvalidHomMatrix("rows and columns must carry the same labels".into()));
    }
    if let Some((r, c, x)) = h.iter().find(|(_, _, x)| x.is_negative()) {
        return Err(Error::InvalidHomMatrix(format!("dim Hom({r}, {c}) = {x} is negative")));
    }
    QuantumDatum::new(h.try_sub(&h.transpose())?)
}

/// A seed with the Hom matrices of its cluster-tilting object before and
/// after one mutation.
#[derive(Debug, Clone)]
pub struct HomFixture {
    pub seed: Seed,
    pub direction: String,
    pub hom: IntMatrix,
    pub hom_mutated: IntMatrix,
}

/// Modules over the preprojective algebra of type A₂ (arrows `a: 1 → 2`,
/// `a*: 2 → 1`, `a*a = 0 = aa*`): the cluster-tilting object
/// `S₁ ⊕ P₁ ⊕ P₂` with the projective-injectives `P₁ = [1;2]`, `P₂ = [2;1]`
/// frozen, and its mutation `S₂ ⊕ P₁ ⊕ P₂` via `0 → S₁ → P₂ → S₂ → 0`,
/// `0 → S₂ → P₁ → S₁ → 0`.
pub fn preprojective_a2() -> HomFixture {
    let seed = Seed::from_dense(&["s", "p1", "p2"], &["p1", "p2"], &[1, 1, 1], &[vec![0], vec![1], vec![-1]])
        .expect("valid fixture");
    let lat = seed.lattice().clone();
    // rows/columns s, p1, p2
    let hom = IntMatrix::from_rows(&lat, &lat, &[vec![1, 0, 1], vec![1, 1, 1], vec![0, 1, 1]]).expect("3x3");
    let hom_mutated = IntMatrix::from_rows(&lat, &lat, &[vec![1, 1, 0], vec![0, 1, 1], vec![1, 1, 1]]).expect("3x3");
    HomFixture { seed, direction: "s".into(), hom, hom_mutated }
}
