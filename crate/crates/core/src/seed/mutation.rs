use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::Seed;
use crate::error::{Error, Result};
use crate::lattice::{neg, pos, IntMatrix};

/// Tropical sign choice `ε` for the E/F factorization.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }

    pub fn both() -> [Sign; 2] {
        [Sign::Plus, Sign::Minus]
    }
}

/// `E_ε(k)` (all × all) and `F_ε(k)` (mutable × mutable); both are involutions
/// and `E · B · F = μ_k(B)` for either sign.
pub fn ef_matrices(s: &Seed, k: &str, sign: Sign) -> Result<(IntMatrix, IntMatrix)> {
    let kc = s.direction(k)?;
    let lat = s.lattice();
    let mlat = s.mutable_lattice();
    let kr = lat.require(k)?;
    let eps = BigInt::from(sign.value());

    let mut e = IntMatrix::identity(lat);
    e.set_at(kr, kr, -BigInt::one());
    for i in 0..lat.len() {
        if i != kr {
            e.set_at(i, kr, pos(&(-&eps * s.b().at(i, kc))));
        }
    }

    let mut f = IntMatrix::identity(mlat);
    f.set_at(kc, kc, -BigInt::one());
    for j in 0..mlat.len() {
        if j != kc {
            f.set_at(kc, j, pos(&(&eps * s.b().at(kr, j))));
        }
    }
    Ok((e, f))
}

/// Matrix mutation of `B` at `k` by the closed formula.
pub fn mutate_matrix(s: &Seed, k: &str) -> Result<IntMatrix> {
    let kc = s.direction(k)?;
    let kr = s.lattice().require(k)?;
    let b = s.b();
    let mut out = IntMatrix::zeros(b.rows(), b.cols());
    for u in 0..b.rows().len() {
        let b_uk = b.at(u, kc);
        for v in 0..b.cols().len() {
            let x = if u == kr {
                -b.at(kr, v)
            } else if v == kc {
                -b_uk.clone()
            } else {
                let b_kv = b.at(kr, v);
                b.at(u, v) + &b_uk * pos(&b_kv) + neg(&b_uk) * &b_kv
            };
            if !x.is_zero() {
                out.set_at(u, v, x);
            }
        }
    }
    Ok(out)
}

impl Seed {
    /// Classical mutation at `k`.
    ///
    /// The closed formula is checked against `E_ε B F_ε` for both signs.
    pub fn mutate(&self, k: &str) -> Result<Seed> {
        if self.is_generalized() {
            return Err(Error::InvalidSeed(
                "classical mutation of a seed with exchange polynomials; use generalized_mutate".into(),
            ));
        }
        self.direction(k)?;
        self.ensure_valid()?;
        let b = mutate_matrix(self, k)?;
        for sign in Sign::both() {
            let (e, f) = ef_matrices(self, k, sign)?;
            let via_ef = e.try_mul(self.b())?.try_mul(&f)?;
            assert_eq!(via_ef, b, "E/F factorization disagrees with the closed mutation formula");
        }
        Ok(self.with_b(b))
    }
}

/// See [`Seed::mutate`].
pub fn mutate_seed(s: &Seed, k: &str) -> Result<Seed> {
    s.mutate(k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::fixtures;

    fn dense(m: &IntMatrix) -> Vec<Vec<i64>> {
        m.to_dense()
            .into_iter()
            .map(|r| r.into_iter().map(|x| i64::try_from(x).unwrap()).collect())
            .collect()
    }

    #[test]
    fn a2_ef() {
        let (e, f) = ef_matrices(&fixtures::a2(), "1", Sign::Plus).unwrap();
        assert_eq!(dense(&e), vec![vec![-1, 0], vec![0, 1]]);
        assert_eq!(dense(&f), vec![vec![-1, 0], vec![0, 1]]);
    }

    #[test]
    fn markov_ef_column() {
        let (e, _) = ef_matrices(&fixtures::markov(), "1", Sign::Plus).unwrap();
        let col: Vec<i64> = dense(&e).iter().map(|r| r[0]).collect();
        assert_eq!(col, vec![-1, 0, 2]);
    }

    #[test]
    fn ef_are_involutions() {
        for (_, s) in fixtures::all().into_iter().filter(|(_, s)| !s.is_generalized()) {
            for k in s.directions() {
                for sign in Sign::both() {
                    let (e, f) = ef_matrices(&s, &k, sign).unwrap();
                    assert_eq!(e.try_mul(&e).unwrap(), IntMatrix::identity(s.lattice()));
                    assert_eq!(f.try_mul(&f).unwrap(), IntMatrix::identity(s.mutable_lattice()));
                }
            }
        }
    }

    #[test]
    fn a2_mutation() {
        let s = fixtures::a2();
        let m = s.mutate("1").unwrap();
        assert_eq!(dense(m.b()), vec![vec![0, 1], vec![-1, 0]]);
        assert_eq!(m.mutate("1").unwrap(), s);
    }

    #[test]
    fn markov_mutation_negates() {
        let s = fixtures::markov();
        let m = s.mutate("1").unwrap();
        assert_eq!(m.b(), &s.b().neg());
    }

    #[test]
    fn frozen_and_generalized_rejected() {
        assert!(matches!(fixtures::a2f().mutate("f"), Err(Error::FrozenDirection(_))));
        assert!(matches!(fixtures::cns().mutate("1"), Err(Error::InvalidSeed(_))));
    }

    #[test]
    fn frozen_rows_mutate() {
        let s = fixtures::a2f();
        let m = s.mutate("1").unwrap();
        // row f: (1, 0) -> (-1, 0 + 1*[−1]_+ + [1]_-*(−1)) = (-1, 0)
        assert_eq!(m.b().get("f", "1").unwrap(), BigInt::from(-1));
        assert_eq!(m.b().get("f", "2").unwrap(), BigInt::from(0));
        let m2 = s.mutate("2").unwrap();
        // row f at column 1: 1 + 0 + [0]_- ... = 1 ; ε_{f,2}=0 so unchanged
        assert_eq!(m2.b().get("f", "1").unwrap(), BigInt::from(1));
    }
}
