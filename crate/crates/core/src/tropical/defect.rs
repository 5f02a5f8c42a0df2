use num_rational::BigRational;
use num_traits::Signed;

use super::TropicalState;
use crate::error::{Error, Result};
use crate::lattice::linalg::solve_injective;
use crate::lattice::IntMatrix;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DefectVerdict {
    /// `Δ = B_root · R` with `R` integral and nonnegative.
    Certified(IntMatrix),
    /// The solve succeeded but `R` is not integral or has a negative entry.
    Violated(String),
    Unverifiable(String),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DefectCertificate {
    /// `G_{U→T} · G_{V→U} - G_{V→T}`
    pub delta: IntMatrix,
    pub verdict: DefectVerdict,
}

impl DefectCertificate {
    pub fn certified(&self) -> bool {
        matches!(self.verdict, DefectVerdict::Certified(_))
    }
}

/// Compares composing index maps along `T → U → V` with the direct map
/// `T → V`.
pub fn composition_defect(
    st_ut: &TropicalState,
    st_vu: &TropicalState,
    st_vt: &TropicalState,
) -> Result<DefectCertificate> {
    if st_ut.root() != st_vt.root() {
        return Err(Error::PathMismatch("first and direct paths start at different seeds".into()));
    }
    if st_vu.root() != st_ut.current() {
        return Err(Error::PathMismatch("second path does not start where the first ends".into()));
    }
    let joined: Vec<&String> = st_ut.path().iter().chain(st_vu.path()).collect();
    if joined != st_vt.path().iter().collect::<Vec<_>>() {
        return Err(Error::PathMismatch(format!(
            "direct path {:?} is not {:?} followed by {:?}",
            st_vt.path(),
            st_ut.path(),
            st_vu.path()
        )));
    }
    let delta = st_ut.g().try_mul(st_vu.g())?.try_sub(st_vt.g())?;
    let b = st_ut.root().b();
    let verdict = match solve_injective(&b.to_dense(), &delta.to_dense()) {
        Err(()) => DefectVerdict::Unverifiable("B not injective".into()),
        Ok(None) => DefectVerdict::Violated("defect is not in the column space of B".into()),
        Ok(Some(r)) => certify(b, &delta, r),
    };
    Ok(DefectCertificate { delta, verdict })
}

fn certify(b: &IntMatrix, delta: &IntMatrix, r: Vec<Vec<BigRational>>) -> DefectVerdict {
    let mut out = IntMatrix::zeros(b.cols(), delta.cols());
    for (i, row) in r.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            if !x.is_integer() {
                return DefectVerdict::Violated(format!("non-integral coefficient {x}"));
            }
            if x.is_negative() {
                return DefectVerdict::Violated(format!(
                    "negative coefficient {x} at ({}, {})",
                    b.cols().label(i),
                    delta.cols().label(j)
                ));
            }
            out.set_at(i, j, x.to_integer());
        }
    }
    DefectVerdict::Certified(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::fixtures;
    use crate::tropical::initial_state;

    #[test]
    fn trivial_second_path() {
        let t = initial_state(&fixtures::a2()).unwrap();
        let u = t.mutate("1").unwrap();
        let v = initial_state(u.current()).unwrap();
        let cert = composition_defect(&u, &v, &u).unwrap();
        assert!(cert.delta.is_zero());
        assert!(matches!(cert.verdict, DefectVerdict::Certified(ref r) if r.is_zero()));
    }

    #[test]
    fn a2_two_steps() {
        let t = initial_state(&fixtures::a2()).unwrap();
        let u = t.mutate("1").unwrap();
        let vu = initial_state(u.current()).unwrap().mutate("2").unwrap();
        let vt = u.mutate("2").unwrap();
        let cert = composition_defect(&u, &vu, &vt).unwrap();
        assert!(cert.certified(), "{cert:?}");
    }

    #[test]
    fn markov_unverifiable_and_mismatch() {
        let t = initial_state(&fixtures::markov()).unwrap();
        let u = t.mutate("1").unwrap();
        let vu = initial_state(u.current()).unwrap().mutate("2").unwrap();
        let vt = u.mutate("2").unwrap();
        let cert = composition_defect(&u, &vu, &vt).unwrap();
        assert!(matches!(cert.verdict, DefectVerdict::Unverifiable(_)));
        assert!(matches!(composition_defect(&u, &vu, &u), Err(Error::PathMismatch(_))));
    }
}
