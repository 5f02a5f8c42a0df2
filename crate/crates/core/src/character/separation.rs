use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive};

use super::{exponent, CharacterState};
use crate::error::{Error, Result};
use crate::poly::{Exponent, LaurentPoly, RationalFn};
use crate::seed::Seed;

/// Exponents of `ŷ_j = ∏_i a_i^{B[i,j]}` over all labels, one per mutable `j`.
pub fn hat_y_images(root: &Seed) -> Vec<Exponent> {
    let b = root.b();
    (0..b.cols().len())
        .map(|j| (0..b.rows().len()).map(|i| b.at(i, j).to_i64().expect("small exchange matrix")).collect())
        .collect()
}

/// `a^{g(label)} · F_label(ŷ)`, using the root exchange matrix including
/// frozen rows.
pub fn a_separation(cs: &CharacterState, label: &str) -> Result<LaurentPoly> {
    let lat = cs.a_lattice();
    let j = lat.require(label)?;
    let g = exponent(&cs.trop().g().column_at(j))?;
    let mono = LaurentPoly::monomial(lat, g, BigInt::one());
    if lat.is_frozen(j) {
        return Ok(mono);
    }
    let f = cs.f(label)?;
    let fy = f.substitute_monomials(lat, &hat_y_images(cs.trop().root()));
    Ok(&mono * &fy)
}

/// `y^{c(label)} · ∏_V F_V^{ε_{V,label}}` with `ε` from the current seed.
pub fn x_separation(cs: &CharacterState, label: &str) -> Result<RationalFn> {
    let (num, den) = x_separation_parts(cs, label)?;
    RationalFn::new(num, den)
}

/// Unreduced numerator and denominator of [`x_separation`].
pub(crate) fn x_separation_parts(cs: &CharacterState, label: &str) -> Result<(LaurentPoly, LaurentPoly)> {
    let cur = cs.current();
    let kc = cur.direction(label)?;
    let ylat = cs.y_lattice();
    let c = exponent(&cs.trop().c().column_at(kc))?;
    let mut num = LaurentPoly::monomial(ylat, c, BigInt::one());
    let mut den = LaurentPoly::one(ylat);
    let mlat = cur.mutable_lattice();
    for v in 0..mlat.len() {
        let e = cur.entry(mlat.label(v), label)?;
        let p = u32::try_from(e.abs()).map_err(|_| Error::GrowthLimit(format!("exponent {e}")))?;
        if p == 0 {
            continue;
        }
        let fp = cs.f(mlat.label(v))?.pow(p);
        if e.is_positive() {
            num = &num * &fp;
        } else {
            den = &den * &fp;
        }
    }
    Ok((num, den))
}
