use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};

use super::{mutate_matrix, ExchangePolynomial, Seed};
use crate::error::{Error, Result};
use crate::lattice::{neg, pos};
use crate::poly::RationalFn;

/// Cluster variables of a generalized seed, keyed by label.
pub type GeneralizedVars = BTreeMap<String, RationalFn>;

/// Chekhov–Shapiro mutation of a rank-2 generalized seed at `k`:
///
/// `x_k · x_k' = Σ_j θ_{k,j} u^j v^{deg θ_k - j}`, with
/// `u = ∏ x_V^{[ε_{V,k}]_+ / deg θ_k}` and `v = ∏ x_V^{[ε_{V,k}]_- / deg θ_k}`.
///
/// `B` mutates by the classical rule; the exchange polynomials are kept.
pub fn generalized_mutate(vars: &GeneralizedVars, s: &Seed, k: &str) -> Result<(GeneralizedVars, Seed)> {
    let theta = s
        .theta()
        .ok_or_else(|| Error::InvalidSeed("generalized mutation needs exchange polynomials".into()))?;
    if s.mutable_lattice().len() != 2 {
        return Err(Error::UnsupportedRank(s.mutable_lattice().len()));
    }
    let kc = s.direction(k)?;
    s.ensure_valid()?;

    let default = ExchangePolynomial::new([1, 1]);
    let th = theta.get(k).unwrap_or(&default);
    let deg = th.degree().max(1);
    let degb = BigInt::from(deg);

    let lat = s.lattice();
    let xk = vars.get(k).ok_or_else(|| Error::UnknownLabel(k.to_string()))?;
    let any = vars.values().next().expect("nonempty");
    let mut u = RationalFn::one(any.lattice());
    let mut v = RationalFn::one(any.lattice());
    for i in 0..lat.len() {
        let e = s.b().at(i, kc);
        if e.is_zero() {
            continue;
        }
        let x = vars.get(lat.label(i)).ok_or_else(|| Error::UnknownLabel(lat.label(i).to_string()))?;
        let p = pos(&e).div_floor(&degb).to_i64().expect("small exponent");
        let m = neg(&e).div_floor(&degb).to_i64().expect("small exponent");
        if p > 0 {
            u = u.try_mul(&x.pow(p)?);
        }
        if m > 0 {
            v = v.try_mul(&x.pow(m)?);
        }
    }
    let mut rhs = RationalFn::from_laurent(crate::poly::LaurentPoly::zero(any.lattice()));
    for (j, c) in th.coeffs().iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        let term = u.pow(j as i64)?.try_mul(&v.pow((deg - j) as i64)?);
        let scaled = RationalFn::new(term.num().scale(c), term.den().clone())?;
        rhs = rhs.add(&scaled);
    }
    if xk.is_zero() {
        return Err(Error::ExactDivisionFailure(format!("variable at {k} is zero")));
    }
    let mut out = vars.clone();
    out.insert(k.to_string(), rhs.try_div(xk)?);
    Ok((out, s.with_b(mutate_matrix(s, k)?)))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::LaurentPoly;
    use crate::seed::fixtures;

    fn initial(s: &Seed) -> GeneralizedVars {
        s.lattice()
            .labels()
            .iter()
            .map(|l| (l.clone(), RationalFn::var(s.lattice(), l).unwrap()))
            .collect()
    }

    fn poly(s: &Seed, terms: &[(&[i64], i64)]) -> RationalFn {
        LaurentPoly::from_terms(s.lattice(), terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c)))).into()
    }

    #[test]
    fn cns_values() {
        let s = fixtures::cns();
        let v0 = initial(&s);
        let (v1, s1) = generalized_mutate(&v0, &s, "1").unwrap();
        // a1^-1 (1 + a2 + a2^2)
        assert_eq!(v1["1"], poly(&s, &[(&[-1, 0], 1), (&[-1, 1], 1), (&[-1, 2], 1)]));
        let (v2, s2) = generalized_mutate(&v1, &s1, "2").unwrap();
        // a2^-1 (1 + a1^-1 + a1^-1 a2 + a1^-1 a2^2)
        assert_eq!(
            v2["2"],
            poly(&s, &[(&[0, -1], 1), (&[-1, -1], 1), (&[-1, 0], 1), (&[-1, 1], 1)])
        );
        assert_eq!(v2["2"].render_factored("a"), "a1^-1*a2^-1*(1 + a2 + a1 + a2^2)");
        let (v3, _) = generalized_mutate(&v2, &s2, "1").unwrap();
        // a1 a2^-2 (1 + 2a1^-1 + a1^-2 + a1^-1 a2 + a1^-2 a2 + a1^-2 a2^2)
        assert_eq!(
            v3["1"],
            poly(&s, &[(&[1, -2], 1), (&[0, -2], 2), (&[-1, -2], 1), (&[0, -1], 1), (&[-1, -1], 1), (&[-1, 0], 1)])
        );
        let (w, _) = generalized_mutate(&v0, &s, "2").unwrap();
        // a1 a2^-1 (1 + a1^-1)
        assert_eq!(w["2"], poly(&s, &[(&[1, -1], 1), (&[0, -1], 1)]));
    }

    #[test]
    fn involutive() {
        let s = fixtures::cns();
        let v0 = initial(&s);
        for k in ["1", "2"] {
            let (v1, s1) = generalized_mutate(&v0, &s, k).unwrap();
            let (v2, s2) = generalized_mutate(&v1, &s1, k).unwrap();
            assert_eq!(v2, v0);
            assert_eq!(s2, s);
        }
    }

    #[test]
    fn rejects_bad_input() {
        let v = initial(&fixtures::a2());
        assert!(generalized_mutate(&v, &fixtures::a2(), "1").is_err());
        let s = fixtures::markov().with_theta(BTreeMap::new()).unwrap();
        assert!(matches!(generalized_mutate(&initial(&s), &s, "1"), Err(Error::UnsupportedRank(3))));
    }
}
