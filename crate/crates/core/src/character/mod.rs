//! F-polynomials and A-/X-variables tracked along mutation paths.

mod audit;
mod separation;
mod specialize;

pub use audit::{character_audit, CharacterAudit, LabelCheck};
pub use separation::{a_separation, hat_y_images, x_separation};
pub use specialize::{specialize_frozen, FrozenSpecialize};

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::lattice::{neg, pos, IntVector, Lattice};
use crate::poly::{LaurentPoly, RationalFn};
use crate::seed::Seed;
use crate::tropical::{initial_state, TropicalState};

/// Caps on the size of tracked data; exceeded caps surface as
/// [`Error::GrowthLimit`] so callers can stop extending a path.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Limits {
    /// Largest number of terms allowed in any polynomial formed during a
    /// mutation. Products are bounded in advance (by term counts and Newton
    /// boxes of the factors), so an oversized step is refused before it is
    /// computed.
    pub max_terms: Option<usize>,
    /// Largest `|ε|` allowed in the exchange matrix reached.
    pub max_entry: Option<u64>,
}

impl Limits {
    pub const NONE: Limits = Limits { max_terms: None, max_entry: None };

    fn check_terms(&self, what: &str, n: usize) -> Result<()> {
        match self.max_terms {
            Some(m) if n > m => Err(Error::GrowthLimit(format!("{what} has {n} terms (limit {m})"))),
            _ => Ok(()),
        }
    }

    /// Refuses a product `∏ p_i^{e_i}` whose size bound exceeds the limit.
    fn check_product<'a>(&self, what: &str, factors: impl IntoIterator<Item = (&'a LaurentPoly, u32)>) -> Result<()> {
        let Some(m) = self.max_terms else { return Ok(()) };
        let mut count: u128 = 1;
        let mut lo: Vec<i64> = Vec::new();
        let mut hi: Vec<i64> = Vec::new();
        for (p, e) in factors {
            if e == 0 {
                continue;
            }
            count = count.saturating_mul((p.len() as u128).saturating_pow(e));
            let (Some(a), Some(b)) = (p.min_exponents(), p.max_exponents()) else { continue };
            if lo.is_empty() {
                lo = vec![0; a.len()];
                hi = vec![0; a.len()];
            }
            for i in 0..a.len() {
                lo[i] = lo[i].saturating_add(a[i].saturating_mul(e as i64));
                hi[i] = hi[i].saturating_add(b[i].saturating_mul(e as i64));
            }
        }
        let volume = lo.iter().zip(&hi).fold(1u128, |v, (a, b)| v.saturating_mul((b.saturating_sub(*a) as u128).saturating_add(1)));
        let bound = count.min(volume);
        if bound > m as u128 {
            return Err(Error::GrowthLimit(format!("{what} may have {bound} terms (limit {m})")));
        }
        Ok(())
    }
}

/// Tropical data plus F-polynomials (in `y` over the root mutable labels),
/// A-variables (in `a` over all root labels) and X-variables (in `y`).
#[derive(Clone, PartialEq, Eq)]
pub struct CharacterState {
    trop: TropicalState,
    a_lattice: Lattice,
    y_lattice: Lattice,
    f: Vec<LaurentPoly>,
    a: Vec<RationalFn>,
    x: Vec<RationalFn>,
    limits: Limits,
}

pub(crate) fn exponent(v: &IntVector) -> Result<Vec<i64>> {
    v.dense()
        .iter()
        .map(|x| x.to_i64().ok_or_else(|| Error::GrowthLimit(format!("exponent {x} out of range"))))
        .collect()
}

fn small(x: &BigInt) -> Result<i64> {
    x.to_i64().ok_or_else(|| Error::GrowthLimit(format!("exponent {x} out of range")))
}

pub fn initial_characters(s: &Seed) -> Result<CharacterState> {
    let trop = initial_state(s)?;
    let a_lattice = s.lattice().clone();
    let y_lattice = s.mutable_lattice().clone();
    let f = (0..y_lattice.len()).map(|_| LaurentPoly::one(&y_lattice)).collect();
    let a = a_lattice.labels().iter().map(|l| RationalFn::var(&a_lattice, l)).collect::<Result<_>>()?;
    let x = y_lattice.labels().iter().map(|l| RationalFn::var(&y_lattice, l)).collect::<Result<_>>()?;
    Ok(CharacterState { trop, a_lattice, y_lattice, f, a, x, limits: Limits::NONE })
}

impl CharacterState {
    pub fn with_limits(mut self, limits: Limits) -> Self {
        self.limits = limits;
        self
    }

    pub fn trop(&self) -> &TropicalState {
        &self.trop
    }

    pub fn current(&self) -> &Seed {
        self.trop.current()
    }

    pub fn path(&self) -> &[String] {
        self.trop.path()
    }

    /// Exponent lattice of the A-variables (all root labels).
    pub fn a_lattice(&self) -> &Lattice {
        &self.a_lattice
    }

    /// Exponent lattice of F-polynomials and X-variables (root mutable labels).
    pub fn y_lattice(&self) -> &Lattice {
        &self.y_lattice
    }

    pub fn f(&self, label: &str) -> Result<&LaurentPoly> {
        Ok(&self.f[self.mutable_position(label)?])
    }

    pub fn a(&self, label: &str) -> Result<&RationalFn> {
        Ok(&self.a[self.a_lattice.require(label)?])
    }

    pub fn x(&self, label: &str) -> Result<&RationalFn> {
        Ok(&self.x[self.mutable_position(label)?])
    }

    /// A-variables in label order.
    pub fn a_variables(&self) -> impl Iterator<Item = (&str, &RationalFn)> {
        self.a_lattice.labels().iter().map(String::as_str).zip(&self.a)
    }

    pub fn f_polynomials(&self) -> impl Iterator<Item = (&str, &LaurentPoly)> {
        self.y_lattice.labels().iter().map(String::as_str).zip(&self.f)
    }

    pub fn x_variables(&self) -> impl Iterator<Item = (&str, &RationalFn)> {
        self.y_lattice.labels().iter().map(String::as_str).zip(&self.x)
    }

    fn mutable_position(&self, label: &str) -> Result<usize> {
        if self.a_lattice.is_frozen_label(label)? {
            return Err(Error::FrozenDirection(label.to_string()));
        }
        self.y_lattice.require(label)
    }

    pub fn mutate(&self, k: &str) -> Result<Self> {
        mutate_characters(self, k)
    }

    pub fn mutate_path<S: AsRef<str>>(&self, path: &[S]) -> Result<Self> {
        let mut cs = self.clone();
        for k in path {
            cs = cs.mutate(k.as_ref())?;
        }
        Ok(cs)
    }

    /// Equality of everything except the recorded path.
    pub fn same_data(&self, other: &Self) -> bool {
        self.trop.same_data(&other.trop) && self.f == other.f && self.a == other.a && self.x == other.x
    }
}

impl fmt::Debug for CharacterState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut d = f.debug_struct("CharacterState");
        d.field("path", &self.trop.path());
        for (l, p) in self.f_polynomials() {
            d.field(&format!("F{l}"), &p.render("y"));
        }
        for (l, p) in self.a_variables() {
            d.field(&format!("A{l}"), &p.render("a"));
        }
        for (l, p) in self.x_variables() {
            d.field(&format!("X{l}"), &p.render("y"));
        }
        d.finish()
    }
}

fn product_of_powers<'a>(
    one: LaurentPoly,
    items: impl Iterator<Item = (&'a LaurentPoly, BigInt)>,
) -> Result<LaurentPoly> {
    let mut acc = one;
    for (p, e) in items {
        if e.is_zero() {
            continue;
        }
        let e = u32::try_from(small(&e)?).map_err(|_| Error::GrowthLimit("exponent".into()))?;
        acc = &acc * &p.pow(e);
    }
    Ok(acc)
}

/// One mutation of all tracked data at `k`.
pub fn mutate_characters(cs: &CharacterState, k: &str) -> Result<CharacterState> {
    let cur = cs.current();
    let kc = cur.direction(k)?;
    let lat = cur.lattice();
    let kr = lat.require(k)?;
    let mlat = cur.mutable_lattice();
    let eps = cur.b();
    let limits = cs.limits;

    // F_k F_k' = y^{[c_k]_+} ∏ F_V^{[ε_{V,k}]_+} + y^{[c_k]_-} ∏ F_V^{[ε_{V,k}]_-}
    let ck = cs.trop.c().column_at(kc);
    let (cp, cm) = ck.sign_split();
    let rows = |sel: fn(&BigInt) -> BigInt| {
        (0..mlat.len()).map(move |v| {
            let r = lat.position(mlat.label(v)).expect("mutable label");
            (v, sel(&eps.at(r, kc)))
        })
    };
    let as_u32 = |e: BigInt| u32::try_from(&e).unwrap_or(u32::MAX);
    limits.check_product("F-polynomial product", rows(pos).map(|(v, e)| (&cs.f[v], as_u32(e))))?;
    limits.check_product("F-polynomial product", rows(neg).map(|(v, e)| (&cs.f[v], as_u32(e))))?;
    let plus = product_of_powers(
        LaurentPoly::monomial(&cs.y_lattice, exponent(&cp)?, BigInt::from(1)),
        rows(pos).map(|(v, e)| (&cs.f[v], e)),
    )?;
    let minus = product_of_powers(
        LaurentPoly::monomial(&cs.y_lattice, exponent(&cm)?, BigInt::from(1)),
        rows(neg).map(|(v, e)| (&cs.f[v], e)),
    )?;
    let sum = &plus + &minus;
    let fk = sum.div_exact(&cs.f[kc]).ok_or_else(|| {
        Error::ExactDivisionFailure(format!("F-polynomial exchange at {k} after path {:?}", cs.path()))
    })?;
    limits.check_terms("F-polynomial", fk.len())?;

    // A_k A_k' = ∏ A_V^{[ε_{V,k}]_+} + ∏ A_V^{[ε_{V,k}]_-}, V over all labels
    for sel in [pos as fn(&BigInt) -> BigInt, neg] {
        limits.check_product(
            "A-variable product",
            (0..lat.len()).map(|v| (cs.a[v].num(), as_u32(sel(&eps.at(v, kc))))),
        )?;
    }
    let a_num = {
        let mut p = RationalFn::one(&cs.a_lattice);
        let mut m = RationalFn::one(&cs.a_lattice);
        for v in 0..lat.len() {
            let e = small(&eps.at(v, kc))?;
            if e > 0 {
                p = p.try_mul(&cs.a[v].pow(e)?);
            } else if e < 0 {
                m = m.try_mul(&cs.a[v].pow(-e)?);
            }
        }
        p.add(&m)
    };
    let ak = match (a_num.as_laurent(), cs.a[kr].as_laurent()) {
        (Some(n), Some(d)) => match n.div_exact(d) {
            Some(q) => RationalFn::from_laurent(q),
            None => a_num.try_div(&cs.a[kr])?,
        },
        _ => a_num.try_div(&cs.a[kr])?,
    };
    if !ak.is_laurent() {
        return Err(Error::ExactDivisionFailure(format!(
            "A-variable at {k} after path {:?} is not a Laurent polynomial",
            cs.path()
        )));
    }
    limits.check_terms("A-variable", ak.num().len())?;

    // X_k' = X_k^{-1}, X_V' = X_V X_k^{[ε_{k,V}]_+} (1 + X_k)^{-ε_{k,V}}
    let xk = &cs.x[kc];
    let one_plus = RationalFn::one(&cs.y_lattice).add(xk);
    let mut x = cs.x.clone();
    for v in 0..mlat.len() {
        if v == kc {
            x[v] = xk.inv()?;
            continue;
        }
        let e = small(&eps.at(kr, v))?;
        if e == 0 {
            continue;
        }
        let (xv, n) = (&cs.x[v], e.unsigned_abs().min(u32::MAX as u64) as u32);
        let (top, bottom) = if e > 0 {
            ([(xv.num(), 1), (xk.num(), n)], [(xv.den(), 1), (one_plus.num(), n)])
        } else {
            ([(xv.num(), 1), (one_plus.num(), n)], [(xv.den(), 1), (xk.den(), n)])
        };
        limits.check_product("X-variable numerator", top)?;
        limits.check_product("X-variable denominator", bottom)?;
        let mut nv = cs.x[v].try_mul(&xk.pow(e.max(0))?);
        nv = nv.try_mul(&one_plus.pow(-e)?);
        limits.check_terms("X-variable", nv.num().len().max(nv.den().len()))?;
        x[v] = nv;
    }

    let trop = cs.trop.mutate(k)?;
    if let Some(m) = limits.max_entry {
        let big = trop.current().b().max_abs_entry();
        if big > BigInt::from(m) {
            return Err(Error::GrowthLimit(format!("exchange matrix entry {big} (limit {m})")));
        }
    }
    let mut f = cs.f.clone();
    f[kc] = fk;
    let mut a = cs.a.clone();
    a[kr] = ak;
    Ok(CharacterState { trop, a_lattice: cs.a_lattice.clone(), y_lattice: cs.y_lattice.clone(), f, a, x, limits })
}

/// Whether a label's index is a root basis vector, i.e. its variable is
/// initial.
pub(crate) fn is_initial_column(g: &IntVector) -> bool {
    let nz: Vec<_> = g.iter().filter(|(_, v)| !v.is_zero()).collect();
    nz.len() == 1 && nz[0].1 == &BigInt::from(1)
}

pub(crate) fn has_negative(e: &[i64]) -> bool {
    e.iter().any(|x| *x < 0)
}

pub(crate) fn is_nonnegative(p: &LaurentPoly) -> bool {
    p.terms().all(|(_, c)| !c.is_negative())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::fixtures;

    fn render_all(cs: &CharacterState) -> Vec<String> {
        cs.a_variables().map(|(_, a)| a.render("a")).collect()
    }

    #[test]
    fn initial_values() {
        let cs = initial_characters(&fixtures::a2f()).unwrap();
        assert_eq!(render_all(&cs), vec!["a1", "a2", "af"]);
        assert!(cs.f_polynomials().all(|(_, f)| f.is_one()));
        assert_eq!(cs.x("2").unwrap().render("y"), "y2");
        assert!(matches!(cs.f("f"), Err(Error::FrozenDirection(_))));
    }

    #[test]
    fn a2_one_step() {
        let cs = initial_characters(&fixtures::a2()).unwrap().mutate("1").unwrap();
        assert_eq!(cs.f("1").unwrap().render("y"), "1 + y1");
        assert_eq!(cs.a("1").unwrap().render("a"), "a1^-1 + a1^-1*a2");
        assert_eq!(cs.x("1").unwrap().render("y"), "y1^-1");
        assert_eq!(cs.x("2").unwrap().render("y"), "y2 + y1*y2");
    }

    #[test]
    fn pentagon() {
        let cs0 = initial_characters(&fixtures::a2()).unwrap();
        let lat = cs0.a_lattice().clone();
        let poly = |terms: &[[i64; 2]]| -> RationalFn {
            LaurentPoly::from_terms(&lat, terms.iter().map(|e| (e.to_vec(), BigInt::from(1)))).into()
        };
        let want = [
            poly(&[[1, 0]]),
            poly(&[[0, 1]]),
            poly(&[[-1, 0], [-1, 1]]),
            poly(&[[-1, -1], [0, -1], [-1, 0]]),
            poly(&[[0, -1], [1, -1]]),
        ];
        let mut cs = cs0.clone();
        let mut seen: Vec<RationalFn> = cs.a_variables().map(|(_, a)| a.clone()).collect();
        for k in ["1", "2", "1", "2", "1"] {
            cs = cs.mutate(k).unwrap();
            for (_, a) in cs.a_variables() {
                if !seen.contains(a) {
                    seen.push(a.clone());
                }
            }
        }
        assert_eq!(seen.len(), 5);
        assert!(want.iter().all(|w| seen.contains(w)));
        // the pentagon returns the initial cluster with the labels swapped
        assert_eq!(cs.a("1").unwrap(), &want[1]);
        assert_eq!(cs.a("2").unwrap(), &want[0]);
    }

    #[test]
    fn involution() {
        let cs = initial_characters(&fixtures::a2f()).unwrap().mutate_path(&["1", "2"]).unwrap();
        for k in ["1", "2"] {
            assert!(cs.mutate(k).unwrap().mutate(k).unwrap().same_data(&cs));
        }
    }
}
