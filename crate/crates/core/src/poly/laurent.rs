use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::lattice::{IntVector, Lattice};

pub type Exponent = Vec<i64>;

/// Finite integer combination of Laurent monomials over a labeled lattice.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    lattice: Lattice,
    terms: BTreeMap<Exponent, BigInt>,
}

/// Graded-lex comparison: total degree first, then lexicographic.
pub fn grlex(a: &[i64], b: &[i64]) -> Ordering {
    let da: i64 = a.iter().sum();
    let db: i64 = b.iter().sum();
    da.cmp(&db).then_with(|| a.cmp(b))
}

impl LaurentPoly {
    pub fn zero(lattice: &Lattice) -> Self {
        Self { lattice: lattice.clone(), terms: BTreeMap::new() }
    }

    pub fn one(lattice: &Lattice) -> Self {
        Self::constant(lattice, BigInt::one())
    }

    pub fn constant(lattice: &Lattice, c: BigInt) -> Self {
        Self::monomial(lattice, vec![0; lattice.len()], c)
    }

    pub fn monomial(lattice: &Lattice, exps: Exponent, c: BigInt) -> Self {
        assert_eq!(exps.len(), lattice.len(), "exponent length");
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(exps, c);
        }
        Self { lattice: lattice.clone(), terms }
    }

    /// The variable attached to `label`.
    pub fn var(lattice: &Lattice, label: &str) -> Result<Self> {
        let i = lattice.require(label)?;
        let mut e = vec![0; lattice.len()];
        e[i] = 1;
        Ok(Self::monomial(lattice, e, BigInt::one()))
    }

    /// Monomial `x^v` for an integer vector over the same lattice.
    pub fn from_vector(v: &IntVector) -> Result<Self> {
        let e = v
            .dense()
            .iter()
            .map(|x| i64::try_from(x).map_err(|_| Error::Parse("exponent out of range".into())))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::monomial(v.lattice(), e, BigInt::one()))
    }

    pub fn from_terms(lattice: &Lattice, terms: impl IntoIterator<Item = (Exponent, BigInt)>) -> Self {
        let mut p = Self::zero(lattice);
        for (e, c) in terms {
            p.add_term(e, &c);
        }
        p
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &BigInt)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.constant_term().is_one()
    }

    pub fn coefficient(&self, e: &[i64]) -> BigInt {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn constant_term(&self) -> BigInt {
        self.coefficient(&vec![0; self.lattice.len()])
    }

    /// `Some((exponent, coefficient))` when the polynomial has one term.
    pub fn as_monomial(&self) -> Option<(&Exponent, &BigInt)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    pub fn is_unit_monomial(&self) -> bool {
        self.as_monomial().is_some_and(|(_, c)| c.abs().is_one())
    }

    pub(crate) fn add_term(&mut self, e: Exponent, c: &BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check(&self, other: &Self) {
        assert!(
            self.lattice.same_as(&other.lattice),
            "Laurent polynomials over different lattices"
        );
    }

    /// Largest term in graded-lex order.
    pub fn leading_grlex(&self) -> Option<(&Exponent, &BigInt)> {
        self.terms.iter().max_by(|a, b| grlex(a.0, b.0))
    }

    /// Terms in graded-lex order.
    pub fn sorted_terms(&self) -> Vec<(&Exponent, &BigInt)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| grlex(a.0, b.0));
        v
    }

    /// Componentwise minimum of exponents over all terms.
    pub fn min_exponents(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(e).map(|(a, b)| *a.min(b)).collect()))
    }

    /// Componentwise maximum of exponents over all terms.
    pub fn max_exponents(&self) -> Option<Exponent> {
        let mut it = self.terms.keys();
        let first = it.next()?.clone();
        Some(it.fold(first, |acc, e| acc.iter().zip(e).map(|(a, b)| *a.max(b)).collect()))
    }

    /// Multiply by `c·x^e`.
    pub fn mul_term(&self, e: &[i64], c: &BigInt) -> Self {
        if c.is_zero() {
            return Self::zero(&self.lattice);
        }
        let terms = self
            .terms
            .iter()
            .map(|(k, v)| (k.iter().zip(e).map(|(a, b)| a + b).collect(), v * c))
            .collect();
        Self { lattice: self.lattice.clone(), terms }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        self.mul_term(&vec![0; self.lattice.len()], c)
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut result = Self::one(&self.lattice);
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                result = &result * &base;
            }
            n >>= 1;
            if n > 0 {
                base = &base * &base;
            }
        }
        result
    }

    /// Integer power; negative exponents only for unit monomials.
    pub fn pow_signed(&self, n: i64) -> Option<Self> {
        if n >= 0 {
            return Some(self.pow(u32::try_from(n).ok()?));
        }
        let (e, c) = self.as_monomial()?;
        if !c.abs().is_one() {
            return None;
        }
        let m = -n;
        let coeff = if m % 2 == 1 { c.clone() } else { BigInt::one() };
        Some(Self::monomial(&self.lattice, e.iter().map(|x| -x * m).collect(), coeff))
    }

    /// gcd of the coefficients (nonnegative).
    pub fn content(&self) -> BigInt {
        self.terms.values().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// Exact quotient `self / d` in the Laurent ring, if it exists.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        self.check(d);
        if d.is_zero() {
            return None;
        }
        if self.is_zero() {
            return Some(Self::zero(&self.lattice));
        }
        if let Some((e, c)) = d.as_monomial() {
            let neg: Vec<i64> = e.iter().map(|x| -x).collect();
            let mut terms = BTreeMap::new();
            for (k, v) in &self.terms {
                let (q, r) = v.div_rem(c);
                if !r.is_zero() {
                    return None;
                }
                terms.insert(k.iter().zip(&neg).map(|(a, b)| a + b).collect(), q);
            }
            return Some(Self { lattice: self.lattice.clone(), terms });
        }
        // Newton polytopes add under multiplication, which bounds the quotient
        let (pmin, pmax) = (self.min_exponents()?, self.max_exponents()?);
        let (dmin, dmax) = (d.min_exponents()?, d.max_exponents()?);
        let lo: Vec<i64> = pmin.iter().zip(&dmin).map(|(a, b)| a - b).collect();
        let hi: Vec<i64> = pmax.iter().zip(&dmax).map(|(a, b)| a - b).collect();
        if lo.iter().zip(&hi).any(|(a, b)| a > b) {
            return None;
        }
        let (dl, dc) = d.terms.iter().next_back().map(|(e, c)| (e.clone(), c.clone()))?;
        let mut rem = self.terms.clone();
        let mut quot = BTreeMap::new();
        while let Some((re, rc)) = rem.iter().next_back().map(|(e, c)| (e.clone(), c.clone())) {
            let (qc, r) = rc.div_rem(&dc);
            if !r.is_zero() {
                return None;
            }
            let qe: Vec<i64> = re.iter().zip(&dl).map(|(a, b)| a - b).collect();
            if qe.iter().zip(lo.iter().zip(&hi)).any(|(x, (l, h))| x < l || x > h) {
                return None;
            }
            for (de, dcoef) in &d.terms {
                let e: Vec<i64> = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                let v = dcoef * &qc;
                let entry = rem.entry(e).or_insert_with(BigInt::zero);
                *entry -= v;
                if entry.is_zero() {
                    let key: Vec<i64> = de.iter().zip(&qe).map(|(a, b)| a + b).collect();
                    rem.remove(&key);
                }
            }
            quot.insert(qe, qc);
        }
        Some(Self { lattice: self.lattice.clone(), terms: quot })
    }

    /// Substitute each variable by a monomial: `x_i ↦ z^{images[i]}` into the
    /// target lattice.
    pub fn substitute_monomials(&self, target: &Lattice, images: &[Exponent]) -> Self {
        assert_eq!(images.len(), self.lattice.len());
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut x = vec![0i64; target.len()];
            for (k, img) in e.iter().zip(images) {
                if *k != 0 {
                    for (xi, v) in x.iter_mut().zip(img) {
                        *xi += k * v;
                    }
                }
            }
            out.add_term(x, c);
        }
        out
    }

    /// Drop variables by setting them to 1; `keep[i]` gives the new position of
    /// old variable `i`, or `None` for a removed one.
    pub fn collapse(&self, target: &Lattice, keep: &[Option<usize>]) -> Self {
        let mut out = Self::zero(target);
        for (e, c) in &self.terms {
            let mut x = vec![0i64; target.len()];
            for (i, k) in e.iter().enumerate() {
                if let Some(j) = keep[i] {
                    x[j] = *k;
                }
            }
            out.add_term(x, c);
        }
        out
    }

    /// Same polynomial over an equal lattice handle.
    pub fn rehome(&self, lattice: &Lattice) -> Result<Self> {
        crate::lattice::ensure_same(&self.lattice, lattice, "Laurent polynomial")?;
        Ok(Self { lattice: lattice.clone(), terms: self.terms.clone() })
    }

    pub fn is_polynomial(&self) -> bool {
        self.terms.keys().all(|e| e.iter().all(|x| *x >= 0))
    }

    /// Renders with variables named `{prefix}{label}`, terms in graded-lex
    /// order.
    pub fn render(&self, prefix: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (i, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let mono = render_monomial(&self.lattice, e, prefix);
            let (neg, mag) = (c.is_negative(), c.abs());
            if i == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            match (mono.is_empty(), mag.is_one()) {
                (true, _) => out.push_str(&mag.to_string()),
                (false, true) => out.push_str(&mono),
                (false, false) => {
                    out.push_str(&mag.to_string());
                    out.push('*');
                    out.push_str(&mono);
                }
            }
        }
        out
    }
    /// Renders as `m*(p)` with `m` the monomial of componentwise-minimal
    /// exponents, so that `p` is a polynomial with nonzero constant part in
    /// each variable; plain [`render`](Self::render) when `m = 1` or `self`
    /// is a monomial.
    pub fn render_factored(&self, prefix: &str) -> String {
        let Some(lo) = self.min_exponents() else { return "0".into() };
        if self.len() == 1 || lo.iter().all(|x| *x == 0) {
            return self.render(prefix);
        }
        let inv: Vec<i64> = lo.iter().map(|x| -x).collect();
        let rest = self.mul_term(&inv, &BigInt::one());
        format!("{}*({})", render_monomial(&self.lattice, &lo, prefix), rest.render(prefix))
    }
}

pub fn render_monomial(lattice: &Lattice, e: &[i64], prefix: &str) -> String {
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, k)| **k != 0)
        .map(|(i, k)| {
            if *k == 1 {
                format!("{prefix}{}", lattice.label(i))
            } else {
                format!("{prefix}{}^{k}", lattice.label(i))
            }
        })
        .collect();
    parts.join("*")
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

impl Add for &LaurentPoly {
    type Output = LaurentPoly;
    fn add(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c);
        }
        out
    }
}

impl Sub for &LaurentPoly {
    type Output = LaurentPoly;
    fn sub(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check(rhs);
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), &-c);
        }
        out
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        LaurentPoly {
            lattice: self.lattice.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl Mul for &LaurentPoly {
    type Output = LaurentPoly;
    fn mul(self, rhs: &LaurentPoly) -> LaurentPoly {
        self.check(rhs);
        let mut acc: HashMap<Exponent, BigInt> = HashMap::with_capacity(self.len() * rhs.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &rhs.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                *acc.entry(e).or_insert_with(BigInt::zero) += ca * cb;
            }
        }
        LaurentPoly {
            lattice: self.lattice.clone(),
            terms: acc.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::LabeledLattice;

    fn lat() -> Lattice {
        LabeledLattice::plain(&["1", "2"]).unwrap().shared()
    }

    fn p(terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(&lat(), terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn render_order() {
        let x = p(&[(&[-1, 1], 1), (&[-1, 0], 1)]);
        assert_eq!(x.render("a"), "a1^-1 + a1^-1*a2");
        assert_eq!(p(&[(&[0, 0], 1), (&[0, 1], -2)]).render("y"), "1 - 2*y2");
        assert_eq!(p(&[]).render("a"), "0");
    }

    #[test]
    fn exact_division() {
        let a = p(&[(&[0, 0], 1), (&[1, 0], 1)]);
        let b = p(&[(&[0, -1], 1), (&[2, 3], -3)]);
        let ab = &a * &b;
        assert_eq!(ab.div_exact(&a).unwrap(), b);
        assert_eq!(ab.div_exact(&b).unwrap(), a);
        assert!(a.div_exact(&p(&[(&[0, 0], 1), (&[0, 1], 1)])).is_none());
        assert!(a.div_exact(&p(&[(&[0, 0], 2)])).is_none());
        let m = p(&[(&[1, -1], -1)]);
        assert_eq!(ab.div_exact(&m).unwrap().mul(&m), ab);
    }

    #[test]
    fn powers_and_substitution() {
        let a = p(&[(&[0, 0], 1), (&[1, 0], 1)]);
        assert_eq!(a.pow(3).len(), 4);
        assert_eq!(a.pow(0), LaurentPoly::one(&lat()));
        let m = p(&[(&[1, -2], -1)]);
        assert_eq!(m.pow_signed(-1).unwrap(), p(&[(&[-1, 2], -1)]));
        assert!(a.pow_signed(-1).is_none());
        // y1 -> a2, y2 -> a1^-1
        let s = a.substitute_monomials(&lat(), &[vec![0, 1], vec![-1, 0]]);
        assert_eq!(s, p(&[(&[0, 0], 1), (&[0, 1], 1)]));
    }
}
