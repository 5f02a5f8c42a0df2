use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed};

use super::gcd::poly_gcd;
use super::laurent::{Exponent, LaurentPoly};
use crate::error::{Error, Result};
use crate::lattice::Lattice;

/// Quotient of Laurent polynomials in canonical form: the denominator is a
/// polynomial divisible by no variable, with positive graded-lex leading
/// coefficient, coprime to the numerator. Two values are equal iff their
/// representations are.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: LaurentPoly,
    den: LaurentPoly,
}

fn shift(p: &LaurentPoly, e: &[i64]) -> LaurentPoly {
    p.mul_term(e, &BigInt::one())
}

fn negated(e: &[i64]) -> Exponent {
    e.iter().map(|x| -x).collect()
}

/// Splits `p = x^m · p0` with `p0` divisible by no variable.
fn strip_monomial(p: &LaurentPoly) -> (Exponent, LaurentPoly) {
    let m = p.min_exponents().unwrap_or_else(|| vec![0; p.lattice().len()]);
    let p0 = shift(p, &negated(&m));
    (m, p0)
}

fn leading_sign_negative(p: &LaurentPoly) -> bool {
    p.leading_grlex().is_some_and(|(_, c)| c.is_negative())
}

impl RationalFn {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::ExactDivisionFailure("zero denominator".into()));
        }
        assert!(num.lattice().same_as(den.lattice()), "rational function over different lattices");
        if num.is_zero() {
            return Ok(Self::from_laurent(num));
        }
        let (mn, n0) = strip_monomial(&num);
        let (md, d0) = strip_monomial(&den);
        let (mut n0, mut d0) = if d0.as_monomial().is_some() {
            (n0, d0)
        } else {
            let g = poly_gcd(&n0, &d0);
            if g.is_one() {
                (n0, d0)
            } else {
                (n0.div_exact(&g).expect("gcd divides"), d0.div_exact(&g).expect("gcd divides"))
            }
        };
        if let Some((_, c)) = d0.as_monomial() {
            // constant denominator: absorb what divides, keep the rest
            let c = c.clone();
            let g = num_integer::Integer::gcd(&n0.content(), &c);
            let g = if c.is_negative() { -g } else { g };
            n0 = n0.div_exact(&LaurentPoly::constant(n0.lattice(), g.clone())).expect("content");
            d0 = LaurentPoly::constant(d0.lattice(), c / g);
        }
        if leading_sign_negative(&d0) {
            n0 = -&n0;
            d0 = -&d0;
        }
        let m: Exponent = mn.iter().zip(&md).map(|(a, b)| a - b).collect();
        Ok(Self { num: shift(&n0, &m), den: d0 })
    }

    pub fn from_laurent(p: LaurentPoly) -> Self {
        let den = LaurentPoly::one(p.lattice());
        Self { num: p, den }
    }

    pub fn one(lattice: &Lattice) -> Self {
        Self::from_laurent(LaurentPoly::one(lattice))
    }

    pub fn var(lattice: &Lattice, label: &str) -> Result<Self> {
        Ok(Self::from_laurent(LaurentPoly::var(lattice, label)?))
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn lattice(&self) -> &Lattice {
        self.num.lattice()
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The Laurent polynomial this equals, if any.
    pub fn as_laurent(&self) -> Option<&LaurentPoly> {
        if self.den.is_one() {
            Some(&self.num)
        } else {
            None
        }
    }

    pub fn is_laurent(&self) -> bool {
        self.den.is_one()
    }

    pub fn inv(&self) -> Result<Self> {
        Self::new(self.den.clone(), self.num.clone())
    }

    pub fn try_mul(&self, o: &Self) -> Self {
        // cross-cancel, relying on both operands being reduced
        let (ma, a0) = strip_monomial(&self.num);
        let (mc, c0) = strip_monomial(&o.num);
        let g1 = poly_gcd(&a0, &o.den);
        let g2 = poly_gcd(&c0, &self.den);
        let q = |p: &LaurentPoly, g: &LaurentPoly| if g.is_one() { p.clone() } else { p.div_exact(g).expect("gcd divides") };
        let num = &q(&a0, &g1) * &q(&c0, &g2);
        let den = &q(&self.den, &g2) * &q(&o.den, &g1);
        let m: Exponent = ma.iter().zip(&mc).map(|(a, b)| a + b).collect();
        Self::new(shift(&num, &m), den).expect("nonzero denominator")
    }

    pub fn try_div(&self, o: &Self) -> Result<Self> {
        Ok(self.try_mul(&o.inv()?))
    }

    pub fn add(&self, o: &Self) -> Self {
        if self.den == o.den {
            return Self::new(&self.num + &o.num, self.den.clone()).expect("nonzero denominator");
        }
        let num = &(&self.num * &o.den) + &(&o.num * &self.den);
        Self::new(num, &self.den * &o.den).expect("nonzero denominator")
    }

    pub fn neg(&self) -> Self {
        Self { num: -&self.num, den: self.den.clone() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inv()? } else { self.clone() };
        let k = u32::try_from(n.unsigned_abs()).map_err(|_| Error::ExactDivisionFailure("exponent too large".into()))?;
        // powers of a reduced fraction stay reduced
        let mut out = Self { num: base.num.pow(k), den: base.den.pow(k) };
        if leading_sign_negative(&out.den) {
            out.num = -&out.num;
            out.den = -&out.den;
        }
        Ok(out)
    }

    /// Applies a monomial substitution to numerator and denominator.
    pub fn substitute_monomials(&self, target: &Lattice, images: &[Exponent]) -> Result<Self> {
        Self::new(self.num.substitute_monomials(target, images), self.den.substitute_monomials(target, images))
    }

    pub fn collapse(&self, target: &Lattice, keep: &[Option<usize>]) -> Result<Self> {
        Self::new(self.num.collapse(target, keep), self.den.collapse(target, keep))
    }

    pub fn render(&self, prefix: &str) -> String {
        if self.den.is_one() {
            self.num.render(prefix)
        } else {
            format!("({}) / ({})", self.num.render(prefix), self.den.render(prefix))
        }
    }

    /// Like [`render`](Self::render), with monomial factors pulled out of
    /// numerator and denominator.
    pub fn render_factored(&self, prefix: &str) -> String {
        if self.den.is_one() {
            self.num.render_factored(prefix)
        } else {
            format!("({}) / ({})", self.num.render_factored(prefix), self.den.render_factored(prefix))
        }
    }
}

impl From<LaurentPoly> for RationalFn {
    fn from(p: LaurentPoly) -> Self {
        Self::from_laurent(p)
    }
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render("x"))
    }
}
