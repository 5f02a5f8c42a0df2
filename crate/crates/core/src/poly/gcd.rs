//! Greatest common divisors in `Z[x_1, ..., x_n]`.
//!
//! The heuristic evaluation/interpolation method is tried first; a
//! primitive-remainder-sequence gcd backs it up, so the result is always
//! exact. Inputs must be genuine polynomials (no negative exponents).

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::laurent::{Exponent, LaurentPoly};

const MAX_ATTEMPTS: usize = 6;
const MAX_EVAL_BITS: u64 = 400_000;

fn max_coeff(p: &LaurentPoly) -> BigInt {
    p.terms().map(|(_, c)| c.abs()).max().unwrap_or_default()
}

fn degree_in(p: &LaurentPoly, v: usize) -> i64 {
    p.terms().map(|(e, _)| e[v]).max().unwrap_or(0)
}

fn divide_content(p: &LaurentPoly) -> (BigInt, LaurentPoly) {
    let c = p.content();
    if c.is_zero() || c.is_one() {
        return (c, p.clone());
    }
    let q = LaurentPoly::from_terms(p.lattice(), p.terms().map(|(e, x)| (e.clone(), x / &c)));
    (c, q)
}

fn eval_at(p: &LaurentPoly, v: usize, xi: &BigInt) -> LaurentPoly {
    let mut powers: BTreeMap<i64, BigInt> = BTreeMap::new();
    let mut out = LaurentPoly::zero(p.lattice());
    for (e, c) in p.terms() {
        let k = e[v];
        let pw = powers.entry(k).or_insert_with(|| num_traits::pow(xi.clone(), k as usize)).clone();
        let mut e2 = e.clone();
        e2[v] = 0;
        out.add_term(e2, &(c * pw));
    }
    out
}

/// Symmetric `ξ`-adic expansion of the coefficients of `g` into powers of `x_v`.
fn interpolate(g: &LaurentPoly, v: usize, xi: &BigInt) -> LaurentPoly {
    let half = xi / 2;
    let mut out = LaurentPoly::zero(g.lattice());
    for (e, c) in g.terms() {
        let mut c = c.clone();
        let mut i = 0i64;
        while !c.is_zero() {
            let mut d = c.mod_floor(xi);
            if d > half {
                d -= xi;
            }
            let mut e2: Exponent = e.clone();
            e2[v] = i;
            out.add_term(e2, &d);
            c = (c - &d) / xi;
            i += 1;
        }
    }
    out
}

/// Divisibility in the polynomial ring (not merely up to monomial units).
fn divides(h: &LaurentPoly, a: &LaurentPoly) -> bool {
    a.div_exact(h).is_some_and(|q| q.is_polynomial())
}

fn heuristic(a: &LaurentPoly, b: &LaurentPoly, nvars: usize) -> Option<LaurentPoly> {
    if nvars == 0 {
        let g = a.constant_term().gcd(&b.constant_term());
        return Some(LaurentPoly::constant(a.lattice(), g));
    }
    let (ca, a) = divide_content(a);
    let (cb, b) = divide_content(b);
    let g_int = ca.gcd(&cb);
    let v = nvars - 1;
    let deg = degree_in(&a, v).max(degree_in(&b, v)).max(1) as u64;
    let mut xi: BigInt = max_coeff(&a).min(max_coeff(&b)) * 2 + 29;
    for _ in 0..MAX_ATTEMPTS {
        if xi.bits() * deg > MAX_EVAL_BITS {
            return None;
        }
        if let Some(gamma) = heuristic(&eval_at(&a, v, &xi), &eval_at(&b, v, &xi), v) {
            let (_, h) = divide_content(&interpolate(&gamma, v, &xi));
            if !h.is_zero() && divides(&h, &a) && divides(&h, &b) {
                return Some(h.scale(&g_int));
            }
        }
        xi = xi * 73794 / 27011;
    }
    None
}

// --- primitive remainder sequences, recursive in the last active variable ---

fn coeffs_in(p: &LaurentPoly, v: usize) -> Vec<LaurentPoly> {
    let d = degree_in(p, v).max(0) as usize;
    let mut out = vec![LaurentPoly::zero(p.lattice()); d + 1];
    for (e, c) in p.terms() {
        let mut e2 = e.clone();
        let k = e2[v] as usize;
        e2[v] = 0;
        out[k].add_term(e2, c);
    }
    out
}

fn from_coeffs(cs: &[LaurentPoly], v: usize) -> LaurentPoly {
    let mut out = LaurentPoly::zero(cs[0].lattice());
    for (k, c) in cs.iter().enumerate() {
        for (e, x) in c.terms() {
            let mut e2 = e.clone();
            e2[v] = k as i64;
            out.add_term(e2, x);
        }
    }
    out
}

/// Content of `p` viewed as a polynomial in `x_v`, and the primitive part.
fn split_content(p: &LaurentPoly, v: usize) -> (LaurentPoly, LaurentPoly) {
    let cs = coeffs_in(p, v);
    let mut g = LaurentPoly::zero(p.lattice());
    for c in cs.iter().filter(|c| !c.is_zero()) {
        g = if g.is_zero() { c.clone() } else { prs(&g, c, v) };
        if g.is_one() || (-&g).is_one() {
            break;
        }
    }
    let pp = p.div_exact(&g).expect("content divides");
    (g, pp)
}

fn prs(a: &LaurentPoly, b: &LaurentPoly, nvars: usize) -> LaurentPoly {
    if a.is_zero() {
        return b.clone();
    }
    if b.is_zero() {
        return a.clone();
    }
    if nvars == 0 {
        return LaurentPoly::constant(a.lattice(), a.constant_term().gcd(&b.constant_term()));
    }
    let v = nvars - 1;
    let (ca, mut a) = split_content(a, v);
    let (cb, mut b) = split_content(b, v);
    let cont = prs(&ca, &cb, v);
    if degree_in(&a, v) < degree_in(&b, v) {
        std::mem::swap(&mut a, &mut b);
    }
    let g = loop {
        if b.is_zero() {
            break a;
        }
        if degree_in(&b, v) == 0 {
            // b is a unit once primitive, so the primitive parts are coprime
            break LaurentPoly::one(a.lattice());
        }
        let r = pseudo_rem(&a, &b, v);
        a = b;
        b = if r.is_zero() { r } else { split_content(&r, v).1 };
    };
    &split_content(&g, v).1 * &cont
}

fn pseudo_rem(a: &LaurentPoly, b: &LaurentPoly, v: usize) -> LaurentPoly {
    let mut r = coeffs_in(a, v);
    let bc = coeffs_in(b, v);
    let db = bc.len() - 1;
    let lb = bc[db].clone();
    while r.len() > db && !r.is_empty() {
        let dr = r.len() - 1;
        let lr = r[dr].clone();
        if lr.is_zero() {
            r.pop();
            continue;
        }
        for c in r.iter_mut() {
            *c = &*c * &lb;
        }
        for (i, c) in bc.iter().enumerate() {
            let t = c * &lr;
            let idx = dr - db + i;
            r[idx] = &r[idx] - &t;
        }
        r.pop();
    }
    while r.last().is_some_and(LaurentPoly::is_zero) {
        r.pop();
    }
    if r.is_empty() {
        LaurentPoly::zero(a.lattice())
    } else {
        from_coeffs(&r, v)
    }
}

/// gcd of two polynomials, normalized to have positive graded-lex leading
/// coefficient. `gcd(0, 0) = 0`.
pub fn poly_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    debug_assert!(a.is_polynomial() && b.is_polynomial());
    let g = if a.is_zero() {
        b.clone()
    } else if b.is_zero() {
        a.clone()
    } else if a.as_monomial().is_some() || b.as_monomial().is_some() {
        monomial_gcd(a, b)
    } else {
        let n = a.lattice().len();
        heuristic(a, b, n).unwrap_or_else(|| prs(a, b, n))
    };
    match g.leading_grlex() {
        Some((_, c)) if c.is_negative() => -&g,
        _ => g,
    }
}

fn monomial_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let mins = |p: &LaurentPoly| p.min_exponents().unwrap();
    let e: Exponent = mins(a).iter().zip(mins(b)).map(|(x, y)| *x.min(&y)).collect();
    LaurentPoly::monomial(a.lattice(), e, a.content().gcd(&b.content()))
}

#[cfg(test)]
pub(crate) fn prs_gcd(a: &LaurentPoly, b: &LaurentPoly) -> LaurentPoly {
    let g = prs(a, b, a.lattice().len());
    match g.leading_grlex() {
        Some((_, c)) if c.is_negative() => -&g,
        _ => g,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::{LabeledLattice, Lattice};

    fn lat() -> Lattice {
        LabeledLattice::plain(&["1", "2", "3"]).unwrap().shared()
    }

    fn p(terms: &[(&[i64], i64)]) -> LaurentPoly {
        LaurentPoly::from_terms(&lat(), terms.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c))))
    }

    #[test]
    fn common_factor_found() {
        let f = p(&[(&[0, 0, 0], 1), (&[1, 0, 0], 1), (&[1, 1, 0], 1)]);
        let g = p(&[(&[0, 0, 0], 1), (&[0, 1, 2], 3)]);
        let h = p(&[(&[0, 0, 0], 2), (&[0, 0, 1], -1), (&[2, 0, 0], 1)]);
        let a = &(&f * &g).scale(&BigInt::from(6)) * &h;
        let b = (&f * &h).scale(&BigInt::from(4));
        let want = (&f * &h).scale(&BigInt::from(2));
        let got = poly_gcd(&a, &b);
        assert_eq!(got, want);
        assert_eq!(prs_gcd(&a, &b), want);
    }

    #[test]
    fn coprime_and_monomial() {
        let f = p(&[(&[0, 0, 0], 1), (&[1, 0, 0], 1)]);
        let g = p(&[(&[0, 0, 0], 1), (&[0, 1, 0], 1)]);
        assert!(poly_gcd(&f, &g).is_one());
        assert!(prs_gcd(&f, &g).is_one());
        let m = p(&[(&[2, 1, 0], 4)]);
        let n = p(&[(&[1, 3, 0], 6), (&[3, 1, 0], 2)]);
        assert_eq!(poly_gcd(&m, &n), p(&[(&[1, 1, 0], 2)]));
    }

    #[test]
    fn monomial_coefficients_are_not_units() {
        // content in x_2 of x_2^4 + 2 x_1^2 x_2^2 + x_1^4 is 1, not x_1^4
        let f = p(&[(&[0, 4, 0], 1), (&[2, 2, 0], 2), (&[4, 0, 0], 1)]);
        let g = p(&[(&[0, 2, 0], 1), (&[2, 0, 0], 1)]);
        assert_eq!(prs_gcd(&f, &f.mul_term(&[0, 0, 1], &BigInt::one())), f);
        assert_eq!(prs_gcd(&f, &g), g);
    }

    #[test]
    fn sign_normalized() {
        let f = p(&[(&[0, 0, 0], 1), (&[1, 0, 0], -1)]);
        let g = poly_gcd(&f, &f.pow(2));
        assert_eq!(g, -&f);
    }
}
