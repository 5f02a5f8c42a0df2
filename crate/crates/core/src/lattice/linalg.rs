//! Exact linear solves over Q and Z on dense arrays.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::snf::smith_form;

/// Solution `x` of `a x = b` when `a` has full column rank; `None` if the
/// system is inconsistent. Returns `Err(())` when `a` is not injective.
#[allow(clippy::result_unit_err)]
pub fn solve_injective(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Result<Option<Vec<Vec<BigRational>>>, ()> {
    let rows = a.len();
    let n = a.first().map_or(0, |r| r.len());
    let k = b.first().map_or(0, |r| r.len());
    let mut m: Vec<Vec<BigRational>> = (0..rows)
        .map(|i| {
            a[i].iter()
                .chain(&b[i])
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let mut pivot_row = 0;
    for c in 0..n {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][c].is_zero()) else {
            return Err(());
        };
        m.swap(pivot_row, p);
        let inv = m[pivot_row][c].recip();
        for x in &mut m[pivot_row] {
            *x = &*x * &inv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][c].is_zero() {
                let f = m[r][c].clone();
                for j in 0..n + k {
                    let v = &m[pivot_row][j] * &f;
                    m[r][j] -= v;
                }
            }
        }
        pivot_row += 1;
    }
    for row in m.iter().skip(n) {
        if row[n..].iter().any(|x| !x.is_zero()) {
            return Ok(None);
        }
    }
    Ok(Some(m[..n].iter().map(|r| r[n..].to_vec()).collect()))
}

/// All integer solutions of `a x = b`: a particular solution plus a basis of
/// the integral kernel. `None` when no integer solution exists.
pub fn solve_integral(a: &[Vec<BigInt>], cols: usize, b: &[BigInt]) -> Option<(Vec<BigInt>, Vec<Vec<BigInt>>)> {
    let snf = smith_form(a, cols);
    let r = snf.rank();
    // left * b
    let ub: Vec<BigInt> = snf
        .left
        .iter()
        .map(|row| row.iter().zip(b).map(|(x, y)| x * y).sum())
        .collect();
    let mut y = vec![BigInt::zero(); cols];
    for (i, v) in ub.iter().enumerate() {
        if i < r {
            let (q, rem) = v.div_rem(&snf.diagonal[i]);
            if !rem.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !v.is_zero() {
            return None;
        }
    }
    let x: Vec<BigInt> = snf
        .right
        .iter()
        .map(|row| row.iter().zip(&y).map(|(p, q)| p * q).sum())
        .collect();
    let kernel: Vec<Vec<BigInt>> = (r..cols)
        .map(|j| snf.right.iter().map(|row| row[j].clone()).collect())
        .collect();
    Some((x, kernel))
}

pub fn is_integral(x: &BigRational) -> bool {
    x.denom().is_one()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(rows: &[&[i64]]) -> Vec<Vec<BigInt>> {
        rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn injective_solve() {
        let a = big(&[&[0, -1], &[1, 0], &[1, 0]]);
        let b = big(&[&[2], &[3], &[3]]);
        let x = solve_injective(&a, &b).unwrap().unwrap();
        assert_eq!(x[0][0], BigRational::from_integer(3.into()));
        assert_eq!(x[1][0], BigRational::from_integer((-2).into()));
        let b = big(&[&[2], &[3], &[4]]);
        assert!(solve_injective(&a, &b).unwrap().is_none());
        assert!(solve_injective(&big(&[&[1, 1], &[2, 2]]), &big(&[&[0], &[0]])).is_err());
    }

    #[test]
    fn integral_solve() {
        // 2x + 4y = 6 -> x = 3 - 2t
        let a = big(&[&[2, 4]]);
        let (x, k) = solve_integral(&a, 2, &[6.into()]).unwrap();
        assert_eq!(&x[0] * 2 + &x[1] * 4, BigInt::from(6));
        assert_eq!(k.len(), 1);
        assert_eq!(&k[0][0] * 2 + &k[0][1] * 4, BigInt::zero());
        assert!(solve_integral(&a, 2, &[5.into()]).is_none());
    }
}
