//! Quantum data: skew-symmetric forms `Λ` on the lattice of all labels,
//! compatible with the exchange matrix, and their transport along mutation.

mod hom;

pub use hom::{lambda_from_hom, preprojective_a2, HomFixture};

use std::fmt;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::lattice::linalg::solve_integral;
use crate::lattice::{neg, IntMatrix, Lattice};
use crate::seed::{ef_matrices, Relabeling, Seed, Sign};
use crate::tropical::{Outcome, TropicalState};

/// `Λ` with `L[X][Y] = {[X], [Y]}`, all labels × all labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumDatum {
    l: IntMatrix,
}

impl QuantumDatum {
    pub fn new(l: IntMatrix) -> Result<Self> {
        if !l.is_square_on_same_labels() {
            return Err(Error::InvalidQuantumDatum("Λ must be indexed by one lattice on both sides".into()));
        }
        Ok(Self { l })
    }

    pub fn from_rows<I: Into<BigInt> + Clone>(lattice: &Lattice, rows: &[Vec<I>]) -> Result<Self> {
        Self::new(IntMatrix::from_rows(lattice, lattice, rows)?)
    }

    pub fn matrix(&self) -> &IntMatrix {
        &self.l
    }

    pub fn lattice(&self) -> &Lattice {
        self.l.rows()
    }

    pub fn into_matrix(self) -> IntMatrix {
        self.l
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuantumReport {
    pub skew_symmetric: Outcome,
    /// `Σ_X B[X][U] · L[X][T] = 2 d_T δ_{U,T}` for mutable `U`, all `T`.
    pub compatible: Outcome,
    /// Full column rank of `B`, necessary for any compatible `Λ`.
    pub b_injective: bool,
}

impl QuantumReport {
    pub fn is_valid(&self) -> bool {
        self.skew_symmetric.passed() && self.compatible.passed()
    }
}

impl fmt::Display for QuantumReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |o: &Outcome| match o {
            Outcome::Pass => "pass".to_string(),
            Outcome::Fail(w) => format!("FAIL: {w}"),
            Outcome::Skipped(w) => format!("skip ({w})"),
        };
        writeln!(f, "{:<16} {}", "skew-symmetric", show(&self.skew_symmetric))?;
        writeln!(f, "{:<16} {}", "compatible", show(&self.compatible))?;
        writeln!(f, "{:<16} {}", "B injective", if self.b_injective { "yes" } else { "no" })
    }
}

pub fn check_quantum_datum(s: &Seed, q: &QuantumDatum) -> QuantumReport {
    let b = s.b();
    let b_injective = b.rank() == b.cols().len();
    let lat = s.lattice();
    if !q.lattice().same_as(lat) {
        let why = Outcome::Fail("Λ is not over the seed's lattice".into());
        return QuantumReport { skew_symmetric: why.clone(), compatible: why, b_injective };
    }
    let l = &q.l;
    let n = lat.len();
    let mut skew = Outcome::Pass;
    'skew: for i in 0..n {
        for j in i..n {
            let (x, y) = (l.at(i, j), l.at(j, i));
            if x != -&y {
                skew = Outcome::Fail(format!("L[{}][{}] = {x} but L[{}][{}] = {y}", lat.label(i), lat.label(j), lat.label(j), lat.label(i)));
                break 'skew;
            }
        }
    }
    let mut compatible = Outcome::Pass;
    let m = s.mutable_lattice();
    'compat: for u in 0..m.len() {
        let ur = lat.position(m.label(u)).expect("mutable label");
        for t in 0..n {
            let got: BigInt = (0..n).map(|x| b.at(x, u) * l.at(x, t)).sum();
            let want = if t == ur { lat.d(t) * 2 } else { BigInt::zero() };
            if got != want {
                compatible = Outcome::Fail(format!("(BᵀΛ)[{}][{}] = {got}, expected {want}", m.label(u), lat.label(t)));
                break 'compat;
            }
        }
    }
    QuantumReport { skew_symmetric: skew, compatible, b_injective }
}

fn ensure_valid(s: &Seed, q: &QuantumDatum) -> Result<()> {
    let r = check_quantum_datum(s, q);
    for o in [&r.skew_symmetric, &r.compatible] {
        if let Outcome::Fail(w) = o {
            return Err(Error::InvalidQuantumDatum(w.clone()));
        }
    }
    Ok(())
}

fn conjugate(m: &IntMatrix, l: &IntMatrix) -> Result<QuantumDatum> {
    QuantumDatum::new(m.transpose().try_mul(l)?.try_mul(m)?)
}

/// `Λ_current = Gᵀ Λ_root G`.
pub fn transport_lambda(st: &TropicalState, q_root: &QuantumDatum) -> Result<QuantumDatum> {
    ensure_valid(st.root(), q_root)?;
    conjugate(st.g(), &q_root.l)
}

/// The same transport through the coindex matrix, `G_coᵀ Λ_root G_co`.
pub fn transport_lambda_co(st: &TropicalState, q_root: &QuantumDatum) -> Result<QuantumDatum> {
    ensure_valid(st.root(), q_root)?;
    conjugate(st.g_co(), &q_root.l)
}

/// Closed-form one-step mutation of `Λ` at `k`.
pub fn bz_mutate_lambda(s: &Seed, q: &QuantumDatum, k: &str) -> Result<QuantumDatum> {
    let kc = s.direction(k)?;
    ensure_valid(s, q)?;
    let lat = s.lattice();
    let kr = lat.require(k)?;
    let n = lat.len();
    let l = &q.l;
    // w_W = [ε_{W,k}]_- for W ≠ k
    let w: Vec<BigInt> = (0..n).map(|x| if x == kr { BigInt::zero() } else { neg(&s.b().at(x, kc)) }).collect();
    let mut out = l.clone();
    for u in 0..n {
        if u == kr {
            continue;
        }
        let mut v = -l.at(u, kr);
        for (x, wx) in w.iter().enumerate() {
            if !wx.is_zero() {
                v += wx * l.at(u, x);
            }
        }
        out.set_at(u, kr, v.clone());
        out.set_at(kr, u, -v);
    }
    out.set_at(kr, kr, BigInt::zero());
    QuantumDatum::new(out)
}

/// `E_ε(k)ᵀ Λ E_ε(k)`.
pub fn e_conjugate_lambda(s: &Seed, q: &QuantumDatum, k: &str, sign: Sign) -> Result<QuantumDatum> {
    let (e, _) = ef_matrices(s, k, sign)?;
    conjugate(&e, &q.l)
}

/// All compatible `Λ`: one solution plus a basis of the homogeneous
/// solutions (skew-symmetric `Λ` with `BᵀΛ = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Quantization {
    pub particular: QuantumDatum,
    pub homogeneous: Vec<IntMatrix>,
}

/// Solves for integral compatible `Λ` over the strictly upper triangle of
/// unknowns; `None` when no integral solution exists.
pub fn solve_quantization(s: &Seed) -> Option<Quantization> {
    let lat = s.lattice();
    let n = lat.len();
    let m = s.mutable_lattice();
    let mut idx = vec![vec![None; n]; n];
    let mut unknowns = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            idx[i][j] = Some(unknowns.len());
            unknowns.push((i, j));
        }
    }
    let cols = unknowns.len();
    let mut rows = Vec::new();
    let mut rhs = Vec::new();
    for u in 0..m.len() {
        let ur = lat.position(m.label(u)).expect("mutable label");
        for t in 0..n {
            let mut row = vec![BigInt::zero(); cols];
            for x in 0..n {
                let b = s.b().at(x, u);
                if b.is_zero() || x == t {
                    continue;
                }
                match (idx[x][t], idx[t][x]) {
                    (Some(c), _) => row[c] += &b,
                    (_, Some(c)) => row[c] -= &b,
                    _ => unreachable!(),
                }
            }
            rows.push(row);
            rhs.push(if t == ur { lat.d(t) * 2 } else { BigInt::zero() });
        }
    }
    let build = |x: &[BigInt]| {
        let mut l = IntMatrix::zeros(lat, lat);
        for (c, &(i, j)) in unknowns.iter().enumerate() {
            l.set_at(i, j, x[c].clone());
            l.set_at(j, i, -x[c].clone());
        }
        l
    };
    let (x, kernel) = if cols == 0 {
        if rhs.iter().any(|v| !v.is_zero()) {
            return None;
        }
        (Vec::new(), Vec::new())
    } else {
        solve_integral(&rows, cols, &rhs)?
    };
    let particular = QuantumDatum::new(build(&x)).expect("square");
    debug_assert!(check_quantum_datum(s, &particular).is_valid());
    Some(Quantization { particular, homogeneous: kernel.iter().map(|k| build(k)).collect() })
}

/// For two states over one root reaching the same cluster, whether the
/// transported forms agree under the label matching. `None` when the
/// clusters differ.
pub fn transported_agree(a: &TropicalState, b: &TropicalState, q_root: &QuantumDatum) -> Result<Option<bool>> {
    if a.root() != b.root() {
        return Err(Error::RootMismatch);
    }
    let Some(pi) = crate::seed::find_relabeling_tagged(a.current(), b.current(), &a.g_tags(), &b.g_tags()) else {
        return Ok(None);
    };
    let la = transport_lambda(a, q_root)?;
    let lb = transport_lambda(b, q_root)?;
    Ok(Some(agree_under(&la, &lb, &pi)))
}

/// `Λ_a[U][V] = Λ_b[π U][π V]` for all labels.
pub fn agree_under(la: &QuantumDatum, lb: &QuantumDatum, pi: &Relabeling) -> bool {
    let (a, b) = (la.lattice(), lb.lattice());
    a.labels().iter().all(|u| {
        a.labels().iter().all(|v| {
            let (Some(pu), Some(pv)) = (pi.map(u), pi.map(v)) else {
                return false;
            };
            match (la.l.get(u, v), lb.l.get(pu, pv)) {
                (Ok(x), Ok(y)) => x == y && b.contains(pu),
                _ => false,
            }
        })
    })
}
