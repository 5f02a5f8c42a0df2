use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::TropicalState;
use crate::lattice::linalg::solve_injective;
use crate::lattice::{multiplier_matrix, weighted_adjoint, IntMatrix};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    Fail(String),
    Skipped(String),
}

impl Outcome {
    pub fn passed(&self) -> bool {
        !matches!(self, Outcome::Fail(_))
    }
}

/// One audited identity. Checks with `required == false` are observations
/// and do not make the audit fail.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub required: bool,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct TropicalAudit {
    pub checks: Vec<Check>,
}

impl TropicalAudit {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.required || c.outcome.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.required && !c.outcome.passed())
    }

    pub fn get(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &'static str, outcome: Outcome) {
        self.checks.push(Check { name, required: true, outcome });
    }

    fn observe(&mut self, name: &'static str, outcome: Outcome) {
        self.checks.push(Check { name, required: false, outcome });
    }
}

impl fmt::Display for TropicalAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match (&c.outcome, c.required) {
                (Outcome::Pass, _) => "pass".to_string(),
                (Outcome::Skipped(why), _) => format!("skip ({why})"),
                (Outcome::Fail(why), true) => format!("FAIL: {why}"),
                (Outcome::Fail(why), false) => format!("note: {why}"),
            };
            writeln!(f, "{:<32} {tag}", c.name)?;
        }
        Ok(())
    }
}

/// First entry at which two same-shape matrices differ.
pub(crate) fn compare(lhs: &IntMatrix, rhs: &IntMatrix) -> Outcome {
    if lhs == rhs {
        return Outcome::Pass;
    }
    for i in 0..lhs.rows().len() {
        for j in 0..lhs.cols().len() {
            let (a, b) = (lhs.at(i, j), rhs.at(i, j));
            if a != b {
                return Outcome::Fail(format!(
                    "entry ({}, {}): {a} vs {b}",
                    lhs.rows().label(i),
                    lhs.cols().label(j)
                ));
            }
        }
    }
    Outcome::Fail("lattices differ".into())
}

fn eq_products(f: impl FnOnce() -> crate::Result<(IntMatrix, IntMatrix)>) -> Outcome {
    match f() {
        Ok((a, b)) => compare(&a, &b),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn column_sign_coherence(m: &IntMatrix) -> Outcome {
    for j in 0..m.cols().len() {
        let col: Vec<BigInt> = (0..m.rows().len()).map(|i| m.at(i, j)).collect();
        if col.iter().all(Zero::is_zero) {
            return Outcome::Fail(format!("column {} is zero", m.cols().label(j)));
        }
        if col.iter().any(Signed::is_positive) && col.iter().any(Signed::is_negative) {
            return Outcome::Fail(format!("column {} has mixed signs", m.cols().label(j)));
        }
    }
    Outcome::Pass
}

fn row_sign_coherence(m: &IntMatrix, rows: impl Iterator<Item = usize>) -> Outcome {
    for i in rows {
        let row: Vec<BigInt> = (0..m.cols().len()).map(|j| m.at(i, j)).collect();
        if row.iter().any(Signed::is_positive) && row.iter().any(Signed::is_negative) {
            return Outcome::Fail(format!("row {} has mixed signs", m.rows().label(i)));
        }
    }
    Outcome::Pass
}

fn unimodular(m: &IntMatrix) -> Outcome {
    match m.determinant() {
        Ok(d) if d.abs().is_one() => Outcome::Pass,
        Ok(d) => Outcome::Fail(format!("determinant {d}")),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

fn frozen_columns_standard(st: &TropicalState, g: &IntMatrix) -> Outcome {
    let lat = st.current().lattice();
    for j in (0..lat.len()).filter(|&j| lat.is_frozen(j)) {
        for i in 0..lat.len() {
            let want = if i == j { BigInt::one() } else { BigInt::zero() };
            if g.at(i, j) != want {
                return Outcome::Fail(format!("frozen column {} is not a basis vector", lat.label(j)));
            }
        }
    }
    Outcome::Pass
}

fn inverse_via_adjoint(c: &IntMatrix, g_mut: &IntMatrix) -> Outcome {
    let d = c.rows().multipliers().to_vec();
    let adj = match weighted_adjoint(&g_mut.transpose(), &d, &d) {
        Ok(a) => a,
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    let ct = c.transpose();
    match ct.try_mul(&adj) {
        Ok(m) => match compare(&m, &IntMatrix::identity(c.cols())) {
            Outcome::Pass => {}
            o => return o,
        },
        Err(e) => return Outcome::Fail(e.to_string()),
    }
    match adj.try_mul(&ct) {
        Ok(m) => compare(&m, &IntMatrix::identity(c.rows())),
        Err(e) => Outcome::Fail(e.to_string()),
    }
}

/// Nonnegative integral `R` with `B_root · R = G_co - G`, when `B_root` is
/// injective.
fn coindex_cross(st: &TropicalState) -> Outcome {
    let b = st.root().b().to_dense();
    let delta = match st.g_co().try_sub(st.g()) {
        Ok(d) => d.to_dense(),
        Err(e) => return Outcome::Fail(e.to_string()),
    };
    match solve_injective(&b, &delta) {
        Err(()) => Outcome::Skipped("B not injective".into()),
        Ok(None) => Outcome::Fail("G_co - G is not in the column space of B".into()),
        Ok(Some(r)) => {
            for (i, row) in r.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    if !x.is_integer() || x.is_negative() {
                        return Outcome::Fail(format!(
                            "coefficient ({}, {}) = {x}",
                            st.root().mutable_lattice().label(i),
                            st.current().lattice().label(j)
                        ));
                    }
                }
            }
            Outcome::Pass
        }
    }
}

/// Every tropical identity at one state, checked exactly.
pub fn tropical_audit(st: &TropicalState) -> TropicalAudit {
    let mut a = TropicalAudit::default();
    let root = st.root();
    let cur = st.current();
    let mlat = root.mutable_lattice();
    let dmut = multiplier_matrix(mlat);
    let g_mut = st.g_mutable_block();
    let gco_mut = st.g_co_mutable_block();
    let b0 = root.b();
    let b0_mut = root.principal_part();
    let bt_mut = cur.principal_part();

    a.push("duality square (index)", eq_products(|| Ok((b0.try_mul(st.c())?, st.g().try_mul(cur.b())?))));
    a.push(
        "duality square (coindex)",
        eq_products(|| Ok((b0.try_mul(st.c_co())?, st.g_co().try_mul(cur.b())?))),
    );
    a.push(
        "pairing (index)",
        eq_products(|| Ok((st.c().transpose().try_mul(&dmut)?.try_mul(&g_mut)?, dmut.clone()))),
    );
    a.push(
        "pairing (coindex)",
        eq_products(|| Ok((st.c_co().transpose().try_mul(&dmut)?.try_mul(&gco_mut)?, dmut.clone()))),
    );
    a.push(
        "s-form (index)",
        eq_products(|| {
            let lhs = st.c().transpose().try_mul(&dmut)?.try_mul(&b0_mut)?.try_mul(st.c())?;
            Ok((lhs, dmut.try_mul(&bt_mut)?))
        }),
    );
    a.push(
        "s-form (coindex)",
        eq_products(|| {
            let lhs = st.c_co().transpose().try_mul(&dmut)?.try_mul(&b0_mut)?.try_mul(st.c_co())?;
            Ok((lhs, dmut.try_mul(&bt_mut)?))
        }),
    );
    a.push("C column sign coherence", column_sign_coherence(st.c()));
    a.push("C_co column sign coherence", column_sign_coherence(st.c_co()));
    let lat = root.lattice();
    let mutable_rows: Vec<usize> = (0..lat.len()).filter(|&i| !lat.is_frozen(i)).collect();
    let frozen_rows: Vec<usize> = (0..lat.len()).filter(|&i| lat.is_frozen(i)).collect();
    a.push("G row sign coherence", row_sign_coherence(st.g(), mutable_rows.iter().copied()));
    a.observe("G row sign coherence (frozen)", row_sign_coherence(st.g(), frozen_rows.iter().copied()));
    a.push("det G = ±1", unimodular(&g_mut));
    a.push("det G_co = ±1", unimodular(&gco_mut));
    a.push("frozen columns of G", frozen_columns_standard(st, st.g()));
    a.push("frozen columns of G_co", frozen_columns_standard(st, st.g_co()));
    a.push("C inverse via adjoint of G", inverse_via_adjoint(st.c(), &g_mut));
    a.push("C_co inverse via adjoint of G_co", inverse_via_adjoint(st.c_co(), &gco_mut));
    a.push("G_co - G in cone of B", coindex_cross(st));
    a
}
