//! G- and C-matrices (index and coindex conventions) along mutation paths.

mod audit;
mod defect;
mod fan;

pub use audit::{tropical_audit, Check, Outcome, TropicalAudit};
pub use defect::{composition_defect, DefectCertificate, DefectVerdict};
pub use fan::{g_fan_check, ConePair, FanReport, PairVerdict};

use std::fmt;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::lattice::{neg, pos, IntMatrix, IntVector};
use crate::seed::Seed;

/// A seed reached from `root` by `path`, with its index data in root
/// coordinates.
///
/// * `g`: all root labels × all labels; column `V` is the index of `V`.
/// * `c`: mutable × mutable; column `V` is the adjoint index of the simple at `V`.
/// * `g_co`, `c_co`: the same in the coindex convention.
#[derive(Clone, PartialEq, Eq)]
pub struct TropicalState {
    root: Seed,
    current: Seed,
    path: Vec<String>,
    g: IntMatrix,
    c: IntMatrix,
    g_co: IntMatrix,
    c_co: IntMatrix,
}

impl TropicalState {
    pub fn root(&self) -> &Seed {
        &self.root
    }

    pub fn current(&self) -> &Seed {
        &self.current
    }

    pub fn path(&self) -> &[String] {
        &self.path
    }

    pub fn g(&self) -> &IntMatrix {
        &self.g
    }

    pub fn c(&self) -> &IntMatrix {
        &self.c
    }

    pub fn g_co(&self) -> &IntMatrix {
        &self.g_co
    }

    pub fn c_co(&self) -> &IntMatrix {
        &self.c_co
    }

    /// Equality of everything except the recorded path.
    pub fn same_data(&self, other: &Self) -> bool {
        self.root == other.root
            && self.current == other.current
            && self.g == other.g
            && self.c == other.c
            && self.g_co == other.g_co
            && self.c_co == other.c_co
    }

    /// Mutable block of `G` (mutable root rows × mutable columns).
    pub fn g_mutable_block(&self) -> IntMatrix {
        let m = self.root.mutable_lattice();
        self.g.restrict(m, m).expect("mutable labels")
    }

    /// Mutable block of `G_co`.
    pub fn g_co_mutable_block(&self) -> IntMatrix {
        let m = self.root.mutable_lattice();
        self.g_co.restrict(m, m).expect("mutable labels")
    }

    pub fn mutate(&self, k: &str) -> Result<Self> {
        mutate_tropical(self, k)
    }

    /// Applies a path of directions.
    pub fn mutate_path<S: AsRef<str>>(&self, path: &[S]) -> Result<Self> {
        let mut st = self.clone();
        for k in path {
            st = st.mutate(k.as_ref())?;
        }
        Ok(st)
    }

    /// A key identifying the cluster up to relabeling: the sorted index
    /// vectors together with the exchange matrix in the induced order.
    pub fn cluster_key(&self) -> String {
        crate::seed::canonical_key_tagged(&self.current, &self.g_tags())
    }

    /// Index vectors of the current labels, rendered as strings; used to
    /// match labels between states reaching the same cluster.
    pub fn g_tags(&self) -> Vec<String> {
        (0..self.current.lattice().len())
            .map(|j| {
                let col = self.g.column_at(j);
                col.dense().iter().map(ToString::to_string).collect::<Vec<_>>().join(",")
            })
            .collect()
    }
}

impl fmt::Debug for TropicalState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("TropicalState")
            .field("path", &self.path)
            .field("B", self.current.b())
            .field("G", &self.g)
            .field("C", &self.c)
            .field("G_co", &self.g_co)
            .field("C_co", &self.c_co)
            .finish()
    }
}

/// Identity index data at a classical seed.
pub fn initial_state(s: &Seed) -> Result<TropicalState> {
    if s.is_generalized() {
        return Err(Error::InvalidSeed("tropical data needs a classical seed".into()));
    }
    s.ensure_valid()?;
    let g = IntMatrix::identity(s.lattice());
    let c = IntMatrix::identity(s.mutable_lattice());
    Ok(TropicalState {
        root: s.clone(),
        current: s.clone(),
        path: Vec::new(),
        g_co: g.clone(),
        c_co: c.clone(),
        g,
        c,
    })
}

fn minus_part(v: &IntVector) -> IntVector {
    v.sign_split().1
}

/// One mutation of the seed and its index data.
///
/// `g'_k = -g_k + Σ_{W≠k} [ε_{W,k}]_- g_W - B_root [c_k]_-` and
/// `c'_V = c_V + [ε_{k,V}]_+ c_k + ε_{k,V} [c_k]_-`, `c'_k = -c_k`;
/// in the coindex convention the signs of `ε` are swapped and the `B_root`
/// correction enters positively.
pub fn mutate_tropical(st: &TropicalState, k: &str) -> Result<TropicalState> {
    let cur = &st.current;
    let kc = cur.direction(k)?;
    let lat = cur.lattice();
    let kr = lat.require(k)?;
    let mlat = cur.mutable_lattice();
    let eps = cur.b();
    let b_root = st.root.b();

    let ck = st.c.column_at(kc);
    let cok = st.c_co.column_at(kc);
    let b_ck = b_root.try_apply(&minus_part(&ck))?;
    let b_cok = b_root.try_apply(&minus_part(&cok))?;

    let mut gk = -&st.g.column_at(kr);
    let mut gcok = -&st.g_co.column_at(kr);
    for w in (0..lat.len()).filter(|&w| w != kr) {
        let e = eps.at(w, kc);
        let (p, m) = (pos(&e), neg(&e));
        if m != BigInt::from(0) {
            gk = gk.try_add(&st.g.column_at(w).scale(&m))?;
        }
        if p != BigInt::from(0) {
            gcok = gcok.try_add(&st.g_co.column_at(w).scale(&p))?;
        }
    }
    let gk = gk.try_sub(&b_ck)?;
    let gcok = gcok.try_add(&b_cok)?;

    let mut g = st.g.clone();
    g.set_column_at(kr, &gk);
    let mut g_co = st.g_co.clone();
    g_co.set_column_at(kr, &gcok);

    let mut c = st.c.clone();
    let mut c_co = st.c_co.clone();
    let ck_minus = minus_part(&ck);
    let cok_minus = minus_part(&cok);
    for v in 0..mlat.len() {
        if v == kc {
            c.set_column_at(v, &-&ck);
            c_co.set_column_at(v, &-&cok);
            continue;
        }
        let e = eps.at(kr, v);
        let col = st
            .c
            .column_at(v)
            .try_add(&ck.scale(&pos(&e)))?
            .try_add(&ck_minus.scale(&e))?;
        c.set_column_at(v, &col);
        let col = st
            .c_co
            .column_at(v)
            .try_add(&cok.scale(&neg(&e)))?
            .try_sub(&cok_minus.scale(&e))?;
        c_co.set_column_at(v, &col);
    }

    let mut path = st.path.clone();
    path.push(k.to_string());
    Ok(TropicalState { root: st.root.clone(), current: cur.mutate(k)?, path, g, c, g_co, c_co })
}
