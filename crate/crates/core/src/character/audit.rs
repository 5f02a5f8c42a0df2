use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::separation::{a_separation, hat_y_images, x_separation_parts};
use super::{exponent, has_negative, is_initial_column, is_nonnegative, CharacterState};
use crate::lattice::linalg::solve_injective;
use crate::poly::{render_monomial, Exponent, LaurentPoly, RationalFn};
use crate::tropical::Outcome;

/// One identity checked at one current label.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabelCheck {
    pub label: String,
    pub name: &'static str,
    /// Observations (`false`) are reported but never fail the audit.
    pub required: bool,
    pub outcome: Outcome,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CharacterAudit {
    pub checks: Vec<LabelCheck>,
}

impl CharacterAudit {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| !c.required || c.outcome.passed())
    }

    pub fn failures(&self) -> impl Iterator<Item = &LabelCheck> {
        self.checks.iter().filter(|c| c.required && !c.outcome.passed())
    }

    /// Observations that did not hold.
    pub fn notes(&self) -> impl Iterator<Item = &LabelCheck> {
        self.checks.iter().filter(|c| !c.required && !c.outcome.passed())
    }

    pub fn get(&self, label: &str, name: &str) -> Option<&LabelCheck> {
        self.checks.iter().find(|c| c.label == label && c.name == name)
    }

    fn push(&mut self, label: &str, name: &'static str, required: bool, outcome: Outcome) {
        self.checks.push(LabelCheck { label: label.to_string(), name, required, outcome });
    }
}

impl fmt::Display for CharacterAudit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            let tag = match (&c.outcome, c.required) {
                (Outcome::Pass, _) => "pass".to_string(),
                (Outcome::Skipped(why), _) => format!("skip ({why})"),
                (Outcome::Fail(why), true) => format!("FAIL: {why}"),
                (Outcome::Fail(why), false) => format!("note: {why}"),
            };
            writeln!(f, "{:<6} {:<24} {tag}", c.label, c.name)?;
        }
        Ok(())
    }
}

fn ok_if(cond: bool, why: impl FnOnce() -> String) -> Outcome {
    if cond {
        Outcome::Pass
    } else {
        Outcome::Fail(why())
    }
}

/// For each `v`, whether `v ∈ B·ℕ^n`; `None` when `B` is not injective.
fn in_cone(b: &[Vec<BigInt>], vs: &[Exponent]) -> Option<Vec<bool>> {
    if vs.is_empty() {
        return Some(Vec::new());
    }
    let rhs: Vec<Vec<BigInt>> = (0..b.len()).map(|i| vs.iter().map(|v| BigInt::from(v[i])).collect()).collect();
    match solve_injective(b, &rhs) {
        Err(()) => None,
        Ok(None) => Some(vec![false; vs.len()]),
        Ok(Some(r)) => Some(
            (0..vs.len())
                .map(|j| r.iter().all(|row| row[j].is_integer() && !row[j].is_negative()))
                .collect(),
        ),
    }
}

/// `r == n / d`, by cross-multiplication (no gcd needed).
fn same_fraction(r: &RationalFn, n: &LaurentPoly, d: &LaurentPoly) -> bool {
    &(r.num() * d) == &(r.den() * n)
}

fn sub(a: &[i64], b: &[i64]) -> Exponent {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

/// Checks, at every current mutable label: separation formulas for A and X,
/// the minimal and maximal tropical terms of A against the G and G_co
/// columns, the Laurent and proper-Laurent properties, the ratio identity,
/// the constant term of F, and (as an observation) positivity of F.
pub fn character_audit(cs: &CharacterState) -> CharacterAudit {
    let mut out = CharacterAudit::default();
    let trop = cs.trop();
    let root = trop.root();
    let cur = cs.current();
    let alat = cs.a_lattice();
    let b_root = root.b().to_dense();
    let images = hat_y_images(root);

    for (kc, label) in cur.mutable_lattice().labels().iter().enumerate() {
        let j = alat.position(label).expect("current labels are root labels");
        let f = &cs.f[kc];
        let a = &cs.a[j];

        out.push(label, "F constant term 1", true, ok_if(f.constant_term().is_one(), || format!("constant term {}", f.constant_term())));
        out.push(label, "F positivity", false, ok_if(is_nonnegative(f), || format!("F = {}", f.render("y"))));

        let sep = a_separation(cs, label).map(RationalFn::from);
        out.push(
            label,
            "A separation",
            true,
            match sep {
                Ok(s) if &s == a => Outcome::Pass,
                Ok(s) => Outcome::Fail(format!("separated {} vs tracked {}", s.render("a"), a.render("a"))),
                Err(e) => Outcome::Fail(e.to_string()),
            },
        );
        let x = &cs.x[kc];
        out.push(
            label,
            "X separation",
            true,
            match x_separation_parts(cs, label) {
                Ok((n, d)) if same_fraction(x, &n, &d) => Outcome::Pass,
                Ok((n, d)) => Outcome::Fail(format!(
                    "separated ({}) / ({}) vs tracked {}",
                    n.render("y"),
                    d.render("y"),
                    x.render("y")
                )),
                Err(e) => Outcome::Fail(e.to_string()),
            },
        );

        let Some(ap) = a.as_laurent() else {
            out.push(label, "A Laurent", true, Outcome::Fail(format!("A = {}", a.render("a"))));
            continue;
        };
        out.push(label, "A Laurent", true, Outcome::Pass);

        let gcol = trop.g().column_at(j);
        let gco = trop.g_co().column_at(j);
        let (g, gco_e) = match (exponent(&gcol), exponent(&gco)) {
            (Ok(g), Ok(h)) => (g, h),
            (Err(e), _) | (_, Err(e)) => {
                out.push(label, "min tropical term", true, Outcome::Fail(e.to_string()));
                continue;
            }
        };
        let support: Vec<&Exponent> = ap.terms().map(|(e, _)| e).collect();

        // minimal term: a^g occurs, and every exponent dominates g
        let min = if ap.coefficient(&g).is_zero() {
            Outcome::Fail(format!("{} not in the support of A", render_monomial(alat, &g, "a")))
        } else {
            let diffs: Vec<Exponent> = support.iter().map(|e| sub(e, &g)).collect();
            match in_cone(&b_root, &diffs) {
                None => Outcome::Pass,
                Some(v) => match v.iter().position(|x| !x) {
                    None => Outcome::Pass,
                    Some(i) => Outcome::Fail(format!(
                        "term {} does not dominate the g-vector",
                        render_monomial(alat, support[i], "a")
                    )),
                },
            }
        };
        out.push(label, "min tropical term", true, min);

        // maximal term: F has a top monomial y^f with coefficient 1 and
        // a^{g + B f} = a^{g_co} is the dominant term of A
        let max = match f.max_exponents() {
            Some(top) if f.coefficient(&top).is_one() => {
                let mut h = g.clone();
                for (i, hi) in h.iter_mut().enumerate() {
                    for (jj, fj) in top.iter().enumerate() {
                        *hi += images[jj][i] * fj;
                    }
                }
                if h != gco_e {
                    Outcome::Fail(format!(
                        "top term {} but coindex vector gives {}",
                        render_monomial(alat, &h, "a"),
                        render_monomial(alat, &gco_e, "a")
                    ))
                } else if ap.coefficient(&h).is_zero() {
                    Outcome::Fail(format!("{} not in the support of A", render_monomial(alat, &h, "a")))
                } else {
                    let diffs: Vec<Exponent> = support.iter().map(|e| sub(&h, e)).collect();
                    match in_cone(&b_root, &diffs) {
                        Some(v) if v.iter().any(|x| !x) => {
                            let i = v.iter().position(|x| !x).unwrap();
                            Outcome::Fail(format!(
                                "term {} is not dominated by the coindex vector",
                                render_monomial(alat, support[i], "a")
                            ))
                        }
                        _ => Outcome::Pass,
                    }
                }
            }
            _ => Outcome::Fail(format!("F = {} has no unique top monomial with coefficient 1", f.render("y"))),
        };
        out.push(label, "max tropical term", true, max);

        let proper = if is_initial_column(&gcol) {
            Outcome::Skipped("initial variable".into())
        } else {
            match support.iter().find(|e| !has_negative(e)) {
                None => Outcome::Pass,
                Some(e) => Outcome::Fail(format!("term {} has no negative exponent", render_monomial(alat, e, "a"))),
            }
        };
        out.push(label, "proper Laurent", true, proper);

        out.push(label, "ratio identity", true, ratio(cs, kc, label));
    }
    out
}

/// `(β)_* X_U = ∏_V A_V^{[ε_{V,U}]_+} / ∏_V A_V^{[ε_{V,U}]_-}` over all labels.
fn ratio(cs: &CharacterState, kc: usize, label: &str) -> Outcome {
    let cur = cs.current();
    let alat = cs.a_lattice();
    let images = hat_y_images(cs.trop().root());
    let x = &cs.x[kc];
    let (xn, xd) = (x.num().substitute_monomials(alat, &images), x.den().substitute_monomials(alat, &images));
    let (mut p, mut m) = (LaurentPoly::one(alat), LaurentPoly::one(alat));
    for (v, a) in cs.a.iter().enumerate() {
        let e = cur.b().at(v, kc);
        if e.is_zero() {
            continue;
        }
        let Some(a) = a.as_laurent() else {
            return Outcome::Fail(format!("A at {} is not Laurent", alat.label(v)));
        };
        let Ok(k) = u32::try_from(e.magnitude()) else {
            return Outcome::Fail(format!("exponent {e} out of range"));
        };
        if e.is_positive() {
            p = &p * &a.pow(k);
        } else {
            m = &m * &a.pow(k);
        }
    }
    ok_if(&xn * &m == &xd * &p, || {
        format!("{label}: pushed-forward X ({}) / ({}) vs ratio ({}) / ({})", xn.render("a"), xd.render("a"), p.render("a"), m.render("a"))
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::character::initial_characters;
    use crate::seed::fixtures;

    #[test]
    fn initial_all_pass() {
        for (_, s) in fixtures::all() {
            if s.is_generalized() {
                continue;
            }
            let a = character_audit(&initial_characters(&s).unwrap());
            assert!(a.passed(), "{a}");
        }
    }

    #[test]
    fn a2_after_one() {
        let cs = initial_characters(&fixtures::a2()).unwrap().mutate("1").unwrap();
        let a = character_audit(&cs);
        assert!(a.passed(), "{a}");
        assert_eq!(a.get("1", "proper Laurent").unwrap().outcome, Outcome::Pass);
        assert_eq!(a.get("2", "proper Laurent").unwrap().outcome, Outcome::Skipped("initial variable".into()));
    }

    #[test]
    fn ratio_at_root() {
        // pushing X_1 = y_1 forward gives a_2, the ratio a_2 / 1
        let cs = initial_characters(&fixtures::a2()).unwrap();
        let x = cs.x("1").unwrap().substitute_monomials(cs.a_lattice(), &hat_y_images(cs.trop().root())).unwrap();
        assert_eq!(x.render("a"), "a2");
    }

    #[test]
    fn paths_pass() {
        for s in [fixtures::a2(), fixtures::a2f(), fixtures::markov()] {
            let mut cs = initial_characters(&s).unwrap();
            for k in ["1", "2", "1", "2", "3", "1"] {
                if cs.current().direction(k).is_err() {
                    continue;
                }
                cs = cs.mutate(k).unwrap();
                let a = character_audit(&cs);
                assert!(a.passed(), "{:?}\n{a}", cs.path());
            }
        }
    }

    #[test]
    fn corrupted_state_fails() {
        let mut cs = initial_characters(&fixtures::a2()).unwrap().mutate("1").unwrap();
        cs.a[0] = RationalFn::var(cs.a_lattice(), "1").unwrap();
        let a = character_audit(&cs);
        assert!(!a.passed());
        assert!(a.failures().any(|c| c.name == "A separation"));
    }
}
