//! Invariant suites run along random mutation paths.

use std::collections::BTreeSet;
use std::fmt;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::character::{character_audit, initial_characters, CharacterState, Limits};
use crate::error::{Error, Result};
use crate::lattice::{smith_cokernel, Cokernel};
use crate::quantum::{
    bz_mutate_lambda, check_quantum_datum, e_conjugate_lambda, solve_quantization, transport_lambda,
    transport_lambda_co, QuantumDatum,
};
use crate::random::rng_from;
use crate::seed::{Seed, Sign};
use crate::tropical::{initial_state, tropical_audit, Outcome, TropicalState};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SuiteOptions {
    /// Length of every random path.
    pub depth: usize,
    pub samples: usize,
    pub rng_seed: u64,
    /// Track F-polynomials and cluster characters.
    pub characters: bool,
    /// Check quantum data (given, or solved for when absent).
    pub quantum: bool,
    pub limits: Limits,
    /// When every direction would exceed `limits`, end the path there
    /// (`true`) or continue it without character data (`false`).
    pub stop_on_growth: bool,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            depth: 8,
            samples: 50,
            rng_seed: 0,
            characters: true,
            quantum: true,
            limits: Limits { max_terms: Some(2000), max_entry: Some(60) },
            stop_on_growth: false,
        }
    }
}

/// One identity that failed at the end of a path prefix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Failure {
    pub path: Vec<String>,
    pub suite: &'static str,
    pub check: String,
    pub detail: String,
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "path [{}] {}: {}: {}", self.path.join(","), self.suite, self.check, self.detail)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SuiteReport {
    pub paths: usize,
    /// Mutation steps taken (tropical data is checked at each).
    pub steps: usize,
    /// Steps at which character data was checked.
    pub character_steps: usize,
    /// Steps at which quantum data was checked.
    pub quantum_steps: usize,
    /// Paths cut short, or continued without characters, because of growth.
    pub truncated: usize,
    /// Whether a compatible `Λ` was available.
    pub quantized: bool,
    /// Sums of all entries of `G` seen along the way.
    pub g_sums: BTreeSet<BigInt>,
    pub cokernel: Option<String>,
    /// Observations that did not hold (F-polynomials with negative coefficients).
    pub notes: Vec<Failure>,
    pub failures: Vec<Failure>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn failures_in<'a>(&'a self, suite: &'a str) -> impl Iterator<Item = &'a Failure> + 'a {
        self.failures.iter().filter(move |f| f.suite == suite)
    }

    fn fail(&mut self, path: &[String], suite: &'static str, check: impl Into<String>, detail: impl Into<String>) {
        self.failures.push(Failure { path: path.to_vec(), suite, check: check.into(), detail: detail.into() });
    }

    /// Adds another report's counts and findings.
    pub fn merge(&mut self, other: SuiteReport) {
        self.paths += other.paths;
        self.steps += other.steps;
        self.character_steps += other.character_steps;
        self.quantum_steps += other.quantum_steps;
        self.truncated += other.truncated;
        self.quantized |= other.quantized;
        self.g_sums.extend(other.g_sums);
        self.notes.extend(other.notes);
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "paths: {}", self.paths)?;
        writeln!(f, "steps: {} (characters checked at {}, quantum data at {})", self.steps, self.character_steps, self.quantum_steps)?;
        writeln!(f, "paths limited by growth: {}", self.truncated)?;
        let sums: Vec<String> = self.g_sums.iter().map(ToString::to_string).collect();
        writeln!(f, "sums of G entries: {{{}}}", sums.join(", "))?;
        if let Some(c) = &self.cokernel {
            writeln!(f, "cokernel of B: {c}")?;
        }
        writeln!(f, "quantum datum: {}", if self.quantized { "yes" } else { "none" })?;
        if !self.notes.is_empty() {
            writeln!(f, "observations not holding: {}", self.notes.len())?;
        }
        if self.failures.is_empty() {
            writeln!(f, "all checks passed")
        } else {
            writeln!(f, "{} failures:", self.failures.len())?;
            for x in &self.failures {
                writeln!(f, "  {x}")?;
            }
            Ok(())
        }
    }
}

fn outcome_detail(o: &Outcome) -> Option<String> {
    match o {
        Outcome::Fail(w) => Some(w.clone()),
        _ => None,
    }
}

struct Walker<'a> {
    root: &'a Seed,
    cokernel: Cokernel,
    lambda: Option<QuantumDatum>,
    opts: SuiteOptions,
    report: SuiteReport,
}

impl Walker<'_> {
    fn check_tropical(&mut self, prev: &TropicalState, next: &TropicalState, k: &str) {
        let path = next.path().to_vec();
        let audit = tropical_audit(next);
        for c in audit.failures() {
            self.report.fail(&path, "tropical", c.name, outcome_detail(&c.outcome).unwrap_or_default());
        }
        match next.mutate(k) {
            Ok(back) if back.same_data(prev) => {}
            Ok(_) => self.report.fail(&path, "involution", "tropical state", format!("mutating again at {k} does not return")),
            Err(e) => self.report.fail(&path, "involution", "tropical state", e.to_string()),
        }
        let back = next.current().mutate(k);
        if back.as_ref().ok() != Some(prev.current()) {
            self.report.fail(&path, "involution", "seed", format!("mutating again at {k} does not return"));
        }
        self.report.g_sums.insert(next.g().sum_of_entries());
        let c = smith_cokernel(next.current().b());
        if c != self.cokernel {
            self.report.fail(&path, "cokernel", "smith form of B", format!("{c} vs {} at the root", self.cokernel));
        }
    }

    fn check_characters(&mut self, prev: &CharacterState, next: &CharacterState, k: &str) {
        let path = next.path().to_vec();
        self.report.character_steps += 1;
        let audit = character_audit(next);
        for c in audit.failures() {
            self.report.fail(&path, "character", c.name, format!("{}: {}", c.label, outcome_detail(&c.outcome).unwrap_or_default()));
        }
        for c in audit.notes() {
            self.report.notes.push(Failure {
                path: path.clone(),
                suite: "character",
                check: c.name.to_string(),
                detail: format!("{}: {}", c.label, outcome_detail(&c.outcome).unwrap_or_default()),
            });
        }
        match next.mutate(k) {
            Ok(back) if back.same_data(prev) => {}
            Ok(_) => self.report.fail(&path, "involution", "character state", format!("mutating again at {k} does not return")),
            Err(Error::GrowthLimit(_)) => {}
            Err(e) => self.report.fail(&path, "involution", "character state", e.to_string()),
        }
    }

    fn check_quantum(&mut self, prev: &TropicalState, next: &TropicalState, k: &str) {
        let Some(q) = self.lambda.clone() else { return };
        let path = next.path().to_vec();
        self.report.quantum_steps += 1;
        let (before, after) = match (transport_lambda(prev, &q), transport_lambda(next, &q)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                self.report.fail(&path, "quantum", "transport", e.to_string());
                return;
            }
        };
        let r = check_quantum_datum(next.current(), &after);
        for (name, o) in [("transported skew-symmetry", &r.skew_symmetric), ("transported compatibility", &r.compatible)] {
            if let Some(w) = outcome_detail(o) {
                self.report.fail(&path, "quantum", name, w);
            }
        }
        match transport_lambda_co(next, &q) {
            Ok(co) if co == after => {}
            Ok(_) => self.report.fail(&path, "quantum", "coindex transport", "GᵀΛG ≠ G_coᵀΛG_co"),
            Err(e) => self.report.fail(&path, "quantum", "coindex transport", e.to_string()),
        }
        match bz_mutate_lambda(prev.current(), &before, k) {
            Ok(bz) if bz == after => {}
            Ok(_) => self.report.fail(&path, "quantum", "closed-form mutation", "differs from transport"),
            Err(e) => self.report.fail(&path, "quantum", "closed-form mutation", e.to_string()),
        }
        for sign in Sign::both() {
            match e_conjugate_lambda(prev.current(), &before, k, sign) {
                Ok(x) if x == after => {}
                Ok(_) => self.report.fail(&path, "quantum", format!("E conjugation ({sign:?})"), "differs from transport"),
                Err(e) => self.report.fail(&path, "quantum", format!("E conjugation ({sign:?})"), e.to_string()),
            }
        }
    }

    fn walk<R: Rng>(&mut self, rng: &mut R) -> Result<()> {
        self.report.paths += 1;
        let mut trop = initial_state(self.root)?;
        let mut chars = if self.opts.characters {
            Some(initial_characters(self.root)?.with_limits(self.opts.limits))
        } else {
            None
        };
        let dirs = self.root.directions();
        let mut last: Option<String> = None;
        for _ in 0..self.opts.depth {
            let mut order: Vec<&String> = dirs.iter().filter(|d| Some(*d) != last.as_ref() || dirs.len() == 1).collect();
            order.shuffle(rng);
            let mut stepped = None;
            if let Some(cs) = &chars {
                for k in &order {
                    match cs.mutate(k) {
                        Ok(next) => {
                            stepped = Some(((*k).clone(), Some(next)));
                            break;
                        }
                        Err(Error::GrowthLimit(_)) => continue,
                        Err(e) => {
                            let mut path = cs.path().to_vec();
                            path.push((*k).clone());
                            self.report.fail(&path, "character", "mutation", e.to_string());
                            return Ok(());
                        }
                    }
                }
                if stepped.is_none() {
                    self.report.truncated += 1;
                    if self.opts.stop_on_growth {
                        return Ok(());
                    }
                    chars = None;
                }
            }
            let (k, next_chars) = stepped.unwrap_or_else(|| (order[0].clone(), None));
            let next = trop.mutate(&k)?;
            self.report.steps += 1;
            self.check_tropical(&trop, &next, &k);
            if let (Some(prev), Some(nc)) = (&chars, &next_chars) {
                self.check_characters(prev, nc, &k);
            }
            self.check_quantum(&trop, &next, &k);
            trop = next;
            if chars.is_some() {
                chars = next_chars;
            }
            last = Some(k);
        }
        Ok(())
    }
}

/// Runs every tropical, character and quantum check along `samples` random
/// paths of length `depth`. `lambda` defaults to a solution of the
/// quantization problem when one exists.
pub fn run_suite(seed: &Seed, lambda: Option<&QuantumDatum>, opts: &SuiteOptions) -> Result<SuiteReport> {
    seed.ensure_valid()?;
    let mut rng = rng_from(opts.rng_seed);
    let lambda = if !opts.quantum {
        None
    } else if let Some(q) = lambda {
        let r = check_quantum_datum(seed, q);
        if !r.is_valid() {
            return Err(Error::InvalidQuantumDatum(r.to_string()));
        }
        Some(q.clone())
    } else {
        solve_quantization(seed).map(|q| q.particular)
    };
    let cokernel = smith_cokernel(seed.b());
    let mut w = Walker {
        root: seed,
        cokernel: cokernel.clone(),
        lambda: lambda.clone(),
        opts: *opts,
        report: SuiteReport { quantized: lambda.is_some(), cokernel: Some(cokernel.to_string()), ..Default::default() },
    };
    w.report.g_sums.insert(initial_state(seed)?.g().sum_of_entries());
    for _ in 0..opts.samples {
        w.walk(&mut rng)?;
    }
    Ok(w.report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::seed::fixtures;

    #[test]
    fn fixtures_pass() {
        let opts = SuiteOptions { depth: 6, samples: 5, ..Default::default() };
        for s in [fixtures::a2(), fixtures::a2f(), fixtures::markov()] {
            let r = run_suite(&s, None, &opts).unwrap();
            assert!(r.passed(), "{r}");
            assert_eq!(r.steps, 30);
        }
    }

    #[test]
    fn markov_sum_is_three() {
        let opts = SuiteOptions { depth: 12, samples: 10, characters: false, ..Default::default() };
        let r = run_suite(&fixtures::markov(), None, &opts).unwrap();
        assert!(r.passed(), "{r}");
        assert_eq!(r.g_sums, BTreeSet::from([BigInt::from(3)]));
        assert!(!r.quantized);
    }

    #[test]
    fn reproducible() {
        let opts = SuiteOptions { depth: 5, samples: 3, rng_seed: 9, ..Default::default() };
        let a = run_suite(&fixtures::a2f(), None, &opts).unwrap();
        let b = run_suite(&fixtures::a2f(), None, &opts).unwrap();
        assert_eq!(a, b);
        assert!(a.quantized && a.quantum_steps == 15);
    }
}
