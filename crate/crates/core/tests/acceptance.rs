//! End-to-end acceptance criteria. Runs without the libtest harness so that
//! every criterion prints exactly one PASS/FAIL line; exits nonzero if any
//! fails.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use num_bigint::BigInt;

use tropiclust::character::{initial_characters, CharacterState, Limits};
use tropiclust::graph::exchange_graph;
use tropiclust::lattice::{smith_cokernel, Cokernel};
use tropiclust::poly::{LaurentPoly, RationalFn};
use tropiclust::quantum::{solve_quantization, transport_lambda, transported_agree, QuantumDatum};
use tropiclust::random::{random_seed, rng_from, SeedShape};
use tropiclust::seed::{find_relabeling_tagged, fixtures, generalized_mutate, GeneralizedVars, Seed};
use tropiclust::suite::{run_suite, SuiteOptions, SuiteReport};
use tropiclust::tropical::initial_state;

/// Outcome of one criterion: a short summary, or the reason it failed.
type Verdict = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(limit: Duration, t: Instant) -> Result<Duration, String> {
    let e = t.elapsed();
    ensure(e < limit, || format!("took {:.2?}, limit {:.0?}", e, limit))?;
    Ok(e)
}

fn terms(s: &Seed, ts: &[(&[i64], i64)]) -> RationalFn {
    LaurentPoly::from_terms(s.lattice(), ts.iter().map(|(e, c)| (e.to_vec(), BigInt::from(*c)))).into()
}

fn cns() -> Verdict {
    let t = Instant::now();
    let s = fixtures::cns();
    let lat = s.lattice();
    let mut v0 = GeneralizedVars::new();
    for l in lat.labels() {
        v0.insert(l.clone(), RationalFn::var(lat, l).map_err(|e| e.to_string())?);
    }
    let (v1, s1) = generalized_mutate(&v0, &s, "1").map_err(|e| e.to_string())?;
    let (v2, _) = generalized_mutate(&v1, &s1, "2").map_err(|e| e.to_string())?;
    let (v4, _) = generalized_mutate(&v0, &s, "2").map_err(|e| e.to_string())?;
    // a1^-1 (1 + a2 + a2^2)
    let u1 = terms(&s, &[(&[-1, 0], 1), (&[-1, 1], 1), (&[-1, 2], 1)]);
    // a2^-1 (1 + a1^-1 + a1^-1 a2 + a1^-1 a2^2)
    let u2 = terms(&s, &[(&[0, -1], 1), (&[-1, -1], 1), (&[-1, 0], 1), (&[-1, 1], 1)]);
    // a1 a2^-1 (1 + a1^-1)
    let u4 = terms(&s, &[(&[1, -1], 1), (&[0, -1], 1)]);
    for (name, got, want) in [("U1", &v1["1"], &u1), ("U2", &v2["2"], &u2), ("U4", &v4["2"], &u4)] {
        ensure(got == want, || format!("{name}: got {}, want {}", got.render("a"), want.render("a")))?;
    }
    let e = within(Duration::from_secs(1), t)?;
    Ok(format!("U1, U2, U4 exact ({e:.2?})"))
}

fn markov() -> Verdict {
    let t = Instant::now();
    let s = fixtures::markov();
    for k in s.directions() {
        let m = s.mutate(&k).map_err(|e| e.to_string())?;
        ensure(m.b() == &s.b().neg(), || format!("mutation at {k} does not negate B"))?;
    }
    let opts = SuiteOptions { depth: 12, samples: 100, rng_seed: 2, characters: false, ..Default::default() };
    let r = run_suite(&s, None, &opts).map_err(|e| e.to_string())?;
    ensure(r.passed(), || r.to_string())?;
    ensure(r.paths == 100 && r.steps == 1200, || format!("{} paths, {} steps", r.paths, r.steps))?;
    let three = BTreeSet::from([BigInt::from(3)]);
    ensure(r.g_sums == three, || format!("sums of G entries seen: {:?}", r.g_sums))?;
    let e = within(Duration::from_secs(5), t)?;
    Ok(format!("{} paths, {} steps, G-sum always 3, B' = -B ({e:.2?})", r.paths, r.steps))
}

fn pentagon() -> Verdict {
    let t = Instant::now();
    let s = fixtures::a2();
    let path = ["1", "2", "1", "2", "1"];
    let root = initial_state(&s).map_err(|e| e.to_string())?;
    let end = root.mutate_path(&path).map_err(|e| e.to_string())?;
    let pi = find_relabeling_tagged(root.current(), end.current(), &root.g_tags(), &end.g_tags())
        .ok_or("the path does not return to the initial cluster")?;
    ensure(pi.map("1") == Some("2") && pi.map("2") == Some("1"), || format!("relabeling {:?}", pi.0))?;
    for x in s.lattice().labels() {
        for y in s.directions() {
            let (px, py) = (pi.map(x).unwrap_or(x), pi.map(&y).unwrap_or(&y));
            let same = end.current().entry(px, py) == s.entry(x, &y);
            ensure(same, || format!("B[{x},{y}] is not carried to B'[{px},{py}]"))?;
        }
    }

    let mut cs = initial_characters(&s).map_err(|e| e.to_string())?;
    let mut seen: BTreeSet<String> = cs.a_variables().map(|(_, a)| a.render("a")).collect();
    for k in path {
        cs = cs.mutate(k).map_err(|e| e.to_string())?;
        seen.extend(cs.a_variables().map(|(_, a)| a.render("a")));
    }
    let five: BTreeSet<String> = [
        terms(&s, &[(&[1, 0], 1)]),
        terms(&s, &[(&[0, 1], 1)]),
        terms(&s, &[(&[-1, 0], 1), (&[-1, 1], 1)]),
        terms(&s, &[(&[0, -1], 1), (&[1, -1], 1)]),
        terms(&s, &[(&[-1, -1], 1), (&[-1, 0], 1), (&[0, -1], 1)]),
    ]
    .iter()
    .map(|a| a.render("a"))
    .collect();
    ensure(seen == five, || format!("variables seen: {:?}", seen))?;

    let q = QuantumDatum::from_rows(s.lattice(), &[vec![0, -2], vec![2, 0]]).map_err(|e| e.to_string())?;
    let back = transport_lambda(&end, &q).map_err(|e| e.to_string())?;
    let swapped = QuantumDatum::from_rows(s.lattice(), &[vec![0, 2], vec![-2, 0]]).map_err(|e| e.to_string())?;
    ensure(back == swapped, || format!("transported Λ = {}", back.matrix()))?;
    ensure(transported_agree(&root, &end, &q) == Ok(Some(true)), || "Λ does not return under the swap".into())?;
    let e = within(Duration::from_secs(1), t)?;
    Ok(format!("returns up to 1<->2, five variables, Λ returns ({e:.2?})"))
}

/// Random seeds shared by criteria 4-8.
fn random_seeds(n: usize) -> Vec<Seed> {
    let mut rng = rng_from(2024);
    (0..n).map(|_| random_seed(&mut rng, &SeedShape::default())).collect()
}

const SEEDS: usize = 50;

fn random_options(i: usize) -> SuiteOptions {
    SuiteOptions {
        depth: 8,
        samples: 2,
        rng_seed: 1000 + i as u64,
        characters: true,
        quantum: false,
        limits: Limits { max_terms: Some(3000), max_entry: Some(60) },
        stop_on_growth: true,
    }
}

/// One walk over the random seeds with tropical and character data; shared
/// by criteria 4, 5, 6 and 8.
struct RandomRun {
    report: SuiteReport,
    cokernels: Vec<Cokernel>,
    elapsed: Duration,
}

fn random_run() -> Result<RandomRun, String> {
    let t = Instant::now();
    let mut report = SuiteReport::default();
    let mut cokernels = Vec::new();
    for (i, s) in random_seeds(SEEDS).iter().enumerate() {
        let r = run_suite(s, None, &random_options(i)).map_err(|e| e.to_string())?;
        cokernels.push(smith_cokernel(s.b()));
        report.merge(r);
    }
    Ok(RandomRun { report, cokernels, elapsed: t.elapsed() })
}

fn failures(r: &SuiteReport, keep: impl Fn(&str, &str) -> bool) -> Vec<String> {
    r.failures.iter().filter(|f| keep(f.suite, &f.check)).map(ToString::to_string).collect()
}

fn report_failures(fs: Vec<String>) -> Result<(), String> {
    ensure(fs.is_empty(), || format!("{} failures, first: {}", fs.len(), fs[0]))
}

fn tropical(run: &RandomRun) -> Verdict {
    let r = &run.report;
    report_failures(failures(r, |s, _| s == "tropical" || s == "involution"))?;
    ensure(r.steps >= 200, || format!("only {} path-steps", r.steps))?;
    ensure(run.elapsed < Duration::from_secs(30), || format!("took {:.2?}, limit 30s", run.elapsed))?;
    Ok(format!("{} seeds, {} paths, {} steps ({:.2?})", SEEDS, r.paths, r.steps, run.elapsed))
}

fn separation(run: &RandomRun) -> Verdict {
    let r = &run.report;
    report_failures(failures(r, |s, c| s == "character" && c != "ratio identity"))?;
    ensure(r.character_steps == r.steps, || {
        format!("characters checked at {} of {} steps", r.character_steps, r.steps)
    })?;
    ensure(run.elapsed < Duration::from_secs(60), || format!("took {:.2?}, limit 60s", run.elapsed))?;
    Ok(format!(
        "{} steps, all with characters; {} paths ended early by the size budget ({:.2?})",
        r.character_steps, r.truncated, run.elapsed
    ))
}

fn ratio(run: &RandomRun) -> Verdict {
    let r = &run.report;
    report_failures(failures(r, |s, c| s == "character" && c == "ratio identity"))?;
    ensure(r.character_steps >= 200, || format!("only {} steps with characters", r.character_steps))?;
    Ok(format!("{} steps", r.character_steps))
}

/// Pairs of distinct paths from the root reaching one cluster, read off the
/// exchange graph: every non-tree edge closes a cycle.
fn path_pairs(s: &Seed, q: &QuantumDatum, max_seeds: usize) -> Result<(usize, Vec<String>), String> {
    let g = exchange_graph(s, max_seeds).map_err(|e| e.to_string())?;
    let (mut agreed, mut bad) = (0, Vec::new());
    for e in &g.edges {
        let (from, to) = (&g.nodes[e.from], &g.nodes[e.to]);
        let mut p = from.path.clone();
        p.push(e.direction.clone());
        if p == to.path {
            continue;
        }
        let a = from.state.mutate(&e.direction).map_err(|e| e.to_string())?;
        match transported_agree(&a, &to.state, q) {
            Ok(Some(true)) => agreed += 1,
            other => bad.push(format!("[{}] vs [{}]: {other:?}", p.join(","), to.path.join(","))),
        }
    }
    Ok((agreed, bad))
}

fn quantum() -> Verdict {
    let t = Instant::now();
    let mut report = SuiteReport::default();
    let (mut quantized, mut pairs) = (0, 0);
    for (i, s) in random_seeds(SEEDS).iter().enumerate() {
        let Some(q) = solve_quantization(s) else { continue };
        quantized += 1;
        let opts = SuiteOptions { characters: false, quantum: true, ..random_options(i) };
        report.merge(run_suite(s, Some(&q.particular), &opts).map_err(|e| e.to_string())?);
        let (n, bad) = path_pairs(s, &q.particular, 40)?;
        ensure(bad.is_empty(), || format!("transported Λ disagree: {}", bad[0]))?;
        pairs += n;
    }
    report_failures(failures(&report, |s, _| s == "quantum"))?;
    ensure(quantized > 0, || "no random seed admits a quantum datum".into())?;
    ensure(report.quantum_steps == report.steps, || "some steps were not checked".into())?;
    ensure(pairs >= 10, || format!("only {pairs} path pairs"))?;
    ensure(solve_quantization(&fixtures::markov()).is_none(), || "Markov seed admits a quantum datum".into())?;
    let e = within(Duration::from_secs(30), t)?;
    Ok(format!(
        "{quantized}/{SEEDS} seeds quantizable, {} steps, {pairs} path pairs agree, Markov none ({e:.2?})",
        report.quantum_steps
    ))
}

fn k0(run: &RandomRun) -> Verdict {
    report_failures(failures(&run.report, |s, _| s == "cokernel"))?;
    ensure(run.cokernels.len() == SEEDS, || "missing cokernels".into())?;
    let a2 = smith_cokernel(fixtures::a2().b());
    ensure(a2.is_trivial(), || format!("A2: {a2}"))?;
    // Markov: entries have gcd 2, 2x2 minors have gcd 4, det = 0.
    let want = Cokernel { torsion: vec![2.into(), 2.into()], free_rank: 1 };
    let m = fixtures::markov();
    let opts = SuiteOptions { depth: 12, samples: 20, rng_seed: 8, characters: false, ..Default::default() };
    let r = run_suite(&m, None, &opts).map_err(|e| e.to_string())?;
    report_failures(failures(&r, |s, _| s == "cokernel"))?;
    let got = smith_cokernel(m.b());
    ensure(got == want, || format!("Markov: {got}"))?;
    Ok(format!("constant on {} random paths; A2: {a2}; Markov: {got}", run.report.paths))
}

/// Independent count: clusters as sets of cluster variables.
fn brute_force_clusters(s: &Seed, cap: usize) -> Result<usize, String> {
    let key = |cs: &CharacterState| -> BTreeSet<String> { cs.a_variables().map(|(_, a)| a.render("a")).collect() };
    let root = initial_characters(s).map_err(|e| e.to_string())?;
    let mut seen = BTreeMap::from([(key(&root), ())]);
    let mut queue = VecDeque::from([root]);
    while let Some(cs) = queue.pop_front() {
        for k in cs.current().directions() {
            let next = cs.mutate(&k).map_err(|e| e.to_string())?;
            if seen.insert(key(&next), ()).is_none() {
                ensure(seen.len() <= cap, || "no closure".into())?;
                queue.push_back(next);
            }
        }
    }
    Ok(seen.len())
}

fn cli(args: &[&str]) -> Result<Vec<u8>, String> {
    let o = Command::new(env!("CARGO_BIN_EXE_tropiclust")).args(args).output().map_err(|e| e.to_string())?;
    ensure(o.status.success(), || format!("{args:?} exited with {:?}", o.status.code()))?;
    Ok(o.stdout)
}

fn graph() -> Verdict {
    let t = Instant::now();
    for (name, s) in [("a2", fixtures::a2()), ("a2f", fixtures::a2f())] {
        let g = exchange_graph(&s, 100).map_err(|e| e.to_string())?;
        ensure(g.closed && g.nodes.len() == 5, || format!("{name}: {}", g.summary()))?;
        let oracle = brute_force_clusters(&s, 100)?;
        ensure(oracle == 5, || format!("{name}: brute force found {oracle} clusters"))?;
        let again = exchange_graph(&s, 100).map_err(|e| e.to_string())?;
        ensure(g.to_dot() == again.to_dot() && g.to_json() == again.to_json(), || format!("{name}: output differs"))?;
        for fmt in ["--dot", "--json"] {
            let a = cli(&["graph", "--fixture", name, fmt])?;
            let b = cli(&["graph", "--fixture", name, fmt])?;
            ensure(a == b, || format!("{name} {fmt}: CLI output differs between runs"))?;
        }
    }
    let e = within(Duration::from_secs(5), t)?;
    Ok(format!("A2 and A2F: 5 seeds, matching brute force; DOT/JSON byte-identical ({e:.2?})"))
}

fn guarded(f: impl FnOnce() -> Verdict) -> Verdict {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(v) => v,
        Err(p) => Err(p
            .downcast_ref::<String>()
            .cloned()
            .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
            .unwrap_or_else(|| "panicked".into())),
    }
}

fn main() -> ExitCode {
    let run = catch_unwind(random_run).unwrap_or_else(|_| Err("panicked".into()));
    let shared = |f: fn(&RandomRun) -> Verdict| -> Verdict {
        match &run {
            Ok(r) => guarded(|| f(r)),
            Err(e) => Err(format!("random suite did not run: {e}")),
        }
    };
    let results: Vec<(&str, Verdict)> = vec![
        ("CNS generalized mutation", guarded(cns)),
        ("Markov G-sum and B' = -B", guarded(markov)),
        ("A2 pentagon", guarded(pentagon)),
        ("tropical identity suite", shared(tropical)),
        ("separation suite", shared(separation)),
        ("ratio identity", shared(ratio)),
        ("quantum suite", guarded(quantum)),
        ("K0 invariance", shared(k0)),
        ("exchange-graph closure", guarded(graph)),
    ];
    let mut ok = true;
    for (i, (name, v)) in results.iter().enumerate() {
        match v {
            Ok(msg) => println!("PASS {} {name}: {msg}", i + 1),
            Err(msg) => {
                ok = false;
                println!("FAIL {} {name}: {msg}", i + 1);
            }
        }
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
