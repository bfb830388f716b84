//! The ten acceptance criteria, each run under both interpretations at the
//! default depth. One line per criterion is written straight to stderr so
//! it shows up even when test output is captured.

use std::io::Write;
use std::time::Instant;

use gtt_core::decomplexify::simp_comp;
use gtt_core::dyninterp::InterpKind;
use gtt_core::elaborate::elab_term;
use gtt_core::harness::corpus::{default_corpus_dir, load_corpus, CorpusProgram};
use gtt_core::harness::gen::{differential, differential_on, progress};
use gtt_core::harness::graduality::pairs;
use gtt_core::harness::{run_law_suite, Harness, Report, Subject, TypeUniverse, DEFAULT_DEPTH};
use gtt_core::machine::eval;
use gtt_core::syntax::{pretty, tm, ty};
use gtt_core::typecheck::check_program;

type Verdict = Result<String, String>;
type Criterion = (&'static str, fn(&Harness) -> Verdict);

fn report(msg: &str) {
    let _ = writeln!(std::io::stderr(), "{msg}");
}

fn corpus() -> Vec<CorpusProgram> {
    load_corpus(&default_corpus_dir()).expect("corpus loads")
}

/// Rows of the law suite whose name starts with one of `prefixes`.
fn laws(h: &Harness, prefixes: &[&str]) -> Vec<Report> {
    prefixes.iter().map(|p| run_law_suite(h, Some(p))).collect()
}

fn summarize(reports: &[Report], min_rows: usize) -> Verdict {
    let rows: usize = reports.iter().map(|r| r.results.len()).sum();
    let instances: usize = reports.iter().flat_map(|r| &r.results).map(|r| r.instances).sum();
    let bad: Vec<String> = reports
        .iter()
        .flat_map(|r| r.failures())
        .map(|r| {
            let f = &r.failures[0];
            format!("{} at {}: observer {} gave {} vs {}", r.law, r.ty, f.observer, f.lhs_result, f.rhs_result)
        })
        .collect();
    if !bad.is_empty() {
        return Err(format!("{} failing rows; first: {}", bad.len(), bad[0]));
    }
    if rows < min_rows {
        return Err(format!("only {rows} rows, wanted {min_rows}"));
    }
    if instances == 0 {
        return Err("no instances checked".into());
    }
    Ok(format!("{rows} rows, {instances} instances"))
}

fn consistency(h: &Harness) -> Verdict {
    let start = Instant::now();
    let b = ty::program();
    let out = h.check_obs_leq(&Subject::comp(tm::ret(tm::tt()), b.clone()), &Subject::comp(tm::ret(tm::ff()), b));
    let secs = start.elapsed().as_secs_f64();
    match out.failures.iter().find(|f| f.observer == "hole") {
        Some(f) if secs < 1.0 => Ok(format!("refuted by hole ({} vs {}) in {secs:.3}s", f.lhs_result, f.rhs_result)),
        Some(_) => Err(format!("took {secs:.3}s")),
        None => Err(format!("no counterexample at the empty stack: {:?}", out.failures)),
    }
}

fn identity(h: &Harness) -> Verdict {
    let u = TypeUniverse::new(h.depth);
    summarize(&laws(h, &["identity"]), u.values.len() + u.comps.len())
}

fn decomposition(h: &Harness) -> Verdict {
    summarize(&laws(h, &["decomposition"]), 1)
}

fn ep_pairs(h: &Harness) -> Verdict {
    let u = TypeUniverse::new(h.depth);
    let n = u.strict_pairs().len();
    summarize(&laws(h, &["ep-retraction", "ep-projection", "retract-axiom"]), 2 * n + 1)
}

fn beta_eta(h: &Harness) -> Verdict {
    summarize(&laws(h, &["beta-", "eta-"]), 1)
}

fn error_axioms(h: &Harness) -> Verdict {
    summarize(&laws(h, &["err-bot", "stk-strict"]), 1)
}

fn graduality(h: &Harness) -> Verdict {
    let want = pairs().len().max(20);
    summarize(&laws(h, &["graduality"]), want)
}

fn decomplexification(h: &Harness) -> Verdict {
    let programs = corpus();
    let terms: Vec<_> = programs.iter().map(|p| p.term.clone()).collect();
    let mut out = differential_on(h, &terms);
    out.absorb(differential(h, 1_000, 500));
    if let Some(f) = out.failures.first() {
        return Err(format!(
            "{} disagreements; first: {} gave {} vs {}",
            out.failures.len(),
            f.observer,
            f.lhs_result,
            f.rhs_result
        ));
    }
    if out.instances != programs.len() + 500 {
        return Err(format!("ran {} programs", out.instances));
    }
    Ok(format!("{} corpus + 500 random programs agree", programs.len()))
}

fn thunkable_linear(h: &Harness) -> Verdict {
    let reports = laws(h, &["thunkability", "linearity"]);
    for r in &reports {
        let law = r.results.first().map(|r| r.law.as_str()).unwrap_or("?");
        if r.results.len() < h.caps.samples {
            return Err(format!("{law}: only {} samples", r.results.len()));
        }
        if let Some(empty) = r.results.iter().find(|r| r.instances == 0) {
            return Err(format!("{law}: sample {} was never observed", empty.ty));
        }
    }
    summarize(&reports, 2 * h.caps.samples)
}

fn run_once(h: &Harness, p: &CorpusProgram) -> Result<(String, String), String> {
    let t = check_program(&p.term).map_err(|e| format!("{}: {e}", p.name))?;
    let op = simp_comp(&elab_term(&t, h.interp));
    let ev = eval(&op, h.fuel).map_err(|e| format!("{}: {e}", p.name))?;
    Ok((pretty(&op), format!("{} {} {}", ev.result, ev.steps, ev.cost)))
}

fn determinism(h: &Harness) -> Verdict {
    let programs = corpus();
    for p in &programs {
        let first = run_once(h, p)?;
        let second = run_once(h, p)?;
        if first != second {
            return Err(format!("{}: {} then {}", p.name, first.1, second.1));
        }
        let got = first.1.split(' ').next().unwrap().to_string();
        match p.expected(h.interp.kind) {
            Some(want) if want.to_string() == got => {}
            want => return Err(format!("{}: expected {want:?}, got {got}", p.name)),
        }
    }
    let n = 10_000;
    let stuck = progress(h, 50_000, n);
    if let Some(s) = stuck.first() {
        return Err(format!("{} stuck states; first: {s}", stuck.len()));
    }
    Ok(format!("{} corpus programs stable, {n} random programs never stuck", programs.len()))
}

const CRITERIA: &[Criterion] = &[
    ("consistency", consistency),
    ("identity expansion", identity),
    ("cast decomposition", decomposition),
    ("ep pairs and retract axiom", ep_pairs),
    ("beta and eta", beta_eta),
    ("error axioms", error_axioms),
    ("graduality corpus", graduality),
    ("de-complexification preserves results", decomplexification),
    ("thunkability and linearity", thunkable_linear),
    ("determinism and progress", determinism),
];

#[test]
fn acceptance() {
    let harnesses: Vec<Harness> = InterpKind::ALL.iter().map(|k| Harness::new(*k, DEFAULT_DEPTH)).collect();
    let mut failed = Vec::new();
    for (n, (name, check)) in CRITERIA.iter().enumerate() {
        let start = Instant::now();
        let verdicts: Vec<(InterpKind, Verdict)> = harnesses.iter().map(|h| (h.interp.kind, check(h))).collect();
        let ok = verdicts.iter().all(|(_, v)| v.is_ok());
        let detail: Vec<String> = verdicts
            .iter()
            .map(|(k, v)| match v {
                Ok(m) => format!("{k}: {m}"),
                Err(m) => format!("{k}: FAILED {m}"),
            })
            .collect();
        let tag = if ok { "PASS" } else { "FAIL" };
        report(&format!(
            "[{tag}] {:>2}. {name} ({:.1}s) | {}",
            n + 1,
            start.elapsed().as_secs_f64(),
            detail.join(" | ")
        ));
        if !ok {
            failed.push(*name);
        }
    }
    assert!(failed.is_empty(), "failing criteria: {failed:?}");
}
