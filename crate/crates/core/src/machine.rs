//! Deterministic small-step machine for whole programs of type `F (1 + 1)`.
//!
//! The evaluation context is an explicit frame stack. Only unrolling a
//! recursive value or computation costs 1; every other step is free.
//! An optional star mode also evaluates complex values on demand, which
//! lets the machine run core terms without de-complexifying them first.

use std::fmt;

use thiserror::Error;

use crate::syntax::{subst_value_closed, tm, ty, Name, Term, Tm};
use crate::typecheck::check_program;

pub const DEFAULT_FUEL: u64 = 100_000;

/// Observable outcome of a whole program.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum RunResult {
    /// Fuel ran out; stands in for divergence.
    Timeout,
    Error,
    True,
    False,
}

impl fmt::Display for RunResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RunResult::Timeout => "timeout",
            RunResult::Error => "error",
            RunResult::True => "true",
            RunResult::False => "false",
        })
    }
}

/// Error approximation: the error is below everything, other results are
/// only below themselves.
pub fn result_leq(a: RunResult, b: RunResult) -> bool {
    a == RunResult::Error || a == b
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepOutcome {
    Stepped(Tm, u8),
    Terminal(RunResult),
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("stuck: {reason} at {focus}")]
pub struct Stuck {
    pub reason: &'static str,
    pub focus: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Evaluation {
    pub result: RunResult,
    pub steps: u64,
    pub cost: u64,
}

#[derive(Clone, Copy, Debug)]
pub struct Config {
    pub fuel: u64,
    /// Evaluate complex values instead of rejecting them.
    pub star: bool,
    /// Typecheck the whole program after every step.
    pub check_types: bool,
}

impl Default for Config {
    fn default() -> Self {
        Config { fuel: DEFAULT_FUEL, star: false, check_types: false }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Frame {
    Bind(Name, Tm),
    Arg(Tm),
    Fst,
    Snd,
    Unroll,
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct State {
    focus: Tm,
    frames: Vec<Frame>,
}

enum Advance {
    Step(u8),
    Done(RunResult),
}

fn stuck<T>(reason: &'static str, t: &Term) -> Result<T, Stuck> {
    let mut s = t.to_string();
    if s.len() > 200 {
        s.truncate(200);
        s.push_str("...");
    }
    Err(Stuck { reason, focus: s })
}

/// Reduce a complex value to an introduction form (star mode).
fn eval_value(v: &Tm) -> Result<Tm, Stuck> {
    use std::sync::Arc;
    Ok(match &**v {
        Term::UnitV | Term::Thunk(_) => v.clone(),
        Term::Inl(a, w) => Arc::new(Term::Inl(a.clone(), eval_value(w)?)),
        Term::Inr(a, w) => Arc::new(Term::Inr(a.clone(), eval_value(w)?)),
        Term::PairV(a, b) => Arc::new(Term::PairV(eval_value(a)?, eval_value(b)?)),
        Term::RollMu(a, w) => Arc::new(Term::RollMu(a.clone(), eval_value(w)?)),
        Term::Case(..) | Term::Split(..) | Term::UnitSplit(..) | Term::UnrollMu(..) => {
            let (next, _) = match_step(v, true)?;
            eval_value(&next)?
        }
        _ => return stuck("value is not closed and canonical", v),
    })
}

fn is_canonical(v: &Term) -> bool {
    match v {
        Term::UnitV | Term::Thunk(_) => true,
        Term::Inl(_, w) | Term::Inr(_, w) | Term::RollMu(_, w) => is_canonical(w),
        Term::PairV(a, b) => is_canonical(a) && is_canonical(b),
        _ => false,
    }
}

fn value(v: &Tm, star: bool) -> Result<Tm, Stuck> {
    if star && !is_canonical(v) {
        eval_value(v)
    } else {
        Ok(v.clone())
    }
}

/// Fire a pattern-matching redex; returns the continuation and its cost.
fn match_step(t: &Tm, star: bool) -> Result<(Tm, u8), Stuck> {
    match &**t {
        Term::Case(s, x, l, y, r) => match &*value(s, star)? {
            Term::Inl(_, w) => Ok((subst_value_closed(l, x, w), 0)),
            Term::Inr(_, w) => Ok((subst_value_closed(r, y, w), 0)),
            _ => stuck("case on a non-injection", t),
        },
        Term::Split(s, x, y, e) => match &*value(s, star)? {
            Term::PairV(a, b) => {
                let e = subst_value_closed(e, x, a);
                Ok((subst_value_closed(&e, y, b), 0))
            }
            _ => stuck("split on a non-pair", t),
        },
        Term::UnitSplit(s, e) => match &*value(s, star)? {
            Term::UnitV => Ok((e.clone(), 0)),
            _ => stuck("unit split on a non-unit", t),
        },
        Term::UnrollMu(s, x, e) => match &*value(s, star)? {
            Term::RollMu(_, w) => Ok((subst_value_closed(e, x, w), 1)),
            _ => stuck("pmroll on a non-roll", t),
        },
        _ => stuck("not a pattern match", t),
    }
}

impl State {
    fn new(m: &Tm) -> State {
        State { focus: m.clone(), frames: Vec::new() }
    }

    fn to_term(&self) -> Tm {
        let mut t = self.focus.clone();
        for f in self.frames.iter().rev() {
            t = match f {
                Frame::Bind(x, n) => std::sync::Arc::new(Term::Bind(t, x.clone(), n.clone())),
                Frame::Arg(v) => std::sync::Arc::new(Term::App(t, v.clone())),
                Frame::Fst => std::sync::Arc::new(Term::Fst(t)),
                Frame::Snd => std::sync::Arc::new(Term::Snd(t)),
                Frame::Unroll => std::sync::Arc::new(Term::UnrollNu(t)),
            };
        }
        t
    }

    /// Decompose down to the next redex and contract it.
    fn advance(&mut self, star: bool) -> Result<Advance, Stuck> {
        loop {
            let focus = self.focus.clone();
            match &*focus {
                Term::Bind(m, x, n) => {
                    self.frames.push(Frame::Bind(x.clone(), n.clone()));
                    self.focus = m.clone();
                }
                Term::App(m, v) => {
                    self.frames.push(Frame::Arg(value(v, star)?));
                    self.focus = m.clone();
                }
                Term::Fst(m) => {
                    self.frames.push(Frame::Fst);
                    self.focus = m.clone();
                }
                Term::Snd(m) => {
                    self.frames.push(Frame::Snd);
                    self.focus = m.clone();
                }
                Term::UnrollNu(m) => {
                    self.frames.push(Frame::Unroll);
                    self.focus = m.clone();
                }
                Term::Err(_) => {
                    if self.frames.is_empty() {
                        return Ok(Advance::Done(RunResult::Error));
                    }
                    // The error now stands for the whole program.
                    self.frames.clear();
                    self.focus = tm::err(ty::program());
                    return Ok(Advance::Step(0));
                }
                Term::Force(v) => {
                    let v = value(v, star)?;
                    return match &*v {
                        Term::Thunk(m) => {
                            self.focus = m.clone();
                            Ok(Advance::Step(0))
                        }
                        _ => stuck("force of a non-thunk", &focus),
                    };
                }
                Term::RetV(v) => {
                    let v = value(v, star)?;
                    return match self.frames.pop() {
                        Some(Frame::Bind(x, n)) => {
                            self.focus = subst_value_closed(&n, &x, &v);
                            Ok(Advance::Step(0))
                        }
                        None => match &*v {
                            Term::Inl(_, u) if matches!(**u, Term::UnitV) => Ok(Advance::Done(RunResult::True)),
                            Term::Inr(_, u) if matches!(**u, Term::UnitV) => Ok(Advance::Done(RunResult::False)),
                            _ => stuck("program returned a non-boolean", &focus),
                        },
                        Some(_) => stuck("ret under a non-bind frame", &focus),
                    };
                }
                Term::Lam(x, _, m) => {
                    return match self.frames.pop() {
                        Some(Frame::Arg(v)) => {
                            self.focus = subst_value_closed(m, x, &v);
                            Ok(Advance::Step(0))
                        }
                        _ => stuck("function without an argument", &focus),
                    };
                }
                Term::WithPair(a, b) => {
                    return match self.frames.pop() {
                        Some(Frame::Fst) => {
                            self.focus = a.clone();
                            Ok(Advance::Step(0))
                        }
                        Some(Frame::Snd) => {
                            self.focus = b.clone();
                            Ok(Advance::Step(0))
                        }
                        _ => stuck("lazy pair without a projection", &focus),
                    };
                }
                Term::RollNu(_, m) => {
                    return match self.frames.pop() {
                        Some(Frame::Unroll) => {
                            self.focus = m.clone();
                            Ok(Advance::Step(1))
                        }
                        _ => stuck("rollnu without an unroll", &focus),
                    };
                }
                Term::Case(..) | Term::Split(..) | Term::UnitSplit(..) | Term::UnrollMu(..) => {
                    let (next, cost) = match_step(&focus, star)?;
                    self.focus = next;
                    return Ok(Advance::Step(cost));
                }
                _ => return stuck("no reduction applies", &focus),
            }
        }
    }
}

/// One step of the operational machine on a closed program.
pub fn step(m: &Tm) -> Result<StepOutcome, Stuck> {
    let mut s = State::new(m);
    match s.advance(false)? {
        Advance::Done(r) => Ok(StepOutcome::Terminal(r)),
        Advance::Step(c) => Ok(StepOutcome::Stepped(s.to_term(), c)),
    }
}

/// Run an operational program with the given fuel.
pub fn eval(m: &Tm, fuel: u64) -> Result<Evaluation, Stuck> {
    eval_with(m, Config { fuel, ..Config::default() })
}

/// Run a core program, evaluating complex values directly.
pub fn eval_star(m: &Tm, fuel: u64) -> Result<Evaluation, Stuck> {
    eval_with(m, Config { fuel, star: true, ..Config::default() })
}

pub fn eval_with(m: &Tm, cfg: Config) -> Result<Evaluation, Stuck> {
    let mut state = State::new(m);
    let (mut steps, mut cost) = (0u64, 0u64);
    // Brent cycle detection on machine states. A repeated state means the
    // program loops forever, so whole cycles can be skipped.
    let mut tortoise = state.clone();
    let mut tortoise_cost = 0u64;
    let (mut power, mut lam) = (1u64, 0u64);
    let mut detecting = true;
    while steps < cfg.fuel {
        let adv = state.advance(cfg.star)?;
        steps += 1;
        match adv {
            Advance::Done(result) => return Ok(Evaluation { result, steps, cost }),
            Advance::Step(c) => cost += c as u64,
        }
        if cfg.check_types {
            if let Err(e) = check_program(&state.to_term()) {
                panic!("subject reduction violated after step {steps}: {e}");
            }
        }
        if detecting {
            lam += 1;
            if state.frames.len() == tortoise.frames.len() && state == tortoise {
                let cycle_cost = cost - tortoise_cost;
                let laps = (cfg.fuel - steps) / lam;
                steps += laps * lam;
                cost += laps * cycle_cost;
                detecting = false;
            } else if lam == power {
                tortoise = state.clone();
                tortoise_cost = cost;
                power *= 2;
                lam = 0;
            }
        }
    }
    Ok(Evaluation { result: RunResult::Timeout, steps: cfg.fuel, cost })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, tm, ty};

    fn p(s: &str) -> Tm {
        parse_term(s).unwrap().term
    }

    #[test]
    fn bind_of_ret_steps() {
        let m = tm::bind(tm::ret(tm::tt()), "x", tm::ret(tm::var("x")));
        assert_eq!(step(&m).unwrap(), StepOutcome::Stepped(tm::ret(tm::tt()), 0));
    }

    #[test]
    fn error_under_frames_keeps_the_program_type() {
        let inner = ty::ret(ty::unit());
        let m = tm::bind(tm::err(inner), "x", tm::ret(tm::tt()));
        assert_eq!(step(&m).unwrap(), StepOutcome::Stepped(tm::err(ty::program()), 0));
    }

    #[test]
    fn error_is_terminal() {
        assert_eq!(step(&tm::err(ty::program())).unwrap(), StepOutcome::Terminal(RunResult::Error));
        let m = tm::bind(tm::err(ty::program()), "x", tm::ret(tm::var("x")));
        let e = eval(&m, 10).unwrap();
        assert_eq!(e.result, RunResult::Error);
        assert!(e.steps <= 2);
        assert_eq!(e.cost, 0);
    }

    #[test]
    fn unroll_of_roll_costs_one() {
        let b = ty::nu("Y", ty::program());
        let m = tm::unrollnu(tm::rollnu(b, tm::ret(tm::tt())));
        assert_eq!(step(&m).unwrap(), StepOutcome::Stepped(tm::ret(tm::tt()), 1));
    }

    #[test]
    fn ret_true_takes_one_step() {
        let e = eval(&tm::ret(tm::tt()), 10).unwrap();
        assert_eq!(e, Evaluation { result: RunResult::True, steps: 1, cost: 0 });
    }

    fn loop_program() -> Tm {
        // A = mu X. U (X -> F (1 + 1)); f = thunk (lam x. pmroll x (y) ((force y) x)).
        let a = "(mu X (U (-> X (F (+ 1 1)))))";
        let f = format!("(thunk (lam (x {a}) (pmroll x (y) (app (force y) x))))");
        p(&format!("(app (force {f}) (rollmu {a} {f}))"))
    }

    #[test]
    fn loop_times_out_with_unroll_cost() {
        let m = loop_program();
        check_program(&m).unwrap();
        let e = eval(&m, 1000).unwrap();
        assert_eq!(e.result, RunResult::Timeout);
        assert_eq!(e.steps, 1000);
        // Three steps per iteration: force, beta, pmroll.
        assert_eq!(e.cost, 333);
    }

    #[test]
    fn cycle_skipping_is_exact() {
        let m = loop_program();
        for fuel in [1, 2, 3, 4, 5, 17, 100, 1001, 100_000] {
            let fast = eval(&m, fuel).unwrap();
            // Reference run without cycle detection.
            let mut s = State::new(&m);
            let (mut steps, mut cost) = (0, 0);
            let mut result = RunResult::Timeout;
            while steps < fuel {
                steps += 1;
                match s.advance(false).unwrap() {
                    Advance::Step(c) => cost += c as u64,
                    Advance::Done(r) => {
                        result = r;
                        break;
                    }
                }
            }
            assert_eq!(fast, Evaluation { result, steps, cost }, "fuel {fuel}");
        }
    }

    #[test]
    fn result_ordering() {
        use RunResult::*;
        assert!(result_leq(Error, True));
        assert!(!result_leq(True, False));
        assert!(result_leq(Error, Error));
        assert!(result_leq(Timeout, Timeout));
        assert!(!result_leq(Timeout, Error));
        assert!(!result_leq(True, Timeout));
    }

    #[test]
    fn star_mode_evaluates_complex_values() {
        let m = p("(ret (case (inl (+ 1 1) unit) (inl a (inr (+ 1 1) a)) (inr b (inl (+ 1 1) b))))");
        assert!(eval(&m, 10).is_err());
        assert_eq!(eval_star(&m, 10).unwrap().result, RunResult::False);
    }

    #[test]
    fn stuck_is_reported() {
        assert!(eval(&tm::force(tm::var("f")), 10).is_err());
    }

    #[test]
    fn subject_reduction_checked() {
        let m = p("(bind x (ret (inl (+ 1 1) unit)) (case x (inl a (ret (inr (+ 1 1) a))) (inr b (err (F (+ 1 1))))))");
        let e = eval_with(&m, Config { check_types: true, ..Config::default() }).unwrap();
        assert_eq!(e.result, RunResult::False);
    }
}
