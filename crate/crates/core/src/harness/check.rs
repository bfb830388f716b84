//! Observational comparison of two core terms.
//!
//! Each side is de-complexified once, closed by every enumerated
//! substitution for its free variables, plugged into every observer of its
//! type, and run. A stoup becomes one more free variable holding a thunk.

use serde::Serialize;

use crate::decomplexify::{simp_comp, simp_stack, simp_value};
use crate::machine::{eval, result_leq, RunResult};
use crate::syntax::{cty_eq, plug_stack_closed, subst_value_closed, ty, vty_eq, CTy, Name, Tm, Type, VTy};
use crate::typecheck::{check_comp, check_value, TypeEnv};

use super::{thin, Harness};

/// A core term together with its typing: free value variables, an optional
/// stoup, and the type of the term itself.
#[derive(Clone, Debug)]
pub struct Subject {
    pub term: Tm,
    pub env: Vec<(Name, VTy)>,
    pub stoup: Option<CTy>,
    pub ty: Type,
}

impl Subject {
    pub fn value(v: Tm, a: VTy) -> Subject {
        Subject { term: v, env: vec![], stoup: None, ty: Type::Val(a) }
    }

    pub fn comp(m: Tm, b: CTy) -> Subject {
        Subject { term: m, env: vec![], stoup: None, ty: Type::Comp(b) }
    }

    pub fn with_var(mut self, x: impl Into<Name>, a: VTy) -> Subject {
        self.env.push((x.into(), a));
        self
    }

    pub fn with_stoup(mut self, b: CTy) -> Subject {
        self.stoup = Some(b);
        self
    }

    fn type_env(&self) -> TypeEnv {
        let mut env = TypeEnv::new();
        for (x, a) in &self.env {
            env = env.with_var(x.clone(), a.clone());
        }
        if let Some(b) = &self.stoup {
            env = env.with_stoup(b.clone());
        }
        env
    }

    /// Typecheck, then translate to an operational computation whose free
    /// variables are the returned parameters.
    fn prepare(&self) -> Result<Prepared, String> {
        let env = self.type_env();
        let mut params = self.env.clone();
        let (body, observed) = match &self.ty {
            Type::Val(a) => {
                if self.stoup.is_some() {
                    return Err("a value cannot use the stoup".into());
                }
                let v = check_value(&env, &self.term, a).map_err(|e| e.to_string())?;
                (simp_value(&v), ty::ret(a.clone()))
            }
            Type::Comp(b) => {
                let m = check_comp(&env, &self.term, b).map_err(|e| e.to_string())?;
                match &self.stoup {
                    None => (simp_comp(&m), b.clone()),
                    Some(s) => {
                        let (body, z) = simp_stack(&m);
                        params.push((z, ty::thunk(s.clone())));
                        (body, b.clone())
                    }
                }
            }
        };
        Ok(Prepared { body, params, observed })
    }
}

struct Prepared {
    body: Tm,
    params: Vec<(Name, VTy)>,
    observed: CTy,
}

/// One refuting observation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Failure {
    pub observer: String,
    pub lhs_result: String,
    pub rhs_result: String,
}

/// Outcome of one comparison: how many observations ran and which refuted.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Outcome {
    pub instances: usize,
    pub failures: Vec<Failure>,
}

impl Outcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn absorb(&mut self, other: Outcome) {
        self.instances += other.instances;
        for f in other.failures {
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(f);
            }
        }
    }

    fn broken(why: String) -> Outcome {
        Outcome {
            instances: 0,
            failures: vec![Failure { observer: "<setup>".into(), lhs_result: why, rhs_result: String::new() }],
        }
    }
}

/// Failures kept per comparison; checking stops once this many are found.
pub const MAX_FAILURES: usize = 3;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Relation {
    Equal,
    /// Left error-approximates right.
    Below,
}

fn run(h: &Harness, p: &Tm) -> Result<RunResult, String> {
    eval(p, h.fuel).map(|e| e.result).map_err(|e| e.to_string())
}

fn show(r: &Result<RunResult, String>) -> String {
    match r {
        Ok(r) => r.to_string(),
        Err(e) => e.clone(),
    }
}

fn holds(rel: Relation, a: &Result<RunResult, String>, b: &Result<RunResult, String>) -> bool {
    match (a, b) {
        (Ok(a), Ok(b)) => match rel {
            Relation::Equal => a == b,
            Relation::Below => result_leq(*a, *b),
        },
        _ => false,
    }
}

impl Harness {
    /// Closing substitutions for a parameter list, thinned to the closing cap.
    fn closings(&self, params: &[(Name, VTy)]) -> Vec<Vec<Tm>> {
        let mut out: Vec<Vec<Tm>> = vec![vec![]];
        for (_, a) in params {
            let vs = self.values(a, self.depth);
            let mut next = Vec::with_capacity(out.len() * vs.len());
            for prefix in &out {
                for v in vs.iter() {
                    let mut row = prefix.clone();
                    row.push(v.clone());
                    next.push(row);
                }
            }
            out = thin(next, self.caps.closings);
        }
        out
    }

    pub fn compare(&self, lhs: &Subject, rhs: &Subject, rel: Relation) -> Outcome {
        let (l, r) = match (lhs.prepare(), rhs.prepare()) {
            (Ok(l), Ok(r)) => (l, r),
            (Err(e), _) => return Outcome::broken(format!("left side: {e}")),
            (_, Err(e)) => return Outcome::broken(format!("right side: {e}")),
        };
        let same_params =
            l.params.len() == r.params.len() && l.params.iter().zip(&r.params).all(|((_, a), (_, b))| vty_eq(a, b));
        if !same_params || !cty_eq(&l.observed, &r.observed) {
            return Outcome::broken("the two sides have different types".into());
        }
        let observers = self.observers(&l.observed, self.depth);
        let mut out = Outcome::default();
        for row in self.closings(&l.params) {
            let close = |p: &Prepared| {
                p.params.iter().zip(&row).fold(p.body.clone(), |t, ((x, _), v)| subst_value_closed(&t, x, v))
            };
            let (lc, rc) = (close(&l), close(&r));
            for s in observers.iter() {
                out.instances += 1;
                let a = run(self, &plug_stack_closed(s, &lc));
                let b = run(self, &plug_stack_closed(s, &rc));
                if !holds(rel, &a, &b) {
                    let mut observer = s.to_string();
                    if !row.is_empty() {
                        let binds: Vec<String> =
                            l.params.iter().zip(&row).map(|((x, _), v)| format!("{x} := {v}")).collect();
                        observer = format!("{observer} with {}", binds.join(", "));
                    }
                    out.failures.push(Failure { observer, lhs_result: show(&a), rhs_result: show(&b) });
                    if out.failures.len() >= MAX_FAILURES {
                        return out;
                    }
                }
            }
        }
        out
    }

    /// Equal results under every generated observer and closing.
    pub fn check_obs_eq(&self, lhs: &Subject, rhs: &Subject) -> Outcome {
        self.compare(lhs, rhs, Relation::Equal)
    }

    /// Left error-approximates right under every observer and closing.
    pub fn check_obs_leq(&self, lhs: &Subject, rhs: &Subject) -> Outcome {
        self.compare(lhs, rhs, Relation::Below)
    }
}
