//! Random well-typed gradual programs of type `F (1 + 1)`, and the
//! whole-program checks that run them.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::decomplexify::simp_comp;
use crate::dynamism::{derive_c, derive_v};
use crate::elaborate::elab_term;
use crate::machine::{eval, eval_star, Evaluation, Stuck};
use crate::syntax::{parse_ctype, parse_vtype, tm, ty, CTy, ComputationType, Name, Tm, VTy, ValueType};
use crate::typecheck::check_program;

use super::{Failure, Harness, Outcome};

const VALUE_POOL: &[&str] = &[
    "1",
    "(+ 1 1)",
    "?",
    "(* ? ?)",
    "(+ ? ?)",
    "(* (+ 1 1) 1)",
    "(U (F (+ 1 1)))",
    "(U (F ?))",
    "(U dyncomp)",
    "(U (-> ? (F ?)))",
    "(U (-> (+ 1 1) (F (+ 1 1))))",
];

const COMP_POOL: &[&str] = &[
    "(F (+ 1 1))",
    "(F ?)",
    "(F 1)",
    "(-> (+ 1 1) (F (+ 1 1)))",
    "(-> ? (F ?))",
    "(-> ? dyncomp)",
    "dyncomp",
    "(& (F (+ 1 1)) (F ?))",
];

/// Random generator of gradual programs with explicit casts.
pub struct ProgramGen {
    rng: ChaCha8Rng,
    values: Vec<VTy>,
    comps: Vec<CTy>,
    next: usize,
}

impl ProgramGen {
    pub fn new(seed: u64) -> ProgramGen {
        ProgramGen {
            rng: ChaCha8Rng::seed_from_u64(seed),
            values: VALUE_POOL.iter().map(|s| parse_vtype(s).unwrap()).collect(),
            comps: COMP_POOL.iter().map(|s| parse_ctype(s).unwrap()).collect(),
            next: 0,
        }
    }

    fn name(&mut self) -> Name {
        self.next += 1;
        Name::from(format!("v{}", self.next).as_str())
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn pick_value_type(&mut self) -> VTy {
        self.values.choose(&mut self.rng).unwrap().clone()
    }

    /// A program of type `F (1 + 1)` of roughly the given size.
    pub fn program(&mut self, size: usize) -> Tm {
        if self.chance(0.5) {
            let d = ty::ret(ty::dyn_());
            let m = self.comp(&d, &[], size);
            return tm::dn(ty::program(), d, m);
        }
        self.comp(&ty::program(), &[], size)
    }

    pub fn value(&mut self, a: &VTy, env: &[(Name, VTy)], size: usize) -> Tm {
        let vars: Vec<&Name> = env.iter().filter(|(_, b)| b == a).map(|(x, _)| x).collect();
        if !vars.is_empty() && self.chance(if size == 0 { 0.8 } else { 0.3 }) {
            return tm::var((*vars.choose(&mut self.rng).unwrap()).clone());
        }
        if size > 0 && self.chance(0.4) {
            let smaller: Vec<VTy> =
                self.values.iter().filter(|b| *b != a && derive_v(b, a).is_some()).cloned().collect();
            if let Some(b) = smaller.choose(&mut self.rng).cloned() {
                let v = self.value(&b, env, size - 1);
                return tm::up(b, a.clone(), v);
            }
        }
        if size > 1 && self.chance(0.1) {
            let s = self.value(&ty::bool_(), env, 0);
            let (x, y) = (self.name(), self.name());
            let l = self.value(a, env, size / 2);
            let r = self.value(a, env, size / 2);
            return tm::case(s, x, l, y, r);
        }
        let n = size.saturating_sub(1);
        match &**a {
            ValueType::Unit => tm::unit(),
            ValueType::Sum(l, r) => {
                if self.chance(0.5) {
                    tm::inl(a.clone(), self.value(l, env, n))
                } else {
                    tm::inr(a.clone(), self.value(r, env, n))
                }
            }
            ValueType::Prod(l, r) => {
                let x = self.value(l, env, n / 2);
                let y = self.value(r, env, n / 2);
                tm::pair(x, y)
            }
            ValueType::Thunk(b) => tm::thunk(self.comp(b, env, n)),
            ValueType::Dyn => {
                let grounds: Vec<VTy> = self.values.iter().filter(|b| ***b != ValueType::Dyn).cloned().collect();
                let b = if size == 0 { ty::unit() } else { grounds.choose(&mut self.rng).unwrap().clone() };
                let v = self.value(&b, env, n);
                tm::up(b, a.clone(), v)
            }
            ValueType::Zero | ValueType::Mu(..) | ValueType::Var(_) => {
                panic!("no generator for {a}")
            }
        }
    }

    pub fn comp(&mut self, b: &CTy, env: &[(Name, VTy)], size: usize) -> Tm {
        if size > 0 {
            let n = size - 1;
            let roll = self.rng.gen_range(0..100);
            match roll {
                0..=3 => return tm::err(b.clone()),
                4..=17 => {
                    let a = self.pick_value_type();
                    let m = self.comp(&ty::ret(a.clone()), env, n / 2);
                    let x = self.name();
                    let mut env2 = env.to_vec();
                    env2.push((x.clone(), a));
                    let k = self.comp(b, &env2, n / 2);
                    return tm::bind(m, x, k);
                }
                18..=25 => {
                    let s = self.sum_scrutinee(env);
                    let (x, y) = (self.name(), self.name());
                    let (l, r) = match &*s.1 {
                        ValueType::Sum(l, r) => (l.clone(), r.clone()),
                        _ => unreachable!(),
                    };
                    let mut le = env.to_vec();
                    le.push((x.clone(), l));
                    let mut re = env.to_vec();
                    re.push((y.clone(), r));
                    let lm = self.comp(b, &le, n / 2);
                    let rm = self.comp(b, &re, n / 2);
                    return tm::case(s.0, x, lm, y, rm);
                }
                26..=33 => {
                    let a = self.pick_value_type();
                    let f = self.comp(&ty::arrow(a.clone(), b.clone()), env, n / 2);
                    let v = self.value(&a, env, n / 2);
                    return tm::app(f, v);
                }
                34..=51 => {
                    let bigger: Vec<CTy> =
                        self.comps.iter().filter(|c| *c != b && derive_c(b, c).is_some()).cloned().collect();
                    if let Some(c) = bigger.choose(&mut self.rng).cloned() {
                        let m = self.comp(&c, env, n);
                        return tm::dn(b.clone(), c, m);
                    }
                }
                52..=57 => {
                    let v = self.value(&ty::thunk(b.clone()), env, n);
                    return tm::force(v);
                }
                58..=62 => {
                    let other = self.comps.choose(&mut self.rng).unwrap().clone();
                    return if self.chance(0.5) {
                        tm::fst(self.comp(&ty::with(b.clone(), other), env, n))
                    } else {
                        tm::snd(self.comp(&ty::with(other, b.clone()), env, n))
                    };
                }
                63..=69 => {
                    let prods: Vec<(Name, VTy, VTy)> = env
                        .iter()
                        .filter_map(|(x, a)| match &**a {
                            ValueType::Prod(l, r) => Some((x.clone(), l.clone(), r.clone())),
                            _ => None,
                        })
                        .collect();
                    if let Some((p, l, r)) = prods.choose(&mut self.rng).cloned() {
                        let (x, y) = (self.name(), self.name());
                        let mut env2 = env.to_vec();
                        env2.push((x.clone(), l));
                        env2.push((y.clone(), r));
                        let body = self.comp(b, &env2, n);
                        return tm::split(tm::var(p), x, y, body);
                    }
                }
                _ => {}
            }
        }
        let n = size.saturating_sub(1);
        match &**b {
            ComputationType::Ret(a) => tm::ret(self.value(a, env, n)),
            ComputationType::Arrow(a, r) => {
                let x = self.name();
                let mut env2 = env.to_vec();
                env2.push((x.clone(), a.clone()));
                tm::lam(x, a.clone(), self.comp(r, &env2, n))
            }
            ComputationType::With(l, r) => {
                let x = self.comp(l, env, n / 2);
                let y = self.comp(r, env, n / 2);
                tm::wpair(x, y)
            }
            ComputationType::Top => tm::empty(),
            ComputationType::CoDyn => {
                if size == 0 {
                    return tm::err(b.clone());
                }
                let grounds: Vec<CTy> = self.comps.iter().filter(|c| ***c != ComputationType::CoDyn).cloned().collect();
                let c = grounds.choose(&mut self.rng).unwrap().clone();
                let m = self.comp(&c, env, n);
                tm::force(tm::up(ty::thunk(c), ty::thunk(b.clone()), tm::thunk(m)))
            }
            ComputationType::Nu(..) | ComputationType::Var(_) => panic!("no generator for {b}"),
        }
    }

    fn sum_scrutinee(&mut self, env: &[(Name, VTy)]) -> (Tm, VTy) {
        let sums: Vec<(Name, VTy)> = env.iter().filter(|(_, a)| matches!(**a, ValueType::Sum(..))).cloned().collect();
        if let Some((x, a)) = sums.choose(&mut self.rng).cloned() {
            if self.chance(0.7) {
                return (tm::var(x), a);
            }
        }
        let a = ty::bool_();
        (self.value(&a, env, 1), a)
    }
}

/// The seeded random program; always typechecks.
pub fn random_program(seed: u64) -> Tm {
    let mut g = ProgramGen::new(seed);
    let size = 4 + (seed % 7) as usize;
    g.program(size)
}

/// Result of one run, or the state it got stuck in.
pub type Run = Result<Evaluation, Stuck>;

/// Elaborate, then run both through de-complexification and the
/// operational machine and directly on the core machine.
pub fn run_both(h: &Harness, p: &Tm) -> Result<(Run, Run), String> {
    let p = check_program(p).map_err(|e| e.to_string())?;
    let core = elab_term(&p, h.interp);
    let op = eval(&simp_comp(&core), h.fuel);
    let star = eval_star(&core, h.fuel);
    Ok((op, star))
}

fn show(r: &Run) -> String {
    match r {
        Ok(e) => e.result.to_string(),
        Err(e) => e.to_string(),
    }
}

/// Results agree between the operational pipeline and the core oracle.
pub fn differential_on(h: &Harness, programs: &[Tm]) -> Outcome {
    let mut out = Outcome::default();
    for p in programs {
        out.instances += 1;
        let fail = |l: String, r: String| Failure { observer: p.to_string(), lhs_result: l, rhs_result: r };
        match run_both(h, p) {
            Err(e) => out.failures.push(fail(e, String::new())),
            Ok((op, star)) => {
                let same = matches!((&op, &star), (Ok(a), Ok(b)) if a.result == b.result);
                if !same {
                    out.failures.push(fail(show(&op), show(&star)));
                }
            }
        }
    }
    out
}

/// Differential run over `n` random programs starting at `seed`.
pub fn differential(h: &Harness, seed: u64, n: usize) -> Outcome {
    let programs: Vec<Tm> = (0..n as u64).map(|k| random_program(seed + k)).collect();
    differential_on(h, &programs)
}

/// Run `n` random programs through the whole pipeline; returns the stuck
/// states met, if any.
pub fn progress(h: &Harness, seed: u64, n: usize) -> Vec<String> {
    let mut stuck = Vec::new();
    for k in 0..n as u64 {
        let p = random_program(seed + k);
        match run_both(h, &p) {
            Err(e) => stuck.push(format!("{p}: {e}")),
            Ok((op, star)) => {
                for r in [op, star] {
                    if let Err(e) = r {
                        stuck.push(format!("{p}: {e}"));
                    }
                }
            }
        }
    }
    stuck
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyninterp::InterpKind;
    use crate::syntax::{stage_check, Stage};

    #[test]
    fn generated_programs_typecheck() {
        for seed in 0..300 {
            let p = random_program(seed);
            stage_check(&p, Stage::Gtt).unwrap();
            check_program(&p).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{p}"));
        }
    }

    #[test]
    fn generation_is_deterministic() {
        assert_eq!(random_program(7), random_program(7));
    }

    #[test]
    fn generator_uses_casts() {
        let with_casts = (0..100).filter(|s| random_program(*s).has_casts()).count();
        assert!(with_casts > 50, "{with_casts}");
    }

    #[test]
    fn small_differential_run() {
        for kind in InterpKind::ALL {
            let out = differential(&Harness::new(kind, 2), 1000, 40);
            assert!(out.passed(), "{kind}: {:?}", out.failures);
        }
    }
}
