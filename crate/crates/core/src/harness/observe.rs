//! Observation contexts: closed stacks from a core type to `F (1 + 1)`.
//!
//! Every observer is built from elimination forms and ends in a boolean, so
//! a differing result under one of them is a genuine contextual refutation.

use std::sync::Arc;

use crate::syntax::{plug_stack, tm, ty, unroll_mu, unroll_nu, CTy, ComputationType, Term, Tm, Type, VTy, ValueType};

use super::{thin, Harness};

fn is_bool(a: &VTy) -> bool {
    matches!(&**a, ValueType::Sum(l, r) if matches!(**l, ValueType::Unit) && matches!(**r, ValueType::Unit))
}

/// The observer that only checks whether its input returns.
fn is_termination(s: &Tm) -> bool {
    matches!(&**s, Term::Bind(h, _, r) if **h == Term::Hole && **r == Term::RetV(tm::tt()))
}

/// `bind o ← •; body`
fn bind_hole(body: Tm) -> Tm {
    tm::bind(tm::hole(), "o", body)
}

impl Harness {
    /// Observers for a value or computation type; value types are observed
    /// through `ret`.
    pub fn observers_for(&self, t: &Type, depth: usize) -> Arc<Vec<Tm>> {
        match t {
            Type::Val(a) => self.observers(&ty::ret(a.clone()), depth),
            Type::Comp(b) => self.observers(b, depth),
        }
    }

    pub fn observers(&self, b: &CTy, depth: usize) -> Arc<Vec<Tm>> {
        let key = (b.clone(), depth);
        if let Some(v) = self.observer_cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let out = Arc::new(thin(self.observers_raw(b, depth), self.caps.observers));
        self.observer_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    fn observers_raw(&self, b: &CTy, depth: usize) -> Vec<Tm> {
        let mut out = Vec::new();
        match &**b {
            ComputationType::Ret(a) => {
                if is_bool(a) {
                    out.push(tm::hole());
                }
                // Termination alone.
                out.push(bind_hole(tm::ret(tm::tt())));
                self.returners(a, depth, &mut out);
            }
            ComputationType::Arrow(a, r) => {
                let args = self.values(a, depth);
                let rest = self.observers(r, depth);
                for v in args.iter() {
                    for s in rest.iter() {
                        out.push(plug_stack(s, &tm::app(tm::hole(), v.clone())));
                    }
                }
            }
            ComputationType::With(l, r) => {
                for s in self.observers(l, depth).iter() {
                    out.push(plug_stack(s, &tm::fst(tm::hole())));
                }
                for s in self.observers(r, depth).iter() {
                    out.push(plug_stack(s, &tm::snd(tm::hole())));
                }
            }
            ComputationType::Top => {}
            ComputationType::Nu(..) => {
                if depth > 0 {
                    let body = unroll_nu(b).expect("nu type");
                    for s in self.observers(&body, depth - 1).iter() {
                        out.push(plug_stack(s, &tm::unrollnu(tm::hole())));
                    }
                }
            }
            ComputationType::CoDyn | ComputationType::Var(_) => {
                panic!("observing a non-core type {b}")
            }
        }
        out
    }

    /// Discriminators on the returned value of an `F a` computation.
    fn returners(&self, a: &VTy, depth: usize, out: &mut Vec<Tm>) {
        let o = || tm::var("o");
        match &**a {
            ValueType::Unit | ValueType::Zero => {}
            ValueType::Sum(l, r) => {
                out.push(bind_hole(tm::case(o(), "l", tm::ret(tm::tt()), "r", tm::ret(tm::ff()))));
                if !is_bool(a) {
                    for s in self.observers(&ty::ret(l.clone()), depth).iter().filter(|s| !is_termination(s)) {
                        let inner = plug_stack(s, &tm::ret(tm::var("l")));
                        out.push(bind_hole(tm::case(o(), "l", inner, "r", tm::ret(tm::ff()))));
                    }
                    for s in self.observers(&ty::ret(r.clone()), depth).iter().filter(|s| !is_termination(s)) {
                        let inner = plug_stack(s, &tm::ret(tm::var("r")));
                        out.push(bind_hole(tm::case(o(), "l", tm::ret(tm::tt()), "r", inner)));
                    }
                }
            }
            ValueType::Prod(l, r) => {
                for s in self.observers(&ty::ret(l.clone()), depth).iter().filter(|s| !is_termination(s)) {
                    let inner = plug_stack(s, &tm::ret(tm::var("p")));
                    out.push(bind_hole(tm::split(o(), "p", "q", inner)));
                }
                for s in self.observers(&ty::ret(r.clone()), depth).iter().filter(|s| !is_termination(s)) {
                    let inner = plug_stack(s, &tm::ret(tm::var("q")));
                    out.push(bind_hole(tm::split(o(), "p", "q", inner)));
                }
            }
            ValueType::Thunk(c) => {
                if depth > 0 {
                    for s in self.observers(c, depth - 1).iter() {
                        out.push(bind_hole(plug_stack(s, &tm::force(o()))));
                    }
                }
            }
            ValueType::Mu(..) => {
                if depth > 0 {
                    let body = unroll_mu(a).expect("mu type");
                    for s in self.observers(&ty::ret(body), depth - 1).iter().filter(|s| !is_termination(s)) {
                        let inner = plug_stack(s, &tm::ret(tm::var("y")));
                        out.push(bind_hole(tm::pmroll(o(), "y", inner)));
                    }
                }
            }
            ValueType::Dyn | ValueType::Var(_) => panic!("observing a non-core type {a}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyninterp::InterpKind;
    use crate::syntax::{alpha_eq, parse_ctype, parse_term, stage_check, Stage};
    use crate::typecheck::{check_comp, TypeEnv};

    fn h() -> Harness {
        Harness::new(InterpKind::Natural, 3)
    }

    fn has(obs: &[Tm], src: &str) -> bool {
        let want = parse_term(src).unwrap().term;
        obs.iter().any(|s| alpha_eq(s, &want))
    }

    #[test]
    fn program_type_has_identity_observer() {
        let obs = h().observers(&ty::program(), 3);
        assert_eq!(*obs[0], crate::syntax::Term::Hole);
    }

    #[test]
    fn function_probe() {
        let b = parse_ctype("(-> 1 (F (+ 1 1)))").unwrap();
        let obs = h().observers(&ty::ret(ty::thunk(b.clone())), 3);
        assert!(has(&obs, "(bind o hole (app (force o) unit))"));
        let direct = h().observers(&b, 3);
        assert!(has(&direct, "(app hole unit)"));
    }

    #[test]
    fn product_discriminator() {
        let b = parse_ctype("(F (* 1 (+ 1 1)))").unwrap();
        let obs = h().observers(&b, 3);
        assert!(has(&obs, "(bind o hole (split o (p q) (ret q)))"));
    }

    #[test]
    fn observers_are_well_typed_stacks() {
        let h = h();
        let natural = crate::dyninterp::InterpKind::Natural.interp();
        let mut types = vec![natural.comp_dyn.clone(), ty::ret(natural.val_dyn.clone())];
        for src in ["(F (+ (* 1 1) 1))", "(& (F 1) (-> (+ 1 1) (F (+ 1 1))))", "(F (U (F (+ 1 1))))"] {
            types.push(parse_ctype(src).unwrap());
        }
        for b in types {
            let obs = h.observers(&b, 2);
            assert!(!obs.is_empty(), "{b}");
            for s in obs.iter() {
                check_comp(&TypeEnv::new().with_stoup(b.clone()), s, &ty::program()).unwrap();
                let closed = plug_stack(s, &tm::force(tm::var("z")));
                stage_check(&closed, Stage::CbpvOp).unwrap_or_else(|e| panic!("{e}"));
            }
        }
    }
}
