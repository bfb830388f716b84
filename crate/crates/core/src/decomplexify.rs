//! Elimination of complex values and stacks.
//!
//! A value of type `A` becomes a computation of type `F A`, a stack
//! becomes a computation over a thunk variable standing for its hole, and
//! computations keep their type. Administrative redexes are kept.

use std::sync::Arc;

use crate::syntax::{names_in, tm, ty, Fresh, Name, Term, Tm, Type};

struct Simp {
    fresh: Fresh,
    hole: Option<Name>,
}

impl Simp {
    fn new(t: &Term) -> Simp {
        Simp { fresh: Fresh::avoiding(t), hole: None }
    }

    fn x(&mut self) -> Name {
        self.fresh.fresh("x")
    }

    /// Evaluate the value `v`, then continue with its result variable.
    fn then(&mut self, v: &Tm, k: impl FnOnce(&mut Self, Tm) -> Tm) -> Tm {
        let m = self.value(v);
        let x = self.x();
        let body = k(self, tm::var(x.clone()));
        tm::bind(m, x, body)
    }

    fn value(&mut self, v: &Tm) -> Tm {
        match &**v {
            Term::Var(_) | Term::UnitV => tm::ret(v.clone()),
            Term::Inl(a, w) => self.then(w, |_, x| tm::ret(Arc::new(Term::Inl(a.clone(), x)))),
            Term::Inr(a, w) => self.then(w, |_, x| tm::ret(Arc::new(Term::Inr(a.clone(), x)))),
            Term::PairV(a, b) => {
                let ma = self.value(a);
                let mb = self.value(b);
                let (x1, x2) = (self.x(), self.x());
                tm::bind(ma, x1.clone(), tm::bind(mb, x2.clone(), tm::ret(tm::pair(tm::var(x1), tm::var(x2)))))
            }
            Term::RollMu(a, w) => self.then(w, |_, x| tm::ret(tm::roll(a.clone(), x))),
            Term::Thunk(m) => tm::ret(tm::thunk(self.comp(m))),
            Term::Abort(ann, w) => {
                let b = match ann {
                    Some(Type::Val(a)) => ty::ret(a.clone()),
                    _ => panic!("value abort without a value ascription"),
                };
                self.then(w, |_, x| tm::abort(Type::Comp(b), x))
            }
            Term::Case(..) | Term::Split(..) | Term::UnitSplit(..) | Term::UnrollMu(..) => self.elim(v, true),
            _ => panic!("not a core value: {v}"),
        }
    }

    fn elim(&mut self, t: &Tm, value: bool) -> Tm {
        let br = |s: &mut Self, e: &Tm| if value { s.value(e) } else { s.comp(e) };
        match &**t {
            Term::Case(sc, x, l, y, r) => self.then(sc, |s, w| {
                let l2 = br(s, l);
                let r2 = br(s, r);
                tm::case(w, x.clone(), l2, y.clone(), r2)
            }),
            Term::Split(sc, x, y, e) => self.then(sc, |s, w| {
                let e2 = br(s, e);
                tm::split(w, x.clone(), y.clone(), e2)
            }),
            Term::UnitSplit(sc, e) => self.then(sc, |s, w| {
                let e2 = br(s, e);
                tm::usplit(w, e2)
            }),
            Term::UnrollMu(sc, x, e) => self.then(sc, |s, w| {
                let e2 = br(s, e);
                tm::pmroll(w, x.clone(), e2)
            }),
            _ => unreachable!(),
        }
    }

    fn comp(&mut self, m: &Tm) -> Tm {
        match &**m {
            Term::Hole => {
                let z = self.hole.clone().expect("hole outside a stack");
                tm::force(tm::var(z))
            }
            Term::Err(_) | Term::EmptyPair => m.clone(),
            Term::RetV(v) => self.then(v, |_, x| tm::ret(x)),
            Term::Force(v) => self.then(v, |_, x| tm::force(x)),
            Term::Bind(a, x, b) => {
                let a2 = self.comp(a);
                let b2 = self.comp(b);
                tm::bind(a2, x.clone(), b2)
            }
            Term::Lam(x, a, b) => tm::lam(x.clone(), a.clone(), self.comp(b)),
            Term::App(f, v) => self.then(v, |s, x| {
                let f2 = s.comp(f);
                tm::app(f2, x)
            }),
            Term::WithPair(a, b) => {
                let a2 = self.comp(a);
                let b2 = self.comp(b);
                tm::wpair(a2, b2)
            }
            Term::Fst(a) => tm::fst(self.comp(a)),
            Term::Snd(a) => tm::snd(self.comp(a)),
            Term::RollNu(b, a) => tm::rollnu(b.clone(), self.comp(a)),
            Term::UnrollNu(a) => tm::unrollnu(self.comp(a)),
            Term::Abort(ann, v) => {
                let ann = ann.clone().expect("abort is annotated after typechecking");
                self.then(v, |_, x| Arc::new(Term::Abort(Some(ann), x)))
            }
            Term::Case(..) | Term::Split(..) | Term::UnitSplit(..) | Term::UnrollMu(..) => self.elim(m, false),
            _ => panic!("not a core computation: {m}"),
        }
    }
}

/// `⟦V⟧ : F A` for a core value `V : A`.
pub fn simp_value(v: &Tm) -> Tm {
    Simp::new(v).value(v)
}

/// Translate a core computation with no hole.
pub fn simp_comp(m: &Tm) -> Tm {
    Simp::new(m).comp(m)
}

/// Translate a stack; the hole becomes `force z` for the returned thunk
/// variable `z` (named `z` unless that name is taken).
pub fn simp_stack(s: &Tm) -> (Tm, Name) {
    let mut names = Default::default();
    names_in(s, &mut names);
    let mut simp = Simp::new(s);
    let z = if names.contains(&Name::from("z")) { simp.fresh.fresh("z") } else { Name::from("z") };
    simp.fresh.reserve(&z);
    simp.hole = Some(z.clone());
    (simp.comp(s), z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term, stage_check, Stage};

    fn p(s: &str) -> Tm {
        parse_term(s).unwrap().term
    }

    fn same(a: &Tm, b: &str) {
        assert!(alpha_eq(a, &p(b)), "got {a}, expected {b}");
    }

    #[test]
    fn value_clauses() {
        same(&simp_value(&tm::var("x")), "(ret x)");
        same(&simp_value(&tm::unit()), "(ret unit)");
        same(
            &simp_value(&p("(split p (x y) (pair y x))")),
            "(bind w (ret p) (split w (x y) (bind a (ret y) (bind b (ret x) (ret (pair a b))))))",
        );
    }

    #[test]
    fn computation_clauses() {
        same(
            &simp_comp(&p("(force (thunk (ret unit)))")),
            "(bind x (ret (thunk (bind y (ret unit) (ret y)))) (force x))",
        );
        same(
            &simp_comp(&p("(app (lam (y 1) (ret y)) unit)")),
            "(bind a (ret unit) (app (lam (y 1) (bind b (ret y) (ret b))) a))",
        );
    }

    #[test]
    fn stack_clauses() {
        let (s, z) = simp_stack(&tm::hole());
        assert_eq!(z.as_str(), "z");
        same(&s, "(force z)");
        let (s, _) = simp_stack(&p("(fst hole)"));
        same(&s, "(fst (force z))");
        let (s, _) = simp_stack(&p("(bind x hole (ret x))"));
        same(&s, "(bind x (force z) (bind y (ret x) (ret y)))");
    }

    #[test]
    fn output_is_operational() {
        let m = p("(bind q (ret (case (inl (+ 1 1) unit) (inl a (pair a a)) (inr b (pair b b)))) \
                   (split q (u v) (ret (inl (+ 1 1) v))))");
        let out = simp_comp(&m);
        stage_check(&out, Stage::CbpvOp).unwrap();
    }
}
