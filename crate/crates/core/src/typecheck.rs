//! Bidirectional typechecking with a stoup.
//!
//! Checking also annotates: unascribed injections and aborts come back
//! with the type they were checked against, so later passes never need
//! to reconstruct types.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::dynamism::{derive_c, derive_v};
use crate::syntax::types::{cty_eq, unroll_mu, unroll_nu, vty_eq};
use crate::syntax::{ty, CTy, ComputationType, Name, Term, Tm, Type, VTy, ValueType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ErrorCode {
    Unbound,
    Mismatch,
    Stoup,
    Cast,
    NeedsAnnotation,
    Sort,
    OpenType,
    NotProgram,
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ErrorCode::Unbound => "UNBOUND",
            ErrorCode::Mismatch => "MISMATCH",
            ErrorCode::Stoup => "STOUP",
            ErrorCode::Cast => "CAST",
            ErrorCode::NeedsAnnotation => "ANNOT",
            ErrorCode::Sort => "SORT",
            ErrorCode::OpenType => "OPENTYPE",
            ErrorCode::NotProgram => "NOTPROGRAM",
        })
    }
}

#[derive(Clone, Debug, Error)]
#[error("{code} {msg}")]
pub struct TypeError {
    pub code: ErrorCode,
    pub msg: String,
    /// The offending node, for position lookup.
    pub node: Tm,
}

fn fail<T>(code: ErrorCode, node: &Tm, msg: impl Into<String>) -> Result<T, TypeError> {
    Err(TypeError { code, msg: msg.into(), node: node.clone() })
}

/// Variable context plus stoup.
#[derive(Clone, Debug, Default)]
pub struct TypeEnv {
    pub vars: Vec<(Name, VTy)>,
    pub stoup: Option<CTy>,
}

impl TypeEnv {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_var(mut self, x: impl Into<Name>, a: VTy) -> Self {
        self.vars.push((x.into(), a));
        self
    }

    pub fn with_stoup(mut self, b: CTy) -> Self {
        self.stoup = Some(b);
        self
    }
}

type R<T> = Result<T, TypeError>;

struct Checker {
    vars: Vec<(Name, VTy)>,
}

fn closed_v(node: &Tm, a: &VTy) -> R<()> {
    if a.is_closed() {
        Ok(())
    } else {
        fail(ErrorCode::OpenType, node, format!("type {a} has free type variables"))
    }
}

fn closed_c(node: &Tm, b: &CTy) -> R<()> {
    if b.is_closed() {
        Ok(())
    } else {
        fail(ErrorCode::OpenType, node, format!("type {b} has free type variables"))
    }
}

fn need_empty(node: &Tm, stoup: &Option<CTy>, what: &str) -> R<()> {
    match stoup {
        None => Ok(()),
        Some(b) => {
            fail(ErrorCode::Stoup, node, format!("{what} requires an empty stoup, but hole of type {b} is unused"))
        }
    }
}

fn mk(t: Term) -> Tm {
    Arc::new(t)
}

impl Checker {
    fn lookup(&self, node: &Tm, x: &Name) -> R<VTy> {
        match self.vars.iter().rev().find(|(y, _)| y == x) {
            Some((_, a)) => Ok(a.clone()),
            None => fail(ErrorCode::Unbound, node, format!("unbound variable {x}")),
        }
    }

    fn under<T>(&mut self, bs: Vec<(Name, VTy)>, f: impl FnOnce(&mut Self) -> R<T>) -> R<T> {
        let n = self.vars.len();
        self.vars.extend(bs);
        let out = f(self);
        self.vars.truncate(n);
        out
    }

    fn sum_parts(&self, node: &Tm, a: &VTy) -> R<(VTy, VTy)> {
        match &**a {
            ValueType::Sum(l, r) => Ok((l.clone(), r.clone())),
            _ => fail(ErrorCode::Mismatch, node, format!("expected a sum type, found {a}")),
        }
    }

    // Values.

    fn infer_v(&mut self, t: &Tm) -> R<(Tm, VTy)> {
        match &**t {
            Term::Var(x) => Ok((t.clone(), self.lookup(t, x)?)),
            Term::UnitV => Ok((t.clone(), ty::unit())),
            Term::Inl(Some(s), v) | Term::Inr(Some(s), v) => {
                closed_v(t, s)?;
                let (l, r) = self.sum_parts(t, s)?;
                let left = matches!(**t, Term::Inl(..));
                let v2 = self.check_v(v, if left { &l } else { &r })?;
                let out = if left { Term::Inl(Some(s.clone()), v2) } else { Term::Inr(Some(s.clone()), v2) };
                Ok((mk(out), s.clone()))
            }
            Term::Inl(None, _) | Term::Inr(None, _) => {
                fail(ErrorCode::NeedsAnnotation, t, "cannot infer the sum type of an injection")
            }
            Term::PairV(a, b) => {
                let (a2, ta) = self.infer_v(a)?;
                let (b2, tb) = self.infer_v(b)?;
                Ok((mk(Term::PairV(a2, b2)), ty::prod(ta, tb)))
            }
            Term::RollMu(m, v) => {
                closed_v(t, m)?;
                let Some(un) = unroll_mu(m) else {
                    return fail(ErrorCode::Mismatch, t, format!("rollmu at non-recursive type {m}"));
                };
                let v2 = self.check_v(v, &un)?;
                Ok((mk(Term::RollMu(m.clone(), v2)), m.clone()))
            }
            Term::Thunk(m) => {
                let (m2, b) = self.infer_c(m, &None)?;
                Ok((mk(Term::Thunk(m2)), ty::thunk(b)))
            }
            Term::UpCast(a, a2, v) => {
                closed_v(t, a)?;
                closed_v(t, a2)?;
                if derive_v(a, a2).is_none() {
                    return fail(ErrorCode::Cast, t, format!("{a} ⊑ {a2} is not derivable"));
                }
                let v2 = self.check_v(v, a)?;
                Ok((mk(Term::UpCast(a.clone(), a2.clone(), v2)), a2.clone()))
            }
            Term::Abort(Some(Type::Val(a)), v) => {
                closed_v(t, a)?;
                let v2 = self.check_v(v, &ty::zero())?;
                Ok((mk(Term::Abort(Some(Type::Val(a.clone())), v2)), a.clone()))
            }
            Term::Abort(None, _) => fail(ErrorCode::NeedsAnnotation, t, "cannot infer the type of abort"),
            Term::Case(..) | Term::UnitSplit(..) | Term::Split(..) | Term::UnrollMu(..) => {
                self.elim(t, &Mode::InferValue).map(|(t, ty)| (t, expect_val(ty)))
            }
            _ => fail(ErrorCode::Sort, t, "expected a value, found a computation"),
        }
    }

    fn check_v(&mut self, t: &Tm, a: &VTy) -> R<Tm> {
        match &**t {
            Term::Inl(None, v) | Term::Inr(None, v) => {
                let (l, r) = self.sum_parts(t, a)?;
                let left = matches!(**t, Term::Inl(..));
                let v2 = self.check_v(v, if left { &l } else { &r })?;
                Ok(mk(if left { Term::Inl(Some(a.clone()), v2) } else { Term::Inr(Some(a.clone()), v2) }))
            }
            Term::Abort(None, v) => {
                let v2 = self.check_v(v, &ty::zero())?;
                Ok(mk(Term::Abort(Some(Type::Val(a.clone())), v2)))
            }
            Term::PairV(x, y) => match &**a {
                ValueType::Prod(ta, tb) => {
                    let x2 = self.check_v(x, ta)?;
                    let y2 = self.check_v(y, tb)?;
                    Ok(mk(Term::PairV(x2, y2)))
                }
                _ => fail(ErrorCode::Mismatch, t, format!("pair checked against {a}")),
            },
            Term::Case(..) | Term::UnitSplit(..) | Term::Split(..) | Term::UnrollMu(..) => {
                self.elim(t, &Mode::CheckValue(a.clone())).map(|(t, _)| t)
            }
            _ => {
                let (t2, found) = self.infer_v(t)?;
                if vty_eq(&found, a) {
                    Ok(t2)
                } else {
                    fail(ErrorCode::Mismatch, t, format!("expected {a}, found {found}"))
                }
            }
        }
    }

    // Pattern matching, shared by both sorts.

    fn elim(&mut self, t: &Tm, mode: &Mode) -> R<(Tm, Type)> {
        match &**t {
            Term::Case(s, x, l, y, r) => {
                let (s2, st) = self.infer_v(s)?;
                let (la, ra) = self.sum_parts(s, &st)?;
                let xb = vec![(x.clone(), la.clone())];
                let yb = vec![(y.clone(), ra.clone())];
                let (l2, r2, out) = match mode {
                    Mode::InferValue | Mode::InferComp(_) => {
                        let first = self.under(xb.clone(), |c| c.branch(l, mode));
                        match first {
                            Ok((l2, lt)) => {
                                let r2 = self.under(yb, |c| c.branch(r, &mode.checking(&lt)))?.0;
                                (l2, r2, lt)
                            }
                            Err(e) if e.code == ErrorCode::NeedsAnnotation => {
                                let (r2, rt) = self.under(yb, |c| c.branch(r, mode))?;
                                let l2 = self.under(xb, |c| c.branch(l, &mode.checking(&rt)))?.0;
                                (l2, r2, rt)
                            }
                            Err(e) => return Err(e),
                        }
                    }
                    _ => {
                        let (l2, lt) = self.under(xb, |c| c.branch(l, mode))?;
                        let r2 = self.under(yb, |c| c.branch(r, mode))?.0;
                        (l2, r2, lt)
                    }
                };
                Ok((mk(Term::Case(s2, x.clone(), l2, y.clone(), r2)), out))
            }
            Term::UnitSplit(s, e) => {
                let s2 = self.check_v(s, &ty::unit())?;
                let (e2, et) = self.branch(e, mode)?;
                Ok((mk(Term::UnitSplit(s2, e2)), et))
            }
            Term::Split(s, x, y, e) => {
                let (s2, st) = self.infer_v(s)?;
                let (a, b) = match &*st {
                    ValueType::Prod(a, b) => (a.clone(), b.clone()),
                    _ => return fail(ErrorCode::Mismatch, s, format!("split of non-product {st}")),
                };
                let (e2, et) = self.under(vec![(x.clone(), a), (y.clone(), b)], |c| c.branch(e, mode))?;
                Ok((mk(Term::Split(s2, x.clone(), y.clone(), e2)), et))
            }
            Term::UnrollMu(s, x, e) => {
                let (s2, st) = self.infer_v(s)?;
                let Some(un) = unroll_mu(&st) else {
                    return fail(ErrorCode::Mismatch, s, format!("pmroll of non-recursive {st}"));
                };
                let (e2, et) = self.under(vec![(x.clone(), un)], |c| c.branch(e, mode))?;
                Ok((mk(Term::UnrollMu(s2, x.clone(), e2)), et))
            }
            _ => unreachable!("elim called on an introduction form"),
        }
    }

    fn branch(&mut self, e: &Tm, mode: &Mode) -> R<(Tm, Type)> {
        match mode {
            Mode::InferValue => self.infer_v(e).map(|(e, a)| (e, Type::Val(a))),
            Mode::CheckValue(a) => self.check_v(e, a).map(|e| (e, Type::Val(a.clone()))),
            Mode::InferComp(s) => self.infer_c(e, s).map(|(e, b)| (e, Type::Comp(b))),
            Mode::CheckComp(s, b) => self.check_c(e, s, b).map(|e| (e, Type::Comp(b.clone()))),
        }
    }

    // Computations.

    fn infer_c(&mut self, t: &Tm, stoup: &Option<CTy>) -> R<(Tm, CTy)> {
        match &**t {
            Term::Hole => match stoup {
                Some(b) => Ok((t.clone(), b.clone())),
                None => fail(ErrorCode::Stoup, t, "hole used where the stoup is empty"),
            },
            Term::Err(b) => {
                closed_c(t, b)?;
                need_empty(t, stoup, "err")?;
                Ok((t.clone(), b.clone()))
            }
            Term::RetV(v) => {
                need_empty(t, stoup, "ret")?;
                let (v2, a) = self.infer_v(v)?;
                Ok((mk(Term::RetV(v2)), ty::ret(a)))
            }
            Term::Force(v) => {
                need_empty(t, stoup, "force")?;
                let (v2, a) = self.infer_v(v)?;
                match &*a {
                    ValueType::Thunk(b) => Ok((mk(Term::Force(v2)), b.clone())),
                    _ => fail(ErrorCode::Mismatch, v, format!("force of non-thunk {a}")),
                }
            }
            Term::Bind(m, x, n) => {
                let (m2, mt) = self.infer_c(m, stoup)?;
                let a = match &*mt {
                    ComputationType::Ret(a) => a.clone(),
                    _ => return fail(ErrorCode::Mismatch, m, format!("bind of non-returner {mt}")),
                };
                let (n2, nt) = self.under(vec![(x.clone(), a)], |c| c.infer_c(n, &None))?;
                Ok((mk(Term::Bind(m2, x.clone(), n2)), nt))
            }
            Term::Lam(x, a, m) => {
                closed_v(t, a)?;
                let (m2, b) = self.under(vec![(x.clone(), a.clone())], |c| c.infer_c(m, stoup))?;
                Ok((mk(Term::Lam(x.clone(), a.clone(), m2)), ty::arrow(a.clone(), b)))
            }
            Term::App(m, v) => {
                let (m2, mt) = self.infer_c(m, stoup)?;
                match &*mt {
                    ComputationType::Arrow(a, b) => {
                        let v2 = self.check_v(v, a)?;
                        Ok((mk(Term::App(m2, v2)), b.clone()))
                    }
                    _ => fail(ErrorCode::Mismatch, m, format!("application of non-function {mt}")),
                }
            }
            Term::EmptyPair => Ok((t.clone(), ty::top())),
            Term::WithPair(a, b) => {
                let (a2, ta) = self.infer_c(a, stoup)?;
                let (b2, tb) = self.infer_c(b, stoup)?;
                Ok((mk(Term::WithPair(a2, b2)), ty::with(ta, tb)))
            }
            Term::Fst(m) | Term::Snd(m) => {
                let (m2, mt) = self.infer_c(m, stoup)?;
                match &*mt {
                    ComputationType::With(l, r) => {
                        if matches!(**t, Term::Fst(_)) {
                            Ok((mk(Term::Fst(m2)), l.clone()))
                        } else {
                            Ok((mk(Term::Snd(m2)), r.clone()))
                        }
                    }
                    _ => fail(ErrorCode::Mismatch, m, format!("projection from non-product {mt}")),
                }
            }
            Term::RollNu(b, m) => {
                closed_c(t, b)?;
                let Some(un) = unroll_nu(b) else {
                    return fail(ErrorCode::Mismatch, t, format!("rollnu at non-recursive type {b}"));
                };
                let m2 = self.check_c(m, stoup, &un)?;
                Ok((mk(Term::RollNu(b.clone(), m2)), b.clone()))
            }
            Term::UnrollNu(m) => {
                let (m2, mt) = self.infer_c(m, stoup)?;
                match unroll_nu(&mt) {
                    Some(un) => Ok((mk(Term::UnrollNu(m2)), un)),
                    None => fail(ErrorCode::Mismatch, m, format!("unrollnu of non-recursive {mt}")),
                }
            }
            Term::DnCast(b, b2, m) => {
                closed_c(t, b)?;
                closed_c(t, b2)?;
                if derive_c(b, b2).is_none() {
                    return fail(ErrorCode::Cast, t, format!("{b} ⊑ {b2} is not derivable"));
                }
                let m2 = self.check_c(m, stoup, b2)?;
                Ok((mk(Term::DnCast(b.clone(), b2.clone(), m2)), b.clone()))
            }
            Term::Abort(Some(Type::Comp(b)), v) => {
                closed_c(t, b)?;
                let v2 = self.check_v(v, &ty::zero())?;
                Ok((mk(Term::Abort(Some(Type::Comp(b.clone())), v2)), b.clone()))
            }
            Term::Abort(None, _) => fail(ErrorCode::NeedsAnnotation, t, "cannot infer the type of abort"),
            Term::Case(..) | Term::UnitSplit(..) | Term::Split(..) | Term::UnrollMu(..) => {
                self.elim(t, &Mode::InferComp(stoup.clone())).map(|(t, ty)| (t, expect_comp(ty)))
            }
            _ => fail(ErrorCode::Sort, t, "expected a computation, found a value"),
        }
    }

    fn check_c(&mut self, t: &Tm, stoup: &Option<CTy>, b: &CTy) -> R<Tm> {
        match &**t {
            Term::Abort(None, v) => {
                let v2 = self.check_v(v, &ty::zero())?;
                Ok(mk(Term::Abort(Some(Type::Comp(b.clone())), v2)))
            }
            Term::RetV(v) => match &**b {
                ComputationType::Ret(a) => {
                    need_empty(t, stoup, "ret")?;
                    Ok(mk(Term::RetV(self.check_v(v, a)?)))
                }
                _ => fail(ErrorCode::Mismatch, t, format!("ret checked against {b}")),
            },
            Term::Bind(m, x, n) => {
                let (m2, mt) = self.infer_c(m, stoup)?;
                let a = match &*mt {
                    ComputationType::Ret(a) => a.clone(),
                    _ => return fail(ErrorCode::Mismatch, m, format!("bind of non-returner {mt}")),
                };
                let n2 = self.under(vec![(x.clone(), a)], |c| c.check_c(n, &None, b))?;
                Ok(mk(Term::Bind(m2, x.clone(), n2)))
            }
            Term::Lam(x, a, m) => match &**b {
                ComputationType::Arrow(a2, r) if vty_eq(a, a2) => {
                    let m2 = self.under(vec![(x.clone(), a.clone())], |c| c.check_c(m, stoup, r))?;
                    Ok(mk(Term::Lam(x.clone(), a.clone(), m2)))
                }
                _ => fail(ErrorCode::Mismatch, t, format!("function checked against {b}")),
            },
            Term::WithPair(l, r) => match &**b {
                ComputationType::With(lb, rb) => {
                    let l2 = self.check_c(l, stoup, lb)?;
                    let r2 = self.check_c(r, stoup, rb)?;
                    Ok(mk(Term::WithPair(l2, r2)))
                }
                _ => fail(ErrorCode::Mismatch, t, format!("lazy pair checked against {b}")),
            },
            Term::Case(..) | Term::UnitSplit(..) | Term::Split(..) | Term::UnrollMu(..) => {
                self.elim(t, &Mode::CheckComp(stoup.clone(), b.clone())).map(|(t, _)| t)
            }
            _ => {
                let (t2, found) = self.infer_c(t, stoup)?;
                if cty_eq(&found, b) {
                    Ok(t2)
                } else {
                    fail(ErrorCode::Mismatch, t, format!("expected {b}, found {found}"))
                }
            }
        }
    }
}

enum Mode {
    InferValue,
    CheckValue(VTy),
    InferComp(Option<CTy>),
    CheckComp(Option<CTy>, CTy),
}

impl Mode {
    fn checking(&self, t: &Type) -> Mode {
        match (self, t) {
            (Mode::InferValue, Type::Val(a)) => Mode::CheckValue(a.clone()),
            (Mode::InferComp(s), Type::Comp(b)) => Mode::CheckComp(s.clone(), b.clone()),
            _ => unreachable!("mode and type sort disagree"),
        }
    }
}

fn expect_val(t: Type) -> VTy {
    match t {
        Type::Val(a) => a,
        Type::Comp(_) => unreachable!(),
    }
}

fn expect_comp(t: Type) -> CTy {
    match t {
        Type::Comp(b) => b,
        Type::Val(_) => unreachable!(),
    }
}

fn checker(env: &TypeEnv) -> Checker {
    Checker { vars: env.vars.clone() }
}

/// Infer the type of a value; returns the annotated term.
pub fn infer_value(env: &TypeEnv, v: &Tm) -> R<(Tm, VTy)> {
    checker(env).infer_v(v)
}

pub fn check_value(env: &TypeEnv, v: &Tm, a: &VTy) -> R<Tm> {
    checker(env).check_v(v, a)
}

/// Infer the type of a computation under `env`'s stoup.
pub fn infer_comp(env: &TypeEnv, m: &Tm) -> R<(Tm, CTy)> {
    checker(env).infer_c(m, &env.stoup)
}

pub fn check_comp(env: &TypeEnv, m: &Tm, b: &CTy) -> R<Tm> {
    checker(env).check_c(m, &env.stoup, b)
}

/// Infer with the sort read off the syntax.
pub fn infer(env: &TypeEnv, t: &Tm) -> R<(Tm, Type)> {
    match t.is_value_syntax() {
        Some(true) => infer_value(env, t).map(|(t, a)| (t, Type::Val(a))),
        _ => infer_comp(env, t).map(|(t, b)| (t, Type::Comp(b))),
    }
}

/// Check a whole program: closed, empty stoup, of type `F (1 + 1)`.
pub fn check_program(m: &Tm) -> R<Tm> {
    let prog = ty::program();
    let env = TypeEnv::new();
    match infer_comp(&env, m) {
        Ok((m2, b)) if cty_eq(&b, &prog) => Ok(m2),
        Ok((_, b)) => fail(ErrorCode::NotProgram, m, format!("program has type {b}, expected {prog}")),
        Err(e) if e.code == ErrorCode::NeedsAnnotation => check_comp(&env, m, &prog),
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, tm};

    fn p(s: &str) -> Tm {
        parse_term(s).unwrap().term
    }

    #[test]
    fn injections_need_a_type() {
        let e = infer_value(&TypeEnv::new(), &p("(inl unit)")).unwrap_err();
        assert_eq!(e.code, ErrorCode::NeedsAnnotation);
        let (_, a) = infer_value(&TypeEnv::new(), &p("(inl (+ 1 1) unit)")).unwrap();
        assert_eq!(a, ty::bool_());
    }

    #[test]
    fn upcast_side_condition() {
        let env = TypeEnv::new().with_var("x", ty::unit());
        assert_eq!(infer_value(&env, &p("(up 1 ? x)")).unwrap().1, ty::dyn_());
        let e = infer_value(&TypeEnv::new(), &p("(up ? 1 unit)")).unwrap_err();
        assert_eq!(e.code, ErrorCode::Cast);
    }

    #[test]
    fn stoup_discipline() {
        let env = TypeEnv::new().with_stoup(ty::ret(ty::unit()));
        let (_, b) = infer_comp(&env, &p("(bind x hole (ret x))")).unwrap();
        assert_eq!(b, ty::ret(ty::unit()));
        let e = infer_comp(&env, &p("(bind x (ret unit) hole)")).unwrap_err();
        assert_eq!(e.code, ErrorCode::Stoup);
        assert_eq!(infer_comp(&TypeEnv::new(), &p("(err (F 1))")).unwrap().1, ty::ret(ty::unit()));
        // Additive lazy pairs may use the hole in both components.
        let env = TypeEnv::new().with_stoup(ty::program());
        assert!(infer_comp(&env, &p("(wpair hole hole)")).is_ok());
        assert!(infer_comp(&env, &p("(lam (y 1) hole)")).is_ok());
    }

    #[test]
    fn programs() {
        assert!(check_program(&p("(ret (inl unit))")).is_ok());
        let e = check_program(&p("(ret unit)")).unwrap_err();
        assert_eq!(e.code, ErrorCode::NotProgram);
        assert!(e.msg.contains("(F 1)"));
        assert!(check_program(&p("(err (F (+ 1 1)))")).is_ok());
        assert_eq!(check_program(&p("(ret x)")).unwrap_err().code, ErrorCode::Unbound);
    }

    #[test]
    fn annotation_is_filled_in() {
        let m = check_program(&p("(bind x (ret unit) (ret (inr x)))")).unwrap();
        let expect = tm::bind(tm::ret(tm::unit()), "x_0", tm::ret(tm::inr(ty::bool_(), tm::var("x_0"))));
        assert_eq!(m, expect);
    }

    #[test]
    fn recursive_types() {
        let src = "(pmroll (rollmu (mu X (+ 1 X)) (inl unit)) (r) \
                   (case r (inl a (ret (inl (+ 1 1) a))) (inr b (ret (inr (+ 1 1) unit)))))";
        assert!(check_program(&p(src)).is_ok());
        let src = "(fst (unrollnu (rollnu (nu Y (& (F (+ 1 1)) Y)) (wpair (ret (inl unit)) (err (nu Y (& (F (+ 1 1)) Y)))))))";
        assert!(check_program(&p(src)).is_ok());
    }

    #[test]
    fn case_infers_from_either_branch() {
        let env = TypeEnv::new().with_var("b", ty::bool_());
        let (_, a) = infer_value(&env, &p("(case b (inl x (inl x)) (inr y (inr (+ 1 1) y)))")).unwrap();
        assert_eq!(a, ty::bool_());
    }

    #[test]
    fn abort_both_sorts() {
        let env = TypeEnv::new().with_var("z", ty::zero());
        assert_eq!(infer_value(&env, &p("(abort 1 z)")).unwrap().1, ty::unit());
        assert_eq!(infer_comp(&env, &p("(abort (F 1) z)")).unwrap().1, ty::ret(ty::unit()));
    }
}
