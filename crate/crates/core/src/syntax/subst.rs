use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::term::{Term, Tm};
use super::types::{cty_eq, vty_eq, Type};
use super::Name;

/// Deterministic fresh-name supply. Generated names have the form
/// `base_k` and never collide with names reserved up front or handed out
/// earlier.
#[derive(Clone, Debug, Default)]
pub struct Fresh {
    used: HashSet<Name>,
    next: HashMap<String, usize>,
}

impl Fresh {
    pub fn new() -> Self {
        Self::default()
    }

    /// A supply avoiding every name that occurs in `t`.
    pub fn avoiding(t: &Term) -> Self {
        let mut f = Self::new();
        f.reserve_term(t);
        f
    }

    pub fn reserve(&mut self, n: &Name) {
        self.used.insert(n.clone());
    }

    pub fn reserve_term(&mut self, t: &Term) {
        names_in(t, &mut self.used);
    }

    pub fn fresh(&mut self, base: &str) -> Name {
        let k = self.next.entry(base.to_string()).or_insert(0);
        loop {
            let cand = Name::from(format!("{base}_{k}"));
            *k += 1;
            if !self.used.contains(&cand) {
                self.used.insert(cand.clone());
                return cand;
            }
        }
    }
}

/// Every variable name occurring in `t`, bound or free.
pub fn names_in(t: &Term, out: &mut HashSet<Name>) {
    match t {
        Term::Var(x) => {
            out.insert(x.clone());
        }
        Term::Case(_, x, _, y, _) | Term::Split(_, x, y, _) => {
            out.insert(x.clone());
            out.insert(y.clone());
        }
        Term::UnrollMu(_, x, _) | Term::Bind(_, x, _) | Term::Lam(x, _, _) => {
            out.insert(x.clone());
        }
        _ => {}
    }
    t.for_each_child(&mut |c| names_in(c, out));
}

pub fn free_vars(t: &Term) -> HashSet<Name> {
    let mut out = HashSet::new();
    fv(t, &mut Vec::new(), &mut out);
    out
}

fn fv(t: &Term, bound: &mut Vec<Name>, out: &mut HashSet<Name>) {
    if let Term::Var(x) = t {
        if !bound.contains(x) {
            out.insert(x.clone());
        }
        return;
    }
    for (bs, c) in children(t) {
        let n = bs.len();
        bound.extend(bs);
        fv(&c, bound, out);
        bound.truncate(bound.len() - n);
    }
}

fn occurs_free(t: &Term, x: &Name) -> bool {
    match t {
        Term::Var(y) => y == x,
        _ => children(t).iter().any(|(bs, c)| !bs.contains(x) && occurs_free(c, x)),
    }
}

pub fn contains_hole(t: &Term) -> bool {
    match t {
        Term::Hole => true,
        _ => {
            let mut found = false;
            t.for_each_child(&mut |c| found = found || contains_hole(c));
            found
        }
    }
}

/// Immediate subterms with the binders scoping over each.
pub(crate) fn children(t: &Term) -> Vec<(Vec<Name>, Tm)> {
    match t {
        Term::Var(_) | Term::Hole | Term::Err(_) | Term::UnitV | Term::EmptyPair => vec![],
        Term::Abort(_, a)
        | Term::Inl(_, a)
        | Term::Inr(_, a)
        | Term::RollMu(_, a)
        | Term::Thunk(a)
        | Term::Force(a)
        | Term::RetV(a)
        | Term::Fst(a)
        | Term::Snd(a)
        | Term::RollNu(_, a)
        | Term::UnrollNu(a)
        | Term::UpCast(_, _, a)
        | Term::DnCast(_, _, a) => vec![(vec![], a.clone())],
        Term::Lam(x, _, a) => vec![(vec![x.clone()], a.clone())],
        Term::Case(s, x, l, y, r) => {
            vec![(vec![], s.clone()), (vec![x.clone()], l.clone()), (vec![y.clone()], r.clone())]
        }
        Term::Split(s, x, y, e) => vec![(vec![], s.clone()), (vec![x.clone(), y.clone()], e.clone())],
        Term::UnrollMu(s, x, e) | Term::Bind(s, x, e) => {
            vec![(vec![], s.clone()), (vec![x.clone()], e.clone())]
        }
        Term::UnitSplit(a, b) | Term::PairV(a, b) | Term::App(a, b) | Term::WithPair(a, b) => {
            vec![(vec![], a.clone()), (vec![], b.clone())]
        }
    }
}

/// Rebuild `t` with new children (and possibly renamed binders), in the
/// order produced by [`children`].
pub(crate) fn with_children(t: &Term, mut new: Vec<(Vec<Name>, Tm)>) -> Term {
    let mut next = || new.remove(0);
    match t {
        Term::Var(_) | Term::Hole | Term::Err(_) | Term::UnitV | Term::EmptyPair => t.clone(),
        Term::Abort(a, _) => Term::Abort(a.clone(), next().1),
        Term::Inl(a, _) => Term::Inl(a.clone(), next().1),
        Term::Inr(a, _) => Term::Inr(a.clone(), next().1),
        Term::RollMu(a, _) => Term::RollMu(a.clone(), next().1),
        Term::Thunk(_) => Term::Thunk(next().1),
        Term::Force(_) => Term::Force(next().1),
        Term::RetV(_) => Term::RetV(next().1),
        Term::Fst(_) => Term::Fst(next().1),
        Term::Snd(_) => Term::Snd(next().1),
        Term::RollNu(b, _) => Term::RollNu(b.clone(), next().1),
        Term::UnrollNu(_) => Term::UnrollNu(next().1),
        Term::UpCast(a, b, _) => Term::UpCast(a.clone(), b.clone(), next().1),
        Term::DnCast(a, b, _) => Term::DnCast(a.clone(), b.clone(), next().1),
        Term::Lam(_, a, _) => {
            let (bs, body) = next();
            Term::Lam(bs[0].clone(), a.clone(), body)
        }
        Term::Case(..) => {
            let s = next().1;
            let (bl, l) = next();
            let (br, r) = next();
            Term::Case(s, bl[0].clone(), l, br[0].clone(), r)
        }
        Term::Split(..) => {
            let s = next().1;
            let (bs, e) = next();
            Term::Split(s, bs[0].clone(), bs[1].clone(), e)
        }
        Term::UnrollMu(..) => {
            let s = next().1;
            let (bs, e) = next();
            Term::UnrollMu(s, bs[0].clone(), e)
        }
        Term::Bind(..) => {
            let s = next().1;
            let (bs, e) = next();
            Term::Bind(s, bs[0].clone(), e)
        }
        Term::UnitSplit(..) => Term::UnitSplit(next().1, next().1),
        Term::PairV(..) => Term::PairV(next().1, next().1),
        Term::App(..) => Term::App(next().1, next().1),
        Term::WithPair(..) => Term::WithPair(next().1, next().1),
    }
}

/// Rebuild `t` by mapping each child; `None` from `f` means "unchanged".
/// Returns `None` when no child changed, so untouched subtrees stay shared.
pub(crate) fn map_children(t: &Term, f: &mut dyn FnMut(&[&Name], &Tm) -> Option<Tm>) -> Option<Term> {
    fn pick(new: Option<Tm>, old: &Tm) -> Tm {
        new.unwrap_or_else(|| old.clone())
    }
    match t {
        Term::Var(_) | Term::Hole | Term::Err(_) | Term::UnitV | Term::EmptyPair => None,
        Term::Abort(a, v) => f(&[], v).map(|v| Term::Abort(a.clone(), v)),
        Term::Inl(a, v) => f(&[], v).map(|v| Term::Inl(a.clone(), v)),
        Term::Inr(a, v) => f(&[], v).map(|v| Term::Inr(a.clone(), v)),
        Term::RollMu(a, v) => f(&[], v).map(|v| Term::RollMu(a.clone(), v)),
        Term::Thunk(m) => f(&[], m).map(Term::Thunk),
        Term::Force(v) => f(&[], v).map(Term::Force),
        Term::RetV(v) => f(&[], v).map(Term::RetV),
        Term::Fst(m) => f(&[], m).map(Term::Fst),
        Term::Snd(m) => f(&[], m).map(Term::Snd),
        Term::RollNu(b, m) => f(&[], m).map(|m| Term::RollNu(b.clone(), m)),
        Term::UnrollNu(m) => f(&[], m).map(Term::UnrollNu),
        Term::UpCast(a, b, v) => f(&[], v).map(|v| Term::UpCast(a.clone(), b.clone(), v)),
        Term::DnCast(a, b, m) => f(&[], m).map(|m| Term::DnCast(a.clone(), b.clone(), m)),
        Term::Lam(x, a, m) => f(&[x], m).map(|m| Term::Lam(x.clone(), a.clone(), m)),
        Term::Case(s, x, l, y, r) => {
            let s2 = f(&[], s);
            let l2 = f(&[x], l);
            let r2 = f(&[y], r);
            if s2.is_none() && l2.is_none() && r2.is_none() {
                None
            } else {
                Some(Term::Case(pick(s2, s), x.clone(), pick(l2, l), y.clone(), pick(r2, r)))
            }
        }
        Term::Split(s, x, y, e) => {
            let s2 = f(&[], s);
            let e2 = f(&[x, y], e);
            if s2.is_none() && e2.is_none() {
                None
            } else {
                Some(Term::Split(pick(s2, s), x.clone(), y.clone(), pick(e2, e)))
            }
        }
        Term::UnrollMu(s, x, e) => {
            let s2 = f(&[], s);
            let e2 = f(&[x], e);
            if s2.is_none() && e2.is_none() {
                None
            } else {
                Some(Term::UnrollMu(pick(s2, s), x.clone(), pick(e2, e)))
            }
        }
        Term::Bind(s, x, e) => {
            let s2 = f(&[], s);
            let e2 = f(&[x], e);
            if s2.is_none() && e2.is_none() {
                None
            } else {
                Some(Term::Bind(pick(s2, s), x.clone(), pick(e2, e)))
            }
        }
        Term::UnitSplit(a, b) | Term::PairV(a, b) | Term::App(a, b) | Term::WithPair(a, b) => {
            let a2 = f(&[], a);
            let b2 = f(&[], b);
            if a2.is_none() && b2.is_none() {
                return None;
            }
            let (a, b) = (pick(a2, a), pick(b2, b));
            Some(match t {
                Term::UnitSplit(..) => Term::UnitSplit(a, b),
                Term::PairV(..) => Term::PairV(a, b),
                Term::App(..) => Term::App(a, b),
                _ => Term::WithPair(a, b),
            })
        }
    }
}

/// `body[v/x]` where `v` has no free variables, so no binder can capture.
pub fn subst_value_closed(body: &Tm, x: &Name, v: &Tm) -> Tm {
    subst_closed_opt(body, x, v).unwrap_or_else(|| body.clone())
}

fn subst_closed_opt(t: &Tm, x: &Name, v: &Tm) -> Option<Tm> {
    match &**t {
        Term::Var(y) => (y == x).then(|| v.clone()),
        other => map_children(other, &mut |bs, c| {
            if bs.contains(&x) {
                None
            } else {
                subst_closed_opt(c, x, v)
            }
        })
        .map(Arc::new),
    }
}

/// Capture-avoiding substitution of the value `v` for free occurrences of
/// `x` in `body`.
pub fn subst_value(body: &Tm, x: &Name, v: &Tm) -> Tm {
    let fvs = free_vars(v);
    if fvs.is_empty() {
        return subst_value_closed(body, x, v);
    }
    subst_open(body, x, v, &fvs)
}

fn subst_open(t: &Tm, x: &Name, v: &Tm, fvs: &HashSet<Name>) -> Tm {
    match &**t {
        Term::Var(y) if y == x => v.clone(),
        Term::Var(_) => t.clone(),
        other => {
            if !occurs_free(other, x) {
                return t.clone();
            }
            let new = children(other)
                .into_iter()
                .map(|(bs, c)| {
                    if bs.contains(x) {
                        return (bs, c);
                    }
                    let (bs, c) = freshen_binders(bs, c, fvs, x);
                    let c = subst_open(&c, x, v, fvs);
                    (bs, c)
                })
                .collect();
            Arc::new(with_children(other, new))
        }
    }
}

/// Rename any binder in `bs` that would capture a name in `avoid`.
fn freshen_binders(bs: Vec<Name>, scope: Tm, avoid: &HashSet<Name>, extra: &Name) -> (Vec<Name>, Tm) {
    if bs.iter().all(|b| !avoid.contains(b)) {
        return (bs, scope);
    }
    let mut fresh = Fresh::avoiding(&scope);
    for n in avoid {
        fresh.reserve(n);
    }
    fresh.reserve(extra);
    for b in &bs {
        fresh.reserve(b);
    }
    let mut scope = scope;
    let mut out = Vec::with_capacity(bs.len());
    for b in bs {
        if avoid.contains(&b) {
            let nb = fresh.fresh(b.base());
            scope = subst_value_closed_var(&scope, &b, &nb);
            out.push(nb);
        } else {
            out.push(b);
        }
    }
    (out, scope)
}

/// Rename free `x` to `y` where `y` does not occur in `t` at all.
fn subst_value_closed_var(t: &Tm, x: &Name, y: &Name) -> Tm {
    subst_value_closed(t, x, &Arc::new(Term::Var(y.clone())))
}

/// Replace the hole of `stack` by `m`, renaming binders on the way to
/// the hole that would capture free variables of `m`.
pub fn plug_stack(stack: &Tm, m: &Tm) -> Tm {
    let fvs = free_vars(m);
    if fvs.is_empty() {
        return plug_stack_closed(stack, m);
    }
    plug_open(stack, m, &fvs)
}

/// Replace the hole of `stack` by a closed `m`.
pub fn plug_stack_closed(stack: &Tm, m: &Tm) -> Tm {
    plug_closed_opt(stack, m).unwrap_or_else(|| stack.clone())
}

fn plug_closed_opt(t: &Tm, m: &Tm) -> Option<Tm> {
    match &**t {
        Term::Hole => Some(m.clone()),
        other => map_children(other, &mut |_, c| plug_closed_opt(c, m)).map(Arc::new),
    }
}

fn plug_open(t: &Tm, m: &Tm, fvs: &HashSet<Name>) -> Tm {
    match &**t {
        Term::Hole => m.clone(),
        other => {
            if !contains_hole(other) {
                return t.clone();
            }
            let hole = Name::from("•");
            let new = children(other)
                .into_iter()
                .map(|(bs, c)| {
                    if !contains_hole(&c) {
                        return (bs, c);
                    }
                    let (bs, c) = freshen_binders(bs, c, fvs, &hole);
                    let c = plug_open(&c, m, fvs);
                    (bs, c)
                })
                .collect();
            Arc::new(with_children(other, new))
        }
    }
}

/// Alpha-equivalence of terms; type annotations compare up to alpha too.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    aeq(a, b, &mut Vec::new())
}

fn name_eq(x: &Name, y: &Name, env: &[(Name, Name)]) -> bool {
    for (l, r) in env.iter().rev() {
        if l == x || r == y {
            return l == x && r == y;
        }
    }
    x == y
}

fn type_opt_eq(a: &Option<Type>, b: &Option<Type>) -> bool {
    match (a, b) {
        (None, None) => true,
        (Some(Type::Val(x)), Some(Type::Val(y))) => vty_eq(x, y),
        (Some(Type::Comp(x)), Some(Type::Comp(y))) => cty_eq(x, y),
        _ => false,
    }
}

fn aeq(a: &Term, b: &Term, env: &mut Vec<(Name, Name)>) -> bool {
    let shallow = match (a, b) {
        (Term::Var(x), Term::Var(y)) => return name_eq(x, y, env),
        (Term::Hole, Term::Hole) | (Term::UnitV, Term::UnitV) | (Term::EmptyPair, Term::EmptyPair) => true,
        (Term::Err(x), Term::Err(y)) => cty_eq(x, y),
        (Term::Abort(x, _), Term::Abort(y, _)) => type_opt_eq(x, y),
        (Term::Inl(x, _), Term::Inl(y, _)) | (Term::Inr(x, _), Term::Inr(y, _)) => match (x, y) {
            (None, None) => true,
            (Some(x), Some(y)) => vty_eq(x, y),
            _ => false,
        },
        (Term::RollMu(x, _), Term::RollMu(y, _)) => vty_eq(x, y),
        (Term::Lam(_, x, _), Term::Lam(_, y, _)) => vty_eq(x, y),
        (Term::RollNu(x, _), Term::RollNu(y, _)) => cty_eq(x, y),
        (Term::UpCast(x1, x2, _), Term::UpCast(y1, y2, _)) => vty_eq(x1, y1) && vty_eq(x2, y2),
        (Term::DnCast(x1, x2, _), Term::DnCast(y1, y2, _)) => cty_eq(x1, y1) && cty_eq(x2, y2),
        _ => std::mem::discriminant(a) == std::mem::discriminant(b),
    };
    if !shallow {
        return false;
    }
    let ca = children(a);
    let cb = children(b);
    if ca.len() != cb.len() {
        return false;
    }
    for ((ba, ta), (bb, tb)) in ca.iter().zip(cb.iter()) {
        if ba.len() != bb.len() {
            return false;
        }
        let n = ba.len();
        for (x, y) in ba.iter().zip(bb.iter()) {
            env.push((x.clone(), y.clone()));
        }
        let ok = aeq(ta, tb, env);
        env.truncate(env.len() - n);
        if !ok {
            return false;
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::tm;
    use crate::syntax::ty;

    fn n(s: &str) -> Name {
        Name::from(s)
    }

    #[test]
    fn subst_ret_var() {
        let out = subst_value(&tm::ret(tm::var("x")), &n("x"), &tm::unit());
        assert_eq!(*out, Term::RetV(tm::unit()));
    }

    #[test]
    fn subst_respects_shadowing() {
        let body = tm::lam("x", ty::unit(), tm::var("x"));
        let out = subst_value(&body, &n("x"), &tm::unit());
        assert_eq!(out, body);
    }

    #[test]
    fn subst_in_pair() {
        let body = tm::pair(tm::var("x"), tm::var("y"));
        let v = tm::inl(ty::bool_(), tm::unit());
        let out = subst_value(&body, &n("x"), &v);
        assert_eq!(*out, Term::PairV(v, tm::var("y")));
    }

    #[test]
    fn subst_avoids_capture() {
        // (lam y. ret (x, y))[y/x] must not capture.
        let body = tm::lam("y", ty::unit(), tm::ret(tm::pair(tm::var("x"), tm::var("y"))));
        let out = subst_value(&body, &n("x"), &tm::var("y"));
        match &*out {
            Term::Lam(b, _, inner) => {
                assert_ne!(b, &n("y"));
                let expect = tm::ret(tm::pair(tm::var("y"), tm::var(b.clone())));
                assert_eq!(inner, &expect);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert_eq!(free_vars(&out), HashSet::from([n("y")]));
    }

    #[test]
    fn plug_examples() {
        let s = tm::bind(tm::hole(), "x", tm::ret(tm::var("x")));
        let out = plug_stack(&s, &tm::ret(tm::unit()));
        assert_eq!(out, tm::bind(tm::ret(tm::unit()), "x", tm::ret(tm::var("x"))));

        let e = tm::err(ty::program());
        assert_eq!(plug_stack(&tm::hole(), &e), e);

        let w = tm::wpair(tm::err(ty::program()), tm::ret(tm::tt()));
        assert_eq!(plug_stack(&tm::fst(tm::hole()), &w), tm::fst(w.clone()));
    }

    #[test]
    fn plug_avoids_capture() {
        let s = tm::lam("x", ty::unit(), tm::app(tm::hole(), tm::var("x")));
        let m = tm::force(tm::var("x"));
        let out = plug_stack(&s, &m);
        match &*out {
            Term::Lam(b, _, body) => {
                assert_ne!(b, &n("x"));
                assert_eq!(body, &tm::app(m.clone(), tm::var(b.clone())));
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn alpha_equivalence() {
        let a = tm::lam("x", ty::unit(), tm::ret(tm::var("x")));
        let b = tm::lam("y", ty::unit(), tm::ret(tm::var("y")));
        let c = tm::lam("y", ty::unit(), tm::ret(tm::var("x")));
        assert!(alpha_eq(&a, &b));
        assert!(!alpha_eq(&a, &c));
    }

    #[test]
    fn fresh_skips_reserved() {
        let t = tm::pair(tm::var("x_0"), tm::var("x_2"));
        let mut f = Fresh::avoiding(&t);
        assert_eq!(f.fresh("x"), n("x_1"));
        assert_eq!(f.fresh("x"), n("x_3"));
    }
}
