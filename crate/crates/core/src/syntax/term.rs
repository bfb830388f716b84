use std::sync::Arc;

use super::types::{CTy, Type, VTy};
use super::Name;

pub type Tm = Arc<Term>;

/// Three-sorted terms: values, computations, and stacks (computations
/// mentioning the hole). Pattern-matching forms are shared by values and
/// computations; their sort is that of their branches.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    Var(Name),
    Hole,
    Err(CTy),
    /// `abort V`; the ascription is the result type.
    Abort(Option<Type>, Tm),
    /// `inl V`; the ascription, when present, is the whole sum type.
    Inl(Option<VTy>, Tm),
    Inr(Option<VTy>, Tm),
    Case(Tm, Name, Tm, Name, Tm),
    UnitV,
    UnitSplit(Tm, Tm),
    PairV(Tm, Tm),
    Split(Tm, Name, Name, Tm),
    RollMu(VTy, Tm),
    /// `pm V as roll x. E`
    UnrollMu(Tm, Name, Tm),
    Thunk(Tm),
    Force(Tm),
    RetV(Tm),
    Bind(Tm, Name, Tm),
    Lam(Name, VTy, Tm),
    App(Tm, Tm),
    EmptyPair,
    WithPair(Tm, Tm),
    Fst(Tm),
    Snd(Tm),
    RollNu(CTy, Tm),
    UnrollNu(Tm),
    /// `up A A' V`: from `A` to the more dynamic `A'`.
    UpCast(VTy, VTy, Tm),
    /// `dn B B' M`: from the more dynamic `B'` down to `B`.
    DnCast(CTy, CTy, Tm),
}

/// Typing sort of a judgment: values, or computations with a stoup that
/// holds at most one hole type.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Sort {
    Value,
    Comp(Option<CTy>),
}

impl Term {
    /// Syntactic sort: `Some(true)` for values, `Some(false)` for
    /// computations, `None` when undetermined (an unascribed abort).
    pub fn is_value_syntax(&self) -> Option<bool> {
        match self {
            Term::Var(_)
            | Term::Inl(..)
            | Term::Inr(..)
            | Term::UnitV
            | Term::PairV(..)
            | Term::RollMu(..)
            | Term::Thunk(_)
            | Term::UpCast(..) => Some(true),
            Term::Hole
            | Term::Err(_)
            | Term::Force(_)
            | Term::RetV(_)
            | Term::Bind(..)
            | Term::Lam(..)
            | Term::App(..)
            | Term::EmptyPair
            | Term::WithPair(..)
            | Term::Fst(_)
            | Term::Snd(_)
            | Term::RollNu(..)
            | Term::UnrollNu(_)
            | Term::DnCast(..) => Some(false),
            Term::Abort(ann, _) => match ann {
                Some(Type::Val(_)) => Some(true),
                Some(Type::Comp(_)) => Some(false),
                None => None,
            },
            Term::Case(_, _, l, _, r) => l.is_value_syntax().or_else(|| r.is_value_syntax()),
            Term::UnitSplit(_, e) | Term::Split(_, _, _, e) | Term::UnrollMu(_, _, e) => e.is_value_syntax(),
        }
    }

    /// Number of syntax nodes, ignoring types.
    pub fn size(&self) -> usize {
        let mut n = 0;
        self.for_each_child(&mut |c| n += c.size());
        n + 1
    }

    pub fn for_each_child(&self, f: &mut dyn FnMut(&Tm)) {
        match self {
            Term::Var(_) | Term::Hole | Term::Err(_) | Term::UnitV | Term::EmptyPair => {}
            Term::Abort(_, a)
            | Term::Inl(_, a)
            | Term::Inr(_, a)
            | Term::RollMu(_, a)
            | Term::Thunk(a)
            | Term::Force(a)
            | Term::RetV(a)
            | Term::Lam(_, _, a)
            | Term::Fst(a)
            | Term::Snd(a)
            | Term::RollNu(_, a)
            | Term::UnrollNu(a)
            | Term::UpCast(_, _, a)
            | Term::DnCast(_, _, a) => f(a),
            Term::Case(s, _, l, _, r) => {
                f(s);
                f(l);
                f(r)
            }
            Term::UnitSplit(a, b)
            | Term::PairV(a, b)
            | Term::Split(a, _, _, b)
            | Term::UnrollMu(a, _, b)
            | Term::Bind(a, _, b)
            | Term::App(a, b)
            | Term::WithPair(a, b) => {
                f(a);
                f(b)
            }
        }
    }

    /// Does any cast node occur?
    pub fn has_casts(&self) -> bool {
        match self {
            Term::UpCast(..) | Term::DnCast(..) => true,
            _ => {
                let mut found = false;
                self.for_each_child(&mut |c| found = found || c.has_casts());
                found
            }
        }
    }
}

pub mod tm {
    //! Shorthand constructors returning shared terms.
    use super::*;

    pub fn var(x: impl Into<Name>) -> Tm {
        Arc::new(Term::Var(x.into()))
    }
    pub fn hole() -> Tm {
        Arc::new(Term::Hole)
    }
    pub fn err(b: CTy) -> Tm {
        Arc::new(Term::Err(b))
    }
    pub fn abort(t: Type, v: Tm) -> Tm {
        Arc::new(Term::Abort(Some(t), v))
    }
    pub fn inl(sum: VTy, v: Tm) -> Tm {
        Arc::new(Term::Inl(Some(sum), v))
    }
    pub fn inr(sum: VTy, v: Tm) -> Tm {
        Arc::new(Term::Inr(Some(sum), v))
    }
    pub fn case(s: Tm, x: impl Into<Name>, l: Tm, y: impl Into<Name>, r: Tm) -> Tm {
        Arc::new(Term::Case(s, x.into(), l, y.into(), r))
    }
    pub fn unit() -> Tm {
        Arc::new(Term::UnitV)
    }
    pub fn usplit(s: Tm, e: Tm) -> Tm {
        Arc::new(Term::UnitSplit(s, e))
    }
    pub fn pair(a: Tm, b: Tm) -> Tm {
        Arc::new(Term::PairV(a, b))
    }
    pub fn split(s: Tm, x: impl Into<Name>, y: impl Into<Name>, e: Tm) -> Tm {
        Arc::new(Term::Split(s, x.into(), y.into(), e))
    }
    pub fn roll(t: VTy, v: Tm) -> Tm {
        Arc::new(Term::RollMu(t, v))
    }
    pub fn pmroll(s: Tm, x: impl Into<Name>, e: Tm) -> Tm {
        Arc::new(Term::UnrollMu(s, x.into(), e))
    }
    pub fn thunk(m: Tm) -> Tm {
        Arc::new(Term::Thunk(m))
    }
    pub fn force(v: Tm) -> Tm {
        Arc::new(Term::Force(v))
    }
    pub fn ret(v: Tm) -> Tm {
        Arc::new(Term::RetV(v))
    }
    pub fn bind(m: Tm, x: impl Into<Name>, n: Tm) -> Tm {
        Arc::new(Term::Bind(m, x.into(), n))
    }
    pub fn lam(x: impl Into<Name>, a: VTy, m: Tm) -> Tm {
        Arc::new(Term::Lam(x.into(), a, m))
    }
    pub fn app(m: Tm, v: Tm) -> Tm {
        Arc::new(Term::App(m, v))
    }
    pub fn empty() -> Tm {
        Arc::new(Term::EmptyPair)
    }
    pub fn wpair(a: Tm, b: Tm) -> Tm {
        Arc::new(Term::WithPair(a, b))
    }
    pub fn fst(m: Tm) -> Tm {
        Arc::new(Term::Fst(m))
    }
    pub fn snd(m: Tm) -> Tm {
        Arc::new(Term::Snd(m))
    }
    pub fn rollnu(b: CTy, m: Tm) -> Tm {
        Arc::new(Term::RollNu(b, m))
    }
    pub fn unrollnu(m: Tm) -> Tm {
        Arc::new(Term::UnrollNu(m))
    }
    pub fn up(a: VTy, a2: VTy, v: Tm) -> Tm {
        Arc::new(Term::UpCast(a, a2, v))
    }
    pub fn dn(b: CTy, b2: CTy, m: Tm) -> Tm {
        Arc::new(Term::DnCast(b, b2, m))
    }
    /// `inl ()` at `1 + 1`.
    pub fn tt() -> Tm {
        inl(crate::syntax::ty::bool_(), unit())
    }
    /// `inr ()` at `1 + 1`.
    pub fn ff() -> Tm {
        inr(crate::syntax::ty::bool_(), unit())
    }
}
