//! Type dynamism `A ⊑ A'` and `B ⊑ B'` in the normalized rule system.
//!
//! Derivations are syntax directed: at most one exists for a given pair,
//! and casts are compiled by recursion on it.

use std::fmt;

use thiserror::Error;

use crate::syntax::{ty, CTy, ComputationType, Type, VTy, ValueType};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum DynDeriv {
    /// `? ⊑ ?` or `1 ⊑ 1`.
    VRefl(VTy),
    /// `0 ⊑ A` for `A` one of `0`, `?`; carries `A`.
    ZeroBot(VTy),
    /// `A ⊑ ?` through the floor; the premise concludes `A ⊑ ⌊A⌋`.
    ToDyn(Box<DynDeriv>),
    UMon(Box<DynDeriv>),
    SumMon(Box<DynDeriv>, Box<DynDeriv>),
    ProdMon(Box<DynDeriv>, Box<DynDeriv>),
    CoDynRefl,
    /// `⊤ ⊑ B` for `B` one of `⊤`, `¿`; carries `B`.
    TopBot(CTy),
    CToDyn(Box<DynDeriv>),
    FMon(Box<DynDeriv>),
    WithMon(Box<DynDeriv>, Box<DynDeriv>),
    ArrowMon(Box<DynDeriv>, Box<DynDeriv>),
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
pub enum DynError {
    #[error("type {0} has no floor")]
    NoFloor(Type),
}

/// Ground type with the same outer connective as `a`.
pub fn floor_v(a: &VTy) -> Result<VTy, DynError> {
    match &**a {
        ValueType::Unit => Ok(ty::unit()),
        ValueType::Prod(..) => Ok(ty::prod(ty::dyn_(), ty::dyn_())),
        ValueType::Sum(..) => Ok(ty::sum(ty::dyn_(), ty::dyn_())),
        ValueType::Thunk(_) => Ok(ty::thunk(ty::codyn())),
        _ => Err(DynError::NoFloor(Type::Val(a.clone()))),
    }
}

pub fn floor_c(b: &CTy) -> Result<CTy, DynError> {
    match &**b {
        ComputationType::Ret(_) => Ok(ty::ret(ty::dyn_())),
        ComputationType::With(..) => Ok(ty::with(ty::codyn(), ty::codyn())),
        ComputationType::Arrow(..) => Ok(ty::arrow(ty::dyn_(), ty::codyn())),
        _ => Err(DynError::NoFloor(Type::Comp(b.clone()))),
    }
}

pub fn derive_v(a: &VTy, a2: &VTy) -> Option<DynDeriv> {
    use ValueType as V;
    match (&**a, &**a2) {
        (V::Dyn, V::Dyn) => Some(DynDeriv::VRefl(a.clone())),
        (V::Zero, V::Dyn | V::Zero) => Some(DynDeriv::ZeroBot(a2.clone())),
        (_, V::Dyn) => {
            let g = floor_v(a).ok()?;
            derive_v(a, &g).map(|d| DynDeriv::ToDyn(Box::new(d)))
        }
        (V::Unit, V::Unit) => Some(DynDeriv::VRefl(a.clone())),
        (V::Sum(l, r), V::Sum(l2, r2)) => {
            Some(DynDeriv::SumMon(Box::new(derive_v(l, l2)?), Box::new(derive_v(r, r2)?)))
        }
        (V::Prod(l, r), V::Prod(l2, r2)) => {
            Some(DynDeriv::ProdMon(Box::new(derive_v(l, l2)?), Box::new(derive_v(r, r2)?)))
        }
        (V::Thunk(b), V::Thunk(b2)) => Some(DynDeriv::UMon(Box::new(derive_c(b, b2)?))),
        _ => None,
    }
}

pub fn derive_c(b: &CTy, b2: &CTy) -> Option<DynDeriv> {
    use ComputationType as C;
    match (&**b, &**b2) {
        (C::CoDyn, C::CoDyn) => Some(DynDeriv::CoDynRefl),
        (C::Top, C::CoDyn | C::Top) => Some(DynDeriv::TopBot(b2.clone())),
        (_, C::CoDyn) => {
            let g = floor_c(b).ok()?;
            derive_c(b, &g).map(|d| DynDeriv::CToDyn(Box::new(d)))
        }
        (C::Ret(a), C::Ret(a2)) => Some(DynDeriv::FMon(Box::new(derive_v(a, a2)?))),
        (C::With(l, r), C::With(l2, r2)) => {
            Some(DynDeriv::WithMon(Box::new(derive_c(l, l2)?), Box::new(derive_c(r, r2)?)))
        }
        (C::Arrow(a, r), C::Arrow(a2, r2)) => {
            Some(DynDeriv::ArrowMon(Box::new(derive_v(a, a2)?), Box::new(derive_c(r, r2)?)))
        }
        _ => None,
    }
}

/// Either sort; `None` when the sorts differ or no derivation exists.
pub fn derive(a: &Type, b: &Type) -> Option<DynDeriv> {
    match (a, b) {
        (Type::Val(a), Type::Val(b)) => derive_v(a, b),
        (Type::Comp(a), Type::Comp(b)) => derive_c(a, b),
        _ => None,
    }
}

impl DynDeriv {
    pub fn is_value(&self) -> bool {
        matches!(
            self,
            DynDeriv::VRefl(_)
                | DynDeriv::ZeroBot(_)
                | DynDeriv::ToDyn(_)
                | DynDeriv::UMon(_)
                | DynDeriv::SumMon(..)
                | DynDeriv::ProdMon(..)
        )
    }

    /// Left-hand side of the conclusion.
    pub fn lhs(&self) -> Type {
        match self {
            DynDeriv::VRefl(a) => Type::Val(a.clone()),
            DynDeriv::ZeroBot(_) => Type::Val(ty::zero()),
            DynDeriv::ToDyn(d) | DynDeriv::CToDyn(d) => d.lhs(),
            DynDeriv::UMon(d) => Type::Val(ty::thunk(d.lhs_c())),
            DynDeriv::SumMon(l, r) => Type::Val(ty::sum(l.lhs_v(), r.lhs_v())),
            DynDeriv::ProdMon(l, r) => Type::Val(ty::prod(l.lhs_v(), r.lhs_v())),
            DynDeriv::CoDynRefl => Type::Comp(ty::codyn()),
            DynDeriv::TopBot(_) => Type::Comp(ty::top()),
            DynDeriv::FMon(d) => Type::Comp(ty::ret(d.lhs_v())),
            DynDeriv::WithMon(l, r) => Type::Comp(ty::with(l.lhs_c(), r.lhs_c())),
            DynDeriv::ArrowMon(a, b) => Type::Comp(ty::arrow(a.lhs_v(), b.lhs_c())),
        }
    }

    /// Right-hand side of the conclusion.
    pub fn rhs(&self) -> Type {
        match self {
            DynDeriv::VRefl(a) | DynDeriv::ZeroBot(a) => Type::Val(a.clone()),
            DynDeriv::ToDyn(_) => Type::Val(ty::dyn_()),
            DynDeriv::CToDyn(_) | DynDeriv::CoDynRefl => Type::Comp(ty::codyn()),
            DynDeriv::UMon(d) => Type::Val(ty::thunk(d.rhs_c())),
            DynDeriv::SumMon(l, r) => Type::Val(ty::sum(l.rhs_v(), r.rhs_v())),
            DynDeriv::ProdMon(l, r) => Type::Val(ty::prod(l.rhs_v(), r.rhs_v())),
            DynDeriv::TopBot(b) => Type::Comp(b.clone()),
            DynDeriv::FMon(d) => Type::Comp(ty::ret(d.rhs_v())),
            DynDeriv::WithMon(l, r) => Type::Comp(ty::with(l.rhs_c(), r.rhs_c())),
            DynDeriv::ArrowMon(a, b) => Type::Comp(ty::arrow(a.rhs_v(), b.rhs_c())),
        }
    }

    pub fn lhs_v(&self) -> VTy {
        match self.lhs() {
            Type::Val(a) => a,
            Type::Comp(b) => panic!("value derivation expected, found {b}"),
        }
    }

    pub fn lhs_c(&self) -> CTy {
        match self.lhs() {
            Type::Comp(b) => b,
            Type::Val(a) => panic!("computation derivation expected, found {a}"),
        }
    }

    pub fn rhs_v(&self) -> VTy {
        match self.rhs() {
            Type::Val(a) => a,
            Type::Comp(b) => panic!("value derivation expected, found {b}"),
        }
    }

    pub fn rhs_c(&self) -> CTy {
        match self.rhs() {
            Type::Comp(b) => b,
            Type::Val(a) => panic!("computation derivation expected, found {a}"),
        }
    }

    /// Does the derivation conclude `A ⊑ A`?
    pub fn is_reflexive(&self) -> bool {
        match self {
            DynDeriv::VRefl(_) | DynDeriv::CoDynRefl => true,
            DynDeriv::ZeroBot(a) => matches!(**a, ValueType::Zero),
            DynDeriv::TopBot(b) => matches!(**b, ComputationType::Top),
            DynDeriv::ToDyn(_) | DynDeriv::CToDyn(_) => false,
            DynDeriv::UMon(d) | DynDeriv::FMon(d) => d.is_reflexive(),
            DynDeriv::SumMon(l, r) | DynDeriv::ProdMon(l, r) | DynDeriv::WithMon(l, r) | DynDeriv::ArrowMon(l, r) => {
                l.is_reflexive() && r.is_reflexive()
            }
        }
    }

    pub fn rule_name(&self) -> &'static str {
        match self {
            DynDeriv::VRefl(_) => "VRefl",
            DynDeriv::ZeroBot(_) => "ZeroBot",
            DynDeriv::ToDyn(_) => "ToDyn",
            DynDeriv::UMon(_) => "UMon",
            DynDeriv::SumMon(..) => "SumMon",
            DynDeriv::ProdMon(..) => "ProdMon",
            DynDeriv::CoDynRefl => "CoDynRefl",
            DynDeriv::TopBot(_) => "TopBot",
            DynDeriv::CToDyn(_) => "CToDyn",
            DynDeriv::FMon(_) => "FMon",
            DynDeriv::WithMon(..) => "WithMon",
            DynDeriv::ArrowMon(..) => "ArrowMon",
        }
    }

    /// Premises in display order.
    pub fn premises(&self) -> Vec<&DynDeriv> {
        match self {
            DynDeriv::VRefl(_) | DynDeriv::ZeroBot(_) | DynDeriv::CoDynRefl | DynDeriv::TopBot(_) => {
                vec![]
            }
            DynDeriv::ToDyn(d) | DynDeriv::CToDyn(d) | DynDeriv::UMon(d) | DynDeriv::FMon(d) => {
                vec![d]
            }
            DynDeriv::SumMon(l, r) | DynDeriv::ProdMon(l, r) | DynDeriv::WithMon(l, r) | DynDeriv::ArrowMon(l, r) => {
                vec![l, r]
            }
        }
    }

    /// Number of nodes in the printed tree (see [`DynDeriv::tree`]).
    pub fn printed_nodes(&self) -> usize {
        1 + self.shown_premises().iter().map(|d| d.printed_nodes()).sum::<usize>()
    }

    // A ground type's own floor premise is the identity and is elided.
    fn shown_premises(&self) -> Vec<&DynDeriv> {
        match self {
            DynDeriv::ToDyn(d) | DynDeriv::CToDyn(d) if d.is_reflexive() => vec![],
            _ => self.premises(),
        }
    }

    /// Indented tree, one rule per line, conclusion first.
    pub fn tree(&self) -> String {
        let mut out = String::new();
        self.write_tree(0, &mut out);
        out
    }

    fn write_tree(&self, indent: usize, out: &mut String) {
        out.push_str(&"  ".repeat(indent));
        out.push_str(&format!("{}: {} ⊑ {}\n", self.rule_name(), self.lhs(), self.rhs()));
        for p in self.shown_premises() {
            p.write_tree(indent + 1, out);
        }
    }
}

impl fmt::Display for DynDeriv {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ps = self.premises();
        if ps.is_empty() {
            match self {
                DynDeriv::VRefl(a) => write!(f, "VRefl({a})"),
                DynDeriv::ZeroBot(a) => write!(f, "ZeroBot({a})"),
                DynDeriv::TopBot(b) => write!(f, "TopBot({b})"),
                _ => write!(f, "{}", self.rule_name()),
            }
        } else {
            write!(f, "{}(", self.rule_name())?;
            for (i, p) in ps.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{p}")?;
            }
            write!(f, ")")
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::types::{cty_eq, vty_eq};
    use crate::syntax::{parse_ctype, parse_vtype};
    use proptest::prelude::*;

    fn v(s: &str) -> VTy {
        parse_vtype(s).unwrap()
    }
    fn c(s: &str) -> CTy {
        parse_ctype(s).unwrap()
    }

    #[test]
    fn floors() {
        assert_eq!(floor_v(&v("(+ 1 1)")).unwrap(), v("(+ ? ?)"));
        assert_eq!(floor_v(&v("(U (-> 1 (F 1)))")).unwrap(), v("(U dyncomp)"));
        assert!(floor_v(&ty::dyn_()).is_err());
        assert!(floor_v(&ty::zero()).is_err());
        assert_eq!(floor_c(&c("(F (* 1 1))")).unwrap(), c("(F ?)"));
        assert_eq!(floor_c(&c("(-> ? (F ?))")).unwrap(), c("(-> ? dyncomp)"));
        assert!(floor_c(&ty::top()).is_err());
        assert!(floor_c(&ty::codyn()).is_err());
    }

    #[test]
    fn derivation_examples() {
        assert_eq!(derive_v(&ty::zero(), &ty::dyn_()), Some(DynDeriv::ZeroBot(ty::dyn_())));
        let d = derive_v(&v("(U (F 1))"), &v("(U (F ?))")).unwrap();
        assert_eq!(d.to_string(), "UMon(FMon(ToDyn(VRefl(1))))");
        assert_eq!(d.printed_nodes(), 3);
        assert!(derive_v(&ty::dyn_(), &ty::unit()).is_none());
        assert_eq!(derive_c(&ty::top(), &ty::codyn()), Some(DynDeriv::TopBot(ty::codyn())));
        let d = derive_c(&c("(-> 1 (F 1))"), &c("(-> ? (F ?))")).unwrap();
        assert_eq!(d.to_string(), "ArrowMon(ToDyn(VRefl(1)), FMon(ToDyn(VRefl(1))))");
        assert!(derive_c(&c("(F ?)"), &c("(F 1)")).is_none());
        assert!(derive_v(&ty::zero(), &ty::unit()).is_none());
    }

    #[test]
    fn conclusions_recovered() {
        let a = v("(* (+ 1 0) (U (& top (F ?))))");
        let d = derive_v(&a, &ty::dyn_()).unwrap();
        assert!(vty_eq(&d.lhs_v(), &a));
        assert!(vty_eq(&d.rhs_v(), &ty::dyn_()));
        let b = c("(-> (+ 1 1) (& (F 1) top))");
        let d = derive_c(&b, &ty::codyn()).unwrap();
        assert!(cty_eq(&d.lhs_c(), &b));
    }

    // Independent search over every rule instance, with no dispatch order.
    fn all_v(a: &VTy, a2: &VTy) -> Vec<DynDeriv> {
        use ValueType as V;
        let mut out = vec![];
        if matches!((&**a, &**a2), (V::Dyn, V::Dyn) | (V::Unit, V::Unit)) {
            out.push(DynDeriv::VRefl(a.clone()));
        }
        if matches!(**a, V::Zero) && matches!(**a2, V::Zero | V::Dyn) {
            out.push(DynDeriv::ZeroBot(a2.clone()));
        }
        if matches!(**a2, V::Dyn) && !matches!(**a, V::Dyn | V::Zero) {
            if let Ok(g) = floor_v(a) {
                for d in all_v(a, &g) {
                    out.push(DynDeriv::ToDyn(Box::new(d)));
                }
            }
        }
        match (&**a, &**a2) {
            (V::Sum(l, r), V::Sum(l2, r2)) => {
                for x in all_v(l, l2) {
                    for y in all_v(r, r2) {
                        out.push(DynDeriv::SumMon(Box::new(x.clone()), Box::new(y)));
                    }
                }
            }
            (V::Prod(l, r), V::Prod(l2, r2)) => {
                for x in all_v(l, l2) {
                    for y in all_v(r, r2) {
                        out.push(DynDeriv::ProdMon(Box::new(x.clone()), Box::new(y)));
                    }
                }
            }
            (V::Thunk(b), V::Thunk(b2)) => out.extend(all_c(b, b2).into_iter().map(|d| DynDeriv::UMon(Box::new(d)))),
            _ => {}
        }
        out
    }

    fn all_c(b: &CTy, b2: &CTy) -> Vec<DynDeriv> {
        use ComputationType as C;
        let mut out = vec![];
        if matches!((&**b, &**b2), (C::CoDyn, C::CoDyn)) {
            out.push(DynDeriv::CoDynRefl);
        }
        if matches!(**b, C::Top) && matches!(**b2, C::Top | C::CoDyn) {
            out.push(DynDeriv::TopBot(b2.clone()));
        }
        if matches!(**b2, C::CoDyn) && !matches!(**b, C::CoDyn | C::Top) {
            if let Ok(g) = floor_c(b) {
                for d in all_c(b, &g) {
                    out.push(DynDeriv::CToDyn(Box::new(d)));
                }
            }
        }
        match (&**b, &**b2) {
            (C::Ret(a), C::Ret(a2)) => out.extend(all_v(a, a2).into_iter().map(|d| DynDeriv::FMon(Box::new(d)))),
            (C::With(l, r), C::With(l2, r2)) => {
                for x in all_c(l, l2) {
                    for y in all_c(r, r2) {
                        out.push(DynDeriv::WithMon(Box::new(x.clone()), Box::new(y)));
                    }
                }
            }
            (C::Arrow(l, r), C::Arrow(l2, r2)) => {
                for x in all_v(l, l2) {
                    for y in all_c(r, r2) {
                        out.push(DynDeriv::ArrowMon(Box::new(x.clone()), Box::new(y)));
                    }
                }
            }
            _ => {}
        }
        out
    }

    fn arb_vty() -> impl Strategy<Value = VTy> {
        let leaf = prop_oneof![Just(ty::dyn_()), Just(ty::unit()), Just(ty::zero())];
        leaf.prop_recursive(3, 16, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| ty::sum(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| ty::prod(a, b)),
                inner.clone().prop_map(|a| ty::thunk(ty::ret(a))),
                inner.clone().prop_map(|a| ty::thunk(ty::arrow(a, ty::codyn()))),
                inner.clone().prop_map(|a| ty::thunk(ty::with(ty::ret(a), ty::top()))),
            ]
        })
    }

    // Lower a type towards the bottom by replacing random subterms by more
    // precise ones, so related pairs are common.
    fn lower(a: &VTy, bits: &mut impl Iterator<Item = bool>) -> VTy {
        use ValueType as V;
        match &**a {
            V::Dyn => {
                if bits.next().unwrap_or(false) {
                    ty::sum(ty::unit(), ty::dyn_())
                } else {
                    a.clone()
                }
            }
            V::Sum(l, r) => ty::sum(lower(l, bits), lower(r, bits)),
            V::Prod(l, r) => ty::prod(lower(l, bits), lower(r, bits)),
            _ => a.clone(),
        }
    }

    proptest! {
        #[test]
        fn reflexive_and_complete(a in arb_vty()) {
            let r = derive_v(&a, &a).unwrap();
            prop_assert!(r.is_reflexive());
            prop_assert!(derive_v(&a, &ty::dyn_()).is_some());
            let b = ty::thunk(ty::arrow(a.clone(), ty::ret(a.clone())));
            prop_assert!(derive_c(&ty::arrow(a.clone(), ty::ret(a)), &ty::codyn()).is_some());
            prop_assert!(derive_v(&b, &b).is_some());
        }

        #[test]
        fn unique_derivations(a in arb_vty(), b in arb_vty()) {
            let all = all_v(&a, &b);
            prop_assert!(all.len() <= 1);
            prop_assert_eq!(all.into_iter().next(), derive_v(&a, &b));
        }

        #[test]
        fn transitive(c in arb_vty(), bits1 in prop::collection::vec(any::<bool>(), 8),
                      bits2 in prop::collection::vec(any::<bool>(), 8)) {
            let b = lower(&c, &mut bits1.into_iter());
            let a = lower(&b, &mut bits2.into_iter());
            if derive_v(&a, &b).is_some() && derive_v(&b, &c).is_some() {
                prop_assert!(derive_v(&a, &c).is_some());
            }
        }
    }
}
