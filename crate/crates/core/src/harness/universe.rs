//! The finite set of gradual types the law suite quantifies over.

use std::collections::BTreeSet;

use crate::dynamism::{derive_c, derive_v, DynDeriv};
use crate::syntax::{parse_ctype, parse_vtype, CTy, ComputationType, Term, Type, VTy, ValueType};

const VALUE_SEEDS: &[&str] = &[
    "0",
    "1",
    "?",
    "(+ 1 1)",
    "(+ ? ?)",
    "(* ? ?)",
    "(+ 1 ?)",
    "(* 1 ?)",
    "(+ 0 1)",
    "(* (+ 1 1) 1)",
    "(+ (+ 1 1) ?)",
    "(U dyncomp)",
    "(U top)",
    "(U (F 1))",
    "(U (F ?))",
    "(U (F (+ 1 1)))",
    "(U (-> ? (F ?)))",
    "(U (-> ? dyncomp))",
    "(U (& dyncomp dyncomp))",
    "(* (U (F ?)) ?)",
    "(U (-> (+ 1 1) (F (+ 1 1))))",
];

const COMP_SEEDS: &[&str] = &[
    "dyncomp",
    "top",
    "(F 0)",
    "(F 1)",
    "(F ?)",
    "(F (+ 1 1))",
    "(F (+ ? ?))",
    "(F (* ? ?))",
    "(F (U dyncomp))",
    "(-> 1 (F ?))",
    "(-> ? (F ?))",
    "(-> ? dyncomp)",
    "(-> (+ 1 1) (F (+ 1 1)))",
    "(-> (+ 1 1) (F ?))",
    "(& dyncomp dyncomp)",
    "(& (F 1) (F ?))",
    "(& (F ?) top)",
    "(& (F (+ 1 1)) (F (+ 1 1)))",
];

/// Gradual value and computation types, closed under subterms.
#[derive(Clone, Debug, Default)]
pub struct TypeUniverse {
    pub values: Vec<VTy>,
    pub comps: Vec<CTy>,
}

impl TypeUniverse {
    /// The seed types of nesting depth at most `depth + 1` (a base type has
    /// depth 1) together with all their subterms.
    pub fn new(depth: usize) -> TypeUniverse {
        let mut u = TypeUniverse::default();
        for s in VALUE_SEEDS {
            let a = parse_vtype(s).expect("seed type parses");
            if a.depth() <= depth + 1 {
                u.add_value(&a);
            }
        }
        for s in COMP_SEEDS {
            let b = parse_ctype(s).expect("seed type parses");
            if b.depth() <= depth + 1 {
                u.add_comp(&b);
            }
        }
        u.sort();
        u
    }

    fn sort(&mut self) {
        let vs: BTreeSet<VTy> = self.values.drain(..).collect();
        let cs: BTreeSet<CTy> = self.comps.drain(..).collect();
        self.values = vs.into_iter().collect();
        self.comps = cs.into_iter().collect();
        self.values.sort_by_key(|a| (a.size(), a.to_string()));
        self.comps.sort_by_key(|b| (b.size(), b.to_string()));
    }

    pub fn add_value(&mut self, a: &VTy) {
        if self.values.contains(a) || !a.is_closed() || a.mentions_recursion() {
            return;
        }
        self.values.push(a.clone());
        match &**a {
            ValueType::Sum(l, r) | ValueType::Prod(l, r) => {
                self.add_value(l);
                self.add_value(r);
            }
            ValueType::Thunk(b) => self.add_comp(b),
            _ => {}
        }
    }

    pub fn add_comp(&mut self, b: &CTy) {
        if self.comps.contains(b) || !b.is_closed() || b.mentions_recursion() {
            return;
        }
        self.comps.push(b.clone());
        match &**b {
            ComputationType::Ret(a) => self.add_value(a),
            ComputationType::With(l, r) => {
                self.add_comp(l);
                self.add_comp(r);
            }
            ComputationType::Arrow(a, r) => {
                self.add_value(a);
                self.add_comp(r);
            }
            _ => {}
        }
    }

    /// Add every type mentioned by a cast or annotation in `t`.
    pub fn add_types_of(&mut self, t: &Term) {
        match t {
            Term::UpCast(a, a2, _) => {
                self.add_value(a);
                self.add_value(a2);
            }
            Term::DnCast(b, b2, _) => {
                self.add_comp(b);
                self.add_comp(b2);
            }
            Term::Lam(_, a, _) | Term::Inl(Some(a), _) | Term::Inr(Some(a), _) => self.add_value(a),
            Term::Err(b) => self.add_comp(b),
            Term::Abort(Some(Type::Val(a)), _) => self.add_value(a),
            Term::Abort(Some(Type::Comp(b)), _) => self.add_comp(b),
            _ => {}
        }
        t.for_each_child(&mut |c| self.add_types_of(c));
        self.sort();
    }

    /// Every derivable `A ⊑ A'` with `A ≠ A'`, value pairs first.
    pub fn strict_pairs(&self) -> Vec<DynDeriv> {
        let mut out = Vec::new();
        for a in &self.values {
            for a2 in &self.values {
                if a != a2 {
                    out.extend(derive_v(a, a2));
                }
            }
        }
        for b in &self.comps {
            for b2 in &self.comps {
                if b != b2 {
                    out.extend(derive_c(b, b2));
                }
            }
        }
        out
    }

    pub fn contains(&self, t: &Type) -> bool {
        match t {
            Type::Val(a) => self.values.contains(a),
            Type::Comp(b) => self.comps.contains(b),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{parse_term, ty};

    #[test]
    fn contains_required_types() {
        let u = TypeUniverse::new(3);
        for a in [ty::dyn_(), ty::unit(), ty::bool_()] {
            assert!(u.contains(&Type::Val(a)));
        }
        assert!(u.contains(&Type::Comp(ty::codyn())));
    }

    #[test]
    fn closed_under_subterms() {
        let u = TypeUniverse::new(3);
        for a in &u.values {
            if let ValueType::Thunk(b) = &**a {
                assert!(u.comps.contains(b));
            }
        }
        for b in &u.comps {
            if let ComputationType::Arrow(a, r) = &**b {
                assert!(u.values.contains(a) && u.comps.contains(r));
            }
        }
    }

    #[test]
    fn depth_bounds_the_universe() {
        let small = TypeUniverse::new(1);
        let big = TypeUniverse::new(3);
        assert!(small.values.len() < big.values.len());
        assert!(small.values.iter().all(|a| big.values.contains(a)));
    }

    #[test]
    fn corpus_types_are_added() {
        let mut u = TypeUniverse::new(1);
        let t = parse_term("(dn (F (* 1 1)) (F ?) (ret (up 1 ? unit)))").unwrap().term;
        u.add_types_of(&t);
        assert!(u.contains(&Type::Val(parse_vtype("(* 1 1)").unwrap())));
    }
}
