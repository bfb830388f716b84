//! Hand-written pairs of gradual programs where the right one is the left
//! one with some types made more dynamic.
//!
//! A pair is checked by upcasting each free variable of the left program's
//! context into the right one's, downcasting the right program's result,
//! and requiring the left program to error-approximate the result.

use crate::dynamism::{derive_c, derive_v};
use crate::elaborate::elab_term;
use crate::syntax::{parse_ctype, parse_term, parse_vtype, subst_value, tm, CTy, Name, Tm, VTy};
use crate::typecheck::{check_comp, TypeEnv};

use super::{Harness, Outcome, Subject};

#[derive(Clone, Debug)]
pub struct GradualityPair {
    pub name: &'static str,
    /// `(x, A, A')` with `A ⊑ A'`.
    pub env: Vec<(Name, VTy, VTy)>,
    pub lhs: Tm,
    pub rhs: Tm,
    pub ty: CTy,
    pub ty2: CTy,
}

type Row = (
    &'static str,
    &'static [(&'static str, &'static str, &'static str)],
    &'static str,
    &'static str,
    &'static str,
    &'static str,
);

// `bool`, `#t` and `#f` abbreviate the boolean type and its values.
const ROWS: &[Row] = &[
    ("identity-function", &[], "(lam (x bool) (ret x))", "(lam (x ?) (ret x))", "(-> bool (F bool))", "(-> ? (F ?))"),
    (
        "negation",
        &[],
        "(lam (x bool) (case x (inl a (ret #f)) (inr b (ret #t))))",
        "(lam (x ?) (bind c (dn (F bool) (F ?) (ret x)) (case c (inl a (ret (up bool ? #f))) (inr b (ret (up bool ? #t))))))",
        "(-> bool (F bool))",
        "(-> ? (F ?))",
    ),
    ("constant-function", &[], "(lam (x bool) (ret #t))", "(lam (x ?) (ret (up bool ? #t)))", "(-> bool (F bool))", "(-> ? (F ?))"),
    ("error-below-value", &[], "(err (F bool))", "(ret #t)", "(F bool)", "(F bool)"),
    ("error-below-dynamic", &[], "(err (F bool))", "(ret (up bool ? #f))", "(F bool)", "(F ?)"),
    ("return-upcast", &[], "(ret #t)", "(ret (up bool ? #t))", "(F bool)", "(F ?)"),
    ("variable", &[("x", "bool", "?")], "(ret x)", "(ret x)", "(F bool)", "(F ?)"),
    (
        "branch-on-dynamic",
        &[("x", "bool", "?")],
        "(case x (inl a (ret #f)) (inr b (ret #t)))",
        "(bind c (dn (F bool) (F ?) (ret x)) (case c (inl a (ret #f)) (inr b (ret #t))))",
        "(F bool)",
        "(F bool)",
    ),
    (
        "thunk-result",
        &[],
        "(ret (thunk (ret #t)))",
        "(ret (thunk (ret (up bool ? #t))))",
        "(F (U (F bool)))",
        "(F (U (F ?)))",
    ),
    (
        "apply-wrapped-function",
        &[("f", "(U (-> bool (F bool)))", "(U (-> ? (F ?)))")],
        "(app (force f) #t)",
        "(app (force f) (up bool ? #t))",
        "(F bool)",
        "(F ?)",
    ),
    (
        "apply-twice",
        &[("f", "(U (-> bool (F bool)))", "(U (-> ? (F ?)))")],
        "(bind y (app (force f) #t) (app (force f) y))",
        "(bind y (app (force f) (up bool ? #t)) (app (force f) y))",
        "(F bool)",
        "(F ?)",
    ),
    (
        "apply-fully-dynamic",
        &[("f", "(U (-> bool (F bool)))", "(U dyncomp)")],
        "(app (force f) #t)",
        "(app (dn (-> ? dyncomp) dyncomp (force f)) (up bool ? #t))",
        "(F bool)",
        "dyncomp",
    ),
    (
        "project-pair",
        &[("p", "(* bool bool)", "(* ? ?)")],
        "(split p (a b) (ret a))",
        "(split p (a b) (ret a))",
        "(F bool)",
        "(F ?)",
    ),
    (
        "pair-from-dynamic",
        &[("p", "(* bool bool)", "?")],
        "(split p (a b) (ret b))",
        "(bind q (dn (F (* ? ?)) (F ?) (ret p)) (split q (a b) (ret b)))",
        "(F bool)",
        "(F ?)",
    ),
    (
        "sum-branches",
        &[("s", "(+ 1 bool)", "(+ ? ?)")],
        "(case s (inl a (ret #f)) (inr b (ret b)))",
        "(case s (inl a (ret (up bool ? #f))) (inr b (ret b)))",
        "(F bool)",
        "(F ?)",
    ),
    (
        "lazy-pair",
        &[],
        "(wpair (ret #t) (ret #f))",
        "(wpair (force (up (U (F bool)) (U dyncomp) (thunk (ret #t)))) (force (up (U (F bool)) (U dyncomp) (thunk (ret #f)))))",
        "(& (F bool) (F bool))",
        "(& dyncomp dyncomp)",
    ),
    ("dynamic-variable", &[("x", "?", "?")], "(ret x)", "(ret x)", "(F ?)", "(F ?)"),
    (
        "downcast-on-left",
        &[("x", "?", "?")],
        "(bind b (dn (F bool) (F ?) (ret x)) (ret b))",
        "(ret x)",
        "(F bool)",
        "(F ?)",
    ),
    ("upcast-on-left", &[("x", "bool", "?")], "(ret (up bool ? x))", "(ret x)", "(F ?)", "(F ?)"),
    ("erroring-function", &[], "(lam (x bool) (err (F bool)))", "(lam (x ?) (ret x))", "(-> bool (F bool))", "(-> ? (F ?))"),
    ("force-thunk", &[("x", "(U (F bool))", "(U (F ?))")], "(force x)", "(force x)", "(F bool)", "(F ?)"),
    ("widen-result", &[], "(lam (x bool) (ret (up bool ? x)))", "(lam (x ?) (ret x))", "(-> bool (F ?))", "(-> ? (F ?))"),
    (
        "callback",
        &[("k", "(U (-> (U (-> bool (F bool))) (F bool)))", "(U (-> ? (F ?)))")],
        "(app (force k) (thunk (lam (b bool) (ret b))))",
        "(app (force k) (up (U (-> bool (F bool))) ? (thunk (lam (b bool) (ret b)))))",
        "(F bool)",
        "(F ?)",
    ),
    (
        "dynamic-self-application",
        &[],
        "(ret #t)",
        "(bind g (dn (F (U (-> ? (F ?)))) (F ?) (ret (up (U (-> ? (F ?))) ? (thunk (lam (y ?) (ret y)))))) (app (force g) (up bool ? #t)))",
        "(F bool)",
        "(F ?)",
    ),
];

fn expand(s: &str) -> String {
    s.replace("bool", "(+ 1 1)").replace("#t", "(inl (+ 1 1) unit)").replace("#f", "(inr (+ 1 1) unit)")
}

/// The built-in graduality corpus.
pub fn pairs() -> Vec<GradualityPair> {
    ROWS.iter()
        .map(|(name, env, l, r, b, b2)| GradualityPair {
            name,
            env: env
                .iter()
                .map(|(x, a, a2)| (Name::from(*x), parse_vtype(&expand(a)).unwrap(), parse_vtype(&expand(a2)).unwrap()))
                .collect(),
            lhs: parse_term(&expand(l)).unwrap().term,
            rhs: parse_term(&expand(r)).unwrap().term,
            ty: parse_ctype(&expand(b)).unwrap(),
            ty2: parse_ctype(&expand(b2)).unwrap(),
        })
        .collect()
}

impl GradualityPair {
    /// Both sides over the left context: the left program as written, the
    /// right one with upcast variables and a downcast result.
    pub fn assemble(&self) -> Result<(Tm, Tm), String> {
        let mut lenv = TypeEnv::new();
        let mut renv = TypeEnv::new();
        let mut rhs = self.rhs.clone();
        for (x, a, a2) in &self.env {
            if derive_v(a, a2).is_none() {
                return Err(format!("{a} is not below {a2}"));
            }
            lenv = lenv.with_var(x.clone(), a.clone());
            renv = renv.with_var(x.clone(), a2.clone());
            rhs = subst_value(&rhs, x, &tm::up(a.clone(), a2.clone(), tm::var(x.clone())));
        }
        if derive_c(&self.ty, &self.ty2).is_none() {
            return Err(format!("{} is not below {}", self.ty, self.ty2));
        }
        check_comp(&renv, &self.rhs, &self.ty2).map_err(|e| format!("right program: {e}"))?;
        let lhs = check_comp(&lenv, &self.lhs, &self.ty).map_err(|e| format!("left program: {e}"))?;
        let rhs = tm::dn(self.ty.clone(), self.ty2.clone(), rhs);
        let rhs = check_comp(&lenv, &rhs, &self.ty).map_err(|e| format!("assembled program: {e}"))?;
        Ok((lhs, rhs))
    }
}

impl Harness {
    pub fn check_graduality(&self, pair: &GradualityPair) -> Outcome {
        let (lhs, rhs) = match pair.assemble() {
            Ok(p) => p,
            Err(e) => {
                return Outcome {
                    instances: 0,
                    failures: vec![super::Failure {
                        observer: "<setup>".into(),
                        lhs_result: e,
                        rhs_result: String::new(),
                    }],
                }
            }
        };
        let i = self.interp;
        let b = i.interp_c(&pair.ty);
        let subject = |t: &Tm| {
            let mut s = Subject::comp(elab_term(t, i), b.clone());
            for (x, a, _) in &pair.env {
                s = s.with_var(x.clone(), i.interp_v(a));
            }
            s
        };
        self.check_obs_leq(&subject(&lhs), &subject(&rhs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyninterp::InterpKind;

    #[test]
    fn at_least_twenty_pairs() {
        assert!(pairs().len() >= 20);
    }

    #[test]
    fn every_pair_assembles() {
        for p in pairs() {
            p.assemble().unwrap_or_else(|e| panic!("{}: {e}", p.name));
        }
    }

    #[test]
    fn identity_function_pair_passes() {
        let p = pairs().into_iter().find(|p| p.name == "identity-function").unwrap();
        for kind in InterpKind::ALL {
            let out = Harness::new(kind, 2).check_graduality(&p);
            assert!(out.passed(), "{kind}: {out:?}");
            assert!(out.instances > 0);
        }
    }

    #[test]
    fn reversed_pair_is_refuted() {
        // Making the error the more dynamic side breaks the ordering.
        let mut p = pairs().into_iter().find(|p| p.name == "error-below-value").unwrap();
        std::mem::swap(&mut p.lhs, &mut p.rhs);
        let out = Harness::new(InterpKind::Natural, 2).check_graduality(&p);
        assert!(!out.passed());
    }
}
