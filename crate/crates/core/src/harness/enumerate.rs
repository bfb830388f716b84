//! Closed values of core types, to a bounded depth.
//!
//! Depth is spent only by `rollmu`, `rollnu` and `thunk`; sums, products and
//! unit are free. Thunks come from a fixed schema: error, divergence, and
//! constant computations.

use crate::syntax::{tm, ty, unroll_mu, unroll_nu, CTy, ComputationType, Name, Tm, VTy, ValueType};

use super::{thin, Harness};

/// `Ω_B`: a closed, operational, divergent computation of any type.
pub fn omega(b: &CTy) -> Tm {
    let a = ty::mu("X", ty::thunk(ty::arrow(ty::vvar("X"), b.clone())));
    let f = tm::thunk(tm::lam(
        "w",
        a.clone(),
        tm::pmroll(tm::var("w"), "y", tm::app(tm::force(tm::var("y")), tm::var("w"))),
    ));
    tm::app(tm::force(f.clone()), tm::roll(a, f))
}

impl Harness {
    /// All closed values of `a` with at most `depth` recursive or thunk
    /// layers, thinned to the value cap.
    pub fn values(&self, a: &VTy, depth: usize) -> std::sync::Arc<Vec<Tm>> {
        let key = (a.clone(), depth);
        if let Some(v) = self.value_cache.lock().unwrap().get(&key) {
            return v.clone();
        }
        let out = std::sync::Arc::new(thin(self.values_raw(a, depth), self.caps.values));
        self.value_cache.lock().unwrap().insert(key, out.clone());
        out
    }

    fn values_raw(&self, a: &VTy, depth: usize) -> Vec<Tm> {
        match &**a {
            ValueType::Zero => vec![],
            ValueType::Unit => vec![tm::unit()],
            ValueType::Sum(l, r) => {
                let mut out: Vec<Tm> = self.values(l, depth).iter().map(|v| tm::inl(a.clone(), v.clone())).collect();
                out.extend(self.values(r, depth).iter().map(|v| tm::inr(a.clone(), v.clone())));
                out
            }
            ValueType::Prod(l, r) => {
                let (ls, rs) = (self.values(l, depth), self.values(r, depth));
                let mut out = Vec::with_capacity(ls.len() * rs.len());
                for x in ls.iter() {
                    for y in rs.iter() {
                        out.push(tm::pair(x.clone(), y.clone()));
                    }
                }
                out
            }
            ValueType::Thunk(b) => {
                if depth == 0 {
                    return vec![];
                }
                let mut out = vec![tm::thunk(tm::err(b.clone())), tm::thunk(omega(b))];
                out.extend(self.constants(b, depth - 1).into_iter().map(tm::thunk));
                out
            }
            ValueType::Mu(..) => {
                if depth == 0 {
                    return vec![];
                }
                let body = unroll_mu(a).expect("mu type");
                self.values(&body, depth - 1).iter().map(|v| tm::roll(a.clone(), v.clone())).collect()
            }
            ValueType::Dyn | ValueType::Var(_) => panic!("enumerating values of a non-core type {a}"),
        }
    }

    /// Computations of `b` that ignore their arguments and return a fixed
    /// answer, plus the identity function where the types allow it.
    pub fn constants(&self, b: &CTy, depth: usize) -> Vec<Tm> {
        let out = match &**b {
            ComputationType::Ret(a) => self.values(a, depth).iter().map(|v| tm::ret(v.clone())).collect(),
            ComputationType::Arrow(a, r) => {
                let x = Name::from("a");
                let mut out = Vec::new();
                if let ComputationType::Ret(ra) = &**r {
                    if ra == a {
                        out.push(tm::lam(x.clone(), a.clone(), tm::ret(tm::var(x.clone()))));
                    }
                }
                out.extend(self.constants(r, depth).into_iter().map(|m| tm::lam(x.clone(), a.clone(), m)));
                out
            }
            ComputationType::With(l, r) => {
                let mut ls = self.constants(l, depth);
                ls.push(tm::err(l.clone()));
                let mut rs = self.constants(r, depth);
                rs.push(tm::err(r.clone()));
                let mut out = Vec::new();
                for x in &ls {
                    for y in &rs {
                        out.push(tm::wpair(x.clone(), y.clone()));
                    }
                }
                out
            }
            ComputationType::Top => vec![tm::empty()],
            ComputationType::Nu(..) => {
                if depth == 0 {
                    return vec![];
                }
                let body = unroll_nu(b).expect("nu type");
                self.constants(&body, depth - 1).into_iter().map(|m| tm::rollnu(b.clone(), m)).collect()
            }
            ComputationType::CoDyn | ComputationType::Var(_) => {
                panic!("enumerating computations of a non-core type {b}")
            }
        };
        thin(out, self.caps.values)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyninterp::InterpKind;
    use crate::machine::{eval, RunResult};
    use crate::syntax::parse_vtype;
    use crate::typecheck::{check_value, TypeEnv};

    fn h() -> Harness {
        Harness::new(InterpKind::Natural, 3)
    }

    #[test]
    fn booleans_at_depth_one() {
        let vs = h().values(&ty::bool_(), 1);
        let shown: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        assert_eq!(shown, ["(inl (+ 1 1) unit)", "(inr (+ 1 1) unit)"]);
    }

    #[test]
    fn empty_type_has_no_values() {
        for d in 0..4 {
            assert!(h().values(&ty::zero(), d).is_empty());
        }
    }

    #[test]
    fn dyn_values_include_nested_rolls() {
        let h = h();
        let d = h.interp.val_dyn.clone();
        let vs = h.values(&d, 2);
        let shown: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
        let unit = h.interp.embed_v(crate::dyninterp::VGround::Unit);
        let unit = crate::syntax::subst_value(unit, &crate::dyninterp::embed_var(), &tm::unit());
        assert!(vs.contains(&unit), "{shown:?}");
        // roll (inj3 (inl (roll (inj1 unit)))): the sum slot holding a dynamic unit.
        let sum = h.interp.embed_v(crate::dyninterp::VGround::Sum);
        let inner = tm::inl(ty::sum(d.clone(), d.clone()), unit.clone());
        let nested = crate::syntax::subst_value(sum, &crate::dyninterp::embed_var(), &inner);
        assert!(vs.contains(&nested), "{shown:?}");
    }

    #[test]
    fn values_typecheck() {
        let h = h();
        for src in ["(+ 1 (* 1 1))", "(U (-> (+ 1 1) (F (+ 1 1))))", "(U (& (F 1) top))"] {
            let a = parse_vtype(src).unwrap();
            for v in h.values(&a, 2).iter() {
                check_value(&TypeEnv::new(), v, &a).unwrap();
            }
        }
        let d = h.interp.val_dyn.clone();
        for v in h.values(&d, 3).iter() {
            check_value(&TypeEnv::new(), v, &d).unwrap();
        }
    }

    #[test]
    fn omega_diverges() {
        let m = omega(&ty::program());
        crate::typecheck::check_program(&m).unwrap();
        assert_eq!(eval(&m, 5000).unwrap().result, RunResult::Timeout);
    }
}
