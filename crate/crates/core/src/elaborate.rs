//! Cast-to-contract translation from the gradual language into the
//! recursive core.
//!
//! Upcasts become complex values and downcasts complex stacks, both by
//! recursion on the normalized dynamism derivation.

use std::sync::Arc;

use crate::dynamism::{derive_c, derive_v, DynDeriv};
use crate::dyninterp::{embed_cvar, embed_var, CGround, Interp, VGround};
use crate::syntax::{plug_stack, subst_value, tm, ty, ComputationType, Fresh, Name, Term, Tm, Type, ValueType};

pub struct Elaborator<'a> {
    interp: &'a Interp,
    fresh: Fresh,
}

impl<'a> Elaborator<'a> {
    /// An elaborator whose fresh names avoid every name in `avoid`.
    pub fn new(interp: &'a Interp, avoid: &Term) -> Self {
        let mut fresh = Fresh::avoiding(avoid);
        fresh.reserve(&embed_var());
        fresh.reserve(&embed_cvar());
        Elaborator { interp, fresh }
    }

    fn var(&mut self, base: &str) -> Name {
        self.fresh.fresh(base)
    }

    /// The upcast along a value derivation, applied to the value `v`.
    pub fn up(&mut self, d: &DynDeriv, v: Tm) -> Tm {
        let i = self.interp;
        match d {
            DynDeriv::VRefl(_) => v,
            DynDeriv::ZeroBot(a) => match **a {
                ValueType::Zero => v,
                _ => tm::abort(Type::Val(i.interp_v(a)), v),
            },
            DynDeriv::ToDyn(inner) => {
                let g = VGround::of(&inner.rhs_v()).expect("floor is a ground");
                let arg = self.up(inner, v);
                subst_value(i.embed_v(g), &embed_var(), &arg)
            }
            DynDeriv::SumMon(l, r) => {
                let target = i.interp_v(&d.rhs_v());
                let (x1, x2) = (self.var("x"), self.var("x"));
                let lv = self.up(l, tm::var(x1.clone()));
                let rv = self.up(r, tm::var(x2.clone()));
                tm::case(v, x1, tm::inl(target.clone(), lv), x2, tm::inr(target, rv))
            }
            DynDeriv::ProdMon(l, r) => {
                let (x1, x2) = (self.var("x"), self.var("x"));
                let lv = self.up(l, tm::var(x1.clone()));
                let rv = self.up(r, tm::var(x2.clone()));
                tm::split(v, x1, x2, tm::pair(lv, rv))
            }
            DynDeriv::UMon(dc) => self.up_thunk(dc, v),
            _ => panic!("computation derivation {d} used as a value upcast"),
        }
    }

    /// Upcast `U B ⊑ U B'` along the computation derivation `B ⊑ B'`.
    pub fn up_thunk(&mut self, dc: &DynDeriv, v: Tm) -> Tm {
        let i = self.interp;
        match dc {
            DynDeriv::CoDynRefl => v,
            DynDeriv::TopBot(b) => match **b {
                ComputationType::Top => v,
                _ => tm::thunk(tm::err(i.interp_c(b))),
            },
            DynDeriv::CToDyn(inner) => {
                let g = CGround::of(&inner.rhs_c()).expect("floor is a ground");
                let arg = self.up_thunk(inner, v);
                subst_value(i.embed_c(g), &embed_cvar(), &arg)
            }
            DynDeriv::FMon(dv) => {
                let y = self.var("y");
                let body = self.up(dv, tm::var(y.clone()));
                tm::thunk(tm::bind(tm::force(v), y, tm::ret(body)))
            }
            DynDeriv::WithMon(l, r) => {
                let lv = self.up_thunk(l, tm::thunk(tm::fst(tm::force(v.clone()))));
                let rv = self.up_thunk(r, tm::thunk(tm::snd(tm::force(v))));
                tm::thunk(tm::wpair(tm::force(lv), tm::force(rv)))
            }
            DynDeriv::ArrowMon(da, db) => {
                let xp = self.var("x");
                let x1 = self.var("x");
                let dom = i.interp_v(&da.rhs_v());
                let arg = self.dn_ret(da, tm::ret(tm::var(xp.clone())));
                let res = self.up_thunk(db, tm::thunk(tm::app(tm::force(v), tm::var(x1.clone()))));
                tm::thunk(tm::lam(xp, dom, tm::bind(arg, x1, tm::force(res))))
            }
            _ => panic!("value derivation {dc} used as a computation cast"),
        }
    }

    /// The downcast along a computation derivation, applied to `m`.
    pub fn dn(&mut self, dc: &DynDeriv, m: Tm) -> Tm {
        let i = self.interp;
        match dc {
            DynDeriv::CoDynRefl => m,
            DynDeriv::TopBot(b) => match **b {
                ComputationType::Top => m,
                _ => tm::empty(),
            },
            DynDeriv::CToDyn(inner) => {
                let g = CGround::of(&inner.rhs_c()).expect("floor is a ground");
                let projected = plug_stack(i.project_c(g), &m);
                self.dn(inner, projected)
            }
            DynDeriv::FMon(dv) => self.dn_ret(dv, m),
            DynDeriv::WithMon(l, r) => {
                let lm = self.dn(l, tm::fst(m.clone()));
                let rm = self.dn(r, tm::snd(m));
                tm::wpair(lm, rm)
            }
            DynDeriv::ArrowMon(da, db) => {
                let x = self.var("x");
                let dom = i.interp_v(&da.lhs_v());
                let arg = self.up(da, tm::var(x.clone()));
                let body = self.dn(db, tm::app(m, arg));
                tm::lam(x, dom, body)
            }
            _ => panic!("value derivation {dc} used as a computation cast"),
        }
    }

    /// Downcast `F A ⊑ F A'` along the value derivation `A ⊑ A'`.
    pub fn dn_ret(&mut self, dv: &DynDeriv, m: Tm) -> Tm {
        let i = self.interp;
        match dv {
            DynDeriv::VRefl(_) => m,
            DynDeriv::ZeroBot(a) => match **a {
                ValueType::Zero => m,
                _ => tm::bind(m, self.var("x"), tm::err(ty::ret(ty::zero()))),
            },
            DynDeriv::ToDyn(inner) => {
                let g = VGround::of(&inner.rhs_v()).expect("floor is a ground");
                let projected = plug_stack(i.project_v(g), &m);
                self.dn_ret(inner, projected)
            }
            DynDeriv::SumMon(l, r) => {
                let target = i.interp_v(&dv.lhs_v());
                let xp = self.var("x");
                let (x1p, x2p) = (self.var("x"), self.var("x"));
                let (x1, x2) = (self.var("x"), self.var("x"));
                let lm = self.dn_ret(l, tm::ret(tm::var(x1p.clone())));
                let rm = self.dn_ret(r, tm::ret(tm::var(x2p.clone())));
                let lb = tm::bind(lm, x1.clone(), tm::ret(tm::inl(target.clone(), tm::var(x1))));
                let rb = tm::bind(rm, x2.clone(), tm::ret(tm::inr(target, tm::var(x2))));
                tm::bind(m, xp.clone(), tm::case(tm::var(xp), x1p, lb, x2p, rb))
            }
            DynDeriv::ProdMon(l, r) => {
                let p = self.var("p");
                let (x1p, x2p) = (self.var("x"), self.var("x"));
                let (x1, x2) = (self.var("x"), self.var("x"));
                let lm = self.dn_ret(l, tm::ret(tm::var(x1p.clone())));
                let rm = self.dn_ret(r, tm::ret(tm::var(x2p.clone())));
                let body =
                    tm::bind(lm, x1.clone(), tm::bind(rm, x2.clone(), tm::ret(tm::pair(tm::var(x1), tm::var(x2)))));
                tm::bind(m, p.clone(), tm::split(tm::var(p), x1p, x2p, body))
            }
            DynDeriv::UMon(dc) => {
                let xp = self.var("x");
                let inner = self.dn(dc, tm::force(tm::var(xp.clone())));
                tm::bind(m, xp, tm::ret(tm::thunk(inner)))
            }
            _ => panic!("computation derivation {dv} used as a value downcast"),
        }
    }

    /// Translate a typechecked gradual term, compiling each cast.
    pub fn term(&mut self, e: &Tm) -> Tm {
        let i = self.interp;
        let t = match &**e {
            Term::Var(_) | Term::Hole | Term::UnitV | Term::EmptyPair => return e.clone(),
            Term::Err(b) => Term::Err(i.interp_c(b)),
            Term::Abort(a, v) => Term::Abort(a.as_ref().map(|a| i.interp_type(a)), self.term(v)),
            Term::Inl(a, v) => Term::Inl(a.as_ref().map(|a| i.interp_v(a)), self.term(v)),
            Term::Inr(a, v) => Term::Inr(a.as_ref().map(|a| i.interp_v(a)), self.term(v)),
            Term::Case(s, x, l, y, r) => Term::Case(self.term(s), x.clone(), self.term(l), y.clone(), self.term(r)),
            Term::UnitSplit(s, b) => Term::UnitSplit(self.term(s), self.term(b)),
            Term::PairV(a, b) => Term::PairV(self.term(a), self.term(b)),
            Term::Split(s, x, y, b) => Term::Split(self.term(s), x.clone(), y.clone(), self.term(b)),
            Term::RollMu(a, v) => Term::RollMu(i.interp_v(a), self.term(v)),
            Term::UnrollMu(s, x, b) => Term::UnrollMu(self.term(s), x.clone(), self.term(b)),
            Term::Thunk(m) => Term::Thunk(self.term(m)),
            Term::Force(v) => Term::Force(self.term(v)),
            Term::RetV(v) => Term::RetV(self.term(v)),
            Term::Bind(m, x, n) => Term::Bind(self.term(m), x.clone(), self.term(n)),
            Term::Lam(x, a, m) => Term::Lam(x.clone(), i.interp_v(a), self.term(m)),
            Term::App(m, v) => Term::App(self.term(m), self.term(v)),
            Term::WithPair(a, b) => Term::WithPair(self.term(a), self.term(b)),
            Term::Fst(m) => Term::Fst(self.term(m)),
            Term::Snd(m) => Term::Snd(self.term(m)),
            Term::RollNu(b, m) => Term::RollNu(i.interp_c(b), self.term(m)),
            Term::UnrollNu(m) => Term::UnrollNu(self.term(m)),
            Term::UpCast(a, a2, v) => {
                let d = derive_v(a, a2).expect("upcast was typechecked");
                let v = self.term(v);
                return self.up(&d, v);
            }
            Term::DnCast(b, b2, m) => {
                let d = derive_c(b, b2).expect("downcast was typechecked");
                let m = self.term(m);
                return self.dn(&d, m);
            }
        };
        Arc::new(t)
    }
}

/// `x : ⟦A⟧ ⊢ elab_upcast(d) : ⟦A'⟧`, free in the variable `x`.
pub fn elab_upcast(d: &DynDeriv, interp: &Interp) -> Tm {
    let x = tm::var(embed_var());
    Elaborator::new(interp, &x).up(d, x)
}

/// `• : ⟦B'⟧ ⊢ elab_dncast(d) : ⟦B⟧`.
pub fn elab_dncast(d: &DynDeriv, interp: &Interp) -> Tm {
    let h = tm::hole();
    Elaborator::new(interp, &h).dn(d, h)
}

/// Elaborate a typechecked gradual term.
pub fn elab_term(e: &Tm, interp: &Interp) -> Tm {
    Elaborator::new(interp, e).term(e)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyninterp::InterpKind;
    use crate::syntax::types::{cty_eq, vty_eq};
    use crate::syntax::{parse_ctype, parse_term, parse_vtype, stage_check, Stage};
    use crate::typecheck::{check_program, infer_comp, infer_value, TypeEnv};

    fn natural() -> &'static Interp {
        InterpKind::Natural.interp()
    }

    #[test]
    fn reflexive_casts_are_identities() {
        let d = derive_v(&ty::unit(), &ty::unit()).unwrap();
        assert_eq!(elab_upcast(&d, natural()), tm::var("x"));
        let d = derive_c(&ty::codyn(), &ty::codyn()).unwrap();
        assert_eq!(elab_dncast(&d, natural()), tm::hole());
    }

    #[test]
    fn product_and_zero_shapes() {
        let a = parse_vtype("(* 1 1)").unwrap();
        let d = derive_v(&a, &a).unwrap();
        let up = elab_upcast(&d, natural());
        assert!(matches!(&*up, Term::Split(v, _, _, body)
            if **v == Term::Var(Name::from("x")) && matches!(**body, Term::PairV(..))));
        let d = derive_v(&ty::zero(), &ty::dyn_()).unwrap();
        let up = elab_upcast(&d, natural());
        assert!(matches!(&*up, Term::Abort(..)));
        let d = derive_c(&parse_ctype("(F 0)").unwrap(), &parse_ctype("(F ?)").unwrap()).unwrap();
        let dn = elab_dncast(&d, natural());
        assert!(matches!(&*dn, Term::Bind(h, _, e) if **h == Term::Hole && matches!(**e, Term::Err(_))));
    }

    #[test]
    fn product_downcast_is_left_to_right() {
        let b = parse_ctype("(F (* 1 1))").unwrap();
        let b2 = parse_ctype("(F (* ? ?))").unwrap();
        let dn = elab_dncast(&derive_c(&b, &b2).unwrap(), natural());
        let s = dn.to_string();
        let first = s.find("x_2").unwrap();
        let second = s.find("x_3").unwrap();
        assert!(first < second, "{s}");
        assert!(s.starts_with("(bind p_0 hole (split p_0 (x_0 x_1)"), "{s}");
    }

    #[test]
    fn upcast_to_dyn_embeds() {
        let e = parse_term("(ret (up 1 ? unit))").unwrap().term;
        let out = elab_term(&e, natural());
        let d = natural().val_dyn.clone();
        let inner = crate::syntax::types::unroll_mu(&d).unwrap();
        assert_eq!(out, tm::ret(tm::roll(d, tm::inl(inner, tm::unit()))));
    }

    // Every cast between types in a small universe elaborates to a
    // well-typed value / stack of the right stage.
    #[test]
    fn casts_preserve_types() {
        let vs = ["1", "0", "?", "(+ 1 ?)", "(* ? 1)", "(U (F ?))", "(U (-> 1 (F 1)))", "(U (& (F 1) top))"];
        let cs = ["(F 1)", "dyncomp", "top", "(-> ? (F 1))", "(& dyncomp (F ?))", "(-> (+ 1 1) dyncomp)"];
        for k in InterpKind::ALL {
            let i = k.interp();
            for a in vs {
                let a = parse_vtype(a).unwrap();
                for targ in [a.clone(), ty::dyn_()] {
                    let Some(d) = derive_v(&a, &targ) else { continue };
                    let up = elab_upcast(&d, i);
                    stage_check(&up, Stage::CbpvStar).unwrap();
                    let env = TypeEnv::new().with_var("x", i.interp_v(&a));
                    let (_, got) = infer_value(&env, &up).unwrap();
                    assert!(vty_eq(&got, &i.interp_v(&targ)), "{k} up {a} {targ}");
                    let (fa, ft) = (ty::ret(a.clone()), ty::ret(targ.clone()));
                    let dn = elab_dncast(&derive_c(&fa, &ft).unwrap(), i);
                    let env = TypeEnv::new().with_stoup(i.interp_c(&ft));
                    let (_, got) = infer_comp(&env, &dn).unwrap();
                    assert!(cty_eq(&got, &i.interp_c(&fa)), "{k} dn {fa} {ft}");
                }
            }
            for b in cs {
                let b = parse_ctype(b).unwrap();
                let d = derive_c(&b, &ty::codyn()).unwrap();
                let dn = elab_dncast(&d, i);
                stage_check(&dn, Stage::CbpvStar).unwrap();
                let env = TypeEnv::new().with_stoup(i.comp_dyn.clone());
                let (_, got) = infer_comp(&env, &dn).unwrap();
                assert!(cty_eq(&got, &i.interp_c(&b)), "{k} dn {b}");
                let ua = ty::thunk(b.clone());
                let up = elab_upcast(&derive_v(&ua, &ty::thunk(ty::codyn())).unwrap(), i);
                let env = TypeEnv::new().with_var("x", i.interp_v(&ua));
                let (_, got) = infer_value(&env, &up).unwrap();
                assert!(vty_eq(&got, &ty::thunk(i.comp_dyn.clone())), "{k} up {ua}");
            }
        }
    }

    #[test]
    fn program_elaboration_typechecks() {
        let src = "(dn (F (+ 1 1)) (F ?) (ret (up (+ 1 1) ? (inl (+ 1 1) unit))))";
        let e = check_program(&parse_term(src).unwrap().term).unwrap();
        for k in InterpKind::ALL {
            let out = elab_term(&e, k.interp());
            stage_check(&out, Stage::CbpvStar).unwrap();
            check_program(&out).unwrap();
        }
    }
}
