//! The law catalogue: cast identity, decomposition and ep-pair laws, the
//! β/η rows of each connective, error strictness, thunkability and
//! linearity of de-complexified terms, plus whole-program checks.

use crate::decomplexify::{simp_stack, simp_value};
use crate::dynamism::{derive_c, derive_v, floor_c, floor_v, DynDeriv};
use crate::elaborate::Elaborator;
use crate::syntax::{plug_stack, subst_value, tm, ty, ComputationType, Fresh, Tm, Type, ValueType};

use super::{gen, graduality, thin, Cell, Harness, Outcome, Subject, TypeUniverse};

/// Law names in report order.
pub const LAWS: &[&str] = &[
    "identity",
    "decomposition",
    "ep-retraction",
    "ep-projection",
    "retract-axiom",
    "beta-sum",
    "eta-sum",
    "beta-prod",
    "eta-prod",
    "beta-unit",
    "eta-unit",
    "beta-thunk",
    "eta-thunk",
    "beta-ret",
    "eta-ret",
    "beta-fun",
    "eta-fun",
    "beta-with",
    "eta-with",
    "eta-top",
    "err-bot",
    "stk-strict",
    "graduality",
    "thunkability",
    "linearity",
    "differential",
];

fn elab(h: &Harness) -> Elaborator<'static> {
    Elaborator::new(h.interp, &tm::unit())
}

/// `x : ⟦A⟧ ⊢ up(d) x : ⟦A'⟧` for a value derivation, or
/// `z : U⟦B⟧ ⊢ up(d) z : U⟦B'⟧` for a computation derivation.
pub fn upcast_subject(h: &Harness, d: &DynDeriv) -> Subject {
    let i = h.interp;
    if d.is_value() {
        let t = elab(h).up(d, tm::var("x"));
        Subject::value(t, i.interp_v(&d.rhs_v())).with_var("x", i.interp_v(&d.lhs_v()))
    } else {
        let t = elab(h).up_thunk(d, tm::var("z"));
        Subject::value(t, ty::thunk(i.interp_c(&d.rhs_c()))).with_var("z", ty::thunk(i.interp_c(&d.lhs_c())))
    }
}

/// The downcast stack: `• : F⟦A'⟧ ⊢ F⟦A⟧` or `• : ⟦B'⟧ ⊢ ⟦B⟧`.
pub fn downcast_subject(h: &Harness, d: &DynDeriv) -> Subject {
    let (from, to) = cast_comp_types(h, d);
    let t = downcast_stack(h, d);
    Subject::comp(t, to).with_stoup(from)
}

fn downcast_stack(h: &Harness, d: &DynDeriv) -> Tm {
    let mut e = elab(h);
    if d.is_value() {
        e.dn_ret(d, tm::hole())
    } else {
        e.dn(d, tm::hole())
    }
}

/// Interpreted `(source, target)` computation types of the downcast.
fn cast_comp_types(h: &Harness, d: &DynDeriv) -> (crate::syntax::CTy, crate::syntax::CTy) {
    let i = h.interp;
    if d.is_value() {
        (ty::ret(i.interp_v(&d.rhs_v())), ty::ret(i.interp_v(&d.lhs_v())))
    } else {
        (i.interp_c(&d.rhs_c()), i.interp_c(&d.lhs_c()))
    }
}

fn identity_subject(s: &Subject) -> Subject {
    let mut out = s.clone();
    out.term = if s.stoup.is_some() { tm::hole() } else { tm::var(s.env[0].0.clone()) };
    out
}

/// Upcast and downcast along the reflexive derivation are identities.
pub fn check_identity(h: &Harness, t: &Type) -> Outcome {
    let d = match t {
        Type::Val(a) => derive_v(a, a),
        Type::Comp(b) => derive_c(b, b),
    }
    .expect("dynamism is reflexive");
    let mut out = Outcome::default();
    let up = upcast_subject(h, &d);
    out.absorb(h.check_obs_eq(&up, &identity_subject(&up)));
    let dn = downcast_subject(h, &d);
    out.absorb(h.check_obs_eq(&dn, &identity_subject(&dn)));
    out
}

/// Casting along `d1 : A ⊑ A'` then `d2 : A' ⊑ A''` agrees with casting
/// along the direct derivation, for upcasts and downcasts alike.
pub fn check_decomposition(h: &Harness, d1: &DynDeriv, d2: &DynDeriv) -> Outcome {
    let direct = if d1.is_value() { derive_v(&d1.lhs_v(), &d2.rhs_v()) } else { derive_c(&d1.lhs_c(), &d2.rhs_c()) }
        .expect("dynamism is transitive");
    let mut out = Outcome::default();

    let up = upcast_subject(h, &direct);
    let mut composite = up.clone();
    let mut e = elab(h);
    composite.term = if direct.is_value() {
        let inner = e.up(d1, tm::var("x"));
        e.up(d2, inner)
    } else {
        let inner = e.up_thunk(d1, tm::var("z"));
        e.up_thunk(d2, inner)
    };
    out.absorb(h.check_obs_eq(&composite, &up));

    let dn = downcast_subject(h, &direct);
    let mut composite = dn.clone();
    let mut e = elab(h);
    composite.term = if direct.is_value() {
        let inner = e.dn_ret(d2, tm::hole());
        e.dn_ret(d1, inner)
    } else {
        let inner = e.dn(d2, tm::hole());
        e.dn(d1, inner)
    };
    out.absorb(h.check_obs_eq(&composite, &dn));
    out
}

/// Retraction (`dn ∘ up` is the identity) as an equation.
pub fn check_retraction(h: &Harness, d: &DynDeriv) -> Outcome {
    let i = h.interp;
    let mut e = elab(h);
    let (lhs, rhs) = if d.is_value() {
        let a = i.interp_v(&d.lhs_v());
        let up = e.up(d, tm::var("x"));
        let m = e.dn_ret(d, tm::ret(up));
        let b = ty::ret(a.clone());
        (Subject::comp(m, b.clone()).with_var("x", a.clone()), Subject::comp(tm::ret(tm::var("x")), b).with_var("x", a))
    } else {
        let b = i.interp_c(&d.lhs_c());
        let up = e.up_thunk(d, tm::var("z"));
        let m = e.dn(d, tm::force(up));
        let zt = ty::thunk(b.clone());
        (
            Subject::comp(m, b.clone()).with_var("z", zt.clone()),
            Subject::comp(tm::force(tm::var("z")), b).with_var("z", zt),
        )
    };
    h.check_obs_eq(&lhs, &rhs)
}

/// Projection (`up ∘ dn` error-approximates the identity).
pub fn check_projection(h: &Harness, d: &DynDeriv) -> Outcome {
    let i = h.interp;
    let mut e = elab(h);
    let (lhs, rhs) = if d.is_value() {
        let a2 = i.interp_v(&d.rhs_v());
        let dn = e.dn_ret(d, tm::ret(tm::var("x")));
        let up = e.up(d, tm::var("y"));
        let m = tm::bind(dn, "y", tm::ret(up));
        let b = ty::ret(a2.clone());
        (
            Subject::comp(m, b.clone()).with_var("x", a2.clone()),
            Subject::comp(tm::ret(tm::var("x")), b).with_var("x", a2),
        )
    } else {
        let b2 = i.interp_c(&d.rhs_c());
        let dn = e.dn(d, tm::force(tm::var("z")));
        let up = e.up_thunk(d, tm::thunk(dn));
        let zt = ty::thunk(b2.clone());
        (
            Subject::comp(tm::force(up), b2.clone()).with_var("z", zt.clone()),
            Subject::comp(tm::force(tm::var("z")), b2).with_var("z", zt),
        )
    };
    h.check_obs_leq(&lhs, &rhs)
}

impl Harness {
    /// Both ep-pair laws for one derivation.
    pub fn check_ep_pair(&self, d: &DynDeriv) -> Outcome {
        let mut out = check_retraction(self, d);
        out.absorb(check_projection(self, d));
        out
    }
}

// β/η rows, instantiated at interpreted universe types.

fn var(x: &str) -> Tm {
    tm::var(x)
}

fn eq(h: &Harness, l: Subject, r: Subject) -> Outcome {
    h.check_obs_eq(&l, &r)
}

fn beta_sum(h: &Harness, a: &crate::syntax::VTy) -> Outcome {
    let (l, r) = match &**a {
        ValueType::Sum(l, r) => (l.clone(), r.clone()),
        _ => unreachable!(),
    };
    let swapped = ty::sum(r.clone(), l.clone());
    let swap = |s: Tm| {
        tm::case(s, "l", tm::ret(tm::inr(swapped.clone(), var("l"))), "r", tm::ret(tm::inl(swapped.clone(), var("r"))))
    };
    let b = ty::ret(swapped.clone());
    let mut out = eq(
        h,
        Subject::comp(swap(tm::inl(a.clone(), var("x"))), b.clone()).with_var("x", l.clone()),
        Subject::comp(tm::ret(tm::inr(swapped.clone(), var("x"))), b.clone()).with_var("x", l),
    );
    out.absorb(eq(
        h,
        Subject::comp(swap(tm::inr(a.clone(), var("x"))), b.clone()).with_var("x", r.clone()),
        Subject::comp(tm::ret(tm::inl(swapped, var("x"))), b).with_var("x", r),
    ));
    out
}

fn eta_sum(h: &Harness, a: &crate::syntax::VTy) -> Outcome {
    let m = tm::case(var("x"), "l", tm::ret(tm::inl(a.clone(), var("l"))), "r", tm::ret(tm::inr(a.clone(), var("r"))));
    let b = ty::ret(a.clone());
    eq(
        h,
        Subject::comp(tm::ret(var("x")), b.clone()).with_var("x", a.clone()),
        Subject::comp(m, b).with_var("x", a.clone()),
    )
}

fn beta_prod(h: &Harness, a: &crate::syntax::VTy) -> Outcome {
    let (l, r) = match &**a {
        ValueType::Prod(l, r) => (l.clone(), r.clone()),
        _ => unreachable!(),
    };
    let b = ty::ret(ty::prod(r.clone(), l.clone()));
    let m = tm::split(tm::pair(var("x"), var("y")), "p", "q", tm::ret(tm::pair(var("q"), var("p"))));
    eq(
        h,
        Subject::comp(m, b.clone()).with_var("x", l.clone()).with_var("y", r.clone()),
        Subject::comp(tm::ret(tm::pair(var("y"), var("x"))), b).with_var("x", l).with_var("y", r),
    )
}

fn eta_prod(h: &Harness, a: &crate::syntax::VTy) -> Outcome {
    let b = ty::ret(a.clone());
    let m = tm::split(var("x"), "p", "q", tm::ret(tm::pair(var("p"), var("q"))));
    eq(
        h,
        Subject::comp(tm::ret(var("x")), b.clone()).with_var("x", a.clone()),
        Subject::comp(m, b).with_var("x", a.clone()),
    )
}

fn beta_unit(h: &Harness, a: &crate::syntax::VTy) -> Outcome {
    let b = ty::ret(a.clone());
    eq(
        h,
        Subject::comp(tm::usplit(tm::unit(), tm::ret(var("x"))), b.clone()).with_var("x", a.clone()),
        Subject::comp(tm::ret(var("x")), b).with_var("x", a.clone()),
    )
}

fn eta_unit(h: &Harness) -> Outcome {
    let b = ty::ret(ty::unit());
    eq(
        h,
        Subject::comp(tm::ret(var("x")), b.clone()).with_var("x", ty::unit()),
        Subject::comp(tm::usplit(var("x"), tm::ret(tm::unit())), b).with_var("x", ty::unit()),
    )
}

fn beta_thunk(h: &Harness, b: &crate::syntax::CTy) -> Outcome {
    let zt = ty::thunk(b.clone());
    eq(
        h,
        Subject::comp(tm::force(tm::thunk(tm::force(var("z")))), b.clone()).with_var("z", zt.clone()),
        Subject::comp(tm::force(var("z")), b.clone()).with_var("z", zt),
    )
}

fn eta_thunk(h: &Harness, b: &crate::syntax::CTy) -> Outcome {
    let zt = ty::thunk(b.clone());
    let f = ty::ret(zt.clone());
    eq(
        h,
        Subject::comp(tm::ret(var("x")), f.clone()).with_var("x", zt.clone()),
        Subject::comp(tm::ret(tm::thunk(tm::force(var("x")))), f).with_var("x", zt),
    )
}

fn beta_ret(h: &Harness, a: &crate::syntax::VTy) -> Outcome {
    let b = ty::ret(ty::prod(a.clone(), a.clone()));
    let m = tm::bind(tm::ret(var("x")), "y", tm::ret(tm::pair(var("y"), var("y"))));
    eq(
        h,
        Subject::comp(m, b.clone()).with_var("x", a.clone()),
        Subject::comp(tm::ret(tm::pair(var("x"), var("x"))), b).with_var("x", a.clone()),
    )
}

fn eta_ret(h: &Harness, a: &crate::syntax::VTy) -> Outcome {
    let b = ty::ret(a.clone());
    eq(
        h,
        Subject::comp(tm::hole(), b.clone()).with_stoup(b.clone()),
        Subject::comp(tm::bind(tm::hole(), "y", tm::ret(var("y"))), b.clone()).with_stoup(b),
    )
}

fn beta_fun(h: &Harness, b: &crate::syntax::CTy) -> Outcome {
    let (a, r) = match &**b {
        ComputationType::Arrow(a, r) => (a.clone(), r.clone()),
        _ => unreachable!(),
    };
    let zt = ty::thunk(b.clone());
    let lam = tm::lam("y", a.clone(), tm::app(tm::force(var("z")), var("y")));
    eq(
        h,
        Subject::comp(tm::app(lam, var("x")), r.clone()).with_var("x", a.clone()).with_var("z", zt.clone()),
        Subject::comp(tm::app(tm::force(var("z")), var("x")), r).with_var("x", a).with_var("z", zt),
    )
}

fn eta_fun(h: &Harness, b: &crate::syntax::CTy) -> Outcome {
    let a = match &**b {
        ComputationType::Arrow(a, _) => a.clone(),
        _ => unreachable!(),
    };
    eq(
        h,
        Subject::comp(tm::hole(), b.clone()).with_stoup(b.clone()),
        Subject::comp(tm::lam("y", a, tm::app(tm::hole(), var("y"))), b.clone()).with_stoup(b.clone()),
    )
}

fn beta_with(h: &Harness, b: &crate::syntax::CTy) -> Outcome {
    let (l, r) = match &**b {
        ComputationType::With(l, r) => (l.clone(), r.clone()),
        _ => unreachable!(),
    };
    let pair = tm::wpair(tm::force(var("z")), tm::force(var("w")));
    let env = |s: Subject| s.with_var("z", ty::thunk(l.clone())).with_var("w", ty::thunk(r.clone()));
    let mut out =
        eq(h, env(Subject::comp(tm::fst(pair.clone()), l.clone())), env(Subject::comp(tm::force(var("z")), l.clone())));
    out.absorb(eq(h, env(Subject::comp(tm::snd(pair), r.clone())), env(Subject::comp(tm::force(var("w")), r.clone()))));
    out
}

fn eta_with(h: &Harness, b: &crate::syntax::CTy) -> Outcome {
    eq(
        h,
        Subject::comp(tm::hole(), b.clone()).with_stoup(b.clone()),
        Subject::comp(tm::wpair(tm::fst(tm::hole()), tm::snd(tm::hole())), b.clone()).with_stoup(b.clone()),
    )
}

fn eta_top(h: &Harness, b: &crate::syntax::CTy) -> Outcome {
    eq(
        h,
        Subject::comp(tm::hole(), b.clone()).with_stoup(b.clone()),
        Subject::comp(tm::empty(), b.clone()).with_stoup(b.clone()),
    )
}

/// `℧ ⊑ M` for every enumerated computation `M = force z`.
pub fn check_err_bot(h: &Harness, b: &crate::syntax::CTy) -> Outcome {
    let zt = ty::thunk(b.clone());
    h.check_obs_leq(
        &Subject::comp(tm::err(b.clone()), b.clone()).with_var("z", zt.clone()),
        &Subject::comp(tm::force(var("z")), b.clone()).with_var("z", zt),
    )
}

/// `S[℧] ⊒⊑ ℧` for a closed stack `S : b ⊢ c`.
pub fn check_stk_strict(h: &Harness, s: &Tm, b: &crate::syntax::CTy, c: &crate::syntax::CTy) -> Outcome {
    h.check_obs_eq(
        &Subject::comp(plug_stack(s, &tm::err(b.clone())), c.clone()),
        &Subject::comp(tm::err(c.clone()), c.clone()),
    )
}

/// `ret (thunk ⟦V⟧) ⊒⊑ bind x ← ⟦V⟧; ret (thunk (ret x))` for a closed
/// complex value `V : a`.
pub fn check_thunkable(h: &Harness, v: &Tm, a: &crate::syntax::VTy) -> Outcome {
    let m = simp_value(v);
    let x = Fresh::avoiding(&m).fresh("t");
    let b = ty::ret(ty::thunk(ty::ret(a.clone())));
    h.check_obs_eq(
        &Subject::comp(tm::ret(tm::thunk(m.clone())), b.clone()),
        &Subject::comp(tm::bind(m, x.clone(), tm::ret(tm::thunk(tm::ret(tm::var(x))))), b),
    )
}

/// For a closed complex stack `• : b ⊢ S : c`, its translation `M` with
/// hole variable `z` is linear:
/// `bind z ← force w; M ⊒⊑ M[thunk (bind u ← force w; force u) / z]`.
pub fn check_linear(h: &Harness, s: &Tm, b: &crate::syntax::CTy, c: &crate::syntax::CTy) -> Outcome {
    let (m, z) = simp_stack(s);
    let mut fresh = Fresh::avoiding(&m);
    fresh.reserve(&z);
    let (w, u) = (fresh.fresh("w"), fresh.fresh("u"));
    let wt = ty::thunk(ty::ret(ty::thunk(b.clone())));
    let lhs = tm::bind(tm::force(tm::var(w.clone())), z.clone(), m.clone());
    let delayed = tm::thunk(tm::bind(tm::force(tm::var(w.clone())), u.clone(), tm::force(tm::var(u))));
    let rhs = subst_value(&m, &z, &delayed);
    h.check_obs_eq(
        &Subject::comp(lhs, c.clone()).with_var(w.clone(), wt.clone()),
        &Subject::comp(rhs, c.clone()).with_var(w, wt),
    )
}

/// Closed complex values: upcasts applied to enumerated values, and a few
/// pattern-matching values.
pub fn sample_complex_values(h: &Harness, u: &TypeUniverse, n: usize) -> Vec<(Tm, crate::syntax::VTy)> {
    let i = h.interp;
    let mut out = Vec::new();
    for d in u.strict_pairs().iter().filter(|d| d.is_value()) {
        let a = i.interp_v(&d.lhs_v());
        let target = i.interp_v(&d.rhs_v());
        let up = elab(h).up(d, tm::var("x"));
        for v in h.values(&a, h.depth.min(2)).iter() {
            out.push((subst_value(&up, &"x".into(), v), target.clone()));
        }
    }
    let bool_ = ty::bool_();
    for v in h.values(&bool_, 1).iter() {
        let flip = tm::case(v.clone(), "l", tm::inr(bool_.clone(), var("l")), "r", tm::inl(bool_.clone(), var("r")));
        out.push((flip, bool_.clone()));
        let pair = tm::split(tm::pair(v.clone(), tm::unit()), "p", "q", tm::usplit(var("q"), var("p")));
        out.push((pair, bool_.clone()));
    }
    thin(out, n)
}

/// Closed complex stacks `(S, b, c)`: cast downcasts and observers.
pub fn sample_complex_stacks(
    h: &Harness,
    u: &TypeUniverse,
    n: usize,
) -> Vec<(Tm, crate::syntax::CTy, crate::syntax::CTy)> {
    let mut out = Vec::new();
    for d in u.strict_pairs() {
        let (from, to) = cast_comp_types(h, &d);
        // Nothing observes ⊤.
        if *to != ComputationType::Top {
            out.push((downcast_stack(h, &d), from, to));
        }
    }
    for b in &u.comps {
        let b = h.interp.interp_c(b);
        for s in h.observers(&b, 1).iter().take(2) {
            out.push((s.clone(), b.clone(), ty::program()));
        }
    }
    thin(out, n)
}

fn show_deriv(d: &DynDeriv) -> String {
    format!("{} <= {}", type_str(&d.lhs()), type_str(&d.rhs()))
}

fn type_str(t: &Type) -> String {
    match t {
        Type::Val(a) => a.to_string(),
        Type::Comp(b) => b.to_string(),
    }
}

/// Chains `A ⊑ A' ⊑ A''` of strict steps in the universe, floors first.
pub fn chains(u: &TypeUniverse) -> Vec<(DynDeriv, DynDeriv)> {
    let mut out = Vec::new();
    for a in &u.values {
        if let Ok(g) = floor_v(a) {
            if *a != g && *a != ty::dyn_() {
                out.push((derive_v(a, &g).unwrap(), derive_v(&g, &ty::dyn_()).unwrap()));
            }
        }
    }
    for b in &u.comps {
        if let Ok(g) = floor_c(b) {
            if *b != g {
                out.push((derive_c(b, &g).unwrap(), derive_c(&g, &ty::codyn()).unwrap()));
            }
        }
    }
    let pairs = u.strict_pairs();
    let mut general = Vec::new();
    for d1 in &pairs {
        for d2 in &pairs {
            if d1.rhs() == d2.lhs() && !out.contains(&(d1.clone(), d2.clone())) {
                general.push((d1.clone(), d2.clone()));
            }
        }
    }
    out.extend(general);
    out
}

pub fn all_cells(h: &Harness, u: &TypeUniverse) -> Vec<Cell> {
    let i = h.interp;
    let mut cells = Vec::new();
    for a in &u.values {
        let t = Type::Val(a.clone());
        cells.push(Cell::new("identity", a, move |h| check_identity(h, &t)));
    }
    for b in &u.comps {
        let t = Type::Comp(b.clone());
        cells.push(Cell::new("identity", b, move |h| check_identity(h, &t)));
    }
    for (d1, d2) in chains(u) {
        let label = format!("{} <= {}", show_deriv(&d1), type_str(&d2.rhs()));
        cells.push(Cell::new("decomposition", label, move |h| check_decomposition(h, &d1, &d2)));
    }
    for d in u.strict_pairs() {
        let d2 = d.clone();
        cells.push(Cell::new("ep-retraction", show_deriv(&d), move |h| check_retraction(h, &d2)));
        let d2 = d.clone();
        cells.push(Cell::new("ep-projection", show_deriv(&d), move |h| check_projection(h, &d2)));
    }
    for a in u.values.iter().filter(|a| ***a != ValueType::Dyn) {
        if let Some(d) = derive_v(a, &ty::dyn_()) {
            cells.push(Cell::new("retract-axiom", a, move |h| check_retraction(h, &d)));
        }
    }

    for a in &u.values {
        let ia = i.interp_v(a);
        match &**a {
            ValueType::Sum(..) => {
                let x = ia.clone();
                cells.push(Cell::new("beta-sum", a, move |h| beta_sum(h, &x)));
                let x = ia.clone();
                cells.push(Cell::new("eta-sum", a, move |h| eta_sum(h, &x)));
            }
            ValueType::Prod(..) => {
                let x = ia.clone();
                cells.push(Cell::new("beta-prod", a, move |h| beta_prod(h, &x)));
                let x = ia.clone();
                cells.push(Cell::new("eta-prod", a, move |h| eta_prod(h, &x)));
            }
            ValueType::Unit => cells.push(Cell::new("eta-unit", a, eta_unit)),
            _ => {}
        }
        let x = ia.clone();
        cells.push(Cell::new("beta-unit", a, move |h| beta_unit(h, &x)));
        let x = ia.clone();
        cells.push(Cell::new("beta-ret", a, move |h| beta_ret(h, &x)));
        let x = ia.clone();
        cells.push(Cell::new("eta-ret", a, move |h| eta_ret(h, &x)));
    }
    for b in &u.comps {
        let ib = i.interp_c(b);
        let x = ib.clone();
        cells.push(Cell::new("beta-thunk", b, move |h| beta_thunk(h, &x)));
        let x = ib.clone();
        cells.push(Cell::new("eta-thunk", b, move |h| eta_thunk(h, &x)));
        let x = ib.clone();
        cells.push(Cell::new("err-bot", b, move |h| check_err_bot(h, &x)));
        match &**b {
            ComputationType::Arrow(..) => {
                let x = ib.clone();
                cells.push(Cell::new("beta-fun", b, move |h| beta_fun(h, &x)));
                let x = ib.clone();
                cells.push(Cell::new("eta-fun", b, move |h| eta_fun(h, &x)));
            }
            ComputationType::With(..) => {
                let x = ib.clone();
                cells.push(Cell::new("beta-with", b, move |h| beta_with(h, &x)));
                let x = ib.clone();
                cells.push(Cell::new("eta-with", b, move |h| eta_with(h, &x)));
            }
            ComputationType::Top => {
                let x = ib.clone();
                cells.push(Cell::new("eta-top", b, move |h| eta_top(h, &x)));
            }
            _ => {}
        }
        let x = ib.clone();
        cells.push(Cell::new("stk-strict", b, move |h| {
            let mut out = Outcome::default();
            for s in h.observers(&x, h.depth).iter() {
                out.absorb(check_stk_strict(h, s, &x, &ty::program()));
            }
            out
        }));
    }
    for d in u.strict_pairs() {
        let label = format!("dn {}", show_deriv(&d));
        cells.push(Cell::new("stk-strict", label, move |h| {
            let (from, to) = cast_comp_types(h, &d);
            check_stk_strict(h, &downcast_stack(h, &d), &from, &to)
        }));
    }

    for pair in graduality::pairs() {
        let name = pair.name;
        cells.push(Cell::new("graduality", name, move |h| h.check_graduality(&pair)));
    }

    let n = h.caps.samples;
    for (k, (v, a)) in sample_complex_values(h, u, n).into_iter().enumerate() {
        cells.push(Cell::new("thunkability", format!("{a} #{k:03}"), move |h| check_thunkable(h, &v, &a)));
    }
    for (k, (s, b, c)) in sample_complex_stacks(h, u, n).into_iter().enumerate() {
        cells.push(Cell::new("linearity", format!("{b} #{k:03}"), move |h| check_linear(h, &s, &b, &c)));
    }
    cells.push(Cell::new("differential", "random programs", move |h| gen::differential(h, 0, n)));
    cells
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dyninterp::InterpKind;
    use crate::syntax::{parse_ctype, parse_vtype};

    fn h(kind: InterpKind) -> Harness {
        Harness::new(kind, 2)
    }

    #[test]
    fn unit_into_dyn_is_an_ep_pair() {
        for kind in InterpKind::ALL {
            let d = derive_v(&ty::unit(), &ty::dyn_()).unwrap();
            let out = h(kind).check_ep_pair(&d);
            assert!(out.passed(), "{kind}: {out:?}");
            assert!(out.instances > 0);
        }
    }

    #[test]
    fn function_cast_is_an_ep_pair() {
        let b = parse_ctype("(-> (+ 1 1) (F (+ 1 1)))").unwrap();
        let d = derive_c(&b, &ty::codyn()).unwrap();
        for kind in InterpKind::ALL {
            let out = h(kind).check_ep_pair(&d);
            assert!(out.passed(), "{kind}: {out:?}");
        }
    }

    #[test]
    fn identity_at_sum() {
        let a = parse_vtype("(+ 1 ?)").unwrap();
        let out = check_identity(&h(InterpKind::Natural), &Type::Val(a));
        assert!(out.passed(), "{out:?}");
    }

    #[test]
    fn a_broken_projection_is_caught() {
        // Swapping the branches of a boolean is not below the identity.
        let hh = h(InterpKind::Natural);
        let b = ty::bool_();
        let swap =
            tm::case(var("x"), "l", tm::ret(tm::inr(b.clone(), var("l"))), "r", tm::ret(tm::inl(b.clone(), var("r"))));
        let out = hh.check_obs_leq(
            &Subject::comp(swap, ty::ret(b.clone())).with_var("x", b.clone()),
            &Subject::comp(tm::ret(var("x")), ty::ret(b.clone())).with_var("x", b),
        );
        assert!(!out.passed());
    }

    #[test]
    fn law_names_cover_cells() {
        let hh = h(InterpKind::Natural);
        let u = TypeUniverse::new(1);
        for c in all_cells(&hh, &u) {
            assert!(LAWS.contains(&c.law), "{}", c.law);
        }
    }
}
