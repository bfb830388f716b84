//! Interpretations of the dynamic types `?` and `¿` as closed recursive
//! types, with an embedding value and a projection stack for each ground.

use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::syntax::types::{subst_vvar_in_c, unroll_mu, unroll_nu};
use crate::syntax::{tm, ty, CTy, ComputationType, Name, Tm, Type, VTy, ValueType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum InterpKind {
    Natural,
    Scheme,
}

impl InterpKind {
    pub const ALL: [InterpKind; 2] = [InterpKind::Natural, InterpKind::Scheme];

    pub fn interp(self) -> &'static Interp {
        static NATURAL: OnceLock<Interp> = OnceLock::new();
        static SCHEME: OnceLock<Interp> = OnceLock::new();
        match self {
            InterpKind::Natural => NATURAL.get_or_init(natural_interp),
            InterpKind::Scheme => SCHEME.get_or_init(scheme_interp),
        }
    }
}

impl fmt::Display for InterpKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            InterpKind::Natural => "natural",
            InterpKind::Scheme => "scheme",
        })
    }
}

impl FromStr for InterpKind {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "natural" => Ok(InterpKind::Natural),
            "scheme" => Ok(InterpKind::Scheme),
            _ => Err(format!("unknown interpretation '{s}' (expected natural or scheme)")),
        }
    }
}

/// Value grounds: `1`, `? × ?`, `? + ?`, `U ¿`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VGround {
    Unit,
    Prod,
    Sum,
    Thunk,
}

/// Computation grounds: `? → ¿`, `¿ & ¿`, `F ?`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CGround {
    Arrow,
    With,
    Ret,
}

impl VGround {
    pub const ALL: [VGround; 4] = [VGround::Unit, VGround::Prod, VGround::Sum, VGround::Thunk];

    /// The ground with `a`'s outer connective, if `a` is a ground type.
    pub fn of(a: &VTy) -> Option<VGround> {
        match &**a {
            ValueType::Unit => Some(VGround::Unit),
            ValueType::Prod(l, r) if is_dyn(l) && is_dyn(r) => Some(VGround::Prod),
            ValueType::Sum(l, r) if is_dyn(l) && is_dyn(r) => Some(VGround::Sum),
            ValueType::Thunk(b) if matches!(**b, ComputationType::CoDyn) => Some(VGround::Thunk),
            _ => None,
        }
    }

    /// The ground as a gradual type.
    pub fn ty(self) -> VTy {
        match self {
            VGround::Unit => ty::unit(),
            VGround::Prod => ty::prod(ty::dyn_(), ty::dyn_()),
            VGround::Sum => ty::sum(ty::dyn_(), ty::dyn_()),
            VGround::Thunk => ty::thunk(ty::codyn()),
        }
    }
}

impl CGround {
    pub const ALL: [CGround; 3] = [CGround::Arrow, CGround::With, CGround::Ret];

    pub fn of(b: &CTy) -> Option<CGround> {
        match &**b {
            ComputationType::Arrow(a, r) if is_dyn(a) && matches!(**r, ComputationType::CoDyn) => Some(CGround::Arrow),
            ComputationType::With(l, r)
                if matches!(**l, ComputationType::CoDyn) && matches!(**r, ComputationType::CoDyn) =>
            {
                Some(CGround::With)
            }
            ComputationType::Ret(a) if is_dyn(a) => Some(CGround::Ret),
            _ => None,
        }
    }

    pub fn ty(self) -> CTy {
        match self {
            CGround::Arrow => ty::arrow(ty::dyn_(), ty::codyn()),
            CGround::With => ty::with(ty::codyn(), ty::codyn()),
            CGround::Ret => ty::ret(ty::dyn_()),
        }
    }
}

fn is_dyn(a: &VTy) -> bool {
    matches!(**a, ValueType::Dyn)
}

/// A dynamic type interpretation.
#[derive(Clone, Debug)]
pub struct Interp {
    pub kind: InterpKind,
    pub val_dyn: VTy,
    pub comp_dyn: CTy,
    embed_v: [Tm; 4],
    project_v: [Tm; 4],
    embed_c: [Tm; 3],
    project_c: [Tm; 3],
}

/// Free variable of value embeddings.
pub fn embed_var() -> Name {
    Name::from("x")
}

/// Free thunk variable of computation embeddings.
pub fn embed_cvar() -> Name {
    Name::from("z")
}

impl Interp {
    /// `x : ⟦G⟧ ⊢ embed : ⟦?⟧`, free in [`embed_var`].
    pub fn embed_v(&self, g: VGround) -> &Tm {
        &self.embed_v[g as usize]
    }

    /// `• : F ⟦?⟧ ⊢ project : F ⟦G⟧`.
    pub fn project_v(&self, g: VGround) -> &Tm {
        &self.project_v[g as usize]
    }

    /// `z : U ⟦G⟧ ⊢ embed : U ⟦¿⟧`, free in [`embed_cvar`].
    pub fn embed_c(&self, g: CGround) -> &Tm {
        &self.embed_c[g as usize]
    }

    /// `• : ⟦¿⟧ ⊢ project : ⟦G⟧`.
    pub fn project_c(&self, g: CGround) -> &Tm {
        &self.project_c[g as usize]
    }

    pub fn interp_v(&self, a: &VTy) -> VTy {
        if !a.mentions_dyn() {
            return a.clone();
        }
        match &**a {
            ValueType::Dyn => self.val_dyn.clone(),
            ValueType::Thunk(b) => ty::thunk(self.interp_c(b)),
            ValueType::Sum(l, r) => ty::sum(self.interp_v(l), self.interp_v(r)),
            ValueType::Prod(l, r) => ty::prod(self.interp_v(l), self.interp_v(r)),
            ValueType::Mu(x, b) => ty::mu(x.clone(), self.interp_v(b)),
            ValueType::Zero | ValueType::Unit | ValueType::Var(_) => a.clone(),
        }
    }

    pub fn interp_c(&self, b: &CTy) -> CTy {
        if !b.mentions_dyn() {
            return b.clone();
        }
        match &**b {
            ComputationType::CoDyn => self.comp_dyn.clone(),
            ComputationType::Ret(a) => ty::ret(self.interp_v(a)),
            ComputationType::With(l, r) => ty::with(self.interp_c(l), self.interp_c(r)),
            ComputationType::Arrow(a, r) => ty::arrow(self.interp_v(a), self.interp_c(r)),
            ComputationType::Nu(y, c) => ty::nu(y.clone(), self.interp_c(c)),
            ComputationType::Top | ComputationType::Var(_) => b.clone(),
        }
    }

    pub fn interp_type(&self, t: &Type) -> Type {
        match t {
            Type::Val(a) => Type::Val(self.interp_v(a)),
            Type::Comp(b) => Type::Comp(self.interp_c(b)),
        }
    }

    /// Scheme only: the dynamic booleans `true` and `false`.
    pub fn dyn_bool(&self, b: bool) -> Option<Tm> {
        match self.kind {
            InterpKind::Scheme => {
                let s = Sums::new(&self.val_dyn);
                let leaf = if b { tm::tt() } else { tm::ff() };
                Some(tm::roll(self.val_dyn.clone(), s.inj(0, leaf)))
            }
            InterpKind::Natural => None,
        }
    }
}

/// Right-nested n-ary sum `A0 + (A1 + (… + An-1))` under a μ.
struct Sums {
    sums: Vec<VTy>,
}

impl Sums {
    fn new(mu: &VTy) -> Sums {
        let mut sums = vec![unroll_mu(mu).expect("dynamic type is a mu")];
        loop {
            let last = sums.last().unwrap().clone();
            match &*last {
                ValueType::Sum(_, r) if matches!(**r, ValueType::Sum(..)) => sums.push(r.clone()),
                _ => break,
            }
        }
        Sums { sums }
    }

    fn n(&self) -> usize {
        self.sums.len() + 1
    }

    fn inj(&self, k: usize, v: Tm) -> Tm {
        let n = self.n();
        let mut out = if k < n - 1 { tm::inl(self.sums[k].clone(), v) } else { v };
        for i in (0..k.min(n - 1)).rev() {
            out = tm::inr(self.sums[i].clone(), out);
        }
        out
    }

    /// Dispatch on the `k`-th summand of `scrut`; every other summand runs `miss`.
    fn case(&self, scrut: Tm, k: usize, hit: impl FnOnce(Tm) -> Tm, miss: &Tm) -> Tm {
        self.case_at(0, scrut, k, hit, miss)
    }

    fn case_at(&self, i: usize, scrut: Tm, k: usize, hit: impl FnOnce(Tm) -> Tm, miss: &Tm) -> Tm {
        let n = self.n();
        if i == n - 1 {
            return hit(scrut);
        }
        let l = format!("l{i}");
        let r = format!("r{i}");
        if i == k {
            tm::case(scrut, l.as_str(), hit(tm::var(l.as_str())), r.as_str(), miss.clone())
        } else {
            let inner = self.case_at(i + 1, tm::var(r.as_str()), k, hit, miss);
            tm::case(scrut, l.as_str(), miss.clone(), r.as_str(), inner)
        }
    }
}

/// Right-nested lazy product of slots under a ν.
struct Slots {
    withs: Vec<CTy>,
    slots: Vec<CTy>,
}

impl Slots {
    fn new(nu: &CTy) -> Slots {
        let mut withs = vec![unroll_nu(nu).expect("dynamic type is a nu")];
        let mut slots = vec![];
        loop {
            let last = withs.last().unwrap().clone();
            match &*last {
                ComputationType::With(l, r) => {
                    slots.push(l.clone());
                    if matches!(**r, ComputationType::With(..)) {
                        withs.push(r.clone());
                    } else {
                        slots.push(r.clone());
                        break;
                    }
                }
                _ => unreachable!("ν body is a lazy product"),
            }
        }
        Slots { withs, slots }
    }

    fn project(&self, k: usize, m: Tm) -> Tm {
        let n = self.slots.len();
        let mut out = m;
        for _ in 0..k.min(n - 1) {
            out = tm::snd(out);
        }
        if k < n - 1 {
            out = tm::fst(out);
        }
        out
    }

    /// The tuple with `fill` in slot `k` and errors elsewhere.
    fn tuple(&self, k: usize, fill: Tm) -> Tm {
        let n = self.slots.len();
        let mut fill = Some(fill);
        let mut slot = |i: usize| {
            if i == k {
                fill.take().unwrap()
            } else {
                tm::err(self.slots[i].clone())
            }
        };
        let mut out = slot(n - 1);
        for i in (0..n - 1).rev() {
            out = tm::wpair(slot(i), out);
        }
        debug_assert_eq!(self.withs.len(), n - 1);
        out
    }
}

fn bind_unroll(body: impl FnOnce(Tm) -> Tm) -> Tm {
    tm::bind(tm::hole(), "y", tm::pmroll(tm::var("y"), "t", body(tm::var("t"))))
}

/// `? ≅ 1 + (? × ?) + (? + ?) + U ¿` and `¿ ≅ (¿ & ¿) & (? → ¿) & F ?`.
pub fn natural_interp() -> Interp {
    let x = || ty::vvar("X");
    let y = || ty::cvar("Y");
    let inner = ty::nu("Y", ty::with(ty::with(y(), y()), ty::with(ty::arrow(x(), y()), ty::ret(x()))));
    let d = ty::mu(
        "X",
        ty::sum(ty::unit(), ty::sum(ty::prod(x(), x()), ty::sum(ty::sum(x(), x()), ty::thunk(inner.clone())))),
    );
    let c = subst_vvar_in_c(&inner, &Name::from("X"), &d);
    let sums = Sums::new(&d);
    let slots = Slots::new(&c);

    let gv = |g: VGround| -> VTy {
        match g {
            VGround::Unit => ty::unit(),
            VGround::Prod => ty::prod(d.clone(), d.clone()),
            VGround::Sum => ty::sum(d.clone(), d.clone()),
            VGround::Thunk => ty::thunk(c.clone()),
        }
    };
    let index = |g: VGround| g as usize;

    let embed_v = VGround::ALL.map(|g| tm::roll(d.clone(), sums.inj(index(g), tm::var(embed_var()))));
    let project_v = VGround::ALL.map(|g| {
        let miss = tm::err(ty::ret(gv(g)));
        bind_unroll(|t| sums.case(t, index(g), tm::ret, &miss))
    });
    // Slot order in ¿: [¿&¿, ?→¿, F ?].
    let slot = |g: CGround| match g {
        CGround::With => 0,
        CGround::Arrow => 1,
        CGround::Ret => 2,
    };
    let embed_c =
        CGround::ALL.map(|g| tm::thunk(tm::rollnu(c.clone(), slots.tuple(slot(g), tm::force(tm::var(embed_cvar()))))));
    let project_c = CGround::ALL.map(|g| slots.project(slot(g), tm::unrollnu(tm::hole())));

    Interp { kind: InterpKind::Natural, val_dyn: d, comp_dyn: c, embed_v, project_v, embed_c, project_c }
}

/// `? ≅ (1 + 1) + U ¿ + (? × ?)` and `¿ ≅ (? → ¿) & F ?`. Sums are tagged
/// pairs and binary lazy products are functions of a boolean.
pub fn scheme_interp() -> Interp {
    let x = || ty::vvar("X");
    let y = || ty::cvar("Y");
    let inner = ty::nu("Y", ty::with(ty::arrow(x(), y()), ty::ret(x())));
    let d = ty::mu("X", ty::sum(ty::bool_(), ty::sum(ty::thunk(inner.clone()), ty::prod(x(), x()))));
    let c = subst_vvar_in_c(&inner, &Name::from("X"), &d);
    let sums = Sums::new(&d);
    let slots = Slots::new(&c);
    let dd = ty::prod(d.clone(), d.clone());
    let dsum = ty::sum(d.clone(), d.clone());
    let dbool = |b: bool| tm::roll(d.clone(), sums.inj(0, if b { tm::tt() } else { tm::ff() }));
    let xv = || tm::var(embed_var());

    // Summand order: [𝔹, U ¿, ? × ?].
    let embed_prod = |v: Tm| tm::roll(d.clone(), sums.inj(2, v));
    let embed_v = [
        tm::roll(d.clone(), sums.inj(0, tm::inl(ty::bool_(), xv()))),
        embed_prod(xv()),
        tm::case(
            xv(),
            "a",
            embed_prod(tm::pair(dbool(true), tm::var("a"))),
            "b",
            embed_prod(tm::pair(dbool(false), tm::var("b"))),
        ),
        tm::roll(d.clone(), sums.inj(1, xv())),
    ];

    let err_of = |a: VTy| tm::err(ty::ret(a));
    let project_unit = bind_unroll(|t| {
        let miss = err_of(ty::unit());
        sums.case(t, 0, |b| tm::case(b, "u", tm::ret(tm::var("u")), "f", miss.clone()), &miss)
    });
    let project_prod = bind_unroll(|t| sums.case(t, 2, tm::ret, &err_of(dd.clone())));
    let project_thunk = bind_unroll(|t| sums.case(t, 1, tm::ret, &err_of(ty::thunk(c.clone()))));
    let project_sum = bind_unroll(|t| {
        let miss = err_of(dsum.clone());
        sums.case(
            t,
            2,
            |p| {
                let tagged = tm::pmroll(
                    tm::var("tag"),
                    "tt",
                    tm::case(
                        tm::var("tt"),
                        "bb",
                        tm::case(
                            tm::var("bb"),
                            "i",
                            tm::ret(tm::inl(dsum.clone(), tm::var("v"))),
                            "j",
                            tm::ret(tm::inr(dsum.clone(), tm::var("v"))),
                        ),
                        "o",
                        miss.clone(),
                    ),
                );
                tm::split(p, "tag", "v", tagged)
            },
            &miss,
        )
    });
    let project_v = [project_unit, project_prod, project_sum, project_thunk];

    // Slot order in ¿: [? → ¿, F ?].
    let zf = || tm::force(tm::var(embed_cvar()));
    let with_fn = tm::lam(
        "d",
        d.clone(),
        tm::pmroll(
            tm::var("d"),
            "t",
            sums.case(tm::var("t"), 0, |b| tm::case(b, "i", tm::fst(zf()), "j", tm::snd(zf())), &tm::err(c.clone())),
        ),
    );
    let embed_c = [
        tm::thunk(tm::rollnu(c.clone(), slots.tuple(0, zf()))),
        tm::thunk(tm::rollnu(c.clone(), slots.tuple(0, with_fn))),
        tm::thunk(tm::rollnu(c.clone(), slots.tuple(1, zf()))),
    ];
    let unrolled_fn = || slots.project(0, tm::unrollnu(tm::hole()));
    let project_c = [
        unrolled_fn(),
        tm::wpair(tm::app(unrolled_fn(), dbool(true)), tm::app(unrolled_fn(), dbool(false))),
        slots.project(1, tm::unrollnu(tm::hole())),
    ];

    Interp { kind: InterpKind::Scheme, val_dyn: d, comp_dyn: c, embed_v, project_v, embed_c, project_c }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::types::{cty_eq, vty_eq};
    use crate::syntax::{stage_check, subst_value, Stage};
    use crate::typecheck::{infer_comp, infer_value, TypeEnv};

    fn interps() -> [&'static Interp; 2] {
        [InterpKind::Natural.interp(), InterpKind::Scheme.interp()]
    }

    #[test]
    fn dynamic_types_are_closed_and_unroll_to_grounds() {
        for i in interps() {
            assert!(i.val_dyn.is_closed());
            assert!(i.comp_dyn.is_closed());
            assert!(!i.val_dyn.mentions_dyn());
        }
        let n = InterpKind::Natural.interp();
        let (d, c) = (n.val_dyn.clone(), n.comp_dyn.clone());
        let expect = ty::sum(
            ty::unit(),
            ty::sum(ty::prod(d.clone(), d.clone()), ty::sum(ty::sum(d.clone(), d.clone()), ty::thunk(c.clone()))),
        );
        assert!(vty_eq(&unroll_mu(&d).unwrap(), &expect));
        let expect = ty::with(ty::with(c.clone(), c.clone()), ty::with(ty::arrow(d.clone(), c.clone()), ty::ret(d)));
        assert!(cty_eq(&unroll_nu(&c).unwrap(), &expect));
    }

    #[test]
    fn templates_typecheck_at_their_grounds() {
        for i in interps() {
            for g in VGround::ALL {
                let gt = i.interp_v(&g.ty());
                let env = TypeEnv::new().with_var(embed_var(), gt.clone());
                let (_, a) = infer_value(&env, i.embed_v(g)).unwrap();
                assert!(vty_eq(&a, &i.val_dyn), "{} embed {:?}", i.kind, g);
                let env = TypeEnv::new().with_stoup(ty::ret(i.val_dyn.clone()));
                let (_, b) = infer_comp(&env, i.project_v(g)).unwrap();
                assert!(cty_eq(&b, &ty::ret(gt)), "{} project {:?}", i.kind, g);
                assert!(stage_check(i.embed_v(g), Stage::CbpvStar).is_ok());
            }
            for g in CGround::ALL {
                let gt = i.interp_c(&g.ty());
                let env = TypeEnv::new().with_var(embed_cvar(), ty::thunk(gt.clone()));
                let (_, a) = infer_value(&env, i.embed_c(g)).unwrap();
                assert!(vty_eq(&a, &ty::thunk(i.comp_dyn.clone())), "{} embed {:?}", i.kind, g);
                let env = TypeEnv::new().with_stoup(i.comp_dyn.clone());
                let (_, b) = infer_comp(&env, i.project_c(g)).unwrap();
                assert!(cty_eq(&b, &gt), "{} project {:?}", i.kind, g);
            }
        }
    }

    #[test]
    fn scheme_unit_is_true_leaf() {
        let s = InterpKind::Scheme.interp();
        let v = subst_value(s.embed_v(VGround::Unit), &embed_var(), &tm::unit());
        assert_eq!(
            v.to_string(),
            format!("(rollmu {} (inl {} (inl (+ 1 1) unit)))", s.val_dyn, unroll_mu(&s.val_dyn).unwrap())
        );
        assert_eq!(Some(v), s.dyn_bool(true));
    }

    #[test]
    fn natural_injection_order() {
        let n = InterpKind::Natural.interp();
        let shape = |g| {
            let mut out = String::new();
            let mut t = match &**n.embed_v(g) {
                crate::syntax::Term::RollMu(_, v) => v.clone(),
                _ => panic!(),
            };
            loop {
                match &*t.clone() {
                    crate::syntax::Term::Inl(_, v) => {
                        out.push('l');
                        t = v.clone();
                    }
                    crate::syntax::Term::Inr(_, v) => {
                        out.push('r');
                        t = v.clone();
                    }
                    _ => return out,
                }
            }
        };
        assert_eq!(shape(VGround::Unit), "l");
        assert_eq!(shape(VGround::Prod), "rl");
        assert_eq!(shape(VGround::Sum), "rrl");
        assert_eq!(shape(VGround::Thunk), "rrr");
    }

    #[test]
    fn interp_type_is_compositional() {
        let n = InterpKind::Natural.interp();
        assert_eq!(n.interp_v(&ty::thunk(ty::ret(ty::dyn_()))), ty::thunk(ty::ret(n.val_dyn.clone())));
        assert_eq!(n.interp_v(&ty::unit()), ty::unit());
        let s = InterpKind::Scheme.interp();
        assert_eq!(s.interp_c(&ty::codyn()), s.comp_dyn.clone());
    }
}
