use std::fmt;
use std::sync::Arc;

use super::Name;

pub type VTy = Arc<ValueType>;
pub type CTy = Arc<ComputationType>;

/// Value types, shared between the gradual surface (`?`) and the
/// recursive core (`mu`, type variables).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueType {
    Dyn,
    Thunk(CTy),
    Zero,
    Sum(VTy, VTy),
    Unit,
    Prod(VTy, VTy),
    Mu(Name, VTy),
    Var(Name),
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ComputationType {
    CoDyn,
    Ret(VTy),
    Top,
    With(CTy, CTy),
    Arrow(VTy, CTy),
    Nu(Name, CTy),
    Var(Name),
}

/// Either sort of type.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Type {
    Val(VTy),
    Comp(CTy),
}

pub mod ty {
    //! Shorthand constructors.
    use super::*;

    pub fn dyn_() -> VTy {
        Arc::new(ValueType::Dyn)
    }
    pub fn codyn() -> CTy {
        Arc::new(ComputationType::CoDyn)
    }
    pub fn unit() -> VTy {
        Arc::new(ValueType::Unit)
    }
    pub fn zero() -> VTy {
        Arc::new(ValueType::Zero)
    }
    pub fn top() -> CTy {
        Arc::new(ComputationType::Top)
    }
    pub fn bool_() -> VTy {
        sum(unit(), unit())
    }
    pub fn sum(a: VTy, b: VTy) -> VTy {
        Arc::new(ValueType::Sum(a, b))
    }
    pub fn prod(a: VTy, b: VTy) -> VTy {
        Arc::new(ValueType::Prod(a, b))
    }
    pub fn thunk(b: CTy) -> VTy {
        Arc::new(ValueType::Thunk(b))
    }
    pub fn mu(x: impl Into<Name>, a: VTy) -> VTy {
        Arc::new(ValueType::Mu(x.into(), a))
    }
    pub fn vvar(x: impl Into<Name>) -> VTy {
        Arc::new(ValueType::Var(x.into()))
    }
    pub fn ret(a: VTy) -> CTy {
        Arc::new(ComputationType::Ret(a))
    }
    pub fn with(a: CTy, b: CTy) -> CTy {
        Arc::new(ComputationType::With(a, b))
    }
    pub fn arrow(a: VTy, b: CTy) -> CTy {
        Arc::new(ComputationType::Arrow(a, b))
    }
    pub fn nu(y: impl Into<Name>, b: CTy) -> CTy {
        Arc::new(ComputationType::Nu(y.into(), b))
    }
    pub fn cvar(y: impl Into<Name>) -> CTy {
        Arc::new(ComputationType::Var(y.into()))
    }
    /// The type of whole programs, `F (1 + 1)`.
    pub fn program() -> CTy {
        ret(bool_())
    }
}

impl ValueType {
    pub fn is_closed(&self) -> bool {
        vfree(self, &mut Vec::new())
    }

    /// Maximum connective nesting, counting base types as depth 1.
    pub fn depth(&self) -> usize {
        match self {
            ValueType::Dyn | ValueType::Zero | ValueType::Unit | ValueType::Var(_) => 1,
            ValueType::Thunk(b) => 1 + b.depth(),
            ValueType::Sum(a, b) | ValueType::Prod(a, b) => 1 + a.depth().max(b.depth()),
            ValueType::Mu(_, a) => 1 + a.depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            ValueType::Dyn | ValueType::Zero | ValueType::Unit | ValueType::Var(_) => 1,
            ValueType::Thunk(b) => 1 + b.size(),
            ValueType::Sum(a, b) | ValueType::Prod(a, b) => 1 + a.size() + b.size(),
            ValueType::Mu(_, a) => 1 + a.size(),
        }
    }

    /// True when the type mentions `?` or `¿` anywhere.
    pub fn mentions_dyn(&self) -> bool {
        match self {
            ValueType::Dyn => true,
            ValueType::Zero | ValueType::Unit | ValueType::Var(_) => false,
            ValueType::Thunk(b) => b.mentions_dyn(),
            ValueType::Sum(a, b) | ValueType::Prod(a, b) => a.mentions_dyn() || b.mentions_dyn(),
            ValueType::Mu(_, a) => a.mentions_dyn(),
        }
    }

    pub fn mentions_recursion(&self) -> bool {
        match self {
            ValueType::Mu(..) | ValueType::Var(_) => true,
            ValueType::Dyn | ValueType::Zero | ValueType::Unit => false,
            ValueType::Thunk(b) => b.mentions_recursion(),
            ValueType::Sum(a, b) | ValueType::Prod(a, b) => a.mentions_recursion() || b.mentions_recursion(),
        }
    }
}

impl ComputationType {
    pub fn is_closed(&self) -> bool {
        cfree(self, &mut Vec::new())
    }

    pub fn depth(&self) -> usize {
        match self {
            ComputationType::CoDyn | ComputationType::Top | ComputationType::Var(_) => 1,
            ComputationType::Ret(a) => 1 + a.depth(),
            ComputationType::With(a, b) => 1 + a.depth().max(b.depth()),
            ComputationType::Arrow(a, b) => 1 + a.depth().max(b.depth()),
            ComputationType::Nu(_, b) => 1 + b.depth(),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            ComputationType::CoDyn | ComputationType::Top | ComputationType::Var(_) => 1,
            ComputationType::Ret(a) => 1 + a.size(),
            ComputationType::With(a, b) => 1 + a.size() + b.size(),
            ComputationType::Arrow(a, b) => 1 + a.size() + b.size(),
            ComputationType::Nu(_, b) => 1 + b.size(),
        }
    }

    pub fn mentions_dyn(&self) -> bool {
        match self {
            ComputationType::CoDyn => true,
            ComputationType::Top | ComputationType::Var(_) => false,
            ComputationType::Ret(a) => a.mentions_dyn(),
            ComputationType::With(a, b) => a.mentions_dyn() || b.mentions_dyn(),
            ComputationType::Arrow(a, b) => a.mentions_dyn() || b.mentions_dyn(),
            ComputationType::Nu(_, b) => b.mentions_dyn(),
        }
    }

    pub fn mentions_recursion(&self) -> bool {
        match self {
            ComputationType::Nu(..) | ComputationType::Var(_) => true,
            ComputationType::CoDyn | ComputationType::Top => false,
            ComputationType::Ret(a) => a.mentions_recursion(),
            ComputationType::With(a, b) => a.mentions_recursion() || b.mentions_recursion(),
            ComputationType::Arrow(a, b) => a.mentions_recursion() || b.mentions_recursion(),
        }
    }
}

fn vfree(a: &ValueType, bound: &mut Vec<Name>) -> bool {
    match a {
        ValueType::Dyn | ValueType::Zero | ValueType::Unit => true,
        ValueType::Var(x) => bound.contains(x),
        ValueType::Thunk(b) => cfree(b, bound),
        ValueType::Sum(l, r) | ValueType::Prod(l, r) => vfree(l, bound) && vfree(r, bound),
        ValueType::Mu(x, body) => {
            bound.push(x.clone());
            let ok = vfree(body, bound);
            bound.pop();
            ok
        }
    }
}

fn cfree(b: &ComputationType, bound: &mut Vec<Name>) -> bool {
    match b {
        ComputationType::CoDyn | ComputationType::Top => true,
        ComputationType::Var(y) => bound.contains(y),
        ComputationType::Ret(a) => vfree(a, bound),
        ComputationType::With(l, r) => cfree(l, bound) && cfree(r, bound),
        ComputationType::Arrow(a, r) => vfree(a, bound) && cfree(r, bound),
        ComputationType::Nu(y, body) => {
            bound.push(y.clone());
            let ok = cfree(body, bound);
            bound.pop();
            ok
        }
    }
}

// Type variables of both sorts share one namespace for binding purposes.

/// `body[repl/x]` for a value type variable. `repl` must be closed.
pub fn subst_vvar_in_v(body: &VTy, x: &Name, repl: &VTy) -> VTy {
    match &**body {
        ValueType::Var(y) if y == x => repl.clone(),
        ValueType::Dyn | ValueType::Zero | ValueType::Unit | ValueType::Var(_) => body.clone(),
        ValueType::Thunk(b) => Arc::new(ValueType::Thunk(subst_vvar_in_c(b, x, repl))),
        ValueType::Sum(l, r) => Arc::new(ValueType::Sum(subst_vvar_in_v(l, x, repl), subst_vvar_in_v(r, x, repl))),
        ValueType::Prod(l, r) => Arc::new(ValueType::Prod(subst_vvar_in_v(l, x, repl), subst_vvar_in_v(r, x, repl))),
        ValueType::Mu(y, _) if y == x => body.clone(),
        ValueType::Mu(y, inner) => Arc::new(ValueType::Mu(y.clone(), subst_vvar_in_v(inner, x, repl))),
    }
}

pub fn subst_vvar_in_c(body: &CTy, x: &Name, repl: &VTy) -> CTy {
    match &**body {
        ComputationType::CoDyn | ComputationType::Top | ComputationType::Var(_) => body.clone(),
        ComputationType::Ret(a) => Arc::new(ComputationType::Ret(subst_vvar_in_v(a, x, repl))),
        ComputationType::With(l, r) => {
            Arc::new(ComputationType::With(subst_vvar_in_c(l, x, repl), subst_vvar_in_c(r, x, repl)))
        }
        ComputationType::Arrow(a, r) => {
            Arc::new(ComputationType::Arrow(subst_vvar_in_v(a, x, repl), subst_vvar_in_c(r, x, repl)))
        }
        ComputationType::Nu(y, _) if y == x => body.clone(),
        ComputationType::Nu(y, inner) => Arc::new(ComputationType::Nu(y.clone(), subst_vvar_in_c(inner, x, repl))),
    }
}

/// `body[repl/y]` for a computation type variable. `repl` must be closed.
pub fn subst_cvar_in_c(body: &CTy, y: &Name, repl: &CTy) -> CTy {
    match &**body {
        ComputationType::Var(z) if z == y => repl.clone(),
        ComputationType::CoDyn | ComputationType::Top | ComputationType::Var(_) => body.clone(),
        ComputationType::Ret(a) => Arc::new(ComputationType::Ret(subst_cvar_in_v(a, y, repl))),
        ComputationType::With(l, r) => {
            Arc::new(ComputationType::With(subst_cvar_in_c(l, y, repl), subst_cvar_in_c(r, y, repl)))
        }
        ComputationType::Arrow(a, r) => {
            Arc::new(ComputationType::Arrow(subst_cvar_in_v(a, y, repl), subst_cvar_in_c(r, y, repl)))
        }
        ComputationType::Nu(z, _) if z == y => body.clone(),
        ComputationType::Nu(z, inner) => Arc::new(ComputationType::Nu(z.clone(), subst_cvar_in_c(inner, y, repl))),
    }
}

pub fn subst_cvar_in_v(body: &VTy, y: &Name, repl: &CTy) -> VTy {
    match &**body {
        ValueType::Dyn | ValueType::Zero | ValueType::Unit | ValueType::Var(_) => body.clone(),
        ValueType::Thunk(b) => Arc::new(ValueType::Thunk(subst_cvar_in_c(b, y, repl))),
        ValueType::Sum(l, r) => Arc::new(ValueType::Sum(subst_cvar_in_v(l, y, repl), subst_cvar_in_v(r, y, repl))),
        ValueType::Prod(l, r) => Arc::new(ValueType::Prod(subst_cvar_in_v(l, y, repl), subst_cvar_in_v(r, y, repl))),
        ValueType::Mu(x, _) if x == y => body.clone(),
        ValueType::Mu(x, inner) => Arc::new(ValueType::Mu(x.clone(), subst_cvar_in_v(inner, y, repl))),
    }
}

/// One unrolling of `mu X. A`: `A[mu X. A / X]`.
pub fn unroll_mu(t: &VTy) -> Option<VTy> {
    match &**t {
        ValueType::Mu(x, body) => Some(subst_vvar_in_v(body, x, t)),
        _ => None,
    }
}

/// One unrolling of `nu Y. B`: `B[nu Y. B / Y]`.
pub fn unroll_nu(t: &CTy) -> Option<CTy> {
    match &**t {
        ComputationType::Nu(y, body) => Some(subst_cvar_in_c(body, y, t)),
        _ => None,
    }
}

// Alpha-equivalence. Binder pairs are matched positionally.

pub fn vty_eq(a: &VTy, b: &VTy) -> bool {
    veq(a, b, &mut Vec::new())
}

pub fn cty_eq(a: &CTy, b: &CTy) -> bool {
    ceq(a, b, &mut Vec::new())
}

fn var_eq(x: &Name, y: &Name, env: &[(Name, Name)]) -> bool {
    for (l, r) in env.iter().rev() {
        if l == x || r == y {
            return l == x && r == y;
        }
    }
    x == y
}

fn veq(a: &VTy, b: &VTy, env: &mut Vec<(Name, Name)>) -> bool {
    if env.is_empty() && Arc::ptr_eq(a, b) {
        return true;
    }
    match (&**a, &**b) {
        (ValueType::Dyn, ValueType::Dyn) | (ValueType::Zero, ValueType::Zero) | (ValueType::Unit, ValueType::Unit) => {
            true
        }
        (ValueType::Var(x), ValueType::Var(y)) => var_eq(x, y, env),
        (ValueType::Thunk(l), ValueType::Thunk(r)) => ceq(l, r, env),
        (ValueType::Sum(l1, r1), ValueType::Sum(l2, r2)) | (ValueType::Prod(l1, r1), ValueType::Prod(l2, r2)) => {
            veq(l1, l2, env) && veq(r1, r2, env)
        }
        (ValueType::Mu(x, l), ValueType::Mu(y, r)) => {
            env.push((x.clone(), y.clone()));
            let ok = veq(l, r, env);
            env.pop();
            ok
        }
        _ => false,
    }
}

fn ceq(a: &CTy, b: &CTy, env: &mut Vec<(Name, Name)>) -> bool {
    if env.is_empty() && Arc::ptr_eq(a, b) {
        return true;
    }
    match (&**a, &**b) {
        (ComputationType::CoDyn, ComputationType::CoDyn) | (ComputationType::Top, ComputationType::Top) => true,
        (ComputationType::Var(x), ComputationType::Var(y)) => var_eq(x, y, env),
        (ComputationType::Ret(l), ComputationType::Ret(r)) => veq(l, r, env),
        (ComputationType::With(l1, r1), ComputationType::With(l2, r2)) => ceq(l1, l2, env) && ceq(r1, r2, env),
        (ComputationType::Arrow(l1, r1), ComputationType::Arrow(l2, r2)) => veq(l1, l2, env) && ceq(r1, r2, env),
        (ComputationType::Nu(x, l), ComputationType::Nu(y, r)) => {
            env.push((x.clone(), y.clone()));
            let ok = ceq(l, r, env);
            env.pop();
            ok
        }
        _ => false,
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ValueType::Dyn => write!(f, "?"),
            ValueType::Zero => write!(f, "0"),
            ValueType::Unit => write!(f, "1"),
            ValueType::Thunk(b) => write!(f, "(U {b})"),
            ValueType::Sum(a, b) => write!(f, "(+ {a} {b})"),
            ValueType::Prod(a, b) => write!(f, "(* {a} {b})"),
            ValueType::Mu(x, a) => write!(f, "(mu {x} {a})"),
            ValueType::Var(x) => write!(f, "{x}"),
        }
    }
}

impl fmt::Display for ComputationType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComputationType::CoDyn => write!(f, "dyncomp"),
            ComputationType::Top => write!(f, "top"),
            ComputationType::Ret(a) => write!(f, "(F {a})"),
            ComputationType::With(a, b) => write!(f, "(& {a} {b})"),
            ComputationType::Arrow(a, b) => write!(f, "(-> {a} {b})"),
            ComputationType::Nu(y, b) => write!(f, "(nu {y} {b})"),
            ComputationType::Var(y) => write!(f, "{y}"),
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Val(a) => a.fmt(f),
            Type::Comp(b) => b.fmt(f),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::ty::*;
    use super::*;

    #[test]
    fn alpha_equivalent_mu() {
        let a = mu("X", sum(unit(), vvar("X")));
        let b = mu("Y", sum(unit(), vvar("Y")));
        assert!(vty_eq(&a, &b));
        let c = mu("Y", sum(vvar("Y"), unit()));
        assert!(!vty_eq(&a, &c));
    }

    #[test]
    fn unroll_list_like() {
        let a = mu("X", sum(unit(), vvar("X")));
        let un = unroll_mu(&a).unwrap();
        assert!(vty_eq(&un, &sum(unit(), a.clone())));
    }

    #[test]
    fn shadowed_binder_is_not_substituted() {
        let inner = mu("X", vvar("X"));
        let t = sum(vvar("X"), inner.clone());
        let out = subst_vvar_in_v(&t, &Name::from("X"), &unit());
        assert_eq!(*out, ValueType::Sum(unit(), inner));
    }

    #[test]
    fn closedness() {
        assert!(mu("X", prod(vvar("X"), unit())).is_closed());
        assert!(!sum(vvar("X"), unit()).is_closed());
        assert!(nu("Y", arrow(unit(), cvar("Y"))).is_closed());
    }
}
