//! Syntactic restrictions that carve the three languages out of the
//! shared grammar.

use thiserror::Error;

use super::term::Term;
use super::types::{ComputationType, Type, ValueType};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Stage {
    /// Gradual surface: casts and `?`/`¿`, no recursive types.
    Gtt,
    /// Recursive core with complex values and stacks, no casts or dynamic types.
    CbpvStar,
    /// What the machine runs: values are introduction forms only.
    CbpvOp,
}

#[derive(Clone, Debug, Error, PartialEq, Eq)]
#[error("{reason} at {subterm}")]
pub struct StageError {
    pub reason: String,
    /// The first offending subterm, printed (and truncated when long).
    pub subterm: String,
}

fn fail(t: &Term, reason: impl Into<String>) -> StageError {
    let mut s = t.to_string();
    if s.chars().count() > 120 {
        s = s.chars().take(117).collect::<String>() + "...";
    }
    StageError { reason: reason.into(), subterm: s }
}

fn vty_ok(a: &ValueType, stage: Stage) -> Result<(), String> {
    match a {
        ValueType::Dyn if stage != Stage::Gtt => Err("dynamic type '?'".into()),
        ValueType::Mu(..) | ValueType::Var(_) if stage == Stage::Gtt => Err("recursive type in gradual term".into()),
        ValueType::Dyn | ValueType::Zero | ValueType::Unit | ValueType::Var(_) => Ok(()),
        ValueType::Thunk(b) => cty_ok(b, stage),
        ValueType::Sum(l, r) | ValueType::Prod(l, r) => {
            vty_ok(l, stage)?;
            vty_ok(r, stage)
        }
        ValueType::Mu(_, a) => vty_ok(a, stage),
    }
}

fn cty_ok(b: &ComputationType, stage: Stage) -> Result<(), String> {
    match b {
        ComputationType::CoDyn if stage != Stage::Gtt => Err("dynamic type 'dyncomp'".into()),
        ComputationType::Nu(..) | ComputationType::Var(_) if stage == Stage::Gtt => {
            Err("recursive type in gradual term".into())
        }
        ComputationType::CoDyn | ComputationType::Top | ComputationType::Var(_) => Ok(()),
        ComputationType::Ret(a) => vty_ok(a, stage),
        ComputationType::With(l, r) => {
            cty_ok(l, stage)?;
            cty_ok(r, stage)
        }
        ComputationType::Arrow(a, r) => {
            vty_ok(a, stage)?;
            cty_ok(r, stage)
        }
        ComputationType::Nu(_, b) => cty_ok(b, stage),
    }
}

/// Check `e` against the restrictions of `stage`. The sort of the root is
/// read off its syntax.
pub fn stage_check(e: &Term, stage: Stage) -> Result<(), StageError> {
    let value = e.is_value_syntax().unwrap_or(false);
    go(e, stage, value)
}

fn go(t: &Term, stage: Stage, value_pos: bool) -> Result<(), StageError> {
    let op = stage == Stage::CbpvOp;
    let ty_err = |r: String| fail(t, r);
    // Annotations.
    match t {
        Term::Err(b) | Term::RollNu(b, _) => cty_ok(b, stage).map_err(ty_err)?,
        Term::Abort(Some(Type::Val(a)), _) => vty_ok(a, stage).map_err(ty_err)?,
        Term::Abort(Some(Type::Comp(b)), _) => cty_ok(b, stage).map_err(ty_err)?,
        Term::Inl(Some(a), _) | Term::Inr(Some(a), _) | Term::RollMu(a, _) | Term::Lam(_, a, _) => {
            vty_ok(a, stage).map_err(ty_err)?
        }
        Term::UpCast(a, b, _) => {
            vty_ok(a, stage).map_err(ty_err)?;
            vty_ok(b, stage).map_err(ty_err)?
        }
        Term::DnCast(a, b, _) => {
            cty_ok(a, stage).map_err(ty_err)?;
            cty_ok(b, stage).map_err(ty_err)?
        }
        _ => {}
    }
    match t {
        Term::UpCast(..) | Term::DnCast(..) if stage != Stage::Gtt => {
            return Err(fail(t, "cast outside the gradual language"))
        }
        Term::RollMu(..) | Term::UnrollMu(..) | Term::RollNu(..) | Term::UnrollNu(..) if stage == Stage::Gtt => {
            return Err(fail(t, "recursive-type form in gradual term"))
        }
        Term::Hole if op => return Err(fail(t, "stack hole in operational term")),
        Term::Case(..) | Term::Split(..) | Term::UnitSplit(..) | Term::UnrollMu(..) | Term::Abort(..)
            if op && value_pos =>
        {
            return Err(fail(t, "pattern match in value position"))
        }
        _ => {}
    }
    match t {
        Term::Var(_) | Term::Hole | Term::Err(_) | Term::UnitV | Term::EmptyPair => Ok(()),
        Term::Abort(_, v)
        | Term::Inl(_, v)
        | Term::Inr(_, v)
        | Term::RollMu(_, v)
        | Term::Force(v)
        | Term::RetV(v)
        | Term::UpCast(_, _, v) => go(v, stage, true),
        Term::Thunk(m)
        | Term::Lam(_, _, m)
        | Term::Fst(m)
        | Term::Snd(m)
        | Term::RollNu(_, m)
        | Term::UnrollNu(m)
        | Term::DnCast(_, _, m) => go(m, stage, false),
        Term::Case(s, _, l, _, r) => {
            go(s, stage, true)?;
            go(l, stage, value_pos)?;
            go(r, stage, value_pos)
        }
        Term::UnitSplit(s, e) | Term::Split(s, _, _, e) | Term::UnrollMu(s, _, e) => {
            go(s, stage, true)?;
            go(e, stage, value_pos)
        }
        Term::PairV(a, b) => {
            go(a, stage, true)?;
            go(b, stage, true)
        }
        Term::Bind(m, _, n) => {
            go(m, stage, false)?;
            go(n, stage, false)
        }
        Term::App(m, v) => {
            go(m, stage, false)?;
            go(v, stage, true)
        }
        Term::WithPair(a, b) => {
            go(a, stage, false)?;
            go(b, stage, false)
        }
    }
}
