use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::subst::{subst_value, Fresh};
use super::term::{Term, Tm};
use super::types::{CTy, ComputationType, Type, VTy, ValueType};
use super::Name;

/// 1-based source position.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{pos} {msg}")]
pub struct ParseError {
    pub pos: Pos,
    pub msg: String,
}

/// Source positions of parsed term nodes, keyed by node identity.
#[derive(Clone, Debug, Default)]
pub struct SpanMap(HashMap<usize, Pos>);

impl SpanMap {
    pub fn get(&self, t: &Tm) -> Option<Pos> {
        self.0.get(&(Arc::as_ptr(t) as usize)).copied()
    }

    fn insert(&mut self, t: &Tm, p: Pos) {
        self.0.insert(Arc::as_ptr(t) as usize, p);
    }
}

/// A parsed term together with the positions of its nodes. The map is
/// only meaningful while `term` is alive.
#[derive(Clone, Debug)]
pub struct Parsed {
    pub term: Tm,
    pub spans: SpanMap,
}

#[derive(Clone, Debug)]
enum Sexp {
    Atom(String, Pos),
    List(Vec<Sexp>, Pos),
}

impl Sexp {
    fn pos(&self) -> Pos {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err<T>(pos: Pos, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

struct Lexer<'a> {
    chars: std::iter::Peekable<std::str::Chars<'a>>,
    pos: Pos,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { chars: s.chars().peekable(), pos: Pos { line: 1, col: 1 } }
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.chars.next()?;
        if c == '\n' {
            self.pos.line += 1;
            self.pos.col = 1;
        } else {
            self.pos.col += 1;
        }
        Some(c)
    }

    fn skip_trivia(&mut self) {
        while let Some(&c) = self.chars.peek() {
            if c == ';' {
                while let Some(&c) = self.chars.peek() {
                    if c == '\n' {
                        break;
                    }
                    self.bump();
                }
            } else if c.is_whitespace() {
                self.bump();
            } else {
                break;
            }
        }
    }

    fn sexp(&mut self) -> Result<Sexp, ParseError> {
        self.skip_trivia();
        let start = self.pos;
        match self.chars.peek().copied() {
            None => err(start, "unexpected end of input"),
            Some(')') => err(start, "unexpected ')'"),
            Some('(') => {
                self.bump();
                let mut items = Vec::new();
                loop {
                    self.skip_trivia();
                    match self.chars.peek() {
                        None => return err(start, "unclosed '('"),
                        Some(')') => {
                            self.bump();
                            return Ok(Sexp::List(items, start));
                        }
                        Some(_) => items.push(self.sexp()?),
                    }
                }
            }
            Some(_) => {
                let mut s = String::new();
                while let Some(&c) = self.chars.peek() {
                    if c.is_whitespace() || c == '(' || c == ')' || c == ';' {
                        break;
                    }
                    s.push(c);
                    self.bump();
                }
                Ok(Sexp::Atom(s, start))
            }
        }
    }
}

fn read_one(text: &str) -> Result<Sexp, ParseError> {
    let mut lx = Lexer::new(text);
    let s = lx.sexp()?;
    lx.skip_trivia();
    if lx.chars.peek().is_some() {
        return err(lx.pos, "trailing input after top-level form");
    }
    Ok(s)
}

const TERM_KEYWORDS: &[&str] = &[
    "hole",
    "err",
    "abort",
    "inl",
    "inr",
    "case",
    "unit",
    "usplit",
    "pair",
    "split",
    "rollmu",
    "pmroll",
    "thunk",
    "force",
    "ret",
    "bind",
    "lam",
    "app",
    "emptypair",
    "wpair",
    "fst",
    "snd",
    "rollnu",
    "unrollnu",
    "up",
    "dn",
    "let",
];

fn is_ident(s: &str) -> bool {
    let mut cs = s.chars();
    match cs.next() {
        Some(c) if c.is_alphabetic() || c == '_' => {}
        _ => return false,
    }
    s.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') && !TERM_KEYWORDS.contains(&s)
}

fn is_type_ident(s: &str) -> bool {
    is_ident(s) && !matches!(s, "dyncomp" | "top" | "U" | "F" | "mu" | "nu")
}

// Types.

fn vtype(s: &Sexp) -> Result<VTy, ParseError> {
    match s {
        Sexp::Atom(a, p) => match a.as_str() {
            "?" => Ok(Arc::new(ValueType::Dyn)),
            "0" => Ok(Arc::new(ValueType::Zero)),
            "1" => Ok(Arc::new(ValueType::Unit)),
            x if is_type_ident(x) => Ok(Arc::new(ValueType::Var(Name::from(x)))),
            _ => err(*p, format!("expected a value type, found '{a}'")),
        },
        Sexp::List(items, p) => {
            let (head, args) = split_head(items, *p)?;
            let want = |n: usize| -> Result<(), ParseError> {
                if args.len() == n {
                    Ok(())
                } else {
                    err(*p, format!("'{head}' expects {n} argument(s), got {}", args.len()))
                }
            };
            match head {
                "+" => {
                    want(2)?;
                    Ok(Arc::new(ValueType::Sum(vtype(&args[0])?, vtype(&args[1])?)))
                }
                "*" => {
                    want(2)?;
                    Ok(Arc::new(ValueType::Prod(vtype(&args[0])?, vtype(&args[1])?)))
                }
                "U" => {
                    want(1)?;
                    Ok(Arc::new(ValueType::Thunk(ctype(&args[0])?)))
                }
                "mu" => {
                    want(2)?;
                    let x = type_binder(&args[0])?;
                    Ok(Arc::new(ValueType::Mu(x, vtype(&args[1])?)))
                }
                _ => err(*p, format!("unknown value type former '{head}'")),
            }
        }
    }
}

fn ctype(s: &Sexp) -> Result<CTy, ParseError> {
    match s {
        Sexp::Atom(a, p) => match a.as_str() {
            "dyncomp" => Ok(Arc::new(ComputationType::CoDyn)),
            "top" => Ok(Arc::new(ComputationType::Top)),
            x if is_type_ident(x) => Ok(Arc::new(ComputationType::Var(Name::from(x)))),
            _ => err(*p, format!("expected a computation type, found '{a}'")),
        },
        Sexp::List(items, p) => {
            let (head, args) = split_head(items, *p)?;
            let want = |n: usize| -> Result<(), ParseError> {
                if args.len() == n {
                    Ok(())
                } else {
                    err(*p, format!("'{head}' expects {n} argument(s), got {}", args.len()))
                }
            };
            match head {
                "F" => {
                    want(1)?;
                    Ok(Arc::new(ComputationType::Ret(vtype(&args[0])?)))
                }
                "&" => {
                    want(2)?;
                    Ok(Arc::new(ComputationType::With(ctype(&args[0])?, ctype(&args[1])?)))
                }
                "->" => {
                    want(2)?;
                    Ok(Arc::new(ComputationType::Arrow(vtype(&args[0])?, ctype(&args[1])?)))
                }
                "nu" => {
                    want(2)?;
                    let y = type_binder(&args[0])?;
                    Ok(Arc::new(ComputationType::Nu(y, ctype(&args[1])?)))
                }
                _ => err(*p, format!("unknown computation type former '{head}'")),
            }
        }
    }
}

fn is_ctype_head(s: &Sexp) -> bool {
    match s {
        Sexp::Atom(a, _) => matches!(a.as_str(), "dyncomp" | "top"),
        Sexp::List(items, _) => matches!(
            items.first(),
            Some(Sexp::Atom(h, _)) if matches!(h.as_str(), "F" | "&" | "->" | "nu")
        ),
    }
}

fn any_type(s: &Sexp) -> Result<Type, ParseError> {
    if is_ctype_head(s) {
        ctype(s).map(Type::Comp)
    } else {
        vtype(s).map(Type::Val)
    }
}

fn type_binder(s: &Sexp) -> Result<Name, ParseError> {
    match s {
        Sexp::Atom(a, _) if is_type_ident(a) => Ok(Name::from(a.as_str())),
        _ => err(s.pos(), "expected a type variable"),
    }
}

fn split_head(items: &[Sexp], p: Pos) -> Result<(&str, &[Sexp]), ParseError> {
    match items.split_first() {
        Some((Sexp::Atom(h, _), rest)) => Ok((h.as_str(), rest)),
        Some((other, _)) => err(other.pos(), "expected a keyword in head position"),
        None => err(p, "empty form"),
    }
}

pub fn parse_vtype(text: &str) -> Result<VTy, ParseError> {
    vtype(&read_one(text)?)
}

pub fn parse_ctype(text: &str) -> Result<CTy, ParseError> {
    ctype(&read_one(text)?)
}

/// Parse a type of either sort; the sort is read off the outer former.
pub fn parse_type(text: &str) -> Result<Type, ParseError> {
    any_type(&read_one(text)?)
}

// Terms.

struct TermParser {
    fresh: Fresh,
    scope: Vec<(String, Name)>,
    spans: SpanMap,
}

fn collect_atoms(s: &Sexp, out: &mut Fresh) {
    match s {
        Sexp::Atom(a, _) => out.reserve(&Name::from(a.as_str())),
        Sexp::List(items, _) => items.iter().for_each(|i| collect_atoms(i, out)),
    }
}

impl TermParser {
    fn lookup(&self, x: &str) -> Name {
        self.scope.iter().rev().find(|(s, _)| s == x).map(|(_, n)| n.clone()).unwrap_or_else(|| Name::from(x))
    }

    fn binder(&mut self, s: &Sexp) -> Result<(String, Name), ParseError> {
        match s {
            Sexp::Atom(a, _) if is_ident(a) => {
                let n = self.fresh.fresh(Name::from(a.as_str()).base());
                Ok((a.clone(), n))
            }
            _ => err(s.pos(), "expected a variable name"),
        }
    }

    fn under<T>(
        &mut self,
        bs: &[(String, Name)],
        f: impl FnOnce(&mut Self) -> Result<T, ParseError>,
    ) -> Result<T, ParseError> {
        let n = self.scope.len();
        self.scope.extend(bs.iter().cloned());
        let out = f(self);
        self.scope.truncate(n);
        out
    }

    fn mk(&mut self, t: Term, p: Pos) -> Tm {
        let t = Arc::new(t);
        self.spans.insert(&t, p);
        t
    }

    fn term(&mut self, s: &Sexp) -> Result<Tm, ParseError> {
        match s {
            Sexp::Atom(a, p) => {
                let t = match a.as_str() {
                    "hole" => Term::Hole,
                    "unit" => Term::UnitV,
                    "emptypair" => Term::EmptyPair,
                    x if is_ident(x) => Term::Var(self.lookup(x)),
                    _ => return err(*p, format!("unexpected atom '{a}'")),
                };
                Ok(self.mk(t, *p))
            }
            Sexp::List(items, p) => {
                let p = *p;
                let (head, args) = split_head(items, p)?;
                let arity = |ns: &[usize]| -> Result<(), ParseError> {
                    if ns.contains(&args.len()) {
                        Ok(())
                    } else {
                        err(p, format!("'{head}' got {} argument(s)", args.len()))
                    }
                };
                let t = match head {
                    "err" => {
                        arity(&[1])?;
                        Term::Err(ctype(&args[0])?)
                    }
                    "abort" => {
                        arity(&[1, 2])?;
                        if args.len() == 2 {
                            Term::Abort(Some(any_type(&args[0])?), self.term(&args[1])?)
                        } else {
                            Term::Abort(None, self.term(&args[0])?)
                        }
                    }
                    "inl" | "inr" => {
                        arity(&[1, 2])?;
                        let (ann, v) = if args.len() == 2 {
                            (Some(vtype(&args[0])?), self.term(&args[1])?)
                        } else {
                            (None, self.term(&args[0])?)
                        };
                        if head == "inl" {
                            Term::Inl(ann, v)
                        } else {
                            Term::Inr(ann, v)
                        }
                    }
                    "case" => {
                        arity(&[3])?;
                        let scrut = self.term(&args[0])?;
                        let (x, l) = self.branch(&args[1], "inl")?;
                        let (y, r) = self.branch(&args[2], "inr")?;
                        Term::Case(scrut, x, l, y, r)
                    }
                    "usplit" => {
                        arity(&[2])?;
                        Term::UnitSplit(self.term(&args[0])?, self.term(&args[1])?)
                    }
                    "pair" => {
                        arity(&[2])?;
                        Term::PairV(self.term(&args[0])?, self.term(&args[1])?)
                    }
                    "split" => {
                        arity(&[3])?;
                        let scrut = self.term(&args[0])?;
                        let bs = match &args[1] {
                            Sexp::List(v, _) if v.len() == 2 => {
                                vec![self.binder(&v[0])?, self.binder(&v[1])?]
                            }
                            other => return err(other.pos(), "expected '(x y)'"),
                        };
                        let body = self.under(&bs, |s| s.term(&args[2]))?;
                        Term::Split(scrut, bs[0].1.clone(), bs[1].1.clone(), body)
                    }
                    "rollmu" => {
                        arity(&[2])?;
                        Term::RollMu(vtype(&args[0])?, self.term(&args[1])?)
                    }
                    "pmroll" => {
                        arity(&[3])?;
                        let scrut = self.term(&args[0])?;
                        let b = match &args[1] {
                            Sexp::List(v, _) if v.len() == 1 => self.binder(&v[0])?,
                            other => return err(other.pos(), "expected '(x)'"),
                        };
                        let body = self.under(std::slice::from_ref(&b), |s| s.term(&args[2]))?;
                        Term::UnrollMu(scrut, b.1, body)
                    }
                    "thunk" => {
                        arity(&[1])?;
                        Term::Thunk(self.term(&args[0])?)
                    }
                    "force" => {
                        arity(&[1])?;
                        Term::Force(self.term(&args[0])?)
                    }
                    "ret" => {
                        arity(&[1])?;
                        Term::RetV(self.term(&args[0])?)
                    }
                    "bind" => {
                        arity(&[3])?;
                        let m = self.term(&args[1])?;
                        let b = self.binder(&args[0])?;
                        let n = self.under(std::slice::from_ref(&b), |s| s.term(&args[2]))?;
                        Term::Bind(m, b.1, n)
                    }
                    "let" => {
                        arity(&[3])?;
                        let v = self.term(&args[1])?;
                        let b = self.binder(&args[0])?;
                        let e = self.under(std::slice::from_ref(&b), |s| s.term(&args[2]))?;
                        return Ok(subst_value(&e, &b.1, &v));
                    }
                    "lam" => {
                        arity(&[2])?;
                        let (b, a) = match &args[0] {
                            Sexp::List(v, _) if v.len() == 2 => (self.binder(&v[0])?, vtype(&v[1])?),
                            other => return err(other.pos(), "expected '(x A)'"),
                        };
                        let body = self.under(std::slice::from_ref(&b), |s| s.term(&args[1]))?;
                        Term::Lam(b.1, a, body)
                    }
                    "app" => {
                        arity(&[2])?;
                        Term::App(self.term(&args[0])?, self.term(&args[1])?)
                    }
                    "wpair" => {
                        arity(&[2])?;
                        Term::WithPair(self.term(&args[0])?, self.term(&args[1])?)
                    }
                    "fst" => {
                        arity(&[1])?;
                        Term::Fst(self.term(&args[0])?)
                    }
                    "snd" => {
                        arity(&[1])?;
                        Term::Snd(self.term(&args[0])?)
                    }
                    "rollnu" => {
                        arity(&[2])?;
                        Term::RollNu(ctype(&args[0])?, self.term(&args[1])?)
                    }
                    "unrollnu" => {
                        arity(&[1])?;
                        Term::UnrollNu(self.term(&args[0])?)
                    }
                    "up" => {
                        arity(&[3])?;
                        Term::UpCast(vtype(&args[0])?, vtype(&args[1])?, self.term(&args[2])?)
                    }
                    "dn" => {
                        arity(&[3])?;
                        Term::DnCast(ctype(&args[0])?, ctype(&args[1])?, self.term(&args[2])?)
                    }
                    other => return err(p, format!("unknown form '{other}'")),
                };
                Ok(self.mk(t, p))
            }
        }
    }

    fn branch(&mut self, s: &Sexp, tag: &str) -> Result<(Name, Tm), ParseError> {
        match s {
            Sexp::List(v, _) if v.len() == 3 && matches!(&v[0], Sexp::Atom(h, _) if h == tag) => {
                let b = self.binder(&v[1])?;
                let body = self.under(std::slice::from_ref(&b), |s| s.term(&v[2]))?;
                Ok((b.1, body))
            }
            other => err(other.pos(), format!("expected '({tag} x E)'")),
        }
    }
}

/// Parse one term. Binders are renamed to distinct `base_k` names; free
/// variables keep their spelling.
pub fn parse_term(text: &str) -> Result<Parsed, ParseError> {
    let s = read_one(text)?;
    let mut fresh = Fresh::new();
    collect_atoms(&s, &mut fresh);
    let mut p = TermParser { fresh, scope: Vec::new(), spans: SpanMap::default() };
    let term = p.term(&s)?;
    Ok(Parsed { term, spans: p.spans })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, tm, ty};

    fn t(s: &str) -> Tm {
        parse_term(s).unwrap().term
    }

    #[test]
    fn constructor_readings() {
        assert_eq!(t("(ret (inl unit))"), tm::ret(Arc::new(Term::Inl(None, tm::unit()))));
        assert_eq!(t("(up 1 ? x)"), tm::up(ty::unit(), ty::dyn_(), tm::var("x")));
        let b = t("(bind x (ret unit) (ret x))");
        assert!(alpha_eq(&b, &tm::bind(tm::ret(tm::unit()), "x", tm::ret(tm::var("x")))));
    }

    #[test]
    fn binders_are_distinct() {
        let b = t("(bind x (ret unit) (bind x (ret x) (ret x)))");
        match &*b {
            Term::Bind(_, x0, rest) => match &**rest {
                Term::Bind(m, x1, body) => {
                    assert_ne!(x0, x1);
                    assert_eq!(**m, Term::RetV(tm::var(x0.clone())));
                    assert_eq!(**body, Term::RetV(tm::var(x1.clone())));
                }
                _ => panic!(),
            },
            _ => panic!(),
        }
    }

    #[test]
    fn freshening_avoids_free_names() {
        let b = t("(bind x (ret x_0) (ret x))");
        match &*b {
            Term::Bind(m, x, _) => {
                assert_eq!(**m, Term::RetV(tm::var("x_0")));
                assert_ne!(x.as_str(), "x_0");
            }
            _ => panic!(),
        }
    }

    #[test]
    fn let_substitutes() {
        let e = t("(let y unit (ret (pair y y)))");
        assert_eq!(e, tm::ret(tm::pair(tm::unit(), tm::unit())));
    }

    #[test]
    fn types() {
        assert_eq!(parse_vtype("(+ 1 1)").unwrap(), ty::bool_());
        assert_eq!(parse_ctype("(-> ? dyncomp)").unwrap(), ty::arrow(ty::dyn_(), ty::codyn()));
        assert_eq!(
            parse_vtype("(mu X (U (nu Y (& Y (F X)))))").unwrap(),
            ty::mu("X", ty::thunk(ty::nu("Y", ty::with(ty::cvar("Y"), ty::ret(ty::vvar("X"))))))
        );
        assert!(matches!(parse_type("(F 1)").unwrap(), Type::Comp(_)));
        assert!(matches!(parse_type("(U top)").unwrap(), Type::Val(_)));
    }

    #[test]
    fn comments_and_positions() {
        let p = parse_term("; header\n(ret\n  (force zz))").unwrap();
        assert_eq!(p.spans.get(&p.term), Some(Pos { line: 2, col: 1 }));
        if let Term::RetV(f) = &*p.term {
            assert_eq!(p.spans.get(f), Some(Pos { line: 3, col: 3 }));
        } else {
            panic!()
        }
    }

    #[test]
    fn errors_have_positions() {
        let e = parse_term("(ret unit").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 1 });
        let e = parse_term("(ret (bogus unit))").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 6 });
        assert!(parse_term("(ret unit) extra").is_err());
        assert!(parse_term("(lam x (ret x))").is_err());
    }
}
