use std::fmt;

use super::term::Term;

/// Layout tree: atoms and parenthesized lists.
enum Doc {
    Atom(String),
    List(Vec<Doc>),
}

fn atom(s: impl ToString) -> Doc {
    Doc::Atom(s.to_string())
}

fn list(head: &str, rest: Vec<Doc>) -> Doc {
    let mut v = Vec::with_capacity(rest.len() + 1);
    v.push(atom(head));
    v.extend(rest);
    Doc::List(v)
}

fn doc(t: &Term) -> Doc {
    match t {
        Term::Var(x) => atom(x),
        Term::Hole => atom("hole"),
        Term::UnitV => atom("unit"),
        Term::EmptyPair => atom("emptypair"),
        Term::Err(b) => list("err", vec![atom(b)]),
        Term::Abort(Some(a), v) => list("abort", vec![atom(a), doc(v)]),
        Term::Abort(None, v) => list("abort", vec![doc(v)]),
        Term::Inl(a, v) | Term::Inr(a, v) => {
            let head = if matches!(t, Term::Inl(..)) { "inl" } else { "inr" };
            match a {
                Some(a) => list(head, vec![atom(a), doc(v)]),
                None => list(head, vec![doc(v)]),
            }
        }
        Term::Case(s, x, l, y, r) => {
            list("case", vec![doc(s), list("inl", vec![atom(x), doc(l)]), list("inr", vec![atom(y), doc(r)])])
        }
        Term::UnitSplit(s, e) => list("usplit", vec![doc(s), doc(e)]),
        Term::PairV(a, b) => list("pair", vec![doc(a), doc(b)]),
        Term::Split(s, x, y, e) => list("split", vec![doc(s), Doc::List(vec![atom(x), atom(y)]), doc(e)]),
        Term::RollMu(a, v) => list("rollmu", vec![atom(a), doc(v)]),
        Term::UnrollMu(s, x, e) => list("pmroll", vec![doc(s), Doc::List(vec![atom(x)]), doc(e)]),
        Term::Thunk(m) => list("thunk", vec![doc(m)]),
        Term::Force(v) => list("force", vec![doc(v)]),
        Term::RetV(v) => list("ret", vec![doc(v)]),
        Term::Bind(m, x, n) => list("bind", vec![atom(x), doc(m), doc(n)]),
        Term::Lam(x, a, m) => list("lam", vec![Doc::List(vec![atom(x), atom(a)]), doc(m)]),
        Term::App(m, v) => list("app", vec![doc(m), doc(v)]),
        Term::WithPair(a, b) => list("wpair", vec![doc(a), doc(b)]),
        Term::Fst(m) => list("fst", vec![doc(m)]),
        Term::Snd(m) => list("snd", vec![doc(m)]),
        Term::RollNu(b, m) => list("rollnu", vec![atom(b), doc(m)]),
        Term::UnrollNu(m) => list("unrollnu", vec![doc(m)]),
        Term::UpCast(a, b, v) => list("up", vec![atom(a), atom(b), doc(v)]),
        Term::DnCast(a, b, m) => list("dn", vec![atom(a), atom(b), doc(m)]),
    }
}

fn flat(d: &Doc, out: &mut String) {
    match d {
        Doc::Atom(s) => out.push_str(s),
        Doc::List(items) => {
            out.push('(');
            for (i, it) in items.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                flat(it, out);
            }
            out.push(')');
        }
    }
}

fn flat_len(d: &Doc) -> usize {
    match d {
        Doc::Atom(s) => s.chars().count(),
        Doc::List(items) => 2 + items.iter().map(flat_len).sum::<usize>() + items.len().saturating_sub(1),
    }
}

const WIDTH: usize = 80;

fn layout(d: &Doc, indent: usize, out: &mut String) {
    match d {
        Doc::List(items) if indent + flat_len(d) > WIDTH && items.len() > 1 => {
            out.push('(');
            flat(&items[0], out);
            // Keep short leading arguments (binders, types) on the head line.
            let mut i = 1;
            while i < items.len() - 1 && flat_len(&items[i]) <= 24 && !is_term_list(&items[i]) {
                out.push(' ');
                flat(&items[i], out);
                i += 1;
            }
            for it in &items[i..] {
                out.push('\n');
                out.push_str(&" ".repeat(indent + 2));
                layout(it, indent + 2, out);
            }
            out.push(')');
        }
        _ => flat(d, out),
    }
}

// Lists that are themselves terms (rather than binder groups) go on their
// own lines when breaking.
fn is_term_list(d: &Doc) -> bool {
    match d {
        Doc::List(items) => {
            matches!(items.first(), Some(Doc::Atom(h)) if KEYWORDS.contains(&h.as_str()))
        }
        Doc::Atom(_) => false,
    }
}

const KEYWORDS: &[&str] = &[
    "err", "abort", "inl", "inr", "case", "usplit", "pair", "split", "rollmu", "pmroll", "thunk", "force", "ret",
    "bind", "lam", "app", "wpair", "fst", "snd", "rollnu", "unrollnu", "up", "dn",
];

/// Multi-line rendering, breaking forms wider than 80 columns.
pub fn pretty(t: &Term) -> String {
    let mut s = String::new();
    layout(&doc(t), 0, &mut s);
    s
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut s = String::new();
        flat(&doc(self), &mut s);
        f.write_str(&s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::syntax::{alpha_eq, parse_term, tm, ty};

    #[test]
    fn flat_printing() {
        let t = tm::bind(tm::ret(tm::tt()), "x", tm::ret(tm::var("x")));
        assert_eq!(t.to_string(), "(bind x (ret (inl (+ 1 1) unit)) (ret x))");
        let l = tm::lam("y", ty::dyn_(), tm::ret(tm::up(ty::unit(), ty::dyn_(), tm::unit())));
        assert_eq!(l.to_string(), "(lam (y ?) (ret (up 1 ? unit)))");
    }

    #[test]
    fn pretty_round_trips() {
        let src = "(bind x (force (thunk (ret (pair unit (inl (+ 1 (* 1 1)) unit))))) \
                   (split x (a b) (case b (inl l (ret (inl (+ 1 1) l))) \
                   (inr r (ret (inr (+ 1 1) unit))))))";
        let t = parse_term(src).unwrap().term;
        let p = pretty(&t);
        assert!(p.contains('\n'));
        assert!(alpha_eq(&parse_term(&p).unwrap().term, &t));
    }
}
