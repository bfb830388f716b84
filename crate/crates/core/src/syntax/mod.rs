//! Abstract and concrete syntax shared by every stage of the pipeline.
//!
//! One grammar covers the gradual surface language, the recursive core
//! with complex values and stacks, and the operational fragment the
//! machine runs. [`stage`] carves the three apart.

use std::fmt;
use std::sync::Arc;

mod parse;
mod print;
pub mod stage;
mod subst;
mod term;
pub mod types;

pub use parse::{parse_ctype, parse_term, parse_type, parse_vtype, ParseError, Parsed, Pos, SpanMap};
pub use print::pretty;
pub use stage::{stage_check, Stage, StageError};
pub use subst::{
    alpha_eq, contains_hole, free_vars, names_in, plug_stack, plug_stack_closed, subst_value, subst_value_closed, Fresh,
};
pub use term::{tm, Sort, Term, Tm};
pub use types::{cty_eq, ty, unroll_mu, unroll_nu, vty_eq, CTy, ComputationType, Type, VTy, ValueType};

/// A variable name. Cheap to clone and safe to share across threads.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    /// The name with any trailing `_<digits>` freshening suffix removed.
    pub fn base(&self) -> &str {
        let s = self.as_str();
        if let Some(i) = s.rfind('_') {
            let tail = &s[i + 1..];
            if i > 0 && !tail.is_empty() && tail.bytes().all(|b| b.is_ascii_digit()) {
                return &s[..i];
            }
        }
        s
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name(Arc::from(s))
    }
}

impl From<String> for Name {
    fn from(s: String) -> Self {
        Name(Arc::from(s))
    }
}

impl From<&Name> for Name {
    fn from(n: &Name) -> Self {
        n.clone()
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[cfg(test)]
mod tests {
    use super::Name;

    #[test]
    fn base_strips_numeric_suffix_only() {
        assert_eq!(Name::from("x_12").base(), "x");
        assert_eq!(Name::from("x_a").base(), "x_a");
        assert_eq!(Name::from("_3").base(), "_3");
        assert_eq!(Name::from("foo_bar_7").base(), "foo_bar");
    }
}
