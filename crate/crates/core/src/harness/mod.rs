//! Observational testing: enumerate closed values and observation contexts
//! per type, then check cast and term laws as equalities or error
//! orderings on program results.
//!
//! A reported failure is always a real refutation. A pass only covers the
//! enumeration depth recorded in the report.

use std::collections::HashMap;
use std::sync::Mutex;

use rayon::prelude::*;
use serde::Serialize;

use crate::dyninterp::{Interp, InterpKind};
use crate::machine::DEFAULT_FUEL;
use crate::syntax::{CTy, Tm, VTy};

mod check;
pub mod corpus;
mod enumerate;
pub mod gen;
pub mod graduality;
pub mod laws;
mod observe;
mod universe;

pub use check::{Failure, Outcome, Relation, Subject, MAX_FAILURES};
pub use enumerate::omega;
pub use universe::TypeUniverse;

pub const DEFAULT_DEPTH: usize = 3;

/// Upper bounds on enumeration sizes. Lists longer than a cap are thinned
/// by even-stride sampling, so small elements always survive.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Caps {
    pub values: usize,
    pub observers: usize,
    pub closings: usize,
    /// Instances drawn for laws that sample terms rather than types.
    pub samples: usize,
}

impl Default for Caps {
    fn default() -> Self {
        Caps { values: 48, observers: 96, closings: 48, samples: 100 }
    }
}

pub(crate) fn thin<T: Clone>(v: Vec<T>, cap: usize) -> Vec<T> {
    if v.len() <= cap {
        return v;
    }
    (0..cap).map(|i| v[i * v.len() / cap].clone()).collect()
}

type Cache<T> = Mutex<HashMap<(T, usize), std::sync::Arc<Vec<Tm>>>>;

/// Shared state for one interpretation and depth: enumeration caches plus
/// the knobs every check uses.
pub struct Harness {
    pub interp: &'static Interp,
    pub depth: usize,
    pub fuel: u64,
    pub caps: Caps,
    value_cache: Cache<VTy>,
    observer_cache: Cache<CTy>,
}

impl Harness {
    pub fn new(kind: InterpKind, depth: usize) -> Harness {
        Harness::with_caps(kind, depth, Caps::default())
    }

    pub fn with_caps(kind: InterpKind, depth: usize, caps: Caps) -> Harness {
        Harness {
            interp: kind.interp(),
            depth,
            fuel: DEFAULT_FUEL,
            caps,
            value_cache: Mutex::default(),
            observer_cache: Mutex::default(),
        }
    }
}

/// Closed values of a core type with at most `depth` roll or thunk layers.
pub fn enumerate_values(a: &VTy, depth: usize, kind: InterpKind) -> Vec<Tm> {
    Harness::new(kind, depth).values(a, depth).to_vec()
}

/// Observers of a core type, as closed stacks into `F (1 + 1)`.
pub fn observers_for(t: &crate::syntax::Type, depth: usize, kind: InterpKind) -> Vec<Tm> {
    Harness::new(kind, depth).observers_for(t, depth).to_vec()
}

/// One row of the law report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LawResult {
    pub law: String,
    #[serde(rename = "type")]
    pub ty: String,
    pub instances: usize,
    pub failures: Vec<Failure>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub interp: String,
    pub depth: usize,
    pub results: Vec<LawResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|r| r.failures.is_empty())
    }

    pub fn failures(&self) -> impl Iterator<Item = &LawResult> {
        self.results.iter().filter(|r| !r.failures.is_empty())
    }
}

/// A unit of suite work: one law at one type.
pub struct Cell {
    pub law: &'static str,
    pub ty: String,
    run: Box<dyn Fn(&Harness) -> Outcome + Send + Sync>,
}

impl Cell {
    pub fn new(
        law: &'static str,
        ty: impl ToString,
        run: impl Fn(&Harness) -> Outcome + Send + Sync + 'static,
    ) -> Cell {
        Cell { law, ty: ty.to_string(), run: Box::new(run) }
    }

    pub fn run(&self, h: &Harness) -> LawResult {
        let out = (self.run)(h);
        LawResult { law: self.law.to_string(), ty: self.ty.clone(), instances: out.instances, failures: out.failures }
    }
}

/// Run cells on the rayon pool; results are sorted by law then type.
pub fn run_cells(h: &Harness, cells: &[Cell]) -> Vec<LawResult> {
    let mut results: Vec<LawResult> = cells.par_iter().map(|c| c.run(h)).collect();
    results.sort_by(|a, b| (&a.law, &a.ty).cmp(&(&b.law, &b.ty)));
    results
}

/// Every law over the universe at the harness depth, optionally restricted
/// to laws whose name starts with `only`.
pub fn run_law_suite(h: &Harness, only: Option<&str>) -> Report {
    let universe = TypeUniverse::new(h.depth);
    let cells: Vec<Cell> =
        laws::all_cells(h, &universe).into_iter().filter(|c| only.is_none_or(|n| c.law.starts_with(n))).collect();
    Report { interp: h.interp.kind.to_string(), depth: h.depth, results: run_cells(h, &cells) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn thinning_keeps_the_first_element() {
        let v: Vec<u32> = (0..100).collect();
        let t = thin(v, 7);
        assert_eq!(t.len(), 7);
        assert_eq!(t[0], 0);
        assert!(t.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(thin(vec![1, 2], 5), vec![1, 2]);
    }
}
