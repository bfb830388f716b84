//! Toolchain for a gradually typed call-by-push-value language.

pub mod decomplexify;
pub mod dynamism;
pub mod dyninterp;
pub mod elaborate;
pub mod harness;
pub mod machine;
pub mod syntax;
pub mod typecheck;
