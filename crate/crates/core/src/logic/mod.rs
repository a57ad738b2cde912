//! The two formal languages and the derivation checker.

pub mod derivation;
mod lexer;
pub mod lnu;
pub mod lo;

pub use derivation::{check_derivation, Derivation, Step, Verdict};
pub use lnu::{eval_lnu, parse_lnu, Lnu, LnuEvaluator};
pub use lo::{check_positive_lo, compile_lo_to_property, eval_lo, parse_lo, Assignment, Lo};
