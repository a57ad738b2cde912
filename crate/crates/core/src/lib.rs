//! Exact finite-game machinery: restrictions, dominance and best response
//! with rational LPs, elimination operators over optimality properties,
//! epistemic models, the two modal languages, and public announcements.

pub mod announcements;
pub mod checks;
pub mod config;
pub mod dominance;
pub mod epistemic;
pub mod error;
pub mod fixtures;
pub mod game;
pub mod logic;
pub mod lp;
pub mod operators;
pub mod optimality;
pub mod par;
pub mod random;
pub mod rational;

pub use config::Budgets;
pub use error::{Error, Result};
pub use game::{Belief, CorrelatedBelief, Game, MixedStrategy, Restriction};
pub use optimality::{Builtin, OptimalityProperty, PropertyProfile};
pub use rational::Rational;
