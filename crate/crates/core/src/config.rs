//! Enumeration budgets shared by the exhaustive checkers.

use crate::error::{Error, Result};
use crate::par::Parallelism;

/// Hard caps on exhaustive enumeration. Anything above a cap is refused with
/// [`Error::BudgetExceeded`] rather than silently truncated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budgets {
    /// Max total strategy count `Σ_i |H_i|` for sweeps over all `2^Σ`
    /// restrictions.
    pub restriction_strategies: usize,
    /// Max states in a constructed or loaded model.
    pub states: usize,
    /// Max states for enumerating every event `E ⊆ Ω`.
    pub event_states: usize,
    pub parallelism: Parallelism,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            restriction_strategies: 10,
            states: 4096,
            event_states: 12,
            parallelism: Parallelism::default(),
        }
    }
}

impl Budgets {
    pub fn sequential(self) -> Self {
        Budgets {
            parallelism: Parallelism::Sequential,
            ..self
        }
    }

    pub fn check_restrictions(&self, total_strategies: usize) -> Result<()> {
        if total_strategies > self.restriction_strategies || total_strategies >= 63 {
            return Err(Error::BudgetExceeded {
                what: "restriction sweep (total strategies)",
                needed: total_strategies as u128,
                budget: self.restriction_strategies as u128,
            });
        }
        Ok(())
    }

    pub fn check_states(&self, states: u128) -> Result<()> {
        if states > self.states as u128 {
            return Err(Error::BudgetExceeded {
                what: "model states",
                needed: states,
                budget: self.states as u128,
            });
        }
        Ok(())
    }

    pub fn check_events(&self, states: usize) -> Result<()> {
        if states > self.event_states {
            return Err(Error::BudgetExceeded {
                what: "event enumeration (states)",
                needed: states as u128,
                budget: self.event_states as u128,
            });
        }
        Ok(())
    }
}
