//! The elimination operator `T_φ̄`, its iteration to the outcome, and the
//! Tarski and inclusion-lemma checks.
//!
//! Games are finite, so every iteration closes at a finite ordinal. The
//! transfinite stages that matter for infinite games are out of scope.

use std::fmt;

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::game::{Game, Restriction};
use crate::optimality::{self, PropertyProfile};
use crate::par::{self, Parallelism};

/// `T_φ̄(G)`: keep `s_i ∈ G_i` iff `φ_i(s_i, G)`.
pub fn apply_t(profile: &PropertyProfile, r: &Restriction) -> Result<Restriction> {
    apply_t_with(profile, r, Parallelism::Sequential)
}

/// As [`apply_t`], evaluating the per-strategy properties with `mode`.
pub fn apply_t_with(profile: &PropertyProfile, r: &Restriction, mode: Parallelism) -> Result<Restriction> {
    let g = profile.game();
    r.check_game(g)?;
    let cells: Vec<(usize, usize)> = (0..g.num_players())
        .flat_map(|i| r.strategies(i).map(move |s| (i, s)))
        .collect();
    let keep = par::map(mode, &cells, |&(i, s)| profile.get(i).holds(s, r));
    let mut out = Restriction::empty(g);
    for (&(i, s), k) in cells.iter().zip(keep) {
        if k? {
            out.insert(i, s);
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EliminationTrace {
    stages: Vec<Restriction>,
}

impl EliminationTrace {
    /// `T^0 = H, T^1, ..., T^α` with `T^{α+1} = T^α`.
    pub fn stages(&self) -> &[Restriction] {
        &self.stages
    }

    pub fn closure_ordinal(&self) -> usize {
        self.stages.len() - 1
    }

    pub fn outcome(&self) -> &Restriction {
        self.stages.last().expect("trace always holds the initial stage")
    }

    pub fn display<'a>(&'a self, g: &'a Game) -> TraceDisplay<'a> {
        TraceDisplay { trace: self, g }
    }
}

pub struct TraceDisplay<'a> {
    trace: &'a EliminationTrace,
    g: &'a Game,
}

impl fmt::Display for TraceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, stage) in self.trace.stages.iter().enumerate() {
            writeln!(f, "stage {k}: {}", stage.display(self.g))?;
        }
        Ok(())
    }
}

pub fn iterate_to_outcome(profile: &PropertyProfile) -> Result<EliminationTrace> {
    iterate_to_outcome_with(profile, Parallelism::Sequential)
}

pub fn iterate_to_outcome_with(profile: &PropertyProfile, mode: Parallelism) -> Result<EliminationTrace> {
    iterate_from(profile, Restriction::full(profile.game()), mode)
}

/// Iterates `T_φ̄` from an arbitrary start until it stops changing.
pub fn iterate_from(profile: &PropertyProfile, start: Restriction, mode: Parallelism) -> Result<EliminationTrace> {
    let mut stages = vec![start];
    loop {
        let current = stages.last().expect("non-empty");
        let next = apply_t_with(profile, current, mode)?;
        if &next == current {
            return Ok(EliminationTrace { stages });
        }
        if !next.is_subset_unchecked(current) {
            return Err(Error::Internal("elimination operator is not contracting".into()));
        }
        stages.push(next);
    }
}

/// `νT = ⋃{G | G ⊆ T(G)}` by enumerating every restriction. Refuses
/// non-monotonic profiles, for which the union need not be a fixpoint.
pub fn largest_fixpoint_via_postfixpoints(profile: &PropertyProfile, budgets: &Budgets) -> Result<Restriction> {
    optimality::require_monotonic(profile, budgets)?;
    let g = profile.game();
    budgets.check_restrictions(g.total_strategies())?;
    let post = par::map_range(
        budgets.parallelism,
        0..(1usize << g.total_strategies()),
        |code| -> Result<Option<Restriction>> {
            let r = Restriction::from_code(g, code as u64);
            let t = apply_t(profile, &r)?;
            Ok(r.is_subset_unchecked(&t).then_some(r))
        },
    );
    let mut acc = Restriction::empty(g);
    for r in post {
        if let Some(r) = r? {
            acc = Restriction::join(&[acc, r])?;
        }
    }
    Ok(acc)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LemmaInc {
    Holds,
    /// The first profile is not monotonic, so the lemma does not apply.
    NotMonotonic {
        player: usize,
    },
    /// `T_1(G) ⊄ T_2(G)`: `strategy` of `player` survives `T_1` but not `T_2`.
    Inclusion {
        restriction: Restriction,
        player: usize,
        strategy: usize,
    },
    /// Pointwise inclusion held on every checked stage, yet the outcomes are
    /// not included. Should be impossible.
    Outcome,
}

/// Checks the hypothesis `T_1(G) ⊆ T_2(G)` on every stage reached by either
/// iteration, then the conclusion `T_1^∞ ⊆ T_2^∞`.
pub fn check_lemma_inc(p1: &PropertyProfile, p2: &PropertyProfile, budgets: &Budgets) -> Result<LemmaInc> {
    if p1.game().id() != p2.game().id() {
        return Err(Error::GameMismatch);
    }
    for p in p1.properties() {
        if optimality::is_monotonic_on(p, budgets)? != optimality::Monotonicity::Monotonic {
            return Ok(LemmaInc::NotMonotonic { player: p.player() });
        }
    }
    let t1 = iterate_to_outcome(p1)?;
    let t2 = iterate_to_outcome(p2)?;
    if let Some(v) = stagewise_inclusion(p1, p2, t1.stages().iter().chain(t2.stages()))? {
        return Ok(v);
    }
    if !t1.outcome().is_subset_unchecked(t2.outcome()) {
        return Ok(LemmaInc::Outcome);
    }
    Ok(LemmaInc::Holds)
}

/// First `G` among `stages` with `T_1(G) ⊄ T_2(G)`.
pub fn stagewise_inclusion<'a>(
    p1: &PropertyProfile,
    p2: &PropertyProfile,
    stages: impl IntoIterator<Item = &'a Restriction>,
) -> Result<Option<LemmaInc>> {
    for r in stages {
        let a = apply_t(p1, r)?;
        let b = apply_t(p2, r)?;
        for i in 0..a.num_players() {
            if let Some(s) = a.component(i).difference(b.component(i)).next() {
                return Ok(Some(LemmaInc::Inclusion {
                    restriction: r.clone(),
                    player: i,
                    strategy: s,
                }));
            }
        }
    }
    Ok(None)
}
