//! Strict and weak dominance, by pure and mixed strategies, and best
//! responses to pure, independent-mixed and correlated beliefs, all relative
//! to an arbitrary restriction of the game.
//!
//! Quantifiers are read literally: with `G_{-i} = ∅` every strategy strictly
//! dominates every other (vacuous universal) while weak dominance never holds
//! (its existential part fails), and no belief can be held in `G`.

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::game::{CorrelatedBelief, Game, MixedStrategy, Restriction};
use crate::lp::{LinearProgram, LpOutcome, Relation};
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Mode {
    Strict,
    Weak,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Dominator {
    Pure(usize),
    Mixed(MixedStrategy),
}

/// One instance of `dominator ≻_G dominated` (or `≻^w_G`) for `player`.
#[derive(Debug, Clone)]
pub struct DominanceQuery<'a> {
    pub game: &'a Game,
    pub context: &'a Restriction,
    pub player: usize,
    pub dominated: usize,
    pub dominator: Dominator,
    pub mode: Mode,
}

impl DominanceQuery<'_> {
    pub fn holds(&self) -> Result<bool> {
        let g = self.game;
        self.context.check_game(g)?;
        g.check_strategy(self.player, self.dominated)?;
        let bases = g.opponent_bases(self.context, self.player);
        let value = |base: usize| -> Rational {
            match &self.dominator {
                Dominator::Pure(s) => g.payoff_from_base(base, self.player, *s).clone(),
                Dominator::Mixed(m) => m.weights().iter().fold(Rational::zero(), |acc, (s, w)| {
                    acc + w * g.payoff_from_base(base, self.player, *s)
                }),
            }
        };
        match &self.dominator {
            Dominator::Pure(s) => g.check_strategy(self.player, *s)?,
            Dominator::Mixed(m) if m.owner() != self.player => {
                return Err(Error::InvalidDistribution(
                    "mixed strategy owned by another player".into(),
                ))
            }
            Dominator::Mixed(_) => {}
        }
        let gaps = bases
            .iter()
            .map(|&b| value(b) - g.payoff_from_base(b, self.player, self.dominated));
        Ok(match self.mode {
            Mode::Strict => gaps.into_iter().all(|d| d.is_positive()),
            Mode::Weak => {
                let mut any_strict = false;
                for d in gaps {
                    if d.is_negative() {
                        return Ok(false);
                    }
                    any_strict |= d.is_positive();
                }
                any_strict
            }
        })
    }
}

/// `dominator ≻_G dominated`: strictly better against every `s_{-i} ∈ G_{-i}`.
pub fn strictly_dominates(
    g: &Game,
    ctx: &Restriction,
    player: usize,
    dominator: usize,
    dominated: usize,
) -> Result<bool> {
    DominanceQuery {
        game: g,
        context: ctx,
        player,
        dominated,
        dominator: Dominator::Pure(dominator),
        mode: Mode::Strict,
    }
    .holds()
}

/// `dominator ≻^w_G dominated`: never worse on `G_{-i}`, and better somewhere.
pub fn weakly_dominates(
    g: &Game,
    ctx: &Restriction,
    player: usize,
    dominator: usize,
    dominated: usize,
) -> Result<bool> {
    DominanceQuery {
        game: g,
        context: ctx,
        player,
        dominated,
        dominator: Dominator::Pure(dominator),
        mode: Mode::Weak,
    }
    .holds()
}

fn checked_support(g: &Game, player: usize, support: &[usize]) -> Result<Vec<usize>> {
    if support.is_empty() {
        return Err(Error::EmptySupport);
    }
    let mut s: Vec<usize> = support.to_vec();
    s.sort_unstable();
    s.dedup();
    for &k in &s {
        g.check_strategy(player, k)?;
    }
    Ok(s)
}

/// Searches for a mixed strategy on `support` that strictly dominates
/// `dominated` on `ctx`: maximize ε subject to
/// `Σ σ(s')·p(s', t) ≥ p(s, t) + ε` for every `t ∈ G_{-i}`, σ a distribution.
/// Returns the witness iff the optimum ε is positive.
pub fn mixed_strictly_dominates_exists(
    g: &Game,
    ctx: &Restriction,
    player: usize,
    support: &[usize],
    dominated: usize,
) -> Result<Option<MixedStrategy>> {
    ctx.check_game(g)?;
    g.check_strategy(player, dominated)?;
    let support = checked_support(g, player, support)?;
    let bases = g.opponent_bases(ctx, player);
    if bases.is_empty() {
        return MixedStrategy::pure(g, player, support[0]).map(Some);
    }
    let k = support.len();
    let eps = k;
    let mut lp = LinearProgram::new(k + 1);
    let mut objective = vec![Rational::zero(); k + 1];
    objective[eps] = Rational::one();
    lp.set_objective(objective);
    for j in 0..k {
        lp.set_nonnegative(j);
    }
    let mut simplex = vec![Rational::one(); k + 1];
    simplex[eps] = Rational::zero();
    lp.add_constraint(simplex, Relation::Eq, Rational::one());
    for &b in &bases {
        let mut row: Vec<Rational> = support
            .iter()
            .map(|&s| g.payoff_from_base(b, player, s).clone())
            .collect();
        row.push(-Rational::one());
        lp.add_constraint(row, Relation::Ge, g.payoff_from_base(b, player, dominated).clone());
    }
    match lp.solve()? {
        LpOutcome::Optimal { value, point } if value.is_positive() => {
            let witness = MixedStrategy::new(g, player, support.iter().copied().zip(point).collect())?;
            verify_witness(g, ctx, player, dominated, &witness, Mode::Strict)?;
            Ok(Some(witness))
        }
        LpOutcome::Optimal { .. } => Ok(None),
        LpOutcome::Infeasible => Err(Error::Internal("simplex over a distribution is always feasible".into())),
        LpOutcome::Unbounded => Err(Error::Internal("dominance gap unbounded with non-empty context".into())),
    }
}

/// Searches for a mixed strategy on `support` weakly dominating `dominated`
/// on `ctx`: every column gap `≥ 0`, maximizing the total gap; a witness
/// exists iff the optimum is positive.
pub fn mixed_weakly_dominates_exists(
    g: &Game,
    ctx: &Restriction,
    player: usize,
    support: &[usize],
    dominated: usize,
) -> Result<Option<MixedStrategy>> {
    ctx.check_game(g)?;
    g.check_strategy(player, dominated)?;
    let support = checked_support(g, player, support)?;
    let bases = g.opponent_bases(ctx, player);
    if bases.is_empty() {
        return Ok(None);
    }
    let k = support.len();
    let mut lp = LinearProgram::new(k);
    for j in 0..k {
        lp.set_nonnegative(j);
    }
    lp.add_constraint(vec![Rational::one(); k], Relation::Eq, Rational::one());
    let mut objective = vec![Rational::zero(); k];
    let mut baseline = Rational::zero();
    for &b in &bases {
        let row: Vec<Rational> = support
            .iter()
            .map(|&s| g.payoff_from_base(b, player, s).clone())
            .collect();
        for (o, r) in objective.iter_mut().zip(&row) {
            *o += r;
        }
        let target = g.payoff_from_base(b, player, dominated).clone();
        baseline += &target;
        lp.add_constraint(row, Relation::Ge, target);
    }
    lp.set_objective(objective);
    match lp.solve()? {
        LpOutcome::Optimal { value, point } if value > baseline => {
            let witness = MixedStrategy::new(g, player, support.iter().copied().zip(point).collect())?;
            verify_witness(g, ctx, player, dominated, &witness, Mode::Weak)?;
            Ok(Some(witness))
        }
        LpOutcome::Optimal { .. } | LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Internal("bounded simplex reported unbounded".into())),
    }
}

fn verify_witness(
    g: &Game,
    ctx: &Restriction,
    player: usize,
    dominated: usize,
    w: &MixedStrategy,
    mode: Mode,
) -> Result<()> {
    let ok = DominanceQuery {
        game: g,
        context: ctx,
        player,
        dominated,
        dominator: Dominator::Mixed(w.clone()),
        mode,
    }
    .holds()?;
    if ok {
        Ok(())
    } else {
        Err(Error::Internal("LP dominance witness failed exact verification".into()))
    }
}

/// The set of beliefs a best response is taken against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum BeliefClass {
    /// Joint pure strategies of the opponents.
    #[default]
    Pure,
    /// Joint mixed strategies (independent randomization). Exact for two
    /// players; for more players only the optional rational grid search is
    /// available, which is an approximation.
    Independent { grid_denominator: Option<u32> },
    /// Correlated strategies of the opponents, `Δ(G_{-i})`.
    Correlated,
}

impl BeliefClass {
    pub const DEFAULT_GRID: u32 = 8;

    pub fn label(&self) -> &'static str {
        match self {
            BeliefClass::Pure => "pure",
            BeliefClass::Independent { grid_denominator: None } => "independent",
            BeliefClass::Independent {
                grid_denominator: Some(_),
            } => "independent-grid (approximate)",
            BeliefClass::Correlated => "correlated",
        }
    }
}

/// Is `strategy` a best response among `compare` (the `G'_i` part is used)
/// to some belief of the given class held in `held`?
pub fn is_best_response(
    g: &Game,
    compare: &Restriction,
    held: &Restriction,
    player: usize,
    strategy: usize,
    class: BeliefClass,
) -> Result<bool> {
    compare.check_game(g)?;
    held.check_game(g)?;
    g.check_strategy(player, strategy)?;
    let bases = g.opponent_bases(held, player);
    if bases.is_empty() {
        return Ok(false);
    }
    let rivals: Vec<usize> = compare.strategies(player).collect();
    match class {
        BeliefClass::Pure => Ok(bases.iter().any(|&b| {
            let mine = g.payoff_from_base(b, player, strategy);
            rivals.iter().all(|&r| mine >= g.payoff_from_base(b, player, r))
        })),
        BeliefClass::Correlated => Ok(correlated_best_response(g, &bases, &rivals, player, strategy)?.is_some()),
        BeliefClass::Independent { grid_denominator } => {
            if g.num_players() == 2 {
                return Ok(correlated_best_response(g, &bases, &rivals, player, strategy)?.is_some());
            }
            match grid_denominator {
                None => Err(Error::UnsupportedBeliefClass(
                    "independent mixed beliefs with more than two players are not LP-expressible; \
                     use the correlated class or enable the rational grid search"
                        .into(),
                )),
                Some(d) => Ok(grid_best_response(g, held, &rivals, player, strategy, d.max(1))),
            }
        }
    }
}

/// A correlated belief over `G_{-i}` to which `strategy` is a best response
/// among `compare_i`, if one exists.
pub fn correlated_best_response_witness(
    g: &Game,
    compare: &Restriction,
    held: &Restriction,
    player: usize,
    strategy: usize,
) -> Result<Option<CorrelatedBelief>> {
    compare.check_game(g)?;
    held.check_game(g)?;
    g.check_strategy(player, strategy)?;
    let bases = g.opponent_bases(held, player);
    if bases.is_empty() {
        return Ok(None);
    }
    let rivals: Vec<usize> = compare.strategies(player).collect();
    correlated_best_response(g, &bases, &rivals, player, strategy)?
        .map(|point| {
            let weights = bases
                .iter()
                .zip(point)
                .map(|(&b, w)| (g.base_to_opponents(b, player), w))
                .collect();
            CorrelatedBelief::new(g, player, weights)
        })
        .transpose()
}

fn correlated_best_response(
    g: &Game,
    bases: &[usize],
    rivals: &[usize],
    player: usize,
    strategy: usize,
) -> Result<Option<Vec<Rational>>> {
    let m = bases.len();
    let mut lp = LinearProgram::new(m);
    for j in 0..m {
        lp.set_nonnegative(j);
    }
    lp.add_constraint(vec![Rational::one(); m], Relation::Eq, Rational::one());
    for &r in rivals {
        if r == strategy {
            continue;
        }
        let row = bases
            .iter()
            .map(|&b| g.payoff_from_base(b, player, strategy) - g.payoff_from_base(b, player, r))
            .collect();
        lp.add_constraint(row, Relation::Ge, Rational::zero());
    }
    match lp.solve()? {
        LpOutcome::Optimal { point, .. } => Ok(Some(point)),
        LpOutcome::Infeasible => Ok(None),
        LpOutcome::Unbounded => Err(Error::Internal("zero objective reported unbounded".into())),
    }
}

/// Exhaustive search over independent beliefs whose weights are multiples of
/// `1/denominator`. Sound for "yes" answers only.
fn grid_best_response(
    g: &Game,
    held: &Restriction,
    rivals: &[usize],
    player: usize,
    strategy: usize,
    denominator: u32,
) -> bool {
    let opponents: Vec<usize> = (0..g.num_players()).filter(|&j| j != player).collect();
    let grids: Vec<Vec<Vec<(usize, Rational)>>> = opponents
        .iter()
        .map(|&j| {
            let support: Vec<usize> = held.strategies(j).collect();
            compositions(denominator, support.len())
                .into_iter()
                .map(|c| {
                    support
                        .iter()
                        .zip(c)
                        .filter(|(_, k)| *k > 0)
                        .map(|(&s, k)| (s, Rational::new(k.into(), denominator.into())))
                        .collect()
                })
                .collect()
        })
        .collect();
    let mut choice = vec![0usize; opponents.len()];
    loop {
        // Expected payoff of each own strategy under this product belief.
        let mut joint: Vec<(usize, Rational)> = vec![(0, Rational::one())];
        for (slot, &j) in opponents.iter().enumerate() {
            let mut next = Vec::new();
            for (base, w) in &joint {
                for (s, ws) in &grids[slot][choice[slot]] {
                    next.push((base + s * g.strides_of(j), w * ws));
                }
            }
            joint = next;
        }
        let value = |s: usize| {
            joint.iter().fold(Rational::zero(), |acc, (b, w)| {
                acc + w * g.payoff_from_base(*b, player, s)
            })
        };
        let mine = value(strategy);
        if rivals.iter().all(|&r| mine >= value(r)) {
            return true;
        }
        let mut slot = 0;
        loop {
            if slot == choice.len() {
                return false;
            }
            choice[slot] += 1;
            if choice[slot] < grids[slot].len() {
                break;
            }
            choice[slot] = 0;
            slot += 1;
        }
    }
}

fn compositions(total: u32, parts: usize) -> Vec<Vec<u32>> {
    if parts == 0 {
        return Vec::new();
    }
    if parts == 1 {
        return vec![vec![total]];
    }
    let mut out = Vec::new();
    for first in 0..=total {
        for mut rest in compositions(total - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pd, three_by_two};
    use crate::rational::ratio;

    #[test]
    fn pd_strict_and_weak() {
        let g = pd();
        let full = Restriction::full(&g);
        assert!(strictly_dominates(&g, &full, 0, 1, 0).unwrap());
        assert!(!strictly_dominates(&g, &full, 0, 0, 0).unwrap());
        assert!(weakly_dominates(&g, &full, 0, 1, 0).unwrap());
        assert!(!weakly_dominates(&g, &full, 0, 1, 1).unwrap());
    }

    #[test]
    fn empty_context_is_literal() {
        let g = pd();
        let ctx = Restriction::from_names(&g, &[&["C", "D"], &[]]).unwrap();
        for a in 0..2 {
            for b in 0..2 {
                assert!(strictly_dominates(&g, &ctx, 0, a, b).unwrap());
                assert!(!weakly_dominates(&g, &ctx, 0, a, b).unwrap());
            }
        }
        let w = mixed_strictly_dominates_exists(&g, &ctx, 0, &[0], 1).unwrap();
        assert!(w.is_some());
        assert!(mixed_weakly_dominates_exists(&g, &ctx, 0, &[0, 1], 1)
            .unwrap()
            .is_none());
        assert!(!is_best_response(&g, &ctx, &ctx, 0, 0, BeliefClass::Pure).unwrap());
    }

    #[test]
    fn three_by_two_rows_have_no_pure_weak_dominance() {
        let g = three_by_two();
        let full = Restriction::full(&g);
        for a in 0..3 {
            for b in 0..3 {
                if a != b {
                    assert!(!weakly_dominates(&g, &full, 0, a, b).unwrap(), "{a} over {b}");
                }
            }
        }
    }

    #[test]
    fn mixed_dominance_of_b() {
        let g = three_by_two();
        let full = Restriction::full(&g);
        let w = mixed_strictly_dominates_exists(&g, &full, 0, &[0, 1], 2)
            .unwrap()
            .unwrap();
        assert_eq!(w.weight(0), ratio(1, 2));
        assert_eq!(w.weight(1), ratio(1, 2));
        assert!(mixed_weakly_dominates_exists(&g, &full, 0, &[0, 1], 2)
            .unwrap()
            .is_some());
        let pdg = pd();
        let pfull = Restriction::full(&pdg);
        assert!(mixed_strictly_dominates_exists(&pdg, &pfull, 0, &[0], 1)
            .unwrap()
            .is_none());
        assert_eq!(
            mixed_strictly_dominates_exists(&pdg, &pfull, 0, &[], 1),
            Err(Error::EmptySupport)
        );
    }

    #[test]
    fn strict_best_response_has_no_weak_dominator() {
        // Row 0 is the unique best reply to every column.
        let g = Game::bimatrix(
            &["a", "b", "c"],
            &["x", "y"],
            &[vec![(5, 0), (5, 0)], vec![(1, 0), (4, 0)], vec![(4, 0), (1, 0)]],
        )
        .unwrap();
        let full = Restriction::full(&g);
        assert!(mixed_weakly_dominates_exists(&g, &full, 0, &[1, 2], 0)
            .unwrap()
            .is_none());
    }

    #[test]
    fn best_responses() {
        let g = pd();
        let full = Restriction::full(&g);
        assert!(is_best_response(&g, &full, &full, 0, 1, BeliefClass::Pure).unwrap());
        assert!(!is_best_response(&g, &full, &full, 0, 0, BeliefClass::Pure).unwrap());
        let g = three_by_two();
        let full = Restriction::full(&g);
        assert!(!is_best_response(&g, &full, &full, 0, 2, BeliefClass::Correlated).unwrap());
        assert!(is_best_response(&g, &full, &full, 0, 0, BeliefClass::Correlated).unwrap());
        let w = correlated_best_response_witness(&g, &full, &full, 0, 1)
            .unwrap()
            .unwrap();
        assert_eq!(w.owner(), 0);
    }

    #[test]
    fn independent_class_needs_grid_beyond_two_players() {
        let g = Game::new(vec![vec!["a".into(), "b".into()]; 3], |p| {
            vec![crate::rational::int((p[0] ^ p[1] ^ p[2]) as i64); 3]
        })
        .unwrap();
        let full = Restriction::full(&g);
        let exact = BeliefClass::Independent { grid_denominator: None };
        assert!(matches!(
            is_best_response(&g, &full, &full, 0, 0, exact),
            Err(Error::UnsupportedBeliefClass(_))
        ));
        let grid = BeliefClass::Independent {
            grid_denominator: Some(4),
        };
        assert!(is_best_response(&g, &full, &full, 0, 0, grid).unwrap());
    }

    #[test]
    fn compositions_count() {
        assert_eq!(compositions(4, 3).len(), 15);
        assert!(compositions(4, 3).iter().all(|c| c.iter().sum::<u32>() == 4));
    }
}
