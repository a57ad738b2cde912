//! Optimality properties `φ_i(s_i, G)` and bounded exhaustive checks of
//! their structural features (monotonicity, condition A, truth on point
//! restrictions).

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::config::Budgets;
use crate::dominance::{self, BeliefClass};
use crate::error::{Error, Result};
use crate::game::{Game, Restriction};
use crate::par;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Builtin {
    SdL,
    SdG,
    MsdL,
    MsdG,
    WdL,
    WdG,
    MwdL,
    MwdG,
    BrL,
    BrG,
    BrcL,
}

impl Builtin {
    pub const ALL: [Builtin; 11] = [
        Builtin::SdL,
        Builtin::SdG,
        Builtin::MsdL,
        Builtin::MsdG,
        Builtin::WdL,
        Builtin::WdG,
        Builtin::MwdL,
        Builtin::MwdG,
        Builtin::BrL,
        Builtin::BrG,
        Builtin::BrcL,
    ];

    pub const LOCAL: [Builtin; 5] = [Builtin::SdL, Builtin::MsdL, Builtin::WdL, Builtin::MwdL, Builtin::BrL];

    /// `(local, global)` pairs whose outcomes coincide on finite games.
    pub const PAIRS: [(Builtin, Builtin); 5] = [
        (Builtin::SdL, Builtin::SdG),
        (Builtin::WdL, Builtin::WdG),
        (Builtin::MsdL, Builtin::MsdG),
        (Builtin::MwdL, Builtin::MwdG),
        (Builtin::BrL, Builtin::BrG),
    ];

    pub fn name(self) -> &'static str {
        match self {
            Builtin::SdL => "sd_l",
            Builtin::SdG => "sd_g",
            Builtin::MsdL => "msd_l",
            Builtin::MsdG => "msd_g",
            Builtin::WdL => "wd_l",
            Builtin::WdG => "wd_g",
            Builtin::MwdL => "mwd_l",
            Builtin::MwdG => "mwd_g",
            Builtin::BrL => "br_l",
            Builtin::BrG => "br_g",
            Builtin::BrcL => "brc_l",
        }
    }

    pub fn is_local(self) -> bool {
        matches!(
            self,
            Builtin::SdL | Builtin::MsdL | Builtin::WdL | Builtin::MwdL | Builtin::BrL | Builtin::BrcL
        )
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Builtin::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::UnknownProperty(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Provenance {
    Builtin(Builtin),
    Compiled,
    Custom,
}

pub type Evaluator = Arc<dyn Fn(usize, &Restriction) -> Result<bool> + Send + Sync>;

/// A property `φ_i` of player `i`, closed over its game.
#[derive(Clone)]
pub struct OptimalityProperty {
    name: String,
    player: usize,
    game: Arc<Game>,
    evaluator: Evaluator,
    provenance: Provenance,
}

impl fmt::Debug for OptimalityProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OptimalityProperty")
            .field("name", &self.name)
            .field("player", &self.player)
            .field("provenance", &self.provenance)
            .finish()
    }
}

impl OptimalityProperty {
    pub fn from_fn<F>(
        game: &Arc<Game>,
        player: usize,
        name: impl Into<String>,
        provenance: Provenance,
        f: F,
    ) -> Result<Self>
    where
        F: Fn(usize, &Restriction) -> Result<bool> + Send + Sync + 'static,
    {
        game.check_player(player)?;
        Ok(OptimalityProperty {
            name: name.into(),
            player,
            game: Arc::clone(game),
            evaluator: Arc::new(f),
            provenance,
        })
    }

    pub fn constant(game: &Arc<Game>, player: usize, value: bool) -> Result<Self> {
        let name = if value { "true" } else { "false" };
        Self::from_fn(game, player, name, Provenance::Custom, move |_, _| Ok(value))
    }

    pub fn builtin(game: &Arc<Game>, which: Builtin, player: usize) -> Result<Self> {
        Self::builtin_with(game, which, player, BeliefClass::Pure)
    }

    /// A builtin property; `class` selects the beliefs for `br_l`/`br_g` and
    /// is ignored by the dominance-based properties (`brc_l` is always
    /// correlated).
    pub fn builtin_with(game: &Arc<Game>, which: Builtin, player: usize, class: BeliefClass) -> Result<Self> {
        let g = Arc::clone(game);
        let name = match (which, class) {
            (Builtin::BrL | Builtin::BrG, c) if c != BeliefClass::Pure => format!("{}:{}", which.name(), c.label()),
            _ => which.name().to_string(),
        };
        let i = player;
        let eval: Evaluator = match which {
            Builtin::SdL => Arc::new(move |s, r| {
                not_dominated_pure(&g, r, i, s, r.strategies(i).collect(), dominance::Mode::Strict)
            }),
            Builtin::SdG => Arc::new(move |s, r| {
                not_dominated_pure(&g, r, i, s, (0..g.num_strategies(i)).collect(), dominance::Mode::Strict)
            }),
            Builtin::WdL => {
                Arc::new(move |s, r| not_dominated_pure(&g, r, i, s, r.strategies(i).collect(), dominance::Mode::Weak))
            }
            Builtin::WdG => Arc::new(move |s, r| {
                not_dominated_pure(&g, r, i, s, (0..g.num_strategies(i)).collect(), dominance::Mode::Weak)
            }),
            Builtin::MsdL => Arc::new(move |s, r| {
                let support: Vec<usize> = r.strategies(i).collect();
                if support.is_empty() {
                    return Ok(true);
                }
                Ok(dominance::mixed_strictly_dominates_exists(&g, r, i, &support, s)?.is_none())
            }),
            Builtin::MsdG => Arc::new(move |s, r| {
                let support: Vec<usize> = (0..g.num_strategies(i)).collect();
                Ok(dominance::mixed_strictly_dominates_exists(&g, r, i, &support, s)?.is_none())
            }),
            Builtin::MwdL => Arc::new(move |s, r| {
                let support: Vec<usize> = r.strategies(i).collect();
                if support.is_empty() {
                    return Ok(true);
                }
                Ok(dominance::mixed_weakly_dominates_exists(&g, r, i, &support, s)?.is_none())
            }),
            Builtin::MwdG => Arc::new(move |s, r| {
                let support: Vec<usize> = (0..g.num_strategies(i)).collect();
                Ok(dominance::mixed_weakly_dominates_exists(&g, r, i, &support, s)?.is_none())
            }),
            Builtin::BrL => Arc::new(move |s, r| dominance::is_best_response(&g, r, r, i, s, class)),
            Builtin::BrG => {
                let full = Restriction::full(&g);
                Arc::new(move |s, r| dominance::is_best_response(&g, &full, r, i, s, class))
            }
            Builtin::BrcL => Arc::new(move |s, r| dominance::is_best_response(&g, r, r, i, s, BeliefClass::Correlated)),
        };
        game.check_player(player)?;
        Ok(OptimalityProperty {
            name,
            player,
            game: Arc::clone(game),
            evaluator: eval,
            provenance: Provenance::Builtin(which),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn player(&self) -> usize {
        self.player
    }

    pub fn game(&self) -> &Arc<Game> {
        &self.game
    }

    pub fn provenance(&self) -> &Provenance {
        &self.provenance
    }

    pub fn builtin_kind(&self) -> Option<Builtin> {
        match self.provenance {
            Provenance::Builtin(b) => Some(b),
            _ => None,
        }
    }

    /// `φ_i(s_i, G)`.
    pub fn holds(&self, strategy: usize, r: &Restriction) -> Result<bool> {
        r.check_game(&self.game)?;
        self.game.check_strategy(self.player, strategy)?;
        (self.evaluator)(strategy, r)
    }

    /// Truth table over every restriction of the game: entry `c` holds the
    /// strategies `s` with `φ(s, G_c)`, where `G_c = Restriction::from_code(c)`.
    pub fn truth_table(&self, budgets: &Budgets) -> Result<Vec<FixedBitSet>> {
        let total = self.game.total_strategies();
        budgets.check_restrictions(total)?;
        let k = self.game.num_strategies(self.player);
        let rows = par::map_range(
            budgets.parallelism,
            0..(1usize << total),
            |code| -> Result<FixedBitSet> {
                let r = Restriction::from_code(&self.game, code as u64);
                let mut row = FixedBitSet::with_capacity(k);
                for s in 0..k {
                    if (self.evaluator)(s, &r)? {
                        row.insert(s);
                    }
                }
                Ok(row)
            },
        );
        rows.into_iter().collect()
    }
}

fn not_dominated_pure(
    g: &Game,
    r: &Restriction,
    player: usize,
    strategy: usize,
    dominators: Vec<usize>,
    mode: dominance::Mode,
) -> Result<bool> {
    for d in dominators {
        let hit = match mode {
            dominance::Mode::Strict => dominance::strictly_dominates(g, r, player, d, strategy)?,
            dominance::Mode::Weak => dominance::weakly_dominates(g, r, player, d, strategy)?,
        };
        if hit {
            return Ok(false);
        }
    }
    Ok(true)
}

/// One property per player, `φ̄ = (φ_1, ..., φ_n)`.
#[derive(Debug, Clone)]
pub struct PropertyProfile {
    properties: Vec<OptimalityProperty>,
}

impl PropertyProfile {
    pub fn new(properties: Vec<OptimalityProperty>) -> Result<Self> {
        let first = properties.first().ok_or(Error::EmptySequence)?;
        let game = Arc::clone(&first.game);
        if properties.len() != game.num_players() {
            return Err(Error::ProfileLength {
                expected: game.num_players(),
                got: properties.len(),
            });
        }
        for (i, p) in properties.iter().enumerate() {
            if p.game.id() != game.id() {
                return Err(Error::GameMismatch);
            }
            if p.player != i {
                return Err(Error::PlayerOutOfRange(p.player));
            }
        }
        Ok(PropertyProfile { properties })
    }

    pub fn uniform(game: &Arc<Game>, which: Builtin) -> Result<Self> {
        Self::uniform_with(game, which, BeliefClass::Pure)
    }

    pub fn uniform_with(game: &Arc<Game>, which: Builtin, class: BeliefClass) -> Result<Self> {
        let props = (0..game.num_players())
            .map(|i| OptimalityProperty::builtin_with(game, which, i, class))
            .collect::<Result<Vec<_>>>()?;
        PropertyProfile::new(props)
    }

    pub fn constant(game: &Arc<Game>, value: bool) -> Result<Self> {
        let props = (0..game.num_players())
            .map(|i| OptimalityProperty::constant(game, i, value))
            .collect::<Result<Vec<_>>>()?;
        PropertyProfile::new(props)
    }

    pub fn game(&self) -> &Arc<Game> {
        &self.properties[0].game
    }

    pub fn properties(&self) -> &[OptimalityProperty] {
        &self.properties
    }

    pub fn get(&self, player: usize) -> &OptimalityProperty {
        &self.properties[player]
    }

    pub fn label(&self) -> String {
        let names: Vec<&str> = self.properties.iter().map(|p| p.name()).collect();
        if names.windows(2).all(|w| w[0] == w[1]) {
            names[0].to_string()
        } else {
            names.join(",")
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Monotonicity {
    Monotonic,
    /// `φ(s, smaller)` holds but `φ(s, larger)` fails, with `smaller ⊆ larger`.
    CounterExample {
        strategy: usize,
        smaller: Restriction,
        larger: Restriction,
    },
}

/// Exhaustive monotonicity check. Implication along every covering pair
/// `G ⊂ G ∪ {s'}` is equivalent to implication along all pairs `G ⊆ G'`.
pub fn is_monotonic_on(phi: &OptimalityProperty, budgets: &Budgets) -> Result<Monotonicity> {
    let table = phi.truth_table(budgets)?;
    let g = &phi.game;
    let total = g.total_strategies();
    for (code, row) in table.iter().enumerate() {
        for bit in 0..total {
            if code >> bit & 1 == 1 {
                continue;
            }
            let bigger = &table[code | 1 << bit];
            if let Some(s) = row.difference(bigger).next() {
                return Ok(Monotonicity::CounterExample {
                    strategy: s,
                    smaller: Restriction::from_code(g, code as u64),
                    larger: Restriction::from_code(g, (code | 1 << bit) as u64),
                });
            }
        }
    }
    Ok(Monotonicity::Monotonic)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ConditionA {
    Holds,
    /// `first` and `second` differ only in the owner's component but
    /// `φ(strategy, ·)` differs between them.
    CounterExample {
        strategy: usize,
        first: Restriction,
        second: Restriction,
    },
}

/// Exhaustive check that `φ_i(s_i, G)` ignores the i-th component of `G`.
/// Contexts `G_{-i}` are visited in code order and the search stops at the
/// first one on which `φ_i` depends on `G_i`.
pub fn satisfies_condition_a(phi: &OptimalityProperty, budgets: &Budgets) -> Result<ConditionA> {
    let g = &phi.game;
    let total = g.total_strategies();
    budgets.check_restrictions(total)?;
    let k = g.num_strategies(phi.player);
    let offset: usize = (0..phi.player).map(|j| g.num_strategies(j)).sum();
    let row = |code: usize| -> Result<FixedBitSet> {
        let r = Restriction::from_code(g, code as u64);
        let mut out = FixedBitSet::with_capacity(k);
        for s in 0..k {
            if (phi.evaluator)(s, &r)? {
                out.insert(s);
            }
        }
        Ok(out)
    };
    let own_mask = ((1usize << k) - 1) << offset;
    for base in (0..(1usize << total)).filter(|c| c & own_mask == 0) {
        let first = row(base)?;
        let rows = par::map_range(budgets.parallelism, 1..(1usize << k), |own| row(base | own << offset));
        for (own, other) in (1..).zip(rows) {
            if let Some(s) = first.symmetric_difference(&other?).next() {
                return Ok(ConditionA::CounterExample {
                    strategy: s,
                    first: Restriction::from_code(g, base as u64),
                    second: Restriction::from_code(g, (base | own << offset) as u64),
                });
            }
        }
    }
    Ok(ConditionA::Holds)
}

/// Condition A for builtin global properties holds by construction (their
/// evaluators never read `G_i`); anything else is checked exhaustively.
pub fn condition_a(phi: &OptimalityProperty, budgets: &Budgets) -> Result<ConditionA> {
    match phi.builtin_kind() {
        Some(b) if !b.is_local() => Ok(ConditionA::Holds),
        _ => satisfies_condition_a(phi, budgets),
    }
}

/// Does `φ_i(s_i, ({s_1}, ..., {s_n}))` hold for every joint strategy `s`?
pub fn satisfies_singleton_truth(phi: &OptimalityProperty) -> Result<bool> {
    singleton_counterexample(phi).map(|c| c.is_none())
}

/// First joint strategy whose point restriction falsifies `φ_i`.
pub fn singleton_counterexample(phi: &OptimalityProperty) -> Result<Option<Vec<usize>>> {
    let g = &phi.game;
    for profile in g.profiles() {
        let point = Restriction::point(g, &profile)?;
        if !phi.holds(profile[phi.player], &point)? {
            return Ok(Some(profile));
        }
    }
    Ok(None)
}

/// Runs the monotonicity check on every member of a profile and reports the
/// first failing one as an error.
pub fn require_monotonic(profile: &PropertyProfile, budgets: &Budgets) -> Result<()> {
    for p in profile.properties() {
        if let Monotonicity::CounterExample { .. } = is_monotonic_on(p, budgets)? {
            return Err(Error::NonMonotonic {
                name: p.name().to_string(),
                player: p.player() + 1,
            });
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{pd, three_by_two, wd_nonmonotonic};

    fn arc(g: Game) -> Arc<Game> {
        Arc::new(g)
    }

    #[test]
    fn names_round_trip() {
        for b in Builtin::ALL {
            assert_eq!(b.name().parse::<Builtin>().unwrap(), b);
        }
        assert!(matches!("xd_l".parse::<Builtin>(), Err(Error::UnknownProperty(_))));
    }

    #[test]
    fn catalogue_examples() {
        let g = arc(pd());
        let full = Restriction::full(&g);
        let sd_l = OptimalityProperty::builtin(&g, Builtin::SdL, 0).unwrap();
        assert!(!sd_l.holds(0, &full).unwrap());
        assert!(sd_l.holds(1, &full).unwrap());

        let g = arc(three_by_two());
        let full = Restriction::full(&g);
        let msd_l = OptimalityProperty::builtin(&g, Builtin::MsdL, 0).unwrap();
        let sd_l = OptimalityProperty::builtin(&g, Builtin::SdL, 0).unwrap();
        assert!(!msd_l.holds(2, &full).unwrap());
        assert!(sd_l.holds(2, &full).unwrap());
    }

    #[test]
    fn monotonicity_examples() {
        let budgets = Budgets::default();
        let g = arc(pd());
        let sd_g = OptimalityProperty::builtin(&g, Builtin::SdG, 0).unwrap();
        assert_eq!(is_monotonic_on(&sd_g, &budgets).unwrap(), Monotonicity::Monotonic);
        let t = OptimalityProperty::constant(&g, 0, true).unwrap();
        assert_eq!(is_monotonic_on(&t, &budgets).unwrap(), Monotonicity::Monotonic);
        let sd_l = OptimalityProperty::builtin(&g, Builtin::SdL, 0).unwrap();
        match is_monotonic_on(&sd_l, &budgets).unwrap() {
            Monotonicity::CounterExample {
                strategy,
                smaller,
                larger,
            } => {
                assert!(smaller.leq(&larger).unwrap());
                assert!(sd_l.holds(strategy, &smaller).unwrap());
                assert!(!sd_l.holds(strategy, &larger).unwrap());
            }
            Monotonicity::Monotonic => panic!("sd_l is not monotonic on PD"),
        }
        let wg = arc(wd_nonmonotonic());
        for which in [Builtin::WdG, Builtin::MwdG] {
            let p = OptimalityProperty::builtin(&wg, which, 0).unwrap();
            assert!(matches!(
                is_monotonic_on(&p, &budgets).unwrap(),
                Monotonicity::CounterExample { .. }
            ));
        }
    }

    #[test]
    fn condition_a_examples() {
        let budgets = Budgets::default();
        let g = arc(pd());
        let sd_g = OptimalityProperty::builtin(&g, Builtin::SdG, 0).unwrap();
        assert_eq!(satisfies_condition_a(&sd_g, &budgets).unwrap(), ConditionA::Holds);
        let sd_l = OptimalityProperty::builtin(&g, Builtin::SdL, 0).unwrap();
        assert!(matches!(
            satisfies_condition_a(&sd_l, &budgets).unwrap(),
            ConditionA::CounterExample { strategy: 0, .. }
        ));
        let g = arc(three_by_two());
        for which in [Builtin::WdG, Builtin::MwdG, Builtin::MsdG, Builtin::BrG, Builtin::SdG] {
            for i in 0..2 {
                let p = OptimalityProperty::builtin(&g, which, i).unwrap();
                assert_eq!(
                    satisfies_condition_a(&p, &budgets).unwrap(),
                    ConditionA::Holds,
                    "{which}"
                );
            }
        }
    }

    #[test]
    fn condition_a_shortcut_agrees_with_enumeration() {
        use crate::random::{random_game, rng, GameBounds};
        let budgets = Budgets::default();
        let mut r = rng(17);
        for _ in 0..6 {
            let g = arc(random_game(&mut r, &GameBounds::default().with_total(7)));
            for which in Builtin::ALL {
                for i in 0..g.num_players() {
                    let p = OptimalityProperty::builtin(&g, which, i).unwrap();
                    assert_eq!(
                        condition_a(&p, &budgets).unwrap(),
                        satisfies_condition_a(&p, &budgets).unwrap(),
                        "{which}"
                    );
                }
            }
        }
    }

    #[test]
    fn singleton_truth_examples() {
        let g = arc(pd());
        for which in Builtin::LOCAL {
            let p = OptimalityProperty::builtin(&g, which, 0).unwrap();
            assert!(satisfies_singleton_truth(&p).unwrap(), "{which}");
        }
        let sd_g = OptimalityProperty::builtin(&g, Builtin::SdG, 0).unwrap();
        assert!(!satisfies_singleton_truth(&sd_g).unwrap());
    }

    #[test]
    fn budget_is_explicit() {
        let g = arc(Game::new(vec![(0..6).map(|k| k.to_string()).collect(); 2], |_| {
            vec![crate::rational::int(0); 2]
        })
        .unwrap());
        let p = OptimalityProperty::builtin(&g, Builtin::SdG, 0).unwrap();
        assert!(matches!(
            is_monotonic_on(&p, &Budgets::default()),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn profile_validation() {
        let g = arc(pd());
        let a = OptimalityProperty::builtin(&g, Builtin::SdG, 0).unwrap();
        assert!(PropertyProfile::new(vec![a.clone()]).is_err());
        assert!(PropertyProfile::new(vec![a.clone(), a.clone()]).is_err());
        let b = OptimalityProperty::builtin(&g, Builtin::SdL, 1).unwrap();
        let prof = PropertyProfile::new(vec![a, b]).unwrap();
        assert_eq!(prof.label(), "sd_g,sd_l");
        let other = arc(pd());
        let full = Restriction::full(&other);
        assert_eq!(prof.get(0).holds(0, &full), Err(Error::GameMismatch));
    }
}
