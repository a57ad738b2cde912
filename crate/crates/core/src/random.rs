//! Seeded generators for games, restrictions, models and formulas.
//!
//! Generated models satisfy their frame properties by construction: belief
//! correspondences come from random partitions whose blocks point at a
//! nonempty subset of themselves (or share another block's target), and
//! knowledge correspondences are the partitions themselves.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::epistemic::{EpistemicModel, Event, Level};
use crate::error::Result;
use crate::game::{Game, Restriction};
use crate::logic::Lnu;
use crate::rational::int;

/// The generator every sweep uses, so a seed fixes the whole run.
pub type SweepRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SweepRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Per-instance generator: instance `k` of a run seeded with `seed`.
pub fn instance_rng(seed: u64, k: usize) -> SweepRng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(k as u64 + 1);
    r
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GameBounds {
    pub min_players: usize,
    pub max_players: usize,
    pub min_strategies: usize,
    pub max_strategies: usize,
    pub min_payoff: i64,
    pub max_payoff: i64,
    /// Cap on `Σ_i |H_i|`, so exhaustive restriction sweeps stay in budget.
    pub max_total: Option<usize>,
}

impl Default for GameBounds {
    fn default() -> Self {
        GameBounds {
            min_players: 2,
            max_players: 3,
            min_strategies: 2,
            max_strategies: 4,
            min_payoff: -9,
            max_payoff: 9,
            max_total: None,
        }
    }
}

impl GameBounds {
    pub fn two_player(max_strategies: usize) -> Self {
        GameBounds {
            max_players: 2,
            max_strategies,
            ..GameBounds::default()
        }
    }

    pub fn with_total(self, max_total: usize) -> Self {
        GameBounds {
            max_total: Some(max_total),
            ..self
        }
    }
}

/// Strategy `k` of player `i` is named by the player's letter and `k + 1`,
/// e.g. `a1`, `b3`.
pub fn strategy_name(player: usize, k: usize) -> String {
    let letter = (b'a' + (player % 26) as u8) as char;
    format!("{letter}{}", k + 1)
}

pub fn random_game<R: Rng>(rng: &mut R, bounds: &GameBounds) -> Game {
    let n = rng.gen_range(bounds.min_players..=bounds.max_players.max(bounds.min_players));
    let hi = bounds.max_strategies.max(bounds.min_strategies);
    let mut sizes: Vec<usize> = (0..n).map(|_| rng.gen_range(bounds.min_strategies..=hi)).collect();
    if let Some(cap) = bounds.max_total {
        // Shave the largest component until the total fits, never below 1.
        while sizes.iter().sum::<usize>() > cap {
            let (k, &m) = sizes
                .iter()
                .enumerate()
                .max_by_key(|&(k, &m)| (m, std::cmp::Reverse(k)))
                .unwrap();
            if m <= 1 {
                break;
            }
            sizes[k] -= 1;
        }
    }
    let names: Vec<Vec<String>> = sizes
        .iter()
        .enumerate()
        .map(|(i, &m)| (0..m).map(|k| strategy_name(i, k)).collect())
        .collect();
    let table: Vec<Vec<i64>> = (0..sizes.iter().product::<usize>())
        .map(|_| {
            (0..n)
                .map(|_| rng.gen_range(bounds.min_payoff..=bounds.max_payoff))
                .collect()
        })
        .collect();
    let strides: Vec<usize> = (0..n).map(|i| sizes[i + 1..].iter().product()).collect();
    Game::new(names, |p| {
        let idx: usize = p.iter().zip(&strides).map(|(s, k)| s * k).sum();
        table[idx].iter().map(|&v| int(v)).collect()
    })
    .expect("generated game is well formed")
}

/// Each strategy is kept with probability ½; with `nonempty` at least one
/// strategy per player survives.
pub fn random_restriction<R: Rng>(rng: &mut R, g: &Game, nonempty: bool) -> Restriction {
    let mut r = Restriction::empty(g);
    for i in 0..g.num_players() {
        for s in 0..g.num_strategies(i) {
            if rng.gen_bool(0.5) {
                r.insert(i, s);
            }
        }
        if nonempty && r.component_size(i) == 0 {
            r.insert(i, rng.gen_range(0..g.num_strategies(i)));
        }
    }
    r
}

/// A random restriction above `r`.
pub fn random_superset<R: Rng>(rng: &mut R, g: &Game, r: &Restriction) -> Restriction {
    let mut out = r.clone();
    for i in 0..g.num_players() {
        for s in 0..g.num_strategies(i) {
            if rng.gen_bool(0.5) {
                out.insert(i, s);
            }
        }
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelBounds {
    pub min_states: usize,
    pub max_states: usize,
}

impl Default for ModelBounds {
    fn default() -> Self {
        ModelBounds {
            min_states: 1,
            max_states: 8,
        }
    }
}

fn random_partition<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let blocks = rng.gen_range(1..=n.max(1));
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); blocks];
    for (k, w) in order.into_iter().enumerate() {
        // The first `blocks` states seed one block each so none is empty.
        let b = if k < blocks { k } else { rng.gen_range(0..blocks) };
        out[b].push(w);
    }
    out
}

fn random_correspondence<R: Rng>(rng: &mut R, n: usize, level: Level) -> Vec<Event> {
    let blocks = random_partition(rng, n);
    let mut image = vec![Event::empty(n); n];
    let mut targets: Vec<Event> = Vec::new();
    for block in &blocks {
        let target = if level == Level::Knowledge {
            Event::from_states(n, block.iter().copied())
        } else if !targets.is_empty() && rng.gen_bool(0.25) {
            targets[rng.gen_range(0..targets.len())].clone()
        } else {
            let mut t = Event::from_states(n, block.iter().copied().filter(|_| rng.gen_bool(0.5)));
            if t.is_empty() {
                t.insert(*block.choose(rng).unwrap());
            }
            t
        };
        for &w in block {
            image[w] = target.clone();
        }
        targets.push(target);
    }
    image
}

/// A model over `g` with uniformly random assignments. `Bare` models carry
/// no correspondences.
pub fn random_model<R: Rng>(rng: &mut R, g: &Arc<Game>, level: Level, bounds: &ModelBounds) -> Result<EpistemicModel> {
    let n = rng.gen_range(bounds.min_states..=bounds.max_states.max(bounds.min_states));
    let names = (0..n).map(|w| format!("w{w}")).collect();
    let assignments = (0..n)
        .map(|_| {
            (0..g.num_players())
                .map(|i| rng.gen_range(0..g.num_strategies(i)))
                .collect()
        })
        .collect();
    let ps = match level {
        Level::Bare => None,
        _ => Some(
            (0..g.num_players())
                .map(|_| random_correspondence(rng, n, level))
                .collect(),
        ),
    };
    EpistemicModel::new(g, names, assignments, ps, level)
}

pub fn random_event<R: Rng>(rng: &mut R, states: usize) -> Event {
    Event::from_states(states, (0..states).filter(|_| rng.gen_bool(0.5)))
}

fn random_player<R: Rng>(rng: &mut R, players: usize) -> Option<usize> {
    if rng.gen_bool(0.4) {
        None
    } else {
        Some(rng.gen_range(0..players))
    }
}

/// A closed L_ν formula of depth at most `depth`. With `allow_nu`, closed
/// `νx.□(x ∧ ψ)` subformulas may appear.
pub fn random_lnu<R: Rng>(rng: &mut R, players: usize, depth: usize, allow_nu: bool) -> Lnu {
    if depth == 0 || rng.gen_bool(0.2) {
        return Lnu::Rat(random_player(rng, players));
    }
    let d = depth - 1;
    match rng.gen_range(0..if allow_nu { 7 } else { 6 }) {
        0 => Lnu::not(random_lnu(rng, players, d, allow_nu)),
        1 => Lnu::and(
            random_lnu(rng, players, d, allow_nu),
            random_lnu(rng, players, d, allow_nu),
        ),
        2 => Lnu::or(
            random_lnu(rng, players, d, allow_nu),
            random_lnu(rng, players, d, allow_nu),
        ),
        3 | 4 => Lnu::square(random_player(rng, players), random_lnu(rng, players, d, allow_nu)),
        5 => Lnu::o(random_player(rng, players), random_lnu(rng, players, d, allow_nu)),
        _ => Lnu::cb(random_lnu(rng, players, d, false)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::epistemic::Validation;

    #[test]
    fn generators_are_deterministic_and_in_bounds() {
        let b = GameBounds::default().with_total(10);
        let g1 = random_game(&mut rng(3), &b);
        let g2 = random_game(&mut rng(3), &b);
        assert_eq!(g1, g2);
        for k in 0..200 {
            let g = random_game(&mut instance_rng(5, k), &b);
            assert!((2..=3).contains(&g.num_players()));
            assert!(g.total_strategies() <= 10);
            assert!((0..g.num_players()).all(|i| g.num_strategies(i) <= 4));
        }
    }

    #[test]
    fn models_satisfy_their_level() {
        let mut r = rng(11);
        for _ in 0..300 {
            let g = Arc::new(random_game(&mut r, &GameBounds::default()));
            for level in [Level::Belief, Level::Knowledge] {
                let m = random_model(&mut r, &g, level, &ModelBounds::default()).unwrap();
                assert!((1..=8).contains(&m.num_states()));
                assert_eq!(m.validate(level), Validation::Ok);
            }
        }
    }

    #[test]
    fn formulas_are_closed_and_well_formed() {
        let mut r = rng(2);
        for _ in 0..200 {
            let f = random_lnu(&mut r, 3, 4, true);
            assert!(!f.has_free_var());
            assert!(f.check_well_formed().is_ok());
            let back = crate::logic::parse_lnu(&f.to_string()).unwrap();
            assert_eq!(back, f);
        }
    }
}
