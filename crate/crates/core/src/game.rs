//! Finite strategic games with exact rational payoffs, and the lattice of
//! restrictions of such a game.

use std::collections::HashMap;
use std::fmt;
use std::sync::atomic::{AtomicUsize, Ordering};

use fixedbitset::FixedBitSet;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{parse_rational, Rational};

static NEXT_GAME_ID: AtomicUsize = AtomicUsize::new(1);

/// Identity of a constructed game. Clones of a game share it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GameId(usize);

/// An n-player strategic game `(H_1, ..., H_n, p_1, ..., p_n)`.
///
/// Strategies are interned to dense indices in declaration order; payoffs are
/// stored in a flat table indexed by the mixed-radix encoding of a profile.
#[derive(Debug, Clone)]
pub struct Game {
    id: GameId,
    names: Vec<Vec<String>>,
    strides: Vec<usize>,
    payoffs: Vec<Vec<Rational>>,
}

impl PartialEq for Game {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.payoffs == other.payoffs
    }
}

impl Game {
    /// Builds a game from strategy names and a payoff function over profiles.
    pub fn new<F>(names: Vec<Vec<String>>, mut payoff: F) -> Result<Self>
    where
        F: FnMut(&[usize]) -> Vec<Rational>,
    {
        let n = names.len();
        if n < 2 {
            return Err(Error::TooFewPlayers(n));
        }
        for (i, list) in names.iter().enumerate() {
            if list.is_empty() {
                return Err(Error::Syntax {
                    line: 0,
                    message: format!("player {} has no strategies", i + 1),
                });
            }
            let mut seen = std::collections::HashSet::new();
            for name in list {
                if !seen.insert(name) {
                    return Err(Error::DuplicateStrategy {
                        player: i + 1,
                        name: name.clone(),
                    });
                }
            }
        }
        let strides = strides_for(&names);
        let total: usize = names.iter().map(Vec::len).product();
        let mut payoffs = Vec::with_capacity(total);
        let mut profile = vec![0; n];
        for idx in 0..total {
            decode(idx, &strides, &names, &mut profile);
            let v = payoff(&profile);
            if v.len() != n {
                return Err(Error::ProfileLength {
                    expected: n,
                    got: v.len(),
                });
            }
            payoffs.push(v);
        }
        Ok(Game {
            id: GameId(NEXT_GAME_ID.fetch_add(1, Ordering::Relaxed)),
            names,
            strides,
            payoffs,
        })
    }

    /// Convenience constructor for two-player bimatrix games.
    /// `rows[r][c] = (p_1, p_2)`.
    pub fn bimatrix(row_names: &[&str], col_names: &[&str], rows: &[Vec<(i64, i64)>]) -> Result<Self> {
        let names = vec![
            row_names.iter().map(|s| s.to_string()).collect(),
            col_names.iter().map(|s| s.to_string()).collect(),
        ];
        if rows.len() != row_names.len() || rows.iter().any(|r| r.len() != col_names.len()) {
            return Err(Error::Dimension("bimatrix shape".into()));
        }
        Game::new(names, |p| {
            let (a, b) = rows[p[0]][p[1]];
            vec![Rational::from_integer(a.into()), Rational::from_integer(b.into())]
        })
    }

    pub fn id(&self) -> GameId {
        self.id
    }

    pub fn num_players(&self) -> usize {
        self.names.len()
    }

    pub fn num_strategies(&self, player: usize) -> usize {
        self.names[player].len()
    }

    pub fn total_strategies(&self) -> usize {
        self.names.iter().map(Vec::len).sum()
    }

    pub fn num_profiles(&self) -> usize {
        self.payoffs.len()
    }

    pub fn strategy_names(&self, player: usize) -> &[String] {
        &self.names[player]
    }

    pub fn strategy_name(&self, player: usize, strategy: usize) -> &str {
        &self.names[player][strategy]
    }

    pub fn strategy_index(&self, player: usize, name: &str) -> Option<usize> {
        self.names.get(player)?.iter().position(|s| s == name)
    }

    pub fn check_player(&self, player: usize) -> Result<()> {
        if player < self.num_players() {
            Ok(())
        } else {
            Err(Error::PlayerOutOfRange(player))
        }
    }

    pub fn check_strategy(&self, player: usize, strategy: usize) -> Result<()> {
        self.check_player(player)?;
        if strategy < self.num_strategies(player) {
            Ok(())
        } else {
            Err(Error::StrategyOutOfRange { player, strategy })
        }
    }

    pub fn profile_index(&self, profile: &[usize]) -> usize {
        profile.iter().zip(&self.strides).map(|(s, stride)| s * stride).sum()
    }

    pub fn profile_at(&self, index: usize) -> Vec<usize> {
        let mut out = vec![0; self.num_players()];
        decode(index, &self.strides, &self.names, &mut out);
        out
    }

    /// Iterates over all joint strategies of `H` in lexicographic order.
    pub fn profiles(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.num_profiles()).map(move |i| self.profile_at(i))
    }

    pub fn payoff(&self, player: usize, profile: &[usize]) -> &Rational {
        &self.payoffs[self.profile_index(profile)][player]
    }

    pub fn payoff_vector(&self, profile: &[usize]) -> &[Rational] {
        &self.payoffs[self.profile_index(profile)]
    }

    /// Payoff of `player` playing `strategy` against the opponent part of the
    /// profile encoded by `base` (whose own coordinate is zero).
    pub(crate) fn payoff_from_base(&self, base: usize, player: usize, strategy: usize) -> &Rational {
        &self.payoffs[base + strategy * self.strides[player]][player]
    }

    pub(crate) fn strides_of(&self, player: usize) -> usize {
        self.strides[player]
    }

    /// Encodes every opponent profile in `G_{-i}` as a base index with the
    /// i-th coordinate set to zero.
    pub(crate) fn opponent_bases(&self, r: &Restriction, player: usize) -> Vec<usize> {
        let mut bases = vec![0usize];
        for j in 0..self.num_players() {
            if j == player {
                continue;
            }
            let mut next = Vec::with_capacity(bases.len() * r.parts[j].count_ones(..));
            for b in &bases {
                for s in r.parts[j].ones() {
                    next.push(b + s * self.strides[j]);
                }
            }
            bases = next;
        }
        bases
    }

    /// Decodes a base index into the opponent profile (length n-1).
    pub(crate) fn base_to_opponents(&self, base: usize, player: usize) -> Vec<usize> {
        let full = self.profile_at(base);
        full.into_iter()
            .enumerate()
            .filter(|(j, _)| *j != player)
            .map(|(_, s)| s)
            .collect()
    }

    pub(crate) fn opponents_to_base(&self, player: usize, opponents: &[usize]) -> Result<usize> {
        if opponents.len() + 1 != self.num_players() {
            return Err(Error::ProfileLength {
                expected: self.num_players() - 1,
                got: opponents.len(),
            });
        }
        let mut base = 0;
        let mut it = opponents.iter();
        for j in 0..self.num_players() {
            if j == player {
                continue;
            }
            let s = *it.next().expect("length checked");
            self.check_strategy(j, s)?;
            base += s * self.strides[j];
        }
        Ok(base)
    }

    /// Parses the line-oriented game file format.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, strip_comment(l).trim()))
            .filter(|(_, l)| !l.is_empty());

        let (line_no, first) = lines.next().ok_or(Error::Syntax {
            line: 1,
            message: "empty game file".into(),
        })?;
        let mut words = first.split_whitespace();
        if words.next() != Some("players") {
            return Err(syntax(line_no, "expected `players <n>`"));
        }
        let n: usize = words
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| syntax(line_no, "expected player count"))?;
        if words.next().is_some() {
            return Err(syntax(line_no, "trailing tokens after player count"));
        }
        if n < 2 {
            return Err(Error::TooFewPlayers(n));
        }

        let mut names: Vec<Option<Vec<String>>> = vec![None; n];
        for _ in 0..n {
            let (line_no, line) = lines
                .next()
                .ok_or_else(|| syntax(line_no, "expected `strategies` lines"))?;
            let mut words = line.split_whitespace();
            if words.next() != Some("strategies") {
                return Err(syntax(line_no, "expected `strategies <i> <name> ...`"));
            }
            let i: usize = words
                .next()
                .and_then(|w| w.parse().ok())
                .filter(|&i| (1..=n).contains(&i))
                .ok_or_else(|| syntax(line_no, "player index must be in 1..=n"))?;
            if names[i - 1].is_some() {
                return Err(syntax(line_no, "strategies declared twice for one player"));
            }
            let list: Vec<String> = words.map(str::to_string).collect();
            if list.is_empty() {
                return Err(syntax(line_no, "player has no strategies"));
            }
            let mut seen = std::collections::HashSet::new();
            for s in &list {
                if !seen.insert(s) {
                    return Err(Error::DuplicateStrategy {
                        player: i,
                        name: s.clone(),
                    });
                }
            }
            names[i - 1] = Some(list);
        }
        let names: Vec<Vec<String>> = names.into_iter().map(Option::unwrap).collect();
        let index: Vec<HashMap<&str, usize>> = names
            .iter()
            .map(|l| l.iter().enumerate().map(|(k, s)| (s.as_str(), k)).collect())
            .collect();

        let strides = strides_for(&names);
        let total: usize = names.iter().map(Vec::len).product();
        let mut table: Vec<Option<Vec<Rational>>> = vec![None; total];
        for (line_no, line) in lines {
            let words: Vec<&str> = line.split_whitespace().collect();
            if words.first() != Some(&"payoff") {
                return Err(syntax(line_no, "expected `payoff` line"));
            }
            if words.len() != 1 + 2 * n {
                return Err(syntax(
                    line_no,
                    &format!("payoff line needs {} strategies and {} values", n, n),
                ));
            }
            let mut idx = 0;
            for i in 0..n {
                let s = *index[i].get(words[1 + i]).ok_or_else(|| {
                    syntax(
                        line_no,
                        &format!("unknown strategy `{}` for player {}", words[1 + i], i + 1),
                    )
                })?;
                idx += s * strides[i];
            }
            let mut values = Vec::with_capacity(n);
            for w in &words[1 + n..] {
                values.push(parse_rational(w).map_err(|m| syntax(line_no, &m))?);
            }
            if table[idx].is_some() {
                return Err(Error::DuplicatePayoff(words[1..=n].join(",")));
            }
            table[idx] = Some(values);
        }
        let mut payoffs = Vec::with_capacity(total);
        let mut profile = vec![0; n];
        for (idx, entry) in table.into_iter().enumerate() {
            match entry {
                Some(v) => payoffs.push(v),
                None => {
                    decode(idx, &strides, &names, &mut profile);
                    let label: Vec<&str> = profile.iter().enumerate().map(|(i, &s)| names[i][s].as_str()).collect();
                    return Err(Error::MissingPayoff(label.join(",")));
                }
            }
        }
        Ok(Game {
            id: GameId(NEXT_GAME_ID.fetch_add(1, Ordering::Relaxed)),
            names,
            strides,
            payoffs,
        })
    }

    /// Serializes to the game file format; `Game::parse` reads it back.
    pub fn to_text(&self) -> String {
        let mut out = format!("players {}\n", self.num_players());
        for (i, list) in self.names.iter().enumerate() {
            out.push_str(&format!("strategies {} {}\n", i + 1, list.join(" ")));
        }
        for p in self.profiles() {
            out.push_str("payoff");
            for (i, &s) in p.iter().enumerate() {
                out.push(' ');
                out.push_str(&self.names[i][s]);
            }
            for v in self.payoff_vector(&p) {
                out.push(' ');
                out.push_str(&v.to_string());
            }
            out.push('\n');
        }
        out
    }

    pub fn profile_label(&self, profile: &[usize]) -> String {
        let parts: Vec<&str> = profile
            .iter()
            .enumerate()
            .map(|(i, &s)| self.names[i][s].as_str())
            .collect();
        format!("({})", parts.join(","))
    }
}

fn strip_comment(line: &str) -> &str {
    match line.find('#') {
        Some(k) => &line[..k],
        None => line,
    }
}

fn syntax(line: usize, message: &str) -> Error {
    Error::Syntax {
        line,
        message: message.to_string(),
    }
}

fn strides_for(names: &[Vec<String>]) -> Vec<usize> {
    let n = names.len();
    let mut strides = vec![1; n];
    for i in (0..n.saturating_sub(1)).rev() {
        strides[i] = strides[i + 1] * names[i + 1].len();
    }
    strides
}

fn decode(mut idx: usize, strides: &[usize], names: &[Vec<String>], out: &mut [usize]) {
    for i in 0..names.len() {
        out[i] = idx / strides[i];
        idx %= strides[i];
    }
}

/// A restriction `(G_1, ..., G_n)` of the initial game: one membership
/// bitset per player over that player's strategy indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Restriction {
    game: GameId,
    parts: Vec<FixedBitSet>,
}

impl Restriction {
    /// The top element `H`.
    pub fn full(g: &Game) -> Self {
        let parts = (0..g.num_players())
            .map(|i| {
                let mut b = FixedBitSet::with_capacity(g.num_strategies(i));
                b.insert_range(..);
                b
            })
            .collect();
        Restriction { game: g.id, parts }
    }

    /// The bottom element, all components empty.
    pub fn empty(g: &Game) -> Self {
        let parts = (0..g.num_players())
            .map(|i| FixedBitSet::with_capacity(g.num_strategies(i)))
            .collect();
        Restriction { game: g.id, parts }
    }

    pub fn from_indices(g: &Game, sets: &[Vec<usize>]) -> Result<Self> {
        if sets.len() != g.num_players() {
            return Err(Error::ProfileLength {
                expected: g.num_players(),
                got: sets.len(),
            });
        }
        let mut r = Restriction::empty(g);
        for (i, set) in sets.iter().enumerate() {
            for &s in set {
                g.check_strategy(i, s)?;
                r.parts[i].insert(s);
            }
        }
        Ok(r)
    }

    pub fn from_names(g: &Game, sets: &[&[&str]]) -> Result<Self> {
        let mut idx = Vec::with_capacity(sets.len());
        for (i, set) in sets.iter().enumerate() {
            let mut v = Vec::new();
            for name in set.iter() {
                v.push(g.strategy_index(i, name).ok_or_else(|| Error::UnknownStrategy {
                    player: i + 1,
                    name: name.to_string(),
                })?);
            }
            idx.push(v);
        }
        Restriction::from_indices(g, &idx)
    }

    /// The point restriction `({s_1}, ..., {s_n})`.
    pub fn point(g: &Game, profile: &[usize]) -> Result<Self> {
        let sets: Vec<Vec<usize>> = profile.iter().map(|&s| vec![s]).collect();
        Restriction::from_indices(g, &sets)
    }

    /// Decodes the restriction whose membership bits, concatenated player by
    /// player, are the low bits of `code`.
    pub fn from_code(g: &Game, code: u64) -> Self {
        let mut r = Restriction::empty(g);
        let mut bit = 0;
        for i in 0..g.num_players() {
            for s in 0..g.num_strategies(i) {
                if code >> bit & 1 == 1 {
                    r.parts[i].insert(s);
                }
                bit += 1;
            }
        }
        r
    }

    pub fn to_code(&self) -> u64 {
        let mut code = 0u64;
        let mut bit = 0;
        for part in &self.parts {
            for s in 0..part.len() {
                if part.contains(s) {
                    code |= 1 << bit;
                }
                bit += 1;
            }
        }
        code
    }

    pub fn game_id(&self) -> GameId {
        self.game
    }

    pub fn num_players(&self) -> usize {
        self.parts.len()
    }

    pub fn component(&self, player: usize) -> &FixedBitSet {
        &self.parts[player]
    }

    pub fn strategies(&self, player: usize) -> impl Iterator<Item = usize> + '_ {
        self.parts[player].ones()
    }

    pub fn contains(&self, player: usize, strategy: usize) -> bool {
        self.parts[player].contains(strategy)
    }

    pub fn insert(&mut self, player: usize, strategy: usize) {
        self.parts[player].insert(strategy);
    }

    pub fn remove(&mut self, player: usize, strategy: usize) {
        self.parts[player].set(strategy, false);
    }

    pub fn set_component(&mut self, player: usize, set: FixedBitSet) {
        assert_eq!(set.len(), self.parts[player].len());
        self.parts[player] = set;
    }

    pub fn component_size(&self, player: usize) -> usize {
        self.parts[player].count_ones(..)
    }

    pub fn is_bottom(&self) -> bool {
        self.parts.iter().all(|p| p.is_clear())
    }

    /// True iff some component is empty, so `G_1 × ... × G_n = ∅`.
    pub fn has_empty_component(&self) -> bool {
        self.parts.iter().any(|p| p.is_clear())
    }

    /// Number of joint strategies `|G_1 × ... × G_n|`.
    pub fn product_size(&self) -> u128 {
        self.parts.iter().map(|p| p.count_ones(..) as u128).product()
    }

    /// `|G_{-i}|`
    pub fn opponent_count(&self, player: usize) -> u128 {
        self.parts
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != player)
            .map(|(_, p)| p.count_ones(..) as u128)
            .product()
    }

    fn same_game(&self, other: &Restriction) -> Result<()> {
        if self.game == other.game {
            Ok(())
        } else {
            Err(Error::GameMismatch)
        }
    }

    pub fn check_game(&self, g: &Game) -> Result<()> {
        if self.game == g.id {
            Ok(())
        } else {
            Err(Error::GameMismatch)
        }
    }

    /// Componentwise inclusion `self ⊆ other`.
    pub fn leq(&self, other: &Restriction) -> Result<bool> {
        self.same_game(other)?;
        Ok(self.is_subset_unchecked(other))
    }

    pub(crate) fn is_subset_unchecked(&self, other: &Restriction) -> bool {
        self.parts.iter().zip(&other.parts).all(|(a, b)| a.is_subset(b))
    }

    pub fn meet(rs: &[Restriction]) -> Result<Restriction> {
        Self::fold(rs, |a, b| a.intersect_with(b))
    }

    pub fn join(rs: &[Restriction]) -> Result<Restriction> {
        Self::fold(rs, |a, b| a.union_with(b))
    }

    fn fold(rs: &[Restriction], op: impl Fn(&mut FixedBitSet, &FixedBitSet)) -> Result<Restriction> {
        let (first, rest) = rs.split_first().ok_or(Error::EmptySequence)?;
        let mut acc = first.clone();
        for r in rest {
            acc.same_game(r)?;
            for (a, b) in acc.parts.iter_mut().zip(&r.parts) {
                op(a, b);
            }
        }
        Ok(acc)
    }

    /// Renders as `{s,...} | {s,...} | ...` using the game's strategy names.
    pub fn display<'a>(&'a self, g: &'a Game) -> RestrictionDisplay<'a> {
        RestrictionDisplay { r: self, g }
    }

    pub fn to_indices(&self) -> Vec<Vec<usize>> {
        self.parts.iter().map(|p| p.ones().collect()).collect()
    }
}

pub struct RestrictionDisplay<'a> {
    r: &'a Restriction,
    g: &'a Game,
}

impl fmt::Display for RestrictionDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, part) in self.r.parts.iter().enumerate() {
            if i > 0 {
                f.write_str(" | ")?;
            }
            let names: Vec<&str> = part.ones().map(|s| self.g.strategy_name(i, s)).collect();
            write!(f, "{{{}}}", names.join(","))?;
        }
        Ok(())
    }
}

/// A mixed strategy of one player, given by weights on a declared support.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MixedStrategy {
    owner: usize,
    weights: Vec<(usize, Rational)>,
}

impl MixedStrategy {
    pub fn new(g: &Game, owner: usize, weights: Vec<(usize, Rational)>) -> Result<Self> {
        g.check_player(owner)?;
        for (s, _) in &weights {
            g.check_strategy(owner, *s)?;
        }
        check_distribution(weights.iter().map(|(_, w)| w))?;
        Ok(MixedStrategy { owner, weights })
    }

    pub fn pure(g: &Game, owner: usize, strategy: usize) -> Result<Self> {
        MixedStrategy::new(g, owner, vec![(strategy, Rational::one())])
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn weights(&self) -> &[(usize, Rational)] {
        &self.weights
    }

    /// Strategies carrying positive weight.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.weights.iter().filter(|(_, w)| w.is_positive()).map(|(s, _)| *s)
    }

    pub fn weight(&self, strategy: usize) -> Rational {
        self.weights
            .iter()
            .filter(|(s, _)| *s == strategy)
            .fold(Rational::zero(), |acc, (_, w)| acc + w)
    }
}

/// A correlated belief of player `owner` over joint opponent profiles.
/// Opponent profiles list the opponents' strategies in player order,
/// skipping the owner.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorrelatedBelief {
    owner: usize,
    weights: Vec<(Vec<usize>, Rational)>,
}

impl CorrelatedBelief {
    pub fn new(g: &Game, owner: usize, weights: Vec<(Vec<usize>, Rational)>) -> Result<Self> {
        g.check_player(owner)?;
        for (opp, _) in &weights {
            g.opponents_to_base(owner, opp)?;
        }
        check_distribution(weights.iter().map(|(_, w)| w))?;
        Ok(CorrelatedBelief { owner, weights })
    }

    pub fn owner(&self) -> usize {
        self.owner
    }

    pub fn weights(&self) -> &[(Vec<usize>, Rational)] {
        &self.weights
    }
}

fn check_distribution<'a>(weights: impl Iterator<Item = &'a Rational>) -> Result<()> {
    let mut total = Rational::zero();
    for w in weights {
        if *w < Rational::zero() {
            return Err(Error::InvalidDistribution(format!("negative weight {w}")));
        }
        total += w;
    }
    if total != Rational::one() {
        return Err(Error::InvalidDistribution(format!("weights sum to {total}, not 1")));
    }
    Ok(())
}

/// A belief of player i about the opponents.
#[derive(Debug, Clone)]
pub enum Belief {
    /// A joint opponent profile (length n-1, owner skipped).
    Pure(Vec<usize>),
    /// One mixed strategy per opponent, in player order.
    Independent(Vec<MixedStrategy>),
    Correlated(CorrelatedBelief),
}

/// Exact expected payoff `p_i(s_i, μ)` under a belief about the opponents.
pub fn expected_payoff(g: &Game, player: usize, strategy: usize, belief: &Belief) -> Result<Rational> {
    g.check_strategy(player, strategy)?;
    match belief {
        Belief::Pure(opp) => {
            let base = g.opponents_to_base(player, opp)?;
            Ok(g.payoff_from_base(base, player, strategy).clone())
        }
        Belief::Correlated(c) => {
            if c.owner != player {
                return Err(Error::InvalidDistribution("belief owned by another player".into()));
            }
            let mut total = Rational::zero();
            for (opp, w) in &c.weights {
                let base = g.opponents_to_base(player, opp)?;
                total += w * g.payoff_from_base(base, player, strategy);
            }
            Ok(total)
        }
        Belief::Independent(mixes) => {
            let opponents: Vec<usize> = (0..g.num_players()).filter(|&j| j != player).collect();
            if mixes.len() != opponents.len() {
                return Err(Error::ProfileLength {
                    expected: opponents.len(),
                    got: mixes.len(),
                });
            }
            for (m, &j) in mixes.iter().zip(&opponents) {
                if m.owner != j {
                    return Err(Error::InvalidDistribution(format!(
                        "mixed strategy for player {} given where player {} expected",
                        m.owner + 1,
                        j + 1
                    )));
                }
            }
            // Expand the product distribution.
            let mut acc: Vec<(Vec<usize>, Rational)> = vec![(Vec::new(), Rational::one())];
            for m in mixes {
                let mut next = Vec::new();
                for (prefix, w) in &acc {
                    for (s, ws) in &m.weights {
                        let mut p = prefix.clone();
                        p.push(*s);
                        next.push((p, w * ws));
                    }
                }
                acc = next;
            }
            let mut total = Rational::zero();
            for (opp, w) in acc {
                let base = g.opponents_to_base(player, &opp)?;
                total += w * g.payoff_from_base(base, player, strategy);
            }
            Ok(total)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::pd;
    use crate::rational::int;

    const PD_TEXT: &str = "\
# prisoner's dilemma
players 2
strategies 1 C D
strategies 2 C D
payoff C C 3 3
payoff C D 0 5
payoff D C 5 0
payoff D D 1 1
";

    #[test]
    fn parses_pd() {
        let g = Game::parse(PD_TEXT).unwrap();
        assert_eq!(g.num_profiles(), 4);
        let expect = [([0, 0], (3, 3)), ([0, 1], (0, 5)), ([1, 0], (5, 0)), ([1, 1], (1, 1))];
        for (p, (a, b)) in expect {
            assert_eq!(g.payoff_vector(&p), &[int(a), int(b)]);
        }
        assert_eq!(g, pd());
    }

    #[test]
    fn rejects_single_player() {
        let err = Game::parse("players 1\nstrategies 1 a\npayoff a 1\n").unwrap_err();
        assert_eq!(err, Error::TooFewPlayers(1));
        assert!(err.to_string().contains("n < 2"));
    }

    #[test]
    fn names_missing_profile() {
        let text = PD_TEXT.replace("payoff D C 5 0\n", "");
        let err = Game::parse(&text).unwrap_err();
        assert_eq!(err, Error::MissingPayoff("D,C".into()));
    }

    #[test]
    fn rejects_duplicate_strategy_and_bad_syntax() {
        let err = Game::parse("players 2\nstrategies 1 a a\nstrategies 2 b\n").unwrap_err();
        assert!(matches!(err, Error::DuplicateStrategy { .. }));
        let err = Game::parse("players 2\nstrategies 1 a\nstrategies 2 b\npayoff a b 1.5 2\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 4, .. }), "{err:?}");
        let err =
            Game::parse("players 2\nstrategies 1 a\nstrategies 2 b\npayoff a b 1 2\npayoff a b 1 2\n").unwrap_err();
        assert!(matches!(err, Error::DuplicatePayoff(_)));
    }

    #[test]
    fn rational_payoffs_round_trip() {
        let text = "players 2\nstrategies 1 a\nstrategies 2 b c\npayoff a b 1/2 -3/4\npayoff a c 2/4 7\n";
        let g = Game::parse(text).unwrap();
        assert_eq!(g.payoff(0, &[0, 1]), &Rational::new(1.into(), 2.into()));
        let again = Game::parse(&g.to_text()).unwrap();
        assert_eq!(g, again);
    }

    #[test]
    fn restriction_order_examples() {
        let g = pd();
        let full = Restriction::full(&g);
        let dd = Restriction::from_names(&g, &[&["D"], &["D"]]).unwrap();
        assert!(dd.leq(&full).unwrap());
        assert!(!full.leq(&dd).unwrap());
        assert!(dd.leq(&dd).unwrap());

        assert_eq!(Restriction::meet(&[full.clone(), full.clone()]).unwrap(), full);
        let a = Restriction::from_names(&g, &[&["C"], &["C", "D"]]).unwrap();
        let b = Restriction::from_names(&g, &[&["D"], &["C", "D"]]).unwrap();
        let m = Restriction::meet(&[a, b]).unwrap();
        assert_eq!(m, Restriction::from_names(&g, &[&[], &["C", "D"]]).unwrap());
        let c1 = Restriction::from_names(&g, &[&["C"], &[]]).unwrap();
        let d2 = Restriction::from_names(&g, &[&[], &["D"]]).unwrap();
        assert_eq!(
            Restriction::join(&[c1, d2]).unwrap(),
            Restriction::from_names(&g, &[&["C"], &["D"]]).unwrap()
        );
        assert_eq!(Restriction::meet(&[]), Err(Error::EmptySequence));
        let other = pd();
        assert_eq!(full.leq(&Restriction::full(&other)), Err(Error::GameMismatch));
    }

    #[test]
    fn expected_payoff_examples() {
        let g = pd();
        let pure = Belief::Pure(vec![0]);
        assert_eq!(expected_payoff(&g, 0, 0, &pure).unwrap(), int(3));
        let half = Rational::new(1.into(), 2.into());
        let c = CorrelatedBelief::new(&g, 0, vec![(vec![0], half.clone()), (vec![1], half)]).unwrap();
        assert_eq!(expected_payoff(&g, 0, 1, &Belief::Correlated(c)).unwrap(), int(3));
        let point = CorrelatedBelief::new(&g, 0, vec![(vec![1], int(1))]).unwrap();
        assert_eq!(expected_payoff(&g, 0, 1, &Belief::Correlated(point)).unwrap(), int(1));
        assert!(CorrelatedBelief::new(&g, 0, vec![(vec![1], int(2))]).is_err());
        assert!(CorrelatedBelief::new(&g, 0, vec![(vec![5], int(1))]).is_err());
    }
}
