//! Finite epistemic models over a game: states, strategy assignments and
//! possibility correspondences, the event algebra with `□` and `□*`, RAT
//! events, standard models and the theorem checks that tie them to the
//! elimination operators.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use rand::Rng;

use crate::config::Budgets;
use crate::error::{Error, Result};
use crate::game::{Game, Restriction};
use crate::operators;
use crate::optimality::{self, OptimalityProperty, PropertyProfile};

/// A set of states, as a bitset over the model's state indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Event(FixedBitSet);

impl Event {
    pub fn empty(states: usize) -> Self {
        Event(FixedBitSet::with_capacity(states))
    }

    pub fn full(states: usize) -> Self {
        let mut b = FixedBitSet::with_capacity(states);
        b.insert_range(..);
        Event(b)
    }

    pub fn from_states(states: usize, members: impl IntoIterator<Item = usize>) -> Self {
        let mut e = Event::empty(states);
        for s in members {
            e.0.insert(s);
        }
        e
    }

    /// Bit `k` of `mask` is state `k`.
    pub fn from_mask(states: usize, mask: u64) -> Self {
        Event::from_states(states, (0..states).filter(|k| mask >> k & 1 == 1))
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, state: usize) -> bool {
        self.0.contains(state)
    }

    pub fn insert(&mut self, state: usize) {
        self.0.insert(state);
    }

    pub fn remove(&mut self, state: usize) {
        self.0.set(state, false);
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn is_full(&self) -> bool {
        self.len() == self.universe()
    }

    pub fn is_subset(&self, other: &Event) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn intersection(&self, other: &Event) -> Event {
        let mut b = self.0.clone();
        b.intersect_with(&other.0);
        Event(b)
    }

    pub fn union(&self, other: &Event) -> Event {
        let mut b = self.0.clone();
        b.union_with(&other.0);
        Event(b)
    }

    pub fn complement(&self) -> Event {
        let mut b = self.0.clone();
        b.toggle_range(..);
        Event(b)
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Bare,
    Belief,
    Knowledge,
}

impl Level {
    pub fn name(self) -> &'static str {
        match self {
            Level::Bare => "bare",
            Level::Belief => "belief",
            Level::Knowledge => "knowledge",
        }
    }
}

impl FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "bare" => Ok(Level::Bare),
            "belief" => Ok(Level::Belief),
            "knowledge" => Ok(Level::Knowledge),
            other => Err(format!("unknown level `{other}`")),
        }
    }
}

/// Which frame property a correspondence violates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FrameProperty {
    /// `P_i(ω) ≠ ∅`
    NonEmpty,
    /// `ω' ∈ P_i(ω) ⇒ P_i(ω') = P_i(ω)`
    Introspective,
    /// `ω ∈ P_i(ω)`
    Reflexive,
}

impl fmt::Display for FrameProperty {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameProperty::NonEmpty => "(i) non-empty",
            FrameProperty::Introspective => "(ii) introspection",
            FrameProperty::Reflexive => "(iii) reflexivity",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Validation {
    Ok,
    Violation {
        player: usize,
        state: usize,
        property: FrameProperty,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct EpistemicModel {
    game: Arc<Game>,
    names: Vec<String>,
    /// `assignments[ω][i] = s̄_i(ω)`
    assignments: Vec<Vec<usize>>,
    /// `correspondences[i][ω] = P_i(ω)`
    correspondences: Option<Vec<Vec<Event>>>,
    level: Level,
}

impl EpistemicModel {
    /// Builds a model after structural checks only. Frame properties are
    /// checked by [`EpistemicModel::validate`].
    pub fn new(
        game: &Arc<Game>,
        names: Vec<String>,
        assignments: Vec<Vec<usize>>,
        correspondences: Option<Vec<Vec<Event>>>,
        level: Level,
    ) -> Result<Self> {
        let n = names.len();
        if assignments.len() != n {
            return Err(Error::InvalidModel(format!(
                "{} states but {} assignments",
                n,
                assignments.len()
            )));
        }
        let mut seen = HashSet::new();
        for name in &names {
            if !seen.insert(name.as_str()) {
                return Err(Error::InvalidModel(format!("duplicate state `{name}`")));
            }
        }
        for a in &assignments {
            if a.len() != game.num_players() {
                return Err(Error::ProfileLength {
                    expected: game.num_players(),
                    got: a.len(),
                });
            }
            for (i, &s) in a.iter().enumerate() {
                game.check_strategy(i, s)?;
            }
        }
        if let Some(ps) = &correspondences {
            if ps.len() != game.num_players() || ps.iter().any(|p| p.len() != n || p.iter().any(|e| e.universe() != n))
            {
                return Err(Error::InvalidModel(
                    "correspondence shape does not match the model".into(),
                ));
            }
        }
        Ok(EpistemicModel {
            game: Arc::clone(game),
            names,
            assignments,
            correspondences,
            level,
        })
    }

    pub fn game(&self) -> &Arc<Game> {
        &self.game
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_name(&self, state: usize) -> &str {
        &self.names[state]
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn with_level(mut self, level: Level) -> Self {
        self.level = level;
        self
    }

    /// `s̄_i(ω)`
    pub fn assignment(&self, state: usize, player: usize) -> usize {
        self.assignments[state][player]
    }

    pub fn profile(&self, state: usize) -> &[usize] {
        &self.assignments[state]
    }

    pub fn has_correspondences(&self) -> bool {
        self.correspondences.is_some()
    }

    fn ps(&self) -> Result<&Vec<Vec<Event>>> {
        self.correspondences.as_ref().ok_or(Error::MissingCorrespondences)
    }

    /// `P_i(ω)`
    pub fn possibility(&self, player: usize, state: usize) -> Result<&Event> {
        Ok(&self.ps()?[player][state])
    }

    pub fn correspondences(&self) -> Option<&Vec<Vec<Event>>> {
        self.correspondences.as_ref()
    }

    pub fn omega(&self) -> Event {
        Event::full(self.num_states())
    }

    pub fn event(&self, members: impl IntoIterator<Item = usize>) -> Event {
        Event::from_states(self.num_states(), members)
    }

    pub fn event_by_names(&self, names: &[&str]) -> Result<Event> {
        let mut e = Event::empty(self.num_states());
        for name in names {
            e.insert(
                self.state_index(name)
                    .ok_or_else(|| Error::UnknownState(name.to_string()))?,
            );
        }
        Ok(e)
    }

    pub fn check_event(&self, e: &Event) -> Result<()> {
        if e.universe() == self.num_states() {
            Ok(())
        } else {
            Err(Error::InvalidModel(format!(
                "event over {} states used with a model of {} states",
                e.universe(),
                self.num_states()
            )))
        }
    }

    pub fn display_event(&self, e: &Event) -> String {
        let names: Vec<&str> = e.iter().map(|s| self.state_name(s)).collect();
        format!("{{{}}}", names.join(" "))
    }

    /// Checks frame properties (i), plus (ii) for belief and (iii) for
    /// knowledge. A model without correspondences is only valid as bare.
    pub fn validate(&self, level: Level) -> Validation {
        let Some(ps) = &self.correspondences else {
            return Validation::Ok;
        };
        for (i, p) in ps.iter().enumerate() {
            for (w, image) in p.iter().enumerate() {
                if image.is_empty() {
                    return Validation::Violation {
                        player: i,
                        state: w,
                        property: FrameProperty::NonEmpty,
                    };
                }
                if level >= Level::Belief && image.iter().any(|v| &p[v] != image) {
                    return Validation::Violation {
                        player: i,
                        state: w,
                        property: FrameProperty::Introspective,
                    };
                }
                if level == Level::Knowledge && !image.contains(w) {
                    return Validation::Violation {
                        player: i,
                        state: w,
                        property: FrameProperty::Reflexive,
                    };
                }
            }
        }
        Validation::Ok
    }

    /// Level sets `{ω' | P_i(ω') = P_i(ω)}` of player `i`'s correspondence.
    /// They always partition `Ω`; under (ii) each image lies inside one block.
    pub fn belief_blocks(&self, player: usize) -> Result<Vec<Event>> {
        let p = &self.ps()?[player];
        let mut blocks: Vec<(Event, Event)> = Vec::new();
        for (w, image) in p.iter().enumerate() {
            match blocks.iter_mut().find(|(img, _)| img == image) {
                Some((_, block)) => block.insert(w),
                None => blocks.push((image.clone(), self.event([w]))),
            }
        }
        Ok(blocks.into_iter().map(|(_, b)| b).collect())
    }

    /// `□_i E = {ω | P_i(ω) ⊆ E}`
    pub fn box_player(&self, player: usize, e: &Event) -> Result<Event> {
        self.check_event(e)?;
        let p = &self.ps()?[player];
        Ok(self.event((0..self.num_states()).filter(|&w| p[w].is_subset(e))))
    }

    /// `□E = ⋂_i □_i E`
    pub fn box_all(&self, e: &Event) -> Result<Event> {
        let mut acc = self.omega();
        for i in 0..self.game.num_players() {
            acc = acc.intersection(&self.box_player(i, e)?);
        }
        Ok(acc)
    }

    /// `□*E = ⋂_{k≥1} □^k E`. The sequence `□^k E` is eventually periodic on
    /// a finite model, so the intersection is final once a value repeats.
    pub fn common_box(&self, e: &Event) -> Result<Event> {
        let mut seen = HashSet::new();
        let mut current = self.box_all(e)?;
        let mut acc = current.clone();
        while seen.insert(current.clone()) {
            current = self.box_all(&current)?;
            acc = acc.intersection(&current);
        }
        Ok(acc)
    }

    /// `F ⊆ □F`
    pub fn is_evident(&self, f: &Event) -> Result<bool> {
        Ok(f.is_subset(&self.box_all(f)?))
    }

    /// `G_Ē = (s̄_1(E_1), ..., s̄_n(E_n))`
    pub fn restriction_of(&self, events: &[Event]) -> Result<Restriction> {
        if events.len() != self.game.num_players() {
            return Err(Error::ProfileLength {
                expected: self.game.num_players(),
                got: events.len(),
            });
        }
        let mut r = Restriction::empty(&self.game);
        for (i, e) in events.iter().enumerate() {
            self.check_event(e)?;
            for w in e.iter() {
                r.insert(i, self.assignments[w][i]);
            }
        }
        Ok(r)
    }

    /// `G_E`, the same event for every player.
    pub fn restriction_of_event(&self, e: &Event) -> Result<Restriction> {
        self.restriction_of(&vec![e.clone(); self.game.num_players()])
    }

    /// `{ω | φ_i(s̄_i(ω), G_{P_i(ω)})}` for one player.
    pub fn rat_event_player(&self, phi: &OptimalityProperty) -> Result<Event> {
        if phi.game().id() != self.game.id() {
            return Err(Error::GameMismatch);
        }
        let i = phi.player();
        let p = &self.ps()?[i];
        let mut out = Event::empty(self.num_states());
        let mut cache: Vec<(&Event, Restriction)> = Vec::new();
        for (w, pw) in p.iter().enumerate() {
            let r = match cache.iter().find(|(e, _)| *e == pw) {
                Some((_, r)) => r.clone(),
                None => {
                    let r = self.restriction_of_event(pw)?;
                    cache.push((pw, r.clone()));
                    r
                }
            };
            if phi.holds(self.assignments[w][i], &r)? {
                out.insert(w);
            }
        }
        Ok(out)
    }

    /// `RAT(φ̄) = ⋂_i RAT_i`
    pub fn rat_event(&self, profile: &PropertyProfile) -> Result<Event> {
        let mut acc = self.omega();
        for phi in profile.properties() {
            acc = acc.intersection(&self.rat_event_player(phi)?);
        }
        Ok(acc)
    }

    /// States whose own strategy satisfies `φ_i(s̄_i(ω), G)` for a fixed `G`.
    pub fn optimality_event(&self, phi: &OptimalityProperty, r: &Restriction) -> Result<Event> {
        let i = phi.player();
        let mut out = Event::empty(self.num_states());
        let mut memo: Vec<Option<bool>> = vec![None; self.game.num_strategies(i)];
        for w in 0..self.num_states() {
            let s = self.assignments[w][i];
            let v = match memo[s] {
                Some(v) => v,
                None => {
                    let v = phi.holds(s, r)?;
                    memo[s] = Some(v);
                    v
                }
            };
            if v {
                out.insert(w);
            }
        }
        Ok(out)
    }

    /// The restriction this model is a standard model of, if any: states
    /// are pairwise distinct joint strategies filling `G_Ω` exactly.
    pub fn standard_restriction(&self) -> Option<Restriction> {
        let r = self.restriction_of_event(&self.omega()).ok()?;
        let distinct: HashSet<&Vec<usize>> = self.assignments.iter().collect();
        let product = if r.has_empty_component() { 0 } else { r.product_size() };
        (distinct.len() == self.num_states() && product == self.num_states() as u128).then_some(r)
    }

    pub fn is_standard(&self) -> bool {
        self.standard_restriction().is_some()
    }

    /// Does every `P_i(ω)` equal `{ω' | s̄_i(ω') = s̄_i(ω)}`?
    pub fn has_standard_correspondences(&self) -> bool {
        let Some(ps) = &self.correspondences else {
            return false;
        };
        ps.iter().enumerate().all(|(i, p)| {
            p.iter().enumerate().all(|(w, image)| {
                let expected =
                    self.event((0..self.num_states()).filter(|&v| self.assignments[v][i] == self.assignments[w][i]));
                image == &expected
            })
        })
    }

    /// Same states and assignments (by state order) and same correspondences.
    pub fn same_structure(&self, other: &EpistemicModel) -> bool {
        self.game.id() == other.game.id()
            && self.assignments == other.assignments
            && self.correspondences == other.correspondences
    }

    /// Serializes in the line format read by [`EpistemicModel::parse`].
    pub fn to_text(&self, game_path: &str) -> String {
        let mut out = format!("game {game_path}\nstates {}\n", self.names.join(" "));
        for (w, a) in self.assignments.iter().enumerate() {
            for (i, &s) in a.iter().enumerate() {
                out.push_str(&format!(
                    "assign {} {} {}\n",
                    self.names[w],
                    i + 1,
                    self.game.strategy_name(i, s)
                ));
            }
        }
        if let Some(ps) = &self.correspondences {
            for (i, p) in ps.iter().enumerate() {
                for (w, image) in p.iter().enumerate() {
                    let targets: Vec<&str> = image.iter().map(|v| self.names[v].as_str()).collect();
                    out.push_str(&format!("P {} {} : {}\n", i + 1, self.names[w], targets.join(" ")));
                }
            }
        }
        out.push_str(&format!("level {}\n", self.level.name()));
        out
    }

    /// Parses the model line format. `load_game` resolves the path given on
    /// the `game` line. The declared level is enforced.
    pub fn parse(text: &str, load_game: impl FnOnce(&str) -> Result<Arc<Game>>) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(k, l)| (k + 1, l.split('#').next().unwrap_or("").trim()))
            .filter(|(_, l)| !l.is_empty());
        let syntax = |line: usize, message: String| Error::Syntax { line, message };

        let (ln, first) = lines.next().ok_or_else(|| syntax(1, "empty model file".into()))?;
        let path = first
            .strip_prefix("game ")
            .map(str::trim)
            .filter(|p| !p.is_empty())
            .ok_or_else(|| syntax(ln, "expected `game <path>`".into()))?;
        let game = load_game(path)?;

        let (ln, second) = lines.next().ok_or_else(|| syntax(ln, "expected `states ...`".into()))?;
        let mut toks = second.split_whitespace();
        if toks.next() != Some("states") {
            return Err(syntax(ln, "expected `states <name> ...`".into()));
        }
        let names: Vec<String> = toks.map(str::to_string).collect();
        if names.is_empty() {
            return Err(syntax(ln, "a model needs at least one state".into()));
        }
        let n = names.len();
        let idx = |line: usize, name: &str| -> Result<usize> {
            names
                .iter()
                .position(|x| x == name)
                .ok_or_else(|| syntax(line, format!("unknown state `{name}`")))
        };
        let players = game.num_players();
        let mut assign: Vec<Vec<Option<usize>>> = vec![vec![None; players]; n];
        let mut ps: Option<Vec<Vec<Option<Event>>>> = None;
        let mut level = None;

        for (ln, line) in lines {
            let toks: Vec<&str> = line.split_whitespace().collect();
            match toks[0] {
                "assign" => {
                    let [_, state, player, strategy] = toks[..] else {
                        return Err(syntax(ln, "expected `assign <state> <player> <strategy>`".into()));
                    };
                    let w = idx(ln, state)?;
                    let i = parse_player(ln, player, players)?;
                    let s = game
                        .strategy_index(i, strategy)
                        .ok_or_else(|| syntax(ln, format!("unknown strategy `{strategy}` for player {}", i + 1)))?;
                    if assign[w][i].replace(s).is_some() {
                        return Err(syntax(
                            ln,
                            format!("duplicate assignment for state `{state}` player {}", i + 1),
                        ));
                    }
                }
                "P" => {
                    if toks.len() < 4 || toks[3] != ":" {
                        return Err(syntax(ln, "expected `P <player> <state> : <state> ...`".into()));
                    }
                    let i = parse_player(ln, toks[1], players)?;
                    let w = idx(ln, toks[2])?;
                    let mut image = Event::empty(n);
                    for t in &toks[4..] {
                        image.insert(idx(ln, t)?);
                    }
                    let table = ps.get_or_insert_with(|| vec![vec![None; n]; players]);
                    if table[i][w].replace(image).is_some() {
                        return Err(syntax(
                            ln,
                            format!("duplicate correspondence for player {} state `{}`", i + 1, toks[2]),
                        ));
                    }
                }
                "level" => {
                    let [_, l] = toks[..] else {
                        return Err(syntax(ln, "expected `level bare|belief|knowledge`".into()));
                    };
                    level = Some(l.parse::<Level>().map_err(|m| syntax(ln, m))?);
                }
                other => return Err(syntax(ln, format!("unknown directive `{other}`"))),
            }
        }

        let mut assignments = Vec::with_capacity(n);
        for (w, a) in assign.into_iter().enumerate() {
            let mut row = Vec::with_capacity(players);
            for (i, s) in a.into_iter().enumerate() {
                row.push(s.ok_or_else(|| {
                    Error::InvalidModel(format!("no assignment for state `{}` player {}", names[w], i + 1))
                })?);
            }
            assignments.push(row);
        }
        let correspondences = match ps {
            None => None,
            Some(table) => {
                let mut out = Vec::with_capacity(players);
                for (i, p) in table.into_iter().enumerate() {
                    let mut row = Vec::with_capacity(n);
                    for (w, image) in p.into_iter().enumerate() {
                        row.push(image.ok_or_else(|| {
                            Error::InvalidModel(format!(
                                "player {} has no correspondence at state `{}`",
                                i + 1,
                                names[w]
                            ))
                        })?);
                    }
                    out.push(row);
                }
                Some(out)
            }
        };
        let level = level.unwrap_or(if correspondences.is_some() {
            Level::Belief
        } else {
            Level::Bare
        });
        if level > Level::Bare && correspondences.is_none() {
            return Err(Error::InvalidModel(format!(
                "level {} needs correspondences",
                level.name()
            )));
        }
        let model = EpistemicModel::new(&game, names, assignments, correspondences, level)?;
        if let Validation::Violation {
            player,
            state,
            property,
        } = model.validate(level)
        {
            return Err(Error::InvalidModel(format!(
                "player {} at state `{}` violates {property}",
                player + 1,
                model.state_name(state)
            )));
        }
        Ok(model)
    }
}

fn parse_player(line: usize, tok: &str, players: usize) -> Result<usize> {
    match tok.parse::<usize>() {
        Ok(i) if (1..=players).contains(&i) => Ok(i - 1),
        _ => Err(Error::Syntax {
            line,
            message: format!("player `{tok}` out of range 1..={players}"),
        }),
    }
}

/// Name of the state for a joint strategy in a standard model.
pub fn profile_state_name(g: &Game, profile: &[usize]) -> String {
    g.profile_label(profile)
}

/// Correspondences attached to a standard model.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StandardCorrespondences {
    None,
    /// `P_i(ω) = {ω' | ω'_i = ω_i}`
    OwnStrategy,
    /// `P_i(ω) = {ω}`
    Identity,
}

/// The standard model of `G`: one state per joint strategy in
/// `G_1 × ... × G_n` (lexicographic order), with projection assignments.
pub fn standard_model(
    game: &Arc<Game>,
    r: &Restriction,
    correspondences: StandardCorrespondences,
    budgets: &Budgets,
) -> Result<EpistemicModel> {
    r.check_game(game)?;
    let size = if r.has_empty_component() { 0 } else { r.product_size() };
    budgets.check_states(size)?;
    let comps = r.to_indices();
    let mut profiles: Vec<Vec<usize>> = vec![Vec::new()];
    for comp in &comps {
        profiles = profiles
            .into_iter()
            .flat_map(|p| {
                comp.iter().map(move |&s| {
                    let mut q = p.clone();
                    q.push(s);
                    q
                })
            })
            .collect();
    }
    if size == 0 {
        profiles.clear();
    }
    let n = profiles.len();
    let names = profiles.iter().map(|p| profile_state_name(game, p)).collect();
    let (ps, level) = match correspondences {
        StandardCorrespondences::None => (None, Level::Bare),
        StandardCorrespondences::OwnStrategy => {
            let ps = (0..game.num_players())
                .map(|i| {
                    (0..n)
                        .map(|w| Event::from_states(n, (0..n).filter(|&v| profiles[v][i] == profiles[w][i])))
                        .collect()
                })
                .collect();
            (Some(ps), Level::Knowledge)
        }
        StandardCorrespondences::Identity => {
            let ps = (0..game.num_players())
                .map(|_| (0..n).map(|w| Event::from_states(n, [w])).collect())
                .collect();
            (Some(ps), Level::Knowledge)
        }
    };
    EpistemicModel::new(game, names, profiles, ps, level)
}

/// Result of the common-belief inclusion check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epist1Report {
    /// `G_{RAT ∩ □*RAT}`
    pub lhs: Restriction,
    /// `G_{□*RAT}`, computed for knowledge-level models.
    pub knowledge_lhs: Option<Restriction>,
    pub outcome: Restriction,
    /// A state of `RAT ∩ □*RAT` (or `□*RAT` on knowledge models) assigning a
    /// strategy outside the outcome.
    pub violation: Option<usize>,
}

impl Epist1Report {
    pub fn holds(&self) -> bool {
        self.violation.is_none()
    }
}

/// `G_{RAT ∩ □*RAT} ⊆ T^∞` for monotone profiles, and on knowledge models
/// also `G_{□*RAT} ⊆ T^∞`. Refuses non-monotonic profiles.
pub fn check_theorem_epist1(
    model: &EpistemicModel,
    profile: &PropertyProfile,
    budgets: &Budgets,
) -> Result<Epist1Report> {
    optimality::require_monotonic(profile, budgets)?;
    check_theorem_epist1_unguarded(model, profile)
}

/// As [`check_theorem_epist1`] without the monotonicity guard, for callers
/// that already established it.
pub fn check_theorem_epist1_unguarded(model: &EpistemicModel, profile: &PropertyProfile) -> Result<Epist1Report> {
    if profile.game().id() != model.game().id() {
        return Err(Error::GameMismatch);
    }
    let outcome = operators::iterate_to_outcome(profile)?.outcome().clone();
    let rat = model.rat_event(profile)?;
    let cb = model.common_box(&rat)?;
    let event = rat.intersection(&cb);
    let lhs = model.restriction_of_event(&event)?;
    let outside = |w: &usize| (0..model.game().num_players()).any(|i| !outcome.contains(i, model.assignment(*w, i)));
    let mut violation = event.iter().find(outside);
    let knowledge_lhs = if model.validate(Level::Knowledge) == Validation::Ok {
        if violation.is_none() {
            violation = cb.iter().find(outside);
        }
        Some(model.restriction_of_event(&cb)?)
    } else {
        None
    };
    Ok(Epist1Report {
        lhs,
        knowledge_lhs,
        outcome,
        violation,
    })
}

/// The standard model of `H` with `P_i(ω) = F` on `F` and `Ω ∖ F` off it,
/// where `F` is the set of joint strategies in `T^∞`. Labelled knowledge
/// level; the label is asserted by validation.
pub fn construct_witness(profile: &PropertyProfile, budgets: &Budgets) -> Result<EpistemicModel> {
    let g = profile.game();
    let outcome = operators::iterate_to_outcome(profile)?.outcome().clone();
    let base = standard_model(g, &Restriction::full(g), StandardCorrespondences::None, budgets)?;
    let n = base.num_states();
    let f = base.event((0..n).filter(|&w| (0..g.num_players()).all(|i| outcome.contains(i, base.assignment(w, i)))));
    let rest = f.complement();
    let image: Vec<Event> = (0..n)
        .map(|w| if f.contains(w) { f.clone() } else { rest.clone() })
        .collect();
    let ps = vec![image; g.num_players()];
    let model = EpistemicModel::new(
        g,
        base.names.clone(),
        base.assignments.clone(),
        Some(ps),
        Level::Knowledge,
    )?;
    if let Validation::Violation { property, .. } = model.validate(Level::Knowledge) {
        return Err(Error::Internal(format!("witness model violates {property}")));
    }
    Ok(model)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Epist2Outcome {
    /// `G_{K*RAT} = H` on the identity-correspondence standard model.
    Ok,
    /// Some `φ_i` fails on the point restriction of `profile`.
    HypothesisFailure { player: usize, profile: Vec<usize> },
    /// Hypothesis holds but the conclusion does not. Should be impossible.
    Violation { restriction: Restriction },
}

pub fn check_theorem_epist2(profile: &PropertyProfile, budgets: &Budgets) -> Result<Epist2Outcome> {
    for phi in profile.properties() {
        if let Some(p) = optimality::singleton_counterexample(phi)? {
            return Ok(Epist2Outcome::HypothesisFailure {
                player: phi.player(),
                profile: p,
            });
        }
    }
    let g = profile.game();
    let model = standard_model(g, &Restriction::full(g), StandardCorrespondences::Identity, budgets)?;
    let krat = model.common_box(&model.rat_event(profile)?)?;
    let r = model.restriction_of_event(&krat)?;
    if krat.is_full() && r == Restriction::full(g) {
        Ok(Epist2Outcome::Ok)
    } else {
        Ok(Epist2Outcome::Violation { restriction: r })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EventCoverage {
    Exhaustive,
    Sampled(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CharacterizationReport {
    pub coverage: EventCoverage,
    /// A state, or an event, at which a characterization failed.
    pub mismatch: Option<String>,
}

/// Checks, for one event `E`, that `□*E = ⋃{F | F ⊆ □(E ∩ F)}` and that
/// `ω ∈ □*E` iff some evident `F` has `ω ∈ F ⊆ □E` (on knowledge models
/// also with `F ⊆ E`). All events are enumerated within the budget,
/// otherwise `samples` random events are drawn and checked for soundness.
pub fn check_fixed_point_characterizations<R: Rng>(
    model: &EpistemicModel,
    e: &Event,
    budgets: &Budgets,
    samples: usize,
    rng: &mut R,
) -> Result<CharacterizationReport> {
    model.check_event(e)?;
    let n = model.num_states();
    let cb = model.common_box(e)?;
    let be = model.box_all(e)?;
    let knowledge = model.validate(Level::Knowledge) == Validation::Ok;
    let mut union = Event::empty(n);
    let mut reach1 = Event::empty(n);
    let mut reach2 = Event::empty(n);

    let mut visit = |f: &Event| -> Result<()> {
        let bf = model.box_all(f)?;
        if f.is_subset(&model.box_all(&e.intersection(f))?) {
            union = union.union(f);
        }
        if f.is_subset(&bf) {
            if f.is_subset(&be) {
                reach1 = reach1.union(f);
            }
            if f.is_subset(e) {
                reach2 = reach2.union(f);
            }
        }
        Ok(())
    };

    let coverage = if budgets.check_events(n).is_ok() {
        for mask in 0..(1u64 << n) {
            visit(&Event::from_mask(n, mask))?;
        }
        EventCoverage::Exhaustive
    } else {
        visit(&cb)?;
        for _ in 0..samples {
            let f = Event::from_states(n, (0..n).filter(|_| rng.gen_bool(0.5)));
            visit(&f)?;
        }
        EventCoverage::Sampled(samples)
    };

    let mismatch = match coverage {
        EventCoverage::Exhaustive => {
            if union != cb {
                Some(format!(
                    "union of post-fixpoints {} vs {}",
                    model.display_event(&union),
                    model.display_event(&cb)
                ))
            } else if reach1 != cb {
                Some(format!(
                    "evident-event reading {} vs {}",
                    model.display_event(&reach1),
                    model.display_event(&cb)
                ))
            } else if knowledge && reach2 != cb {
                Some(format!(
                    "knowledge reading {} vs {}",
                    model.display_event(&reach2),
                    model.display_event(&cb)
                ))
            } else {
                None
            }
        }
        // Sampled events can only under-approximate the unions.
        EventCoverage::Sampled(_) => {
            if !union.is_subset(&cb) || !reach1.is_subset(&cb) || (knowledge && !reach2.is_subset(&cb)) {
                Some("a sampled event escapes the common-belief set".into())
            } else if !cb.is_subset(&union) || !cb.is_subset(&reach1) {
                Some("the common-belief set is not a post-fixpoint".into())
            } else {
                None
            }
        }
    };
    Ok(CharacterizationReport { coverage, mismatch })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::{fig2, pd, three_by_two};
    use crate::optimality::Builtin;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn two_state(ps: Vec<Vec<Vec<usize>>>) -> EpistemicModel {
        let g = Arc::new(pd());
        let ps = ps
            .into_iter()
            .map(|p| p.into_iter().map(|img| Event::from_states(2, img)).collect())
            .collect();
        EpistemicModel::new(
            &g,
            vec!["w1".into(), "w2".into()],
            vec![vec![0, 0], vec![1, 1]],
            Some(ps),
            Level::Bare,
        )
        .unwrap()
    }

    #[test]
    fn validation_levels() {
        let m = two_state(vec![vec![vec![1], vec![1]], vec![vec![0], vec![1]]]);
        assert_eq!(m.validate(Level::Belief), Validation::Ok);
        assert_eq!(
            m.validate(Level::Knowledge),
            Validation::Violation {
                player: 0,
                state: 0,
                property: FrameProperty::Reflexive
            }
        );
        let m = two_state(vec![vec![vec![], vec![1]], vec![vec![0], vec![1]]]);
        assert!(matches!(
            m.validate(Level::Bare),
            Validation::Violation {
                property: FrameProperty::NonEmpty,
                ..
            }
        ));
        let g = Arc::new(pd());
        let m = standard_model(
            &g,
            &Restriction::full(&g),
            StandardCorrespondences::OwnStrategy,
            &Budgets::default(),
        )
        .unwrap();
        assert_eq!(m.validate(Level::Knowledge), Validation::Ok);
        for i in 0..2 {
            let blocks = m.belief_blocks(i).unwrap();
            assert_eq!(blocks.len(), 2);
            assert_eq!(blocks.iter().map(Event::len).sum::<usize>(), 4);
        }
    }

    #[test]
    fn box_examples() {
        let m = two_state(vec![vec![vec![0], vec![0, 1]], vec![vec![0], vec![0, 1]]]);
        let e = m.event([0]);
        assert_eq!(m.box_all(&e).unwrap(), e);
        assert_eq!(m.box_all(&m.omega()).unwrap(), m.omega());
        assert!(m.box_all(&Event::empty(2)).unwrap().is_empty());
        assert!(m.is_evident(&m.omega()).unwrap());
        assert!(m.is_evident(&Event::empty(2)).unwrap());
        let bare = EpistemicModel::new(m.game(), vec!["a".into()], vec![vec![0, 0]], None, Level::Bare).unwrap();
        assert_eq!(bare.box_all(&bare.omega()), Err(Error::MissingCorrespondences));
    }

    #[test]
    fn common_box_on_a_shrinking_chain() {
        // P(w_k) = {w_{k+1}}, P(w_3) = {w_3}: □ drops one state per round.
        let g = Arc::new(pd());
        let n = 4;
        let image: Vec<Event> = (0..n).map(|k| Event::from_states(n, [(k + 1).min(n - 1)])).collect();
        let m = EpistemicModel::new(
            &g,
            (0..n).map(|k| format!("w{k}")).collect(),
            vec![vec![0, 0]; n],
            Some(vec![image.clone(), image]),
            Level::Bare,
        )
        .unwrap();
        let e = m.event([1, 2, 3]);
        let mut brute = m.omega();
        let mut cur = e.clone();
        for _ in 0..=n {
            cur = m.box_all(&cur).unwrap();
            brute = brute.intersection(&cur);
        }
        assert_eq!(m.common_box(&e).unwrap(), brute);
        assert_eq!(brute, m.event([0, 1, 2, 3]));
        assert_eq!(m.common_box(&m.event([2, 3])).unwrap(), m.event([1, 2, 3]));
    }

    #[test]
    fn restriction_of_examples() {
        let g = Arc::new(fig2());
        let m = standard_model(
            &g,
            &Restriction::full(&g),
            StandardCorrespondences::None,
            &Budgets::default(),
        )
        .unwrap();
        assert_eq!(m.restriction_of_event(&m.omega()).unwrap(), Restriction::full(&g));
        assert_eq!(
            m.restriction_of_event(&Event::empty(4)).unwrap(),
            Restriction::empty(&g)
        );
        let ul = m.event_by_names(&["(U,L)"]).unwrap();
        assert_eq!(
            m.restriction_of_event(&ul).unwrap(),
            Restriction::from_names(&g, &[&["U"], &["L"]]).unwrap()
        );
    }

    #[test]
    fn standard_model_examples() {
        let g = Arc::new(pd());
        let b = Budgets::default();
        let m = standard_model(&g, &Restriction::full(&g), StandardCorrespondences::OwnStrategy, &b).unwrap();
        assert_eq!(m.num_states(), 4);
        assert_eq!(m.state_names(), ["(C,C)", "(C,D)", "(D,C)", "(D,D)"]);
        assert_eq!(m.possibility(0, 0).unwrap(), &m.event([0, 1]));
        assert!(m.has_standard_correspondences());
        assert!(m.is_standard());
        for w in 0..4 {
            for i in 0..2 {
                let mut expected = Restriction::full(&g);
                let mut own = FixedBitSet::with_capacity(2);
                own.insert(m.assignment(w, i));
                expected.set_component(i, own);
                assert_eq!(m.restriction_of_event(m.possibility(i, w).unwrap()).unwrap(), expected);
            }
        }
        let dd = Restriction::from_names(&g, &[&["D"], &["D"]]).unwrap();
        assert_eq!(
            standard_model(&g, &dd, StandardCorrespondences::None, &b)
                .unwrap()
                .num_states(),
            1
        );
        let tight = Budgets { states: 3, ..b };
        assert!(matches!(
            standard_model(&g, &Restriction::full(&g), StandardCorrespondences::None, &tight),
            Err(Error::BudgetExceeded { .. })
        ));
    }

    #[test]
    fn rat_event_examples() {
        let g = Arc::new(pd());
        let b = Budgets::default();
        let m = standard_model(&g, &Restriction::full(&g), StandardCorrespondences::OwnStrategy, &b).unwrap();
        let sd_l = PropertyProfile::uniform(&g, Builtin::SdL).unwrap();
        assert_eq!(m.rat_event(&sd_l).unwrap(), m.omega());
        assert!(m
            .rat_event(&PropertyProfile::constant(&g, false).unwrap())
            .unwrap()
            .is_empty());
        let sd_g = PropertyProfile::uniform(&g, Builtin::SdG).unwrap();
        assert_eq!(m.rat_event_player(sd_g.get(0)).unwrap(), m.event([2, 3]));
        assert_eq!(m.rat_event_player(sd_g.get(1)).unwrap(), m.event([1, 3]));
        assert_eq!(m.rat_event(&sd_g).unwrap(), m.event([3]));
    }

    #[test]
    fn witness_and_theorems() {
        let b = Budgets::default();
        let g = Arc::new(pd());
        let sd_g = PropertyProfile::uniform(&g, Builtin::SdG).unwrap();
        let w = construct_witness(&sd_g, &b).unwrap();
        assert_eq!(w.num_states(), 4);
        assert_eq!(w.possibility(0, 3).unwrap(), &w.event([3]));
        let rep = check_theorem_epist1(&w, &sd_g, &b).unwrap();
        assert!(rep.holds());
        assert_eq!(rep.lhs, rep.outcome);

        let g3 = Arc::new(three_by_two());
        let msd = PropertyProfile::uniform(&g3, Builtin::MsdG).unwrap();
        let w = construct_witness(&msd, &b).unwrap();
        let rep = check_theorem_epist1(&w, &msd, &b).unwrap();
        assert_eq!(rep.lhs, rep.outcome);

        let t = PropertyProfile::constant(&g, true).unwrap();
        let w = construct_witness(&t, &b).unwrap();
        assert_eq!(w.possibility(1, 0).unwrap(), &w.omega());

        let sd_l = PropertyProfile::uniform(&g, Builtin::SdL).unwrap();
        assert_eq!(check_theorem_epist2(&sd_l, &b).unwrap(), Epist2Outcome::Ok);
        assert!(matches!(
            check_theorem_epist2(&sd_g, &b).unwrap(),
            Epist2Outcome::HypothesisFailure { .. }
        ));
        let wd = PropertyProfile::uniform(&g, Builtin::WdG).unwrap();
        let m = standard_model(&g, &Restriction::full(&g), StandardCorrespondences::OwnStrategy, &b).unwrap();
        assert!(matches!(
            check_theorem_epist1(&m, &wd, &b),
            Err(Error::NonMonotonic { .. })
        ));
    }

    #[test]
    fn characterizations_exhaustive() {
        let g = Arc::new(pd());
        let b = Budgets::default();
        let m = two_state(vec![vec![vec![0], vec![0, 1]], vec![vec![1], vec![1]]]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for mask in 0..4 {
            let e = Event::from_mask(2, mask);
            let rep = check_fixed_point_characterizations(&m, &e, &b, 0, &mut rng).unwrap();
            assert_eq!(rep.coverage, EventCoverage::Exhaustive);
            assert_eq!(rep.mismatch, None);
        }
        let k = standard_model(&g, &Restriction::full(&g), StandardCorrespondences::OwnStrategy, &b).unwrap();
        let tight = Budgets { event_states: 2, ..b };
        let rep = check_fixed_point_characterizations(&k, &k.event([3]), &tight, 50, &mut rng).unwrap();
        assert_eq!(rep.coverage, EventCoverage::Sampled(50));
        assert_eq!(rep.mismatch, None);
    }

    #[test]
    fn model_file_round_trip() {
        let g = Arc::new(pd());
        let m = standard_model(
            &g,
            &Restriction::full(&g),
            StandardCorrespondences::OwnStrategy,
            &Budgets::default(),
        )
        .unwrap();
        let text = m.to_text("pd.game");
        let back = EpistemicModel::parse(&text, |p| {
            assert_eq!(p, "pd.game");
            Ok(Arc::clone(&g))
        })
        .unwrap();
        assert_eq!(back, m);

        let bad = "game pd.game\nstates a b\nassign a 1 C\nassign a 2 C\nassign b 1 D\nassign b 2 D\n\
                   P 1 a : b\nP 1 b : b\nP 2 a : a\nP 2 b : b\nlevel knowledge\n";
        assert!(matches!(
            EpistemicModel::parse(bad, |_| Ok(Arc::clone(&g))),
            Err(Error::InvalidModel(_))
        ));
        let ok = bad.replace("level knowledge", "level belief");
        assert_eq!(
            EpistemicModel::parse(&ok, |_| Ok(Arc::clone(&g))).unwrap().level(),
            Level::Belief
        );
        let missing = "game pd.game\nstates a\nassign a 1 C\n";
        assert!(EpistemicModel::parse(missing, |_| Ok(Arc::clone(&g))).is_err());
        let unknown = "game pd.game\nstates a\nassign a 1 X\n";
        assert!(matches!(
            EpistemicModel::parse(unknown, |_| Ok(Arc::clone(&g))),
            Err(Error::Syntax { line: 3, .. })
        ));
    }
}
