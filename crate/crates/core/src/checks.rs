//! Named randomized checks of the theorems, grouped into suites.
//!
//! Every check runs `instances` independent instances; instance `k` draws
//! from [`random::instance_rng`]`(seed, k)`, so a failing instance can be
//! replayed alone with [`run_instance`]. Instances fan out over the rayon
//! pool and results are assembled in instance order, which makes reports
//! identical across thread counts.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use crate::announcements::{effect, iterate_optimality_announcements, iterate_rationality_announcements};
use crate::config::Budgets;
use crate::dominance::BeliefClass;
use crate::epistemic::{
    self, check_fixed_point_characterizations, construct_witness, standard_model, Epist2Outcome, EpistemicModel, Event,
    Level, StandardCorrespondences,
};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::game::{Game, Restriction};
use crate::logic::derivation::FORMULA3_DERIVATION;
use crate::logic::lo::standard_condition;
use crate::logic::{compile_lo_to_property, eval_lnu, parse_lo, Derivation, Lnu, LnuEvaluator, Verdict};
use crate::operators::{apply_t, iterate_to_outcome, largest_fixpoint_via_postfixpoints, stagewise_inclusion};
use crate::optimality::{is_monotonic_on, Builtin, Monotonicity, OptimalityProperty, PropertyProfile};
use crate::par;
use crate::random::{self, GameBounds, ModelBounds, SweepRng};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Epist1,
    Epist2,
    Just,
    Just1,
    Notes,
    Announce,
    Logic,
}

impl Suite {
    pub const ALL: [Suite; 7] = [
        Suite::Epist1,
        Suite::Epist2,
        Suite::Just,
        Suite::Just1,
        Suite::Notes,
        Suite::Announce,
        Suite::Logic,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Epist1 => "epist1",
            Suite::Epist2 => "epist2",
            Suite::Just => "just",
            Suite::Just1 => "just1",
            Suite::Notes => "notes",
            Suite::Announce => "announce",
            Suite::Logic => "logic",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A suite name or `all`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Selection {
    All,
    One(Suite),
}

impl FromStr for Selection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "all" {
            return Ok(Selection::All);
        }
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .map(Selection::One)
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub seed: u64,
    pub instances: usize,
    pub games: GameBounds,
    pub models: ModelBounds,
    pub budgets: Budgets,
    /// Replaces the default monotone profiles of the common-belief checks.
    pub property: Option<Builtin>,
    /// Random `ψ` per model in the common-belief formula check.
    pub formulas_per_model: usize,
}

impl Default for SweepConfig {
    fn default() -> Self {
        SweepConfig {
            seed: 0,
            instances: 50,
            games: GameBounds::default(),
            models: ModelBounds::default(),
            budgets: Budgets::default(),
            property: None,
            formulas_per_model: 20,
        }
    }
}

impl SweepConfig {
    fn game_bounds(&self) -> GameBounds {
        let cap = self
            .games
            .max_total
            .unwrap_or(usize::MAX)
            .min(self.budgets.restriction_strategies);
        self.games.with_total(cap)
    }

    fn game(&self, rng: &mut SweepRng) -> Arc<Game> {
        Arc::new(random::random_game(rng, &self.game_bounds()))
    }

    fn two_player_game(&self, rng: &mut SweepRng, max_strategies: usize) -> Arc<Game> {
        let b = GameBounds {
            min_players: 2,
            max_players: 2,
            max_strategies: self.games.max_strategies.min(max_strategies),
            min_strategies: self.games.min_strategies.min(max_strategies),
            ..self.game_bounds()
        };
        Arc::new(random::random_game(rng, &b))
    }

    fn monotone_profiles(&self, g: &Arc<Game>) -> Result<Vec<PropertyProfile>> {
        match self.property {
            Some(b) => Ok(vec![PropertyProfile::uniform(g, b)?]),
            None => Ok(vec![
                PropertyProfile::uniform(g, Builtin::SdG)?,
                PropertyProfile::uniform(g, Builtin::BrG)?,
            ]),
        }
    }
}

/// Enough to rebuild a failing instance by hand.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Counterexample {
    pub instance: usize,
    pub game: String,
    pub model: Option<String>,
    pub detail: String,
}

impl Counterexample {
    fn new(instance: usize, g: &Game, model: Option<&EpistemicModel>, detail: impl Into<String>) -> Self {
        Counterexample {
            instance,
            game: g.to_text(),
            model: model.map(|m| m.to_text("game")),
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InstanceOutcome {
    /// The instance passed; it covered this many individual cases.
    Pass(usize),
    Fail(Counterexample),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CheckResult {
    pub name: &'static str,
    pub suite: Suite,
    pub status: Status,
    pub seed: u64,
    pub instances: usize,
    /// Individual cases covered by passing instances.
    pub cases: usize,
    pub failures: usize,
    /// The first failing instance.
    pub counterexample: Option<Counterexample>,
}

type InstanceFn = fn(&SweepConfig, usize, &mut SweepRng) -> Result<InstanceOutcome>;

pub struct Check {
    pub name: &'static str,
    pub suite: Suite,
    pub description: &'static str,
    /// Instances actually run for a requested count.
    scale: fn(usize) -> usize,
    run: InstanceFn,
}

fn same(n: usize) -> usize {
    n
}

fn once(_: usize) -> usize {
    1
}

pub fn catalogue() -> &'static [Check] {
    const CHECKS: &[Check] = &[
        Check {
            name: "epist1.belief",
            suite: Suite::Epist1,
            description: "G_{RAT ∩ B*RAT} ⊆ T^∞ on random belief models",
            scale: same,
            run: epist1_belief,
        },
        Check {
            name: "epist1.knowledge",
            suite: Suite::Epist1,
            description: "G_{RAT ∩ K*RAT} ⊆ T^∞ and G_{K*RAT} ⊆ T^∞ on random knowledge models",
            scale: same,
            run: epist1_knowledge,
        },
        Check {
            name: "epist1.witness",
            suite: Suite::Epist1,
            description: "the constructed witness model attains G_{RAT ∩ B*RAT} = T^∞",
            scale: same,
            run: epist1_witness,
        },
        Check {
            name: "epist2.local",
            suite: Suite::Epist2,
            description: "G_{K*RAT} = H on the identity standard model for every local property",
            scale: same,
            run: epist2_local,
        },
        Check {
            name: "just.chain",
            suite: Suite::Just,
            description: "T_br_g(G) ⊆ T_sd_g(G) ⊆ T_sd_l(G) on every stage, and T^∞_br_g ⊆ T^∞_sd_l",
            scale: same,
            run: just_chain,
        },
        Check {
            name: "just.common_belief",
            suite: Suite::Just,
            description: "with br_g, G_{RAT ∩ B*RAT} ⊆ T^∞_sd_l on random belief models",
            scale: same,
            run: just_common_belief,
        },
        Check {
            name: "just.mixed",
            suite: Suite::Just,
            description: "with br_g over correlated beliefs, G_{K*RAT} ⊆ T^∞_msd_l on two-player knowledge models",
            scale: same,
            run: just_mixed,
        },
        Check {
            name: "just1.pearce",
            suite: Suite::Just1,
            description: "T_brc_l(G) = T_msd_l(G) for every restriction of two-player games up to 3x3",
            scale: same,
            run: just1_pearce,
        },
        Check {
            name: "just1.local_global",
            suite: Suite::Just1,
            description: "T^∞ of each local property equals T^∞ of its global version",
            scale: same,
            run: just1_local_global,
        },
        Check {
            name: "notes.characterizations",
            suite: Suite::Notes,
            description: "common belief equals its two evident-event characterizations",
            scale: same,
            run: notes_characterizations,
        },
        Check {
            name: "notes.proper_announcements",
            suite: Suite::Notes,
            description: "proper announcements map standard models to the standard model of G_Ē",
            scale: same,
            run: notes_proper,
        },
        Check {
            name: "notes.optimality_events",
            suite: Suite::Notes,
            description: "T(G) is the restriction induced by the optimality events of the standard model of G",
            scale: same,
            run: notes_optimality_events,
        },
        Check {
            name: "notes.tarski",
            suite: Suite::Notes,
            description: "for monotone profiles T^∞ is the union of all post-fixpoints",
            scale: same,
            run: notes_tarski,
        },
        Check {
            name: "announce.optimality",
            suite: Suite::Announce,
            description: "iterated optimality announcements end in the standard model of T^∞",
            scale: same,
            run: announce_optimality,
        },
        Check {
            name: "announce.rationality",
            suite: Suite::Announce,
            description: "iterated rationality announcements: global properties reach T^∞, local ones stay put",
            scale: same,
            run: announce_rationality,
        },
        Check {
            name: "logic.common_belief_formula",
            suite: Suite::Logic,
            description: "[[nu x. Box(x & psi)]] = B*[[psi]] for random psi",
            scale: same,
            run: logic_common_belief_formula,
        },
        Check {
            name: "logic.formula3",
            suite: Suite::Logic,
            description: "(rat & CB(rat)) -> nu x. O x is valid on random belief models",
            scale: same,
            run: logic_formula3,
        },
        Check {
            name: "logic.derivation",
            suite: Suite::Logic,
            description: "the bundled derivation is valid and its tampered variants are not",
            scale: once,
            run: logic_derivation,
        },
        Check {
            name: "logic.positivity",
            suite: Suite::Logic,
            description: "positive L_O conditions compile to monotonic properties; wd_g is not monotonic",
            scale: same,
            run: logic_positivity,
        },
    ];
    CHECKS
}

pub fn checks_for(sel: Selection) -> Vec<&'static Check> {
    catalogue()
        .iter()
        .filter(|c| sel == Selection::All || sel == Selection::One(c.suite))
        .collect()
}

pub fn find_check(name: &str) -> Option<&'static Check> {
    catalogue().iter().find(|c| c.name == name)
}

/// Replays a single instance.
pub fn run_instance(check: &Check, cfg: &SweepConfig, k: usize) -> Result<InstanceOutcome> {
    let mut rng = random::instance_rng(cfg.seed ^ name_hash(check.name), k);
    (check.run)(cfg, k, &mut rng)
}

// Gives each check its own stream family, so adding a check never shifts
// the instances of another. FNV-1a.
fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| {
        (h ^ b as u64).wrapping_mul(0x0100_0000_01b3)
    })
}

pub fn run_check(check: &Check, cfg: &SweepConfig) -> Result<CheckResult> {
    let n = (check.scale)(cfg.instances);
    let outcomes = par::map_range(cfg.budgets.parallelism, 0..n, |k| run_instance(check, cfg, k));
    let mut cases = 0;
    let mut failures = 0;
    let mut counterexample = None;
    for o in outcomes {
        match o? {
            InstanceOutcome::Pass(c) => cases += c,
            InstanceOutcome::Fail(cx) => {
                failures += 1;
                counterexample.get_or_insert(cx);
            }
        }
    }
    Ok(CheckResult {
        name: check.name,
        suite: check.suite,
        status: if failures == 0 { Status::Pass } else { Status::Fail },
        seed: cfg.seed,
        instances: n,
        cases,
        failures,
        counterexample,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub checks: Vec<CheckResult>,
    pub wall_ms: u128,
}

impl RunReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }
}

pub fn run_suites(sel: Selection, cfg: &SweepConfig, command: &str) -> Result<RunReport> {
    let start = Instant::now();
    let checks = checks_for(sel)
        .into_iter()
        .map(|c| run_check(c, cfg))
        .collect::<Result<Vec<_>>>()?;
    Ok(RunReport {
        command: command.to_string(),
        seed: cfg.seed,
        checks,
        wall_ms: start.elapsed().as_millis(),
    })
}

fn pass(cases: usize) -> Result<InstanceOutcome> {
    Ok(InstanceOutcome::Pass(cases))
}

fn fail(k: usize, g: &Game, m: Option<&EpistemicModel>, detail: impl Into<String>) -> Result<InstanceOutcome> {
    Ok(InstanceOutcome::Fail(Counterexample::new(k, g, m, detail)))
}

fn epist1_level(cfg: &SweepConfig, k: usize, rng: &mut SweepRng, level: Level) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let m = random::random_model(rng, &g, level, &cfg.models)?;
    let profiles = cfg.monotone_profiles(&g)?;
    for p in &profiles {
        let rep = epistemic::check_theorem_epist1(&m, p, &cfg.budgets)?;
        if let Some(w) = rep.violation {
            return fail(
                k,
                &g,
                Some(&m),
                format!("{}: state {} lies outside T^∞", p.label(), m.state_name(w)),
            );
        }
    }
    pass(profiles.len())
}

fn epist1_belief(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    epist1_level(cfg, k, rng, Level::Belief)
}

fn epist1_knowledge(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    epist1_level(cfg, k, rng, Level::Knowledge)
}

fn epist1_witness(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let profiles = cfg.monotone_profiles(&g)?;
    for p in &profiles {
        let m = construct_witness(p, &cfg.budgets)?;
        let rep = epistemic::check_theorem_epist1(&m, p, &cfg.budgets)?;
        if rep.lhs != rep.outcome || !rep.holds() {
            return fail(
                k,
                &g,
                Some(&m),
                format!(
                    "{}: G_(RAT & CB(RAT)) = {} but T^∞ = {}",
                    p.label(),
                    rep.lhs.display(&g),
                    rep.outcome.display(&g)
                ),
            );
        }
    }
    pass(profiles.len())
}

fn epist2_local(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    for b in Builtin::LOCAL {
        match epistemic::check_theorem_epist2(&PropertyProfile::uniform(&g, b)?, &cfg.budgets)? {
            Epist2Outcome::Ok => {}
            other => return fail(k, &g, None, format!("{b}: {other:?}")),
        }
    }
    pass(Builtin::LOCAL.len())
}

fn just_chain(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let br = PropertyProfile::uniform(&g, Builtin::BrG)?;
    let sdg = PropertyProfile::uniform(&g, Builtin::SdG)?;
    let sdl = PropertyProfile::uniform(&g, Builtin::SdL)?;
    let traces = [
        iterate_to_outcome(&br)?,
        iterate_to_outcome(&sdg)?,
        iterate_to_outcome(&sdl)?,
    ];
    let stages: Vec<&Restriction> = traces.iter().flat_map(|t| t.stages()).collect();
    for (a, b) in [(&br, &sdg), (&sdg, &sdl)] {
        if let Some(v) = stagewise_inclusion(a, b, stages.iter().copied())? {
            return fail(k, &g, None, format!("{} vs {}: {v:?}", a.label(), b.label()));
        }
    }
    if !traces[0].outcome().leq(traces[2].outcome())? {
        return fail(k, &g, None, "T^∞_br_g is not below T^∞_sd_l");
    }
    pass(stages.len())
}

fn just_common_belief(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let m = random::random_model(rng, &g, Level::Belief, &cfg.models)?;
    let br = PropertyProfile::uniform(&g, Builtin::BrG)?;
    let target = iterate_to_outcome(&PropertyProfile::uniform(&g, Builtin::SdL)?)?
        .outcome()
        .clone();
    let rat = m.rat_event(&br)?;
    let lhs = m.restriction_of_event(&rat.intersection(&m.common_box(&rat)?))?;
    if !lhs.leq(&target)? {
        return fail(
            k,
            &g,
            Some(&m),
            format!("{} is not below {}", lhs.display(&g), target.display(&g)),
        );
    }
    pass(1)
}

fn just_mixed(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.two_player_game(rng, 3);
    let m = random::random_model(rng, &g, Level::Knowledge, &cfg.models)?;
    let brc = PropertyProfile::uniform_with(&g, Builtin::BrG, BeliefClass::Correlated)?;
    let target = iterate_to_outcome(&PropertyProfile::uniform(&g, Builtin::MsdL)?)?
        .outcome()
        .clone();
    let lhs = m.restriction_of_event(&m.common_box(&m.rat_event(&brc)?)?)?;
    if !lhs.leq(&target)? {
        return fail(
            k,
            &g,
            Some(&m),
            format!("{} is not below {}", lhs.display(&g), target.display(&g)),
        );
    }
    pass(1)
}

fn just1_pearce(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.two_player_game(rng, 3);
    let brc = PropertyProfile::uniform(&g, Builtin::BrcL)?;
    let msd = PropertyProfile::uniform(&g, Builtin::MsdL)?;
    let total = g.total_strategies();
    cfg.budgets.check_restrictions(total)?;
    for code in 0..(1u64 << total) {
        let r = Restriction::from_code(&g, code);
        let (a, b) = (apply_t(&brc, &r)?, apply_t(&msd, &r)?);
        if a != b {
            return fail(
                k,
                &g,
                None,
                format!(
                    "at {}: brc_l gives {}, msd_l gives {}",
                    r.display(&g),
                    a.display(&g),
                    b.display(&g)
                ),
            );
        }
    }
    pass(1 << total)
}

fn just1_local_global(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    for (l, gl) in Builtin::PAIRS {
        let a = iterate_to_outcome(&PropertyProfile::uniform(&g, l)?)?;
        let b = iterate_to_outcome(&PropertyProfile::uniform(&g, gl)?)?;
        if a.outcome() != b.outcome() {
            return fail(
                k,
                &g,
                None,
                format!(
                    "T^∞_{l} = {} but T^∞_{gl} = {}",
                    a.outcome().display(&g),
                    b.outcome().display(&g)
                ),
            );
        }
    }
    pass(Builtin::PAIRS.len())
}

fn notes_characterizations(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let level = if k.is_multiple_of(2) {
        Level::Belief
    } else {
        Level::Knowledge
    };
    let m = random::random_model(rng, &g, level, &cfg.models)?;
    let e = random::random_event(rng, m.num_states());
    let rep = check_fixed_point_characterizations(&m, &e, &cfg.budgets, 1000, rng)?;
    match rep.mismatch {
        Some(why) => fail(k, &g, Some(&m), format!("event {}: {why}", m.display_event(&e))),
        None => pass(1),
    }
}

fn notes_proper(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let r = random::random_restriction(rng, &g, true);
    let corr = if k.is_multiple_of(2) {
        StandardCorrespondences::None
    } else {
        StandardCorrespondences::OwnStrategy
    };
    let m = standard_model(&g, &r, corr, &cfg.budgets)?;
    let events: Vec<Event> = (0..g.num_players())
        .map(|i| {
            let keep: Vec<usize> = r.strategies(i).filter(|_| rng.gen_bool(0.7)).collect();
            m.event((0..m.num_states()).filter(|&w| keep.contains(&m.assignment(w, i))))
        })
        .collect();
    let eff = effect(&m, &events)?;
    let expected = standard_model(&g, &m.restriction_of(&events)?, corr, &cfg.budgets)?;
    if !eff.model.same_structure(&expected) {
        return fail(
            k,
            &g,
            Some(&m),
            "effect of a proper announcement is not the standard model of G_Ē",
        );
    }
    pass(1)
}

use rand::Rng;

fn notes_optimality_events(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let r = random::random_restriction(rng, &g, true);
    let b = Builtin::ALL[k % Builtin::ALL.len()];
    let p = PropertyProfile::uniform(&g, b)?;
    let m = standard_model(&g, &r, StandardCorrespondences::None, &cfg.budgets)?;
    let events = p
        .properties()
        .iter()
        .map(|phi| m.optimality_event(phi, &r))
        .collect::<Result<Vec<_>>>()?;
    let lhs = apply_t(&p, &r)?;
    let rhs = m.restriction_of(&events)?;
    // With some T(G)_i empty the events intersect to nothing and the whole
    // induced restriction collapses; compare componentwise in that case.
    let agrees = if lhs.has_empty_component() {
        (0..g.num_players()).all(|i| {
            let own: Vec<usize> = events[i].iter().map(|w| m.assignment(w, i)).collect();
            lhs.strategies(i).all(|s| own.contains(&s)) && own.iter().all(|&s| lhs.contains(i, s))
        })
    } else {
        lhs == rhs
    };
    if !agrees {
        return fail(
            k,
            &g,
            Some(&m),
            format!(
                "{b} at {}: T(G) = {} but events give {}",
                r.display(&g),
                lhs.display(&g),
                rhs.display(&g)
            ),
        );
    }
    pass(1)
}

fn notes_tarski(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let profiles = cfg.monotone_profiles(&g)?;
    for p in &profiles {
        let lfp = largest_fixpoint_via_postfixpoints(p, &cfg.budgets)?;
        let out = iterate_to_outcome(p)?;
        if &lfp != out.outcome() {
            return fail(
                k,
                &g,
                None,
                format!(
                    "{}: post-fixpoint union {} but T^∞ {}",
                    p.label(),
                    lfp.display(&g),
                    out.outcome().display(&g)
                ),
            );
        }
    }
    pass(profiles.len())
}

fn announce_optimality(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    for b in Builtin::ALL {
        let p = PropertyProfile::uniform(&g, b)?;
        let trace = iterate_optimality_announcements(&p, &cfg.budgets)?;
        let out = iterate_to_outcome(&p)?;
        let expected = standard_model(&g, out.outcome(), StandardCorrespondences::None, &cfg.budgets)?;
        if !trace.terminal().same_structure(&expected) {
            return fail(
                k,
                &g,
                Some(trace.terminal()),
                format!("{b}: terminal model is not the standard model of T^∞"),
            );
        }
    }
    pass(Builtin::ALL.len())
}

fn announce_rationality(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    for (l, gl) in Builtin::PAIRS {
        let trace = iterate_rationality_announcements(&PropertyProfile::uniform(&g, gl)?, &cfg.budgets)?;
        for target in [gl, l] {
            let out = iterate_to_outcome(&PropertyProfile::uniform(&g, target)?)?;
            let expected = standard_model(&g, out.outcome(), StandardCorrespondences::OwnStrategy, &cfg.budgets)?;
            if !trace.terminal().same_structure(&expected) {
                return fail(
                    k,
                    &g,
                    Some(trace.terminal()),
                    format!("{gl}: terminal model is not the standard knowledge model of T^∞_{target}"),
                );
            }
        }
        let local = iterate_rationality_announcements(&PropertyProfile::uniform(&g, l)?, &cfg.budgets)?;
        if local.len() != 1 || !local.terminal().same_structure(&local.models[0]) {
            return fail(
                k,
                &g,
                Some(local.terminal()),
                format!("{l}: rationality announcements changed the model"),
            );
        }
    }
    pass(2 * Builtin::PAIRS.len())
}

fn logic_common_belief_formula(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let m = random::random_model(rng, &g, Level::Belief, &cfg.models)?;
    let p = PropertyProfile::uniform(&g, Builtin::SdG)?;
    let ev = LnuEvaluator::new(&m, &p, cfg.budgets)?;
    for _ in 0..cfg.formulas_per_model {
        let psi = random::random_lnu(rng, g.num_players(), 3, true);
        let inner = ev.eval(&psi, None)?;
        let body = Lnu::square(None, Lnu::and(Lnu::Var, psi.clone()));
        let nu = ev.eval(&Lnu::nu(body.clone()), None)?;
        let cb = m.common_box(&inner)?;
        if nu != cb {
            return fail(
                k,
                &g,
                Some(&m),
                format!(
                    "psi = {psi}: nu gives {}, B* gives {}",
                    m.display_event(&nu),
                    m.display_event(&cb)
                ),
            );
        }
        if cfg.budgets.check_events(m.num_states()).is_ok() && ev.nu_by_postfixpoints(&body)? != nu {
            return fail(
                k,
                &g,
                Some(&m),
                format!("psi = {psi}: iteration and post-fixpoint union disagree"),
            );
        }
    }
    pass(cfg.formulas_per_model)
}

fn logic_formula3(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let m = random::random_model(rng, &g, Level::Belief, &cfg.models)?;
    let f = Lnu::formula3();
    let profiles = cfg.monotone_profiles(&g)?;
    for p in &profiles {
        crate::optimality::require_monotonic(p, &cfg.budgets)?;
        let e = eval_lnu(&m, p, &f, None, &cfg.budgets)?;
        if !e.is_full() {
            return fail(
                k,
                &g,
                Some(&m),
                format!("{}: formula fails at {}", p.label(), m.display_event(&e.complement())),
            );
        }
    }
    pass(profiles.len())
}

/// Edits of the bundled derivation, each of which must break it.
pub fn tampered_derivations() -> Vec<(&'static str, String)> {
    let base = FORMULA3_DERIVATION;
    let edits: [(&str, &str, &str); 10] = [
        ("premise dropped", "from=1,2", "from=1"),
        ("wrong nuInd premise", "nuInd from=3", "nuInd from=2"),
        ("substitution changed", "chi=CB(rat) & rat", "chi=rat"),
        ("nuInd body changed", "psi=O x", "psi=Box x"),
        ("nuDis conclusion weakened", "-> Box(CB(rat) & rat)", "-> Box(rat)"),
        ("prop conclusion changed", "-> O(CB(rat) & rat)", "-> O(rat)"),
        ("axiom swapped", "axiom ratDis", "axiom nuDis"),
        ("nuDis body changed", "psi=Box(x & rat)", "psi=Box(x | rat)"),
        (
            "antecedent weakened",
            "prop from=1,2 conclude=CB(rat) & rat",
            "prop from=1,2 conclude=CB(rat)",
        ),
        (
            "rule replaced",
            "nuInd from=3 chi=CB(rat) & rat psi=O x",
            "prop from=3 conclude=CB(rat) & rat -> nu x. O x",
        ),
    ];
    edits
        .iter()
        .map(|(what, from, to)| {
            assert!(base.contains(from), "edit `{what}` does not apply");
            (*what, base.replacen(from, to, 1))
        })
        .collect()
}

fn logic_derivation(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let d = Derivation::parse(FORMULA3_DERIVATION)?;
    let Verdict::Valid(conclusion) = d.check() else {
        return fail(k, &g, None, format!("bundled derivation: {}", d.check()));
    };
    for (what, text) in tampered_derivations() {
        // A tampered file may also fail to parse; that counts as invalid.
        if let Ok(t) = Derivation::parse(&text) {
            if let Verdict::Valid(_) = t.check() {
                return fail(k, &g, None, format!("tampered derivation ({what}) verified"));
            }
        }
    }
    if !matches!(Derivation::parse("")?.check(), Verdict::InvalidStep(0, _)) {
        return fail(k, &g, None, "empty derivation verified");
    }
    // Soundness on one random model.
    let m = random::random_model(rng, &g, Level::Belief, &cfg.models)?;
    let p = PropertyProfile::uniform(&g, Builtin::SdG)?;
    if !eval_lnu(&m, &p, &conclusion, None, &cfg.budgets)?.is_full() {
        return fail(k, &g, Some(&m), format!("derived `{conclusion}` fails on a model"));
    }
    pass(12)
}

/// Positive optimality conditions for a 1-based player.
pub fn positive_conditions(player: usize) -> Vec<String> {
    let i = player;
    vec![
        standard_condition("sd_g", i).expect("known"),
        standard_condition("br_g", i).expect("known"),
        format!("exists z in X exists y in X x >=^{i}_z y"),
        format!("(forall y exists z in X x >=^{i}_z y) & exists z in X forall y x >=^{i}_z y"),
        format!("forall y (exists z in X x >^{i}_z y | exists z in X x >=^{i}_z y)"),
    ]
}

fn logic_positivity(cfg: &SweepConfig, k: usize, rng: &mut SweepRng) -> Result<InstanceOutcome> {
    let g = cfg.game(rng);
    let mut cases = 0;
    for i in 0..g.num_players() {
        for text in positive_conditions(i + 1) {
            let f = parse_lo(&text)?;
            if !f.is_positive() {
                return fail(k, &g, None, format!("`{text}` is not syntactically positive"));
            }
            let phi = compile_lo_to_property(&f, i, &g, &text, &cfg.budgets)?;
            if let Monotonicity::CounterExample {
                strategy,
                smaller,
                larger,
            } = is_monotonic_on(&phi, &cfg.budgets)?
            {
                return fail(
                    k,
                    &g,
                    None,
                    format!(
                        "`{text}` for player {}: {} holds at {} but not at {}",
                        i + 1,
                        g.strategy_name(i, strategy),
                        smaller.display(&g),
                        larger.display(&g)
                    ),
                );
            }
            cases += 1;
        }
    }
    let w = Arc::new(fixtures::wd_nonmonotonic());
    let wd = OptimalityProperty::builtin(&w, Builtin::WdG, 0)?;
    if is_monotonic_on(&wd, &cfg.budgets)? == Monotonicity::Monotonic {
        return fail(k, &w, None, "wd_g is monotonic on the stored witness game");
    }
    pass(cases + 1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(instances: usize) -> SweepConfig {
        SweepConfig {
            seed: 1,
            instances,
            formulas_per_model: 3,
            ..SweepConfig::default()
        }
    }

    #[test]
    fn selection_parses() {
        assert_eq!("all".parse::<Selection>().unwrap(), Selection::All);
        assert_eq!("just1".parse::<Selection>().unwrap(), Selection::One(Suite::Just1));
        assert!(matches!("nope".parse::<Selection>(), Err(Error::UnknownSuite(_))));
        assert!(catalogue().len() >= 10);
        for s in Suite::ALL {
            assert!(!checks_for(Selection::One(s)).is_empty(), "{s}");
        }
    }

    #[test]
    fn tampered_derivations_are_rejected() {
        let cfg = small(1);
        let c = find_check("logic.derivation").unwrap();
        assert_eq!(run_check(c, &cfg).unwrap().status, Status::Pass);
        assert_eq!(tampered_derivations().len(), 10);
    }

    #[test]
    fn a_few_instances_of_each_check_pass() {
        let cfg = small(3);
        for c in catalogue() {
            let r = run_check(c, &cfg).unwrap();
            assert_eq!(r.status, Status::Pass, "{}: {:?}", c.name, r.counterexample);
        }
    }

    #[test]
    fn reports_do_not_depend_on_threading() {
        let cfg = small(4);
        let seq = SweepConfig {
            budgets: cfg.budgets.sequential(),
            ..cfg.clone()
        };
        let c = find_check("epist1.belief").unwrap();
        assert_eq!(run_check(c, &cfg).unwrap(), run_check(c, &seq).unwrap());
    }

    #[test]
    fn guard_refuses_non_monotonic_override() {
        let cfg = SweepConfig {
            property: Some(Builtin::WdG),
            ..small(30)
        };
        let c = find_check("epist1.belief").unwrap();
        assert!(matches!(run_check(c, &cfg), Err(Error::NonMonotonic { .. })));
    }
}
