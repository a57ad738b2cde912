//! Public announcements: their effect on models, proper announcements on
//! standard models, and iterated optimality and rationality announcements.

use std::fmt;

use crate::config::Budgets;
use crate::epistemic::{standard_model, EpistemicModel, Event, StandardCorrespondences};
use crate::error::{Error, Result};
use crate::game::{Game, Restriction};
use crate::optimality::{self, ConditionA, OptimalityProperty, PropertyProfile};

/// The result of `[Ē](M)`.
#[derive(Debug, Clone)]
pub struct Effect {
    pub model: EpistemicModel,
    /// Indices (in the old model) of states that lay in `⋂E_i` but were
    /// dropped because some restricted `P_i(ω)` became empty.
    pub dropped: Vec<usize>,
    /// `G_Ē`, computed in the old model.
    pub target: Restriction,
    /// The new model is empty or its states do not cover `G_Ē`.
    pub not_a_model_of_target: bool,
}

/// Restricts `M` to `⋂E_i`; correspondences are intersected with the new
/// state set, and states whose possibility set becomes empty are removed
/// until none remain.
pub fn effect(model: &EpistemicModel, events: &[Event]) -> Result<Effect> {
    let n = model.game().num_players();
    if events.len() != n {
        return Err(Error::ProfileLength {
            expected: n,
            got: events.len(),
        });
    }
    let target = model.restriction_of(events)?;
    let mut keep = model.omega();
    for e in events {
        keep = keep.intersection(e);
    }
    let mut dropped = Vec::new();
    if let Some(ps) = model.correspondences() {
        loop {
            let bad: Vec<usize> = keep
                .iter()
                .filter(|&w| ps.iter().any(|p| p[w].intersection(&keep).is_empty()))
                .collect();
            if bad.is_empty() {
                break;
            }
            for w in bad {
                keep.remove(w);
                dropped.push(w);
            }
        }
    }
    dropped.sort_unstable();
    let new_model = submodel(model, &keep)?;
    let covered = new_model.restriction_of_event(&new_model.omega())?;
    let not_a_model_of_target = new_model.num_states() == 0 || covered != target;
    Ok(Effect {
        model: new_model,
        dropped,
        target,
        not_a_model_of_target,
    })
}

fn submodel(model: &EpistemicModel, keep: &Event) -> Result<EpistemicModel> {
    let old: Vec<usize> = keep.iter().collect();
    let k = old.len();
    let names = old.iter().map(|&w| model.state_name(w).to_string()).collect();
    let assignments = old.iter().map(|&w| model.profile(w).to_vec()).collect();
    let ps = model.correspondences().map(|ps| {
        ps.iter()
            .map(|p| {
                old.iter()
                    .map(|&w| Event::from_states(k, (0..k).filter(|&j| p[w].contains(old[j]))))
                    .collect()
            })
            .collect()
    });
    EpistemicModel::new(model.game(), names, assignments, ps, model.level())
}

/// Is `E` a cylinder `G_1 × ... × G'_i × ... × G_n` in a standard model?
pub fn is_proper(model: &EpistemicModel, e: &Event, player: usize) -> Result<bool> {
    if !model.is_standard() {
        return Err(Error::NotStandard);
    }
    model.game().check_player(player)?;
    model.check_event(e)?;
    let own = model.restriction_of_event(e)?;
    Ok((0..model.num_states()).all(|w| e.contains(w) == own.contains(player, model.assignment(w, player))))
}

/// `⟨φ_i⟩ = {ω | φ_i(s̄_i(ω), G)}`
pub fn optimality_event(model: &EpistemicModel, phi: &OptimalityProperty, r: &Restriction) -> Result<Event> {
    model.optimality_event(phi, r)
}

/// `⟨φ_i⟩_rat = {ω | φ_i(s̄_i(ω), G_{P_i(ω)})}`
pub fn rationality_event(model: &EpistemicModel, phi: &OptimalityProperty) -> Result<Event> {
    model.rat_event_player(phi)
}

#[derive(Debug, Clone)]
pub struct AnnouncementTrace {
    /// `M^0, M^1, ...`, each strictly smaller than the one before; the last
    /// is a fixpoint of the announcement step.
    pub models: Vec<EpistemicModel>,
    /// The vector announced in each model, including the final one whose
    /// effect changed nothing.
    pub announcements: Vec<Vec<Event>>,
    /// States dropped for empty possibility sets, per round.
    pub dropped: Vec<Vec<usize>>,
    pub warnings: Vec<String>,
}

impl AnnouncementTrace {
    pub fn terminal(&self) -> &EpistemicModel {
        self.models.last().expect("trace holds the initial model")
    }

    /// Number of distinct models visited.
    pub fn len(&self) -> usize {
        self.models.len()
    }

    pub fn is_empty(&self) -> bool {
        self.models.is_empty()
    }

    pub fn display<'a>(&'a self, g: &'a Game) -> TraceDisplay<'a> {
        TraceDisplay { trace: self, g }
    }
}

pub struct TraceDisplay<'a> {
    trace: &'a AnnouncementTrace,
    g: &'a Game,
}

impl fmt::Display for TraceDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, (m, ann)) in self.trace.models.iter().zip(&self.trace.announcements).enumerate() {
            let cylinders: Vec<String> = ann
                .iter()
                .enumerate()
                .map(|(i, e)| {
                    let names: Vec<&str> = m
                        .restriction_of_event(e)
                        .map(|r| r.strategies(i).map(|s| self.g.strategy_name(i, s)).collect())
                        .unwrap_or_default();
                    format!("{{{}}}", names.join(","))
                })
                .collect();
            writeln!(
                f,
                "round {k}: states {} announce {}",
                m.num_states(),
                cylinders.join(" | ")
            )?;
        }
        Ok(())
    }
}

fn iterate(
    start: EpistemicModel,
    warnings: Vec<String>,
    mut announce: impl FnMut(&EpistemicModel) -> Result<Vec<Event>>,
) -> Result<AnnouncementTrace> {
    let mut trace = AnnouncementTrace {
        models: vec![start],
        announcements: Vec::new(),
        dropped: Vec::new(),
        warnings,
    };
    loop {
        let current = trace.terminal();
        let before = current.num_states();
        let events = announce(current)?;
        let eff = effect(current, &events)?;
        trace.announcements.push(events);
        if eff.model.num_states() == before {
            return Ok(trace);
        }
        trace.dropped.push(eff.dropped);
        trace.models.push(eff.model);
    }
}

/// Starting from the standard model of `H`, every player announces
/// `⟨φ_i⟩` with respect to the current model's restriction until nothing
/// changes.
pub fn iterate_optimality_announcements(profile: &PropertyProfile, budgets: &Budgets) -> Result<AnnouncementTrace> {
    let g = profile.game();
    let start = standard_model(g, &Restriction::full(g), StandardCorrespondences::None, budgets)?;
    iterate(start, Vec::new(), |m| {
        let r = m.restriction_of_event(&m.omega())?;
        profile
            .properties()
            .iter()
            .map(|phi| m.optimality_event(phi, &r))
            .collect()
    })
}

/// Starting from the standard knowledge model of `H`, every player
/// announces `⟨φ_i⟩_rat` until nothing changes. Properties failing
/// condition A are run anyway with a warning.
pub fn iterate_rationality_announcements(profile: &PropertyProfile, budgets: &Budgets) -> Result<AnnouncementTrace> {
    let g = profile.game();
    let mut warnings = Vec::new();
    for phi in profile.properties() {
        match optimality::condition_a(phi, budgets) {
            Ok(ConditionA::Holds) => {}
            Ok(ConditionA::CounterExample { .. }) => warnings.push(format!(
                "{} for player {} fails condition A (local property: identity announcements)",
                phi.name(),
                phi.player() + 1
            )),
            Err(Error::BudgetExceeded { .. }) => warnings.push(format!(
                "condition A not checked for {} (player {}): over the restriction budget",
                phi.name(),
                phi.player() + 1
            )),
            Err(e) => return Err(e),
        }
    }
    let start = standard_model(g, &Restriction::full(g), StandardCorrespondences::OwnStrategy, budgets)?;
    let mut trace = iterate(start, warnings, |m| {
        profile.properties().iter().map(|phi| m.rat_event_player(phi)).collect()
    })?;
    if trace.dropped.iter().any(|d| !d.is_empty()) {
        trace
            .warnings
            .push("states were dropped for empty possibility sets".to_string());
    }
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::epistemic::Level;
    use crate::fixtures::{fig2, pd, three_by_two};
    use crate::operators::iterate_to_outcome;
    use crate::optimality::Builtin;

    #[test]
    fn figure_two_is_flagged() {
        let g = Arc::new(fig2());
        let m = EpistemicModel::new(
            &g,
            vec!["w_ul".into(), "w_dr".into()],
            vec![vec![0, 0], vec![1, 1]],
            None,
            Level::Bare,
        )
        .unwrap();
        let eff = effect(&m, &[m.event([0]), m.event([1])]).unwrap();
        assert_eq!(eff.model.num_states(), 0);
        assert!(eff.not_a_model_of_target);
        assert_eq!(eff.target, Restriction::from_names(&g, &[&["U"], &["R"]]).unwrap());
        assert!(matches!(is_proper(&m, &m.event([0]), 0), Err(Error::NotStandard)));
        let same = effect(&m, &[m.omega(), m.omega()]).unwrap();
        assert!(same.model.same_structure(&m));
    }

    #[test]
    fn proper_announcements_on_pd() {
        let g = Arc::new(pd());
        let b = Budgets::default();
        let m = standard_model(&g, &Restriction::full(&g), StandardCorrespondences::None, &b).unwrap();
        assert!(is_proper(&m, &m.omega(), 0).unwrap());
        let c1 = m.event([0, 1]);
        assert!(is_proper(&m, &c1, 0).unwrap());
        assert!(!is_proper(&m, &c1, 1).unwrap());
        let eff = effect(&m, &[m.event([2, 3]), m.event([1, 3])]).unwrap();
        assert_eq!(eff.model.num_states(), 1);
        assert!(!eff.not_a_model_of_target);
        let sd_g = OptimalityProperty::builtin(&g, Builtin::SdG, 0).unwrap();
        let e = optimality_event(&m, &sd_g, &Restriction::full(&g)).unwrap();
        assert_eq!(e, m.event([2, 3]));
    }

    #[test]
    fn iterations_on_pd() {
        let g = Arc::new(pd());
        let b = Budgets::default();
        let sd_l = PropertyProfile::uniform(&g, Builtin::SdL).unwrap();
        let t = iterate_optimality_announcements(&sd_l, &b).unwrap();
        assert_eq!(t.len(), 2);
        assert_eq!(t.terminal().state_names(), ["(D,D)"]);

        let r = iterate_rationality_announcements(&sd_l, &b).unwrap();
        assert_eq!(r.len(), 1);
        assert!(r
            .warnings
            .iter()
            .any(|w| w.contains("local property: identity announcements")));

        let sd_g = PropertyProfile::uniform(&g, Builtin::SdG).unwrap();
        let r = iterate_rationality_announcements(&sd_g, &b).unwrap();
        assert!(r.warnings.is_empty());
        assert_eq!(r.terminal().state_names(), ["(D,D)"]);
        assert_eq!(r.terminal().possibility(0, 0).unwrap(), &r.terminal().omega());
        assert!(r.terminal().has_standard_correspondences());
    }

    #[test]
    fn non_monotonic_iteration_matches_elimination() {
        let g = Arc::new(three_by_two());
        let b = Budgets::default();
        let p = PropertyProfile::uniform(&g, Builtin::MwdG).unwrap();
        let t = iterate_optimality_announcements(&p, &b).unwrap();
        let out = iterate_to_outcome(&p).unwrap();
        let expected = standard_model(&g, out.outcome(), StandardCorrespondences::None, &b).unwrap();
        assert!(t.terminal().same_structure(&expected));
        assert_eq!(t.terminal().state_names(), expected.state_names());
    }
}
