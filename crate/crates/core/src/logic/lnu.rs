//! The modal fixpoint language: rationality constants, belief boxes, the
//! optimality modality `O`, one set variable `x` with its `νx` binder, and
//! a second-order extension with quantified set variables `X`.

use std::fmt;

use crate::config::Budgets;
use crate::epistemic::{EpistemicModel, Event};
use crate::error::{Error, Result};
use crate::logic::lexer::{err, split_indexed, Cursor, Tok};
use crate::optimality::PropertyProfile;

/// Player indices are 0-based; `None` is the conjunction over all players.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lnu {
    Rat(Option<usize>),
    And(Box<Lnu>, Box<Lnu>),
    Not(Box<Lnu>),
    Square(Option<usize>, Box<Lnu>),
    O(Option<usize>, Box<Lnu>),
    /// The set variable `x`.
    Var,
    /// `νx.ψ`
    Nu(Box<Lnu>),
    /// A second-order set variable.
    SetVar(String),
    ExistsSet(String, Box<Lnu>),
}

impl Lnu {
    pub fn rat() -> Lnu {
        Lnu::Rat(None)
    }

    pub fn and(a: Lnu, b: Lnu) -> Lnu {
        Lnu::And(Box::new(a), Box::new(b))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Lnu) -> Lnu {
        Lnu::Not(Box::new(a))
    }

    pub fn or(a: Lnu, b: Lnu) -> Lnu {
        Lnu::not(Lnu::and(Lnu::not(a), Lnu::not(b)))
    }

    pub fn implies(a: Lnu, b: Lnu) -> Lnu {
        Lnu::not(Lnu::and(a, Lnu::not(b)))
    }

    pub fn iff(a: Lnu, b: Lnu) -> Lnu {
        Lnu::and(Lnu::implies(a.clone(), b.clone()), Lnu::implies(b, a))
    }

    pub fn square(player: Option<usize>, a: Lnu) -> Lnu {
        Lnu::Square(player, Box::new(a))
    }

    pub fn o(player: Option<usize>, a: Lnu) -> Lnu {
        Lnu::O(player, Box::new(a))
    }

    pub fn nu(body: Lnu) -> Lnu {
        Lnu::Nu(Box::new(body))
    }

    /// `□*ψ := νx.□(x ∧ ψ)`
    pub fn cb(psi: Lnu) -> Lnu {
        Lnu::nu(Lnu::square(None, Lnu::and(Lnu::Var, psi)))
    }

    pub fn forall_set(name: &str, body: Lnu) -> Lnu {
        Lnu::not(Lnu::ExistsSet(name.to_string(), Box::new(Lnu::not(body))))
    }

    /// `(rat ∧ □*rat) → νx.Ox`
    pub fn formula3() -> Lnu {
        Lnu::implies(
            Lnu::and(Lnu::rat(), Lnu::cb(Lnu::rat())),
            Lnu::nu(Lnu::o(None, Lnu::Var)),
        )
    }

    /// `rat_i ↔ ∀X(□_i X → O_i X)`
    pub fn rat_definition(player: usize) -> Lnu {
        let x = || Lnu::SetVar("X".into());
        Lnu::iff(
            Lnu::Rat(Some(player)),
            Lnu::forall_set(
                "X",
                Lnu::implies(Lnu::square(Some(player), x()), Lnu::o(Some(player), x())),
            ),
        )
    }

    /// Does `x` occur free?
    pub fn has_free_var(&self) -> bool {
        match self {
            Lnu::Var => true,
            Lnu::Rat(_) | Lnu::SetVar(_) | Lnu::Nu(_) => false,
            Lnu::And(a, b) => a.has_free_var() || b.has_free_var(),
            Lnu::Not(a) | Lnu::Square(_, a) | Lnu::O(_, a) | Lnu::ExistsSet(_, a) => a.has_free_var(),
        }
    }

    pub fn contains_nu(&self) -> bool {
        match self {
            Lnu::Nu(_) => true,
            Lnu::Rat(_) | Lnu::SetVar(_) | Lnu::Var => false,
            Lnu::And(a, b) => a.contains_nu() || b.contains_nu(),
            Lnu::Not(a) | Lnu::Square(_, a) | Lnu::O(_, a) | Lnu::ExistsSet(_, a) => a.contains_nu(),
        }
    }

    /// Every free occurrence of `x` is under an even number of negations.
    pub fn is_positive_in_var(&self) -> bool {
        fn go(f: &Lnu, negs: usize) -> bool {
            match f {
                Lnu::Var => negs.is_multiple_of(2),
                Lnu::Rat(_) | Lnu::SetVar(_) | Lnu::Nu(_) => true,
                Lnu::And(a, b) => go(a, negs) && go(b, negs),
                Lnu::Not(a) => go(a, negs + 1),
                Lnu::Square(_, a) | Lnu::O(_, a) | Lnu::ExistsSet(_, a) => go(a, negs),
            }
        }
        go(self, 0)
    }

    /// `ψ[x ↦ χ]`, replacing free occurrences only.
    pub fn substitute(&self, chi: &Lnu) -> Lnu {
        match self {
            Lnu::Var => chi.clone(),
            Lnu::Rat(_) | Lnu::SetVar(_) | Lnu::Nu(_) => self.clone(),
            Lnu::And(a, b) => Lnu::and(a.substitute(chi), b.substitute(chi)),
            Lnu::Not(a) => Lnu::not(a.substitute(chi)),
            Lnu::Square(i, a) => Lnu::square(*i, a.substitute(chi)),
            Lnu::O(i, a) => Lnu::o(*i, a.substitute(chi)),
            Lnu::ExistsSet(n, a) => Lnu::ExistsSet(n.clone(), Box::new(a.substitute(chi))),
        }
    }

    /// Checks that every `νx` body is positive in `x` and `ν`-free.
    pub fn check_well_formed(&self) -> Result<(), String> {
        match self {
            Lnu::Nu(body) => {
                if body.contains_nu() {
                    return Err("nested nu: the body of nu x must be nu-free".into());
                }
                if !body.is_positive_in_var() {
                    return Err("nu body is not positive in x (odd number of negations above x)".into());
                }
                Ok(())
            }
            Lnu::Rat(_) | Lnu::SetVar(_) | Lnu::Var => Ok(()),
            Lnu::And(a, b) => a.check_well_formed().and_then(|_| b.check_well_formed()),
            Lnu::Not(a) | Lnu::Square(_, a) | Lnu::O(_, a) | Lnu::ExistsSet(_, a) => a.check_well_formed(),
        }
    }

    /// Largest player index mentioned, if any.
    pub fn max_player(&self) -> Option<usize> {
        match self {
            Lnu::Rat(i) => *i,
            Lnu::Var | Lnu::SetVar(_) => None,
            Lnu::And(a, b) => a.max_player().max(b.max_player()),
            Lnu::Not(a) | Lnu::Nu(a) | Lnu::ExistsSet(_, a) => a.max_player(),
            Lnu::Square(i, a) | Lnu::O(i, a) => (*i).max(a.max_player()),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            Lnu::Rat(_) | Lnu::Var | Lnu::SetVar(_) => 1,
            Lnu::And(a, b) => 1 + a.size() + b.size(),
            Lnu::Not(a) | Lnu::Nu(a) | Lnu::ExistsSet(_, a) | Lnu::Square(_, a) | Lnu::O(_, a) => 1 + a.size(),
        }
    }
}

pub fn parse_lnu(text: &str) -> Result<Lnu> {
    let mut c = Cursor::new(text)?;
    if c.at_end() {
        return Err(err(1, "empty formula"));
    }
    let f = parse_iff(&mut c)?;
    c.finish()?;
    Ok(f)
}

fn parse_iff(c: &mut Cursor) -> Result<Lnu> {
    let mut f = parse_imp(c)?;
    while c.eat(&Tok::Iff) {
        let g = parse_imp(c)?;
        f = Lnu::iff(f, g);
    }
    Ok(f)
}

fn parse_imp(c: &mut Cursor) -> Result<Lnu> {
    let f = parse_or(c)?;
    if c.eat(&Tok::Arrow) {
        let g = parse_imp(c)?;
        return Ok(Lnu::implies(f, g));
    }
    Ok(f)
}

fn parse_or(c: &mut Cursor) -> Result<Lnu> {
    let mut f = parse_and(c)?;
    while c.eat(&Tok::Or) {
        f = Lnu::or(f, parse_and(c)?);
    }
    Ok(f)
}

fn parse_and(c: &mut Cursor) -> Result<Lnu> {
    let mut f = parse_unary(c)?;
    while c.eat(&Tok::And) {
        f = Lnu::and(f, parse_unary(c)?);
    }
    Ok(f)
}

fn player_index(pos: usize, digits: Option<&str>) -> Result<Option<usize>> {
    match digits {
        None => Ok(None),
        Some(d) => match d.parse::<usize>() {
            Ok(i) if i >= 1 => Ok(Some(i - 1)),
            _ => Err(err(pos, format!("bad player index `{d}`"))),
        },
    }
}

fn is_set_var(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase())
        && !matches!(name, "CB" | "O")
        && split_indexed(name, "Box").is_none()
        && split_indexed(name, "O").is_none()
}

fn parse_unary(c: &mut Cursor) -> Result<Lnu> {
    let pos = c.pos();
    match c.peek().cloned() {
        Some(Tok::Not) => {
            c.next();
            Ok(Lnu::not(parse_unary(c)?))
        }
        Some(Tok::Ident(id)) => {
            if let Some(idx) = split_indexed(&id, "Box") {
                c.next();
                let i = player_index(pos, idx)?;
                return Ok(Lnu::square(i, parse_unary(c)?));
            }
            if let Some(idx) = split_indexed(&id, "O") {
                c.next();
                let i = player_index(pos, idx)?;
                return Ok(Lnu::o(i, parse_unary(c)?));
            }
            match id.as_str() {
                "nu" => {
                    c.next();
                    match c.next() {
                        Some(Tok::Ident(v)) if v == "x" => {}
                        _ => return Err(err(pos, "expected `nu x.`: the only fixpoint variable is x")),
                    }
                    c.expect(&Tok::Dot, "`.` after `nu x`")?;
                    let body = parse_iff(c)?;
                    let f = Lnu::nu(body);
                    f.check_well_formed().map_err(|m| err(pos, m))?;
                    Ok(f)
                }
                "forall" | "exists" => {
                    c.next();
                    let vpos = c.pos();
                    let name = match c.next() {
                        Some(Tok::Ident(v)) if is_set_var(&v) => v,
                        _ => return Err(err(vpos, "expected a set variable (capitalised name)")),
                    };
                    let body = parse_iff(c)?;
                    Ok(if id == "forall" {
                        Lnu::forall_set(&name, body)
                    } else {
                        Lnu::ExistsSet(name, Box::new(body))
                    })
                }
                _ => parse_atom(c),
            }
        }
        _ => parse_atom(c),
    }
}

fn parse_atom(c: &mut Cursor) -> Result<Lnu> {
    let pos = c.pos();
    match c.next() {
        Some(Tok::LParen) => {
            let f = parse_iff(c)?;
            c.expect(&Tok::RParen, "`)`")?;
            Ok(f)
        }
        Some(Tok::Ident(id)) => {
            if id == "x" {
                return Ok(Lnu::Var);
            }
            if id == "CB" {
                c.expect(&Tok::LParen, "`(` after CB")?;
                let f = parse_iff(c)?;
                c.expect(&Tok::RParen, "`)`")?;
                if f.has_free_var() {
                    return Err(err(pos, "the argument of CB must not mention x"));
                }
                let cb = Lnu::cb(f);
                cb.check_well_formed().map_err(|m| err(pos, m))?;
                return Ok(cb);
            }
            if let Some(idx) = split_indexed(&id, "rat") {
                return Ok(Lnu::Rat(player_index(pos, idx)?));
            }
            if is_set_var(&id) {
                return Ok(Lnu::SetVar(id));
            }
            Err(err(pos, format!("unknown identifier `{id}`")))
        }
        Some(_) => Err(err(pos, "expected a formula")),
        None => Err(err(pos, "unexpected end of formula")),
    }
}

fn idx(i: &Option<usize>) -> String {
    i.map_or(String::new(), |i| format!("_{}", i + 1))
}

impl Lnu {
    fn fmt_prec(&self, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // 0: implication, 1: disjunction, 2: conjunction, 3: unary
        let wrap = |f: &mut fmt::Formatter<'_>, level: u8, body: &dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result| {
            if prec > level {
                f.write_str("(")?;
                body(f)?;
                f.write_str(")")
            } else {
                body(f)
            }
        };
        match self {
            Lnu::Not(inner) => match inner.as_ref() {
                Lnu::And(a, b) => match (a.as_ref(), b.as_ref()) {
                    (Lnu::Not(na), Lnu::Not(nb)) => wrap(f, 1, &|f| {
                        na.fmt_prec(2, f)?;
                        f.write_str(" | ")?;
                        nb.fmt_prec(2, f)
                    }),
                    (_, Lnu::Not(nb)) => wrap(f, 0, &|f| {
                        a.fmt_prec(1, f)?;
                        f.write_str(" -> ")?;
                        nb.fmt_prec(0, f)
                    }),
                    _ => {
                        f.write_str("!")?;
                        inner.fmt_prec(3, f)
                    }
                },
                Lnu::ExistsSet(name, body) => match body.as_ref() {
                    Lnu::Not(b) => wrap(f, 0, &|f| {
                        write!(f, "forall {name} ")?;
                        b.fmt_prec(0, f)
                    }),
                    _ => {
                        f.write_str("!")?;
                        inner.fmt_prec(3, f)
                    }
                },
                _ => {
                    f.write_str("!")?;
                    inner.fmt_prec(3, f)
                }
            },
            Lnu::And(a, b) => wrap(f, 2, &|f| {
                a.fmt_prec(2, f)?;
                f.write_str(" & ")?;
                b.fmt_prec(3, f)
            }),
            Lnu::Rat(i) => write!(f, "rat{}", idx(i)),
            Lnu::Var => f.write_str("x"),
            Lnu::SetVar(n) => f.write_str(n),
            Lnu::Square(i, a) => {
                write!(f, "Box{}", idx(i))?;
                unary_arg(a, f)
            }
            Lnu::O(i, a) => {
                write!(f, "O{}", idx(i))?;
                unary_arg(a, f)
            }
            Lnu::Nu(body) => {
                if let Lnu::Square(None, inner) = body.as_ref() {
                    if let Lnu::And(v, psi) = inner.as_ref() {
                        if **v == Lnu::Var && !psi.has_free_var() {
                            f.write_str("CB(")?;
                            psi.fmt_prec(0, f)?;
                            return f.write_str(")");
                        }
                    }
                }
                wrap(f, 0, &|f| {
                    f.write_str("nu x. ")?;
                    body.fmt_prec(0, f)
                })
            }
            Lnu::ExistsSet(name, body) => wrap(f, 0, &|f| {
                write!(f, "exists {name} ")?;
                body.fmt_prec(0, f)
            }),
        }
    }
}

fn unary_arg(a: &Lnu, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let s = format!("{}", Prec(a, 3));
    if s.starts_with('(') {
        f.write_str(&s)
    } else {
        write!(f, " {s}")
    }
}

struct Prec<'a>(&'a Lnu, u8);

impl fmt::Display for Prec<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt_prec(self.1, f)
    }
}

impl fmt::Display for Lnu {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(0, f)
    }
}

/// Evaluates formulas over one model and property profile.
pub struct LnuEvaluator<'a> {
    model: &'a EpistemicModel,
    profile: &'a PropertyProfile,
    budgets: Budgets,
}

impl<'a> LnuEvaluator<'a> {
    pub fn new(model: &'a EpistemicModel, profile: &'a PropertyProfile, budgets: Budgets) -> Result<Self> {
        if model.game().id() != profile.game().id() {
            return Err(Error::GameMismatch);
        }
        if !model.has_correspondences() {
            return Err(Error::MissingCorrespondences);
        }
        Ok(LnuEvaluator {
            model,
            profile,
            budgets,
        })
    }

    /// `⟦f, env⟧`; `env` interprets a free `x`.
    pub fn eval(&self, f: &Lnu, env: Option<&Event>) -> Result<Event> {
        let n = self.model.game().num_players();
        if let Some(p) = f.max_player() {
            if p >= n {
                return Err(Error::PlayerOutOfRange(p + 1));
            }
        }
        let mut sets = Vec::new();
        self.go(f, env, &mut sets)
    }

    fn players(&self, i: &Option<usize>) -> Vec<usize> {
        match i {
            Some(i) => vec![*i],
            None => (0..self.model.game().num_players()).collect(),
        }
    }

    fn go(&self, f: &Lnu, env: Option<&Event>, sets: &mut Vec<(String, Event)>) -> Result<Event> {
        let m = self.model;
        Ok(match f {
            Lnu::Rat(i) => {
                let mut acc = m.omega();
                for p in self.players(i) {
                    acc = acc.intersection(&m.rat_event_player(self.profile.get(p))?);
                }
                acc
            }
            Lnu::And(a, b) => {
                let ea = self.go(a, env, sets)?;
                ea.intersection(&self.go(b, env, sets)?)
            }
            Lnu::Not(a) => self.go(a, env, sets)?.complement(),
            Lnu::Square(i, a) => {
                let e = self.go(a, env, sets)?;
                let mut acc = m.omega();
                for p in self.players(i) {
                    acc = acc.intersection(&m.box_player(p, &e)?);
                }
                acc
            }
            Lnu::O(i, a) => {
                let e = self.go(a, env, sets)?;
                let r = m.restriction_of_event(&e)?;
                let mut acc = m.omega();
                for p in self.players(i) {
                    acc = acc.intersection(&m.optimality_event(self.profile.get(p), &r)?);
                }
                acc
            }
            Lnu::Var => env.cloned().ok_or_else(|| Error::Unassigned("x".into()))?,
            Lnu::Nu(body) => {
                let mut cur = m.omega();
                loop {
                    let next = self.go(body, Some(&cur), sets)?;
                    if next == cur {
                        break cur;
                    }
                    if !next.is_subset(&cur) {
                        return Err(Error::Internal("nu body is not monotone in x".into()));
                    }
                    cur = next;
                }
            }
            Lnu::SetVar(name) => sets
                .iter()
                .rev()
                .find(|(n, _)| n == name)
                .map(|(_, e)| e.clone())
                .ok_or_else(|| Error::Unassigned(name.clone()))?,
            Lnu::ExistsSet(name, body) => {
                let k = m.num_states();
                self.budgets.check_events(k)?;
                let mut acc = Event::empty(k);
                for mask in 0..(1u64 << k) {
                    sets.push((name.clone(), Event::from_mask(k, mask)));
                    let e = self.go(body, env, sets);
                    sets.pop();
                    acc = acc.union(&e?);
                    if acc.is_full() {
                        break;
                    }
                }
                acc
            }
        })
    }

    /// `⋃{E | E ⊆ ⟦body, E⟧}` by enumerating every event. Test oracle for
    /// the downward iteration used by [`LnuEvaluator::eval`].
    pub fn nu_by_postfixpoints(&self, body: &Lnu) -> Result<Event> {
        let k = self.model.num_states();
        self.budgets.check_events(k)?;
        let mut acc = Event::empty(k);
        for mask in 0..(1u64 << k) {
            let e = Event::from_mask(k, mask);
            if e.is_subset(&self.eval(body, Some(&e))?) {
                acc = acc.union(&e);
            }
        }
        Ok(acc)
    }
}

/// `⟦f⟧` for a closed formula (or with `env` for a free `x`).
pub fn eval_lnu(
    model: &EpistemicModel,
    profile: &PropertyProfile,
    f: &Lnu,
    env: Option<&Event>,
    budgets: &Budgets,
) -> Result<Event> {
    LnuEvaluator::new(model, profile, *budgets)?.eval(f, env)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::epistemic::{construct_witness, standard_model, StandardCorrespondences};
    use crate::fixtures::pd;
    use crate::game::Restriction;
    use crate::operators::iterate_to_outcome;
    use crate::optimality::Builtin;

    #[test]
    fn parses_common_belief_and_sugar() {
        let f = parse_lnu("nu x. Box(x & rat)").unwrap();
        assert_eq!(f, Lnu::cb(Lnu::rat()));
        assert_eq!(parse_lnu("CB(rat)").unwrap(), f);
        assert_eq!(f.to_string(), "CB(rat)");
        let g = parse_lnu("rat & CB(rat) -> nu x. O x").unwrap();
        assert_eq!(
            g,
            Lnu::implies(
                Lnu::and(Lnu::rat(), Lnu::cb(Lnu::rat())),
                Lnu::nu(Lnu::o(None, Lnu::Var))
            )
        );
        assert_eq!(g.to_string(), "rat & CB(rat) -> nu x. O x");
        assert_eq!(parse_lnu(&g.to_string()).unwrap(), g);
        let h = parse_lnu("rat_1 <-> forall X (Box_1 X -> O_1 X)").unwrap();
        assert_eq!(h, Lnu::rat_definition(0));
        assert_eq!(parse_lnu(&h.to_string()).unwrap(), h);
        assert_eq!(
            parse_lnu("rat_1 | !Box_2 rat").unwrap().to_string(),
            "rat_1 | !Box_2 rat"
        );
    }

    #[test]
    fn rejects_ill_formed() {
        assert!(matches!(parse_lnu("nu x. !O x"), Err(Error::Parse { position: 1, .. })));
        assert!(parse_lnu("nu x. !!O x").is_ok());
        assert!(parse_lnu("nu x. O x & nu x. Box x").is_err());
        assert!(parse_lnu("nu y. O y").is_err());
        assert!(parse_lnu("CB(x)").is_err());
        assert!(parse_lnu("rat &").is_err());
        assert!(parse_lnu("rat_0").is_err());
        assert!(parse_lnu("").is_err());
        assert!(matches!(parse_lnu("rat & foo"), Err(Error::Parse { position: 7, .. })));
    }

    #[test]
    fn substitution_respects_binders() {
        let body = parse_lnu("Box(x & rat)").unwrap();
        let nu = Lnu::nu(body.clone());
        assert_eq!(body.substitute(&nu), parse_lnu("Box(CB(rat) & rat)").unwrap());
        let inner = Lnu::and(Lnu::Var, Lnu::nu(Lnu::o(None, Lnu::Var)));
        assert_eq!(
            inner.substitute(&Lnu::rat()),
            Lnu::and(Lnu::rat(), Lnu::nu(Lnu::o(None, Lnu::Var)))
        );
    }

    #[test]
    fn evaluation_examples() {
        let g = Arc::new(pd());
        let b = Budgets::default();
        let sd_g = PropertyProfile::uniform(&g, Builtin::SdG).unwrap();
        let w = construct_witness(&sd_g, &b).unwrap();
        let rat = eval_lnu(&w, &sd_g, &Lnu::rat(), None, &b).unwrap();
        assert_eq!(rat, w.rat_event(&sd_g).unwrap());
        assert!(rat.contains(3));

        let m = standard_model(&g, &Restriction::full(&g), StandardCorrespondences::OwnStrategy, &b).unwrap();
        let e = eval_lnu(&m, &sd_g, &parse_lnu("CB(rat)").unwrap(), None, &b).unwrap();
        assert_eq!(e, m.common_box(&m.rat_event(&sd_g).unwrap()).unwrap());
        let nu = eval_lnu(&m, &sd_g, &parse_lnu("nu x. O x").unwrap(), None, &b).unwrap();
        let outcome = iterate_to_outcome(&sd_g).unwrap();
        assert_eq!(&m.restriction_of_event(&nu).unwrap(), outcome.outcome());
        let ev = LnuEvaluator::new(&m, &sd_g, b).unwrap();
        assert_eq!(ev.nu_by_postfixpoints(&parse_lnu("O x").unwrap()).unwrap(), nu);
        assert_eq!(eval_lnu(&m, &sd_g, &Lnu::formula3(), None, &b).unwrap(), m.omega());
        assert_eq!(
            eval_lnu(&m, &sd_g, &Lnu::rat_definition(1), None, &b).unwrap(),
            m.omega()
        );
        assert_eq!(
            eval_lnu(&m, &sd_g, &Lnu::Var, None, &b),
            Err(Error::Unassigned("x".into()))
        );
        assert_eq!(
            eval_lnu(&m, &sd_g, &parse_lnu("rat_3").unwrap(), None, &b),
            Err(Error::PlayerOutOfRange(3))
        );
    }
}
