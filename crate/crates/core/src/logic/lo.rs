//! The first-order optimality language: payoff comparisons `x ≥^i_z y`,
//! membership `x ∈ X`, and quantifiers over states.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use crate::config::Budgets;
use crate::epistemic::{standard_model, EpistemicModel, Event, StandardCorrespondences};
use crate::error::{Error, Result};
use crate::game::{Game, Restriction};
use crate::logic::lexer::{err, Cursor, Tok};
use crate::optimality::{OptimalityProperty, Provenance};

/// Primitive syntax; `>`, `|`, `->`, `∀` and bounded quantifiers are
/// desugared by the parser. Player indices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Lo {
    In(String, String),
    /// `x ≥^i_z y`
    Geq {
        player: usize,
        x: String,
        z: String,
        y: String,
    },
    Not(Box<Lo>),
    And(Box<Lo>, Box<Lo>),
    Exists(String, Box<Lo>),
}

impl Lo {
    #[allow(clippy::should_implement_trait)]
    pub fn not(a: Lo) -> Lo {
        Lo::Not(Box::new(a))
    }

    pub fn and(a: Lo, b: Lo) -> Lo {
        Lo::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Lo, b: Lo) -> Lo {
        Lo::not(Lo::and(Lo::not(a), Lo::not(b)))
    }

    pub fn implies(a: Lo, b: Lo) -> Lo {
        Lo::not(Lo::and(a, Lo::not(b)))
    }

    pub fn exists(v: &str, body: Lo) -> Lo {
        Lo::Exists(v.to_string(), Box::new(body))
    }

    pub fn forall(v: &str, body: Lo) -> Lo {
        Lo::not(Lo::exists(v, Lo::not(body)))
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut see = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Lo::In(v, _) => see(v, bound),
            Lo::Geq { x, z, y, .. } => {
                see(x, bound);
                see(z, bound);
                see(y, bound);
            }
            Lo::Not(a) => a.collect_free(bound, out),
            Lo::And(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Lo::Exists(v, a) => {
                bound.push(v.clone());
                a.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    pub fn set_vars(&self) -> BTreeSet<String> {
        match self {
            Lo::In(_, s) => BTreeSet::from([s.clone()]),
            Lo::Geq { .. } => BTreeSet::new(),
            Lo::Not(a) | Lo::Exists(_, a) => a.set_vars(),
            Lo::And(a, b) => a.set_vars().union(&b.set_vars()).cloned().collect(),
        }
    }

    pub fn players(&self) -> BTreeSet<usize> {
        match self {
            Lo::In(..) => BTreeSet::new(),
            Lo::Geq { player, .. } => BTreeSet::from([*player]),
            Lo::Not(a) | Lo::Exists(_, a) => a.players(),
            Lo::And(a, b) => a.players().union(&b.players()).cloned().collect(),
        }
    }

    /// Every occurrence of a set variable lies under an even number of
    /// negations, counted on the primitive form.
    pub fn is_positive(&self) -> bool {
        fn go(f: &Lo, negs: usize) -> bool {
            match f {
                Lo::In(..) => negs.is_multiple_of(2),
                Lo::Geq { .. } => true,
                Lo::Not(a) => go(a, negs + 1),
                Lo::And(a, b) => go(a, negs) && go(b, negs),
                Lo::Exists(_, a) => go(a, negs),
            }
        }
        go(self, 0)
    }

    /// Checks the shape of an optimality condition for `player`: exactly one
    /// free variable, which is returned, only `≥^player` comparisons and no
    /// set variable other than `X`.
    pub fn optimality_condition_var(&self, player: usize) -> Result<String> {
        let free = self.free_vars();
        if free.len() != 1 {
            return Err(Error::NotOptimalityCondition(format!(
                "expected exactly one free variable, found {}",
                free.len()
            )));
        }
        if let Some(j) = self.players().into_iter().find(|&j| j != player) {
            return Err(Error::NotOptimalityCondition(format!(
                "comparison for player {} in a condition for player {}",
                j + 1,
                player + 1
            )));
        }
        if let Some(s) = self.set_vars().into_iter().find(|s| s != "X") {
            return Err(Error::NotOptimalityCondition(format!("unexpected set variable `{s}`")));
        }
        Ok(free.into_iter().next().expect("one free variable"))
    }
}

pub fn parse_lo(text: &str) -> Result<Lo> {
    let mut c = Cursor::new(text)?;
    if c.at_end() {
        return Err(err(1, "empty formula"));
    }
    let f = parse_imp(&mut c)?;
    c.finish()?;
    Ok(f)
}

fn parse_imp(c: &mut Cursor) -> Result<Lo> {
    let f = parse_or(c)?;
    if c.eat(&Tok::Arrow) {
        return Ok(Lo::implies(f, parse_imp(c)?));
    }
    Ok(f)
}

fn parse_or(c: &mut Cursor) -> Result<Lo> {
    let mut f = parse_and(c)?;
    while c.eat(&Tok::Or) {
        f = Lo::or(f, parse_and(c)?);
    }
    Ok(f)
}

fn parse_and(c: &mut Cursor) -> Result<Lo> {
    let mut f = parse_unary(c)?;
    while c.eat(&Tok::And) {
        f = Lo::and(f, parse_unary(c)?);
    }
    Ok(f)
}

fn first_order(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_lowercase()) && !matches!(name, "in" | "exists" | "forall")
}

fn set_var(name: &str) -> bool {
    name.starts_with(|c: char| c.is_ascii_uppercase())
}

fn parse_unary(c: &mut Cursor) -> Result<Lo> {
    let pos = c.pos();
    match c.peek().cloned() {
        Some(Tok::Not) => {
            c.next();
            Ok(Lo::not(parse_unary(c)?))
        }
        Some(Tok::LParen) => {
            c.next();
            let f = parse_imp(c)?;
            c.expect(&Tok::RParen, "`)`")?;
            Ok(f)
        }
        Some(Tok::Ident(q)) if q == "exists" || q == "forall" => {
            c.next();
            let vpos = c.pos();
            let v = match c.next() {
                Some(Tok::Ident(v)) if first_order(&v) => v,
                _ => return Err(err(vpos, "expected a variable after the quantifier")),
            };
            let bound = if c.peek() == Some(&Tok::Ident("in".into())) {
                c.next();
                let spos = c.pos();
                match c.next() {
                    Some(Tok::Ident(s)) if set_var(&s) => Some(s),
                    _ => return Err(err(spos, "expected a set variable after `in`")),
                }
            } else {
                None
            };
            let body = parse_imp(c)?;
            Ok(match (q.as_str(), bound) {
                ("exists", None) => Lo::exists(&v, body),
                (_, None) => Lo::forall(&v, body),
                ("exists", Some(s)) => Lo::exists(&v, Lo::and(Lo::In(v.clone(), s), body)),
                (_, Some(s)) => Lo::forall(&v, Lo::implies(Lo::In(v.clone(), s), body)),
            })
        }
        Some(Tok::Ident(x)) if first_order(&x) => {
            c.next();
            match c.next() {
                Some(Tok::Ident(k)) if k == "in" => {
                    let spos = c.pos();
                    match c.next() {
                        Some(Tok::Ident(s)) if set_var(&s) => Ok(Lo::In(x, s)),
                        _ => Err(err(spos, "expected a set variable after `in`")),
                    }
                }
                Some(Tok::Cmp { strict, player, z }) => {
                    if player == 0 {
                        return Err(err(pos, "player numbers start at 1"));
                    }
                    if !first_order(&z) {
                        return Err(err(pos, format!("`{z}` is not a first-order variable")));
                    }
                    let ypos = c.pos();
                    let y = match c.next() {
                        Some(Tok::Ident(y)) if first_order(&y) => y,
                        _ => return Err(err(ypos, "expected a variable after the comparison")),
                    };
                    let player = player - 1;
                    Ok(if strict {
                        // x >^i_z y := ¬ y ≥^i_z x
                        Lo::not(Lo::Geq { player, x: y, z, y: x })
                    } else {
                        Lo::Geq { player, x, z, y }
                    })
                }
                _ => Err(err(pos, "expected `in` or a comparison after a variable")),
            }
        }
        Some(_) => Err(err(pos, "expected a formula")),
        None => Err(err(pos, "unexpected end of formula")),
    }
}

impl Lo {
    fn fmt_prec(&self, prec: u8, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let open = |f: &mut fmt::Formatter<'_>, level: u8| if prec > level { f.write_str("(") } else { Ok(()) };
        let close = |f: &mut fmt::Formatter<'_>, level: u8| if prec > level { f.write_str(")") } else { Ok(()) };
        match self {
            Lo::In(v, s) => write!(f, "{v} in {s}"),
            Lo::Geq { player, x, z, y } => write!(f, "{x} >=^{}_{z} {y}", player + 1),
            Lo::Not(inner) => match inner.as_ref() {
                Lo::Geq { player, x, z, y } => write!(f, "{y} >^{}_{z} {x}", player + 1),
                Lo::Exists(v, body) if matches!(body.as_ref(), Lo::Not(_)) => {
                    let Lo::Not(b) = body.as_ref() else { unreachable!() };
                    open(f, 0)?;
                    write!(f, "forall {v} ")?;
                    b.fmt_prec(0, f)?;
                    close(f, 0)
                }
                Lo::And(a, b) if matches!(b.as_ref(), Lo::Not(_)) => {
                    let Lo::Not(nb) = b.as_ref() else { unreachable!() };
                    open(f, 0)?;
                    a.fmt_prec(1, f)?;
                    f.write_str(" -> ")?;
                    nb.fmt_prec(0, f)?;
                    close(f, 0)
                }
                _ => {
                    f.write_str("!")?;
                    inner.fmt_prec(3, f)
                }
            },
            Lo::And(a, b) => {
                open(f, 2)?;
                a.fmt_prec(2, f)?;
                f.write_str(" & ")?;
                b.fmt_prec(3, f)?;
                close(f, 2)
            }
            Lo::Exists(v, body) => {
                open(f, 0)?;
                write!(f, "exists {v} ")?;
                body.fmt_prec(0, f)?;
                close(f, 0)
            }
        }
    }
}

impl fmt::Display for Lo {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(0, f)
    }
}

/// An assignment of first-order variables to states and set variables to
/// events.
#[derive(Debug, Clone, Default)]
pub struct Assignment {
    pub vars: HashMap<String, usize>,
    pub sets: HashMap<String, Event>,
}

impl Assignment {
    pub fn var(mut self, name: &str, state: usize) -> Self {
        self.vars.insert(name.to_string(), state);
        self
    }

    pub fn set(mut self, name: &str, e: Event) -> Self {
        self.sets.insert(name.to_string(), e);
        self
    }
}

/// `⊨_α f` over the states of `model`.
pub fn eval_lo(model: &EpistemicModel, f: &Lo, alpha: &Assignment) -> Result<bool> {
    let g = model.game();
    for &p in &f.players() {
        g.check_player(p)?;
    }
    let mut vars: Vec<(String, usize)> = alpha.vars.iter().map(|(k, v)| (k.clone(), *v)).collect();
    for &w in alpha.vars.values() {
        if w >= model.num_states() {
            return Err(Error::UnknownState(w.to_string()));
        }
    }
    for e in alpha.sets.values() {
        model.check_event(e)?;
    }
    eval_in(model, g, f, &mut vars, &alpha.sets)
}

fn lookup(vars: &[(String, usize)], v: &str) -> Result<usize> {
    vars.iter()
        .rev()
        .find(|(n, _)| n == v)
        .map(|(_, w)| *w)
        .ok_or_else(|| Error::Unassigned(v.to_string()))
}

fn eval_in(
    model: &EpistemicModel,
    g: &Game,
    f: &Lo,
    vars: &mut Vec<(String, usize)>,
    sets: &HashMap<String, Event>,
) -> Result<bool> {
    Ok(match f {
        Lo::In(v, s) => {
            let w = lookup(vars, v)?;
            sets.get(s).ok_or_else(|| Error::Unassigned(s.clone()))?.contains(w)
        }
        Lo::Geq { player, x, z, y } => {
            let i = *player;
            let (wx, wz, wy) = (lookup(vars, x)?, lookup(vars, z)?, lookup(vars, y)?);
            let mut prof = model.profile(wz).to_vec();
            prof[i] = model.assignment(wx, i);
            let left = g.payoff(i, &prof).clone();
            prof[i] = model.assignment(wy, i);
            left >= *g.payoff(i, &prof)
        }
        Lo::Not(a) => !eval_in(model, g, a, vars, sets)?,
        Lo::And(a, b) => eval_in(model, g, a, vars, sets)? && eval_in(model, g, b, vars, sets)?,
        Lo::Exists(v, body) => {
            let mut found = false;
            for w in 0..model.num_states() {
                vars.push((v.clone(), w));
                let r = eval_in(model, g, body, vars, sets);
                vars.pop();
                if r? {
                    found = true;
                    break;
                }
            }
            found
        }
    })
}

/// Turns an optimality condition for `player` into a property. To evaluate
/// `φ(s_i, G)` it takes the standard model of `H`, binds the free variable
/// to the first state whose `i`-th coordinate is `s_i`, and binds `X` to the
/// states whose joint strategy lies in `G`.
pub fn compile_lo_to_property(
    f: &Lo,
    player: usize,
    game: &Arc<Game>,
    name: &str,
    budgets: &Budgets,
) -> Result<OptimalityProperty> {
    game.check_player(player)?;
    let var = f.optimality_condition_var(player)?;
    let model = Arc::new(standard_model(
        game,
        &Restriction::full(game),
        StandardCorrespondences::None,
        budgets,
    )?);
    let f = f.clone();
    let g = Arc::clone(game);
    OptimalityProperty::from_fn(game, player, name, Provenance::Compiled, move |s, r| {
        let n = model.num_states();
        let w = (0..n)
            .find(|&w| model.assignment(w, player) == s)
            .ok_or(Error::StrategyOutOfRange { player, strategy: s })?;
        let x = Event::from_states(
            n,
            (0..n).filter(|&v| (0..g.num_players()).all(|j| r.contains(j, model.assignment(v, j)))),
        );
        let alpha = Assignment::default().var(&var, w).set("X", x);
        eval_lo(&model, &f, &alpha)
    })
}

/// Concrete text of the six pure-strategy conditions for a 1-based player.
pub fn standard_condition(name: &str, player: usize) -> Option<String> {
    let i = player;
    Some(match name {
        "sd_l" => format!("forall y in X exists z in X x >=^{i}_z y"),
        "sd_g" => format!("forall y exists z in X x >=^{i}_z y"),
        "wd_l" => format!("forall y in X ((forall z in X x >=^{i}_z y) | (exists z in X x >^{i}_z y))"),
        "wd_g" => format!("forall y ((forall z in X x >=^{i}_z y) | (exists z in X x >^{i}_z y))"),
        "br_l" => format!("exists z in X forall y in X x >=^{i}_z y"),
        "br_g" => format!("exists z in X forall y x >=^{i}_z y"),
        _ => return None,
    })
}

pub fn check_positive_lo(f: &Lo) -> bool {
    f.is_positive()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures::pd;
    use crate::optimality::Builtin;

    #[test]
    fn parses_the_conditions() {
        let f = parse_lo("forall y exists z in X (x >=^1_z y)").unwrap();
        let g = parse_lo(&standard_condition("sd_g", 1).unwrap()).unwrap();
        assert_eq!(f, g);
        assert_eq!(f.optimality_condition_var(0).unwrap(), "x");
        assert!(f.optimality_condition_var(1).is_err());
        assert_eq!(parse_lo(&f.to_string()).unwrap(), f);
        for name in ["sd_l", "sd_g", "wd_l", "wd_g", "br_l", "br_g"] {
            let c = parse_lo(&standard_condition(name, 2).unwrap()).unwrap();
            assert_eq!(parse_lo(&c.to_string()).unwrap(), c, "{name}");
            assert_eq!(check_positive_lo(&c), name == "sd_g" || name == "br_g", "{name}");
        }
        assert!(check_positive_lo(&parse_lo("x in X").unwrap()));
        assert_eq!(parse_lo("x >^2_z y").unwrap().to_string(), "x >^2_z y");
        assert!(parse_lo("x >= y").is_err());
        assert!(parse_lo("x in").is_err());
        assert!(parse_lo("forall y").is_err());
        assert!(parse_lo("x >=^0_z y").is_err());
        let two = parse_lo("x >=^1_z y").unwrap();
        assert!(matches!(
            two.optimality_condition_var(0),
            Err(Error::NotOptimalityCondition(_))
        ));
    }

    #[test]
    fn evaluation_examples() {
        let g = Arc::new(pd());
        let b = Budgets::default();
        let m = standard_model(&g, &Restriction::full(&g), StandardCorrespondences::None, &b).unwrap();
        let sd = parse_lo(&standard_condition("sd_g", 1).unwrap()).unwrap();
        let a = Assignment::default().var("x", 0).set("X", m.omega());
        assert!(!eval_lo(&m, &sd, &a).unwrap());
        let a = Assignment::default().var("x", 3).set("X", m.omega());
        assert!(eval_lo(&m, &sd, &a).unwrap());
        let refl = parse_lo("x >=^2_z x").unwrap();
        for w in 0..4 {
            for z in 0..4 {
                let a = Assignment::default().var("x", w).var("z", z);
                assert!(eval_lo(&m, &refl, &a).unwrap());
            }
        }
        let br = parse_lo(&standard_condition("br_l", 1).unwrap()).unwrap();
        let a = Assignment::default().var("x", 3).set("X", Event::empty(4));
        assert!(!eval_lo(&m, &br, &a).unwrap());
        assert_eq!(
            eval_lo(&m, &sd, &Assignment::default().var("x", 0)),
            Err(Error::Unassigned("X".into()))
        );
    }

    #[test]
    fn compiled_conditions_match_builtins() {
        let g = Arc::new(pd());
        let b = Budgets::default();
        for (name, builtin) in [
            ("sd_g", Builtin::SdG),
            ("sd_l", Builtin::SdL),
            ("wd_g", Builtin::WdG),
            ("wd_l", Builtin::WdL),
            ("br_g", Builtin::BrG),
            ("br_l", Builtin::BrL),
        ] {
            for i in 0..2 {
                let f = parse_lo(&standard_condition(name, i + 1).unwrap()).unwrap();
                let c = compile_lo_to_property(&f, i, &g, name, &b).unwrap();
                let p = OptimalityProperty::builtin(&g, builtin, i).unwrap();
                for code in 0..16 {
                    let r = Restriction::from_code(&g, code);
                    let rx = if r.has_empty_component() {
                        Restriction::empty(&g)
                    } else {
                        r.clone()
                    };
                    for s in 0..2 {
                        assert_eq!(
                            c.holds(s, &r).unwrap(),
                            p.holds(s, &rx).unwrap(),
                            "{name} {i} {code} {s}"
                        );
                    }
                }
            }
        }
        let mem = compile_lo_to_property(&parse_lo("x in X").unwrap(), 0, &g, "in", &b).unwrap();
        let r = Restriction::from_names(&g, &[&["D"], &["C"]]).unwrap();
        assert!(mem.holds(1, &r).unwrap());
        assert!(!mem.holds(0, &r).unwrap());
    }
}
