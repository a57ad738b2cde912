//! Checker for derivations in the proof system with axioms `ratDis`,
//! `νDis`, the rule `νInd`, and propositional consequence.

use std::fmt;

use crate::error::{Error, Result};
use crate::logic::lnu::{parse_lnu, Lnu};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Step {
    /// `rat → (□ψ → Oψ)`
    RatDis { psi: Lnu, conclude: Option<Lnu> },
    /// `νx.ψ → ψ[x ↦ νx.ψ]`
    NuDis { psi: Lnu, conclude: Option<Lnu> },
    /// From `χ → ψ[x ↦ χ]` infer `χ → νx.ψ`.
    NuInd {
        premise: usize,
        chi: Lnu,
        psi: Lnu,
        conclude: Option<Lnu>,
    },
    /// `conclude` follows propositionally from the cited premises.
    Prop { premises: Vec<usize>, conclude: Lnu },
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Derivation {
    pub steps: Vec<Step>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    /// Every step checks; carries the conclusion of the last step.
    Valid(Lnu),
    /// 1-based step index and reason. Index 0 means the derivation is empty.
    InvalidStep(usize, String),
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Valid(c) => write!(f, "valid: {c}"),
            Verdict::InvalidStep(0, r) => write!(f, "invalid: {r}"),
            Verdict::InvalidStep(k, r) => write!(f, "invalid step {k}: {r}"),
        }
    }
}

const KEYS: [&str; 4] = ["from", "psi", "chi", "conclude"];

/// Splits `key=value key=value ...` where values may contain spaces.
fn fields(rest: &str) -> std::result::Result<Vec<(&str, &str)>, String> {
    let mut starts: Vec<(usize, &str)> = Vec::new();
    for key in KEYS {
        let pat = format!("{key}=");
        let mut from = 0;
        while let Some(k) = rest[from..].find(&pat) {
            let at = from + k;
            if at == 0 || rest[..at].ends_with(char::is_whitespace) {
                starts.push((at, key));
            }
            from = at + pat.len();
        }
    }
    starts.sort();
    if starts.first().map(|s| s.0) != Some(0) && !rest.trim().is_empty() {
        return Err(format!("unexpected text `{}`", rest.trim()));
    }
    let mut out = Vec::new();
    for (k, &(at, key)) in starts.iter().enumerate() {
        let end = starts.get(k + 1).map_or(rest.len(), |s| s.0);
        let value = rest[at + key.len() + 1..end].trim();
        if out.iter().any(|(k, _)| *k == key) {
            return Err(format!("duplicate field `{key}`"));
        }
        out.push((key, value));
    }
    Ok(out)
}

impl Derivation {
    /// Parses one step per line; `#` starts a comment.
    pub fn parse(text: &str) -> Result<Derivation> {
        let mut steps = Vec::new();
        for (ln, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let syntax = |message: String| Error::Syntax { line: ln + 1, message };
            let (head, rest) = match line.strip_prefix("axiom ") {
                Some(r) => {
                    let r = r.trim_start();
                    let (name, rest) = r.split_once(char::is_whitespace).unwrap_or((r, ""));
                    (format!("axiom {name}"), rest.trim())
                }
                None => {
                    let (name, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
                    (name.to_string(), rest.trim())
                }
            };
            let fs = fields(rest).map_err(syntax)?;
            let get = |key: &str| fs.iter().find(|(k, _)| *k == key).map(|(_, v)| *v);
            let formula = |key: &str| -> Result<Option<Lnu>> {
                get(key)
                    .map(|v| parse_lnu(v).map_err(|e| syntax(format!("field `{key}`: {e}"))))
                    .transpose()
            };
            let need =
                |key: &str| -> Result<Lnu> { formula(key)?.ok_or_else(|| syntax(format!("missing field `{key}=`"))) };
            let allowed: &[&str] = match head.as_str() {
                "axiom ratDis" | "axiom nuDis" => &["psi", "conclude"],
                "nuInd" => &["from", "chi", "psi", "conclude"],
                "prop" => &["from", "conclude"],
                other => return Err(syntax(format!("unknown step kind `{other}`"))),
            };
            if let Some((k, _)) = fs.iter().find(|(k, _)| !allowed.contains(k)) {
                return Err(syntax(format!("field `{k}=` is not allowed in `{head}`")));
            }
            let indices = |v: &str| -> Result<Vec<usize>> {
                if v.is_empty() {
                    return Ok(Vec::new());
                }
                v.split(',')
                    .map(|t| {
                        t.trim()
                            .parse::<usize>()
                            .ok()
                            .filter(|&k| k >= 1)
                            .ok_or_else(|| syntax(format!("bad step index `{}`", t.trim())))
                    })
                    .collect()
            };
            let step = match head.as_str() {
                "axiom ratDis" => Step::RatDis {
                    psi: need("psi")?,
                    conclude: formula("conclude")?,
                },
                "axiom nuDis" => Step::NuDis {
                    psi: need("psi")?,
                    conclude: formula("conclude")?,
                },
                "nuInd" => {
                    let from = indices(get("from").ok_or_else(|| syntax("missing field `from=`".into()))?)?;
                    let [premise] = from[..] else {
                        return Err(syntax("nuInd takes exactly one premise".into()));
                    };
                    Step::NuInd {
                        premise,
                        chi: need("chi")?,
                        psi: need("psi")?,
                        conclude: formula("conclude")?,
                    }
                }
                _ => Step::Prop {
                    premises: indices(get("from").unwrap_or(""))?,
                    conclude: need("conclude")?,
                },
            };
            steps.push(step);
        }
        Ok(Derivation { steps })
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let list = |v: &[usize]| v.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(",");
        let tail = |c: &Option<Lnu>| c.as_ref().map_or(String::new(), |c| format!(" conclude={c}"));
        for s in &self.steps {
            let line = match s {
                Step::RatDis { psi, conclude } => format!("axiom ratDis psi={psi}{}", tail(conclude)),
                Step::NuDis { psi, conclude } => format!("axiom nuDis psi={psi}{}", tail(conclude)),
                Step::NuInd {
                    premise,
                    chi,
                    psi,
                    conclude,
                } => format!("nuInd from={premise} chi={chi} psi={psi}{}", tail(conclude)),
                Step::Prop { premises, conclude } => format!("prop from={} conclude={conclude}", list(premises)),
            };
            out.push_str(&line);
            out.push('\n');
        }
        out
    }

    pub fn check(&self) -> Verdict {
        check_derivation(self)
    }
}

pub fn check_derivation(d: &Derivation) -> Verdict {
    if d.steps.is_empty() {
        return Verdict::InvalidStep(0, "no steps".into());
    }
    let mut proved: Vec<Lnu> = Vec::new();
    for (k, step) in d.steps.iter().enumerate() {
        let n = k + 1;
        let premise = |j: usize| -> std::result::Result<&Lnu, String> {
            if j >= n {
                Err(format!("premise {j} does not precede step {n}"))
            } else {
                Ok(&proved[j - 1])
            }
        };
        let result = match step {
            Step::RatDis { psi, conclude } => {
                let inst = Lnu::implies(
                    Lnu::rat(),
                    Lnu::implies(Lnu::square(None, psi.clone()), Lnu::o(None, psi.clone())),
                );
                matches_claim(inst, conclude, "ratDis")
            }
            Step::NuDis { psi, conclude } => {
                let nu = Lnu::nu(psi.clone());
                match nu.check_well_formed() {
                    Err(m) => Err(m),
                    Ok(()) => matches_claim(Lnu::implies(nu.clone(), psi.substitute(&nu)), conclude, "nuDis"),
                }
            }
            Step::NuInd {
                premise: j,
                chi,
                psi,
                conclude,
            } => premise(*j).and_then(|p| {
                let nu = Lnu::nu(psi.clone());
                nu.check_well_formed()?;
                let expected = Lnu::implies(chi.clone(), psi.substitute(chi));
                if p != &expected {
                    return Err(format!("premise {j} is `{p}`, expected `{expected}`"));
                }
                matches_claim(Lnu::implies(chi.clone(), nu), conclude, "nuInd")
            }),
            Step::Prop { premises, conclude } => premises
                .iter()
                .map(|&j| premise(j).cloned())
                .collect::<std::result::Result<Vec<_>, _>>()
                .and_then(|ps| {
                    let hyp = ps.into_iter().reduce(Lnu::and);
                    let claim = match hyp {
                        Some(h) => Lnu::implies(h, conclude.clone()),
                        None => conclude.clone(),
                    };
                    if is_tautology(&claim) {
                        Ok(conclude.clone())
                    } else {
                        Err("conclusion does not follow propositionally from the premises".into())
                    }
                }),
        };
        match result {
            Ok(f) => proved.push(f),
            Err(reason) => return Verdict::InvalidStep(n, reason),
        }
    }
    Verdict::Valid(proved.pop().expect("at least one step"))
}

fn matches_claim(instance: Lnu, claim: &Option<Lnu>, schema: &str) -> std::result::Result<Lnu, String> {
    match claim {
        Some(c) if c != &instance => Err(format!("`{c}` is not the {schema} instance `{instance}`")),
        _ => Ok(instance),
    }
}

/// Maximal subformulas that are not built from `∧` and `¬`.
fn atoms(f: &Lnu, out: &mut Vec<Lnu>) {
    match f {
        Lnu::And(a, b) => {
            atoms(a, out);
            atoms(b, out);
        }
        Lnu::Not(a) => atoms(a, out),
        other => {
            if !out.contains(other) {
                out.push(other.clone());
            }
        }
    }
}

fn truth(f: &Lnu, atoms: &[Lnu], valuation: u64) -> bool {
    match f {
        Lnu::And(a, b) => truth(a, atoms, valuation) && truth(b, atoms, valuation),
        Lnu::Not(a) => !truth(a, atoms, valuation),
        other => {
            let k = atoms.iter().position(|x| x == other).expect("atom collected");
            valuation >> k & 1 == 1
        }
    }
}

/// Truth-table check treating maximal non-propositional subformulas as
/// atoms.
pub fn is_tautology(f: &Lnu) -> bool {
    let mut at = Vec::new();
    atoms(f, &mut at);
    assert!(at.len() < 24, "too many propositional atoms for a truth table");
    (0..(1u64 << at.len())).all(|v| truth(f, &at, v))
}

pub fn propositionally_equivalent(a: &Lnu, b: &Lnu) -> bool {
    is_tautology(&Lnu::iff(a.clone(), b.clone()))
}

/// The bundled four-step derivation of `(rat ∧ □*rat) → νx.Ox`.
pub const FORMULA3_DERIVATION: &str = "\
# (rat & CB(rat)) -> nu x. O x
axiom ratDis psi=CB(rat) & rat
axiom nuDis psi=Box(x & rat) conclude=CB(rat) -> Box(CB(rat) & rat)
prop from=1,2 conclude=CB(rat) & rat -> O(CB(rat) & rat)
nuInd from=3 chi=CB(rat) & rat psi=O x
";

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bundled_derivation_is_valid() {
        let d = Derivation::parse(FORMULA3_DERIVATION).unwrap();
        assert_eq!(d.steps.len(), 4);
        let Verdict::Valid(c) = d.check() else {
            panic!("{}", d.check())
        };
        assert_eq!(c, parse_lnu("CB(rat) & rat -> nu x. O x").unwrap());
        assert!(propositionally_equivalent(&c, &Lnu::formula3()));
        assert_ne!(c, Lnu::formula3());
        assert_eq!(Derivation::parse(&d.to_text()).unwrap(), d);
    }

    #[test]
    fn rejects_tampering() {
        let bad = FORMULA3_DERIVATION.replace("chi=CB(rat) & rat psi", "chi=CB(rat) psi");
        assert!(matches!(
            Derivation::parse(&bad).unwrap().check(),
            Verdict::InvalidStep(4, _)
        ));
        let d = Derivation::parse("prop conclude=rat_1 -> rat_2").unwrap();
        assert!(matches!(d.check(), Verdict::InvalidStep(1, _)));
        assert_eq!(
            Derivation::parse("").unwrap().check(),
            Verdict::InvalidStep(0, "no steps".into())
        );
        let fwd = "prop from=2 conclude=rat\naxiom ratDis psi=rat";
        assert!(matches!(
            Derivation::parse(fwd).unwrap().check(),
            Verdict::InvalidStep(1, _)
        ));
        assert!(Derivation::parse("axiom foo psi=rat").is_err());
        assert!(Derivation::parse("nuInd from=1,2 chi=rat psi=O x").is_err());
        assert!(Derivation::parse("axiom ratDis psi=rat &").is_err());
        let claim = "axiom ratDis psi=rat conclude=rat -> rat";
        assert!(matches!(
            Derivation::parse(claim).unwrap().check(),
            Verdict::InvalidStep(1, _)
        ));
    }

    #[test]
    fn tautologies() {
        assert!(is_tautology(&parse_lnu("rat | !rat").unwrap()));
        assert!(!is_tautology(&parse_lnu("rat_1 -> rat_2").unwrap()));
        assert!(is_tautology(&parse_lnu("Box rat & O rat -> O rat").unwrap()));
    }
}
