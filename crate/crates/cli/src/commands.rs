use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use epigame::announcements::{effect, iterate_optimality_announcements, iterate_rationality_announcements};
use epigame::checks::{self, Selection, SweepConfig};
use epigame::epistemic::{EpistemicModel, Event};
use epigame::logic::{eval_lnu, parse_lnu, Derivation, Verdict};
use epigame::operators::iterate_to_outcome;
use epigame::par::{self, Parallelism};
use epigame::random::{GameBounds, ModelBounds};
use epigame::{Budgets, Builtin, Game, OptimalityProperty, PropertyProfile, Restriction};
use serde_json::json;
use thiserror::Error;

use crate::report;
use crate::{CheckArgs, Cli, Command, Format};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("{path}: {source}")]
    File { path: String, source: epigame::Error },
    #[error(transparent)]
    Core(#[from] epigame::Error),
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, CliError>;

fn read(path: &str) -> Result<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_string(),
        source,
    })
}

fn in_file<T>(path: &str, r: epigame::Result<T>) -> Result<T> {
    r.map_err(|source| CliError::File {
        path: path.to_string(),
        source,
    })
}

pub fn load_game(path: &str) -> Result<Arc<Game>> {
    let text = read(path)?;
    Ok(Arc::new(in_file(path, Game::parse(&text))?))
}

/// Loads a model; its `game` line is resolved against the model's directory.
pub fn load_model(path: &str) -> Result<EpistemicModel> {
    let text = read(path)?;
    let dir = Path::new(path).parent().map(Path::to_path_buf).unwrap_or_default();
    let mut game_err = None;
    let parsed = EpistemicModel::parse(&text, |gp| {
        let full: PathBuf = dir.join(gp);
        load_game(&full.to_string_lossy()).map_err(|e| {
            let msg = e.to_string();
            game_err = Some(e);
            epigame::Error::InvalidModel(msg)
        })
    });
    match (parsed, game_err) {
        (Err(_), Some(e)) => Err(e),
        (r, _) => in_file(path, r),
    }
}

fn profile(game: &Arc<Game>, names: &[String]) -> Result<PropertyProfile> {
    let n = game.num_players();
    let builtins = names
        .iter()
        .map(|s| s.trim().parse::<Builtin>())
        .collect::<epigame::Result<Vec<_>>>()?;
    let per_player = match builtins.len() {
        1 => vec![builtins[0]; n],
        k if k == n => builtins,
        k => {
            return Err(CliError::Usage(format!(
                "{k} properties given for a {n}-player game (give one, or one per player)"
            )))
        }
    };
    let props = per_player
        .iter()
        .enumerate()
        .map(|(i, &b)| OptimalityProperty::builtin(game, b, i))
        .collect::<epigame::Result<Vec<_>>>()?;
    Ok(PropertyProfile::new(props)?)
}

fn budgets(cli: &Cli) -> Budgets {
    Budgets {
        restriction_strategies: cli.global.budget_restrictions,
        states: cli.global.budget_states,
        ..Budgets::default()
    }
}

fn names(g: &Game, r: &Restriction) -> serde_json::Value {
    json!((0..g.num_players())
        .map(|i| r.strategies(i).map(|s| g.strategy_name(i, s)).collect::<Vec<_>>())
        .collect::<Vec<_>>())
}

fn states(m: &EpistemicModel, e: &Event) -> serde_json::Value {
    json!(e.iter().map(|w| m.state_name(w)).collect::<Vec<_>>())
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let jobs = cli.global.jobs;
    par::with_jobs(jobs, || match &cli.command {
        Command::Solve { game, property, trace } => solve(cli, game, property, *trace),
        Command::Announce {
            path,
            property,
            rationality,
            events,
            emit_model,
        } => announce(
            cli,
            path,
            property,
            *rationality,
            events.as_deref(),
            emit_model.as_deref(),
        ),
        Command::Eval {
            model,
            formula,
            property,
        } => eval(cli, model, formula, property),
        Command::Check(args) => check(cli, args),
        Command::Derive { path } => derive(cli, path),
    })
}

fn solve(cli: &Cli, path: &str, property: &[String], trace: bool) -> Result<ExitCode> {
    let g = load_game(path)?;
    let p = profile(&g, property)?;
    let t = iterate_to_outcome(&p)?;
    match cli.global.format {
        Format::Text => {
            if trace {
                print!("{}", t.display(&g));
            }
            println!("outcome: {}", t.outcome().display(&g));
            println!("closure ordinal: {}", t.closure_ordinal());
        }
        Format::JsonLines => {
            let stages: Vec<_> = t.stages().iter().map(|r| names(&g, r)).collect();
            let mut rec = json!({
                "property": p.label(),
                "outcome": names(&g, t.outcome()),
                "closure_ordinal": t.closure_ordinal(),
            });
            if trace {
                rec["stages"] = json!(stages);
            }
            println!("{rec}");
        }
    }
    Ok(ExitCode::SUCCESS)
}

/// Parses `<player> : <state> ...` lines; players not mentioned announce Ω.
fn parse_events(m: &EpistemicModel, path: &str, text: &str) -> Result<Vec<Event>> {
    let n = m.game().num_players();
    let mut out: Vec<Option<Event>> = vec![None; n];
    for (k, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = |message: String| CliError::File {
            path: path.to_string(),
            source: epigame::Error::Syntax { line: k + 1, message },
        };
        let (player, rest) = line
            .split_once(':')
            .ok_or_else(|| bad("expected `<player> : <state> ...`".into()))?;
        let player: usize = player
            .trim()
            .parse()
            .ok()
            .filter(|&p| (1..=n).contains(&p))
            .ok_or_else(|| bad(format!("bad player `{}`", player.trim())))?;
        if out[player - 1].is_some() {
            return Err(bad(format!("player {player} announces twice")));
        }
        let members: Vec<&str> = rest.split_whitespace().collect();
        out[player - 1] = Some(m.event_by_names(&members).map_err(|e| bad(e.to_string()))?);
    }
    Ok(out.into_iter().map(|e| e.unwrap_or_else(|| m.omega())).collect())
}

fn emit(path: Option<&str>, m: &EpistemicModel, game_path: &str) -> Result<()> {
    if let Some(p) = path {
        fs::write(p, m.to_text(game_path)).map_err(|source| CliError::Io {
            path: p.to_string(),
            source,
        })?;
    }
    Ok(())
}

fn announce(
    cli: &Cli,
    path: &str,
    property: &[String],
    rationality: bool,
    events: Option<&str>,
    emit_model: Option<&str>,
) -> Result<ExitCode> {
    let b = budgets(cli);
    if let Some(ev_path) = events {
        let m = load_model(path)?;
        let evs = parse_events(&m, ev_path, &read(ev_path)?)?;
        let eff = effect(&m, &evs)?;
        let g = m.game();
        match cli.global.format {
            Format::Text => {
                println!(
                    "announced: {}",
                    evs.iter().map(|e| m.display_event(e)).collect::<Vec<_>>().join(" | ")
                );
                println!("states: {}", eff.model.display_event(&eff.model.omega()));
                if !eff.dropped.is_empty() {
                    let d: Vec<&str> = eff.dropped.iter().map(|&w| m.state_name(w)).collect();
                    println!("dropped: {}", d.join(", "));
                }
                if eff.not_a_model_of_target {
                    println!("flag: not a model of G_E = {}", eff.target.display(g));
                }
            }
            Format::JsonLines => println!(
                "{}",
                json!({
                    "states": states(&eff.model, &eff.model.omega()),
                    "dropped": eff.dropped.iter().map(|&w| m.state_name(w)).collect::<Vec<_>>(),
                    "target": names(g, &eff.target),
                    "not_a_model_of_target": eff.not_a_model_of_target,
                })
            ),
        }
        let game_line = read(path)?
            .lines()
            .find_map(|l| l.trim().strip_prefix("game ").map(|s| s.trim().to_string()))
            .unwrap_or_default();
        emit(emit_model, &eff.model, &game_line)?;
        return Ok(ExitCode::SUCCESS);
    }
    if property.is_empty() {
        return Err(CliError::Usage(
            "announce on a game needs --property (or --events with a model)".into(),
        ));
    }
    let g = load_game(path)?;
    let p = profile(&g, property)?;
    let trace = if rationality {
        iterate_rationality_announcements(&p, &b)?
    } else {
        iterate_optimality_announcements(&p, &b)?
    };
    for w in &trace.warnings {
        eprintln!("warning: {w}");
    }
    let t = trace.terminal();
    match cli.global.format {
        Format::Text => {
            print!("{}", trace.display(&g));
            println!("terminal: {} states {}", t.num_states(), t.display_event(&t.omega()));
        }
        Format::JsonLines => println!(
            "{}",
            json!({
                "property": p.label(),
                "rationality": rationality,
                "models": trace.len(),
                "rounds": trace.models.iter().map(|m| m.num_states()).collect::<Vec<_>>(),
                "terminal": states(t, &t.omega()),
                "warnings": trace.warnings,
            })
        ),
    }
    let gp = Path::new(path)
        .file_name()
        .map(|f| f.to_string_lossy().into_owned())
        .unwrap_or_default();
    emit(emit_model, t, &gp)?;
    Ok(ExitCode::SUCCESS)
}

fn eval(cli: &Cli, path: &str, formula: &str, property: &[String]) -> Result<ExitCode> {
    let f = parse_lnu(formula)?;
    let m = load_model(path)?;
    let default = ["sd_g".to_string()];
    let p = profile(m.game(), if property.is_empty() { &default } else { property })?;
    let e = eval_lnu(&m, &p, &f, None, &budgets(cli))?;
    match cli.global.format {
        Format::Text => println!("{}", m.display_event(&e)),
        Format::JsonLines => println!(
            "{}",
            json!({"formula": f.to_string(), "property": p.label(), "states": states(&m, &e), "valid": e.is_full()})
        ),
    }
    Ok(ExitCode::SUCCESS)
}

fn sweep_config(cli: &Cli, a: &CheckArgs) -> Result<SweepConfig> {
    if a.min_players < 2 || a.min_players > a.max_players {
        return Err(CliError::Usage("need 2 <= --min-players <= --max-players".into()));
    }
    if a.min_strategies < 1 || a.min_strategies > a.max_strategies {
        return Err(CliError::Usage("need 1 <= --min-strategies <= --max-strategies".into()));
    }
    if a.min_payoff > a.max_payoff || a.max_states == 0 {
        return Err(CliError::Usage("empty payoff or state range".into()));
    }
    let property = a.property.as_deref().map(str::parse::<Builtin>).transpose()?;
    Ok(SweepConfig {
        seed: cli.global.seed,
        instances: a.random,
        games: GameBounds {
            min_players: a.min_players,
            max_players: a.max_players,
            min_strategies: a.min_strategies,
            max_strategies: a.max_strategies,
            min_payoff: a.min_payoff,
            max_payoff: a.max_payoff,
            max_total: None,
        },
        models: ModelBounds {
            min_states: 1,
            max_states: a.max_states,
        },
        budgets: Budgets {
            parallelism: Parallelism::Parallel,
            ..budgets(cli)
        },
        property,
        ..SweepConfig::default()
    })
}

fn check(cli: &Cli, a: &CheckArgs) -> Result<ExitCode> {
    let sel: Selection = a.suite.parse()?;
    let cfg = sweep_config(cli, a)?;
    let command = format!("check {} --random {} --seed {}", a.suite, a.random, cli.global.seed);
    let rep = match &a.only {
        Some(name) => {
            let c = checks::find_check(name).ok_or_else(|| CliError::Usage(format!("unknown check `{name}`")))?;
            let cfg = match a.instance {
                // Replaying instance k: run exactly that one.
                Some(_) => SweepConfig { instances: 1, ..cfg },
                None => cfg,
            };
            let result = match a.instance {
                Some(k) => report::single_instance(c, &cfg, k)?,
                None => checks::run_check(c, &cfg)?,
            };
            checks::RunReport {
                command,
                seed: cfg.seed,
                checks: vec![result],
                wall_ms: 0,
            }
        }
        None => checks::run_suites(sel, &cfg, &command)?,
    };
    report::print(&rep, cli.global.format);
    Ok(if rep.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn derive(cli: &Cli, path: &str) -> Result<ExitCode> {
    let d = in_file(path, Derivation::parse(&read(path)?))?;
    let v = d.check();
    match cli.global.format {
        Format::Text => println!("{v}"),
        Format::JsonLines => {
            let rec = match &v {
                Verdict::Valid(c) => json!({"verdict": "valid", "conclusion": c.to_string()}),
                Verdict::InvalidStep(k, why) => json!({"verdict": "invalid", "step": k, "reason": why}),
            };
            println!("{rec}");
        }
    }
    Ok(match v {
        Verdict::Valid(_) => ExitCode::SUCCESS,
        Verdict::InvalidStep(..) => ExitCode::from(1),
    })
}
