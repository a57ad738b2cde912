use epigame::checks::{self, Check, CheckResult, Counterexample, InstanceOutcome, RunReport, Status, SweepConfig};
use serde_json::{json, Value};

use crate::Format;

pub fn single_instance(c: &Check, cfg: &SweepConfig, k: usize) -> epigame::Result<CheckResult> {
    let (status, cases, counterexample) = match checks::run_instance(c, cfg, k)? {
        InstanceOutcome::Pass(n) => (Status::Pass, n, None),
        InstanceOutcome::Fail(cx) => (Status::Fail, 0, Some(cx)),
    };
    Ok(CheckResult {
        name: c.name,
        suite: c.suite,
        status,
        seed: cfg.seed,
        instances: 1,
        cases,
        failures: usize::from(status == Status::Fail),
        counterexample,
    })
}

fn counterexample_json(cx: &Counterexample) -> Value {
    json!({
        "instance": cx.instance,
        "detail": cx.detail,
        "game": cx.game,
        "model": cx.model,
    })
}

pub fn record(c: &CheckResult) -> Value {
    json!({
        "name": c.name,
        "suite": c.suite.name(),
        "status": c.status.name(),
        "seed": c.seed,
        "instances": c.instances,
        "cases": c.cases,
        "failures": c.failures,
        "counterexample": c.counterexample.as_ref().map(counterexample_json),
    })
}

pub fn print(rep: &RunReport, format: Format) {
    let failed = rep.checks.iter().filter(|c| c.status == Status::Fail).count();
    match format {
        Format::Text => {
            println!("{}", rep.command);
            for c in &rep.checks {
                println!(
                    "{:<4} {:<28} instances={} cases={}",
                    c.status.name(),
                    c.name,
                    c.instances,
                    c.cases
                );
                if let Some(cx) = &c.counterexample {
                    println!(
                        "     {} failing, first at instance {}: {}",
                        c.failures, cx.instance, cx.detail
                    );
                    println!(
                        "     replay: --seed {} check {} --only {} --instance {}",
                        c.seed,
                        c.suite.name(),
                        c.name,
                        cx.instance
                    );
                    for line in cx.game.lines() {
                        println!("     | {line}");
                    }
                    if let Some(m) = &cx.model {
                        for line in m.lines() {
                            println!("     | {line}");
                        }
                    }
                }
            }
            println!(
                "{} checks, {} failed, seed {}, {} ms",
                rep.checks.len(),
                failed,
                rep.seed,
                rep.wall_ms
            );
        }
        Format::JsonLines => {
            for c in &rep.checks {
                println!("{}", record(c));
            }
            println!(
                "{}",
                json!({
                    "command": rep.command,
                    "seed": rep.seed,
                    "checks": rep.checks.len(),
                    "failed": failed,
                    "wall_ms": rep.wall_ms,
                })
            );
        }
    }
}
