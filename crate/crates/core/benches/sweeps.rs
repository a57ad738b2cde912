//! Sequential vs data-parallel execution of the main sweeps.

use std::hint::black_box;
use std::sync::Arc;

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use epigame::checks::{find_check, run_check, SweepConfig};
use epigame::operators::{apply_t_with, iterate_to_outcome_with};
use epigame::optimality::is_monotonic_on;
use epigame::par::Parallelism;
use epigame::random::{self, GameBounds};
use epigame::{Budgets, Builtin, Game, OptimalityProperty, PropertyProfile, Restriction};

const MODES: [(&str, Parallelism); 2] = [
    ("sequential", Parallelism::Sequential),
    ("parallel", Parallelism::Parallel),
];

fn games(n: usize) -> Vec<Arc<Game>> {
    let mut rng = random::rng(42);
    let bounds = GameBounds::default().with_total(10);
    (0..n)
        .map(|_| Arc::new(random::random_game(&mut rng, &bounds)))
        .collect()
}

fn elimination(c: &mut Criterion) {
    let gs = games(8);
    let mut group = c.benchmark_group("elimination");
    for b in [Builtin::SdG, Builtin::MsdL, Builtin::BrcL] {
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, b), &b, |bench, &b| {
                bench.iter(|| {
                    for g in &gs {
                        let p = PropertyProfile::uniform(g, b).unwrap();
                        black_box(apply_t_with(&p, &Restriction::full(g), mode).unwrap());
                        black_box(iterate_to_outcome_with(&p, mode).unwrap());
                    }
                })
            });
        }
    }
    group.finish();
}

fn monotonicity(c: &mut Criterion) {
    let gs = games(4);
    let mut group = c.benchmark_group("monotonicity");
    group.sample_size(10);
    for (name, mode) in MODES {
        let budgets = Budgets {
            parallelism: mode,
            ..Budgets::default()
        };
        group.bench_function(name, |bench| {
            bench.iter(|| {
                for g in &gs {
                    let phi = OptimalityProperty::builtin(g, Builtin::SdG, 0).unwrap();
                    black_box(is_monotonic_on(&phi, &budgets).unwrap());
                }
            })
        });
    }
    group.finish();
}

fn checks(c: &mut Criterion) {
    let mut group = c.benchmark_group("check");
    group.sample_size(10);
    for check in ["epist1.belief", "just1.local_global"] {
        for (name, mode) in MODES {
            let cfg = SweepConfig {
                seed: 1,
                instances: 8,
                budgets: Budgets {
                    parallelism: mode,
                    ..Budgets::default()
                },
                ..SweepConfig::default()
            };
            let chk = find_check(check).unwrap();
            group.bench_function(BenchmarkId::new(name, check), |bench| {
                bench.iter(|| black_box(run_check(chk, &cfg).unwrap()))
            });
        }
    }
    group.finish();
}

criterion_group!(benches, elimination, monotonicity, checks);
criterion_main!(benches);
