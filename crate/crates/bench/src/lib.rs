//! Benchmarks for the solvers, checkers and Monte Carlo driver.

use std::hint::black_box;

use criterion::{BenchmarkId, Criterion};

use sdchan_core::capacity::{blahut_arimoto, gelfand_pinsker_capacity, shannon_zef_fl_lp, BaOptions, GpOptions, SolverOptions};
use sdchan_core::fixtures::{bsc, ch_ex1, pentagon, random_channel, random_dmc, stuck_at};
use sdchan_core::positivity;
use sdchan_core::simulation::{monte_carlo, DisproverPlan, HanSatoPlan, Link, Protocol, StopRule, Theorem5Plan};
use sdchan_core::{Regime, SiModel};

pub fn capacity(c: &mut Criterion) {
    let mut g = c.benchmark_group("capacity");
    g.bench_function("blahut_arimoto/bsc", |b| {
        let d = bsc(0.11);
        b.iter(|| blahut_arimoto(black_box(&d), &BaOptions::default()))
    });
    g.bench_function("blahut_arimoto/random_3x3", |b| {
        let d = random_dmc(1, 3, 3);
        b.iter(|| blahut_arimoto(black_box(&d), &BaOptions::default()))
    });
    g.bench_function("zero_error_lp/pentagon", |b| {
        let d = pentagon();
        b.iter(|| shannon_zef_fl_lp(black_box(&d)))
    });
    g.sample_size(10);
    for restarts in [4, 32] {
        let opts = SolverOptions {
            gp: GpOptions {
                restarts,
                ..GpOptions::default()
            },
            ..SolverOptions::default()
        };
        g.bench_with_input(BenchmarkId::new("gelfand_pinsker/stuck_at", restarts), &opts, |b, opts| {
            let ch = stuck_at(0.2);
            b.iter(|| gelfand_pinsker_capacity(black_box(&ch), opts))
        });
    }
    g.finish();
}

pub fn positivity(c: &mut Criterion) {
    let channels: Vec<_> = (0..64).map(|seed| random_channel(seed, 3, 3, 3)).collect();
    c.bench_function("positivity/all_models_64_channels", |b| {
        b.iter(|| {
            let mut positive = 0;
            for ch in &channels {
                for si in SiModel::ALL {
                    for regime in Regime::ALL {
                        positive += positivity::positivity(ch, si, regime).map_or(0, |v| v.decision.is_positive() as usize);
                    }
                }
            }
            positive
        })
    });
}

pub fn simulation(c: &mut Criterion) {
    let ch = ch_ex1(0.5);
    let protocols = [
        Protocol::Disprover(DisproverPlan::new(Link::Averaged(ch.clone())).expect("averaged link has a disprover")),
        Protocol::Theorem5(Theorem5Plan::new(&ch, StopRule::Relaxed).expect("state group exists")),
        Protocol::HanSato(HanSatoPlan::new(&ch, SiModel::NONE, 4, 20, 7, 0).expect("positive channel")),
    ];
    let mut g = c.benchmark_group("monte_carlo");
    g.sample_size(20);
    for p in &protocols {
        g.bench_function(p.name(), |b| b.iter(|| monte_carlo(black_box(p), 10_000, 42)));
    }
    g.finish();
}
