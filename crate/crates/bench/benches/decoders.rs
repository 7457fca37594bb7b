use criterion::{black_box, criterion_group, criterion_main, Criterion};
use tgrand_core::pipeline::Decoder;
use tgrand_core::sim::{prepare_trial, run_trial, SimConfig};
use tgrand_core::syndrome::{sd_repair, SyndromeSystem};
use tgrand_core::tgrand::tg_repair;

fn config() -> SimConfig {
    SimConfig {
        n_list: vec![20],
        ..SimConfig::default()
    }
}

/// A trial with corrupted packets, so the searches have work to do.
fn busy_system(config: &SimConfig) -> SyndromeSystem {
    (0..)
        .map(|t| prepare_trial(config, 20, t).unwrap())
        .find(|s| s.batch.erroneous().len() >= 4)
        .map(|s| SyndromeSystem::from_received(&s.parity, s.batch.y(), s.batch.erroneous()).unwrap())
        .unwrap()
}

fn repair(c: &mut Criterion) {
    let config = config();
    let system = busy_system(&config);
    let params = config.channel().unwrap();
    c.bench_function("sd_repair", |b| {
        b.iter(|| sd_repair(black_box(&system), config.query_cap))
    });
    c.bench_function("tg_repair", |b| {
        b.iter(|| tg_repair(black_box(&system), &params, config.query_cap))
    });
}

fn trials(c: &mut Criterion) {
    let config = config();
    let mut group = c.benchmark_group("run_trial");
    for d in Decoder::ALL {
        let mut t = 0u64;
        group.bench_function(d.name(), |b| {
            b.iter(|| {
                t += 1;
                run_trial(&config, 20, d, t).unwrap()
            })
        });
    }
    group.finish();
}

criterion_group!(benches, repair, trials);
criterion_main!(benches);
