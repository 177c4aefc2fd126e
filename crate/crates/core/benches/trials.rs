use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use localcut::generators::{circulant, pendant};
use localcut::global_vc::{vertex_connectivity_check, VcConfig};
use localcut::local_ec::local_ec;
use localcut::trials::{derive_seed, map_indexed, Execution};
use localcut::{LocalCutParams, Mode};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

const MODES: [(&str, Execution); 2] = [("serial", Execution::Serial), ("parallel", Execution::Parallel)];

fn pendant_trials(c: &mut Criterion) {
    let p = pendant();
    let params = LocalCutParams { x: p.a, nu: 3, k: 2, gamma: 0 };
    let mut group = c.benchmark_group("pendant_local_ec_256");
    for (name, exec) in MODES {
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| {
                map_indexed(exec, 256, |i| {
                    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(7, i as u64));
                    local_ec(&p.graph, params, Mode::Strict, &mut rng).unwrap().is_bot()
                })
            })
        });
    }
    group.finish();
}

fn vc_probes(c: &mut Criterion) {
    // 6-connected, so every probe runs to completion.
    let g = circulant(120, &[1, 2, 3]);
    let mut group = c.benchmark_group("vc_probes_circulant120");
    group.sample_size(10);
    for (name, exec) in MODES {
        let cfg = VcConfig { execution: exec, ..VcConfig::new(5, 0.2) };
        group.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| vertex_connectivity_check(&g, &cfg, &mut ChaCha8Rng::seed_from_u64(3)).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, pendant_trials, vc_probes);
criterion_main!(benches);
