use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;
use topoqec::harness::{run_threshold_experiment, DecoderKind, ExecutionMode, ExperimentConfig, NoiseFamily};
use topoqec::surface::CodeKind;

fn config(noise: NoiseFamily, size: usize) -> ExperimentConfig {
    ExperimentConfig {
        code: CodeKind::Toric,
        sizes: vec![size],
        p_min: 0.05,
        p_max: 0.1,
        steps: 2,
        trials: 200,
        noise,
        meas_ratio: 1.0,
        decoder: DecoderKind::Mwpm,
        rounds: None,
        seed: 1,
        out: None,
    }
}

fn threshold_modes(c: &mut Criterion) {
    let mut group = c.benchmark_group("threshold");
    group.sample_size(10);
    for (label, noise, size, scale) in
        [("iid-z", NoiseFamily::IidZ, 8, 1.0), ("phenomenological", NoiseFamily::Phenomenological, 4, 0.3)]
    {
        let mut cfg = config(noise, size);
        cfg.p_min *= scale;
        cfg.p_max *= scale;
        for (name, mode) in [("sequential", ExecutionMode::Sequential), ("parallel", ExecutionMode::Parallel)] {
            group.bench_with_input(BenchmarkId::new(name, label), &cfg, |b, cfg| {
                b.iter(|| run_threshold_experiment(black_box(cfg), mode).unwrap())
            });
        }
    }
    group.finish();
}

criterion_group!(benches, threshold_modes);
criterion_main!(benches);
