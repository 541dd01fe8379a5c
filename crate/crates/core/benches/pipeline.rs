use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use spdc_oam::dispersion::Scenario;
use spdc_oam::oam::PolarGridSpec;
use spdc_oam::pipeline::{joint_spectrum_on, pump_spectrum_on, signal_spectrum_on};
use spdc_oam::{Execution, ExperimentConfig};
use std::hint::black_box;

const MODES: [(&str, Execution); 2] = [
    ("sequential", Execution::Sequential),
    ("parallel", Execution::Parallel),
];

fn signal_spectrum(c: &mut Criterion) {
    let cfg = ExperimentConfig::default();
    let grid = cfg.spectrum_grid().doubled();
    let mut g = c.benchmark_group("signal_spectrum_256x512");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| signal_spectrum_on(black_box(&cfg), &grid, exec).unwrap())
        });
    }
    g.finish();
}

fn joint_spectrum(c: &mut Criterion) {
    let mut cfg = ExperimentConfig::default();
    cfg.geometry.scenario = Scenario::FullConeNoncritical;
    let grid = cfg.joint_grid();
    let mut g = c.benchmark_group("joint_spectrum_32x16");
    g.sample_size(20);
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| joint_spectrum_on(black_box(&cfg), &grid, exec).unwrap())
        });
    }
    g.finish();
}

fn pump_walkoff(c: &mut Criterion) {
    let mut cfg = ExperimentConfig::default();
    cfg.crystal.walkoff_rho0 = 5f64.to_radians();
    let grid = PolarGridSpec::new(128, 256, 8.0 / cfg.pump.waist_w0);
    let mut g = c.benchmark_group("pump_walkoff_z5mm");
    for (name, exec) in MODES {
        g.bench_function(BenchmarkId::from_parameter(name), |b| {
            b.iter(|| pump_spectrum_on(black_box(&cfg), 5e-3, &grid, exec).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, signal_spectrum, joint_spectrum, pump_walkoff);
criterion_main!(benches);
