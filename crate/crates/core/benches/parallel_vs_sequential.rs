use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use qudit_thresholds::clifford::enumerate_clifford;
use qudit_thresholds::data;
use qudit_thresholds::gatesearch::{optimize_gate, GateSearchConfig};
use qudit_thresholds::wigner::{negativity_scan, phase_point_spectrum_scan, preset_state};
use qudit_thresholds::witness::{certify, orbit_size, CertifyOptions};
use qudit_thresholds::Exec;

const MODES: [(&str, Exec); 2] = [
    ("sequential", Exec::Sequential),
    ("parallel", Exec::Parallel),
];

fn phase_space(c: &mut Criterion) {
    let mut g = c.benchmark_group("phase_space");
    g.sample_size(10);
    let rho = preset_state("nu1", 5).unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(
            BenchmarkId::new("negativity_scan_d5", name),
            &exec,
            |b, &e| b.iter(|| negativity_scan(&rho, e).unwrap()),
        );
        g.bench_with_input(
            BenchmarkId::new("spectrum_scan_d5", name),
            &exec,
            |b, &e| b.iter(|| phase_point_spectrum_scan(5, e).unwrap()),
        );
    }
    g.finish();
}

fn polytope(c: &mut Criterion) {
    let mut g = c.benchmark_group("polytope");
    g.sample_size(10);
    let group = enumerate_clifford(3, Exec::Parallel).unwrap();
    let vertices = group.choi_vertices(Exec::Parallel).unwrap();
    let (_, w) = data::qutrit_witnesses().unwrap().pop().unwrap();
    for (name, exec) in MODES {
        g.bench_with_input(
            BenchmarkId::new("enumerate_clifford_d5", name),
            &exec,
            |b, &e| b.iter(|| enumerate_clifford(5, e).unwrap()),
        );
        g.bench_with_input(BenchmarkId::new("certify_d3", name), &exec, |b, &e| {
            let opts = CertifyOptions {
                exec: e,
                ..Default::default()
            };
            b.iter(|| certify(&w, &vertices, &opts).unwrap())
        });
        g.bench_with_input(BenchmarkId::new("orbit_size_d3", name), &exec, |b, &e| {
            b.iter(|| orbit_size(&w, &group, e).unwrap())
        });
    }
    g.finish();
}

fn search(c: &mut Criterion) {
    let mut g = c.benchmark_group("gate_search");
    g.sample_size(10);
    let w = data::designated_facet(3).unwrap();
    let cfg = GateSearchConfig {
        restarts: 8,
        max_iters: 500,
        ..Default::default()
    };
    for (name, exec) in MODES {
        g.bench_with_input(BenchmarkId::new("optimize_d3", name), &exec, |b, &e| {
            b.iter(|| optimize_gate(&w, &cfg, e).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, phase_space, polytope, search);
criterion_main!(benches);
