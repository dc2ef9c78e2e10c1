//! Parallel against sequential execution on the three bulk workloads:
//! `X₂` window enumeration, toric enumeration, and the oracle scan.

use criterion::{black_box, criterion_group, criterion_main, BenchmarkId, Criterion};
use exseq_core::cohomology::oracle::cotangent_report;
use exseq_core::toric::enumerate_mes;
use exseq_core::variety::ToricSpec;
use exseq_core::x2::enumerate_mes_x2;
use exseq_core::Exec;

const MODES: [(&str, Exec); 2] = [("sequential", Exec::Sequential), ("parallel", Exec::Parallel)];

fn bench_x2_enumeration(c: &mut Criterion) {
    let mut group = c.benchmark_group("x2_enumeration");
    group.sample_size(10);
    for w in [6i64, 8] {
        for (name, exec) in MODES {
            group.bench_with_input(BenchmarkId::new(name, w), &w, |b, &w| {
                b.iter(|| enumerate_mes_x2(black_box(w), exec).unwrap().len())
            });
        }
    }
    group.finish();
}

fn bench_toric_enumeration(c: &mut Criterion) {
    let spec = ToricSpec::new(3, 3, &[0, -1, -2]).unwrap();
    let mut group = c.benchmark_group("toric_enumeration");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| enumerate_mes(black_box(&spec), 3, exec).unwrap().len()));
    }
    group.finish();
}

fn bench_oracle_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("cotangent_oracle_scan");
    group.sample_size(10);
    for (name, exec) in MODES {
        group.bench_function(name, |b| b.iter(|| cotangent_report(2, black_box(8), exec).unwrap().points));
    }
    group.finish();
}

criterion_group!(benches, bench_x2_enumeration, bench_toric_enumeration, bench_oracle_scan);
criterion_main!(benches);
