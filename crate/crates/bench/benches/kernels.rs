use std::hint::black_box;

use avset_core::exact::{avg_value_set_brute, chi_counts};
use avset_core::seed::seeded_a;
use avset_core::symcore::{assemble_r, build_h_integer};
use avset_core::varscan::{count_points, Evaluator};
use avset_core::{Budget, FamilySpec, FieldCtx, ScanMode, ScanOptions};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn spec(field: &str, d: usize, s: usize, seed: u64) -> FamilySpec {
    let f = FieldCtx::parse(field).unwrap();
    FamilySpec::new(&f, d, s, seeded_a(f.q(), s, seed)).unwrap()
}

fn field_ops(c: &mut Criterion) {
    let mut g = c.benchmark_group("field");
    for name in ["101", "3^5", "2^8"] {
        let f = FieldCtx::parse(name).unwrap();
        let q = f.q();
        g.bench_function(BenchmarkId::new("mul_add_sweep", name), |b| {
            b.iter(|| {
                let mut acc = 1u32;
                for x in 1..q {
                    acc = f.add(f.mul(acc, x), x);
                }
                black_box(acc)
            })
        });
    }
    g.finish();
}

fn exact_paths(c: &mut Criterion) {
    let mut g = c.benchmark_group("exact");
    g.sample_size(10);
    for (field, d, s) in [("13", 6, 2), ("16", 7, 3), ("27", 8, 4)] {
        let sp = spec(field, d, s, 1);
        let id = format!("q{field}_d{d}_s{s}");
        g.bench_function(BenchmarkId::new("brute", &id), |b| {
            b.iter(|| avg_value_set_brute(black_box(&sp), Budget::default()).unwrap())
        });
        g.bench_function(BenchmarkId::new("chi", &id), |b| {
            b.iter(|| chi_counts(black_box(&sp), d, Budget::default()).unwrap())
        });
    }
    g.finish();
}

fn symbolic(c: &mut Criterion) {
    let mut g = c.benchmark_group("symbolic");
    g.sample_size(10);
    g.bench_function("h_table_r8_d16", |b| b.iter(|| build_h_integer(black_box(8), 16).unwrap()));
    let sp = spec("27", 14, 6, 2);
    g.bench_function("assemble_q27_d14_s6_r12", |b| b.iter(|| assemble_r(black_box(&sp), 12).unwrap()));
    g.finish();
}

fn scans(c: &mut Criterion) {
    let mut g = c.benchmark_group("scan");
    g.sample_size(10);
    let sp = spec("11", 8, 3, 3);
    for (mode, evaluator, label) in [
        (ScanMode::Odometer, Evaluator::Symbolic, "odometer_symbolic"),
        (ScanMode::Orbit, Evaluator::Symbolic, "orbit_symbolic"),
        (ScanMode::Orbit, Evaluator::Remainder, "orbit_remainder"),
    ] {
        let opts = ScanOptions {
            mode,
            evaluator,
            budget: Budget::default(),
        };
        g.bench_function(BenchmarkId::new(label, "q11_d8_s3_r6"), |b| {
            b.iter(|| count_points(black_box(&sp), 6, opts).unwrap())
        });
    }
    g.finish();
}

criterion_group!(benches, field_ops, exact_paths, symbolic, scans);
criterion_main!(benches);
