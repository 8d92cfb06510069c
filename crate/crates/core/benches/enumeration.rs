use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use otc_core::characters::oracle::oracle_spectrum;
use otc_core::characters::{enumerate_spectrum, Parallelism, ScreenTables, SpectrumConfig};
use otc_core::embeddings::{build_field, NumberField};
use otc_core::exactmath::RationalPolynomial;
use otc_core::units::{validate_subgroup, AlgebraicNumber, UnitSubgroup};

/// `x^n - 2` with `u = 2^(1/n) - 1`.
fn pure_power(n: usize) -> (NumberField, UnitSubgroup) {
    let mut f = vec![0i64; n + 1];
    f[0] = -2;
    f[n] = 1;
    let field = build_field(&RationalPolynomial::from_integers(&f), 128).unwrap();
    let mut u = vec![0i64; n];
    u[0] = -1;
    u[1] = 1;
    let g = validate_subgroup(&field, &[AlgebraicNumber::from_integers(&u)], 1e-9).unwrap();
    (field, g)
}

const MODES: [(&str, Parallelism); 2] = [
    ("sequential", Parallelism::Sequential),
    ("parallel", Parallelism::Parallel),
];

fn screen(c: &mut Criterion) {
    let mut group = c.benchmark_group("screen");
    for n in [13, 17] {
        let (f, g) = pure_power(n);
        let tables = ScreenTables::new(&f, &g, None, 2f64.powi(-30)).unwrap();
        for (name, mode) in MODES {
            group.bench_with_input(BenchmarkId::new(name, n), &mode, |b, &mode| {
                b.iter(|| tables.survivors(mode))
            });
        }
    }
    group.finish();
}

fn spectrum(c: &mut Criterion) {
    let mut group = c.benchmark_group("spectrum");
    group.sample_size(20);
    let (f, g) = pure_power(13);
    for (name, mode) in MODES {
        let config = SpectrumConfig {
            parallelism: mode,
            ..SpectrumConfig::default()
        };
        group.bench_function(BenchmarkId::new(name, 13), |b| {
            b.iter(|| enumerate_spectrum(&f, &g, &config).unwrap())
        });
    }
    group.finish();
}

fn oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    group.sample_size(20);
    let (f, g) = pure_power(7);
    for (name, mode) in MODES {
        group.bench_function(BenchmarkId::new(name, 7), |b| {
            b.iter(|| oracle_spectrum(&f, &g, 512, mode).unwrap())
        });
    }
    group.finish();
}

criterion_group!(benches, screen, spectrum, oracle);
criterion_main!(benches);
