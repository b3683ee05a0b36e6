//! Rayon path vs the sequential fallback on the three hot loops:
//! signature evaluation, KDE grid evaluation, and the pairwise L1 matrix.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use dtm_core::dtm::{self, Mass};
use dtm_core::kde::{self, BandwidthRule, GridSpec, Kernel};
use dtm_core::synth::{sample_space, AnalyticSpace, RngSeed};
use dtm_core::{analysis, geometry::PointCloud};

fn cloud(n: usize, stream: u64) -> PointCloud {
    sample_space(AnalyticSpace::UnitDiskQuadratic, n, RngSeed::new(42).with_stream(stream))
        .expect("sampling")
}

fn bench_signature(c: &mut Criterion) {
    let mut group = c.benchmark_group("dtm_signature");
    for &(n, m) in &[(2000usize, 1.0), (20_000, 0.002)] {
        let data = cloud(n, 0);
        let mass = Mass::new(m).unwrap();
        group.bench_with_input(BenchmarkId::new("parallel", format!("n{n}_m{m}")), &data, |b, d| {
            b.iter(|| dtm::signature(d, mass).unwrap())
        });
        group.bench_with_input(BenchmarkId::new("serial", format!("n{n}_m{m}")), &data, |b, d| {
            b.iter(|| dtm::signature_seq(d, mass).unwrap())
        });
    }
    group.finish();
}

fn bench_kde(c: &mut Criterion) {
    let mut group = c.benchmark_group("kde_estimate");
    let data = cloud(20_000, 1);
    let sig = dtm::signature(&data, Mass::new(1.0).unwrap()).unwrap();
    let bw = kde::bandwidth_select(&sig.values, BandwidthRule::SilvermanN5).unwrap();
    group.bench_function("parallel", |b| {
        b.iter(|| kde::kde_estimate(&sig.values, Kernel::Biweight, bw, GridSpec::default()).unwrap())
    });
    group.bench_function("serial", |b| {
        b.iter(|| {
            kde::kde_estimate_seq(&sig.values, Kernel::Biweight, bw, GridSpec::default()).unwrap()
        })
    });
    group.finish();
}

fn bench_pairwise(c: &mut Criterion) {
    let mut group = c.benchmark_group("pairwise_l1");
    let mass = Mass::new(1.0).unwrap();
    let estimates: Vec<_> = (0..12)
        .map(|i| {
            let sig = dtm::signature(&cloud(1500, 10 + i), mass).unwrap();
            let bw = kde::bandwidth_select(&sig.values, BandwidthRule::SilvermanN5).unwrap();
            kde::kde_estimate(&sig.values, Kernel::Biweight, bw, GridSpec::default()).unwrap()
        })
        .collect();
    let labels: Vec<String> = (0..12).map(|i| format!("c{i}")).collect();
    group.bench_function("parallel", |b| {
        b.iter(|| analysis::pairwise_l1(&estimates, &labels).unwrap())
    });
    group.bench_function("serial", |b| {
        b.iter(|| analysis::pairwise_l1_seq(&estimates, &labels).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_signature, bench_kde, bench_pairwise);
criterion_main!(benches);
