//! Benchmarks for the heavy kernels: integer Smith forms, a full
//! spectral-sequence pipeline run, and the form census behind the
//! classification sequence.

use bordcalc::abelian::{smith_normal_form, IntMatrix};
use bordcalc::ahss::{CoeffChoice, Runner};
use bordcalc::picard::{ses_check, CyclicProduct};
use criterion::{criterion_group, criterion_main, BatchSize, Criterion};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::hint::black_box;
use std::path::PathBuf;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures")
        .join(name)
}

fn random_matrices(count: usize, dim: usize, seed: u64) -> Vec<IntMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let entries: Vec<i64> = (0..dim * dim).map(|_| rng.gen_range(-99..=99)).collect();
            IntMatrix::from_i64(dim, dim, &entries)
        })
        .collect()
}

fn bench_smith(c: &mut Criterion) {
    for dim in [4usize, 8] {
        let mats = random_matrices(32, dim, 7 + dim as u64);
        c.bench_function(&format!("smith_normal_form_{}x{}", dim, dim), |b| {
            b.iter(|| {
                for m in &mats {
                    let (_, d, _) = smith_normal_form(m);
                    black_box(d);
                }
            })
        });
    }
}

fn bench_pipeline(c: &mut Criterion) {
    let space = fixture("su.space");
    let hints = fixture("su.hints");
    c.bench_function("su_pipeline_full_run", |b| {
        b.iter_batched(
            Runner::new,
            |mut runner| {
                let run = runner
                    .run(&space, Some(&hints), &CoeffChoice::Spin, 8)
                    .unwrap();
                black_box(run.reports.len());
            },
            BatchSize::SmallInput,
        )
    });
}

fn bench_ses(c: &mut Criterion) {
    let pi0 = CyclicProduct::new(&[2, 4]);
    let pi1 = CyclicProduct::new(&[2, 2]);
    c.bench_function("ses_check_z2z4_z2z2", |b| {
        b.iter(|| black_box(ses_check(&pi0, &pi1).unwrap()))
    });
}

criterion_group!(benches, bench_smith, bench_pipeline, bench_ses);
criterion_main!(benches);
