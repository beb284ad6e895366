//! Construction and verification throughput, comparing the sequential and
//! parallel row-pair scans.
//!
//! Run with `cargo bench -p spectral-tetris`; add `--no-default-features`
//! to benchmark the sequential build alone.

use criterion::{black_box, criterion_group, criterion_main, Criterion};

use spectral_tetris::{dftst, gram_stats_seq, stc, tdftst, Spectrum};

fn construction(c: &mut Criterion) {
    c.bench_function("construct/tdftst 995x1000", |b| {
        b.iter(|| tdftst(black_box(995), black_box(1000)).unwrap())
    });
    let lam = Spectrum::tight(400, 1200).unwrap();
    c.bench_function("construct/stc tight 400x1200", |b| {
        b.iter(|| stc(black_box(&lam), false).unwrap())
    });
    // Each run of four values sums to 9, so the trace stays integral.
    let values: Vec<(i64, i64)> = (0..500)
        .map(|i| match i % 4 {
            0 => (5, 2),
            1 => (7, 4),
            2 => (13, 4),
            _ => (3, 2),
        })
        .collect();
    let lam = Spectrum::from_rationals(&values).unwrap();
    c.bench_function("construct/dftst mixed 500", |b| {
        b.iter(|| dftst(black_box(&lam)).unwrap())
    });
}

fn verification(c: &mut Criterion) {
    // Few large DFT blocks: the row-pair scan dominates.
    let frame = tdftst(995, 1000).unwrap();
    c.bench_function("gram/seq 995x1000", |b| {
        b.iter(|| gram_stats_seq(black_box(&frame)))
    });
    #[cfg(feature = "parallel")]
    c.bench_function("gram/par 995x1000", |b| {
        b.iter(|| spectral_tetris::gram_stats_par(black_box(&frame)))
    });
}

criterion_group!(benches, construction, verification);
criterion_main!(benches);
