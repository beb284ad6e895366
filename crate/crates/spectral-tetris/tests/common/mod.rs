//! Shared generators for randomized suites. Everything is seeded, so runs
//! are reproducible.
#![allow(dead_code)] // each test binary uses a subset

use rand::prelude::*;

use spectral_tetris::{rat, Scalar, Spectrum};

fn divisors(n: i64) -> Vec<i64> {
    (1..=n).filter(|d| n % d == 0).collect()
}

/// Random positive rational spectrum with denominators <= 12, integer trace
/// m >= n, n <= `max_n` and m <= 4n. All denominators divide one base, so
/// partial sums (and the trace-closing value) stay within the bound.
pub fn random_rational_spectrum(rng: &mut StdRng, max_n: usize) -> Spectrum {
    let n = rng.gen_range(1..=max_n);
    let base = rng.gen_range(1..=12i64);
    let dens = divisors(base);
    let mut values: Vec<(i64, i64)> = Vec::with_capacity(n);
    let mut trace = rat(0, 1);
    for _ in 0..n - 1 {
        let den = dens[rng.gen_range(0..dens.len())];
        let num = rng.gen_range(1..=4 * den);
        values.push((num, den));
        trace += rat(num, den);
    }
    // Close the trace to an integer >= n so every value stays positive.
    let floor: i64 =
        num_traits::ToPrimitive::to_i64(&trace.floor().numer().clone()).unwrap();
    let mut target = floor + rng.gen_range(1..=3i64);
    if target < n as i64 {
        target = n as i64;
    }
    let last = rat(target, 1) - trace;
    let num = num_traits::ToPrimitive::to_i64(last.numer()).unwrap();
    let den = num_traits::ToPrimitive::to_i64(last.denom()).unwrap();
    values.push((num, den));
    Spectrum::from_rationals(&values).unwrap()
}

/// Random decreasing spectrum with every eigenvalue in [2, 6] and
/// denominators <= 12.
pub fn random_decreasing_ge2_spectrum(rng: &mut StdRng, max_n: usize) -> Spectrum {
    let n = rng.gen_range(2..=max_n);
    let base = rng.gen_range(1..=12i64);
    let dens = divisors(base);
    let mut values: Vec<Scalar> = Vec::with_capacity(n);
    let mut trace = rat(0, 1);
    for _ in 0..n - 1 {
        let den = dens[rng.gen_range(0..dens.len())];
        let num = rng.gen_range(2 * den..=5 * den);
        values.push(Scalar::Exact(rat(num, den)));
        trace += rat(num, den);
    }
    let floor: i64 =
        num_traits::ToPrimitive::to_i64(&trace.floor().numer().clone()).unwrap();
    let target = floor + 3;
    let last = rat(target, 1) - trace;
    values.push(Scalar::Exact(last));
    values.sort_by(|a, b| b.compare(a));
    Spectrum::new(values).unwrap()
}

/// Robin-Hood transfers applied to `dims`: the result is always majorized by
/// the input and keeps every part positive.
pub fn random_majorized_profile(rng: &mut StdRng, dims: &[usize]) -> Vec<usize> {
    let mut d: Vec<usize> = dims.to_vec();
    let transfers = rng.gen_range(0..=2 * d.len());
    for _ in 0..transfers {
        let donors: Vec<usize> = (0..d.len()).filter(|&i| d[i] >= 2).collect();
        if donors.is_empty() {
            break;
        }
        let p = donors[rng.gen_range(0..donors.len())];
        if rng.gen_bool(0.3) {
            d[p] -= 1;
            d.push(1);
        } else {
            let receivers: Vec<usize> = (0..d.len()).filter(|&i| d[i] < d[p]).collect();
            if receivers.is_empty() {
                d[p] -= 1;
                d.push(1);
            } else {
                let q = receivers[rng.gen_range(0..receivers.len())];
                d[p] -= 1;
                d[q] += 1;
            }
        }
    }
    d
}
