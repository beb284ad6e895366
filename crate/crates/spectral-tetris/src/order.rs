//! Blockwise eigenvalue ordering: permutations maximizing the number of
//! integer partial sums, which is what makes the tetris output sparsest.
//!
//! An ordering has an integer prefix exactly where a run of eigenvalues with
//! integral total closes, so the problem is to partition the multiset of
//! fractional parts into as many zero-sum (mod 1) groups as possible.
//! Eigenvalues with zero fractional part always form singleton groups. The
//! remaining items are solved exactly by a subset-sum dynamic program for up
//! to [`EXACT_LIMIT`] items; larger inputs fall back to a greedy matcher and
//! the result is flagged as uncertified.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive};

use crate::scalar::Scalar;
use crate::spectrum::Spectrum;

/// Maximum number of fractional items handled by the exact search.
pub const EXACT_LIMIT: usize = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OrderResult {
    /// Indices into the input spectrum, in the suggested order.
    pub permutation: Vec<usize>,
    /// Number of integral prefix sums the suggested order achieves
    /// (the full sum always counts as one).
    pub integral_prefixes: usize,
    /// True when the exact search proved the count maximal.
    pub certified: bool,
}

/// Suggests an eigenvalue ordering with a maximal number of integer partial
/// sums. Exact for spectra with at most [`EXACT_LIMIT`] non-integral values,
/// heuristic (and flagged so) beyond that.
pub fn blockwise_order(lam: &Spectrum) -> OrderResult {
    let mut zero_frac = Vec::new();
    let mut items = Vec::new();
    for (i, v) in lam.values().iter().enumerate() {
        let f = v.fract();
        if f.is_zero_within(1e-9) {
            zero_frac.push(i);
        } else {
            items.push((i, f));
        }
    }

    let exact_inputs: Option<Vec<(usize, &BigInt, &BigInt)>> = items
        .iter()
        .map(|(i, f)| f.as_exact().map(|r| (*i, r.numer(), r.denom())))
        .collect();

    let (groups, certified) = match exact_inputs {
        Some(fracs) if fracs.len() <= EXACT_LIMIT => (exact_groups(&fracs), true),
        _ => (greedy_groups(&items), false),
    };

    let mut all_groups: Vec<Vec<usize>> = zero_frac.into_iter().map(|i| vec![i]).collect();
    all_groups.extend(groups);
    for g in &mut all_groups {
        g.sort_unstable();
    }
    all_groups.sort_by_key(|g| g[0]);
    let permutation: Vec<usize> = all_groups.into_iter().flatten().collect();
    let integral_prefixes = count_integral_prefixes(lam, &permutation);
    OrderResult {
        permutation,
        integral_prefixes,
        certified,
    }
}

/// Integral prefix sums of `lam` read in the order given by `perm`.
pub fn count_integral_prefixes(lam: &Spectrum, perm: &[usize]) -> usize {
    let mut sum = Scalar::zero();
    let mut count = 0;
    for &i in perm {
        sum = &sum + lam.value(i);
        if sum.is_integer_within(1e-9) {
            count += 1;
        }
    }
    count
}

/// Maximum zero-sum grouping via a bitmask DP; fractional parts are reduced
/// to integers modulo the common denominator.
fn exact_groups(fracs: &[(usize, &BigInt, &BigInt)]) -> Vec<Vec<usize>> {
    let count = fracs.len();
    if count == 0 {
        return Vec::new();
    }
    let mut common = BigInt::one();
    for (_, _, den) in fracs {
        common = common.lcm(den);
    }
    let residues: Vec<u64> = fracs
        .iter()
        .map(|(_, num, den)| {
            let scaled = *num * &common / *den;
            scaled
                .mod_floor(&common)
                .to_u64()
                .expect("denominators stay desk-scale")
        })
        .collect();
    let modulus = common.to_u64().expect("denominators stay desk-scale");

    let full = (1usize << count) - 1;
    let mut frac_sum = vec![0u64; full + 1];
    for mask in 1..=full {
        let low = mask.trailing_zeros() as usize;
        frac_sum[mask] = (frac_sum[mask & (mask - 1)] + residues[low]) % modulus;
    }
    // dp[mask] = max number of zero-sum groups exactly covering mask, or -1.
    let mut dp = vec![-1i32; full + 1];
    let mut pick = vec![0usize; full + 1];
    dp[0] = 0;
    for mask in 1..=full {
        let low_bit = 1usize << mask.trailing_zeros();
        let rest = mask & !low_bit;
        let mut sub = rest;
        loop {
            let group = sub | low_bit;
            if frac_sum[group] == 0 && dp[mask & !group] >= 0 && dp[mask & !group] + 1 > dp[mask] {
                dp[mask] = dp[mask & !group] + 1;
                pick[mask] = group;
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
    }
    debug_assert!(dp[full] >= 1, "the whole set always sums to an integer");

    let mut groups = Vec::new();
    let mut mask = full;
    while mask != 0 {
        let group = pick[mask];
        groups.push(
            (0..count)
                .filter(|i| group & (1 << i) != 0)
                .map(|i| fracs[i].0)
                .collect(),
        );
        mask &= !group;
    }
    groups
}

/// Close-or-open greedy on descending fractional parts; unclosed groups are
/// merged into one trailing group (the total is integral).
fn greedy_groups(items: &[(usize, Scalar)]) -> Vec<Vec<usize>> {
    let mut sorted: Vec<&(usize, Scalar)> = items.iter().collect();
    sorted.sort_by(|a, b| b.1.compare(&a.1));
    let mut closed: Vec<Vec<usize>> = Vec::new();
    let mut open: Vec<(Vec<usize>, Scalar)> = Vec::new();
    for (idx, f) in sorted {
        let close_idx = open
            .iter()
            .position(|slot| (&slot.1 + f).is_integer_within(1e-9));
        match close_idx {
            Some(pos) => {
                let (mut group, _) = open.swap_remove(pos);
                group.push(*idx);
                closed.push(group);
            }
            None => open.push((vec![*idx], f.clone())),
        }
    }
    if !open.is_empty() {
        closed.push(open.into_iter().flat_map(|(g, _)| g).collect());
    }
    closed
}

#[cfg(test)]
mod tests {
    use super::*;

    // Oracle: brute force over all permutations.
    fn brute_best(lam: &Spectrum) -> usize {
        fn permutations(n: usize) -> Vec<Vec<usize>> {
            if n == 1 {
                return vec![vec![0]];
            }
            let mut out = Vec::new();
            for p in permutations(n - 1) {
                for pos in 0..=p.len() {
                    let mut q = p.clone();
                    q.insert(pos, n - 1);
                    out.push(q);
                }
            }
            out
        }
        permutations(lam.n())
            .iter()
            .map(|p| count_integral_prefixes(lam, p))
            .max()
            .unwrap()
    }

    #[test]
    fn all_integers_keep_identity() {
        let lam = Spectrum::from_ints(&[2, 2, 2]).unwrap();
        let r = blockwise_order(&lam);
        assert_eq!(r.permutation, vec![0, 1, 2]);
        assert_eq!(r.integral_prefixes, 3);
        assert!(r.certified);
    }

    #[test]
    fn mixed_example_has_single_integral_prefix() {
        let lam = Spectrum::from_rationals(&[(5, 2), (10, 3), (13, 6)]).unwrap();
        let r = blockwise_order(&lam);
        assert_eq!(r.integral_prefixes, 1);
        assert_eq!(r.integral_prefixes, brute_best(&lam));
        assert!(r.certified);
    }

    #[test]
    fn pair_plus_integer() {
        let lam = Spectrum::from_rationals(&[(3, 2), (5, 2), (2, 1)]).unwrap();
        let r = blockwise_order(&lam);
        assert_eq!(r.permutation, vec![0, 1, 2]);
        assert_eq!(r.integral_prefixes, 2);
        assert_eq!(r.integral_prefixes, brute_best(&lam));
    }

    #[test]
    fn matches_brute_force_on_small_spectra() {
        for lam in [
            Spectrum::from_rationals(&[(1, 2), (1, 2), (1, 3), (2, 3), (1, 1)]).unwrap(),
            Spectrum::from_rationals(&[(7, 6), (5, 6), (3, 2), (1, 2), (1, 1)]).unwrap(),
            Spectrum::from_rationals(&[(5, 4), (3, 4), (5, 4), (3, 4)]).unwrap(),
            Spectrum::from_rationals(&[(1, 3), (1, 3), (1, 3), (2, 1)]).unwrap(),
        ] {
            let r = blockwise_order(&lam);
            assert!(r.certified);
            assert_eq!(r.integral_prefixes, brute_best(&lam), "{:?}", lam.values());
        }
    }

    #[test]
    fn heuristic_path_still_valid() {
        let lam = Spectrum::from_f64s(&[1.5, 1.5, 2.0]).unwrap();
        let r = blockwise_order(&lam);
        assert!(!r.certified);
        assert_eq!(r.integral_prefixes, 2);
        let mut sorted = r.permutation.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, vec![0, 1, 2]);
    }
}
