//! DFT building blocks and the combinatorics that governs their sizes,
//! correction factors and step sizes.
//!
//! A tight block of size `s` is the `s x s` DFT matrix with row `j` rescaled
//! by `sqrt(c_j / (n*s))`, where interior rows carry weight `m` and the first
//! and last rows carry integer correction factors. Columns are unit norm by
//! construction, which pins the last correction once the first is chosen.

use crate::entry::Entry;
use crate::error::{FrameError, Result};
use crate::scalar::{rat, Scalar};

/// A small dense block, stored column-major.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockMatrix {
    n_rows: usize,
    n_cols: usize,
    cols: Vec<Vec<Entry>>,
}

impl BlockMatrix {
    fn from_row_weights(weights: &[Scalar], n_cols: usize, root_order: usize) -> Result<Self> {
        let mut cols = Vec::with_capacity(n_cols);
        for c in 0..n_cols {
            let mut col = Vec::with_capacity(weights.len());
            for (r, w) in weights.iter().enumerate() {
                let power = (r * c) % root_order;
                col.push(Entry::new(w.clone(), root_order as u32, power as u32)?);
            }
            cols.push(col);
        }
        Ok(BlockMatrix {
            n_rows: weights.len(),
            n_cols,
            cols,
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn column(&self, c: usize) -> &[Entry] {
        &self.cols[c]
    }

    pub fn entry(&self, r: usize, c: usize) -> &Entry {
        &self.cols[c][r]
    }
}

/// The non-normalized `l x l` DFT matrix; entry (j, k) is `w_l^(j*k)`.
pub fn dft_matrix(l: usize) -> BlockMatrix {
    let weights = vec![Scalar::one(); l];
    BlockMatrix::from_row_weights(&weights, l, l).expect("unit radicands are valid")
}

/// Parameters shared by the tight-block operations: `k = m - n + 1` square
/// blocks of sizes `l` and `l + 1`, `l = floor(m / k)`.
pub(crate) fn tight_params(n: usize, m: usize) -> Result<(usize, usize)> {
    if n == 0 || m <= n || m >= 2 * n {
        return Err(FrameError::VectorCountOutOfRange(format!(
            "tight DFT blocks require n < m < 2n, got n={n}, m={m}"
        )));
    }
    let k = m - n + 1;
    Ok((k, m / k))
}

/// Minimizer of the squared-size sum over compositions of `m` into `k`
/// positive parts: `r` parts of size `l` followed by `k - r` of size `l + 1`.
pub fn optimal_block_sizes(m: usize, k: usize) -> Result<(usize, usize, Vec<usize>)> {
    if k == 0 || k > m {
        return Err(FrameError::VectorCountOutOfRange(format!(
            "cannot split {m} columns into {k} blocks of size >= 1"
        )));
    }
    let l = m / k;
    let r = k * (l + 1) - m;
    let mut sizes = vec![l; r];
    sizes.resize(k, l + 1);
    Ok((l, r, sizes))
}

fn check_size(n: usize, m: usize, size: usize) -> Result<usize> {
    let (_, l) = tight_params(n, m)?;
    if size != l && size != l + 1 {
        return Err(FrameError::InvalidBlockSize {
            n,
            m,
            size,
            expected_low: l,
            expected_high: l + 1,
        });
    }
    Ok(l)
}

/// Inclusive interval of integers admissible as first correction factor of a
/// block of the given size, i.e. exactly those for which both correction
/// factors land in [1, m] under the unit-column constraint.
pub fn correction_range(n: usize, m: usize, size: usize) -> Result<(i64, i64)> {
    let l = check_size(n, m, size)? as i64;
    let (n, m) = (n as i64, m as i64);
    if size as i64 == l {
        if l == 1 {
            // A 1x1 block scaled by sqrt(c/n) has a unit column only for c = n.
            return Ok((n, n));
        }
        Ok((l * (n - m) + m, m))
    } else {
        let t = l * (n - m) + n;
        if t > 0 {
            Ok((t, m))
        } else {
            Ok((1, n * (l + 1) - (l - 1) * m - 1))
        }
    }
}

/// Decrement from this block's first correction factor to the next block's,
/// assuming the shared row is completed to weight `m`.
pub fn step_size(n: usize, m: usize, size: usize) -> Result<i64> {
    let l = check_size(n, m, size)? as i64;
    let (n, m) = (n as i64, m as i64);
    if size as i64 == l {
        if l == 1 {
            return Ok(2 * n - m);
        }
        Ok(l * (n - m) + m)
    } else {
        Ok(l * (n - m) + n)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TightBlockSpec {
    pub n: usize,
    pub m: usize,
    pub size: usize,
    pub first_correction: i64,
}

impl TightBlockSpec {
    /// The last correction factor forced by unit columns.
    pub fn last_correction(&self) -> Result<i64> {
        check_size(self.n, self.m, self.size)?;
        if self.size == 1 {
            return Ok(self.first_correction);
        }
        let (n, m, s) = (self.n as i64, self.m as i64, self.size as i64);
        Ok(n * s - (s - 2) * m - self.first_correction)
    }
}

/// Altered DFT block of the requested size. Errors when either correction
/// factor falls outside [1, m], which is exactly `first_correction` leaving
/// [`correction_range`].
pub fn make_tight_block(spec: &TightBlockSpec) -> Result<BlockMatrix> {
    let (lo, hi) = correction_range(spec.n, spec.m, spec.size)?;
    let c1 = spec.first_correction;
    let out_of_range = |value: i64| FrameError::CorrectionOutOfRange {
        value: value.to_string(),
        lo: lo.to_string(),
        hi: hi.to_string(),
    };
    if spec.size == 1 {
        if c1 != spec.n as i64 {
            return Err(out_of_range(c1));
        }
        return BlockMatrix::from_row_weights(&[Scalar::one()], 1, 1);
    }
    if c1 < 1 || c1 > spec.m as i64 {
        return Err(out_of_range(c1));
    }
    let c_last = spec.last_correction()?;
    if c_last < 1 || c_last > spec.m as i64 {
        return Err(out_of_range(c1));
    }
    let den = (spec.n * spec.size) as i64;
    let mut weights = Vec::with_capacity(spec.size);
    weights.push(Scalar::Exact(rat(c1, den)));
    for _ in 1..spec.size - 1 {
        weights.push(Scalar::Exact(rat(spec.m as i64, den)));
    }
    weights.push(Scalar::Exact(rat(c_last, den)));
    BlockMatrix::from_row_weights(&weights, spec.size, spec.size)
}

#[derive(Clone, Debug, PartialEq)]
pub struct GeneralBlockSpec {
    /// Row weights lambda_1..lambda_L, all positive.
    pub lams: Vec<Scalar>,
    /// First correction factor, 0 < c_1 <= lambda_1.
    pub first_correction: Scalar,
}

impl GeneralBlockSpec {
    /// The last correction forced by unit columns:
    /// `c_L = L - c_1 - sum(lambda_2..lambda_{L-1})`.
    pub fn last_correction(&self) -> Scalar {
        let l = self.lams.len();
        if l == 1 {
            return self.first_correction.clone();
        }
        let interior = self.lams[1..l - 1]
            .iter()
            .fold(Scalar::zero(), |acc, v| &acc + v);
        &(&Scalar::from_int(l as i64) - &self.first_correction) - &interior
    }
}

/// General DFT block for arbitrary positive row weights. The first row is
/// scaled by `sqrt(c_1/L)`, interior row `j` by `sqrt(lambda_j/L)` and the
/// last row by the forced `sqrt(c_L/L)`; errors unless `0 < c_L <= lambda_L`.
pub fn make_general_block(spec: &GeneralBlockSpec) -> Result<BlockMatrix> {
    let l = spec.lams.len();
    if l == 0 {
        return Err(FrameError::InvalidBlock("empty weight list".into()));
    }
    for (i, v) in spec.lams.iter().enumerate() {
        if !v.is_positive() {
            return Err(FrameError::InvalidBlock(format!(
                "row weight {v} at index {i} is not positive"
            )));
        }
    }
    let c1 = &spec.first_correction;
    if !c1.is_positive() || c1.compare(&spec.lams[0]).is_gt() {
        return Err(FrameError::CorrectionOutOfRange {
            value: c1.to_string(),
            lo: "0 (exclusive)".into(),
            hi: spec.lams[0].to_string(),
        });
    }
    let c_last = spec.last_correction();
    if !c_last.is_positive() || c_last.compare(spec.lams.last().unwrap()).is_gt() {
        return Err(FrameError::CorrectionOutOfRange {
            value: c_last.to_string(),
            lo: "0 (exclusive)".into(),
            hi: spec.lams.last().unwrap().to_string(),
        });
    }
    let mut weights = Vec::with_capacity(l);
    weights.push(c1.div_int(l as u64));
    for lam in &spec.lams[1..l.saturating_sub(1)] {
        weights.push(lam.div_int(l as u64));
    }
    if l >= 2 {
        weights.push(c_last.div_int(l as u64));
    }
    BlockMatrix::from_row_weights(&weights, l, l)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    fn row_inner(block: &BlockMatrix, r1: usize, r2: usize) -> Complex64 {
        (0..block.n_cols())
            .map(|c| block.entry(r1, c).value() * block.entry(r2, c).value().conj())
            .sum()
    }

    #[test]
    fn dft_trivial_sizes() {
        let f1 = dft_matrix(1);
        assert_eq!(f1.entry(0, 0), &Entry::real(Scalar::one()).unwrap());
        let f2 = dft_matrix(2);
        assert_eq!(f2.entry(0, 1), &Entry::real(Scalar::one()).unwrap());
        assert_eq!(f2.entry(1, 1), &Entry::real_negative(Scalar::one()).unwrap());
    }

    #[test]
    fn dft_rows_orthogonal() {
        // Oracle: direct complex summation of row inner products.
        let f3 = dft_matrix(3);
        for r1 in 0..3 {
            for r2 in 0..3 {
                if r1 != r2 {
                    assert!(row_inner(&f3, r1, r2).norm() <= 1e-15);
                }
            }
        }
    }

    #[test]
    fn dft_rows_orthogonal_up_to_64() {
        for l in 1..=64 {
            let f = dft_matrix(l);
            for r1 in 0..l {
                for r2 in r1 + 1..l {
                    assert!(
                        row_inner(&f, r1, r2).norm() <= 1e-12,
                        "rows {r1},{r2} of order {l}"
                    );
                }
            }
        }
    }

    // Oracle: exhaustive minimum of the squared-size sum over all
    // compositions of m into k positive parts.
    fn brute_min_square_sum(m: usize, k: usize) -> usize {
        fn go(m: usize, k: usize) -> usize {
            if k == 1 {
                return m * m;
            }
            (1..=m - k + 1)
                .map(|first| first * first + go(m - first, k - 1))
                .min()
                .unwrap()
        }
        go(m, k)
    }

    #[test]
    fn optimal_sizes_examples() {
        assert_eq!(
            optimal_block_sizes(10, 4).unwrap(),
            (2, 2, vec![2, 2, 3, 3])
        );
        assert_eq!(
            optimal_block_sizes(5, 5).unwrap(),
            (1, 5, vec![1, 1, 1, 1, 1])
        );
        let (l, r, sizes) = optimal_block_sizes(7, 3).unwrap();
        assert_eq!((l, r), (2, 2));
        assert_eq!(sizes, vec![2, 2, 3]);
        let square_sum: usize = sizes.iter().map(|s| s * s).sum();
        assert_eq!(square_sum, 17);
        assert_eq!(square_sum, brute_min_square_sum(7, 3));
        assert!(optimal_block_sizes(3, 4).is_err());
    }

    #[test]
    fn correction_range_examples() {
        assert_eq!(correction_range(4, 5, 2).unwrap(), (3, 5));
        assert_eq!(correction_range(4, 5, 3).unwrap(), (2, 5));
        // l*(n-m)+n <= 0 branch: the admissible integers are those keeping
        // both corrections in [1, m].
        assert_eq!(correction_range(7, 11, 3).unwrap(), (1, 9));
        assert!(correction_range(4, 5, 4).is_err());
        assert!(correction_range(4, 9, 2).is_err());
    }

    #[test]
    fn step_size_examples() {
        assert_eq!(step_size(4, 5, 2).unwrap(), 3);
        assert_eq!(step_size(4, 5, 3).unwrap(), 2);
        assert_eq!(step_size(7, 12, 2).unwrap(), 2);
        // Six size-2 blocks, steps telescope to m.
        assert_eq!(6 * step_size(7, 12, 2).unwrap(), 12);
    }

    #[test]
    fn tight_block_golden_2x2() {
        let block = make_tight_block(&TightBlockSpec {
            n: 4,
            m: 5,
            size: 2,
            first_correction: 5,
        })
        .unwrap();
        let five_eighths = Scalar::from_rat(5, 8);
        let three_eighths = Scalar::from_rat(3, 8);
        assert_eq!(block.entry(0, 0), &Entry::real(five_eighths.clone()).unwrap());
        assert_eq!(block.entry(0, 1), &Entry::real(five_eighths).unwrap());
        assert_eq!(block.entry(1, 0), &Entry::real(three_eighths.clone()).unwrap());
        assert_eq!(block.entry(1, 1), &Entry::real_negative(three_eighths).unwrap());
    }

    #[test]
    fn tight_block_golden_3x3() {
        let block = make_tight_block(&TightBlockSpec {
            n: 4,
            m: 5,
            size: 3,
            first_correction: 2,
        })
        .unwrap();
        assert_eq!(block.entry(0, 0).radicand(), &Scalar::from_rat(1, 6));
        for r in 1..3 {
            for c in 0..3 {
                assert_eq!(block.entry(r, c).radicand(), &Scalar::from_rat(5, 12));
            }
        }
        // Root powers follow the DFT pattern, reduced mod the order.
        assert_eq!(block.entry(2, 2).root_power(), 1);
        assert_eq!(block.entry(2, 2).root_order(), 3);
        assert_eq!(block.entry(2, 1).root_power(), 2);
    }

    #[test]
    fn tight_block_rejects_out_of_range() {
        let err = make_tight_block(&TightBlockSpec {
            n: 4,
            m: 5,
            size: 2,
            first_correction: 6,
        })
        .unwrap_err();
        assert!(matches!(err, FrameError::CorrectionOutOfRange { .. }));
    }

    #[test]
    fn tight_block_columns_unit_and_interior_rows_m_over_n() {
        for (n, m) in [(4usize, 5usize), (7, 10), (7, 11), (9, 13)] {
            let (_, l) = tight_params(n, m).unwrap();
            for size in [l, l + 1] {
                let (lo, hi) = correction_range(n, m, size).unwrap();
                for c1 in [lo, hi] {
                    let block = make_tight_block(&TightBlockSpec {
                        n,
                        m,
                        size,
                        first_correction: c1,
                    })
                    .unwrap();
                    for c in 0..size {
                        let sum = (0..size)
                            .fold(Scalar::zero(), |acc, r| &acc + block.entry(r, c).radicand());
                        assert_eq!(sum, Scalar::one());
                    }
                    for r in 1..size.saturating_sub(1) {
                        let sum = (0..size)
                            .fold(Scalar::zero(), |acc, c| &acc + block.entry(r, c).radicand());
                        assert_eq!(sum, Scalar::from_rat(m as i64, n as i64));
                    }
                }
            }
        }
    }

    #[test]
    fn general_block_hand_run() {
        let block = make_general_block(&GeneralBlockSpec {
            lams: vec![Scalar::from_rat(1, 2), Scalar::from_rat(3, 2)],
            first_correction: Scalar::from_rat(1, 2),
        })
        .unwrap();
        assert_eq!(block.entry(0, 0).radicand(), &Scalar::from_rat(1, 4));
        assert_eq!(block.entry(1, 0).radicand(), &Scalar::from_rat(3, 4));
        assert_eq!(block.entry(1, 1), &Entry::real_negative(Scalar::from_rat(3, 4)).unwrap());
    }

    #[test]
    fn general_block_symmetric_case_is_scaled_dft() {
        let block = make_general_block(&GeneralBlockSpec {
            lams: vec![Scalar::one(), Scalar::one()],
            first_correction: Scalar::one(),
        })
        .unwrap();
        for c in 0..2 {
            for r in 0..2 {
                assert_eq!(block.entry(r, c).radicand(), &Scalar::from_rat(1, 2));
            }
        }
        assert_eq!(block.entry(1, 1).root_order(), 2);
    }

    #[test]
    fn general_block_rejects_overweight_tail() {
        let err = make_general_block(&GeneralBlockSpec {
            lams: vec![
                Scalar::from_rat(1, 5),
                Scalar::one(),
                Scalar::one(),
                Scalar::from_rat(4, 5),
            ],
            first_correction: Scalar::from_rat(1, 5),
        })
        .unwrap_err();
        // c_4 = 4 - (1/5 + 1 + 1) = 9/5 > 4/5.
        assert!(matches!(err, FrameError::CorrectionOutOfRange { .. }));
    }
}
