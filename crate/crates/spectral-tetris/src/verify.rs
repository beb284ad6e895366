//! Structural verification: unit columns, orthogonal rows, prescribed row
//! norms, fusion partitions and sparsity counts.
//!
//! The frame operator F F* is never densified. Each row pairs only with the
//! rows reached through its columns' interval supports, so the cross-term
//! scan costs O(nnz * max column support). Row checks are independent and,
//! with the `parallel` feature (on by default), run on a rayon pool; the
//! sequential fallback computes the identical result.

use num_complex::Complex64;
use num_integer::Integer;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

use crate::blocks;
use crate::error::{FrameError, Result};
use crate::fusion::FusionPartition;
use crate::matrix::{BlockKind, Constructor, SynthesisMatrix};
use crate::scalar::Scalar;
use crate::spectrum::Spectrum;

pub const DEFAULT_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub name: String,
    /// True when the residual was computed in exact radicand arithmetic.
    pub exact: bool,
    pub pass: bool,
    pub max_residual: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub checks: Vec<CheckResult>,
    pub tolerance: f64,
}

impl VerificationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.pass)
    }

    fn push(&mut self, name: &str, exact: bool, max_residual: f64) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            exact,
            pass: max_residual <= self.tolerance,
            max_residual,
        });
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparsityReport {
    pub structural_nonzeros: usize,
    /// Closed-form count for coprime tight constructions.
    pub formula_value: Option<usize>,
    pub optimal: Option<bool>,
}

/// Flattened complex view of the matrix, column-major within each row list.
struct RowView {
    /// Per column: (start row, materialized values).
    col_values: Vec<(usize, Vec<Complex64>)>,
    /// Per row: (col, value at this row).
    rows: Vec<Vec<(usize, Complex64)>>,
}

impl RowView {
    fn new(f: &SynthesisMatrix) -> Self {
        let col_values: Vec<(usize, Vec<Complex64>)> = (0..f.n_cols())
            .map(|c| {
                let (start, _) = f.column_entries(c);
                (start, f.column_values(c))
            })
            .collect();
        let mut rows = vec![Vec::new(); f.n_rows()];
        for (c, (start, values)) in col_values.iter().enumerate() {
            for (i, v) in values.iter().enumerate() {
                rows[start + i].push((c, *v));
            }
        }
        RowView { col_values, rows }
    }

    /// For row `i`: the float diagonal entry of F F* and the largest
    /// |(F F*)_{i,j}| over j > i. Accumulation order is fixed by the column
    /// order, so the result does not depend on scheduling.
    fn row_stat(&self, i: usize) -> (f64, f64) {
        let mut diag = 0.0;
        let mut cross: Vec<(usize, Complex64)> = Vec::new();
        for &(c, v) in &self.rows[i] {
            diag += v.norm_sqr();
            let (start, values) = &self.col_values[c];
            for (offset, w) in values.iter().enumerate() {
                let j = start + offset;
                if j > i {
                    let term = v * w.conj();
                    match cross.iter_mut().find(|(jj, _)| *jj == j) {
                        Some((_, acc)) => *acc += term,
                        None => cross.push((j, term)),
                    }
                }
            }
        }
        let max_offdiag = cross.iter().map(|(_, z)| z.norm()).fold(0.0, f64::max);
        (diag, max_offdiag)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct GramStats {
    /// Float diagonal of F F*.
    pub diag: Vec<f64>,
    /// Largest off-diagonal modulus of F F*.
    pub max_offdiag: f64,
}

/// Sequential row-pair scan.
pub fn gram_stats_seq(f: &SynthesisMatrix) -> GramStats {
    let view = RowView::new(f);
    collect_stats((0..f.n_rows()).map(|i| view.row_stat(i)))
}

/// Parallel row-pair scan; identical output to [`gram_stats_seq`].
#[cfg(feature = "parallel")]
pub fn gram_stats_par(f: &SynthesisMatrix) -> GramStats {
    let view = RowView::new(f);
    let stats: Vec<(f64, f64)> = (0..f.n_rows())
        .into_par_iter()
        .map(|i| view.row_stat(i))
        .collect();
    collect_stats(stats.into_iter())
}

fn collect_stats(stats: impl Iterator<Item = (f64, f64)>) -> GramStats {
    let mut diag = Vec::new();
    let mut max_offdiag = 0.0f64;
    for (d, o) in stats {
        diag.push(d);
        max_offdiag = max_offdiag.max(o);
    }
    GramStats { diag, max_offdiag }
}

/// Row-pair scan using the parallel pool when the feature is enabled.
pub fn gram_stats(f: &SynthesisMatrix) -> GramStats {
    #[cfg(feature = "parallel")]
    {
        gram_stats_par(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        gram_stats_seq(f)
    }
}

/// Largest entrywise deviation of F F* from diag(lambda), in floats.
pub fn gram_diag_residual(f: &SynthesisMatrix, lam: &Spectrum) -> Result<f64> {
    check_dims(f, lam)?;
    let stats = gram_stats(f);
    let diag_dev = stats
        .diag
        .iter()
        .zip(lam.values())
        .map(|(d, l)| (d - l.to_f64()).abs())
        .fold(0.0, f64::max);
    Ok(diag_dev.max(stats.max_offdiag))
}

fn check_dims(f: &SynthesisMatrix, lam: &Spectrum) -> Result<()> {
    if f.n_rows() != lam.n() || f.n_cols() != lam.m() {
        return Err(FrameError::DimensionMismatch(format!(
            "matrix is {} x {} but spectrum has n={}, m={}",
            f.n_rows(),
            f.n_cols(),
            lam.n(),
            lam.m()
        )));
    }
    Ok(())
}

fn exact_deviation(actual: &Scalar, expected: &Scalar) -> f64 {
    let diff = actual - expected;
    if diff.is_zero() {
        0.0
    } else {
        diff.to_f64().abs()
    }
}

/// Verifies unit columns, row orthogonality, prescribed row norms and the
/// trace. Column and row norms are checked in exact radicand arithmetic
/// whenever the matrix and spectrum are fully rational.
pub fn verify_frame(f: &SynthesisMatrix, lam: &Spectrum, tol: f64) -> Result<VerificationReport> {
    check_dims(f, lam)?;
    let mut report = VerificationReport {
        checks: Vec::new(),
        tolerance: tol,
    };
    let all_exact = f.is_all_exact() && lam.is_all_exact();

    if all_exact {
        let res = (0..f.n_cols())
            .map(|c| exact_deviation(&f.column_radicand_sum(c), &Scalar::one()))
            .fold(0.0, f64::max);
        report.push("column_norms (exact)", true, res);
        let res = f
            .row_radicand_sums()
            .iter()
            .zip(lam.values())
            .map(|(s, l)| exact_deviation(s, l))
            .fold(0.0, f64::max);
        report.push("row_norms (exact)", true, res);
    } else {
        let res = (0..f.n_cols())
            .map(|c| {
                let norm: f64 = f.column_values(c).iter().map(|v| v.norm_sqr()).sum();
                (norm - 1.0).abs()
            })
            .fold(0.0, f64::max);
        report.push("column_norms", false, res);
    }

    let stats = gram_stats(f);
    report.push("row_orthogonality", false, stats.max_offdiag);
    if !all_exact {
        let res = stats
            .diag
            .iter()
            .zip(lam.values())
            .map(|(d, l)| (d - l.to_f64()).abs())
            .fold(0.0, f64::max);
        report.push("row_norms", false, res);
    }
    let trace: f64 = stats.diag.iter().sum();
    report.push("trace", false, (trace - lam.m() as f64).abs());
    Ok(report)
}

/// Verifies a fusion partition: group sizes, per-group orthonormality, and
/// the fusion frame operator (equal to F F* because the groups cover every
/// column).
pub fn verify_fusion(
    f: &SynthesisMatrix,
    partition: &FusionPartition,
    dims: &[usize],
    lam: &Spectrum,
    tol: f64,
) -> Result<VerificationReport> {
    check_dims(f, lam)?;
    partition.validate_cover(f.n_cols())?;
    let mut report = VerificationReport {
        checks: Vec::new(),
        tolerance: tol,
    };

    let groups = partition.groups();
    let size_residual = if groups.len() == dims.len() {
        groups
            .iter()
            .zip(dims)
            .map(|(g, d)| g.len().abs_diff(*d) as f64)
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    report.push("group_sizes", true, size_residual);

    let mut gram_res = 0.0f64;
    for group in groups {
        let values: Vec<Vec<Complex64>> = group.iter().map(|&c| f.column_values(c)).collect();
        let supports: Vec<_> = group.iter().map(|&c| f.column_support(c)).collect();
        for (a, (va, sa)) in values.iter().zip(&supports).enumerate() {
            let norm: f64 = va.iter().map(|v| v.norm_sqr()).sum();
            gram_res = gram_res.max((norm - 1.0).abs());
            for (vb, sb) in values.iter().zip(&supports).skip(a + 1) {
                let lo = sa.start.max(sb.start);
                let hi = sa.end.min(sb.end);
                let mut inner = Complex64::new(0.0, 0.0);
                for r in lo..hi {
                    inner += va[r - sa.start] * vb[r - sb.start].conj();
                }
                gram_res = gram_res.max(inner.norm());
            }
        }
    }
    report.push("group_gram", false, gram_res);

    let res = gram_diag_residual(f, lam)?;
    report.push("fusion_operator", false, res);
    Ok(report)
}

/// Structural nonzero count, with the closed-form comparison for coprime
/// tight DFT constructions: `r l^2 + (k - r)(l + 1)^2`.
pub fn sparsity(f: &SynthesisMatrix) -> SparsityReport {
    let nnz = f.nnz();
    let formula = match f.constructor() {
        Some(Constructor::Tdftst) => {
            let (n, m) = (f.n_rows(), f.n_cols());
            if n > 0 && n < m && m < 2 * n && n.gcd(&m) == 1 {
                let k = m - n + 1;
                let l = m / k;
                let r = k * (l + 1) - m;
                Some(r * l * l + (k - r) * (l + 1) * (l + 1))
            } else {
                None
            }
        }
        _ => None,
    };
    SparsityReport {
        structural_nonzeros: nnz,
        formula_value: formula,
        optimal: formula.map(|v| v == nnz),
    }
}

/// Sum of the step sizes recorded in a tight blockLog; per block-diagonal
/// copy the trajectory starts at m' and telescopes back to it.
pub fn blocklog_step_telescoping(f: &SynthesisMatrix) -> Result<()> {
    let dft_blocks: Vec<_> = f
        .block_log()
        .iter()
        .filter(|b| b.kind == BlockKind::TightDft)
        .collect();
    if dft_blocks.is_empty() {
        return Ok(());
    }
    let n = f.n_rows();
    let m = f.n_cols();
    let g = n.gcd(&m);
    let (n_base, m_base) = (n / g, m / g);
    let mut expected = m_base as i64;
    let mut total_steps = 0i64;
    for block in &dft_blocks {
        let x = block
            .first_correction
            .as_exact()
            .and_then(|r| r.is_integer().then(|| r.to_integer()))
            .and_then(|i| num_traits::ToPrimitive::to_i64(&i))
            .ok_or_else(|| FrameError::Internal("non-integer tight correction".into()))?;
        if x != expected {
            return Err(FrameError::Internal(format!(
                "first correction {x} does not continue the trajectory (expected {expected})"
            )));
        }
        let step = blocks::step_size(n_base, m_base, block.size)?;
        total_steps += step;
        expected = x - step;
        if expected == 0 {
            expected = m_base as i64;
        }
    }
    if total_steps != m as i64 {
        return Err(FrameError::Internal(format!(
            "step sizes telescope to {total_steps}, expected {m}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{dftst, stc, tdftst};
    use crate::entry::Entry;
    use crate::fusion::FusionPartition;

    fn identity(n: usize) -> SynthesisMatrix {
        SynthesisMatrix::from_entries(
            n,
            n,
            (0..n).map(|i| (i, i, Entry::real(Scalar::one()).unwrap())),
        )
        .unwrap()
    }

    #[test]
    fn identity_verifies_exactly() {
        let f = identity(3);
        let lam = Spectrum::from_ints(&[1, 1, 1]).unwrap();
        assert_eq!(gram_diag_residual(&f, &lam).unwrap(), 0.0);
        let report = verify_frame(&f, &lam, DEFAULT_TOLERANCE).unwrap();
        assert!(report.passed());
        assert!(report.checks.iter().any(|c| c.exact));
    }

    #[test]
    fn golden_tight_4_5_verifies() {
        let f = tdftst(4, 5).unwrap();
        let lam = Spectrum::tight(4, 5).unwrap();
        let report = verify_frame(&f, &lam, 1e-12).unwrap();
        assert!(report.passed(), "{report:?}");
    }

    #[test]
    fn golden_mixed_spectrum_verifies() {
        let lam = Spectrum::from_rationals(&[(5, 2), (10, 3), (13, 6)]).unwrap();
        let f = stc(&lam, false).unwrap();
        assert!(gram_diag_residual(&f, &lam).unwrap() <= 1e-12);
    }

    #[test]
    fn perturbed_entry_fails_column_norms() {
        let f = tdftst(4, 5).unwrap();
        let mut entries: Vec<(usize, usize, Entry)> = f
            .iter_entries()
            .map(|(r, c, e)| (r, c, e.clone()))
            .collect();
        for (r, c, e) in entries.iter_mut() {
            if *r == 1 && *c == 1 {
                let v = e.value().re + 1e-3;
                *e = Entry::new(Scalar::Float(v * v), 2, 1).unwrap();
            }
        }
        let perturbed = SynthesisMatrix::from_entries(4, 5, entries).unwrap();
        let lam = Spectrum::tight(4, 5).unwrap();
        let report = verify_frame(&perturbed, &lam, DEFAULT_TOLERANCE).unwrap();
        assert!(!report.passed());
        let col_check = report
            .checks
            .iter()
            .find(|c| c.name.starts_with("column_norms"))
            .unwrap();
        assert!(!col_check.pass);
    }

    #[test]
    fn sparsity_examples() {
        let r = sparsity(&tdftst(4, 5).unwrap());
        assert_eq!(r.structural_nonzeros, 13);
        assert_eq!(r.formula_value, Some(13));
        assert_eq!(r.optimal, Some(true));

        let r = sparsity(&tdftst(7, 10).unwrap());
        assert_eq!(r.structural_nonzeros, 26);
        assert_eq!(r.formula_value, Some(26));

        let lam = Spectrum::from_ints(&[1, 1, 1]).unwrap();
        let r = sparsity(&dftst(&lam).unwrap());
        assert_eq!(r.structural_nonzeros, 3);
        assert_eq!(r.formula_value, None);
    }

    #[test]
    fn fusion_golden_partition_passes_and_merge_fails() {
        let lam = Spectrum::from_rationals(&[(5, 2), (10, 3), (13, 6)]).unwrap();
        let f = stc(&lam, false).unwrap();
        let good = FusionPartition::new(vec![
            vec![0, 4, 7],
            vec![1, 5],
            vec![2],
            vec![3],
            vec![6],
        ])
        .unwrap();
        let report =
            verify_fusion(&f, &good, &[3, 2, 1, 1, 1], &lam, DEFAULT_TOLERANCE).unwrap();
        assert!(report.passed(), "{report:?}");

        // Columns 2 and 3 share rows 0-1; merging them breaks the group Gram.
        let merged = FusionPartition::new(vec![
            vec![0, 4, 7],
            vec![1, 5],
            vec![2, 3],
            vec![6],
        ])
        .unwrap();
        let report =
            verify_fusion(&f, &merged, &[3, 2, 2, 1], &lam, DEFAULT_TOLERANCE).unwrap();
        assert!(!report.passed());
        let gram = report
            .checks
            .iter()
            .find(|c| c.name == "group_gram")
            .unwrap();
        assert!(!gram.pass);
    }

    #[test]
    fn fusion_singleton_groups_of_identity_pass() {
        let f = identity(3);
        let lam = Spectrum::from_ints(&[1, 1, 1]).unwrap();
        let p = FusionPartition::new(vec![vec![0], vec![1], vec![2]]).unwrap();
        assert!(verify_fusion(&f, &p, &[1, 1, 1], &lam, DEFAULT_TOLERANCE)
            .unwrap()
            .passed());
    }

    #[test]
    fn seq_and_par_agree() {
        let f = tdftst(7, 11).unwrap();
        let seq = gram_stats_seq(&f);
        #[cfg(feature = "parallel")]
        assert_eq!(seq, gram_stats_par(&f));
        assert_eq!(seq, gram_stats(&f));
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let f = identity(3);
        let lam = Spectrum::from_ints(&[1, 1]).unwrap();
        assert!(verify_frame(&f, &lam, DEFAULT_TOLERANCE).is_err());
    }

    #[test]
    fn telescoping_holds_on_tight_logs() {
        for (n, m) in [(4usize, 5usize), (7, 10), (7, 11), (8, 10), (9, 15)] {
            blocklog_step_telescoping(&tdftst(n, m).unwrap()).unwrap();
        }
    }
}
