//! Frame constructors.
//!
//! Three constructions cover every admissible spectrum:
//!
//! * [`stc`] — singletons and real 2x2 blocks; works whenever the borrowing
//!   chain stays nonnegative, guaranteed for eigenvalues in [2, inf).
//! * [`tdftst`] — tight frames of redundancy below two, assembled from
//!   altered DFT blocks of two consecutive sizes whose first and last rows
//!   overlap; non-coprime (n, m) reduce to gcd(n, m) block-diagonal copies.
//! * [`dftst`] — arbitrary positive spectra with integer trace, assembled
//!   from general DFT blocks chosen greedily by minimal admissible size.
//!
//! All constructions are deterministic left-to-right scans; rows of every
//! output are pairwise orthogonal and square-sum to the prescribed
//! eigenvalues, columns are exactly unit norm in radicand arithmetic.

use num_integer::Integer;

use crate::blocks::{
    self, make_general_block, make_tight_block, GeneralBlockSpec, TightBlockSpec,
};
use crate::entry::Entry;
use crate::error::{FrameError, Result};
use crate::matrix::{
    block_diagonal, BlockKind, BlockRecord, Constructor, MatrixBuilder, SynthesisMatrix,
};
use crate::scalar::Scalar;
use crate::spectrum::{Spectrum, FLOAT_SLACK};

/// Spectral tetris with singletons and 2x2 blocks.
///
/// Without `allow_small` every eigenvalue must be at least 2, which makes the
/// borrowing step `lam[j+1] -= 2 - lam[j]` safe. With the override the run is
/// attempted as-is and fails with the offending row if a residual turns
/// negative.
pub fn stc(lam: &Spectrum, allow_small: bool) -> Result<SynthesisMatrix> {
    let (n, m) = (lam.n(), lam.m());
    if !allow_small {
        let two = Scalar::from_int(2);
        for (i, v) in lam.values().iter().enumerate() {
            if v.compare(&two).is_lt() {
                return Err(FrameError::EigenvalueBelowTwo {
                    index: i,
                    value: v.to_string(),
                });
            }
        }
    }
    let eps = FLOAT_SLACK * m as f64;
    let mut residual: Vec<Scalar> = lam.values().to_vec();
    let mut builder = MatrixBuilder::new(n, m);
    for j in 0..n {
        while !residual[j].is_zero_within(eps) {
            if residual[j].is_negative() {
                return Err(FrameError::NegativeResidual {
                    row: j + 1,
                    value: residual[j].to_string(),
                });
            }
            if residual[j].compare(&Scalar::one()).is_lt() {
                if j + 1 >= n {
                    return Err(FrameError::NegativeResidual {
                        row: j + 1,
                        value: residual[j].to_string(),
                    });
                }
                let weight = residual[j].clone();
                let x = weight.div_int(2);
                let y = &Scalar::one() - &x;
                let col = builder.next_col();
                builder.push_column(j, vec![Entry::real(x.clone())?, Entry::real(y.clone())?])?;
                builder.push_column(j, vec![Entry::real(x)?, Entry::real_negative(y)?])?;
                builder.record(BlockRecord {
                    kind: BlockKind::Doubleton,
                    size: 2,
                    first_correction: weight.clone(),
                    row_offset: j,
                    col_offset: col,
                });
                let borrow = &Scalar::from_int(2) - &weight;
                residual[j + 1] = &residual[j + 1] - &borrow;
                if residual[j + 1].is_negative() && !residual[j + 1].is_zero_within(eps) {
                    return Err(FrameError::NegativeResidual {
                        row: j + 2,
                        value: residual[j + 1].to_string(),
                    });
                }
                residual[j] = Scalar::zero();
            } else {
                let col = builder.next_col();
                builder.push_column(j, vec![Entry::real(Scalar::one())?])?;
                builder.record(BlockRecord {
                    kind: BlockKind::Singleton,
                    size: 1,
                    first_correction: Scalar::one(),
                    row_offset: j,
                    col_offset: col,
                });
                residual[j] = &residual[j] - &Scalar::one();
            }
        }
        residual[j] = Scalar::zero();
    }
    builder.finish(Constructor::Stc)
}

/// Tight DFT spectral tetris for `n < m < 2n`.
pub fn tdftst(n: usize, m: usize) -> Result<SynthesisMatrix> {
    if n == 0 || m <= n || m >= 2 * n {
        return Err(FrameError::VectorCountOutOfRange(format!(
            "tight DFT tetris requires n < m < 2n, got n={n}, m={m}; \
             use stc for m >= 2n and dftst for m = n"
        )));
    }
    let g = n.gcd(&m);
    let base = tdftst_coprime(n / g, m / g)?;
    if g == 1 {
        Ok(base)
    } else {
        block_diagonal(&base, g)
    }
}

fn tdftst_coprime(n: usize, m: usize) -> Result<SynthesisMatrix> {
    let (k, l) = blocks::tight_params(n, m)?;
    if l == 1 {
        // m = 2n - 1 is exactly the case the singleton/doubleton construction
        // still covers below redundancy two.
        let lam = Spectrum::tight(n, m)?;
        return Ok(stc(&lam, true)?.with_constructor(Constructor::Tdftst));
    }
    let step_small = blocks::step_size(n, m, l)?;
    let step_large = blocks::step_size(n, m, l + 1)?;
    let r = k * (l + 1) - m;
    // step_large <= 0 forces the greedy order; otherwise all small blocks
    // come first and the trajectory stays nonnegative.
    let greedy = step_large <= 0;
    let mut builder = MatrixBuilder::new(n, m);
    let mut x: i64 = m as i64;
    let mut row = 0usize;
    let mut placed = 0usize;
    while x != 0 {
        if placed >= k {
            return Err(FrameError::Internal(format!(
                "correction trajectory failed to terminate for n={n}, m={m}"
            )));
        }
        let use_small = if greedy { x >= step_small } else { placed < r };
        let size = if use_small { l } else { l + 1 };
        let block = make_tight_block(&TightBlockSpec {
            n,
            m,
            size,
            first_correction: x,
        })?;
        let col = builder.next_col();
        for c in 0..size {
            builder.push_column(row, block.column(c).to_vec())?;
        }
        builder.record(BlockRecord {
            kind: BlockKind::TightDft,
            size,
            first_correction: Scalar::from_int(x),
            row_offset: row,
            col_offset: col,
        });
        x -= if use_small { step_small } else { step_large };
        row += size - 1;
        placed += 1;
    }
    if placed != k || row != n - 1 {
        return Err(FrameError::Internal(format!(
            "block layout mismatch for n={n}, m={m}: {placed} blocks ending at row {row}"
        )));
    }
    builder.finish(Constructor::Tdftst)
}

/// DFT spectral tetris for an arbitrary positive spectrum with integer trace.
///
/// Scans rows left to right, inserting the smallest general DFT block whose
/// weights can absorb it. A full-width terminal block closes the matrix as
/// soon as the pending insertion would leave fewer columns than unfinished
/// rows; at that point remaining mass equals remaining columns equals
/// remaining rows, so the terminal block is square with exact unit columns.
pub fn dftst(lam: &Spectrum) -> Result<SynthesisMatrix> {
    let (n, m) = (lam.n(), lam.m());
    if m < n {
        return Err(FrameError::VectorCountOutOfRange(format!(
            "{m} unit vectors cannot have {n} positive eigenvalues"
        )));
    }
    let eps = FLOAT_SLACK * m as f64;
    let mut residual: Vec<Scalar> = lam.values().to_vec();
    let mut builder = MatrixBuilder::new(n, m);
    if !lam.is_decreasing() {
        builder.warn(
            "eigenvalues are not in decreasing order; the construction is valid \
             but sparsity may be suboptimal",
        );
    }
    let mut emitted = 0usize;
    for j in 0..n {
        loop {
            if residual[j].is_zero_within(eps) {
                residual[j] = Scalar::zero();
                break;
            }
            let cols_left = m - emitted;
            let rows_left = n - j;
            if cols_left < rows_left {
                return Err(FrameError::Internal(
                    "fewer columns than unfinished rows remain".into(),
                ));
            }
            //

            // Smallest admissible block order: least L with
            // L <= residual[j] + ... + residual[j+L-1].
            let mut choice = None;
            let mut mass = Scalar::zero();
            for l in 1..=rows_left {
                mass = &mass + &residual[j + l - 1];
                let enough = match mass.as_exact() {
                    Some(_) => Scalar::from_int(l as i64).compare(&mass).is_le(),
                    None => l as f64 <= mass.to_f64() + eps,
                };
                if enough {
                    choice = Some((l, mass.clone()));
                    break;
                }
            }
            let terminal = match &choice {
                None => true,
                Some((l, mass_l)) => {
                    let leftover = mass_l - &Scalar::from_int(*l as i64);
                    cols_left == rows_left && !leftover.is_zero_within(eps)
                }
            };
            if terminal {
                emit_terminal(&mut builder, &mut residual, j, cols_left, eps)?;
                emitted += cols_left;
                break;
            }
            let (l, mass_l) = choice.expect("terminal handled the empty case");
            if l == 1 {
                let col = builder.next_col();
                builder.push_column(j, vec![Entry::real(Scalar::one())?])?;
                builder.record(BlockRecord {
                    kind: BlockKind::Singleton,
                    size: 1,
                    first_correction: Scalar::one(),
                    row_offset: j,
                    col_offset: col,
                });
                residual[j] = &residual[j] - &Scalar::one();
                emitted += 1;
            } else {
                let weights: Vec<Scalar> = residual[j..j + l].to_vec();
                let first = weights[0].clone();
                let block = make_general_block(&GeneralBlockSpec {
                    lams: weights,
                    first_correction: first.clone(),
                })?;
                let col = builder.next_col();
                for c in 0..l {
                    builder.push_column(j, block.column(c).to_vec())?;
                }
                builder.record(BlockRecord {
                    kind: BlockKind::GeneralDft,
                    size: l,
                    first_correction: first,
                    row_offset: j,
                    col_offset: col,
                });
                let leftover = &mass_l - &Scalar::from_int(l as i64);
                for v in residual[j..j + l - 1].iter_mut() {
                    *v = Scalar::zero();
                }
                residual[j + l - 1] = if leftover.is_zero_within(eps) {
                    Scalar::zero()
                } else {
                    leftover
                };
                emitted += l;
            }
        }
    }
    builder.finish(Constructor::Dftst)
}

fn emit_terminal(
    builder: &mut MatrixBuilder,
    residual: &mut [Scalar],
    j: usize,
    order: usize,
    eps: f64,
) -> Result<()> {
    let rows = residual.len() - j;
    if rows != order {
        return Err(FrameError::Internal(format!(
            "terminal block of order {order} must span the last {rows} rows exactly"
        )));
    }
    let mass = residual[j..]
        .iter()
        .fold(Scalar::zero(), |acc, v| &acc + v);
    let deficit = &mass - &Scalar::from_int(order as i64);
    if !deficit.is_zero_within(eps * order as f64) {
        return Err(FrameError::Internal(format!(
            "terminal block mass {mass} does not match its order {order}"
        )));
    }
    let weights: Vec<Scalar> = residual[j..].to_vec();
    let first = weights[0].clone();
    let block = make_general_block(&GeneralBlockSpec {
        lams: weights,
        first_correction: first.clone(),
    })?;
    let col = builder.next_col();
    for c in 0..order {
        builder.push_column(j, block.column(c).to_vec())?;
    }
    builder.record(BlockRecord {
        kind: BlockKind::TerminalDft,
        size: order,
        first_correction: first,
        row_offset: j,
        col_offset: col,
    });
    for v in residual[j..].iter_mut() {
        *v = Scalar::zero();
    }
    Ok(())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Method {
    #[default]
    Auto,
    Stc,
    Tdftst,
    Dftst,
}

#[derive(Clone, Debug)]
pub enum SpectrumSpec {
    /// All eigenvalues equal m/n.
    Tight,
    Given(Spectrum),
}

#[derive(Clone, Debug)]
pub struct ConstructRequest {
    pub n: usize,
    pub m: usize,
    pub spectrum: SpectrumSpec,
    pub method: Method,
    pub allow_small_eigenvalues: bool,
}

impl ConstructRequest {
    pub fn resolved_spectrum(&self) -> Result<Spectrum> {
        match &self.spectrum {
            SpectrumSpec::Tight => Spectrum::tight(self.n, self.m),
            SpectrumSpec::Given(lam) => {
                if lam.n() != self.n || lam.m() != self.m {
                    return Err(FrameError::DimensionMismatch(format!(
                        "request says n={}, m={} but the spectrum has n={}, trace={}",
                        self.n,
                        self.m,
                        lam.n(),
                        lam.m()
                    )));
                }
                Ok(lam.clone())
            }
        }
    }
}

/// Dispatcher. With `Method::Auto`: spectra in [2, inf) go to [`stc`], the
/// tight marker with n < m < 2n goes to [`tdftst`], everything else to
/// [`dftst`]. Explicit methods bypass the routing.
pub fn construct(req: &ConstructRequest) -> Result<SynthesisMatrix> {
    let lam = req.resolved_spectrum()?;
    if req.m < req.n {
        return Err(FrameError::VectorCountOutOfRange(format!(
            "m={} is below the dimension n={}",
            req.m, req.n
        )));
    }
    match req.method {
        Method::Stc => stc(&lam, req.allow_small_eigenvalues),
        Method::Tdftst => {
            if !lam.is_tight() {
                return Err(FrameError::InvalidSpectrum(
                    "tight DFT tetris requires a tight spectrum".into(),
                ));
            }
            tdftst(req.n, req.m)
        }
        Method::Dftst => dftst(&lam),
        Method::Auto => {
            if lam.all_at_least(2) {
                stc(&lam, false)
            } else if matches!(req.spectrum, SpectrumSpec::Tight)
                && req.n < req.m
                && req.m < 2 * req.n
            {
                tdftst(req.n, req.m)
            } else {
                dftst(&lam)
            }
        }
    }
}

/// Auto-routing for a given spectrum, used by the fusion operations.
pub fn construct_auto(lam: &Spectrum) -> Result<SynthesisMatrix> {
    construct(&ConstructRequest {
        n: lam.n(),
        m: lam.m(),
        spectrum: SpectrumSpec::Given(lam.clone()),
        method: Method::Auto,
        allow_small_eigenvalues: false,
    })
}
