//! Sparse synthesis matrices with per-block provenance.
//!
//! Columns are stored as an interval of consecutive rows plus the entries on
//! that interval, which is exactly the structure every spectral tetris
//! construction produces. All stored entries are structurally nonzero.

use std::ops::Range;

use num_complex::Complex64;

use crate::entry::Entry;
use crate::error::{FrameError, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BlockKind {
    /// A standard unit vector column.
    Singleton,
    /// The real 2x2 building block with columns (sqrt(x), +-sqrt(1-x)).
    Doubleton,
    /// An altered DFT block with integer correction factors.
    TightDft,
    /// A general DFT block with scalar row weights.
    GeneralDft,
    /// The final full-width DFT block that closes a construction.
    TerminalDft,
}

impl BlockKind {
    pub fn name(&self) -> &'static str {
        match self {
            BlockKind::Singleton => "singleton",
            BlockKind::Doubleton => "doubleton",
            BlockKind::TightDft => "tight-dft",
            BlockKind::GeneralDft => "general-dft",
            BlockKind::TerminalDft => "terminal-dft",
        }
    }
}

/// One placed building block: kind, DFT order, the first correction factor
/// (or consumed weight, for singletons/doubletons) and the placement offsets.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockRecord {
    pub kind: BlockKind,
    pub size: usize,
    pub first_correction: Scalar,
    pub row_offset: usize,
    pub col_offset: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constructor {
    Stc,
    Tdftst,
    Dftst,
}

impl Constructor {
    pub fn name(&self) -> &'static str {
        match self {
            Constructor::Stc => "stc",
            Constructor::Tdftst => "tdftst",
            Constructor::Dftst => "dftst",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
struct Column {
    start_row: usize,
    entries: Vec<Entry>,
}

/// An `n x m` sparse matrix whose columns are the frame vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct SynthesisMatrix {
    n_rows: usize,
    n_cols: usize,
    cols: Vec<Column>,
    block_log: Vec<BlockRecord>,
    constructor: Option<Constructor>,
    warnings: Vec<String>,
}

impl SynthesisMatrix {
    /// Builds a matrix from sparse triplets, validating that every column's
    /// structural support is an interval of consecutive rows.
    pub fn from_entries<I>(n_rows: usize, n_cols: usize, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize, Entry)>,
    {
        let mut per_col: Vec<Vec<(usize, Entry)>> = vec![Vec::new(); n_cols];
        for (row, col, entry) in entries {
            if row >= n_rows || col >= n_cols {
                return Err(FrameError::InvalidEntry(format!(
                    "entry ({row}, {col}) outside {n_rows} x {n_cols}"
                )));
            }
            if entry.radicand().is_zero() {
                return Err(FrameError::InvalidEntry(format!(
                    "structural zero stored at ({row}, {col})"
                )));
            }
            per_col[col].push((row, entry));
        }
        let mut cols = Vec::with_capacity(n_cols);
        for (c, mut rows) in per_col.into_iter().enumerate() {
            rows.sort_by_key(|(r, _)| *r);
            if rows.is_empty() {
                return Err(FrameError::InvalidEntry(format!("column {c} is empty")));
            }
            let start = rows[0].0;
            for (offset, (r, _)) in rows.iter().enumerate() {
                if *r != start + offset {
                    return Err(FrameError::InvalidEntry(format!(
                        "column {c} support is not an interval of rows"
                    )));
                }
            }
            cols.push(Column {
                start_row: start,
                entries: rows.into_iter().map(|(_, e)| e).collect(),
            });
        }
        Ok(SynthesisMatrix {
            n_rows,
            n_cols,
            cols,
            block_log: Vec::new(),
            constructor: None,
            warnings: Vec::new(),
        })
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_cols(&self) -> usize {
        self.n_cols
    }

    pub fn entry(&self, row: usize, col: usize) -> Option<&Entry> {
        let c = self.cols.get(col)?;
        row.checked_sub(c.start_row).and_then(|i| c.entries.get(i))
    }

    pub fn column_support(&self, col: usize) -> Range<usize> {
        let c = &self.cols[col];
        c.start_row..c.start_row + c.entries.len()
    }

    pub fn column_entries(&self, col: usize) -> (usize, &[Entry]) {
        let c = &self.cols[col];
        (c.start_row, &c.entries)
    }

    /// Entries in column-major order, i.e. sorted by (col, row).
    pub fn iter_entries(&self) -> impl Iterator<Item = (usize, usize, &Entry)> + '_ {
        self.cols.iter().enumerate().flat_map(|(c, col)| {
            col.entries
                .iter()
                .enumerate()
                .map(move |(i, e)| (col.start_row + i, c, e))
        })
    }

    /// Count of structural nonzeros.
    pub fn nnz(&self) -> usize {
        self.cols.iter().map(|c| c.entries.len()).sum()
    }

    pub fn block_log(&self) -> &[BlockRecord] {
        &self.block_log
    }

    pub fn constructor(&self) -> Option<Constructor> {
        self.constructor
    }

    pub fn warnings(&self) -> &[String] {
        &self.warnings
    }

    pub fn column_radicand_sum(&self, col: usize) -> Scalar {
        self.cols[col]
            .entries
            .iter()
            .fold(Scalar::zero(), |acc, e| &acc + e.radicand())
    }

    /// Per-row sums of radicands; for a valid construction these equal the
    /// prescribed eigenvalues exactly when the spectrum is rational.
    pub fn row_radicand_sums(&self) -> Vec<Scalar> {
        let mut sums = vec![Scalar::zero(); self.n_rows];
        for (row, _, e) in self.iter_entries() {
            sums[row] = &sums[row] + e.radicand();
        }
        sums
    }

    /// Per-row counts of structural nonzeros.
    pub fn row_support_sizes(&self) -> Vec<usize> {
        let mut sizes = vec![0usize; self.n_rows];
        for col in &self.cols {
            for slot in &mut sizes[col.start_row..col.start_row + col.entries.len()] {
                *slot += 1;
            }
        }
        sizes
    }

    pub fn column_values(&self, col: usize) -> Vec<Complex64> {
        self.cols[col].entries.iter().map(Entry::value).collect()
    }

    pub fn is_all_exact(&self) -> bool {
        self.cols
            .iter()
            .all(|c| c.entries.iter().all(|e| e.radicand().is_exact()))
    }

    pub(crate) fn with_constructor(mut self, constructor: Constructor) -> Self {
        self.constructor = Some(constructor);
        self
    }
}

/// Incremental left-to-right assembly used by the constructors.
pub(crate) struct MatrixBuilder {
    n_rows: usize,
    n_cols: usize,
    cols: Vec<Column>,
    block_log: Vec<BlockRecord>,
    warnings: Vec<String>,
}

impl MatrixBuilder {
    pub fn new(n_rows: usize, n_cols: usize) -> Self {
        MatrixBuilder {
            n_rows,
            n_cols,
            cols: Vec::with_capacity(n_cols),
            block_log: Vec::new(),
            warnings: Vec::new(),
        }
    }

    pub fn next_col(&self) -> usize {
        self.cols.len()
    }

    pub fn push_column(&mut self, start_row: usize, entries: Vec<Entry>) -> Result<()> {
        if self.cols.len() >= self.n_cols {
            return Err(FrameError::Internal(format!(
                "constructed more than {} columns",
                self.n_cols
            )));
        }
        if start_row + entries.len() > self.n_rows || entries.is_empty() {
            return Err(FrameError::Internal(format!(
                "column {} support out of bounds",
                self.cols.len()
            )));
        }
        debug_assert!(entries.iter().all(|e| !e.radicand().is_zero()));
        debug_assert!(self.cols.last().is_none_or(|c| c.start_row <= start_row));
        self.cols.push(Column { start_row, entries });
        Ok(())
    }

    pub fn record(&mut self, record: BlockRecord) {
        self.block_log.push(record);
    }

    pub fn warn(&mut self, message: impl Into<String>) {
        self.warnings.push(message.into());
    }

    pub fn finish(self, constructor: Constructor) -> Result<SynthesisMatrix> {
        if self.cols.len() != self.n_cols {
            return Err(FrameError::Internal(format!(
                "constructed {} of {} columns",
                self.cols.len(),
                self.n_cols
            )));
        }
        Ok(SynthesisMatrix {
            n_rows: self.n_rows,
            n_cols: self.n_cols,
            cols: self.cols,
            block_log: self.block_log,
            constructor: Some(constructor),
            warnings: self.warnings,
        })
    }
}

/// Block-diagonal replication: `copies` shifted copies of `base`.
pub(crate) fn block_diagonal(base: &SynthesisMatrix, copies: usize) -> Result<SynthesisMatrix> {
    let n = base.n_rows * copies;
    let m = base.n_cols * copies;
    let mut builder = MatrixBuilder::new(n, m);
    for i in 0..copies {
        let row_shift = i * base.n_rows;
        for col in &base.cols {
            builder.push_column(col.start_row + row_shift, col.entries.clone())?;
        }
        for rec in &base.block_log {
            builder.record(BlockRecord {
                kind: rec.kind,
                size: rec.size,
                first_correction: rec.first_correction.clone(),
                row_offset: rec.row_offset + row_shift,
                col_offset: rec.col_offset + i * base.n_cols,
            });
        }
    }
    builder.finish(base.constructor.unwrap_or(Constructor::Tdftst))
}
