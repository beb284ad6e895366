//! Spectral tetris: unit-norm frames with any prescribed frame-operator
//! spectrum, and fusion frames with prescribed subspace dimensions.
//!
//! A synthesis matrix is assembled left to right from building blocks whose
//! first and last rows overlap: standard unit vectors, real 2x2 blocks, and
//! rescaled DFT matrices. Rows stay pairwise orthogonal and square-sum to the
//! prescribed eigenvalues while every column is exactly unit norm, so the
//! frame operator is diagonal by construction. Entries are kept symbolic
//! (rational radicand times a root of unity), which makes the structural
//! checks exact for rational spectra.
//!
//! Quick tour:
//!
//! ```
//! use spectral_tetris::{tdftst, verify_frame, Spectrum, DEFAULT_TOLERANCE};
//!
//! let frame = tdftst(4, 5).unwrap();
//! assert_eq!(frame.nnz(), 13);
//! let tight = Spectrum::tight(4, 5).unwrap();
//! assert!(verify_frame(&frame, &tight, DEFAULT_TOLERANCE).unwrap().passed());
//! ```
//!
//! The `parallel` feature (enabled by default) runs the row-pair checks of
//! the verifier on a rayon pool; disabling it selects a sequential fallback
//! with identical results.

pub mod blocks;
pub mod construct;
pub mod entry;
pub mod error;
pub mod fusion;
pub mod matrix;
pub mod order;
pub mod scalar;
pub mod spectrum;
pub mod verify;

pub use blocks::{
    correction_range, dft_matrix, make_general_block, make_tight_block, optimal_block_sizes,
    step_size, BlockMatrix, GeneralBlockSpec, TightBlockSpec,
};
pub use construct::{
    construct, construct_auto, dftst, stc, tdftst, ConstructRequest, Method, SpectrumSpec,
};
pub use entry::Entry;
pub use error::{FrameError, Result};
pub use fusion::{
    build_fusion_frame, integer_reference_dims, majorizes, maximal_chains,
    reference_fusion_frame, reference_partition, ChainSet, DimensionProfile, FusionBuild,
    FusionPartition, RebalanceCase, RebalanceStep, ReferenceFusionFrame,
};
pub use matrix::{BlockKind, BlockRecord, Constructor, SynthesisMatrix};
pub use order::{blockwise_order, count_integral_prefixes, OrderResult};
pub use scalar::{rat, Rational, Scalar};
pub use spectrum::{Spectrum, SpectrumOrder};
pub use verify::{
    blocklog_step_telescoping, gram_diag_residual, gram_stats, gram_stats_seq, sparsity,
    verify_frame, verify_fusion, CheckResult, GramStats, SparsityReport, VerificationReport,
    DEFAULT_TOLERANCE,
};

#[cfg(feature = "parallel")]
pub use verify::gram_stats_par;
