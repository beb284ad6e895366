//! Prescribed frame-operator spectra.

use num_traits::ToPrimitive;

use crate::error::{FrameError, Result};
use crate::scalar::{rat, Scalar};

/// Float slack used for trace and residual tests on inexact spectra.
pub const FLOAT_SLACK: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum SpectrumOrder {
    #[default]
    Given,
    Decreasing,
    BlockwiseHeuristic,
}

/// An ordered list of positive eigenvalues whose sum (the trace) is a
/// positive integer; the trace equals the number of frame vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    values: Vec<Scalar>,
    order: SpectrumOrder,
    vector_count: usize,
}

impl Spectrum {
    pub fn new(values: Vec<Scalar>) -> Result<Self> {
        if values.is_empty() {
            return Err(FrameError::InvalidSpectrum("empty eigenvalue list".into()));
        }
        for (i, v) in values.iter().enumerate() {
            if !v.is_positive() {
                return Err(FrameError::InvalidSpectrum(format!(
                    "eigenvalue {v} at index {i} is not positive"
                )));
            }
        }
        let trace = values
            .iter()
            .fold(Scalar::zero(), |acc, v| &acc + v);
        let slack = FLOAT_SLACK * trace.to_f64().abs().max(1.0);
        let m = trace
            .to_integer_within(slack)
            .and_then(|m| m.to_usize())
            .filter(|m| *m > 0)
            .ok_or(FrameError::NonIntegerTrace {
                trace: trace.to_string(),
            })?;
        Ok(Spectrum {
            values,
            order: SpectrumOrder::Given,
            vector_count: m,
        })
    }

    pub fn from_rationals(pairs: &[(i64, i64)]) -> Result<Self> {
        Spectrum::new(pairs.iter().map(|&(n, d)| Scalar::Exact(rat(n, d))).collect())
    }

    pub fn from_ints(values: &[i64]) -> Result<Self> {
        Spectrum::new(values.iter().map(|&v| Scalar::from_int(v)).collect())
    }

    pub fn from_f64s(values: &[f64]) -> Result<Self> {
        Spectrum::new(values.iter().map(|&v| Scalar::Float(v)).collect())
    }

    /// The tight spectrum for `m` unit vectors in dimension `n`: every
    /// eigenvalue equals `m/n`.
    pub fn tight(n: usize, m: usize) -> Result<Self> {
        if n == 0 || m < n {
            return Err(FrameError::InvalidSpectrum(format!(
                "tight spectrum needs m >= n >= 1, got n={n}, m={m}"
            )));
        }
        Spectrum::new(vec![Scalar::Exact(rat(m as i64, n as i64)); n])
    }

    pub fn with_order(mut self, order: SpectrumOrder) -> Self {
        self.order = order;
        self
    }

    pub fn order(&self) -> SpectrumOrder {
        self.order
    }

    /// Dimension of the ambient space (number of eigenvalues).
    pub fn n(&self) -> usize {
        self.values.len()
    }

    /// Number of frame vectors (the integer trace).
    pub fn m(&self) -> usize {
        self.vector_count
    }

    pub fn values(&self) -> &[Scalar] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Scalar {
        &self.values[i]
    }

    pub fn is_all_exact(&self) -> bool {
        self.values.iter().all(Scalar::is_exact)
    }

    pub fn all_at_least(&self, bound: i64) -> bool {
        let bound = Scalar::from_int(bound);
        self.values.iter().all(|v| v.compare(&bound).is_ge())
    }

    /// True when every eigenvalue equals the others (a tight spectrum).
    pub fn is_tight(&self) -> bool {
        self.values.iter().all(|v| v == &self.values[0])
    }

    pub fn is_decreasing(&self) -> bool {
        self.values.windows(2).all(|w| w[0].compare(&w[1]).is_ge())
    }

    /// Redundancy m/n as a float.
    pub fn redundancy(&self) -> f64 {
        self.vector_count as f64 / self.values.len() as f64
    }
}
