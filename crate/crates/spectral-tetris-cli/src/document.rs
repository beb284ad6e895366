//! On-disk frame documents: JSON (lossless in exact form), MatrixMarket
//! coordinate complex, and dense CSV.

use serde::{Deserialize, Serialize};

use spectral_tetris::{
    Entry, FrameError, FusionPartition, Result, Scalar, Spectrum, SynthesisMatrix,
};

pub const FORMAT_TAG: &str = "spectral-tetris-frame/1";

/// `[row, col, re, im]`, 0-based, sorted by (col, row).
pub type FloatEntry = (usize, usize, f64, f64);
/// `[row, col, radicand, root_order, root_power]` with a rational radicand.
pub type ExactEntry = (usize, usize, String, u32, u32);

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct BlockLogEntry {
    pub kind: String,
    pub size: usize,
    pub first_correction: String,
    pub row_offset: usize,
    pub col_offset: usize,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct Metadata {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub constructor: Option<String>,
    pub sparsity: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub block_log: Option<Vec<BlockLogEntry>>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub warnings: Vec<String>,
}

#[derive(Serialize, Deserialize, Clone, Debug, PartialEq)]
pub struct FrameDocument {
    pub format: String,
    pub n: usize,
    pub m: usize,
    /// Rational strings ("5/2") or decimal strings.
    pub eigenvalues: Vec<String>,
    pub entries: Vec<FloatEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_entries: Option<Vec<ExactEntry>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition: Option<Vec<Vec<usize>>>,
    pub metadata: Metadata,
}

impl FrameDocument {
    pub fn from_matrix(
        matrix: &SynthesisMatrix,
        lam: &Spectrum,
        partition: Option<&FusionPartition>,
    ) -> Self {
        let entries: Vec<FloatEntry> = matrix
            .iter_entries()
            .map(|(r, c, e)| {
                let v = e.value();
                (r, c, v.re, v.im)
            })
            .collect();
        let exact_entries = matrix.is_all_exact().then(|| {
            matrix
                .iter_entries()
                .map(|(r, c, e)| {
                    (
                        r,
                        c,
                        e.radicand().to_string(),
                        e.root_order(),
                        e.root_power(),
                    )
                })
                .collect()
        });
        let block_log = (!matrix.block_log().is_empty()).then(|| {
            matrix
                .block_log()
                .iter()
                .map(|b| BlockLogEntry {
                    kind: b.kind.name().to_string(),
                    size: b.size,
                    first_correction: b.first_correction.to_string(),
                    row_offset: b.row_offset,
                    col_offset: b.col_offset,
                })
                .collect()
        });
        FrameDocument {
            format: FORMAT_TAG.to_string(),
            n: matrix.n_rows(),
            m: matrix.n_cols(),
            eigenvalues: lam.values().iter().map(Scalar::to_string).collect(),
            entries,
            exact_entries,
            partition: partition.map(|p| p.groups().to_vec()),
            metadata: Metadata {
                constructor: matrix.constructor().map(|c| c.name().to_string()),
                sparsity: matrix.nnz(),
                block_log,
                warnings: matrix.warnings().to_vec(),
            },
        }
    }

    pub fn spectrum(&self) -> Result<Spectrum> {
        let values: Result<Vec<Scalar>> = self
            .eigenvalues
            .iter()
            .map(|s| {
                Scalar::parse(s).or_else(|_| {
                    s.parse::<f64>()
                        .map(Scalar::Float)
                        .map_err(|_| FrameError::Parse(format!("bad eigenvalue {s:?}")))
                })
            })
            .collect();
        Spectrum::new(values?)
    }

    pub fn matrix(&self) -> Result<SynthesisMatrix> {
        if self.format != FORMAT_TAG {
            return Err(FrameError::Parse(format!(
                "unsupported document format {:?}",
                self.format
            )));
        }
        match &self.exact_entries {
            Some(exact) => {
                let entries: Result<Vec<(usize, usize, Entry)>> = exact
                    .iter()
                    .map(|(r, c, radicand, order, power)| {
                        Ok((*r, *c, Entry::new(Scalar::parse(radicand)?, *order, *power)?))
                    })
                    .collect();
                SynthesisMatrix::from_entries(self.n, self.m, entries?)
            }
            None => {
                let entries: Result<Vec<(usize, usize, Entry)>> = self
                    .entries
                    .iter()
                    .map(|&(r, c, re, im)| Ok((r, c, entry_from_complex(re, im)?)))
                    .collect();
                SynthesisMatrix::from_entries(self.n, self.m, entries?)
            }
        }
    }

    pub fn partition(&self) -> Result<Option<FusionPartition>> {
        self.partition
            .as_ref()
            .map(|groups| FusionPartition::new(groups.clone()))
            .transpose()
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("document serializes");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| FrameError::Parse(format!("bad document: {e}")))
    }

    /// MatrixMarket coordinate complex general: 1-based indices, one data
    /// line per structural nonzero, sorted by (col, row).
    pub fn to_matrix_market(&self) -> String {
        let mut entries = self.entries.clone();
        entries.sort_by_key(|&(r, c, _, _)| (c, r));
        let mut out = String::from("%%MatrixMarket matrix coordinate complex general\n");
        out.push_str(&format!("{} {} {}\n", self.n, self.m, entries.len()));
        for (r, c, re, im) in entries {
            out.push_str(&format!("{} {} {} {}\n", r + 1, c + 1, re, im));
        }
        out
    }

    /// Dense n x m CSV with `re+imi` cells.
    pub fn to_csv(&self) -> String {
        let mut cells = vec![vec![(0.0f64, 0.0f64); self.m]; self.n];
        for &(r, c, re, im) in &self.entries {
            cells[r][c] = (re, im);
        }
        let mut out = String::new();
        for row in cells {
            let line: Vec<String> = row
                .iter()
                .map(|(re, im)| format!("{re}{im:+}i"))
                .collect();
            out.push_str(&line.join(","));
            out.push('\n');
        }
        out
    }
}

/// Reconstructs a symbolic entry from a complex float. The magnitude is kept
/// as a float radicand; the phase must be (numerically) a root of unity.
fn entry_from_complex(re: f64, im: f64) -> Result<Entry> {
    let norm_sqr = re * re + im * im;
    if norm_sqr == 0.0 {
        return Err(FrameError::InvalidEntry(
            "structural zero in document".into(),
        ));
    }
    let phase = im.atan2(re) / std::f64::consts::TAU;
    let phase = if phase < 0.0 { phase + 1.0 } else { phase };
    let (p, q) = snap_to_fraction(phase, 4096).ok_or_else(|| {
        FrameError::InvalidEntry(format!(
            "entry phase {phase:.6} of ({re}, {im}) is not a root of unity"
        ))
    })?;
    Entry::new(Scalar::Float(norm_sqr), q, p)
}

/// Best rational approximation p/q of x in [0, 1) with q bounded, by
/// continued fractions; accepted only when essentially exact.
fn snap_to_fraction(x: f64, max_den: u32) -> Option<(u32, u32)> {
    let (mut h0, mut h1) = (0u64, 1u64);
    let (mut k0, mut k1) = (1u64, 0u64);
    let mut v = x;
    for _ in 0..32 {
        let a = v.floor() as u64;
        let h2 = a * h1 + h0;
        let k2 = a * k1 + k0;
        if k2 > max_den as u64 {
            break;
        }
        (h0, h1) = (h1, h2);
        (k0, k1) = (k1, k2);
        let frac = v - a as f64;
        if frac.abs() < 1e-12 {
            break;
        }
        v = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    let approx = h1 as f64 / k1 as f64;
    ((x - approx).abs() <= 1e-9).then_some(((h1 % k1.max(1)) as u32, k1 as u32))
}
