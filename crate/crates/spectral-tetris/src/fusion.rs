//! Fusion frames: reference partition, majorization, maximal chains, and
//! construction with prescribed subspace dimensions.
//!
//! The reference partition packs frame vectors greedily into support-disjoint
//! groups; its dimension profile majorizes every profile this method can
//! realize. Construction rebalances the reference groups one vector (or one
//! chain swap) at a time, strictly shrinking the size discrepancy.

use std::collections::BTreeSet;
use std::ops::Range;

use num_traits::ToPrimitive;

use crate::construct::construct_auto;
use crate::error::{FrameError, Result};
use crate::matrix::SynthesisMatrix;
use crate::spectrum::Spectrum;

/// A partition of column indices into non-empty groups; within one group the
/// referenced columns are pairwise support-disjoint, hence orthonormal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FusionPartition {
    groups: Vec<Vec<usize>>,
}

impl FusionPartition {
    pub fn new(groups: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for (i, g) in groups.iter().enumerate() {
            if g.is_empty() {
                return Err(FrameError::InvalidPartition(format!("group {i} is empty")));
            }
            for &c in g {
                if !seen.insert(c) {
                    return Err(FrameError::InvalidPartition(format!(
                        "column {c} appears in more than one group"
                    )));
                }
            }
        }
        let mut groups = groups;
        for g in &mut groups {
            g.sort_unstable();
        }
        Ok(FusionPartition { groups })
    }

    pub fn groups(&self) -> &[Vec<usize>] {
        &self.groups
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    /// Checks that the groups cover exactly the columns `0..m`.
    pub fn validate_cover(&self, m: usize) -> Result<()> {
        let covered: BTreeSet<usize> = self.groups.iter().flatten().copied().collect();
        let total: usize = self.groups.iter().map(Vec::len).sum();
        if total != m || covered.len() != m || covered.last().is_some_and(|&c| c >= m) {
            return Err(FrameError::InvalidPartition(format!(
                "groups cover {} of {} columns",
                covered.len(),
                m
            )));
        }
        Ok(())
    }
}

/// Greedy first-fit of columns into support-disjoint groups, in column order.
pub fn reference_partition(f: &SynthesisMatrix) -> FusionPartition {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut supports: Vec<Vec<Range<usize>>> = Vec::new();
    for c in 0..f.n_cols() {
        let s = f.column_support(c);
        let slot = groups.iter().enumerate().position(|(g, _)| {
            supports[g]
                .iter()
                .all(|r| r.end <= s.start || s.end <= r.start)
        });
        match slot {
            Some(g) => {
                groups[g].push(c);
                supports[g].push(s);
            }
            None => {
                groups.push(vec![c]);
                supports.push(vec![s]);
            }
        }
    }
    FusionPartition { groups }
}

/// The reference fusion frame for a spectrum: the auto-routed construction
/// plus its greedy partition.
#[derive(Clone, Debug)]
pub struct ReferenceFusionFrame {
    pub matrix: SynthesisMatrix,
    pub partition: FusionPartition,
}

impl ReferenceFusionFrame {
    pub fn dims(&self) -> Vec<usize> {
        self.partition.sizes()
    }
}

pub fn reference_fusion_frame(lam: &Spectrum) -> Result<ReferenceFusionFrame> {
    let matrix = construct_auto(lam)?;
    let partition = reference_partition(&matrix);
    let t = f_max_row_support(&matrix);
    if partition.groups().len() != t {
        return Err(FrameError::Internal(format!(
            "greedy packing used {} groups, maximal row support is {t}",
            partition.groups().len()
        )));
    }
    let sizes = partition.sizes();
    if sizes.windows(2).any(|w| w[0] < w[1]) {
        return Err(FrameError::Internal(
            "reference group sizes are not nonincreasing".into(),
        ));
    }
    Ok(ReferenceFusionFrame { matrix, partition })
}

fn f_max_row_support(f: &SynthesisMatrix) -> usize {
    f.row_support_sizes().into_iter().max().unwrap_or(0)
}

/// Prefix-sum dominance of the sorted sequences, with equal totals; the
/// shorter sequence is padded with zeros.
pub fn majorizes(a: &[usize], b: &[usize]) -> bool {
    let mut a: Vec<usize> = a.to_vec();
    let mut b: Vec<usize> = b.to_vec();
    a.sort_unstable_by(|x, y| y.cmp(x));
    b.sort_unstable_by(|x, y| y.cmp(x));
    let len = a.len().max(b.len());
    a.resize(len, 0);
    b.resize(len, 0);
    let (mut pa, mut pb) = (0usize, 0usize);
    for i in 0..len {
        pa += a[i];
        pb += b[i];
        if i + 1 < len && pa < pb {
            return false;
        }
    }
    pa == pb
}

/// Reference dimensions for an integer spectrum: `a_n = #{r : lam_r >= n}`
/// for `n = 1..max(lam)`. Equals the reference fusion frame's dimensions.
pub fn integer_reference_dims(lam: &Spectrum) -> Result<Vec<usize>> {
    let mut values = Vec::with_capacity(lam.n());
    for v in lam.values() {
        let exact = v
            .as_exact()
            .filter(|r| r.is_integer())
            .and_then(|r| r.to_integer().to_usize())
            .ok_or_else(|| {
                FrameError::InvalidSpectrum(format!("eigenvalue {v} is not a positive integer"))
            })?;
        values.push(exact);
    }
    let top = *values.iter().max().expect("spectrum is non-empty");
    Ok((1..=top)
        .map(|n| values.iter().filter(|&&v| v >= n).count())
        .collect())
}

/// A connected component of the support-overlap graph on two groups.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainSet {
    /// Column indices, sorted.
    pub members: Vec<usize>,
    /// First row touched by the union of supports.
    pub left_index: usize,
    /// One past the last row touched.
    pub right_index: usize,
}

/// Maximal chains of `group_a U group_b`: connected components of the
/// support-overlap graph. With interval supports a left-endpoint sweep finds
/// them directly.
pub fn maximal_chains(
    group_a: &[usize],
    group_b: &[usize],
    f: &SynthesisMatrix,
) -> Vec<ChainSet> {
    let mut intervals: Vec<(usize, Range<usize>)> = group_a
        .iter()
        .chain(group_b.iter())
        .map(|&c| (c, f.column_support(c)))
        .collect();
    intervals.sort_by_key(|(c, r)| (r.start, r.end, *c));
    let mut chains: Vec<ChainSet> = Vec::new();
    for (c, r) in intervals {
        match chains.last_mut() {
            Some(chain) if r.start < chain.right_index => {
                chain.members.push(c);
                chain.right_index = chain.right_index.max(r.end);
            }
            _ => chains.push(ChainSet {
                members: vec![c],
                left_index: r.start,
                right_index: r.end,
            }),
        }
    }
    for chain in &mut chains {
        chain.members.sort_unstable();
    }
    chains
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RebalanceCase {
    /// A support-disjoint vector moved from the donor to the receiver.
    Move,
    /// Chain memberships swapped between donor and receiver.
    ChainSwap,
}

#[derive(Clone, Debug)]
pub struct RebalanceStep {
    pub case: RebalanceCase,
    pub donor: usize,
    pub receiver: usize,
    pub discrepancy_after: usize,
    pub sizes_after: Vec<usize>,
}

/// Sorted-descending dimension profile remembering the caller's order.
#[derive(Clone, Debug)]
pub struct DimensionProfile {
    sorted: Vec<usize>,
    /// original index of each sorted position
    perm: Vec<usize>,
}

impl DimensionProfile {
    pub fn new(dims: &[usize]) -> Result<Self> {
        if dims.is_empty() || dims.contains(&0) {
            return Err(FrameError::InvalidPartition(
                "dimensions must be positive integers".into(),
            ));
        }
        let mut perm: Vec<usize> = (0..dims.len()).collect();
        perm.sort_by_key(|&i| std::cmp::Reverse(dims[i]));
        let sorted = perm.iter().map(|&i| dims[i]).collect();
        Ok(DimensionProfile { sorted, perm })
    }

    pub fn sorted(&self) -> &[usize] {
        &self.sorted
    }

    pub fn total(&self) -> usize {
        self.sorted.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.sorted.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sorted.is_empty()
    }

    fn unsort(&self, groups: Vec<Vec<usize>>) -> Vec<Vec<usize>> {
        let mut out = vec![Vec::new(); groups.len()];
        for (pos, group) in groups.into_iter().enumerate() {
            out[self.perm[pos]] = group;
        }
        out
    }
}

#[derive(Clone, Debug)]
pub struct FusionBuild {
    pub matrix: SynthesisMatrix,
    /// Groups in the caller's dimension order.
    pub partition: FusionPartition,
    pub reference_dims: Vec<usize>,
    pub steps: Vec<RebalanceStep>,
}

/// Builds a fusion frame with the prescribed subspace dimensions, or fails
/// with [`FrameError::MajorizationFailed`]. For tight spectra of redundancy
/// at least two a failure certifies that no such fusion frame exists.
pub fn build_fusion_frame(lam: &Spectrum, dims: &DimensionProfile) -> Result<FusionBuild> {
    if dims.total() != lam.m() {
        return Err(FrameError::DimensionMismatch(format!(
            "dimensions sum to {}, spectrum trace is {}",
            dims.total(),
            lam.m()
        )));
    }
    let reference = reference_fusion_frame(lam)?;
    let reference_dims = reference.dims();
    if !majorizes(&reference_dims, dims.sorted()) {
        return Err(FrameError::MajorizationFailed {
            reference: reference_dims,
            requested: dims.sorted().to_vec(),
            certified_nonexistence: lam.is_tight() && lam.m() >= 2 * lam.n(),
        });
    }
    let mut groups = reference.partition.groups().to_vec();
    // Majorization forces at least as many target groups as reference groups.
    groups.resize(dims.len(), Vec::new());
    let steps = rebalance(&mut groups, dims.sorted(), &reference.matrix)?;
    let partition = FusionPartition::new(dims.unsort(groups))?;
    Ok(FusionBuild {
        matrix: reference.matrix,
        partition,
        reference_dims,
        steps,
    })
}

fn discrepancy(groups: &[Vec<usize>], target: &[usize]) -> usize {
    groups
        .iter()
        .zip(target)
        .map(|(g, d)| g.len().abs_diff(*d))
        .sum()
}

fn support_disjoint(members: &[usize], f: &SynthesisMatrix) -> bool {
    let mut ranges: Vec<Range<usize>> =
        members.iter().map(|&c| f.column_support(c)).collect();
    ranges.sort_by_key(|r| r.start);
    ranges.windows(2).all(|w| w[0].end <= w[1].start)
}

/// One pass of the size-rebalancing loop; `groups[i]` must match `target[i]`
/// on exit. Every step strictly decreases the discrepancy, keeps each group
/// support-disjoint and keeps the size profile majorizing the target.
pub(crate) fn rebalance(
    groups: &mut [Vec<usize>],
    target: &[usize],
    f: &SynthesisMatrix,
) -> Result<Vec<RebalanceStep>> {
    if groups.len() != target.len() {
        return Err(FrameError::Internal(
            "group list and target dimensions differ in length".into(),
        ));
    }
    let mut steps = Vec::new();
    let mut current = discrepancy(groups, target);
    let budget = current;
    while current > 0 {
        if steps.len() >= budget {
            return Err(FrameError::Internal(format!(
                "rebalancing exceeded its budget of {budget} iterations"
            )));
        }
        let receiver = (0..groups.len())
            .rev()
            .find(|&j| groups[j].len() != target[j])
            .expect("discrepancy is positive");
        if groups[receiver].len() >= target[receiver] {
            return Err(FrameError::Internal(format!(
                "last mismatched group {receiver} is not underfull"
            )));
        }
        let donor = (0..receiver)
            .rev()
            .find(|&j| groups[j].len() > target[j])
            .ok_or_else(|| {
                FrameError::Internal("no overfull group precedes the receiver".into())
            })?;

        let disjoint_pick = groups[donor]
            .iter()
            .copied()
            .find(|&w| {
                let ws = f.column_support(w);
                groups[receiver].iter().all(|&v| {
                    let vs = f.column_support(v);
                    ws.end <= vs.start || vs.end <= ws.start
                })
            });
        let case = match disjoint_pick {
            Some(w) => {
                groups[donor].retain(|&c| c != w);
                groups[receiver].push(w);
                groups[receiver].sort_unstable();
                RebalanceCase::Move
            }
            None => {
                let chains = maximal_chains(&groups[donor], &groups[receiver], f);
                let donor_set: BTreeSet<usize> = groups[donor].iter().copied().collect();
                let chain = chains
                    .into_iter()
                    .filter(|c| {
                        let from_donor = c
                            .members
                            .iter()
                            .filter(|m| donor_set.contains(*m))
                            .count();
                        from_donor == c.members.len() - from_donor + 1
                    })
                    .min_by_key(|c| c.left_index)
                    .ok_or_else(|| {
                        FrameError::Internal("no chain carries the +1 imbalance".into())
                    })?;
                let (from_donor, from_receiver): (Vec<usize>, Vec<usize>) = chain
                    .members
                    .iter()
                    .copied()
                    .partition(|m| donor_set.contains(m));
                groups[donor].retain(|c| !from_donor.contains(c));
                groups[donor].extend(from_receiver.iter().copied());
                groups[donor].sort_unstable();
                groups[receiver].retain(|c| !from_receiver.contains(c));
                groups[receiver].extend(from_donor.iter().copied());
                groups[receiver].sort_unstable();
                RebalanceCase::ChainSwap
            }
        };

        let next = discrepancy(groups, target);
        if next >= current {
            return Err(FrameError::Internal(
                "rebalance step did not decrease the discrepancy".into(),
            ));
        }
        if !support_disjoint(&groups[donor], f) || !support_disjoint(&groups[receiver], f) {
            return Err(FrameError::Internal(
                "rebalance step broke support-disjointness".into(),
            ));
        }
        let sizes: Vec<usize> = groups.iter().map(Vec::len).collect();
        if !majorizes(&sizes, target) {
            return Err(FrameError::Internal(
                "rebalance step broke the majorization invariant".into(),
            ));
        }
        current = next;
        steps.push(RebalanceStep {
            case,
            donor,
            receiver,
            discrepancy_after: next,
            sizes_after: sizes,
        });
    }
    Ok(steps)
}
