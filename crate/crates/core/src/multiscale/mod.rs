//! Multiscale pyramids of manifold-valued sequences.
//!
//! A decomposition step splits `p^{(j)}` into coarser data `p^{(j−1)} = D p^{(j)}`
//! and detail vectors `q^{(j)} = p^{(j)} ⊖ S p^{(j−1)}`. Reconstruction computes
//! `p^{(j)} = S p^{(j−1)} ⊕ q^{(j)}`, parallel-transporting each detail to the
//! current predicted point first so that edited coarse data still give a
//! consistent result.

mod experiments;
mod haar;
mod threshold;
mod wavelet;

pub use experiments::{
    approximation_order_experiment, decay_exponent, estimate_regularity, stability_experiment, ApproximationConfig,
    ApproximationReport, RegularityEstimate, StabilityConfig, StabilityReport, REGULARITY_SKIP_LEVELS,
};
pub use haar::{haar_decompose, haar_reconstruct};
pub use threshold::{threshold, ThresholdMode, ThresholdPolicy, ThresholdStats};
pub(crate) use wavelet::predict;
pub use wavelet::{wavelet_decompose, wavelet_reconstruct};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::{parallel_transport, Chart, ManifoldPoint, TangentVector};
use crate::mask::Mask;
use crate::sequence::{Boundary, Sequence};
use crate::subdivision::SchemeVariant;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum PyramidScheme {
    /// Midpoints of disjoint pairs; one detail per pair.
    Haar,
    /// Decimation by `N` and prediction with an interpolatory rule.
    Interpolatory { mask: Mask, variant: SchemeVariant },
}

impl PyramidScheme {
    pub fn dilation(&self) -> usize {
        match self {
            PyramidScheme::Haar => 2,
            PyramidScheme::Interpolatory { mask, .. } => mask.dilation(),
        }
    }

    /// Points in the next finer level.
    pub fn fine_len(&self, coarse_len: usize, boundary: Boundary) -> usize {
        let n = self.dilation();
        match (self, boundary) {
            (PyramidScheme::Interpolatory { .. }, Boundary::Open) => (coarse_len - 1) * n + 1,
            _ => coarse_len * n,
        }
    }

    /// Detail vectors stored for the next finer level.
    pub fn level_len(&self, coarse_len: usize, boundary: Boundary) -> usize {
        match self {
            PyramidScheme::Haar => coarse_len,
            PyramidScheme::Interpolatory { .. } => self.fine_len(coarse_len, boundary),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pyramid {
    scheme: PyramidScheme,
    coarse: Sequence,
    details: Vec<Vec<TangentVector>>,
}

impl Pyramid {
    /// Assembles a pyramid, checking that detail counts and kinds fit the scheme.
    pub fn new(scheme: PyramidScheme, coarse: Sequence, details: Vec<Vec<TangentVector>>) -> Result<Self> {
        let mut len = coarse.len();
        for (j, level) in details.iter().enumerate() {
            let expected = scheme.level_len(len, coarse.boundary());
            if level.len() != expected {
                return Err(Error::ShapeMismatch(format!(
                    "level {} has {} details, expected {expected}",
                    j + 1,
                    level.len()
                )));
            }
            for (i, q) in level.iter().enumerate() {
                if q.base().kind() != coarse.kind() {
                    return Err(Error::KindMismatch {
                        expected: coarse.kind(),
                        found: q.base().kind(),
                    }
                    .at_index(i as i64)
                    .at_level(j + 1));
                }
            }
            len = scheme.fine_len(len, coarse.boundary());
        }
        Ok(Pyramid {
            scheme,
            coarse,
            details,
        })
    }

    pub fn scheme(&self) -> &PyramidScheme {
        &self.scheme
    }

    pub fn coarse(&self) -> &Sequence {
        &self.coarse
    }

    /// Details of levels `1..=M`, coarsest first.
    pub fn details(&self) -> &[Vec<TangentVector>] {
        &self.details
    }

    pub fn levels(&self) -> usize {
        self.details.len()
    }

    pub fn boundary(&self) -> Boundary {
        self.coarse.boundary()
    }

    /// Length of the finest level.
    pub fn original_len(&self) -> usize {
        (0..self.details.len()).fold(self.coarse.len(), |len, _| self.scheme.fine_len(len, self.boundary()))
    }

    /// Largest detail norm per level.
    pub fn level_max_norms(&self) -> Vec<f64> {
        self.details
            .iter()
            .map(|l| l.iter().map(TangentVector::norm).fold(0.0, f64::max))
            .collect()
    }

    pub fn with_coarse(mut self, coarse: Sequence) -> Result<Self> {
        if coarse.len() != self.coarse.len() || coarse.kind() != self.coarse.kind() {
            return Err(Error::ShapeMismatch("replacement coarse data differ in shape".into()));
        }
        self.coarse = coarse;
        Ok(self)
    }

    /// Replaces one detail vector; its base must be of the pyramid's kind.
    pub fn set_detail(&mut self, level: usize, index: usize, q: TangentVector) -> Result<()> {
        let kind = self.coarse.kind();
        let slot = self
            .details
            .get_mut(level.wrapping_sub(1))
            .and_then(|l| l.get_mut(index))
            .ok_or_else(|| Error::ShapeMismatch(format!("no detail {index} at level {level}")))?;
        if q.base().kind() != kind {
            return Err(Error::KindMismatch {
                expected: kind,
                found: q.base().kind(),
            });
        }
        *slot = q;
        Ok(())
    }

    pub fn into_parts(self) -> (PyramidScheme, Sequence, Vec<Vec<TangentVector>>) {
        (self.scheme, self.coarse, self.details)
    }
}

pub fn decompose(seq: &Sequence, scheme: &PyramidScheme, levels: usize) -> Result<Pyramid> {
    match scheme {
        PyramidScheme::Haar => haar_decompose(seq, levels),
        PyramidScheme::Interpolatory { mask, variant } => wavelet_decompose(seq, mask, *variant, levels),
    }
}

pub fn reconstruct(pyr: &Pyramid) -> Result<Sequence> {
    match pyr.scheme() {
        PyramidScheme::Haar => haar_reconstruct(pyr),
        PyramidScheme::Interpolatory { .. } => wavelet_reconstruct(pyr),
    }
}

/// Checks that `len` splits into `levels` rounds of `n`-fold decimation.
fn check_divisible(seq: &Sequence, n: usize, levels: usize) -> Result<()> {
    let divisor = n.checked_pow(levels as u32).ok_or(Error::LengthNotDivisible {
        len: seq.len(),
        divisor: usize::MAX,
    })?;
    if !seq.len().is_multiple_of(divisor) {
        return Err(Error::LengthNotDivisible {
            len: seq.len(),
            divisor,
        });
    }
    if seq.boundary() == Boundary::Periodic && seq.len() / divisor < 2 {
        return Err(Error::InvalidSequence(format!(
            "{levels} levels leave fewer than two periodic coarse points"
        )));
    }
    Ok(())
}

/// `base ⊕ s · pt(q)`, the detail moved to `base` before use.
fn apply_detail(base: &ManifoldPoint, q: &TangentVector, s: f64) -> Result<ManifoldPoint> {
    let v = parallel_transport(q, base)?;
    if v.is_zero() {
        return Ok(base.clone());
    }
    let w: Vec<f64> = v.vec().iter().map(|c| c * s).collect();
    Ok(Chart::new(base).exp(&w))
}
