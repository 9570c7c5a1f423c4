use serde::{Deserialize, Serialize};

use super::Pyramid;
use crate::error::{Error, Result};
use crate::manifold::TangentVector;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ThresholdMode {
    /// Zero every detail at level `k` whose norm is below `τ · μ^k`.
    Hard(f64),
    /// Keep this fraction of the nonzero details, largest `‖q‖ / μ^k` first.
    KeepTop(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ThresholdPolicy {
    pub mode: ThresholdMode,
    /// Level weight `μ`.
    pub per_level_scale: f64,
}

impl ThresholdPolicy {
    pub fn hard(tau: f64) -> Self {
        ThresholdPolicy {
            mode: ThresholdMode::Hard(tau),
            per_level_scale: 1.0,
        }
    }

    pub fn keep_top(fraction: f64) -> Self {
        ThresholdPolicy {
            mode: ThresholdMode::KeepTop(fraction),
            per_level_scale: 1.0,
        }
    }

    pub fn with_scale(mut self, mu: f64) -> Self {
        self.per_level_scale = mu;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let mu = self.per_level_scale;
        if !(mu > 0.0 && mu.is_finite()) {
            return Err(Error::InvalidSequence(format!("level scale {mu} must be positive")));
        }
        match self.mode {
            ThresholdMode::Hard(tau) if !(tau >= 0.0) => {
                Err(Error::InvalidSequence(format!("threshold {tau} must be nonnegative")))
            }
            ThresholdMode::KeepTop(f) if !(f > 0.0 && f <= 1.0) => {
                Err(Error::InvalidSequence(format!("keep fraction {f} must lie in (0, 1]")))
            }
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ThresholdStats {
    /// Nonzero details retained.
    pub kept: usize,
    /// Nonzero details set to zero.
    pub dropped: usize,
    /// `Σ ‖q‖²` over all details before thresholding.
    pub total_energy: f64,
    pub dropped_energy: f64,
}

/// Zeroes details according to `policy`; the coarse level is untouched.
pub fn threshold(pyr: &Pyramid, policy: &ThresholdPolicy) -> Result<(Pyramid, ThresholdStats)> {
    policy.validate()?;
    let mu = policy.per_level_scale;
    let mut entries: Vec<(usize, usize, f64, f64)> = Vec::new();
    for (j, level) in pyr.details().iter().enumerate() {
        let weight = mu.powi(j as i32 + 1);
        for (i, q) in level.iter().enumerate() {
            let norm = q.norm();
            if norm > 0.0 {
                entries.push((j, i, norm, norm / weight));
            }
        }
    }
    let keep: Vec<bool> = match policy.mode {
        ThresholdMode::Hard(tau) => entries
            .iter()
            .map(|&(j, _, norm, _)| norm >= tau * mu.powi(j as i32 + 1))
            .collect(),
        ThresholdMode::KeepTop(fraction) => {
            let count = (fraction * entries.len() as f64).ceil() as usize;
            let mut order: Vec<usize> = (0..entries.len()).collect();
            order.sort_by(|&a, &b| entries[b].3.total_cmp(&entries[a].3).then(a.cmp(&b)));
            let mut keep = vec![false; entries.len()];
            for &k in order.iter().take(count) {
                keep[k] = true;
            }
            keep
        }
    };
    let mut out = pyr.clone();
    let mut stats = ThresholdStats::default();
    for (&(j, i, norm, _), kept) in entries.iter().zip(keep) {
        stats.total_energy += norm * norm;
        if kept {
            stats.kept += 1;
        } else {
            stats.dropped += 1;
            stats.dropped_energy += norm * norm;
            let base = pyr.details()[j][i].base().clone();
            out.set_detail(j + 1, i, TangentVector::zero(base))?;
        }
    }
    Ok((out, stats))
}
