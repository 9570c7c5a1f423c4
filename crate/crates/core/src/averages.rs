//! Weighted averages of manifold-valued data.
//!
//! Three flavours are provided: the exact affine combination for Euclidean
//! data, the weighted Fréchet (Karcher) mean computed by fixed-point
//! iteration, and the single-shot log/exp average with respect to a chosen
//! base point. The Fréchet mean `x` is characterized by the vanishing of
//! `Σ a_j (x_j ⊖ x)`, which is also the stopping criterion of the iteration.

use crate::error::{Error, Result};
use crate::linalg::order_free_sum;
use crate::manifold::{distance, Chart, ManifoldKind, ManifoldPoint};
use crate::tolerance::tolerance;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedData {
    weights: Vec<f64>,
    points: Vec<ManifoldPoint>,
}

impl WeightedData {
    /// Weights must sum to one; negative weights are allowed.
    pub fn new(weights: Vec<f64>, points: Vec<ManifoldPoint>) -> Result<Self> {
        if weights.len() != points.len() {
            return Err(Error::InvalidWeights(format!(
                "{} weights for {} points",
                weights.len(),
                points.len()
            )));
        }
        if points.is_empty() {
            return Err(Error::InvalidWeights("no data points".into()));
        }
        if weights.iter().any(|w| !w.is_finite()) {
            return Err(Error::InvalidWeights("non-finite weight".into()));
        }
        let kind = points[0].kind();
        if let Some(p) = points.iter().find(|p| p.kind() != kind) {
            return Err(Error::KindMismatch {
                expected: kind,
                found: p.kind(),
            });
        }
        let sum = order_free_sum(&mut weights.clone());
        let scale = weights.iter().map(|w| w.abs()).sum::<f64>().max(1.0);
        if (sum - 1.0).abs() > tolerance() * scale {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}, not 1")));
        }
        Ok(WeightedData { weights, points })
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn points(&self) -> &[ManifoldPoint] {
        &self.points
    }

    pub fn kind(&self) -> ManifoldKind {
        self.points[0].kind()
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn has_negative_weights(&self) -> bool {
        self.weights.iter().any(|&w| w < 0.0)
    }

    /// Largest pairwise geodesic distance.
    pub fn diameter(&self) -> Result<f64> {
        let mut d = 0.0f64;
        for (i, p) in self.points.iter().enumerate() {
            for q in &self.points[i + 1..] {
                d = d.max(distance(p, q)?);
            }
        }
        Ok(d)
    }

    /// Index of the heaviest point; ties go to the first.
    pub fn heaviest(&self) -> usize {
        let mut best = 0;
        for (i, &w) in self.weights.iter().enumerate() {
            if w > self.weights[best] {
                best = i;
            }
        }
        best
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MeanConfig {
    pub max_iter: usize,
    /// Stop once `‖Σ a_j (x_j ⊖ x)‖ ≤ tol · (1 + diameter)`.
    pub tol: f64,
    /// Step length factor; `None` picks 1.0, or 0.5 when a weight is negative.
    pub damping: Option<f64>,
}

impl Default for MeanConfig {
    fn default() -> Self {
        MeanConfig {
            max_iter: 100,
            tol: 1e-12,
            damping: None,
        }
    }
}

impl MeanConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iter < 1 {
            return Err(Error::InvalidWeights("max_iter must be at least 1".into()));
        }
        if !(self.tol > 0.0) {
            return Err(Error::InvalidWeights("tol must be positive".into()));
        }
        if let Some(d) = self.damping {
            if !(d > 0.0 && d <= 1.0) {
                return Err(Error::InvalidWeights("damping must lie in (0, 1]".into()));
            }
        }
        Ok(())
    }

    fn damping_for(&self, data: &WeightedData) -> f64 {
        self.damping
            .unwrap_or(if data.has_negative_weights() { 0.5 } else { 1.0 })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MeanEstimate {
    pub point: ManifoldPoint,
    pub iterations: usize,
    pub residual: f64,
}

fn require_euclidean(data: &WeightedData) -> Result<()> {
    match data.kind() {
        ManifoldKind::Euclidean(_) => Ok(()),
        other => Err(Error::KindMismatch {
            expected: ManifoldKind::Euclidean(other.coord_len()),
            found: other,
        }),
    }
}

/// `Σ a_j x_j`, summed so that the result is independent of the order of the data.
pub fn affine_average(data: &WeightedData) -> Result<ManifoldPoint> {
    require_euclidean(data)?;
    let dim = data.kind().coord_len();
    let mut terms = vec![0.0; data.len()];
    let coords: Vec<f64> = (0..dim)
        .map(|k| {
            for (t, (w, p)) in terms.iter_mut().zip(data.weights.iter().zip(&data.points)) {
                *t = w * p.coords()[k];
            }
            order_free_sum(&mut terms)
        })
        .collect();
    Ok(ManifoldPoint::euclidean(coords))
}

/// `Σ a_j (x_j ⊖ x)` in the chart at `x`.
fn weighted_log_sum(chart: &Chart<'_>, data: &WeightedData) -> Result<Vec<f64>> {
    let mut acc = vec![0.0; data.kind().tangent_len()];
    for (w, p) in data.weights.iter().zip(&data.points) {
        if *w == 0.0 {
            continue;
        }
        let v = chart.log(p)?;
        acc.iter_mut().zip(&v).for_each(|(a, b)| *a += w * b);
    }
    Ok(acc)
}

/// Riemannian norm of `Σ a_j (x_j ⊖ x)`; zero exactly at a Fréchet mean.
pub fn stationarity_residual(x: &ManifoldPoint, data: &WeightedData) -> Result<f64> {
    let chart = Chart::new(x);
    Ok(chart.norm(&weighted_log_sum(&chart, data)?))
}

/// Log/exp average `base ⊕ Σ a_j (x_j ⊖ base)`.
pub fn basepoint_average(base: &ManifoldPoint, data: &WeightedData) -> Result<ManifoldPoint> {
    if base.kind() != data.kind() {
        return Err(Error::KindMismatch {
            expected: data.kind(),
            found: base.kind(),
        });
    }
    let chart = Chart::new(base);
    Ok(chart.exp(&weighted_log_sum(&chart, data)?))
}

pub fn frechet_mean(data: &WeightedData, cfg: &MeanConfig, init: Option<&ManifoldPoint>) -> Result<ManifoldPoint> {
    frechet_mean_detailed(data, cfg, init).map(|m| m.point)
}

/// Karcher iteration `x ← x ⊕ damping · Σ a_j (x_j ⊖ x)`.
///
/// Euclidean data short-circuit to [`affine_average`], the closed-form
/// minimizer. Elsewhere the iteration starts at `init` or at the heaviest
/// point and must reach the stationarity tolerance within `cfg.max_iter`
/// steps, else [`Error::NoConvergence`].
pub fn frechet_mean_detailed(
    data: &WeightedData,
    cfg: &MeanConfig,
    init: Option<&ManifoldPoint>,
) -> Result<MeanEstimate> {
    cfg.validate()?;
    if let ManifoldKind::Euclidean(_) = data.kind() {
        let point = affine_average(data)?;
        let residual = stationarity_residual(&point, data)?;
        return Ok(MeanEstimate {
            point,
            iterations: 0,
            residual,
        });
    }
    let mut x = match init {
        Some(p) if p.kind() == data.kind() => p.clone(),
        Some(p) => {
            return Err(Error::KindMismatch {
                expected: data.kind(),
                found: p.kind(),
            })
        }
        None => data.points[data.heaviest()].clone(),
    };
    let damping = cfg.damping_for(data);
    let mut threshold = None;
    let mut residual = f64::INFINITY;
    for iterations in 0..=cfg.max_iter {
        let chart = Chart::new(&x);
        let mut step = weighted_log_sum(&chart, data)?;
        residual = chart.norm(&step);
        if residual == 0.0 {
            return Ok(MeanEstimate {
                point: x,
                iterations,
                residual,
            });
        }
        let limit = match threshold {
            Some(t) => t,
            None => {
                let t = cfg.tol * (1.0 + data.diameter()?);
                threshold = Some(t);
                t
            }
        };
        if residual <= limit {
            return Ok(MeanEstimate {
                point: x,
                iterations,
                residual,
            });
        }
        if !residual.is_finite() || iterations == cfg.max_iter {
            break;
        }
        step.iter_mut().for_each(|c| *c *= damping);
        x = chart.exp(&step);
    }
    Err(Error::NoConvergence {
        iterations: cfg.max_iter,
        residual,
    })
}
