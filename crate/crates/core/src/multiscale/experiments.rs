use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{decompose, reconstruct, Pyramid, PyramidScheme};
use crate::error::{Error, Result};
use crate::manifold::{distance, Chart, ManifoldPoint};
use crate::sampling::random_tangent;
use crate::sequence::{Boundary, Sequence};
use crate::subdivision::{subdivide, Rule};

/// Coarsest levels left out of the decay fit.
pub const REGULARITY_SKIP_LEVELS: usize = 2;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegularityEstimate {
    pub alpha_hat: f64,
    /// `sup_i ‖q^{(j)}_i‖` for `j = 1..=M`.
    pub per_level_max: Vec<f64>,
    /// Levels entering the fit.
    pub levels_used: Vec<usize>,
}

/// Least-squares slope of `ys` against `xs`.
fn slope(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    sxy / sxx
}

/// Fits `max_j ≈ C · N^{−α j}` over levels `skip+1..`, ignoring exact zeros.
///
/// Returns `α` and the levels used; `α = ∞` when no level beyond `skip`
/// carries a nonzero detail.
pub fn decay_exponent(per_level_max: &[f64], dilation: usize, skip: usize) -> Result<(f64, Vec<usize>)> {
    let levels: Vec<usize> = (skip + 1..=per_level_max.len())
        .filter(|&j| per_level_max[j - 1] > 0.0)
        .collect();
    match levels.len() {
        0 => Ok((f64::INFINITY, levels)),
        1 => Err(Error::InvalidSequence(
            "a decay fit needs at least two levels with nonzero details".into(),
        )),
        _ => {
            let xs: Vec<f64> = levels.iter().map(|&j| j as f64).collect();
            let ys: Vec<f64> = levels.iter().map(|&j| per_level_max[j - 1].ln()).collect();
            Ok((-slope(&xs, &ys) / (dilation as f64).ln(), levels))
        }
    }
}

/// Hölder exponent estimate from the decay of the per-level maximal detail norms.
pub fn estimate_regularity(pyr: &Pyramid) -> Result<RegularityEstimate> {
    let per_level_max = pyr.level_max_norms();
    let (alpha_hat, levels_used) = decay_exponent(&per_level_max, pyr.scheme().dilation(), REGULARITY_SKIP_LEVELS)?;
    Ok(RegularityEstimate {
        alpha_hat,
        per_level_max,
        levels_used,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct StabilityConfig {
    pub levels: usize,
    /// Norm of the perturbation of each coarse point.
    pub epsilon: f64,
    /// Detail perturbations at level `k` have norm `ε μ^k`.
    pub mu: f64,
    pub trials: usize,
    pub seed: u64,
}

impl Default for StabilityConfig {
    fn default() -> Self {
        StabilityConfig {
            levels: 3,
            epsilon: 1e-6,
            mu: 0.5,
            trials: 20,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StabilityReport {
    /// Largest observed ratio of output deviation to input budget.
    pub constant: f64,
    pub ratios: Vec<f64>,
    /// `ε (1 + Σ_k μ^k)`.
    pub budget: f64,
}

fn perturb(p: &ManifoldPoint, norm: f64, rng: &mut ChaCha8Rng) -> ManifoldPoint {
    if norm == 0.0 {
        return p.clone();
    }
    let v = random_tangent(p, norm, rng);
    Chart::new(p).exp(v.vec())
}

/// Perturbs coarse points by `ε` and level-`k` details by `ε μ^k` in random
/// directions, reconstructs, and relates the largest output deviation to
/// the total perturbation budget.
pub fn stability_experiment(seq: &Sequence, scheme: &PyramidScheme, cfg: &StabilityConfig) -> Result<StabilityReport> {
    if !(cfg.epsilon >= 0.0 && cfg.mu > 0.0) || cfg.trials == 0 {
        return Err(Error::InvalidSequence(
            "stability experiment needs ε ≥ 0, μ > 0, trials ≥ 1".into(),
        ));
    }
    let pyr = decompose(seq, scheme, cfg.levels)?;
    let reference = reconstruct(&pyr)?;
    let budget = cfg.epsilon * (1.0 + (1..=cfg.levels).map(|k| cfg.mu.powi(k as i32)).sum::<f64>());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut ratios = Vec::with_capacity(cfg.trials);
    for _ in 0..cfg.trials {
        let coarse: Vec<ManifoldPoint> = pyr
            .coarse()
            .points()
            .iter()
            .map(|p| perturb(p, cfg.epsilon, &mut rng))
            .collect();
        let mut noisy = pyr.clone().with_coarse(Sequence::new(coarse, pyr.boundary())?)?;
        for (j, level) in pyr.details().iter().enumerate() {
            let size = cfg.epsilon * cfg.mu.powi(j as i32 + 1);
            if size == 0.0 {
                continue;
            }
            for (i, q) in level.iter().enumerate() {
                let dq = random_tangent(q.base(), size, &mut rng);
                noisy.set_detail(j + 1, i, q.plus(&dq)?)?;
            }
        }
        let out = reconstruct(&noisy)?;
        let mut dev = 0.0f64;
        for (a, b) in out.points().iter().zip(reference.points()) {
            dev = dev.max(distance(a, b)?);
        }
        ratios.push(if budget == 0.0 { 0.0 } else { dev / budget });
    }
    Ok(StabilityReport {
        constant: ratios.iter().copied().fold(0.0, f64::max),
        ratios,
        budget,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationConfig {
    pub start: f64,
    pub end: f64,
    /// Sampling steps `h`, typically `h, h/2, h/4, …`.
    pub steps: Vec<f64>,
    /// Subdivision rounds standing in for the limit.
    pub depth: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ApproximationReport {
    pub steps: Vec<f64>,
    /// `max d(S^k p_h, f)` over the refined parameters, per step.
    pub errors: Vec<f64>,
    /// Log-log slope of error against `h`; infinite when every error is zero.
    pub order: f64,
}

/// Samples `f` at `start + i h` on `[start, end]`, subdivides `depth` times with
/// open boundaries, and compares each refined point with `f` at its parameter.
pub fn approximation_order_experiment<F>(f: F, rule: &Rule, cfg: &ApproximationConfig) -> Result<ApproximationReport>
where
    F: Fn(f64) -> ManifoldPoint,
{
    if cfg.steps.is_empty() || !(cfg.end > cfg.start) {
        return Err(Error::InvalidSequence(
            "approximation experiment needs steps and a nonempty interval".into(),
        ));
    }
    let scale = (rule.dilation() as f64).powi(cfg.depth as i32);
    let mut errors = Vec::with_capacity(cfg.steps.len());
    for &h in &cfg.steps {
        if !(h > 0.0) {
            return Err(Error::InvalidSequence(format!("step {h} must be positive")));
        }
        let n = ((cfg.end - cfg.start) / h + 1e-9).floor() as usize + 1;
        let pts = (0..n).map(|i| f(cfg.start + i as f64 * h)).collect();
        let refined = subdivide(&Sequence::new(pts, Boundary::Open)?, rule, cfg.depth)?;
        let mut err = 0.0f64;
        for (k, q) in refined.points().iter().enumerate() {
            let t = (refined.first_index() + k as i64) as f64 / scale;
            err = err.max(distance(q, &f(cfg.start + t * h))?);
        }
        errors.push(err);
    }
    let (xs, ys): (Vec<f64>, Vec<f64>) = cfg
        .steps
        .iter()
        .zip(&errors)
        .filter(|(_, &e)| e > 0.0)
        .map(|(h, e)| (h.ln(), e.ln()))
        .unzip();
    let order = match xs.len() {
        0 => f64::INFINITY,
        1 => return Err(Error::InvalidSequence("only one step produced a nonzero error".into())),
        _ => slope(&xs, &ys),
    };
    Ok(ApproximationReport {
        steps: cfg.steps.clone(),
        errors,
        order,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::TangentVector;
    use crate::mask::Mask;
    use crate::subdivision::SchemeVariant;

    fn detail(norm: f64) -> TangentVector {
        TangentVector::from_raw(ManifoldPoint::euclidean(vec![0.0]), vec![norm])
    }

    #[test]
    fn exact_geometric_decay() {
        let coarse = Sequence::euclidean(&[vec![0.0], vec![0.0]], Boundary::Periodic).unwrap();
        let details = (1..=6)
            .map(|j| vec![detail(3.0 * 2f64.powi(-2 * j)); 2usize.pow(j as u32)])
            .collect();
        let p = Pyramid::new(PyramidScheme::Haar, coarse, details).unwrap();
        let est = estimate_regularity(&p).unwrap();
        assert!((est.alpha_hat - 2.0).abs() < 1e-12);
        assert_eq!(est.levels_used, vec![3, 4, 5, 6]);
    }

    #[test]
    fn zero_details_mean_infinite_regularity() {
        assert_eq!(decay_exponent(&[0.1, 0.0, 0.0, 0.0], 2, 2).unwrap().0, f64::INFINITY);
        assert!(decay_exponent(&[0.1, 0.1, 0.1, 0.0], 2, 2).is_err());
    }

    fn triangle(n: usize) -> Sequence {
        let rows: Vec<_> = (0..n).map(|i| vec![(-1.0 + 2.0 * i as f64 / n as f64).abs()]).collect();
        Sequence::euclidean(&rows, Boundary::Periodic).unwrap()
    }

    #[test]
    fn kink_has_regularity_one() {
        let scheme = PyramidScheme::Interpolatory {
            mask: Mask::four_point(1.0 / 16.0).unwrap(),
            variant: SchemeVariant::Linear,
        };
        let p = decompose(&triangle(1024), &scheme, 8).unwrap();
        let est = estimate_regularity(&p).unwrap();
        assert!((est.alpha_hat - 1.0).abs() < 0.15, "{est:?}");
    }

    #[test]
    fn zero_perturbation_gives_zero_deviation() {
        let cfg = StabilityConfig {
            epsilon: 0.0,
            trials: 2,
            ..StabilityConfig::default()
        };
        let r = stability_experiment(&triangle(16), &PyramidScheme::Haar, &cfg).unwrap();
        assert_eq!(r.constant, 0.0);
    }

    #[test]
    fn euclidean_haar_constant_is_one() {
        let cfg = StabilityConfig {
            levels: 3,
            trials: 20,
            seed: 7,
            ..StabilityConfig::default()
        };
        let r = stability_experiment(&triangle(64), &PyramidScheme::Haar, &cfg).unwrap();
        assert!((r.constant - 1.0).abs() < 1e-6, "{r:?}");
    }

    #[test]
    fn four_point_has_order_four() {
        let rule = Rule::masked(Mask::four_point(1.0 / 16.0).unwrap(), SchemeVariant::Linear).unwrap();
        let f = |x: f64| ManifoldPoint::euclidean(vec![x.powi(4) - 0.5 * x * x]);
        let cfg = ApproximationConfig {
            start: -1.0,
            end: 1.0,
            steps: vec![0.25, 0.125, 0.0625, 0.03125],
            depth: 4,
        };
        let r = approximation_order_experiment(f, &rule, &cfg).unwrap();
        assert!((r.order - 4.0).abs() < 0.3, "{r:?}");
        let cubic = |x: f64| ManifoldPoint::euclidean(vec![x * x * x - x]);
        let r = approximation_order_experiment(cubic, &rule, &cfg).unwrap();
        assert!(r.errors.iter().all(|&e| e < 1e-12));
    }
}
