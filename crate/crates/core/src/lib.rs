//! Subdivision, averaging and multiscale transforms for manifold-valued data.
//!
//! Data live on one of four geometries ([`ManifoldKind`]): Euclidean space,
//! the unit sphere, the rotation group SO(3) as unit quaternions, and the
//! cone of symmetric positive definite matrices with its affine-invariant
//! metric. All algorithms are written in terms of the exponential map
//! `p ⊕ v` and its inverse `q ⊖ p` ([`Chart`]).
//!
//! ```
//! use geomsub::{Mask, Rule, SchemeVariant, Sequence, subdivide};
//!
//! let square = Sequence::euclidean(
//!     &[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]],
//!     geomsub::Boundary::Periodic,
//! )?;
//! let rule = Rule::masked(Mask::chaikin(), SchemeVariant::Linear)?;
//! let refined = subdivide(&square, &rule, 2)?;
//! assert_eq!(refined.len(), 16);
//! # Ok::<(), geomsub::Error>(())
//! ```

// `!(x > 0.0)` rejects NaN along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod averages;
pub mod error;
pub mod io;
pub mod linalg;
pub mod manifold;
pub mod mask;
pub mod multiscale;
pub mod sampling;
pub mod sequence;
pub mod subdivision;
pub mod tolerance;

pub use analysis::{
    contraction_factors, contractivity_report, density, derived_mask, displacement_gap, empirical_contraction,
    operator_norm, ConvergenceReport, LaurentPoly, Verdict,
};
pub use averages::{
    affine_average, basepoint_average, frechet_mean, frechet_mean_detailed, MeanConfig, MeanEstimate, WeightedData,
};
pub use error::{Error, Result};
pub use manifold::{
    distance, exp_point, geodesic_point, log_point, midpoint, parallel_transport, project_to_rotation, Chart,
    ManifoldKind, ManifoldPoint, TangentVector,
};
pub use mask::Mask;
pub use multiscale::{
    decompose, estimate_regularity, haar_decompose, haar_reconstruct, reconstruct, stability_experiment, threshold,
    wavelet_decompose, wavelet_reconstruct, Pyramid, PyramidScheme, ThresholdMode, ThresholdPolicy,
};
pub use sequence::{Boundary, Sequence};
pub use subdivision::{
    derivative_samples, four_point, geodesic_pipeline_once, limit_samples, subdivide, subdivide_once, BasePointRule,
    Rule, SchemeVariant, Stage,
};
