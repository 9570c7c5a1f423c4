//! Points, tangent vectors and the exponential/logarithm maps of the four
//! supported geometries.
//!
//! Coordinates are stored flat. A point of [`ManifoldKind::Sphere`]`(d)` is a
//! unit vector in `R^{d+1}`, a [`ManifoldKind::Rotation3`] point is a unit
//! quaternion `[w, x, y, z]`, and an [`ManifoldKind::Spd`]`(n)` point is the
//! packed upper triangle of the matrix. Tangent vectors use the ambient
//! chart for spheres, the body angular velocity `p^{-1} v` for rotations, and
//! the full row-major symmetric matrix for SPD.

mod rotation;
mod spd;
mod sphere;

use std::fmt;

use nalgebra::{DMatrix, Matrix3};

use crate::error::{Error, Result};
use crate::linalg::{self, Quat};
use crate::tolerance::{tangent_tolerance, tolerance};

pub use rotation::project_to_rotation;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ManifoldKind {
    Euclidean(usize),
    Sphere(usize),
    Rotation3,
    Spd(usize),
}

impl fmt::Display for ManifoldKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ManifoldKind::Euclidean(d) => write!(f, "euclidean({d})"),
            ManifoldKind::Sphere(d) => write!(f, "sphere({d})"),
            ManifoldKind::Rotation3 => write!(f, "so3"),
            ManifoldKind::Spd(n) => write!(f, "spd({n})"),
        }
    }
}

impl ManifoldKind {
    /// Length of the coordinate array of a point.
    pub fn coord_len(&self) -> usize {
        match *self {
            ManifoldKind::Euclidean(d) => d,
            ManifoldKind::Sphere(d) => d + 1,
            ManifoldKind::Rotation3 => 4,
            ManifoldKind::Spd(n) => linalg::packed_len(n),
        }
    }

    /// Length of the coordinate array of a tangent vector.
    pub fn tangent_len(&self) -> usize {
        match *self {
            ManifoldKind::Euclidean(d) => d,
            ManifoldKind::Sphere(d) => d + 1,
            ManifoldKind::Rotation3 => 3,
            ManifoldKind::Spd(n) => n * n,
        }
    }

    /// Whether the logarithm is defined for every pair of points.
    pub fn is_hadamard(&self) -> bool {
        matches!(self, ManifoldKind::Euclidean(_) | ManifoldKind::Spd(_))
    }

    fn check_dimension(&self) -> Result<()> {
        let ok = match *self {
            ManifoldKind::Euclidean(d) | ManifoldKind::Sphere(d) | ManifoldKind::Spd(d) => d > 0,
            ManifoldKind::Rotation3 => true,
        };
        if ok {
            Ok(())
        } else {
            Err(Error::InvalidPoint(format!("{self}: dimension must be positive")))
        }
    }

    pub fn validate_coords(&self, coords: &[f64]) -> Result<()> {
        self.check_dimension()?;
        if coords.len() != self.coord_len() {
            return Err(Error::InvalidPoint(format!(
                "{self} expects {} coordinates, got {}",
                self.coord_len(),
                coords.len()
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidPoint("non-finite coordinate".into()));
        }
        let tol = tolerance();
        match *self {
            ManifoldKind::Euclidean(_) => Ok(()),
            ManifoldKind::Sphere(_) | ManifoldKind::Rotation3 => {
                let n = linalg::norm(coords);
                if (n - 1.0).abs() > tol {
                    Err(Error::InvalidPoint(format!(
                        "{self} point must have unit norm, |x| - 1 = {:e}",
                        n - 1.0
                    )))
                } else {
                    Ok(())
                }
            }
            ManifoldKind::Spd(n) => {
                let m = linalg::unpack_symmetric(n, coords);
                let e = linalg::eigh(&m);
                let min = e.eigenvalues.min();
                if min > 0.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidPoint(format!(
                        "matrix is not positive definite (smallest eigenvalue {min:e})"
                    )))
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ManifoldPoint {
    kind: ManifoldKind,
    coords: Vec<f64>,
}

impl ManifoldPoint {
    pub fn new(kind: ManifoldKind, coords: Vec<f64>) -> Result<Self> {
        kind.validate_coords(&coords)?;
        Ok(ManifoldPoint { kind, coords })
    }

    /// Skips validation; for values produced by the geometry code itself.
    pub(crate) fn from_raw(kind: ManifoldKind, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), kind.coord_len());
        ManifoldPoint { kind, coords }
    }

    pub fn euclidean(coords: impl Into<Vec<f64>>) -> Self {
        let coords = coords.into();
        ManifoldPoint {
            kind: ManifoldKind::Euclidean(coords.len()),
            coords,
        }
    }

    pub fn sphere(coords: impl Into<Vec<f64>>) -> Result<Self> {
        let coords = coords.into();
        if coords.len() < 2 {
            return Err(Error::InvalidPoint("sphere points need at least 2 coordinates".into()));
        }
        Self::new(ManifoldKind::Sphere(coords.len() - 1), coords)
    }

    /// Radial projection of a nonzero vector onto the unit sphere.
    pub fn sphere_normalized(coords: impl Into<Vec<f64>>) -> Result<Self> {
        let mut coords = coords.into();
        let n = linalg::norm(&coords);
        if !(n > 0.0 && n.is_finite()) {
            return Err(Error::InvalidPoint("cannot normalize a zero vector".into()));
        }
        coords.iter_mut().for_each(|c| *c /= n);
        Self::sphere(coords)
    }

    pub fn rotation(q: Quat) -> Result<Self> {
        Self::new(ManifoldKind::Rotation3, q.to_vec())
    }

    pub fn rotation_normalized(q: Quat) -> Result<Self> {
        if !(linalg::norm(&q) > 0.0) {
            return Err(Error::InvalidPoint("zero quaternion".into()));
        }
        Self::rotation(linalg::quat_normalize(q))
    }

    /// Rotation from an orthogonal matrix with determinant +1.
    pub fn rotation_from_matrix(r: &Matrix3<f64>) -> Result<Self> {
        let err = (r.transpose() * r - Matrix3::identity()).abs().max();
        let tol = tangent_tolerance();
        if err > tol || (r.determinant() - 1.0).abs() > tol {
            return Err(Error::InvalidPoint(format!(
                "matrix is not a rotation (|R^T R - I| = {err:e})"
            )));
        }
        Ok(Self::from_raw(
            ManifoldKind::Rotation3,
            linalg::matrix_to_quat(r).to_vec(),
        ))
    }

    /// SPD point from a full matrix, which must be symmetric.
    pub fn spd(m: &DMatrix<f64>) -> Result<Self> {
        let n = m.nrows();
        if m.ncols() != n {
            return Err(Error::InvalidPoint("SPD matrix must be square".into()));
        }
        let scale = m.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        let asym = (m - m.transpose()).abs().max();
        if asym > tolerance() * scale {
            return Err(Error::InvalidPoint(format!(
                "matrix is not symmetric (|A - A^T| = {asym:e})"
            )));
        }
        Self::new(ManifoldKind::Spd(n), linalg::pack_symmetric(m))
    }

    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    /// Quaternion of a rotation point.
    pub fn quaternion(&self) -> Option<Quat> {
        match self.kind {
            ManifoldKind::Rotation3 => Some([self.coords[0], self.coords[1], self.coords[2], self.coords[3]]),
            _ => None,
        }
    }

    pub fn rotation_matrix(&self) -> Option<Matrix3<f64>> {
        self.quaternion().map(|q| linalg::quat_to_matrix(&q))
    }

    pub fn spd_matrix(&self) -> Option<DMatrix<f64>> {
        match self.kind {
            ManifoldKind::Spd(n) => Some(linalg::unpack_symmetric(n, &self.coords)),
            _ => None,
        }
    }

    /// Coordinates as used by the file formats (full row-major matrix for SPD).
    pub fn external_coords(&self) -> Vec<f64> {
        match self.spd_matrix() {
            Some(m) => linalg::row_major(&m),
            None => self.coords.clone(),
        }
    }

    /// Checks the kind's invariant against the current global tolerance.
    pub fn validate(&self) -> Result<()> {
        self.kind.validate_coords(&self.coords)
    }
}

/// A tangent vector together with the point it is attached to.
#[derive(Debug, Clone, PartialEq)]
pub struct TangentVector {
    base: ManifoldPoint,
    vec: Vec<f64>,
}

impl TangentVector {
    pub fn new(base: ManifoldPoint, vec: Vec<f64>) -> Result<Self> {
        let kind = base.kind;
        if vec.len() != kind.tangent_len() {
            return Err(Error::InvalidTangent(format!(
                "{kind} tangent vectors have {} components, got {}",
                kind.tangent_len(),
                vec.len()
            )));
        }
        if vec.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidTangent("non-finite component".into()));
        }
        let tol = tangent_tolerance();
        let scale = vec.iter().fold(1.0f64, |a, x| a.max(x.abs()));
        match kind {
            ManifoldKind::Sphere(_) => {
                let along = linalg::dot(&vec, &base.coords);
                if along.abs() > tol * scale {
                    return Err(Error::InvalidTangent(format!(
                        "vector is not orthogonal to its base point (<v,p> = {along:e})"
                    )));
                }
            }
            ManifoldKind::Spd(n) => {
                for i in 0..n {
                    for j in i + 1..n {
                        if (vec[i * n + j] - vec[j * n + i]).abs() > tolerance() * scale {
                            return Err(Error::InvalidTangent("matrix is not symmetric".into()));
                        }
                    }
                }
            }
            _ => {}
        }
        Ok(TangentVector { base, vec })
    }

    pub(crate) fn from_raw(base: ManifoldPoint, vec: Vec<f64>) -> Self {
        debug_assert_eq!(vec.len(), base.kind.tangent_len());
        TangentVector { base, vec }
    }

    pub fn zero(base: ManifoldPoint) -> Self {
        let len = base.kind.tangent_len();
        TangentVector {
            base,
            vec: vec![0.0; len],
        }
    }

    pub fn base(&self) -> &ManifoldPoint {
        &self.base
    }

    pub fn vec(&self) -> &[f64] {
        &self.vec
    }

    pub fn into_parts(self) -> (ManifoldPoint, Vec<f64>) {
        (self.base, self.vec)
    }

    pub fn is_zero(&self) -> bool {
        self.vec.iter().all(|&c| c == 0.0)
    }

    /// Riemannian length.
    pub fn norm(&self) -> f64 {
        Chart::new(&self.base).norm(&self.vec)
    }

    pub fn scaled(&self, s: f64) -> TangentVector {
        TangentVector {
            base: self.base.clone(),
            vec: self.vec.iter().map(|c| c * s).collect(),
        }
    }

    pub fn plus(&self, other: &TangentVector) -> Result<TangentVector> {
        if self.base != other.base {
            return Err(Error::BaseMismatch);
        }
        Ok(TangentVector {
            base: self.base.clone(),
            vec: self.vec.iter().zip(&other.vec).map(|(a, b)| a + b).collect(),
        })
    }
}

/// Per-base-point cache for repeated `exp`/`log` evaluations at one point.
pub struct Chart<'a> {
    base: &'a ManifoldPoint,
    spd: Option<spd::SpdRoots>,
}

impl<'a> Chart<'a> {
    pub fn new(base: &'a ManifoldPoint) -> Self {
        let spd = match base.kind {
            ManifoldKind::Spd(n) => Some(spd::SpdRoots::new(n, &base.coords)),
            _ => None,
        };
        Chart { base, spd }
    }

    pub fn base(&self) -> &ManifoldPoint {
        self.base
    }

    fn check_kind(&self, q: &ManifoldPoint) -> Result<()> {
        if q.kind != self.base.kind {
            Err(Error::KindMismatch {
                expected: self.base.kind,
                found: q.kind,
            })
        } else {
            Ok(())
        }
    }

    /// `q ⊖ base` as raw tangent coordinates.
    pub fn log(&self, q: &ManifoldPoint) -> Result<Vec<f64>> {
        self.check_kind(q)?;
        let p = self.base;
        if p.coords == q.coords {
            return Ok(vec![0.0; p.kind.tangent_len()]);
        }
        match p.kind {
            ManifoldKind::Euclidean(_) => Ok(q.coords.iter().zip(&p.coords).map(|(a, b)| a - b).collect()),
            ManifoldKind::Sphere(_) => sphere::log(&p.coords, &q.coords),
            ManifoldKind::Rotation3 => rotation::log(&p.coords, &q.coords),
            ManifoldKind::Spd(_) => Ok(self.spd.as_ref().expect("spd chart").log(&q.coords)),
        }
    }

    /// `base ⊕ v` for raw tangent coordinates.
    pub fn exp(&self, v: &[f64]) -> ManifoldPoint {
        let p = self.base;
        if v.iter().all(|&c| c == 0.0) {
            return p.clone();
        }
        let coords = match p.kind {
            ManifoldKind::Euclidean(_) => p.coords.iter().zip(v).map(|(a, b)| a + b).collect(),
            ManifoldKind::Sphere(_) => sphere::exp(&p.coords, v),
            ManifoldKind::Rotation3 => rotation::exp(&p.coords, v),
            ManifoldKind::Spd(_) => self.spd.as_ref().expect("spd chart").exp(v),
        };
        ManifoldPoint::from_raw(p.kind, coords)
    }

    pub fn norm(&self, v: &[f64]) -> f64 {
        match self.base.kind {
            ManifoldKind::Spd(_) => self.spd.as_ref().expect("spd chart").norm(v),
            _ => linalg::norm(v),
        }
    }
}

/// `p ⊕ v`: endpoint of the geodesic leaving `p` with velocity `v`.
pub fn exp_point(p: &ManifoldPoint, v: &TangentVector) -> Result<ManifoldPoint> {
    if &v.base != p {
        return Err(Error::BaseMismatch);
    }
    Ok(Chart::new(p).exp(&v.vec))
}

/// `q ⊖ p`: the shortest tangent vector at `p` whose geodesic reaches `q`.
pub fn log_point(p: &ManifoldPoint, q: &ManifoldPoint) -> Result<TangentVector> {
    let vec = Chart::new(p).log(q)?;
    Ok(TangentVector::from_raw(p.clone(), vec))
}

/// Geodesic distance.
pub fn distance(p: &ManifoldPoint, q: &ManifoldPoint) -> Result<f64> {
    if p.kind != q.kind {
        return Err(Error::KindMismatch {
            expected: p.kind,
            found: q.kind,
        });
    }
    if p.coords == q.coords {
        return Ok(0.0);
    }
    Ok(match p.kind {
        ManifoldKind::Euclidean(_) => {
            let d: Vec<f64> = p.coords.iter().zip(&q.coords).map(|(a, b)| a - b).collect();
            linalg::norm(&d)
        }
        ManifoldKind::Sphere(_) => sphere::angle(&p.coords, &q.coords),
        ManifoldKind::Rotation3 => rotation::angle(&p.coords, &q.coords),
        ManifoldKind::Spd(n) => spd::distance(n, &p.coords, &q.coords),
    })
}

/// Moves `v` to the tangent space at `to` along the shortest geodesic
/// (Levi-Civita transport; left translation for rotations).
pub fn parallel_transport(v: &TangentVector, to: &ManifoldPoint) -> Result<TangentVector> {
    let from = &v.base;
    if from.kind != to.kind {
        return Err(Error::KindMismatch {
            expected: from.kind,
            found: to.kind,
        });
    }
    if from == to {
        return Ok(v.clone());
    }
    let vec = match from.kind {
        ManifoldKind::Euclidean(_) | ManifoldKind::Rotation3 => v.vec.clone(),
        ManifoldKind::Sphere(_) => sphere::transport(&from.coords, &to.coords, &v.vec)?,
        ManifoldKind::Spd(n) => spd::transport(n, &from.coords, &to.coords, &v.vec),
    };
    Ok(TangentVector::from_raw(to.clone(), vec))
}

/// Geodesic point `a ⊕ t (b ⊖ a)`.
pub fn geodesic_point(a: &ManifoldPoint, b: &ManifoldPoint, t: f64) -> Result<ManifoldPoint> {
    let chart = Chart::new(a);
    let mut v = chart.log(b)?;
    v.iter_mut().for_each(|c| *c *= t);
    Ok(chart.exp(&v))
}

pub fn midpoint(a: &ManifoldPoint, b: &ManifoldPoint) -> Result<ManifoldPoint> {
    geodesic_point(a, b, 0.5)
}
