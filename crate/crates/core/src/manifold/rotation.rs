use std::f64::consts::PI;

use nalgebra::Matrix3;

use super::{ManifoldKind, ManifoldPoint};
use crate::error::{Error, Result};
use crate::linalg::{matrix_to_quat, norm, quat_conj, quat_mul, quat_normalize, Quat};
use crate::tolerance::CUT_LOCUS_MARGIN;

fn quat(c: &[f64]) -> Quat {
    [c[0], c[1], c[2], c[3]]
}

/// `p^{-1} q`, sign-normalized to the short arc.
fn relative(p: &[f64], q: &[f64]) -> Quat {
    let r = quat_mul(&quat_conj(&quat(p)), &quat(q));
    if r[0] < 0.0 {
        [-r[0], -r[1], -r[2], -r[3]]
    } else {
        r
    }
}

pub(super) fn angle(p: &[f64], q: &[f64]) -> f64 {
    let r = relative(p, q);
    2.0 * norm(&r[1..]).atan2(r[0])
}

pub(super) fn log(p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    let r = relative(p, q);
    let s = norm(&r[1..]);
    let theta = 2.0 * s.atan2(r[0]);
    if theta > PI - CUT_LOCUS_MARGIN {
        return Err(Error::CutLocus { distance: theta });
    }
    if s == 0.0 {
        return Ok(vec![0.0; 3]);
    }
    let k = theta / s;
    Ok(vec![k * r[1], k * r[2], k * r[3]])
}

pub(super) fn exp(p: &[f64], omega: &[f64]) -> Vec<f64> {
    let theta = norm(omega);
    let half = 0.5 * theta;
    let k = half.sin() / theta;
    let e = [half.cos(), k * omega[0], k * omega[1], k * omega[2]];
    quat_normalize(quat_mul(&quat(p), &e)).to_vec()
}

/// Polar factor `(g g^T)^{-1/2} g` of a matrix with positive determinant.
pub fn project_to_rotation(g: &Matrix3<f64>) -> Result<ManifoldPoint> {
    if g.iter().any(|c| !c.is_finite()) {
        return Err(Error::SingularMatrix);
    }
    let svd = g.svd(true, true);
    let sv = svd.singular_values;
    if !(sv.min() > 1e-14 * sv.max()) {
        return Err(Error::SingularMatrix);
    }
    if g.determinant() < 0.0 {
        return Err(Error::NegativeDeterminant);
    }
    let u = svd.u.expect("requested U");
    let vt = svd.v_t.expect("requested V^T");
    let r = u * vt;
    Ok(ManifoldPoint::from_raw(
        ManifoldKind::Rotation3,
        matrix_to_quat(&r).to_vec(),
    ))
}
