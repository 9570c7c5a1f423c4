use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::linalg::{dot, norm};
use crate::tolerance::CUT_LOCUS_MARGIN;

/// Component of `q - p` orthogonal to `p`; equals `q - <p,q> p` on the sphere
/// but loses less precision when `q` is close to `p`.
fn orthogonal_part(p: &[f64], q: &[f64]) -> Vec<f64> {
    let u: Vec<f64> = q.iter().zip(p).map(|(a, b)| a - b).collect();
    let along = dot(p, &u);
    u.iter().zip(p).map(|(a, b)| a - along * b).collect()
}

pub(super) fn angle(p: &[f64], q: &[f64]) -> f64 {
    norm(&orthogonal_part(p, q)).atan2(dot(p, q))
}

pub(super) fn log(p: &[f64], q: &[f64]) -> Result<Vec<f64>> {
    let w = orthogonal_part(p, q);
    let s = norm(&w);
    let theta = s.atan2(dot(p, q));
    if theta > PI - CUT_LOCUS_MARGIN {
        return Err(Error::CutLocus { distance: theta });
    }
    if s == 0.0 {
        return Ok(vec![0.0; p.len()]);
    }
    let mut v: Vec<f64> = w.iter().map(|c| c * theta / s).collect();
    let along = dot(&v, p);
    v.iter_mut().zip(p).for_each(|(c, b)| *c -= along * b);
    Ok(v)
}

pub(super) fn exp(p: &[f64], v: &[f64]) -> Vec<f64> {
    let theta = norm(v);
    let (s, c) = theta.sin_cos();
    let k = s / theta;
    let x: Vec<f64> = p.iter().zip(v).map(|(a, b)| c * a + k * b).collect();
    let n = norm(&x);
    x.into_iter().map(|c| c / n).collect()
}

pub(super) fn transport(p: &[f64], q: &[f64], v: &[f64]) -> Result<Vec<f64>> {
    let dir = log(p, q)?;
    let theta = norm(&dir);
    if theta == 0.0 {
        return Ok(v.to_vec());
    }
    let u: Vec<f64> = dir.iter().map(|c| c / theta).collect();
    let uv = dot(&u, v);
    let (s, c) = theta.sin_cos();
    let mut w: Vec<f64> = (0..v.len())
        .map(|k| v[k] + (c - 1.0) * uv * u[k] - s * uv * p[k])
        .collect();
    let along = dot(&w, q);
    w.iter_mut().zip(q).for_each(|(a, b)| *a -= along * b);
    Ok(w)
}
