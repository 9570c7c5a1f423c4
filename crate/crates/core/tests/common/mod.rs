#![allow(dead_code)]

use geomsub::linalg::{quat_mul, quat_to_matrix};
use geomsub::sampling::{random_point, random_point_near};
use geomsub::{Boundary, ManifoldKind, ManifoldPoint, Sequence};
use nalgebra::{DMatrix, Matrix3, Vector3};
use rand::Rng;

pub const KINDS: [ManifoldKind; 4] = [
    ManifoldKind::Euclidean(3),
    ManifoldKind::Sphere(2),
    ManifoldKind::Rotation3,
    ManifoldKind::Spd(3),
];

pub fn is_flat(kind: ManifoldKind) -> bool {
    matches!(kind, ManifoldKind::Euclidean(_))
}

/// Random walk with steps of length at most `step`.
pub fn walk<R: Rng>(kind: ManifoldKind, n: usize, step: f64, boundary: Boundary, rng: &mut R) -> Sequence {
    let mut p = random_point(kind, rng);
    let mut pts = Vec::with_capacity(n);
    for _ in 0..n {
        pts.push(p.clone());
        p = random_point_near(&p, step, rng);
    }
    Sequence::new(pts, boundary).unwrap()
}

/// Closed loop of `n` points around a random centre with spread `radius`.
pub fn cloud<R: Rng>(kind: ManifoldKind, n: usize, radius: f64, rng: &mut R) -> Vec<ManifoldPoint> {
    let c = random_point(kind, rng);
    (0..n).map(|_| random_point_near(&c, radius, rng)).collect()
}

pub fn random_rotation<R: Rng>(rng: &mut R) -> ([f64; 4], Matrix3<f64>) {
    let q = random_point(ManifoldKind::Rotation3, rng).quaternion().unwrap();
    (q, quat_to_matrix(&q))
}

/// Applies a global isometry: rotation for spheres and SO(3), congruence for Spd.
pub fn act(q: &[f64; 4], p: &ManifoldPoint) -> ManifoldPoint {
    let r = quat_to_matrix(q);
    match p.kind() {
        ManifoldKind::Sphere(2) => {
            let v = r * Vector3::from_column_slice(p.coords());
            ManifoldPoint::sphere(v.as_slice().to_vec()).unwrap()
        }
        ManifoldKind::Rotation3 => ManifoldPoint::rotation(quat_mul(q, &p.quaternion().unwrap())).unwrap(),
        ManifoldKind::Spd(3) => {
            let g = DMatrix::from_column_slice(3, 3, r.as_slice());
            let a = p.spd_matrix().unwrap();
            ManifoldPoint::spd(&geomsub::linalg::symmetrize(&(&g * a * g.transpose()))).unwrap()
        }
        ManifoldKind::Euclidean(3) => {
            let v = r * Vector3::from_column_slice(p.coords());
            ManifoldPoint::euclidean(v.as_slice().to_vec())
        }
        other => panic!("no action on {other}"),
    }
}
