//! Random points and tangent vectors for experiments and tests.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::{dot, matrix_from_row_major, row_major, symmetrize};
use crate::manifold::{Chart, ManifoldKind, ManifoldPoint, TangentVector};

fn gaussian<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// Tangent vector at `base` with uniformly random direction and Riemannian norm `norm`.
pub fn random_tangent<R: Rng + ?Sized>(base: &ManifoldPoint, norm: f64, rng: &mut R) -> TangentVector {
    let chart = Chart::new(base);
    loop {
        let mut v = gaussian(rng, base.kind().tangent_len());
        match base.kind() {
            ManifoldKind::Sphere(_) => {
                let p = base.coords();
                let s = dot(p, &v);
                v.iter_mut().zip(p).for_each(|(a, b)| *a -= s * b);
            }
            ManifoldKind::Spd(n) => {
                v = row_major(&symmetrize(&matrix_from_row_major(n, &v)));
            }
            _ => {}
        }
        let len = chart.norm(&v);
        if len > 1e-8 {
            v.iter_mut().for_each(|c| *c *= norm / len);
            return TangentVector::from_raw(base.clone(), v);
        }
    }
}

/// `center ⊕ v` with `‖v‖` uniform in `[0, radius]`.
pub fn random_point_near<R: Rng + ?Sized>(center: &ManifoldPoint, radius: f64, rng: &mut R) -> ManifoldPoint {
    let r = radius * rng.random::<f64>();
    let v = random_tangent(center, r, rng);
    Chart::new(center).exp(v.vec())
}

/// A point spread over a unit-scale region of the manifold.
pub fn random_point<R: Rng + ?Sized>(kind: ManifoldKind, rng: &mut R) -> ManifoldPoint {
    match kind {
        ManifoldKind::Euclidean(d) => ManifoldPoint::euclidean(gaussian(rng, d)),
        ManifoldKind::Sphere(_) | ManifoldKind::Rotation3 => loop {
            let v = gaussian(rng, kind.coord_len());
            if dot(&v, &v) > 1e-4 {
                break if kind == ManifoldKind::Rotation3 {
                    ManifoldPoint::rotation_normalized([v[0], v[1], v[2], v[3]])
                } else {
                    ManifoldPoint::sphere_normalized(v)
                }
                .expect("nonzero vector normalizes");
            }
        },
        ManifoldKind::Spd(n) => {
            let identity = ManifoldPoint::spd(&nalgebra::DMatrix::identity(n, n)).expect("identity is SPD");
            random_point_near(&identity, 1.0, rng)
        }
    }
}
