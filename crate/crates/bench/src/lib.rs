//! Fixtures shared by the benchmarks.

use geomsub::sampling::{random_point, random_point_near};
use geomsub::{BasePointRule, Boundary, ManifoldKind, SchemeVariant, Sequence};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub const KINDS: [ManifoldKind; 4] = [
    ManifoldKind::Euclidean(3),
    ManifoldKind::Sphere(2),
    ManifoldKind::Rotation3,
    ManifoldKind::Spd(3),
];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Periodic random walk with steps of at most `step`.
pub fn walk(kind: ManifoldKind, n: usize, step: f64, rng: &mut ChaCha8Rng) -> Sequence {
    let mut pts = vec![random_point(kind, rng)];
    for _ in 1..n {
        let next = random_point_near(pts.last().unwrap(), step, rng);
        pts.push(next);
    }
    Sequence::new(pts, Boundary::Periodic).unwrap()
}

pub fn cloud(kind: ManifoldKind, n: usize, radius: f64, rng: &mut ChaCha8Rng) -> Vec<geomsub::ManifoldPoint> {
    let center = random_point(kind, rng);
    (0..n).map(|_| random_point_near(&center, radius, rng)).collect()
}

pub fn variant_for(kind: ManifoldKind) -> SchemeVariant {
    match kind {
        ManifoldKind::Euclidean(_) => SchemeVariant::Linear,
        _ => SchemeVariant::LogExp(BasePointRule::EdgeMidpoint),
    }
}
