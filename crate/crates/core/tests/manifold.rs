mod common;

use common::{act, random_rotation, KINDS};
use geomsub::linalg::{quat_to_matrix, symmetrize};
use geomsub::sampling::{random_point, random_point_near, random_tangent};
use geomsub::{distance, parallel_transport, project_to_rotation, Chart, ManifoldKind, ManifoldPoint};
use nalgebra::{DMatrix, Matrix3};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn exp_inverts_log(seed in any::<u64>(), k in 0usize..4) {
        let mut r = rng(seed);
        let p = random_point(KINDS[k], &mut r);
        let q = random_point_near(&p, 1.0, &mut r);
        let chart = Chart::new(&p);
        let back = chart.exp(&chart.log(&q).unwrap());
        prop_assert!(distance(&back, &q).unwrap() < 1e-10);
    }

    #[test]
    fn log_norm_is_distance(seed in any::<u64>(), k in 0usize..4) {
        let mut r = rng(seed);
        let p = random_point(KINDS[k], &mut r);
        let q = random_point_near(&p, 1.2, &mut r);
        let chart = Chart::new(&p);
        let d = distance(&p, &q).unwrap();
        prop_assert!((chart.norm(&chart.log(&q).unwrap()) - d).abs() < 1e-10);
        prop_assert!((distance(&q, &p).unwrap() - d).abs() < 1e-10);
    }

    #[test]
    fn transport_preserves_norm(seed in any::<u64>(), k in 0usize..4) {
        let mut r = rng(seed);
        let p = random_point(KINDS[k], &mut r);
        let q = random_point_near(&p, 1.0, &mut r);
        let v = random_tangent(&p, 0.7, &mut r);
        let w = parallel_transport(&v, &q).unwrap();
        prop_assert_eq!(w.base(), &q);
        prop_assert!((w.norm() - 0.7).abs() < 1e-10);
    }

    #[test]
    fn spd_distance_is_congruence_invariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_point(ManifoldKind::Spd(3), &mut r);
        let b = random_point(ManifoldKind::Spd(3), &mut r);
        let g = DMatrix::from_fn(3, 3, |_, _| r.random_range(-1.0..1.0)) + DMatrix::identity(3, 3) * 2.0;
        let c = |p: &ManifoldPoint| ManifoldPoint::spd(&symmetrize(&(&g * p.spd_matrix().unwrap() * g.transpose()))).unwrap();
        let d0 = distance(&a, &b).unwrap();
        prop_assert!((distance(&c(&a), &c(&b)).unwrap() - d0).abs() <= 1e-8 * (1.0 + d0));
    }

    #[test]
    fn isometries_preserve_distance(seed in any::<u64>(), k in 1usize..4) {
        let mut r = rng(seed);
        let (g, _) = random_rotation(&mut r);
        let a = random_point(KINDS[k], &mut r);
        let b = random_point_near(&a, 1.0, &mut r);
        let d0 = distance(&a, &b).unwrap();
        prop_assert!((distance(&act(&g, &a), &act(&g, &b)).unwrap() - d0).abs() < 1e-10);
    }

    #[test]
    fn projection_is_rotation_equivariant(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (_, g) = random_rotation(&mut r);
        let (_, h) = random_rotation(&mut r);
        let m = Matrix3::from_fn(|_, _| r.random_range(-1.0..1.0)) + Matrix3::identity() * 1.5;
        prop_assume!(m.determinant() > 1e-3);
        let p = project_to_rotation(&m).unwrap().rotation_matrix().unwrap();
        let pg = project_to_rotation(&(g * m * h)).unwrap().rotation_matrix().unwrap();
        prop_assert!((pg - g * p * h).norm() < 1e-8);
    }
}

#[test]
fn rotation_matrix_round_trip() {
    let mut r = rng(5);
    for _ in 0..50 {
        let p = random_point(ManifoldKind::Rotation3, &mut r);
        let m = quat_to_matrix(&p.quaternion().unwrap());
        let back = ManifoldPoint::rotation_from_matrix(&m).unwrap();
        assert!(distance(&p, &back).unwrap() < 1e-12);
    }
}
