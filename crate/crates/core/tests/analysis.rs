mod common;

use common::walk;
use geomsub::analysis::contraction_factors;
use geomsub::{
    density, derived_mask, empirical_contraction, operator_norm, subdivide_once, Boundary, ManifoldKind, Mask, Rule,
    SchemeVariant, Sequence,
};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn masks() -> Vec<Mask> {
    vec![
        Mask::chaikin(),
        Mask::midpoint(),
        Mask::four_point(1.0 / 16.0).unwrap(),
        Mask::four_point(0.1).unwrap(),
        Mask::lane_riesenfeld(2).unwrap(),
        Mask::lane_riesenfeld(4).unwrap(),
    ]
}

fn differences(seq: &Sequence) -> Sequence {
    let rows: Vec<Vec<f64>> = seq
        .edges()
        .map(|(a, b)| b.coords().iter().zip(a.coords()).map(|(x, y)| x - y).collect())
        .collect();
    Sequence::euclidean(&rows, Boundary::Periodic).unwrap()
}

#[test]
fn derived_rule_intertwines_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for mask in masks() {
        let d = derived_mask(&mask).unwrap();
        let n = mask.dilation() as f64;
        for _ in 0..100 {
            let seq = walk(ManifoldKind::Euclidean(2), 8, 1.0, Boundary::Periodic, &mut rng);
            let lhs = subdivide_once(&differences(&seq), &d, SchemeVariant::Linear).unwrap();
            let rhs = differences(&subdivide_once(&seq, &mask, SchemeVariant::Linear).unwrap());
            for (a, b) in lhs.points().iter().zip(rhs.points()) {
                for (x, y) in a.coords().iter().zip(b.coords()) {
                    assert!((x - n * y).abs() <= 1e-10);
                }
            }
        }
    }
}

#[test]
fn derived_norm_bounds_measured_contraction() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for mask in masks() {
        let bound = operator_norm(&derived_mask(&mask).unwrap()) / mask.dilation() as f64;
        for _ in 0..50 {
            let seq = walk(ManifoldKind::Euclidean(2), 9, 1.0, Boundary::Periodic, &mut rng);
            let sp = subdivide_once(&seq, &mask, SchemeVariant::Linear).unwrap();
            assert!(density(&sp).unwrap() / density(&seq).unwrap() <= bound + 1e-10);
        }
    }
}

#[test]
fn holder_bounds_never_decrease() {
    for mask in masks() {
        let f = contraction_factors(&mask, 5).unwrap();
        for w in f.windows(2) {
            if let (Some(a), Some(b)) = (w[0].holder_bound, w[1].holder_bound) {
                assert!(b >= a - 1e-12);
            }
        }
    }
}

#[test]
fn nonnegative_masks_contract_on_spd_data() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for mask in [Mask::chaikin(), Mask::lane_riesenfeld(2).unwrap()] {
        assert!(mask.is_nonnegative());
        let rule = Rule::masked(mask, SchemeVariant::Frechet).unwrap();
        let seq = walk(ManifoldKind::Spd(2), 6, 1.0, Boundary::Periodic, &mut rng);
        let ratios = empirical_contraction(&seq, &rule, 5).unwrap();
        assert!(ratios.last().unwrap() < &1.0);
    }
}

#[test]
fn chaikin_contracts_by_about_a_half_on_manifolds() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let rule = Rule::masked(Mask::chaikin(), SchemeVariant::Frechet).unwrap();
    for kind in [ManifoldKind::Sphere(2), ManifoldKind::Rotation3, ManifoldKind::Spd(2)] {
        let seq = walk(kind, 8, 0.05, Boundary::Periodic, &mut rng);
        for r in empirical_contraction(&seq, &rule, 4).unwrap() {
            assert!(r <= 0.5 + 1e-2, "{kind}: {r}");
        }
    }
}
