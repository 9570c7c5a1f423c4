use rayon::prelude::*;

use super::{apply_detail, check_divisible, Pyramid, PyramidScheme};
use crate::averages::WeightedData;
use crate::error::{Error, Result};
use crate::manifold::{Chart, ManifoldPoint, TangentVector};
use crate::mask::Mask;
use crate::sequence::{Boundary, Sequence};
use crate::subdivision::{subdivide_once, variant_average, BasePointRule, SchemeVariant};

/// Points feeding a generic non-coarse output of `mask`.
fn stencil_width(mask: &Mask) -> usize {
    (1..mask.dilation() as i64)
        .map(|r| mask.stencil(r).count())
        .max()
        .unwrap_or(1)
}

/// Lagrange weights at `x` for the nodes `j0, j0+1, …`.
fn lagrange_weights(x: f64, j0: i64, width: usize) -> Vec<f64> {
    (0..width as i64)
        .map(|m| {
            (0..width as i64)
                .filter(|&k| k != m)
                .map(|k| (x - (j0 + k) as f64) / (m - k) as f64)
                .product()
        })
        .collect()
}

/// One-sided prediction of output `i` from the `width` coarse points nearest `i/N`.
fn boundary_prediction(
    coarse: &Sequence,
    n: i64,
    width: usize,
    variant: SchemeVariant,
    i: i64,
) -> Result<ManifoldPoint> {
    let (f, l) = (coarse.first_index(), coarse.last_index());
    let k = i.div_euclid(n);
    let j0 = (k + 1 - width as i64 / 2).clamp(f, l + 1 - width as i64);
    let weights = lagrange_weights(i as f64 / n as f64, j0, width);
    let points = (j0..j0 + width as i64)
        .map(|j| coarse.get(j).expect("node in range").clone())
        .collect();
    let data = WeightedData::new(weights, points)?;
    let floor = coarse.get(k.min(l)).expect("floor in range");
    let next = match variant {
        SchemeVariant::LogExp(BasePointRule::EdgeMidpoint) => coarse.get((k + 1).min(l)),
        _ => None,
    };
    variant_average(variant, &data, floor, next)
}

/// `S p` on the full fine range `N f ..= N l`.
///
/// Periodic data use the rule as is. On open data, outputs the mask cannot
/// reach are predicted by Lagrange interpolation through as many of the
/// nearest coarse points as the mask stencil uses, averaged with `variant`.
pub(crate) fn predict(coarse: &Sequence, mask: &Mask, variant: SchemeVariant) -> Result<Sequence> {
    if coarse.boundary() == Boundary::Periodic {
        return subdivide_once(coarse, mask, variant);
    }
    let n = mask.dilation() as i64;
    let inner = match subdivide_once(coarse, mask, variant) {
        Ok(s) => Some(s),
        Err(Error::InvalidSequence(_)) => None,
        Err(e) => return Err(e),
    };
    let width = stencil_width(mask).min(coarse.len());
    let (lo, hi) = (n * coarse.first_index(), n * coarse.last_index());
    let results: Vec<Result<ManifoldPoint>> = (lo..=hi)
        .into_par_iter()
        .map(|i| {
            if let Some(p) = inner.as_ref().and_then(|s| s.get(i)) {
                Ok(p.clone())
            } else if i.rem_euclid(n) == 0 {
                Ok(coarse.get(i / n).expect("coarse index in range").clone())
            } else {
                boundary_prediction(coarse, n, width, variant, i).map_err(|e| e.at_index(i))
            }
        })
        .collect();
    let points = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Sequence::from_parts(coarse.kind(), points, Boundary::Open, lo))
}

/// Decimation `p^{(j−1)}_i = p^{(j)}_{Ni}` with details `p^{(j)} ⊖ S p^{(j−1)}`.
///
/// Details at indices `Ni` are stored as exact zero vectors. Open data need
/// `len − 1` and the first index divisible by `N^M`, so that both ends survive
/// every decimation.
pub fn wavelet_decompose(seq: &Sequence, mask: &Mask, variant: SchemeVariant, levels: usize) -> Result<Pyramid> {
    if !mask.is_interpolatory() {
        return Err(Error::MaskNotInterpolatory);
    }
    let n = mask.dilation();
    match seq.boundary() {
        Boundary::Periodic => check_divisible(seq, n, levels)?,
        Boundary::Open => check_open_divisible(seq, n, levels)?,
    }
    let mut cur = seq.clone();
    let mut details = Vec::with_capacity(levels);
    for level in (1..=levels).rev() {
        let coarse = Sequence::new(cur.points().iter().step_by(n).cloned().collect(), seq.boundary())?
            .with_first_index(cur.first_index() / n as i64);
        let pred = predict(&coarse, mask, variant).map_err(|e| e.at_level(level))?;
        let fine = cur.points();
        let level_details: Vec<Result<TangentVector>> = pred
            .points()
            .par_iter()
            .enumerate()
            .map(|(i, base)| {
                if i % n == 0 {
                    return Ok(TangentVector::zero(base.clone()));
                }
                let v = Chart::new(base).log(&fine[i]).map_err(|e| e.at_index(i as i64))?;
                Ok(TangentVector::from_raw(base.clone(), v))
            })
            .collect();
        details.push(
            level_details
                .into_iter()
                .collect::<Result<Vec<_>>>()
                .map_err(|e| e.at_level(level))?,
        );
        cur = coarse;
    }
    details.reverse();
    Pyramid::new(
        PyramidScheme::Interpolatory {
            mask: mask.clone(),
            variant,
        },
        cur,
        details,
    )
}

fn check_open_divisible(seq: &Sequence, n: usize, levels: usize) -> Result<()> {
    let divisor = n.checked_pow(levels as u32).ok_or(Error::LengthNotDivisible {
        len: seq.len(),
        divisor: usize::MAX,
    })?;
    if !(seq.len() - 1).is_multiple_of(divisor) {
        return Err(Error::LengthNotDivisible {
            len: seq.len() - 1,
            divisor,
        });
    }
    if seq.first_index().rem_euclid(divisor as i64) != 0 {
        return Err(Error::InvalidSequence(format!(
            "first index {} is not divisible by {divisor}",
            seq.first_index()
        )));
    }
    if seq.len() == 1 {
        return Err(Error::InvalidSequence("a single open point has no levels".into()));
    }
    Ok(())
}

/// `p^{(j)} = S p^{(j−1)} ⊕ q^{(j)}`; the points `p^{(j)}_{Ni}` are copied from the coarser level.
pub fn wavelet_reconstruct(pyr: &Pyramid) -> Result<Sequence> {
    let PyramidScheme::Interpolatory { mask, variant } = pyr.scheme() else {
        return Err(Error::ShapeMismatch("not an interpolatory pyramid".into()));
    };
    let n = mask.dilation();
    let mut cur = pyr.coarse().clone();
    for (j, level) in pyr.details().iter().enumerate() {
        let pred = predict(&cur, mask, *variant).map_err(|e| e.at_level(j + 1))?;
        if level.len() != pred.len() {
            return Err(Error::ShapeMismatch(format!(
                "level {} has {} details",
                j + 1,
                level.len()
            )));
        }
        let pts: Vec<Result<ManifoldPoint>> = pred
            .points()
            .par_iter()
            .enumerate()
            .map(|(i, base)| {
                if i % n == 0 {
                    Ok(cur.points()[i / n].clone())
                } else {
                    apply_detail(base, &level[i], 1.0).map_err(|e| e.at_index(i as i64))
                }
            })
            .collect();
        let pts = pts
            .into_iter()
            .collect::<Result<Vec<_>>>()
            .map_err(|e| e.at_level(j + 1))?;
        cur = Sequence::new(pts, cur.boundary())?.with_first_index(pred.first_index());
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::distance;

    fn fp() -> Mask {
        Mask::four_point(1.0 / 16.0).unwrap()
    }

    #[test]
    fn subdivided_data_have_zero_details() {
        let coarse = Sequence::euclidean(&[vec![0.0], vec![2.0], vec![1.0], vec![-1.0]], Boundary::Periodic).unwrap();
        let fine = subdivide_once(&coarse, &fp(), SchemeVariant::Linear).unwrap();
        let p = wavelet_decompose(&fine, &fp(), SchemeVariant::Linear, 1).unwrap();
        assert_eq!(p.coarse(), &coarse);
        assert!(p.details()[0].iter().all(TangentVector::is_zero));
    }

    #[test]
    fn one_sphere_level_matches_hand_prediction() {
        let pts: Vec<_> = (0..8)
            .map(|k| {
                let t = k as f64 * 0.7;
                ManifoldPoint::sphere_normalized(vec![t.cos(), t.sin(), 0.5 + 0.2 * t.sin()]).unwrap()
            })
            .collect();
        let seq = Sequence::periodic(pts.clone()).unwrap();
        let variant = SchemeVariant::LogExp(BasePointRule::EdgeMidpoint);
        let p = wavelet_decompose(&seq, &fp(), variant, 1).unwrap();
        let coarse = Sequence::periodic(pts.iter().step_by(2).cloned().collect()).unwrap();
        let pred = subdivide_once(&coarse, &fp(), variant).unwrap();
        for (i, q) in p.details()[0].iter().enumerate() {
            assert_eq!(q.base(), &pred.points()[i]);
            if i % 2 == 0 {
                assert!(q.is_zero());
            } else {
                assert_eq!(q.vec(), Chart::new(&pred.points()[i]).log(&pts[i]).unwrap());
            }
        }
        let back = wavelet_reconstruct(&p).unwrap();
        for (a, b) in back.points().iter().zip(&pts) {
            assert!(distance(a, b).unwrap() < 1e-12);
        }
    }

    #[test]
    fn zero_details_give_pure_subdivision() {
        let coarse = Sequence::euclidean(&[vec![0.0], vec![2.0], vec![1.0], vec![-1.0]], Boundary::Periodic).unwrap();
        let twice = subdivide_once(
            &subdivide_once(&coarse, &fp(), SchemeVariant::Linear).unwrap(),
            &fp(),
            SchemeVariant::Linear,
        )
        .unwrap();
        let p = wavelet_decompose(&twice, &fp(), SchemeVariant::Linear, 2).unwrap();
        assert!(p.details().iter().flatten().all(|q| q.norm() < 1e-15));
        assert_eq!(wavelet_reconstruct(&p).unwrap().points().len(), 16);
    }

    #[test]
    fn rejects_bad_masks_and_shapes() {
        let seq = Sequence::euclidean(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]], Boundary::Periodic).unwrap();
        assert!(matches!(
            wavelet_decompose(&seq, &Mask::chaikin(), SchemeVariant::Linear, 1),
            Err(Error::MaskNotInterpolatory)
        ));
        let open = Sequence::euclidean(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]], Boundary::Open).unwrap();
        assert!(wavelet_decompose(&open, &fp(), SchemeVariant::Linear, 1).is_err());
        assert!(matches!(
            wavelet_decompose(&seq, &fp(), SchemeVariant::Linear, 3),
            Err(Error::LengthNotDivisible { .. })
        ));
    }

    #[test]
    fn open_cubics_have_zero_details() {
        let rows: Vec<Vec<f64>> = (0..33)
            .map(|i| {
                let t = i as f64 / 8.0 - 1.3;
                vec![t, 2.0 * t * t * t - t * t + 0.5]
            })
            .collect();
        let seq = Sequence::euclidean(&rows, Boundary::Open).unwrap();
        let p = wavelet_decompose(&seq, &fp(), SchemeVariant::Linear, 3).unwrap();
        assert_eq!(p.coarse().len(), 5);
        assert!(p.details().iter().flatten().all(|q| q.norm() <= 1e-12));
        let back = wavelet_reconstruct(&p).unwrap();
        assert_eq!(back.first_index(), 0);
        for (a, b) in back.points().iter().zip(seq.points()) {
            assert!(distance(a, b).unwrap() <= 1e-12);
        }
    }

    #[test]
    fn open_sphere_round_trip() {
        let pts: Vec<_> = (0..17)
            .map(|k| {
                let t = k as f64 * 0.2;
                ManifoldPoint::sphere_normalized(vec![t.cos(), t.sin(), 0.3 * t]).unwrap()
            })
            .collect();
        let seq = Sequence::open(pts).unwrap().with_first_index(-16);
        for variant in [
            SchemeVariant::Frechet,
            SchemeVariant::LogExp(BasePointRule::EdgeMidpoint),
            SchemeVariant::LogExp(BasePointRule::FloorPoint),
        ] {
            let p = wavelet_decompose(&seq, &fp(), variant, 4).unwrap();
            assert_eq!(p.coarse().len(), 2);
            let back = wavelet_reconstruct(&p).unwrap();
            assert_eq!(back.first_index(), -16);
            for (a, b) in back.points().iter().zip(seq.points()) {
                assert!(distance(a, b).unwrap() <= 1e-12);
            }
        }
    }

    #[test]
    fn lagrange_weights_reproduce_cubics() {
        let w = lagrange_weights(0.5, 0, 4);
        let expect = [5.0 / 16.0, 15.0 / 16.0, -5.0 / 16.0, 1.0 / 16.0];
        for (a, b) in w.iter().zip(expect) {
            assert!((a - b).abs() < 1e-15);
        }
    }
}
