use rayon::prelude::*;

use super::{apply_detail, check_divisible, Pyramid, PyramidScheme};
use crate::error::{Error, Result};
use crate::manifold::{midpoint, Chart, ManifoldPoint, TangentVector};
use crate::sequence::Sequence;

/// `M` rounds of `m_i = midpoint(p_{2i}, p_{2i+1})`, `q_i = p_{2i} ⊖ m_i`.
pub fn haar_decompose(seq: &Sequence, levels: usize) -> Result<Pyramid> {
    check_divisible(seq, 2, levels)?;
    let mut cur = seq.clone();
    let mut details = Vec::with_capacity(levels);
    for level in (1..=levels).rev() {
        let pts = cur.points();
        let pairs: Vec<Result<(ManifoldPoint, TangentVector)>> = (0..pts.len() / 2)
            .into_par_iter()
            .map(|i| {
                let (a, b) = (&pts[2 * i], &pts[2 * i + 1]);
                let m = midpoint(a, b)?;
                let q = Chart::new(&m).log(a)?;
                Ok((m.clone(), TangentVector::from_raw(m, q)))
            })
            .collect();
        let mut coarse = Vec::with_capacity(pairs.len());
        let mut level_details = Vec::with_capacity(pairs.len());
        for (i, r) in pairs.into_iter().enumerate() {
            let (m, q) = r.map_err(|e| e.at_index(2 * i as i64).at_level(level))?;
            coarse.push(m);
            level_details.push(q);
        }
        details.push(level_details);
        cur = Sequence::new(coarse, cur.boundary())?;
    }
    details.reverse();
    Pyramid::new(PyramidScheme::Haar, cur, details)
}

/// `p_{2i} = m_i ⊕ q_i`, `p_{2i+1} = m_i ⊕ (−q_i)` with `q_i` transported to `m_i`.
pub fn haar_reconstruct(pyr: &Pyramid) -> Result<Sequence> {
    if pyr.scheme() != &PyramidScheme::Haar {
        return Err(Error::ShapeMismatch("not a Haar pyramid".into()));
    }
    let mut cur = pyr.coarse().clone();
    for (j, level) in pyr.details().iter().enumerate() {
        if level.len() != cur.len() {
            return Err(Error::ShapeMismatch(format!(
                "level {} has {} details",
                j + 1,
                level.len()
            )));
        }
        let pts = cur.points();
        let pairs: Vec<Result<[ManifoldPoint; 2]>> = (0..pts.len())
            .into_par_iter()
            .map(|i| {
                Ok([
                    apply_detail(&pts[i], &level[i], 1.0)?,
                    apply_detail(&pts[i], &level[i], -1.0)?,
                ])
            })
            .collect();
        let mut next = Vec::with_capacity(2 * pts.len());
        for (i, r) in pairs.into_iter().enumerate() {
            next.extend(r.map_err(|e| e.at_index(i as i64).at_level(j + 1))?);
        }
        cur = Sequence::new(next, cur.boundary())?;
    }
    Ok(cur)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::distance;
    use crate::sequence::Boundary;

    #[test]
    fn two_point_example() {
        let seq = Sequence::euclidean(&[vec![0.0], vec![1.0]], Boundary::Open).unwrap();
        let p = haar_decompose(&seq, 1).unwrap();
        assert_eq!(p.coarse().points()[0].coords(), &[0.5]);
        let q = &p.details()[0][0];
        assert_eq!(q.vec(), &[-0.5]);
        assert_eq!(q.base().coords(), &[0.5]);
        assert_eq!(haar_reconstruct(&p).unwrap(), seq);
    }

    #[test]
    fn constant_data_have_zero_details() {
        let seq = Sequence::open(vec![ManifoldPoint::sphere(vec![0.0, 1.0, 0.0]).unwrap(); 8]).unwrap();
        let p = haar_decompose(&seq, 3).unwrap();
        assert!(p.details().iter().flatten().all(TangentVector::is_zero));
    }

    #[test]
    fn sphere_pair() {
        let a = ManifoldPoint::sphere_normalized(vec![1.0, 0.2, 0.0]).unwrap();
        let b = ManifoldPoint::sphere_normalized(vec![0.1, 1.0, 0.3]).unwrap();
        let seq = Sequence::open(vec![a.clone(), b.clone()]).unwrap();
        let p = haar_decompose(&seq, 1).unwrap();
        let m = midpoint(&a, &b).unwrap();
        assert!(distance(&p.coarse().points()[0], &m).unwrap() < 1e-15);
        let d = distance(&a, &b).unwrap();
        assert!((p.details()[0][0].norm() - d / 2.0).abs() < 1e-14);
    }

    #[test]
    fn zeroed_details_double_midpoints() {
        let rows: Vec<_> = (0..8).map(|i| vec![(i * i) as f64]).collect();
        let seq = Sequence::euclidean(&rows, Boundary::Periodic).unwrap();
        let p = haar_decompose(&seq, 1).unwrap();
        let (scheme, coarse, details) = p.into_parts();
        let zeros = details
            .iter()
            .map(|l| l.iter().map(|q| TangentVector::zero(q.base().clone())).collect())
            .collect();
        let out = haar_reconstruct(&Pyramid::new(scheme, coarse.clone(), zeros).unwrap()).unwrap();
        for i in 0..4 {
            assert_eq!(out.points()[2 * i], coarse.points()[i]);
            assert_eq!(out.points()[2 * i + 1], coarse.points()[i]);
        }
    }

    #[test]
    fn lengths_must_divide() {
        let seq = Sequence::euclidean(&[vec![0.0], vec![1.0], vec![2.0]], Boundary::Open).unwrap();
        assert!(matches!(
            haar_decompose(&seq, 1),
            Err(Error::LengthNotDivisible { len: 3, divisor: 2 })
        ));
    }
}
