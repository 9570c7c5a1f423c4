//! Univariate sequences of manifold points.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::manifold::{ManifoldKind, ManifoldPoint};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Boundary {
    /// `p_{i+n} = p_i` for all `i`.
    Periodic,
    /// Only `p_first ..= p_last` exist.
    Open,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Sequence {
    kind: ManifoldKind,
    points: Vec<ManifoldPoint>,
    boundary: Boundary,
    first_index: i64,
}

impl Sequence {
    pub fn new(points: Vec<ManifoldPoint>, boundary: Boundary) -> Result<Self> {
        let Some(first) = points.first() else {
            return Err(Error::InvalidSequence("empty sequence".into()));
        };
        let kind = first.kind();
        if let Some((i, p)) = points.iter().enumerate().find(|(_, p)| p.kind() != kind) {
            return Err(Error::KindMismatch {
                expected: kind,
                found: p.kind(),
            }
            .at_index(i as i64));
        }
        if boundary == Boundary::Periodic && points.len() < 2 {
            return Err(Error::InvalidSequence(
                "periodic sequences need at least two points".into(),
            ));
        }
        Ok(Sequence {
            kind,
            points,
            boundary,
            first_index: 0,
        })
    }

    pub fn periodic(points: Vec<ManifoldPoint>) -> Result<Self> {
        Self::new(points, Boundary::Periodic)
    }

    pub fn open(points: Vec<ManifoldPoint>) -> Result<Self> {
        Self::new(points, Boundary::Open)
    }

    /// Euclidean sequence from coordinate rows.
    pub fn euclidean(rows: &[Vec<f64>], boundary: Boundary) -> Result<Self> {
        Self::new(
            rows.iter().map(|r| ManifoldPoint::euclidean(r.clone())).collect(),
            boundary,
        )
    }

    /// Index of `points()[0]`; relevant for open sequences produced by subdivision.
    pub fn with_first_index(mut self, first_index: i64) -> Self {
        self.first_index = first_index;
        self
    }

    pub(crate) fn from_parts(
        kind: ManifoldKind,
        points: Vec<ManifoldPoint>,
        boundary: Boundary,
        first_index: i64,
    ) -> Self {
        Sequence {
            kind,
            points,
            boundary,
            first_index,
        }
    }

    pub fn kind(&self) -> ManifoldKind {
        self.kind
    }

    pub fn points(&self) -> &[ManifoldPoint] {
        &self.points
    }

    pub fn into_points(self) -> Vec<ManifoldPoint> {
        self.points
    }

    pub fn boundary(&self) -> Boundary {
        self.boundary
    }

    pub fn first_index(&self) -> i64 {
        self.first_index
    }

    pub fn last_index(&self) -> i64 {
        self.first_index + self.points.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `p_i`; periodic sequences wrap, open ones return `None` out of range.
    pub fn get(&self, i: i64) -> Option<&ManifoldPoint> {
        let n = self.points.len() as i64;
        let k = i - self.first_index;
        match self.boundary {
            Boundary::Periodic => Some(&self.points[k.rem_euclid(n) as usize]),
            Boundary::Open => (0..n).contains(&k).then(|| &self.points[k as usize]),
        }
    }

    /// Number of neighbouring pairs `(p_i, p_{i+1})`.
    pub fn edge_count(&self) -> usize {
        match self.boundary {
            Boundary::Periodic => self.points.len(),
            Boundary::Open => self.points.len() - 1,
        }
    }

    /// Pairs `(p_i, p_{i+1})`, wrapping for periodic sequences.
    pub fn edges(&self) -> impl Iterator<Item = (&ManifoldPoint, &ManifoldPoint)> + '_ {
        let n = self.points.len();
        (0..self.edge_count()).map(move |k| (&self.points[k], &self.points[(k + 1) % n]))
    }

    /// Sequence with every point replaced by `f(p)`; kinds must stay uniform.
    pub fn try_map(&self, f: impl Fn(&ManifoldPoint) -> Result<ManifoldPoint>) -> Result<Sequence> {
        let points = self
            .points
            .iter()
            .enumerate()
            .map(|(k, p)| f(p).map_err(|e| e.at_index(self.first_index + k as i64)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Sequence::new(points, self.boundary)?.with_first_index(self.first_index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(b: Boundary) -> Sequence {
        Sequence::euclidean(&[vec![0.0], vec![1.0], vec![2.0]], b).unwrap()
    }

    #[test]
    fn periodic_indexing_wraps() {
        let s = seq(Boundary::Periodic);
        assert_eq!(s.get(3).unwrap().coords(), &[0.0]);
        assert_eq!(s.get(-1).unwrap().coords(), &[2.0]);
        assert_eq!(s.edges().count(), 3);
    }

    #[test]
    fn open_indexing_is_bounded() {
        let s = seq(Boundary::Open).with_first_index(5);
        assert!(s.get(4).is_none());
        assert_eq!(s.get(5).unwrap().coords(), &[0.0]);
        assert_eq!(s.last_index(), 7);
        assert_eq!(s.edges().count(), 2);
    }

    #[test]
    fn validation() {
        assert!(Sequence::periodic(vec![ManifoldPoint::euclidean(vec![0.0])]).is_err());
        assert!(Sequence::open(vec![]).is_err());
        let mixed = vec![
            ManifoldPoint::euclidean(vec![0.0, 0.0, 1.0]),
            ManifoldPoint::sphere(vec![0.0, 0.0, 1.0]).unwrap(),
        ];
        assert!(Sequence::open(mixed).is_err());
    }
}
