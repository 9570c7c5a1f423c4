//! Stationary subdivision of manifold-valued sequences.
//!
//! A linear mask is turned into a nonlinear rule by replacing the affine
//! combination `Σ_j a_{i−Nj} p_j` with one of several geometric averages
//! ([`SchemeVariant`]). Geodesic corner-cutting pipelines are built from
//! the elementary operations averaging `A_t` and corner cutting `S_{t,s}`.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::averages::{affine_average, basepoint_average, frechet_mean, MeanConfig, WeightedData};
use crate::error::{Error, Result};
use crate::manifold::{midpoint, project_to_rotation, Chart, ManifoldKind, ManifoldPoint, TangentVector};
use crate::mask::{Mask, Symmetry};
use crate::sequence::{Boundary, Sequence};

/// Choice of base point `m_i` for log/exp averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BasePointRule {
    /// `m_i = p_{⌊i/N⌋}`.
    FloorPoint,
    /// Geodesic midpoint of `p_{⌊i/2⌋}` and `p_{⌊i/2⌋+1}`; binary rules only.
    EdgeMidpoint,
}

impl BasePointRule {
    /// Edge midpoints for dual or interpolatory binary masks, floor points otherwise.
    pub fn canonical_for(mask: &Mask) -> Self {
        let edge_like = matches!(mask.symmetry(), Symmetry::Dual { .. }) || mask.is_interpolatory();
        if mask.dilation() == 2 && edge_like {
            BasePointRule::EdgeMidpoint
        } else {
            BasePointRule::FloorPoint
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SchemeVariant {
    /// Affine combination; Euclidean data only.
    Linear,
    /// Weighted Fréchet mean of each stencil.
    Frechet,
    /// Log/exp average with respect to a base point.
    LogExp(BasePointRule),
    /// Linear rule on rotation matrices followed by projection onto SO(3).
    Projection,
}

/// Elementary geodesic operation of a corner-cutting pipeline.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Stage {
    /// `(A_t p)_i = p_i ⊕ t (p_{i+1} ⊖ p_i)`.
    Avg(f64),
    /// `(S_{t,s} p)_{2i} = p_i ⊕ t (p_{i+1} ⊖ p_i)`, `(S_{t,s} p)_{2i+1} = p_i ⊕ s (p_{i+1} ⊖ p_i)`.
    CornerCut(f64, f64),
    /// `S_{0,½}`; keeps the old points exactly.
    MidpointInsert,
}

impl Stage {
    fn doubles(&self) -> bool {
        !matches!(self, Stage::Avg(_))
    }
}

/// A complete subdivision rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Rule {
    Masked { mask: Mask, variant: SchemeVariant },
    Pipeline(Vec<Stage>),
}

impl Rule {
    pub fn masked(mask: Mask, variant: SchemeVariant) -> Result<Self> {
        check_variant(&mask, variant)?;
        Ok(Rule::Masked { mask, variant })
    }

    /// Exactly one dilating stage, which must come first.
    pub fn pipeline(stages: Vec<Stage>) -> Result<Self> {
        check_stages(&stages)?;
        Ok(Rule::Pipeline(stages))
    }

    /// `(A_½)^k ∘ S_{0,½}`: midpoint insertion followed by `rounds` averaging rounds.
    pub fn lane_riesenfeld_pipeline(rounds: usize) -> Self {
        let mut stages = vec![Stage::MidpointInsert];
        stages.extend(std::iter::repeat_n(Stage::Avg(0.5), rounds));
        Rule::Pipeline(stages)
    }

    pub fn dilation(&self) -> usize {
        match self {
            Rule::Masked { mask, .. } => mask.dilation(),
            Rule::Pipeline(_) => 2,
        }
    }

    pub fn apply(&self, seq: &Sequence) -> Result<Sequence> {
        match self {
            Rule::Masked { mask, variant } => subdivide_once(seq, mask, *variant),
            Rule::Pipeline(stages) => geodesic_pipeline_once(seq, stages),
        }
    }
}

fn check_variant(mask: &Mask, variant: SchemeVariant) -> Result<()> {
    if variant == SchemeVariant::LogExp(BasePointRule::EdgeMidpoint) && mask.dilation() != 2 {
        return Err(Error::UnsupportedVariant(
            "edge-midpoint base points need dilation 2".into(),
        ));
    }
    Ok(())
}

fn check_stages(stages: &[Stage]) -> Result<()> {
    match stages.first() {
        Some(s) if s.doubles() => {}
        _ => {
            return Err(Error::UnsupportedVariant(
                "a pipeline must start with MidpointInsert or CornerCut".into(),
            ))
        }
    }
    if stages[1..].iter().any(Stage::doubles) {
        return Err(Error::UnsupportedVariant(
            "a pipeline may contain only one dilating stage".into(),
        ));
    }
    for s in stages {
        let ok = match *s {
            Stage::Avg(t) => t.is_finite(),
            Stage::CornerCut(t, s) => t.is_finite() && s.is_finite() && t != s,
            Stage::MidpointInsert => true,
        };
        if !ok {
            return Err(Error::UnsupportedVariant(format!("invalid stage {s:?}")));
        }
    }
    Ok(())
}

/// Indices of the data points feeding output `i`: the stencil plus any base points.
fn required_indices(mask: &Mask, variant: SchemeVariant, i: i64) -> impl Iterator<Item = i64> + '_ {
    let n = mask.dilation() as i64;
    let base: Vec<i64> = match variant {
        SchemeVariant::LogExp(BasePointRule::FloorPoint) => vec![i.div_euclid(n)],
        SchemeVariant::LogExp(BasePointRule::EdgeMidpoint) => {
            vec![i.div_euclid(n), i.div_euclid(n) + 1]
        }
        _ => Vec::new(),
    };
    mask.stencil(i).map(|(j, _)| j).chain(base)
}

/// Output index range of one subdivision step.
///
/// Periodic data yield `N·len` outputs. Open data keep the longest run of
/// consecutive outputs whose inputs all lie within the stored range.
fn output_range(seq: &Sequence, mask: &Mask, variant: SchemeVariant) -> Result<(i64, i64)> {
    let n = mask.dilation() as i64;
    let (f, l) = (seq.first_index(), seq.last_index());
    if seq.boundary() == Boundary::Periodic {
        return Ok((n * f, n * (l + 1) - 1));
    }
    let lo = n * f + mask.offset() - n;
    let hi = n * l + mask.last_index() + n;
    let mut best: Option<(i64, i64)> = None;
    let mut start: Option<i64> = None;
    for i in lo..=hi + 1 {
        let ok = i <= hi && required_indices(mask, variant, i).all(|j| j >= f && j <= l);
        match (ok, start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                if best.is_none_or(|(a, b)| i - 1 - s > b - a) {
                    best = Some((s, i - 1));
                }
                start = None;
            }
            _ => {}
        }
    }
    best.ok_or_else(|| {
        Error::InvalidSequence(format!(
            "open sequence of length {} is too short for this mask",
            seq.len()
        ))
    })
}

fn evaluate(seq: &Sequence, mask: &Mask, variant: SchemeVariant, i: i64) -> Result<ManifoldPoint> {
    let terms: Vec<(i64, f64)> = mask.stencil(i).collect();
    let point = |j: i64| seq.get(j).expect("stencil index within range");
    if let [(j, a)] = terms[..] {
        if a == 1.0 {
            return Ok(point(j).clone());
        }
    }
    let data = WeightedData::new(
        terms.iter().map(|t| t.1).collect(),
        terms.iter().map(|t| point(t.0).clone()).collect(),
    )?;
    let k = i.div_euclid(mask.dilation() as i64);
    let next = match variant {
        SchemeVariant::LogExp(BasePointRule::EdgeMidpoint) => Some(point(k + 1)),
        _ => None,
    };
    variant_average(variant, &data, point(k), next)
}

/// The average of `data` under `variant`. `floor` and `next` are the data
/// points at and after the output position; `next` is needed only for
/// edge-midpoint base points.
pub(crate) fn variant_average(
    variant: SchemeVariant,
    data: &WeightedData,
    floor: &ManifoldPoint,
    next: Option<&ManifoldPoint>,
) -> Result<ManifoldPoint> {
    match variant {
        SchemeVariant::Linear => match data.kind() {
            ManifoldKind::Euclidean(_) => affine_average(data),
            other => Err(Error::UnsupportedVariant(format!("linear rule on {other} data"))),
        },
        SchemeVariant::Frechet => frechet_mean(data, &MeanConfig::default(), None),
        SchemeVariant::LogExp(BasePointRule::FloorPoint) => basepoint_average(floor, data),
        SchemeVariant::LogExp(BasePointRule::EdgeMidpoint) => {
            let next = next.expect("edge-midpoint rule needs the following point");
            basepoint_average(&midpoint(floor, next)?, data)
        }
        SchemeVariant::Projection => {
            let mut m = nalgebra::Matrix3::zeros();
            for (w, p) in data.weights().iter().zip(data.points()) {
                m += *w
                    * p.rotation_matrix()
                        .ok_or_else(|| Error::UnsupportedVariant(format!("projection rule on {} data", p.kind())))?;
            }
            project_to_rotation(&m)
        }
    }
}

/// One step `Sp_i = avg(a_{i−Nj}; p_j)` of the chosen variant.
pub fn subdivide_once(seq: &Sequence, mask: &Mask, variant: SchemeVariant) -> Result<Sequence> {
    check_variant(mask, variant)?;
    if variant == SchemeVariant::Projection && seq.kind() != ManifoldKind::Rotation3 {
        return Err(Error::UnsupportedVariant(format!(
            "projection rule on {} data",
            seq.kind()
        )));
    }
    let (lo, hi) = output_range(seq, mask, variant)?;
    let results: Vec<Result<ManifoldPoint>> = (lo..=hi)
        .into_par_iter()
        .map(|i| evaluate(seq, mask, variant, i).map_err(|e| e.at_index(i)))
        .collect();
    let points = results.into_iter().collect::<Result<Vec<_>>>()?;
    Ok(Sequence::from_parts(seq.kind(), points, seq.boundary(), lo))
}

/// `a ⊕ t (b ⊖ a)`, exact at `t = 0` and `t = 1`.
fn geodesic(a: &ManifoldPoint, b: &ManifoldPoint, t: f64) -> Result<ManifoldPoint> {
    if t == 0.0 {
        return Ok(a.clone());
    }
    if t == 1.0 {
        return Ok(b.clone());
    }
    let chart = Chart::new(a);
    let mut v = chart.log(b)?;
    v.iter_mut().for_each(|c| *c *= t);
    Ok(chart.exp(&v))
}

fn apply_stage(seq: &Sequence, stage: Stage) -> Result<Sequence> {
    let pts = seq.points();
    let n = pts.len();
    let edges = seq.edge_count();
    if edges == 0 {
        return Err(Error::InvalidSequence("open sequence needs at least two points".into()));
    }
    let f = seq.first_index();
    let edge = |k: usize| (&pts[k], &pts[(k + 1) % n]);
    let (points, first) = match stage {
        Stage::Avg(t) => {
            let out: Vec<Result<ManifoldPoint>> = (0..edges)
                .into_par_iter()
                .map(|k| {
                    let (a, b) = edge(k);
                    geodesic(a, b, t).map_err(|e| e.at_index(f + k as i64))
                })
                .collect();
            (out.into_iter().collect::<Result<Vec<_>>>()?, f)
        }
        Stage::CornerCut(..) | Stage::MidpointInsert => {
            let (t, s) = match stage {
                Stage::CornerCut(t, s) => (t, s),
                _ => (0.0, 0.5),
            };
            let out: Vec<Result<[ManifoldPoint; 2]>> = (0..edges)
                .into_par_iter()
                .map(|k| {
                    let (a, b) = edge(k);
                    let i = 2 * (f + k as i64);
                    Ok([
                        geodesic(a, b, t).map_err(|e| e.at_index(i))?,
                        geodesic(a, b, s).map_err(|e| e.at_index(i + 1))?,
                    ])
                })
                .collect();
            let mut points = Vec::with_capacity(2 * edges + 1);
            for pair in out {
                points.extend(pair?);
            }
            if stage == Stage::MidpointInsert && seq.boundary() == Boundary::Open {
                points.push(pts[n - 1].clone());
            }
            (points, 2 * f)
        }
    };
    Ok(Sequence::from_parts(seq.kind(), points, seq.boundary(), first))
}

/// Applies the stages left to right; the first must be the single dilating one.
pub fn geodesic_pipeline_once(seq: &Sequence, stages: &[Stage]) -> Result<Sequence> {
    check_stages(stages)?;
    let mut cur = apply_stage(seq, stages[0])?;
    for &stage in &stages[1..] {
        cur = apply_stage(&cur, stage)?;
    }
    Ok(cur)
}

/// Interpolatory four-point rule with tension `ω`.
///
/// With [`BasePointRule::EdgeMidpoint`] the odd points are
/// `m ⊕ (−ω (p_{i−1} ⊖ m) − ω (p_{i+2} ⊖ m))`, `m` the midpoint of `p_i, p_{i+1}`.
pub fn four_point(seq: &Sequence, omega: f64, variant: SchemeVariant) -> Result<Sequence> {
    subdivide_once(seq, &Mask::four_point(omega)?, variant)
}

/// `S^k p`; errors carry the failing round.
pub fn subdivide(seq: &Sequence, rule: &Rule, rounds: usize) -> Result<Sequence> {
    let mut cur = seq.clone();
    for r in 0..rounds {
        cur = rule.apply(&cur).map_err(|e| e.at_round(r + 1))?;
    }
    Ok(cur)
}

/// Points of `S^k p` paired with their parameters `i / N^k`.
pub fn limit_samples(seq: &Sequence, rule: &Rule, depth: usize) -> Result<Vec<(f64, ManifoldPoint)>> {
    let refined = subdivide(seq, rule, depth)?;
    let scale = (rule.dilation() as f64).powi(depth as i32);
    let first = refined.first_index();
    Ok(refined
        .into_points()
        .into_iter()
        .enumerate()
        .map(|(k, p)| ((first + k as i64) as f64 / scale, p))
        .collect())
}

/// Scaled finite differences `N^{rk} Δ^r S^k p`, each paired with the parameter
/// at the centre of its stencil.
///
/// First differences use `q_{i+1} ⊖ q_i` and work on every manifold; higher
/// orders need Euclidean data.
pub fn derivative_samples(
    seq: &Sequence,
    rule: &Rule,
    depth: usize,
    order: usize,
) -> Result<Vec<(f64, TangentVector)>> {
    if order == 0 {
        return Err(Error::InvalidSequence("difference order must be at least 1".into()));
    }
    if order >= 2 && !matches!(seq.kind(), ManifoldKind::Euclidean(_)) {
        return Err(Error::UnsupportedVariant(format!(
            "differences of order {order} on {} data",
            seq.kind()
        )));
    }
    let refined = subdivide(seq, rule, depth)?;
    let h = (rule.dilation() as f64).powi(depth as i32);
    let pts = refined.points();
    let n = pts.len();
    let count = match refined.boundary() {
        Boundary::Periodic => n,
        Boundary::Open => n.saturating_sub(order),
    };
    let first = refined.first_index();
    let param = |k: usize| (first as f64 + k as f64 + order as f64 / 2.0) / h;
    if order == 1 {
        return (0..count)
            .map(|k| {
                let base = &pts[k];
                let mut v = Chart::new(base)
                    .log(&pts[(k + 1) % n])
                    .map_err(|e| e.at_index(first + k as i64))?;
                v.iter_mut().for_each(|c| *c *= h);
                Ok((param(k), TangentVector::from_raw(base.clone(), v)))
            })
            .collect();
    }
    let binom: Vec<f64> = (0..=order)
        .scan(1.0, |c, l| {
            let v = *c;
            *c = *c * (order - l) as f64 / (l + 1) as f64;
            Some(v)
        })
        .collect();
    let scale = h.powi(order as i32);
    let dim = refined.kind().coord_len();
    Ok((0..count)
        .map(|k| {
            let v = (0..dim)
                .map(|c| {
                    let mut acc = 0.0;
                    for (l, b) in binom.iter().enumerate() {
                        let sign = if (order - l).is_multiple_of(2) { 1.0 } else { -1.0 };
                        acc += sign * b * pts[(k + l) % n].coords()[c];
                    }
                    acc * scale
                })
                .collect();
            (param(k), TangentVector::from_raw(pts[k].clone(), v))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::distance;

    fn square() -> Sequence {
        Sequence::euclidean(
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]],
            Boundary::Periodic,
        )
        .unwrap()
    }

    fn coords(s: &Sequence) -> Vec<Vec<f64>> {
        s.points().iter().map(|p| p.coords().to_vec()).collect()
    }

    #[test]
    fn chaikin_cuts_square_corners() {
        let out = subdivide_once(&square(), &Mask::chaikin(), SchemeVariant::Linear).unwrap();
        let expect = vec![
            vec![0.25, 0.0],
            vec![0.75, 0.0],
            vec![1.0, 0.25],
            vec![1.0, 0.75],
            vec![0.75, 1.0],
            vec![0.25, 1.0],
            vec![0.0, 0.75],
            vec![0.0, 0.25],
        ];
        assert_eq!(coords(&out), expect);
    }

    #[test]
    fn delta_sequence_reproduces_mask() {
        let mask = Mask::four_point(1.0 / 16.0).unwrap();
        let mut rows = vec![vec![0.0]; 8];
        rows[4] = vec![1.0];
        let seq = Sequence::euclidean(&rows, Boundary::Periodic).unwrap();
        let out = subdivide_once(&seq, &mask, SchemeVariant::Linear).unwrap();
        for k in 0..16i64 {
            assert_eq!(out.points()[k as usize].coords()[0], mask.coeff(k - 8));
        }
    }

    fn sphere_polygon(n: usize, lat: f64) -> Sequence {
        let pts = (0..n)
            .map(|k| {
                let phi = 2.0 * std::f64::consts::PI * k as f64 / n as f64 + 0.1 * (k as f64).sin();
                let z = lat + 0.05 * (3.0 * k as f64).cos();
                ManifoldPoint::sphere_normalized(vec![phi.cos(), phi.sin(), z]).unwrap()
            })
            .collect();
        Sequence::periodic(pts).unwrap()
    }

    #[test]
    fn interpolatory_rules_keep_old_points_exactly() {
        let seq = sphere_polygon(9, 1.5);
        let mask = Mask::four_point(1.0 / 16.0).unwrap();
        for variant in [
            SchemeVariant::Frechet,
            SchemeVariant::LogExp(BasePointRule::EdgeMidpoint),
            SchemeVariant::LogExp(BasePointRule::FloorPoint),
        ] {
            let out = subdivide_once(&seq, &mask, variant).unwrap();
            for (i, p) in seq.points().iter().enumerate() {
                assert_eq!(&out.points()[2 * i], p);
            }
        }
    }

    #[test]
    fn pipeline_s2_is_chaikin_on_euclidean_data() {
        let seq = Sequence::euclidean(
            &[
                vec![0.0, 0.3],
                vec![1.0, -0.5],
                vec![2.5, 1.0],
                vec![0.5, 2.0],
                vec![-1.0, 0.7],
            ],
            Boundary::Periodic,
        )
        .unwrap();
        let a = geodesic_pipeline_once(&seq, &[Stage::MidpointInsert, Stage::Avg(0.5)]).unwrap();
        let b = subdivide_once(&seq, &Mask::chaikin(), SchemeVariant::Linear).unwrap();
        assert_eq!(a.first_index(), b.first_index());
        for (p, q) in a.points().iter().zip(b.points()) {
            assert!(distance(p, q).unwrap() < 1e-14);
        }
        let open = Sequence::euclidean(&[vec![0.0], vec![1.0], vec![3.0]], Boundary::Open).unwrap();
        let a = geodesic_pipeline_once(&open, &[Stage::MidpointInsert, Stage::Avg(0.5)]).unwrap();
        let b = subdivide_once(&open, &Mask::chaikin(), SchemeVariant::Linear).unwrap();
        assert_eq!((a.first_index(), a.len()), (b.first_index(), b.len()));
    }

    #[test]
    fn elementary_stages() {
        let seq = sphere_polygon(5, 0.5);
        let shifted = apply_stage(&seq, Stage::Avg(1.0)).unwrap();
        for i in 0..5 {
            assert_eq!(shifted.points()[i], seq.points()[(i + 1) % 5]);
        }
        let doubled = apply_stage(&seq, Stage::CornerCut(0.0, 1.0)).unwrap();
        for i in 0..5 {
            assert_eq!(doubled.points()[2 * i], seq.points()[i]);
            assert_eq!(doubled.points()[2 * i + 1], seq.points()[(i + 1) % 5]);
        }
    }

    #[test]
    fn pipeline_validation() {
        assert!(Rule::pipeline(vec![Stage::Avg(0.5)]).is_err());
        assert!(Rule::pipeline(vec![Stage::MidpointInsert, Stage::MidpointInsert]).is_err());
        assert!(Rule::pipeline(vec![Stage::CornerCut(0.3, 0.3)]).is_err());
        assert!(Rule::pipeline(vec![Stage::CornerCut(0.25, 0.75), Stage::Avg(0.5)]).is_ok());
    }

    #[test]
    fn four_point_zero_omega_inserts_midpoints() {
        let seq = sphere_polygon(6, 0.8);
        let a = four_point(&seq, 0.0, SchemeVariant::LogExp(BasePointRule::EdgeMidpoint)).unwrap();
        let b = geodesic_pipeline_once(&seq, &[Stage::MidpointInsert]).unwrap();
        for (p, q) in a.points().iter().zip(b.points()) {
            assert!(distance(p, q).unwrap() < 1e-14);
        }
    }

    #[test]
    fn four_point_reproduces_cubics() {
        let f = |t: f64| 0.5 * t * t * t - t * t + 2.0 * t - 0.25;
        let rows: Vec<_> = (0..10).map(|i| vec![f(i as f64)]).collect();
        let seq = Sequence::euclidean(&rows, Boundary::Open).unwrap();
        let out = four_point(&seq, 1.0 / 16.0, SchemeVariant::Linear).unwrap();
        assert_eq!(out.first_index(), 2);
        for (k, p) in out.points().iter().enumerate() {
            let t = (out.first_index() + k as i64) as f64 / 2.0;
            assert!((p.coords()[0] - f(t)).abs() < 1e-12);
        }
    }

    #[test]
    fn open_boundary_chaikin_length() {
        let seq = Sequence::euclidean(&[vec![0.0], vec![1.0], vec![2.0], vec![3.0]], Boundary::Open).unwrap();
        let out = subdivide_once(&seq, &Mask::chaikin(), SchemeVariant::Linear).unwrap();
        assert_eq!(out.len(), 6);
        assert_eq!(out.first_index(), 0);
        let short = Sequence::euclidean(&[vec![0.0]], Boundary::Open).unwrap();
        assert!(subdivide_once(&short, &Mask::chaikin(), SchemeVariant::Linear).is_err());
    }

    #[test]
    fn rounds_and_limit_samples() {
        let rule = Rule::masked(Mask::chaikin(), SchemeVariant::Linear).unwrap();
        assert_eq!(subdivide(&square(), &rule, 0).unwrap(), square());
        assert_eq!(subdivide(&square(), &rule, 2).unwrap().len(), 16);
        let s = limit_samples(&square(), &rule, 0).unwrap();
        assert_eq!(s[2].0, 2.0);
        assert_eq!(s[2].1, square().points()[2]);
        let fp = Rule::masked(Mask::four_point(0.0625).unwrap(), SchemeVariant::Frechet).unwrap();
        let seq = sphere_polygon(6, 1.0);
        let s = limit_samples(&seq, &fp, 3).unwrap();
        for (i, p) in seq.points().iter().enumerate() {
            assert_eq!(s[8 * i].0, i as f64);
            assert_eq!(&s[8 * i].1, p);
        }
    }

    #[test]
    fn sphere_closure_after_many_rounds() {
        let rule = Rule::masked(
            Mask::four_point(0.0625).unwrap(),
            SchemeVariant::LogExp(BasePointRule::EdgeMidpoint),
        )
        .unwrap();
        let out = subdivide(&sphere_polygon(5, 1.0), &rule, 5).unwrap();
        assert_eq!(out.len(), 160);
        for p in out.points() {
            assert!((crate::linalg::norm(p.coords()) - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn derivatives_of_polynomials() {
        let rows: Vec<_> = (0..6).map(|i| vec![2.0 * i as f64 + 1.0, -(i as f64)]).collect();
        let seq = Sequence::euclidean(&rows, Boundary::Open).unwrap();
        let rule = Rule::masked(Mask::chaikin(), SchemeVariant::Linear).unwrap();
        for (_, v) in derivative_samples(&seq, &rule, 4, 1).unwrap() {
            assert!((v.vec()[0] - 2.0).abs() < 1e-12 && (v.vec()[1] + 1.0).abs() < 1e-12);
        }
        let rows: Vec<_> = (0..8).map(|i| vec![(i * i) as f64]).collect();
        let seq = Sequence::euclidean(&rows, Boundary::Open).unwrap();
        let d2 = derivative_samples(&seq, &rule, 3, 2).unwrap();
        let first = d2[0].1.vec()[0];
        assert!((first - 2.0).abs() < 1e-9);
        assert!(d2.iter().all(|(_, v)| (v.vec()[0] - first).abs() < 1e-9));
        let sphere = sphere_polygon(5, 1.0);
        assert!(derivative_samples(&sphere, &rule, 1, 2).is_err());
    }

    #[test]
    fn projection_only_on_rotations() {
        let err = subdivide_once(&square(), &Mask::chaikin(), SchemeVariant::Projection).unwrap_err();
        assert!(matches!(err, Error::UnsupportedVariant(_)));
        let err = subdivide_once(&square(), &Mask::chaikin(), SchemeVariant::Frechet);
        assert!(err.is_ok());
    }

    #[test]
    fn errors_report_output_index() {
        let pts = vec![
            ManifoldPoint::sphere(vec![0.0, 0.0, 1.0]).unwrap(),
            ManifoldPoint::sphere(vec![0.0, 0.0, -1.0]).unwrap(),
            ManifoldPoint::sphere(vec![0.0, 1.0, 0.0]).unwrap(),
        ];
        let seq = Sequence::open(pts).unwrap();
        let err = subdivide_once(&seq, &Mask::chaikin(), SchemeVariant::Frechet).unwrap_err();
        assert!(matches!(err, Error::AtIndex { index: 0, .. }), "{err:?}");
        assert!(matches!(err.root(), Error::CutLocus { .. }));
    }
}
