//! Convergence and regularity analysis of subdivision rules.
//!
//! For a linear rule with symbol `a(z)` the derived rule `S*` has symbol
//! `a*(z) = N z^{N−1} a(z) / (1 + z + … + z^{N−1})` and satisfies
//! `S* Δ = N Δ S`. If `γ = N^{−m} ‖(S^m)*‖ < 1` for some power `m`, the rule
//! converges and its limits are Hölder continuous with exponent
//! `−log γ / (m log N)`. Nonlinear rules are measured a posteriori through
//! the density `δ(p)`.

mod laurent;

pub use laurent::LaurentPoly;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::manifold::distance;
use crate::mask::Mask;
use crate::sequence::Sequence;
use crate::subdivision::Rule;

/// Remainder coefficients above this bound mean the mask is not affine invariant.
pub const REMAINDER_TOLERANCE: f64 = 1e-10;

pub const DEFAULT_MAX_POWER: usize = 6;

/// `δ(p) = max_i d(p_i, p_{i+1})`, wrapping for periodic sequences.
pub fn density(seq: &Sequence) -> Result<f64> {
    let mut d = 0.0f64;
    for (k, (a, b)) in seq.edges().enumerate() {
        d = d.max(distance(a, b).map_err(|e| e.at_index(seq.first_index() + k as i64))?);
    }
    Ok(d)
}

/// Mask of the derived rule, by exact Laurent division.
pub fn derived_mask(mask: &Mask) -> Result<Mask> {
    let n = mask.dilation();
    let (q, rem) = LaurentPoly::from_mask(mask).div_rem(&LaurentPoly::geometric(n));
    let max_abs = rem.iter().fold(0.0f64, |m, r| m.max(r.abs()));
    if max_abs > REMAINDER_TOLERANCE || q.is_zero() {
        return Err(Error::NonZeroRemainder { max_abs });
    }
    let q = q.scale(n as f64).shift(n as i64 - 1);
    Mask::unchecked(n, q.offset(), q.coeffs().to_vec())
}

/// `‖S‖_∞ = max_r Σ_j |a_{r−Nj}|`.
pub fn operator_norm(mask: &Mask) -> f64 {
    mask.residue_abs_sums().into_iter().fold(0.0, f64::max)
}

/// Mask of `S^m`: symbol `Π_{l<m} a(z^{N^l})`, dilation `N^m`.
pub fn mask_power(mask: &Mask, m: usize) -> Result<Mask> {
    if m == 0 {
        return Err(Error::InvalidMask("power must be at least 1".into()));
    }
    let n = mask.dilation();
    let base = LaurentPoly::from_mask(mask);
    let mut acc = base.clone();
    let mut dil = n;
    for _ in 1..m {
        acc = acc.mul(&base.dilate(dil));
        dil = dil
            .checked_mul(n)
            .ok_or_else(|| Error::InvalidMask("mask power too large".into()))?;
    }
    Mask::unchecked(dil, acc.offset(), acc.coeffs().to_vec())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerNorm {
    pub power: usize,
    /// `‖(S^m)*‖`.
    pub derived_norm: f64,
    /// `N^{−m} ‖(S^m)*‖`.
    pub gamma: f64,
    /// `γ_m^{1/m}`, the contraction per single step.
    pub per_step: f64,
    /// Largest Hölder exponent certified by powers `1..=m`; `None` while no power contracts.
    pub holder_bound: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Proven,
    NotProven { max_power_tried: usize },
}

impl Serialize for Verdict {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(match self {
            Verdict::Proven => "Proven",
            Verdict::NotProven { .. } => "NotProven",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceReport {
    pub dilation: usize,
    pub norms: Vec<PowerNorm>,
    /// Best per-step factor found; below one exactly when proven.
    pub gamma: f64,
    pub holder_exponent: Option<f64>,
    pub verdict: Verdict,
    pub powers_tried: usize,
}

fn power_norm(mask: &Mask, m: usize) -> Result<(f64, f64)> {
    let derived = derived_mask(&mask_power(mask, m)?)?;
    let norm = operator_norm(&derived);
    let gamma = norm / (mask.dilation() as f64).powi(m as i32);
    Ok((norm, gamma))
}

fn holder(per_step: f64, n: usize) -> f64 {
    -per_step.ln() / (n as f64).ln()
}

fn with_bounds(n: usize, raw: Vec<(usize, f64, f64)>) -> Vec<PowerNorm> {
    let mut best: Option<f64> = None;
    raw.into_iter()
        .map(|(power, derived_norm, gamma)| {
            let per_step = gamma.powf(1.0 / power as f64);
            if per_step < 1.0 {
                let h = holder(per_step, n);
                best = Some(best.map_or(h, |b| b.max(h)));
            }
            PowerNorm {
                power,
                derived_norm,
                gamma,
                per_step,
                holder_bound: best,
            }
        })
        .collect()
}

/// Scaled derived norms for every power `1..=max_power`, computed in parallel.
pub fn contraction_factors(mask: &Mask, max_power: usize) -> Result<Vec<PowerNorm>> {
    let raw = (1..=max_power)
        .into_par_iter()
        .map(|m| power_norm(mask, m).map(|(norm, gamma)| (m, norm, gamma)))
        .collect::<Vec<_>>()
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(with_bounds(mask.dilation(), raw))
}

/// Tries powers `1, 2, …, max_power` and stops at the first contracting one.
pub fn contractivity_report(mask: &Mask, max_power: usize) -> Result<ConvergenceReport> {
    if max_power == 0 {
        return Err(Error::InvalidMask("max_power must be at least 1".into()));
    }
    let n = mask.dilation();
    let mut raw = Vec::new();
    for m in 1..=max_power {
        let (norm, gamma) = power_norm(mask, m)?;
        raw.push((m, norm, gamma));
        if gamma < 1.0 {
            break;
        }
    }
    let norms = with_bounds(n, raw);
    let best = norms.iter().map(|p| p.per_step).fold(f64::INFINITY, f64::min);
    let last = norms.last().expect("at least one power");
    let proven = last.gamma < 1.0;
    Ok(ConvergenceReport {
        dilation: n,
        gamma: best,
        holder_exponent: if proven { last.holder_bound } else { None },
        verdict: if proven {
            Verdict::Proven
        } else {
            Verdict::NotProven {
                max_power_tried: norms.len(),
            }
        },
        powers_tried: norms.len(),
        norms,
    })
}

/// Ratios `δ(S^k p) / δ(S^{k−1} p)` for `k = 1..=rounds`; `0/0` counts as 0.
pub fn empirical_contraction(seq: &Sequence, rule: &Rule, rounds: usize) -> Result<Vec<f64>> {
    let mut cur = seq.clone();
    let mut prev = density(&cur)?;
    let mut ratios = Vec::with_capacity(rounds);
    for r in 0..rounds {
        cur = rule.apply(&cur).map_err(|e| e.at_round(r + 1))?;
        let d = density(&cur)?;
        ratios.push(if prev == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d / prev
        });
        prev = d;
    }
    Ok(ratios)
}

/// `sup_i d(Sp_{Ni}, p_i) / δ(p)`, or 0 for constant data.
pub fn displacement_gap(seq: &Sequence, rule: &Rule) -> Result<f64> {
    let delta = density(seq)?;
    let refined = rule.apply(seq)?;
    let n = rule.dilation() as i64;
    let mut sup = 0.0f64;
    for i in seq.first_index()..=seq.last_index() {
        let k = n * i - refined.first_index();
        if k < 0 || k >= refined.len() as i64 {
            continue;
        }
        let p = seq.get(i).expect("index in range");
        sup = sup.max(distance(&refined.points()[k as usize], p).map_err(|e| e.at_index(i))?);
    }
    Ok(if delta == 0.0 { 0.0 } else { sup / delta })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::manifold::ManifoldPoint;
    use crate::sequence::Boundary;
    use crate::subdivision::{subdivide_once, SchemeVariant};

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn derived_masks_of_named_rules() {
        let d = derived_mask(&Mask::chaikin()).unwrap();
        assert_eq!((d.offset(), d.coeffs()), (-1, &[0.5, 1.0, 0.5][..]));
        let d = derived_mask(&Mask::midpoint()).unwrap();
        assert_eq!((d.offset(), d.coeffs()), (0, &[1.0, 1.0][..]));
        let d = derived_mask(&Mask::four_point(1.0 / 16.0).unwrap()).unwrap();
        assert_eq!(d.offset(), -2);
        let expect = [-1.0, 1.0, 8.0, 8.0, 1.0, -1.0].map(|c| c / 8.0);
        for (a, b) in d.coeffs().iter().zip(expect) {
            assert!(close(*a, b, 1e-15));
        }
    }

    #[test]
    fn non_affine_mask_has_remainder() {
        let m = Mask::unchecked(2, 0, vec![0.5, 0.25, 0.5]).unwrap();
        assert!(matches!(derived_mask(&m), Err(Error::NonZeroRemainder { .. })));
    }

    fn differences(s: &Sequence) -> Vec<f64> {
        let p = s.points();
        (0..p.len())
            .map(|i| p[(i + 1) % p.len()].coords()[0] - p[i].coords()[0])
            .collect()
    }

    #[test]
    fn derived_rule_commutes_with_differences() {
        let data: Vec<Vec<f64>> = (0..12).map(|i| vec![((i * 7) % 5) as f64 - 0.3 * i as f64]).collect();
        let seq = Sequence::euclidean(&data, Boundary::Periodic).unwrap();
        for mask in [
            Mask::chaikin(),
            Mask::four_point(0.1).unwrap(),
            Mask::lane_riesenfeld(3).unwrap(),
        ] {
            let d = derived_mask(&mask).unwrap();
            let sp = subdivide_once(&seq, &mask, SchemeVariant::Linear).unwrap();
            let lhs_in = Sequence::euclidean(
                &differences(&seq).into_iter().map(|v| vec![v]).collect::<Vec<_>>(),
                Boundary::Periodic,
            )
            .unwrap();
            let lhs = subdivide_once(&lhs_in, &d, SchemeVariant::Linear).unwrap();
            for (a, b) in lhs.points().iter().zip(differences(&sp)) {
                assert!(close(a.coords()[0], 2.0 * b, 1e-12));
            }
        }
    }

    #[test]
    fn operator_norms() {
        assert_eq!(operator_norm(&Mask::chaikin()), 1.0);
        assert!(close(
            operator_norm(&Mask::four_point(1.0 / 16.0).unwrap()),
            1.25,
            1e-15
        ));
        assert_eq!(operator_norm(&Mask::lane_riesenfeld(5).unwrap()), 1.0);
    }

    #[test]
    fn chaikin_report() {
        let r = contractivity_report(&Mask::chaikin(), 6).unwrap();
        assert_eq!(r.verdict, Verdict::Proven);
        assert_eq!(r.powers_tried, 1);
        assert!(close(r.gamma, 0.5, 1e-15));
        assert!(close(r.holder_exponent.unwrap(), 1.0, 1e-12));
        let json = serde_json::to_value(&r).unwrap();
        assert_eq!(json["verdict"], "Proven");
    }

    #[test]
    fn four_point_report_matches_oracle() {
        let mask = Mask::four_point(1.0 / 16.0).unwrap();
        let r = contractivity_report(&mask, 6).unwrap();
        assert_eq!(r.verdict, Verdict::Proven);
        assert_eq!(r.powers_tried, 1);
        assert!(close(r.gamma, 0.625, 1e-15));
        let all = contraction_factors(&mask, 4).unwrap();
        let gammas = [5.0 / 8.0, 21.0 / 64.0, 85.0 / 512.0, 341.0 / 4096.0];
        for (p, g) in all.iter().zip(gammas) {
            assert!(close(p.gamma, g, 1e-14), "{p:?}");
        }
        let holders = [0.678072, 0.803841, 0.863536, 0.896593];
        for (p, h) in all.iter().zip(holders) {
            assert!(close(p.holder_bound.unwrap(), h, 1e-6), "{p:?}");
        }
    }

    #[test]
    fn shift_alone_is_not_contractive() {
        let m = Mask::new(2, 0, vec![1.0, 1.0]).unwrap();
        let r = contractivity_report(&m, 6).unwrap();
        assert_eq!(r.verdict, Verdict::NotProven { max_power_tried: 6 });
        assert!(close(r.gamma, 1.0, 1e-15));
        assert!(r.holder_exponent.is_none());
    }

    #[test]
    fn mask_power_of_midpoint_rule() {
        let m = mask_power(&Mask::midpoint(), 2).unwrap();
        assert_eq!(m.dilation(), 4);
        assert_eq!(m.offset(), -3);
        assert_eq!(m.coeffs(), &[0.25, 0.5, 0.75, 1.0, 0.75, 0.5, 0.25]);
    }

    #[test]
    fn densities() {
        let sq = Sequence::euclidean(
            &[vec![0.0, 0.0], vec![1.0, 0.0], vec![1.0, 1.0], vec![0.0, 1.0]],
            Boundary::Periodic,
        )
        .unwrap();
        assert_eq!(density(&sq).unwrap(), 1.0);
        let c = Sequence::open(vec![ManifoldPoint::euclidean(vec![2.0]); 4]).unwrap();
        assert_eq!(density(&c).unwrap(), 0.0);
        let rule = Rule::masked(Mask::chaikin(), SchemeVariant::Linear).unwrap();
        assert_eq!(empirical_contraction(&c, &rule, 3).unwrap(), vec![0.0; 3]);
        assert_eq!(displacement_gap(&c, &rule).unwrap(), 0.0);
    }

    #[test]
    fn displacement_gaps() {
        let data: Vec<Vec<f64>> = (0..9).map(|i| vec![(i as f64).sin(), (i * i) as f64 * 0.1]).collect();
        let seq = Sequence::euclidean(&data, Boundary::Periodic).unwrap();
        let chaikin = Rule::masked(Mask::chaikin(), SchemeVariant::Linear).unwrap();
        assert!(displacement_gap(&seq, &chaikin).unwrap() <= 0.25 + 1e-15);
        let fp = Rule::masked(Mask::four_point(0.0625).unwrap(), SchemeVariant::Linear).unwrap();
        assert_eq!(displacement_gap(&seq, &fp).unwrap(), 0.0);
        let mid = Rule::lane_riesenfeld_pipeline(0);
        assert_eq!(displacement_gap(&seq, &mid).unwrap(), 0.0);
    }
}
