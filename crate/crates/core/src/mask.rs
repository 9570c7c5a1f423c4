//! Masks of stationary subdivision rules.
//!
//! A mask with dilation `N` and coefficients `a_j` defines the linear rule
//! `Sp_i = Σ_j a_{i−Nj} p_j`. Coefficients are stored contiguously starting
//! at index `offset`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::stable_sum;
use crate::tolerance::tolerance;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Mask {
    dilation: usize,
    offset: i64,
    coeffs: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    name: Option<String>,
}

/// Reflection symmetry of a mask, `a_j = a_{c−j}` for some integer `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Symmetry {
    /// `c` even: the rule commutes with reversal about a data point.
    Primal {
        center2: i64,
    },
    /// `c` odd: the rule commutes with reversal about an edge.
    Dual {
        center2: i64,
    },
    Asymmetric,
}

impl Mask {
    /// Checked constructor; the coefficients of every residue class must sum to one.
    pub fn new(dilation: usize, offset: i64, coeffs: Vec<f64>) -> Result<Self> {
        let mask = Self::unchecked(dilation, offset, coeffs)?;
        mask.check_affine()?;
        Ok(mask)
    }

    /// Skips the affine-invariance check; used to analyse arbitrary masks.
    pub fn unchecked(dilation: usize, offset: i64, coeffs: Vec<f64>) -> Result<Self> {
        if dilation < 2 {
            return Err(Error::InvalidMask(format!("dilation {dilation} < 2")));
        }
        if coeffs.is_empty() {
            return Err(Error::InvalidMask("no coefficients".into()));
        }
        if coeffs.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidMask("non-finite coefficient".into()));
        }
        Ok(Mask {
            dilation,
            offset,
            coeffs,
            name: None,
        }
        .trimmed())
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    /// Drops leading and trailing zeros, keeping at least one coefficient.
    fn trimmed(mut self) -> Self {
        let lead = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        if lead == self.coeffs.len() {
            self.coeffs.truncate(1);
            return self;
        }
        let trail = self.coeffs.iter().rev().take_while(|&&c| c == 0.0).count();
        self.coeffs.truncate(self.coeffs.len() - trail);
        self.coeffs.drain(..lead);
        self.offset += lead as i64;
        self
    }

    /// `(¼, ¾, ¾, ¼)`; its limit curves are quadratic B-splines.
    pub fn chaikin() -> Self {
        Mask::new(2, -2, vec![0.25, 0.75, 0.75, 0.25])
            .unwrap()
            .with_name("chaikin")
    }

    /// Midpoint insertion, `(½, 1, ½)`; piecewise linear limits.
    pub fn midpoint() -> Self {
        Mask::new(2, -1, vec![0.5, 1.0, 0.5]).unwrap().with_name("midpoint")
    }

    /// Interpolatory four-point rule `(−ω, 0, ½+ω, 1, ½+ω, 0, −ω)`.
    pub fn four_point(omega: f64) -> Result<Self> {
        if !omega.is_finite() {
            return Err(Error::InvalidMask("ω must be finite".into()));
        }
        if !four_point_certified(omega) {
            log::warn!(
                "four-point rule with |ω| = {} ≥ 1/6 has no convergence guarantee on manifolds",
                omega.abs()
            );
        }
        let h = 0.5 + omega;
        Ok(Mask::new(2, -3, vec![-omega, 0.0, h, 1.0, h, 0.0, -omega])?.with_name(format!("fourpoint:{omega}")))
    }

    /// Midpoint insertion followed by `rounds` rounds of midpoint averaging.
    ///
    /// The mask is `2^{−(k+1)} C(k+2, j)`; `rounds = 1` is Chaikin's rule.
    pub fn lane_riesenfeld(rounds: usize) -> Result<Self> {
        if rounds > 60 {
            return Err(Error::InvalidMask("too many averaging rounds".into()));
        }
        let n = rounds + 2;
        let scale = 0.5f64.powi(rounds as i32 + 1);
        let mut c = vec![1.0f64; n + 1];
        for j in 1..n {
            c[j] = c[j - 1] * (n - j + 1) as f64 / j as f64;
        }
        let coeffs = c.into_iter().map(|b| b * scale).collect();
        Ok(Mask::new(2, -(rounds as i64) - 1, coeffs)?.with_name(format!("lane-riesenfeld:{rounds}")))
    }

    pub fn dilation(&self) -> usize {
        self.dilation
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// Index of the last stored coefficient.
    pub fn last_index(&self) -> i64 {
        self.offset + self.coeffs.len() as i64 - 1
    }

    /// `a_j`, zero outside the stored range.
    pub fn coeff(&self, j: i64) -> f64 {
        let k = j - self.offset;
        if k < 0 || k >= self.coeffs.len() as i64 {
            0.0
        } else {
            self.coeffs[k as usize]
        }
    }

    /// `Σ_j a_{r−Nj}` for each residue class `r = 0..N`.
    pub fn residue_sums(&self) -> Vec<f64> {
        self.residue_fold(|c| c)
    }

    /// `Σ_j |a_{r−Nj}|` for each residue class.
    pub fn residue_abs_sums(&self) -> Vec<f64> {
        self.residue_fold(f64::abs)
    }

    fn residue_fold(&self, f: impl Fn(f64) -> f64) -> Vec<f64> {
        let n = self.dilation as i64;
        (0..n)
            .map(|r| {
                stable_sum(
                    self.coeffs
                        .iter()
                        .enumerate()
                        .filter(|(k, _)| (self.offset + *k as i64).rem_euclid(n) == r)
                        .map(|(_, &c)| f(c)),
                )
            })
            .collect()
    }

    pub fn check_affine(&self) -> Result<()> {
        for (r, s) in self.residue_sums().into_iter().enumerate() {
            if (s - 1.0).abs() > tolerance() {
                return Err(Error::InvalidMask(format!(
                    "coefficients of residue class {r} sum to {s}, not 1"
                )));
            }
        }
        Ok(())
    }

    pub fn is_affine(&self) -> bool {
        self.check_affine().is_ok()
    }

    /// `a_0 = 1` and `a_{Nk} = 0` for `k ≠ 0`, so that `Sp_{Ni} = p_i`.
    pub fn is_interpolatory(&self) -> bool {
        let n = self.dilation as i64;
        (self.offset..=self.last_index())
            .filter(|j| j.rem_euclid(n) == 0)
            .all(|j| self.coeff(j) == if j == 0 { 1.0 } else { 0.0 })
            && self.coeff(0) == 1.0
    }

    pub fn is_nonnegative(&self) -> bool {
        self.coeffs.iter().all(|&c| c >= 0.0)
    }

    pub fn symmetry(&self) -> Symmetry {
        let c = self.offset + self.last_index();
        let tol = tolerance();
        let symmetric = (self.offset..=self.last_index()).all(|j| (self.coeff(j) - self.coeff(c - j)).abs() <= tol);
        if !symmetric {
            Symmetry::Asymmetric
        } else if c.rem_euclid(2) == 0 {
            Symmetry::Primal { center2: c }
        } else {
            Symmetry::Dual { center2: c }
        }
    }

    /// Nonzero terms `(j, a_{i−Nj})` contributing to output `i`.
    pub(crate) fn stencil(&self, i: i64) -> impl Iterator<Item = (i64, f64)> + '_ {
        let n = self.dilation as i64;
        let lo = -(self.last_index() - i).div_euclid(n);
        let hi = (i - self.offset).div_euclid(n);
        (lo..=hi).filter_map(move |j| {
            let a = self.coeff(i - n * j);
            (a != 0.0).then_some((j, a))
        })
    }
}

/// True when `|ω| < 1/6`, the range with guaranteed convergence on manifolds.
pub fn four_point_certified(omega: f64) -> bool {
    omega.abs() < 1.0 / 6.0
}
