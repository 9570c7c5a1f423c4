//! Laurent polynomials `Σ_k c_k z^{offset+k}` with real coefficients.

use serde::{Deserialize, Serialize};

use crate::linalg::stable_sum;
use crate::mask::Mask;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaurentPoly {
    offset: i64,
    coeffs: Vec<f64>,
}

impl LaurentPoly {
    /// Leading and trailing zeros are stripped; the zero polynomial has no coefficients.
    pub fn new(offset: i64, coeffs: Vec<f64>) -> Self {
        let mut p = LaurentPoly { offset, coeffs };
        p.normalize();
        p
    }

    pub fn zero() -> Self {
        LaurentPoly {
            offset: 0,
            coeffs: Vec::new(),
        }
    }

    /// `1 + z + … + z^{n−1}`.
    pub fn geometric(n: usize) -> Self {
        LaurentPoly::new(0, vec![1.0; n])
    }

    pub fn from_mask(mask: &Mask) -> Self {
        LaurentPoly::new(mask.offset(), mask.coeffs().to_vec())
    }

    fn normalize(&mut self) {
        let lead = self.coeffs.iter().take_while(|&&c| c == 0.0).count();
        if lead == self.coeffs.len() {
            *self = LaurentPoly::zero();
            return;
        }
        let trail = self.coeffs.iter().rev().take_while(|&&c| c == 0.0).count();
        self.coeffs.truncate(self.coeffs.len() - trail);
        self.coeffs.drain(..lead);
        self.offset += lead as i64;
    }

    pub fn offset(&self) -> i64 {
        self.offset
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `z^k`.
    pub fn coeff(&self, k: i64) -> f64 {
        let i = k - self.offset;
        if i < 0 || i >= self.coeffs.len() as i64 {
            0.0
        } else {
            self.coeffs[i as usize]
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        LaurentPoly::new(self.offset, self.coeffs.iter().map(|c| c * s).collect())
    }

    /// `z^k p(z)`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            offset: self.offset + k,
            coeffs: self.coeffs.clone(),
        }
    }

    /// `p(z^k)`.
    pub fn dilate(&self, k: usize) -> Self {
        if self.is_zero() {
            return LaurentPoly::zero();
        }
        let mut coeffs = vec![0.0; (self.coeffs.len() - 1) * k + 1];
        for (i, &c) in self.coeffs.iter().enumerate() {
            coeffs[i * k] = c;
        }
        LaurentPoly::new(self.offset * k as i64, coeffs)
    }

    /// Product with compensated summation of each output coefficient.
    pub fn mul(&self, other: &LaurentPoly) -> Self {
        if self.is_zero() || other.is_zero() {
            return LaurentPoly::zero();
        }
        let (a, b) = (&self.coeffs, &other.coeffs);
        let len = a.len() + b.len() - 1;
        let coeffs = (0..len)
            .map(|k| {
                let lo = k.saturating_sub(b.len() - 1);
                let hi = k.min(a.len() - 1);
                stable_sum((lo..=hi).map(|i| a[i] * b[k - i]))
            })
            .collect();
        LaurentPoly::new(self.offset + other.offset, coeffs)
    }

    /// Long division `self = q · divisor + r` with `deg r < deg divisor`, both
    /// read as ordinary polynomials after removing their offsets. The quotient
    /// carries offset `self.offset − divisor.offset`.
    pub fn div_rem(&self, divisor: &LaurentPoly) -> (LaurentPoly, Vec<f64>) {
        assert!(!divisor.is_zero(), "division by the zero polynomial");
        let d = &divisor.coeffs;
        let dn = d.len() - 1;
        let lead = d[dn];
        let mut rem = self.coeffs.clone();
        if rem.len() <= dn {
            return (LaurentPoly::zero(), rem);
        }
        let qn = rem.len() - dn;
        let mut q = vec![0.0; qn];
        for k in (0..qn).rev() {
            let c = rem[k + dn] / lead;
            q[k] = c;
            for (i, &di) in d.iter().enumerate() {
                rem[k + i] -= c * di;
            }
            rem[k + dn] = 0.0;
        }
        rem.truncate(dn);
        (LaurentPoly::new(self.offset - divisor.offset, q), rem)
    }

    pub fn eval(&self, z: f64) -> f64 {
        let mut acc = 0.0;
        for &c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc * z.powi(self.offset as i32)
    }
}
