//! Process-wide numerical tolerances.
//!
//! A single value governs all invariant checks: unit norms, symmetry, and
//! (scaled by [`TANGENT_FACTOR`]) tangency of vectors. It defaults to
//! [`DEFAULT_TOLERANCE`] and can be overridden once per process, e.g. from
//! the `GEOMSUB_TOL` environment variable.

use std::sync::atomic::{AtomicU64, Ordering};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Tangent-space checks are looser than point checks by this factor.
pub const TANGENT_FACTOR: f64 = 100.0;

/// Logarithms whose angle exceeds `PI - CUT_LOCUS_MARGIN` are refused.
pub const CUT_LOCUS_MARGIN: f64 = 1e-6;

pub const ENV_VAR: &str = "GEOMSUB_TOL";

static TOLERANCE_BITS: AtomicU64 = AtomicU64::new(0);

pub fn tolerance() -> f64 {
    match TOLERANCE_BITS.load(Ordering::Relaxed) {
        0 => DEFAULT_TOLERANCE,
        bits => f64::from_bits(bits),
    }
}

pub fn tangent_tolerance() -> f64 {
    tolerance() * TANGENT_FACTOR
}

/// Overrides the global tolerance. Non-positive or non-finite values are ignored.
pub fn set_tolerance(tol: f64) -> bool {
    if tol.is_finite() && tol > 0.0 {
        TOLERANCE_BITS.store(tol.to_bits(), Ordering::Relaxed);
        true
    } else {
        false
    }
}

/// Reads `GEOMSUB_TOL` and installs it. Returns the value in effect.
pub fn init_from_env() -> f64 {
    if let Ok(raw) = std::env::var(ENV_VAR) {
        match raw.trim().parse::<f64>() {
            Ok(v) if set_tolerance(v) => {}
            _ => log::warn!("ignoring malformed {ENV_VAR}={raw:?}"),
        }
    }
    tolerance()
}
