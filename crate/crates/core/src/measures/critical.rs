//! The exponent `α_c` at which `Q_α(ρ)` equals its own average `Q*(ρ)`.

use serde::Serialize;

use super::{luo_uncertainty, q_alpha, q_star, Alpha};
use crate::states::DensityMatrix;
use crate::{Error, Result};

/// Lower end of the search bracket.
pub const CRITICAL_ALPHA_FLOOR: f64 = 1e-6;
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
pub const MAX_BISECTIONS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum CriticalAlpha {
    Root(f64),
    /// `Q_α` is constant in `α` (pure or maximally mixed), so every `α`
    /// qualifies.
    Degenerate,
}

impl CriticalAlpha {
    pub fn root(self) -> Option<f64> {
        match self {
            CriticalAlpha::Root(a) => Some(a),
            CriticalAlpha::Degenerate => None,
        }
    }
}

/// Bisection on `[lo, hi]`. Requires `f(lo)` and `f(hi)` of opposite sign
/// (or one of them within `tol` of zero). Stops when `|f(mid)| <= tol`, when
/// the bracket can no longer shrink in floating point, or after
/// `MAX_BISECTIONS` halvings.
pub fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo.abs() <= tol {
        return Ok(lo);
    }
    if f_hi.abs() <= tol {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() {
        return Err(Error::BracketFailure { lo, hi, g_lo: f_lo, g_hi: f_hi });
    }
    let mut mid = 0.5 * (lo + hi);
    for _ in 0..MAX_BISECTIONS {
        mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = f(mid);
        if f_mid.abs() <= tol {
            break;
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
    }
    Ok(mid)
}

/// Root of `g(α) = Q_α(ρ) - Q*(ρ)` on `[1e-6, 1/2]`.
///
/// `g(1/2) = L - Q* >= 0` always; for full-rank states `g(α) → -Q* < 0` as
/// `α → 0`. A rank-`r` state has `Q* >= n - r = lim_{α→0} Q_α`, so the
/// bracket holds there too; a missing sign change is still reported as an
/// error instead of being guessed around.
pub fn critical_alpha(rho: &DensityMatrix, tol: f64) -> Result<CriticalAlpha> {
    let target = q_star(rho);
    let g = |a: f64| q_alpha(rho, Alpha(a)) - target;
    let g_lo = g(CRITICAL_ALPHA_FLOOR);
    let g_hi = luo_uncertainty(rho) - target;
    if g_lo.abs() <= tol && g_hi.abs() <= tol {
        return Ok(CriticalAlpha::Degenerate);
    }
    bisect(g, CRITICAL_ALPHA_FLOOR, 0.5, tol).map(CriticalAlpha::Root)
}
