//! Closed-form tail bounds for VaR and ES on the fixed-moment class, and
//! their ratios to the Gaussian risk figures (the multiplier curves).

use crate::special::{norm_pdf, norm_quantile};
use crate::{Error, Result};

/// Family of closed-form bounds for a law with mean 0 and stdev `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundKind {
    /// `sigma / sqrt(a)`.
    ChebyshevVar,
    /// `2 sigma / sqrt(a)`.
    ChebyshevEs,
    /// `sigma sqrt((1-a)/a)`; sharp for VaR.
    CantelliVar,
    /// `(sigma/a)(sqrt(a - a^2) + asin(sqrt(a)))`, the integrated Cantelli
    /// bound. Not sharp.
    CantelliEs,
    /// Same value as [`BoundKind::CantelliVar`].
    SharpVar,
    /// `sigma sqrt((1-a)/a)`, attained by the stop-loss extremal law.
    SharpEs,
}

impl BoundKind {
    pub const ALL: [BoundKind; 6] = [
        BoundKind::ChebyshevVar,
        BoundKind::ChebyshevEs,
        BoundKind::CantelliVar,
        BoundKind::CantelliEs,
        BoundKind::SharpVar,
        BoundKind::SharpEs,
    ];

    pub fn is_es(self) -> bool {
        matches!(
            self,
            BoundKind::ChebyshevEs | BoundKind::CantelliEs | BoundKind::SharpEs
        )
    }
}

fn check(sigma: f64, alpha: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::Domain(format!("sigma {sigma} must be > 0")));
    }
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0,1)")));
    }
    Ok(())
}

/// Upper bound of the given kind for a mean-zero law with stdev `sigma`.
pub fn bound(kind: BoundKind, sigma: f64, alpha: f64) -> Result<f64> {
    check(sigma, alpha)?;
    Ok(match kind {
        BoundKind::ChebyshevVar => sigma / alpha.sqrt(),
        BoundKind::ChebyshevEs => 2.0 * sigma / alpha.sqrt(),
        BoundKind::CantelliVar | BoundKind::SharpVar | BoundKind::SharpEs => {
            sigma * ((1.0 - alpha) / alpha).sqrt()
        }
        BoundKind::CantelliEs => {
            // antiderivative of sqrt((1-u)/u): sqrt(u - u^2) + asin(sqrt(u))
            sigma / alpha * ((alpha - alpha * alpha).sqrt() + alpha.sqrt().asin())
        }
    })
}

/// The integrated Cantelli ES bound exactly as printed in the source
/// material, with an arctan in place of the arcsin. Inconsistent with the
/// integral it is meant to evaluate; kept for diagnostic output only.
pub fn cantelli_es_paper_literal(sigma: f64, alpha: f64) -> Result<f64> {
    check(sigma, alpha)?;
    Ok(sigma / alpha
        * ((alpha - alpha * alpha).sqrt() + ((1.0 - alpha) / alpha).sqrt().atan()))
}

/// Ratio of the bound (at sigma = 1) to the Gaussian risk figure:
/// `|z_a|` for VaR kinds, `phi(z_a)/a` for ES kinds.
pub fn multiplier_ratio(kind: BoundKind, alpha: f64) -> Result<f64> {
    if !(0.0 < alpha && alpha < 0.5) {
        return Err(Error::Domain(format!(
            "ratio defined for alpha in (0, 0.5), got {alpha}"
        )));
    }
    let z = norm_quantile(alpha);
    let gaussian = if kind.is_es() {
        norm_pdf(z) / alpha
    } else {
        z.abs()
    };
    Ok(bound(kind, 1.0, alpha)? / gaussian)
}

/// One `(alpha, ratio)` row per grid point; the grid must be sorted and lie
/// inside (0, 0.5).
pub fn ratio_curve(kind: BoundKind, alpha_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    if alpha_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::Domain("alpha grid must be strictly increasing".into()));
    }
    alpha_grid
        .iter()
        .map(|&a| Ok((a, multiplier_ratio(kind, a)?)))
        .collect()
}
