//! Maximal/minimal functions of distribution classes and extremal quantiles.
//!
//! An [`EnvelopePair`] holds the pointwise sup and inf of the cdfs over a
//! class. When both are invertible on the open band between their limits,
//! the extremal quantiles of the class are the inverses of the envelope
//! functions evaluated at the level.

use crate::dist::Distribution;
use crate::numerics::lower_quantile_from_cdf;
use crate::{Error, Result};

const INVERSION_TOL: f64 = 1e-12;

/// Pointwise envelope of a distribution class.
#[derive(Debug, Clone)]
pub struct EnvelopePair {
    kind: EnvelopeKind,
    /// `Fmax(-inf)`.
    pub low_limit: f64,
    /// `Fmin(+inf)`.
    pub high_limit: f64,
    /// Structural invertibility on the open band `(low_limit, high_limit)`.
    pub invertible: bool,
}

#[derive(Debug, Clone)]
enum EnvelopeKind {
    ChebyshevMarkov,
    KolmogorovBall { center: Distribution, radius: f64 },
    LevyBall { center: Distribution, radius: f64 },
    MixtureClass { center: Distribution, radius: f64 },
    /// The non-invertible counterexample: a flat at `level` on [0, 1).
    Step { level: f64 },
}

impl EnvelopePair {
    /// The maximal function of the class.
    pub fn fmax(&self, x: f64) -> f64 {
        match &self.kind {
            EnvelopeKind::ChebyshevMarkov => {
                if x >= 0.0 {
                    1.0
                } else {
                    1.0 / (1.0 + x * x)
                }
            }
            EnvelopeKind::KolmogorovBall { center, radius } => (center.cdf(x) + radius).min(1.0),
            // the clamp is at 1, as for any upper cdf envelope
            EnvelopeKind::LevyBall { center, radius } => (center.cdf(x + radius) + radius).min(1.0),
            EnvelopeKind::MixtureClass { center, radius } => {
                (1.0 - radius) * center.cdf(x) + radius * chebyshev_markov_fmax(x)
            }
            EnvelopeKind::Step { level } => {
                if x < 0.0 {
                    0.0
                } else if x < 1.0 {
                    *level
                } else {
                    1.0
                }
            }
        }
    }

    /// The minimal function of the class.
    pub fn fmin(&self, x: f64) -> f64 {
        match &self.kind {
            EnvelopeKind::ChebyshevMarkov => {
                if x <= 0.0 {
                    0.0
                } else {
                    x * x / (1.0 + x * x)
                }
            }
            EnvelopeKind::KolmogorovBall { center, radius } => (center.cdf(x) - radius).max(0.0),
            EnvelopeKind::LevyBall { center, radius } => (center.cdf(x - radius) - radius).max(0.0),
            EnvelopeKind::MixtureClass { center, radius } => {
                (1.0 - radius) * center.cdf(x) + radius * chebyshev_markov_fmin(x)
            }
            // the counterexample only needs the flat; reuse the same step
            EnvelopeKind::Step { .. } => self.fmax(x),
        }
    }
}

fn chebyshev_markov_fmax(x: f64) -> f64 {
    if x >= 0.0 {
        1.0
    } else {
        1.0 / (1.0 + x * x)
    }
}

fn chebyshev_markov_fmin(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x / (1.0 + x * x)
    }
}

/// The extremal envelope of the standardized moment class.
pub fn chebyshev_markov_envelope() -> EnvelopePair {
    EnvelopePair {
        kind: EnvelopeKind::ChebyshevMarkov,
        low_limit: 0.0,
        high_limit: 1.0,
        invertible: true,
    }
}

/// Envelope of the Kolmogorov (uniform-distance) ball of radius `eps`
/// around `center`.
pub fn kolmogorov_ball_envelope(center: &Distribution, eps: f64) -> Result<EnvelopePair> {
    check_radius(eps)?;
    Ok(EnvelopePair {
        invertible: center.is_absolutely_continuous(),
        kind: EnvelopeKind::KolmogorovBall {
            center: center.clone(),
            radius: eps,
        },
        low_limit: eps,
        high_limit: 1.0 - eps,
    })
}

/// Envelope of the Levy ball of radius `eps` around `center`.
pub fn levy_ball_envelope(center: &Distribution, eps: f64) -> Result<EnvelopePair> {
    check_radius(eps)?;
    Ok(EnvelopePair {
        invertible: center.is_absolutely_continuous(),
        kind: EnvelopeKind::LevyBall {
            center: center.clone(),
            radius: eps,
        },
        low_limit: eps,
        high_limit: 1.0 - eps,
    })
}

/// Envelope of the mixture class `(1-theta) F0 + theta FY`, `theta <= eps`,
/// `FY` standardized. `center` must itself be standardized.
pub fn mixture_class_envelope(center: &Distribution, eps: f64) -> Result<EnvelopePair> {
    if !(0.0 < eps && eps < 1.0) {
        return Err(Error::Domain(format!("mixture radius {eps} outside (0,1)")));
    }
    if center.mean().abs() > 1e-6 || (center.stdev() - 1.0).abs() > 1e-6 {
        return Err(Error::Moment(format!(
            "mixture class center must be standardized (mean {}, stdev {})",
            center.mean(),
            center.stdev()
        )));
    }
    Ok(EnvelopePair {
        invertible: center.is_absolutely_continuous(),
        kind: EnvelopeKind::MixtureClass {
            center: center.clone(),
            radius: eps,
        },
        low_limit: 0.0,
        high_limit: 1.0,
    })
}

/// The counterexample envelope with a flat at `level`; not invertible.
pub fn step_envelope(level: f64) -> Result<EnvelopePair> {
    if !(0.0 < level && level < 1.0) {
        return Err(Error::Domain(format!("step level {level} outside (0,1)")));
    }
    Ok(EnvelopePair {
        kind: EnvelopeKind::Step { level },
        low_limit: 0.0,
        high_limit: 1.0,
        invertible: false,
    })
}

fn check_radius(eps: f64) -> Result<()> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::Domain(format!("radius {eps} outside (0,1)")));
    }
    Ok(())
}

/// Extremal quantiles over the class:
/// `inf q_a = Fmax^{-1}(a)` and `sup q_a = Fmin^{-1}(a)`.
pub fn extremal_quantiles(e: &EnvelopePair, alpha: f64) -> Result<(f64, f64)> {
    if !e.invertible {
        return Err(Error::NonInvertibleEnvelope(
            "envelope has a flat inside its band".into(),
        ));
    }
    if !(e.low_limit < alpha && alpha < e.high_limit) {
        return Err(Error::AlphaOutOfRange(format!(
            "alpha {alpha} outside ({}, {})",
            e.low_limit, e.high_limit
        )));
    }
    let inf_q = lower_quantile_from_cdf(&|x| e.fmax(x), alpha, INVERSION_TOL)?;
    let sup_q = lower_quantile_from_cdf(&|x| e.fmin(x), alpha, INVERSION_TOL)?;
    Ok((inf_q, sup_q))
}

/// Stop-loss transform extremals over the standardized moment class.
#[derive(Debug, Clone)]
pub struct StopLossTransformPair {
    /// Law attaining the maximal stop-loss transform (and the sharp ES sup).
    pub fmax_sl: Distribution,
    /// Law attaining the minimal stop-loss transform: unit mass at 0.
    pub fmin_sl: Distribution,
}

impl StopLossTransformPair {
    /// `sup_F Pi_F(x) = (sqrt(x^2+1) - x) / 2`.
    pub fn pi_max(&self, x: f64) -> f64 {
        0.5 * ((x * x + 1.0).sqrt() - x)
    }

    /// `inf_F Pi_F(x) = max(-x, 0)`.
    pub fn pi_min(&self, x: f64) -> f64 {
        (-x).max(0.0)
    }
}

pub fn stop_loss_extremals() -> StopLossTransformPair {
    StopLossTransformPair {
        fmax_sl: Distribution::StopLossMax,
        fmin_sl: Distribution::point_mass(0.0),
    }
}
