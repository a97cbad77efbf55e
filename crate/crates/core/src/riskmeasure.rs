//! Value-at-Risk and Expected Shortfall.
//!
//! `VaR_a(X) = -q_a(X)` and `ES_a(X) = (1/a) int_0^a VaR_u(X) du`. Closed
//! forms are used for the Gaussian and Student-t laws and for purely atomic
//! laws; everything else goes through adaptive quadrature on the quantile
//! with the singularity-absorbing substitution `u = a t^2`.

use crate::dist::Distribution;
use crate::numerics::integrate_adaptive;
use crate::special;
use crate::{Error, Result};

/// Accepted range of tail levels.
pub const ALPHA_FLOOR: f64 = 1e-6;

/// Risk measure kind together with its tail level.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiskMeasureSpec {
    pub kind: MeasureKind,
    pub alpha: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeasureKind {
    ValueAtRisk,
    ExpectedShortfall,
}

impl RiskMeasureSpec {
    pub fn new(kind: MeasureKind, alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(RiskMeasureSpec { kind, alpha })
    }

    pub fn evaluate(&self, d: &Distribution) -> Result<f64> {
        match self.kind {
            MeasureKind::ValueAtRisk => value_at_risk(d, self.alpha),
            MeasureKind::ExpectedShortfall => expected_shortfall(d, self.alpha),
        }
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(ALPHA_FLOOR < alpha && alpha < 1.0 - ALPHA_FLOOR) {
        return Err(Error::Domain(format!(
            "alpha {alpha} outside ({ALPHA_FLOOR:e}, 1-{ALPHA_FLOOR:e})"
        )));
    }
    Ok(())
}

/// `VaR_a(X) = -q_a(X)`.
pub fn value_at_risk(d: &Distribution, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    Ok(-d.lower_quantile(alpha)?)
}

/// `ES_a(X) = (1/a) int_0^a VaR_u(X) du`.
pub fn expected_shortfall(d: &Distribution, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    match d {
        Distribution::StandardNormal => {
            let z = special::norm_quantile(alpha);
            Ok(special::norm_pdf(z) / alpha)
        }
        Distribution::StudentT { nu, standardized } => {
            // ES of the raw t law: f(q) (nu + q^2) / (a (nu - 1))
            let q = special::student_t_quantile(alpha, *nu);
            let raw = special::student_t_pdf(q, *nu) * (nu + q * q) / (alpha * (nu - 1.0));
            let scale = if *standardized {
                ((nu - 2.0) / nu).sqrt()
            } else {
                1.0
            };
            Ok(raw * scale)
        }
        Distribution::Affine {
            base,
            location,
            scale,
        } => Ok(scale * expected_shortfall(base, alpha)? - location),
        _ => {
            if let Some(atoms) = d.atoms() {
                Ok(atomic_expected_shortfall(&atoms, alpha))
            } else {
                es_by_quantile_integration(d, alpha)
            }
        }
    }
}

// Exact ES for a purely atomic law: the quantile is piecewise constant, so
// the integral is a finite sum.
fn atomic_expected_shortfall(atoms: &[(f64, f64)], alpha: f64) -> f64 {
    let mut acc = 0.0;
    let mut cum = 0.0;
    for &(x, m) in atoms {
        if cum + m < alpha {
            acc += m * x;
            cum += m;
        } else {
            acc += (alpha - cum) * x;
            cum = alpha;
            break;
        }
    }
    debug_assert!((cum - alpha).abs() < 1e-12);
    -acc / alpha
}

/// The generic quadrature path: `ES_a = 2 int_0^1 -q(a t^2) t dt`.
///
/// Public so that the closed forms can be cross-checked against it.
pub fn es_by_quantile_integration(d: &Distribution, alpha: f64) -> Result<f64> {
    check_alpha(alpha)?;
    // the substitution u = a t^2 absorbs an integrable quantile singularity
    let integrand = |t: f64| {
        let u = (alpha * t * t).max(f64::MIN_POSITIVE);
        let q = d
            .lower_quantile(u)
            .expect("quantile evaluation inside (0,1)");
        -2.0 * q * t
    };
    let v = integrate_adaptive(&integrand, 0.0, 1.0, 1e-10)?;
    if !v.is_finite() {
        return Err(Error::Integrability(format!(
            "tail integral diverged at alpha {alpha}"
        )));
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dist::Distribution;

    #[test]
    fn var_known_values() {
        let n = Distribution::StandardNormal;
        assert!((value_at_risk(&n, 0.01).unwrap() - 2.326348).abs() < 1e-5);
        let t = Distribution::standardized_student_t(3.0).unwrap();
        assert!((value_at_risk(&t, 0.01).unwrap() - 2.621574).abs() < 1e-4);
    }

    #[test]
    fn var_alpha_guard() {
        let n = Distribution::StandardNormal;
        assert!(value_at_risk(&n, 1e-7).is_err());
        assert!(value_at_risk(&n, 1.0 - 1e-7).is_err());
    }

    #[test]
    fn es_normal_closed_form() {
        let n = Distribution::StandardNormal;
        assert!((expected_shortfall(&n, 0.01).unwrap() - 2.665214).abs() < 1e-5);
    }

    #[test]
    fn es_student_t_closed_form() {
        let t = Distribution::standardized_student_t(3.0).unwrap();
        let es = expected_shortfall(&t, 0.01).unwrap();
        assert!((es - 4.0434).abs() < 1e-3, "es={es}");
        // cross-check against the quadrature route
        let num = es_by_quantile_integration(&t, 0.01).unwrap();
        assert!((es - num).abs() < 1e-8, "closed {es} vs quadrature {num}");
    }

    #[test]
    fn es_two_point_exact() {
        // all quantiles below u = 0.5 equal -1
        let d = Distribution::two_point(-1.0, 1.0, 0.5).unwrap();
        assert_eq!(expected_shortfall(&d, 0.25).unwrap(), 1.0);
        // straddling the atom: ES_0.6 = -(0.5*(-1) + 0.1*1)/0.6
        let es = expected_shortfall(&d, 0.6).unwrap();
        assert!((es - 0.4 / 0.6).abs() < 1e-15);
    }

    #[test]
    fn es_affine_translation_and_scaling() {
        let n = Distribution::StandardNormal;
        let base = expected_shortfall(&n, 0.05).unwrap();
        let d = Distribution::affine(n, -1.0, 2.0).unwrap();
        let es = expected_shortfall(&d, 0.05).unwrap();
        assert!((es - (2.0 * base + 1.0)).abs() < 1e-12);
    }

    #[test]
    fn quadrature_matches_gaussian_closed_form() {
        let n = Distribution::StandardNormal;
        for &a in &[0.001, 0.01, 0.05, 0.1] {
            let closed = expected_shortfall(&n, a).unwrap();
            let num = es_by_quantile_integration(&n, a).unwrap();
            assert!((closed - num).abs() < 1e-8, "alpha={a}");
        }
    }

    #[test]
    fn es_dominates_var() {
        let laws = [
            Distribution::StandardNormal,
            Distribution::standardized_student_t(3.0).unwrap(),
            Distribution::two_point(-2.0, 0.5, 0.2).unwrap(),
        ];
        for d in &laws {
            for &a in &[0.01, 0.05, 0.1, 0.25] {
                let var = value_at_risk(d, a).unwrap();
                let es = expected_shortfall(d, a).unwrap();
                assert!(es >= var - 1e-12, "{d:?} alpha={a}");
            }
        }
    }
}
