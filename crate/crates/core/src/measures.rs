//! Absolute, relative and local measures of model risk.
//!
//! `AM = sup/rho0 - 1`, `RM = (sup - rho0)/(sup - inf)` and `M_K = sup - rho0`
//! for a reference risk `rho0` within the attainable range `[inf, sup]` of a
//! class of alternative laws. The local measure `LM` is the limit of `RM`
//! over a family of perturbation sets shrinking onto the reference law.

use crate::dist::{Distribution, MomentClass};
use crate::envelope;
use crate::numerics::bisect_root;
use crate::riskmeasure::{expected_shortfall, value_at_risk};
use crate::{Error, Result};

/// Snap width for `rho0` sitting on an attained extreme.
const BOUNDARY_TOL: f64 = 1e-12;

/// A class of alternative laws around (or containing) the reference.
#[derive(Debug, Clone)]
pub enum PerturbationFamily {
    /// All laws with the given first two moments.
    Moments(MomentClass),
    /// Kolmogorov (uniform-distance) ball around `center`.
    KolmogorovBall { center: Distribution, radius: f64 },
    /// Levy-distance ball around `center`.
    LevyBall { center: Distribution, radius: f64 },
    /// Mixtures `(1-theta) F0 + theta FY` with `theta <= radius` and `FY`
    /// standardized; `center` must be standardized.
    MixtureClass { center: Distribution, radius: f64 },
}

/// The three scalar measures together with the inputs they came from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelRiskReport {
    pub rho0: f64,
    pub rho_sup: f64,
    pub rho_inf: f64,
    pub am: f64,
    pub rm: f64,
    /// Worst-case excess in currency units (Kerkhof's measure).
    pub m_k: f64,
}

/// Builds a report from the reference risk and the attainable range.
pub fn report(rho0: f64, rho_sup: f64, rho_inf: f64) -> Result<ModelRiskReport> {
    if !(rho0.is_finite() && rho_sup.is_finite() && rho_inf.is_finite()) {
        return Err(Error::Domain("non-finite risk inputs".into()));
    }
    if rho0 <= 0.0 {
        return Err(Error::NonPositiveReference(format!("rho0 = {rho0}")));
    }
    if rho_sup <= rho_inf {
        return Err(Error::DegenerateRange(format!(
            "sup {rho_sup} <= inf {rho_inf}"
        )));
    }
    if rho0 < rho_inf - BOUNDARY_TOL || rho0 > rho_sup + BOUNDARY_TOL {
        return Err(Error::OutOfRange(format!(
            "rho0 {rho0} outside [{rho_inf}, {rho_sup}]"
        )));
    }
    let range = rho_sup - rho_inf;
    let (am, rm, m_k) = if (rho0 - rho_sup).abs() <= BOUNDARY_TOL {
        (0.0, 0.0, 0.0)
    } else if (rho0 - rho_inf).abs() <= BOUNDARY_TOL {
        (rho_sup / rho0 - 1.0, 1.0, rho_sup - rho0)
    } else {
        (
            rho_sup / rho0 - 1.0,
            (rho_sup - rho0) / range,
            rho_sup - rho0,
        )
    };
    Ok(ModelRiskReport {
        rho0,
        rho_sup,
        rho_inf,
        am,
        rm,
        m_k,
    })
}

fn require_standardized(x0: &Distribution) -> Result<()> {
    if x0.mean().abs() > 1e-6 || (x0.stdev() - 1.0).abs() > 1e-6 {
        return Err(Error::Moment(format!(
            "reference must be standardized (mean {}, stdev {})",
            x0.mean(),
            x0.stdev()
        )));
    }
    Ok(())
}

/// Model risk of `VaR_a` over the standardized moment class:
/// `sup = sqrt((1-a)/a)`, `inf = -sqrt(a/(1-a))`.
pub fn moment_class_var_report(x0: &Distribution, alpha: f64) -> Result<ModelRiskReport> {
    require_standardized(x0)?;
    let rho0 = value_at_risk(x0, alpha)?;
    let sup = ((1.0 - alpha) / alpha).sqrt();
    let inf = -(alpha / (1.0 - alpha)).sqrt();
    report(rho0, sup, inf)
}

/// Model risk of `ES_a` over the standardized moment class:
/// `sup = sqrt((1-a)/a)`, `inf = 0`.
pub fn moment_class_es_report(x0: &Distribution, alpha: f64) -> Result<ModelRiskReport> {
    require_standardized(x0)?;
    let rho0 = expected_shortfall(x0, alpha)?;
    let sup = ((1.0 - alpha) / alpha).sqrt();
    report(rho0, sup, 0.0)
}

/// Sign pattern of VaR over the moment class with the given moments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceptability {
    /// Every law in the class has negative risk.
    AllAcceptable,
    /// Every law has positive risk.
    AllNonAcceptable,
    /// The class contains both signs.
    Mixed,
}

pub fn acceptability(mu: f64, sigma: f64, alpha: f64) -> Acceptability {
    let s2 = sigma * sigma;
    if mu > 0.0 && alpha > s2 / (mu * mu + s2) {
        Acceptability::AllAcceptable
    } else if mu < 0.0 && alpha < mu * mu / (mu * mu + s2) {
        Acceptability::AllNonAcceptable
    } else {
        Acceptability::Mixed
    }
}

/// Worst and best VaR over a family at finite radius: `(inf_var, sup_var)`.
pub fn finite_radius_var_extremes(
    family: &PerturbationFamily,
    alpha: f64,
) -> Result<(f64, f64)> {
    match family {
        PerturbationFamily::Moments(mc) => {
            // affine image of the standardized extremes
            let sup = mc.stdev * ((1.0 - alpha) / alpha).sqrt() - mc.mean;
            let inf = -mc.stdev * (alpha / (1.0 - alpha)).sqrt() - mc.mean;
            Ok((inf, sup))
        }
        PerturbationFamily::KolmogorovBall { center, radius } => {
            check_ball_radius(*radius, alpha)?;
            let q_hi = center.lower_quantile(alpha + radius)?;
            let q_lo = center.lower_quantile(alpha - radius)?;
            Ok((-q_hi, -q_lo))
        }
        PerturbationFamily::LevyBall { center, radius } => {
            check_ball_radius(*radius, alpha)?;
            let q_hi = center.lower_quantile(alpha + radius)?;
            let q_lo = center.lower_quantile(alpha - radius)?;
            Ok((-q_hi - radius, -q_lo + radius))
        }
        PerturbationFamily::MixtureClass { center, radius } => {
            require_standardized(center)?;
            if !(0.0 < *radius && *radius < 1.0) {
                return Err(Error::Domain(format!("mixture radius {radius}")));
            }
            let inf = value_at_risk(center, alpha / (1.0 - radius))?;
            let sup = mixture_sup_var(center, *radius, alpha)?;
            Ok((inf, sup))
        }
    }
}

fn check_ball_radius(radius: f64, alpha: f64) -> Result<()> {
    if radius <= 0.0 {
        return Err(Error::Domain(format!("radius {radius} must be > 0")));
    }
    if radius >= alpha.min(1.0 - alpha) {
        return Err(Error::RadiusTooLarge(format!(
            "radius {radius} >= min(alpha, 1-alpha) at alpha {alpha}"
        )));
    }
    Ok(())
}

// Unique root r of (1-eps) F0(-r) + eps/(1+r^2) = alpha; the left side is
// strictly decreasing in r over r >= 0 provided alpha <= (1-eps) F0(0).
fn mixture_sup_var(center: &Distribution, eps: f64, alpha: f64) -> Result<f64> {
    let g = |r: f64| (1.0 - eps) * center.cdf(-r) + eps / (1.0 + r * r) - alpha;
    let mut hi = 1.0;
    let mut guard = 0;
    while g(hi) > 0.0 {
        hi *= 2.0;
        guard += 1;
        if guard > 200 {
            return Err(Error::RootBracket(
                "mixture sup-VaR equation has no root; check alpha <= (1-eps) F0(0)".into(),
            ));
        }
    }
    if g(0.0) < 0.0 {
        return Err(Error::RootBracket(
            "mixture sup-VaR equation already below alpha at r = 0".into(),
        ));
    }
    bisect_root(&g, 0.0, hi, 1e-13)
}

/// Shrinking-family kinds with a proved local measure.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LocalFamilyKind {
    KolmogorovBall,
    LevyBall,
    MixtureClass,
}

/// Local measure of model risk for `VaR_a` at `x0` under the shrinking
/// family: 1/2 for the distance balls, `1 - a (1 + VaR^2)` for mixtures.
pub fn local_measure(kind: LocalFamilyKind, x0: &Distribution, alpha: f64) -> Result<f64> {
    if !x0.is_absolutely_continuous() {
        return Err(Error::Precondition(
            "local measure requires an absolutely continuous reference".into(),
        ));
    }
    match kind {
        LocalFamilyKind::KolmogorovBall | LocalFamilyKind::LevyBall => Ok(0.5),
        LocalFamilyKind::MixtureClass => {
            require_standardized(x0)?;
            let var = value_at_risk(x0, alpha)?;
            if var < 0.0 {
                return Err(Error::Precondition(format!(
                    "mixture local measure needs VaR >= 0, got {var}"
                )));
            }
            Ok(1.0 - alpha * (1.0 + var * var))
        }
    }
}

/// Finite-radius RM of `VaR_a` for a family that carries a center.
pub fn finite_radius_rm(family: &PerturbationFamily, alpha: f64) -> Result<f64> {
    let center = match family {
        PerturbationFamily::Moments(_) => {
            return Err(Error::Precondition(
                "finite-radius RM needs a family with a center".into(),
            ))
        }
        PerturbationFamily::KolmogorovBall { center, .. }
        | PerturbationFamily::LevyBall { center, .. }
        | PerturbationFamily::MixtureClass { center, .. } => center,
    };
    let rho0 = value_at_risk(center, alpha)?;
    let (inf, sup) = finite_radius_var_extremes(family, alpha)?;
    if sup <= inf {
        return Err(Error::DegenerateRange(format!("sup {sup} <= inf {inf}")));
    }
    Ok((sup - rho0) / (sup - inf))
}

/// Numeric corroboration of the local measure: RM evaluated at each radius.
///
/// Diagnostic only; the proved closed forms in [`local_measure`] are the
/// reference, because the 0/0 limit loses precision for tiny radii.
pub fn local_measure_sweep(
    kind: LocalFamilyKind,
    x0: &Distribution,
    alpha: f64,
    radii: &[f64],
) -> Result<Vec<(f64, f64)>> {
    radii
        .iter()
        .map(|&eps| {
            let family = match kind {
                LocalFamilyKind::KolmogorovBall => PerturbationFamily::KolmogorovBall {
                    center: x0.clone(),
                    radius: eps,
                },
                LocalFamilyKind::LevyBall => PerturbationFamily::LevyBall {
                    center: x0.clone(),
                    radius: eps,
                },
                LocalFamilyKind::MixtureClass => PerturbationFamily::MixtureClass {
                    center: x0.clone(),
                    radius: eps,
                },
            };
            Ok((eps, finite_radius_rm(&family, alpha)?))
        })
        .collect()
}

// Envelope counterpart used by tests to confirm Lemma-based consistency of
// the finite-radius extremes.
pub fn family_envelope(family: &PerturbationFamily) -> Result<envelope::EnvelopePair> {
    match family {
        PerturbationFamily::Moments(_) => Ok(envelope::chebyshev_markov_envelope()),
        PerturbationFamily::KolmogorovBall { center, radius } => {
            envelope::kolmogorov_ball_envelope(center, *radius)
        }
        PerturbationFamily::LevyBall { center, radius } => {
            envelope::levy_ball_envelope(center, *radius)
        }
        PerturbationFamily::MixtureClass { center, radius } => {
            envelope::mixture_class_envelope(center, *radius)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn report_boundary_cases() {
        let r = report(5.0, 5.0, 1.0).unwrap();
        assert_eq!((r.am, r.rm, r.m_k), (0.0, 0.0, 0.0));
        let r = report(1.0, 5.0, 1.0).unwrap();
        assert_eq!(r.rm, 1.0);
        assert!((r.am - 4.0).abs() < 1e-15);
    }

    #[test]
    fn report_error_paths() {
        assert!(matches!(
            report(0.0, 1.0, -1.0),
            Err(Error::NonPositiveReference(_))
        ));
        assert!(matches!(report(1.0, 1.0, 1.0), Err(Error::DegenerateRange(_))));
        assert!(matches!(report(6.0, 5.0, 1.0), Err(Error::OutOfRange(_))));
    }

    #[test]
    fn normal_var_one_percent() {
        let r = report(2.326348, 9.949874, -0.100504).unwrap();
        assert!((r.am - 3.27703).abs() < 1e-4);
        assert!((r.rm - 0.758531).abs() < 1e-5);
    }

    #[test]
    fn moment_class_var_closed_form_rm() {
        let n = Distribution::StandardNormal;
        for &a in &[0.005, 0.01, 0.05, 0.1] {
            let r = moment_class_var_report(&n, a).unwrap();
            let var = value_at_risk(&n, a).unwrap();
            let closed = (1.0 - a) - (a * (1.0 - a)).sqrt() * var;
            assert!((r.rm - closed).abs() < 1e-10, "alpha={a}");
        }
    }

    #[test]
    fn moment_class_reports_known_values() {
        let n = Distribution::StandardNormal;
        let t = Distribution::standardized_student_t(3.0).unwrap();
        assert!((moment_class_var_report(&n, 0.01).unwrap().am - 3.27703).abs() < 1e-4);
        assert!((moment_class_var_report(&t, 0.01).unwrap().am - 2.79538).abs() < 1e-3);
        let r = moment_class_es_report(&n, 0.01).unwrap();
        assert!((r.am - 2.73325).abs() < 1e-3);
        assert!((r.rm - 0.732136).abs() < 1e-4);
        assert!((moment_class_es_report(&t, 0.01).unwrap().am - 1.4608).abs() < 5e-3);
    }

    #[test]
    fn var_at_median_is_rejected() {
        let n = Distribution::StandardNormal;
        assert!(matches!(
            moment_class_var_report(&n, 0.5),
            Err(Error::NonPositiveReference(_))
        ));
    }

    #[test]
    fn acceptability_regions() {
        assert_eq!(acceptability(0.0, 1.0, 0.3), Acceptability::Mixed);
        assert_eq!(acceptability(1.0, 1.0, 0.6), Acceptability::AllAcceptable);
        assert_eq!(acceptability(-1.0, 1.0, 0.4), Acceptability::AllNonAcceptable);
        assert_eq!(acceptability(1.0, 1.0, 0.4), Acceptability::Mixed);
    }

    #[test]
    fn vanishing_radius_recovers_reference_var() {
        let n = Distribution::StandardNormal;
        let var0 = value_at_risk(&n, 0.01).unwrap();
        for family in [
            PerturbationFamily::KolmogorovBall {
                center: n.clone(),
                radius: 1e-8,
            },
            PerturbationFamily::LevyBall {
                center: n.clone(),
                radius: 1e-8,
            },
            PerturbationFamily::MixtureClass {
                center: n.clone(),
                radius: 1e-8,
            },
        ] {
            let (inf, sup) = finite_radius_var_extremes(&family, 0.01).unwrap();
            assert!((inf - var0).abs() < 1e-5 && (sup - var0).abs() < 1e-5);
        }
    }

    #[test]
    fn mixture_extremes_at_one_percent() {
        let family = PerturbationFamily::MixtureClass {
            center: Distribution::StandardNormal,
            radius: 0.1,
        };
        let (inf, sup) = finite_radius_var_extremes(&family, 0.01).unwrap();
        assert!((inf - 2.2865).abs() < 1e-3, "inf={inf}");
        // root of 0.9 Phi(-r) + 0.1/(1+r^2) = 0.01
        assert!((sup - 3.136_061_485_75).abs() < 1e-3, "sup={sup}");
        let resid = 0.9 * Distribution::StandardNormal.cdf(-sup) + 0.1 / (1.0 + sup * sup) - 0.01;
        assert!(resid.abs() < 1e-10);
    }

    #[test]
    fn ball_radius_guard() {
        let family = PerturbationFamily::KolmogorovBall {
            center: Distribution::StandardNormal,
            radius: 0.02,
        };
        assert!(matches!(
            finite_radius_var_extremes(&family, 0.01),
            Err(Error::RadiusTooLarge(_))
        ));
    }

    #[test]
    fn local_measure_values() {
        let n = Distribution::StandardNormal;
        assert_eq!(
            local_measure(LocalFamilyKind::KolmogorovBall, &n, 0.05).unwrap(),
            0.5
        );
        assert_eq!(local_measure(LocalFamilyKind::LevyBall, &n, 0.05).unwrap(), 0.5);
        let lm = local_measure(LocalFamilyKind::MixtureClass, &n, 0.01).unwrap();
        assert!((lm - 0.935881).abs() < 1e-5, "lm={lm}");
        // VaR = 0 at the median: LM = 1 - alpha... but VaR < 0 beyond it
        assert!(local_measure(LocalFamilyKind::MixtureClass, &n, 0.7).is_err());
        let atom = Distribution::two_point(-1.0, 1.0, 0.5).unwrap();
        assert!(matches!(
            local_measure(LocalFamilyKind::KolmogorovBall, &atom, 0.05),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn local_sweep_converges_to_half() {
        let n = Distribution::StandardNormal;
        let rows =
            local_measure_sweep(LocalFamilyKind::KolmogorovBall, &n, 0.1, &[1e-2, 1e-3, 1e-4])
                .unwrap();
        let mut prev_gap = f64::INFINITY;
        for &(eps, rm) in &rows {
            let gap = (rm - 0.5).abs();
            assert!(gap < 0.02, "eps={eps} rm={rm}");
            assert!(gap <= prev_gap + 1e-12);
            prev_gap = gap;
        }
    }
}
