//! Evaluable probability laws: standard normal, (standardized) Student-t,
//! two-point and point-mass laws, finite mixtures and affine transforms.
//!
//! Quantiles follow the lower convention `q_u = inf{x : F(x) >= u}`
//! throughout, which matters for the atomic laws.

use crate::numerics::lower_quantile_from_cdf;
use crate::special;
use crate::{Error, Result};

/// Minimal excess over 2 required of Student-t degrees of freedom, so that
/// the variance is finite and standardization is well defined.
const NU_MARGIN: f64 = 1e-9;

/// Tolerance used when deciding a law is already standard.
const STD_TOL: f64 = 1e-12;

/// An evaluable probability distribution.
#[derive(Debug, Clone, PartialEq)]
pub enum Distribution {
    StandardNormal,
    /// Student-t with `nu` degrees of freedom; when `standardized` the law is
    /// rescaled by `sqrt((nu-2)/nu)` so that its standard deviation is 1.
    StudentT { nu: f64, standardized: bool },
    /// Mass `p_lower` at `lower` and `1 - p_lower` at `upper`, `lower < upper`.
    TwoPoint { lower: f64, upper: f64, p_lower: f64 },
    /// Unit mass at a single point.
    PointMass { at: f64 },
    Mixture {
        components: Vec<Distribution>,
        weights: Vec<f64>,
    },
    /// `scale * base + location`, `scale > 0`.
    Affine {
        base: Box<Distribution>,
        location: f64,
        scale: f64,
    },
    /// The law attaining the sharp ES bound on the standardized moment class:
    /// cdf `(1 + x/sqrt(1+x^2))/2`. Mean 0, infinite variance.
    StopLossMax,
}

impl Distribution {
    /// Raw Student-t law; `nu` must exceed 2 so the variance is finite.
    pub fn student_t(nu: f64) -> Result<Self> {
        if !(nu > 2.0 + NU_MARGIN) {
            return Err(Error::Moment(format!(
                "student-t requires nu > 2 (finite variance), got {nu}"
            )));
        }
        Ok(Distribution::StudentT {
            nu,
            standardized: false,
        })
    }

    /// Student-t rescaled to unit standard deviation.
    pub fn standardized_student_t(nu: f64) -> Result<Self> {
        let Distribution::StudentT { nu, .. } = Self::student_t(nu)? else {
            unreachable!()
        };
        Ok(Distribution::StudentT {
            nu,
            standardized: true,
        })
    }

    pub fn two_point(lower: f64, upper: f64, p_lower: f64) -> Result<Self> {
        if !(lower < upper) {
            return Err(Error::Domain(format!(
                "two-point law needs lower < upper, got {lower}, {upper}"
            )));
        }
        if !(0.0 < p_lower && p_lower < 1.0) {
            return Err(Error::Domain(format!(
                "two-point mass {p_lower} outside (0,1)"
            )));
        }
        Ok(Distribution::TwoPoint {
            lower,
            upper,
            p_lower,
        })
    }

    pub fn point_mass(at: f64) -> Self {
        Distribution::PointMass { at }
    }

    pub fn mixture(components: Vec<Distribution>, weights: Vec<f64>) -> Result<Self> {
        if components.is_empty() || components.len() != weights.len() {
            return Err(Error::Domain(
                "mixture needs one weight per component".into(),
            ));
        }
        if weights.iter().any(|&w| !(0.0..=1.0).contains(&w)) {
            return Err(Error::Domain("mixture weights must lie in [0,1]".into()));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "mixture weights sum to {total}, expected 1"
            )));
        }
        Ok(Distribution::Mixture {
            components,
            weights,
        })
    }

    pub fn affine(base: Distribution, location: f64, scale: f64) -> Result<Self> {
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::Domain(format!("affine scale {scale} must be > 0")));
        }
        if !location.is_finite() {
            return Err(Error::Domain(format!("affine location {location}")));
        }
        Ok(Distribution::Affine {
            base: Box::new(base),
            location,
            scale,
        })
    }

    fn t_scale(nu: f64, standardized: bool) -> f64 {
        // standardized t is T / sqrt(nu/(nu-2))
        if standardized {
            (nu / (nu - 2.0)).sqrt()
        } else {
            1.0
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Distribution::StandardNormal => special::norm_cdf(x),
            Distribution::StudentT { nu, standardized } => {
                special::student_t_cdf(x * Self::t_scale(*nu, *standardized), *nu)
            }
            Distribution::TwoPoint {
                lower,
                upper,
                p_lower,
            } => {
                if x < *lower {
                    0.0
                } else if x < *upper {
                    *p_lower
                } else {
                    1.0
                }
            }
            Distribution::PointMass { at } => {
                if x < *at {
                    0.0
                } else {
                    1.0
                }
            }
            Distribution::Mixture {
                components,
                weights,
            } => components
                .iter()
                .zip(weights)
                .map(|(c, w)| w * c.cdf(x))
                .sum(),
            Distribution::Affine {
                base,
                location,
                scale,
            } => base.cdf((x - location) / scale),
            Distribution::StopLossMax => 0.5 * (1.0 + x / (1.0 + x * x).sqrt()),
        }
    }

    /// Lower quantile `inf{x : F(x) >= u}`, `u` in (0, 1).
    pub fn lower_quantile(&self, u: f64) -> Result<f64> {
        if !(0.0 < u && u < 1.0) {
            return Err(Error::Domain(format!("quantile level {u} outside (0,1)")));
        }
        Ok(match self {
            Distribution::StandardNormal => special::norm_quantile(u),
            Distribution::StudentT { nu, standardized } => {
                special::student_t_quantile(u, *nu) / Self::t_scale(*nu, *standardized)
            }
            Distribution::TwoPoint {
                lower,
                upper,
                p_lower,
            } => {
                // u exactly at the lower mass still maps to the lower atom
                if u <= *p_lower {
                    *lower
                } else {
                    *upper
                }
            }
            Distribution::PointMass { at } => *at,
            Distribution::Mixture { .. } => {
                lower_quantile_from_cdf(&|x| self.cdf(x), u, 1e-12)?
            }
            Distribution::Affine {
                base,
                location,
                scale,
            } => location + scale * base.lower_quantile(u)?,
            Distribution::StopLossMax => (2.0 * u - 1.0) / (2.0 * (u * (1.0 - u)).sqrt()),
        })
    }

    /// Density, when the law is absolutely continuous.
    pub fn density(&self, x: f64) -> Option<f64> {
        match self {
            Distribution::StandardNormal => Some(special::norm_pdf(x)),
            Distribution::StudentT { nu, standardized } => {
                let s = Self::t_scale(*nu, *standardized);
                Some(s * special::student_t_pdf(x * s, *nu))
            }
            Distribution::TwoPoint { .. } | Distribution::PointMass { .. } => None,
            Distribution::Mixture {
                components,
                weights,
            } => components
                .iter()
                .zip(weights)
                .map(|(c, w)| c.density(x).map(|d| w * d))
                .sum::<Option<f64>>(),
            Distribution::Affine {
                base,
                location,
                scale,
            } => base.density((x - location) / scale).map(|d| d / scale),
            Distribution::StopLossMax => Some(0.5 * (1.0 + x * x).powf(-1.5)),
        }
    }

    pub fn is_absolutely_continuous(&self) -> bool {
        match self {
            Distribution::StandardNormal
            | Distribution::StudentT { .. }
            | Distribution::StopLossMax => true,
            Distribution::TwoPoint { .. } | Distribution::PointMass { .. } => false,
            Distribution::Mixture { components, .. } => {
                components.iter().all(|c| c.is_absolutely_continuous())
            }
            Distribution::Affine { base, .. } => base.is_absolutely_continuous(),
        }
    }

    pub fn mean(&self) -> f64 {
        match self {
            Distribution::StandardNormal | Distribution::StopLossMax => 0.0,
            Distribution::StudentT { .. } => 0.0,
            Distribution::TwoPoint {
                lower,
                upper,
                p_lower,
            } => p_lower * lower + (1.0 - p_lower) * upper,
            Distribution::PointMass { at } => *at,
            Distribution::Mixture {
                components,
                weights,
            } => components
                .iter()
                .zip(weights)
                .map(|(c, w)| w * c.mean())
                .sum(),
            Distribution::Affine {
                base,
                location,
                scale,
            } => location + scale * base.mean(),
        }
    }

    pub fn stdev(&self) -> f64 {
        match self {
            Distribution::StandardNormal => 1.0,
            Distribution::StudentT { nu, standardized } => {
                if *standardized {
                    1.0
                } else {
                    (nu / (nu - 2.0)).sqrt()
                }
            }
            Distribution::TwoPoint {
                lower,
                upper,
                p_lower,
            } => {
                let m = self.mean();
                let m2 = p_lower * lower * lower + (1.0 - p_lower) * upper * upper;
                (m2 - m * m).max(0.0).sqrt()
            }
            Distribution::PointMass { .. } => 0.0,
            Distribution::Mixture {
                components,
                weights,
            } => {
                let m = self.mean();
                let m2: f64 = components
                    .iter()
                    .zip(weights)
                    .map(|(c, w)| {
                        let cm = c.mean();
                        let cs = c.stdev();
                        w * (cs * cs + cm * cm)
                    })
                    .sum();
                (m2 - m * m).max(0.0).sqrt()
            }
            Distribution::Affine { base, scale, .. } => scale * base.stdev(),
            Distribution::StopLossMax => f64::INFINITY,
        }
    }

    /// Atom list `(value, mass)` sorted by value, for purely atomic laws.
    pub(crate) fn atoms(&self) -> Option<Vec<(f64, f64)>> {
        fn collect(d: &Distribution, weight: f64, out: &mut Vec<(f64, f64)>) -> bool {
            match d {
                Distribution::TwoPoint {
                    lower,
                    upper,
                    p_lower,
                } => {
                    out.push((*lower, weight * p_lower));
                    out.push((*upper, weight * (1.0 - p_lower)));
                    true
                }
                Distribution::PointMass { at } => {
                    out.push((*at, weight));
                    true
                }
                Distribution::Mixture {
                    components,
                    weights,
                } => components
                    .iter()
                    .zip(weights)
                    .all(|(c, w)| collect(c, weight * w, out)),
                Distribution::Affine {
                    base,
                    location,
                    scale,
                } => {
                    let mut inner = Vec::new();
                    if !collect(base, weight, &mut inner) {
                        return false;
                    }
                    out.extend(inner.into_iter().map(|(x, m)| (location + scale * x, m)));
                    true
                }
                _ => false,
            }
        }
        let mut atoms = Vec::new();
        if collect(self, 1.0, &mut atoms) {
            atoms.sort_by(|a, b| a.0.total_cmp(&b.0));
            Some(atoms)
        } else {
            None
        }
    }
}

/// Class of all laws with the given mean and standard deviation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentClass {
    pub mean: f64,
    pub stdev: f64,
}

impl MomentClass {
    pub fn new(mean: f64, stdev: f64) -> Result<Self> {
        if !(stdev > 0.0 && stdev.is_finite() && mean.is_finite()) {
            return Err(Error::Moment(format!(
                "moment class needs finite mean and stdev > 0, got ({mean}, {stdev})"
            )));
        }
        Ok(MomentClass { mean, stdev })
    }

    /// The standardized class.
    pub fn standard() -> Self {
        MomentClass {
            mean: 0.0,
            stdev: 1.0,
        }
    }
}

/// Affine rescaling of `d` to mean 0 and standard deviation 1.
///
/// Already-standard laws come back unchanged, and a single affine layer is
/// collapsed rather than wrapped again.
pub fn standardize(d: &Distribution) -> Result<Distribution> {
    let m = d.mean();
    let s = d.stdev();
    if !(s.is_finite() && s > 0.0) || !m.is_finite() {
        return Err(Error::Moment(format!(
            "cannot standardize: mean {m}, stdev {s}"
        )));
    }
    if m.abs() < STD_TOL && (s - 1.0).abs() < STD_TOL {
        return Ok(d.clone());
    }
    if let Distribution::Affine {
        base,
        location,
        scale,
    } = d
    {
        // (scale*B + location - m)/s
        let new_scale = scale / s;
        let new_location = (location - m) / s;
        if new_location.abs() < STD_TOL && (new_scale - 1.0).abs() < STD_TOL {
            return Ok((**base).clone());
        }
        return Distribution::affine((**base).clone(), new_location, new_scale);
    }
    Distribution::affine(d.clone(), -m / s, 1.0 / s)
}

/// Pointwise mixture of distribution functions:
/// `(1-theta) F0(x) + theta FY(x)`.
///
/// This mixes cdfs, not random variables.
pub fn mixture_cdf(f0: &Distribution, fy: &Distribution, theta: f64, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&theta) {
        return Err(Error::Domain(format!("mixing weight {theta} outside [0,1]")));
    }
    Ok((1.0 - theta) * f0.cdf(x) + theta * fy.cdf(x))
}
