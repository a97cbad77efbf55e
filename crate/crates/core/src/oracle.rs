//! Brute-force verification sweeps over two- and three-point laws in the
//! standardized moment class.
//!
//! These sweeps are deliberately independent of the closed forms they
//! corroborate: quantiles come straight from the lower-quantile definition
//! on atom lists and the atomic ES is summed in place.

use crate::dist::Distribution;
use crate::{Error, Result};

/// Constraints and resolution of a sweep.
#[derive(Debug, Clone)]
pub struct SearchConstraints {
    pub mean: f64,
    pub stdev: f64,
    pub skewness: Option<f64>,
    /// 2 for two-point sweeps, 3 for the skewness experiment.
    pub atom_budget: u8,
    /// Resolution of the mass sweep; at least 1000.
    pub p_grid: usize,
}

impl Default for SearchConstraints {
    fn default() -> Self {
        SearchConstraints {
            mean: 0.0,
            stdev: 1.0,
            skewness: None,
            atom_budget: 2,
            p_grid: 100_000,
        }
    }
}

impl SearchConstraints {
    fn validate(&self) -> Result<()> {
        if self.atom_budget != 2 && self.atom_budget != 3 {
            return Err(Error::Domain(format!(
                "atom budget {} not in {{2, 3}}",
                self.atom_budget
            )));
        }
        if self.p_grid < 1000 {
            return Err(Error::Domain(format!("p_grid {} < 1000", self.p_grid)));
        }
        Ok(())
    }
}

/// The unique two-atom law with mean 0 and variance 1:
/// mass `p` at `-sqrt((1-p)/p)` and mass `1-p` at `sqrt(p/(1-p))`.
pub fn two_point(p: f64) -> Result<Distribution> {
    if !(0.0 < p && p < 1.0) {
        return Err(Error::Domain(format!("two-point mass {p} outside (0,1)")));
    }
    let a = -((1.0 - p) / p).sqrt();
    let b = (p / (1.0 - p)).sqrt();
    Distribution::two_point(a, b, p)
}

/// Closed-form skewness of the standardized two-point law with lower mass `p`.
pub fn two_point_skewness(p: f64) -> f64 {
    (2.0 * p - 1.0) / (p * (1.0 - p)).sqrt()
}

// Logarithmic grid over (p_min, 1-p_min), dense near both ends; the level
// alpha itself is inserted so the attaining law is always sampled.
fn mass_grid(n: usize, alpha: f64) -> Vec<f64> {
    const P_MIN: f64 = 1e-10;
    let half = n / 2;
    let lo_log = P_MIN.log10();
    let hi_log = 0.5f64.log10();
    let mut grid = Vec::with_capacity(n + 2);
    for i in 0..half {
        let t = i as f64 / (half - 1) as f64;
        let p = 10f64.powf(lo_log + t * (hi_log - lo_log));
        grid.push(p);
        grid.push(1.0 - p);
    }
    if alpha > P_MIN && alpha < 1.0 - P_MIN {
        grid.push(alpha);
    }
    grid.sort_by(f64::total_cmp);
    grid.dedup();
    grid
}

// q_alpha of the standardized two-point law, straight from the lower
// quantile definition: the lower atom carries mass p.
fn two_point_quantile(p: f64, alpha: f64) -> f64 {
    if p >= alpha {
        -((1.0 - p) / p).sqrt()
    } else {
        (p / (1.0 - p)).sqrt()
    }
}

// Exact atomic ES of the standardized two-point law.
fn two_point_es(p: f64, alpha: f64) -> f64 {
    if p >= alpha {
        ((1.0 - p) / p).sqrt()
    } else {
        (1.0 - alpha) / alpha * (p / (1.0 - p)).sqrt()
    }
}

/// Extreme quantiles found by sweeping the two-point family.
pub fn search_extremal_var(alpha: f64, c: &SearchConstraints) -> Result<(f64, f64)> {
    c.validate()?;
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0,1)")));
    }
    let mut inf = f64::INFINITY;
    let mut sup = f64::NEG_INFINITY;
    for p in mass_grid(c.p_grid, alpha) {
        let q = two_point_quantile(p, alpha);
        inf = inf.min(q);
        sup = sup.max(q);
    }
    Ok((inf, sup))
}

/// Extreme Expected Shortfalls found by sweeping the two-point family.
pub fn search_extremal_es(alpha: f64, c: &SearchConstraints) -> Result<(f64, f64)> {
    c.validate()?;
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0,1)")));
    }
    let mut inf = f64::INFINITY;
    let mut sup = f64::NEG_INFINITY;
    for p in mass_grid(c.p_grid, alpha) {
        let es = two_point_es(p, alpha);
        inf = inf.min(es);
        sup = sup.max(es);
    }
    Ok((inf, sup))
}

/// One row of the skewness experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkewnessRow {
    pub target_skewness: f64,
    pub inf_quantile: f64,
    pub sup_quantile: f64,
    /// Number of matching three-point laws sampled.
    pub laws_found: usize,
}

/// Sweeps three-point laws matching mean 0, variance 1 and each target
/// skewness, reporting the extremal quantiles found. The bounds are expected
/// to approach the unconstrained two-point extremes as the grid refines.
pub fn skewness_experiment(
    alpha: f64,
    targets: &[f64],
    c: &SearchConstraints,
) -> Result<Vec<SkewnessRow>> {
    if c.atom_budget != 3 {
        return Err(Error::Domain(
            "skewness experiment needs atom_budget = 3".into(),
        ));
    }
    if !(0.0 < alpha && alpha < 1.0) {
        return Err(Error::Domain(format!("alpha {alpha} outside (0,1)")));
    }
    // outer-atom grid; resolution grows with p_grid
    let side = ((c.p_grid as f64).sqrt() as usize).clamp(40, 400);
    let negatives = log_grid(-60.0, -1e-3, side);
    let positives = log_grid(1e-3, 60.0, side);

    let mut rows = Vec::with_capacity(targets.len());
    for &xi in targets {
        let mut inf = f64::INFINITY;
        let mut sup = f64::NEG_INFINITY;
        let mut found = 0usize;
        for &x1 in &negatives {
            for &x3 in &positives {
                if let Some(law) = match_skewness(x1, x3, xi) {
                    found += 1;
                    let q = three_point_quantile(&law, alpha);
                    inf = inf.min(q);
                    sup = sup.max(q);
                }
            }
        }
        if found == 0 {
            return Err(Error::InfeasibleConstraints(format!(
                "no three-point law with skewness {xi} on the grid"
            )));
        }
        rows.push(SkewnessRow {
            target_skewness: xi,
            inf_quantile: inf,
            sup_quantile: sup,
            laws_found: found,
        });
    }
    Ok(rows)
}

fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    // log-spaced magnitudes between |lo| and |hi| keeping the sign
    let (a, b, sign) = if lo < 0.0 {
        (hi.abs(), lo.abs(), -1.0)
    } else {
        (lo, hi, 1.0)
    };
    let la = a.ln();
    let lb = b.ln();
    (0..n)
        .map(|i| {
            let t = i as f64 / (n - 1) as f64;
            sign * (la + t * (lb - la)).exp()
        })
        .collect()
}

#[derive(Debug, Clone, Copy)]
struct ThreePoint {
    x: [f64; 3],
    p: [f64; 3],
}

// Masses of the law with atoms (x1, x2, x3), mean 0 and variance 1:
// p_i = (1 + x_j x_k) / ((x_i - x_j)(x_i - x_k)). Feasible iff all lie in
// [0, 1].
fn moment_masses(x1: f64, x2: f64, x3: f64) -> Option<[f64; 3]> {
    let p1 = (1.0 + x2 * x3) / ((x1 - x2) * (x1 - x3));
    let p2 = (1.0 + x1 * x3) / ((x2 - x1) * (x2 - x3));
    let p3 = (1.0 + x1 * x2) / ((x3 - x1) * (x3 - x2));
    let eps = -1e-12;
    if p1 >= eps && p2 >= eps && p3 >= eps {
        Some([p1.max(0.0), p2.max(0.0), p3.max(0.0)])
    } else {
        None
    }
}

fn skewness_of(x1: f64, x2: f64, x3: f64, p: &[f64; 3]) -> f64 {
    p[0] * x1.powi(3) + p[1] * x2.powi(3) + p[2] * x3.powi(3)
}

// For fixed outer atoms, solve for the middle atom x2 giving the target
// skewness, by scanning for a sign change and bisecting.
fn match_skewness(x1: f64, x3: f64, xi: f64) -> Option<ThreePoint> {
    const SCAN: usize = 64;
    let g = |x2: f64| moment_masses(x1, x2, x3).map(|p| (skewness_of(x1, x2, x3, &p) - xi, p));
    let span = x3 - x1;
    let mut prev: Option<(f64, f64)> = None;
    for i in 1..SCAN {
        let x2 = x1 + span * i as f64 / SCAN as f64;
        let Some((val, _)) = g(x2) else {
            prev = None;
            continue;
        };
        if val.abs() <= 1e-6 {
            // already within the matching tolerance (covers the degenerate
            // case where the middle mass vanishes identically)
            let p = moment_masses(x1, x2, x3)?;
            return Some(ThreePoint {
                x: [x1, x2, x3],
                p,
            });
        }
        if let Some((px2, pval)) = prev {
            if pval.signum() != val.signum() {
                // bisect on the feasible segment
                let (mut lo, mut hi, flo) = (px2, x2, pval);
                for _ in 0..100 {
                    let mid = 0.5 * (lo + hi);
                    let Some((fm, _)) = g(mid) else { return None };
                    if fm.signum() == flo.signum() {
                        lo = mid;
                    } else {
                        hi = mid;
                    }
                    if hi - lo < 1e-12 * span {
                        break;
                    }
                }
                let x2 = 0.5 * (lo + hi);
                let (res, p) = g(x2)?;
                if res.abs() <= 1e-6 {
                    return Some(ThreePoint {
                        x: [x1, x2, x3],
                        p,
                    });
                }
                return None;
            }
        }
        prev = Some((x2, val));
    }
    None
}

fn three_point_quantile(law: &ThreePoint, alpha: f64) -> f64 {
    let mut cum = 0.0;
    for i in 0..3 {
        cum += law.p[i];
        if cum >= alpha {
            return law.x[i];
        }
    }
    law.x[2]
}
