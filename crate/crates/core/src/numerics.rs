//! Quadrature and root-finding helpers shared by the rest of the crate.

use crate::{Error, Result};
use std::sync::OnceLock;

const GL_POINTS: usize = 64;

/// Nodes and weights of the 64-point Gauss-Legendre rule on [-1, 1].
pub fn gauss_legendre_64() -> &'static [(f64, f64)] {
    static TABLE: OnceLock<Vec<(f64, f64)>> = OnceLock::new();
    TABLE.get_or_init(|| gauleg(GL_POINTS))
}

// Newton iteration on Legendre polynomials (standard gauleg construction).
fn gauleg(n: usize) -> Vec<(f64, f64)> {
    let mut out = vec![(0.0, 0.0); n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut z = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut pp = 0.0;
        for _ in 0..100 {
            let mut p1 = 1.0;
            let mut p2 = 0.0;
            for j in 0..n {
                let p3 = p2;
                p2 = p1;
                let j = j as f64;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n as f64 * (z * p1 - p2) / (z * z - 1.0);
            let z1 = z;
            z = z1 - p1 / pp;
            if (z - z1).abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - z * z) * pp * pp);
        out[i] = (-z, w);
        out[n - 1 - i] = (z, w);
    }
    out
}

/// 64-point Gauss-Legendre estimate of the integral of `f` over [a, b].
pub fn integrate_gl64<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (b - a);
    let d = 0.5 * (b + a);
    gauss_legendre_64()
        .iter()
        .map(|&(x, w)| w * f(c * x + d))
        .sum::<f64>()
        * c
}

/// Integrates `f` over [a, b] with panel doubling (1, 2, 4, ... panels of the
/// 64-point rule) until two successive estimates agree to `rel_tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, rel_tol: f64) -> Result<f64> {
    let mut prev = integrate_gl64(f, a, b);
    let mut panels = 2usize;
    while panels <= 4096 {
        let h = (b - a) / panels as f64;
        let est: f64 = (0..panels)
            .map(|k| integrate_gl64(f, a + k as f64 * h, a + (k + 1) as f64 * h))
            .sum();
        if (est - prev).abs() <= rel_tol * est.abs().max(1e-300) {
            return Ok(est);
        }
        prev = est;
        panels *= 2;
    }
    Err(Error::Integrability(format!(
        "quadrature did not stabilise to {rel_tol:e} on [{a}, {b}]"
    )))
}

/// Root of a continuous `f` with `f(lo)` and `f(hi)` of opposite sign, by
/// bisection to absolute tolerance `tol` in x.
pub fn bisect_root<F: Fn(f64) -> f64>(f: &F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let flo = f(lo);
    let fhi = f(hi);
    if flo == 0.0 {
        return Ok(lo);
    }
    if fhi == 0.0 {
        return Ok(hi);
    }
    if flo.signum() == fhi.signum() {
        return Err(Error::RootBracket(format!(
            "no sign change on [{lo}, {hi}] (f = {flo:e}, {fhi:e})"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm == 0.0 {
            return Ok(mid);
        }
        if fm.signum() == flo.signum() {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < tol {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Lower quantile inf{x : cdf(x) >= u} of a non-decreasing `cdf`, by bracket
/// expansion and predicate bisection; resolves x to `tol`.
///
/// Works for cdfs with jumps: the returned point is within `tol` of the atom
/// satisfying the definition.
pub fn lower_quantile_from_cdf<F: Fn(f64) -> f64>(cdf: &F, u: f64, tol: f64) -> Result<f64> {
    if !(0.0 < u && u < 1.0) {
        return Err(Error::Domain(format!("quantile level {u} outside (0,1)")));
    }
    let mut lo = -1.0;
    let mut hi = 1.0;
    let mut guard = 0;
    while cdf(lo) >= u {
        lo *= 2.0;
        guard += 1;
        if guard > 2100 {
            return Err(Error::RootBracket("lower bracket expansion failed".into()));
        }
    }
    while cdf(hi) < u {
        hi *= 2.0;
        guard += 1;
        if guard > 2100 {
            return Err(Error::RootBracket("upper bracket expansion failed".into()));
        }
    }
    // invariant: cdf(lo) < u <= cdf(hi)
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if cdf(mid) >= u {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo < tol {
            break;
        }
    }
    Ok(hi)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn gl64_is_exact_on_polynomials() {
        // degree 127 would still be exact; check a few low-degree cases
        let v = integrate_gl64(&|x: f64| x * x, 0.0, 1.0);
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        let v = integrate_gl64(&|x: f64| x.powi(7) - 2.0 * x + 1.0, -1.0, 2.0);
        assert!((v - 31.875).abs() < 1e-13);
    }

    #[test]
    fn adaptive_refines_oscillatory_integrand() {
        let v = integrate_adaptive(&|x: f64| (40.0 * x).cos(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - 40f64.sin() / 40.0).abs() < 1e-12);
    }

    #[test]
    fn bisect_finds_sqrt2() {
        let r = bisect_root(&|x: f64| x * x - 2.0, 0.0, 2.0, 1e-13).unwrap();
        assert!((r - SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn bisect_rejects_bad_bracket() {
        assert!(matches!(
            bisect_root(&|x: f64| x * x + 1.0, -1.0, 1.0, 1e-12),
            Err(Error::RootBracket(_))
        ));
    }

    #[test]
    fn quantile_of_step_cdf_lands_on_atom() {
        // unit mass at 3: cdf = 1_{x >= 3}
        let cdf = |x: f64| if x >= 3.0 { 1.0 } else { 0.0 };
        let q = lower_quantile_from_cdf(&cdf, 0.5, 1e-12).unwrap();
        assert!((q - 3.0).abs() < 1e-11);
    }
}
