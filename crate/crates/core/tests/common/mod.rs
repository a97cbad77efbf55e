//! Independent numerical oracles for the integration suites.
//!
//! Everything here is deliberately implemented with different algorithms
//! than the library (composite Simpson + bisection instead of series,
//! continued fractions and adaptive Gauss-Legendre), so agreement is
//! evidence rather than tautology.

#![allow(dead_code)]

/// Composite Simpson rule with `n` panels (`n` even).
pub fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, n: usize) -> f64 {
    assert!(n >= 2 && n % 2 == 0);
    let h = (b - a) / n as f64;
    let mut sum = f(a) + f(b);
    for i in 1..n {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        sum += w * f(a + i as f64 * h);
    }
    sum * h / 3.0
}

/// Standard normal density.
pub fn phi(x: f64) -> f64 {
    (-0.5 * x * x).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

/// Standard normal cdf by Simpson integration of the density from 0.
pub fn oracle_norm_cdf(x: f64) -> f64 {
    if x < -12.0 {
        return 0.0;
    }
    if x > 12.0 {
        return 1.0;
    }
    0.5 + simpson(&phi, 0.0, x, 4000)
}

/// Standard normal quantile by plain bisection on [`oracle_norm_cdf`].
pub fn oracle_norm_quantile(p: f64) -> f64 {
    assert!(0.0 < p && p < 1.0);
    let (mut lo, mut hi) = (-12.0, 12.0);
    for _ in 0..60 {
        let mid = 0.5 * (lo + hi);
        if oracle_norm_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Student-t(3) cdf in closed form:
/// `F(t) = 1/2 + (1/pi) (s/(1+s^2) + atan s)` with `s = t/sqrt(3)`.
pub fn oracle_t3_cdf(t: f64) -> f64 {
    let s = t / 3f64.sqrt();
    0.5 + (s / (1.0 + s * s) + s.atan()) / std::f64::consts::PI
}

/// Student-t(3) quantile by bisection on the closed-form cdf.
pub fn oracle_t3_quantile(p: f64) -> f64 {
    assert!(0.0 < p && p < 1.0);
    let (mut lo, mut hi) = (-1e6, 1e6);
    for _ in 0..120 {
        let mid = 0.5 * (lo + hi);
        if oracle_t3_cdf(mid) < p {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Student-t(3) density in closed form.
pub fn oracle_t3_pdf(t: f64) -> f64 {
    let s = 1.0 + t * t / 3.0;
    2.0 / (std::f64::consts::PI * 3f64.sqrt() * s * s)
}

/// Expected shortfall `-(1/a) int_0^a q(u) du` by composite midpoint after
/// the substitution `u = a t^2` (open rule: never touches the singular
/// endpoint).
pub fn oracle_es_from_quantile<Q: Fn(f64) -> f64>(q: &Q, alpha: f64, n: usize) -> f64 {
    let h = 1.0 / n as f64;
    let mut sum = 0.0;
    for i in 0..n {
        let t = (i as f64 + 0.5) * h;
        sum += -q(alpha * t * t) * 2.0 * t;
    }
    sum * h
}
