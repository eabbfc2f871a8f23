//! Adaptive Gauss–Legendre quadrature.
//!
//! Each panel is integrated with a 15-point Gauss–Legendre rule and compared
//! against the sum of the same rule on its two halves. Panels that disagree
//! by more than their share of the tolerance are split further.

use std::sync::OnceLock;

use crate::error::{Error, Result};

const ORDER: usize = 15;
const MAX_DEPTH: u32 = 48;

/// Nodes and weights of an `n`-point Gauss–Legendre rule on [-1, 1].
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        // Tricomi initial guess, then Newton on P_n.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, x);
        if d != 0.0 {
            dp = d;
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = n * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

fn rule() -> &'static (Vec<f64>, Vec<f64>) {
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| gauss_legendre(ORDER))
}

fn panel<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let (nodes, weights) = rule();
    let half = 0.5 * (b - a);
    let mid = 0.5 * (a + b);
    let sum: f64 = nodes
        .iter()
        .zip(weights)
        .map(|(x, w)| w * f(mid + half * x))
        .sum();
    half * sum
}

/// Integrates `f` over `[a, b]` to absolute tolerance `tol`.
pub fn integrate<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> Result<f64> {
    if a == b {
        return Ok(0.0);
    }
    if b < a {
        return integrate(f, b, a, tol).map(|v| -v);
    }
    let whole = panel(&f, a, b);
    refine(&f, a, b, whole, tol, 0)
}

fn refine<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, tol: f64, depth: u32) -> Result<f64> {
    let m = 0.5 * (a + b);
    let left = panel(f, a, m);
    let right = panel(f, m, b);
    let both = left + right;
    if !both.is_finite() {
        return Err(Error::Quadrature { a, b, tol });
    }
    // a panel is settled once the halves agree to the tolerance or to the
    // evaluation noise, or once it is too narrow for its nodes to be distinct
    let floor = 256.0 * f64::EPSILON * (left.abs() + right.abs());
    if (both - whole).abs() <= tol.max(floor) || b - a <= 1e-12 * a.abs().max(b.abs()) {
        return Ok(both);
    }
    if depth >= MAX_DEPTH || m <= a || m >= b {
        return Err(Error::Quadrature { a, b, tol });
    }
    Ok(refine(f, a, m, left, 0.5 * tol, depth + 1)? + refine(f, m, b, right, 0.5 * tol, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn weights_sum_to_two_and_polynomials_are_exact() {
        let (x, w) = gauss_legendre(15);
        let total: f64 = w.iter().sum();
        assert!((total - 2.0).abs() < 1e-14);
        // A 15-point rule is exact up to degree 29.
        let m28: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(28)).sum();
        assert!((m28 - 2.0 / 29.0).abs() < 1e-14);
        for pair in x.windows(2) {
            assert!(pair[0] < pair[1]);
        }
    }

    #[test]
    fn integrates_smooth_and_peaked_functions() {
        let v = integrate(|x: f64| x.exp(), 0.0, 1.0, 1e-12).unwrap();
        assert!((v - (1.0f64.exp() - 1.0)).abs() < 1e-12);
        // narrow Lorentzian: total mass pi away from the truncation
        let eps = 1e-4;
        let v = integrate(|x: f64| eps / (x * x + eps * eps), -1.0, 1.0, 1e-10).unwrap();
        let exact = 2.0 * (1.0 / eps).atan();
        assert!((v - exact).abs() < 1e-9);
    }

    #[test]
    fn reversed_limits_flip_sign() {
        let v = integrate(|x: f64| x * x, 1.0, 0.0, 1e-12).unwrap();
        assert!((v + 1.0 / 3.0).abs() < 1e-14);
    }

    #[test]
    fn nonconvergence_is_reported() {
        let r = integrate(|x: f64| 1.0 / x.abs().sqrt().max(1e-300) * x.signum().max(0.0) * f64::MAX, 0.0, 1.0, 1e-12);
        assert!(r.is_err());
    }
}
