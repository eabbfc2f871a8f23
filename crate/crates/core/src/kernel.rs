//! Densities of μ * K_t for the Gaussian, Cauchy and Lévy (index ½) kernels.
//!
//! Atomic measures are handled by exact kernel sums. Gridded densities are
//! integrated cell by cell against the kernel with adaptive Gauss–Legendre
//! quadrature.
//!
//! The Cauchy semigroup C_t is both a classical and a free convolution
//! semigroup, and μ * C_t coincides with the free convolution μ ⊞ C_t. Every
//! verdict computed here for the Cauchy kernel is therefore also a verdict
//! about the free process with Cauchy marginals.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Cell, ProbabilityMeasure, Repr};
use crate::quadrature;

/// Absolute tolerance for quadrature-based density evaluations.
pub const DENSITY_TOL: f64 = 1e-10;
/// Exponent beyond which exp(−t²/2u) is treated as zero.
const LEVY_UNDERFLOW: f64 = 745.0;
/// Kernel tail mass left outside normalization windows.
const WINDOW_TAIL_MASS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProcessKind {
    /// N(0, t): variance t.
    ClassicalGaussian,
    /// C_t(dx) = t / (π(x² + t²)) dx.
    Cauchy,
    /// L_t(dx) = (t/√(2π)) e^{−t²/2x} x^{−3/2} 1_{x>0} dx.
    LevyHalf,
    /// μ ⊞ S(0, t); evaluated by [`crate::biane`], not by kernel sums.
    FreeSemicircle,
}

impl ProcessKind {
    pub fn is_free(self) -> bool {
        matches!(self, ProcessKind::FreeSemicircle)
    }

    /// Natural length scale of the kernel at time `t`.
    pub fn scale(self, t: f64) -> f64 {
        match self {
            ProcessKind::ClassicalGaussian | ProcessKind::FreeSemicircle => t.sqrt(),
            ProcessKind::Cauchy => t,
            ProcessKind::LevyHalf => t * t,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            ProcessKind::ClassicalGaussian => "gaussian",
            ProcessKind::Cauchy => "cauchy",
            ProcessKind::LevyHalf => "levy",
            ProcessKind::FreeSemicircle => "free",
        }
    }
}

/// The kernel density at `u` (order 0) or its first or second u-derivative.
pub fn kernel(kind: ProcessKind, t: f64, u: f64, order: u8) -> Result<f64> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    if order > 2 {
        return Err(Error::Domain(format!("kernel derivative order {order} is not supported")));
    }
    if kind.is_free() {
        return Err(Error::Domain("the semicircle process has no convolution kernel here".into()));
    }
    Ok(kernel_unchecked(kind, t, u, order))
}

#[inline]
pub(crate) fn kernel_unchecked(kind: ProcessKind, t: f64, u: f64, order: u8) -> f64 {
    match kind {
        ProcessKind::ClassicalGaussian => {
            let phi = (-u * u / (2.0 * t)).exp() / (2.0 * PI * t).sqrt();
            match order {
                0 => phi,
                1 => -u / t * phi,
                _ => (u * u - t) / (t * t) * phi,
            }
        }
        ProcessKind::Cauchy => {
            let q = u * u + t * t;
            match order {
                0 => t / (PI * q),
                1 => -2.0 * t * u / (PI * q * q),
                _ => t * (6.0 * u * u - 2.0 * t * t) / (PI * q * q * q),
            }
        }
        ProcessKind::LevyHalf => {
            if u <= 0.0 {
                return 0.0;
            }
            let exponent = t * t / (2.0 * u);
            if exponent > LEVY_UNDERFLOW {
                return 0.0;
            }
            let base = t / (2.0 * PI).sqrt() * (-exponent).exp();
            let t2 = t * t;
            match order {
                0 => base / (u * u.sqrt()),
                1 => base * (t2 - 3.0 * u) / (2.0 * u.powi(3) * u.sqrt()),
                _ => base * (15.0 * u * u - 10.0 * t2 * u + t2 * t2) / (4.0 * u.powi(5) * u.sqrt()),
            }
        }
        ProcessKind::FreeSemicircle => unreachable!("free process has no kernel"),
    }
}

/// μ * K_t for one of the classical kernels.
#[derive(Debug, Clone, Copy)]
pub struct ConvolvedDensity<'a> {
    mu: &'a ProbabilityMeasure,
    kind: ProcessKind,
    t: f64,
}

impl<'a> ConvolvedDensity<'a> {
    pub fn new(mu: &'a ProbabilityMeasure, kind: ProcessKind, t: f64) -> Result<Self> {
        if kind.is_free() {
            return Err(Error::Domain(
                "free_semicircle is evaluated through the subordination map, not kernel sums".into(),
            ));
        }
        if !(t > 0.0) || !t.is_finite() {
            return Err(Error::Domain(format!("time must be positive, got {t}")));
        }
        Ok(Self { mu, kind, t })
    }

    pub fn mu(&self) -> &'a ProbabilityMeasure {
        self.mu
    }

    pub fn kind(&self) -> ProcessKind {
        self.kind
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        self.evaluate(x, 0).map(|v| v.max(0.0))
    }

    pub fn density_derivative(&self, x: f64, order: u8) -> Result<f64> {
        if !(1..=2).contains(&order) {
            return Err(Error::Domain(format!("derivative order must be 1 or 2, got {order}")));
        }
        self.evaluate(x, order)
    }

    fn evaluate(&self, x: f64, order: u8) -> Result<f64> {
        match self.mu.repr() {
            Repr::Atoms(m) => Ok(m
                .iter()
                .map(|(a, w)| w * kernel_unchecked(self.kind, self.t, x - a, order))
                .sum()),
            Repr::Density(d) => {
                let grid = d.grid();
                let width = grid[grid.len() - 1] - grid[0];
                let mut total = 0.0;
                for cell in d.cells().filter(Cell::is_positive) {
                    total += self.cell_integral(&cell, x, order, DENSITY_TOL * (cell.x1 - cell.x0) / width)?;
                }
                Ok(total)
            }
        }
    }

    /// ∫_cell K^{(order)}(x − y) p(y) dy.
    fn cell_integral(&self, cell: &Cell, x: f64, order: u8, tol: f64) -> Result<f64> {
        let (mut a, mut b) = (cell.x0, cell.x1);
        match self.kind {
            ProcessKind::ClassicalGaussian => {
                let reach = 40.0 * self.t.sqrt();
                if a - x > reach || x - b > reach {
                    return Ok(0.0);
                }
            }
            ProcessKind::LevyHalf => {
                // kernel vanishes for y >= x
                b = b.min(x);
                if b <= a {
                    return Ok(0.0);
                }
            }
            _ => {}
        }
        if b < a {
            std::mem::swap(&mut a, &mut b);
        }
        let f = |y: f64| cell.value_at(y) * kernel_unchecked(self.kind, self.t, x - y, order);
        // split at x so a kernel peak never sits inside a panel
        if a < x && x < b {
            Ok(quadrature::integrate(f, a, x, 0.5 * tol)? + quadrature::integrate(f, x, b, 0.5 * tol)?)
        } else {
            quadrature::integrate(f, a, b, tol)
        }
    }

    /// Rounding-error bound for an atomic kernel sum at `x`: a few ulps of the
    /// sum of absolute terms. Gridded measures report the quadrature tolerance.
    pub fn evaluation_error_bound(&self, x: f64, order: u8) -> f64 {
        match self.mu.repr() {
            Repr::Atoms(m) => {
                let abs_sum: f64 = m
                    .iter()
                    .map(|(a, w)| (w * kernel_unchecked(self.kind, self.t, x - a, order)).abs())
                    .sum();
                (m.len() as f64 + 4.0) * f64::EPSILON * abs_sum
            }
            Repr::Density(_) => DENSITY_TOL,
        }
    }

    /// Default scan window: the support hull padded by 6√t + 10t on each
    /// side, with an extra t² on the right for the Lévy kernel.
    pub fn default_window(&self) -> (f64, f64) {
        let (lo, hi) = self.mu.hull();
        let pad = 6.0 * self.t.sqrt() + 10.0 * self.t;
        match self.kind {
            ProcessKind::LevyHalf => (lo - pad, hi + pad + self.t * self.t),
            _ => (lo - pad, hi + pad),
        }
    }

    /// Window outside which the kernel leaves less than 1e−8 of its mass.
    pub fn normalization_window(&self) -> (f64, f64) {
        let (lo, hi) = self.mu.hull();
        let t = self.t;
        match self.kind {
            ProcessKind::ClassicalGaussian => {
                let w = (2.0 * t * (1.0 / WINDOW_TAIL_MASS).ln()).sqrt();
                (lo - w, hi + w)
            }
            ProcessKind::Cauchy => {
                let w = (t * (PI * (0.5 - WINDOW_TAIL_MASS / 2.0)).tan()).min(1e8);
                (lo - w, hi + w)
            }
            ProcessKind::LevyHalf => {
                // P(L_t > x) = erf(t/√(2x)) ≈ t√(2/(πx)) for large x
                let w = 2.0 * t * t / (PI * WINDOW_TAIL_MASS * WINDOW_TAIL_MASS);
                (lo, hi + w)
            }
            ProcessKind::FreeSemicircle => unreachable!(),
        }
    }

    /// Trapezoid mass of the density over [`Self::normalization_window`] on a
    /// grid that is fine near the support and geometric in the tails.
    pub fn window_mass(&self) -> Result<f64> {
        let xs = self.normalization_grid();
        let ps = xs.iter().map(|&x| self.density(x)).collect::<Result<Vec<_>>>()?;
        Ok(crate::measure::trapezoid(&xs, &ps))
    }

    fn normalization_grid(&self) -> Vec<f64> {
        let (wlo, whi) = self.normalization_window();
        let s = self.kind.scale(self.t);
        let step = s / 400.0;
        let core_pad = 12.0 * s;
        let mut xs = vec![wlo, whi];
        let mut cores: Vec<(f64, f64)> = Vec::new();
        for (l, r) in self.mu.support_pieces() {
            let (a, b) = ((l - core_pad).max(wlo), (r + core_pad).min(whi));
            let n = (((b - a) / step).ceil() as usize).clamp(2, 40_000);
            xs.extend((0..=n).map(|i| a + (b - a) * i as f64 / n as f64));
            cores.push((a, b));
        }
        cores.sort_by(|p, q| p.0.total_cmp(&q.0));
        // geometric fill between cores and out to the window edges
        let mut edges = vec![wlo];
        for (a, b) in &cores {
            edges.push(*a);
            edges.push(*b);
        }
        edges.push(whi);
        for gap in edges.chunks(2) {
            if let [a, b] = gap {
                geometric_fill(&mut xs, *a, *b, step, 1.001);
            }
        }
        xs.retain(|x| *x >= wlo && *x <= whi);
        xs.sort_by(f64::total_cmp);
        xs.dedup();
        xs
    }
}

/// Points growing geometrically away from both `a` and `b` until they meet.
fn geometric_fill(xs: &mut Vec<f64>, a: f64, b: f64, h0: f64, ratio: f64) {
    if b <= a {
        return;
    }
    let mid = 0.5 * (a + b);
    let mut h = h0;
    let (mut left, mut right) = (a, b);
    while left + h < mid {
        left += h;
        right -= h;
        xs.push(left);
        xs.push(right);
        h *= ratio;
    }
    xs.push(mid);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) {
        assert!((a - b).abs() <= tol, "{a} vs {b} (tol {tol})");
    }

    #[test]
    fn kernel_examples() {
        close(kernel(ProcessKind::Cauchy, 1.0, 0.0, 0).unwrap(), 1.0 / PI, 1e-16);
        assert_eq!(kernel(ProcessKind::ClassicalGaussian, 1.0, 0.0, 1).unwrap(), 0.0);
        close(kernel(ProcessKind::LevyHalf, 1.0, 1.0 / 3.0, 1).unwrap(), 0.0, 1e-15);
        assert!(kernel(ProcessKind::Cauchy, 0.0, 1.0, 0).is_err());
        assert!(kernel(ProcessKind::Cauchy, -1.0, 1.0, 0).is_err());
        assert!(kernel(ProcessKind::FreeSemicircle, 1.0, 1.0, 0).is_err());
        assert_eq!(kernel(ProcessKind::LevyHalf, 1.0, -0.5, 0).unwrap(), 0.0);
        // underflow guard: t²/2u > 745
        assert_eq!(kernel(ProcessKind::LevyHalf, 1.0, 1e-4, 2).unwrap(), 0.0);
    }

    #[test]
    fn kernel_derivatives_match_finite_differences() {
        for kind in [ProcessKind::ClassicalGaussian, ProcessKind::Cauchy, ProcessKind::LevyHalf] {
            for &t in &[0.5, 1.0, 2.0] {
                for &u in &[0.3, 0.9, 1.7, 4.0] {
                    let h = 1e-5;
                    for order in 1..=2u8 {
                        let fd = (kernel(kind, t, u + h, order - 1).unwrap() - kernel(kind, t, u - h, order - 1).unwrap())
                            / (2.0 * h);
                        close(kernel(kind, t, u, order).unwrap(), fd, 1e-7);
                    }
                }
            }
        }
    }

    #[test]
    fn density_examples() {
        let b = ProbabilityMeasure::bernoulli(1.0);
        let cd = ConvolvedDensity::new(&b, ProcessKind::ClassicalGaussian, 1.0).unwrap();
        close(cd.density(0.0).unwrap(), (-0.5f64).exp() / (2.0 * PI).sqrt(), 1e-15);
        let p = ProbabilityMeasure::point_mass(0.0);
        let cd = ConvolvedDensity::new(&p, ProcessKind::Cauchy, 2.0).unwrap();
        close(cd.density(0.0).unwrap(), 1.0 / (2.0 * PI), 1e-16);
        let cd = ConvolvedDensity::new(&p, ProcessKind::LevyHalf, 1.0).unwrap();
        assert_eq!(cd.density(-1.0).unwrap(), 0.0);
        assert!(ConvolvedDensity::new(&p, ProcessKind::FreeSemicircle, 1.0).is_err());
        assert!(ConvolvedDensity::new(&p, ProcessKind::Cauchy, 0.0).is_err());
    }

    #[test]
    fn derivative_examples() {
        let b = ProbabilityMeasure::bernoulli(1.0);
        let cd = ConvolvedDensity::new(&b, ProcessKind::Cauchy, 3f64.sqrt()).unwrap();
        close(cd.density_derivative(0.0, 2).unwrap(), 0.0, 1e-15);
        let cd = ConvolvedDensity::new(&b, ProcessKind::ClassicalGaussian, 1.0).unwrap();
        let h = 1e-4;
        let fd2 = (cd.density(h).unwrap() - 2.0 * cd.density(0.0).unwrap() + cd.density(-h).unwrap()) / (h * h);
        close(fd2, 0.0, 1e-7);
        close(cd.density_derivative(0.0, 2).unwrap(), 0.0, 1e-15);
        let p = ProbabilityMeasure::point_mass(0.0);
        let cd = ConvolvedDensity::new(&p, ProcessKind::ClassicalGaussian, 1.0).unwrap();
        assert_eq!(cd.density_derivative(0.0, 1).unwrap(), 0.0);
        assert!(cd.density_derivative(0.0, 0).is_err());
    }

    #[test]
    fn gridded_measure_matches_fine_atomic_discretization() {
        // uniform(0,1) as a 4000-atom midpoint sum
        let n = 4000;
        let atoms: Vec<f64> = (0..n).map(|i| (i as f64 + 0.5) / n as f64).collect();
        let weights = vec![1.0 / n as f64; n];
        let atomic = ProbabilityMeasure::atomic(atoms, weights).unwrap();
        let uniform = ProbabilityMeasure::uniform(0.0, 1.0).unwrap();
        for kind in [ProcessKind::ClassicalGaussian, ProcessKind::Cauchy, ProcessKind::LevyHalf] {
            let a = ConvolvedDensity::new(&atomic, kind, 0.8).unwrap();
            let u = ConvolvedDensity::new(&uniform, kind, 0.8).unwrap();
            for &x in &[-0.5, 0.2, 0.5, 1.3, 2.5] {
                close(u.density(x).unwrap(), a.density(x).unwrap(), 2e-6);
            }
        }
    }

    #[test]
    fn cauchy_against_closed_form_for_uniform() {
        // (uniform(−1,1) * C_t)(x) = (atan((x+1)/t) − atan((x−1)/t)) / (2π)
        let u = ProbabilityMeasure::uniform(-1.0, 1.0).unwrap();
        let t = 0.3;
        let cd = ConvolvedDensity::new(&u, ProcessKind::Cauchy, t).unwrap();
        for &x in &[-2.0, -1.0, -0.3, 0.0, 0.9, 1.5] {
            let exact = (((x + 1.0) / t).atan() - ((x - 1.0) / t).atan()) / (2.0 * PI);
            close(cd.density(x).unwrap(), exact, 1e-10);
        }
    }

    #[test]
    fn windows_contain_the_support() {
        let m = ProbabilityMeasure::atomic(vec![-1.0, 2.0], vec![0.5, 0.5]).unwrap();
        for kind in [ProcessKind::ClassicalGaussian, ProcessKind::Cauchy, ProcessKind::LevyHalf] {
            let cd = ConvolvedDensity::new(&m, kind, 1.0).unwrap();
            let (lo, hi) = cd.default_window();
            assert!(lo < -1.0 && hi > 2.0);
            let (lo, hi) = cd.normalization_window();
            assert!(lo <= -1.0 && hi > 2.0);
        }
    }
}
