//! Density of μ ⊞ S(0, t) through Biane's subordination map.
//!
//! For u ∈ ℝ let X_μ(u) = ∫ dμ(x)/(u − x)² and let
//! U_t = {u : X_μ(u) > 1/t}. On U_t, v_t(u) > 0 is the unique root of
//! ∫ dμ(x)/((x − u)² + v²) = 1/t, and v_t = 0 off U_t. The map
//! ψ_t(u) = u + t ∫ (u − x)/((u − x)² + v_t(u)²) dμ(x) is an increasing
//! homeomorphism of ℝ and the density satisfies p_t(ψ_t(u)) = v_t(u)/(πt).
//! The support of p_t is ψ_t applied to the closure of U_t.
//!
//! All integrals against a gridded density are done per cell: in closed form
//! when (u ± iv) sits close to the cell, and with a 15-point Gauss–Legendre
//! rule when the pole is at least a half-width away from it.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::measure::{Cell, ProbabilityMeasure, Repr};
use crate::profile::DensityProfile;
use crate::kernel::ProcessKind;
use crate::quadrature;
use crate::roots::bisect_predicate;

/// Default residual tolerance for the v-equation.
pub const DEFAULT_TOL: f64 = 1e-12;
/// Bisection cap; enough to reach the smallest positive double from √t.
const MAX_BISECTION: usize = 1100;

/// An open interval (l, r).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Interval {
    pub l: f64,
    pub r: f64,
}

impl Interval {
    pub fn contains(&self, u: f64) -> bool {
        self.l < u && u < self.r
    }

    pub fn len(&self) -> f64 {
        self.r - self.l
    }

    pub fn is_empty(&self) -> bool {
        self.r <= self.l
    }
}

/// One point of the parametrized free density.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FreeDensityPoint {
    pub u: f64,
    pub v: f64,
    pub psi: f64,
    pub p: f64,
}

/// Which per-cell integrand is being accumulated.
#[derive(Clone, Copy)]
enum Integrand {
    /// 1/((x−u)² + v²), or 1/(x−u)² when v = 0.
    Resolvent,
    /// (u−x)/((x−u)² + v²), or 1/(u−x) when v = 0.
    Shift,
    /// d/du of 1/(x−u)², i.e. 2/(x−u)³ (v = 0 only).
    ResolventSlope,
}

fn pointwise(kind: Integrand, x: f64, u: f64, v: f64) -> f64 {
    let y = x - u;
    match kind {
        Integrand::Resolvent => 1.0 / (y * y + v * v),
        Integrand::Shift => -y / (y * y + v * v),
        Integrand::ResolventSlope => 2.0 / (y * y * y),
    }
}

/// ∫_cell p(x)·k(x) dx for the chosen integrand.
fn cell_integral(cell: &Cell, kind: Integrand, u: f64, v: f64) -> f64 {
    let half = 0.5 * (cell.x1 - cell.x0);
    let mid = 0.5 * (cell.x0 + cell.x1);
    let far = (u - mid).powi(2) + v * v >= 4.0 * half * half;
    if far {
        // analytic integrand with its pole well away from the cell
        let (nodes, weights) = gl15();
        let s: f64 = nodes
            .iter()
            .zip(weights)
            .map(|(z, w)| {
                let x = mid + half * z;
                w * cell.value_at(x) * pointwise(kind, x, u, v)
            })
            .sum();
        return half * s;
    }
    let beta = cell.slope();
    let c0 = cell.p0 + beta * (u - cell.x0);
    let (y0, y1) = (cell.x0 - u, cell.x1 - u);
    let dy = y1 - y0;
    if v > 0.0 {
        // A = ∫ dy/(y²+v²), L = ∫ y dy/(y²+v²)
        let a = if y0 * y1 > 0.0 {
            (v * dy / (v * v + y0 * y1)).atan() / v
        } else {
            ((y1 / v).atan() - (y0 / v).atan()) / v
        };
        let l = 0.5 * ((y1 * y1 + v * v) / (y0 * y0 + v * v)).ln();
        match kind {
            Integrand::Resolvent => c0 * a + beta * l,
            Integrand::Shift => -c0 * l - beta * (dy - v * v * a),
            Integrand::ResolventSlope => unreachable!("slope is only used off the support"),
        }
    } else {
        // u lies outside the open cell, so y0 and y1 share a sign. At a cell
        // end the density there is exact, and a zero density kills the log.
        let c0 = if y0 == 0.0 {
            cell.p0
        } else if y1 == 0.0 {
            cell.p1
        } else {
            c0
        };
        let log_ratio = (y1 / y0).ln();
        match kind {
            Integrand::Resolvent => c0 * (1.0 / y0 - 1.0 / y1) + beta * log_ratio,
            Integrand::Shift if c0 == 0.0 => -beta * dy,
            Integrand::Shift => -c0 * log_ratio - beta * dy,
            Integrand::ResolventSlope => c0 * (1.0 / (y0 * y0) - 1.0 / (y1 * y1)) + 2.0 * beta * (1.0 / y0 - 1.0 / y1),
        }
    }
}

fn gl15() -> &'static (Vec<f64>, Vec<f64>) {
    use std::sync::OnceLock;
    static RULE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    RULE.get_or_init(|| quadrature::gauss_legendre(15))
}

fn integrate(mu: &ProbabilityMeasure, kind: Integrand, u: f64, v: f64) -> f64 {
    match mu.repr() {
        Repr::Atoms(m) => m.iter().map(|(a, w)| w * pointwise(kind, a, u, v)).sum(),
        Repr::Density(d) => d
            .cells()
            .filter(Cell::is_positive)
            .map(|c| cell_integral(&c, kind, u, v))
            .sum(),
    }
}

/// True when u is an atom or lies in the closed support of the gridded density.
fn in_support(mu: &ProbabilityMeasure, u: f64) -> bool {
    mu.support_pieces().iter().any(|&(l, r)| l <= u && u <= r)
}

/// X_μ(u) = ∫ dμ(x)/(u − x)²; `f64::INFINITY` on the support.
pub fn x_functional(mu: &ProbabilityMeasure, u: f64) -> f64 {
    if in_support(mu, u) {
        return f64::INFINITY;
    }
    integrate(mu, Integrand::Resolvent, u, 0.0)
}

/// X_μ'(u) off the support.
fn x_slope(mu: &ProbabilityMeasure, u: f64) -> f64 {
    integrate(mu, Integrand::ResolventSlope, u, 0.0)
}

/// ξ_R(u) = ∫ dμ(x)/((x − u)² + R²).
pub fn xi(mu: &ProbabilityMeasure, u: f64, r: f64) -> f64 {
    if r == 0.0 {
        return x_functional(mu, u);
    }
    integrate(mu, Integrand::Resolvent, u, r)
}

/// v_t(u): zero off U_t, otherwise the root of ξ_v(u) = 1/t in (0, √t].
pub fn solve_v(mu: &ProbabilityMeasure, t: f64, u: f64, tol: f64) -> Result<f64> {
    check_time(t)?;
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("solver tolerance must be positive, got {tol}")));
    }
    let target = 1.0 / t;
    if x_functional(mu, u) <= target {
        return Ok(0.0);
    }
    // ξ_v(u) is strictly decreasing in v and ξ_√t(u) ≤ 1/t
    let (lo, hi) = bisect_predicate(|v| xi(mu, u, v) <= target, 0.0, t.sqrt(), 0.0, MAX_BISECTION);
    let (rlo, rhi) = ((xi(mu, u, lo) - target).abs(), (xi(mu, u, hi) - target).abs());
    Ok(if lo > 0.0 && rlo < rhi { lo } else { hi })
}

/// ψ_t(u).
pub fn psi(mu: &ProbabilityMeasure, t: f64, u: f64) -> Result<f64> {
    let v = solve_v(mu, t, u, DEFAULT_TOL)?;
    Ok(psi_with_v(mu, t, u, v))
}

fn psi_with_v(mu: &ProbabilityMeasure, t: f64, u: f64, v: f64) -> f64 {
    u + t * integrate(mu, Integrand::Shift, u, v)
}

/// Connected components of U_t, left to right.
///
/// Between consecutive support pieces X_μ is convex and blows up at both
/// ends, so each gap either stays inside U_t or leaves it along exactly one
/// interval around the minimizer of X_μ. Outside the support hull X_μ is
/// monotone and drops below 1/t within √t of the hull.
pub fn ut_intervals(mu: &ProbabilityMeasure, t: f64) -> Result<Vec<Interval>> {
    check_time(t)?;
    let target = 1.0 / t;
    let pieces = mu.support_pieces();
    let pad = 2.0 * t.sqrt();
    let inside = |u: f64| x_functional(mu, u) > target;

    let (first, last) = (pieces[0].0, pieces[pieces.len() - 1].1);
    let left_end = {
        let (lo, hi) = bisect_predicate(inside, first - pad, first, 0.0, MAX_BISECTION);
        0.5 * (lo + hi)
    };
    let right_end = {
        let (lo, hi) = bisect_predicate(|u| !inside(u), last, last + pad, 0.0, MAX_BISECTION);
        0.5 * (lo + hi)
    };

    let mut intervals = Vec::new();
    let mut open = left_end;
    for pair in pieces.windows(2) {
        let (a, b) = (pair[0].1, pair[1].0);
        // X' increases from −∞ to +∞ across the gap
        let (lo, hi) = bisect_predicate(|u| x_slope(mu, u) >= 0.0, a, b, 0.0, MAX_BISECTION);
        let mut valley = 0.5 * (lo + hi);
        if valley <= a || valley >= b {
            valley = 0.5 * (a + b);
        }
        if x_functional(mu, valley) > target {
            continue;
        }
        let (lo, hi) = bisect_predicate(|u| !inside(u), a, valley, 0.0, MAX_BISECTION);
        intervals.push(Interval { l: open, r: 0.5 * (lo + hi) });
        let (lo, hi) = bisect_predicate(inside, valley, b, 0.0, MAX_BISECTION);
        open = 0.5 * (lo + hi);
    }
    intervals.push(Interval { l: open, r: right_end });
    Ok(intervals)
}

/// Solved subordination objects for one (μ, t).
#[derive(Debug, Clone)]
pub struct BianeState<'a> {
    mu: &'a ProbabilityMeasure,
    t: f64,
    intervals: Vec<Interval>,
    tol: f64,
}

impl<'a> BianeState<'a> {
    pub fn new(mu: &'a ProbabilityMeasure, t: f64) -> Result<Self> {
        Self::with_tolerance(mu, t, DEFAULT_TOL)
    }

    pub fn with_tolerance(mu: &'a ProbabilityMeasure, t: f64, tol: f64) -> Result<Self> {
        let intervals = ut_intervals(mu, t)?;
        Ok(Self { mu, t, intervals, tol })
    }

    pub fn mu(&self) -> &'a ProbabilityMeasure {
        self.mu
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn v(&self, u: f64) -> Result<f64> {
        solve_v(self.mu, self.t, u, self.tol)
    }

    pub fn psi(&self, u: f64) -> Result<f64> {
        Ok(psi_with_v(self.mu, self.t, u, self.v(u)?))
    }

    pub fn point(&self, u: f64) -> Result<FreeDensityPoint> {
        let v = self.v(u)?;
        Ok(self.point_with_v(u, v))
    }

    fn point_with_v(&self, u: f64, v: f64) -> FreeDensityPoint {
        FreeDensityPoint {
            u,
            v,
            psi: psi_with_v(self.mu, self.t, u, v),
            p: v / (PI * self.t),
        }
    }

    /// Residual of the v-equation at a solved point (zero off U_t).
    pub fn residual(&self, u: f64, v: f64) -> f64 {
        if v == 0.0 {
            return 0.0;
        }
        xi(self.mu, u, v) - 1.0 / self.t
    }

    /// p_t(x), by inverting ψ_t with bisection.
    pub fn density(&self, x: f64) -> Result<f64> {
        let u = self.invert_psi(x)?;
        Ok(self.v(u)? / (PI * self.t))
    }

    fn invert_psi(&self, x: f64) -> Result<f64> {
        let (first, last) = self.mu.hull();
        // ψ(u) < u left of the hull and ψ(u) > u right of it
        let lo = first.min(x) - 1.0;
        let hi = last.max(x) + 1.0;
        let (plo, phi) = (self.psi(lo)?, self.psi(hi)?);
        if !(plo < x && x < phi) {
            return Err(Error::Inversion {
                x,
                reason: format!("psi({lo}) = {plo}, psi({hi}) = {phi} do not bracket x"),
            });
        }
        let samples = 64;
        let mut prev = plo;
        for i in 1..=samples {
            let u = lo + (hi - lo) * i as f64 / samples as f64;
            let p = self.psi(u)?;
            if p <= prev {
                return Err(Error::Inversion {
                    x,
                    reason: format!("psi is not increasing near u = {u}"),
                });
            }
            prev = p;
        }
        let mut failure = None;
        let (a, b) = bisect_predicate(
            |u| match self.psi(u) {
                Ok(p) => p >= x,
                Err(e) => {
                    failure.get_or_insert(e);
                    true
                }
            },
            lo,
            hi,
            0.0,
            MAX_BISECTION,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(0.5 * (a + b))
    }

    /// Tabulates (ψ_t(u), v_t(u)/(πt)) over Chebyshev–Lobatto points of each
    /// U_t component. Endpoints are included with v = 0, and points cluster
    /// quadratically towards them where v_t has a square-root edge.
    pub fn profile(&self, n_points: usize) -> Result<DensityProfile> {
        if n_points < 16 {
            return Err(Error::Domain(format!("a profile needs at least 16 points, got {n_points}")));
        }
        let total: f64 = self.intervals.iter().map(Interval::len).sum();
        let mut points = Vec::with_capacity(n_points + 16 * self.intervals.len());
        for iv in &self.intervals {
            let share = (n_points as f64 * iv.len() / total).round() as usize;
            let m = share.max(16);
            let (mid, half) = (0.5 * (iv.l + iv.r), 0.5 * iv.len());
            for k in 0..m {
                let u = if k == 0 {
                    iv.l
                } else if k == m - 1 {
                    iv.r
                } else {
                    mid - half * (PI * k as f64 / (m - 1) as f64).cos()
                };
                let v = if k == 0 || k == m - 1 { 0.0 } else { self.v(u)? };
                points.push(self.point_with_v(u, v));
            }
        }
        // Where two components of U_t just touch, ψ is flat to high order and
        // its steps fall below rounding; such points are dropped. A decrease
        // beyond rounding is a solver fault.
        let (lo, hi) = self.mu.hull();
        let noise = 1e-12 * (lo.abs().max(hi.abs()) + self.t.sqrt());
        let mut kept: Vec<FreeDensityPoint> = Vec::with_capacity(points.len());
        for pt in points {
            match kept.last() {
                Some(last) if !(pt.psi > last.psi) => {
                    if !(last.psi - pt.psi <= noise) {
                        return Err(Error::Inversion {
                            x: pt.psi,
                            reason: format!("psi not increasing between u = {} and u = {}", last.u, pt.u),
                        });
                    }
                }
                _ => kept.push(pt),
            }
        }
        let points = kept;
        Ok(DensityProfile::free(self.t, points))
    }
}

/// p_t(x) for μ ⊞ S(0, t).
pub fn free_density(mu: &ProbabilityMeasure, t: f64, x: f64, tol: f64) -> Result<f64> {
    BianeState::with_tolerance(mu, t, tol)?.density(x)
}

/// Free density tabulated over the ψ-image of a u-grid.
pub fn free_density_profile(mu: &ProbabilityMeasure, t: f64, n_points: usize) -> Result<DensityProfile> {
    BianeState::new(mu, t)?.profile(n_points)
}

fn check_time(t: f64) -> Result<()> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("time must be positive, got {t}")));
    }
    Ok(())
}

impl DensityProfile {
    fn free(t: f64, points: Vec<FreeDensityPoint>) -> Self {
        let xs = points.iter().map(|p| p.psi).collect();
        let ps = points.iter().map(|p| p.p).collect();
        let us = points.iter().map(|p| p.u).collect();
        DensityProfile {
            process: ProcessKind::FreeSemicircle,
            t,
            xs,
            ps,
            us: Some(us),
        }
    }
}
