//! Mode counting, level-set crossings and critical unimodality times.
//!
//! Convolved densities are classified from sign changes of their exact
//! derivative; free densities from their subordination profile, where the
//! density is known only at the ψ-images of a u-grid.

use serde::{Deserialize, Serialize};

use crate::biane::{self, BianeState};
use crate::error::{Error, Result};
use crate::kernel::{ConvolvedDensity, ProcessKind};
use crate::measure::ProbabilityMeasure;
use crate::profile::DensityProfile;
use crate::roots::bisect_predicate;

/// Default uniform grid for derivative scans.
pub const DEFAULT_SCAN_GRID: usize = 4096;
/// Default u-grid for free profiles.
pub const DEFAULT_PROFILE_POINTS: usize = 4096;
/// Relative prominence a discrete maximum needs to count as a mode.
pub const MODE_PROMINENCE: f64 = 1e-9;
/// Width to which derivative sign changes are refined.
pub const LOCATION_TOL: f64 = 1e-10;
/// Number of log-spaced times checked by [`critical_time`].
pub const CRITICAL_SCAN_POINTS: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    DerivativeScan,
    ProfileScan,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModalityReport {
    pub mode_count: usize,
    pub mode_locations: Vec<f64>,
    pub support_components: usize,
    pub unimodal: bool,
    pub method: Method,
    pub grid_size: usize,
}

impl ModalityReport {
    fn new(mode_locations: Vec<f64>, support_components: usize, method: Method, grid_size: usize) -> Self {
        let mode_count = mode_locations.len();
        Self {
            mode_count,
            mode_locations,
            support_components,
            unimodal: mode_count == 1 && support_components == 1,
            method,
            grid_size,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalTimeResult {
    pub t_star: f64,
    pub bracket: (f64, f64),
    pub monotone_verified: bool,
    pub scan_grid: Vec<(f64, bool)>,
}

/// Mode count of a convolved density from the sign pattern of its derivative.
pub fn count_modes_derivative(
    cd: &ConvolvedDensity<'_>,
    window: Option<(f64, f64)>,
    grid_size: usize,
) -> Result<ModalityReport> {
    count_modes_derivative_with_probes(cd, window, grid_size, &[])
}

/// As [`count_modes_derivative`], with extra scan points inserted.
///
/// Besides the uniform grid the scan always visits a local grid around each
/// support piece, since a narrow bump next to an isolated atom can fall
/// between uniform grid points.
pub fn count_modes_derivative_with_probes(
    cd: &ConvolvedDensity<'_>,
    window: Option<(f64, f64)>,
    grid_size: usize,
    probes: &[f64],
) -> Result<ModalityReport> {
    if grid_size < 256 {
        return Err(Error::Domain(format!("derivative scans need at least 256 grid points, got {grid_size}")));
    }
    let (lo, hi) = window.unwrap_or_else(|| cd.default_window());
    if !(hi > lo) {
        return Err(Error::Domain(format!("empty window [{lo}, {hi}]")));
    }
    let slope = |x: f64| cd.density_derivative(x, 1);
    let noise = |x: f64| 4.0 * cd.evaluation_error_bound(x, 1);
    if slope(lo)? < -noise(lo) || slope(hi)? > noise(hi) {
        return Err(Error::WindowTooSmall { lo, hi });
    }

    let points = scan_points(cd, lo, hi, grid_size, probes);
    let mut modes = Vec::new();
    // last point with a resolved derivative sign
    let mut last: Option<(f64, bool)> = None;
    for &x in &points {
        let d = slope(x)?;
        let band = noise(x);
        let rising = if d > band {
            true
        } else if d < -band {
            false
        } else {
            continue;
        };
        if let Some((x0, was_rising)) = last {
            if was_rising && !rising {
                let mut failure = None;
                let (a, b) = bisect_predicate(
                    |y| match slope(y) {
                        Ok(v) => v < 0.0,
                        Err(e) => {
                            failure.get_or_insert(e);
                            true
                        }
                    },
                    x0,
                    x,
                    LOCATION_TOL,
                    200,
                );
                if let Some(e) = failure {
                    return Err(e);
                }
                modes.push(0.5 * (a + b));
            }
        }
        last = Some((x, rising));
    }
    // the densities here are positive on a single interval
    Ok(ModalityReport::new(modes, 1, Method::DerivativeScan, points.len()))
}

fn scan_points(cd: &ConvolvedDensity<'_>, lo: f64, hi: f64, grid_size: usize, probes: &[f64]) -> Vec<f64> {
    let mut xs: Vec<f64> = (0..grid_size)
        .map(|i| lo + (hi - lo) * i as f64 / (grid_size - 1) as f64)
        .collect();
    let s = cd.kind().scale(cd.t());
    for (l, r) in cd.mu().support_pieces() {
        match cd.kind() {
            ProcessKind::LevyHalf => {
                xs.extend((1..=160).map(|k| r + s * k as f64 / 8.0));
            }
            _ => {
                xs.extend((-64..=64).map(|k| l + s * k as f64 / 8.0));
                if r > l {
                    xs.extend((0..=64).map(|k| r + s * k as f64 / 8.0));
                }
            }
        }
    }
    xs.extend_from_slice(probes);
    xs.retain(|x| x.is_finite() && *x >= lo && *x <= hi);
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    xs
}

/// Discrete mode count of a tabulated density.
///
/// Walks the values with hysteresis: a maximum becomes a mode once the curve
/// has dropped below it by more than `MODE_PROMINENCE` times the global peak,
/// and a new rise must exceed the running minimum by the same margin. The
/// curve is taken to be zero beyond both ends, and flat tops report the
/// midpoint of the plateau.
pub fn count_modes_profile(profile: &DensityProfile) -> Result<ModalityReport> {
    if profile.xs.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Domain("profile abscissae must be strictly increasing".into()));
    }
    let peak = profile.ps.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) {
        return Err(Error::DegenerateProfile);
    }
    let h = MODE_PROMINENCE * peak;
    let xs = &profile.xs;
    let mut modes = Vec::new();
    let mut rising = true;
    // running maximum (value, first index, last index attaining it)
    let mut top = (0.0, 0usize, 0usize);
    let mut bottom = 0.0;
    for (i, &p) in profile.ps.iter().enumerate() {
        if rising {
            if p > top.0 {
                top = (p, i, i);
            } else if p == top.0 && top.2 + 1 == i {
                top.2 = i;
            } else if p < top.0 - h {
                modes.push(0.5 * (xs[top.1] + xs[top.2]));
                rising = false;
                bottom = p;
            }
        } else if p < bottom {
            bottom = p;
        } else if p > bottom + h {
            rising = true;
            top = (p, i, i);
        }
    }
    if rising && top.0 > h {
        modes.push(0.5 * (xs[top.1] + xs[top.2]));
    }
    Ok(ModalityReport::new(
        modes,
        profile.support_components(),
        Method::ProfileScan,
        profile.len(),
    ))
}

/// Modality of μ ⊞ S(0, t) (free) or μ ∗ K_t (classical kernels).
pub fn is_unimodal(mu: &ProbabilityMeasure, process: ProcessKind, t: f64) -> Result<ModalityReport> {
    if process.is_free() {
        let profile = biane::free_density_profile(mu, t, DEFAULT_PROFILE_POINTS)?;
        count_modes_profile(&profile)
    } else {
        let cd = ConvolvedDensity::new(mu, process, t)?;
        count_modes_derivative(&cd, None, DEFAULT_SCAN_GRID)
    }
}

/// Number of solutions of p_t = a.
///
/// In the free case these are counted in the subordination variable: a
/// point ψ_t(u) has density a exactly when ξ_{πat}(u) = 1/t.
pub fn level_crossings(mu: &ProbabilityMeasure, process: ProcessKind, t: f64, a: f64) -> Result<usize> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("level must be positive, got {a}")));
    }
    if process.is_free() {
        if !(t > 0.0) {
            return Err(Error::Domain(format!("time must be positive, got {t}")));
        }
        let r = std::f64::consts::PI * a * t;
        let (first, last) = mu.hull();
        let pad = 2.0 * t.sqrt();
        let mut xs = uniform(first - pad, last + pad, DEFAULT_SCAN_GRID);
        for (l, rr) in mu.support_pieces() {
            for c in [l, rr] {
                xs.push(c);
                for k in [0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0] {
                    xs.push(c - k * r);
                    xs.push(c + k * r);
                }
            }
        }
        let target = 1.0 / t;
        count_level_crossings(|u| Ok(biane::xi(mu, u, r) - target), xs, 1e-13 * target)
    } else {
        let cd = ConvolvedDensity::new(mu, process, t)?;
        let (lo, hi) = cd.default_window();
        let mut xs = scan_points(&cd, lo, hi, DEFAULT_SCAN_GRID, &[]);
        xs.extend(uniform(lo, hi, DEFAULT_SCAN_GRID));
        count_level_crossings(|x| Ok(cd.density(x)? - a), xs, 1e-13 * a.max(1e-300))
    }
}

fn uniform(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
}

/// Counts zeros of `g` over sorted scan points: sign changes, zero runs
/// between same-sign neighbours (touches), and near-zero discrete extrema
/// that a golden-section refinement shows to reach or cross zero.
fn count_level_crossings<G: Fn(f64) -> Result<f64>>(g: G, mut xs: Vec<f64>, touch_tol: f64) -> Result<usize> {
    xs.retain(|x| x.is_finite());
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let vals = xs.iter().map(|&x| g(x)).collect::<Result<Vec<_>>>()?;
    let sign = |v: f64| {
        if v > 0.0 {
            1
        } else if v < 0.0 {
            -1
        } else {
            0
        }
    };
    let signs: Vec<i32> = vals.iter().map(|&v| sign(v)).collect();

    let mut count = 0;
    let mut prev_nonzero: Option<i32> = None;
    let mut i = 0;
    while i < signs.len() {
        if signs[i] == 0 {
            while i < signs.len() && signs[i] == 0 {
                i += 1;
            }
            let before = prev_nonzero;
            let after = signs.get(i).copied();
            // a zero run between opposite signs is the crossing counted below
            let crossing_later = matches!((before, after), (Some(b), Some(a)) if a != b);
            if !crossing_later {
                count += 1;
            }
            continue;
        }
        if let Some(p) = prev_nonzero {
            if p != signs[i] {
                count += 1;
            }
        }
        prev_nonzero = Some(signs[i]);
        i += 1;
    }

    // extrema that approach zero between grid points without a sampled sign change
    for j in 1..vals.len().saturating_sub(1) {
        let (a, b, c) = (vals[j - 1], vals[j], vals[j + 1]);
        let s = signs[j];
        if s == 0 || signs[j - 1] != s || signs[j + 1] != s {
            continue;
        }
        // towards zero from both sides
        let toward = if s < 0 { b >= a && b >= c } else { b <= a && b <= c };
        if !toward {
            continue;
        }
        let flipped = |x: f64| -> Result<f64> { Ok(-(s as f64) * g(x)?) };
        let (_, best) = golden_max(&flipped, xs[j - 1], xs[j + 1])?;
        // best is the extreme of −|g| direction; ≥ 0 means g reaches zero
        if best > touch_tol {
            count += 2;
        } else if best >= -touch_tol {
            count += 1;
        }
    }
    Ok(count)
}

/// Maximizes a unimodal function on [a, b] by golden-section search.
fn golden_max<F: Fn(f64) -> Result<f64>>(f: &F, mut a: f64, mut b: f64) -> Result<(f64, f64)> {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - r * (b - a);
    let mut d = a + r * (b - a);
    let (mut fc, mut fd) = (f(c)?, f(d)?);
    for _ in 0..200 {
        if (b - a).abs() <= 1e-15 * (a.abs() + b.abs()).max(1e-300) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc > fd { (c, fc) } else { (d, fd) })
}

/// Locates the time after which μ's convolution becomes unimodal.
///
/// A log-spaced scan over the range records the verdicts; bisection then
/// refines the last non-unimodal to unimodal transition down to `tol`.
pub fn critical_time(
    mu: &ProbabilityMeasure,
    process: ProcessKind,
    t_range: (f64, f64),
    tol: f64,
) -> Result<CriticalTimeResult> {
    let (t_min, t_max) = t_range;
    if !(t_min > 0.0 && t_max > t_min) || !(tol > 0.0) {
        return Err(Error::Domain(format!(
            "need 0 < t_min < t_max and tol > 0, got ({t_min}, {t_max}), tol {tol}"
        )));
    }
    let verdict = |t: f64| is_unimodal(mu, process, t).map(|r| r.unimodal);
    let n = CRITICAL_SCAN_POINTS;
    let ratio = (t_max / t_min).ln();
    let mut scan = Vec::with_capacity(n);
    for i in 0..n {
        let t = if i == n - 1 {
            t_max
        } else {
            t_min * (ratio * i as f64 / (n - 1) as f64).exp()
        };
        scan.push((t, verdict(t)?));
    }
    let (first, last) = (scan[0].1, scan[n - 1].1);
    if first || !last {
        return Err(Error::Bracket(format!(
            "need a non-unimodal verdict at t = {t_min} and a unimodal one at t = {t_max}, got {first} and {last}"
        )));
    }
    let changes = scan.windows(2).filter(|w| w[0].1 != w[1].1).count();
    let idx = scan
        .windows(2)
        .rposition(|w| !w[0].1 && w[1].1)
        .expect("a false to true transition exists");
    let (mut lo, mut hi) = (scan[idx].0, scan[idx + 1].0);
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if verdict(mid)? {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(CriticalTimeResult {
        t_star: hi,
        bracket: (lo, hi),
        monotone_verified: changes == 1,
        scan_grid: scan,
    })
}

/// Whether the unique mode of μ ∗ N(0, t) lies in [−√t/2, √t/2].
pub fn mode_location_bound_check(mu: &ProbabilityMeasure, t: f64) -> Result<bool> {
    let report = is_unimodal(mu, ProcessKind::ClassicalGaussian, t)?;
    let half = 0.5 * t.sqrt();
    Ok(report.unimodal && report.mode_locations[0].abs() <= half)
}

/// Free profile together with its subordination state, for callers that
/// need both.
pub fn free_profile_report(state: &BianeState<'_>, n_points: usize) -> Result<(DensityProfile, ModalityReport)> {
    let profile = state.profile(n_points)?;
    let report = count_modes_profile(&profile)?;
    Ok((profile, report))
}
