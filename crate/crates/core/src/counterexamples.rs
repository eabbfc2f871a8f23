//! Truncated measures whose convolutions are never unimodal, and numerical
//! witnesses of their non-unimodality.
//!
//! Each construction places atoms at a_k = a^k for k = 1..N with weights
//! that decay fast enough for the far atoms to produce isolated bumps. The
//! infinite measures are non-unimodal at every time; a truncation becomes
//! unimodal once t is large compared to its span, so witnesses are only ever
//! claimed at specific times.

use serde::{Deserialize, Serialize};

use crate::biane::{self, Interval};
use crate::error::{Error, Result};
use crate::kernel::{ConvolvedDensity, ProcessKind};
use crate::measure::{AtomicMeasure, ProbabilityMeasure, Repr};
use crate::modality::{self, ModalityReport, DEFAULT_PROFILE_POINTS, DEFAULT_SCAN_GRID, MODE_PROMINENCE};

/// A witness must beat its numerical error estimate by this factor.
pub const MARGIN_FACTOR: f64 = 10.0;

/// Weight rule for the free construction: f ≡ 1 or f(x) = e^{x²}.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FreeWeight {
    One,
    ExpSquare,
}

/// Construction-specific parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "construction", rename_all = "snake_case")]
pub enum Construction {
    Free { f: FreeWeight },
    Classical { delta: f64 },
    Cauchy { r: f64 },
    Levy,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleSpec {
    pub a: f64,
    pub n_atoms: usize,
    pub construction: Construction,
}

impl CounterexampleSpec {
    /// Default parameters for the construction attached to `process`. Each
    /// default yields witnesses at t ∈ {0.5, 1, 2, 5, 10}.
    pub fn default_for(process: ProcessKind) -> Self {
        match process {
            ProcessKind::FreeSemicircle => Self {
                a: 2.0,
                n_atoms: 8,
                construction: Construction::Free { f: FreeWeight::One },
            },
            ProcessKind::ClassicalGaussian => Self {
                a: 2.0,
                n_atoms: 6,
                construction: Construction::Classical { delta: 1e-4 },
            },
            // a = 2 with r = 1 leaves every truncation unimodal from t ≈ 5 on
            ProcessKind::Cauchy => Self {
                a: 3.0,
                n_atoms: 8,
                construction: Construction::Cauchy { r: 3.0 },
            },
            // a = 3 loses the far bumps from t ≈ 5 on; a = 50 keeps them up to
            // t = 10 while a^N stays well inside double resolution
            ProcessKind::LevyHalf => Self {
                a: 50.0,
                n_atoms: 6,
                construction: Construction::Levy,
            },
        }
    }

    pub fn process(&self) -> ProcessKind {
        match self.construction {
            Construction::Free { .. } => ProcessKind::FreeSemicircle,
            Construction::Classical { .. } => ProcessKind::ClassicalGaussian,
            Construction::Cauchy { .. } => ProcessKind::Cauchy,
            Construction::Levy => ProcessKind::LevyHalf,
        }
    }

    pub fn build(&self) -> Result<AtomicMeasure> {
        match self.construction {
            Construction::Free { f } => build_free_counterexample(self.a, self.n_atoms, f),
            Construction::Classical { delta } => build_classical_counterexample(self.a, self.n_atoms, delta),
            Construction::Cauchy { r } => build_cauchy_counterexample(self.a, self.n_atoms, r),
            Construction::Levy => build_levy_counterexample(self.a, self.n_atoms),
        }
    }

    /// Points where the constructions' derivative signs are decided.
    pub fn probe_points(&self, atoms: &[f64]) -> Vec<f64> {
        match self.construction {
            Construction::Free { .. } => atoms.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect(),
            Construction::Classical { .. } | Construction::Cauchy { .. } => atoms.iter().map(|a| a - 1.0).collect(),
            Construction::Levy => atoms.iter().map(|a| a + 1.0).collect(),
        }
    }
}

fn geometric_atoms(a: f64, n: usize, strict: bool) -> Result<Vec<f64>> {
    if !(a >= 2.0) || (strict && a <= 2.0) {
        let rel = if strict { ">" } else { ">=" };
        return Err(Error::Domain(format!("base must be {rel} 2, got {a}")));
    }
    if n < 4 {
        return Err(Error::Domain(format!("need at least 4 atoms, got {n}")));
    }
    let atoms: Vec<f64> = (1..=n).map(|k| a.powi(k as i32)).collect();
    if !atoms[n - 1].is_finite() {
        return Err(Error::Domain(format!("a^N overflows for a = {a}, N = {n}")));
    }
    Ok(atoms)
}

/// Normalizes weights given by their logarithms. Weights that underflow are
/// raised to the smallest positive normal double before renormalizing.
fn from_log_weights(atoms: Vec<f64>, log_w: &[f64]) -> Result<AtomicMeasure> {
    let top = log_w.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let raw: Vec<f64> = log_w.iter().map(|l| (l - top).exp()).collect();
    let sum: f64 = raw.iter().sum();
    let weights: Vec<f64> = raw.iter().map(|w| (w / sum).max(f64::MIN_POSITIVE)).collect();
    AtomicMeasure::from_unnormalized(atoms, weights)
}

/// b_k = min over n ≠ k of |a_k − a_n − shift|.
pub fn gap_offsets(atoms: &[f64], shift: f64) -> Vec<f64> {
    atoms
        .iter()
        .enumerate()
        .map(|(k, ak)| {
            atoms
                .iter()
                .enumerate()
                .filter(|(n, _)| *n != k)
                .map(|(_, an)| (ak - an - shift).abs())
                .fold(f64::INFINITY, f64::min)
        })
        .collect()
}

/// Atoms a^n, weights ∝ 1/(n² max{f(a^n), 1}).
pub fn build_free_counterexample(a: f64, n: usize, f: FreeWeight) -> Result<AtomicMeasure> {
    let atoms = geometric_atoms(a, n, false)?;
    let log_w: Vec<f64> = atoms
        .iter()
        .enumerate()
        .map(|(i, x)| {
            let log_f = match f {
                FreeWeight::One => 0.0,
                FreeWeight::ExpSquare => x * x,
            };
            -2.0 * ((i + 1) as f64).ln() - log_f.max(0.0)
        })
        .collect();
    from_log_weights(atoms, &log_w)
}

/// Atoms a^k, weights ∝ e^{−δ b_k²/k} with b_k = min |a_k − a_n − 1|.
pub fn build_classical_counterexample(a: f64, n: usize, delta: f64) -> Result<AtomicMeasure> {
    if !(delta > 0.0) {
        return Err(Error::Domain(format!("delta must be positive, got {delta}")));
    }
    let atoms = geometric_atoms(a, n, false)?;
    let b = gap_offsets(&atoms, 1.0);
    let log_w: Vec<f64> = b
        .iter()
        .enumerate()
        .map(|(i, bk)| -delta * bk * bk / (i + 1) as f64)
        .collect();
    from_log_weights(atoms, &log_w)
}

/// Atoms a^n, weights ∝ n^r a^{−3n}.
pub fn build_cauchy_counterexample(a: f64, n: usize, r: f64) -> Result<AtomicMeasure> {
    if !(r > 0.0) {
        return Err(Error::Domain(format!("r must be positive, got {r}")));
    }
    let atoms = geometric_atoms(a, n, false)?;
    let log_w: Vec<f64> = (1..=n)
        .map(|k| r * (k as f64).ln() - 3.0 * k as f64 * a.ln())
        .collect();
    from_log_weights(atoms, &log_w)
}

/// Atoms a^k, weights ∝ k a^{−5k/2}, with a > 2.
pub fn build_levy_counterexample(a: f64, n: usize) -> Result<AtomicMeasure> {
    let atoms = geometric_atoms(a, n, true)?;
    let log_w: Vec<f64> = (1..=n)
        .map(|k| (k as f64).ln() - 2.5 * k as f64 * a.ln())
        .collect();
    from_log_weights(atoms, &log_w)
}

/// What a witness found.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Evidence {
    /// The density falls at `descent` and rises again at `ascent > descent`.
    DerivativeSign {
        descent: f64,
        descent_slope: f64,
        ascent: f64,
        ascent_slope: f64,
        modes: Vec<f64>,
    },
    /// The support has several components (U_t is disconnected).
    Components { count: usize, intervals: Vec<Interval> },
    /// Several prominent maxima of a tabulated density.
    Modes { locations: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NonUnimodalWitness {
    pub t: f64,
    pub evidence: Evidence,
    /// Certified slack: the size of the deciding quantity.
    pub margin: f64,
    /// Numerical error estimate the margin was compared against.
    pub tolerance: f64,
}

/// Looks for evidence that the convolution of μ at time t is not unimodal.
pub fn witness_non_unimodal(mu: &ProbabilityMeasure, process: ProcessKind, t: f64) -> Result<NonUnimodalWitness> {
    witness_with_probes(mu, process, t, &[])
}

/// As [`witness_non_unimodal`], also scanning the given probe points.
pub fn witness_with_probes(
    mu: &ProbabilityMeasure,
    process: ProcessKind,
    t: f64,
    probes: &[f64],
) -> Result<NonUnimodalWitness> {
    if !matches!(mu.repr(), Repr::Atoms(_)) {
        return Err(Error::Domain("witness search expects an atomic measure".into()));
    }
    if process.is_free() {
        free_witness(mu, t)
    } else {
        classical_witness(mu, process, t, probes)
    }
}

fn free_witness(mu: &ProbabilityMeasure, t: f64) -> Result<NonUnimodalWitness> {
    let state = biane::BianeState::new(mu, t)?;
    let intervals = state.intervals().to_vec();
    if intervals.len() >= 2 {
        // between components X_μ dips below 1/t; the margin is the depth of
        // the shallowest dip, relative to 1/t
        let target = 1.0 / t;
        let mut margin = f64::INFINITY;
        for w in intervals.windows(2) {
            let u = 0.5 * (w[0].r + w[1].l);
            margin = margin.min((target - biane::x_functional(mu, u)) / target);
        }
        let tolerance = MARGIN_FACTOR * biane::DEFAULT_TOL;
        if margin > tolerance {
            return Ok(NonUnimodalWitness {
                t,
                evidence: Evidence::Components {
                    count: intervals.len(),
                    intervals,
                },
                margin,
                tolerance,
            });
        }
    }
    let (profile, report) = modality::free_profile_report(&state, DEFAULT_PROFILE_POINTS)?;
    if report.mode_count >= 2 {
        let peak = profile.peak().map(|p| p.1).unwrap_or(0.0);
        let margin = shallowest_dip(&profile.xs, &profile.ps, &report) / peak;
        let tolerance = MARGIN_FACTOR * MODE_PROMINENCE;
        if margin > tolerance {
            return Ok(NonUnimodalWitness {
                t,
                evidence: Evidence::Modes {
                    locations: report.mode_locations,
                },
                margin,
                tolerance,
            });
        }
    }
    Err(Error::NoWitness { t })
}

/// Smallest drop from a mode down to the valley separating it from the next.
fn shallowest_dip(xs: &[f64], ps: &[f64], report: &ModalityReport) -> f64 {
    let value_at = |x: f64| {
        let i = xs.partition_point(|v| *v < x).min(xs.len() - 1);
        ps[i]
    };
    report
        .mode_locations
        .windows(2)
        .map(|w| {
            let (i0, i1) = (xs.partition_point(|v| *v < w[0]), xs.partition_point(|v| *v < w[1]));
            let valley = ps[i0..=i1.min(ps.len() - 1)].iter().cloned().fold(f64::INFINITY, f64::min);
            value_at(w[0]).min(value_at(w[1])) - valley
        })
        .fold(f64::INFINITY, f64::min)
}

fn classical_witness(
    mu: &ProbabilityMeasure,
    process: ProcessKind,
    t: f64,
    probes: &[f64],
) -> Result<NonUnimodalWitness> {
    let cd = ConvolvedDensity::new(mu, process, t)?;
    let report = modality::count_modes_derivative_with_probes(&cd, None, DEFAULT_SCAN_GRID, probes)?;
    if report.mode_count < 2 {
        return Err(Error::NoWitness { t });
    }
    // strongest descent and ascent around the first valley
    let (m0, m1) = (report.mode_locations[0], report.mode_locations[1]);
    let (lo, hi) = cd.default_window();
    let mut xs: Vec<f64> = (0..DEFAULT_SCAN_GRID)
        .map(|i| lo + (hi - lo) * i as f64 / (DEFAULT_SCAN_GRID - 1) as f64)
        .filter(|x| *x > m0 && *x < m1)
        .collect();
    xs.extend(probes.iter().filter(|x| **x > m0 && **x < m1));
    xs.extend((1..64).map(|i| m0 + (m1 - m0) * i as f64 / 64.0));
    // steep flanks can be much narrower than the gap between modes
    for j in 1..=60 {
        let h = (m1 - m0) * 0.5f64.powi(j);
        xs.push(m0 + h);
        xs.push(m1 - h);
    }
    let mut best_descent = (f64::NAN, 0.0f64, 0.0f64);
    let mut best_ascent = (f64::NAN, 0.0f64, 0.0f64);
    for &x in &xs {
        let d = cd.density_derivative(x, 1)?;
        let err = cd.evaluation_error_bound(x, 1);
        if -d > best_descent.1 {
            best_descent = (x, -d, err);
        }
        if d > best_ascent.1 {
            best_ascent = (x, d, err);
        }
    }
    let margin = best_descent.1.min(best_ascent.1);
    let tolerance = MARGIN_FACTOR * best_descent.2.max(best_ascent.2).max(f64::MIN_POSITIVE);
    if !(best_descent.0 < best_ascent.0) || margin <= tolerance {
        return Err(Error::NoWitness { t });
    }
    Ok(NonUnimodalWitness {
        t,
        evidence: Evidence::DerivativeSign {
            descent: best_descent.0,
            descent_slope: -best_descent.1,
            ascent: best_ascent.0,
            ascent_slope: best_ascent.1,
            modes: report.mode_locations,
        },
        margin,
        tolerance,
    })
}

/// Witness for a generated counterexample, scanning its proof probe points.
pub fn witness_for_spec(spec: &CounterexampleSpec, t: f64) -> Result<NonUnimodalWitness> {
    let atomic = spec.build()?;
    let probes = spec.probe_points(atomic.atoms());
    let mu: ProbabilityMeasure = atomic.into();
    witness_with_probes(&mu, spec.process(), t, &probes)
}

/// A dilated Bernoulli law whose free convolution is not unimodal, along with
/// the matching level set of its Cauchy convolution.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StrongWitness {
    pub s: f64,
    pub t: f64,
    pub report: ModalityReport,
    /// Density level a between the valley and the lower peak.
    pub level: f64,
    /// R = π a t.
    pub cauchy_scale: f64,
    /// Solutions of ξ_R(u) = 1/t.
    pub free_crossings: usize,
    /// Solutions of (μ ∗ C_R)(u) = R/(πt), the same equation rescaled.
    pub cauchy_crossings: usize,
}

/// Checks a single (s, t) pair of the dilated Bernoulli family.
pub fn strong_witness_at(s: f64, t: f64) -> Result<Option<StrongWitness>> {
    let mu = ProbabilityMeasure::bernoulli(s);
    let profile = biane::free_density_profile(&mu, t, DEFAULT_PROFILE_POINTS)?;
    let report = modality::count_modes_profile(&profile)?;
    if report.unimodal || report.mode_count < 2 {
        return Ok(None);
    }
    let value_at = |x: f64| {
        let i = profile.xs.partition_point(|v| *v < x).min(profile.len() - 1);
        profile.ps[i]
    };
    let (m0, m1) = (report.mode_locations[0], report.mode_locations[1]);
    let lower_peak = value_at(m0).min(value_at(m1));
    let valley = profile
        .xs
        .iter()
        .zip(&profile.ps)
        .filter(|(x, _)| **x > m0 && **x < m1)
        .map(|(_, p)| *p)
        .fold(lower_peak, f64::min);
    let level = 0.5 * (valley + lower_peak);
    let r = std::f64::consts::PI * level * t;
    let free_crossings = modality::level_crossings(&mu, ProcessKind::FreeSemicircle, t, level)?;
    let cauchy_crossings = modality::level_crossings(&mu, ProcessKind::Cauchy, r, r / (std::f64::consts::PI * t))?;
    if free_crossings < 3 || cauchy_crossings < 3 {
        return Ok(None);
    }
    Ok(Some(StrongWitness {
        s,
        t,
        report,
        level,
        cauchy_scale: r,
        free_crossings,
        cauchy_crossings,
    }))
}

/// Scans scales (outer) and times (inner) and returns the first witness.
pub fn strong_unimodality_witness_search(scale_grid: &[f64], t_grid: &[f64]) -> Result<Option<StrongWitness>> {
    for &s in scale_grid {
        for &t in t_grid {
            if let Some(w) = strong_witness_at(s, t)? {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}
