//! Sufficient unimodality thresholds and their numerical verification.

use std::collections::BTreeMap;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::ProcessKind;
use crate::measure::ProbabilityMeasure;
use crate::modality::{critical_time, is_unimodal};

/// Smallest base time used when a bound degenerates to zero.
pub const ZERO_BOUND_FLOOR: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Theorem {
    /// μ ⊞ S(0, t) is unimodal for t ≥ 4 D².
    #[serde(rename = "free_4D2")]
    Free4D2,
    /// μ ∗ N(0, t) is unimodal for t ≥ 36 ln(2α)/ε, α = ∫ e^{ε x²} dμ.
    #[serde(rename = "classical_gaussian_tail")]
    ClassicalGaussianTail,
    /// μ ∗ C_t is unimodal for t ≥ 20 β^{1/3}, β = ∫ |x|³ dμ.
    #[serde(rename = "cauchy_third_moment")]
    CauchyThirdMoment,
    /// μ ∗ L_t is unimodal for t ≥ 22.5^{1/4} √D.
    #[serde(rename = "levy_diameter")]
    LevyDiameter,
}

impl Theorem {
    pub fn process(self) -> ProcessKind {
        match self {
            Theorem::Free4D2 => ProcessKind::FreeSemicircle,
            Theorem::ClassicalGaussianTail => ProcessKind::ClassicalGaussian,
            Theorem::CauchyThirdMoment => ProcessKind::Cauchy,
            Theorem::LevyDiameter => ProcessKind::LevyHalf,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Theorem::Free4D2 => "free_4D2",
            Theorem::ClassicalGaussianTail => "classical_gaussian_tail",
            Theorem::CauchyThirdMoment => "cauchy_third_moment",
            Theorem::LevyDiameter => "levy_diameter",
        }
    }

    pub fn from_name(name: &str) -> Option<Self> {
        [
            Theorem::Free4D2,
            Theorem::ClassicalGaussianTail,
            Theorem::CauchyThirdMoment,
            Theorem::LevyDiameter,
        ]
        .into_iter()
        .find(|t| t.name() == name)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ThresholdReport {
    pub theorem: Theorem,
    pub inputs: BTreeMap<String, f64>,
    pub bound: f64,
    pub verified_at: Vec<(f64, bool)>,
    pub falsified: bool,
}

pub fn free_bound(d: f64) -> Result<f64> {
    nonnegative("diameter", d)?;
    Ok(4.0 * d * d)
}

pub fn classical_bound(eps: f64, alpha: f64) -> Result<f64> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps must be positive, got {eps}")));
    }
    if !(alpha >= 1.0) {
        return Err(Error::Domain(format!("alpha must be at least 1, got {alpha}")));
    }
    Ok(36.0 * (2.0 * alpha).ln() / eps)
}

pub fn cauchy_bound(beta: f64) -> Result<f64> {
    nonnegative("beta", beta)?;
    Ok(20.0 * beta.cbrt())
}

pub fn levy_bound(d: f64) -> Result<f64> {
    nonnegative("diameter", d)?;
    Ok(22.5f64.powf(0.25) * d.sqrt())
}

fn nonnegative(name: &str, x: f64) -> Result<()> {
    if x >= 0.0 && x.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be a nonnegative real, got {x}")))
    }
}

/// Bound for μ together with the functionals it was computed from.
/// `eps` is used only by the Gaussian theorem.
pub fn bound_for(mu: &ProbabilityMeasure, theorem: Theorem, eps: f64) -> Result<(f64, BTreeMap<String, f64>)> {
    let mut inputs = BTreeMap::new();
    let bound = match theorem {
        Theorem::Free4D2 => {
            let d = mu.diameter();
            inputs.insert("D".to_string(), d);
            free_bound(d)?
        }
        Theorem::ClassicalGaussianTail => {
            let alpha = mu.gaussian_tail_functional(eps)?;
            if !alpha.is_finite() {
                return Err(Error::Hypothesis("the Gaussian tail functional is infinite".into()));
            }
            inputs.insert("eps".to_string(), eps);
            inputs.insert("alpha".to_string(), alpha);
            classical_bound(eps, alpha)?
        }
        Theorem::CauchyThirdMoment => {
            let beta = mu.abs_moment(3.0)?;
            inputs.insert("beta".to_string(), beta);
            cauchy_bound(beta)?
        }
        Theorem::LevyDiameter => {
            let d = mu.diameter();
            inputs.insert("D".to_string(), d);
            levy_bound(d)?
        }
    };
    Ok((bound, inputs))
}

/// Times at which a bound is checked: bound × {1, 1.5, 2, 4, 8, …}.
pub fn verification_times(bound: f64, n_times: usize) -> Vec<f64> {
    let base = if bound > 0.0 { bound } else { ZERO_BOUND_FLOOR };
    (0..n_times)
        .map(|i| match i {
            0 => base,
            1 => 1.5 * base,
            _ => base * 2f64.powi(i as i32 - 1),
        })
        .collect()
}

/// Computes the theorem's bound for μ and checks unimodality above it.
pub fn verify_threshold(mu: &ProbabilityMeasure, theorem: Theorem, n_times: usize) -> Result<ThresholdReport> {
    verify_threshold_with_eps(mu, theorem, n_times, 1.0)
}

pub fn verify_threshold_with_eps(
    mu: &ProbabilityMeasure,
    theorem: Theorem,
    n_times: usize,
    eps: f64,
) -> Result<ThresholdReport> {
    if n_times == 0 {
        return Err(Error::Domain("need at least one verification time".into()));
    }
    let (bound, inputs) = bound_for(mu, theorem, eps)?;
    let times = verification_times(bound, n_times);
    verify_at_times(mu, theorem, bound, inputs, &times)
}

/// Checks unimodality at caller-chosen times (all at or above the bound).
pub fn verify_at_times(
    mu: &ProbabilityMeasure,
    theorem: Theorem,
    bound: f64,
    inputs: BTreeMap<String, f64>,
    times: &[f64],
) -> Result<ThresholdReport> {
    let mut verified_at = Vec::with_capacity(times.len());
    for &t in times {
        verified_at.push((t, is_unimodal(mu, theorem.process(), t)?.unimodal));
    }
    verified_at.sort_by(|a, b| a.0.total_cmp(&b.0));
    let falsified = verified_at.iter().any(|&(t, ok)| t >= bound && !ok);
    Ok(ThresholdReport {
        theorem,
        inputs,
        bound,
        verified_at,
        falsified,
    })
}

/// Observed free critical times relative to D².
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapProbe {
    pub ratios: Vec<f64>,
    pub max_ratio: f64,
    pub window: (f64, f64),
}

/// For each measure, bisects the free critical time t* and reports t*/D².
/// The sufficient constant is known to lie in [2, 4]; every ratio must be at
/// most 4.
pub fn constant_gap_probe(family: &[ProbabilityMeasure], tol: f64) -> Result<GapProbe> {
    let mut ratios = Vec::with_capacity(family.len());
    for mu in family {
        let d = mu.diameter();
        if !(d > 0.0) {
            return Err(Error::Hypothesis("constant gap probe needs measures with positive diameter".into()));
        }
        let d2 = d * d;
        let hi = 4.0 * d2 * 1.05;
        let mut lo = 0.01 * d2;
        let mut tries = 0;
        while is_unimodal(mu, ProcessKind::FreeSemicircle, lo)?.unimodal {
            tries += 1;
            if tries > 6 {
                return Err(Error::Bracket("free convolution is unimodal across the whole probe range".into()));
            }
            lo *= 0.1;
        }
        let r = critical_time(mu, ProcessKind::FreeSemicircle, (lo, hi), tol * d2)?;
        ratios.push(r.t_star / d2);
    }
    let max_ratio = ratios.iter().cloned().fold(0.0, f64::max);
    Ok(GapProbe {
        ratios,
        max_ratio,
        window: (2.0, 4.0),
    })
}

/// 3 to 6 atoms uniform in [0, 1] with Dirichlet(1, …, 1) weights.
pub fn random_atomic_measure<R: Rng>(rng: &mut R) -> ProbabilityMeasure {
    let n = rng.gen_range(3..=6);
    random_atomic_measure_with(rng, n)
}

/// `n` atoms uniform in [0, 1] with Dirichlet(1, …, 1) weights.
pub fn random_atomic_measure_with<R: Rng>(rng: &mut R, n: usize) -> ProbabilityMeasure {
    let atoms: Vec<f64> = (0..n).map(|_| rng.gen::<f64>()).collect();
    let raw: Vec<f64> = (0..n).map(|_| rng.sample::<f64, _>(Exp1) + f64::MIN_POSITIVE).collect();
    crate::measure::AtomicMeasure::from_unnormalized(atoms, raw)
        .expect("random atoms and positive weights form a valid measure")
        .into()
}

/// Deterministic family of `count` random measures from `seed`.
pub fn random_family(seed: u64, count: usize) -> Vec<ProbabilityMeasure> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| random_atomic_measure(&mut rng)).collect()
}
