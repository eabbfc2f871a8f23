//! Sampled density curves.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::kernel::{ConvolvedDensity, ProcessKind};
use crate::measure::trapezoid;

/// A density tabulated at increasing abscissae.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityProfile {
    pub process: ProcessKind,
    pub t: f64,
    pub xs: Vec<f64>,
    pub ps: Vec<f64>,
    /// Subordination abscissae behind each point, for free profiles.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub us: Option<Vec<f64>>,
}

impl DensityProfile {
    /// Builds a profile from raw samples, checking that x strictly increases.
    pub fn new(process: ProcessKind, t: f64, xs: Vec<f64>, ps: Vec<f64>) -> Result<Self> {
        if xs.len() != ps.len() || xs.len() < 2 {
            return Err(Error::Domain("profile needs matching x and p columns of length at least 2".into()));
        }
        if xs.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Domain("profile abscissae must be strictly increasing".into()));
        }
        Ok(Self { process, t, xs, ps, us: None })
    }

    /// Samples a convolved density on `n` equally spaced points of `[lo, hi]`.
    pub fn sample(cd: &ConvolvedDensity<'_>, window: (f64, f64), n: usize) -> Result<Self> {
        let (lo, hi) = window;
        if !(hi > lo) || n < 2 {
            return Err(Error::Domain(format!("cannot sample {n} points on [{lo}, {hi}]")));
        }
        let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let ps = xs.iter().map(|&x| cd.density(x)).collect::<Result<Vec<_>>>()?;
        Self::new(cd.kind(), cd.t(), xs, ps)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    /// Trapezoid mass.
    pub fn mass(&self) -> f64 {
        trapezoid(&self.xs, &self.ps)
    }

    /// Number of maximal runs of strictly positive values.
    pub fn support_components(&self) -> usize {
        let mut runs = 0;
        let mut inside = false;
        for &p in &self.ps {
            if p > 0.0 && !inside {
                runs += 1;
            }
            inside = p > 0.0;
        }
        runs
    }

    pub fn peak(&self) -> Option<(f64, f64)> {
        self.xs
            .iter()
            .zip(&self.ps)
            .map(|(&x, &p)| (x, p))
            .fold(None, |best: Option<(f64, f64)>, cur| match best {
                Some(b) if b.1 >= cur.1 => Some(b),
                _ => Some(cur),
            })
    }
}
