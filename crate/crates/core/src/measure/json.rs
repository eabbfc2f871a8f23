//! The measure JSON schema.

use serde::{Deserialize, Serialize};

use super::{AtomicMeasure, Family, GriddedDensity, ProbabilityMeasure};
use crate::error::Result;

/// Wire form of a measure, tagged by `"type"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureDocument {
    Atomic { atoms: Vec<f64>, weights: Vec<f64> },
    Density { grid: Vec<f64>, values: Vec<f64> },
    Bernoulli { a: f64 },
    PointMass { a: f64 },
    Uniform { l: f64, r: f64 },
    Triangle { l: f64, m: f64, r: f64 },
    Semicircle { t: f64 },
}

/// Parses and validates a measure document.
pub fn parse_measure(document: &[u8]) -> Result<ProbabilityMeasure> {
    let doc: MeasureDocument = serde_json::from_slice(document)?;
    doc.into_measure()
}

impl MeasureDocument {
    pub fn into_measure(self) -> Result<ProbabilityMeasure> {
        Ok(match self {
            MeasureDocument::Atomic { atoms, weights } => AtomicMeasure::new(atoms, weights)?.into(),
            MeasureDocument::Density { grid, values } => GriddedDensity::new(grid, values)?.into(),
            MeasureDocument::Bernoulli { a } => ProbabilityMeasure::named(Family::Bernoulli { a })?,
            MeasureDocument::PointMass { a } => ProbabilityMeasure::named(Family::PointMass { a })?,
            MeasureDocument::Uniform { l, r } => ProbabilityMeasure::named(Family::Uniform { l, r })?,
            MeasureDocument::Triangle { l, m, r } => ProbabilityMeasure::named(Family::Triangle { l, m, r })?,
            MeasureDocument::Semicircle { t } => ProbabilityMeasure::named(Family::Semicircle { t })?,
        })
    }
}

impl From<&ProbabilityMeasure> for MeasureDocument {
    fn from(m: &ProbabilityMeasure) -> Self {
        match m {
            ProbabilityMeasure::Atomic(a) => MeasureDocument::Atomic {
                atoms: a.atoms().to_vec(),
                weights: a.weights().to_vec(),
            },
            ProbabilityMeasure::Density(d) => MeasureDocument::Density {
                grid: d.grid().to_vec(),
                values: d.values().to_vec(),
            },
            ProbabilityMeasure::Named(n) => match n.family() {
                Family::Bernoulli { a } => MeasureDocument::Bernoulli { a },
                Family::PointMass { a } => MeasureDocument::PointMass { a },
                Family::Uniform { l, r } => MeasureDocument::Uniform { l, r },
                Family::Triangle { l, m, r } => MeasureDocument::Triangle { l, m, r },
                Family::Semicircle { t } => MeasureDocument::Semicircle { t },
            },
        }
    }
}

impl ProbabilityMeasure {
    pub fn to_json(&self) -> String {
        serde_json::to_string(&MeasureDocument::from(self)).expect("measure documents always serialize")
    }
}
