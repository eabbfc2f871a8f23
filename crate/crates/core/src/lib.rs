//! Numerical study of unimodality for free and classical convolution
//! semigroups: densities of μ ⊞ S(0, t), μ ∗ N(0, t), μ ∗ C_t and μ ∗ L_t,
//! mode counting, critical times, sufficient thresholds and truncated
//! counterexample measures.

pub mod biane;
pub mod counterexamples;
pub mod error;
pub mod kernel;
pub mod measure;
pub mod modality;
pub mod profile;
pub mod quadrature;
pub mod roots;
pub mod thresholds;

pub use biane::{free_density, free_density_profile, BianeState, FreeDensityPoint, Interval};
pub use error::{Error, Result};
pub use kernel::{kernel, ConvolvedDensity, ProcessKind};
pub use measure::{parse_measure, AtomicMeasure, Family, GriddedDensity, MeasureDocument, ProbabilityMeasure};
pub use profile::DensityProfile;
pub use modality::{critical_time, is_unimodal, level_crossings, CriticalTimeResult, ModalityReport};
pub use thresholds::{verify_threshold, Theorem, ThresholdReport};
pub use counterexamples::{witness_non_unimodal, CounterexampleSpec, NonUnimodalWitness};
