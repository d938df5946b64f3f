//! Riesz-type summability diagnostics for uncertain variables.
//!
//! The crate models finite uncertainty spaces carrying a non-additive
//! measure, sequences of uncertain variables on them, and weighted-mean
//! (Riesz) transforms of those sequences.  On top of that it provides
//! finite-horizon diagnostics for the classical convergence classes
//! (almost sure, in measure, in mean, in distribution, slow oscillation)
//! and their transform-domain counterparts, Orlicz-modulated gaps, and a
//! scenario layer that packages spaces, sequences, weights and expected
//! verdicts into reproducible fixtures.
//!
//! Everything numeric is generic over the scalar type through [`Real`];
//! the aliases below fix `f64`, which is what the command line tool and
//! the shipped scenario corpus use.

pub mod convergence;
pub mod error;
pub mod orlicz;
pub mod scalar;
pub mod scenarios;
pub mod summability;
pub mod uncertainty;

pub use error::{Error, Result};
pub use scalar::Real;

/// Uncertainty space over `f64`.
pub type Space = uncertainty::UncertaintySpace<f64>;
/// Uncertain variable over `f64`.
pub type Variable = uncertainty::UncertainVariable<f64>;
/// Uncertain sequence over `f64`.
pub type Sequence = uncertainty::UncertainSequence<f64>;
/// Riesz weight sequence over `f64`.
pub type Weights = summability::WeightSequence<f64>;
/// Orlicz function choice over `f64`.
pub type Orlicz = orlicz::OrliczSpec<f64>;
/// Diagnostic configuration over `f64`.
pub type Config = convergence::DiagnosticConfig<f64>;
/// Classification report over `f64`.
pub type Report = convergence::ClassReport<f64>;
