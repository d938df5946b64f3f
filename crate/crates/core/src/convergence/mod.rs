//! Finite-horizon convergence diagnostics.
//!
//! Every limit statement handled here is finitized the same way: a gap
//! profile is evaluated for each index, and the tail window (the last
//! `tail_fraction` share of the profile) decides an EMPIRICAL verdict.
//! A tail that stays at or below the tolerance passes; a tail pinned
//! strictly above ten times the tolerance fails; anything in between
//! is inconclusive.  Ties at the tolerance pass, ties at the tenfold
//! boundary stay inconclusive.

mod classify;
mod gaps;

pub use classify::{classify, default_distribution_grid, ClassReport, ClassRow};
pub use gaps::{
    as_gap, borel_cantelli_budget, borel_cantelli_with, dist_gap, extract_uas_subsequence,
    markov_check, mean_gap, measure_gap, moment_decay_fit, riesz_gap, slow_osc_gap,
    uniform_tail_gap, uniform_tail_gap_raw, uniqueness_bound, BorelCantelliBudget, GapKind,
    MomentDecayFit, UasExtraction,
};

use crate::error::{Error, Result};
use crate::scalar::{real, Real};

/// Grids, window, and thresholds steering the diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct DiagnosticConfig<T> {
    /// Deviation thresholds for the in-measure style classes.
    pub epsilon_grid: Vec<T>,
    /// Window stretch factors for slow oscillation.
    pub lambda_grid: Vec<T>,
    /// Share of the horizon that counts as "eventually", in `(0, 1]`.
    pub tail_fraction: T,
    /// Gap threshold for an EMPIRICAL pass.
    pub tolerance: T,
    /// Maximum index evaluated.
    pub horizon: usize,
}

impl<T: Real> DiagnosticConfig<T> {
    pub fn new(horizon: usize) -> Self {
        DiagnosticConfig {
            epsilon_grid: vec![real(1e-1), real(1e-2), real(1e-3)],
            lambda_grid: vec![real(0.5), real(1.0)],
            tail_fraction: real(0.1),
            tolerance: real(1e-6),
            horizon,
        }
    }

    pub fn with_tolerance(mut self, tolerance: T) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_epsilon_grid(mut self, grid: Vec<T>) -> Self {
        self.epsilon_grid = grid;
        self
    }

    pub fn with_lambda_grid(mut self, grid: Vec<T>) -> Self {
        self.lambda_grid = grid;
        self
    }

    pub fn with_tail_fraction(mut self, tail_fraction: T) -> Self {
        self.tail_fraction = tail_fraction;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.horizon < 10 {
            return Err(Error::InvalidParameter(format!(
                "diagnostic horizon must be at least 10, got {}",
                self.horizon
            )));
        }
        if self.epsilon_grid.is_empty() || self.lambda_grid.is_empty() {
            return Err(Error::InvalidParameter(
                "epsilon and lambda grids must be nonempty".into(),
            ));
        }
        for &e in self.epsilon_grid.iter().chain(self.lambda_grid.iter()) {
            if !e.is_finite() || e <= T::zero() {
                return Err(Error::InvalidParameter(
                    "grid entries must be positive and finite".into(),
                ));
            }
        }
        if !(self.tail_fraction > T::zero() && self.tail_fraction <= T::one()) {
            return Err(Error::InvalidParameter(
                "tail fraction must lie in (0, 1]".into(),
            ));
        }
        if !self.tolerance.is_finite() || self.tolerance <= T::zero() {
            return Err(Error::InvalidParameter(
                "tolerance must be positive and finite".into(),
            ));
        }
        Ok(())
    }
}

/// EMPIRICAL membership verdict for one diagnostic row.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::Inconclusive => "inconclusive",
        }
    }
}

/// Per-index gap values for one class and parameter choice.
///
/// `values[i]` is the gap at index `i + 1`; profiles that stop early
/// (slow-oscillation windows hitting the horizon) simply hold fewer
/// entries.
#[derive(Clone, Debug)]
pub struct GapProfile<T> {
    pub label: String,
    pub parameter: Option<String>,
    pub values: Vec<T>,
}

/// Tail-window summary backing a verdict.
#[derive(Clone, Copy, Debug)]
pub struct TailStats<T> {
    /// First index (1-based) inside the window.
    pub start: usize,
    pub tail_max: T,
    pub tail_min: T,
    pub verdict: Verdict,
}

/// Applies the tail-window rule to a gap profile.
pub fn tail_stats<T: Real>(
    values: &[T],
    tail_fraction: T,
    tolerance: T,
) -> Result<TailStats<T>> {
    if values.is_empty() {
        return Err(Error::EmptyGrid("gap profile has no entries".into()));
    }
    let frac = tail_fraction.to_f64().unwrap_or(0.1);
    let start = crate::summability::tail_start(values.len(), frac);
    let tail = &values[start - 1..];
    let tail_max = tail.iter().cloned().fold(T::neg_infinity(), T::max);
    let tail_min = tail.iter().cloned().fold(T::infinity(), T::min);
    let ten = real::<T>(10.0);
    let verdict = if tail_max <= tolerance {
        Verdict::Pass
    } else if tail_min > ten * tolerance {
        Verdict::Fail
    } else {
        Verdict::Inconclusive
    };
    Ok(TailStats {
        start,
        tail_max,
        tail_min,
        verdict,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tie_at_tolerance_passes() {
        let tol = 1e-6;
        let s = tail_stats(&[1.0, tol], 0.5, tol).unwrap();
        assert_eq!(s.verdict, Verdict::Pass);
    }

    #[test]
    fn tie_at_tenfold_is_inconclusive() {
        let tol = 1e-6_f64;
        let s = tail_stats(&[1.0, 10.0 * tol], 0.5, tol).unwrap();
        assert_eq!(s.verdict, Verdict::Inconclusive);
        let s = tail_stats(&[1.0, 10.0 * tol + 1e-9], 0.5, tol).unwrap();
        assert_eq!(s.verdict, Verdict::Fail);
    }

    #[test]
    fn mixed_tail_is_inconclusive() {
        // One tiny and one large tail entry: neither rule applies.
        let s = tail_stats(&[0.5, 0.0, 0.5], 1.0, 1e-6).unwrap();
        assert_eq!(s.verdict, Verdict::Inconclusive);
    }

    #[test]
    fn window_covers_last_tenth() {
        let values: Vec<f64> = (0..100).map(|i| if i < 90 { 1.0 } else { 0.0 }).collect();
        let s = tail_stats(&values, 0.1, 1e-6).unwrap();
        assert_eq!(s.start, 91);
        assert_eq!(s.verdict, Verdict::Pass);
    }

    #[test]
    fn config_validation_rejects_bad_inputs() {
        let ok = DiagnosticConfig::<f64>::new(100);
        assert!(ok.validate().is_ok());
        assert!(DiagnosticConfig::<f64>::new(5).validate().is_err());
        assert!(ok
            .clone()
            .with_epsilon_grid(vec![])
            .validate()
            .is_err());
        assert!(ok
            .clone()
            .with_epsilon_grid(vec![-0.1])
            .validate()
            .is_err());
        assert!(ok.clone().with_tolerance(0.0).validate().is_err());
        assert!(ok.with_tail_fraction(1.5).validate().is_err());
    }
}
