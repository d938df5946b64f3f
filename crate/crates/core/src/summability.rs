//! Weight sequences, the Riesz matrix, triangular transforms and their
//! inverse, regularity evidence, and the Tauberian weight condition.
//!
//! Indexing is 1-based throughout: weights are `p_1..p_N`, partial sums
//! satisfy `P_0 = 0` and `P_n = p_1 + ... + p_n`.  Limit statements are
//! reported as EMPIRICAL verdicts from finite-horizon evidence.

use crate::error::{Error, Result};
use crate::scalar::{real, real_usize, KahanSum, Real};
use crate::uncertainty::{UncertainSequence, UncertainVariable};

/// Rule generating a weight sequence.
#[derive(Clone, Debug, PartialEq)]
pub enum WeightRule<T> {
    /// `p_k = c` with `c > 0`.
    Constant(T),
    /// `p_k = 1/k`.
    Harmonic,
    /// `p_k = r^k` with `r > 0`.
    Geometric(T),
    /// `p_k = k^a`.
    Power(T),
    /// Weights listed outright.
    Explicit(Vec<T>),
}

impl<T: Real> WeightRule<T> {
    fn weight(&self, k: usize) -> T {
        let kf = real_usize::<T>(k);
        match self {
            WeightRule::Constant(c) => *c,
            WeightRule::Harmonic => T::one() / kf,
            WeightRule::Geometric(r) => r.powi(k as i32),
            WeightRule::Power(a) => kf.powf(*a),
            WeightRule::Explicit(v) => v[k - 1],
        }
    }
}

/// Positive weights with compensated partial sums.
///
/// Strictly positive weights keep `P_n` strictly increasing and make
/// the inverse transform total; zero or negative entries are rejected
/// at construction instead of surfacing later as division artifacts.
#[derive(Clone, Debug)]
pub struct WeightSequence<T> {
    weights: Vec<T>,
    partial: Vec<T>,
}

impl<T: Real> WeightSequence<T> {
    /// Materializes `rule` out to `horizon` terms.
    pub fn from_rule(rule: &WeightRule<T>, horizon: usize) -> Result<Self> {
        if horizon == 0 {
            return Err(Error::InvalidParameter(
                "weight horizon must be at least 1".into(),
            ));
        }
        if let WeightRule::Explicit(v) = rule {
            if v.len() < horizon {
                return Err(Error::InvalidParameter(format!(
                    "explicit weights supply {} terms, horizon needs {horizon}",
                    v.len()
                )));
            }
        }
        let weights: Vec<T> = (1..=horizon).map(|k| rule.weight(k)).collect();
        Self::new(weights)
    }

    /// Wraps explicit weights, validating positivity and finiteness.
    pub fn new(weights: Vec<T>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidParameter(
                "weight horizon must be at least 1".into(),
            ));
        }
        let mut partial = Vec::with_capacity(weights.len() + 1);
        partial.push(T::zero());
        let mut acc = KahanSum::new();
        for (i, w) in weights.iter().enumerate() {
            if !w.is_finite() {
                return Err(Error::NonFinite {
                    index: i + 1,
                    value: w.to_f64().unwrap_or(f64::NAN),
                });
            }
            if *w <= T::zero() {
                return Err(Error::NonPositiveWeight {
                    index: i + 1,
                    value: w.to_f64().unwrap_or(f64::NAN),
                });
            }
            acc.add(*w);
            partial.push(acc.value());
        }
        Ok(WeightSequence { weights, partial })
    }

    pub fn horizon(&self) -> usize {
        self.weights.len()
    }

    /// `p_k`, 1-based.
    pub fn weight(&self, k: usize) -> Result<T> {
        if k == 0 || k > self.weights.len() {
            return Err(Error::BeyondHorizon {
                n: k,
                horizon: self.weights.len(),
            });
        }
        Ok(self.weights[k - 1])
    }

    /// `P_n` with `P_0 = 0`.
    pub fn partial_sum(&self, n: usize) -> Result<T> {
        if n > self.weights.len() {
            return Err(Error::BeyondHorizon {
                n,
                horizon: self.weights.len(),
            });
        }
        Ok(self.partial[n])
    }

    pub fn weights(&self) -> &[T] {
        &self.weights
    }
}

/// Row `n` of the Riesz matrix: `(p_1/P_n, ..., p_n/P_n)`.
pub fn riesz_row<T: Real>(weights: &WeightSequence<T>, n: usize) -> Result<Vec<T>> {
    let pn = weights.partial_sum(n)?;
    if n == 0 {
        return Err(Error::BeyondHorizon {
            n,
            horizon: weights.horizon(),
        });
    }
    Ok(weights.weights[..n].iter().map(|&p| p / pn).collect())
}

/// Lower-triangular matrix given by a row rule.
#[derive(Clone, Debug)]
pub enum TriangularMatrix<T> {
    Identity,
    Riesz(WeightSequence<T>),
    /// Row `n` is `rows[n-1]`, holding entries `a_{n,1}..a_{n,n}`.
    Rows(Vec<Vec<T>>),
}

impl<T: Real> TriangularMatrix<T> {
    /// `a_{nk}`; zero above the diagonal.
    pub fn entry(&self, n: usize, k: usize) -> Result<T> {
        if n == 0 || k == 0 {
            return Err(Error::InvalidParameter(
                "matrix indices are 1-based".into(),
            ));
        }
        if k > n {
            return Ok(T::zero());
        }
        match self {
            TriangularMatrix::Identity => {
                Ok(if k == n { T::one() } else { T::zero() })
            }
            TriangularMatrix::Riesz(w) => Ok(w.weight(k)? / w.partial_sum(n)?),
            TriangularMatrix::Rows(rows) => {
                let row = rows.get(n - 1).ok_or(Error::BeyondHorizon {
                    n,
                    horizon: rows.len(),
                })?;
                if row.len() != n {
                    return Err(Error::InvalidParameter(format!(
                        "triangular row {n} must hold {n} entries, got {}",
                        row.len()
                    )));
                }
                Ok(row[k - 1])
            }
        }
    }
}

fn clamp<T: Real>(x: T, lo: T, hi: T) -> T {
    if x < lo {
        lo
    } else if x > hi {
        hi
    } else {
        x
    }
}

/// All Riesz transforms `nu_1..nu_N` in one forward pass.
///
/// Each atom keeps a running compensated sum of `p_i * xi_i` together
/// with the running value range; the quotient is clamped into that
/// range, so a constant run stays exactly constant and the convex-hull
/// bound holds without slack.
pub fn transform_prefix<T: Real>(
    seq: &UncertainSequence<T>,
    weights: &WeightSequence<T>,
) -> Result<Vec<UncertainVariable<T>>> {
    let n_max = seq.horizon().min(weights.horizon());
    let atoms = seq.limit().len();
    let mut sums: Vec<KahanSum<T>> = (0..atoms).map(|_| KahanSum::new()).collect();
    let mut lo = vec![T::infinity(); atoms];
    let mut hi = vec![T::neg_infinity(); atoms];
    let mut out = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let term = seq.term(n)?;
        let p = weights.weight(n)?;
        let pn = weights.partial_sum(n)?;
        let mut values = Vec::with_capacity(atoms);
        for a in 0..atoms {
            let v = term.value(a);
            sums[a].add(p * v);
            lo[a] = lo[a].min(v);
            hi[a] = hi[a].max(v);
            values.push(clamp(sums[a].value() / pn, lo[a], hi[a]));
        }
        out.push(UncertainVariable::new(values)?);
    }
    Ok(out)
}

/// The Riesz transform `nu_n = sum_{i<=n} (p_i/P_n) xi_i` at one index.
pub fn transform_at<T: Real>(
    seq: &UncertainSequence<T>,
    weights: &WeightSequence<T>,
    n: usize,
) -> Result<UncertainVariable<T>> {
    let n_max = seq.horizon().min(weights.horizon());
    if n == 0 || n > n_max {
        return Err(Error::BeyondHorizon { n, horizon: n_max });
    }
    let atoms = seq.limit().len();
    let pn = weights.partial_sum(n)?;
    let mut values = Vec::with_capacity(atoms);
    for a in 0..atoms {
        let mut acc = KahanSum::new();
        let mut lo = T::infinity();
        let mut hi = T::neg_infinity();
        for i in 1..=n {
            let v = seq.term(i)?.value(a);
            acc.add(weights.weight(i)? * v);
            lo = lo.min(v);
            hi = hi.max(v);
        }
        values.push(clamp(acc.value() / pn, lo, hi));
    }
    UncertainVariable::new(values)
}

/// The transformed sequence `(nu_n)` sharing the space and limit of `seq`.
pub fn transform_sequence<T: Real>(
    seq: &UncertainSequence<T>,
    weights: &WeightSequence<T>,
) -> Result<UncertainSequence<T>> {
    let terms = transform_prefix(seq, weights)?;
    UncertainSequence::new(seq.space().clone(), terms, seq.limit().clone())
}

/// Row-by-sequence product `(A xi)_n = sum_k a_{nk} xi_k`.
pub fn general_transform_at<T: Real>(
    seq: &UncertainSequence<T>,
    matrix: &TriangularMatrix<T>,
    n: usize,
) -> Result<UncertainVariable<T>> {
    if n == 0 || n > seq.horizon() {
        return Err(Error::BeyondHorizon {
            n,
            horizon: seq.horizon(),
        });
    }
    let atoms = seq.limit().len();
    let mut values = Vec::with_capacity(atoms);
    for a in 0..atoms {
        let mut acc = KahanSum::new();
        for k in 1..=n {
            acc.add(matrix.entry(n, k)? * seq.term(k)?.value(a));
        }
        values.push(acc.value());
    }
    UncertainVariable::new(values)
}

/// Two-band inverse of the Riesz transform.
///
/// `xi_n = (P_n nu_n - P_{n-1} nu_{n-1}) / p_n` pointwise, with the
/// `P_0 = 0` convention making `xi_1 = nu_1` outright.
pub fn inverse_transform_at<T: Real>(
    transformed: &UncertainSequence<T>,
    weights: &WeightSequence<T>,
    n: usize,
) -> Result<UncertainVariable<T>> {
    let n_max = transformed.horizon().min(weights.horizon());
    if n == 0 || n > n_max {
        return Err(Error::BeyondHorizon { n, horizon: n_max });
    }
    if n == 1 {
        return Ok(transformed.term(1)?.clone());
    }
    let pn = weights.weight(n)?;
    let big_n = weights.partial_sum(n)?;
    let big_prev = weights.partial_sum(n - 1)?;
    let nu_n = transformed.term(n)?;
    let nu_prev = transformed.term(n - 1)?;
    let values: Vec<T> = (0..nu_n.len())
        .map(|a| (big_n * nu_n.value(a) - big_prev * nu_prev.value(a)) / pn)
        .collect();
    UncertainVariable::new(values)
}

/// Finite-horizon regularity evidence for the Riesz method.
///
/// Row sums and absolute row sums are identically one for positive
/// weights, so the Silverman-Toeplitz conditions reduce to divergence
/// of `P_n`.  Divergence is witnessed by relative tail growth: the
/// method is reported regular when the second half of the horizon
/// still contributes at least `tolerance` of `P_horizon`.  A converging
/// `P_n` (geometric weights) drives that share toward zero, while any
/// divergent `P_n` keeps it bounded away from zero on doubling.
#[derive(Clone, Debug)]
pub struct RegularityVerdict<T> {
    pub regular: bool,
    /// `(P_H - P_{H/2}) / P_H`, the divergence witness.
    pub tail_growth: T,
    /// `p_1 / P_H`, the first Silverman-Toeplitz column entry.
    pub first_column_ratio: T,
    pub final_partial_sum: T,
    pub tolerance: T,
}

impl<T: Real> RegularityVerdict<T> {
    pub fn render(&self) -> String {
        format!(
            "regularity (EMPIRICAL): {}; tail growth {} vs tolerance {}, p_1/P_H = {}, P_H = {}",
            if self.regular { "regular" } else { "NOT regular" },
            self.tail_growth,
            self.tolerance,
            self.first_column_ratio,
            self.final_partial_sum
        )
    }
}

pub fn check_regularity<T: Real>(
    weights: &WeightSequence<T>,
    horizon: usize,
    tolerance: T,
) -> Result<RegularityVerdict<T>> {
    if horizon < 2 {
        return Err(Error::InvalidParameter(
            "regularity check needs horizon >= 2".into(),
        ));
    }
    let ph = weights.partial_sum(horizon)?;
    let half = weights.partial_sum(horizon / 2)?;
    let tail_growth = (ph - half) / ph;
    Ok(RegularityVerdict {
        regular: tail_growth >= tolerance,
        tail_growth,
        first_column_ratio: weights.weight(1)? / ph,
        final_partial_sum: ph,
        tolerance,
    })
}

/// Profile of the Tauberian weight condition `n p_n / P_n -> 0`.
#[derive(Clone, Debug)]
pub struct TauberianProfile<T> {
    /// `n p_n / P_n` for `n = 1..=horizon`.
    pub values: Vec<T>,
    pub tail_max: T,
    pub nonincreasing_tail: bool,
    /// EMPIRICAL: tail stays below `threshold` and does not increase.
    pub holds: bool,
    pub threshold: T,
    pub tail_fraction: T,
}

/// Tail-window size for a given fraction, at least one index.
pub(crate) fn tail_start(horizon: usize, tail_fraction: f64) -> usize {
    let window = ((horizon as f64) * tail_fraction).ceil() as usize;
    horizon.saturating_sub(window.clamp(1, horizon)) + 1
}

/// Default acceptance threshold for the Tauberian weight condition.
///
/// The condition targets a limit of zero; a tail already below one
/// half and still falling is counted as evidence, while any profile
/// pinned at one (constant weights give exactly that) fails outright.
pub const DEFAULT_TAUBERIAN_THRESHOLD: f64 = 0.5;

pub fn tauberian_condition_profile<T: Real>(
    weights: &WeightSequence<T>,
    horizon: usize,
) -> Result<TauberianProfile<T>> {
    tauberian_profile_with(
        weights,
        horizon,
        real(DEFAULT_TAUBERIAN_THRESHOLD),
        real(0.1),
    )
}

pub fn tauberian_profile_with<T: Real>(
    weights: &WeightSequence<T>,
    horizon: usize,
    threshold: T,
    tail_fraction: T,
) -> Result<TauberianProfile<T>> {
    if horizon == 0 {
        return Err(Error::InvalidParameter(
            "tauberian profile needs horizon >= 1".into(),
        ));
    }
    let mut values = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        let v = real_usize::<T>(n) * weights.weight(n)? / weights.partial_sum(n)?;
        values.push(v);
    }
    let frac = tail_fraction.to_f64().unwrap_or(0.1);
    let start = tail_start(horizon, frac);
    let tail = &values[start - 1..];
    let tail_max = tail.iter().cloned().fold(T::neg_infinity(), T::max);
    let slack = real::<T>(1e-12);
    let nonincreasing_tail = tail.windows(2).all(|w| w[1] <= w[0] + slack);
    Ok(TauberianProfile {
        holds: tail_max <= threshold && nonincreasing_tail,
        values,
        tail_max,
        nonincreasing_tail,
        threshold,
        tail_fraction,
    })
}
