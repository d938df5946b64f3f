//! Gap evaluators for each convergence class, plus the instance-level
//! inequalities (Markov bound, union budget, uniqueness split), the
//! moment-decay fit, and the almost-sure subsequence extraction.

use crate::error::{Error, Result};
use crate::orlicz::{orlicz_moment, OrliczSpec};
use crate::scalar::{real, real_usize, KahanSum, Real};
use crate::summability::{tail_start, transform_at, transform_prefix, WeightSequence};
use crate::uncertainty::{
    distribution_at, event_where, expected_value, Event, UncertaintySpace, UncertainSequence,
    UncertainVariable,
};

/// Event of atoms satisfying a predicate on their index.
pub(crate) fn atoms_where(atoms: usize, pred: impl Fn(usize) -> bool) -> Event {
    let mut ev = Event::EMPTY;
    for a in 0..atoms {
        if pred(a) {
            ev = ev.insert(a);
        }
    }
    ev
}

pub(crate) fn deviation<T: Real>(
    term: &UncertainVariable<T>,
    limit: &UncertainVariable<T>,
) -> UncertainVariable<T> {
    let values: Vec<T> = (0..term.len())
        .map(|a| (term.value(a) - limit.value(a)).abs())
        .collect();
    UncertainVariable::new(values).expect("finite deviations")
}

pub(crate) fn as_gap_of<T: Real>(
    space: &UncertaintySpace<T>,
    term: &UncertainVariable<T>,
    limit: &UncertainVariable<T>,
) -> T {
    let mut worst = T::zero();
    for a in space.almost_sure().indices() {
        worst = worst.max((term.value(a) - limit.value(a)).abs());
    }
    worst
}

pub(crate) fn measure_gap_of<T: Real>(
    space: &UncertaintySpace<T>,
    term: &UncertainVariable<T>,
    limit: &UncertainVariable<T>,
    epsilon: T,
) -> Result<T> {
    let dev = deviation(term, limit);
    let event = event_where(space, &dev, |d| d >= epsilon)?;
    space.measure_of(event)
}

pub(crate) fn mean_gap_of<T: Real>(
    space: &UncertaintySpace<T>,
    term: &UncertainVariable<T>,
    limit: &UncertainVariable<T>,
) -> Result<T> {
    expected_value(space, &deviation(term, limit))
}

/// Grid points surviving the jump-location filter: any `x` equal to a
/// value of the limit candidate is a discontinuity of its distribution
/// and is excluded.
pub(crate) fn effective_grid<T: Real>(limit: &UncertainVariable<T>, x_grid: &[T]) -> Vec<T> {
    x_grid
        .iter()
        .cloned()
        .filter(|x| !limit.values().contains(x))
        .collect()
}

pub(crate) fn dist_gap_of<T: Real>(
    space: &UncertaintySpace<T>,
    term: &UncertainVariable<T>,
    limit: &UncertainVariable<T>,
    grid: &[T],
) -> Result<T> {
    let effective = effective_grid(limit, grid);
    if effective.is_empty() {
        return Err(Error::EmptyGrid(
            "all distribution grid points sit on jumps of the limit".into(),
        ));
    }
    let mut worst = T::zero();
    for &x in &effective {
        let gap = (distribution_at(space, term, x)? - distribution_at(space, limit, x)?).abs();
        worst = worst.max(gap);
    }
    Ok(worst)
}

/// `sup_{atoms of Lambda} |xi_n - xi|`.
pub fn as_gap<T: Real>(seq: &UncertainSequence<T>, n: usize) -> Result<T> {
    Ok(as_gap_of(seq.space(), seq.term(n)?, seq.limit()))
}

/// `M(|xi_n - xi| >= epsilon)`.
pub fn measure_gap<T: Real>(seq: &UncertainSequence<T>, n: usize, epsilon: T) -> Result<T> {
    measure_gap_of(seq.space(), seq.term(n)?, seq.limit(), epsilon)
}

/// `E[|xi_n - xi|]`.
pub fn mean_gap<T: Real>(seq: &UncertainSequence<T>, n: usize) -> Result<T> {
    mean_gap_of(seq.space(), seq.term(n)?, seq.limit())
}

/// `max_x |Phi_n(x) - Phi(x)|` over the effective grid.
pub fn dist_gap<T: Real>(seq: &UncertainSequence<T>, n: usize, x_grid: &[T]) -> Result<T> {
    dist_gap_of(seq.space(), seq.term(n)?, seq.limit(), x_grid)
}

/// Which gap a Riesz-domain diagnostic evaluates.
#[derive(Clone, Debug)]
pub enum GapKind<T> {
    /// Almost-sure: sup over the almost-sure set.
    As,
    /// In measure at the given deviation threshold.
    Measure { epsilon: T },
    /// In mean.
    Mean,
    /// In distribution over the given grid.
    Dist { grid: Vec<T> },
}

/// The chosen gap evaluated on the Riesz transform `nu_n` instead of
/// `xi_n`.  For the almost-sure, measure, and mean kinds the Orlicz
/// function wraps the deviation, `phi(|nu_n - xi|)`; the distribution
/// kind compares distributions directly and ignores `phi`.
pub fn riesz_gap<T: Real>(
    kind: &GapKind<T>,
    seq: &UncertainSequence<T>,
    weights: &WeightSequence<T>,
    n: usize,
    orlicz: &OrliczSpec<T>,
) -> Result<T> {
    let nu = transform_at(seq, weights, n)?;
    riesz_gap_of(kind, seq.space(), &nu, seq.limit(), orlicz)
}

pub(crate) fn riesz_gap_of<T: Real>(
    kind: &GapKind<T>,
    space: &UncertaintySpace<T>,
    nu: &UncertainVariable<T>,
    limit: &UncertainVariable<T>,
    orlicz: &OrliczSpec<T>,
) -> Result<T> {
    match kind {
        GapKind::Dist { grid } => dist_gap_of(space, nu, limit, grid),
        _ => {
            let dev = deviation(nu, limit).map(|d| orlicz.phi.eval(d));
            match kind {
                GapKind::As => {
                    let mut worst = T::zero();
                    for a in space.almost_sure().indices() {
                        worst = worst.max(dev.value(a));
                    }
                    Ok(worst)
                }
                GapKind::Measure { epsilon } => {
                    let event = event_where(space, &dev, |d| d >= *epsilon)?;
                    space.measure_of(event)
                }
                GapKind::Mean => expected_value(space, &dev),
                GapKind::Dist { .. } => unreachable!(),
            }
        }
    }
}

/// `M( max_{n <= k <= floor((1+lambda) n)} |xi_k - xi_n| >= epsilon )`.
///
/// Errors when the window right end exceeds the horizon; profile
/// builders stop there instead.
pub fn slow_osc_gap<T: Real>(
    seq: &UncertainSequence<T>,
    n: usize,
    lambda: T,
    epsilon: T,
) -> Result<T> {
    if n == 0 || n > seq.horizon() {
        return Err(Error::BeyondHorizon {
            n,
            horizon: seq.horizon(),
        });
    }
    let end = window_end(n, lambda);
    if end > seq.horizon() {
        return Err(Error::BeyondHorizon {
            n: end,
            horizon: seq.horizon(),
        });
    }
    let space = seq.space();
    let base = seq.term(n)?;
    let atoms = base.len();
    let mut worst = vec![T::zero(); atoms];
    for k in n..=end {
        let t = seq.term(k)?;
        for (a, w) in worst.iter_mut().enumerate() {
            *w = w.max((t.value(a) - base.value(a)).abs());
        }
    }
    let mut event = Event::EMPTY;
    for (a, &w) in worst.iter().enumerate() {
        if w >= epsilon {
            event = event.insert(a);
        }
    }
    space.measure_of(event)
}

/// Right end `floor((1 + lambda) n)` of the oscillation window.
pub(crate) fn window_end<T: Real>(n: usize, lambda: T) -> usize {
    ((T::one() + lambda) * real_usize::<T>(n))
        .floor()
        .to_usize()
        .unwrap_or(usize::MAX)
}

/// Markov-type bound instance: returns
/// `(M(|var| >= t), E[phi(|var|)] / phi(t))`; the contract is
/// `lhs <= rhs + 1e-12` on validated spaces.
pub fn markov_check<T: Real>(
    space: &UncertaintySpace<T>,
    var: &UncertainVariable<T>,
    spec: &OrliczSpec<T>,
    t: T,
) -> Result<(T, T)> {
    if t <= T::zero() || t.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "markov threshold must be positive, got {t}"
        )));
    }
    let phi_t = spec.phi.eval(t);
    if phi_t <= T::zero() || phi_t.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "phi(t) must be positive, got phi({t}) = {phi_t}"
        )));
    }
    let event = event_where(space, var, |v| v.abs() >= t)?;
    let lhs = space.measure_of(event)?;
    let rhs = orlicz_moment(space, var, spec)? / phi_t;
    Ok((lhs, rhs))
}

/// Running union budget over a run of event measures.
#[derive(Clone, Debug)]
pub struct BorelCantelliBudget<T> {
    /// `S_n = sum_{i <= n} M(E_i)`, compensated.
    pub partial_sums: Vec<T>,
    /// Mass added across the tail window.
    pub tail_increment: T,
    /// EMPIRICAL: the partial sums have settled within tolerance.
    pub summable_trend: bool,
}

pub fn borel_cantelli_budget<T: Real>(measures: &[T]) -> Result<BorelCantelliBudget<T>> {
    borel_cantelli_with(measures, real(0.1), real(1e-6))
}

pub fn borel_cantelli_with<T: Real>(
    measures: &[T],
    tail_fraction: T,
    tolerance: T,
) -> Result<BorelCantelliBudget<T>> {
    if measures.is_empty() {
        return Err(Error::EmptyGrid("no event measures supplied".into()));
    }
    let mut sums = Vec::with_capacity(measures.len());
    let mut acc = KahanSum::new();
    for (i, &m) in measures.iter().enumerate() {
        if !(m >= T::zero() && m <= T::one()) {
            return Err(Error::InvalidParameter(format!(
                "event measure {i} out of [0,1]: {m}"
            )));
        }
        acc.add(m);
        sums.push(acc.value());
    }
    let frac = tail_fraction.to_f64().unwrap_or(0.1);
    let start = tail_start(sums.len(), frac);
    let base = if start >= 2 { sums[start - 2] } else { T::zero() };
    let tail_increment = sums[sums.len() - 1] - base;
    Ok(BorelCantelliBudget {
        summable_trend: tail_increment <= tolerance,
        partial_sums: sums,
        tail_increment,
    })
}

/// `M( union_{n = m..horizon} { |nu_n - xi| >= epsilon } )`, the exact
/// union event measured once.
pub fn uniform_tail_gap<T: Real>(
    seq: &UncertainSequence<T>,
    weights: &WeightSequence<T>,
    m: usize,
    epsilon: T,
) -> Result<T> {
    let nus = transform_prefix(seq, weights)?;
    union_tail_measure(seq.space(), &nus, seq.limit(), m, epsilon)
}

/// The same union gap on the raw terms; serves the `m-tilde` view of
/// the raw sequence.
pub fn uniform_tail_gap_raw<T: Real>(
    seq: &UncertainSequence<T>,
    m: usize,
    epsilon: T,
) -> Result<T> {
    union_tail_measure(seq.space(), seq.terms(), seq.limit(), m, epsilon)
}

pub(crate) fn union_tail_measure<T: Real>(
    space: &UncertaintySpace<T>,
    terms: &[UncertainVariable<T>],
    limit: &UncertainVariable<T>,
    m: usize,
    epsilon: T,
) -> Result<T> {
    if m == 0 || m > terms.len() {
        return Err(Error::BeyondHorizon {
            n: m,
            horizon: terms.len(),
        });
    }
    let mut union = Event::EMPTY;
    for term in &terms[m - 1..] {
        let dev = deviation(term, limit);
        union = union.union(event_where(space, &dev, |d| d >= epsilon)?);
    }
    space.measure_of(union)
}

/// Indices chosen by the almost-sure subsequence construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UasExtraction {
    /// `n'_1 < n'_2 < ...`, each satisfying the `2^{-k}` measure bound
    /// at deviation threshold `1/k`.
    pub indices: Vec<usize>,
    /// The horizon ran out before `max_indices` were found.
    pub exhausted: bool,
}

/// Greedy smallest-index extraction: `n'_k` is the first index past
/// `n'_{k-1}` with `M(|nu_n - xi| >= 1/k) <= 2^{-k}`.
pub fn extract_uas_subsequence<T: Real>(
    seq: &UncertainSequence<T>,
    weights: &WeightSequence<T>,
    max_indices: usize,
) -> Result<UasExtraction> {
    if max_indices == 0 {
        return Err(Error::InvalidParameter(
            "subsequence extraction needs max_indices >= 1".into(),
        ));
    }
    let nus = transform_prefix(seq, weights)?;
    let space = seq.space();
    let limit = seq.limit();
    let mut indices = Vec::new();
    let mut cursor = 1usize;
    let half = real::<T>(0.5);
    for k in 1..=max_indices {
        let epsilon = T::one() / real_usize::<T>(k);
        let bound = half.powi(k as i32);
        let mut found = None;
        for n in cursor..=nus.len() {
            let dev = deviation(&nus[n - 1], limit);
            let event = event_where(space, &dev, |d| d >= epsilon)?;
            if space.measure_of(event)? <= bound {
                found = Some(n);
                break;
            }
        }
        match found {
            Some(n) => {
                indices.push(n);
                cursor = n + 1;
            }
            None => {
                return Ok(UasExtraction {
                    indices,
                    exhausted: true,
                });
            }
        }
    }
    Ok(UasExtraction {
        indices,
        exhausted: false,
    })
}

/// Log-log least-squares fit of the Riesz moment decay.
#[derive(Clone, Debug)]
pub struct MomentDecayFit<T> {
    /// Estimated decay surplus: moment ~ C n^{-(1+delta)}.
    pub delta_hat: T,
    pub c_hat: T,
    /// Largest absolute log-log fit residual.
    pub max_residual: T,
    /// Samples carrying a positive moment (zero moments cannot enter
    /// the log fit).
    pub samples_used: usize,
    /// Every sampled moment was exactly zero; `delta_hat` is +inf.
    pub infinite_decay: bool,
}

/// Fits `log E[|nu_n - xi|^p] ~ a + b log n` over the sample indices
/// and reports `delta_hat = -b - 1`, `c_hat = e^a`.
pub fn moment_decay_fit<T: Real>(
    seq: &UncertainSequence<T>,
    weights: &WeightSequence<T>,
    p: T,
    sample_indices: &[usize],
) -> Result<MomentDecayFit<T>> {
    if p <= T::one() || p.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "moment exponent must exceed 1, got {p}"
        )));
    }
    if sample_indices.len() < 8 {
        return Err(Error::InvalidParameter(format!(
            "moment fit needs at least 8 sample indices, got {}",
            sample_indices.len()
        )));
    }
    if sample_indices.windows(2).any(|w| w[1] <= w[0]) || sample_indices[0] == 0 {
        return Err(Error::InvalidParameter(
            "sample indices must be strictly increasing and start at 1 or later".into(),
        ));
    }
    let nus = transform_prefix(seq, weights)?;
    let horizon = nus.len();
    if *sample_indices.last().unwrap() > horizon {
        return Err(Error::BeyondHorizon {
            n: *sample_indices.last().unwrap(),
            horizon,
        });
    }
    let space = seq.space();
    let limit = seq.limit();
    let mut points: Vec<(T, T)> = Vec::new();
    for &n in sample_indices {
        let dev = deviation(&nus[n - 1], limit).map(|d| d.powf(p));
        let moment = expected_value(space, &dev)?;
        if moment > T::zero() {
            points.push((real_usize::<T>(n).ln(), moment.ln()));
        }
    }
    if points.is_empty() {
        return Ok(MomentDecayFit {
            delta_hat: T::infinity(),
            c_hat: T::zero(),
            max_residual: T::zero(),
            samples_used: 0,
            infinite_decay: true,
        });
    }
    if points.len() < 2 {
        return Err(Error::InvalidParameter(
            "moment fit needs at least two positive moments".into(),
        ));
    }
    let count = real_usize::<T>(points.len());
    let mut sx = KahanSum::new();
    let mut sy = KahanSum::new();
    for &(x, y) in &points {
        sx.add(x);
        sy.add(y);
    }
    let mx = sx.value() / count;
    let my = sy.value() / count;
    let mut sxx = KahanSum::new();
    let mut sxy = KahanSum::new();
    for &(x, y) in &points {
        sxx.add((x - mx) * (x - mx));
        sxy.add((x - mx) * (y - my));
    }
    let slope = sxy.value() / sxx.value();
    let intercept = my - slope * mx;
    let mut max_residual = T::zero();
    for &(x, y) in &points {
        max_residual = max_residual.max((y - (intercept + slope * x)).abs());
    }
    Ok(MomentDecayFit {
        delta_hat: -slope - T::one(),
        c_hat: intercept.exp(),
        max_residual,
        samples_used: points.len(),
        infinite_decay: false,
    })
}

/// Limit-uniqueness split: returns
/// `(M(|xi - eta| >= eps), M(|nu_n - xi| >= eps/2) + M(|nu_n - eta| >= eps/2))`.
/// Sub-additivity and the triangle inequality force `lhs <= rhs` up to
/// rounding on validated spaces.
pub fn uniqueness_bound<T: Real>(
    seq: &UncertainSequence<T>,
    weights: &WeightSequence<T>,
    n: usize,
    xi: &UncertainVariable<T>,
    eta: &UncertainVariable<T>,
    epsilon: T,
) -> Result<(T, T)> {
    if epsilon <= T::zero() || epsilon.is_nan() {
        return Err(Error::InvalidParameter(format!(
            "uniqueness threshold must be positive, got {epsilon}"
        )));
    }
    let space = seq.space();
    let nu = transform_at(seq, weights, n)?;
    let half_eps = epsilon / real::<T>(2.0);
    let lhs_event = event_where(space, &deviation(xi, eta), |d| d >= epsilon)?;
    let lhs = space.measure_of(lhs_event)?;
    let a = space.measure_of(event_where(space, &deviation(&nu, xi), |d| d >= half_eps)?)?;
    let b = space.measure_of(event_where(space, &deviation(&nu, eta), |d| d >= half_eps)?)?;
    Ok((lhs, a + b))
}
