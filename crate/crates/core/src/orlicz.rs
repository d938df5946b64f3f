//! Orlicz functions, grid-based validity checks, and the Orlicz-p gap
//! between a Riesz transform and the limit candidate.
//!
//! Validity (zero at zero, strict increase, convexity, unbounded
//! growth) is certified on a finite grid; continuity and global
//! convexity have no pointwise test, so the grid is the testable
//! surrogate and reports carry the first violation found.

use crate::error::{Error, Result};
use crate::scalar::{real, Real};
use crate::summability::{transform_at, WeightSequence};
use crate::uncertainty::{expected_value, UncertaintySpace, UncertainSequence, UncertainVariable};

/// Shape of an Orlicz candidate function on `[0, inf)`.
#[derive(Clone, Debug, PartialEq)]
pub enum OrliczPhi<T> {
    /// `phi(x) = x`.
    Identity,
    /// `phi(x) = x^q`; validation rejects `q < 1` via convexity.
    Power(T),
    /// `phi(x) = e^x - 1`.
    Expm1,
    /// Piecewise-linear interpolation through `(x, y)` breakpoints,
    /// extrapolated with the final segment's slope.
    Table(Vec<(T, T)>),
}

impl<T: Real> OrliczPhi<T> {
    pub fn eval(&self, x: T) -> T {
        debug_assert!(x >= T::zero());
        match self {
            OrliczPhi::Identity => x,
            OrliczPhi::Power(q) => x.powf(*q),
            OrliczPhi::Expm1 => x.exp_m1(),
            OrliczPhi::Table(points) => {
                let last = points.len() - 1;
                let seg = match points.iter().position(|&(bx, _)| x <= bx) {
                    Some(0) => 1.min(last),
                    Some(i) => i,
                    None => last,
                };
                let (x0, y0) = points[seg - 1];
                let (x1, y1) = points[seg];
                y0 + (x - x0) * (y1 - y0) / (x1 - x0)
            }
        }
    }

    pub fn name(&self) -> String {
        match self {
            OrliczPhi::Identity => "identity".into(),
            OrliczPhi::Power(q) => format!("power({q})"),
            OrliczPhi::Expm1 => "expm1".into(),
            OrliczPhi::Table(points) => format!("table[{}]", points.len()),
        }
    }
}

/// Orlicz function paired with the distance exponent `p >= 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct OrliczSpec<T> {
    pub phi: OrliczPhi<T>,
    pub p: T,
}

impl<T: Real> OrliczSpec<T> {
    pub fn new(phi: OrliczPhi<T>, p: T) -> Result<Self> {
        if !p.is_finite() || p < T::one() {
            return Err(Error::InvalidParameter(format!(
                "distance exponent must satisfy p >= 1, got {p}"
            )));
        }
        if let OrliczPhi::Table(points) = &phi {
            if points.len() < 2 {
                return Err(Error::InvalidParameter(
                    "tabulated phi needs at least 2 breakpoints".into(),
                ));
            }
            for w in points.windows(2) {
                if w[1].0 <= w[0].0 || w[0].0.is_nan() || w[1].0.is_nan() {
                    return Err(Error::InvalidParameter(
                        "tabulated phi breakpoints must have strictly increasing x".into(),
                    ));
                }
            }
            for &(x, y) in points {
                if !x.is_finite() || !y.is_finite() {
                    return Err(Error::InvalidParameter(
                        "tabulated phi breakpoints must be finite".into(),
                    ));
                }
            }
        }
        if let OrliczPhi::Power(q) = &phi {
            if !q.is_finite() || *q <= T::zero() {
                return Err(Error::InvalidParameter(format!(
                    "power exponent must be positive, got {q}"
                )));
            }
        }
        Ok(OrliczSpec { phi, p })
    }

    pub fn identity() -> Self {
        OrliczSpec {
            phi: OrliczPhi::Identity,
            p: T::one(),
        }
    }

    pub fn name(&self) -> String {
        self.phi.name()
    }
}

/// One check line of an Orlicz validity report.
#[derive(Clone, Debug)]
pub struct OrliczCheck<T> {
    pub label: &'static str,
    pub passed: bool,
    /// First violating point(s), if any.
    pub witness: Option<(T, T)>,
    pub detail: Option<String>,
}

#[derive(Clone, Debug)]
pub struct OrliczReport<T> {
    pub checks: Vec<OrliczCheck<T>>,
}

impl<T: Real> OrliczReport<T> {
    pub fn is_valid(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            if c.passed {
                out.push_str(&format!("{}: pass\n", c.label));
            } else {
                out.push_str(&format!(
                    "{}: FAIL ({})\n",
                    c.label,
                    c.detail.clone().unwrap_or_default()
                ));
            }
        }
        out
    }
}

pub const DEFAULT_GRID_MAX: f64 = 100.0;
pub const DEFAULT_GRID_POINTS: usize = 256;

/// Validates `spec.phi` on `grid_points` equispaced points of
/// `[0, grid_max]`: zero at zero (exact), strict increase, midpoint
/// convexity with `1e-12` slack over all grid pairs, and growth trend
/// `phi(grid_max) > phi(grid_max/2)`.
pub fn validate_orlicz<T: Real>(
    spec: &OrliczSpec<T>,
    grid_max: T,
    grid_points: usize,
) -> Result<OrliczReport<T>> {
    if grid_points < 16 {
        return Err(Error::InvalidParameter(
            "orlicz validation grid needs at least 16 points".into(),
        ));
    }
    if grid_max <= T::zero() || !grid_max.is_finite() {
        return Err(Error::InvalidParameter(
            "orlicz validation grid maximum must be positive and finite".into(),
        ));
    }
    let step = grid_max / real_points::<T>(grid_points - 1);
    let grid: Vec<T> = (0..grid_points)
        .map(|i| step * real_points::<T>(i))
        .collect();
    let values: Vec<T> = grid.iter().map(|&x| spec.phi.eval(x)).collect();
    for (&x, &y) in grid.iter().zip(values.iter()) {
        if !y.is_finite() {
            return Err(Error::NonFinite {
                index: 0,
                value: x.to_f64().unwrap_or(f64::NAN),
            });
        }
    }
    let mut checks = Vec::new();

    let zero = values[0];
    checks.push(OrliczCheck {
        label: "zero at zero",
        passed: zero == T::zero(),
        witness: (zero != T::zero()).then_some((T::zero(), zero)),
        detail: (zero != T::zero()).then(|| format!("phi(0) = {zero}")),
    });

    let mut increase = OrliczCheck {
        label: "strictly increasing",
        passed: true,
        witness: None,
        detail: None,
    };
    for i in 1..grid_points {
        if values[i] <= values[i - 1] || values[i].is_nan() || values[i - 1].is_nan() {
            increase.passed = false;
            increase.witness = Some((grid[i - 1], grid[i]));
            increase.detail = Some(format!(
                "phi({}) = {} does not exceed phi({}) = {}",
                grid[i],
                values[i],
                grid[i - 1],
                values[i - 1]
            ));
            break;
        }
    }
    checks.push(increase);

    let slack = real::<T>(1e-12);
    let two = real::<T>(2.0);
    let mut convex = OrliczCheck {
        label: "midpoint convexity",
        passed: true,
        witness: None,
        detail: None,
    };
    'outer: for i in 0..grid_points {
        for j in (i + 1)..grid_points {
            let mid = (grid[i] + grid[j]) / two;
            let lhs = spec.phi.eval(mid);
            let rhs = (values[i] + values[j]) / two;
            if lhs > rhs + slack {
                convex.passed = false;
                convex.witness = Some((grid[i], grid[j]));
                convex.detail = Some(format!(
                    "phi(({} + {})/2) = {lhs} exceeds {rhs}",
                    grid[i], grid[j]
                ));
                break 'outer;
            }
        }
    }
    checks.push(convex);

    let half_val = spec.phi.eval(grid_max / two);
    let top_val = spec.phi.eval(grid_max);
    checks.push(OrliczCheck {
        label: "unbounded trend",
        passed: top_val > half_val,
        witness: (top_val <= half_val).then_some((grid_max / two, grid_max)),
        detail: (top_val <= half_val).then(|| {
            format!("phi({grid_max}) = {top_val} does not exceed phi({}) = {half_val}", grid_max / two)
        }),
    });

    Ok(OrliczReport { checks })
}

fn real_points<T: Real>(n: usize) -> T {
    T::from_usize(n).expect("grid size fits the scalar type")
}

/// Validates with the default grid `[0, 100]` at 256 points.
pub fn validate_orlicz_default<T: Real>(spec: &OrliczSpec<T>) -> Result<OrliczReport<T>> {
    validate_orlicz(spec, real(DEFAULT_GRID_MAX), DEFAULT_GRID_POINTS)
}

/// `E[phi(|var|)]`.
pub fn orlicz_moment<T: Real>(
    space: &UncertaintySpace<T>,
    var: &UncertainVariable<T>,
    spec: &OrliczSpec<T>,
) -> Result<T> {
    let composed = var.map(|v| spec.phi.eval(v.abs()));
    expected_value(space, &composed)
}

/// `(E[phi(|nu_n - xi|^p)])^{1/p}` with `nu_n` the Riesz transform at
/// `n` and `xi` the sequence's limit candidate.
pub fn orlicz_p_gap<T: Real>(
    seq: &UncertainSequence<T>,
    weights: &WeightSequence<T>,
    spec: &OrliczSpec<T>,
    n: usize,
) -> Result<T> {
    let nu = transform_at(seq, weights, n)?;
    orlicz_p_gap_of(seq.space(), &nu, seq.limit(), spec)
}

/// Same gap for an already materialized transform value.
pub fn orlicz_p_gap_of<T: Real>(
    space: &UncertaintySpace<T>,
    nu: &UncertainVariable<T>,
    limit: &UncertainVariable<T>,
    spec: &OrliczSpec<T>,
) -> Result<T> {
    let p = spec.p;
    let one = T::one();
    let deviation: Vec<T> = (0..nu.len())
        .map(|a| {
            let d = (nu.value(a) - limit.value(a)).abs();
            if p == one {
                d
            } else {
                d.powf(p)
            }
        })
        .collect();
    let var = UncertainVariable::new(deviation)?;
    let moment = orlicz_moment(space, &var, spec)?;
    Ok(if p == one { moment } else { moment.powf(one / p) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summability::WeightRule;
    use std::sync::Arc;

    fn two_atom() -> UncertaintySpace<f64> {
        UncertaintySpace::additive(vec!["g1".into(), "g2".into()], &[0.4, 0.6]).unwrap()
    }

    #[test]
    fn identity_and_square_validate() {
        let id = OrliczSpec::<f64>::identity();
        assert!(validate_orlicz_default(&id).unwrap().is_valid());
        let sq = OrliczSpec::new(OrliczPhi::Power(2.0), 1.0).unwrap();
        assert!(validate_orlicz(&sq, 10.0, 64).unwrap().is_valid());
        let ex = OrliczSpec::new(OrliczPhi::Expm1, 1.0).unwrap();
        assert!(validate_orlicz(&ex, 20.0, 64).unwrap().is_valid());
    }

    #[test]
    fn square_root_fails_midpoint_convexity() {
        let spec = OrliczSpec::new(OrliczPhi::Power(0.5), 1.0).unwrap();
        let report = validate_orlicz(&spec, 10.0, 64).unwrap();
        assert!(!report.is_valid());
        let convex = report
            .checks
            .iter()
            .find(|c| c.label == "midpoint convexity")
            .unwrap();
        assert!(!convex.passed);
        let (a, b) = convex.witness.unwrap();
        // The witness pair must actually violate convexity.
        let phi = |x: f64| x.sqrt();
        assert!(phi((a + b) / 2.0) > (phi(a) + phi(b)) / 2.0 + 1e-12);
    }

    #[test]
    fn exponent_below_one_is_constructible_but_invalid() {
        assert!(OrliczSpec::new(OrliczPhi::Power(0.5), 1.0).is_ok());
        assert!(OrliczSpec::new(OrliczPhi::Identity, 0.5).is_err());
        assert!(OrliczSpec::new(OrliczPhi::Power(-1.0), 1.0).is_err());
    }

    #[test]
    fn table_phi_interpolates_identity() {
        let points: Vec<(f64, f64)> = vec![(0.0, 0.0), (1.0, 1.0), (4.0, 4.0)];
        let spec = OrliczSpec::new(OrliczPhi::Table(points), 1.0).unwrap();
        assert_eq!(spec.phi.eval(0.5), 0.5);
        assert_eq!(spec.phi.eval(2.5), 2.5);
        // Linear extrapolation beyond the last breakpoint.
        assert_eq!(spec.phi.eval(10.0), 10.0);
        assert!(validate_orlicz(&spec, 10.0, 32).unwrap().is_valid());
    }

    #[test]
    fn moment_of_zero_and_constant() {
        let space = two_atom();
        let sq = OrliczSpec::new(OrliczPhi::Power(2.0), 1.0).unwrap();
        let zero = UncertainVariable::constant(2, 0.0);
        assert_eq!(orlicz_moment(&space, &zero, &sq).unwrap(), 0.0);
        let c = UncertainVariable::constant(2, 3.0);
        assert!((orlicz_moment(&space, &c, &sq).unwrap() - 9.0).abs() < 1e-12);
    }

    #[test]
    fn moment_two_atom_square() {
        let space = two_atom();
        let var = UncertainVariable::new(vec![1.0, 3.0]).unwrap();
        let sq = OrliczSpec::new(OrliczPhi::Power(2.0), 1.0).unwrap();
        // Level sets of (1, 9): 1 + 0.6 * 8 = 5.8.
        assert!((orlicz_moment(&space, &var, &sq).unwrap() - 5.8).abs() < 1e-12);
    }

    #[test]
    fn gap_vanishes_for_constant_sequence() {
        let space = Arc::new(two_atom());
        let terms: Vec<_> = (0..20)
            .map(|_| UncertainVariable::constant(2, 0.5))
            .collect();
        let seq =
            UncertainSequence::new(space, terms, UncertainVariable::constant(2, 0.5)).unwrap();
        let w = WeightSequence::from_rule(&WeightRule::Constant(1.0), 20).unwrap();
        let spec = OrliczSpec::new(OrliczPhi::Expm1, 2.0).unwrap();
        for n in [1usize, 7, 20] {
            assert_eq!(orlicz_p_gap(&seq, &w, &spec, n).unwrap(), 0.0);
        }
    }

    #[test]
    fn single_atom_gap_is_the_deviation() {
        // Alternating sequence around 1/2: the odd-n deviation of the
        // transform is 1/(2n); with identity phi and p = 2 the gap is
        // ((1/(2n))^2)^(1/2) = 1/(2n).
        let space = Arc::new(UncertaintySpace::additive(vec!["g".into()], &[1.0]).unwrap());
        let terms: Vec<_> = (1..=9usize)
            .map(|n| UncertainVariable::new(vec![if n % 2 == 1 { 1.0 } else { 0.0 }]).unwrap())
            .collect();
        let seq =
            UncertainSequence::new(space, terms, UncertainVariable::constant(1, 0.5)).unwrap();
        let w = WeightSequence::from_rule(&WeightRule::Constant(1.0), 9).unwrap();
        let spec = OrliczSpec::new(OrliczPhi::Identity, 2.0).unwrap();
        for n in [5usize, 7, 9] {
            let gap = orlicz_p_gap(&seq, &w, &spec, n).unwrap();
            assert!((gap - 1.0 / (2.0 * n as f64)).abs() < 1e-12);
        }
    }

    #[test]
    fn identity_p1_gap_matches_mean_deviation() {
        let space = Arc::new(two_atom());
        let terms: Vec<_> = (1..=12usize)
            .map(|n| {
                UncertainVariable::new(vec![1.0 / n as f64, -0.5 / n as f64]).unwrap()
            })
            .collect();
        let seq = UncertainSequence::new(
            space.clone(),
            terms,
            UncertainVariable::constant(2, 0.0),
        )
        .unwrap();
        let w = WeightSequence::from_rule(&WeightRule::Harmonic, 12).unwrap();
        let spec = OrliczSpec::<f64>::identity();
        for n in [1usize, 6, 12] {
            let nu = transform_at(&seq, &w, n).unwrap();
            let dev = nu.map(|v| v.abs());
            let direct = expected_value(&space, &dev).unwrap();
            let gap = orlicz_p_gap(&seq, &w, &spec, n).unwrap();
            assert!((gap - direct).abs() < 1e-12);
        }
    }

    #[test]
    fn scaling_deviation_up_does_not_shrink_gap() {
        let space = Arc::new(two_atom());
        let limit = UncertainVariable::constant(2, 0.0);
        let spec = OrliczSpec::new(OrliczPhi::Power(2.0), 2.0).unwrap();
        let nu = UncertainVariable::new(vec![0.3, 0.7]).unwrap();
        let nu_scaled = nu.map(|v| v * 2.0);
        let g1 = orlicz_p_gap_of(&space, &nu, &limit, &spec).unwrap();
        let g2 = orlicz_p_gap_of(&space, &nu_scaled, &limit, &spec).unwrap();
        assert!(g2 >= g1);
        assert!(g1 > 0.0);
    }
}
