//! Shared helpers for the integration suites: a quadrature oracle for
//! the expected value and seeded random instance generators.
#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use riesz_uncertain::uncertainty::{event_where, UncertaintySpace, UncertainVariable};
use riesz_uncertain::{Space, Variable};

/// Midpoint-rule quadrature for the expected value: integrates
/// `M(xi >= r)` over `r > 0` minus `M(xi <= r)` over `r < 0`.  Both
/// integrands are step functions with breakpoints at the distinct
/// variable values, so a threshold pointer keeps each step O(1).
pub fn quadrature_expected_value(space: &Space, var: &Variable, step: f64) -> f64 {
    let mut vals: Vec<f64> = var.values().to_vec();
    vals.sort_by(f64::total_cmp);
    vals.dedup();
    let upper: Vec<f64> = vals
        .iter()
        .map(|&v| {
            let event = event_where(space, var, |x| x >= v).unwrap();
            space.measure_of(event).unwrap()
        })
        .collect();
    let lower: Vec<f64> = vals
        .iter()
        .map(|&v| {
            let event = event_where(space, var, |x| x <= v).unwrap();
            space.measure_of(event).unwrap()
        })
        .collect();

    let mut total = 0.0;
    let hi = *vals.last().unwrap();
    if hi > 0.0 {
        let steps = (hi / step).ceil() as usize;
        // Index of the smallest value >= r, advanced as r climbs.
        let mut idx = vals.partition_point(|&v| v < 0.5 * step);
        for j in 0..steps {
            let r = (j as f64 + 0.5) * step;
            while idx < vals.len() && vals[idx] < r {
                idx += 1;
            }
            if idx == vals.len() {
                break;
            }
            total += upper[idx] * step;
        }
    }
    let lo = vals[0];
    if lo < 0.0 {
        let steps = ((-lo) / step).ceil() as usize;
        // Index of the largest value <= r, walked down as r drops.
        let mut idx = vals.partition_point(|&v| v <= -0.5 * step);
        for j in 0..steps {
            let r = -(j as f64 + 0.5) * step;
            while idx > 0 && vals[idx - 1] > r {
                idx -= 1;
            }
            if idx == 0 {
                break;
            }
            total -= lower[idx - 1] * step;
        }
    }
    total
}

/// Random space with `1..=max_atoms` atoms, additive or possibility
/// with even odds, atom weights in `(0.05, 1)`.
pub fn random_space<R: Rng>(rng: &mut R, max_atoms: usize) -> Arc<Space> {
    let count = rng.gen_range(1..=max_atoms);
    let atoms: Vec<String> = (0..count).map(|i| format!("g{}", i + 1)).collect();
    let weights: Vec<f64> = (0..count).map(|_| rng.gen_range(0.05..1.0)).collect();
    let space = if rng.gen_bool(0.5) {
        UncertaintySpace::additive(atoms, &weights).unwrap()
    } else {
        UncertaintySpace::possibility(atoms, &weights).unwrap()
    };
    Arc::new(space)
}

/// Random variable with values uniform in `(-scale, scale)`.
pub fn random_variable<R: Rng>(rng: &mut R, atom_count: usize, scale: f64) -> Variable {
    let values = (0..atom_count).map(|_| rng.gen_range(-scale..scale)).collect();
    UncertainVariable::new(values).unwrap()
}
