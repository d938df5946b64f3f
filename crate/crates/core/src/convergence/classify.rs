//! Full class report assembly: every gap profile, tail verdicts, and
//! deterministic CSV / text rendering.

use super::gaps::{
    as_gap_of, deviation, dist_gap_of, mean_gap_of, measure_gap_of, riesz_gap_of, atoms_where,
    window_end, GapKind,
};
use super::{tail_stats, DiagnosticConfig, GapProfile, Verdict};
use crate::error::{Error, Result};
use crate::orlicz::OrliczSpec;
use crate::scalar::{fixed12, real, Real};
use crate::summability::{
    tauberian_profile_with, transform_prefix, WeightSequence, DEFAULT_TAUBERIAN_THRESHOLD,
};
use crate::uncertainty::{UncertainSequence, UncertainVariable};
use std::collections::VecDeque;

/// One verdict line: class, optional parameter, tail-max gap.
#[derive(Clone, Debug)]
pub struct ClassRow<T> {
    pub label: String,
    pub parameter: Option<String>,
    pub tail_max: T,
    pub verdict: Verdict,
}

/// Verdicts plus the profiles they were derived from.
#[derive(Clone, Debug)]
pub struct ClassReport<T> {
    pub scenario: Option<String>,
    pub horizon: usize,
    pub tolerance: T,
    pub rows: Vec<ClassRow<T>>,
    pub profiles: Vec<GapProfile<T>>,
}

impl<T: Real> ClassReport<T> {
    pub fn with_scenario(mut self, name: impl Into<String>) -> Self {
        self.scenario = Some(name.into());
        self
    }

    pub fn row(&self, label: &str, parameter: Option<&str>) -> Option<&ClassRow<T>> {
        self.rows
            .iter()
            .find(|r| r.label == label && r.parameter.as_deref() == parameter)
    }

    /// Aggregated verdict over every parameter row of a class: any
    /// failing row fails the class, any inconclusive row (without a
    /// failure) leaves it inconclusive.
    pub fn class_verdict(&self, label: &str) -> Option<Verdict> {
        let rows: Vec<&ClassRow<T>> =
            self.rows.iter().filter(|r| r.label == label).collect();
        if rows.is_empty() {
            return None;
        }
        if rows.iter().any(|r| r.verdict == Verdict::Fail) {
            Some(Verdict::Fail)
        } else if rows.iter().any(|r| r.verdict == Verdict::Inconclusive) {
            Some(Verdict::Inconclusive)
        } else {
            Some(Verdict::Pass)
        }
    }

    pub fn class_labels(&self) -> Vec<String> {
        let mut labels: Vec<String> = self.rows.iter().map(|r| r.label.clone()).collect();
        labels.dedup();
        labels
    }

    /// Deterministic CSV: fixed 12-decimal gaps, rows already in
    /// class-lexicographic order with ascending parameters.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("class,param,tail_max_gap,verdict\n");
        for r in &self.rows {
            out.push_str(&format!(
                "{},{},{},{}\n",
                r.label,
                r.parameter.as_deref().unwrap_or("-"),
                fixed12(r.tail_max),
                r.verdict.as_str()
            ));
        }
        out
    }

    /// Human-readable verdict grid.
    pub fn render_grid(&self) -> String {
        let mut out = String::new();
        if let Some(name) = &self.scenario {
            out.push_str(&format!("scenario: {name}\n"));
        }
        out.push_str(&format!(
            "EMPIRICAL verdicts at horizon {} (tolerance {})\n",
            self.horizon, self.tolerance
        ));
        out.push_str(&format!(
            "{:<18} {:<26} {:<14} {}\n",
            "class", "param", "verdict", "tail max gap"
        ));
        for r in &self.rows {
            out.push_str(&format!(
                "{:<18} {:<26} {:<14} {}\n",
                r.label,
                r.parameter.as_deref().unwrap_or("-"),
                r.verdict.as_str(),
                fixed12(r.tail_max)
            ));
        }
        out
    }
}

/// Distribution comparison grid for a sequence: midpoints between the
/// distinct values seen in the limit, the first terms, and the first
/// transforms, padded on both sides, with limit jump points removed.
pub fn default_distribution_grid<T: Real>(
    seq: &UncertainSequence<T>,
    transformed: &[UncertainVariable<T>],
) -> Vec<T> {
    let limit = seq.limit();
    let mut vals: Vec<T> = limit.values().to_vec();
    for n in 1..=seq.horizon().min(4) {
        if let Ok(t) = seq.term(n) {
            vals.extend_from_slice(t.values());
        }
    }
    for nu in transformed.iter().take(4) {
        vals.extend_from_slice(nu.values());
    }
    vals.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    vals.dedup();

    let mut grid: Vec<T> = vals
        .windows(2)
        .map(|w| (w[0] + w[1]) / real::<T>(2.0))
        .collect();
    let lo = vals[0];
    let hi = vals[vals.len() - 1];
    let span = hi - lo;
    let pad = if span > T::zero() {
        span / real::<T>(2.0)
    } else {
        T::one().max(lo.abs() / real::<T>(2.0))
    };
    grid.push(lo - pad);
    grid.push(hi + pad);
    grid.retain(|x| !limit.values().contains(x));
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite values"));
    grid.dedup();
    grid
}

/// Window extrema over `[n, ends[n-1]]` for `n = 1..=ends.len()`,
/// where both window edges are nondecreasing; monotone deques give the
/// whole run in linear time.
fn sliding_extrema<T: Real>(vals: &[T], ends: &[usize]) -> (Vec<T>, Vec<T>) {
    let mut maxq: VecDeque<usize> = VecDeque::new();
    let mut minq: VecDeque<usize> = VecDeque::new();
    let mut right = 0usize;
    let mut out_max = Vec::with_capacity(ends.len());
    let mut out_min = Vec::with_capacity(ends.len());
    for (i, &end) in ends.iter().enumerate() {
        let n = i + 1;
        while right < end {
            right += 1;
            let v = vals[right - 1];
            while maxq.back().is_some_and(|&b| vals[b - 1] <= v) {
                maxq.pop_back();
            }
            maxq.push_back(right);
            while minq.back().is_some_and(|&b| vals[b - 1] >= v) {
                minq.pop_back();
            }
            minq.push_back(right);
        }
        while maxq.front().is_some_and(|&f| f < n) {
            maxq.pop_front();
        }
        while minq.front().is_some_and(|&f| f < n) {
            minq.pop_front();
        }
        out_max.push(vals[maxq.front().copied().expect("window nonempty") - 1]);
        out_min.push(vals[minq.front().copied().expect("window nonempty") - 1]);
    }
    (out_max, out_min)
}

fn sorted_grid<T: Real>(grid: &[T]) -> Vec<T> {
    let mut g = grid.to_vec();
    g.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    g.dedup();
    g
}

fn push_row<T: Real>(
    rows: &mut Vec<ClassRow<T>>,
    profiles: &mut Vec<GapProfile<T>>,
    config: &DiagnosticConfig<T>,
    label: &str,
    parameter: Option<String>,
    values: Vec<T>,
) -> Result<()> {
    let (tail_max, verdict) = if values.is_empty() {
        (T::zero(), Verdict::Inconclusive)
    } else {
        let stats = tail_stats(&values, config.tail_fraction, config.tolerance)?;
        (stats.tail_max, stats.verdict)
    };
    rows.push(ClassRow {
        label: label.into(),
        parameter: parameter.clone(),
        tail_max,
        verdict,
    });
    profiles.push(GapProfile {
        label: label.into(),
        parameter,
        values,
    });
    Ok(())
}

/// Evaluates every diagnostic class on one scenario.
///
/// The raw classes run on the terms, the `_R` classes on the Riesz
/// transforms with the Orlicz function wrapped around the deviation
/// (distribution classes compare distributions directly).  The report
/// also carries the uniform-tail profile and the Tauberian weight
/// condition.  The space is assumed validated.
pub fn classify<T: Real>(
    seq: &UncertainSequence<T>,
    weights: &WeightSequence<T>,
    orlicz: &OrliczSpec<T>,
    config: &DiagnosticConfig<T>,
) -> Result<ClassReport<T>> {
    config.validate()?;
    let h = config
        .horizon
        .min(seq.horizon())
        .min(weights.horizon());
    if h < 10 {
        return Err(Error::InvalidParameter(format!(
            "effective horizon {h} is below the minimum of 10"
        )));
    }
    let space = seq.space();
    let limit = seq.limit();
    let atoms = limit.len();
    let nus_all = transform_prefix(seq, weights)?;
    let nus = &nus_all[..h];
    let eps_grid = sorted_grid(&config.epsilon_grid);
    let lambda_grid = sorted_grid(&config.lambda_grid);
    let x_grid = default_distribution_grid(seq, nus);

    let mut rows: Vec<ClassRow<T>> = Vec::new();
    let mut profiles: Vec<GapProfile<T>> = Vec::new();

    // f and f_R.
    let mut f_vals = Vec::with_capacity(h);
    let mut fr_vals = Vec::with_capacity(h);
    for n in 1..=h {
        f_vals.push(as_gap_of(space, seq.term(n)?, limit));
        fr_vals.push(riesz_gap_of(&GapKind::As, space, &nus[n - 1], limit, orlicz)?);
    }
    push_row(&mut rows, &mut profiles, config, "f", None, f_vals)?;
    push_row(&mut rows, &mut profiles, config, "f_R", None, fr_vals)?;

    // m and m_R per epsilon.
    for &eps in &eps_grid {
        let param = Some(format!("eps={eps}"));
        let mut m_vals = Vec::with_capacity(h);
        let mut mr_vals = Vec::with_capacity(h);
        let kind = GapKind::Measure { epsilon: eps };
        for n in 1..=h {
            m_vals.push(measure_gap_of(space, seq.term(n)?, limit, eps)?);
            mr_vals.push(riesz_gap_of(&kind, space, &nus[n - 1], limit, orlicz)?);
        }
        push_row(&mut rows, &mut profiles, config, "m", param.clone(), m_vals)?;
        push_row(&mut rows, &mut profiles, config, "m_R", param, mr_vals)?;
    }

    // e and e_R.
    let mut e_vals = Vec::with_capacity(h);
    let mut er_vals = Vec::with_capacity(h);
    for n in 1..=h {
        e_vals.push(mean_gap_of(space, seq.term(n)?, limit)?);
        er_vals.push(riesz_gap_of(&GapKind::Mean, space, &nus[n - 1], limit, orlicz)?);
    }
    push_row(&mut rows, &mut profiles, config, "e", None, e_vals)?;
    push_row(&mut rows, &mut profiles, config, "e_R", None, er_vals)?;

    // d and d_R over the shared grid.
    let mut d_vals = Vec::with_capacity(h);
    let mut dr_vals = Vec::with_capacity(h);
    for n in 1..=h {
        d_vals.push(dist_gap_of(space, seq.term(n)?, limit, &x_grid)?);
        dr_vals.push(dist_gap_of(space, &nus[n - 1], limit, &x_grid)?);
    }
    push_row(&mut rows, &mut profiles, config, "d", None, d_vals)?;
    push_row(&mut rows, &mut profiles, config, "d_R", None, dr_vals)?;

    // Slow oscillation per (lambda, epsilon), on the raw terms.
    let term_matrix: Vec<Vec<T>> = (0..atoms)
        .map(|a| (1..=h).map(|n| seq.term(n).map(|t| t.value(a))).collect())
        .collect::<Result<_>>()?;
    for &lambda in &lambda_grid {
        let mut ends = Vec::new();
        for n in 1..=h {
            let end = window_end(n, lambda);
            if end > h {
                break;
            }
            ends.push(end);
        }
        let extrema: Vec<(Vec<T>, Vec<T>)> = term_matrix
            .iter()
            .map(|vals| sliding_extrema(vals, &ends))
            .collect();
        for &eps in &eps_grid {
            let vals = (0..ends.len())
                .map(|i| {
                    let event = atoms_where(atoms, |a| {
                        let base = term_matrix[a][i];
                        let osc = (extrema[a].0[i] - base).max(base - extrema[a].1[i]);
                        osc >= eps
                    });
                    space.measure_of(event)
                })
                .collect::<Result<Vec<T>>>()?;
            push_row(
                &mut rows,
                &mut profiles,
                config,
                "so",
                Some(format!("lambda={lambda};eps={eps}")),
                vals,
            )?;
        }
    }

    // Uniform tail union on the transforms, one profile per epsilon.
    for &eps in &eps_grid {
        let mut masks = Vec::with_capacity(h);
        for nu in nus {
            let dev = deviation(nu, limit);
            masks.push(atoms_where(atoms, |a| dev.value(a) >= eps));
        }
        let mut vals = vec![T::zero(); h];
        let mut acc = crate::uncertainty::Event::EMPTY;
        for m in (1..=h).rev() {
            acc = acc.union(masks[m - 1]);
            vals[m - 1] = space.measure_of(acc)?;
        }
        push_row(
            &mut rows,
            &mut profiles,
            config,
            "u_tilde_R",
            Some(format!("eps={eps}")),
            vals,
        )?;
    }

    // Tauberian weight condition; its verdict has its own rule (tail
    // below threshold and nonincreasing), not the gap-tolerance rule.
    let tauberian = tauberian_profile_with(
        weights,
        h,
        real(DEFAULT_TAUBERIAN_THRESHOLD),
        config.tail_fraction,
    )?;
    rows.push(ClassRow {
        label: "tauberian_weight".into(),
        parameter: None,
        tail_max: tauberian.tail_max,
        verdict: if tauberian.holds {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
    });
    profiles.push(GapProfile {
        label: "tauberian_weight".into(),
        parameter: None,
        values: tauberian.values,
    });

    rows.sort_by(|a, b| a.label.cmp(&b.label));
    profiles.sort_by(|a, b| a.label.cmp(&b.label));

    Ok(ClassReport {
        scenario: None,
        horizon: h,
        tolerance: config.tolerance,
        rows,
        profiles,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::summability::WeightRule;
    use crate::uncertainty::UncertaintySpace;
    use std::sync::Arc;

    fn one_atom_seq(values: Vec<f64>, limit: f64) -> UncertainSequence<f64> {
        let space =
            Arc::new(UncertaintySpace::additive(vec!["g1".into()], &[1.0]).unwrap());
        let terms = values
            .into_iter()
            .map(|v| UncertainVariable::new(vec![v]).unwrap())
            .collect();
        UncertainSequence::new(space, terms, UncertainVariable::new(vec![limit]).unwrap())
            .unwrap()
    }

    fn constant_seq(h: usize) -> UncertainSequence<f64> {
        one_atom_seq(vec![0.5; h], 0.5)
    }

    fn alternating_seq(h: usize) -> UncertainSequence<f64> {
        one_atom_seq(
            (1..=h).map(|n| if n % 2 == 1 { 1.0 } else { 0.0 }).collect(),
            0.5,
        )
    }

    #[test]
    fn constant_sequence_passes_everything() {
        let h = 100;
        let seq = constant_seq(h);
        let w = WeightSequence::from_rule(&WeightRule::Harmonic, h).unwrap();
        let config = DiagnosticConfig::new(h);
        let report = classify(&seq, &w, &OrliczSpec::identity(), &config).unwrap();
        for row in &report.rows {
            if row.label == "tauberian_weight" {
                continue;
            }
            assert_eq!(
                row.verdict,
                Verdict::Pass,
                "row {} {:?} should pass",
                row.label,
                row.parameter
            );
            assert_eq!(row.tail_max, 0.0);
        }
        // 6 single rows + m/m_R/u_tilde_R x3 eps + so x (2 lambda x 3
        // eps) + tauberian.
        assert_eq!(report.rows.len(), 22);
    }

    #[test]
    fn alternating_scenario_verdicts() {
        let h = 2000;
        let seq = alternating_seq(h);
        let w = WeightSequence::from_rule(&WeightRule::Constant(1.0), h).unwrap();
        let config = DiagnosticConfig::new(h).with_tolerance(3e-4);
        let report = classify(&seq, &w, &OrliczSpec::identity(), &config).unwrap();

        assert_eq!(report.class_verdict("f"), Some(Verdict::Fail));
        assert_eq!(report.class_verdict("f_R"), Some(Verdict::Pass));
        assert_eq!(report.class_verdict("m"), Some(Verdict::Fail));
        assert_eq!(report.class_verdict("m_R"), Some(Verdict::Pass));
        assert_eq!(report.class_verdict("e"), Some(Verdict::Fail));
        assert_eq!(report.class_verdict("e_R"), Some(Verdict::Pass));
        assert_eq!(report.class_verdict("d"), Some(Verdict::Fail));
        assert_eq!(report.class_verdict("d_R"), Some(Verdict::Pass));
        assert_eq!(report.class_verdict("so"), Some(Verdict::Fail));
        assert_eq!(report.class_verdict("u_tilde_R"), Some(Verdict::Pass));
        assert_eq!(report.class_verdict("tauberian_weight"), Some(Verdict::Fail));

        let f_row = report.row("f", None).unwrap();
        assert!((f_row.tail_max - 0.5).abs() < 1e-12);
    }

    #[test]
    fn rows_are_sorted_and_csv_is_deterministic() {
        let h = 60;
        let seq = constant_seq(h);
        let w = WeightSequence::from_rule(&WeightRule::Constant(1.0), h).unwrap();
        let config = DiagnosticConfig::new(h);
        let report = classify(&seq, &w, &OrliczSpec::identity(), &config).unwrap();
        let labels: Vec<&str> = report.rows.iter().map(|r| r.label.as_str()).collect();
        let mut sorted = labels.clone();
        sorted.sort();
        assert_eq!(labels, sorted);

        let again = classify(&seq, &w, &OrliczSpec::identity(), &config).unwrap();
        assert_eq!(report.to_csv(), again.to_csv());
        assert!(report.to_csv().starts_with("class,param,tail_max_gap,verdict\n"));
        // Ascending epsilon order within a label.
        let csv = report.to_csv();
        let m_rows: Vec<&str> = csv.lines().filter(|l| l.starts_with("m,")).collect();
        assert_eq!(m_rows.len(), 3);
        assert!(m_rows[0].contains("eps=0.001"));
        assert!(m_rows[2].contains("eps=0.1"));
    }

    #[test]
    fn distribution_grid_avoids_limit_jumps() {
        let h = 20;
        let seq = alternating_seq(h);
        let w = WeightSequence::from_rule(&WeightRule::Constant(1.0), h).unwrap();
        let nus = transform_prefix(&seq, &w).unwrap();
        let grid = default_distribution_grid(&seq, &nus);
        assert!(!grid.is_empty());
        assert!(grid.iter().all(|&x| x != 0.5));
        // Contains padding beyond the seen range on both sides.
        assert!(grid.iter().any(|&x| x < 0.0));
        assert!(grid.iter().any(|&x| x > 1.0));
    }

    #[test]
    fn sliding_extrema_matches_naive() {
        let vals: Vec<f64> = vec![3.0, 1.0, 4.0, 1.0, 5.0, 9.0, 2.0, 6.0, 5.0, 3.0];
        let ends: Vec<usize> = (1..=8).map(|n| (n + 2).min(10)).collect();
        let (maxs, mins) = sliding_extrema(&vals, &ends);
        for (i, &end) in ends.iter().enumerate() {
            let n = i + 1;
            let window = &vals[n - 1..end];
            let m = window.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lo = window.iter().cloned().fold(f64::INFINITY, f64::min);
            assert_eq!(maxs[i], m);
            assert_eq!(mins[i], lo);
        }
    }

    #[test]
    fn effective_horizon_respects_all_inputs() {
        let seq = constant_seq(50);
        let w = WeightSequence::from_rule(&WeightRule::Constant(1.0), 200).unwrap();
        let config = DiagnosticConfig::new(1000);
        let report = classify(&seq, &w, &OrliczSpec::identity(), &config).unwrap();
        assert_eq!(report.horizon, 50);

        let tiny = constant_seq(5);
        assert!(classify(&tiny, &w, &OrliczSpec::identity(), &config).is_err());
    }
}
