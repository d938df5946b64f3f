//! Built-in scenario families, the shipped corpus, and the inclusion
//! table aggregating class verdicts across scenarios.

pub mod file;

use std::sync::Arc;

use crate::convergence::{classify, ClassReport, DiagnosticConfig, Verdict};
use crate::error::{Error, Result};
use crate::orlicz::OrliczSpec;
use crate::scalar::{real, real_usize, Real};
use crate::summability::{transform_at, WeightSequence};
use crate::uncertainty::{UncertaintySpace, UncertainSequence, UncertainVariable};

/// Every class label a report carries, in row order.
pub const CLASS_LABELS: [&str; 11] = [
    "d",
    "d_R",
    "e",
    "e_R",
    "f",
    "f_R",
    "m",
    "m_R",
    "so",
    "tauberian_weight",
    "u_tilde_R",
];

/// Verdict-level inclusion arrows: a scenario passing the left class
/// must not fail the right one.
pub const INCLUSION_ARROWS: [(&str, &str); 8] = [
    ("f", "f_R"),
    ("e", "e_R"),
    ("m", "m_R"),
    ("d", "d_R"),
    ("e", "m"),
    ("m", "d"),
    ("e_R", "m_R"),
    ("m_R", "d_R"),
];

/// Term rule of a built-in sequence family.  Additive families shift
/// the limit candidate; value families ignore it.
#[derive(Clone, Debug, PartialEq)]
pub enum SequenceFamily<T> {
    /// `xi_n = value` on every atom.
    Constant { value: T },
    /// `xi_n = high` (odd n) / `low` (even n) on every atom.
    Oscillating { high: T, low: T },
    /// `xi_n = xi + scale / n^alpha`.
    Decay { scale: T, alpha: T },
    /// `xi_n = xi + amplitude 2^{-j} (-1)^{n+1}` with `j` the dyadic
    /// block of `n` (block `j` covers `2^{j-1} < n <= 2^j`).
    BlockOscillating { amplitude: T },
    /// `xi_n = xi + scales[a] / n^{alphas[a]}` per atom `a`.
    AtomwiseMixed { scales: Vec<T>, alphas: Vec<T> },
    /// `xi_1 = xi + value`, all later terms equal to `xi`.
    Impulse { value: T },
}

fn block_index(n: usize) -> u32 {
    n.next_power_of_two().trailing_zeros()
}

/// Materializes a family on a space out to `horizon` terms.
pub fn builtin_family<T: Real>(
    family: &SequenceFamily<T>,
    space: &Arc<UncertaintySpace<T>>,
    limit: UncertainVariable<T>,
    horizon: usize,
) -> Result<UncertainSequence<T>> {
    let atoms = space.atom_count();
    if limit.len() != atoms {
        return Err(Error::AtomMismatch {
            expected: atoms,
            got: limit.len(),
        });
    }
    if horizon == 0 {
        return Err(Error::InvalidParameter(
            "family horizon must be at least 1".into(),
        ));
    }
    if let SequenceFamily::AtomwiseMixed { scales, alphas } = family {
        if scales.len() != atoms || alphas.len() != atoms {
            return Err(Error::Scenario(format!(
                "atomwise family needs {atoms} scales and alphas, got {} and {}",
                scales.len(),
                alphas.len()
            )));
        }
    }
    let mut terms = Vec::with_capacity(horizon);
    for n in 1..=horizon {
        let nf = real_usize::<T>(n);
        let values: Vec<T> = match family {
            SequenceFamily::Constant { value } => vec![*value; atoms],
            SequenceFamily::Oscillating { high, low } => {
                vec![if n % 2 == 1 { *high } else { *low }; atoms]
            }
            SequenceFamily::Decay { scale, alpha } => (0..atoms)
                .map(|a| limit.value(a) + *scale / nf.powf(*alpha))
                .collect(),
            SequenceFamily::BlockOscillating { amplitude } => {
                let amp = *amplitude * real::<T>(0.5).powi(block_index(n) as i32);
                let signed = if n % 2 == 1 { amp } else { -amp };
                (0..atoms).map(|a| limit.value(a) + signed).collect()
            }
            SequenceFamily::AtomwiseMixed { scales, alphas } => (0..atoms)
                .map(|a| limit.value(a) + scales[a] / nf.powf(alphas[a]))
                .collect(),
            SequenceFamily::Impulse { value } => {
                let shift = if n == 1 { *value } else { T::zero() };
                (0..atoms).map(|a| limit.value(a) + shift).collect()
            }
        };
        terms.push(UncertainVariable::new(values)?);
    }
    UncertainSequence::new(space.clone(), terms, limit)
}

/// Golden data a scenario may ship: aggregated class verdicts and
/// transform spot values (checked within `1e-12`).
#[derive(Clone, Debug)]
pub struct GoldenData<T> {
    pub verdicts: Vec<(String, Verdict)>,
    pub transforms: Vec<(usize, Vec<T>)>,
}

/// A fully materialized scenario ready for classification.
#[derive(Clone, Debug)]
pub struct Scenario<T> {
    pub name: String,
    pub space: Arc<UncertaintySpace<T>>,
    pub sequence: UncertainSequence<T>,
    pub weights: WeightSequence<T>,
    pub orlicz: OrliczSpec<T>,
    pub config: DiagnosticConfig<T>,
    pub golden: Option<GoldenData<T>>,
}

impl<T: Real> Scenario<T> {
    pub fn classify(&self) -> Result<ClassReport<T>> {
        Ok(classify(&self.sequence, &self.weights, &self.orlicz, &self.config)?
            .with_scenario(self.name.clone()))
    }

    /// Compares a report against the golden data, returning one line
    /// per mismatch (empty when everything agrees or nothing is
    /// golden).
    pub fn check_golden(&self, report: &ClassReport<T>) -> Result<Vec<String>> {
        let mut issues = Vec::new();
        let Some(golden) = &self.golden else {
            return Ok(issues);
        };
        for (label, want) in &golden.verdicts {
            let got = report.class_verdict(label);
            if got != Some(*want) {
                issues.push(format!(
                    "{}: class {label} expected {}, got {}",
                    self.name,
                    want.as_str(),
                    got.map(Verdict::as_str).unwrap_or("missing")
                ));
            }
        }
        let tol = real::<T>(1e-12);
        for (n, values) in &golden.transforms {
            let nu = transform_at(&self.sequence, &self.weights, *n)?;
            if nu.len() != values.len() {
                issues.push(format!(
                    "{}: transform at {n} has {} atoms, golden lists {}",
                    self.name,
                    nu.len(),
                    values.len()
                ));
                continue;
            }
            for (a, &want) in values.iter().enumerate() {
                if (nu.value(a) - want).abs() > tol {
                    issues.push(format!(
                        "{}: transform at {n}, atom {a}: expected {want}, got {}",
                        self.name,
                        nu.value(a)
                    ));
                }
            }
        }
        Ok(issues)
    }
}

/// One inclusion-arrow breach: the scenario passed `from` but failed
/// `to`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrowViolation {
    pub scenario: String,
    pub from: String,
    pub to: String,
}

#[derive(Clone, Debug)]
pub struct TableEntry<T> {
    pub name: String,
    pub report: ClassReport<T>,
}

/// Classified corpus with arrow and golden checks applied.
#[derive(Clone, Debug)]
pub struct InclusionTable<T> {
    /// Entries sorted by scenario name.
    pub entries: Vec<TableEntry<T>>,
    pub violations: Vec<ArrowViolation>,
    pub golden_mismatches: Vec<String>,
}

impl<T: Real> InclusionTable<T> {
    pub fn ok(&self) -> bool {
        self.violations.is_empty() && self.golden_mismatches.is_empty()
    }

    /// Deterministic long-form CSV, one row per scenario and class row.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("scenario,class,param,tail_max_gap,verdict\n");
        for entry in &self.entries {
            for line in entry.report.to_csv().lines().skip(1) {
                out.push_str(&format!("{},{line}\n", entry.name));
            }
        }
        out
    }

    /// Markdown grid of aggregated class verdicts plus check results.
    pub fn render_markdown(&self) -> String {
        let mut out = String::from("| scenario |");
        for label in CLASS_LABELS {
            out.push_str(&format!(" {label} |"));
        }
        out.push('\n');
        out.push_str("|---|");
        for _ in CLASS_LABELS {
            out.push_str("---|");
        }
        out.push('\n');
        for entry in &self.entries {
            out.push_str(&format!("| {} |", entry.name));
            for label in CLASS_LABELS {
                let cell = entry
                    .report
                    .class_verdict(label)
                    .map(Verdict::as_str)
                    .unwrap_or("-");
                out.push_str(&format!(" {cell} |"));
            }
            out.push('\n');
        }
        out.push('\n');
        if self.violations.is_empty() {
            out.push_str("arrow violations: none\n");
        } else {
            out.push_str("arrow violations:\n");
            for v in &self.violations {
                out.push_str(&format!("- {}: {} passes but {} fails\n", v.scenario, v.from, v.to));
            }
        }
        if self.golden_mismatches.is_empty() {
            out.push_str("golden mismatches: none\n");
        } else {
            out.push_str("golden mismatches:\n");
            for g in &self.golden_mismatches {
                out.push_str(&format!("- {g}\n"));
            }
        }
        out
    }
}

/// Classifies every scenario and checks the inclusion arrows and any
/// golden data.  Verdict inclusions only constrain pass/fail pairs:
/// an inconclusive verdict on either side never counts as a breach.
pub fn inclusion_table<T: Real>(scenarios: &[Scenario<T>]) -> Result<InclusionTable<T>> {
    if scenarios.is_empty() {
        return Err(Error::EmptyGrid("no scenarios to tabulate".into()));
    }
    let mut order: Vec<&Scenario<T>> = scenarios.iter().collect();
    order.sort_by(|a, b| a.name.cmp(&b.name));
    let mut entries = Vec::with_capacity(order.len());
    let mut violations = Vec::new();
    let mut golden_mismatches = Vec::new();
    for scenario in order {
        let report = scenario.classify()?;
        for (from, to) in INCLUSION_ARROWS {
            if report.class_verdict(from) == Some(Verdict::Pass)
                && report.class_verdict(to) == Some(Verdict::Fail)
            {
                violations.push(ArrowViolation {
                    scenario: scenario.name.clone(),
                    from: from.into(),
                    to: to.into(),
                });
            }
        }
        golden_mismatches.extend(scenario.check_golden(&report)?);
        entries.push(TableEntry {
            name: scenario.name.clone(),
            report,
        });
    }
    Ok(InclusionTable {
        entries,
        violations,
        golden_mismatches,
    })
}

/// The one-atom alternating witness separating `f` from `f_R`.
pub fn oscillating_counterexample() -> Result<Scenario<f64>> {
    file::counterexample_spec().build()
}

/// The shipped corpus, built from the same specs the fixture files
/// hold.
pub fn corpus() -> Result<Vec<Scenario<f64>>> {
    file::shipped_corpus_specs()
        .iter()
        .map(|spec| spec.build())
        .collect()
}
