//! Serializable scenario descriptions and the shipped corpus specs.
//!
//! A scenario file is JSON with top-level keys `name`, `space`,
//! `sequence`, `weights`, `orlicz`, and optional `config` and
//! `golden`.  Building a file validates shapes and parameters;
//! measure axioms and Orlicz admissibility are checked separately so
//! callers can report them per check.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{GoldenData, Scenario, SequenceFamily};
use crate::convergence::{DiagnosticConfig, Verdict};
use crate::error::{Error, Result};
use crate::orlicz::{OrliczPhi, OrliczSpec};
use crate::summability::{WeightRule, WeightSequence};
use crate::uncertainty::{UncertaintySpace, UncertainVariable};

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub name: String,
    pub space: SpaceFile,
    pub sequence: SequenceFile,
    pub weights: WeightFile,
    pub orlicz: OrliczFile,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub golden: Option<GoldenFile>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    pub atoms: Vec<String>,
    pub measure: MeasureFile,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum MeasureFile {
    /// Atom weights normalized to sum 1; events get their weight sum.
    Additive { weights: Vec<f64> },
    /// Atom possibilities normalized to max 1, dual-completed.
    Possibility { weights: Vec<f64> },
    /// Full subset table in bitmask order (2^atoms entries).
    Explicit { table: Vec<f64> },
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct SequenceFile {
    pub family: FamilyFile,
    /// Limit candidate, one value per atom.
    pub limit: Vec<f64>,
    /// Number of terms to materialize.
    pub horizon: usize,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum FamilyFile {
    Constant { value: f64 },
    Oscillating { high: f64, low: f64 },
    Decay { scale: f64, alpha: f64 },
    BlockOscillating { amplitude: f64 },
    AtomwiseMixed { scales: Vec<f64>, alphas: Vec<f64> },
    Impulse { value: f64 },
}

impl FamilyFile {
    fn to_family(&self) -> SequenceFamily<f64> {
        match self {
            FamilyFile::Constant { value } => SequenceFamily::Constant { value: *value },
            FamilyFile::Oscillating { high, low } => SequenceFamily::Oscillating {
                high: *high,
                low: *low,
            },
            FamilyFile::Decay { scale, alpha } => SequenceFamily::Decay {
                scale: *scale,
                alpha: *alpha,
            },
            FamilyFile::BlockOscillating { amplitude } => SequenceFamily::BlockOscillating {
                amplitude: *amplitude,
            },
            FamilyFile::AtomwiseMixed { scales, alphas } => SequenceFamily::AtomwiseMixed {
                scales: scales.clone(),
                alphas: alphas.clone(),
            },
            FamilyFile::Impulse { value } => SequenceFamily::Impulse { value: *value },
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase", deny_unknown_fields)]
pub enum WeightFile {
    Constant { value: f64 },
    Harmonic,
    Geometric { ratio: f64 },
    Power { exponent: f64 },
    Explicit { values: Vec<f64> },
}

impl WeightFile {
    fn to_rule(&self) -> WeightRule<f64> {
        match self {
            WeightFile::Constant { value } => WeightRule::Constant(*value),
            WeightFile::Harmonic => WeightRule::Harmonic,
            WeightFile::Geometric { ratio } => WeightRule::Geometric(*ratio),
            WeightFile::Power { exponent } => WeightRule::Power(*exponent),
            WeightFile::Explicit { values } => WeightRule::Explicit(values.clone()),
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct OrliczFile {
    /// One of `identity`, `power`, `expm1`, `table`.
    pub phi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub exponent: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<[f64; 2]>>,
    pub p: f64,
}

impl OrliczFile {
    fn to_spec(&self) -> Result<OrliczSpec<f64>> {
        let phi = match self.phi.as_str() {
            "identity" => OrliczPhi::Identity,
            "expm1" => OrliczPhi::Expm1,
            "power" => {
                let exponent = self.exponent.ok_or_else(|| {
                    Error::Scenario("power phi needs an exponent".into())
                })?;
                OrliczPhi::Power(exponent)
            }
            "table" => {
                let points = self.points.clone().ok_or_else(|| {
                    Error::Scenario("table phi needs breakpoints".into())
                })?;
                OrliczPhi::Table(points.into_iter().map(|[x, y]| (x, y)).collect())
            }
            other => {
                return Err(Error::Scenario(format!("unknown orlicz phi {other:?}")));
            }
        };
        OrliczSpec::new(phi, self.p)
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub horizon: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tolerance: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_grid: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail_fraction: Option<f64>,
}

impl ConfigFile {
    fn apply(&self, config: &mut DiagnosticConfig<f64>) {
        if let Some(h) = self.horizon {
            config.horizon = h;
        }
        if let Some(t) = self.tolerance {
            config.tolerance = t;
        }
        if let Some(eps) = &self.epsilon_grid {
            config.epsilon_grid = eps.clone();
        }
        if let Some(lam) = &self.lambda_grid {
            config.lambda_grid = lam.clone();
        }
        if let Some(f) = self.tail_fraction {
            config.tail_fraction = f;
        }
    }
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq, Default)]
#[serde(deny_unknown_fields)]
pub struct GoldenFile {
    /// Aggregated class verdicts: label to `pass` / `fail` /
    /// `inconclusive`.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub verdicts: BTreeMap<String, String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub transforms: Vec<TransformCheckFile>,
}

#[derive(Serialize, Deserialize, Debug, Clone, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct TransformCheckFile {
    pub n: usize,
    pub values: Vec<f64>,
}

impl GoldenFile {
    fn to_golden(&self) -> Result<GoldenData<f64>> {
        let mut verdicts = Vec::with_capacity(self.verdicts.len());
        for (label, word) in &self.verdicts {
            let verdict = match word.as_str() {
                "pass" => Verdict::Pass,
                "fail" => Verdict::Fail,
                "inconclusive" => Verdict::Inconclusive,
                other => {
                    return Err(Error::Scenario(format!(
                        "unknown golden verdict {other:?} for class {label}"
                    )));
                }
            };
            verdicts.push((label.clone(), verdict));
        }
        Ok(GoldenData {
            verdicts,
            transforms: self
                .transforms
                .iter()
                .map(|t| (t.n, t.values.clone()))
                .collect(),
        })
    }
}

impl ScenarioFile {
    /// Materializes the scenario.  Errors here are shape or parameter
    /// problems; measure axioms and Orlicz admissibility are left to
    /// the validation pass.
    pub fn build(&self) -> Result<Scenario<f64>> {
        let atoms = self.space.atoms.clone();
        let space = Arc::new(match &self.space.measure {
            MeasureFile::Additive { weights } => UncertaintySpace::additive(atoms, weights)?,
            MeasureFile::Possibility { weights } => UncertaintySpace::possibility(atoms, weights)?,
            MeasureFile::Explicit { table } => UncertaintySpace::explicit(atoms, table.clone())?,
        });
        let limit = UncertainVariable::new(self.sequence.limit.clone())?;
        let sequence = super::builtin_family(
            &self.sequence.family.to_family(),
            &space,
            limit,
            self.sequence.horizon,
        )?;
        let weights = WeightSequence::from_rule(&self.weights.to_rule(), self.sequence.horizon)?;
        let orlicz = self.orlicz.to_spec()?;
        let mut config = DiagnosticConfig::new(self.sequence.horizon);
        if let Some(file_config) = &self.config {
            file_config.apply(&mut config);
        }
        let golden = match &self.golden {
            Some(g) => Some(g.to_golden()?),
            None => None,
        };
        Ok(Scenario {
            name: self.name.clone(),
            space,
            sequence,
            weights,
            orlicz,
            config,
            golden,
        })
    }
}

fn identity_orlicz() -> OrliczFile {
    OrliczFile {
        phi: "identity".into(),
        exponent: None,
        points: None,
        p: 1.0,
    }
}

fn verdict_map(entries: &[(&str, &str)]) -> BTreeMap<String, String> {
    entries
        .iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect()
}

/// All classes at one verdict except the listed overrides.
fn verdicts_except(default: &str, overrides: &[(&str, &str)]) -> BTreeMap<String, String> {
    let mut map: BTreeMap<String, String> = super::CLASS_LABELS
        .iter()
        .map(|label| (label.to_string(), default.to_string()))
        .collect();
    for (k, v) in overrides {
        map.insert(k.to_string(), v.to_string());
    }
    map
}

/// The alternating 1, 0, 1, 0 sequence with limit one half under unit
/// weights: every plain class fails while every transformed class
/// passes.
pub fn counterexample_spec() -> ScenarioFile {
    ScenarioFile {
        name: "oscillating_counterexample".into(),
        space: SpaceFile {
            atoms: vec!["g1".into()],
            measure: MeasureFile::Additive { weights: vec![1.0] },
        },
        sequence: SequenceFile {
            family: FamilyFile::Oscillating {
                high: 1.0,
                low: 0.0,
            },
            limit: vec![0.5],
            horizon: 10_000,
        },
        weights: WeightFile::Constant { value: 1.0 },
        orlicz: identity_orlicz(),
        // The transformed deviation at the default horizon sits near
        // 5e-5, so the pass bar has to sit above it.
        config: Some(ConfigFile {
            tolerance: Some(1e-4),
            ..ConfigFile::default()
        }),
        golden: Some(GoldenFile {
            verdicts: verdict_map(&[
                ("d", "fail"),
                ("d_R", "pass"),
                ("e", "fail"),
                ("e_R", "pass"),
                ("f", "fail"),
                ("f_R", "pass"),
                ("m", "fail"),
                ("m_R", "pass"),
                ("so", "fail"),
                ("tauberian_weight", "fail"),
                ("u_tilde_R", "pass"),
            ]),
            transforms: vec![
                TransformCheckFile {
                    n: 5,
                    values: vec![0.6],
                },
                TransformCheckFile {
                    n: 6,
                    values: vec![0.5],
                },
            ],
        }),
    }
}

/// Specs behind the fixture files under `scenarios/`.
pub fn shipped_corpus_specs() -> Vec<ScenarioFile> {
    vec![
        ScenarioFile {
            name: "constant_half".into(),
            space: SpaceFile {
                atoms: vec!["g1".into(), "g2".into()],
                measure: MeasureFile::Additive {
                    weights: vec![0.4, 0.6],
                },
            },
            sequence: SequenceFile {
                family: FamilyFile::Constant { value: 0.5 },
                limit: vec![0.5, 0.5],
                horizon: 10_000,
            },
            weights: WeightFile::Constant { value: 1.0 },
            orlicz: identity_orlicz(),
            config: None,
            golden: Some(GoldenFile {
                verdicts: verdicts_except("pass", &[("tauberian_weight", "fail")]),
                transforms: vec![
                    TransformCheckFile {
                        n: 5,
                        values: vec![0.5, 0.5],
                    },
                    TransformCheckFile {
                        n: 1000,
                        values: vec![0.5, 0.5],
                    },
                ],
            }),
        },
        counterexample_spec(),
        ScenarioFile {
            name: "decay_power_weights".into(),
            space: SpaceFile {
                atoms: vec!["g1".into(), "g2".into()],
                measure: MeasureFile::Additive {
                    weights: vec![0.4, 0.6],
                },
            },
            sequence: SequenceFile {
                family: FamilyFile::Decay {
                    scale: 1.0,
                    alpha: 1.0,
                },
                limit: vec![0.0, 1.0],
                horizon: 10_000,
            },
            weights: WeightFile::Power { exponent: 1.0 },
            orlicz: identity_orlicz(),
            // Plain gaps decay like 1/n, so the tail at the default
            // horizon needs a bar above 1.2e-4 to resolve as a pass.
            config: Some(ConfigFile {
                tolerance: Some(1e-3),
                ..ConfigFile::default()
            }),
            golden: Some(GoldenFile {
                verdicts: verdicts_except("pass", &[("tauberian_weight", "fail")]),
                transforms: vec![
                    TransformCheckFile {
                        n: 1,
                        values: vec![1.0, 2.0],
                    },
                    TransformCheckFile {
                        n: 3,
                        values: vec![0.5, 1.5],
                    },
                ],
            }),
        },
        ScenarioFile {
            name: "oscillating_geometric".into(),
            space: SpaceFile {
                atoms: vec!["g1".into()],
                measure: MeasureFile::Additive { weights: vec![1.0] },
            },
            sequence: SequenceFile {
                family: FamilyFile::Oscillating {
                    high: 1.0,
                    low: 0.0,
                },
                limit: vec![0.5],
                // Geometric halving weights underflow past roughly a
                // thousand terms, so this scenario stays short.
                horizon: 800,
            },
            weights: WeightFile::Geometric { ratio: 0.5 },
            orlicz: identity_orlicz(),
            config: None,
            golden: Some(GoldenFile {
                verdicts: verdicts_except("fail", &[("tauberian_weight", "pass")]),
                transforms: vec![
                    TransformCheckFile {
                        n: 2,
                        values: vec![2.0 / 3.0],
                    },
                    TransformCheckFile {
                        n: 3,
                        values: vec![5.0 / 7.0],
                    },
                ],
            }),
        },
        ScenarioFile {
            name: "atomwise_possibility".into(),
            space: SpaceFile {
                atoms: vec!["g1".into(), "g2".into(), "g3".into()],
                measure: MeasureFile::Possibility {
                    weights: vec![1.0, 0.6, 0.3],
                },
            },
            sequence: SequenceFile {
                family: FamilyFile::AtomwiseMixed {
                    scales: vec![0.5, 0.5, 0.5],
                    alphas: vec![1.0, 1.5, 2.0],
                },
                limit: vec![0.0, 0.0, 0.0],
                horizon: 10_000,
            },
            weights: WeightFile::Constant { value: 1.0 },
            orlicz: OrliczFile {
                phi: "power".into(),
                exponent: Some(2.0),
                points: None,
                p: 2.0,
            },
            config: Some(ConfigFile {
                tolerance: Some(1e-3),
                ..ConfigFile::default()
            }),
            golden: Some(GoldenFile {
                verdicts: verdicts_except("pass", &[("tauberian_weight", "fail")]),
                transforms: vec![TransformCheckFile {
                    n: 1,
                    values: vec![0.5, 0.5, 0.5],
                }],
            }),
        },
        ScenarioFile {
            name: "impulse_cesaro".into(),
            space: SpaceFile {
                atoms: vec!["g1".into()],
                measure: MeasureFile::Additive { weights: vec![1.0] },
            },
            sequence: SequenceFile {
                family: FamilyFile::Impulse { value: 1.0 },
                limit: vec![0.0],
                horizon: 10_000,
            },
            weights: WeightFile::Constant { value: 1.0 },
            orlicz: identity_orlicz(),
            config: Some(ConfigFile {
                tolerance: Some(1e-3),
                ..ConfigFile::default()
            }),
            golden: Some(GoldenFile {
                verdicts: verdicts_except("pass", &[("tauberian_weight", "fail")]),
                transforms: vec![
                    TransformCheckFile {
                        n: 4,
                        values: vec![0.25],
                    },
                    TransformCheckFile {
                        n: 10,
                        values: vec![0.1],
                    },
                ],
            }),
        },
        ScenarioFile {
            name: "block_oscillating_tauberian".into(),
            space: SpaceFile {
                atoms: vec!["g1".into()],
                measure: MeasureFile::Additive { weights: vec![1.0] },
            },
            sequence: SequenceFile {
                family: FamilyFile::BlockOscillating { amplitude: 1.0 },
                limit: vec![0.0],
                horizon: 10_000,
            },
            weights: WeightFile::Harmonic,
            orlicz: identity_orlicz(),
            // Harmonic weights shrink the transformed deviation only
            // logarithmically (near 0.08 at this horizon), so the
            // verdicts run at a matching coarse scale.
            config: Some(ConfigFile {
                tolerance: Some(0.1),
                epsilon_grid: Some(vec![0.5]),
                ..ConfigFile::default()
            }),
            golden: Some(GoldenFile {
                verdicts: verdicts_except("pass", &[]),
                transforms: vec![
                    TransformCheckFile {
                        n: 1,
                        values: vec![1.0],
                    },
                    TransformCheckFile {
                        n: 2,
                        values: vec![0.5],
                    },
                ],
            }),
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scenario_json_round_trips() {
        let spec = counterexample_spec();
        let json = serde_json::to_string_pretty(&spec).unwrap();
        let back: ScenarioFile = serde_json::from_str(&json).unwrap();
        assert_eq!(back, spec);
    }

    #[test]
    fn build_wires_config_overrides() {
        let scenario = counterexample_spec().build().unwrap();
        assert_eq!(scenario.config.horizon, 10_000);
        assert_eq!(scenario.config.tolerance, 1e-4);
        assert_eq!(scenario.sequence.horizon(), 10_000);
        assert_eq!(scenario.weights.horizon(), 10_000);
        assert!(scenario.golden.is_some());
    }

    #[test]
    fn unknown_phi_and_verdict_are_rejected() {
        let mut spec = counterexample_spec();
        spec.orlicz.phi = "cosh".into();
        assert!(matches!(spec.build(), Err(Error::Scenario(_))));

        let mut spec = counterexample_spec();
        if let Some(golden) = &mut spec.golden {
            golden.verdicts.insert("f".into(), "maybe".into());
        }
        assert!(matches!(spec.build(), Err(Error::Scenario(_))));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let json = r#"{
            "name": "x",
            "space": {"atoms": ["g"], "measure": {"kind": "additive", "weights": [1.0]}},
            "sequence": {"family": {"kind": "constant", "value": 0.0}, "limit": [0.0], "horizon": 10},
            "weights": {"kind": "harmonic"},
            "orlicz": {"phi": "identity", "p": 1.0},
            "surprise": true
        }"#;
        assert!(serde_json::from_str::<ScenarioFile>(json).is_err());
    }

    #[test]
    fn weight_kinds_parse_from_json() {
        let harmonic: WeightFile = serde_json::from_str(r#"{"kind": "harmonic"}"#).unwrap();
        assert_eq!(harmonic, WeightFile::Harmonic);
        let geometric: WeightFile =
            serde_json::from_str(r#"{"kind": "geometric", "params": {"ratio": 0.5}}"#).unwrap();
        assert_eq!(geometric, WeightFile::Geometric { ratio: 0.5 });
        let explicit: WeightFile =
            serde_json::from_str(r#"{"kind": "explicit", "params": {"values": [1.0, 2.0]}}"#)
                .unwrap();
        assert_eq!(
            explicit,
            WeightFile::Explicit {
                values: vec![1.0, 2.0]
            }
        );
    }

    #[test]
    fn shipped_specs_build_and_cover_required_cells() {
        let specs = shipped_corpus_specs();
        assert!(specs.len() >= 6);
        let names: Vec<&str> = specs.iter().map(|s| s.name.as_str()).collect();
        assert!(names.contains(&"oscillating_counterexample"));

        // Golden verdicts must witness at least one pass and one fail
        // for every class somewhere in the corpus, and keep the
        // plain-vs-transformed separation on the counterexample.
        for label in super::super::CLASS_LABELS {
            let mut saw_pass = false;
            let mut saw_fail = false;
            for spec in &specs {
                if let Some(golden) = &spec.golden {
                    match golden.verdicts.get(label).map(String::as_str) {
                        Some("pass") => saw_pass = true,
                        Some("fail") => saw_fail = true,
                        _ => {}
                    }
                }
            }
            assert!(saw_pass, "no golden pass for class {label}");
            assert!(saw_fail, "no golden fail for class {label}");
        }

        for spec in &specs {
            let scenario = spec.build().unwrap();
            assert_eq!(scenario.name, spec.name);
        }
    }
}
