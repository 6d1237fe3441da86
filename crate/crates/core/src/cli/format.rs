//! Model and result files.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::SolveResult;
use crate::error::{Error, Result};
use crate::model::{Factor, FactorGraph, FactorKind, Mode};

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum ModeName {
    Supervised,
    Unsupervised,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum LabelSpec {
    Uniform(usize),
    PerVariable(Vec<usize>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
enum FactorFile {
    Table { vars: Vec<usize>, values: Vec<f64> },
    Potts { vars: Vec<usize>, equal: f64, unequal: f64 },
    Hopotts { vars: Vec<usize>, equal: f64, unequal: f64 },
    Lpi { vars: Vec<usize>, weights: Vec<f64> },
    Junction { vars: Vec<usize>, lambda: f64 },
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ModelFile {
    mode: ModeName,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    variables: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    labels: Option<LabelSpec>,
    #[serde(default, skip_serializing_if = "is_zero")]
    constant: f64,
    factors: Vec<FactorFile>,
}

/// Parses a model from its JSON text.
pub fn model_from_json(text: &str) -> Result<FactorGraph> {
    let file: ModelFile = serde_json::from_str(text)?;
    let per_var = match &file.labels {
        Some(LabelSpec::PerVariable(v)) => Some(v.len()),
        _ => None,
    };
    let n = match (file.variables, per_var) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::Input(format!("`variables` is {a} but `labels` lists {b} counts")))
        }
        (Some(a), _) | (None, Some(a)) => a,
        (None, None) => return Err(Error::Input("model needs `variables` or a per-variable `labels` array".into())),
    };
    let mut fg = match file.mode {
        ModeName::Supervised => {
            let l = match &file.labels {
                Some(LabelSpec::Uniform(l)) => *l,
                Some(LabelSpec::PerVariable(v)) => {
                    let l = v.first().copied().unwrap_or(2);
                    if v.iter().any(|&k| k != l) {
                        return Err(Error::Model("supervised models need one label count for all variables".into()));
                    }
                    l
                }
                None => return Err(Error::Input("supervised model needs `labels`".into())),
            };
            FactorGraph::supervised(n, l)?
        }
        ModeName::Unsupervised => {
            let ok = match &file.labels {
                None => true,
                Some(LabelSpec::Uniform(l)) => *l == n,
                Some(LabelSpec::PerVariable(v)) => v.iter().all(|&k| k == n),
            };
            if !ok {
                return Err(Error::Model("unsupervised variables range over as many labels as there are variables".into()));
            }
            FactorGraph::unsupervised(n)
        }
    };
    fg.set_constant(file.constant);
    for f in file.factors {
        let factor = match f {
            FactorFile::Table { vars, values } => Factor::new(vars, FactorKind::Table(values))?,
            FactorFile::Potts { vars, equal, unequal } => Factor::new(vars, FactorKind::Potts { equal, unequal })?,
            FactorFile::Hopotts { vars, equal, unequal } => Factor::new(vars, FactorKind::HoPotts { equal, unequal })?,
            FactorFile::Lpi { vars, weights } => Factor::new(vars, FactorKind::Lpi(weights))?,
            FactorFile::Junction { vars, lambda } => Factor::new(vars, FactorKind::Junction { lambda })?,
        };
        fg.add_factor(factor)?;
    }
    Ok(fg)
}

/// Canonical JSON text of a model; loading it back and saving again gives the same bytes.
pub fn model_to_json(fg: &FactorGraph) -> Result<String> {
    let factors = fg
        .factors()
        .iter()
        .map(|f| {
            let vars = f.vars().to_vec();
            match f.kind().clone() {
                FactorKind::Table(values) => FactorFile::Table { vars, values },
                FactorKind::Potts { equal, unequal } => FactorFile::Potts { vars, equal, unequal },
                FactorKind::HoPotts { equal, unequal } => FactorFile::Hopotts { vars, equal, unequal },
                FactorKind::Lpi(weights) => FactorFile::Lpi { vars, weights },
                FactorKind::Junction { lambda } => FactorFile::Junction { vars, lambda },
            }
        })
        .collect();
    let file = ModelFile {
        mode: match fg.mode() {
            Mode::Supervised => ModeName::Supervised,
            Mode::Unsupervised => ModeName::Unsupervised,
        },
        variables: Some(fg.num_variables()),
        labels: (fg.mode() == Mode::Supervised).then(|| LabelSpec::Uniform(fg.num_labels())),
        constant: fg.constant(),
        factors,
    };
    let mut s = serde_json::to_string_pretty(&file)?;
    s.push('\n');
    Ok(s)
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct StageRecord {
    pub token: String,
    pub rows_added: BTreeMap<String, usize>,
    pub lp_solves: usize,
}

/// On-disk solve result. `value` is null when no labeling was found.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct ResultRecord {
    pub value: Option<f64>,
    pub bound: Option<f64>,
    pub status: String,
    pub runtime_ms: f64,
    pub labeling: Vec<usize>,
    pub stages: Vec<StageRecord>,
    pub constant_offset: f64,
}

impl ResultRecord {
    pub fn from_result(r: &SolveResult) -> Self {
        ResultRecord {
            value: r.value.is_finite().then_some(r.value),
            bound: r.bound.is_finite().then_some(r.bound),
            status: r.status.name().to_string(),
            runtime_ms: r.runtime.as_secs_f64() * 1e3,
            labeling: r.labeling.0.clone(),
            stages: r
                .stage_stats
                .iter()
                .map(|s| StageRecord {
                    token: s.token.clone(),
                    rows_added: s.rows_added.iter().map(|(c, &k)| (c.name().to_string(), k)).collect(),
                    lp_solves: s.lp_solves,
                })
                .collect(),
            constant_offset: r.constant_offset,
        }
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"{
  "mode": "supervised",
  "variables": 3,
  "labels": 2,
  "factors": [
    {
      "kind": "table",
      "vars": [
        0
      ],
      "values": [
        0.25,
        1.0
      ]
    },
    {
      "kind": "potts",
      "vars": [
        0,
        1
      ],
      "equal": 0.0,
      "unequal": -0.5
    },
    {
      "kind": "hopotts",
      "vars": [
        0,
        1,
        2
      ],
      "equal": 0.0,
      "unequal": 2.0
    }
  ]
}
"#;

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let fg = model_from_json(SAMPLE).unwrap();
        assert_eq!(fg.factors().len(), 3);
        assert_eq!(model_to_json(&fg).unwrap(), SAMPLE);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let bad = SAMPLE.replace("\"mode\"", "\"colour\": 1, \"mode\"");
        assert!(model_from_json(&bad).is_err());
        let bad = SAMPLE.replace("\"equal\": 0.0,\n      \"unequal\": -0.5", "\"equal\": 0.0, \"unequal\": -0.5, \"beta\": 1");
        assert!(model_from_json(&bad).is_err());
    }

    #[test]
    fn label_array_and_unsupervised_forms() {
        let fg = model_from_json(r#"{"mode":"supervised","labels":[3,3],"factors":[]}"#).unwrap();
        assert_eq!((fg.num_variables(), fg.num_labels()), (2, 3));
        assert!(model_from_json(r#"{"mode":"supervised","labels":[3,2],"factors":[]}"#).is_err());
        let fg = model_from_json(
            r#"{"mode":"unsupervised","variables":3,"constant":0.5,"factors":[{"kind":"potts","vars":[0,2],"equal":0,"unequal":1}]}"#,
        )
        .unwrap();
        assert_eq!(fg.constant(), 0.5);
        assert!(model_to_json(&fg).unwrap().contains("\"constant\": 0.5"));
    }
}
