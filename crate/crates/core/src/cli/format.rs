//! JSON instance file.
//!
//! ```json
//! {
//!   "budget": "2",
//!   "projects": [{"id": "a", "cost": "1.1"}, {"id": "d", "cost": "1/3"}],
//!   "voters": [
//!     {"partitions": [{"projects": ["a"], "curve": {"kind": "minimal_substitutes", "I": "1"}}]}
//!   ],
//!   "metadata": {"seed": 7, "generator": "euclidean", "rng": "chacha8", "params": {}}
//! }
//! ```
//!
//! Amounts are decimal strings or `p/q` fractions and convert exactly.
//! `curve.kind` is one of `unit_demand`, `minimal_substitutes`, `pav`,
//! `custom`; custom curves carry a `table`, and `minimal_substitutes` may pin
//! its denominator with `m` (default: the file's project count). Unknown
//! fields are rejected.

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::curve::MarginalCurve;
use crate::model::PBInstance;
use crate::profile::{Partition, PreferenceProfile};
use crate::rational::{self, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub budget: String,
    pub projects: Vec<ProjectEntry>,
    pub voters: Vec<VoterEntry>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectEntry {
    pub id: String,
    pub cost: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct VoterEntry {
    pub partitions: Vec<PartitionEntry>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PartitionEntry {
    pub projects: Vec<String>,
    pub curve: CurveEntry,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CurveKind {
    UnitDemand,
    MinimalSubstitutes,
    Pav,
    Custom,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CurveEntry {
    pub kind: CurveKind,
    #[serde(rename = "I", default, skip_serializing_if = "Option::is_none")]
    pub intensity: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub table: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Metadata {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generator: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rng: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<serde_json::Value>,
}

/// A parsed and validated instance file.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedInstance {
    pub instance: PBInstance,
    pub profile: PreferenceProfile,
    pub metadata: Option<Metadata>,
}

/// Parses JSON text. Syntax and schema errors report line, column and the
/// JSON path of the offending field.
pub fn parse_instance(text: &str) -> Result<LoadedInstance, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let file: InstanceFile = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let inner = e.inner();
        CliError::validation(format!(
            "line {} column {}: field `{}`: {}",
            inner.line(),
            inner.column(),
            e.path(),
            inner
        ))
    })?;
    file.into_model()
}

fn amount(text: &str, field: &str) -> Result<Rational, CliError> {
    rational::parse(text).map_err(|e| CliError::validation(format!("{field}: {e}")))
}

impl InstanceFile {
    pub fn into_model(self) -> Result<LoadedInstance, CliError> {
        if self.voters.is_empty() {
            return Err(CliError::validation(
                "voters: at least one voter is required",
            ));
        }
        let budget = amount(&self.budget, "budget")?;
        let projects = self
            .projects
            .iter()
            .enumerate()
            .map(|(k, p)| {
                Ok((
                    p.id.clone(),
                    amount(&p.cost, &format!("projects[{k}].cost"))?,
                ))
            })
            .collect::<Result<Vec<_>, CliError>>()?;
        let instance = PBInstance::new(projects, budget, self.voters.len())
            .map_err(|e| CliError::validation(format!("instance: {e}")))?;
        let m = instance.project_count();
        let mut voters = Vec::with_capacity(self.voters.len());
        for (i, v) in self.voters.iter().enumerate() {
            let mut partitions = Vec::with_capacity(v.partitions.len());
            for (k, g) in v.partitions.iter().enumerate() {
                let at = format!("voters[{i}].partitions[{k}]");
                let projects = g
                    .projects
                    .iter()
                    .map(|id| instance.project(id))
                    .collect::<crate::Result<Vec<_>>>()
                    .map_err(|e| CliError::validation(format!("{at}.projects: {e}")))?;
                let (curve, intensity) = curve_from_entry(&g.curve, m, &at)?;
                partitions.push(Partition::new(projects, curve).with_intensity(intensity));
            }
            voters.push(partitions);
        }
        let profile = PreferenceProfile::new(&instance, voters)
            .map_err(|e| CliError::validation(format!("voters: {e}")))?;
        Ok(LoadedInstance {
            instance,
            profile,
            metadata: self.metadata,
        })
    }

    pub fn from_model(
        instance: &PBInstance,
        profile: &PreferenceProfile,
        metadata: Option<Metadata>,
    ) -> Self {
        let ids = instance.ids();
        InstanceFile {
            budget: rational::format(instance.budget()),
            projects: ids
                .iter()
                .zip(instance.costs())
                .map(|(id, c)| ProjectEntry {
                    id: id.clone(),
                    cost: rational::format(c),
                })
                .collect(),
            voters: profile
                .ballots()
                .iter()
                .map(|b| VoterEntry {
                    partitions: b
                        .partitions()
                        .iter()
                        .map(|g| PartitionEntry {
                            projects: g.projects.iter().map(|&p| ids[p].clone()).collect(),
                            curve: curve_entry(&g.curve, &g.intensity, instance.project_count()),
                        })
                        .collect(),
                })
                .collect(),
            metadata,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("instance files always serialize")
    }
}

fn curve_from_entry(
    entry: &CurveEntry,
    project_count: usize,
    at: &str,
) -> Result<(MarginalCurve, Rational), CliError> {
    let invalid = |msg: String| CliError::validation(format!("{at}.curve: {msg}"));
    if entry.kind != CurveKind::Custom && entry.table.is_some() {
        return Err(invalid("`table` is only allowed for custom curves".into()));
    }
    if entry.kind != CurveKind::MinimalSubstitutes && entry.m.is_some() {
        return Err(invalid(
            "`m` is only allowed for minimal_substitutes".into(),
        ));
    }
    let intensity = entry
        .intensity
        .as_deref()
        .map(|s| amount(s, &format!("{at}.curve.I")))
        .transpose()?;
    let curve = match entry.kind {
        CurveKind::UnitDemand => MarginalCurve::UnitDemand,
        CurveKind::Pav => MarginalCurve::Pav,
        CurveKind::MinimalSubstitutes => {
            MarginalCurve::minimal_substitutes(entry.m.unwrap_or(project_count))
                .map_err(|e| invalid(e.to_string()))?
        }
        CurveKind::Custom => {
            let table = entry
                .table
                .as_ref()
                .ok_or_else(|| invalid("custom curves need a `table`".into()))?
                .iter()
                .enumerate()
                .map(|(j, v)| amount(v, &format!("{at}.curve.table[{j}]")))
                .collect::<Result<Vec<_>, _>>()?;
            MarginalCurve::custom(table).map_err(|e| invalid(e.to_string()))?
        }
    };
    let intensity = match (&curve, intensity) {
        (_, Some(i)) => i,
        (MarginalCurve::Custom(t), None) => t[0].clone(),
        (_, None) => rational::int(1),
    };
    Ok((curve, intensity))
}

fn curve_entry(curve: &MarginalCurve, intensity: &Rational, project_count: usize) -> CurveEntry {
    let (kind, table, m) = match curve {
        MarginalCurve::UnitDemand => (CurveKind::UnitDemand, None, None),
        MarginalCurve::Pav => (CurveKind::Pav, None, None),
        MarginalCurve::MinimalSubstitutes { project_count: m } => (
            CurveKind::MinimalSubstitutes,
            None,
            (*m != project_count).then_some(*m),
        ),
        MarginalCurve::Custom(t) => (
            CurveKind::Custom,
            Some(t.iter().map(rational::format).collect()),
            None,
        ),
    };
    CurveEntry {
        kind,
        intensity: Some(rational::format(intensity)),
        table,
        m,
    }
}
