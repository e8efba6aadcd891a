//! Experiment grids.
//!
//! A grid spec is `full` (every scenario of the family) or `;`-separated
//! `key=v1,v2,...` axes, for example `budget=20;categories=5,25` or
//! `k=9;mu=300;sigma=10,30`. Omitted axes take their full range.

use std::collections::BTreeMap;
use std::str::FromStr;

use clap::ValueEnum;

use super::CliError;
use crate::metrics::Scenario;
use crate::simgen::{EuclideanParams, GlobalSubstitutesParams};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Euclidean,
    Global,
}

pub const EUCLIDEAN_BUDGETS: [u64; 3] = [10, 20, 30];
pub const EUCLIDEAN_CATEGORIES: [usize; 4] = [5, 15, 25, 40];
pub const GLOBAL_K: [usize; 4] = [3, 5, 7, 9];
pub const GLOBAL_MU: [u32; 8] = [100, 150, 200, 250, 300, 350, 400, 450];
pub const GLOBAL_SIGMA: [u32; 3] = [10, 20, 30];

/// Parses `spec` into the scenario list, in axis-major order.
pub fn parse_grid(family: Family, spec: &str) -> Result<Vec<Scenario>, CliError> {
    let mut axes: BTreeMap<String, Vec<u64>> = BTreeMap::new();
    let spec = spec.trim();
    if spec != "full" && !spec.is_empty() {
        for part in spec.split(';').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, values) = part
                .split_once('=')
                .ok_or_else(|| CliError::validation(format!("grid axis `{part}` lacks `=`")))?;
            let values = values
                .split(',')
                .map(|v| u64::from_str(v.trim()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| {
                    CliError::validation(format!("grid axis `{part}` has a non-integer value"))
                })?;
            if values.is_empty() {
                return Err(CliError::validation(format!("grid axis `{key}` is empty")));
            }
            if axes.insert(key.trim().to_string(), values).is_some() {
                return Err(CliError::validation(format!(
                    "grid axis `{key}` given twice"
                )));
            }
        }
    }
    let mut take = |key: &str, full: Vec<u64>| axes.remove(key).unwrap_or(full);
    let scenarios: Vec<Scenario> = match family {
        Family::Euclidean => {
            let budgets = take("budget", EUCLIDEAN_BUDGETS.to_vec());
            let cats = take(
                "categories",
                EUCLIDEAN_CATEGORIES.iter().map(|&c| c as u64).collect(),
            );
            budgets
                .iter()
                .flat_map(|&budget| {
                    cats.iter().map(move |&c| Scenario::Euclidean {
                        budget,
                        categories: c as usize,
                    })
                })
                .collect()
        }
        Family::Global => {
            let ks = take("k", GLOBAL_K.iter().map(|&k| k as u64).collect());
            let mus = take("mu", GLOBAL_MU.iter().map(|&m| m as u64).collect());
            let sigmas = take("sigma", GLOBAL_SIGMA.iter().map(|&s| s as u64).collect());
            let mut out = Vec::new();
            for &k in &ks {
                for &mu in &mus {
                    for &sigma in &sigmas {
                        out.push(Scenario::Global {
                            k: k as usize,
                            mu: u32::try_from(mu)
                                .map_err(|_| CliError::validation("mu out of range"))?,
                            sigma: u32::try_from(sigma)
                                .map_err(|_| CliError::validation("sigma out of range"))?,
                        });
                    }
                }
            }
            out
        }
    };
    if let Some(key) = axes.keys().next() {
        return Err(CliError::validation(format!(
            "unknown grid axis `{key}` for this family"
        )));
    }
    for s in &scenarios {
        validate_scenario(s)?;
    }
    Ok(scenarios)
}

pub fn euclidean_params(budget: u64, categories: usize) -> EuclideanParams {
    EuclideanParams {
        budget,
        n_categories: categories,
        ..EuclideanParams::default()
    }
}

pub fn global_params(k: usize, mu: u32, sigma: u32) -> GlobalSubstitutesParams {
    GlobalSubstitutesParams {
        k,
        cost_mean: mu as f64,
        cost_std: sigma as f64,
        ..GlobalSubstitutesParams::default()
    }
}

fn validate_scenario(s: &Scenario) -> Result<(), CliError> {
    let checked = match *s {
        Scenario::Euclidean { budget, categories } => {
            euclidean_params(budget, categories).validate()
        }
        Scenario::Global { k, mu, sigma } => global_params(k, mu, sigma).validate(),
    };
    checked.map_err(|e| CliError::validation(format!("{s}: {e}")))
}
