//! CSV schemas.
//!
//! Results, one row per (instance, mechanism):
//! `family,budget,categories,k,mu,sigma,seed,mechanism,bundle,sw,ar,rounds,runtime_ms`
//! where unused scenario columns are empty, `bundle` joins project ids with
//! `;`, and `sw`/`ar` are exact (decimal or `p/q`).
//!
//! Summaries, one row per scenario:
//! `family,budget,categories,k,mu,sigma,instances,mean_sw_srx,mean_sw_rx,
//! mean_ar_srx,mean_ar_rx,sw_srx_better,sw_rx_better,sw_tied,ar_srx_better,
//! ar_rx_better,ar_tied,max_rx_sw_lead`.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::metrics::{ComparisonSummary, InstanceResult, Scenario};
use crate::rational;

pub const RESULT_HEADER: [&str; 13] = [
    "family",
    "budget",
    "categories",
    "k",
    "mu",
    "sigma",
    "seed",
    "mechanism",
    "bundle",
    "sw",
    "ar",
    "rounds",
    "runtime_ms",
];

#[derive(Debug, Clone, PartialEq)]
struct ScenarioColumns {
    family: String,
    budget: Option<u64>,
    categories: Option<usize>,
    k: Option<usize>,
    mu: Option<u32>,
    sigma: Option<u32>,
}

impl From<Scenario> for ScenarioColumns {
    fn from(s: Scenario) -> Self {
        match s {
            Scenario::Euclidean { budget, categories } => ScenarioColumns {
                family: "euclidean".into(),
                budget: Some(budget),
                categories: Some(categories),
                k: None,
                mu: None,
                sigma: None,
            },
            Scenario::Global { k, mu, sigma } => ScenarioColumns {
                family: "global".into(),
                budget: None,
                categories: None,
                k: Some(k),
                mu: Some(mu),
                sigma: Some(sigma),
            },
        }
    }
}

impl ScenarioColumns {
    fn scenario(&self) -> Result<Scenario, String> {
        match (self.family.as_str(), self) {
            (
                "euclidean",
                ScenarioColumns {
                    budget: Some(budget),
                    categories: Some(categories),
                    ..
                },
            ) => Ok(Scenario::Euclidean {
                budget: *budget,
                categories: *categories,
            }),
            (
                "global",
                ScenarioColumns {
                    k: Some(k),
                    mu: Some(mu),
                    sigma: Some(sigma),
                    ..
                },
            ) => Ok(Scenario::Global {
                k: *k,
                mu: *mu,
                sigma: *sigma,
            }),
            (family, _) => Err(format!("incomplete scenario columns for family `{family}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct ResultRow {
    family: String,
    budget: Option<u64>,
    categories: Option<usize>,
    k: Option<usize>,
    mu: Option<u32>,
    sigma: Option<u32>,
    seed: u64,
    mechanism: String,
    bundle: String,
    sw: String,
    ar: String,
    rounds: usize,
    runtime_ms: String,
}

pub struct ResultWriter<W: Write> {
    inner: csv::Writer<W>,
    timing: bool,
}

impl<W: Write> ResultWriter<W> {
    /// With `timing` off the runtime column is written as `0`, which makes
    /// reruns byte-identical.
    pub fn new(out: W, timing: bool) -> Result<Self, CliError> {
        let mut inner = csv::WriterBuilder::new()
            .has_headers(false)
            .from_writer(out);
        inner.write_record(RESULT_HEADER).map_err(csv_err)?;
        Ok(ResultWriter { inner, timing })
    }

    pub fn write(&mut self, r: &InstanceResult) -> Result<(), CliError> {
        let c = ScenarioColumns::from(r.scenario);
        let row = ResultRow {
            family: c.family,
            budget: c.budget,
            categories: c.categories,
            k: c.k,
            mu: c.mu,
            sigma: c.sigma,
            seed: r.seed,
            mechanism: r.mechanism.clone(),
            bundle: r.bundle.join(";"),
            sw: rational::format(&r.sw),
            ar: rational::format(&r.ar),
            rounds: r.rounds,
            runtime_ms: if self.timing {
                format!("{:.3}", r.runtime_ms)
            } else {
                "0".into()
            },
        };
        self.inner.serialize(row).map_err(csv_err)
    }

    pub fn finish(mut self) -> Result<W, CliError> {
        self.inner.flush()?;
        self.inner
            .into_inner()
            .map_err(|e| CliError::runtime(e.to_string()))
    }
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::runtime(e.to_string())
}

/// Reads a results CSV, checking the header and every field.
pub fn read_results<R: Read>(input: R) -> Result<Vec<InstanceResult>, CliError> {
    let mut reader = csv::Reader::from_reader(input);
    let header = reader
        .headers()
        .map_err(|e| CliError::validation(format!("results CSV: {e}")))?
        .clone();
    if header.iter().ne(RESULT_HEADER.iter().copied()) {
        return Err(CliError::validation(format!(
            "results CSV header mismatch: expected `{}`, found `{}`",
            RESULT_HEADER.join(","),
            header.iter().collect::<Vec<_>>().join(",")
        )));
    }
    let mut out = Vec::new();
    for (line, row) in reader.deserialize::<ResultRow>().enumerate() {
        let at = |msg: String| CliError::validation(format!("results CSV row {}: {msg}", line + 2));
        let row = row.map_err(|e| at(e.to_string()))?;
        let scenario = ScenarioColumns {
            family: row.family.clone(),
            budget: row.budget,
            categories: row.categories,
            k: row.k,
            mu: row.mu,
            sigma: row.sigma,
        }
        .scenario()
        .map_err(at)?;
        let parse = |s: &str| rational::parse(s).map_err(|e| at(e.to_string()));
        out.push(InstanceResult {
            scenario,
            seed: row.seed,
            mechanism: row.mechanism,
            bundle: if row.bundle.is_empty() {
                Vec::new()
            } else {
                row.bundle.split(';').map(str::to_string).collect()
            },
            sw: parse(&row.sw)?,
            ar: parse(&row.ar)?,
            rounds: row.rounds,
            runtime_ms: row
                .runtime_ms
                .parse()
                .map_err(|_| at("bad runtime_ms".into()))?,
        });
    }
    Ok(out)
}

#[derive(Serialize)]
struct SummaryRow {
    family: String,
    budget: Option<u64>,
    categories: Option<usize>,
    k: Option<usize>,
    mu: Option<u32>,
    sigma: Option<u32>,
    instances: usize,
    mean_sw_srx: f64,
    mean_sw_rx: f64,
    mean_ar_srx: f64,
    mean_ar_rx: f64,
    sw_srx_better: f64,
    sw_rx_better: f64,
    sw_tied: f64,
    ar_srx_better: f64,
    ar_rx_better: f64,
    ar_tied: f64,
    max_rx_sw_lead: f64,
}

pub fn write_summary<W: Write>(out: W, summary: &ComparisonSummary) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    for s in &summary.scenarios {
        let c = ScenarioColumns::from(s.scenario);
        w.serialize(SummaryRow {
            family: c.family,
            budget: c.budget,
            categories: c.categories,
            k: c.k,
            mu: c.mu,
            sigma: c.sigma,
            instances: s.instances,
            mean_sw_srx: s.mean_sw_srx,
            mean_sw_rx: s.mean_sw_rx,
            mean_ar_srx: s.mean_ar_srx,
            mean_ar_rx: s.mean_ar_rx,
            sw_srx_better: s.sw.srx_better,
            sw_rx_better: s.sw.rx_better,
            sw_tied: s.sw.tied,
            ar_srx_better: s.ar.srx_better,
            ar_rx_better: s.ar.rx_better,
            ar_tied: s.ar.tied,
            max_rx_sw_lead: s.max_rx_sw_lead,
        })
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(())
}
