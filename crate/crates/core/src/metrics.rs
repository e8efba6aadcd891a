//! Welfare and fairness metrics, and paired comparison of two mechanisms
//! across batches of instances.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::Bundle;
use crate::profile::PreferenceProfile;
use crate::rational::{self, int, Rational};

/// `SW = sum of u_i(B)` under the profile's declared (substitute-aware)
/// curves, whatever mechanism produced `B`.
pub fn social_welfare(profile: &PreferenceProfile, bundle: &Bundle) -> Result<Rational> {
    (0..profile.voter_count()).try_fold(Rational::zero(), |acc, i| {
        Ok(acc + profile.voter_utility(i, bundle)?)
    })
}

/// Percentage of voters with no funded desired project.
pub fn anger_ratio(profile: &PreferenceProfile, bundle: &Bundle) -> Result<Rational> {
    let n = profile.voter_count();
    if n == 0 {
        return Ok(Rational::zero());
    }
    let mut angry = 0usize;
    for i in 0..n {
        if profile.funded_desired(i, bundle)? == 0 {
            angry += 1;
        }
    }
    Ok(int(100) * Rational::new(angry.into(), n.into()))
}

/// One cell of an experiment grid.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum Scenario {
    Euclidean { budget: u64, categories: usize },
    Global { k: usize, mu: u32, sigma: u32 },
}

impl fmt::Display for Scenario {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scenario::Euclidean { budget, categories } => {
                write!(f, "euclidean budget={budget} categories={categories}")
            }
            Scenario::Global { k, mu, sigma } => write!(f, "global k={k} mu={mu} sigma={sigma}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct InstanceResult {
    pub scenario: Scenario,
    pub seed: u64,
    /// `"rx"` or `"srx"`.
    pub mechanism: String,
    pub bundle: Vec<String>,
    pub sw: Rational,
    /// Percent, in `[0, 100]`.
    pub ar: Rational,
    pub rounds: usize,
    pub runtime_ms: f64,
}

/// Share of paired instances (percent) where each side is strictly better.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WinRates {
    pub srx_better: f64,
    pub rx_better: f64,
    pub tied: f64,
    #[serde(skip)]
    pub exact: [Rational; 3],
}

impl WinRates {
    fn from_counts(srx: usize, rx: usize, tied: usize) -> Self {
        let total = srx + rx + tied;
        let pct = |c: usize| int(100) * Rational::new(c.into(), total.max(1).into());
        let exact = [pct(srx), pct(rx), pct(tied)];
        WinRates {
            srx_better: rational::to_f64(&exact[0]),
            rx_better: rational::to_f64(&exact[1]),
            tied: rational::to_f64(&exact[2]),
            exact,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScenarioSummary {
    pub scenario: Scenario,
    pub instances: usize,
    pub mean_sw_srx: f64,
    pub mean_sw_rx: f64,
    pub mean_ar_srx: f64,
    pub mean_ar_rx: f64,
    /// Higher welfare wins.
    pub sw: WinRates,
    /// Lower anger ratio wins.
    pub ar: WinRates,
    /// Largest `(SW_rx - SW_srx) / SW_rx` among instances Rule X wins.
    pub max_rx_sw_lead: f64,
    #[serde(skip)]
    pub exact_mean_sw: (Rational, Rational),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ComparisonSummary {
    pub scenarios: Vec<ScenarioSummary>,
}

/// Pairs results by `(scenario, seed)` and tabulates SRX against Rule X.
pub fn summarize(results: &[InstanceResult]) -> Result<ComparisonSummary> {
    type Pair<'a> = (Option<&'a InstanceResult>, Option<&'a InstanceResult>);
    let mut cells: BTreeMap<Scenario, BTreeMap<u64, Pair>> = BTreeMap::new();
    for r in results {
        let slot = cells
            .entry(r.scenario)
            .or_default()
            .entry(r.seed)
            .or_default();
        let side = match r.mechanism.as_str() {
            "srx" => &mut slot.0,
            "rx" => &mut slot.1,
            other => return Err(Error::invalid(format!("unknown mechanism `{other}`"))),
        };
        if side.replace(r).is_some() {
            return Err(Error::invalid(format!(
                "duplicate {} result for {} seed {}",
                r.mechanism, r.scenario, r.seed
            )));
        }
    }
    let mut scenarios = Vec::with_capacity(cells.len());
    for (scenario, seeds) in cells {
        let mut sw_counts = [0usize; 3];
        let mut ar_counts = [0usize; 3];
        let mut sums = [
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
            Rational::zero(),
        ];
        let mut max_lead = Rational::zero();
        for (seed, pair) in &seeds {
            let (Some(srx), Some(rx)) = pair else {
                return Err(Error::invalid(format!(
                    "unpaired result for {scenario} seed {seed}"
                )));
            };
            sw_counts[outcome(&srx.sw, &rx.sw, true)] += 1;
            ar_counts[outcome(&srx.ar, &rx.ar, false)] += 1;
            if rx.sw > srx.sw {
                let lead = (&rx.sw - &srx.sw) / &rx.sw;
                max_lead = max_lead.max(lead);
            }
            sums[0] += &srx.sw;
            sums[1] += &rx.sw;
            sums[2] += &srx.ar;
            sums[3] += &rx.ar;
        }
        let n = Rational::from_integer(seeds.len().into());
        let mean = |s: &Rational| s / &n;
        scenarios.push(ScenarioSummary {
            scenario,
            instances: seeds.len(),
            mean_sw_srx: rational::to_f64(&mean(&sums[0])),
            mean_sw_rx: rational::to_f64(&mean(&sums[1])),
            mean_ar_srx: rational::to_f64(&mean(&sums[2])),
            mean_ar_rx: rational::to_f64(&mean(&sums[3])),
            sw: WinRates::from_counts(sw_counts[0], sw_counts[1], sw_counts[2]),
            ar: WinRates::from_counts(ar_counts[0], ar_counts[1], ar_counts[2]),
            max_rx_sw_lead: rational::to_f64(&max_lead),
            exact_mean_sw: (mean(&sums[0]), mean(&sums[1])),
        });
    }
    Ok(ComparisonSummary { scenarios })
}

/// 0: SRX better, 1: Rule X better, 2: tie.
fn outcome(srx: &Rational, rx: &Rational, higher_is_better: bool) -> usize {
    use std::cmp::Ordering::*;
    match (srx.cmp(rx), higher_is_better) {
        (Equal, _) => 2,
        (Greater, true) | (Less, false) => 0,
        _ => 1,
    }
}
