//! Drivers behind the CLI subcommands. Each writes human-readable output to
//! the given writer and returns a [`CliError`] carrying the exit code.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use super::csvio::{self, ResultWriter};
use super::format::{parse_instance, InstanceFile, LoadedInstance, Metadata};
use super::grid::{euclidean_params, global_params, parse_grid, Family};
use super::CliError;
use crate::fairness::{self, Axiom, Cohesion, FairnessReport, SearchLimits};
use crate::mechanisms::{self, Detail, MechanismTrace, Rule, Termination, UtilityMode};
use crate::metrics::{self, anger_ratio, social_welfare, InstanceResult, Scenario};
use crate::model::PBInstance;
use crate::profile::PreferenceProfile;
use crate::rational::{self, Rational};
use crate::simgen::{self, gen_euclidean, gen_global_substitutes};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub rule: Rule,
    pub checks: Vec<Axiom>,
    pub definition: Cohesion,
    pub limits: SearchLimits,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            rule: Rule::SubstituteRuleX,
            checks: Vec::new(),
            definition: Cohesion::WithSubstitutes,
            limits: SearchLimits::default(),
        }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        if self.limits.max_projects == 0 || self.limits.max_voters == 0 {
            return Err(CliError::validation("size caps must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub trace: MechanismTrace,
    pub sw: Rational,
    pub ar: Rational,
    pub checks: Vec<FairnessReport>,
}

pub fn run_instance(loaded: &LoadedInstance, config: &RunConfig) -> Result<RunReport, CliError> {
    config.validate()?;
    let (instance, profile) = (&loaded.instance, &loaded.profile);
    let trace = mechanisms::run(instance, profile, config.rule)?;
    let sw = social_welfare(profile, &trace.bundle)?;
    let ar = anger_ratio(profile, &trace.bundle)?;
    let checks = config
        .checks
        .iter()
        .map(|&axiom| {
            fairness::check(
                axiom,
                instance,
                profile,
                &trace.bundle,
                config.definition,
                &config.limits,
            )
        })
        .collect::<crate::Result<Vec<_>>>()?;
    Ok(RunReport {
        trace,
        sw,
        ar,
        checks,
    })
}

fn fmt_ids(instance: &PBInstance, projects: impl IntoIterator<Item = usize>) -> String {
    projects
        .into_iter()
        .map(|p| instance.id(p))
        .collect::<Vec<_>>()
        .join(",")
}

fn fmt_amounts(values: &[Rational]) -> String {
    values
        .iter()
        .map(rational::format)
        .collect::<Vec<_>>()
        .join(" ")
}

/// Plain-text report of a run.
pub fn render_run<W: Write>(
    out: &mut W,
    loaded: &LoadedInstance,
    report: &RunReport,
) -> std::io::Result<()> {
    let instance = &loaded.instance;
    let trace = &report.trace;
    writeln!(out, "mechanism: {}", trace.rule.name())?;
    for (t, round) in trace.rounds.iter().enumerate() {
        write!(
            out,
            "round {}: fund {} at q={}",
            t + 1,
            instance.id(round.project),
            rational::format(&round.q)
        )?;
        if !round.tied.is_empty() {
            write!(
                out,
                " (tied: {})",
                fmt_ids(instance, round.tied.iter().copied())
            )?;
        }
        writeln!(out)?;
        writeln!(out, "  payments: {}", fmt_amounts(&round.payments))?;
        writeln!(out, "  budgets:  {}", fmt_amounts(&round.budgets_after))?;
    }
    let termination = match trace.termination {
        Termination::NoAffordableProject => "no affordable project left",
        Termination::NoCandidates => "no candidate project left",
    };
    writeln!(out, "stopped: {termination}")?;
    writeln!(out, "bundle: {}", fmt_ids(instance, trace.bundle.iter()))?;
    let cost = instance
        .bundle_cost(&trace.bundle)
        .map_err(std::io::Error::other)?;
    writeln!(
        out,
        "cost: {} of {}",
        rational::format(&cost),
        rational::format(instance.budget())
    )?;
    writeln!(out, "sw: {}", rational::format(&report.sw))?;
    writeln!(out, "ar: {}", rational::format(&report.ar))?;
    for r in &report.checks {
        let axiom = match r.axiom {
            Axiom::Ejr => "ejr",
            Axiom::StrongBpjr => "bpjr",
        };
        let def = match r.definition {
            Cohesion::Original => "original",
            Cohesion::WithSubstitutes => "substitutes",
        };
        match &r.witness {
            None => writeln!(out, "{axiom} ({def}): satisfied")?,
            Some(w) => writeln!(
                out,
                "{axiom} ({def}): violated T={{{}}} S={{{}}} attained {} < {}",
                fmt_ids(instance, w.projects.iter().copied()),
                w.voters
                    .iter()
                    .map(|i| (i + 1).to_string())
                    .collect::<Vec<_>>()
                    .join(","),
                w.attained,
                w.required
            )?,
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct RoundJson<'a> {
    project: &'a str,
    q: String,
    tied: Vec<&'a str>,
    utilities: Vec<String>,
    payments: Vec<String>,
    budgets_after: Vec<String>,
}

#[derive(Serialize)]
struct WitnessJson<'a> {
    projects: Vec<&'a str>,
    voters: Vec<usize>,
    attained: usize,
    required: usize,
}

#[derive(Serialize)]
struct CheckJson<'a> {
    axiom: Axiom,
    definition: Cohesion,
    verdict: fairness::Verdict,
    witness: Option<WitnessJson<'a>>,
}

#[derive(Serialize)]
struct RunJson<'a> {
    mechanism: Rule,
    bundle: Vec<&'a str>,
    termination: Termination,
    sw: String,
    ar: String,
    rounds: Vec<RoundJson<'a>>,
    checks: Vec<CheckJson<'a>>,
}

/// JSON form of a run; voters are 1-based in witnesses, as in the text form.
pub fn run_json(loaded: &LoadedInstance, report: &RunReport) -> String {
    let e = &loaded.instance;
    let strs = |v: &[Rational]| v.iter().map(rational::format).collect();
    let doc = RunJson {
        mechanism: report.trace.rule,
        bundle: report.trace.bundle.iter().map(|p| e.id(p)).collect(),
        termination: report.trace.termination,
        sw: rational::format(&report.sw),
        ar: rational::format(&report.ar),
        rounds: report
            .trace
            .rounds
            .iter()
            .map(|r| RoundJson {
                project: e.id(r.project),
                q: rational::format(&r.q),
                tied: r.tied.iter().map(|&p| e.id(p)).collect(),
                utilities: strs(&r.utilities),
                payments: strs(&r.payments),
                budgets_after: strs(&r.budgets_after),
            })
            .collect(),
        checks: report
            .checks
            .iter()
            .map(|c| CheckJson {
                axiom: c.axiom,
                definition: c.definition,
                verdict: c.verdict,
                witness: c.witness.as_ref().map(|w| WitnessJson {
                    projects: w.projects.iter().map(|&p| e.id(p)).collect(),
                    voters: w.voters.iter().map(|i| i + 1).collect(),
                    attained: w.attained,
                    required: w.required,
                }),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&doc).expect("run reports always serialize")
}

pub fn load_instance(path: &Path) -> Result<LoadedInstance, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::validation(format!("{}: {e}", path.display())))?;
    parse_instance(&text).map_err(|e| CliError {
        code: e.code,
        message: format!("{}: {}", path.display(), e.message),
    })
}

pub fn cmd_run<W: Write>(
    instance_path: &Path,
    config: &RunConfig,
    json_out: Option<&Path>,
    out: &mut W,
) -> Result<RunReport, CliError> {
    let loaded = load_instance(instance_path)?;
    let report = run_instance(&loaded, config)?;
    render_run(out, &loaded, &report)?;
    if let Some(path) = json_out {
        std::fs::write(path, run_json(&loaded, &report))
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
    }
    Ok(report)
}

/// Generates the instance of `scenario` with `seed`.
pub fn generate(
    scenario: Scenario,
    seed: u64,
) -> crate::Result<(PBInstance, PreferenceProfile, Metadata)> {
    let (instance, profile, generator, params) = match scenario {
        Scenario::Euclidean { budget, categories } => {
            let params = euclidean_params(budget, categories);
            let (e, p, _) = gen_euclidean(&params, seed)?;
            (e, p, "euclidean", serde_json::to_value(&params))
        }
        Scenario::Global { k, mu, sigma } => {
            let params = global_params(k, mu, sigma);
            let (e, p, _) = gen_global_substitutes(&params, seed)?;
            (e, p, "global", serde_json::to_value(&params))
        }
    };
    let metadata = Metadata {
        seed: Some(seed),
        generator: Some(generator.into()),
        rng: Some(simgen::RNG_ALGORITHM.into()),
        params: params.ok(),
    };
    Ok((instance, profile, metadata))
}

fn score(
    scenario: Scenario,
    seed: u64,
    instance: &PBInstance,
    profile: &PreferenceProfile,
    rule: Rule,
) -> crate::Result<InstanceResult> {
    let start = Instant::now();
    let trace = mechanisms::run_with(instance, profile, rule, Detail::Selections)?;
    let runtime_ms = start.elapsed().as_secs_f64() * 1e3;
    Ok(InstanceResult {
        scenario,
        seed,
        mechanism: rule.name().into(),
        bundle: trace
            .bundle
            .iter()
            .map(|p| instance.id(p).to_string())
            .collect(),
        sw: social_welfare(profile, &trace.bundle)?,
        ar: anger_ratio(profile, &trace.bundle)?,
        rounds: trace.rounds.len(),
        runtime_ms,
    })
}

/// Runs Rule X (approval utilities) and SRX on one generated instance.
/// Results come back in CSV order: `rx`, then `srx`.
pub fn evaluate(scenario: Scenario, seed: u64) -> crate::Result<[InstanceResult; 2]> {
    let (instance, profile, _) = generate(scenario, seed)?;
    Ok([
        score(
            scenario,
            seed,
            &instance,
            &profile,
            Rule::RuleX(UtilityMode::ApprovalOnes),
        )?,
        score(scenario, seed, &instance, &profile, Rule::SubstituteRuleX)?,
    ])
}

/// Seed of instance `index` in grid cell `cell`.
pub fn instance_seed(base_seed: u64, cell: usize, instances: usize, index: usize) -> u64 {
    base_seed.wrapping_add((cell * instances + index) as u64)
}

/// Runs every (cell, instance) pair in order, feeding each result to `sink`.
pub fn simulate(
    scenarios: &[Scenario],
    instances: usize,
    base_seed: u64,
    mut sink: impl FnMut(InstanceResult) -> Result<(), CliError>,
) -> Result<(), CliError> {
    for (cell, &scenario) in scenarios.iter().enumerate() {
        for index in 0..instances {
            let seed = instance_seed(base_seed, cell, instances, index);
            for r in evaluate(scenario, seed)? {
                sink(r)?;
            }
        }
    }
    Ok(())
}

pub fn cmd_simulate(
    family: Family,
    grid: &str,
    instances: usize,
    base_seed: u64,
    out_path: &Path,
    timing: bool,
) -> Result<usize, CliError> {
    if instances == 0 {
        return Err(CliError::validation("--instances must be positive"));
    }
    let scenarios = parse_grid(family, grid)?;
    let file = File::create(out_path)
        .map_err(|e| CliError::runtime(format!("{}: {e}", out_path.display())))?;
    let mut writer = ResultWriter::new(BufWriter::new(file), timing)?;
    let mut rows = 0usize;
    simulate(&scenarios, instances, base_seed, |r| {
        rows += 1;
        writer.write(&r)
    })?;
    writer.finish()?.flush()?;
    Ok(rows)
}

pub fn cmd_compare<W: Write>(
    in_path: &Path,
    out_path: Option<&Path>,
    json_path: Option<&Path>,
    stdout: &mut W,
) -> Result<metrics::ComparisonSummary, CliError> {
    let file = File::open(in_path)
        .map_err(|e| CliError::validation(format!("{}: {e}", in_path.display())))?;
    let results = csvio::read_results(file)?;
    let summary = metrics::summarize(&results)?;
    let json = serde_json::to_string_pretty(&summary).expect("summaries always serialize");
    match json_path {
        Some(path) => std::fs::write(path, &json)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?,
        None => writeln!(stdout, "{json}")?,
    }
    if let Some(path) = out_path {
        let file = File::create(path)
            .map_err(|e| CliError::runtime(format!("{}: {e}", path.display())))?;
        csvio::write_summary(BufWriter::new(file), &summary)?;
    }
    Ok(summary)
}

/// Writes the instance of a single-cell grid as an instance file.
pub fn cmd_generate(
    family: Family,
    grid: &str,
    seed: u64,
    out_path: &Path,
) -> Result<(), CliError> {
    let scenarios = parse_grid(family, grid)?;
    let [scenario] = scenarios.as_slice() else {
        return Err(CliError::validation(format!(
            "generate needs a single-cell grid, `{grid}` has {} cells",
            scenarios.len()
        )));
    };
    let (instance, profile, metadata) = generate(*scenario, seed)?;
    let text = InstanceFile::from_model(&instance, &profile, Some(metadata)).to_json();
    std::fs::write(out_path, text)
        .map_err(|e| CliError::runtime(format!("{}: {e}", out_path.display())))
}
