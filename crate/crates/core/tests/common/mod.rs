//! Random small instances and brute-force oracles shared by the integration
//! tests.
#![allow(dead_code)]

use itertools::Itertools;
use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use srx::mechanisms::{MechanismTrace, Rule};
use srx::profile::Partition;
use srx::rational::{int, ratio};
use srx::simgen::{gen_global_substitutes, GlobalSubstitutesParams};
use srx::{Bundle, MarginalCurve, PBInstance, PreferenceProfile, Rational};

pub fn rng(seed: u64) -> ChaCha8Rng {
    srx::simgen::rng(seed)
}

/// Curves drawn by [`random_partitions`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Curves {
    MinimalSubstitutes,
    Pav,
    /// Minimal substitutes or PAV, drawn per partition.
    MinimalOrPav,
    /// Also custom tables, some reaching zero, and non-unit intensities.
    Any,
}

#[derive(Debug, Clone)]
pub struct Shape {
    pub voters: (usize, usize),
    pub projects: (usize, usize),
    pub max_partition: usize,
    pub unit_cost: bool,
    pub curves: Curves,
}

impl Default for Shape {
    fn default() -> Self {
        Shape {
            voters: (1, 6),
            projects: (1, 7),
            max_partition: 3,
            unit_cost: false,
            curves: Curves::Any,
        }
    }
}

fn random_cost(rng: &mut ChaCha8Rng) -> Rational {
    match rng.random_range(0..3) {
        0 => int(rng.random_range(1..=4)),
        1 => ratio(rng.random_range(1..=12), rng.random_range(1..=6)),
        _ => ratio(rng.random_range(50..=400), 100),
    }
}

fn random_curve(rng: &mut ChaCha8Rng, curves: Curves, m: usize) -> (MarginalCurve, Rational) {
    let pick = match curves {
        Curves::MinimalSubstitutes => 0,
        Curves::Pav => 1,
        Curves::MinimalOrPav => rng.random_range(0..2),
        Curves::Any => rng.random_range(0..4),
    };
    match pick {
        0 => (MarginalCurve::minimal_substitutes(m).unwrap(), int(1)),
        1 => (MarginalCurve::Pav, int(1)),
        2 => {
            let intensity = ratio(rng.random_range(1..=4), rng.random_range(1..=2));
            (MarginalCurve::minimal_substitutes(m).unwrap(), intensity)
        }
        _ => {
            let len = rng.random_range(1..=3);
            let mut table = vec![ratio(rng.random_range(1..=6), 2)];
            for _ in 1..len {
                let prev = table.last().unwrap().clone();
                let step = ratio(rng.random_range(0..=3), 4);
                let next = if step > prev { int(0) } else { prev - step };
                table.push(next);
            }
            let intensity = table[0].clone();
            (MarginalCurve::custom(table).unwrap(), intensity)
        }
    }
}

/// A voter's desired projects split into partitions of at most `max` projects.
fn random_partitions(rng: &mut ChaCha8Rng, m: usize, max: usize, curves: Curves) -> Vec<Partition> {
    let mut projects: Vec<usize> = (0..m).filter(|_| rng.random_bool(0.5)).collect();
    if projects.is_empty() && rng.random_bool(0.8) {
        projects.push(rng.random_range(0..m));
    }
    projects.shuffle(rng);
    let mut out = Vec::new();
    let mut rest = projects.as_slice();
    while !rest.is_empty() {
        let size = rng.random_range(1..=max).min(rest.len());
        let (head, tail) = rest.split_at(size);
        let (curve, intensity) = random_curve(rng, curves, m);
        out.push(Partition::new(head.to_vec(), curve).with_intensity(intensity));
        rest = tail;
    }
    out
}

/// Arbitrary per-voter partitions over random costs and budget.
pub fn random_instance(rng: &mut ChaCha8Rng, shape: &Shape) -> (PBInstance, PreferenceProfile) {
    let n = rng.random_range(shape.voters.0..=shape.voters.1);
    let m = rng.random_range(shape.projects.0..=shape.projects.1);
    let costs: Vec<Rational> = (0..m)
        .map(|_| {
            if shape.unit_cost {
                int(1)
            } else {
                random_cost(rng)
            }
        })
        .collect();
    let budget = if shape.unit_cost {
        int(rng.random_range(1..=m as i64))
    } else {
        let total: Rational = costs.iter().sum();
        let frac = ratio(rng.random_range(1..=10), 10);
        let b = total * frac;
        if b.is_integer() {
            b
        } else {
            b.ceil()
        }
    };
    let projects = (0..m)
        .map(|p| (format!("p{p}"), costs[p].clone()))
        .collect();
    let instance = PBInstance::new(projects, budget, n).unwrap();
    let voters = (0..n)
        .map(|_| random_partitions(rng, m, shape.max_partition, shape.curves))
        .collect();
    let profile = PreferenceProfile::new(&instance, voters).unwrap();
    (instance, profile)
}

/// Global-substitutes instances with 3 to 8 voters, 6 to 12 projects and
/// partitions of at most 3 projects.
pub fn small_global(
    rng: &mut ChaCha8Rng,
) -> (PBInstance, PreferenceProfile, GlobalSubstitutesParams) {
    let n_projects: usize = rng.random_range(6..=12);
    let partition_size_range = (1, 3);
    let min_parts = n_projects.div_ceil(3);
    let cost_mean = [100.0, 200.0, 300.0, 450.0][rng.random_range(0..4)];
    let cost_std = [10.0, 30.0, 80.0][rng.random_range(0..3)];
    let params = GlobalSubstitutesParams {
        n_voters: rng.random_range(3..=8),
        n_projects,
        partition_size_range,
        k: rng.random_range(1..=min_parts),
        cost_mean,
        cost_std,
        budget: (cost_mean * rng.random_range(1.0..n_projects as f64 / 2.0)).round() as u64,
    };
    let (e, p, _) = gen_global_substitutes(&params, rng.random()).unwrap();
    (e, p, params)
}

/// Every bundle within budget.
pub fn feasible_bundles(instance: &PBInstance) -> Vec<Bundle> {
    (0..instance.project_count())
        .powerset()
        .map(|s| s.into_iter().collect::<Bundle>())
        .filter(|b| instance.is_feasible(b).unwrap())
        .collect()
}

pub fn random_feasible_bundle(rng: &mut ChaCha8Rng, instance: &PBInstance) -> Bundle {
    let mut order: Vec<usize> = (0..instance.project_count()).collect();
    order.shuffle(rng);
    let mut bundle = Bundle::new();
    for p in order {
        if rng.random_bool(0.6) && instance.is_feasible(&bundle.with(p)).unwrap() {
            bundle.insert(p);
        }
    }
    bundle
}

/// Smallest `q` with `sum_i min(b_i, u_i q) >= cost`, found by scanning the
/// breakpoints `b_i / u_i` of the piecewise-linear coverage function.
pub fn rate_by_breakpoints(
    cost: &Rational,
    utilities: &[Rational],
    budgets: &[Rational],
) -> Option<Rational> {
    let zero = int(0);
    let pairs: Vec<(&Rational, &Rational)> = utilities
        .iter()
        .zip(budgets)
        .filter(|(u, _)| **u > zero)
        .collect();
    let pool: Rational = pairs.iter().map(|(_, b)| (*b).clone()).sum();
    if pool < *cost {
        return None;
    }
    let mut points: Vec<Rational> = pairs.iter().map(|(u, b)| *b / *u).collect();
    points.push(zero.clone());
    points.sort();
    points.dedup();
    let cover =
        |q: &Rational| -> Rational { pairs.iter().map(|(u, b)| (q * *u).min((*b).clone())).sum() };
    // find the first breakpoint where coverage reaches cost, then solve the
    // linear piece just before it
    let hit = points.iter().position(|q| cover(q) >= *cost)?;
    if hit == 0 {
        return Some(zero);
    }
    let lo = &points[hit - 1];
    let covered_lo = cover(lo);
    let slope: Rational = pairs
        .iter()
        .filter(|(u, b)| lo * *u < **b)
        .map(|(u, _)| (*u).clone())
        .sum();
    Some(lo + (cost - covered_lo) / slope)
}

/// Rule X recomputed from scratch every round: every project priced by
/// breakpoints, utilities re-derived from the bundle so far.
pub fn naive_run(
    instance: &PBInstance,
    profile: &PreferenceProfile,
    rule: Rule,
) -> (Vec<usize>, Vec<Rational>) {
    use srx::mechanisms::UtilityMode;
    let n = instance.voter_count();
    let mut budgets = vec![instance.share(); n];
    let mut bundle = Bundle::new();
    let mut order = Vec::new();
    loop {
        let mut best: Option<(usize, Rational, Vec<Rational>)> = None;
        for p in 0..instance.project_count() {
            if bundle.contains(p) || instance.cost(p) > instance.budget() {
                continue;
            }
            let utilities: Vec<Rational> = (0..n)
                .map(|i| {
                    let ballot = &profile.ballots()[i];
                    let Some(g) = ballot.group_of(p) else {
                        return int(0);
                    };
                    let part = &ballot.partitions()[g];
                    match rule {
                        Rule::RuleX(UtilityMode::ApprovalOnes) => int(1),
                        Rule::RuleX(UtilityMode::StaticFirstMarginal) => part.intensity.clone(),
                        Rule::SubstituteRuleX => {
                            let funded = part
                                .projects
                                .iter()
                                .filter(|&&x| bundle.contains(x))
                                .count();
                            part.curve.value(&part.intensity, funded + 1).unwrap()
                        }
                    }
                })
                .collect();
            if let Some(q) = rate_by_breakpoints(instance.cost(p), &utilities, &budgets) {
                if best.as_ref().is_none_or(|(_, bq, _)| q < *bq) {
                    best = Some((p, q, utilities));
                }
            }
        }
        let Some((p, q, utilities)) = best else { break };
        for i in 0..n {
            let pay = (&q * &utilities[i]).min(budgets[i].clone());
            budgets[i] -= pay;
        }
        bundle.insert(p);
        order.push(p);
    }
    (order, budgets)
}

pub fn trace_matches_naive(trace: &MechanismTrace, naive: &(Vec<usize>, Vec<Rational>)) -> bool {
    trace.selection_order() == naive.0 && trace.final_budgets() == naive.1.as_slice()
}
