//! Seeded instance generators for the two experiment families.
//!
//! Every generator draws from a `ChaCha8Rng` seeded with the instance seed,
//! so an instance is fully determined by `(params, seed)`. The algorithm
//! name is exported as [`RNG_ALGORITHM`] and recorded in file metadata.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::curve::MarginalCurve;
use crate::error::{Error, Result};
use crate::model::{PBInstance, ProjectIdx};
use crate::profile::{Partition, PreferenceProfile};
use crate::rational::{int, ratio, Rational};

pub const RNG_ALGORITHM: &str = "chacha8";

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// How Euclidean projects get their category.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CategoryAssignment {
    /// Independently uniform over all categories.
    #[default]
    Uniform,
    /// Project `j` gets category `j mod n_categories`.
    Cyclic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EuclideanParams {
    pub n_voters: usize,
    pub n_projects: usize,
    /// Unit costs, so the budget counts projects.
    pub budget: u64,
    pub n_categories: usize,
    pub approvals_per_voter: usize,
    #[serde(default)]
    pub category_assignment: CategoryAssignment,
}

impl Default for EuclideanParams {
    fn default() -> Self {
        EuclideanParams {
            n_voters: 100,
            n_projects: 100,
            budget: 20,
            n_categories: 25,
            approvals_per_voter: 10,
            category_assignment: CategoryAssignment::Uniform,
        }
    }
}

impl EuclideanParams {
    pub fn validate(&self) -> Result<()> {
        if self.n_voters == 0 || self.n_projects == 0 || self.n_categories == 0 {
            return Err(Error::invalid("euclidean counts must be positive"));
        }
        if self.budget == 0 || self.budget > self.n_projects as u64 {
            return Err(Error::invalid(format!(
                "euclidean budget must be in 1..={}",
                self.n_projects
            )));
        }
        if self.approvals_per_voter == 0 || self.approvals_per_voter > self.n_projects {
            return Err(Error::invalid(
                "approvals per voter must be in 1..=n_projects",
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GlobalSubstitutesParams {
    pub n_voters: usize,
    pub n_projects: usize,
    /// Inclusive bounds for partition sizes.
    pub partition_size_range: (usize, usize),
    /// Partitions approved by each voter.
    pub k: usize,
    pub cost_mean: f64,
    pub cost_std: f64,
    pub budget: u64,
}

impl Default for GlobalSubstitutesParams {
    fn default() -> Self {
        GlobalSubstitutesParams {
            n_voters: 100,
            n_projects: 100,
            partition_size_range: (1, 10),
            k: 5,
            cost_mean: 300.0,
            cost_std: 10.0,
            budget: 3000,
        }
    }
}

impl GlobalSubstitutesParams {
    /// Fewest partitions any draw can produce.
    pub fn min_partitions(&self) -> usize {
        self.n_projects.div_ceil(self.partition_size_range.1)
    }

    pub fn validate(&self) -> Result<()> {
        let (lo, hi) = self.partition_size_range;
        if self.n_voters == 0 || self.n_projects == 0 || self.budget == 0 {
            return Err(Error::invalid("global-substitutes counts must be positive"));
        }
        if lo == 0 || lo > hi {
            return Err(Error::invalid(
                "partition size range must satisfy 1 <= lo <= hi",
            ));
        }
        if self.k == 0 || self.k > self.min_partitions() {
            return Err(Error::invalid(format!(
                "k = {} must be in 1..={} (the guaranteed partition count)",
                self.k,
                self.min_partitions()
            )));
        }
        if !(self.cost_std > 0.0 && self.cost_std.is_finite() && self.cost_mean.is_finite()) {
            return Err(Error::invalid(
                "cost distribution needs finite mean and positive std",
            ));
        }
        // the rejection sampler must be able to land in (0, budget]
        if self.cost_mean + 8.0 * self.cost_std <= 0.0
            || self.cost_mean - 8.0 * self.cost_std > self.budget as f64
        {
            return Err(Error::invalid(
                "cost distribution has no mass in (0, budget]",
            ));
        }
        Ok(())
    }
}

fn project_ids(n: usize) -> Vec<String> {
    let width = n.saturating_sub(1).to_string().len();
    (0..n).map(|p| format!("p{p:0width$}")).collect()
}

/// Voters and projects uniform in the unit square; every voter desires its
/// nearest projects, grouped into substitutes by project category.
///
/// Returns the instance, the profile and each project's category.
pub fn gen_euclidean(
    params: &EuclideanParams,
    seed: u64,
) -> Result<(PBInstance, PreferenceProfile, Vec<usize>)> {
    params.validate()?;
    let mut rng = rng(seed);
    let point = |rng: &mut ChaCha8Rng| (rng.random::<f64>(), rng.random::<f64>());
    let voters: Vec<(f64, f64)> = (0..params.n_voters).map(|_| point(&mut rng)).collect();
    let projects: Vec<(f64, f64)> = (0..params.n_projects).map(|_| point(&mut rng)).collect();
    let categories: Vec<usize> = match params.category_assignment {
        CategoryAssignment::Uniform => (0..params.n_projects)
            .map(|_| rng.random_range(0..params.n_categories))
            .collect(),
        CategoryAssignment::Cyclic => (0..params.n_projects)
            .map(|p| p % params.n_categories)
            .collect(),
    };

    let instance = PBInstance::new(
        project_ids(params.n_projects)
            .into_iter()
            .map(|id| (id, int(1)))
            .collect(),
        int(params.budget as i64),
        params.n_voters,
    )?;
    let curve = MarginalCurve::minimal_substitutes(params.n_projects)?;
    let ballots = voters
        .iter()
        .map(|&(vx, vy)| {
            let mut by_distance: Vec<(f64, ProjectIdx)> = projects
                .iter()
                .enumerate()
                .map(|(p, &(px, py))| ((vx - px).hypot(vy - py), p))
                .collect();
            by_distance.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            let mut nearest: Vec<ProjectIdx> = by_distance
                .into_iter()
                .take(params.approvals_per_voter)
                .map(|(_, p)| p)
                .collect();
            nearest.sort_unstable();
            group_by_category(&nearest, &categories)
                .into_iter()
                .map(|g| Partition::new(g, curve.clone()))
                .collect()
        })
        .collect();
    let profile = PreferenceProfile::new(&instance, ballots)?;
    Ok((instance, profile, categories))
}

/// Groups projects by category, partitions ordered by their smallest project.
fn group_by_category(projects: &[ProjectIdx], categories: &[usize]) -> Vec<Vec<ProjectIdx>> {
    let mut groups: Vec<(usize, Vec<ProjectIdx>)> = Vec::new();
    for &p in projects {
        match groups.iter_mut().find(|(c, _)| *c == categories[p]) {
            Some((_, g)) => g.push(p),
            None => groups.push((categories[p], vec![p])),
        }
    }
    groups.into_iter().map(|(_, g)| g).collect()
}

/// One project partition shared by all voters, each voter approving `k`
/// whole partitions, Gaussian project costs.
///
/// Returns the instance, the profile and the global partition.
pub fn gen_global_substitutes(
    params: &GlobalSubstitutesParams,
    seed: u64,
) -> Result<(PBInstance, PreferenceProfile, Vec<Vec<ProjectIdx>>)> {
    params.validate()?;
    let mut rng = rng(seed);
    let (lo, hi) = params.partition_size_range;

    let mut order: Vec<ProjectIdx> = (0..params.n_projects).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut rng);
    let mut partition = Vec::new();
    let mut rest = order.as_slice();
    while !rest.is_empty() {
        let size = rng.random_range(lo..=hi).min(rest.len());
        let (head, tail) = rest.split_at(size);
        let mut group = head.to_vec();
        group.sort_unstable();
        partition.push(group);
        rest = tail;
    }
    partition.sort_by_key(|g| g[0]);

    let budget = int(params.budget as i64);
    let normal = Normal::new(params.cost_mean, params.cost_std)
        .map_err(|e| Error::invalid(format!("cost distribution: {e}")))?;
    let costs: Vec<Rational> = (0..params.n_projects)
        .map(|_| sample_cost(&normal, &mut rng, params.budget))
        .collect();

    let instance = PBInstance::new(
        project_ids(params.n_projects)
            .into_iter()
            .zip(costs)
            .collect(),
        budget,
        params.n_voters,
    )?;
    let curve = MarginalCurve::minimal_substitutes(params.n_projects)?;
    let ballots = (0..params.n_voters)
        .map(|_| {
            let mut chosen = index::sample(&mut rng, partition.len(), params.k).into_vec();
            chosen.sort_unstable();
            chosen
                .into_iter()
                .map(|g| Partition::new(partition[g].clone(), curve.clone()))
                .collect()
        })
        .collect();
    let profile = PreferenceProfile::new(&instance, ballots)?;
    Ok((instance, profile, partition))
}

/// Draws until the value rounded to cents lies in `(0, budget]`.
fn sample_cost(normal: &Normal<f64>, rng: &mut ChaCha8Rng, budget: u64) -> Rational {
    let max_cents = budget as i64 * 100;
    loop {
        let cents = (normal.sample(rng) * 100.0).round();
        if cents >= 1.0 && cents <= max_cents as f64 {
            return ratio(cents as i64, 100);
        }
    }
}

/// Costs drawn by the global-substitutes sampler, for distribution checks.
pub fn sample_costs(
    params: &GlobalSubstitutesParams,
    seed: u64,
    count: usize,
) -> Result<Vec<Rational>> {
    params.validate()?;
    let normal = Normal::new(params.cost_mean, params.cost_std)
        .map_err(|e| Error::invalid(format!("cost distribution: {e}")))?;
    let mut rng = rng(seed);
    Ok((0..count)
        .map(|_| sample_cost(&normal, &mut rng, params.budget))
        .collect())
}
