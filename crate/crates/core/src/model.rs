//! The PB instance: projects, their costs and the total budget.

use std::collections::{BTreeSet, HashMap};
use std::fmt;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::rational::{self, Rational};

/// Position of a project in the instance's project order.
pub type ProjectIdx = usize;
/// Zero-based voter index.
pub type VoterIdx = usize;

/// A participatory budgeting election: projects with strictly positive costs,
/// a positive budget and a number of voters.
///
/// The order of `projects` is the instance's total order, used for every
/// lexicographic tie-break.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PBInstance {
    ids: Vec<String>,
    costs: Vec<Rational>,
    budget: Rational,
    voter_count: usize,
    index: HashMap<String, ProjectIdx>,
}

impl PBInstance {
    pub fn new(
        projects: Vec<(String, Rational)>,
        budget: Rational,
        voter_count: usize,
    ) -> Result<Self> {
        if !budget.is_positive() {
            return Err(Error::invalid(format!(
                "budget must be positive, got {}",
                rational::format(&budget)
            )));
        }
        if voter_count == 0 {
            return Err(Error::invalid("an instance needs at least one voter"));
        }
        let mut ids = Vec::with_capacity(projects.len());
        let mut costs = Vec::with_capacity(projects.len());
        let mut index = HashMap::with_capacity(projects.len());
        for (id, cost) in projects {
            if !cost.is_positive() {
                return Err(Error::invalid(format!(
                    "project `{id}` has non-positive cost {}",
                    rational::format(&cost)
                )));
            }
            if index.insert(id.clone(), ids.len()).is_some() {
                return Err(Error::invalid(format!("duplicate project id `{id}`")));
            }
            ids.push(id);
            costs.push(cost);
        }
        Ok(PBInstance {
            ids,
            costs,
            budget,
            voter_count,
            index,
        })
    }

    pub fn project_count(&self) -> usize {
        self.ids.len()
    }

    pub fn voter_count(&self) -> usize {
        self.voter_count
    }

    pub fn budget(&self) -> &Rational {
        &self.budget
    }

    /// Every voter's equal share `L / n`.
    pub fn share(&self) -> Rational {
        &self.budget / Rational::from_integer(self.voter_count.into())
    }

    pub fn ids(&self) -> &[String] {
        &self.ids
    }

    pub fn id(&self, p: ProjectIdx) -> &str {
        &self.ids[p]
    }

    pub fn cost(&self, p: ProjectIdx) -> &Rational {
        &self.costs[p]
    }

    pub fn costs(&self) -> &[Rational] {
        &self.costs
    }

    pub fn project(&self, id: &str) -> Result<ProjectIdx> {
        self.index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownProject(id.to_string()))
    }

    pub(crate) fn check_project(&self, p: ProjectIdx) -> Result<()> {
        if p < self.ids.len() {
            Ok(())
        } else {
            Err(Error::UnknownProject(format!("#{p}")))
        }
    }

    pub fn bundle_cost(&self, bundle: &Bundle) -> Result<Rational> {
        let mut total = Rational::zero();
        for p in bundle.iter() {
            self.check_project(p)?;
            total += &self.costs[p];
        }
        Ok(total)
    }

    pub fn is_feasible(&self, bundle: &Bundle) -> Result<bool> {
        Ok(self.bundle_cost(bundle)? <= self.budget)
    }

    /// Builds a bundle from project ids, rejecting unknown ids and duplicates.
    pub fn bundle<S: AsRef<str>>(&self, ids: &[S]) -> Result<Bundle> {
        let mut bundle = Bundle::new();
        for id in ids {
            let p = self.project(id.as_ref())?;
            if !bundle.insert(p) {
                return Err(Error::invalid(format!(
                    "project `{}` listed twice in bundle",
                    id.as_ref()
                )));
            }
        }
        Ok(bundle)
    }

    pub fn bundle_ids(&self, bundle: &Bundle) -> Vec<&str> {
        bundle.iter().map(|p| self.id(p)).collect()
    }
}

/// A set of funded projects, kept in project order.
#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bundle(BTreeSet<ProjectIdx>);

impl Bundle {
    pub fn new() -> Self {
        Bundle(BTreeSet::new())
    }

    pub fn insert(&mut self, p: ProjectIdx) -> bool {
        self.0.insert(p)
    }

    pub fn contains(&self, p: ProjectIdx) -> bool {
        self.0.contains(&p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = ProjectIdx> + '_ {
        self.0.iter().copied()
    }

    pub fn with(&self, p: ProjectIdx) -> Bundle {
        let mut next = self.clone();
        next.insert(p);
        next
    }
}

impl FromIterator<ProjectIdx> for Bundle {
    fn from_iter<I: IntoIterator<Item = ProjectIdx>>(iter: I) -> Self {
        Bundle(iter.into_iter().collect())
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, p) in self.0.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}
