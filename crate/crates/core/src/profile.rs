//! Voter preferences: per-voter partitions of desired projects into groups of
//! substitutes, each with its own marginal utility curve.

use num_traits::{One, Signed, Zero};

use crate::curve::MarginalCurve;
use crate::error::{Error, Result};
use crate::model::{Bundle, PBInstance, ProjectIdx, VoterIdx};
use crate::rational::{self, Rational};

/// One group of mutually substitutable projects of a single voter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Partition {
    pub projects: Vec<ProjectIdx>,
    pub curve: MarginalCurve,
    /// Utility of the first funded project of the group.
    pub intensity: Rational,
}

impl Partition {
    pub fn new(projects: Vec<ProjectIdx>, curve: MarginalCurve) -> Self {
        Partition {
            projects,
            curve,
            intensity: Rational::one(),
        }
    }

    pub fn with_intensity(mut self, intensity: Rational) -> Self {
        self.intensity = intensity;
        self
    }

    fn overlap(&self, bundle: &Bundle) -> usize {
        self.projects
            .iter()
            .filter(|&&p| bundle.contains(p))
            .count()
    }
}

/// A single voter's partitions together with the derived project lookup.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Ballot {
    partitions: Vec<Partition>,
    /// `group[p]` is the index of the partition containing `p`, if any.
    group: Vec<Option<usize>>,
}

impl Ballot {
    pub fn partitions(&self) -> &[Partition] {
        &self.partitions
    }

    pub fn desires(&self, p: ProjectIdx) -> bool {
        self.group.get(p).is_some_and(Option::is_some)
    }

    /// Index of the partition `g_i(p)`, or `None` when `p` is undesired.
    pub fn group_of(&self, p: ProjectIdx) -> Option<usize> {
        self.group.get(p).copied().flatten()
    }

    /// `A(i)`: every project this voter listed.
    pub fn desired(&self) -> Bundle {
        self.partitions
            .iter()
            .flat_map(|g| g.projects.iter().copied())
            .collect()
    }

    pub fn utility(&self, bundle: &Bundle) -> Rational {
        self.partitions
            .iter()
            .map(|g| g.curve.prefix_sum(&g.intensity, g.overlap(bundle)))
            .fold(Rational::zero(), |acc, v| acc + v)
    }

    /// `u_i(B + p) - u_i(B)` for `p` not in `B`.
    pub(crate) fn marginal(&self, bundle: &Bundle, p: ProjectIdx) -> Rational {
        match self.group_of(p) {
            Some(g) => {
                let g = &self.partitions[g];
                g.curve.value_unchecked(&g.intensity, g.overlap(bundle) + 1)
            }
            None => Rational::zero(),
        }
    }

    /// Utility of `p` as a first project of its group (`I`), or zero.
    pub(crate) fn first_marginal(&self, p: ProjectIdx) -> Rational {
        match self.group_of(p) {
            Some(g) => {
                let g = &self.partitions[g];
                g.curve.value_unchecked(&g.intensity, 1)
            }
            None => Rational::zero(),
        }
    }
}

/// Preferences of all voters of one instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PreferenceProfile {
    ballots: Vec<Ballot>,
    project_count: usize,
}

impl PreferenceProfile {
    /// Validates `voters` against `instance`: one ballot per voter, existing
    /// projects only, non-empty pairwise disjoint partitions, positive
    /// intensities, and custom curves starting at the partition intensity.
    pub fn new(instance: &PBInstance, voters: Vec<Vec<Partition>>) -> Result<Self> {
        if voters.len() != instance.voter_count() {
            return Err(Error::invalid(format!(
                "profile has {} voters but the instance declares {}",
                voters.len(),
                instance.voter_count()
            )));
        }
        let m = instance.project_count();
        let mut ballots = Vec::with_capacity(voters.len());
        for (i, partitions) in voters.into_iter().enumerate() {
            let mut group = vec![None; m];
            for (k, g) in partitions.iter().enumerate() {
                if g.projects.is_empty() {
                    return Err(Error::invalid(format!("voter {i}: partition {k} is empty")));
                }
                if !g.intensity.is_positive() {
                    return Err(Error::invalid(format!(
                        "voter {i}: partition {k} has non-positive intensity {}",
                        rational::format(&g.intensity)
                    )));
                }
                if let MarginalCurve::Custom(table) = &g.curve {
                    if table[0] != g.intensity {
                        return Err(Error::invalid(format!(
                            "voter {i}: partition {k} custom curve starts at {} but intensity is {}",
                            rational::format(&table[0]),
                            rational::format(&g.intensity)
                        )));
                    }
                }
                for &p in &g.projects {
                    instance.check_project(p)?;
                    if group[p].replace(k).is_some() {
                        return Err(Error::invalid(format!(
                            "voter {i}: project `{}` appears in more than one partition",
                            instance.id(p)
                        )));
                    }
                }
            }
            ballots.push(Ballot { partitions, group });
        }
        Ok(PreferenceProfile {
            ballots,
            project_count: m,
        })
    }

    /// Convenience constructor from project ids, using one curve and unit
    /// intensity for every partition.
    pub fn from_ids<S: AsRef<str>>(
        instance: &PBInstance,
        voters: &[Vec<Vec<S>>],
        curve: MarginalCurve,
    ) -> Result<Self> {
        let voters = voters
            .iter()
            .map(|partitions| {
                partitions
                    .iter()
                    .map(|ids| {
                        let projects = ids
                            .iter()
                            .map(|id| instance.project(id.as_ref()))
                            .collect::<Result<Vec<_>>>()?;
                        Ok(Partition::new(projects, curve.clone()))
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(instance, voters)
    }

    pub fn voter_count(&self) -> usize {
        self.ballots.len()
    }

    pub fn project_count(&self) -> usize {
        self.project_count
    }

    pub fn ballots(&self) -> &[Ballot] {
        &self.ballots
    }

    pub fn ballot(&self, i: VoterIdx) -> Result<&Ballot> {
        self.ballots.get(i).ok_or(Error::UnknownVoter(i))
    }

    fn check_bundle(&self, bundle: &Bundle) -> Result<()> {
        match bundle.iter().find(|&p| p >= self.project_count) {
            Some(p) => Err(Error::UnknownProject(format!("#{p}"))),
            None => Ok(()),
        }
    }

    /// `u_i(B)`: per partition, the prefix sum of its curve up to the number
    /// of funded projects in it.
    pub fn voter_utility(&self, i: VoterIdx, bundle: &Bundle) -> Result<Rational> {
        self.check_bundle(bundle)?;
        Ok(self.ballot(i)?.utility(bundle))
    }

    /// `u_S(B) = sum of u_i(B)` over `voters`.
    pub fn group_utility(&self, voters: &[VoterIdx], bundle: &Bundle) -> Result<Rational> {
        voters.iter().try_fold(Rational::zero(), |acc, &i| {
            Ok(acc + self.voter_utility(i, bundle)?)
        })
    }

    /// `u_i(B + p) - u_i(B)`; `p` must not already be funded.
    pub fn marginal_gain(&self, i: VoterIdx, bundle: &Bundle, p: ProjectIdx) -> Result<Rational> {
        self.check_bundle(bundle)?;
        if p >= self.project_count {
            return Err(Error::UnknownProject(format!("#{p}")));
        }
        if bundle.contains(p) {
            return Err(Error::invalid(format!(
                "project #{p} is already in the bundle"
            )));
        }
        Ok(self.ballot(i)?.marginal(bundle, p))
    }

    /// Number of funded projects voter `i` desires, `|A(i) ∩ B|`.
    pub fn funded_desired(&self, i: VoterIdx, bundle: &Bundle) -> Result<usize> {
        self.check_bundle(bundle)?;
        let ballot = self.ballot(i)?;
        Ok(bundle.iter().filter(|&p| ballot.desires(p)).count())
    }

    /// True when no voter lists two projects in one partition.
    pub fn all_singleton_partitions(&self) -> bool {
        self.ballots
            .iter()
            .all(|b| b.partitions.iter().all(|g| g.projects.len() == 1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    #[test]
    fn two_voter_utilities() {
        let (e, prof) = fixtures::two_voters();
        let cde = e.bundle(&["c", "d", "e"]).unwrap();
        let ade = e.bundle(&["a", "d", "e"]).unwrap();
        assert_eq!(prof.voter_utility(0, &cde).unwrap(), ratio(6, 5));
        assert_eq!(prof.voter_utility(1, &ade).unwrap(), int(2));
        assert_eq!(prof.voter_utility(0, &Bundle::new()).unwrap(), int(0));
        assert_eq!(prof.group_utility(&[0, 1], &ade).unwrap(), int(4));
    }

    #[test]
    fn two_voter_marginals() {
        let (e, prof) = fixtures::two_voters();
        let d = e.bundle(&["d"]).unwrap();
        let only_e = e.bundle(&["e"]).unwrap();
        let c = e.project("c").unwrap();
        let a = e.project("a").unwrap();
        assert_eq!(prof.marginal_gain(0, &d, c).unwrap(), ratio(1, 5));
        assert_eq!(prof.marginal_gain(1, &only_e, a).unwrap(), int(1));
        // voter 2 does not want d
        assert_eq!(
            prof.marginal_gain(1, &Bundle::new(), e.project("d").unwrap())
                .unwrap(),
            int(0)
        );
    }

    #[test]
    fn marginal_gain_errors() {
        let (e, prof) = fixtures::two_voters();
        let d = e.bundle(&["d"]).unwrap();
        assert!(prof.marginal_gain(0, &d, e.project("d").unwrap()).is_err());
        assert_eq!(prof.voter_utility(5, &d), Err(Error::UnknownVoter(5)));
        let stray: Bundle = [42].into_iter().collect();
        assert!(prof.voter_utility(0, &stray).is_err());
    }

    #[test]
    fn validation() {
        let (e, _) = fixtures::two_voters();
        let ms = MarginalCurve::minimal_substitutes(5).unwrap();
        let overlap = vec![vec![vec!["a", "b"], vec!["b"]], vec![vec!["a"]]];
        assert!(PreferenceProfile::from_ids(&e, &overlap, ms.clone()).is_err());
        let wrong_count = vec![vec![vec!["a"]]];
        assert!(PreferenceProfile::from_ids(&e, &wrong_count, ms.clone()).is_err());
        let unknown = vec![vec![vec!["q"]], vec![vec!["a"]]];
        assert!(PreferenceProfile::from_ids(&e, &unknown, ms.clone()).is_err());
        let empty: Vec<Vec<Vec<&str>>> = vec![vec![vec![]], vec![vec!["a"]]];
        assert!(PreferenceProfile::from_ids(&e, &empty, ms.clone()).is_err());

        let zero = Partition::new(vec![0], ms.clone()).with_intensity(int(0));
        assert!(PreferenceProfile::new(&e, vec![vec![zero], vec![]]).is_err());
        let custom = Partition::new(vec![0], MarginalCurve::custom(vec![int(2)]).unwrap());
        assert!(PreferenceProfile::new(&e, vec![vec![custom.clone()], vec![]]).is_err());
        let custom = custom.with_intensity(int(2));
        assert!(PreferenceProfile::new(&e, vec![vec![custom], vec![]]).is_ok());
    }

    #[test]
    fn undesired_projects_are_worth_nothing() {
        let (e, prof) = fixtures::two_voters();
        // voter 1 never lists e
        let only_e = e.bundle(&["e"]).unwrap();
        assert_eq!(prof.voter_utility(0, &only_e).unwrap(), int(0));
        assert_eq!(prof.funded_desired(0, &only_e).unwrap(), 0);
        assert_eq!(prof.funded_desired(1, &only_e).unwrap(), 1);
    }
}
