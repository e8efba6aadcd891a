//! Exhaustive verifiers for Extended Justified Representation (EJR) and
//! Strong Budget-Proportional Justified Representation (Strong-BPJR).
//!
//! A voter group `S` is *T-cohesive* when its pooled equal shares cover
//! `cost(T)` and every member desires all of `T`. The substitutes-aware
//! variant additionally requires that no member sees two projects of `T` as
//! substitutes. Both checks enumerate every candidate `T` and are
//! exponential in the project count, so they refuse instances above a
//! configurable cap.

use itertools::Itertools;
use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::mechanisms::check_compatible;
use crate::model::{Bundle, PBInstance, ProjectIdx, VoterIdx};
use crate::profile::PreferenceProfile;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Cohesion {
    /// Budget condition plus `T ⊆ A(i)` for every member.
    Original,
    /// Additionally, for every member the projects of `T` lie in pairwise
    /// distinct partitions.
    WithSubstitutes,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Axiom {
    #[serde(rename = "ejr")]
    Ejr,
    #[serde(rename = "strong_bpjr")]
    StrongBpjr,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Satisfied,
    Violated,
}

/// A cohesive group that did not get what the axiom promises.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub projects: Vec<ProjectIdx>,
    pub voters: Vec<VoterIdx>,
    /// EJR: the best-served member's `|A(i) ∩ B|`. Strong-BPJR: the group's
    /// `|(∪ A(i)) ∩ B|`.
    pub attained: usize,
    /// `|T|`.
    pub required: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FairnessReport {
    pub axiom: Axiom,
    pub definition: Cohesion,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
}

impl FairnessReport {
    pub fn is_satisfied(&self) -> bool {
        self.verdict == Verdict::Satisfied
    }

    fn satisfied(axiom: Axiom, definition: Cohesion) -> Self {
        FairnessReport {
            axiom,
            definition,
            verdict: Verdict::Satisfied,
            witness: None,
        }
    }

    fn violated(axiom: Axiom, definition: Cohesion, witness: Witness) -> Self {
        FairnessReport {
            axiom,
            definition,
            verdict: Verdict::Violated,
            witness: Some(witness),
        }
    }
}

/// Caps for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchLimits {
    pub max_projects: usize,
    /// Only enforced by the Strong-BPJR subset search.
    pub max_voters: usize,
}

impl Default for SearchLimits {
    fn default() -> Self {
        SearchLimits {
            max_projects: 15,
            max_voters: 12,
        }
    }
}

/// Bit-set view of the profile, one `u64` per project set.
struct Masks {
    desired: Vec<u64>,
    groups: Vec<Vec<u64>>,
    funded: Vec<usize>,
    bundle: u64,
}

impl Masks {
    fn new(profile: &PreferenceProfile, bundle: &Bundle) -> Self {
        let bundle_mask = bundle.iter().fold(0u64, |m, p| m | (1 << p));
        let mut desired = Vec::new();
        let mut groups = Vec::new();
        let mut funded = Vec::new();
        for ballot in profile.ballots() {
            let gm: Vec<u64> = ballot
                .partitions()
                .iter()
                .map(|g| g.projects.iter().fold(0u64, |m, &p| m | (1 << p)))
                .collect();
            let d = gm.iter().fold(0u64, |m, g| m | g);
            funded.push((d & bundle_mask).count_ones() as usize);
            desired.push(d);
            groups.push(gm);
        }
        Masks {
            desired,
            groups,
            funded,
            bundle: bundle_mask,
        }
    }

    /// Whether voter `i` may belong to a group cohesive over `t`.
    fn admits(&self, i: VoterIdx, t: u64, def: Cohesion) -> bool {
        if t & !self.desired[i] != 0 {
            return false;
        }
        match def {
            Cohesion::Original => true,
            Cohesion::WithSubstitutes => self.groups[i].iter().all(|g| (g & t).count_ones() <= 1),
        }
    }
}

fn to_mask(items: &[usize], bound: usize, what: &str) -> Result<u64> {
    let mut mask = 0u64;
    for &x in items {
        if x >= bound {
            return Err(match what {
                "voter" => Error::UnknownVoter(x),
                _ => Error::UnknownProject(format!("#{x}")),
            });
        }
        if mask & (1 << x) != 0 {
            return Err(Error::invalid(format!("{what} {x} listed twice")));
        }
        mask |= 1 << x;
    }
    Ok(mask)
}

fn set_cost(instance: &PBInstance, projects: &[ProjectIdx]) -> Rational {
    projects
        .iter()
        .fold(Rational::zero(), |acc, &p| acc + instance.cost(p))
}

fn guard(
    instance: &PBInstance,
    profile: &PreferenceProfile,
    bundle: &Bundle,
    limits: &SearchLimits,
) -> Result<()> {
    check_compatible(instance, profile)?;
    let m = instance.project_count();
    let cap = limits.max_projects.min(63);
    if m > cap {
        return Err(Error::SizeLimit {
            what: "project count",
            actual: m,
            cap,
        });
    }
    if !instance.is_feasible(bundle)? {
        return Err(Error::invalid("bundle exceeds the budget"));
    }
    Ok(())
}

/// Project sets ordered by size, then lexicographically by project index.
fn candidate_sets(m: usize) -> impl Iterator<Item = Vec<ProjectIdx>> {
    (1..=m).flat_map(move |size| (0..m).combinations(size))
}

/// Whether `voters` is cohesive over `projects` under `def`.
pub fn is_t_cohesive(
    instance: &PBInstance,
    profile: &PreferenceProfile,
    voters: &[VoterIdx],
    projects: &[ProjectIdx],
    def: Cohesion,
) -> Result<bool> {
    check_compatible(instance, profile)?;
    if voters.is_empty() || projects.is_empty() {
        return Err(Error::invalid(
            "cohesion needs non-empty voter and project sets",
        ));
    }
    to_mask(voters, instance.voter_count().min(64), "voter")?;
    let m = instance.project_count();
    if m > 63 {
        // fall back to set logic for very large instances
        for &p in projects {
            instance.check_project(p)?;
        }
    } else {
        to_mask(projects, m, "project")?;
    }
    let pooled = instance.share() * Rational::from_integer(voters.len().into());
    if pooled < set_cost(instance, projects) {
        return Ok(false);
    }
    for &i in voters {
        let ballot = profile.ballot(i)?;
        let mut seen = std::collections::HashSet::new();
        for &p in projects {
            let Some(g) = ballot.group_of(p) else {
                return Ok(false);
            };
            if def == Cohesion::WithSubstitutes && !seen.insert(g) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// EJR: every T-cohesive group has a member with at least `|T|` funded
/// desired projects.
///
/// For each `T` only the admissible voters with fewer than `|T|` funded
/// desired projects matter; the axiom fails at `T` exactly when they alone
/// can afford it.
pub fn check_ejr(
    instance: &PBInstance,
    profile: &PreferenceProfile,
    bundle: &Bundle,
    def: Cohesion,
    limits: &SearchLimits,
) -> Result<FairnessReport> {
    guard(instance, profile, bundle, limits)?;
    let masks = Masks::new(profile, bundle);
    let share = instance.share();
    let n = instance.voter_count();
    for t in candidate_sets(instance.project_count()) {
        let size = t.len();
        let t_mask = t.iter().fold(0u64, |m, &p| m | (1 << p));
        let under: Vec<VoterIdx> = (0..n)
            .filter(|&i| masks.funded[i] < size && masks.admits(i, t_mask, def))
            .collect();
        if under.is_empty() {
            continue;
        }
        let cost = set_cost(instance, &t);
        if cost > *instance.budget() {
            continue;
        }
        if &share * Rational::from_integer(under.len().into()) >= cost {
            let attained = under.iter().map(|&i| masks.funded[i]).max().unwrap_or(0);
            return Ok(FairnessReport::violated(
                Axiom::Ejr,
                def,
                Witness {
                    projects: t,
                    voters: under,
                    attained,
                    required: size,
                },
            ));
        }
    }
    Ok(FairnessReport::satisfied(Axiom::Ejr, def))
}

/// Strong-BPJR: every T-cohesive group collectively has at least `|T|`
/// funded projects among the union of its members' desired sets.
///
/// The union only grows with the group, so it suffices to test groups of the
/// smallest size that can afford `T`.
pub fn check_strong_bpjr(
    instance: &PBInstance,
    profile: &PreferenceProfile,
    bundle: &Bundle,
    def: Cohesion,
    limits: &SearchLimits,
) -> Result<FairnessReport> {
    guard(instance, profile, bundle, limits)?;
    let n = instance.voter_count();
    if n > limits.max_voters {
        return Err(Error::SizeLimit {
            what: "voter count",
            actual: n,
            cap: limits.max_voters,
        });
    }
    let masks = Masks::new(profile, bundle);
    let share = instance.share();
    for t in candidate_sets(instance.project_count()) {
        let size = t.len();
        let t_mask = t.iter().fold(0u64, |m, &p| m | (1 << p));
        // a member with |T| funded projects already pushes the union to |T|
        let pool: Vec<VoterIdx> = (0..n)
            .filter(|&i| masks.funded[i] < size && masks.admits(i, t_mask, def))
            .collect();
        if pool.is_empty() {
            continue;
        }
        let cost = set_cost(instance, &t);
        if cost > *instance.budget() {
            continue;
        }
        let needed = min_group_size(&cost, &share);
        if needed > pool.len() {
            continue;
        }
        for group in pool.iter().copied().combinations(needed) {
            let union = group.iter().fold(0u64, |m, &i| m | masks.desired[i]);
            let attained = (union & masks.bundle).count_ones() as usize;
            if attained < size {
                return Ok(FairnessReport::violated(
                    Axiom::StrongBpjr,
                    def,
                    Witness {
                        projects: t,
                        voters: group,
                        attained,
                        required: size,
                    },
                ));
            }
        }
    }
    Ok(FairnessReport::satisfied(Axiom::StrongBpjr, def))
}

/// Smallest `k >= 1` with `share * k >= cost`.
fn min_group_size(cost: &Rational, share: &Rational) -> usize {
    let ratio = cost / share;
    let k = ratio.ceil().to_integer();
    usize::try_from(k).unwrap_or(usize::MAX).max(1)
}

/// Runs `axiom` under `def`.
pub fn check(
    axiom: Axiom,
    instance: &PBInstance,
    profile: &PreferenceProfile,
    bundle: &Bundle,
    def: Cohesion,
    limits: &SearchLimits,
) -> Result<FairnessReport> {
    match axiom {
        Axiom::Ejr => check_ejr(instance, profile, bundle, def, limits),
        Axiom::StrongBpjr => check_strong_bpjr(instance, profile, bundle, def, limits),
    }
}

/// Re-verifies a reported witness from scratch: the group must be cohesive
/// and the counts must fall short of `|T|`.
pub fn witness_is_valid(
    instance: &PBInstance,
    profile: &PreferenceProfile,
    bundle: &Bundle,
    report: &FairnessReport,
) -> Result<bool> {
    let Some(w) = &report.witness else {
        return Ok(report.verdict == Verdict::Satisfied);
    };
    if !is_t_cohesive(instance, profile, &w.voters, &w.projects, report.definition)? {
        return Ok(false);
    }
    let counts = w
        .voters
        .iter()
        .map(|&i| profile.funded_desired(i, bundle))
        .collect::<Result<Vec<_>>>()?;
    let ok = match report.axiom {
        Axiom::Ejr => counts.iter().all(|&c| c < w.projects.len()),
        Axiom::StrongBpjr => {
            let union = bundle
                .iter()
                .filter(|&p| w.voters.iter().any(|&i| profile.ballots()[i].desires(p)))
                .count();
            union < w.projects.len() && union == w.attained
        }
    };
    Ok(ok && w.required == w.projects.len())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::int;
    use crate::MarginalCurve;

    fn ids(e: &PBInstance, names: &[&str]) -> Vec<ProjectIdx> {
        names.iter().map(|n| e.project(n).unwrap()).collect()
    }

    #[test]
    fn cohesion_on_counterexample() {
        let (e, p) = fixtures::three_voter_counterexample();
        let bcd = ids(&e, &["b", "c", "d"]);
        let ad = ids(&e, &["a", "d"]);
        assert!(is_t_cohesive(&e, &p, &[0, 1, 2], &bcd, Cohesion::WithSubstitutes).unwrap());
        assert!(!is_t_cohesive(&e, &p, &[0], &ad, Cohesion::WithSubstitutes).unwrap());
        assert!(!is_t_cohesive(&e, &p, &[0], &ad, Cohesion::Original).unwrap());
        assert!(is_t_cohesive(&e, &p, &[0, 1, 2], &ad, Cohesion::Original).unwrap());
        assert!(!is_t_cohesive(&e, &p, &[0, 1, 2], &ad, Cohesion::WithSubstitutes).unwrap());
        // one voter's share (1) cannot pay for two unit projects
        assert!(!is_t_cohesive(&e, &p, &[2], &ids(&e, &["c", "d"]), Cohesion::Original).unwrap());
    }

    #[test]
    fn cohesion_argument_errors() {
        let (e, p) = fixtures::three_voter_counterexample();
        assert!(is_t_cohesive(&e, &p, &[], &[0], Cohesion::Original).is_err());
        assert!(is_t_cohesive(&e, &p, &[0], &[], Cohesion::Original).is_err());
        assert!(is_t_cohesive(&e, &p, &[9], &[0], Cohesion::Original).is_err());
        assert!(is_t_cohesive(&e, &p, &[0], &[9], Cohesion::Original).is_err());
        assert!(is_t_cohesive(&e, &p, &[0, 0], &[1], Cohesion::Original).is_err());
    }

    #[test]
    fn counterexample_violates_both_axioms() {
        let (e, p) = fixtures::three_voter_counterexample();
        let b = e.bundle(&["a", "e"]).unwrap();
        let limits = SearchLimits::default();
        for axiom in [Axiom::Ejr, Axiom::StrongBpjr] {
            let r = check(axiom, &e, &p, &b, Cohesion::WithSubstitutes, &limits).unwrap();
            assert_eq!(r.verdict, Verdict::Violated);
            let w = r.witness.as_ref().unwrap();
            assert_eq!(w.projects, ids(&e, &["b", "c", "d"]));
            assert_eq!(w.voters, vec![0, 1, 2]);
            assert_eq!((w.attained, w.required), (2, 3));
            assert!(witness_is_valid(&e, &p, &b, &r).unwrap());
        }
    }

    #[test]
    fn funding_every_desired_project_satisfies_both() {
        let e = PBInstance::new(
            vec![
                ("x".into(), int(1)),
                ("y".into(), int(1)),
                ("z".into(), int(1)),
            ],
            int(3),
            2,
        )
        .unwrap();
        let p = PreferenceProfile::from_ids(
            &e,
            &[vec![vec!["x", "y"]], vec![vec!["y"], vec!["z"]]],
            MarginalCurve::Pav,
        )
        .unwrap();
        let all = e.bundle(&["x", "y", "z"]).unwrap();
        let limits = SearchLimits::default();
        for def in [Cohesion::Original, Cohesion::WithSubstitutes] {
            assert!(check_ejr(&e, &p, &all, def, &limits)
                .unwrap()
                .is_satisfied());
            assert!(check_strong_bpjr(&e, &p, &all, def, &limits)
                .unwrap()
                .is_satisfied());
        }
    }

    #[test]
    fn size_caps_and_infeasible_bundles() {
        let (e, p) = fixtures::three_voter_counterexample();
        let tight = SearchLimits {
            max_projects: 4,
            max_voters: 12,
        };
        let b = e.bundle(&["a"]).unwrap();
        assert!(matches!(
            check_ejr(&e, &p, &b, Cohesion::Original, &tight),
            Err(Error::SizeLimit { .. })
        ));
        let few_voters = SearchLimits {
            max_projects: 15,
            max_voters: 2,
        };
        assert!(matches!(
            check_strong_bpjr(&e, &p, &b, Cohesion::Original, &few_voters),
            Err(Error::SizeLimit { .. })
        ));
        let over = e.bundle(&["a", "b", "c", "d"]).unwrap();
        assert!(check_ejr(&e, &p, &over, Cohesion::Original, &SearchLimits::default()).is_err());
    }

    #[test]
    fn min_group_size_rounds_up() {
        assert_eq!(min_group_size(&int(3), &int(1)), 3);
        assert_eq!(min_group_size(&crate::rational::ratio(5, 2), &int(1)), 3);
        assert_eq!(min_group_size(&crate::rational::ratio(1, 2), &int(1)), 1);
    }
}
