//! Rule X and Substitute Rule X.
//!
//! Every voter starts with an equal share `L / n` of the budget. Each round
//! the mechanism prices every unfunded project with [`q_value`]: the smallest
//! rate `q` such that charging every voter `min(b_i, U_i(p) * q)` covers the
//! cost. The cheapest rate wins (ties go to the earlier project in instance
//! order), supporters pay, and the loop ends once no project is affordable.
//!
//! Rule X prices projects with static utilities. Substitute Rule X
//! recomputes `U_i(p)` before every round as the marginal gain
//! `u_i(B + p) - u_i(B)` given the projects funded so far.

use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{Bundle, PBInstance, ProjectIdx, VoterIdx};
use crate::profile::PreferenceProfile;
use crate::rational::{self, Rational};

/// Remaining budget `b_i(t)` of every voter.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BudgetState(Vec<Rational>);

impl BudgetState {
    /// `b_i(0) = L / n` for every voter.
    pub fn equal_shares(instance: &PBInstance) -> Self {
        BudgetState(vec![instance.share(); instance.voter_count()])
    }

    pub fn new(budgets: Vec<Rational>) -> Result<Self> {
        if budgets.iter().any(Signed::is_negative) {
            return Err(Error::invalid("voter budgets must be nonnegative"));
        }
        Ok(BudgetState(budgets))
    }

    pub fn as_slice(&self) -> &[Rational] {
        &self.0
    }

    pub fn total(&self) -> Rational {
        self.0.iter().fold(Rational::zero(), |acc, b| acc + b)
    }

    fn charge(&mut self, payments: &[Rational]) {
        for (b, c) in self.0.iter_mut().zip(payments) {
            *b -= c;
        }
    }
}

/// Outcome of pricing a single project.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum QResult {
    /// The supporters cannot cover the cost at any rate.
    Infinite,
    Finite {
        q: Rational,
        /// `c_i = min(b_i, U_i * q)`; sums exactly to the cost.
        payments: Vec<Rational>,
    },
}

impl QResult {
    pub fn rate(&self) -> Option<&Rational> {
        match self {
            QResult::Infinite => None,
            QResult::Finite { q, .. } => Some(q),
        }
    }
}

/// Prices a project of cost `cost` given every voter's utility for it and
/// their remaining budgets.
pub fn q_value(cost: &Rational, utilities: &[Rational], budgets: &BudgetState) -> Result<QResult> {
    if !cost.is_positive() {
        return Err(Error::invalid("project cost must be positive"));
    }
    if utilities.len() != budgets.0.len() {
        return Err(Error::invalid(format!(
            "{} utilities for {} budgets",
            utilities.len(),
            budgets.0.len()
        )));
    }
    if utilities.iter().any(Signed::is_negative) {
        return Err(Error::invalid("utilities must be nonnegative"));
    }
    let supporters: Vec<(VoterIdx, &Rational)> = utilities
        .iter()
        .enumerate()
        .filter(|(_, u)| u.is_positive())
        .collect();
    Ok(match rate(cost, &supporters, &budgets.0) {
        None => QResult::Infinite,
        Some(q) => {
            let payments = payments(&q, utilities, &budgets.0);
            QResult::Finite { q, payments }
        }
    })
}

/// Removal loop over the positive-utility voters. Returns `None` when their
/// pooled budget is below `cost`.
fn rate(
    cost: &Rational,
    supporters: &[(VoterIdx, &Rational)],
    budgets: &[Rational],
) -> Option<Rational> {
    let pool = supporters
        .iter()
        .fold(Rational::zero(), |acc, (i, _)| acc + &budgets[*i]);
    if pool < *cost {
        return None;
    }
    let mut current_utility = supporters
        .iter()
        .fold(Rational::zero(), |acc, (_, u)| acc + *u);
    let mut leftover = cost.clone();
    let mut capped = vec![false; supporters.len()];
    loop {
        if current_utility.is_zero() {
            // Every supporter is capped: the coverage threshold is reached
            // exactly at the largest b_i / U_i.
            return supporters.iter().map(|(i, u)| &budgets[*i] / *u).max();
        }
        let q = &leftover / &current_utility;
        let mut removed = false;
        for (k, (i, u)) in supporters.iter().enumerate() {
            if capped[k] {
                continue;
            }
            if &q * *u > budgets[*i] {
                current_utility -= *u;
                leftover -= &budgets[*i];
                capped[k] = true;
                removed = true;
            }
        }
        if !removed {
            return Some(q);
        }
    }
}

fn payments(q: &Rational, utilities: &[Rational], budgets: &[Rational]) -> Vec<Rational> {
    utilities
        .iter()
        .zip(budgets)
        .map(|(u, b)| {
            if u.is_zero() {
                Rational::zero()
            } else {
                (q * u).min(b.clone())
            }
        })
        .collect()
}

/// How Rule X assigns static utilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum UtilityMode {
    /// `U_i(p) = 1` for every desired project, ignoring substitutes.
    #[default]
    ApprovalOnes,
    /// `U_i(p) = I`, the first marginal of `p`'s partition.
    StaticFirstMarginal,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Rule {
    RuleX(UtilityMode),
    SubstituteRuleX,
}

impl Rule {
    pub fn name(&self) -> &'static str {
        match self {
            Rule::RuleX(_) => "rx",
            Rule::SubstituteRuleX => "srx",
        }
    }
}

/// Status of one project at the start of a round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case", tag = "status", content = "q")]
pub enum Candidate {
    Funded,
    /// Costs more than the whole budget; never considered.
    OverBudget,
    Unaffordable,
    Rate(#[serde(with = "rational::serde_text")] Rational),
}

impl Candidate {
    pub fn rate(&self) -> Option<&Rational> {
        match self {
            Candidate::Rate(q) => Some(q),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Round {
    pub project: ProjectIdx,
    pub q: Rational,
    /// Other projects priced at exactly `q` this round, lost the tie-break.
    pub tied: Vec<ProjectIdx>,
    /// `U_i(p)` of the selected project for every voter.
    pub utilities: Vec<Rational>,
    pub payments: Vec<Rational>,
    pub budgets_after: Vec<Rational>,
    /// Price of every project at the start of the round.
    pub candidates: Vec<Candidate>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Some projects remain but none is affordable.
    NoAffordableProject,
    /// Every project is funded or costs more than the budget.
    NoCandidates,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MechanismTrace {
    pub rule: Rule,
    pub initial_budgets: Vec<Rational>,
    pub rounds: Vec<Round>,
    pub bundle: Bundle,
    pub termination: Termination,
}

impl MechanismTrace {
    /// Funded projects in selection order.
    pub fn selection_order(&self) -> Vec<ProjectIdx> {
        self.rounds.iter().map(|r| r.project).collect()
    }

    pub fn final_budgets(&self) -> &[Rational] {
        self.rounds
            .last()
            .map_or(&self.initial_budgets, |r| &r.budgets_after)
    }

    /// Same rounds, bundle and termination, regardless of which rule ran.
    pub fn same_outcome(&self, other: &MechanismTrace) -> bool {
        self.initial_budgets == other.initial_budgets
            && self.rounds == other.rounds
            && self.bundle == other.bundle
            && self.termination == other.termination
    }
}

/// Rule X with static utilities.
pub fn run_rule_x(
    instance: &PBInstance,
    profile: &PreferenceProfile,
    mode: UtilityMode,
) -> Result<MechanismTrace> {
    run(instance, profile, Rule::RuleX(mode))
}

/// Substitute Rule X: marginal utilities recomputed before every round.
pub fn run_srx(instance: &PBInstance, profile: &PreferenceProfile) -> Result<MechanismTrace> {
    run(instance, profile, Rule::SubstituteRuleX)
}

pub fn run(
    instance: &PBInstance,
    profile: &PreferenceProfile,
    rule: Rule,
) -> Result<MechanismTrace> {
    run_with(instance, profile, rule, Detail::Full)
}

/// How much of each round a run records.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Detail {
    /// Exact price of every project in every round.
    #[default]
    Full,
    /// Only the selection. Floating-point estimates decide which projects
    /// are priced exactly; the selection itself is still made on exact
    /// prices, so rounds match `Full` except for empty `candidates`.
    Selections,
}

/// Relative slack between a float estimate and the exact price.
const ESTIMATE_SLACK: f64 = 1e-9;

pub fn run_with(
    instance: &PBInstance,
    profile: &PreferenceProfile,
    rule: Rule,
    detail: Detail,
) -> Result<MechanismTrace> {
    check_compatible(instance, profile)?;
    let mut state = RunState::new(instance, profile, rule);
    let initial_budgets = state.budgets.0.clone();
    let mut rounds = Vec::new();
    let termination = loop {
        let (selection, candidates) = match detail {
            Detail::Full => {
                let candidates = state.price_all();
                (select(&candidates), candidates)
            }
            Detail::Selections => (state.select_estimated(), Vec::new()),
        };
        let (project, q, tied) = match selection {
            Selection::Fund { project, q, tied } => (project, q, tied),
            Selection::Stop(t) => break t,
        };
        let utilities = state.utilities_for(project);
        let payments = payments(&q, &utilities, &state.budgets.0);
        state.fund(project, &payments);
        rounds.push(Round {
            project,
            q,
            tied,
            utilities,
            payments,
            budgets_after: state.budgets.0.clone(),
            candidates,
        });
    };
    Ok(MechanismTrace {
        rule,
        initial_budgets,
        rounds,
        bundle: state.bundle,
        termination,
    })
}

enum Selection {
    Fund {
        project: ProjectIdx,
        q: Rational,
        tied: Vec<ProjectIdx>,
    },
    Stop(Termination),
}

/// Cheapest rate, lowest index first among equals.
fn select(candidates: &[Candidate]) -> Selection {
    let mut best: Option<(ProjectIdx, &Rational)> = None;
    let mut any_open = false;
    for (p, c) in candidates.iter().enumerate() {
        match c {
            Candidate::Rate(q) => {
                any_open = true;
                if best.is_none_or(|(_, bq)| q < bq) {
                    best = Some((p, q));
                }
            }
            Candidate::Unaffordable => any_open = true,
            Candidate::Funded | Candidate::OverBudget => {}
        }
    }
    let Some((project, q)) = best else {
        return Selection::Stop(if any_open {
            Termination::NoAffordableProject
        } else {
            Termination::NoCandidates
        });
    };
    let tied = candidates
        .iter()
        .enumerate()
        .filter(|&(p, c)| p != project && c.rate() == Some(q))
        .map(|(p, _)| p)
        .collect();
    Selection::Fund {
        project,
        q: q.clone(),
        tied,
    }
}

pub(crate) fn check_compatible(instance: &PBInstance, profile: &PreferenceProfile) -> Result<()> {
    if instance.voter_count() != profile.voter_count()
        || instance.project_count() != profile.project_count()
    {
        return Err(Error::invalid(format!(
            "profile ({} voters, {} projects) does not match instance ({} voters, {} projects)",
            profile.voter_count(),
            profile.project_count(),
            instance.voter_count(),
            instance.project_count()
        )));
    }
    Ok(())
}

/// Mutable state of one run. Prices are cached per project and invalidated
/// only for projects desired by a voter who desires the newly funded
/// project: nobody else has a changed budget or marginal utility.
struct RunState<'a> {
    instance: &'a PBInstance,
    profile: &'a PreferenceProfile,
    rule: Rule,
    budgets: BudgetState,
    bundle: Bundle,
    /// Funded projects per voter partition, for marginal lookups.
    funded_in_group: Vec<Vec<usize>>,
    /// Voters desiring each project.
    supporters: Vec<Vec<VoterIdx>>,
    /// Projects desired by each voter.
    desired: Vec<Vec<ProjectIdx>>,
    cache: Vec<Option<Candidate>>,
    /// Float copies of budgets and per-partition marginals for estimates.
    approx_budgets: Vec<f64>,
    approx_marginals: Vec<Vec<f64>>,
    approx_costs: Vec<f64>,
    estimates: Vec<Option<f64>>,
}

impl<'a> RunState<'a> {
    fn new(instance: &'a PBInstance, profile: &'a PreferenceProfile, rule: Rule) -> Self {
        let m = instance.project_count();
        let mut supporters = vec![Vec::new(); m];
        let mut desired = Vec::with_capacity(profile.voter_count());
        for (i, ballot) in profile.ballots().iter().enumerate() {
            let mine: Vec<ProjectIdx> = (0..m).filter(|&p| ballot.desires(p)).collect();
            for &p in &mine {
                supporters[p].push(i);
            }
            desired.push(mine);
        }
        let cache = (0..m)
            .map(|p| (instance.cost(p) > instance.budget()).then_some(Candidate::OverBudget))
            .collect();
        let budgets = BudgetState::equal_shares(instance);
        let approx_marginals = profile
            .ballots()
            .iter()
            .map(|b| {
                b.partitions()
                    .iter()
                    .map(|g| match rule {
                        Rule::RuleX(UtilityMode::ApprovalOnes) => 1.0,
                        _ => rational::to_f64(&g.curve.value_unchecked(&g.intensity, 1)),
                    })
                    .collect()
            })
            .collect();
        RunState {
            instance,
            profile,
            rule,
            approx_budgets: budgets.0.iter().map(rational::to_f64).collect(),
            approx_marginals,
            approx_costs: instance.costs().iter().map(rational::to_f64).collect(),
            estimates: vec![None; m],
            budgets,
            bundle: Bundle::new(),
            funded_in_group: profile
                .ballots()
                .iter()
                .map(|b| vec![0; b.partitions().len()])
                .collect(),
            supporters,
            desired,
            cache,
        }
    }

    fn utility(&self, i: VoterIdx, p: ProjectIdx) -> Rational {
        let ballot = &self.profile.ballots()[i];
        match self.rule {
            Rule::RuleX(UtilityMode::ApprovalOnes) => {
                if ballot.desires(p) {
                    Rational::from_integer(1.into())
                } else {
                    Rational::zero()
                }
            }
            Rule::RuleX(UtilityMode::StaticFirstMarginal) => ballot.first_marginal(p),
            Rule::SubstituteRuleX => match ballot.group_of(p) {
                Some(g) => {
                    let part = &ballot.partitions()[g];
                    part.curve
                        .value_unchecked(&part.intensity, self.funded_in_group[i][g] + 1)
                }
                None => Rational::zero(),
            },
        }
    }

    fn utilities_for(&self, p: ProjectIdx) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.profile.voter_count()];
        for &i in &self.supporters[p] {
            out[i] = self.utility(i, p);
        }
        out
    }

    fn price(&self, p: ProjectIdx) -> Candidate {
        let owned: Vec<(VoterIdx, Rational)> = self.supporters[p]
            .iter()
            .map(|&i| (i, self.utility(i, p)))
            .filter(|(_, u)| u.is_positive())
            .collect();
        let refs: Vec<(VoterIdx, &Rational)> = owned.iter().map(|(i, u)| (*i, u)).collect();
        match rate(self.instance.cost(p), &refs, &self.budgets.0) {
            Some(q) => Candidate::Rate(q),
            None => Candidate::Unaffordable,
        }
    }

    fn price_all(&mut self) -> Vec<Candidate> {
        for p in 0..self.cache.len() {
            if self.cache[p].is_none() {
                self.cache[p] = Some(self.price(p));
            }
        }
        self.cache
            .iter()
            .map(|c| c.clone().expect("priced"))
            .collect()
    }

    fn fund(&mut self, project: ProjectIdx, payments: &[Rational]) {
        self.budgets.charge(payments);
        self.bundle.insert(project);
        self.cache[project] = Some(Candidate::Funded);
        for &i in &self.supporters[project] {
            self.approx_budgets[i] = rational::to_f64(&self.budgets.0[i]);
            let ballot = &self.profile.ballots()[i];
            if let Some(g) = ballot.group_of(project) {
                self.funded_in_group[i][g] += 1;
                if self.rule == Rule::SubstituteRuleX {
                    let part = &ballot.partitions()[g];
                    self.approx_marginals[i][g] = rational::to_f64(
                        &part
                            .curve
                            .value_unchecked(&part.intensity, self.funded_in_group[i][g] + 1),
                    );
                }
            }
            for &p in &self.desired[i] {
                self.estimates[p] = None;
                if !self.bundle.contains(p) && !matches!(self.cache[p], Some(Candidate::OverBudget))
                {
                    self.cache[p] = None;
                }
            }
        }
    }

    /// Float version of the removal loop; `INFINITY` when the supporters
    /// clearly cannot cover the cost.
    fn estimate(&self, p: ProjectIdx) -> f64 {
        let cost = self.approx_costs[p];
        let mut terms: Vec<(f64, f64)> = Vec::with_capacity(self.supporters[p].len());
        for &i in &self.supporters[p] {
            let g = self.profile.ballots()[i]
                .group_of(p)
                .expect("supporter desires p");
            let u = self.approx_marginals[i][g];
            if u > 0.0 {
                terms.push((u, self.approx_budgets[i]));
            }
        }
        let pool: f64 = terms.iter().map(|t| t.1).sum();
        if pool < cost * (1.0 - ESTIMATE_SLACK) {
            return f64::INFINITY;
        }
        let mut utility: f64 = terms.iter().map(|t| t.0).sum();
        let mut leftover = cost;
        let mut capped = vec![false; terms.len()];
        loop {
            if utility <= 0.0 || leftover <= 0.0 {
                return terms.iter().map(|(u, b)| b / u).fold(0.0, f64::max);
            }
            let q = leftover / utility;
            let mut removed = false;
            for (k, &(u, b)) in terms.iter().enumerate() {
                if !capped[k] && q * u > b {
                    utility -= u;
                    leftover -= b;
                    capped[k] = true;
                    removed = true;
                }
            }
            if !removed {
                return q;
            }
        }
    }

    fn exact(&mut self, p: ProjectIdx) -> &Candidate {
        if self.cache[p].is_none() {
            self.cache[p] = Some(self.price(p));
        }
        self.cache[p].as_ref().expect("priced")
    }

    /// Prices projects exactly in order of their estimates until no
    /// remaining estimate can beat or tie the best exact price.
    fn select_estimated(&mut self) -> Selection {
        let mut order = Vec::new();
        let mut any_open = false;
        for p in 0..self.cache.len() {
            if matches!(
                self.cache[p],
                Some(Candidate::Funded | Candidate::OverBudget)
            ) {
                continue;
            }
            any_open = true;
            let est = match self.estimates[p] {
                Some(e) => e,
                None => {
                    let e = self.estimate(p);
                    self.estimates[p] = Some(e);
                    e
                }
            };
            if est.is_finite() {
                order.push((est, p));
            }
        }
        order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
        let mut best: Option<(ProjectIdx, Rational, f64)> = None;
        let mut tied = Vec::new();
        for (est, p) in order {
            if let Some((_, _, bound)) = &best {
                if est > *bound {
                    break;
                }
            }
            let Candidate::Rate(q) = self.exact(p).clone() else {
                continue;
            };
            match &mut best {
                Some((bp, bq, _)) if q == *bq => {
                    if p < *bp {
                        tied.push(*bp);
                        *bp = p;
                    } else {
                        tied.push(p);
                    }
                }
                Some((_, bq, _)) if q > *bq => {}
                _ => {
                    let bound = rational::to_f64(&q) * (1.0 + ESTIMATE_SLACK);
                    best = Some((p, q, bound));
                    tied.clear();
                }
            }
        }
        match best {
            Some((project, q, _)) => {
                tied.sort_unstable();
                Selection::Fund { project, q, tied }
            }
            None => Selection::Stop(if any_open {
                Termination::NoAffordableProject
            } else {
                Termination::NoCandidates
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::rational::{int, ratio};

    fn budgets(values: &[Rational]) -> BudgetState {
        BudgetState::new(values.to_vec()).unwrap()
    }

    #[test]
    fn q_value_two_equal_supporters() {
        let r = q_value(
            &ratio(11, 10),
            &[int(1), int(1)],
            &budgets(&[int(1), int(1)]),
        )
        .unwrap();
        assert_eq!(r.rate(), Some(&ratio(11, 20)));
    }

    #[test]
    fn q_value_poor_supporter_is_infinite() {
        let r = q_value(&int(1), &[int(1)], &budgets(&[ratio(1, 2)])).unwrap();
        assert_eq!(r, QResult::Infinite);
    }

    #[test]
    fn q_value_caps_the_poorer_voter() {
        let r = q_value(
            &int(1),
            &[int(1), ratio(1, 5)],
            &budgets(&[ratio(2, 3), ratio(2, 3)]),
        )
        .unwrap();
        let QResult::Finite { q, payments } = r else {
            panic!("expected finite")
        };
        assert_eq!(q, ratio(5, 3));
        assert_eq!(payments, vec![ratio(2, 3), ratio(1, 3)]);
    }

    #[test]
    fn q_value_zero_utilities_never_pay() {
        let r = q_value(&int(1), &[int(0), int(0)], &budgets(&[int(5), int(5)])).unwrap();
        assert_eq!(r, QResult::Infinite);
        let r = q_value(&int(1), &[int(0), int(2)], &budgets(&[int(5), int(5)])).unwrap();
        let QResult::Finite { q, payments } = r else {
            panic!("expected finite")
        };
        assert_eq!(q, ratio(1, 2));
        assert_eq!(payments, vec![int(0), int(1)]);
    }

    #[test]
    fn q_value_exact_pool_uses_largest_threshold() {
        // pooled budget equals the cost: every supporter ends up paying all
        let r = q_value(
            &int(1),
            &[int(1), int(2)],
            &budgets(&[ratio(1, 4), ratio(3, 4)]),
        )
        .unwrap();
        let QResult::Finite { q, payments } = r else {
            panic!("expected finite")
        };
        assert_eq!(q, ratio(3, 8));
        assert_eq!(payments, vec![ratio(1, 4), ratio(3, 4)]);
    }

    #[test]
    fn q_value_argument_errors() {
        assert!(q_value(&int(0), &[int(1)], &budgets(&[int(1)])).is_err());
        assert!(q_value(&int(-1), &[int(1)], &budgets(&[int(1)])).is_err());
        assert!(q_value(&int(1), &[int(1), int(1)], &budgets(&[int(1)])).is_err());
        assert!(q_value(&int(1), &[int(-1)], &budgets(&[int(1)])).is_err());
        assert!(BudgetState::new(vec![int(-1)]).is_err());
    }

    #[test]
    fn rule_x_two_voters() {
        let (e, p) = fixtures::two_voters();
        let t = run_rule_x(&e, &p, UtilityMode::ApprovalOnes).unwrap();
        let first = &t.rounds[0].candidates;
        assert_eq!(first[0], Candidate::Rate(ratio(11, 20)));
        assert_eq!(first[1], Candidate::Rate(ratio(1, 2)));
        assert_eq!(first[2], Candidate::Rate(ratio(1, 2)));
        assert_eq!(first[3], Candidate::Rate(ratio(1, 3)));
        assert_eq!(first[4], Candidate::Rate(ratio(1, 3)));
        let order: Vec<_> = t.selection_order().iter().map(|&x| e.id(x)).collect();
        // b and c tie at 1/2 in the third round; b comes first in instance order
        assert_eq!(order, ["d", "e", "b"]);
        assert_eq!(t.rounds[2].tied, vec![2]);
        assert_eq!(t.termination, Termination::NoAffordableProject);
    }

    #[test]
    fn rule_x_two_voters_reordered() {
        let (e, p) = fixtures::two_voters_in_order(&["a", "c", "b", "d", "e"]);
        let t = run_rule_x(&e, &p, UtilityMode::ApprovalOnes).unwrap();
        let order: Vec<_> = t.selection_order().iter().map(|&x| e.id(x)).collect();
        assert_eq!(order, ["d", "e", "c"]);
    }

    #[test]
    fn srx_two_voters() {
        let (e, p) = fixtures::two_voters();
        let t = run_srx(&e, &p).unwrap();
        let order: Vec<_> = t.selection_order().iter().map(|&x| e.id(x)).collect();
        assert_eq!(order, ["d", "e", "a"]);
        let third = &t.rounds[2];
        assert_eq!(third.q, ratio(11, 20));
        assert_eq!(third.candidates[1], Candidate::Rate(ratio(5, 3)));
        assert_eq!(third.candidates[2], Candidate::Rate(ratio(5, 3)));
    }

    #[test]
    fn srx_counterexample_funds_a_then_e() {
        let (e, p) = fixtures::three_voter_counterexample();
        let t = run_srx(&e, &p).unwrap();
        assert_eq!(t.rounds[0].q, ratio(1, 3));
        assert_eq!(t.rounds[0].candidates[4], Candidate::Rate(ratio(4, 11)));
        assert_eq!(t.rounds[1].candidates[1], Candidate::Rate(ratio(5, 11)));
        let order: Vec<_> = t.selection_order().iter().map(|&x| e.id(x)).collect();
        assert_eq!(order, ["a", "e"]);
    }

    #[test]
    fn static_first_marginal_counterexample_round_one() {
        let (e, p) = fixtures::three_voter_counterexample();
        let t = run_rule_x(&e, &p, UtilityMode::StaticFirstMarginal).unwrap();
        assert_eq!(t.rounds[0].project, 0);
        assert_eq!(t.rounds[0].q, ratio(1, 3));
    }

    #[test]
    fn single_voter_single_project() {
        let e = PBInstance::new(vec![("p".into(), int(7))], int(7), 1).unwrap();
        let p =
            PreferenceProfile::from_ids(&e, &[vec![vec!["p"]]], crate::MarginalCurve::Pav).unwrap();
        let t = run_rule_x(&e, &p, UtilityMode::ApprovalOnes).unwrap();
        assert_eq!(t.rounds.len(), 1);
        assert_eq!(t.rounds[0].q, int(7));
        assert_eq!(t.termination, Termination::NoCandidates);
        assert_eq!(t.final_budgets(), &[int(0)]);
    }

    #[test]
    fn empty_project_set() {
        let e = PBInstance::new(vec![], int(1), 2).unwrap();
        let p = PreferenceProfile::new(&e, vec![vec![], vec![]]).unwrap();
        let t = run_srx(&e, &p).unwrap();
        assert!(t.bundle.is_empty());
        assert_eq!(t.termination, Termination::NoCandidates);
    }

    #[test]
    fn over_budget_projects_are_skipped() {
        let e =
            PBInstance::new(vec![("x".into(), int(5)), ("y".into(), int(1))], int(2), 1).unwrap();
        let p = PreferenceProfile::from_ids(
            &e,
            &[vec![vec!["x"], vec!["y"]]],
            crate::MarginalCurve::Pav,
        )
        .unwrap();
        let t = run_srx(&e, &p).unwrap();
        assert_eq!(t.rounds[0].candidates[0], Candidate::OverBudget);
        assert_eq!(t.bundle, e.bundle(&["y"]).unwrap());
    }

    #[test]
    fn mismatched_profile_is_rejected() {
        let (e, _) = fixtures::two_voters();
        let (_, other) = fixtures::three_voter_counterexample();
        assert!(run_srx(&e, &other).is_err());
    }
}
