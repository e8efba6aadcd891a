mod common;

use common::{naive_run, random_instance, rate_by_breakpoints, rng, Curves, Shape};
use proptest::prelude::*;
use srx::mechanisms::{
    q_value, run, run_with, BudgetState, Candidate, Detail, MechanismTrace, QResult, Rule,
    UtilityMode,
};
use srx::rational::{int, ratio};
use srx::{PBInstance, Rational};

const RULES: [Rule; 3] = [
    Rule::RuleX(UtilityMode::ApprovalOnes),
    Rule::RuleX(UtilityMode::StaticFirstMarginal),
    Rule::SubstituteRuleX,
];

fn small_rational() -> impl Strategy<Value = Rational> {
    (0i64..=12, 1i64..=6).prop_map(|(n, d)| ratio(n, d))
}

fn coverage(q: &Rational, utilities: &[Rational], budgets: &[Rational]) -> Rational {
    utilities
        .iter()
        .zip(budgets)
        .map(|(u, b)| (q * u).min(b.clone()))
        .sum()
}

fn check_rounds(instance: &PBInstance, trace: &MechanismTrace) -> Result<(), TestCaseError> {
    let mut budgets = trace.initial_budgets.clone();
    for round in &trace.rounds {
        let paid: Rational = round.payments.iter().sum();
        prop_assert_eq!(&paid, instance.cost(round.project));
        for (i, pay) in round.payments.iter().enumerate() {
            prop_assert!(*pay >= int(0) && *pay <= budgets[i]);
            budgets[i] -= pay;
        }
        prop_assert_eq!(&budgets, &round.budgets_after);
        for (p, c) in round.candidates.iter().enumerate() {
            if let Candidate::Rate(q) = c {
                prop_assert!(round.q <= *q);
                if *q == round.q && p != round.project {
                    prop_assert!(round.tied.contains(&p) && p > round.project);
                }
            }
        }
    }
    prop_assert!(instance.is_feasible(&trace.bundle).unwrap());
    Ok(())
}

proptest! {
    #[test]
    fn q_value_matches_breakpoint_scan(
        cost in (1i64..=20, 1i64..=4).prop_map(|(n, d)| ratio(n, d)),
        pairs in prop::collection::vec((small_rational(), small_rational()), 1..7),
    ) {
        let (utilities, budgets): (Vec<_>, Vec<_>) = pairs.into_iter().unzip();
        let state = BudgetState::new(budgets.clone()).unwrap();
        let got = q_value(&cost, &utilities, &state).unwrap();
        let expected = rate_by_breakpoints(&cost, &utilities, &budgets);
        prop_assert_eq!(got.rate(), expected.as_ref());
        if let QResult::Finite { q, payments } = got {
            let paid: Rational = payments.iter().sum();
            prop_assert_eq!(&paid, &cost);
            let lower = &q * ratio(999, 1000);
            prop_assert!(coverage(&lower, &utilities, &budgets) < cost);
        }
    }

    #[test]
    fn runs_match_naive_recomputation(seed in any::<u64>()) {
        let (e, p) = random_instance(&mut rng(seed), &Shape::default());
        for rule in RULES {
            let trace = run(&e, &p, rule).unwrap();
            prop_assert!(common::trace_matches_naive(&trace, &naive_run(&e, &p, rule)));
            check_rounds(&e, &trace)?;
        }
    }

    #[test]
    fn outcome_mode_matches_full_trace(seed in any::<u64>()) {
        let shape = Shape { voters: (1, 10), projects: (1, 12), ..Shape::default() };
        let (e, p) = random_instance(&mut rng(seed), &shape);
        for rule in RULES {
            let full = run(&e, &p, rule).unwrap();
            let mut fast = run_with(&e, &p, rule, Detail::Selections).unwrap();
            prop_assert!(fast.rounds.iter().all(|r| r.candidates.is_empty()));
            for (f, r) in fast.rounds.iter_mut().zip(&full.rounds) {
                f.candidates = r.candidates.clone();
            }
            prop_assert_eq!(fast, full);
        }
    }

    #[test]
    fn repeated_runs_agree(seed in any::<u64>()) {
        let (e, p) = random_instance(&mut rng(seed), &Shape::default());
        for rule in RULES {
            prop_assert_eq!(run(&e, &p, rule).unwrap(), run(&e, &p, rule).unwrap());
        }
    }

    #[test]
    fn substitute_rule_reduces_to_rule_x_without_substitutes(seed in any::<u64>()) {
        let shape = Shape { max_partition: 1, ..Shape::default() };
        let (e, p) = random_instance(&mut rng(seed), &shape);
        prop_assert!(p.all_singleton_partitions());
        let srx = run(&e, &p, Rule::SubstituteRuleX).unwrap();
        let rx = run(&e, &p, Rule::RuleX(UtilityMode::StaticFirstMarginal)).unwrap();
        prop_assert!(srx.same_outcome(&rx));
    }

    #[test]
    fn unit_cost_pav_profiles_stay_feasible(seed in any::<u64>()) {
        let shape = Shape { unit_cost: true, curves: Curves::Pav, ..Shape::default() };
        let (e, p) = random_instance(&mut rng(seed), &shape);
        let trace = run(&e, &p, Rule::SubstituteRuleX).unwrap();
        check_rounds(&e, &trace)?;
    }
}
