mod common;

use std::collections::HashSet;

use common::{random_feasible_bundle, random_instance, rng, Shape};
use itertools::Itertools;
use proptest::prelude::*;
use srx::fairness::{
    check_ejr, check_strong_bpjr, is_t_cohesive, witness_is_valid, Cohesion, SearchLimits,
};
use srx::rational::int;
use srx::{Bundle, PBInstance, PreferenceProfile, Rational};

/// Cohesion straight from the definition.
fn cohesive(
    e: &PBInstance,
    p: &PreferenceProfile,
    s: &[usize],
    t: &[usize],
    def: Cohesion,
) -> bool {
    let cost: Rational = t.iter().map(|&x| e.cost(x).clone()).sum();
    if e.share() * int(s.len() as i64) < cost {
        return false;
    }
    s.iter().all(|&i| {
        let ballot = &p.ballots()[i];
        let groups: Vec<Option<usize>> = t.iter().map(|&x| ballot.group_of(x)).collect();
        groups.iter().all(Option::is_some)
            && (def == Cohesion::Original || groups.iter().collect::<HashSet<_>>().len() == t.len())
    })
}

fn funded(p: &PreferenceProfile, i: usize, b: &Bundle) -> usize {
    b.iter().filter(|&x| p.ballots()[i].desires(x)).count()
}

/// First violating `T` (by size, then lexicographic) over all pairs `(S, T)`.
fn naive(
    e: &PBInstance,
    p: &PreferenceProfile,
    b: &Bundle,
    def: Cohesion,
    ejr: bool,
) -> Option<Vec<usize>> {
    let n = e.voter_count();
    let m = e.project_count();
    for size in 1..=m {
        for t in (0..m).combinations(size) {
            for s in (0..n).powerset().filter(|s| !s.is_empty()) {
                if !cohesive(e, p, &s, &t, def) {
                    continue;
                }
                let short = if ejr {
                    s.iter().all(|&i| funded(p, i, b) < size)
                } else {
                    b.iter()
                        .filter(|&x| s.iter().any(|&i| p.ballots()[i].desires(x)))
                        .count()
                        < size
                };
                if short {
                    return Some(t);
                }
            }
        }
    }
    None
}

fn shape() -> Shape {
    Shape {
        voters: (1, 4),
        projects: (1, 6),
        ..Shape::default()
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn checkers_agree_with_pair_enumeration(seed in any::<u64>(), substitutes in any::<bool>()) {
        let mut r = rng(seed);
        let (e, p) = random_instance(&mut r, &shape());
        let b = random_feasible_bundle(&mut r, &e);
        let def = if substitutes { Cohesion::WithSubstitutes } else { Cohesion::Original };
        let limits = SearchLimits::default();
        for ejr in [true, false] {
            let report = if ejr {
                check_ejr(&e, &p, &b, def, &limits).unwrap()
            } else {
                check_strong_bpjr(&e, &p, &b, def, &limits).unwrap()
            };
            let expected = naive(&e, &p, &b, def, ejr);
            prop_assert_eq!(report.witness.as_ref().map(|w| w.projects.clone()), expected);
            prop_assert!(witness_is_valid(&e, &p, &b, &report).unwrap());
        }
    }

    #[test]
    fn cohesion_matches_definition(seed in any::<u64>(), substitutes in any::<bool>()) {
        let mut r = rng(seed);
        let (e, p) = random_instance(&mut r, &shape());
        let def = if substitutes { Cohesion::WithSubstitutes } else { Cohesion::Original };
        for t in (0..e.project_count()).powerset().filter(|t| !t.is_empty()) {
            for s in (0..e.voter_count()).powerset().filter(|s| !s.is_empty()) {
                prop_assert_eq!(
                    is_t_cohesive(&e, &p, &s, &t, def).unwrap(),
                    cohesive(&e, &p, &s, &t, def)
                );
            }
        }
    }
}
