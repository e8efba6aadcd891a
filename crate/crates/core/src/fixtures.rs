//! Small hand-checkable instances used by tests, docs and the CLI demos.

use crate::curve::MarginalCurve;
use crate::model::PBInstance;
use crate::profile::PreferenceProfile;
use crate::rational::{int, ratio, Rational};

fn instance(projects: &[(&str, Rational)], budget: Rational, voters: usize) -> PBInstance {
    let projects = projects
        .iter()
        .map(|(id, c)| (id.to_string(), c.clone()))
        .collect();
    PBInstance::new(projects, budget, voters).expect("fixture instance is valid")
}

/// Two voters, five projects, budget 2, minimal-substitutes utilities.
///
/// Voter 1 partitions its projects as `(a) (b) (c d)`, voter 2 as
/// `(a) (b e) (c)`. Costs: a = 1.1, b = c = 1, d = e = 1/3.
pub fn two_voters() -> (PBInstance, PreferenceProfile) {
    two_voters_in_order(&["a", "b", "c", "d", "e"])
}

/// [`two_voters`] with the projects listed in `order`, which changes only the
/// tie-breaking order.
pub fn two_voters_in_order(order: &[&str]) -> (PBInstance, PreferenceProfile) {
    let cost = |id: &str| match id {
        "a" => ratio(11, 10),
        "b" | "c" => int(1),
        "d" | "e" => ratio(1, 3),
        other => panic!("unknown fixture project {other}"),
    };
    let projects: Vec<_> = order.iter().map(|&id| (id, cost(id))).collect();
    let e = instance(&projects, int(2), 2);
    let voters = vec![
        vec![vec!["a"], vec!["b"], vec!["c", "d"]],
        vec![vec!["a"], vec!["b", "e"], vec!["c"]],
    ];
    let curve = MarginalCurve::minimal_substitutes(5).unwrap();
    let p = PreferenceProfile::from_ids(&e, &voters, curve).expect("fixture profile is valid");
    (e, p)
}

/// Three voters, five projects, budget 3, where Substitute Rule X funds
/// `{a, e}` although the whole electorate could afford the pairwise
/// non-substitutable `{b, c, d}`.
pub fn three_voter_counterexample() -> (PBInstance, PreferenceProfile) {
    let e = instance(
        &[
            ("a", int(1)),
            ("b", int(1)),
            ("c", int(1)),
            ("d", int(1)),
            ("e", ratio(12, 11)),
        ],
        int(3),
        3,
    );
    let voters = vec![
        vec![vec!["b"], vec!["c"], vec!["a", "d"], vec!["e"]],
        vec![vec!["b"], vec!["a", "c"], vec!["d"], vec!["e"]],
        vec![vec!["a", "b"], vec!["c"], vec!["d"], vec!["e"]],
    ];
    let curve = MarginalCurve::minimal_substitutes(5).unwrap();
    let p = PreferenceProfile::from_ids(&e, &voters, curve).expect("fixture profile is valid");
    (e, p)
}
