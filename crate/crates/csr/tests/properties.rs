//! Property-based invariants over randomly generated elections and tables.

use proptest::prelude::*;

use csr::fixtures::{impartial_culture, random_monotone_table, scale};
use csr::model::{enumerate_committees, Election};
use csr::scoring::{affine_transform, catalog, Score, ScoreTable};
use csr::solve::{winners_exact, winners_exact_fn, winners_separable};

fn roster(m: usize) -> Vec<&'static str> {
    ["a", "b", "c", "d", "e", "f"][..m].to_vec()
}

fn arb_election() -> impl Strategy<Value = Election> {
    (2usize..=5, 1usize..=5, any::<u64>())
        .prop_map(|(m, n, seed)| impartial_culture(&roster(m), n, seed).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn winner_sets_attain_the_optimum(e in arb_election(), rule_idx in 0usize..12, k_seed in any::<usize>()) {
        let rules = catalog();
        let rule = &rules[rule_idx % rules.len()];
        let m = e.num_candidates();
        let k = 1 + k_seed % (m - 1);
        let ws = winners_exact(&e, rule, k).unwrap();
        prop_assert!(!ws.committees.is_empty());
        for committee in enumerate_committees(m, k).unwrap() {
            let f = rule.scoring_function(m, k).unwrap();
            let score = csr::scoring::score_of(&e, &f, &committee).unwrap();
            // No committee beats the optimum, and winners attain it.
            prop_assert!(ws.optimum.approx_ge(&score));
            if ws.contains(&committee) {
                prop_assert!(score.approx_eq(&ws.optimum));
            }
        }
    }

    #[test]
    fn separable_path_matches_exact(e in arb_election(), which in 0usize..3, k_seed in any::<usize>()) {
        let spec = ["sntv", "bloc", "kborda"][which];
        let rule = csr::scoring::Rule::parse(spec).unwrap();
        let m = e.num_candidates();
        let k = 1 + k_seed % (m - 1);
        let exact = winners_exact(&e, &rule, k).unwrap();
        let fast = winners_separable(&e, &rule, k).unwrap();
        prop_assert_eq!(&exact.committees, &fast.committees);
        prop_assert!(exact.optimum.approx_eq(&fast.optimum));
    }

    #[test]
    fn affine_transforms_preserve_winners(
        e in arb_election(),
        rule_idx in 0usize..12,
        k_seed in any::<usize>(),
        a_idx in 0usize..4,
        b_idx in 0usize..3,
    ) {
        let rules = catalog();
        let rule = &rules[rule_idx % rules.len()];
        let m = e.num_candidates();
        let k = 1 + k_seed % (m - 1);
        let a = [Score::from_ratio(1, 2), Score::from_int(1), Score::from_int(2), Score::from_int(3)][a_idx].clone();
        let b = [Score::from_int(0), Score::from_int(1), Score::from_int(5)][b_idx].clone();
        let f = rule.scoring_function(m, k).unwrap();
        let transformed = affine_transform(&f, &a, &b).unwrap();
        let base = winners_exact_fn(&e, &f).unwrap();
        let shifted = winners_exact_fn(&e, &transformed).unwrap();
        prop_assert_eq!(&base.committees, &shifted.committees);
    }

    #[test]
    fn scaling_preserves_winners(e in arb_election(), rule_idx in 0usize..12, k_seed in any::<usize>(), lambda in 1u64..=3) {
        let rules = catalog();
        let rule = &rules[rule_idx % rules.len()];
        let m = e.num_candidates();
        let k = 1 + k_seed % (m - 1);
        let scaled = scale(&e, lambda).unwrap();
        let base = winners_exact(&e, rule, k).unwrap();
        let after = winners_exact(&scaled, rule, k).unwrap();
        prop_assert_eq!(&base.committees, &after.committees);
    }

    #[test]
    fn elections_round_trip_through_the_text_format(e in arb_election()) {
        let parsed = Election::parse(&e.to_string()).unwrap();
        prop_assert_eq!(e, parsed);
    }

    #[test]
    fn committee_positions_are_valid(e in arb_election(), k_seed in any::<usize>(), vote_idx in any::<usize>()) {
        let m = e.num_candidates();
        let k = 1 + k_seed % m;
        let vote = &e.votes()[vote_idx % e.votes().len()];
        for committee in enumerate_committees(m, k).unwrap() {
            let cp = vote.committee_position(&committee).unwrap();
            prop_assert_eq!(cp.k(), k);
            prop_assert!(cp.positions().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(*cp.positions().last().unwrap() <= m);
            prop_assert!(cp.positions()[0] >= 1);
        }
    }

    #[test]
    fn shifts_preserve_weight_and_roster(e in arb_election(), vote_idx in any::<usize>(), cand in any::<usize>()) {
        let vote_idx = vote_idx % e.votes().len();
        let candidate = cand % e.num_candidates();
        match e.shift_forward(vote_idx, candidate) {
            Ok(shifted) => {
                prop_assert_eq!(shifted.total_weight(), e.total_weight());
                prop_assert_eq!(shifted.candidates(), e.candidates());
            }
            Err(csr::Error::InvalidShift(_)) => {
                // Only the top-ranked candidate refuses to shift.
                prop_assert_eq!(e.votes()[vote_idx].position_of(candidate).unwrap(), 1);
            }
            Err(other) => return Err(TestCaseError::fail(format!("unexpected error {other}"))),
        }
    }

    #[test]
    fn random_tables_round_trip_through_the_text_format(m in 3usize..=5, k in 2usize..=3, seed in any::<u64>()) {
        prop_assume!(k < m);
        let table = random_monotone_table(m, k, seed).unwrap();
        let parsed = ScoreTable::parse(&table.to_string()).unwrap();
        prop_assert_eq!(table, parsed);
    }

    #[test]
    fn random_tables_satisfy_dominance(m in 3usize..=5, k in 2usize..=3, seed in any::<u64>()) {
        prop_assume!(k < m);
        let table = random_monotone_table(m, k, seed).unwrap();
        prop_assert!(table.violations().is_empty());
    }
}
