//! Winner-set oracles for the ζ constructions: their winners are known in
//! closed form, so every rule in the catalog can be checked against them
//! exactly.

use csr::fixtures::{all_permutations, two_winner_election, zeta_candidate, zeta_set};
use csr::model::enumerate_committees;
use csr::scoring::{catalog, score_of};
use csr::solve::{is_winning, winners_exact};

fn roster_strings(m: usize) -> Vec<String> {
    (0..m)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

/// ζ(c): the winners are exactly the committees containing c, for every
/// non-degenerate rule.
#[test]
fn zeta_candidate_oracle() {
    for m in 2..=5 {
        let roster = roster_strings(m);
        let roster_refs: Vec<&str> = roster.iter().map(|s| s.as_str()).collect();
        for rule in catalog() {
            for k in 1..m {
                if rule.is_degenerate(m, k).unwrap() {
                    continue;
                }
                for center in 0..m {
                    let e = zeta_candidate(&roster_refs, &roster[center]).unwrap();
                    let ws = winners_exact(&e, &rule, k).unwrap();
                    let expected: Vec<_> = enumerate_committees(m, k)
                        .unwrap()
                        .into_iter()
                        .filter(|c| c.contains(center))
                        .collect();
                    assert_eq!(
                        ws.committees, expected,
                        "{rule} at (m={m}, k={k}), center {}",
                        roster[center]
                    );
                }
            }
        }
    }
}

/// ζ(S): committees inside S win when |S| >= k; committees containing S
/// win when |S| < k.
#[test]
fn zeta_set_oracle() {
    let m = 4;
    let roster = roster_strings(m);
    let roster_refs: Vec<&str> = roster.iter().map(|s| s.as_str()).collect();
    let subsets: Vec<Vec<&str>> = (1..(1 << m))
        .map(|mask: usize| {
            (0..m)
                .filter(|i| mask & (1 << i) != 0)
                .map(|i| roster_refs[i])
                .collect()
        })
        .collect();
    for rule in catalog() {
        for k in 1..m {
            if rule.is_degenerate(m, k).unwrap() {
                continue;
            }
            for set in &subsets {
                let e = zeta_set(&roster_refs, set).unwrap();
                let ws = winners_exact(&e, &rule, k).unwrap();
                let in_set = |c: usize| set.contains(&roster_refs[c]);
                let expected: Vec<_> = enumerate_committees(m, k)
                    .unwrap()
                    .into_iter()
                    .filter(|committee| {
                        if set.len() >= k {
                            committee.members().iter().all(|&c| in_set(c))
                        } else {
                            (0..m).filter(|&c| in_set(c)).all(|c| committee.contains(c))
                        }
                    })
                    .collect();
                assert_eq!(ws.committees, expected, "{rule} k={k} S={set:?}");
            }
        }
    }
}

/// In ζ(W1 ∪ W2), the two candidates outside the shared part get the same
/// single-winner score under every nontrivial rule in the catalog.
#[test]
fn zeta_union_balances_the_symmetric_difference() {
    for m in 3..=5 {
        let roster = roster_strings(m);
        let roster_refs: Vec<&str> = roster.iter().map(|s| s.as_str()).collect();
        // W1 = {c0, ..., c_{k-1}}, W2 swaps the last member for the next
        // candidate; the union is the first k+1 candidates.
        for k in 1..m - 1 {
            let union: Vec<&str> = roster_refs[..k + 1].to_vec();
            let e = zeta_set(&roster_refs, &union).unwrap();
            let c1 = k - 1; // in W1 only
            let c2 = k; // in W2 only
            for rule in catalog() {
                let f = rule.scoring_function(m, 1).unwrap();
                if f.is_degenerate().unwrap() {
                    continue;
                }
                let score1 =
                    score_of(&e, &f, &csr::model::Committee::new(vec![c1]).unwrap()).unwrap();
                let score2 =
                    score_of(&e, &f, &csr::model::Committee::new(vec![c2]).unwrap()).unwrap();
                assert!(
                    score1.approx_eq(&score2),
                    "{rule} m={m} k={k}: {score1} vs {score2}"
                );
            }
        }
    }
}

/// The two-winner construction pins {W1, W2} as the only winners for every
/// rule that is non-degenerate at (m, k).
#[test]
fn two_winner_oracle() {
    let roster = ["a", "b", "c", "d", "e"];
    for rule in catalog() {
        for (w1, w2, k) in [
            (vec!["a"], vec!["b"], 1),
            (vec!["a", "b"], vec!["a", "c"], 2),
            (vec!["a", "b", "c"], vec!["a", "b", "d"], 3),
        ] {
            if rule.is_degenerate(roster.len(), k).unwrap() {
                continue;
            }
            let e = two_winner_election(&roster, &w1, &w2).unwrap();
            let ws = winners_exact(&e, &rule, k).unwrap();
            let expected: Vec<_> = [&w1, &w2]
                .iter()
                .map(|w| e.committee_from_tokens(w).unwrap())
                .collect();
            assert_eq!(ws.committees, expected, "{rule} k={k}");
        }
    }
}

/// Two disjoint committees tied under Bloc are never the only winners:
/// every committee inside their union ties too.
#[test]
fn disjoint_bloc_ties_spread_over_the_union() {
    let e = all_permutations(&["a", "b", "c", "d"]).unwrap();
    let rule = csr::scoring::Rule::parse("bloc").unwrap();
    let w1 = e.committee_from_tokens(&["a", "b"]).unwrap();
    let w2 = e.committee_from_tokens(&["c", "d"]).unwrap();
    let (win1, _) = is_winning(&e, &rule, 2, &w1).unwrap();
    let (win2, _) = is_winning(&e, &rule, 2, &w2).unwrap();
    assert!(win1 && win2);
    for mixed in enumerate_committees(4, 2).unwrap() {
        let (winning, margin) = is_winning(&e, &rule, 2, &mixed).unwrap();
        assert!(winning, "{mixed:?} margin {margin}");
    }
}
