//! Acceptance suite: one test per criterion, each printing a summary line.
//! Tolerances and domains are pinned in code; exact rules are compared
//! exactly and float rules at the library's relative tolerance.
//!
//! Criterion 4's cc-approval clause is expected to fail: no non-crossing
//! violation for cc-approval exists on the exhaustive m <= 4, n <= 3 domain
//! (the smallest needs six voters; see
//! `cc_approval_non_crossing_violation_needs_six_votes` in the csr crate),
//! so the assertion is left in place and documents the defect.

use std::process::Command;
use std::time::Instant;

use csr::axioms::{
    audit_committee_enlargement, audit_narrow_top, audit_non_crossing, audit_prefix, SearchDomain,
};
use csr::classify::{
    affine_equivalent, classify_all, classify_decomposable, classify_owa_based,
    classify_representation_focused, classify_separable, classify_top_k_counting,
    classify_weakly_separable, Certificate, Verdict,
};
use csr::fixtures::{
    all_permutations, all_rankings, election_from_multiset, impartial_culture,
    random_monotone_table, ranking_multisets, zeta_candidate, zeta_set,
};
use csr::model::{enumerate_committees, Committee, Election};
use csr::scoring::{affine_transform, catalog, parse_rule, Rule, Score, ScoreTable};
use csr::solve::{is_winning, winners_exact, winners_exact_fn, winners_greedy, winners_separable};

fn roster(m: usize) -> Vec<&'static str> {
    ["a", "b", "c", "d", "e", "f", "g", "h"][..m].to_vec()
}

fn table_at(spec: &str, m: usize, k: usize) -> ScoreTable {
    parse_rule(spec, m, k)
        .unwrap()
        .scoring_function(m, k)
        .unwrap()
        .tabulate()
        .unwrap()
}

/// Criterion 1: the separable fast path equals exact enumeration for SNTV,
/// Bloc, and k-Borda over every unit-vote profile (as a multiset) with
/// m <= 4, n <= 3, at every committee size below m. Zero mismatches,
/// under two minutes.
#[test]
fn criterion_01_separable_path_equals_exact_enumeration() {
    let started = Instant::now();
    let mut checked = 0u64;
    for m in 2..=4 {
        let rankings = all_rankings(m);
        let names = roster(m);
        for spec in ["sntv", "bloc", "kborda"] {
            let rule = Rule::parse(spec).unwrap();
            for n in 1..=3 {
                for multiset in ranking_multisets(rankings.len(), n) {
                    let e = election_from_multiset(&names, &rankings, &multiset).unwrap();
                    for k in 1..m {
                        let exact = winners_exact(&e, &rule, k).unwrap();
                        let fast = winners_separable(&e, &rule, k).unwrap();
                        assert_eq!(
                            exact.committees, fast.committees,
                            "{spec} m={m} k={k} on {e}"
                        );
                        assert!(exact.optimum.approx_eq(&fast.optimum));
                        checked += 1;
                    }
                }
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 120, "took {elapsed:?}");
    println!("criterion 01: PASS ({checked} winner-set comparisons in {elapsed:.2?})");
}

/// Criterion 2: affine transforms of every catalog table at (4, 2) leave
/// winner sets unchanged on 500 seeded impartial-culture elections, for 100
/// seeded (a, b) draws per rule. Zero mismatches.
#[test]
fn criterion_02_affine_transforms_preserve_winner_sets() {
    use rand::Rng;
    use rand::SeedableRng;
    let started = Instant::now();
    let elections: Vec<Election> = (0..500)
        .map(|seed| impartial_culture(&roster(4), 6, seed).unwrap())
        .collect();
    let a_values = [
        Score::from_ratio(1, 2),
        Score::from_int(1),
        Score::from_int(2),
        Score::from_int(3),
    ];
    let b_values = [Score::from_int(0), Score::from_int(1), Score::from_int(5)];
    let mut comparisons = 0u64;
    for (rule_idx, rule) in catalog().iter().enumerate() {
        let f = rule.scoring_function(4, 2).unwrap();
        let base: Vec<Vec<Committee>> = elections
            .iter()
            .map(|e| winners_exact_fn(e, &f).unwrap().committees)
            .collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(0xaff1e ^ rule_idx as u64);
        for _ in 0..100 {
            let a = a_values[rng.random_range(0..a_values.len())].clone();
            let b = b_values[rng.random_range(0..b_values.len())].clone();
            let transformed = affine_transform(&f, &a, &b).unwrap();
            for (e, expected) in elections.iter().zip(&base) {
                let ws = winners_exact_fn(e, &transformed).unwrap();
                assert_eq!(&ws.committees, expected, "{rule} a={a} b={b} on {e}");
                comparisons += 1;
            }
        }
    }
    println!(
        "criterion 02: PASS ({comparisons} transformed winner sets in {:.2?})",
        started.elapsed()
    );
}

/// Criterion 3: the zeta winner-set oracles hold exactly for every
/// non-degenerate catalog rule at m <= 5: zeta(c) elects the committees
/// containing c, and zeta(S) elects the committees inside S (|S| >= k) or
/// containing S (|S| < k). Under five minutes.
#[test]
fn criterion_03_zeta_oracles_across_the_catalog() {
    let started = Instant::now();
    let mut checked = 0u64;
    for m in 2..=5 {
        let names = roster(m);
        let subsets: Vec<Vec<&str>> = (1..(1usize << m))
            .filter(|mask| mask.count_ones() <= 4)
            .map(|mask| {
                (0..m)
                    .filter(|i| mask & (1 << i) != 0)
                    .map(|i| names[i])
                    .collect()
            })
            .collect();
        for rule in catalog() {
            for k in 1..m.min(4) {
                if rule.is_degenerate(m, k).unwrap() {
                    continue;
                }
                let committees = enumerate_committees(m, k).unwrap();
                for center in 0..m {
                    let e = zeta_candidate(&names, names[center]).unwrap();
                    let ws = winners_exact(&e, &rule, k).unwrap();
                    let expected: Vec<Committee> = committees
                        .iter()
                        .filter(|c| c.contains(center))
                        .cloned()
                        .collect();
                    assert_eq!(
                        ws.committees, expected,
                        "{rule} zeta({}) m={m} k={k}",
                        names[center]
                    );
                    checked += 1;
                }
                for set in &subsets {
                    let e = zeta_set(&names, set).unwrap();
                    let ws = winners_exact(&e, &rule, k).unwrap();
                    let in_set = |c: usize| set.contains(&names[c]);
                    let expected: Vec<Committee> = committees
                        .iter()
                        .filter(|committee| {
                            if set.len() >= k {
                                committee.members().iter().all(|&c| in_set(c))
                            } else {
                                (0..m).filter(|&c| in_set(c)).all(|c| committee.contains(c))
                            }
                        })
                        .cloned()
                        .collect();
                    assert_eq!(ws.committees, expected, "{rule} zeta({set:?}) m={m} k={k}");
                    checked += 1;
                }
            }
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 300, "took {elapsed:?}");
    println!("criterion 03: PASS ({checked} oracle winner sets in {elapsed:.2?})");
}

/// Criterion 4: non-crossing monotonicity audits on the exhaustive m <= 4,
/// n <= 3 domain: verified for SNTV, Bloc, k-Borda; counterexamples for
/// beta-CC, alpha_k-CC, pav:2, qhb:1; and every verdict agrees with the
/// weak-separability classifier on the rule's (4, 2) table.
///
/// KNOWN DEFECT, asserted anyway: cc-approval has provably no non-crossing
/// violation on this domain (the smallest needs six voters — the counting
/// argument and the explicit six-vote election live in the csr crate's
/// theorems tests), so its two clauses below fail.
#[test]
fn criterion_04_non_crossing_audits_replicate_weak_separability() {
    let domain = SearchDomain::exhaustive(4, 3);
    let mut failures: Vec<String> = Vec::new();
    for spec in ["sntv", "bloc", "kborda"] {
        let rule = Rule::parse(spec).unwrap();
        let outcome = audit_non_crossing(&rule, &domain).unwrap();
        if !outcome.is_verified() {
            failures.push(format!(
                "{spec}: expected verified, got {}",
                outcome.verdict_label()
            ));
        }
    }
    for spec in ["cc-borda", "cc-approval", "pav:2", "qhb:1"] {
        let rule = Rule::parse(spec).unwrap();
        let outcome = audit_non_crossing(&rule, &domain).unwrap();
        match outcome.counterexample() {
            Some(ce) => assert!(ce.replay().unwrap(), "{spec}: counterexample must replay"),
            None => failures.push(format!(
                "{spec}: expected a counterexample, got {}",
                outcome.verdict_label()
            )),
        }
    }
    for spec in [
        "sntv",
        "bloc",
        "kborda",
        "cc-borda",
        "cc-approval",
        "pav:2",
        "qhb:1",
    ] {
        let rule = Rule::parse(spec).unwrap();
        let audit_verified = audit_non_crossing(&rule, &domain).unwrap().is_verified();
        let member = classify_weakly_separable(&table_at(spec, 4, 2)).is_member();
        if audit_verified != member {
            failures.push(format!(
                "{spec}: audit verified={audit_verified} but weakly-separable member={member}"
            ));
        }
    }
    assert!(
        failures.is_empty(),
        "criterion 04: FAIL\n  {}\n  (cc-approval is the documented defect: its smallest \
         non-crossing violation needs six voters, which the n <= 3 domain cannot express; \
         see cc_approval_non_crossing_violation_needs_six_votes)",
        failures.join("\n  ")
    );
    println!("criterion 04: PASS");
}

/// Criterion 5: top-member monotonicity and narrow-top consistency verify
/// for beta-CC, alpha_k-CC, and SNTV; k-Borda and Bloc produce narrow-top
/// counterexamples; and across the catalog the pair of audits agrees with
/// the representation-focused classifier at (4, 2).
#[test]
fn criterion_05_top_member_and_narrow_top_replicate_representation_focus() {
    let domain = SearchDomain::exhaustive(4, 3);
    for spec in ["cc-borda", "cc-approval", "sntv"] {
        let rule = Rule::parse(spec).unwrap();
        assert!(
            audit_prefix(&rule, 1, &domain).unwrap().is_verified(),
            "{spec}: top-member must verify"
        );
        assert!(
            audit_narrow_top(&rule, &domain).unwrap().is_verified(),
            "{spec}: narrow-top must verify"
        );
    }
    for spec in ["kborda", "bloc"] {
        let rule = Rule::parse(spec).unwrap();
        let outcome = audit_narrow_top(&rule, &domain).unwrap();
        let ce = outcome
            .counterexample()
            .unwrap_or_else(|| panic!("{spec}: narrow-top must fail"));
        assert!(ce.replay().unwrap());
    }
    for rule in catalog() {
        let both = audit_prefix(&rule, 1, &domain).unwrap().is_verified()
            && audit_narrow_top(&rule, &domain).unwrap().is_verified();
        let member =
            classify_representation_focused(&table_at(&rule.to_string(), 4, 2)).is_member();
        assert_eq!(both, member, "{rule}: audits={both} classifier={member}");
    }
    println!("criterion 05: PASS");
}

/// Criterion 6: committee-enlargement monotonicity verifies for SNTV and
/// k-Borda on the exhaustive m <= 4, n <= 3 domain (consecutive size
/// pairs); Bloc produces a counterexample; the three verdicts agree with
/// the separability classifier at m = 4 across k in {1, 2, 3}.
#[test]
fn criterion_06_enlargement_replicates_separability() {
    let domain = SearchDomain::exhaustive(4, 3);
    for (spec, expect_verified) in [("sntv", true), ("kborda", true), ("bloc", false)] {
        let rule = Rule::parse(spec).unwrap();
        let outcome = audit_committee_enlargement(&rule, &domain).unwrap();
        assert_eq!(
            outcome.is_verified(),
            expect_verified,
            "{spec}: {}",
            outcome.verdict_label()
        );
        if let Some(ce) = outcome.counterexample() {
            assert!(ce.replay().unwrap());
        }
        let member = classify_separable(&rule, 4, &[1, 2, 3])
            .unwrap()
            .is_member();
        assert_eq!(member, expect_verified, "{spec}: separability classifier");
    }
    println!("criterion 06: PASS");
}

/// Criterion 7: the 2-prefix counterexample for alpha_k-CC on the
/// 24-permutation election (shift the top two members of {b,c} in the vote
/// a > b > c > d), and the implication "verified for every prefix depth
/// implies decomposable" across the catalog.
#[test]
fn criterion_07_prefix_counterexample_and_decomposability() {
    let e = all_permutations(&["a", "b", "c", "d"]).unwrap();
    let rule = Rule::parse("cc-approval").unwrap();
    let w = e.committee_from_tokens(&["b", "c"]).unwrap();
    let (before, _) = is_winning(&e, &rule, 2, &w).unwrap();
    assert!(before, "{{b,c}} ties as a winner by symmetry");
    let vote_idx = e
        .votes()
        .iter()
        .position(|v| v.ranking() == [0, 1, 2, 3])
        .unwrap();
    let b = e.candidate_index("b").unwrap();
    let c = e.candidate_index("c").unwrap();
    let mutated = e.shift_forward_group(vote_idx, &[b, c]).unwrap();
    assert_eq!(
        mutated.votes()[vote_idx].ranking(),
        &[1, 2, 0, 3],
        "the shifted vote reads b > c > a > d"
    );
    let (after, margin) = is_winning(&mutated, &rule, 2, &w).unwrap();
    assert!(!after, "{{b,c}} must stop winning (margin {margin})");

    let domain = SearchDomain::exhaustive(4, 3);
    for rule in catalog() {
        let all_verified = (1..=3).all(|t| audit_prefix(&rule, t, &domain).unwrap().is_verified());
        if all_verified {
            let verdict = classify_decomposable(&table_at(&rule.to_string(), 4, 2));
            assert!(
                verdict.is_member(),
                "{rule}: verified for every prefix depth but classifies {}",
                verdict.label()
            );
        }
    }
    println!("criterion 07: PASS");
}

/// Criterion 8: the two-threshold sum alpha_4(i1) + alpha_2(i2) at (8, 2)
/// is decomposable but not OWA-based (with a 2x2-minor certificate), and
/// the max-threshold max(alpha_2(i1), alpha_5(i2)) at (9, 2) is not even
/// decomposable.
#[test]
fn criterion_08_threshold_tables_split_the_hierarchy() {
    let two_sum = table_at("multithreshold:1,1;4,2", 8, 2);
    assert!(classify_decomposable(&two_sum).is_member());
    match classify_owa_based(&two_sum) {
        Verdict::NonMember(Certificate::NonzeroMinor { entries, .. }) => {
            let minor = entries[0]
                .mul(&entries[3])
                .sub(&entries[1].mul(&entries[2]));
            assert!(!minor.approx_eq(&Score::zero()));
        }
        other => panic!("expected a 2x2-minor certificate, got {other:?}"),
    }

    let max_threshold = table_at("maxthreshold:2,5", 9, 2);
    match classify_decomposable(&max_threshold) {
        Verdict::NonMember(Certificate::InconsistentDifference { .. }) => {}
        other => panic!("expected inconsistent differences, got {other:?}"),
    }
    println!("criterion 08: PASS");
}

/// Criterion 9: over 10^4 seeded random monotone tables at (4, 2), every
/// non-degenerate table in a pairwise class intersection is affinely
/// equivalent to the unique rule living there: SNTV (weakly separable and
/// representation-focused), Bloc (weakly separable and top-k-counting),
/// alpha_k-CC (representation-focused and top-k-counting). Zero exceptions.
#[test]
fn criterion_09_pairwise_intersections_pin_the_three_rules() {
    let sntv = table_at("sntv", 4, 2);
    let bloc = table_at("bloc", 4, 2);
    let cc_approval = table_at("cc-approval", 4, 2);
    let mut hits = [0u64; 3];
    for seed in 0..10_000u64 {
        let table = random_monotone_table(4, 2, seed).unwrap();
        let report = classify_all(&table);
        if report.degenerate {
            continue;
        }
        let ws = report.weakly_separable.is_member();
        let rep = report.representation_focused.is_member();
        let topk = report.top_k_counting.is_member();
        if ws && rep {
            hits[0] += 1;
            assert!(
                affine_equivalent(&table, &sntv).unwrap().is_some(),
                "seed {seed}: weakly separable + representation-focused but not SNTV:\n{table}"
            );
        }
        if ws && topk {
            hits[1] += 1;
            assert!(
                affine_equivalent(&table, &bloc).unwrap().is_some(),
                "seed {seed}: weakly separable + top-k-counting but not Bloc:\n{table}"
            );
        }
        if rep && topk {
            hits[2] += 1;
            assert!(
                affine_equivalent(&table, &cc_approval).unwrap().is_some(),
                "seed {seed}: representation-focused + top-k-counting but not alpha_k-CC:\n{table}"
            );
        }
    }
    assert!(
        hits.iter().all(|&h| h > 0),
        "the generator must actually reach each intersection, got {hits:?}"
    );
    println!(
        "criterion 09: PASS (intersection hits: sntv={} bloc={} cc-approval={})",
        hits[0], hits[1], hits[2]
    );
}

/// Criterion 10: over 1000 seeded impartial-culture elections (m=6, n=8,
/// k=3), greedy achieves at least (1 - 1/e) of the exact optimum for
/// beta-CC, pav:2, and k-Borda — and exactly the optimum for k-Borda.
/// Under three minutes.
#[test]
fn criterion_10_greedy_meets_the_approximation_guarantee() {
    let started = Instant::now();
    let bound = 1.0 - 1.0 / std::f64::consts::E;
    let mut min_ratio = f64::INFINITY;
    for spec in ["cc-borda", "pav:2", "kborda"] {
        let rule = Rule::parse(spec).unwrap();
        for seed in 0..1000u64 {
            let e = impartial_culture(&roster(6), 8, seed).unwrap();
            let greedy = winners_greedy(&e, &rule, 3, false).unwrap();
            assert!(greedy.guaranteed, "{spec} is greedy-eligible");
            let exact = winners_exact(&e, &rule, 3).unwrap();
            if spec == "kborda" {
                assert!(
                    greedy.score.approx_eq(&exact.optimum),
                    "{spec} seed {seed}: greedy is exact for modular objectives"
                );
            }
            let ratio = greedy.score.to_f64() / exact.optimum.to_f64();
            min_ratio = min_ratio.min(ratio);
            assert!(
                ratio >= bound,
                "{spec} seed {seed}: ratio {ratio} below {bound}"
            );
        }
    }
    let elapsed = started.elapsed();
    assert!(elapsed.as_secs() < 180, "took {elapsed:?}");
    println!("criterion 10: PASS (min observed ratio {min_ratio:.4} >= {bound:.4}, {elapsed:.2?})");
}

/// Criterion 11: twenty sampled CLI invocations are byte-deterministic:
/// repeated runs (and --threads 1 vs the default pool) produce identical
/// stdout, stderr, and exit codes.
#[test]
fn criterion_11_cli_invocations_are_byte_deterministic() {
    let dir = std::env::temp_dir().join(format!("csr-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let tiny = dir.join("tiny.elec");
    std::fs::write(&tiny, "candidates: a b c\n2: a > b > c\n1: b > a > c\n").unwrap();
    let perms = dir.join("perms.elec");
    std::fs::write(
        &perms,
        all_permutations(&["a", "b", "c", "d"]).unwrap().to_string(),
    )
    .unwrap();
    let bloc_table = dir.join("bloc.fmk");
    std::fs::write(&bloc_table, table_at("bloc", 4, 2).to_string()).unwrap();
    let tiny = tiny.to_str().unwrap();
    let perms = perms.to_str().unwrap();
    let bloc_table = bloc_table.to_str().unwrap();

    let commands: Vec<Vec<&str>> = vec![
        vec!["winners", "--rule", "sntv", "-k", "1", "--election", tiny],
        vec!["winners", "--rule", "bloc", "-k", "2", "--election", tiny],
        vec![
            "winners",
            "--rule",
            "kborda",
            "-k",
            "2",
            "--election",
            tiny,
            "--method",
            "separable",
        ],
        vec![
            "winners",
            "--rule",
            "bloc",
            "-k",
            "2",
            "--election",
            perms,
            "--count-only",
        ],
        vec![
            "winners",
            "--rule",
            "pav:2",
            "-k",
            "2",
            "--election",
            tiny,
            "--method",
            "greedy",
            "--compare-exact",
        ],
        vec![
            "winners",
            "--rule",
            "lpborda:2",
            "-k",
            "2",
            "--election",
            perms,
        ],
        vec![
            "score",
            "--rule",
            "kborda",
            "-k",
            "2",
            "--election",
            tiny,
            "--committee",
            "a,b",
        ],
        vec![
            "score",
            "--rule",
            "pav:2",
            "-k",
            "2",
            "--election",
            tiny,
            "--committee",
            "a,c",
        ],
        vec![
            "score",
            "--rule",
            "lpborda:2",
            "-k",
            "2",
            "--election",
            tiny,
            "--committee",
            "b,c",
        ],
        vec![
            "score",
            "--rule",
            "qhb:1",
            "-k",
            "2",
            "--election",
            perms,
            "--committee",
            "a,d",
        ],
        vec!["classify", "--table", bloc_table],
        vec!["classify", "--table", bloc_table, "--class", "owa"],
        vec![
            "audit",
            "--axiom",
            "non-crossing",
            "--rule",
            "bloc",
            "--max-m",
            "4",
            "--max-n",
            "3",
        ],
        vec![
            "audit",
            "--axiom",
            "non-crossing",
            "--rule",
            "cc-borda",
            "--max-m",
            "4",
            "--max-n",
            "3",
        ],
        vec![
            "audit",
            "--axiom",
            "enlargement",
            "--rule",
            "bloc",
            "--max-m",
            "4",
            "--max-n",
            "3",
        ],
        vec![
            "audit",
            "--axiom",
            "narrow-top",
            "--rule",
            "kborda",
            "--max-m",
            "3",
            "--max-n",
            "3",
        ],
        vec![
            "audit",
            "--axiom",
            "candidate",
            "--rule",
            "pav:2",
            "--max-m",
            "3",
            "--max-n",
            "2",
        ],
        vec![
            "audit",
            "--axiom",
            "non-crossing",
            "--rule",
            "cc-borda",
            "--max-m",
            "4",
            "--max-n",
            "3",
            "--mode",
            "random",
            "--samples",
            "300",
            "--seed",
            "11",
        ],
        vec![
            "gen",
            "ic",
            "--candidates",
            "a,b,c,d,e",
            "-n",
            "6",
            "--seed",
            "13",
        ],
        vec!["gen", "table", "--rule", "pav:2", "-m", "5", "-k", "2"],
    ];
    assert_eq!(commands.len(), 20);

    let run = |args: &[&str], threads: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_csr"));
        if let Some(t) = threads {
            cmd.arg("--threads").arg(t);
        }
        let out = cmd.args(args).output().expect("binary runs");
        (out.status.code(), out.stdout, out.stderr)
    };

    for args in &commands {
        let first = run(args, None);
        let second = run(args, None);
        let serial = run(args, Some("1"));
        assert_eq!(first, second, "repeat run differs: {args:?}");
        assert_eq!(first, serial, "--threads 1 differs: {args:?}");
    }
    println!("criterion 11: PASS (20 commands, repeated and serial runs identical)");
}
