//! Winner determination: exact enumeration over all committees, the fast
//! path for weakly separable rules, and a greedy approximation with a
//! (1 - 1/e) guarantee for rules whose ordered weights are nonincreasing.
//!
//! Exact enumeration is the ground-truth oracle; it is feasible up to
//! roughly C(20, 5) committees times a few hundred votes, which covers all
//! the audits in this crate. Committee enumeration order and greedy
//! tie-breaking are lexicographic, so results are reproducible run to run.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::model::{enumerate_committees, enumerate_positions, Committee, Election};
use crate::scoring::{score_of, Rule, Score, ScoringFunction, SingleWinnerScoring, EPSILON};
use crate::{Error, Result};

/// The tied winners of an election under one scoring function, with the
/// optimum score; the separable path also reports per-candidate scores.
#[derive(Clone, Debug)]
pub struct WinnerSet {
    /// All optimal committees, in lexicographic order.
    pub committees: Vec<Committee>,
    pub optimum: Score,
    /// Per-candidate single-winner scores (by roster index), populated by
    /// the separable path.
    pub per_candidate: Option<Vec<Score>>,
}

impl WinnerSet {
    pub fn contains(&self, committee: &Committee) -> bool {
        self.committees.binary_search(committee).is_ok()
    }
}

/// Tabulated scoring values in a form that makes one evaluation a table
/// lookup. Exact rational tables are rescaled to integer numerators over a
/// common denominator when they fit in machine words.
enum CompiledValues {
    /// Numerators over a shared denominator; committee scores accumulate in
    /// i128.
    Machine {
        numerators: Vec<i64>,
        denominator: BigInt,
    },
    /// Fallback for tables whose rescaled values do not fit machine words.
    Big(Vec<BigRational>),
    Float(Vec<f64>),
}

/// A scoring function compiled for repeated winner determination at fixed
/// `(m, k)`.
pub(crate) struct Solver {
    m: usize,
    k: usize,
    committees: Vec<Committee>,
    values: CompiledValues,
}

/// Winners in compiled form: lexicographic ranks into the committee list.
pub(crate) struct SolvedWinners {
    pub ranks: Vec<usize>,
    pub optimum: Score,
}

const MACHINE_NUMERATOR_LIMIT: i64 = 1 << 40;

impl Solver {
    pub fn new(f: &ScoringFunction) -> Result<Self> {
        let m = f.m();
        let k = f.k();
        if k > 16 {
            // rank_in_vote keeps positions in a fixed buffer; committee
            // spaces anywhere near this size are out of enumeration range
            // anyway.
            return Err(Error::Resource(format!(
                "winner determination supports k <= 16, got k = {k}"
            )));
        }
        let positions = enumerate_positions(m, k)?;
        let scores = positions
            .iter()
            .map(|cp| f.evaluate(cp))
            .collect::<Result<Vec<_>>>()?;
        let values = if f.is_float_valued() || scores.iter().any(|s| !s.is_exact()) {
            CompiledValues::Float(scores.iter().map(|s| s.to_f64()).collect())
        } else {
            let rationals: Vec<&BigRational> = scores
                .iter()
                .map(|s| s.as_exact().expect("exact"))
                .collect();
            let mut denominator = BigInt::one();
            for r in &rationals {
                denominator = denominator.lcm(r.denom());
            }
            let numerators: Option<Vec<i64>> = rationals
                .iter()
                .map(|r| {
                    let scaled = r.numer() * (&denominator / r.denom());
                    scaled
                        .to_i64()
                        .filter(|n| n.abs() < MACHINE_NUMERATOR_LIMIT)
                })
                .collect();
            match numerators {
                Some(numerators) => CompiledValues::Machine {
                    numerators,
                    denominator,
                },
                None => CompiledValues::Big(rationals.into_iter().cloned().collect()),
            }
        };
        Ok(Solver {
            m,
            k,
            committees: enumerate_committees(m, k)?,
            values,
        })
    }

    pub fn committees(&self) -> &[Committee] {
        &self.committees
    }

    fn check_election(&self, election: &Election) -> Result<()> {
        if election.num_candidates() != self.m {
            return Err(Error::Input(format!(
                "election has m = {}, solver compiled for m = {}",
                election.num_candidates(),
                self.m
            )));
        }
        Ok(())
    }

    /// Number of scoring-function evaluations one full winner computation
    /// costs on this election.
    pub fn eval_cost(&self, election: &Election) -> u64 {
        self.committees.len() as u64 * election.votes().len() as u64
    }

    /// Lexicographic rank of the committee's position in one vote, given the
    /// vote's inverse permutation (candidate -> 1-based position).
    fn rank_in_vote(&self, inverse: &[usize], committee: &Committee) -> usize {
        let mut positions = [0usize; 16];
        let k = self.k;
        for (slot, &member) in committee.members().iter().enumerate() {
            // Insertion sort; k is small.
            let p = inverse[member];
            let mut at = slot;
            while at > 0 && positions[at - 1] > p {
                positions[at] = positions[at - 1];
                at -= 1;
            }
            positions[at] = p;
        }
        crate::model::lex_rank(self.m, &positions[..k])
    }

    fn inverses(&self, election: &Election) -> Vec<Vec<usize>> {
        election
            .votes()
            .iter()
            .map(|v| {
                let mut inv = vec![0usize; self.m];
                for (idx, &c) in v.ranking().iter().enumerate() {
                    inv[c] = idx + 1;
                }
                inv
            })
            .collect()
    }

    /// All committee scores, in lexicographic committee order.
    fn all_scores(&self, election: &Election) -> Result<Vec<Score>> {
        self.check_election(election)?;
        let inverses = self.inverses(election);
        let weights: Vec<u64> = election.votes().iter().map(|v| v.weight()).collect();
        let scores = match &self.values {
            CompiledValues::Machine {
                numerators,
                denominator,
            } => self
                .committees
                .iter()
                .map(|committee| {
                    let mut total: i128 = 0;
                    for (inv, &w) in inverses.iter().zip(&weights) {
                        let rank = self.rank_in_vote(inv, committee);
                        total += numerators[rank] as i128 * w as i128;
                    }
                    Score::Exact(BigRational::new(BigInt::from(total), denominator.clone()))
                })
                .collect(),
            CompiledValues::Big(values) => self
                .committees
                .iter()
                .map(|committee| {
                    let mut total = BigRational::zero();
                    for (inv, &w) in inverses.iter().zip(&weights) {
                        let rank = self.rank_in_vote(inv, committee);
                        total += &values[rank] * BigRational::from_integer(BigInt::from(w));
                    }
                    Score::Exact(total)
                })
                .collect(),
            CompiledValues::Float(values) => self
                .committees
                .iter()
                .map(|committee| {
                    let mut total = 0.0;
                    for (inv, &w) in inverses.iter().zip(&weights) {
                        let rank = self.rank_in_vote(inv, committee);
                        total += values[rank] * w as f64;
                    }
                    Score::Real(total)
                })
                .collect(),
        };
        Ok(scores)
    }

    /// Winners at the default tolerance.
    pub fn winners(&self, election: &Election) -> Result<SolvedWinners> {
        self.winners_tol(election, EPSILON)
    }

    /// Winners with the given relative tolerance for float-valued rules
    /// (exact rules ignore it). The winner set is the closure of the
    /// maximum under the tolerance.
    pub fn winners_tol(&self, election: &Election, rel_eps: f64) -> Result<SolvedWinners> {
        let scores = self.all_scores(election)?;
        let optimum = scores
            .iter()
            .cloned()
            .max_by(|a, b| a.cmp_eps(b, 0.0))
            .expect("at least one committee");
        let ranks = scores
            .iter()
            .enumerate()
            .filter(|(_, s)| s.cmp_eps(&optimum, rel_eps) != Ordering::Less)
            .map(|(r, _)| r)
            .collect();
        Ok(SolvedWinners { ranks, optimum })
    }

    /// The score of one committee.
    pub fn committee_score(&self, election: &Election, committee: &Committee) -> Result<Score> {
        self.check_election(election)?;
        if committee.size() != self.k {
            return Err(Error::Input(format!(
                "committee of size {} fed to a solver for k = {}",
                committee.size(),
                self.k
            )));
        }
        if committee.members().iter().any(|&c| c >= self.m) {
            return Err(Error::Input("committee member outside the roster".into()));
        }
        let inverses = self.inverses(election);
        let mut total = Score::zero();
        for (inv, vote) in inverses.iter().zip(election.votes()) {
            let rank = self.rank_in_vote(inv, committee);
            let value = match &self.values {
                CompiledValues::Machine {
                    numerators,
                    denominator,
                } => Score::Exact(BigRational::new(
                    BigInt::from(numerators[rank]),
                    denominator.clone(),
                )),
                CompiledValues::Big(values) => Score::Exact(values[rank].clone()),
                CompiledValues::Float(values) => Score::Real(values[rank]),
            };
            total = total.add(&value.mul_weight(vote.weight()));
        }
        Ok(total)
    }

    pub fn to_winner_set(&self, solved: &SolvedWinners) -> WinnerSet {
        WinnerSet {
            committees: solved
                .ranks
                .iter()
                .map(|&r| self.committees[r].clone())
                .collect(),
            optimum: solved.optimum.clone(),
            per_candidate: None,
        }
    }
}

/// Enumerates all `C(m, k)` committees, scores each, and returns every
/// committee attaining the maximum (the ε-closure of the maximum for
/// float-valued rules).
pub fn winners_exact(election: &Election, rule: &Rule, k: usize) -> Result<WinnerSet> {
    let f = rule.scoring_function(election.num_candidates(), k)?;
    winners_exact_fn(election, &f)
}

/// [`winners_exact`] for a scoring function given directly.
pub fn winners_exact_fn(election: &Election, f: &ScoringFunction) -> Result<WinnerSet> {
    let solver = Solver::new(f)?;
    let solved = solver.winners(election)?;
    Ok(solver.to_winner_set(&solved))
}

/// The weakly-separable fast path: per-candidate single-winner scores, with
/// the winner set expanded combinatorially from the top-k score multiset.
/// Supported for the built-in weakly separable rules; other rules can use
/// [`winners_separable_with`] with a witness from the classifier.
pub fn winners_separable(election: &Election, rule: &Rule, k: usize) -> Result<WinnerSet> {
    let witness = separable_witness_for(election, rule, k)?;
    winners_separable_with(election, &witness, k)
}

/// Winner count of the separable path without expanding the tie block
/// (there may be exponentially many winning committees).
pub fn winners_separable_count(election: &Election, rule: &Rule, k: usize) -> Result<u128> {
    let witness = separable_witness_for(election, rule, k)?;
    let scored = candidate_scores(election, &witness)?;
    let (above, ties) = split_at_kth(&scored, k);
    Ok(choose_u128(ties, k - above))
}

fn separable_witness_for(
    election: &Election,
    rule: &Rule,
    k: usize,
) -> Result<SingleWinnerScoring> {
    rule.separable_witness(election.num_candidates(), k)
        .ok_or_else(|| {
            Error::UnsupportedRule(format!(
                "{rule} is not a built-in weakly separable rule; \
                 use the exact method or supply a witness"
            ))
        })
}

/// The separable fast path for an explicit single-winner witness `gamma`:
/// correct whenever the committee score equals the sum of `gamma` over the
/// members' positions.
pub fn winners_separable_with(
    election: &Election,
    gamma: &SingleWinnerScoring,
    k: usize,
) -> Result<WinnerSet> {
    let m = election.num_candidates();
    if k == 0 || k > m {
        return Err(Error::Input(format!(
            "need 1 <= k <= m, got k = {k}, m = {m}"
        )));
    }
    let scored = candidate_scores(election, gamma)?;
    let mut order: Vec<usize> = (0..m).collect();
    // Best scores first; ties by candidate index for reproducibility.
    order.sort_by(|&a, &b| scored[b].cmp(&scored[a]).then(a.cmp(&b)));

    let (above_count, tie_count) = split_at_kth(&scored, k);
    let above: Vec<usize> = order[..above_count].to_vec();
    let mut ties: Vec<usize> = (0..m)
        .filter(|&c| scored[c] == scored[order[k - 1]])
        .collect();
    ties.sort_unstable();
    debug_assert_eq!(ties.len(), tie_count);

    let slots = k - above_count;
    let mut committees = Vec::new();
    for combo in combinations(&ties, slots) {
        let mut members = above.clone();
        members.extend(combo);
        committees.push(Committee::new(members)?);
    }
    committees.sort();

    let mut optimum = BigRational::zero();
    for &c in &order[..k] {
        optimum += &scored[c];
    }
    Ok(WinnerSet {
        committees,
        optimum: Score::Exact(optimum),
        per_candidate: Some(scored.into_iter().map(Score::Exact).collect()),
    })
}

fn candidate_scores(election: &Election, gamma: &SingleWinnerScoring) -> Result<Vec<BigRational>> {
    let m = election.num_candidates();
    let mut scores = vec![BigRational::zero(); m];
    for vote in election.votes() {
        let w = BigRational::from_integer(BigInt::from(vote.weight()));
        for (idx, &c) in vote.ranking().iter().enumerate() {
            scores[c] += gamma.eval(idx + 1)? * &w;
        }
    }
    Ok(scores)
}

/// Splits the score multiset at the k-th place: returns (number of
/// candidates strictly above the k-th score, size of the tie block at it).
fn split_at_kth(scores: &[BigRational], k: usize) -> (usize, usize) {
    let mut sorted: Vec<&BigRational> = scores.iter().collect();
    sorted.sort_by(|a, b| b.cmp(a));
    let kth = sorted[k - 1];
    let above = scores.iter().filter(|s| *s > kth).count();
    let ties = scores.iter().filter(|s| *s == kth).count();
    (above, ties)
}

fn combinations(items: &[usize], r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if r > items.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut indices: Vec<usize> = (0..r).collect();
    loop {
        out.push(indices.iter().map(|&i| items[i]).collect());
        let mut i = r;
        while i > 0 && indices[i - 1] == items.len() - (r - i) - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        indices[i - 1] += 1;
        for j in i..r {
            indices[j] = indices[j - 1] + 1;
        }
    }
    out
}

fn choose_u128(n: usize, r: usize) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    let mut acc: u128 = 1;
    for i in 0..r {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

/// One greedy committee with its exact score.
#[derive(Clone, Debug)]
pub struct GreedyResult {
    pub committee: Committee,
    pub score: Score,
    /// True when the rule carries the (1 - 1/e) approximation guarantee
    /// (nonincreasing ordered weights); forced runs on other rules are
    /// heuristic only.
    pub guaranteed: bool,
}

/// Iteratively adds the candidate with the highest marginal score,
/// tie-breaking lexicographically by candidate token. Requires a
/// greedy-eligible rule unless `force` is set.
pub fn winners_greedy(
    election: &Election,
    rule: &Rule,
    k: usize,
    force: bool,
) -> Result<GreedyResult> {
    let m = election.num_candidates();
    if k == 0 || k > m {
        return Err(Error::Input(format!(
            "need 1 <= k <= m, got k = {k}, m = {m}"
        )));
    }
    let eligible = rule.greedy_eligible(m, k);
    if !eligible && !force {
        return Err(Error::UnsupportedRule(format!(
            "{rule} has no nonincreasing ordered-weights form; pass force to run without a guarantee"
        )));
    }
    let f = rule.scoring_function(m, k)?;
    // Candidate order for deterministic tie-breaking: by token.
    let mut token_order: Vec<usize> = (0..m).collect();
    token_order.sort_by(|&a, &b| {
        election.candidates()[a]
            .as_str()
            .cmp(election.candidates()[b].as_str())
    });

    let members = match rule.owa_form(m, k) {
        Some((weights, gamma)) => greedy_owa_prefix(election, &weights, &gamma, k, &token_order)?,
        None => greedy_worst_tail(election, &f, k, &token_order)?,
    };
    let committee = Committee::new(members)?;
    let score = score_of(election, &f, &committee)?;
    Ok(GreedyResult {
        committee,
        score,
        guaranteed: eligible,
    })
}

/// Greedy on the prefix objective of an ordered-weights form: a partial
/// committee of size j applies the first j weights to the sorted member
/// positions. For nonincreasing weights this objective is monotone
/// submodular and agrees with the full score at size k.
fn greedy_owa_prefix(
    election: &Election,
    weights: &[Score],
    gamma: &SingleWinnerScoring,
    k: usize,
    token_order: &[usize],
) -> Result<Vec<usize>> {
    let votes = election.votes();
    // Per vote: sorted positions of the selected members.
    let mut selected_positions: Vec<Vec<usize>> = vec![Vec::new(); votes.len()];
    let mut selected: Vec<usize> = Vec::new();

    let objective = |positions: &[usize]| -> Result<Score> {
        let mut acc = Score::zero();
        for (slot, &p) in positions.iter().enumerate() {
            acc = acc.add(&weights[slot].mul(&Score::Exact(gamma.eval(p)?)));
        }
        Ok(acc)
    };

    for _ in 0..k {
        let mut best: Option<(usize, Score)> = None;
        for &c in token_order {
            if selected.contains(&c) {
                continue;
            }
            let mut marginal = Score::zero();
            for (v, vote) in votes.iter().enumerate() {
                let old = objective(&selected_positions[v])?;
                let mut with_c = selected_positions[v].clone();
                let p = vote.position_of(c)?;
                let at = with_c.partition_point(|&q| q < p);
                with_c.insert(at, p);
                let new = objective(&with_c)?;
                marginal = marginal.add(&new.sub(&old).mul_weight(vote.weight()));
            }
            let better = match &best {
                None => true,
                Some((_, best_marginal)) => {
                    marginal.cmp_eps(best_marginal, EPSILON) == Ordering::Greater
                }
            };
            if better {
                best = Some((c, marginal));
            }
        }
        let (chosen, _) = best.expect("spare candidates remain");
        for (v, vote) in votes.iter().enumerate() {
            let p = vote.position_of(chosen)?;
            let at = selected_positions[v].partition_point(|&q| q < p);
            selected_positions[v].insert(at, p);
        }
        selected.push(chosen);
    }
    selected.sort_unstable();
    Ok(selected)
}

/// Forced-mode greedy for rules without an ordered-weights form: partial
/// committees are padded, per vote, with the worst free positions so the
/// scoring function always sees k arguments.
fn greedy_worst_tail(
    election: &Election,
    f: &ScoringFunction,
    k: usize,
    token_order: &[usize],
) -> Result<Vec<usize>> {
    let m = election.num_candidates();
    let votes = election.votes();
    let padded_score = |members: &[usize]| -> Result<Score> {
        let mut total = Score::zero();
        for vote in votes {
            let mut positions: Vec<usize> = members
                .iter()
                .map(|&c| vote.position_of(c))
                .collect::<Result<_>>()?;
            positions.sort_unstable();
            let mut pad = m;
            while positions.len() < k {
                if !positions.contains(&pad) {
                    positions.push(pad);
                }
                pad -= 1;
            }
            positions.sort_unstable();
            let cp = crate::model::CommitteePosition::new(m, positions)?;
            total = total.add(&f.evaluate(&cp)?.mul_weight(vote.weight()));
        }
        Ok(total)
    };

    let mut selected: Vec<usize> = Vec::new();
    for _ in 0..k {
        let base = padded_score(&selected)?;
        let mut best: Option<(usize, Score)> = None;
        for &c in token_order {
            if selected.contains(&c) {
                continue;
            }
            let mut with_c = selected.clone();
            with_c.push(c);
            let marginal = padded_score(&with_c)?.sub(&base);
            let better = match &best {
                None => true,
                Some((_, best_marginal)) => {
                    marginal.cmp_eps(best_marginal, EPSILON) == Ordering::Greater
                }
            };
            if better {
                best = Some((c, marginal));
            }
        }
        selected.push(best.expect("spare candidates remain").0);
    }
    selected.sort_unstable();
    Ok(selected)
}

/// Whether `committee` ties the optimum, and by how much it misses it
/// (margin = optimum - score, zero for winners).
pub fn is_winning(
    election: &Election,
    rule: &Rule,
    k: usize,
    committee: &Committee,
) -> Result<(bool, Score)> {
    let f = rule.scoring_function(election.num_candidates(), k)?;
    let solver = Solver::new(&f)?;
    let solved = solver.winners(election)?;
    let score = solver.committee_score(election, committee)?;
    let winning = score.cmp_eps(&solved.optimum, EPSILON) != Ordering::Less;
    Ok((winning, solved.optimum.sub(&score)))
}
