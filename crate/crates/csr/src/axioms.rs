//! Empirical auditors for the monotonicity axioms: search a bounded election
//! domain exhaustively (profiles enumerated as multisets of rankings, since
//! scoring rules are anonymous) or randomly, and report either verification
//! over the whole domain or a replayable counterexample.
//!
//! Counterexamples replay deterministically: [`Counterexample::replay`]
//! recomputes the winner sets from the stored elections and reproduces the
//! stated violation. Search order is fixed (m ascending, then profile in
//! enumeration order, then k, winner, vote, member), and parallel runs
//! process profile chunks whose results are folded in enumeration order, so
//! repeated runs report the identical counterexample.
//!
//! Float-valued rules are audited with a guard: a violation is only reported
//! if it persists when the winner set is closed under ten times the normal
//! comparison tolerance.

use std::collections::BTreeMap;
use std::fmt;

use rayon::prelude::*;

use crate::fixtures;
use crate::model::{Committee, Election};
use crate::scoring::{Rule, Score, EPSILON};
use crate::solve::Solver;
use crate::{Error, Result};

/// Default budget, in scoring-function evaluations. Sized so that the
/// exhaustive m <= 4, n <= 3 domains complete with room to spare.
pub const DEFAULT_EVAL_BUDGET: u64 = 100_000_000;

/// Tolerance multiplier guarding float audits against spurious violations.
const VIOLATION_GUARD: f64 = 10.0;

/// Profiles processed per parallel batch; batches are folded in order.
const CHUNK: usize = 256;

/// Which committee sizes an audit quantifies over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KRange {
    /// Every k in `1..=m-1`.
    All,
    Fixed(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Random { samples: u64, seed: u64 },
}

/// A bounded election domain to audit.
#[derive(Clone, Debug)]
pub struct SearchDomain {
    pub min_m: usize,
    pub max_m: usize,
    pub max_n: u64,
    pub k: KRange,
    pub mode: Mode,
    /// Budget in scoring-function evaluations; exceeding it produces an
    /// explicit partial verdict, never silent truncation.
    pub budget: u64,
}

impl SearchDomain {
    pub fn exhaustive(max_m: usize, max_n: u64) -> Self {
        SearchDomain {
            min_m: 2,
            max_m,
            max_n,
            k: KRange::All,
            mode: Mode::Exhaustive,
            budget: DEFAULT_EVAL_BUDGET,
        }
    }

    pub fn random(max_m: usize, max_n: u64, samples: u64, seed: u64) -> Self {
        SearchDomain {
            min_m: max_m,
            max_m,
            max_n,
            k: KRange::All,
            mode: Mode::Random { samples, seed },
            budget: DEFAULT_EVAL_BUDGET,
        }
    }

    pub fn with_k(mut self, k: usize) -> Self {
        self.k = KRange::Fixed(k);
        self
    }

    /// Pins the candidate count (needed for rules defined at a single m,
    /// such as explicit tables).
    pub fn with_min_m(mut self, min_m: usize) -> Self {
        self.min_m = min_m;
        self
    }

    pub fn with_budget(mut self, budget: u64) -> Self {
        self.budget = budget;
        self
    }

    pub fn describe(&self) -> String {
        let k = match &self.k {
            KRange::All => "all".to_string(),
            KRange::Fixed(k) => k.to_string(),
        };
        let mode = match &self.mode {
            Mode::Exhaustive => "exhaustive".to_string(),
            Mode::Random { samples, seed } => format!("random(samples={samples},seed={seed})"),
        };
        let m = if self.min_m == self.max_m {
            format!("m={}", self.max_m)
        } else {
            format!("m<={}", self.max_m)
        };
        format!("{m},n<={},k={},mode={}", self.max_n, k, mode)
    }

    fn ks_for(&self, m: usize) -> Vec<usize> {
        let top = m.saturating_sub(1).max(1).min(m);
        match &self.k {
            KRange::All => (1..=top).collect(),
            KRange::Fixed(k) if *k <= top => vec![*k],
            KRange::Fixed(_) => Vec::new(),
        }
    }
}

/// The audited axiom, used for reporting and replay.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Axiom {
    NonCrossing,
    Prefix(usize),
    NarrowTop,
    Enlargement,
    CandidateMonotonicity,
    Consistency,
    Nonimposition,
}

impl fmt::Display for Axiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axiom::NonCrossing => f.write_str("non-crossing"),
            Axiom::Prefix(t) => write!(f, "prefix:{t}"),
            Axiom::NarrowTop => f.write_str("narrow-top"),
            Axiom::Enlargement => f.write_str("enlargement"),
            Axiom::CandidateMonotonicity => f.write_str("candidate"),
            Axiom::Consistency => f.write_str("consistency"),
            Axiom::Nonimposition => f.write_str("nonimposition"),
        }
    }
}

/// Axiom-specific payload of a counterexample.
#[derive(Clone, Debug)]
pub enum ViolationData {
    /// A single forward shift of `candidate` in vote `vote`.
    Shift { vote: usize, candidate: usize },
    /// A simultaneous forward shift of the committee's top members in one
    /// vote.
    PrefixShift { vote: usize, members: Vec<usize> },
    /// The first-position candidate set that every winner must contain.
    NarrowTop { required: Vec<usize> },
    /// No winner at k+1 extends the stored winning committee (of size k).
    EnlargementUp,
    /// No winner at k contains into the stored winning committee (size k+1).
    EnlargementDown,
    /// Merging with `second` does not give the winner-set intersection.
    Consistency { second: Election },
    /// The stored committee is not the unique winner of its witness
    /// election.
    Nonimposition,
}

/// A reproducible axiom violation: all fields needed to replay the two
/// winner computations and confirm the violation.
#[derive(Clone, Debug)]
pub struct Counterexample {
    pub axiom: Axiom,
    pub rule: Rule,
    pub k: usize,
    pub election: Election,
    pub committee: Committee,
    pub data: ViolationData,
    pub winners_before: Vec<Committee>,
    pub winners_after: Vec<Committee>,
    pub score_before: Option<Score>,
    pub score_after: Option<Score>,
    pub optimum_after: Option<Score>,
}

/// The outcome of one audit.
#[derive(Clone, Debug)]
pub enum AuditOutcome {
    /// No violation anywhere in the searched domain.
    Verified {
        domain: String,
        evals: u64,
    },
    Counterexample(Box<Counterexample>),
    /// The evaluation budget ran out; only a prefix of the domain was
    /// checked.
    Partial {
        domain: String,
        checked_elections: u64,
        evals: u64,
        budget: u64,
    },
}

impl AuditOutcome {
    pub fn verdict_label(&self) -> &'static str {
        match self {
            AuditOutcome::Verified { .. } => "verified",
            AuditOutcome::Counterexample(_) => "counterexample",
            AuditOutcome::Partial { .. } => "partial",
        }
    }

    pub fn is_verified(&self) -> bool {
        matches!(self, AuditOutcome::Verified { .. })
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            AuditOutcome::Counterexample(ce) => Some(ce),
            _ => None,
        }
    }
}

fn roster_strings(m: usize) -> Vec<String> {
    (0..m)
        .map(|i| ((b'a' + i as u8) as char).to_string())
        .collect()
}

fn token_committee(e: &Election, c: &Committee) -> String {
    format!("{{{}}}", e.committee_tokens(c).join(","))
}

fn token_list(e: &Election, cs: &[Committee]) -> String {
    cs.iter()
        .map(|c| token_committee(e, c))
        .collect::<Vec<_>>()
        .join(";")
}

impl Counterexample {
    /// Full report: the violation summary plus the election(s) in `.elec`
    /// form.
    pub fn render(&self) -> String {
        let e = &self.election;
        let mut out = String::new();
        out.push_str(&format!("k={}\n", self.k));
        out.push_str(&format!(
            "committee={}\n",
            token_committee(e, &self.committee)
        ));
        match &self.data {
            ViolationData::Shift { vote, candidate } => {
                out.push_str(&format!(
                    "mutation=shift vote={vote} candidate={}\n",
                    e.candidates()[*candidate]
                ));
            }
            ViolationData::PrefixShift { vote, members } => {
                let tokens: Vec<&str> = members
                    .iter()
                    .map(|&c| e.candidates()[c].as_str())
                    .collect();
                out.push_str(&format!(
                    "mutation=prefix-shift vote={vote} members={}\n",
                    tokens.join(",")
                ));
            }
            ViolationData::NarrowTop { required } => {
                let tokens: Vec<&str> = required
                    .iter()
                    .map(|&c| e.candidates()[c].as_str())
                    .collect();
                out.push_str(&format!("required-top-set={{{}}}\n", tokens.join(",")));
            }
            ViolationData::EnlargementUp => {
                out.push_str(&format!(
                    "violation=no-winner-at-k+1-extends-it (k+1={})\n",
                    self.k + 1
                ));
            }
            ViolationData::EnlargementDown => {
                out.push_str("violation=no-winner-at-k-contained-in-it\n");
            }
            ViolationData::Consistency { .. } => {
                out.push_str("violation=merged-winners-differ-from-intersection\n");
            }
            ViolationData::Nonimposition => {
                out.push_str("violation=witness-election-does-not-elect-it-uniquely\n");
            }
        }
        out.push_str(&format!(
            "winners-before={}\n",
            token_list(e, &self.winners_before)
        ));
        if !self.winners_after.is_empty() {
            out.push_str(&format!(
                "winners-after={}\n",
                token_list(e, &self.winners_after)
            ));
        }
        if let Some(s) = &self.score_before {
            out.push_str(&format!("score-before={s}\n"));
        }
        if let Some(s) = &self.score_after {
            out.push_str(&format!("score-after={s}\n"));
        }
        if let Some(s) = &self.optimum_after {
            out.push_str(&format!("optimum-after={s}\n"));
        }
        out.push_str("election:\n");
        out.push_str(&e.to_string());
        if let ViolationData::Consistency { second } = &self.data {
            out.push_str("second election:\n");
            out.push_str(&second.to_string());
        }
        out
    }

    /// Recomputes the winner sets from the stored data and confirms the
    /// violation still holds.
    pub fn replay(&self) -> Result<bool> {
        let rule = &self.rule;
        let e = &self.election;
        let k = self.k;
        match &self.data {
            ViolationData::Shift { vote, candidate } => {
                let (winning, _) = crate::solve::is_winning(e, rule, k, &self.committee)?;
                if !winning {
                    return Ok(false);
                }
                let mutated = e.shift_forward(*vote, *candidate)?;
                Ok(!wins_with_guard(rule, &mutated, k, &self.committee)?)
            }
            ViolationData::PrefixShift { vote, members } => {
                let (winning, _) = crate::solve::is_winning(e, rule, k, &self.committee)?;
                if !winning {
                    return Ok(false);
                }
                let mutated = e.shift_forward_group(*vote, members)?;
                Ok(!wins_with_guard(rule, &mutated, k, &self.committee)?)
            }
            ViolationData::NarrowTop { required } => {
                let mut tops: Vec<usize> = e.votes().iter().map(|v| v.ranking()[0]).collect();
                tops.sort_unstable();
                tops.dedup();
                if &tops != required || tops.len() > k {
                    return Ok(false);
                }
                let ws = crate::solve::winners_exact(e, rule, k)?;
                Ok(!ws
                    .committees
                    .iter()
                    .any(|w| required.iter().all(|&c| w.contains(c))))
            }
            ViolationData::EnlargementUp => {
                let (winning, _) = crate::solve::is_winning(e, rule, k, &self.committee)?;
                if !winning {
                    return Ok(false);
                }
                let bigger = crate::solve::winners_exact(e, rule, k + 1)?;
                Ok(!bigger
                    .committees
                    .iter()
                    .any(|w| self.committee.is_subset_of(w)))
            }
            ViolationData::EnlargementDown => {
                let (winning, _) =
                    crate::solve::is_winning(e, rule, self.committee.size(), &self.committee)?;
                if !winning {
                    return Ok(false);
                }
                let smaller = crate::solve::winners_exact(e, rule, k)?;
                Ok(!smaller
                    .committees
                    .iter()
                    .any(|w| w.is_subset_of(&self.committee)))
            }
            ViolationData::Consistency { second } => {
                let w1 = crate::solve::winners_exact(e, rule, k)?;
                let w2 = crate::solve::winners_exact(second, rule, k)?;
                let shared: Vec<Committee> = w1
                    .committees
                    .iter()
                    .filter(|c| w2.contains(c))
                    .cloned()
                    .collect();
                if shared.is_empty() {
                    return Ok(false);
                }
                let merged = fixtures::concat(e, second)?;
                let wm = crate::solve::winners_exact(&merged, rule, k)?;
                Ok(wm.committees != shared)
            }
            ViolationData::Nonimposition => {
                let ws = crate::solve::winners_exact(e, rule, k)?;
                Ok(ws.committees != vec![self.committee.clone()])
            }
        }
    }
}

/// Is the committee still winning when the winner set is closed under the
/// guard tolerance? Exact rules are unaffected by the tolerance.
fn wins_with_guard(rule: &Rule, e: &Election, k: usize, committee: &Committee) -> Result<bool> {
    let f = rule.scoring_function(e.num_candidates(), k)?;
    let solver = Solver::new(&f)?;
    let solved = solver.winners_tol(e, VIOLATION_GUARD * EPSILON)?;
    let score = solver.committee_score(e, committee)?;
    Ok(score.cmp_eps(&solved.optimum, VIOLATION_GUARD * EPSILON) != std::cmp::Ordering::Less)
}

/// Per-m context shared by the election checks: one compiled solver per
/// committee size the rule can instantiate.
struct AuditCtx<'a> {
    rule: &'a Rule,
    m: usize,
    ks: Vec<usize>,
    solvers: BTreeMap<usize, Solver>,
}

impl<'a> AuditCtx<'a> {
    fn new(rule: &'a Rule, m: usize, ks: Vec<usize>, extra_k: Option<usize>) -> Result<Self> {
        let mut solvers = BTreeMap::new();
        let mut wanted = ks.clone();
        if let Some(k) = extra_k {
            wanted.push(k);
        }
        for k in wanted {
            if let std::collections::btree_map::Entry::Vacant(entry) = solvers.entry(k) {
                let f = rule.scoring_function(m, k)?;
                entry.insert(Solver::new(&f)?);
            }
        }
        Ok(AuditCtx {
            rule,
            m,
            ks,
            solvers,
        })
    }

    fn solver(&self, k: usize) -> &Solver {
        &self.solvers[&k]
    }
}

struct CheckResult {
    evals: u64,
    violation: Option<Counterexample>,
}

/// Drives one audit over the domain: enumerate elections, run `check` on
/// each (parallel within ordered chunks), fold results in enumeration order
/// against the budget.
fn run_audit<C>(rule: &Rule, domain: &SearchDomain, check: C) -> Result<AuditOutcome>
where
    C: Fn(&AuditCtx, &Election) -> Result<CheckResult> + Sync,
{
    let need_k_plus_one = false;
    run_audit_inner(rule, domain, need_k_plus_one, check)
}

fn run_audit_inner<C>(
    rule: &Rule,
    domain: &SearchDomain,
    need_k_plus_one: bool,
    check: C,
) -> Result<AuditOutcome>
where
    C: Fn(&AuditCtx, &Election) -> Result<CheckResult> + Sync,
{
    let mut evals: u64 = 0;
    let mut checked: u64 = 0;

    match &domain.mode {
        Mode::Exhaustive => {
            // Refuse up front when the profile count alone exceeds the
            // budget (each election costs at least one evaluation).
            let mut profile_count: u128 = 0;
            for m in domain.min_m..=domain.max_m {
                let rankings = factorial(m);
                for n in 1..=domain.max_n {
                    profile_count += binomial_u128(rankings + n as u128 - 1, n as u128);
                }
            }
            if profile_count > domain.budget as u128 {
                return Ok(AuditOutcome::Partial {
                    domain: domain.describe(),
                    checked_elections: 0,
                    evals: 0,
                    budget: domain.budget,
                });
            }

            for m in domain.min_m..=domain.max_m {
                let ks = domain.ks_for(m);
                if ks.is_empty() {
                    continue;
                }
                let extra = if need_k_plus_one {
                    ks.iter().map(|k| k + 1).filter(|&k| k <= m).max()
                } else {
                    None
                };
                let ctx = AuditCtx::new(rule, m, ks, extra)?;
                let roster = roster_strings(m);
                let roster_refs: Vec<&str> = roster.iter().map(|s| s.as_str()).collect();
                let rankings = fixtures::all_rankings(m);
                for n in 1..=domain.max_n {
                    let mut multisets = MultisetIter::new(rankings.len(), n as usize);
                    loop {
                        let chunk = multisets.take_chunk(CHUNK);
                        if chunk.is_empty() {
                            break;
                        }
                        let results: Vec<Result<CheckResult>> = chunk
                            .par_iter()
                            .map(|multiset| {
                                let e = fixtures::election_from_multiset(
                                    &roster_refs,
                                    &rankings,
                                    multiset,
                                )?;
                                check(&ctx, &e)
                            })
                            .collect();
                        for result in results {
                            let result = result?;
                            if evals >= domain.budget {
                                return Ok(AuditOutcome::Partial {
                                    domain: domain.describe(),
                                    checked_elections: checked,
                                    evals,
                                    budget: domain.budget,
                                });
                            }
                            evals += result.evals;
                            checked += 1;
                            if let Some(v) = result.violation {
                                return Ok(AuditOutcome::Counterexample(Box::new(v)));
                            }
                        }
                    }
                }
            }
        }
        Mode::Random { samples, seed } => {
            let m = domain.max_m;
            let ks = domain.ks_for(m);
            if ks.is_empty() {
                return Err(Error::Input(format!(
                    "no committee size fits m = {m} in this domain"
                )));
            }
            let extra = if need_k_plus_one {
                ks.iter().map(|k| k + 1).filter(|&k| k <= m).max()
            } else {
                None
            };
            let ctx = AuditCtx::new(rule, m, ks, extra)?;
            let roster = roster_strings(m);
            let roster_refs: Vec<&str> = roster.iter().map(|s| s.as_str()).collect();
            let mut next = 0u64;
            while next < *samples {
                let hi = (next + CHUNK as u64).min(*samples);
                let results: Vec<Result<CheckResult>> = (next..hi)
                    .into_par_iter()
                    .map(|i| {
                        let e = fixtures::impartial_culture(
                            &roster_refs,
                            domain.max_n as usize,
                            seed.wrapping_add(i),
                        )?;
                        check(&ctx, &e)
                    })
                    .collect();
                for result in results {
                    let result = result?;
                    if evals >= domain.budget {
                        return Ok(AuditOutcome::Partial {
                            domain: domain.describe(),
                            checked_elections: checked,
                            evals,
                            budget: domain.budget,
                        });
                    }
                    evals += result.evals;
                    checked += 1;
                    if let Some(v) = result.violation {
                        return Ok(AuditOutcome::Counterexample(Box::new(v)));
                    }
                }
                next = hi;
            }
        }
    }
    Ok(AuditOutcome::Verified {
        domain: domain.describe(),
        evals,
    })
}

fn factorial(m: usize) -> u128 {
    (1..=m as u128).product()
}

fn binomial_u128(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.saturating_mul(n - i) / (i + 1);
    }
    acc
}

/// Lazily enumerates multisets of size n over {0, ..., items-1}.
struct MultisetIter {
    items: usize,
    current: Option<Vec<usize>>,
}

impl MultisetIter {
    fn new(items: usize, n: usize) -> Self {
        MultisetIter {
            items,
            current: Some(vec![0; n]),
        }
    }

    fn take_chunk(&mut self, limit: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::with_capacity(limit);
        while out.len() < limit {
            let Some(current) = &mut self.current else {
                break;
            };
            out.push(current.clone());
            let n = current.len();
            let mut i = n;
            while i > 0 && current[i - 1] == self.items - 1 {
                i -= 1;
            }
            if i == 0 {
                self.current = None;
            } else {
                current[i - 1] += 1;
                let v = current[i - 1];
                for j in i..n {
                    current[j] = v;
                }
            }
        }
        out
    }
}

/// Non-crossing monotonicity: a winning committee must stay winning after
/// any member is shifted forward one position without passing another
/// member.
pub fn audit_non_crossing(rule: &Rule, domain: &SearchDomain) -> Result<AuditOutcome> {
    run_audit(rule, domain, |ctx, e| {
        let mut evals = 0;
        for &k in &ctx.ks {
            let solver = ctx.solver(k);
            let solved = solver.winners(e)?;
            evals += solver.eval_cost(e);
            for &rank in &solved.ranks {
                let committee = &solver.committees()[rank];
                for (vote_idx, vote) in e.votes().iter().enumerate() {
                    for &member in committee.members() {
                        let pos = vote.position_of(member)?;
                        if pos == 1 {
                            continue;
                        }
                        let predecessor = vote.ranking()[pos - 2];
                        if committee.contains(predecessor) {
                            continue; // would cross another member
                        }
                        let mutated = e.shift_forward(vote_idx, member)?;
                        evals += solver.eval_cost(&mutated);
                        let after = solver.winners_tol(&mutated, VIOLATION_GUARD * EPSILON)?;
                        if after.ranks.binary_search(&rank).is_err() {
                            let after_plain = solver.winners(&mutated)?;
                            return Ok(CheckResult {
                                evals,
                                violation: Some(Counterexample {
                                    axiom: Axiom::NonCrossing,
                                    rule: ctx.rule.clone(),
                                    k,
                                    election: e.clone(),
                                    committee: committee.clone(),
                                    data: ViolationData::Shift {
                                        vote: vote_idx,
                                        candidate: member,
                                    },
                                    winners_before: solver.to_winner_set(&solved).committees,
                                    winners_after: solver.to_winner_set(&after_plain).committees,
                                    score_before: Some(solver.committee_score(e, committee)?),
                                    score_after: Some(solver.committee_score(&mutated, committee)?),
                                    optimum_after: Some(after_plain.optimum),
                                }),
                            });
                        }
                    }
                }
            }
        }
        Ok(CheckResult {
            evals,
            violation: None,
        })
    })
}

/// t-prefix monotonicity: shifting a winning committee's top-t members (in
/// one vote) forward together must keep it winning. Shifts whose best
/// member already sits at position 1 are illegal and skipped.
pub fn audit_prefix(rule: &Rule, t: usize, domain: &SearchDomain) -> Result<AuditOutcome> {
    if t == 0 {
        return Err(Error::Input("prefix depth t must be >= 1".into()));
    }
    if let KRange::Fixed(k) = domain.k {
        if k < t {
            return Err(Error::Input(format!(
                "prefix depth t = {t} exceeds the fixed committee size k = {k}"
            )));
        }
    }
    run_audit(rule, domain, move |ctx, e| {
        let mut evals = 0;
        for &k in &ctx.ks {
            if k < t {
                continue;
            }
            let solver = ctx.solver(k);
            let solved = solver.winners(e)?;
            evals += solver.eval_cost(e);
            for &rank in &solved.ranks {
                let committee = &solver.committees()[rank];
                for (vote_idx, vote) in e.votes().iter().enumerate() {
                    // The committee's top-t members by this vote.
                    let mut ranked: Vec<(usize, usize)> = committee
                        .members()
                        .iter()
                        .map(|&c| Ok((vote.position_of(c)?, c)))
                        .collect::<Result<_>>()?;
                    ranked.sort_unstable();
                    let top: Vec<usize> = ranked[..t].iter().map(|&(_, c)| c).collect();
                    if ranked[0].0 == 1 {
                        continue; // the best member cannot move up
                    }
                    let mutated = e.shift_forward_group(vote_idx, &top)?;
                    evals += solver.eval_cost(&mutated);
                    let after = solver.winners_tol(&mutated, VIOLATION_GUARD * EPSILON)?;
                    if after.ranks.binary_search(&rank).is_err() {
                        let after_plain = solver.winners(&mutated)?;
                        return Ok(CheckResult {
                            evals,
                            violation: Some(Counterexample {
                                axiom: Axiom::Prefix(t),
                                rule: ctx.rule.clone(),
                                k,
                                election: e.clone(),
                                committee: committee.clone(),
                                data: ViolationData::PrefixShift {
                                    vote: vote_idx,
                                    members: top,
                                },
                                winners_before: solver.to_winner_set(&solved).committees,
                                winners_after: solver.to_winner_set(&after_plain).committees,
                                score_before: Some(solver.committee_score(e, committee)?),
                                score_after: Some(solver.committee_score(&mutated, committee)?),
                                optimum_after: Some(after_plain.optimum),
                            }),
                        });
                    }
                }
            }
        }
        Ok(CheckResult {
            evals,
            violation: None,
        })
    })
}

/// Narrow-top consistency: when some set S of at most k candidates occupies
/// every first position (and each member of S is ranked first by someone),
/// the rule must deliver a winning committee containing S.
///
/// With tied winner sets this is the reading under which every
/// representation-focused rule (any committee containing S earns the best
/// first-member position from every voter) is narrow-top consistent; asking
/// *all* tied winners to contain S would already fail for k-approval
/// variants on a single vote, because flat scoring ties committees that
/// skip S.
pub fn audit_narrow_top(rule: &Rule, domain: &SearchDomain) -> Result<AuditOutcome> {
    run_audit(rule, domain, |ctx, e| {
        let mut evals = 0;
        let mut tops: Vec<usize> = e.votes().iter().map(|v| v.ranking()[0]).collect();
        tops.sort_unstable();
        tops.dedup();
        for &k in &ctx.ks {
            if tops.len() > k {
                continue;
            }
            let solver = ctx.solver(k);
            let solved = solver.winners(e)?;
            evals += solver.eval_cost(e);
            let satisfied = solved.ranks.iter().any(|&rank| {
                let committee = &solver.committees()[rank];
                tops.iter().all(|&c| committee.contains(c))
            });
            if !satisfied {
                let committee = solver.committees()[solved.ranks[0]].clone();
                let score = solver.committee_score(e, &committee)?;
                return Ok(CheckResult {
                    evals,
                    violation: Some(Counterexample {
                        axiom: Axiom::NarrowTop,
                        rule: ctx.rule.clone(),
                        k,
                        election: e.clone(),
                        committee,
                        data: ViolationData::NarrowTop {
                            required: tops.clone(),
                        },
                        winners_before: solver.to_winner_set(&solved).committees,
                        winners_after: Vec::new(),
                        score_before: Some(score),
                        score_after: None,
                        optimum_after: None,
                    }),
                });
            }
        }
        Ok(CheckResult {
            evals,
            violation: None,
        })
    })
}

/// Committee-enlargement monotonicity: for consecutive sizes, every winner
/// at k extends to a winner at k+1, and every winner at k+1 contains a
/// winner at k.
pub fn audit_committee_enlargement(rule: &Rule, domain: &SearchDomain) -> Result<AuditOutcome> {
    run_audit_inner(rule, domain, true, |ctx, e| {
        let mut evals = 0;
        for &k in &ctx.ks {
            if k + 1 > ctx.m {
                continue;
            }
            let small = ctx.solver(k);
            let large = ctx.solver(k + 1);
            let solved_small = small.winners(e)?;
            let solved_large = large.winners(e)?;
            evals += small.eval_cost(e) + large.eval_cost(e);
            for &rank in &solved_small.ranks {
                let w = &small.committees()[rank];
                let extends = solved_large
                    .ranks
                    .iter()
                    .any(|&r| w.is_subset_of(&large.committees()[r]));
                if !extends {
                    return Ok(CheckResult {
                        evals,
                        violation: Some(Counterexample {
                            axiom: Axiom::Enlargement,
                            rule: ctx.rule.clone(),
                            k,
                            election: e.clone(),
                            committee: w.clone(),
                            data: ViolationData::EnlargementUp,
                            winners_before: small.to_winner_set(&solved_small).committees,
                            winners_after: large.to_winner_set(&solved_large).committees,
                            score_before: Some(small.committee_score(e, w)?),
                            score_after: None,
                            optimum_after: Some(solved_large.optimum.clone()),
                        }),
                    });
                }
            }
            for &rank in &solved_large.ranks {
                let w = &large.committees()[rank];
                let contains = solved_small
                    .ranks
                    .iter()
                    .any(|&r| small.committees()[r].is_subset_of(w));
                if !contains {
                    return Ok(CheckResult {
                        evals,
                        violation: Some(Counterexample {
                            axiom: Axiom::Enlargement,
                            rule: ctx.rule.clone(),
                            k,
                            election: e.clone(),
                            committee: w.clone(),
                            data: ViolationData::EnlargementDown,
                            winners_before: large.to_winner_set(&solved_large).committees,
                            winners_after: small.to_winner_set(&solved_small).committees,
                            score_before: Some(large.committee_score(e, w)?),
                            score_after: None,
                            optimum_after: Some(solved_small.optimum.clone()),
                        }),
                    });
                }
            }
        }
        Ok(CheckResult {
            evals,
            violation: None,
        })
    })
}

/// Candidate monotonicity: after any single forward shift of a member of a
/// winning committee (crossing other members is allowed here), that
/// candidate must still belong to some winning committee.
pub fn audit_candidate_monotonicity(rule: &Rule, domain: &SearchDomain) -> Result<AuditOutcome> {
    run_audit(rule, domain, |ctx, e| {
        let mut evals = 0;
        for &k in &ctx.ks {
            let solver = ctx.solver(k);
            let solved = solver.winners(e)?;
            evals += solver.eval_cost(e);
            for &rank in &solved.ranks {
                let committee = &solver.committees()[rank];
                for (vote_idx, vote) in e.votes().iter().enumerate() {
                    for &member in committee.members() {
                        if vote.position_of(member)? == 1 {
                            continue;
                        }
                        let mutated = e.shift_forward(vote_idx, member)?;
                        evals += solver.eval_cost(&mutated);
                        // Guard tolerance widens the winner set, so a
                        // reported violation survives float noise.
                        let after = solver.winners_tol(&mutated, VIOLATION_GUARD * EPSILON)?;
                        let still_in = after
                            .ranks
                            .iter()
                            .any(|&r| solver.committees()[r].contains(member));
                        if !still_in {
                            let after_plain = solver.winners(&mutated)?;
                            return Ok(CheckResult {
                                evals,
                                violation: Some(Counterexample {
                                    axiom: Axiom::CandidateMonotonicity,
                                    rule: ctx.rule.clone(),
                                    k,
                                    election: e.clone(),
                                    committee: committee.clone(),
                                    data: ViolationData::Shift {
                                        vote: vote_idx,
                                        candidate: member,
                                    },
                                    winners_before: solver.to_winner_set(&solved).committees,
                                    winners_after: solver.to_winner_set(&after_plain).committees,
                                    score_before: Some(solver.committee_score(e, committee)?),
                                    score_after: Some(solver.committee_score(&mutated, committee)?),
                                    optimum_after: Some(after_plain.optimum),
                                }),
                            });
                        }
                    }
                }
            }
        }
        Ok(CheckResult {
            evals,
            violation: None,
        })
    })
}

/// Consistency: when two elections over the same roster share winning
/// committees, the merged election's winners are exactly the shared ones.
/// Exhaustive mode checks all unordered pairs of profiles in the domain;
/// random mode checks pairs of seeded impartial-culture elections.
pub fn audit_consistency(rule: &Rule, domain: &SearchDomain) -> Result<AuditOutcome> {
    let mut evals: u64 = 0;
    let mut checked: u64 = 0;

    let mut pairs: Vec<(Election, Election)> = Vec::new();
    match &domain.mode {
        Mode::Exhaustive => {
            for m in domain.min_m..=domain.max_m {
                let roster = roster_strings(m);
                let roster_refs: Vec<&str> = roster.iter().map(|s| s.as_str()).collect();
                let rankings = fixtures::all_rankings(m);
                let mut profiles = Vec::new();
                for n in 1..=domain.max_n {
                    for multiset in fixtures::ranking_multisets(rankings.len(), n as usize) {
                        profiles.push(fixtures::election_from_multiset(
                            &roster_refs,
                            &rankings,
                            &multiset,
                        )?);
                    }
                }
                let pair_count = profiles.len() * (profiles.len() + 1) / 2;
                if pair_count as u64 > domain.budget {
                    return Ok(AuditOutcome::Partial {
                        domain: domain.describe(),
                        checked_elections: 0,
                        evals: 0,
                        budget: domain.budget,
                    });
                }
                for i in 0..profiles.len() {
                    for j in i..profiles.len() {
                        pairs.push((profiles[i].clone(), profiles[j].clone()));
                    }
                }
            }
        }
        Mode::Random { samples, seed } => {
            let m = domain.max_m;
            let roster = roster_strings(m);
            let roster_refs: Vec<&str> = roster.iter().map(|s| s.as_str()).collect();
            for i in 0..*samples {
                let e1 = fixtures::impartial_culture(
                    &roster_refs,
                    domain.max_n as usize,
                    seed.wrapping_add(2 * i),
                )?;
                let e2 = fixtures::impartial_culture(
                    &roster_refs,
                    domain.max_n as usize,
                    seed.wrapping_add(2 * i + 1),
                )?;
                pairs.push((e1, e2));
            }
        }
    }

    for (e1, e2) in pairs {
        if evals >= domain.budget {
            return Ok(AuditOutcome::Partial {
                domain: domain.describe(),
                checked_elections: checked,
                evals,
                budget: domain.budget,
            });
        }
        let m = e1.num_candidates();
        for k in domain.ks_for(m) {
            let f = rule.scoring_function(m, k)?;
            let solver = Solver::new(&f)?;
            let s1 = solver.winners(&e1)?;
            let s2 = solver.winners(&e2)?;
            evals += solver.eval_cost(&e1) + solver.eval_cost(&e2);
            let shared: Vec<usize> = s1
                .ranks
                .iter()
                .copied()
                .filter(|r| s2.ranks.binary_search(r).is_ok())
                .collect();
            if shared.is_empty() {
                continue;
            }
            let merged = fixtures::concat(&e1, &e2)?;
            let sm = solver.winners(&merged)?;
            evals += solver.eval_cost(&merged);
            if sm.ranks != shared {
                let committee_rank = sm
                    .ranks
                    .iter()
                    .find(|r| shared.binary_search(r).is_err())
                    .or_else(|| shared.iter().find(|r| sm.ranks.binary_search(r).is_err()))
                    .copied()
                    .expect("sets differ");
                let shared_committees: Vec<Committee> = shared
                    .iter()
                    .map(|&r| solver.committees()[r].clone())
                    .collect();
                return Ok(AuditOutcome::Counterexample(Box::new(Counterexample {
                    axiom: Axiom::Consistency,
                    rule: rule.clone(),
                    k,
                    election: e1.clone(),
                    committee: solver.committees()[committee_rank].clone(),
                    data: ViolationData::Consistency { second: e2.clone() },
                    winners_before: shared_committees,
                    winners_after: sm
                        .ranks
                        .iter()
                        .map(|&r| solver.committees()[r].clone())
                        .collect(),
                    score_before: None,
                    score_after: None,
                    optimum_after: Some(sm.optimum),
                })));
            }
        }
        checked += 1;
    }
    Ok(AuditOutcome::Verified {
        domain: domain.describe(),
        evals,
    })
}

/// Nonimposition at `(m, k)`: every size-k committee W must be the unique
/// winner of its witness election ζ(W) when the rule is non-degenerate
/// there; for degenerate rules, nonimposition must fail.
pub fn audit_nonimposition(rule: &Rule, m: usize, k: usize, budget: u64) -> Result<AuditOutcome> {
    if k == 0 || k >= m {
        return Err(Error::Input(format!(
            "need 1 <= k < m, got k = {k}, m = {m}"
        )));
    }
    let degenerate = rule.is_degenerate(m, k)?;
    let f = rule.scoring_function(m, k)?;
    let solver = Solver::new(&f)?;
    let roster = roster_strings(m);
    let roster_refs: Vec<&str> = roster.iter().map(|s| s.as_str()).collect();
    let mut evals: u64 = 0;
    let mut checked: u64 = 0;
    let domain = format!("m={m},k={k},witness=zeta");
    for committee in crate::model::enumerate_committees(m, k)? {
        if evals >= budget {
            return Ok(AuditOutcome::Partial {
                domain,
                checked_elections: checked,
                evals,
                budget,
            });
        }
        let tokens: Vec<&str> = committee
            .members()
            .iter()
            .map(|&c| roster_refs[c])
            .collect();
        let witness = fixtures::zeta_set(&roster_refs, &tokens)?;
        let solved = solver.winners(&witness)?;
        evals += solver.eval_cost(&witness);
        checked += 1;
        let unique = solved.ranks.len() == 1 && solver.committees()[solved.ranks[0]] == committee;
        // Non-degenerate rules must elect W uniquely from its witness.
        // Degenerate rules elect everything, so the first witness already
        // refutes nonimposition.
        if !unique || degenerate {
            return Ok(AuditOutcome::Counterexample(Box::new(Counterexample {
                axiom: Axiom::Nonimposition,
                rule: rule.clone(),
                k,
                election: witness.clone(),
                committee,
                data: ViolationData::Nonimposition,
                winners_before: solved
                    .ranks
                    .iter()
                    .map(|&r| solver.committees()[r].clone())
                    .collect(),
                winners_after: Vec::new(),
                score_before: None,
                score_after: None,
                optimum_after: Some(solved.optimum),
            })));
        }
    }
    Ok(AuditOutcome::Verified { domain, evals })
}

/// Greedily removes votes and candidates from a counterexample while the
/// violation persists; the result still replays. Witness-based
/// counterexamples (nonimposition) are returned unchanged.
pub fn minimize_counterexample(ce: &Counterexample) -> Result<Counterexample> {
    if matches!(ce.data, ViolationData::Nonimposition) {
        return Ok(ce.clone());
    }
    // A reduction that makes the stored mutation illegal (or otherwise
    // cannot be replayed) simply does not preserve the violation.
    let still_violates = |candidate: &Counterexample| candidate.replay().unwrap_or(false);

    let mut best = ce.clone();
    loop {
        let mut improved = false;

        // Drop one unit of weight from each vote in turn (or the whole vote
        // at weight one), keeping the first reduction that still violates.
        let vote_count = best.election.votes().len();
        for vote_idx in 0..vote_count {
            if let Some(candidate) = reduce_vote(&best, vote_idx)? {
                if still_violates(&candidate) {
                    best = candidate;
                    improved = true;
                    break;
                }
            }
        }
        if improved {
            continue;
        }
        if let ViolationData::Consistency { second } = &best.data {
            let second_votes = second.votes().len();
            for vote_idx in 0..second_votes {
                if let Some(candidate) = reduce_second_vote(&best, vote_idx)? {
                    if still_violates(&candidate) {
                        best = candidate;
                        improved = true;
                        break;
                    }
                }
            }
            if improved {
                continue;
            }
        }

        // Try removing candidates the violation does not reference.
        let m = best.election.num_candidates();
        for candidate in 0..m {
            if let Some(smaller) = remove_candidate(&best, candidate)? {
                if still_violates(&smaller) {
                    best = smaller;
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            break;
        }
    }
    Ok(best)
}

/// One unit of weight removed from `vote_idx`, with mutation indices kept
/// valid; `None` when the reduction cannot apply.
fn reduce_vote(ce: &Counterexample, vote_idx: usize) -> Result<Option<Counterexample>> {
    let e = &ce.election;
    let vote = &e.votes()[vote_idx];
    let mutated_vote = match &ce.data {
        ViolationData::Shift { vote, .. } | ViolationData::PrefixShift { vote, .. } => Some(*vote),
        _ => None,
    };
    // The vote carrying the mutation must keep at least one unit.
    if mutated_vote == Some(vote_idx) && vote.weight() == 1 {
        return Ok(None);
    }
    if e.votes().len() == 1 && vote.weight() == 1 {
        return Ok(None);
    }
    let mut votes = e.votes().to_vec();
    let removed_entirely = vote.weight() == 1;
    if removed_entirely {
        votes.remove(vote_idx);
    } else {
        votes[vote_idx] = crate::model::Vote::new(vote.ranking().to_vec(), vote.weight() - 1)?;
    }
    let election = Election::new(e.candidates().to_vec(), votes)?;
    let mut out = ce.clone();
    out.election = election;
    if removed_entirely {
        match &mut out.data {
            ViolationData::Shift { vote, .. } | ViolationData::PrefixShift { vote, .. } => {
                if *vote > vote_idx {
                    *vote -= 1;
                }
            }
            _ => {}
        }
    }
    Ok(Some(out))
}

fn reduce_second_vote(ce: &Counterexample, vote_idx: usize) -> Result<Option<Counterexample>> {
    let ViolationData::Consistency { second } = &ce.data else {
        return Ok(None);
    };
    let vote = &second.votes()[vote_idx];
    if second.votes().len() == 1 && vote.weight() == 1 {
        return Ok(None);
    }
    let mut votes = second.votes().to_vec();
    if vote.weight() == 1 {
        votes.remove(vote_idx);
    } else {
        votes[vote_idx] = crate::model::Vote::new(vote.ranking().to_vec(), vote.weight() - 1)?;
    }
    let second = Election::new(second.candidates().to_vec(), votes)?;
    let mut out = ce.clone();
    out.data = ViolationData::Consistency { second };
    Ok(Some(out))
}

/// The counterexample with one candidate projected out of all rankings;
/// `None` when the candidate is referenced by the violation or k would no
/// longer fit.
fn remove_candidate(ce: &Counterexample, candidate: usize) -> Result<Option<Counterexample>> {
    let e = &ce.election;
    let m = e.num_candidates();
    let needed_k = match ce.data {
        ViolationData::EnlargementUp => ce.k + 1,
        _ => ce.committee.size().max(ce.k),
    };
    if m <= 2 || needed_k > m - 2 {
        return Ok(None);
    }
    if ce.committee.contains(candidate) {
        return Ok(None);
    }
    let referenced = match &ce.data {
        ViolationData::Shift { candidate: c, .. } => ce.committee.contains(*c) || *c == candidate,
        ViolationData::PrefixShift { members, .. } => members.contains(&candidate),
        ViolationData::NarrowTop { required } => required.contains(&candidate),
        _ => false,
    };
    if referenced {
        return Ok(None);
    }
    let remap = |c: usize| if c > candidate { c - 1 } else { c };
    let project = |e: &Election| -> Result<Election> {
        let candidates: Vec<_> = e
            .candidates()
            .iter()
            .enumerate()
            .filter(|&(i, _)| i != candidate)
            .map(|(_, c)| c.clone())
            .collect();
        let votes = e
            .votes()
            .iter()
            .map(|v| {
                let ranking: Vec<usize> = v
                    .ranking()
                    .iter()
                    .filter(|&&c| c != candidate)
                    .map(|&c| remap(c))
                    .collect();
                crate::model::Vote::new(ranking, v.weight())
            })
            .collect::<Result<Vec<_>>>()?;
        Election::new(candidates, votes)
    };
    let mut out = ce.clone();
    out.election = project(e)?;
    out.committee = Committee::new(ce.committee.members().iter().map(|&c| remap(c)).collect())?;
    out.winners_before = Vec::new();
    out.winners_after = Vec::new();
    out.score_before = None;
    out.score_after = None;
    out.optimum_after = None;
    match &mut out.data {
        ViolationData::Shift { candidate: c, .. } => *c = remap(*c),
        ViolationData::PrefixShift { members, .. } => {
            for c in members {
                *c = remap(*c);
            }
        }
        ViolationData::NarrowTop { required } => {
            for c in required {
                *c = remap(*c);
            }
        }
        ViolationData::Consistency { second } => {
            out.data = ViolationData::Consistency {
                second: project(second)?,
            };
        }
        _ => {}
    }
    Ok(Some(out))
}
