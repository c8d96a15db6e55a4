//! Core election data model: candidates, weighted votes, committees,
//! committee positions, dominance, and the `.elec` text format.
//!
//! All values are immutable after construction and every operation is a pure
//! function of its inputs, so instances can be shared freely across threads.
//!
//! Positions are 1-based throughout: the top-ranked candidate of a vote has
//! position 1 and the bottom-ranked one has position `m`.

use std::collections::HashSet;
use std::fmt;

use crate::{Error, Result};

/// A candidate, identified by a short alphanumeric token that is unique
/// within an election.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Candidate(String);

impl Candidate {
    pub fn new(token: impl Into<String>) -> Result<Self> {
        let token = token.into();
        if token.is_empty() || !token.chars().all(|c| c.is_ascii_alphanumeric()) {
            return Err(Error::Input(format!(
                "candidate token must be nonempty and alphanumeric, got {token:?}"
            )));
        }
        Ok(Candidate(token))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for Candidate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// One ballot: a strict ranking over the full roster, with an integer
/// multiplicity. `ranking[p]` is the candidate index at position `p + 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Vote {
    ranking: Vec<usize>,
    weight: u64,
}

impl Vote {
    pub fn new(ranking: Vec<usize>, weight: u64) -> Result<Self> {
        if weight == 0 {
            return Err(Error::Input("vote weight must be >= 1".into()));
        }
        Ok(Vote { ranking, weight })
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    pub fn weight(&self) -> u64 {
        self.weight
    }

    /// 1-based position of a candidate (given by roster index) in this vote.
    pub fn position_of(&self, candidate: usize) -> Result<usize> {
        self.ranking
            .iter()
            .position(|&c| c == candidate)
            .map(|p| p + 1)
            .ok_or_else(|| Error::Input(format!("candidate #{candidate} not ranked by this vote")))
    }

    /// The committee position of `committee` in this vote: the sorted
    /// sequence of its members' positions.
    pub fn committee_position(&self, committee: &Committee) -> Result<CommitteePosition> {
        let mut positions = Vec::with_capacity(committee.size());
        for &c in committee.members() {
            positions.push(self.position_of(c)?);
        }
        positions.sort_unstable();
        CommitteePosition::new(self.ranking.len(), positions)
    }
}

/// An election: an ordered candidate roster plus a sequence of weighted
/// votes, each ranking the full roster.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Election {
    candidates: Vec<Candidate>,
    votes: Vec<Vote>,
}

impl Election {
    pub fn new(candidates: Vec<Candidate>, votes: Vec<Vote>) -> Result<Self> {
        let m = candidates.len();
        if m == 0 {
            return Err(Error::Input("election needs at least one candidate".into()));
        }
        let mut seen = HashSet::new();
        for c in &candidates {
            if !seen.insert(c.as_str()) {
                return Err(Error::Input(format!("duplicate candidate token {c}")));
            }
        }
        if votes.is_empty() {
            return Err(Error::Input("election needs at least one vote".into()));
        }
        for (i, v) in votes.iter().enumerate() {
            if v.ranking.len() != m {
                return Err(Error::Input(format!(
                    "vote #{i} ranks {} candidates, roster has {m}",
                    v.ranking.len()
                )));
            }
            let mut present = vec![false; m];
            for &c in &v.ranking {
                if c >= m || present[c] {
                    return Err(Error::Input(format!(
                        "vote #{i} is not a permutation of the roster"
                    )));
                }
                present[c] = true;
            }
        }
        Ok(Election { candidates, votes })
    }

    /// Builds an election from candidate tokens and rankings given as tokens.
    pub fn from_tokens(candidates: &[&str], votes: &[(u64, &[&str])]) -> Result<Self> {
        let roster: Vec<Candidate> = candidates
            .iter()
            .map(|t| Candidate::new(*t))
            .collect::<Result<_>>()?;
        let index = |t: &str| -> Result<usize> {
            roster
                .iter()
                .position(|c| c.as_str() == t)
                .ok_or_else(|| Error::Input(format!("unknown candidate {t:?}")))
        };
        let votes = votes
            .iter()
            .map(|(w, ranking)| {
                let r = ranking
                    .iter()
                    .map(|t| index(t))
                    .collect::<Result<Vec<_>>>()?;
                Vote::new(r, *w)
            })
            .collect::<Result<Vec<_>>>()?;
        Election::new(roster, votes)
    }

    /// Number of candidates, `m`.
    pub fn num_candidates(&self) -> usize {
        self.candidates.len()
    }

    /// Total voter count `n` (the sum of vote weights).
    pub fn total_weight(&self) -> u64 {
        self.votes.iter().map(|v| v.weight).sum()
    }

    pub fn candidates(&self) -> &[Candidate] {
        &self.candidates
    }

    pub fn votes(&self) -> &[Vote] {
        &self.votes
    }

    pub fn candidate_index(&self, token: &str) -> Option<usize> {
        self.candidates.iter().position(|c| c.as_str() == token)
    }

    /// Builds a committee from candidate tokens of this election.
    pub fn committee_from_tokens(&self, tokens: &[&str]) -> Result<Committee> {
        let members = tokens
            .iter()
            .map(|t| {
                self.candidate_index(t)
                    .ok_or_else(|| Error::Input(format!("unknown candidate {t:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Committee::new(members)
    }

    /// Formats a committee's members as tokens, sorted by token.
    pub fn committee_tokens(&self, committee: &Committee) -> Vec<&str> {
        let mut tokens: Vec<&str> = committee
            .members()
            .iter()
            .map(|&c| self.candidates[c].as_str())
            .collect();
        tokens.sort_unstable();
        tokens
    }

    /// Shifts `candidate` one position forward in one unit of weight of vote
    /// `vote_idx`. If the designated vote has weight greater than one, a unit
    /// copy is split off and mutated, and the remaining weight keeps the
    /// original ranking (appended at the end of the vote list).
    pub fn shift_forward(&self, vote_idx: usize, candidate: usize) -> Result<Election> {
        let vote = self
            .votes
            .get(vote_idx)
            .ok_or_else(|| Error::Input(format!("no vote with index {vote_idx}")))?;
        let pos = vote.position_of(candidate)?;
        if pos == 1 {
            return Err(Error::InvalidShift(format!(
                "candidate {} is already top-ranked in vote #{vote_idx}",
                self.candidates[candidate]
            )));
        }
        let mut ranking = vote.ranking.clone();
        ranking.swap(pos - 2, pos - 1);
        let mut votes = self.votes.clone();
        let remaining = vote.weight - 1;
        votes[vote_idx] = Vote::new(ranking, 1)?;
        if remaining > 0 {
            votes.push(Vote::new(vote.ranking.clone(), remaining)?);
        }
        Election::new(self.candidates.clone(), votes)
    }

    /// Shifts each of the given candidates one position forward in one unit
    /// of weight of vote `vote_idx`, as a single simultaneous mutation. The
    /// candidates are processed from the best-ranked down, so a contiguous
    /// block moves as a block. Fails if any of them is already top-ranked.
    pub fn shift_forward_group(&self, vote_idx: usize, candidates: &[usize]) -> Result<Election> {
        let vote = self
            .votes
            .get(vote_idx)
            .ok_or_else(|| Error::Input(format!("no vote with index {vote_idx}")))?;
        let mut positions = candidates
            .iter()
            .map(|&c| vote.position_of(c))
            .collect::<Result<Vec<_>>>()?;
        positions.sort_unstable();
        if positions.first() == Some(&1) {
            return Err(Error::InvalidShift(
                "group shift would move a top-ranked candidate past position 1".into(),
            ));
        }
        let mut ranking = vote.ranking.clone();
        for p in positions {
            ranking.swap(p - 2, p - 1);
        }
        let mut votes = self.votes.clone();
        let remaining = vote.weight - 1;
        votes[vote_idx] = Vote::new(ranking, 1)?;
        if remaining > 0 {
            votes.push(Vote::new(vote.ranking.clone(), remaining)?);
        }
        Election::new(self.candidates.clone(), votes)
    }

    /// Parses the `.elec` text format:
    ///
    /// ```text
    /// # comment lines start with '#'
    /// candidates: a b c d
    /// 3: a > b > c > d
    /// 1: d > c > a > b
    /// ```
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let (line_no, header) = lines
            .next()
            .ok_or_else(|| Error::Parse("empty election file".into()))?;
        let roster_part = header
            .strip_prefix("candidates:")
            .ok_or_else(|| Error::Parse(format!("line {line_no}: expected 'candidates: ...'")))?;
        let candidates = roster_part
            .split_whitespace()
            .map(Candidate::new)
            .collect::<Result<Vec<_>>>()?;

        let index = |t: &str, line: usize| -> Result<usize> {
            candidates
                .iter()
                .position(|c| c.as_str() == t)
                .ok_or_else(|| Error::Parse(format!("line {line}: unknown candidate {t:?}")))
        };

        let mut votes = Vec::new();
        for (line_no, line) in lines {
            let (weight_part, ranking_part) = line.split_once(':').ok_or_else(|| {
                Error::Parse(format!("line {line_no}: expected '<weight>: <ranking>'"))
            })?;
            let weight: u64 = weight_part.trim().parse().map_err(|_| {
                Error::Parse(format!(
                    "line {line_no}: bad weight {:?}",
                    weight_part.trim()
                ))
            })?;
            if weight == 0 {
                return Err(Error::Parse(format!("line {line_no}: weight must be >= 1")));
            }
            let ranking = ranking_part
                .split('>')
                .map(|t| index(t.trim(), line_no))
                .collect::<Result<Vec<_>>>()?;
            votes.push(Vote::new(ranking, weight)?);
        }
        Election::new(candidates, votes).map_err(|e| Error::Parse(e.to_string()))
    }
}

impl fmt::Display for Election {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "candidates:")?;
        for c in &self.candidates {
            write!(f, " {c}")?;
        }
        writeln!(f)?;
        for v in &self.votes {
            write!(f, "{}:", v.weight)?;
            for (i, &c) in v.ranking.iter().enumerate() {
                if i == 0 {
                    write!(f, " {}", self.candidates[c])?;
                } else {
                    write!(f, " > {}", self.candidates[c])?;
                }
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A size-`k` subset of the roster, stored as sorted candidate indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Committee {
    members: Vec<usize>,
}

impl Committee {
    pub fn new(mut members: Vec<usize>) -> Result<Self> {
        if members.is_empty() {
            return Err(Error::Input("committee must be nonempty".into()));
        }
        members.sort_unstable();
        if members.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::Input("committee members must be distinct".into()));
        }
        Ok(Committee { members })
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn contains(&self, candidate: usize) -> bool {
        self.members.binary_search(&candidate).is_ok()
    }

    pub fn is_subset_of(&self, other: &Committee) -> bool {
        self.members.iter().all(|&c| other.contains(c))
    }
}

/// A committee position: a strictly increasing sequence of `k` positions in
/// `[1, m]`, i.e. an element of `[m]_k`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CommitteePosition {
    m: usize,
    positions: Vec<usize>,
}

impl CommitteePosition {
    pub fn new(m: usize, positions: Vec<usize>) -> Result<Self> {
        if positions.is_empty() || positions.len() > m {
            return Err(Error::Input(format!(
                "committee position must have length in [1, {m}]"
            )));
        }
        let increasing = positions.windows(2).all(|w| w[0] < w[1]);
        if !increasing || positions[0] < 1 || *positions.last().unwrap() > m {
            return Err(Error::Input(format!(
                "positions must be strictly increasing within [1, {m}], got {positions:?}"
            )));
        }
        Ok(CommitteePosition { m, positions })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.positions.len()
    }

    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// The best committee position `(1, ..., k)`.
    pub fn best(m: usize, k: usize) -> Result<Self> {
        CommitteePosition::new(m, (1..=k).collect())
    }

    /// The worst committee position `(m-k+1, ..., m)`.
    pub fn worst(m: usize, k: usize) -> Result<Self> {
        if k > m {
            return Err(Error::Input(format!("k = {k} exceeds m = {m}")));
        }
        CommitteePosition::new(m, (m - k + 1..=m).collect())
    }

    /// Componentwise `<=` against another position of the same shape.
    pub fn weakly_dominates(&self, other: &CommitteePosition) -> Result<bool> {
        if self.m != other.m || self.k() != other.k() {
            return Err(Error::Input(format!(
                "cannot compare positions of shape (m={}, k={}) and (m={}, k={})",
                self.m,
                self.k(),
                other.m,
                other.k()
            )));
        }
        Ok(self
            .positions
            .iter()
            .zip(&other.positions)
            .all(|(a, b)| a <= b))
    }

    /// Weak dominance with at least one strict inequality.
    pub fn dominates(&self, other: &CommitteePosition) -> Result<bool> {
        Ok(self.weakly_dominates(other)? && self.positions != other.positions)
    }

    /// Rank of this position in the lexicographic enumeration of `[m]_k`.
    pub fn lex_rank(&self) -> usize {
        lex_rank(self.m, &self.positions)
    }
}

impl fmt::Display for CommitteePosition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.positions.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, ")")
    }
}

/// Binomial coefficient as usize; saturates are not needed at the supported
/// problem sizes (m <= 20 or so).
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

/// Lexicographic rank of a strictly increasing 1-based sequence in `[m]_k`.
pub(crate) fn lex_rank(m: usize, positions: &[usize]) -> usize {
    let k = positions.len();
    let mut rank = 0usize;
    let mut prev = 0usize;
    for (t, &p) in positions.iter().enumerate() {
        for q in prev + 1..p {
            rank += binomial(m - q, k - t - 1);
        }
        prev = p;
    }
    rank
}

/// All of `[m]_k` in lexicographic order; exactly `C(m, k)` sequences.
pub fn enumerate_positions(m: usize, k: usize) -> Result<Vec<CommitteePosition>> {
    if k == 0 || k > m {
        return Err(Error::Input(format!(
            "need 1 <= k <= m, got k = {k}, m = {m}"
        )));
    }
    let mut out = Vec::with_capacity(binomial(m, k));
    let mut current: Vec<usize> = (1..=k).collect();
    loop {
        out.push(CommitteePosition {
            m,
            positions: current.clone(),
        });
        // Advance to the next combination in lexicographic order.
        let mut i = k;
        while i > 0 && current[i - 1] == m - (k - i) {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        current[i - 1] += 1;
        for j in i..k {
            current[j] = current[j - 1] + 1;
        }
    }
    Ok(out)
}

/// All size-`k` subsets of `{0, ..., m-1}` in lexicographic order.
pub fn enumerate_committees(m: usize, k: usize) -> Result<Vec<Committee>> {
    Ok(enumerate_positions(m, k)?
        .into_iter()
        .map(|cp| Committee {
            members: cp.positions.iter().map(|p| p - 1).collect(),
        })
        .collect())
}
