//! Election constructions and generators: ζ-elections with known winner
//! sets, profile algebra (concatenation, scaling), all-permutation
//! elections, exhaustive profile enumeration, and seeded impartial culture.
//!
//! All randomness is confined to [`impartial_culture`] and is always
//! parameterized by an explicit seed; there is no ambient RNG anywhere in
//! the crate.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::model::{Candidate, Committee, Election, Vote};
use crate::{Error, Result};

/// ζ constructions store (m-1)! explicit rankings; above this the profile
/// no longer fits the intended desk-scale experiments.
const ZETA_MAX_M: usize = 8;

/// The ζ(c) election: (m-1)! unit votes that all rank `center` first,
/// followed by every permutation of the remaining candidates. Under any
/// non-degenerate rule its winners are exactly the committees containing
/// `center`.
pub fn zeta_candidate(roster: &[&str], center: &str) -> Result<Election> {
    let m = roster.len();
    if m < 2 {
        return Err(Error::Input("zeta needs at least two candidates".into()));
    }
    if m > ZETA_MAX_M {
        return Err(Error::Resource(format!(
            "zeta elections are supported up to m = {ZETA_MAX_M}, got m = {m}"
        )));
    }
    let center_idx = roster
        .iter()
        .position(|t| *t == center)
        .ok_or_else(|| Error::Input(format!("unknown candidate {center:?}")))?;
    let candidates = roster
        .iter()
        .map(|t| Candidate::new(*t))
        .collect::<Result<Vec<_>>>()?;
    let others: Vec<usize> = (0..m).filter(|&c| c != center_idx).collect();
    let votes = permutations(&others)
        .into_iter()
        .map(|perm| {
            let mut ranking = Vec::with_capacity(m);
            ranking.push(center_idx);
            ranking.extend(perm);
            Vote::new(ranking, 1)
        })
        .collect::<Result<Vec<_>>>()?;
    Election::new(candidates, votes)
}

/// ζ(S): the concatenation of ζ(c) over the members of `set`.
pub fn zeta_set(roster: &[&str], set: &[&str]) -> Result<Election> {
    if set.is_empty() {
        return Err(Error::Input("zeta set must be nonempty".into()));
    }
    let mut parts = set.iter().map(|c| zeta_candidate(roster, c));
    let mut election = parts.next().expect("nonempty set")?;
    for part in parts {
        election = concat(&election, &part?)?;
    }
    Ok(election)
}

/// An election in which `w1` and `w2` (committees sharing all but one
/// member) are the only winners under every rule that is non-degenerate at
/// this (m, k): ζ(W1 ∪ W2) followed by ζ(W1 ∩ W2).
pub fn two_winner_election(roster: &[&str], w1: &[&str], w2: &[&str]) -> Result<Election> {
    if w1.len() != w2.len() {
        return Err(Error::Input("committees must have equal size".into()));
    }
    let k = w1.len();
    let mut union: Vec<&str> = w1.to_vec();
    for c in w2 {
        if !union.contains(c) {
            union.push(c);
        }
    }
    let intersection: Vec<&str> = w1.iter().copied().filter(|c| w2.contains(c)).collect();
    if intersection.len() + 1 != k || union.len() != k + 1 {
        return Err(Error::Input(
            "committees must share exactly k - 1 members".into(),
        ));
    }
    let mut election = zeta_set(roster, &union)?;
    if !intersection.is_empty() {
        election = concat(&election, &zeta_set(roster, &intersection)?)?;
    }
    Ok(election)
}

/// The fully symmetric election with one unit vote per permutation of the
/// roster (m! votes).
pub fn all_permutations(roster: &[&str]) -> Result<Election> {
    let m = roster.len();
    if m > ZETA_MAX_M {
        return Err(Error::Resource(format!(
            "all-permutation elections are supported up to m = {ZETA_MAX_M}, got m = {m}"
        )));
    }
    let candidates = roster
        .iter()
        .map(|t| Candidate::new(*t))
        .collect::<Result<Vec<_>>>()?;
    let indices: Vec<usize> = (0..m).collect();
    let votes = permutations(&indices)
        .into_iter()
        .map(|perm| Vote::new(perm, 1))
        .collect::<Result<Vec<_>>>()?;
    Election::new(candidates, votes)
}

/// `E1 + E2`: the merged vote multiset over a shared roster.
pub fn concat(e1: &Election, e2: &Election) -> Result<Election> {
    if e1.candidates() != e2.candidates() {
        return Err(Error::Input(
            "elections must share the candidate roster".into(),
        ));
    }
    let mut votes = e1.votes().to_vec();
    votes.extend(e2.votes().iter().cloned());
    Election::new(e1.candidates().to_vec(), votes)
}

/// `λE`: every vote weight multiplied by `lambda`.
pub fn scale(e: &Election, lambda: u64) -> Result<Election> {
    if lambda == 0 {
        return Err(Error::Input("scale factor must be >= 1".into()));
    }
    let votes = e
        .votes()
        .iter()
        .map(|v| Vote::new(v.ranking().to_vec(), v.weight() * lambda))
        .collect::<Result<Vec<_>>>()?;
    Election::new(e.candidates().to_vec(), votes)
}

/// `n` rankings drawn uniformly and independently; deterministic per seed.
pub fn impartial_culture(roster: &[&str], n: usize, seed: u64) -> Result<Election> {
    if n == 0 {
        return Err(Error::Input("impartial culture needs n >= 1".into()));
    }
    let m = roster.len();
    let candidates = roster
        .iter()
        .map(|t| Candidate::new(*t))
        .collect::<Result<Vec<_>>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut votes = Vec::with_capacity(n);
    for _ in 0..n {
        let mut ranking: Vec<usize> = (0..m).collect();
        ranking.shuffle(&mut rng);
        votes.push(Vote::new(ranking, 1)?);
    }
    Election::new(candidates, votes)
}

/// All permutations of `items` in lexicographic order.
fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = items.to_vec();
    current.sort_unstable();
    loop {
        out.push(current.clone());
        // Next permutation in lexicographic order.
        let Some(i) = current.windows(2).rposition(|w| w[0] < w[1]) else {
            break;
        };
        let j = current.iter().rposition(|&x| x > current[i]).unwrap();
        current.swap(i, j);
        current[i + 1..].reverse();
    }
    out
}

/// All strict rankings of `m` candidates (m! index vectors, lexicographic).
pub fn all_rankings(m: usize) -> Vec<Vec<usize>> {
    let indices: Vec<usize> = (0..m).collect();
    permutations(&indices)
}

/// All multisets of size `n` over `{0, ..., items - 1}`, as sorted index
/// vectors. Election profiles are enumerated this way because scoring rules
/// are anonymous: the order of voters never matters.
pub fn ranking_multisets(items: usize, n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut current = vec![0usize; n];
    loop {
        out.push(current.clone());
        let mut i = n;
        while i > 0 && current[i - 1] == items - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        current[i - 1] += 1;
        let v = current[i - 1];
        for j in i..n {
            current[j] = v;
        }
    }
    out
}

/// Builds a weighted election from a multiset of ranking indices (repeated
/// rankings collapse into one weighted vote).
pub fn election_from_multiset(
    roster: &[&str],
    rankings: &[Vec<usize>],
    multiset: &[usize],
) -> Result<Election> {
    let candidates = roster
        .iter()
        .map(|t| Candidate::new(*t))
        .collect::<Result<Vec<_>>>()?;
    let mut votes: Vec<Vote> = Vec::new();
    let mut i = 0;
    while i < multiset.len() {
        let mut j = i;
        while j < multiset.len() && multiset[j] == multiset[i] {
            j += 1;
        }
        votes.push(Vote::new(rankings[multiset[i]].clone(), (j - i) as u64)?);
        i = j;
    }
    Election::new(candidates, votes)
}

/// Convenience: every size-`k` committee of an election's roster.
pub fn committees_of(election: &Election, k: usize) -> Result<Vec<Committee>> {
    crate::model::enumerate_committees(election.num_candidates(), k)
}

/// A seeded random dominance-monotone scoring table over `[m]_k`.
///
/// Values are drawn from a small grid (halves from 0 to 3) and then pushed
/// up just enough to respect dominance, processing positions from the worst
/// upward. A quarter of the draws instead sample a structured shape (a
/// random weakly separable, representation-focused, or top-k-counting
/// table), so searches over these tables actually exercise the class
/// intersections rather than skating past them.
pub fn random_monotone_table(m: usize, k: usize, seed: u64) -> Result<crate::scoring::ScoreTable> {
    use crate::model::enumerate_positions;
    use crate::scoring::{Score, ScoreTable};
    use num_rational::BigRational;
    use rand::Rng;

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x7ab1e5);
    let draw =
        |rng: &mut ChaCha8Rng| -> BigRational { crate::scoring::ratio(rng.random_range(0..=6), 2) };
    let positions = enumerate_positions(m, k)?;
    let values: Vec<BigRational> = match rng.random_range(0..4u8) {
        // A random nonincreasing gamma summed over members.
        0 => {
            let gamma = random_nonincreasing(&mut rng, m);
            positions
                .iter()
                .map(|cp| cp.positions().iter().map(|&p| gamma[p - 1].clone()).sum())
                .collect()
        }
        // A random nonincreasing gamma of the best member.
        1 => {
            let gamma = random_nonincreasing(&mut rng, m);
            positions
                .iter()
                .map(|cp| gamma[cp.positions()[0] - 1].clone())
                .collect()
        }
        // A random nondecreasing counting function of the top-k members.
        2 => {
            let mut g = vec![crate::scoring::rat(0); k + 1];
            for i in 1..=k {
                g[i] = &g[i - 1] + draw(&mut rng);
            }
            positions
                .iter()
                .map(|cp| {
                    let count = cp.positions().iter().filter(|&&p| p <= k).count();
                    g[count].clone()
                })
                .collect()
        }
        // Unstructured: random values repaired into dominance monotonicity.
        _ => {
            let mut values: Vec<BigRational> = positions.iter().map(|_| draw(&mut rng)).collect();
            // Worst positions first: every position must score at least as
            // much as each single-step worsening of it.
            let mut order: Vec<usize> = (0..positions.len()).collect();
            order.sort_by_key(|&r| {
                std::cmp::Reverse(positions[r].positions().iter().sum::<usize>())
            });
            for &r in &order {
                let ps = positions[r].positions();
                for slot in 0..k {
                    let mut worse = ps.to_vec();
                    worse[slot] += 1;
                    if worse[slot] > m || (slot + 1 < k && worse[slot] == ps[slot + 1]) {
                        continue;
                    }
                    let worse_rank = crate::model::lex_rank(m, &worse);
                    if values[r] < values[worse_rank] {
                        values[r] = values[worse_rank].clone();
                    }
                }
            }
            values
        }
    };
    ScoreTable::new(m, k, values.into_iter().map(Score::Exact).collect())
}

fn random_nonincreasing(rng: &mut ChaCha8Rng, m: usize) -> Vec<num_rational::BigRational> {
    use rand::Rng;
    let mut steps: Vec<num_rational::BigRational> = (0..m)
        .map(|_| crate::scoring::ratio(rng.random_range(0..=2), 2))
        .collect();
    // Suffix sums give a nonincreasing, nonnegative sequence.
    for i in (0..m - 1).rev() {
        steps[i] = &steps[i] + &steps[i + 1];
    }
    steps
}
