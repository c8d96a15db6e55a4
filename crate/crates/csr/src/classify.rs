//! Structural classification of scoring tables: decide membership in each
//! class of the hierarchy (weakly separable, separable across committee
//! sizes, representation-focused, top-k-counting, OWA-based, decomposable),
//! up to positive affine transformation, returning witnesses for members and
//! refutation certificates for non-members.
//!
//! Exact tables are decided with exact rational arithmetic. Float-valued
//! tables run the same procedures under the relative tolerance
//! [`CLASSIFY_EPS`], and their verdicts are flagged approximate.
//!
//! The decomposable and OWA tests work on the slot/position difference
//! matrix: entry `(t, p)` is the score change when the t-th committee member
//! moves from position p+1 to p without passing another member. A table is
//! decomposable iff these differences are well defined (independent of the
//! rest of the committee position), and OWA-based iff the resulting matrix
//! additionally factors as `lambda_t * delta_p` with nonnegative factors.

use std::cmp::Ordering;
use std::fmt;

use crate::model::{enumerate_positions, CommitteePosition};
use crate::scoring::{Rule, Score, ScoreTable};
use crate::{Error, Result};

/// Relative tolerance used by all classification decisions on float tables;
/// exact tables always compare exactly.
pub const CLASSIFY_EPS: f64 = 1e-6;

fn eq(a: &Score, b: &Score) -> bool {
    a.cmp_eps(b, CLASSIFY_EPS) == Ordering::Equal
}

fn lt(a: &Score, b: &Score) -> bool {
    a.cmp_eps(b, CLASSIFY_EPS) == Ordering::Less
}

fn is_zero(a: &Score) -> bool {
    eq(a, &Score::zero())
}

/// A membership verdict for one structural class.
#[derive(Clone, Debug)]
pub enum Verdict {
    Member(Witness),
    NonMember(Certificate),
    /// The test could not be decided (e.g. the difference matrix splits
    /// into independent blocks, leaving the rank-1 factorization
    /// undetermined).
    Unknown(String),
}

impl Verdict {
    pub fn is_member(&self) -> bool {
        matches!(self, Verdict::Member(_))
    }

    pub fn is_non_member(&self) -> bool {
        matches!(self, Verdict::NonMember(_))
    }

    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Member(_) => "member",
            Verdict::NonMember(_) => "non_member",
            Verdict::Unknown(_) => "unknown",
        }
    }
}

/// Evidence of membership.
#[derive(Clone, Debug)]
pub enum Witness {
    /// Constant tables are members of every class with any trivial witness.
    Degenerate,
    /// A single-winner function gamma(1..=m).
    Gamma(Vec<Score>),
    /// Per-slot single-winner functions.
    SlotGammas(Vec<SlotGamma>),
    /// A counting function g(0..=k).
    Counting(Vec<Score>),
    /// Ordered weights and a shared single-winner function.
    Owa {
        weights: Vec<Score>,
        gamma: Vec<Score>,
    },
}

impl fmt::Display for Witness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let list = |f: &mut fmt::Formatter<'_>, values: &[Score]| -> fmt::Result {
            for (i, v) in values.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{v}")?;
            }
            Ok(())
        };
        match self {
            Witness::Degenerate => f.write_str("degenerate"),
            Witness::Gamma(g) => {
                f.write_str("gamma=")?;
                list(f, g)
            }
            Witness::SlotGammas(gs) => {
                for (i, g) in gs.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "gamma{}@{}=", g.slot, g.first_pos)?;
                    list(f, &g.values)?;
                }
                Ok(())
            }
            Witness::Counting(g) => {
                f.write_str("counting=")?;
                list(f, g)
            }
            Witness::Owa { weights, gamma } => {
                f.write_str("weights=")?;
                list(f, weights)?;
                f.write_str(" gamma=")?;
                list(f, gamma)
            }
        }
    }
}

/// One slot function of a decomposition: values of `gamma_t` on its
/// effective domain `{slot, ..., m - k + slot}` (`values[0]` is the value at
/// `first_pos`).
#[derive(Clone, Debug)]
pub struct SlotGamma {
    pub slot: usize,
    pub first_pos: usize,
    pub values: Vec<Score>,
}

impl SlotGamma {
    /// The slot's score step between positions p and p+1, where both are in
    /// domain.
    fn delta(&self, p: usize) -> Option<Score> {
        let i = p.checked_sub(self.first_pos)?;
        let v = self.values.get(i)?;
        let w = self.values.get(i + 1)?;
        Some(v.sub(w))
    }
}

/// Evidence of non-membership.
#[derive(Clone, Debug)]
pub enum Certificate {
    /// A subset of table rows whose defining equations cannot be satisfied
    /// simultaneously.
    InfeasibleSystem {
        rows: Vec<CommitteePosition>,
        detail: String,
    },
    /// The forced single-winner witness increases between two positions.
    NotNonincreasing { position: usize, detail: String },
    /// Two committee positions that the class requires to score equally but
    /// do not.
    ValueMismatch {
        a: CommitteePosition,
        b: CommitteePosition,
        value_a: Score,
        value_b: Score,
    },
    /// The difference of slot `slot` between positions p+1 and p depends on
    /// the rest of the committee position.
    InconsistentDifference {
        slot: usize,
        position: usize,
        pair_a: (CommitteePosition, CommitteePosition),
        pair_b: (CommitteePosition, CommitteePosition),
        delta_a: Score,
        delta_b: Score,
    },
    /// A 2x2 minor of the difference matrix that does not vanish.
    NonzeroMinor {
        slots: (usize, usize),
        positions: (usize, usize),
        entries: [Score; 4],
    },
    /// Weakly-separable witnesses of two committee sizes disagree.
    WitnessMismatch {
        k_a: usize,
        k_b: usize,
        detail: String,
    },
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::InfeasibleSystem { rows, detail } => {
                write!(f, "infeasible equations over rows ")?;
                for (i, r) in rows.iter().enumerate() {
                    if i > 0 {
                        write!(f, " ")?;
                    }
                    write!(f, "{r}")?;
                }
                write!(f, " ({detail})")
            }
            Certificate::NotNonincreasing { position, detail } => {
                write!(
                    f,
                    "forced witness increases at position {position} ({detail})"
                )
            }
            Certificate::ValueMismatch {
                a,
                b,
                value_a,
                value_b,
            } => {
                write!(f, "{a} -> {value_a} but {b} -> {value_b}")
            }
            Certificate::InconsistentDifference {
                slot,
                position,
                pair_a,
                pair_b,
                delta_a,
                delta_b,
            } => write!(
                f,
                "slot {slot} difference at position {position} is ambiguous: \
                 f{}-f{} = {delta_a} but f{}-f{} = {delta_b}",
                pair_a.0, pair_a.1, pair_b.0, pair_b.1
            ),
            Certificate::NonzeroMinor {
                slots,
                positions,
                entries,
            } => write!(
                f,
                "2x2 minor at slots ({},{}) x positions ({},{}) is nonzero: \
                 [{} {}; {} {}]",
                slots.0,
                slots.1,
                positions.0,
                positions.1,
                entries[0],
                entries[1],
                entries[2],
                entries[3]
            ),
            Certificate::WitnessMismatch { k_a, k_b, detail } => {
                write!(
                    f,
                    "witnesses for k={k_a} and k={k_b} are not affinely related ({detail})"
                )
            }
        }
    }
}

/// Verdicts for every table-level class, plus the degeneracy flag.
#[derive(Clone, Debug)]
pub struct ClassReport {
    pub degenerate: bool,
    /// True when the table is float-valued and verdicts carry tolerance.
    pub approx: bool,
    pub weakly_separable: Verdict,
    pub representation_focused: Verdict,
    pub top_k_counting: Verdict,
    pub owa_based: Verdict,
    pub decomposable: Verdict,
}

/// Runs every table-level classifier.
pub fn classify_all(table: &ScoreTable) -> ClassReport {
    ClassReport {
        degenerate: table_degenerate(table),
        approx: table.is_float(),
        weakly_separable: classify_weakly_separable(table),
        representation_focused: classify_representation_focused(table),
        top_k_counting: classify_top_k_counting(table),
        owa_based: classify_owa_based(table),
        decomposable: classify_decomposable(table),
    }
}

fn table_degenerate(table: &ScoreTable) -> bool {
    // By dominance monotonicity the lexicographic extremes are the value
    // extremes.
    let first = table.value_at_rank(0);
    let last = table.value_at_rank(table.len() - 1);
    eq(first, last)
}

/// The set of committee positions whose t-th element equals `p` and which do
/// not contain `p - 1` (so the t-th member can shift forward without
/// passing another member). Empty for `p = 1`: there is no position 0.
pub fn positions_p(m: usize, k: usize, t: usize, p: usize) -> Result<Vec<CommitteePosition>> {
    if t < 1 || t > k || k > m || p < 1 || p > m {
        return Err(Error::Input(format!(
            "need 1 <= t <= k <= m and 1 <= p <= m, got t={t}, k={k}, m={m}, p={p}"
        )));
    }
    if p == 1 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    // t-1 members before position p, avoiding p-1; k-t members after p.
    let before_pool: Vec<usize> = (1..=p.saturating_sub(2)).collect();
    let after_pool: Vec<usize> = (p + 1..=m).collect();
    for before in combinations(&before_pool, t - 1) {
        for after in combinations(&after_pool, k - t) {
            let mut positions = before.clone();
            positions.push(p);
            positions.extend(after.iter().copied());
            out.push(CommitteePosition::new(m, positions)?);
        }
    }
    out.sort();
    Ok(out)
}

/// Union of [`positions_p`] over all slots.
pub fn positions_p_any(m: usize, k: usize, p: usize) -> Result<Vec<CommitteePosition>> {
    let mut out = Vec::new();
    for t in 1..=k {
        out.extend(positions_p(m, k, t, p)?);
    }
    out.sort();
    out.dedup();
    Ok(out)
}

fn combinations(pool: &[usize], r: usize) -> Vec<Vec<usize>> {
    if r == 0 {
        return vec![Vec::new()];
    }
    if r > pool.len() {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        out.push(idx.iter().map(|&i| pool[i]).collect());
        let mut i = r;
        while i > 0 && idx[i - 1] == pool.len() - (r - i) - 1 {
            i -= 1;
        }
        if i == 0 {
            break;
        }
        idx[i - 1] += 1;
        for j in i..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
    out
}

/// One cell of the difference profile.
#[derive(Clone, Debug)]
pub enum DiffEntry {
    /// The common value of f(U') - f(U) over all qualifying U.
    Value(Score),
    /// Two qualifying pairs disagree: the difference is not a function of
    /// (slot, position) alone.
    Inconsistent {
        pair_a: (CommitteePosition, CommitteePosition),
        pair_b: (CommitteePosition, CommitteePosition),
        delta_a: Score,
        delta_b: Score,
    },
}

/// The slot/position difference profile of a table: for each slot t and
/// each position p in `{t, ..., m-k+t-1}`, the score change `h_t(p)` when
/// the t-th member moves from p+1 to p (where that is a legal non-crossing
/// move).
#[derive(Clone, Debug)]
pub struct DifferenceProfile {
    m: usize,
    k: usize,
    /// `rows[t - 1][p - t]` is the entry for slot t at position p.
    rows: Vec<Vec<DiffEntry>>,
    pub consistent: bool,
}

impl DifferenceProfile {
    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// Entry for slot `t` (1-based) at target position `p`, if defined.
    pub fn entry(&self, t: usize, p: usize) -> Option<&DiffEntry> {
        self.rows.get(t - 1)?.get(p.checked_sub(t)?)
    }

    /// Position range of slot `t`: `t ..= m - k + t - 1`.
    pub fn position_range(&self, t: usize) -> std::ops::RangeInclusive<usize> {
        t..=(self.m - self.k + t - 1)
    }
}

/// Computes the difference profile of a validated table.
pub fn extract_differences(table: &ScoreTable) -> DifferenceProfile {
    let m = table.m();
    let k = table.k();
    let mut rows = Vec::with_capacity(k);
    let mut consistent = true;
    for t in 1..=k {
        let mut row = Vec::new();
        for p in t..=(m - k + t - 1) {
            // All U with the t-th member at p+1 and p free.
            let us = positions_p(m, k, t, p + 1).expect("valid arguments");
            debug_assert!(!us.is_empty());
            let shifted = |u: &CommitteePosition| -> CommitteePosition {
                let mut ps = u.positions().to_vec();
                ps[t - 1] = p;
                CommitteePosition::new(m, ps).expect("still strictly increasing")
            };
            let first = &us[0];
            let first_shifted = shifted(first);
            let d0 = table
                .value(&first_shifted)
                .unwrap()
                .sub(table.value(first).unwrap());
            let mut entry = DiffEntry::Value(d0.clone());
            for u in &us[1..] {
                let u_shifted = shifted(u);
                let d = table
                    .value(&u_shifted)
                    .unwrap()
                    .sub(table.value(u).unwrap());
                if !eq(&d, &d0) {
                    consistent = false;
                    entry = DiffEntry::Inconsistent {
                        pair_a: (first_shifted.clone(), first.clone()),
                        pair_b: (u_shifted, u.clone()),
                        delta_a: d0.clone(),
                        delta_b: d,
                    };
                    break;
                }
            }
            row.push(entry);
        }
        rows.push(row);
    }
    DifferenceProfile {
        m,
        k,
        rows,
        consistent,
    }
}

/// Weak separability: is there a nonincreasing `gamma` with
/// `f(I) = sum_t gamma(i_t)` for every I? Decided by elimination on the
/// linear system with one equation per table row. Nonnegativity of `gamma`
/// is not required (it can be absorbed by an affine shift).
pub fn classify_weakly_separable(table: &ScoreTable) -> Verdict {
    if table_degenerate(table) {
        return Verdict::Member(Witness::Degenerate);
    }
    let m = table.m();
    let k = table.k();
    let all = enumerate_positions(m, k).expect("valid shape");

    // One equation per committee position: sum of gamma over its entries.
    let rows: Vec<LinRow> = all
        .iter()
        .enumerate()
        .map(|(r, cp)| {
            let mut coeffs = vec![Score::zero(); m];
            for &p in cp.positions() {
                coeffs[p - 1] = Score::from_int(1);
            }
            LinRow {
                coeffs,
                rhs: table.value_at_rank(r).clone(),
                combo: vec![(r, Score::from_int(1))],
            }
        })
        .collect();

    match solve_linear(rows, m) {
        LinOutcome::Infeasible { combo } => {
            let rows = combo.iter().map(|&(r, _)| all[r].clone()).collect();
            Verdict::NonMember(Certificate::InfeasibleSystem {
                rows,
                detail: "no single-winner function satisfies all rows".into(),
            })
        }
        LinOutcome::Solved(gamma) => {
            for p in 0..m - 1 {
                if lt(&gamma[p], &gamma[p + 1]) {
                    return Verdict::NonMember(Certificate::NotNonincreasing {
                        position: p + 1,
                        detail: format!(
                            "gamma({}) = {} < gamma({}) = {}",
                            p + 1,
                            gamma[p],
                            p + 2,
                            gamma[p + 1]
                        ),
                    });
                }
            }
            Verdict::Member(Witness::Gamma(gamma))
        }
    }
}

struct LinRow {
    coeffs: Vec<Score>,
    rhs: Score,
    /// Provenance: this row as a combination of the original equations.
    combo: Vec<(usize, Score)>,
}

enum LinOutcome {
    Solved(Vec<Score>),
    Infeasible { combo: Vec<(usize, Score)> },
}

/// Gauss-Jordan elimination with provenance tracking. Free variables (which
/// do not occur for the systems built here when k < m) are pinned to zero.
fn solve_linear(mut rows: Vec<LinRow>, vars: usize) -> LinOutcome {
    let mut pivot_of_var: Vec<Option<usize>> = vec![None; vars];
    let mut next_row = 0;
    for var in 0..vars {
        // Partial pivot: the row with the largest coefficient magnitude.
        let pivot = (next_row..rows.len())
            .filter(|&r| !is_zero(&rows[r].coeffs[var]))
            .max_by(|&a, &b| {
                rows[a].coeffs[var]
                    .to_f64()
                    .abs()
                    .partial_cmp(&rows[b].coeffs[var].to_f64().abs())
                    .unwrap_or(Ordering::Equal)
            });
        let Some(pivot) = pivot else {
            continue;
        };
        rows.swap(next_row, pivot);
        let inv = Score::from_int(1).div(&rows[next_row].coeffs[var].clone());
        scale_row(&mut rows[next_row], &inv);
        for r in 0..rows.len() {
            if r != next_row && !is_zero(&rows[r].coeffs[var]) {
                let factor = rows[r].coeffs[var].clone();
                let (src, dst) = if r < next_row {
                    let (lo, hi) = rows.split_at_mut(next_row);
                    (&hi[0], &mut lo[r])
                } else {
                    let (lo, hi) = rows.split_at_mut(r);
                    (&lo[next_row], &mut hi[0])
                };
                subtract_scaled(dst, src, &factor);
            }
        }
        pivot_of_var[var] = Some(next_row);
        next_row += 1;
    }
    // Any remaining row must have reduced to 0 = 0.
    for row in rows.iter().skip(next_row) {
        if !is_zero(&row.rhs) {
            return LinOutcome::Infeasible {
                combo: row.combo.clone(),
            };
        }
    }
    let mut solution = vec![Score::zero(); vars];
    for (var, pivot) in pivot_of_var.iter().enumerate() {
        if let Some(&r) = pivot.as_ref() {
            solution[var] = rows[r].rhs.clone();
        }
    }
    LinOutcome::Solved(solution)
}

fn scale_row(row: &mut LinRow, factor: &Score) {
    for c in &mut row.coeffs {
        *c = c.mul(factor);
    }
    row.rhs = row.rhs.mul(factor);
    for (_, c) in &mut row.combo {
        *c = c.mul(factor);
    }
}

fn subtract_scaled(dst: &mut LinRow, src: &LinRow, factor: &Score) {
    for (d, s) in dst.coeffs.iter_mut().zip(&src.coeffs) {
        *d = d.sub(&s.mul(factor));
    }
    dst.rhs = dst.rhs.sub(&src.rhs.mul(factor));
    for (idx, c) in &src.combo {
        match dst.combo.iter_mut().find(|(i, _)| i == idx) {
            Some((_, existing)) => *existing = existing.sub(&c.mul(factor)),
            None => dst.combo.push((*idx, Score::zero().sub(&c.mul(factor)))),
        }
    }
    dst.combo.retain(|(_, c)| !is_zero(c));
}

/// Separability of a rule across committee sizes at fixed m: the
/// weakly-separable witnesses for every tested k must agree up to positive
/// affine transformation. Committee sizes where the rule is degenerate are
/// skipped.
pub fn classify_separable(rule: &Rule, m: usize, ks: &[usize]) -> Result<Verdict> {
    let mut reference: Option<(usize, Vec<Score>)> = None;
    for &k in ks {
        let table = rule.scoring_function(m, k)?.tabulate()?;
        if table_degenerate(&table) {
            continue;
        }
        let gamma = match classify_weakly_separable(&table) {
            Verdict::Member(Witness::Gamma(g)) => g,
            Verdict::Member(_) => unreachable!("non-degenerate member carries a gamma"),
            Verdict::NonMember(c) => return Ok(Verdict::NonMember(c)),
            Verdict::Unknown(r) => return Ok(Verdict::Unknown(r)),
        };
        // Normalize to gamma(1) = 1, gamma(m) = 0. The table is
        // non-degenerate, so gamma(1) > gamma(m).
        let spread = gamma[0].sub(&gamma[m - 1]);
        debug_assert!(!is_zero(&spread));
        let base = gamma[m - 1].clone();
        let normalized: Vec<Score> = gamma.iter().map(|g| g.sub(&base).div(&spread)).collect();
        match &reference {
            None => reference = Some((k, normalized)),
            Some((k0, reference)) => {
                for p in 0..m {
                    if !eq(&normalized[p], &reference[p]) {
                        return Ok(Verdict::NonMember(Certificate::WitnessMismatch {
                            k_a: *k0,
                            k_b: k,
                            detail: format!(
                                "normalized gamma({}) is {} vs {}",
                                p + 1,
                                reference[p],
                                normalized[p]
                            ),
                        }));
                    }
                }
            }
        }
    }
    Ok(match reference {
        Some((_, gamma)) => Verdict::Member(Witness::Gamma(gamma)),
        // Degenerate at every tested size.
        None => Verdict::Member(Witness::Degenerate),
    })
}

/// Representation focus: the score may depend only on the best member's
/// position.
pub fn classify_representation_focused(table: &ScoreTable) -> Verdict {
    if table_degenerate(table) {
        return Verdict::Member(Witness::Degenerate);
    }
    let m = table.m();
    let k = table.k();
    let all = enumerate_positions(m, k).expect("valid shape");
    let mut by_first: Vec<Option<(usize, Score)>> = vec![None; m + 1];
    for (r, cp) in all.iter().enumerate() {
        let first = cp.positions()[0];
        let value = table.value_at_rank(r);
        match &by_first[first] {
            None => by_first[first] = Some((r, value.clone())),
            Some((r0, v0)) => {
                if !eq(v0, value) {
                    return Verdict::NonMember(Certificate::ValueMismatch {
                        a: all[*r0].clone(),
                        b: cp.clone(),
                        value_a: v0.clone(),
                        value_b: value.clone(),
                    });
                }
            }
        }
    }
    // gamma(i1) read off the table; the unreachable tail keeps the last
    // reachable value so the witness stays nonincreasing.
    let mut gamma = Vec::with_capacity(m);
    let mut last = Score::zero();
    for p in 1..=m {
        if let Some((_, v)) = &by_first[p] {
            last = v.clone();
        }
        gamma.push(last.clone());
    }
    Verdict::Member(Witness::Gamma(gamma))
}

/// Top-k-counting: the score may depend only on how many members the voter
/// ranks within the top k.
pub fn classify_top_k_counting(table: &ScoreTable) -> Verdict {
    if table_degenerate(table) {
        return Verdict::Member(Witness::Degenerate);
    }
    let m = table.m();
    let k = table.k();
    let all = enumerate_positions(m, k).expect("valid shape");
    let mut by_count: Vec<Option<(usize, Score)>> = vec![None; k + 1];
    for (r, cp) in all.iter().enumerate() {
        let count = cp.positions().iter().filter(|&&p| p <= k).count();
        let value = table.value_at_rank(r);
        match &by_count[count] {
            None => by_count[count] = Some((r, value.clone())),
            Some((r0, v0)) => {
                if !eq(v0, value) {
                    return Verdict::NonMember(Certificate::ValueMismatch {
                        a: all[*r0].clone(),
                        b: cp.clone(),
                        value_a: v0.clone(),
                        value_b: value.clone(),
                    });
                }
            }
        }
    }
    // Counts below 2k - m are unachievable; extend with the first reachable
    // value so the witness stays nondecreasing.
    let first_value = by_count
        .iter()
        .flatten()
        .next()
        .map(|(_, v)| v.clone())
        .expect("nonempty table");
    let mut counting = Vec::with_capacity(k + 1);
    let mut last = first_value;
    for entry in &by_count {
        if let Some((_, v)) = entry {
            last = v.clone();
        }
        counting.push(last.clone());
    }
    Verdict::Member(Witness::Counting(counting))
}

/// Decomposability: is there a per-slot family `gamma_t` (each nonincreasing
/// on its effective domain) with `f(I) = sum_t gamma_t(i_t)`? Equivalent to
/// the slot/position differences being well defined, which also yields the
/// witness: pin `gamma_t(m-k+t) = 0` for t >= 2, anchor slot 1 at the worst
/// committee position's value, and integrate the differences.
pub fn classify_decomposable(table: &ScoreTable) -> Verdict {
    if table_degenerate(table) {
        return Verdict::Member(Witness::Degenerate);
    }
    match decomposition_witness(table) {
        Ok(slot_gammas) => Verdict::Member(Witness::SlotGammas(slot_gammas)),
        Err(certificate) => Verdict::NonMember(*certificate),
    }
}

/// The decomposition witness of a table, or the certificate refuting one.
pub fn decomposition_witness(
    table: &ScoreTable,
) -> std::result::Result<Vec<SlotGamma>, Box<Certificate>> {
    let m = table.m();
    let k = table.k();
    let profile = extract_differences(table);
    for t in 1..=k {
        for p in profile.position_range(t) {
            match profile.entry(t, p).expect("in range") {
                DiffEntry::Value(v) => {
                    // Validated tables cannot produce negative differences;
                    // unchecked diagnostic tables can.
                    if lt(v, &Score::zero()) {
                        return Err(Box::new(Certificate::NotNonincreasing {
                            position: p,
                            detail: format!("slot {t} step at {p} is negative: {v}"),
                        }));
                    }
                }
                DiffEntry::Inconsistent {
                    pair_a,
                    pair_b,
                    delta_a,
                    delta_b,
                } => {
                    return Err(Box::new(Certificate::InconsistentDifference {
                        slot: t,
                        position: p,
                        pair_a: pair_a.clone(),
                        pair_b: pair_b.clone(),
                        delta_a: delta_a.clone(),
                        delta_b: delta_b.clone(),
                    }));
                }
            }
        }
    }
    // Integrate the differences from the bottom of each slot's domain.
    let worst = CommitteePosition::worst(m, k).expect("valid shape");
    let worst_value = table.value(&worst).expect("in table").clone();
    let mut slot_gammas = Vec::with_capacity(k);
    for t in 1..=k {
        let first_pos = t;
        let last_pos = m - k + t;
        let anchor = if t == 1 {
            worst_value.clone()
        } else {
            Score::zero()
        };
        let mut values = vec![Score::zero(); last_pos - first_pos + 1];
        values[last_pos - first_pos] = anchor;
        for p in (first_pos..last_pos).rev() {
            let h = match profile.entry(t, p).expect("in range") {
                DiffEntry::Value(v) => v.clone(),
                DiffEntry::Inconsistent { .. } => unreachable!("checked above"),
            };
            values[p - first_pos] = values[p - first_pos + 1].add(&h);
        }
        slot_gammas.push(SlotGamma {
            slot: t,
            first_pos,
            values,
        });
    }
    // Exact tables always pass this check (the sums telescope); float
    // tolerances can drift, and a drifted witness must not count as one.
    let all = enumerate_positions(m, k).expect("valid shape");
    for (r, cp) in all.iter().enumerate() {
        let mut sum = Score::zero();
        for (t, &p) in cp.positions().iter().enumerate() {
            sum = sum.add(&slot_gammas[t].values[p - slot_gammas[t].first_pos]);
        }
        if !eq(&sum, table.value_at_rank(r)) {
            return Err(Box::new(Certificate::InfeasibleSystem {
                rows: vec![cp.clone()],
                detail: format!(
                    "integrated differences give {sum}, table says {}",
                    table.value_at_rank(r)
                ),
            }));
        }
    }
    Ok(slot_gammas)
}

/// OWA membership: requires decomposability, then a nonnegative rank-1
/// factorization `D[t][p] = lambda_t * delta_p` of the difference matrix on
/// its staircase-shaped domain. When the nonzero rows of the matrix split
/// into blocks that share no informative column, rank-1 consistency cannot
/// be decided locally and the verdict is `unknown`.
pub fn classify_owa_based(table: &ScoreTable) -> Verdict {
    if table_degenerate(table) {
        return Verdict::Member(Witness::Degenerate);
    }
    if let Err(certificate) = decomposition_witness(table) {
        return Verdict::NonMember(*certificate);
    }
    let m = table.m();
    let k = table.k();
    let profile = extract_differences(table);
    let value = |t: usize, p: usize| -> Score {
        match profile.entry(t, p) {
            Some(DiffEntry::Value(v)) => v.clone(),
            _ => unreachable!("decomposability established all entries"),
        }
    };

    // Rows with at least one nonzero entry; the others take weight zero.
    let nonzero_rows: Vec<usize> = (1..=k)
        .filter(|&t| profile.position_range(t).any(|p| !is_zero(&value(t, p))))
        .collect();
    if nonzero_rows.is_empty() {
        // All differences vanish only for constant tables, which were
        // handled above.
        return Verdict::Member(Witness::Degenerate);
    }

    // A zero entry in a weighted row forces delta(p) = 0, contradicting any
    // positive entry in that column.
    for &t in &nonzero_rows {
        for p in profile.position_range(t) {
            if !is_zero(&value(t, p)) {
                continue;
            }
            for &t2 in &nonzero_rows {
                if t2 == t || !profile.position_range(t2).contains(&p) {
                    continue;
                }
                if !is_zero(&value(t2, p)) {
                    let certificate = find_nonzero_minor(&profile, &value, t, t2, p).unwrap_or(
                        Certificate::InfeasibleSystem {
                            rows: Vec::new(),
                            detail: format!(
                                "slot {t} forces a zero column at position {p}, \
                                 slot {t2} has a positive entry there"
                            ),
                        },
                    );
                    return Verdict::NonMember(certificate);
                }
            }
        }
    }

    // Connect weighted rows that share a column where both are positive.
    let mut component: Vec<usize> = (0..=k).collect();
    for (i, &t1) in nonzero_rows.iter().enumerate() {
        for &t2 in nonzero_rows.iter().skip(i + 1) {
            let linked = profile.position_range(t1).any(|p| {
                profile.position_range(t2).contains(&p)
                    && !is_zero(&value(t1, p))
                    && !is_zero(&value(t2, p))
            });
            if linked {
                let (a, b) = (component[t1], component[t2]);
                if a != b {
                    for c in component.iter_mut() {
                        if *c == b {
                            *c = a;
                        }
                    }
                }
            }
        }
    }
    let mut blocks: Vec<Vec<usize>> = Vec::new();
    {
        let mut seen: Vec<usize> = Vec::new();
        for &t in &nonzero_rows {
            match seen.iter().position(|&c| c == component[t]) {
                Some(i) => blocks[i].push(t),
                None => {
                    seen.push(component[t]);
                    blocks.push(vec![t]);
                }
            }
        }
    }
    if blocks.len() > 1 {
        let described: Vec<String> = blocks
            .iter()
            .map(|b| {
                format!(
                    "{{{}}}",
                    b.iter()
                        .map(|t| t.to_string())
                        .collect::<Vec<_>>()
                        .join(",")
                )
            })
            .collect();
        return Verdict::Unknown(format!(
            "difference matrix splits into independent slot blocks {}; \
             rank-1 factorization is undetermined on this table",
            described.join(" ")
        ));
    }

    // Propagate weights across the single component.
    let mut lambda: Vec<Option<Score>> = vec![None; k + 1];
    lambda[nonzero_rows[0]] = Some(Score::from_int(1));
    let mut queue = vec![nonzero_rows[0]];
    while let Some(t1) = queue.pop() {
        let l1 = lambda[t1].clone().unwrap();
        for &t2 in &nonzero_rows {
            if lambda[t2].is_some() {
                continue;
            }
            let link = profile.position_range(t1).find(|&p| {
                profile.position_range(t2).contains(&p)
                    && !is_zero(&value(t1, p))
                    && !is_zero(&value(t2, p))
            });
            if let Some(p) = link {
                let ratio = value(t2, p).div(&value(t1, p));
                lambda[t2] = Some(l1.mul(&ratio));
                queue.push(t2);
            }
        }
    }

    // Read delta off any weighted row, then cross-check every cell (this
    // covers all 2x2 minors with defined entries).
    let mut delta: Vec<Option<Score>> = vec![None; m]; // delta[p - 1]
    for &t in &nonzero_rows {
        let l = lambda[t].clone().unwrap();
        for p in profile.position_range(t) {
            let expected = value(t, p).div(&l);
            match &delta[p - 1] {
                None => delta[p - 1] = Some(expected),
                Some(existing) => {
                    if !eq(existing, &expected) {
                        let certificate = find_any_nonzero_minor(&profile, &value).unwrap_or(
                            Certificate::InfeasibleSystem {
                                rows: Vec::new(),
                                detail: format!("column {p} is not rank-1 consistent"),
                            },
                        );
                        return Verdict::NonMember(certificate);
                    }
                }
            }
        }
    }

    // Build gamma from the deltas (unconstrained columns default to zero),
    // then anchor so the witness reproduces the table exactly.
    let mut gamma = vec![Score::zero(); m];
    for p in (1..m).rev() {
        let step = delta[p - 1].clone().unwrap_or_else(Score::zero);
        gamma[p - 1] = gamma[p].add(&step);
    }
    let weights: Vec<Score> = (1..=k)
        .map(|t| lambda[t].clone().unwrap_or_else(Score::zero))
        .collect();
    let weight_sum = weights.iter().fold(Score::zero(), |acc, w| acc.add(w));
    let worst = CommitteePosition::worst(m, k).expect("valid shape");
    let mut at_worst = Score::zero();
    for (t, &p) in worst.positions().iter().enumerate() {
        at_worst = at_worst.add(&weights[t].mul(&gamma[p - 1]));
    }
    let shift = table
        .value(&worst)
        .expect("in table")
        .sub(&at_worst)
        .div(&weight_sum);
    for g in &mut gamma {
        *g = g.add(&shift);
    }

    // Final verification over the whole table.
    let all = enumerate_positions(m, k).expect("valid shape");
    for (r, cp) in all.iter().enumerate() {
        let mut sum = Score::zero();
        for (t, &p) in cp.positions().iter().enumerate() {
            sum = sum.add(&weights[t].mul(&gamma[p - 1]));
        }
        if !eq(&sum, table.value_at_rank(r)) {
            let certificate =
                find_any_nonzero_minor(&profile, &value).unwrap_or(Certificate::InfeasibleSystem {
                    rows: vec![cp.clone()],
                    detail: format!(
                        "factored weights give {sum}, table says {}",
                        table.value_at_rank(r)
                    ),
                });
            return Verdict::NonMember(certificate);
        }
    }
    Verdict::Member(Witness::Owa { weights, gamma })
}

/// Searches for a nonvanishing 2x2 minor involving the two given rows, with
/// one column at `p`.
fn find_nonzero_minor(
    profile: &DifferenceProfile,
    value: &dyn Fn(usize, usize) -> Score,
    t1: usize,
    t2: usize,
    p: usize,
) -> Option<Certificate> {
    for p2 in profile.position_range(t1) {
        if p2 == p || !profile.position_range(t2).contains(&p2) {
            continue;
        }
        let entries = [value(t1, p), value(t1, p2), value(t2, p), value(t2, p2)];
        let minor = entries[0]
            .mul(&entries[3])
            .sub(&entries[1].mul(&entries[2]));
        if !is_zero(&minor) {
            return Some(Certificate::NonzeroMinor {
                slots: (t1, t2),
                positions: (p, p2),
                entries,
            });
        }
    }
    None
}

/// Searches all slot pairs and column pairs for a nonvanishing minor.
fn find_any_nonzero_minor(
    profile: &DifferenceProfile,
    value: &dyn Fn(usize, usize) -> Score,
) -> Option<Certificate> {
    let k = profile.k();
    for t1 in 1..=k {
        for t2 in t1 + 1..=k {
            for p in profile.position_range(t1) {
                if !profile.position_range(t2).contains(&p) {
                    continue;
                }
                if let Some(c) = find_nonzero_minor(profile, value, t1, t2, p) {
                    return Some(c);
                }
            }
        }
    }
    None
}

/// A reported violation of the prefix-monotonicity sufficient conditions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PrefixViolation {
    /// Within a slot, the score step grows again: step(p) < step(p2) for
    /// p < p2.
    Convexity { slot: usize, p: usize, p2: usize },
    /// An earlier slot decreases slower than a later one at position p.
    CrossSlot {
        slot_earlier: usize,
        slot_later: usize,
        p: usize,
    },
}

/// Checks the sufficient conditions for prefix monotonicity of a
/// decomposition: (i) each slot function has nonincreasing steps
/// (convexity), and (ii) earlier slots decrease at least as fast as later
/// ones wherever both steps are defined within the stated ranges.
pub fn check_prefix_sufficient(
    m: usize,
    k: usize,
    gammas: &[SlotGamma],
) -> (bool, Vec<PrefixViolation>) {
    let mut violations = Vec::new();
    for g in gammas {
        let lo = g.first_pos;
        let hi = g.first_pos + g.values.len() - 1;
        for p in lo..hi {
            for p2 in p + 1..hi {
                let (Some(dp), Some(dp2)) = (g.delta(p), g.delta(p2)) else {
                    continue;
                };
                if lt(&dp, &dp2) {
                    violations.push(PrefixViolation::Convexity {
                        slot: g.slot,
                        p,
                        p2,
                    });
                }
            }
        }
    }
    for gi in gammas {
        for gj in gammas {
            if gj.slot <= gi.slot {
                continue;
            }
            // Stated range: slot_j <= p < m - (k - slot_i).
            let lo = gj.slot.max(gi.first_pos).max(gj.first_pos);
            let hi = m - (k - gi.slot);
            for p in lo..hi {
                let (Some(di), Some(dj)) = (gi.delta(p), gj.delta(p)) else {
                    continue;
                };
                if lt(&di, &dj) {
                    violations.push(PrefixViolation::CrossSlot {
                        slot_earlier: gi.slot,
                        slot_later: gj.slot,
                        p,
                    });
                }
            }
        }
    }
    (violations.is_empty(), violations)
}

/// Builds a full-domain slot function from per-position values.
pub fn slot_gamma_full(slot: usize, values: Vec<Score>) -> SlotGamma {
    SlotGamma {
        slot,
        first_pos: 1,
        values,
    }
}

/// Are the two tables related by `f = a * g + b` with `a > 0`? Returns the
/// witness when they are.
pub fn affine_equivalent(f: &ScoreTable, g: &ScoreTable) -> Result<Option<(Score, Score)>> {
    if f.m() != g.m() || f.k() != g.k() {
        return Err(Error::Input(format!(
            "tables have different shapes: (m={}, k={}) vs (m={}, k={})",
            f.m(),
            f.k(),
            g.m(),
            g.k()
        )));
    }
    let n = f.len();
    let pivot = (1..n).find(|&r| !eq(g.value_at_rank(r), g.value_at_rank(0)));
    let (a, b) = match pivot {
        None => {
            // g is constant: equivalence forces f constant too.
            if (1..n).any(|r| !eq(f.value_at_rank(r), f.value_at_rank(0))) {
                return Ok(None);
            }
            (
                Score::from_int(1),
                f.value_at_rank(0).sub(g.value_at_rank(0)),
            )
        }
        Some(r) => {
            let df = f.value_at_rank(r).sub(f.value_at_rank(0));
            let dg = g.value_at_rank(r).sub(g.value_at_rank(0));
            let a = df.div(&dg);
            let b = f.value_at_rank(0).sub(&a.mul(g.value_at_rank(0)));
            (a, b)
        }
    };
    if a.cmp_eps(&Score::zero(), CLASSIFY_EPS) != Ordering::Greater {
        return Ok(None);
    }
    for r in 0..n {
        let expected = a.mul(g.value_at_rank(r)).add(&b);
        if !eq(f.value_at_rank(r), &expected) {
            return Ok(None);
        }
    }
    Ok(Some((a, b)))
}
