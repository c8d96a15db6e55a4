//! Explicit scoring tables and the `.fmk` text format.
//!
//! A table assigns a score to every committee position in `[m]_k` and is
//! validated on construction: all `C(m, k)` rows present, values nonnegative,
//! and monotone with respect to weak dominance. In `.fmk` files, values
//! written as `p/q` or as plain integers are exact rationals; values with a
//! decimal point are read as floats (and downstream classification treats
//! the table as float-valued).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::model::{binomial, enumerate_positions, CommitteePosition};
use crate::scoring::{Score, EPSILON};
use crate::{Error, Result};

/// A validated explicit scoring table over `[m]_k`, stored in lexicographic
/// order of committee positions.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoreTable {
    m: usize,
    k: usize,
    values: Vec<Score>,
}

/// A failed validation on a table: a dominating pair scored the wrong way
/// around, or a negative entry.
#[derive(Clone, Debug)]
pub enum TableViolation {
    Dominance {
        dominating: CommitteePosition,
        dominated: CommitteePosition,
        dominating_value: Score,
        dominated_value: Score,
    },
    Negative {
        at: CommitteePosition,
        value: Score,
    },
}

impl fmt::Display for TableViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TableViolation::Dominance {
                dominating,
                dominated,
                dominating_value,
                dominated_value,
            } => write!(
                f,
                "{dominating} dominates {dominated} but {dominating_value} < {dominated_value}"
            ),
            TableViolation::Negative { at, value } => {
                write!(f, "negative value {value} at {at}")
            }
        }
    }
}

impl ScoreTable {
    /// Builds a table from values in lexicographic position order, rejecting
    /// any dominance or nonnegativity violation.
    pub fn new(m: usize, k: usize, values: Vec<Score>) -> Result<Self> {
        if k == 0 || k > m {
            return Err(Error::Input(format!(
                "need 1 <= k <= m, got k = {k}, m = {m}"
            )));
        }
        if values.len() != binomial(m, k) {
            return Err(Error::Input(format!(
                "table for (m={m}, k={k}) needs {} rows, got {}",
                binomial(m, k),
                values.len()
            )));
        }
        let table = ScoreTable { m, k, values };
        let violations = table.violations();
        if let Some(v) = violations.first() {
            return Err(Error::Input(format!(
                "invalid table ({} violation(s)); first: {v}",
                violations.len()
            )));
        }
        Ok(table)
    }

    /// Builds a table without validating dominance monotonicity or
    /// nonnegativity. Intended for negative controls and diagnostics; most
    /// callers want [`ScoreTable::new`].
    #[doc(hidden)]
    pub fn new_unchecked(m: usize, k: usize, values: Vec<Score>) -> Self {
        assert_eq!(values.len(), binomial(m, k), "row count must match C(m, k)");
        ScoreTable { m, k, values }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn values(&self) -> &[Score] {
        &self.values
    }

    pub fn is_float(&self) -> bool {
        self.values.iter().any(|v| !v.is_exact())
    }

    pub fn value(&self, at: &CommitteePosition) -> Result<&Score> {
        if at.m() != self.m || at.k() != self.k {
            return Err(Error::Input(format!(
                "position {at} does not belong to [{}]_{}",
                self.m, self.k
            )));
        }
        Ok(&self.values[at.lex_rank()])
    }

    pub fn value_at_rank(&self, rank: usize) -> &Score {
        &self.values[rank]
    }

    /// Every dominating pair scored the wrong way around, plus every
    /// negative entry. Empty for a valid table.
    pub fn violations(&self) -> Vec<TableViolation> {
        let all = enumerate_positions(self.m, self.k).expect("valid shape");
        let mut out = Vec::new();
        for (r, at) in all.iter().enumerate() {
            if self.values[r].cmp_eps(&Score::zero(), EPSILON) == std::cmp::Ordering::Less {
                out.push(TableViolation::Negative {
                    at: at.clone(),
                    value: self.values[r].clone(),
                });
            }
        }
        for (ri, i) in all.iter().enumerate() {
            for (rj, j) in all.iter().enumerate() {
                if ri != rj
                    && i.dominates(j).expect("same shape")
                    && self.values[ri].cmp_eps(&self.values[rj], EPSILON)
                        == std::cmp::Ordering::Less
                {
                    out.push(TableViolation::Dominance {
                        dominating: i.clone(),
                        dominated: j.clone(),
                        dominating_value: self.values[ri].clone(),
                        dominated_value: self.values[rj].clone(),
                    });
                }
            }
        }
        out
    }

    /// Parses the `.fmk` format:
    ///
    /// ```text
    /// m: 5
    /// k: 2
    /// 1 2 : 3
    /// 1 3 : 5/2
    /// ```
    ///
    /// Exactly `C(m, k)` rows are required, in any order, without
    /// duplicates.
    pub fn parse(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

        let header = |lines: &mut dyn Iterator<Item = (usize, &str)>, key: &str| -> Result<usize> {
            let (no, line) = lines
                .next()
                .ok_or_else(|| Error::Parse(format!("missing '{key}:' header")))?;
            let rest = line
                .strip_prefix(key)
                .and_then(|r| r.trim_start().strip_prefix(':'))
                .ok_or_else(|| Error::Parse(format!("line {no}: expected '{key}: <int>'")))?;
            rest.trim()
                .parse()
                .map_err(|_| Error::Parse(format!("line {no}: bad {key} value")))
        };
        let m = header(&mut lines, "m")?;
        let k = header(&mut lines, "k")?;
        if k == 0 || k > m {
            return Err(Error::Parse(format!(
                "need 1 <= k <= m, got k = {k}, m = {m}"
            )));
        }

        let rows = binomial(m, k);
        let mut values: Vec<Option<Score>> = vec![None; rows];
        for (no, line) in lines {
            let (pos_part, value_part) = line.split_once(':').ok_or_else(|| {
                Error::Parse(format!("line {no}: expected '<positions> : <value>'"))
            })?;
            let positions = pos_part
                .split_whitespace()
                .map(|t| {
                    t.parse::<usize>()
                        .map_err(|_| Error::Parse(format!("line {no}: bad position {t:?}")))
                })
                .collect::<Result<Vec<_>>>()?;
            let cp = CommitteePosition::new(m, positions)
                .map_err(|e| Error::Parse(format!("line {no}: {e}")))?;
            if cp.k() != k {
                return Err(Error::Parse(format!("line {no}: row has length != {k}")));
            }
            let value = parse_score(value_part.trim())
                .map_err(|e| Error::Parse(format!("line {no}: {e}")))?;
            let rank = cp.lex_rank();
            if values[rank].is_some() {
                return Err(Error::Parse(format!("line {no}: duplicate row {cp}")));
            }
            values[rank] = Some(value);
        }
        let mut filled = Vec::with_capacity(rows);
        let all = enumerate_positions(m, k)?;
        for (rank, v) in values.into_iter().enumerate() {
            match v {
                Some(v) => filled.push(v),
                None => {
                    return Err(Error::Parse(format!("missing row for {}", all[rank])));
                }
            }
        }
        ScoreTable::new(m, k, filled).map_err(|e| Error::Parse(e.to_string()))
    }

    pub fn load(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }
}

/// Parses a score literal: `p/q` and plain integers are exact, decimal
/// literals are floats.
pub(crate) fn parse_score(token: &str) -> Result<Score> {
    if let Some((n, d)) = token.split_once('/') {
        let n = BigInt::from_str(n.trim())
            .map_err(|_| Error::Parse(format!("bad numerator in {token:?}")))?;
        let d = BigInt::from_str(d.trim())
            .map_err(|_| Error::Parse(format!("bad denominator in {token:?}")))?;
        if d == BigInt::from(0) {
            return Err(Error::Parse(format!("zero denominator in {token:?}")));
        }
        return Ok(Score::Exact(BigRational::new(n, d)));
    }
    if token.contains('.') {
        let x: f64 = token
            .parse()
            .map_err(|_| Error::Parse(format!("bad decimal {token:?}")))?;
        if !x.is_finite() {
            return Err(Error::Parse(format!("non-finite value {token:?}")));
        }
        return Ok(Score::Real(x));
    }
    let n = BigInt::from_str(token).map_err(|_| Error::Parse(format!("bad value {token:?}")))?;
    Ok(Score::Exact(BigRational::from_integer(n)))
}

impl fmt::Display for ScoreTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "m: {}", self.m)?;
        writeln!(f, "k: {}", self.k)?;
        let all = enumerate_positions(self.m, self.k).expect("valid shape");
        for (rank, cp) in all.iter().enumerate() {
            let mut first = true;
            for p in cp.positions() {
                if first {
                    write!(f, "{p}")?;
                    first = false;
                } else {
                    write!(f, " {p}")?;
                }
            }
            writeln!(f, " : {}", self.values[rank])?;
        }
        Ok(())
    }
}
