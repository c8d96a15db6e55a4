//! Scoring functions: the built-in rule catalog, generic parametric
//! families, explicit tables, and exact/float score values.
//!
//! Rational-valued families are evaluated in exact rational arithmetic end to
//! end. The two families with genuinely irrational values (`lpborda` with
//! p > 1, `qhb` with non-integer exponent) evaluate to floats, and every
//! equality or tie decision on float scores uses the relative tolerance
//! [`EPSILON`].

mod rule;
mod table;

pub use rule::{catalog, parse_rule, PavParam, Rule, RuleSpec};
pub use table::{ScoreTable, TableViolation};

use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};

use crate::model::{Committee, CommitteePosition, Election};
use crate::{Error, Result};

/// Relative tolerance for float score comparisons.
pub const EPSILON: f64 = 1e-9;

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// A score value: an exact rational, or a float for the irrational-valued
/// families. Exact values compare exactly; any comparison involving a float
/// uses the relative tolerance [`EPSILON`] (or a caller-supplied one).
#[derive(Clone, Debug, PartialEq)]
pub enum Score {
    Exact(BigRational),
    Real(f64),
}

impl Score {
    pub fn zero() -> Self {
        Score::Exact(BigRational::zero())
    }

    pub fn from_int(n: i64) -> Self {
        Score::Exact(rat(n))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Score::Exact(ratio(n, d))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Score::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&BigRational> {
        match self {
            Score::Exact(r) => Some(r),
            Score::Real(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Score::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Score::Real(x) => *x,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Score::Exact(r) => r.is_negative(),
            Score::Real(x) => *x < 0.0,
        }
    }

    pub fn add(&self, other: &Score) -> Score {
        match (self, other) {
            (Score::Exact(a), Score::Exact(b)) => Score::Exact(a + b),
            _ => Score::Real(self.to_f64() + other.to_f64()),
        }
    }

    pub fn sub(&self, other: &Score) -> Score {
        match (self, other) {
            (Score::Exact(a), Score::Exact(b)) => Score::Exact(a - b),
            _ => Score::Real(self.to_f64() - other.to_f64()),
        }
    }

    pub fn mul(&self, other: &Score) -> Score {
        match (self, other) {
            (Score::Exact(a), Score::Exact(b)) => Score::Exact(a * b),
            _ => Score::Real(self.to_f64() * other.to_f64()),
        }
    }

    /// Division; the caller must rule out a zero divisor.
    pub fn div(&self, other: &Score) -> Score {
        match (self, other) {
            (Score::Exact(a), Score::Exact(b)) => Score::Exact(a / b),
            _ => Score::Real(self.to_f64() / other.to_f64()),
        }
    }

    pub fn mul_weight(&self, w: u64) -> Score {
        match self {
            Score::Exact(r) => Score::Exact(r * BigRational::from_integer(BigInt::from(w))),
            Score::Real(x) => Score::Real(x * w as f64),
        }
    }

    /// Three-way comparison at the given relative tolerance. Two exact
    /// scores compare exactly regardless of the tolerance.
    pub fn cmp_eps(&self, other: &Score, rel_eps: f64) -> Ordering {
        match (self, other) {
            (Score::Exact(a), Score::Exact(b)) => a.cmp(b),
            _ => {
                let a = self.to_f64();
                let b = other.to_f64();
                let tol = rel_eps * a.abs().max(b.abs()).max(1.0);
                if (a - b).abs() <= tol {
                    Ordering::Equal
                } else if a < b {
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            }
        }
    }

    pub fn approx_eq(&self, other: &Score) -> bool {
        self.cmp_eps(other, EPSILON) == Ordering::Equal
    }

    pub fn approx_ge(&self, other: &Score) -> bool {
        self.cmp_eps(other, EPSILON) != Ordering::Less
    }
}

/// Formats a float with 12 fractional digits, trailing zeros trimmed.
pub(crate) fn format_real(x: f64) -> String {
    let s = format!("{x:.12}");
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s.is_empty() || s == "-" {
        "0".to_string()
    } else {
        s.to_string()
    }
}

impl fmt::Display for Score {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Score::Exact(r) => {
                if r.is_integer() {
                    write!(f, "{}", r.numer())
                } else {
                    write!(f, "{}/{}", r.numer(), r.denom())
                }
            }
            Score::Real(x) => f.write_str(&format_real(*x)),
        }
    }
}

/// A single-winner scoring function: nonincreasing and nonnegative over
/// positions `1..=m`.
#[derive(Clone, Debug, PartialEq)]
pub enum SingleWinnerScoring {
    /// Borda scores `m - pos`.
    Borda { m: usize },
    /// `t`-approval: 1 for positions `<= t`, 0 otherwise.
    TApproval { t: usize },
    /// An explicit value per position, `values[pos - 1]`.
    Explicit(Vec<BigRational>),
}

impl SingleWinnerScoring {
    pub fn explicit(values: Vec<BigRational>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::Input(
                "explicit scoring needs at least one value".into(),
            ));
        }
        if values.windows(2).any(|w| w[0] < w[1]) {
            return Err(Error::Input(
                "single-winner scores must be nonincreasing".into(),
            ));
        }
        if values.last().unwrap().is_negative() {
            return Err(Error::Input(
                "single-winner scores must be nonnegative".into(),
            ));
        }
        Ok(SingleWinnerScoring::Explicit(values))
    }

    /// Value at a 1-based position.
    pub fn eval(&self, pos: usize) -> Result<BigRational> {
        match self {
            SingleWinnerScoring::Borda { m } => {
                if pos < 1 || pos > *m {
                    return Err(Error::Input(format!("position {pos} outside [1, {m}]")));
                }
                Ok(rat((*m - pos) as i64))
            }
            SingleWinnerScoring::TApproval { t } => {
                if pos < 1 {
                    return Err(Error::Input("positions are 1-based".into()));
                }
                Ok(if pos <= *t { rat(1) } else { rat(0) })
            }
            SingleWinnerScoring::Explicit(values) => values
                .get(pos - 1)
                .cloned()
                .ok_or_else(|| Error::Input(format!("position {pos} outside explicit table"))),
        }
    }
}

/// Non-integer exponents of the harmonic-Borda family force float scores;
/// integer exponents stay exact.
#[derive(Clone, Debug, PartialEq)]
pub enum QExponent {
    Int(u32),
    Real(f64),
}

/// A committee scoring function for fixed `(m, k)`: maps every committee
/// position in `[m]_k` to a nonnegative score, monotone with respect to weak
/// dominance.
#[derive(Clone, Debug, PartialEq)]
pub struct ScoringFunction {
    m: usize,
    k: usize,
    family: Family,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    /// `alpha_1(i_1)`: a point for the voter's top choice.
    Sntv,
    /// `sum_t alpha_k(i_t)`: members ranked within the top k.
    Bloc,
    /// `sum_t beta_m(i_t)`: the sum of members' Borda scores.
    KBorda,
    /// `beta_m(i_1)`: the Borda score of the best-ranked member.
    CcBorda,
    /// `alpha_k(i_1)`: is the best-ranked member within the top k?
    CcApproval,
    /// `sum_t alpha_t0(i_t) / t`: harmonic weights over approved members.
    Pav { t: usize },
    /// `sum_t beta_m(i_t) / t^q`.
    Qhb { q: QExponent },
    /// `(sum_t beta_m(i_t)^p)^(1/p)`.
    LpBorda { p: f64 },
    /// `alpha_k(i_k)`: a point iff the whole committee is in the top k.
    Perfectionist,
    /// `alpha_1(i_1) + alpha_k(i_k)`.
    SntvPlusPerf,
    /// Constant zero.
    Trivial,
    /// `sum_t lambda_t * alpha_{t_t}(i_t)`.
    Multithreshold {
        weights: Vec<BigRational>,
        thresholds: Vec<usize>,
    },
    /// `max_t alpha_{t_t}(i_t)`.
    MaxThreshold { thresholds: Vec<usize> },
    /// `sum_t lambda_t * gamma(i_t)` for a fixed single-winner function.
    Owa {
        weights: Vec<BigRational>,
        gamma: SingleWinnerScoring,
    },
    /// `sum_t gamma_t(i_t)` with a per-slot single-winner function.
    Decomposable { gammas: Vec<SingleWinnerScoring> },
    /// `g(|{t : i_t <= k}|)` for a nondecreasing counting function g.
    TopKCounting { counts: Vec<BigRational> },
    /// An explicit, validated table over `[m]_k`.
    Table(ScoreTable),
}

fn check_mk(m: usize, k: usize) -> Result<()> {
    if k == 0 || k > m {
        return Err(Error::Input(format!(
            "need 1 <= k <= m, got k = {k}, m = {m}"
        )));
    }
    Ok(())
}

impl ScoringFunction {
    fn from_family(m: usize, k: usize, family: Family) -> Result<Self> {
        check_mk(m, k)?;
        Ok(ScoringFunction { m, k, family })
    }

    pub fn sntv(m: usize, k: usize) -> Result<Self> {
        Self::from_family(m, k, Family::Sntv)
    }

    pub fn bloc(m: usize, k: usize) -> Result<Self> {
        Self::from_family(m, k, Family::Bloc)
    }

    pub fn k_borda(m: usize, k: usize) -> Result<Self> {
        Self::from_family(m, k, Family::KBorda)
    }

    pub fn cc_borda(m: usize, k: usize) -> Result<Self> {
        Self::from_family(m, k, Family::CcBorda)
    }

    pub fn cc_approval(m: usize, k: usize) -> Result<Self> {
        Self::from_family(m, k, Family::CcApproval)
    }

    pub fn pav(m: usize, k: usize, t: usize) -> Result<Self> {
        if t < 1 || t > m {
            return Err(Error::Input(format!(
                "pav threshold t = {t} outside [1, {m}]"
            )));
        }
        Self::from_family(m, k, Family::Pav { t })
    }

    pub fn qhb(m: usize, k: usize, q: QExponent) -> Result<Self> {
        if let QExponent::Real(q) = q {
            if !(q >= 0.0) {
                return Err(Error::Input(format!("qhb exponent must be >= 0, got {q}")));
            }
        }
        Self::from_family(m, k, Family::Qhb { q })
    }

    pub fn lp_borda(m: usize, k: usize, p: f64) -> Result<Self> {
        if !(p >= 1.0) {
            return Err(Error::Input(format!(
                "lpborda exponent must be >= 1, got {p}"
            )));
        }
        Self::from_family(m, k, Family::LpBorda { p })
    }

    pub fn perfectionist(m: usize, k: usize) -> Result<Self> {
        Self::from_family(m, k, Family::Perfectionist)
    }

    pub fn sntv_plus_perf(m: usize, k: usize) -> Result<Self> {
        Self::from_family(m, k, Family::SntvPlusPerf)
    }

    pub fn trivial(m: usize, k: usize) -> Result<Self> {
        Self::from_family(m, k, Family::Trivial)
    }

    pub fn multithreshold(
        m: usize,
        k: usize,
        weights: Vec<BigRational>,
        thresholds: Vec<usize>,
    ) -> Result<Self> {
        check_mk(m, k)?;
        if weights.len() != k || thresholds.len() != k {
            return Err(Error::Input(format!(
                "multithreshold needs {k} weights and {k} thresholds"
            )));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Input(
                "multithreshold weights must be nonnegative".into(),
            ));
        }
        if thresholds.iter().any(|&t| t < 1 || t > m) {
            return Err(Error::Input(format!("thresholds must lie in [1, {m}]")));
        }
        Self::from_family(
            m,
            k,
            Family::Multithreshold {
                weights,
                thresholds,
            },
        )
    }

    pub fn max_threshold(m: usize, k: usize, thresholds: Vec<usize>) -> Result<Self> {
        check_mk(m, k)?;
        if thresholds.len() != k {
            return Err(Error::Input(format!("maxthreshold needs {k} thresholds")));
        }
        if thresholds.iter().any(|&t| t < 1 || t > m) {
            return Err(Error::Input(format!("thresholds must lie in [1, {m}]")));
        }
        Self::from_family(m, k, Family::MaxThreshold { thresholds })
    }

    pub fn owa(
        m: usize,
        k: usize,
        weights: Vec<BigRational>,
        gamma: SingleWinnerScoring,
    ) -> Result<Self> {
        check_mk(m, k)?;
        if weights.len() != k {
            return Err(Error::Input(format!("owa needs {k} weights")));
        }
        if weights.iter().any(|w| w.is_negative()) {
            return Err(Error::Input("owa weights must be nonnegative".into()));
        }
        gamma.eval(m)?;
        Self::from_family(m, k, Family::Owa { weights, gamma })
    }

    pub fn decomposable(m: usize, k: usize, gammas: Vec<SingleWinnerScoring>) -> Result<Self> {
        check_mk(m, k)?;
        if gammas.len() != k {
            return Err(Error::Input(format!(
                "decomposable needs {k} slot functions"
            )));
        }
        for g in &gammas {
            g.eval(m)?;
        }
        Self::from_family(m, k, Family::Decomposable { gammas })
    }

    /// A top-k-counting function from `g(0), ..., g(k)`.
    pub fn top_k_counting(m: usize, k: usize, counts: Vec<BigRational>) -> Result<Self> {
        check_mk(m, k)?;
        if counts.len() != k + 1 {
            return Err(Error::Input(format!(
                "counting function needs {} values",
                k + 1
            )));
        }
        if counts.windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Input(
                "counting function must be nondecreasing".into(),
            ));
        }
        if counts[0].is_negative() {
            return Err(Error::Input("counting function must be nonnegative".into()));
        }
        Self::from_family(m, k, Family::TopKCounting { counts })
    }

    pub fn from_table(table: ScoreTable) -> Self {
        ScoringFunction {
            m: table.m(),
            k: table.k(),
            family: Family::Table(table),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    pub fn as_table(&self) -> Option<&ScoreTable> {
        match &self.family {
            Family::Table(t) => Some(t),
            _ => None,
        }
    }

    /// True if this function evaluates to floats rather than exact rationals.
    pub fn is_float_valued(&self) -> bool {
        match &self.family {
            Family::Qhb {
                q: QExponent::Real(_),
            } => true,
            Family::LpBorda { p } => *p > 1.0,
            Family::Table(t) => t.is_float(),
            _ => false,
        }
    }

    /// Evaluates the scoring function at a committee position.
    pub fn evaluate(&self, at: &CommitteePosition) -> Result<Score> {
        if at.m() != self.m || at.k() != self.k {
            return Err(Error::Input(format!(
                "position of shape (m={}, k={}) fed to a function for (m={}, k={})",
                at.m(),
                at.k(),
                self.m,
                self.k
            )));
        }
        let ps = at.positions();
        let m = self.m;
        let k = self.k;
        let approval = |t: usize, pos: usize| -> i64 { (pos <= t) as i64 };
        let borda = |pos: usize| -> i64 { (m - pos) as i64 };
        let value = match &self.family {
            Family::Sntv => Score::from_int(approval(1, ps[0])),
            Family::Bloc => Score::from_int(ps.iter().map(|&p| approval(k, p)).sum()),
            Family::KBorda => Score::from_int(ps.iter().map(|&p| borda(p)).sum()),
            Family::CcBorda => Score::from_int(borda(ps[0])),
            Family::CcApproval => Score::from_int(approval(k, ps[0])),
            Family::Pav { t } => {
                let mut acc = BigRational::zero();
                for (slot, &p) in ps.iter().enumerate() {
                    if p <= *t {
                        acc += ratio(1, (slot + 1) as i64);
                    }
                }
                Score::Exact(acc)
            }
            Family::Qhb { q } => match q {
                QExponent::Int(q) => {
                    let mut acc = BigRational::zero();
                    for (slot, &p) in ps.iter().enumerate() {
                        let denom = BigInt::from(slot as u64 + 1).pow(*q);
                        acc += BigRational::new(BigInt::from(borda(p)), denom);
                    }
                    Score::Exact(acc)
                }
                QExponent::Real(q) => {
                    let mut acc = 0.0;
                    for (slot, &p) in ps.iter().enumerate() {
                        acc += borda(p) as f64 / ((slot + 1) as f64).powf(*q);
                    }
                    Score::Real(acc)
                }
            },
            Family::LpBorda { p } => {
                if *p == 1.0 {
                    Score::from_int(ps.iter().map(|&pos| borda(pos)).sum())
                } else {
                    let total: f64 = ps.iter().map(|&pos| (borda(pos) as f64).powf(*p)).sum();
                    Score::Real(total.powf(1.0 / *p))
                }
            }
            Family::Perfectionist => Score::from_int(approval(k, ps[k - 1])),
            Family::SntvPlusPerf => Score::from_int(approval(1, ps[0]) + approval(k, ps[k - 1])),
            Family::Trivial => Score::zero(),
            Family::Multithreshold {
                weights,
                thresholds,
            } => {
                let mut acc = BigRational::zero();
                for (slot, &p) in ps.iter().enumerate() {
                    if p <= thresholds[slot] {
                        acc += &weights[slot];
                    }
                }
                Score::Exact(acc)
            }
            Family::MaxThreshold { thresholds } => {
                let hit = ps
                    .iter()
                    .enumerate()
                    .any(|(slot, &p)| p <= thresholds[slot]);
                Score::from_int(hit as i64)
            }
            Family::Owa { weights, gamma } => {
                let mut acc = BigRational::zero();
                for (slot, &p) in ps.iter().enumerate() {
                    acc += &weights[slot] * gamma.eval(p)?;
                }
                Score::Exact(acc)
            }
            Family::Decomposable { gammas } => {
                let mut acc = BigRational::zero();
                for (slot, &p) in ps.iter().enumerate() {
                    acc += gammas[slot].eval(p)?;
                }
                Score::Exact(acc)
            }
            Family::TopKCounting { counts } => {
                let hits = ps.iter().filter(|&&p| p <= k).count();
                Score::Exact(counts[hits].clone())
            }
            Family::Table(table) => table.value(at)?.clone(),
        };
        Ok(value)
    }

    /// Tabulates the function over all of `[m]_k` (lexicographic order).
    pub fn tabulate(&self) -> Result<ScoreTable> {
        let values = crate::model::enumerate_positions(self.m, self.k)?
            .iter()
            .map(|cp| self.evaluate(cp))
            .collect::<Result<Vec<_>>>()?;
        ScoreTable::new(self.m, self.k, values)
    }

    /// True iff the function is constant, decided by comparing its values at
    /// the best and worst committee positions (sufficient by dominance
    /// monotonicity).
    pub fn is_degenerate(&self) -> Result<bool> {
        let best = self.evaluate(&CommitteePosition::best(self.m, self.k)?)?;
        let worst = self.evaluate(&CommitteePosition::worst(self.m, self.k)?)?;
        Ok(best.approx_eq(&worst))
    }
}

/// The committee's score in an election: the weighted sum over votes of the
/// scoring function applied to the committee's position in that vote.
pub fn score_of(election: &Election, f: &ScoringFunction, committee: &Committee) -> Result<Score> {
    if f.m() != election.num_candidates() {
        return Err(Error::Input(format!(
            "scoring function is for m = {}, election has m = {}",
            f.m(),
            election.num_candidates()
        )));
    }
    if f.k() != committee.size() {
        return Err(Error::Input(format!(
            "scoring function is for k = {}, committee has size {}",
            f.k(),
            committee.size()
        )));
    }
    let mut total = Score::zero();
    for vote in election.votes() {
        let cp = vote.committee_position(committee)?;
        total = total.add(&f.evaluate(&cp)?.mul_weight(vote.weight()));
    }
    Ok(total)
}

/// Pointwise affine map `x -> a * x + b` of a scoring function, returned as
/// an explicit table. Requires `a > 0` and a nonnegative result.
pub fn affine_transform(f: &ScoringFunction, a: &Score, b: &Score) -> Result<ScoringFunction> {
    if a.cmp_eps(&Score::zero(), EPSILON) != Ordering::Greater {
        return Err(Error::Input(format!(
            "affine scale must be positive, got {a}"
        )));
    }
    let table = f.tabulate()?;
    let mut values = Vec::with_capacity(table.len());
    for v in table.values() {
        let mapped = a.mul(v).add(b);
        if mapped.cmp_eps(&Score::zero(), EPSILON) == Ordering::Less {
            return Err(Error::Range(format!(
                "affine transform produces negative value {mapped}"
            )));
        }
        values.push(mapped);
    }
    Ok(ScoringFunction::from_table(ScoreTable::new(
        f.m(),
        f.k(),
        values,
    )?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::enumerate_positions;

    fn cp(m: usize, ps: &[usize]) -> CommitteePosition {
        CommitteePosition::new(m, ps.to_vec()).unwrap()
    }

    #[test]
    fn evaluate_catalog_examples() {
        let bloc = ScoringFunction::bloc(5, 2).unwrap();
        assert_eq!(bloc.evaluate(&cp(5, &[1, 3])).unwrap(), Score::from_int(1));

        let pav2 = ScoringFunction::pav(4, 2, 2).unwrap();
        assert_eq!(
            pav2.evaluate(&cp(4, &[1, 2])).unwrap(),
            Score::from_ratio(3, 2)
        );

        let hb1 = ScoringFunction::qhb(4, 2, QExponent::Int(1)).unwrap();
        assert_eq!(hb1.evaluate(&cp(4, &[1, 2])).unwrap(), Score::from_int(4));

        let l2 = ScoringFunction::lp_borda(4, 2, 2.0).unwrap();
        let v = l2.evaluate(&cp(4, &[1, 2])).unwrap();
        assert!((v.to_f64() - 13f64.sqrt()).abs() < 1e-12);

        let perf = ScoringFunction::perfectionist(4, 2).unwrap();
        assert_eq!(perf.evaluate(&cp(4, &[1, 2])).unwrap(), Score::from_int(1));
        assert_eq!(perf.evaluate(&cp(4, &[1, 3])).unwrap(), Score::from_int(0));

        // Shape mismatch is an input error.
        assert!(bloc.evaluate(&cp(4, &[1, 2])).is_err());
    }

    #[test]
    fn score_of_examples() {
        let e = Election::from_tokens(
            &["a", "b", "c"],
            &[(2, &["a", "b", "c"]), (1, &["c", "b", "a"])],
        )
        .unwrap();
        let sntv = ScoringFunction::sntv(3, 1).unwrap();
        let w = e.committee_from_tokens(&["a"]).unwrap();
        assert_eq!(score_of(&e, &sntv, &w).unwrap(), Score::from_int(2));

        let e2 =
            Election::from_tokens(&["a", "b", "c", "d"], &[(1, &["a", "b", "c", "d"])]).unwrap();
        let kb = ScoringFunction::k_borda(4, 2).unwrap();
        let ab = e2.committee_from_tokens(&["a", "b"]).unwrap();
        assert_eq!(score_of(&e2, &kb, &ab).unwrap(), Score::from_int(5));

        let triv = ScoringFunction::trivial(4, 2).unwrap();
        let cd = e2.committee_from_tokens(&["c", "d"]).unwrap();
        assert_eq!(score_of(&e2, &triv, &cd).unwrap(), Score::zero());
        assert_eq!(score_of(&e2, &triv, &ab).unwrap(), Score::zero());

        // Dimension mismatch.
        assert!(score_of(&e, &kb, &w).is_err());
    }

    #[test]
    fn dominance_monotonicity_holds_for_all_families() {
        for m in 2..=6 {
            for k in 1..=m {
                let mut fns = vec![
                    ScoringFunction::sntv(m, k).unwrap(),
                    ScoringFunction::bloc(m, k).unwrap(),
                    ScoringFunction::k_borda(m, k).unwrap(),
                    ScoringFunction::cc_borda(m, k).unwrap(),
                    ScoringFunction::cc_approval(m, k).unwrap(),
                    ScoringFunction::perfectionist(m, k).unwrap(),
                    ScoringFunction::sntv_plus_perf(m, k).unwrap(),
                    ScoringFunction::trivial(m, k).unwrap(),
                    ScoringFunction::qhb(m, k, QExponent::Int(1)).unwrap(),
                    ScoringFunction::qhb(m, k, QExponent::Real(0.5)).unwrap(),
                    ScoringFunction::lp_borda(m, k, 2.0).unwrap(),
                ];
                for t in 1..=m {
                    fns.push(ScoringFunction::pav(m, k, t).unwrap());
                }
                if k >= 2 {
                    fns.push(
                        ScoringFunction::multithreshold(
                            m,
                            k,
                            vec![rat(1); k],
                            (1..=k).map(|t| t.min(m)).collect(),
                        )
                        .unwrap(),
                    );
                    fns.push(
                        ScoringFunction::max_threshold(
                            m,
                            k,
                            vec![1; k - 1].into_iter().chain([m]).collect(),
                        )
                        .unwrap(),
                    );
                }
                let all = enumerate_positions(m, k).unwrap();
                for f in &fns {
                    for i in &all {
                        for j in &all {
                            if i.weakly_dominates(j).unwrap() {
                                let vi = f.evaluate(i).unwrap();
                                let vj = f.evaluate(j).unwrap();
                                assert!(
                                    vi.approx_ge(&vj),
                                    "dominance violated: {f:?} at {i} -> {vi}, {j} -> {vj}"
                                );
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn sntv_and_cc_ignore_all_but_the_best_position() {
        for m in 2..=6 {
            for k in 1..=m {
                let sntv = ScoringFunction::sntv(m, k).unwrap();
                let cc = ScoringFunction::cc_borda(m, k).unwrap();
                let a1 = SingleWinnerScoring::TApproval { t: 1 };
                let bm = SingleWinnerScoring::Borda { m };
                for i in enumerate_positions(m, k).unwrap() {
                    let first = i.positions()[0];
                    assert_eq!(
                        sntv.evaluate(&i).unwrap(),
                        Score::Exact(a1.eval(first).unwrap())
                    );
                    assert_eq!(
                        cc.evaluate(&i).unwrap(),
                        Score::Exact(bm.eval(first).unwrap())
                    );
                }
            }
        }
    }

    #[test]
    fn lpborda_one_and_qhb_zero_collapse_to_kborda() {
        for m in 2..=6 {
            for k in 1..=m {
                let kb = ScoringFunction::k_borda(m, k).unwrap();
                let lp1 = ScoringFunction::lp_borda(m, k, 1.0).unwrap();
                let hb0 = ScoringFunction::qhb(m, k, QExponent::Int(0)).unwrap();
                for i in enumerate_positions(m, k).unwrap() {
                    let expected = kb.evaluate(&i).unwrap();
                    assert_eq!(lp1.evaluate(&i).unwrap(), expected);
                    assert_eq!(hb0.evaluate(&i).unwrap(), expected);
                }
            }
        }
    }

    #[test]
    fn multithreshold_with_unit_weights_at_k_is_bloc() {
        for m in 2..=6 {
            for k in 2..=m {
                let bloc = ScoringFunction::bloc(m, k).unwrap();
                let mt =
                    ScoringFunction::multithreshold(m, k, vec![rat(1); k], vec![k; k]).unwrap();
                for i in enumerate_positions(m, k).unwrap() {
                    assert_eq!(mt.evaluate(&i).unwrap(), bloc.evaluate(&i).unwrap());
                }
            }
        }
    }

    #[test]
    fn degeneracy_examples() {
        assert!(ScoringFunction::trivial(4, 2)
            .unwrap()
            .is_degenerate()
            .unwrap());
        assert!(!ScoringFunction::sntv(3, 2)
            .unwrap()
            .is_degenerate()
            .unwrap());
        // Bloc with committee = whole roster is constant.
        assert!(ScoringFunction::bloc(3, 3)
            .unwrap()
            .is_degenerate()
            .unwrap());
        // alpha_k-CC at (4, 3): the best member is always within the top 3.
        assert!(ScoringFunction::cc_approval(4, 3)
            .unwrap()
            .is_degenerate()
            .unwrap());
    }

    #[test]
    fn affine_transform_examples() {
        let sntv = ScoringFunction::sntv(3, 2).unwrap();
        let t = affine_transform(&sntv, &Score::from_int(2), &Score::from_int(1)).unwrap();
        let values: Vec<Score> = t.as_table().unwrap().values().to_vec();
        assert_eq!(
            values,
            vec![Score::from_int(3), Score::from_int(3), Score::from_int(1)]
        );

        let id = affine_transform(&sntv, &Score::from_int(1), &Score::zero()).unwrap();
        for i in enumerate_positions(3, 2).unwrap() {
            assert_eq!(id.evaluate(&i).unwrap(), sntv.evaluate(&i).unwrap());
        }

        assert!(affine_transform(&sntv, &Score::zero(), &Score::zero()).is_err());
        // b = -1 would make the worst value negative.
        assert!(affine_transform(&sntv, &Score::from_int(1), &Score::from_int(-1)).is_err());
    }

    #[test]
    fn score_of_is_linear_in_vote_weights() {
        let base = Election::from_tokens(
            &["a", "b", "c", "d"],
            &[(1, &["a", "b", "c", "d"]), (2, &["d", "a", "b", "c"])],
        )
        .unwrap();
        let scaled = crate::fixtures::scale(&base, 3).unwrap();
        let f = ScoringFunction::pav(4, 2, 2).unwrap();
        for committee in crate::model::enumerate_committees(4, 2).unwrap() {
            let one = score_of(&base, &f, &committee).unwrap();
            let three = score_of(&scaled, &f, &committee).unwrap();
            assert_eq!(one.mul_weight(3), three);
        }
    }
}
