//! Rule specs: family selectors that yield a scoring function for any
//! requested `(m, k)`, plus the text grammar used by the CLI.
//!
//! Grammar:
//!
//! ```text
//! sntv | bloc | kborda | cc-borda | cc-approval | pav:<t> | pav:<k> |
//! qhb:<q> | lpborda:<p> | perfectionist | sntv+perf | trivial |
//! multithreshold:<l1,...,lk>;<t1,...,tk> | maxthreshold:<t1,...,tk> |
//! table:<path>
//! ```
//!
//! `pav:<k>` (the literal token `<k>`) binds the approval threshold to the
//! committee size, giving a top-k-counting rule.

use std::fmt;

use num_rational::BigRational;
use num_traits::Signed;

use crate::scoring::table::parse_score;
use crate::scoring::{QExponent, Score, ScoreTable, ScoringFunction, SingleWinnerScoring};
use crate::{Error, Result};

/// The PAV approval threshold: a fixed constant, or bound to the committee
/// size (`pav:<k>`).
#[derive(Clone, Debug, PartialEq)]
pub enum PavParam {
    Fixed(usize),
    CommitteeSize,
}

/// A parsed rule family.
#[derive(Clone, Debug, PartialEq)]
pub enum RuleSpec {
    Sntv,
    Bloc,
    KBorda,
    CcBorda,
    CcApproval,
    Pav(PavParam),
    Qhb(QExponent),
    LpBorda(f64),
    Perfectionist,
    SntvPlusPerf,
    Trivial,
    Multithreshold {
        weights: Vec<BigRational>,
        thresholds: Vec<usize>,
    },
    MaxThreshold {
        thresholds: Vec<usize>,
    },
    Table {
        path: String,
        table: ScoreTable,
    },
}

/// A committee scoring rule: yields a scoring function per `(m, k)`.
#[derive(Clone, Debug, PartialEq)]
pub struct Rule {
    spec: RuleSpec,
}

impl Rule {
    pub fn new(spec: RuleSpec) -> Self {
        Rule { spec }
    }

    pub fn spec(&self) -> &RuleSpec {
        &self.spec
    }

    /// Parses a rule spec string; `table:<path>` loads and validates the
    /// table file eagerly.
    pub fn parse(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        let simple = match spec {
            "sntv" => Some(RuleSpec::Sntv),
            "bloc" => Some(RuleSpec::Bloc),
            "kborda" => Some(RuleSpec::KBorda),
            "cc-borda" => Some(RuleSpec::CcBorda),
            "cc-approval" => Some(RuleSpec::CcApproval),
            "perfectionist" => Some(RuleSpec::Perfectionist),
            "sntv+perf" => Some(RuleSpec::SntvPlusPerf),
            "trivial" => Some(RuleSpec::Trivial),
            _ => None,
        };
        if let Some(spec) = simple {
            return Ok(Rule::new(spec));
        }
        let (head, param) = spec
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("unknown rule {spec:?}")))?;
        let rule = match head {
            "pav" => {
                if param == "<k>" {
                    RuleSpec::Pav(PavParam::CommitteeSize)
                } else {
                    let t: usize = param
                        .parse()
                        .map_err(|_| Error::Parse(format!("bad pav threshold {param:?}")))?;
                    if t == 0 {
                        return Err(Error::Parse("pav threshold must be >= 1".into()));
                    }
                    RuleSpec::Pav(PavParam::Fixed(t))
                }
            }
            "qhb" => {
                let q: f64 = param
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad qhb exponent {param:?}")))?;
                if !(q >= 0.0) {
                    return Err(Error::Parse(format!(
                        "qhb exponent must be >= 0, got {param}"
                    )));
                }
                if q.fract() == 0.0 && q <= u32::MAX as f64 {
                    RuleSpec::Qhb(QExponent::Int(q as u32))
                } else {
                    RuleSpec::Qhb(QExponent::Real(q))
                }
            }
            "lpborda" => {
                let p: f64 = param
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad lpborda exponent {param:?}")))?;
                if !(p >= 1.0) {
                    return Err(Error::Parse(format!(
                        "lpborda exponent must be >= 1, got {param}"
                    )));
                }
                RuleSpec::LpBorda(p)
            }
            "multithreshold" => {
                let (weights_part, thresholds_part) = param.split_once(';').ok_or_else(|| {
                    Error::Parse("multithreshold needs '<weights>;<thresholds>'".into())
                })?;
                let weights = weights_part
                    .split(',')
                    .map(|t| match parse_score(t.trim())? {
                        Score::Exact(r) if !r.is_negative() => Ok(r),
                        _ => Err(Error::Parse(format!("bad weight {t:?}"))),
                    })
                    .collect::<Result<Vec<_>>>()?;
                let thresholds = parse_threshold_list(thresholds_part)?;
                if weights.len() != thresholds.len() {
                    return Err(Error::Parse(
                        "multithreshold weight and threshold lists must have equal length".into(),
                    ));
                }
                RuleSpec::Multithreshold {
                    weights,
                    thresholds,
                }
            }
            "maxthreshold" => RuleSpec::MaxThreshold {
                thresholds: parse_threshold_list(param)?,
            },
            "table" => {
                let table = ScoreTable::load(std::path::Path::new(param))?;
                RuleSpec::Table {
                    path: param.to_string(),
                    table,
                }
            }
            _ => return Err(Error::Parse(format!("unknown rule {spec:?}"))),
        };
        Ok(Rule::new(rule))
    }

    /// The rule's scoring function at `(m, k)`.
    pub fn scoring_function(&self, m: usize, k: usize) -> Result<ScoringFunction> {
        match &self.spec {
            RuleSpec::Sntv => ScoringFunction::sntv(m, k),
            RuleSpec::Bloc => ScoringFunction::bloc(m, k),
            RuleSpec::KBorda => ScoringFunction::k_borda(m, k),
            RuleSpec::CcBorda => ScoringFunction::cc_borda(m, k),
            RuleSpec::CcApproval => ScoringFunction::cc_approval(m, k),
            RuleSpec::Pav(param) => {
                let t = match param {
                    PavParam::Fixed(t) => *t,
                    PavParam::CommitteeSize => k,
                };
                ScoringFunction::pav(m, k, t)
            }
            RuleSpec::Qhb(q) => ScoringFunction::qhb(m, k, q.clone()),
            RuleSpec::LpBorda(p) => ScoringFunction::lp_borda(m, k, *p),
            RuleSpec::Perfectionist => ScoringFunction::perfectionist(m, k),
            RuleSpec::SntvPlusPerf => ScoringFunction::sntv_plus_perf(m, k),
            RuleSpec::Trivial => ScoringFunction::trivial(m, k),
            RuleSpec::Multithreshold {
                weights,
                thresholds,
            } => ScoringFunction::multithreshold(m, k, weights.clone(), thresholds.clone()),
            RuleSpec::MaxThreshold { thresholds } => {
                ScoringFunction::max_threshold(m, k, thresholds.clone())
            }
            RuleSpec::Table { table, .. } => {
                if table.m() != m || table.k() != k {
                    return Err(Error::Input(format!(
                        "table is for (m={}, k={}), requested (m={m}, k={k})",
                        table.m(),
                        table.k()
                    )));
                }
                Ok(ScoringFunction::from_table(table.clone()))
            }
        }
    }

    /// True iff the rule's scoring function at `(m, k)` is constant.
    pub fn is_degenerate(&self, m: usize, k: usize) -> Result<bool> {
        self.scoring_function(m, k)?.is_degenerate()
    }

    /// The single-winner witness for the built-in weakly separable rules
    /// (those whose committee score is the sum of a single-winner score over
    /// the members).
    pub fn separable_witness(&self, m: usize, k: usize) -> Option<SingleWinnerScoring> {
        match &self.spec {
            RuleSpec::Sntv => Some(SingleWinnerScoring::TApproval { t: 1 }),
            RuleSpec::Bloc => Some(SingleWinnerScoring::TApproval { t: k }),
            RuleSpec::KBorda => Some(SingleWinnerScoring::Borda { m }),
            RuleSpec::LpBorda(p) if *p == 1.0 => Some(SingleWinnerScoring::Borda { m }),
            RuleSpec::Qhb(QExponent::Int(0)) => Some(SingleWinnerScoring::Borda { m }),
            RuleSpec::Trivial => Some(SingleWinnerScoring::TApproval { t: 0 }),
            _ => None,
        }
    }

    /// An ordered-weighted-average form `(weights, gamma)` of this rule at
    /// `(m, k)`, when the family has one by construction.
    pub fn owa_form(&self, m: usize, k: usize) -> Option<(Vec<Score>, SingleWinnerScoring)> {
        use crate::scoring::rat;
        let ones = || vec![Score::from_int(1); k];
        let top_only = || {
            let mut w = vec![Score::from_int(0); k];
            w[0] = Score::from_int(1);
            w
        };
        match &self.spec {
            RuleSpec::Sntv => Some((ones(), SingleWinnerScoring::TApproval { t: 1 })),
            RuleSpec::Bloc => Some((ones(), SingleWinnerScoring::TApproval { t: k })),
            RuleSpec::KBorda => Some((ones(), SingleWinnerScoring::Borda { m })),
            RuleSpec::Trivial => Some((ones(), SingleWinnerScoring::TApproval { t: 0 })),
            RuleSpec::CcBorda => Some((top_only(), SingleWinnerScoring::Borda { m })),
            RuleSpec::CcApproval => Some((top_only(), SingleWinnerScoring::TApproval { t: k })),
            RuleSpec::Pav(param) => {
                let t = match param {
                    PavParam::Fixed(t) => *t,
                    PavParam::CommitteeSize => k,
                };
                if t > m {
                    return None;
                }
                let weights = (1..=k).map(|j| Score::from_ratio(1, j as i64)).collect();
                Some((weights, SingleWinnerScoring::TApproval { t }))
            }
            RuleSpec::Qhb(q) => {
                let weights = match q {
                    QExponent::Int(q) => (1..=k as u64)
                        .map(|j| {
                            Score::Exact(BigRational::new(
                                1.into(),
                                num_bigint::BigInt::from(j).pow(*q),
                            ))
                        })
                        .collect(),
                    QExponent::Real(q) => (1..=k)
                        .map(|j| Score::Real(1.0 / (j as f64).powf(*q)))
                        .collect(),
                };
                Some((weights, SingleWinnerScoring::Borda { m }))
            }
            RuleSpec::LpBorda(p) if *p == 1.0 => Some((ones(), SingleWinnerScoring::Borda { m })),
            RuleSpec::Perfectionist => {
                let mut w = vec![Score::from_int(0); k];
                w[k - 1] = Score::from_int(1);
                Some((w, SingleWinnerScoring::TApproval { t: k }))
            }
            RuleSpec::Multithreshold {
                weights,
                thresholds,
            } => {
                // Only an OWA when every slot uses the same threshold.
                if thresholds.len() == k && thresholds.windows(2).all(|w| w[0] == w[1]) {
                    let gamma = SingleWinnerScoring::TApproval { t: thresholds[0] };
                    let weights = weights.iter().map(|w| Score::Exact(rat(0) + w)).collect();
                    Some((weights, gamma))
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    /// Greedy winner determination carries the (1 - 1/e) guarantee exactly
    /// for rules with an OWA form whose weights are nonincreasing.
    pub fn greedy_eligible(&self, m: usize, k: usize) -> bool {
        match self.owa_form(m, k) {
            Some((weights, _)) => weights
                .windows(2)
                .all(|w| w[0].cmp_eps(&w[1], crate::scoring::EPSILON) != std::cmp::Ordering::Less),
            None => false,
        }
    }
}

fn parse_threshold_list(text: &str) -> Result<Vec<usize>> {
    text.split(',')
        .map(|t| {
            let t = t.trim();
            let v: usize = t
                .parse()
                .map_err(|_| Error::Parse(format!("bad threshold {t:?}")))?;
            if v == 0 {
                return Err(Error::Parse("thresholds must be >= 1".into()));
            }
            Ok(v)
        })
        .collect()
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.spec {
            RuleSpec::Sntv => f.write_str("sntv"),
            RuleSpec::Bloc => f.write_str("bloc"),
            RuleSpec::KBorda => f.write_str("kborda"),
            RuleSpec::CcBorda => f.write_str("cc-borda"),
            RuleSpec::CcApproval => f.write_str("cc-approval"),
            RuleSpec::Pav(PavParam::Fixed(t)) => write!(f, "pav:{t}"),
            RuleSpec::Pav(PavParam::CommitteeSize) => f.write_str("pav:<k>"),
            RuleSpec::Qhb(QExponent::Int(q)) => write!(f, "qhb:{q}"),
            RuleSpec::Qhb(QExponent::Real(q)) => write!(f, "qhb:{q}"),
            RuleSpec::LpBorda(p) => {
                if p.fract() == 0.0 {
                    write!(f, "lpborda:{}", *p as u64)
                } else {
                    write!(f, "lpborda:{p}")
                }
            }
            RuleSpec::Perfectionist => f.write_str("perfectionist"),
            RuleSpec::SntvPlusPerf => f.write_str("sntv+perf"),
            RuleSpec::Trivial => f.write_str("trivial"),
            RuleSpec::Multithreshold {
                weights,
                thresholds,
            } => {
                write!(f, "multithreshold:")?;
                for (i, w) in weights.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{}", Score::Exact(w.clone()))?;
                }
                write!(f, ";")?;
                for (i, t) in thresholds.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            RuleSpec::MaxThreshold { thresholds } => {
                write!(f, "maxthreshold:")?;
                for (i, t) in thresholds.iter().enumerate() {
                    if i > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{t}")?;
                }
                Ok(())
            }
            RuleSpec::Table { path, .. } => write!(f, "table:{path}"),
        }
    }
}

/// Parses a rule spec and checks that it is instantiable at `(m, k)`.
pub fn parse_rule(spec: &str, m: usize, k: usize) -> Result<Rule> {
    let rule = Rule::parse(spec)?;
    rule.scoring_function(m, k)?;
    Ok(rule)
}

/// The built-in rule catalog used throughout the test suites: every named
/// family plus one representative of each parametric family.
pub fn catalog() -> Vec<Rule> {
    [
        "sntv",
        "bloc",
        "kborda",
        "cc-borda",
        "cc-approval",
        "pav:2",
        "pav:<k>",
        "qhb:1",
        "lpborda:2",
        "perfectionist",
        "sntv+perf",
        "trivial",
    ]
    .iter()
    .map(|s| Rule::parse(s).expect("catalog specs parse"))
    .collect()
}
