//! Committee scoring rules: winner determination, structural classification,
//! and empirical monotonicity audits.
//!
//! A committee scoring rule elects the size-`k` subsets of candidates that
//! maximize the sum, over all voters, of a scoring function applied to the
//! *committee position* — the sorted sequence of ranks that the committee's
//! members occupy in the voter's preference order. This crate provides:
//!
//! * [`model`] — elections, votes, committees, committee positions, and the
//!   `.elec` text format;
//! * [`scoring`] — the rule catalog (SNTV, Bloc, k-Borda, Chamberlin–Courant
//!   variants, PAV, harmonic-Borda, ℓp-Borda, perfectionist, threshold rules)
//!   plus explicit score tables with the `.fmk` format;
//! * [`solve`] — exact winner determination, the fast path for weakly
//!   separable rules, and a greedy (1 − 1/e) approximation;
//! * [`classify`] — membership tests for the structural classes (weakly
//!   separable, separable, representation-focused, top-k-counting, OWA-based,
//!   decomposable), with witnesses and refutation certificates;
//! * [`axioms`] — exhaustive/randomized auditors for monotonicity axioms,
//!   producing replayable counterexamples;
//! * [`fixtures`] — ζ-elections, profile algebra, and seeded random cultures.
//!
//! ```
//! use csr::model::Election;
//! use csr::scoring::parse_rule;
//! use csr::solve::winners_exact;
//!
//! let election = Election::parse(
//!     "candidates: a b c d\n2: a > b > c > d\n1: b > d > c > a\n",
//! )?;
//! let rule = parse_rule("pav:2", 4, 2)?;
//! let winners = winners_exact(&election, &rule, 2)?;
//! assert_eq!(winners.committees.len(), 1);
//! assert_eq!(election.committee_tokens(&winners.committees[0]), ["a", "b"]);
//! # Ok::<(), csr::Error>(())
//! ```

pub mod axioms;
pub mod classify;
pub mod fixtures;
pub mod model;
pub mod scoring;
pub mod solve;

mod error;

pub use error::{Error, Result};

// Re-exported so callers can build exact rational parameters (explicit
// single-winner functions, OWA weights) without naming the crates
// themselves.
pub use num_bigint;
pub use num_rational;
