//! Pairs of sets of non-negative integers with identical representation
//! functions.
//!
//! - [`intset`] and [`repcore`]: dense integer sets, `R_A`, difference sets.
//! - [`construct`]: the translate-and-swap step, schedules, prefix builds.
//! - [`verify`]: finite-prefix checks producing reports and certificates.
//! - [`search`]: exhaustive interval search and step decomposition.
//! - [`setfile`]: the plain-text set format shared by all tools.

pub mod construct;
pub mod error;
pub mod intset;
pub mod repcore;
pub mod search;
pub mod setfile;
pub mod verify;

pub use construct::{build_prefix, lemma_step, Build, LemmaStep, LemmaStepCert, Schedule};
pub use error::{Error, Result};
pub use intset::IntSet;
pub use repcore::{in_difference, in_self_difference, rep_profile, rep_profile_naive, RepProfile};
pub use search::{decompose, decompose_fully, enumerate_p2, SearchOptions, SearchReport};
pub use verify::{verify_lemma_claims, verify_pair, verify_theorem, PairReport};
