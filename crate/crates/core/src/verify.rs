//! Checks of the construction's claims on finite prefixes.
//!
//! Every checker assumes its inputs are prefix-complete up to the bound: each
//! set contains all elements `≤ bound` of the (possibly infinite) set it
//! stands for. Callers guarantee this; it cannot be detected.

use std::fmt::Write as _;

use serde::Serialize;

use crate::construct::{build_prefix, certify_any, LemmaStepCert, Schedule};
use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::repcore::{in_difference, in_self_difference, rep_profile};

/// `{start + i·step : 0 ≤ i < count}`. A singleton has `step = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Progression {
    pub start: usize,
    pub step: usize,
    pub count: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaCondition {
    pub m: usize,
    /// `m ∈ (A - B) ∪ (B - A)`.
    pub in_cross_difference: bool,
    /// `m ∈ (A - A) ∪ (B - B)`.
    pub in_self_difference: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairReport {
    pub bound: usize,
    pub rep_equal: bool,
    pub first_divergence: Option<usize>,
    /// `Some(bound)` when `A ∪ B ⊇ [0, bound]`.
    pub union_is_interval: Option<usize>,
    pub intersection_ap: Option<Progression>,
    pub lemma_conditions: Vec<LemmaCondition>,
}

impl PairReport {
    /// Whether `A ∩ B ∩ [0, bound]` is exactly `{r + km : k ≥ 0} ∩ [0, bound]`.
    pub fn intersection_matches(&self, r: usize, m: usize) -> bool {
        let expected = match self.bound.checked_sub(r) {
            None => 0,
            Some(room) => room.checked_div(m).map_or(1, |k| k + 1),
        };
        match self.intersection_ap {
            None => expected == 0,
            Some(ap) => {
                ap.start == r && ap.count == expected && (ap.count < 2 || ap.step == m)
            }
        }
    }

    /// Line-oriented rendering, one `key: value` per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        writeln!(out, "bound: {}", self.bound).unwrap();
        writeln!(out, "rep_equal: {}", self.rep_equal).unwrap();
        match self.first_divergence {
            Some(n) => writeln!(out, "first_divergence: {n}").unwrap(),
            None => writeln!(out, "first_divergence: none").unwrap(),
        }
        match self.union_is_interval {
            Some(end) => writeln!(out, "union_is_interval: [0, {end}]").unwrap(),
            None => writeln!(out, "union_is_interval: no").unwrap(),
        }
        match self.intersection_ap {
            Some(ap) => writeln!(
                out,
                "intersection_ap: start={} step={} count={}",
                ap.start, ap.step, ap.count
            )
            .unwrap(),
            None => writeln!(out, "intersection_ap: none").unwrap(),
        }
        for c in &self.lemma_conditions {
            writeln!(
                out,
                "lemma_condition: m={} in_cross_difference={} in_self_difference={}",
                c.m, c.in_cross_difference, c.in_self_difference
            )
            .unwrap();
        }
        out
    }
}

/// `R_A = R_B` on `[0, bound]`, with the least divergent `n` otherwise.
pub fn verify_equal_rep(a: &IntSet, b: &IntSet, bound: usize) -> (bool, Option<usize>) {
    let first = rep_profile(a, bound).first_divergence(&rep_profile(b, bound));
    (first.is_none(), first)
}

/// `A ∪ B ⊇ [0, bound]`.
pub fn detect_interval_union(a: &IntSet, b: &IntSet, bound: usize) -> bool {
    a.union(b).covers_interval(bound)
}

/// `A ∩ B ∩ [0, bound]` as an arithmetic progression, if it is one.
pub fn detect_intersection_ap(a: &IntSet, b: &IntSet, bound: usize) -> Option<Progression> {
    progression_of(&a.intersection(b).truncate(bound))
}

pub(crate) fn progression_of(set: &IntSet) -> Option<Progression> {
    let mut it = set.iter();
    let start = it.next()?;
    let Some(second) = it.next() else {
        return Some(Progression { start, step: 0, count: 1 });
    };
    let step = second - start;
    let mut prev = second;
    let mut count = 2;
    for x in it {
        if x - prev != step {
            return None;
        }
        prev = x;
        count += 1;
    }
    Some(Progression { start, step, count })
}

/// Runs every pair check; `lemma_ms` are extra translations whose
/// difference-set membership is reported.
pub fn verify_pair(a: &IntSet, b: &IntSet, bound: usize, lemma_ms: &[usize]) -> PairReport {
    let (rep_equal, first_divergence) = verify_equal_rep(a, b, bound);
    PairReport {
        bound,
        rep_equal,
        first_divergence,
        union_is_interval: detect_interval_union(a, b, bound).then_some(bound),
        intersection_ap: detect_intersection_ap(a, b, bound),
        lemma_conditions: lemma_ms
            .iter()
            .map(|&m| LemmaCondition {
                m,
                in_cross_difference: in_difference(a, b, m),
                in_self_difference: in_self_difference(a, m) || in_self_difference(b, m),
            })
            .collect(),
    }
}

/// `(2^(2l) - 1, 2^(2l+1) - 1)`: start and difference of the intersection
/// progression for parameter `l`.
pub fn theorem_progression(l: u32) -> Result<(usize, usize)> {
    let s = Schedule::theorem(l)?;
    let r = s.value(2 * l - 1)?;
    Ok((r, s.value(2 * l)?))
}

/// Builds the theorem pair for `l` up to `bound` and checks it.
/// Requires `bound ≥ 2^(2l+1)`.
pub fn verify_theorem(l: u32, bound: usize) -> Result<PairReport> {
    let (_, m) = theorem_progression(l)?;
    if bound < m + 1 {
        return Err(Error::BoundTooSmall {
            bound,
            reason: format!("l = {l} needs a bound of at least {}", m + 1),
        });
    }
    let build = build_prefix(Schedule::Theorem { l }, bound)?;
    Ok(verify_pair(&build.a, &build.b, bound, &[]))
}

/// True iff the report shows all three conclusions for parameter `l`.
pub fn theorem_holds(report: &PairReport, l: u32) -> bool {
    let Ok((r, m)) = theorem_progression(l) else {
        return false;
    };
    report.rep_equal && report.union_is_interval.is_some() && report.intersection_matches(r, m)
}

/// Applies the step (if allowed) and cross-checks every claim directly,
/// including equality of representation functions before and after.
pub fn verify_lemma_claims(a0: &IntSet, b0: &IntSet, m: usize) -> Result<LemmaStepCert> {
    let (mut cert, outputs) = certify_any(a0, b0, m)?;
    let Some((a1, b1)) = outputs else {
        return Ok(cert);
    };
    let equal_to_double_max = |a: &IntSet, b: &IntSet| {
        let top = a.max().into_iter().chain(b.max()).max().unwrap_or(0);
        verify_equal_rep(a, b, 2 * top).0
    };
    cert.rep_hypothesis_ok = Some(equal_to_double_max(a0, b0));
    cert.rep_conclusion_ok = Some(equal_to_double_max(&a1, &b1));
    Ok(cert)
}
