//! The translate-and-swap step and the iterated constructions built from it.
//!
//! One step maps `(A0, B0, m)` to `(A0 ∪ (m + B0), B0 ∪ (m + A0))`. When
//! `m ∉ (A0 - B0) ∪ (B0 - A0)` and `R_A0 = R_B0`, the outputs again have equal
//! representation functions. Iterating from `({0}, {1})` with a schedule of
//! translations `m_0, m_1, …` yields infinite pairs; [`build_prefix`]
//! materializes their finite prefixes.

use std::fmt::{self, Write as _};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::intset::{IntSet, MAX_ELEMENT};
use crate::repcore::{difference_witness, in_self_difference};

/// The rule producing `m_0, m_1, …`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Schedule {
    /// `m_i = 2^(i+1)`: the even/odd binary digit sum partition.
    Dombi,
    /// `2^(i+1)` for `i ≤ 2l-2`, then `2^(2l) - 1`, then `2^(i+1) - 2^(i-2l)`.
    /// The resulting pair covers ℕ₀ and meets in `(2^(2l)-1) + (2^(2l+1)-1)ℕ₀`.
    Theorem { l: u32 },
    /// Same as `Theorem` below index `2l`, then `m_i = 2^(i-2l)·m`. The built
    /// pair is translated so its intersection becomes `r + mℕ₀`.
    General { l: u32, r: usize, m: usize },
}

fn pow2(exp: u32) -> Result<usize> {
    1usize
        .checked_shl(exp)
        .ok_or_else(|| Error::Overflow(format!("2^{exp} does not fit in {} bits", usize::BITS)))
}

impl Schedule {
    pub fn theorem(l: u32) -> Result<Self> {
        let s = Schedule::Theorem { l };
        s.validate()?;
        Ok(s)
    }

    pub fn general(l: u32, r: usize, m: usize) -> Result<Self> {
        let s = Schedule::General { l, r, m };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Schedule::Dombi => Ok(()),
            Schedule::Theorem { l } => check_l(l),
            Schedule::General { l, r, m } => {
                check_l(l)?;
                let min_r = pow2(2 * l)? - 1;
                let min_m = pow2(2 * l + 1)? - 1;
                if r < min_r {
                    return Err(Error::InvalidSchedule(format!(
                        "r = {r} is below 2^(2l) - 1 = {min_r}"
                    )));
                }
                if m < min_m {
                    return Err(Error::InvalidSchedule(format!(
                        "m = {m} is below 2^(2l+1) - 1 = {min_m}"
                    )));
                }
                Ok(())
            }
        }
    }

    /// `m_i`.
    pub fn value(&self, i: u32) -> Result<usize> {
        self.validate()?;
        let overflow = || Error::Overflow(format!("m_{i} of {self} does not fit in {} bits", usize::BITS));
        match *self {
            Schedule::Dombi => pow2(i + 1).map_err(|_| overflow()),
            Schedule::Theorem { l } | Schedule::General { l, .. } if i < 2 * l => {
                if i == 2 * l - 1 {
                    Ok(pow2(2 * l)? - 1)
                } else {
                    pow2(i + 1)
                }
            }
            Schedule::Theorem { l } => {
                let high = pow2(i + 1).map_err(|_| overflow())?;
                Ok(high - pow2(i - 2 * l)?)
            }
            Schedule::General { l, m, .. } => pow2(i - 2 * l)
                .ok()
                .and_then(|p| p.checked_mul(m))
                .ok_or_else(overflow),
        }
    }

    /// Shift applied to the finished pair; non-zero only for `General`.
    pub fn translation(&self) -> Result<usize> {
        match *self {
            Schedule::General { l, r, .. } => Ok(r - (pow2(2 * l)? - 1)),
            _ => Ok(0),
        }
    }
}

fn check_l(l: u32) -> Result<()> {
    if l == 0 {
        return Err(Error::InvalidSchedule("l must be a positive integer".into()));
    }
    // 2^(2l+1) must be representable
    if 2 * l + 1 >= usize::BITS {
        return Err(Error::InvalidSchedule(format!("l = {l} is too large")));
    }
    Ok(())
}

impl fmt::Display for Schedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Schedule::Dombi => write!(f, "dombi"),
            Schedule::Theorem { l } => write!(f, "theorem(l={l})"),
            Schedule::General { l, r, m } => write!(f, "general(l={l}, r={r}, m={m})"),
        }
    }
}

/// `A0 ∪ B0 = [0, m-1]` specialization: the step output should cover `[0, 2m-1]`,
/// and a partition of the first interval should become a partition of the second.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntervalClaim {
    pub before_end: usize,
    pub after_end: usize,
    pub union_ok: bool,
    pub base_is_partition: bool,
    /// Only meaningful when `base_is_partition`.
    pub partition_ok: bool,
}

/// Which hypotheses and claims held for one step, each computed directly on
/// the input and output sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaStepCert {
    pub m: usize,
    /// `m ∉ (A0 - B0) ∪ (B0 - A0)`.
    pub precondition_ok: bool,
    /// Set iff `precondition_ok` is false.
    pub witness: Option<(usize, usize)>,
    /// `m ∉ (A0 - A0) ∪ (B0 - B0)`.
    pub moreover_ok: bool,
    /// `A1 ∪ B1 = (A0 ∪ B0) ∪ (m + (A0 ∪ B0))`.
    pub union_identity_ok: bool,
    /// `A1 ∩ B1 ⊇ (A0 ∩ B0) ∪ (m + (A0 ∩ B0))` with that union disjoint.
    pub intersection_claim_ok: bool,
    /// Whether the inclusion above is an equality.
    pub intersection_equal: bool,
    /// `(A0 ∪ B0) ∩ (m + (A0 ∪ B0)) = ∅`.
    pub disjoint_union_ok: bool,
    pub interval: Option<IntervalClaim>,
    /// `R_A0 = R_B0`; only filled in by [`crate::verify::verify_lemma_claims`].
    pub rep_hypothesis_ok: Option<bool>,
    /// `R_A1 = R_B1`; only filled in by [`crate::verify::verify_lemma_claims`].
    pub rep_conclusion_ok: Option<bool>,
}

impl LemmaStepCert {
    fn rejected(m: usize, witness: (usize, usize)) -> Self {
        Self {
            m,
            precondition_ok: false,
            witness: Some(witness),
            moreover_ok: false,
            union_identity_ok: false,
            intersection_claim_ok: false,
            intersection_equal: false,
            disjoint_union_ok: false,
            interval: None,
            rep_hypothesis_ok: None,
            rep_conclusion_ok: None,
        }
    }

    /// Every claim the step's hypotheses entitle us to expect actually held.
    pub fn claims_hold(&self) -> bool {
        self.precondition_ok
            && self.union_identity_ok
            && self.intersection_claim_ok
            && (!self.moreover_ok || (self.disjoint_union_ok && self.intersection_equal))
            && self.interval.as_ref().is_none_or(|iv| {
                iv.union_ok && (!iv.base_is_partition || iv.partition_ok)
            })
            && (self.rep_hypothesis_ok != Some(true) || self.rep_conclusion_ok == Some(true))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LemmaStep {
    pub a: IntSet,
    pub b: IntSet,
    pub cert: LemmaStepCert,
}

fn shift(set: &IntSet, m: usize) -> Result<IntSet> {
    set.checked_translate(m).ok_or_else(|| {
        Error::Overflow(format!("translating by {m} exceeds the largest element {MAX_ELEMENT}"))
    })
}

/// Applies one step, rejecting `m` in the forbidden difference union.
pub fn lemma_step(a0: &IntSet, b0: &IntSet, m: usize) -> Result<LemmaStep> {
    if let Some(witness) = difference_witness(a0, b0, m) {
        return Err(Error::PreconditionViolated { m, witness, step: None });
    }
    let a1 = a0.union(&shift(b0, m)?);
    let b1 = b0.union(&shift(a0, m)?);
    let cert = certify(a0, b0, &a1, &b1, m)?;
    Ok(LemmaStep { a: a1, b: b1, cert })
}

/// Certificate for a step whose precondition may or may not hold.
pub(crate) fn certify_any(a0: &IntSet, b0: &IntSet, m: usize) -> Result<(LemmaStepCert, Option<(IntSet, IntSet)>)> {
    match lemma_step(a0, b0, m) {
        Ok(step) => Ok((step.cert, Some((step.a, step.b)))),
        Err(Error::PreconditionViolated { witness, .. }) => Ok((LemmaStepCert::rejected(m, witness), None)),
        Err(e) => Err(e),
    }
}

fn certify(a0: &IntSet, b0: &IntSet, a1: &IntSet, b1: &IntSet, m: usize) -> Result<LemmaStepCert> {
    let base_union = a0.union(b0);
    let base_inter = a0.intersection(b0);
    let shifted_union = shift(&base_union, m)?;
    let shifted_inter = shift(&base_inter, m)?;
    let out_union = a1.union(b1);
    let out_inter = a1.intersection(b1);
    let claimed_inter = base_inter.union(&shifted_inter);

    let interval = (m >= 1 && base_union == IntSet::interval(0, m - 1)).then(|| {
        let target = IntSet::interval(0, 2 * m - 1);
        let union_ok = out_union == target;
        let base_is_partition = base_inter.is_empty();
        IntervalClaim {
            before_end: m - 1,
            after_end: 2 * m - 1,
            union_ok,
            base_is_partition,
            partition_ok: base_is_partition && union_ok && out_inter.is_empty(),
        }
    });

    Ok(LemmaStepCert {
        m,
        precondition_ok: true,
        witness: None,
        moreover_ok: !in_self_difference(a0, m) && !in_self_difference(b0, m),
        union_identity_ok: out_union == base_union.union(&shifted_union),
        intersection_claim_ok: claimed_inter.is_subset(&out_inter)
            && base_inter.is_disjoint(&shifted_inter),
        intersection_equal: out_inter == claimed_inter,
        disjoint_union_ok: base_union.is_disjoint(&shifted_union),
        interval,
        rep_hypothesis_ok: None,
        rep_conclusion_ok: None,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StepRecord {
    pub index: usize,
    pub m: usize,
    /// Sizes of the step's inputs `A_i`, `B_i`.
    pub a_len: usize,
    pub b_len: usize,
    pub cert: LemmaStepCert,
}

/// A finite prefix of an iterated construction.
#[derive(Debug, Clone)]
pub struct Build {
    pub schedule: Schedule,
    pub bound: usize,
    /// `A ∩ [0, bound]` (after translation for the general schedule).
    pub a: IntSet,
    pub b: IntSet,
    pub steps: Vec<StepRecord>,
    /// `(A_i, B_i)` for `i = 0..=steps.len()`, untranslated and untruncated.
    pub states: Vec<(IntSet, IntSet)>,
    pub translation: usize,
}

impl Build {
    pub fn final_state(&self) -> &(IntSet, IntSet) {
        self.states.last().expect("states always holds the base pair")
    }

    /// One tab-separated line per step: index, m_i, precondition_ok, moreover_ok, |A_i|, |B_i|.
    pub fn step_log(&self) -> String {
        let mut out = String::from("# index\tm\tprecondition_ok\tmoreover_ok\ta_len\tb_len\n");
        for s in &self.steps {
            writeln!(
                out,
                "{}\t{}\t{}\t{}\t{}\t{}",
                s.index, s.m, s.cert.precondition_ok, s.cert.moreover_ok, s.a_len, s.b_len
            )
            .unwrap();
        }
        out
    }
}

/// The base pair `({0}, {1})` shared by every schedule.
pub fn base_pair() -> (IntSet, IntSet) {
    (IntSet::from([0]), IntSet::from([1]))
}

/// `A ∩ [0, bound]` and `B ∩ [0, bound]` for the pair generated by `schedule`.
///
/// Steps stop at the first `m_i > bound`: every element a later step adds is
/// at least `m_i`.
pub fn build_prefix(schedule: Schedule, bound: usize) -> Result<Build> {
    schedule.validate()?;
    if bound < 1 {
        return Err(Error::BoundTooSmall { bound, reason: "the bound must be at least 1".into() });
    }
    if bound > MAX_ELEMENT / 2 {
        return Err(Error::Overflow(format!("bound {bound} exceeds {}", MAX_ELEMENT / 2)));
    }
    let mut states = vec![base_pair()];
    let mut steps = Vec::new();
    for i in 0u32.. {
        let m = schedule.value(i)?;
        if m > bound {
            break;
        }
        let (a0, b0) = states.last().unwrap();
        let step = lemma_step(a0, b0, m).map_err(|e| match e {
            Error::PreconditionViolated { m, witness, .. } => {
                Error::PreconditionViolated { m, witness, step: Some(i as usize) }
            }
            other => other,
        })?;
        steps.push(StepRecord {
            index: i as usize,
            m,
            a_len: a0.len(),
            b_len: b0.len(),
            cert: step.cert,
        });
        states.push((step.a, step.b));
    }

    let translation = schedule.translation()?;
    let (a_last, b_last) = states.last().unwrap();
    let place = |set: &IntSet| match bound.checked_sub(translation) {
        Some(room) => set.truncate(room).translate(translation),
        None => IntSet::new(),
    };
    Ok(Build {
        schedule,
        bound,
        a: place(a_last),
        b: place(b_last),
        steps,
        states,
        translation,
    })
}
