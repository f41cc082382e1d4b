//! Exhaustive finite searches.
//!
//! [`enumerate_p2`] lists every pair `(A, B)` with `A ∪ B = [0, m-1]`,
//! `A ∩ B = {r}` and `R_A = R_B`. [`decompose`] and [`decompose_fully`] try to
//! peel translate-and-swap steps off a pair.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;

use crate::construct::lemma_step;
use crate::error::{Error, Result};
use crate::intset::IntSet;
use crate::repcore::{in_difference, rep_profile_naive};

/// Largest interval length [`enumerate_p2`] accepts; sums up to `2m - 2` fit in a `u128`.
pub const MAX_INTERVAL: usize = 64;

/// Leading free elements whose assignment names a shard.
const SHARD_BITS: usize = 6;

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Only scan this overlap point.
    pub r_filter: Option<usize>,
    pub threads: usize,
    /// Disable to get the brute-force oracle scan.
    pub prune: bool,
    /// Shards already completed by an earlier run; they are not rescanned.
    pub skip_shards: BTreeSet<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        Self {
            r_filter: None,
            threads: 1,
            prune: true,
            skip_shards: BTreeSet::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Solution {
    pub a: IntSet,
    pub b: IntSet,
    pub r: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchReport {
    pub interval_length: usize,
    pub r_filter: Option<usize>,
    pub pruned: bool,
    /// Canonical (`0 ∈ A`, or `1 ∈ A` when `r = 0`), sorted by the bit
    /// pattern of `A` read as an integer (bit `i` set iff `i ∈ A`).
    pub solutions: Vec<Solution>,
    /// Complete assignments that reached the final profile check.
    pub configurations_scanned: u64,
    pub shards_total: usize,
    /// Shards skipped because a checkpoint marked them complete. When
    /// non-empty the report covers only the remaining shards.
    pub shards_skipped: Vec<usize>,
    #[serde(skip)]
    pub wall_time: Duration,
}

impl SearchReport {
    pub fn is_complete(&self) -> bool {
        self.shards_skipped.is_empty()
    }
}

/// `R_X(n)` for a set given as a bit pattern, `n ≤ 127`.
#[inline]
fn rep_at(set: u128, rev: u128, n: usize) -> u32 {
    // bit x of `rev >> (127 - n)` is bit n - x of `set`
    let partners = rev >> (127 - n);
    let below_half = (1u128 << n.div_ceil(2)) - 1;
    (set & partners & below_half).count_ones()
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Place {
    A,
    B,
    Both,
}

struct Shard {
    id: usize,
    r: usize,
    /// Placement of every element in `[0, m-1]`; `None` for branch points.
    fixed: Vec<Option<Place>>,
}

struct ShardResult {
    solutions: Vec<(u128, u128, usize)>,
    scanned: u64,
}

struct Scan {
    m: usize,
    prune: bool,
}

impl Scan {
    fn run(&self, shard: &Shard) -> ShardResult {
        let mut out = ShardResult { solutions: Vec::new(), scanned: 0 };
        self.descend(shard, 0, 0, 0, &mut out);
        out
    }

    fn descend(&self, shard: &Shard, j: usize, a: u128, b: u128, out: &mut ShardResult) {
        let m = self.m;
        if j == m {
            out.scanned += 1;
            let (ra, rb) = (a.reverse_bits(), b.reverse_bits());
            // with pruning, every n < m was already compared
            let first = if self.prune { m } else { 0 };
            if (first..=2 * m - 2).all(|n| rep_at(a, ra, n) == rep_at(b, rb, n)) {
                out.solutions.push((a, b, shard.r));
            }
            return;
        }
        let options: &[Place] = match shard.fixed[j] {
            Some(Place::A) => &[Place::A],
            Some(Place::B) => &[Place::B],
            Some(Place::Both) => &[Place::Both],
            None => &[Place::A, Place::B],
        };
        for &place in options {
            let bit = 1u128 << j;
            let (na, nb) = match place {
                Place::A => (a | bit, b),
                Place::B => (a, b | bit),
                Place::Both => (a | bit, b | bit),
            };
            if self.prune && !self.consistent(na, nb, j) {
                continue;
            }
            self.descend(shard, j + 1, na, nb, out);
        }
    }

    /// Pairs summing to `j` use only elements `≤ j`, so once `[0, j]` is placed
    /// `R_A(j)` and `R_B(j)` are final. Equal profiles also force
    /// `C(|A|, 2) = C(|B|, 2)` with both sets non-empty, hence `|A| = |B|` and
    /// `2|A| = m + 1`.
    fn consistent(&self, a: u128, b: u128, j: usize) -> bool {
        let half_cap = self.m + 1;
        if 2 * a.count_ones() as usize > half_cap || 2 * b.count_ones() as usize > half_cap {
            return false;
        }
        rep_at(a, a.reverse_bits(), j) == rep_at(b, b.reverse_bits(), j)
    }
}

fn shards_for(m: usize, rs: &[usize]) -> (usize, Vec<Shard>) {
    let free_count = m - 2;
    let key_bits = SHARD_BITS.min(free_count);
    let mut shards = Vec::new();
    for &r in rs {
        let mut fixed = vec![None; m];
        fixed[r] = Some(Place::Both);
        // canonical orientation: the least element not equal to r goes to A
        let anchor = if r == 0 { 1 } else { 0 };
        fixed[anchor] = Some(Place::A);
        let free: Vec<usize> = (0..m).filter(|&j| fixed[j].is_none()).collect();
        for pattern in 0..1usize << key_bits {
            let mut fixed = fixed.clone();
            for (bit, &j) in free.iter().take(key_bits).enumerate() {
                fixed[j] = Some(if pattern >> bit & 1 == 1 { Place::B } else { Place::A });
            }
            shards.push(Shard { id: (r << key_bits) | pattern, r, fixed });
        }
    }
    (key_bits, shards)
}

/// Enumerates canonical solutions for interval length `m`.
///
/// `on_shard_done` is called with each shard id as it completes, in no
/// particular order.
pub fn enumerate_p2(
    m: usize,
    options: &SearchOptions,
    on_shard_done: Option<&(dyn Fn(usize) + Sync)>,
) -> Result<SearchReport> {
    if m < 2 {
        return Err(Error::BoundTooSmall { bound: m, reason: "interval length must be at least 2".into() });
    }
    if m > MAX_INTERVAL {
        return Err(Error::BoundExceeded { m, max: MAX_INTERVAL });
    }
    if options.threads == 0 {
        return Err(Error::InvalidArgument("worker count must be at least 1".into()));
    }
    let rs: Vec<usize> = match options.r_filter {
        Some(r) if r >= m => {
            return Err(Error::InvalidArgument(format!("r = {r} lies outside [0, {}]", m - 1)));
        }
        Some(r) => vec![r],
        None => (0..m).collect(),
    };

    let started = Instant::now();
    let (_, shards) = shards_for(m, &rs);
    let shards_total = shards.len();
    let (skipped, pending): (Vec<&Shard>, Vec<&Shard>) =
        shards.iter().partition(|s| options.skip_shards.contains(&s.id));
    let scan = Scan { m, prune: options.prune };

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(options.threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start workers: {e}")))?;
    let results: Vec<ShardResult> = pool.install(|| {
        pending
            .par_iter()
            .map(|shard| {
                let result = scan.run(shard);
                if let Some(done) = on_shard_done {
                    done(shard.id);
                }
                result
            })
            .collect()
    });

    let mut raw: Vec<(u128, u128, usize)> = Vec::new();
    let mut scanned = 0;
    for result in results {
        scanned += result.scanned;
        raw.extend(result.solutions);
    }
    raw.sort_unstable();
    let solutions = raw
        .into_iter()
        .map(|(a, b, r)| {
            let solution = Solution { a: IntSet::from_mask(a), b: IntSet::from_mask(b), r };
            recheck(&solution, m);
            solution
        })
        .collect();

    Ok(SearchReport {
        interval_length: m,
        r_filter: options.r_filter,
        pruned: options.prune,
        solutions,
        configurations_scanned: scanned,
        shards_total,
        shards_skipped: skipped.iter().map(|s| s.id).collect(),
        wall_time: started.elapsed(),
    })
}

/// Full recheck of a candidate against the naive profile; a failure here is a
/// bug in the incremental scan.
fn recheck(s: &Solution, m: usize) {
    let top = 2 * (m - 1);
    assert_eq!(s.a.union(&s.b), IntSet::interval(0, m - 1), "union of {s:?}");
    assert_eq!(s.a.intersection(&s.b), IntSet::from([s.r]), "intersection of {s:?}");
    assert_eq!(rep_profile_naive(&s.a, top), rep_profile_naive(&s.b, top), "profiles of {s:?}");
}

/// One peeled step: `A = A0 ∪ (m + B0)`, `B = B0 ∪ (m + A0)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Decomposition {
    pub a0: IntSet,
    pub b0: IntSet,
    pub m: usize,
}

/// Least `m ≥ 1` for which `(A, B)` is one step applied to a non-empty base
/// pair lying inside `[0, m]` with `m ∉ (A0 - B0) ∪ (B0 - A0)`.
///
/// Elements below `m` must belong to the base; `m` itself may belong to
/// either the base or the translated copy, so the four placements of `m` are
/// tried in a fixed order. This is a restricted inverse: base pairs reaching
/// above `m` are not considered.
pub fn decompose(a: &IntSet, b: &IntSet) -> Option<Decomposition> {
    let top = a.union(b).max()?;
    for m in 1..=top {
        let low_a = a.truncate(m - 1);
        let low_b = b.truncate(m - 1);
        for (with_a, with_b) in [(false, false), (true, false), (false, true), (true, true)] {
            if (with_a && !a.contains(m)) || (with_b && !b.contains(m)) {
                continue;
            }
            let mut a0 = low_a.clone();
            let mut b0 = low_b.clone();
            if with_a {
                a0.insert(m);
            }
            if with_b {
                b0.insert(m);
            }
            if a0.is_empty() || b0.is_empty() || in_difference(&a0, &b0, m) {
                continue;
            }
            if a0.union(&b0.translate(m)) == *a && b0.union(&a0.translate(m)) == *b {
                return Some(Decomposition { a0, b0, m });
            }
        }
    }
    None
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DecompositionChain {
    /// Translations peeled off, outermost first.
    pub chain: Vec<usize>,
    pub core_a: IntSet,
    pub core_b: IntSet,
}

impl DecompositionChain {
    /// Re-applies the chain to the core pair.
    pub fn replay(&self) -> Result<(IntSet, IntSet)> {
        let mut pair = (self.core_a.clone(), self.core_b.clone());
        for &m in self.chain.iter().rev() {
            let step = lemma_step(&pair.0, &pair.1, m)?;
            pair = (step.a, step.b);
        }
        Ok(pair)
    }
}

/// Repeats [`decompose`] until no step can be peeled.
pub fn decompose_fully(a: &IntSet, b: &IntSet) -> DecompositionChain {
    let mut chain = Vec::new();
    let mut pair = (a.clone(), b.clone());
    // the maximum strictly drops with every peeled step, so this terminates
    while let Some(d) = decompose(&pair.0, &pair.1) {
        chain.push(d.m);
        pair = (d.a0, d.b0);
    }
    DecompositionChain { chain, core_a: pair.0, core_b: pair.1 }
}
