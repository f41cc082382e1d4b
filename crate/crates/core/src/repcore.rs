//! Representation functions and difference-set membership.
//!
//! `R_A(n)` counts unordered pairs `a' < a''` of elements of `A` with
//! `a' + a'' = n`. The fast path counts pairs with a shifted AND/popcount of
//! the set against its own bit reversal; [`rep_profile_naive`] is the plain
//! double loop kept as an oracle.

use serde::Serialize;

use crate::intset::{first_shifted_hit, low_mask, shifted_intersects, IntSet, WORD_BITS};

/// `R_A(0..=bound)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepProfile {
    pub bound: usize,
    pub counts: Vec<u64>,
}

impl RepProfile {
    pub fn zeros(bound: usize) -> Self {
        Self {
            bound,
            counts: vec![0; bound + 1],
        }
    }

    pub fn get(&self, n: usize) -> u64 {
        self.counts.get(n).copied().unwrap_or(0)
    }

    /// Least `n` at which the two profiles differ, comparing up to the smaller bound.
    pub fn first_divergence(&self, other: &Self) -> Option<usize> {
        self.counts
            .iter()
            .zip(&other.counts)
            .position(|(x, y)| x != y)
    }
}

/// `R_A(n)` for `0 ≤ n ≤ bound`.
///
/// Elements above `bound` cannot take part in a sum `≤ bound`, so the result
/// is exact for any set that is complete up to `bound`.
pub fn rep_profile(set: &IntSet, bound: usize) -> RepProfile {
    let halves = lower_half_counts(set, bound);
    let counts = halves
        .iter()
        .enumerate()
        .map(|(n, &half)| {
            let ordered = ordered_from_half(set, n, half);
            // 2·R(n) + [n even ∧ n/2 ∈ A] = #ordered pairs with repeats
            (ordered - midpoint(set, n)) / 2
        })
        .collect();
    RepProfile { bound, counts }
}

/// Number of ordered pairs `(x, y) ∈ A × A` (repeats allowed) with `x + y = n`.
pub fn ordered_pair_counts(set: &IntSet, bound: usize) -> Vec<u64> {
    lower_half_counts(set, bound)
        .iter()
        .enumerate()
        .map(|(n, &half)| ordered_from_half(set, n, half))
        .collect()
}

fn midpoint(set: &IntSet, n: usize) -> u64 {
    u64::from(n.is_multiple_of(2) && set.contains(n / 2))
}

fn ordered_from_half(set: &IntSet, n: usize, half: u64) -> u64 {
    2 * half + midpoint(set, n)
}

/// For each `n ≤ bound`, `|{x ∈ A : 2x < n, n - x ∈ A}|`.
fn lower_half_counts(set: &IntSet, bound: usize) -> Vec<u64> {
    let set = set.truncate(bound);
    // bit j of `rev` is set iff bound - j ∈ A, so bit x of `rev >> (bound - n)`
    // is set iff n - x ∈ A
    let mut rev = IntSet::new();
    for a in &set {
        rev.insert(bound - a);
    }
    let words = set.words();
    (0..=bound)
        .map(|n| {
            // x ranges over [0, ceil(n / 2))
            let limit = n.div_ceil(2);
            let full = limit / WORD_BITS;
            let offset = bound - n;
            let mut count = 0u64;
            for (i, &w) in words.iter().enumerate().take(full) {
                if w != 0 {
                    count += (w & rev.word_at(offset + i * WORD_BITS)).count_ones() as u64;
                }
            }
            let rest = limit % WORD_BITS;
            if rest != 0 {
                if let Some(&w) = words.get(full) {
                    let hit = w & rev.word_at(offset + full * WORD_BITS) & low_mask(rest);
                    count += hit.count_ones() as u64;
                }
            }
            count
        })
        .collect()
}

/// Double loop over element pairs. Test oracle for [`rep_profile`].
pub fn rep_profile_naive(set: &IntSet, bound: usize) -> RepProfile {
    let mut profile = RepProfile::zeros(bound);
    let elems = set.to_vec();
    for (i, &x) in elems.iter().enumerate() {
        for &y in &elems[i + 1..] {
            if x + y <= bound {
                profile.counts[x + y] += 1;
            }
        }
    }
    profile
}

/// `m ∈ (A - B) ∪ (B - A)`.
pub fn in_difference(a: &IntSet, b: &IntSet, m: usize) -> bool {
    shifted_intersects(a, b, m) || shifted_intersects(b, a, m)
}

/// A pair `(x, y) ∈ A × B` with `x - y = m`, or failing that one with
/// `y - x = m`. Among pairs of the same kind the one with the least `y`
/// (resp. least `x`) is returned.
pub fn difference_witness(a: &IntSet, b: &IntSet, m: usize) -> Option<(usize, usize)> {
    if let Some(y) = first_shifted_hit(a, b, m) {
        return Some((y + m, y));
    }
    first_shifted_hit(b, a, m).map(|x| (x, x + m))
}

/// `m ∈ A - A`.
pub fn in_self_difference(set: &IntSet, m: usize) -> bool {
    shifted_intersects(set, set, m)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ones_at(bound: usize, at: &[usize]) -> Vec<u64> {
        (0..=bound).map(|n| u64::from(at.contains(&n))).collect()
    }

    #[test]
    fn profile_of_empty_and_singleton_is_zero() {
        assert_eq!(rep_profile(&IntSet::new(), 10).counts, vec![0; 11]);
        assert_eq!(rep_profile(&IntSet::from([2]), 10).counts, vec![0; 11]);
        assert_eq!(rep_profile_naive(&IntSet::new(), 0).counts, vec![0]);
    }

    #[test]
    fn profile_examples() {
        let expected = ones_at(9, &[3, 4, 5, 7, 8, 9]);
        assert_eq!(rep_profile(&IntSet::from([0, 3, 4, 5]), 9).counts, expected);
        assert_eq!(rep_profile(&IntSet::from([1, 2, 3, 6]), 9).counts, expected);
        let naive = rep_profile_naive(&IntSet::from([0, 1, 2]), 3);
        assert_eq!(naive.counts, vec![0, 1, 1, 1]);
        let s = IntSet::from([0, 3, 5, 6]);
        assert_eq!(rep_profile(&s, 11), rep_profile_naive(&s, 11));
    }

    #[test]
    fn profile_crosses_word_boundaries() {
        let s: IntSet = (0..300).filter(|x| x % 3 != 1 || x % 7 == 0).collect();
        for bound in [0, 1, 63, 64, 65, 127, 128, 200, 599, 700] {
            assert_eq!(rep_profile(&s, bound), rep_profile_naive(&s, bound), "bound {bound}");
        }
    }

    #[test]
    fn difference_examples() {
        let a = IntSet::from([0, 3]);
        let b = IntSet::from([1, 2]);
        assert!(in_difference(&a, &b, 2));
        assert!(!in_difference(&a, &b, 4));
        assert!(in_difference(&IntSet::from([0]), &IntSet::from([0]), 0));
        assert_eq!(difference_witness(&a, &b, 2), Some((3, 1)));
        assert_eq!(difference_witness(&a, &b, 4), None);
        assert_eq!(difference_witness(&IntSet::from([5]), &IntSet::from([8]), 3), Some((5, 8)));
    }

    #[test]
    fn self_difference_examples() {
        assert!(in_self_difference(&IntSet::from([0, 3]), 3));
        assert!(!in_self_difference(&IntSet::from([1, 2]), 3));
        assert!(!in_self_difference(&IntSet::from([0, 3, 4, 5]), 7));
        assert!(in_self_difference(&IntSet::from([9]), 0));
        assert!(!in_self_difference(&IntSet::new(), 0));
        assert!(in_self_difference(&IntSet::from([1, 200]), 199));
    }
}
