//! Dense bit-vector sets of non-negative integers.
//!
//! Bit `i` of word `i / 64` (least significant bit first) is set iff `i` is a
//! member. Trailing zero words are always trimmed, so two sets are equal iff
//! their word vectors are equal.

use std::fmt;

use serde::{Serialize, Serializer};

pub(crate) const WORD_BITS: usize = 64;

/// Largest element an [`IntSet`] may hold. Operations that would exceed it
/// report an overflow instead of allocating.
pub const MAX_ELEMENT: usize = u32::MAX as usize;

#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct IntSet {
    words: Vec<u64>,
}

impl IntSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// The interval `[lo, hi]`; empty when `lo > hi`.
    pub fn interval(lo: usize, hi: usize) -> Self {
        let mut set = Self::new();
        if lo > hi {
            return set;
        }
        set.words = vec![0; hi / WORD_BITS + 1];
        for i in lo / WORD_BITS..=hi / WORD_BITS {
            let start = if i == lo / WORD_BITS { lo % WORD_BITS } else { 0 };
            let end = if i == hi / WORD_BITS { hi % WORD_BITS } else { WORD_BITS - 1 };
            set.words[i] = low_mask(end + 1) & !low_mask(start);
        }
        set
    }

    pub(crate) fn from_words(mut words: Vec<u64>) -> Self {
        while words.last() == Some(&0) {
            words.pop();
        }
        Self { words }
    }

    pub(crate) fn words(&self) -> &[u64] {
        &self.words
    }

    /// Builds a set from a bit pattern (bit `i` set iff `i` is a member).
    pub fn from_mask(mask: u128) -> Self {
        Self::from_words(vec![mask as u64, (mask >> 64) as u64])
    }

    /// Bit pattern of the set as a `u128`, or `None` if an element is ≥ 128.
    pub fn to_mask(&self) -> Option<u128> {
        match self.words.len() {
            0 => Some(0),
            1 => Some(self.words[0] as u128),
            2 => Some(self.words[0] as u128 | (self.words[1] as u128) << 64),
            _ => None,
        }
    }

    pub fn insert(&mut self, x: usize) {
        let w = x / WORD_BITS;
        if w >= self.words.len() {
            self.words.resize(w + 1, 0);
        }
        self.words[w] |= 1 << (x % WORD_BITS);
    }

    pub fn contains(&self, x: usize) -> bool {
        self.words
            .get(x / WORD_BITS)
            .is_some_and(|w| w >> (x % WORD_BITS) & 1 == 1)
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn min(&self) -> Option<usize> {
        self.iter().next()
    }

    pub fn max(&self) -> Option<usize> {
        let last = *self.words.last()?;
        Some((self.words.len() - 1) * WORD_BITS + (WORD_BITS - 1 - last.leading_zeros() as usize))
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            words: &self.words,
            index: 0,
            current: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }

    /// `{t + a : a ∈ self}`.
    ///
    /// Panics if the result would exceed [`MAX_ELEMENT`]; use
    /// [`IntSet::checked_translate`] for untrusted shifts.
    pub fn translate(&self, t: usize) -> Self {
        self.checked_translate(t)
            .expect("translated set exceeds MAX_ELEMENT")
    }

    pub fn checked_translate(&self, t: usize) -> Option<Self> {
        let Some(max) = self.max() else {
            return Some(Self::new());
        };
        if max.checked_add(t)? > MAX_ELEMENT {
            return None;
        }
        let word_shift = t / WORD_BITS;
        let bit_shift = t % WORD_BITS;
        let mut words = vec![0u64; word_shift + self.words.len() + 1];
        for (i, &w) in self.words.iter().enumerate() {
            words[i + word_shift] |= w << bit_shift;
            if bit_shift != 0 {
                words[i + word_shift + 1] |= w >> (WORD_BITS - bit_shift);
            }
        }
        Some(Self::from_words(words))
    }

    /// Elements `≤ bound`.
    pub fn truncate(&self, bound: usize) -> Self {
        let keep = (bound / WORD_BITS + 1).min(self.words.len());
        let mut words = self.words[..keep].to_vec();
        if keep == bound / WORD_BITS + 1 {
            if let Some(last) = words.last_mut() {
                *last &= low_mask(bound % WORD_BITS + 1);
            }
        }
        Self::from_words(words)
    }

    pub fn union(&self, other: &Self) -> Self {
        let (long, short) = if self.words.len() >= other.words.len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut words = long.words.clone();
        for (w, s) in words.iter_mut().zip(&short.words) {
            *w |= s;
        }
        Self { words }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        Self::from_words(
            self.words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a & b)
                .collect(),
        )
    }

    pub fn difference(&self, other: &Self) -> Self {
        Self::from_words(
            self.words
                .iter()
                .enumerate()
                .map(|(i, a)| a & !other.words.get(i).copied().unwrap_or(0))
                .collect(),
        )
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.words
            .iter()
            .enumerate()
            .all(|(i, a)| a & !other.words.get(i).copied().unwrap_or(0) == 0)
    }

    /// Whether `self` contains every integer in `[0, bound]`.
    pub fn covers_interval(&self, bound: usize) -> bool {
        IntSet::interval(0, bound).is_subset(self)
    }

    /// 64 bits of the set starting at bit `offset`.
    #[inline]
    pub(crate) fn word_at(&self, offset: usize) -> u64 {
        word_at(&self.words, offset)
    }
}

#[inline]
pub(crate) fn low_mask(bits: usize) -> u64 {
    if bits >= WORD_BITS {
        !0
    } else {
        (1u64 << bits) - 1
    }
}

#[inline]
pub(crate) fn word_at(words: &[u64], offset: usize) -> u64 {
    let i = offset / WORD_BITS;
    let s = offset % WORD_BITS;
    let lo = words.get(i).copied().unwrap_or(0);
    if s == 0 {
        return lo;
    }
    let hi = words.get(i + 1).copied().unwrap_or(0);
    (lo >> s) | (hi << (WORD_BITS - s))
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            self.current = *self.words.get(self.index)?;
        }
    }
}

impl<'a> IntoIterator for &'a IntSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl FromIterator<usize> for IntSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = Self::new();
        for x in iter {
            set.insert(x);
        }
        set
    }
}

impl<const N: usize> From<[usize; N]> for IntSet {
    fn from(items: [usize; N]) -> Self {
        items.into_iter().collect()
    }
}

impl fmt::Debug for IntSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

impl Serialize for IntSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

/// True iff some `x ∈ low` has `x + shift ∈ high`.
pub(crate) fn shifted_intersects(high: &IntSet, low: &IntSet, shift: usize) -> bool {
    low.words
        .iter()
        .enumerate()
        .any(|(i, &w)| w != 0 && w & high.word_at(i * WORD_BITS + shift) != 0)
}

/// First `x ∈ low` with `x + shift ∈ high`.
pub(crate) fn first_shifted_hit(high: &IntSet, low: &IntSet, shift: usize) -> Option<usize> {
    low.words.iter().enumerate().find_map(|(i, &w)| {
        let hit = w & high.word_at(i * WORD_BITS + shift);
        (hit != 0).then(|| i * WORD_BITS + hit.trailing_zeros() as usize)
    })
}
