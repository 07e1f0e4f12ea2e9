//! Fixed-universe vertex bitsets.
//!
//! Every set carries the size of its universe; binary operations require both
//! operands to share it. Sets over at most 256 vertices stay inline.

use smallvec::SmallVec;
use std::fmt;

const WORD_BITS: usize = 64;

#[inline]
fn words_for(universe: usize) -> usize {
    universe.div_ceil(WORD_BITS)
}

/// A set of vertices drawn from `0..universe`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct VertexSet {
    universe: usize,
    words: SmallVec<[u64; 4]>,
}

impl VertexSet {
    pub fn new(universe: usize) -> Self {
        Self {
            universe,
            words: SmallVec::from_elem(0, words_for(universe)),
        }
    }

    pub fn full(universe: usize) -> Self {
        let mut set = Self::new(universe);
        for w in set.words.iter_mut() {
            *w = u64::MAX;
        }
        set.trim();
        set
    }

    pub fn from_iter<I: IntoIterator<Item = usize>>(universe: usize, items: I) -> Self {
        let mut set = Self::new(universe);
        for v in items {
            set.insert(v);
        }
        set
    }

    /// Builds a set from the low `universe` bits of `mask`.
    pub fn from_mask(universe: usize, mask: u64) -> Self {
        assert!(universe <= WORD_BITS, "mask sets hold at most 64 vertices");
        let mut set = Self::new(universe);
        if universe > 0 {
            set.words[0] = mask;
            set.trim();
        }
        set
    }

    /// The set as a single word; only valid for universes of at most 64.
    pub fn as_mask(&self) -> u64 {
        assert!(self.universe <= WORD_BITS, "set does not fit a single word");
        self.words.first().copied().unwrap_or(0)
    }

    fn trim(&mut self) {
        let rem = self.universe % WORD_BITS;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    #[inline]
    pub fn universe(&self) -> usize {
        self.universe
    }

    #[inline]
    pub fn insert(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let (w, b) = (v / WORD_BITS, v % WORD_BITS);
        let fresh = self.words[w] & (1 << b) == 0;
        self.words[w] |= 1 << b;
        fresh
    }

    #[inline]
    pub fn remove(&mut self, v: usize) -> bool {
        assert!(v < self.universe, "vertex {v} outside universe {}", self.universe);
        let (w, b) = (v / WORD_BITS, v % WORD_BITS);
        let present = self.words[w] & (1 << b) != 0;
        self.words[w] &= !(1 << b);
        present
    }

    #[inline]
    pub fn contains(&self, v: usize) -> bool {
        v < self.universe && self.words[v / WORD_BITS] & (1 << (v % WORD_BITS)) != 0
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn clear(&mut self) {
        for w in self.words.iter_mut() {
            *w = 0;
        }
    }

    #[inline]
    fn check_same(&self, other: &Self) {
        debug_assert_eq!(self.universe, other.universe, "universe mismatch");
    }

    pub fn union_with(&mut self, other: &Self) {
        self.check_same(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersect_with(&mut self, other: &Self) {
        self.check_same(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference_with(&mut self, other: &Self) {
        self.check_same(other);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.difference_with(other);
        out
    }

    pub fn symmetric_difference(&self, other: &Self) -> Self {
        self.check_same(other);
        let mut out = self.clone();
        for (a, b) in out.words.iter_mut().zip(&other.words) {
            *a ^= b;
        }
        out
    }

    /// Complement within the universe.
    pub fn complement(&self) -> Self {
        let mut out = self.clone();
        for w in out.words.iter_mut() {
            *w = !*w;
        }
        out.trim();
        out
    }

    pub fn intersects(&self, other: &Self) -> bool {
        self.check_same(other);
        self.words.iter().zip(&other.words).any(|(a, b)| a & b != 0)
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.check_same(other);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn intersection_len(&self, other: &Self) -> usize {
        self.check_same(other);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn first(&self) -> Option<usize> {
        self.iter().next()
    }

    /// Members in increasing order.
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

    /// Lexicographic comparison of the sorted member lists.
    pub fn cmp_members(&self, other: &Self) -> std::cmp::Ordering {
        self.iter().cmp(other.iter())
    }
}

pub struct Iter<'a> {
    words: &'a [u64],
    index: usize,
    current: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let bit = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.index * WORD_BITS + bit);
            }
            self.index += 1;
            if self.index >= self.words.len() {
                return None;
            }
            self.current = self.words[self.index];
        }
    }
}

impl<'a> IntoIterator for &'a VertexSet {
    type Item = usize;
    type IntoIter = Iter<'a>;

    fn into_iter(self) -> Iter<'a> {
        self.iter()
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}
