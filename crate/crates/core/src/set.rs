//! Fixed-width bitsets over the vertex ids `0..n` of one graph.
//!
//! Sets of up to 64 vertices live in a single inline word; larger universes
//! spill to the heap. All set algebra is exact word arithmetic.

use smallvec::{smallvec, SmallVec};
use std::cmp::Ordering;
use std::fmt;

const WORD_BITS: usize = 64;

fn word_count(n: usize) -> usize {
    n.div_ceil(WORD_BITS).max(1)
}

/// A subset of the vertices `0..n` of a fixed universe.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VertexSet {
    n: usize,
    words: SmallVec<[u64; 1]>,
}

impl VertexSet {
    /// The empty subset of a universe with `n` vertices.
    pub fn empty(n: usize) -> Self {
        VertexSet {
            n,
            words: smallvec![0; word_count(n)],
        }
    }

    /// The full universe `{0, …, n-1}`.
    pub fn full(n: usize) -> Self {
        let mut s = Self::empty(n);
        for v in 0..n {
            s.insert(v);
        }
        s
    }

    pub fn singleton(n: usize, v: usize) -> Self {
        let mut s = Self::empty(n);
        s.insert(v);
        s
    }

    pub fn from_ids<I: IntoIterator<Item = usize>>(n: usize, ids: I) -> Self {
        let mut s = Self::empty(n);
        for v in ids {
            s.insert(v);
        }
        s
    }

    /// Size of the universe this set ranges over (not the cardinality).
    pub fn universe(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn contains(&self, v: usize) -> bool {
        debug_assert!(v < self.n, "vertex {} outside universe 0..{}", v, self.n);
        self.words[v / WORD_BITS] & (1 << (v % WORD_BITS)) != 0
    }

    pub fn insert(&mut self, v: usize) {
        assert!(v < self.n, "vertex {} outside universe 0..{}", v, self.n);
        self.words[v / WORD_BITS] |= 1 << (v % WORD_BITS);
    }

    pub fn remove(&mut self, v: usize) {
        debug_assert!(v < self.n);
        self.words[v / WORD_BITS] &= !(1 << (v % WORD_BITS));
    }

    pub fn union(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.union_with(other);
        out
    }

    pub fn union_with(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.intersect_with(other);
        out
    }

    pub fn intersect_with(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= b;
        }
    }

    pub fn difference(&self, other: &Self) -> Self {
        let mut out = self.clone();
        out.remove_all(other);
        out
    }

    pub fn remove_all(&mut self, other: &Self) {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn complement(&self) -> Self {
        let mut out = Self::full(self.n);
        out.remove_all(self);
        out
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    pub fn is_superset(&self, other: &Self) -> bool {
        other.is_subset(self)
    }

    pub fn is_disjoint(&self, other: &Self) -> bool {
        debug_assert_eq!(self.n, other.n);
        self.words.iter().zip(&other.words).all(|(a, b)| a & b == 0)
    }

    pub fn intersects(&self, other: &Self) -> bool {
        !self.is_disjoint(other)
    }

    /// Smallest member, if any.
    pub fn min(&self) -> Option<usize> {
        for (i, &w) in self.words.iter().enumerate() {
            if w != 0 {
                return Some(i * WORD_BITS + w.trailing_zeros() as usize);
            }
        }
        None
    }

    /// Members in ascending order.
    pub fn iter(&self) -> Iter<'_> {
        Iter {
            set: self,
            word: 0,
            bits: self.words.first().copied().unwrap_or(0),
        }
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.iter().collect()
    }
}

/// Total order matching lexicographic comparison of the sorted member lists:
/// the set owning the smallest non-shared vertex comes first.
impl Ord for VertexSet {
    fn cmp(&self, other: &Self) -> Ordering {
        debug_assert_eq!(self.n, other.n);
        for (a, b) in self.words.iter().zip(&other.words) {
            let diff = a ^ b;
            if diff != 0 {
                let low = diff & diff.wrapping_neg();
                return if a & low != 0 {
                    Ordering::Less
                } else {
                    Ordering::Greater
                };
            }
        }
        Ordering::Equal
    }
}

impl PartialOrd for VertexSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, v) in self.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}", v)?;
        }
        write!(f, "}}")
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

pub struct Iter<'a> {
    set: &'a VertexSet,
    word: usize,
    bits: u64,
}

impl Iterator for Iter<'_> {
    type Item = usize;

    fn next(&mut self) -> Option<usize> {
        loop {
            if self.bits != 0 {
                let bit = self.bits.trailing_zeros() as usize;
                self.bits &= self.bits - 1;
                return Some(self.word * WORD_BITS + bit);
            }
            self.word += 1;
            if self.word >= self.set.words.len() {
                return None;
            }
            self.bits = self.set.words[self.word];
        }
    }
}

/// All subsets of `base`, the empty set first; order follows binary counting
/// over the members of `base`.
pub fn subsets(base: &VertexSet) -> SubsetIter {
    SubsetIter {
        members: base.to_vec(),
        n: base.universe(),
        next_mask: 0,
        done: false,
    }
}

pub struct SubsetIter {
    members: Vec<usize>,
    n: usize,
    next_mask: u64,
    done: bool,
}

impl Iterator for SubsetIter {
    type Item = VertexSet;

    fn next(&mut self) -> Option<VertexSet> {
        if self.done {
            return None;
        }
        assert!(self.members.len() < 64, "subset enumeration over ≥ 64 members");
        let mask = self.next_mask;
        let subset = VertexSet::from_ids(
            self.n,
            self.members
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, &v)| v),
        );
        self.next_mask += 1;
        if self.next_mask >= 1u64 << self.members.len() {
            self.done = true;
        }
        Some(subset)
    }
}

/// All size-`size` subsets of `members` (ascending ids) in lexicographic
/// order of the chosen id lists.
pub fn combinations(n: usize, members: &[usize], size: usize) -> Vec<VertexSet> {
    let mut out = Vec::new();
    if size > members.len() {
        return out;
    }
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        out.push(VertexSet::from_ids(n, idx.iter().map(|&i| members[i])));
        // advance the combination cursor
        let mut pos = size;
        loop {
            if pos == 0 {
                return out;
            }
            pos -= 1;
            if idx[pos] != pos + members.len() - size {
                break;
            }
        }
        idx[pos] += 1;
        for j in pos + 1..size {
            idx[j] = idx[j - 1] + 1;
        }
    }
}
