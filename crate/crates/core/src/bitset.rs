//! Compact bit sets over an ordered universe.
//!
//! Expression domains are subsets of the ordered domain set S; storing them
//! as machine-word bitmaps makes the disjointness and equality checks of the
//! expression builders O(|S|/64).

/// A fixed-capacity set of small indices backed by 64-bit words.
///
/// Ordering is lexicographic on the index sequence, which makes collections
/// keyed by `BitSet` iterate in a deterministic, reproducible order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    capacity: usize,
    words: Vec<u64>,
}

impl BitSet {
    pub fn new(capacity: usize) -> Self {
        BitSet {
            capacity,
            words: vec![0; capacity.div_ceil(64)],
        }
    }

    pub fn singleton(capacity: usize, index: usize) -> Self {
        let mut s = Self::new(capacity);
        s.insert(index);
        s
    }

    pub fn full(capacity: usize) -> Self {
        let mut s = Self::new(capacity);
        for i in 0..capacity {
            s.insert(i);
        }
        s
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn insert(&mut self, index: usize) {
        assert!(index < self.capacity, "bitset index out of range");
        self.words[index / 64] |= 1 << (index % 64);
    }

    pub fn contains(&self, index: usize) -> bool {
        index < self.capacity && self.words[index / 64] & (1 << (index % 64)) != 0
    }

    pub fn is_empty(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn len(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn is_disjoint(&self, other: &BitSet) -> bool {
        self.words
            .iter()
            .zip(&other.words)
            .all(|(a, b)| a & b == 0)
    }

    pub fn union(&self, other: &BitSet) -> BitSet {
        debug_assert_eq!(self.capacity, other.capacity);
        BitSet {
            capacity: self.capacity,
            words: self
                .words
                .iter()
                .zip(&other.words)
                .map(|(a, b)| a | b)
                .collect(),
        }
    }

    /// Indices present in the set, in increasing order.
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        (0..self.capacity).filter(move |&i| self.contains(i))
    }
}

impl PartialOrd for BitSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for BitSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a: Vec<usize> = self.iter().collect();
        let b: Vec<usize> = other.iter().collect();
        a.cmp(&b)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_ops() {
        let mut a = BitSet::new(70);
        a.insert(0);
        a.insert(69);
        assert!(a.contains(0) && a.contains(69) && !a.contains(1));
        assert_eq!(a.len(), 2);

        let b = BitSet::singleton(70, 1);
        assert!(a.is_disjoint(&b));
        let u = a.union(&b);
        assert_eq!(u.iter().collect::<Vec<_>>(), vec![0, 1, 69]);
        assert!(!u.is_disjoint(&a));
    }

    #[test]
    fn full_and_empty() {
        assert!(BitSet::new(10).is_empty());
        assert_eq!(BitSet::full(10).len(), 10);
        assert!(BitSet::new(0).is_empty());
    }
}
