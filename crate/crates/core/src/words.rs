//! Fixed-width binary words with the partial-order and lattice operations
//! used throughout the crate.
//!
//! Coordinates are 1-based; coordinate 1 is the leftmost character in the
//! string rendering. Widths of 128 or less stay inline (no heap allocation);
//! longer words spill to the heap transparently.

use std::cmp::Ordering;
use std::fmt;
use smallvec::SmallVec;
use thiserror::Error;

const BLOCK_BITS: usize = 64;

/// An immutable binary word of fixed width `h >= 1`.
///
/// Binary operations panic on width mismatch: mixed widths never occur in a
/// correct caller, so a mismatch is a bug rather than a recoverable error.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    width: usize,
    // Coordinate i lives in blocks[(i-1)/64] at bit (i-1)%64.
    // Bits at positions >= width are always zero.
    blocks: SmallVec<[u64; 2]>,
}

/// Error from [`Word::parse`].
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ParseWordError {
    #[error("empty word")]
    Empty,
    #[error("invalid character {found:?} at position {position}")]
    InvalidCharacter { position: usize, found: char },
}

fn block_count(width: usize) -> usize {
    width.div_ceil(BLOCK_BITS)
}

impl Word {
    /// The all-zeros word `0^h`. Panics if `h == 0`.
    pub fn zeros(h: usize) -> Word {
        assert!(h >= 1, "word width must be at least 1");
        Word {
            width: h,
            blocks: smallvec::smallvec![0; block_count(h)],
        }
    }

    /// The all-ones word `1^h`. Panics if `h == 0`.
    pub fn ones(h: usize) -> Word {
        let mut w = Word::zeros(h);
        for b in w.blocks.iter_mut() {
            *b = u64::MAX;
        }
        w.clear_excess();
        w
    }

    /// The unit word `0^{i-1} 1 0^{h-i}` (single one at coordinate `i`).
    pub fn unit(h: usize, i: usize) -> Word {
        let mut w = Word::zeros(h);
        w.set(i, true);
        w
    }

    pub fn width(&self) -> usize {
        self.width
    }

    /// Coordinate `i` (1-based). Panics if `i` is out of range.
    pub fn get(&self, i: usize) -> bool {
        assert!(i >= 1 && i <= self.width, "coordinate {i} out of range 1..={}", self.width);
        self.blocks[(i - 1) / BLOCK_BITS] >> ((i - 1) % BLOCK_BITS) & 1 == 1
    }

    /// Sets coordinate `i` (1-based). Panics if `i` is out of range.
    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i >= 1 && i <= self.width, "coordinate {i} out of range 1..={}", self.width);
        let mask = 1u64 << ((i - 1) % BLOCK_BITS);
        if value {
            self.blocks[(i - 1) / BLOCK_BITS] |= mask;
        } else {
            self.blocks[(i - 1) / BLOCK_BITS] &= !mask;
        }
    }

    /// Number of one coordinates.
    pub fn weight(&self) -> usize {
        self.blocks.iter().map(|b| b.count_ones() as usize).sum()
    }

    /// Number of coordinates where `self` and `other` differ.
    pub fn hamming(&self, other: &Word) -> usize {
        self.check_width(other);
        self.blocks
            .iter()
            .zip(&other.blocks)
            .map(|(a, b)| (a ^ b).count_ones() as usize)
            .sum()
    }

    /// Coordinatewise order: `self <= other` iff every one of `self` is a one
    /// of `other`.
    pub fn leq(&self, other: &Word) -> bool {
        self.check_width(other);
        self.blocks.iter().zip(&other.blocks).all(|(a, b)| a & !b == 0)
    }

    /// Coordinatewise AND.
    pub fn meet(&self, other: &Word) -> Word {
        self.check_width(other);
        self.zip_blocks(other, |a, b| a & b)
    }

    /// Coordinatewise OR.
    pub fn join(&self, other: &Word) -> Word {
        self.check_width(other);
        self.zip_blocks(other, |a, b| a | b)
    }

    /// Coordinatewise XOR.
    pub fn xor(&self, other: &Word) -> Word {
        self.check_width(other);
        self.zip_blocks(other, |a, b| a ^ b)
    }

    /// Flips the coordinates of `self` selected by the ones of `mask`.
    ///
    /// For fixed `mask` this map is an involution and an isometry of the
    /// Hamming metric: it preserves every pairwise Hamming distance.
    pub fn flip_under(&self, mask: &Word) -> Word {
        self.xor(mask)
    }

    /// ORs the coordinatewise difference of `a` and `b` into `self`, without
    /// allocating. All three widths must agree.
    pub(crate) fn or_xor(&mut self, a: &Word, b: &Word) {
        self.check_width(a);
        a.check_width(b);
        for ((s, x), y) in self.blocks.iter_mut().zip(&a.blocks).zip(&b.blocks) {
            *s |= x ^ y;
        }
    }

    /// Builds a word of width `h <= 64` directly from its coordinate block:
    /// coordinate `i` is bit `i - 1`.
    pub(crate) fn from_block0(h: usize, bits: u64) -> Word {
        debug_assert!(h >= 1 && h <= BLOCK_BITS, "width {h} needs more than one block");
        debug_assert!(h == BLOCK_BITS || bits >> h == 0, "bits beyond width {h}");
        Word { width: h, blocks: smallvec::smallvec![bits] }
    }

    /// 1-based indices of the one coordinates, ascending.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        self.blocks.iter().enumerate().flat_map(|(bi, &block)| {
            let mut rest = block;
            std::iter::from_fn(move || {
                if rest == 0 {
                    return None;
                }
                let tz = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(bi * BLOCK_BITS + tz + 1)
            })
        })
    }

    /// All words obtained by clearing exactly one set coordinate
    /// (the lower covers of `self` in the subset order), ascending coordinate.
    pub fn downs(&self) -> impl Iterator<Item = Word> + '_ {
        self.support().map(move |i| {
            let mut w = self.clone();
            w.set(i, false);
            w
        })
    }

    /// All words obtained by setting exactly one clear coordinate
    /// (the upper covers of `self`), ascending coordinate.
    pub fn ups(&self) -> impl Iterator<Item = Word> + '_ {
        (1..=self.width).filter(|&i| !self.get(i)).map(move |i| {
            let mut w = self.clone();
            w.set(i, true);
            w
        })
    }

    /// Reorders coordinates: coordinate `i` of `self` becomes coordinate
    /// `perm[i-1]` of the result. `perm` must be a permutation of `1..=h`.
    pub fn permute(&self, perm: &[usize]) -> Word {
        assert_eq!(perm.len(), self.width, "permutation length must equal width");
        let mut out = Word::zeros(self.width);
        for i in self.support() {
            out.set(perm[i - 1], true);
        }
        out
    }

    /// Parses a string of `0`/`1` characters; the width is the string length.
    pub fn parse(s: &str) -> Result<Word, ParseWordError> {
        if s.is_empty() {
            return Err(ParseWordError::Empty);
        }
        let mut w = Word::zeros(s.len());
        for (idx, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => w.set(idx + 1, true),
                found => {
                    return Err(ParseWordError::InvalidCharacter { position: idx + 1, found })
                }
            }
        }
        Ok(w)
    }

    fn zip_blocks(&self, other: &Word, f: impl Fn(u64, u64) -> u64) -> Word {
        Word {
            width: self.width,
            blocks: self
                .blocks
                .iter()
                .zip(&other.blocks)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    fn check_width(&self, other: &Word) {
        assert_eq!(
            self.width, other.width,
            "width mismatch: {} vs {}",
            self.width, other.width
        );
    }

    fn clear_excess(&mut self) {
        let used = self.width % BLOCK_BITS;
        if used != 0 {
            if let Some(last) = self.blocks.last_mut() {
                *last &= (1u64 << used) - 1;
            }
        }
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.width {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Ord for Word {
    /// Lexicographic on the string rendering (coordinate 1 most significant).
    /// Words of different widths order by width first.
    fn cmp(&self, other: &Word) -> Ordering {
        self.width.cmp(&other.width).then_with(|| {
            for (a, b) in self.blocks.iter().zip(&other.blocks) {
                // Within a block, lower bit positions are earlier coordinates;
                // reversing makes the block compare in rendering order.
                let ord = a.reverse_bits().cmp(&b.reverse_bits());
                if ord != Ordering::Equal {
                    return ord;
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn render_round_trip() {
        for s in ["0", "1", "00000", "10011", "01011", "00111"] {
            assert_eq!(w(s).to_string(), s);
        }
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert_eq!(Word::parse(""), Err(ParseWordError::Empty));
        assert_eq!(
            Word::parse("0120"),
            Err(ParseWordError::InvalidCharacter { position: 3, found: '2' })
        );
    }

    #[test]
    #[should_panic(expected = "width must be at least 1")]
    fn zero_width_rejected() {
        Word::zeros(0);
    }

    #[test]
    #[should_panic(expected = "width mismatch")]
    fn width_mismatch_panics() {
        w("101").meet(&w("10"));
    }

    #[test]
    fn constructors() {
        assert_eq!(Word::zeros(5).to_string(), "00000");
        assert_eq!(Word::ones(5).to_string(), "11111");
        assert_eq!(Word::unit(5, 1).to_string(), "10000");
        assert_eq!(Word::unit(5, 5).to_string(), "00001");
        assert_eq!(Word::ones(70).weight(), 70);
    }

    #[test]
    fn hamming_examples() {
        assert_eq!(w("10011").hamming(&w("01011")), 2);
        assert_eq!(w("0000").hamming(&w("0000")), 0);
        assert_eq!(w("1010").hamming(&w("0101")), 4);
    }

    #[test]
    fn weight_equals_distance_from_zero() {
        for s in ["10011", "00000", "11111", "01010"] {
            assert_eq!(w(s).weight(), w(s).hamming(&Word::zeros(5)));
        }
    }

    #[test]
    fn leq_examples() {
        assert!(w("00011").leq(&w("10011")));
        assert!(!w("10011").leq(&w("00011")));
        assert!(w("00000").leq(&w("00000")));
        assert!(!w("01000").leq(&w("10011")));
    }

    #[test]
    fn lattice_ops() {
        assert_eq!(w("1110").meet(&w("1101")), w("1100"));
        assert_eq!(w("1010").join(&w("0110")), w("1110"));
        assert_eq!(w("1010").xor(&w("0110")), w("1100"));
    }

    // The three characterizations of the subset order agree on every pair of
    // width-4 words.
    #[test]
    fn leq_characterizations_exhaustive_h4() {
        let all: Vec<Word> = (0u32..16)
            .map(|bits| {
                let mut x = Word::zeros(4);
                for i in 1..=4 {
                    x.set(i, bits >> (i - 1) & 1 == 1);
                }
                x
            })
            .collect();
        for u in &all {
            for v in &all {
                let by_support = u.support().all(|i| v.get(i));
                let by_meet = u.meet(v) == *u;
                assert_eq!(u.leq(v), by_support);
                assert_eq!(u.leq(v), by_meet);
            }
        }
    }

    #[test]
    fn flip_under_example() {
        // Flipping 10000 under mask 00011 sets the two trailing coordinates.
        assert_eq!(w("10000").flip_under(&w("00011")), w("10011"));
        assert_eq!(w("01000").flip_under(&w("00011")), w("01011"));
        assert_eq!(w("00100").flip_under(&w("00011")), w("00111"));
    }

    #[test]
    fn support_and_covers() {
        assert_eq!(w("10011").support().collect::<Vec<_>>(), vec![1, 4, 5]);
        assert_eq!(Word::zeros(3).support().count(), 0);
        let downs: Vec<String> = w("101").downs().map(|x| x.to_string()).collect();
        assert_eq!(downs, ["001", "100"]);
        let ups: Vec<String> = w("101").ups().map(|x| x.to_string()).collect();
        assert_eq!(ups, ["111"]);
    }

    #[test]
    fn ordering_matches_string_order() {
        let mut words = vec![w("110"), w("001"), w("010"), w("101"), w("000")];
        words.sort();
        let rendered: Vec<String> = words.iter().map(|x| x.to_string()).collect();
        assert_eq!(rendered, ["000", "001", "010", "101", "110"]);
    }

    #[test]
    fn ordering_across_block_boundary() {
        // Coordinate 65 lands in the second storage block; string order must
        // still treat coordinate 1 as most significant.
        let a = Word::unit(70, 65);
        let b = Word::unit(70, 1);
        assert!(a < b);
        assert!(Word::zeros(70) < a);
    }

    #[test]
    fn wide_words() {
        let mask = Word::unit(200, 199);
        let x = Word::ones(200);
        assert_eq!(x.flip_under(&mask).weight(), 199);
        assert_eq!(x.hamming(&x.flip_under(&mask)), 1);
        assert!(mask.leq(&x));
    }

    #[test]
    fn permute_moves_coordinates() {
        // Swap coordinates 3 and 4, fix the rest.
        let perm = [1, 2, 4, 3];
        assert_eq!(w("1110").permute(&perm), w("1101"));
        assert_eq!(w("1100").permute(&perm), w("1100"));
    }
}
