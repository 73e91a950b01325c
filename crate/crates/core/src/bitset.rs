//! Fixed-length bit set with word-level shifted OR, the workhorse of both the
//! representation sieve and the cyclic sumsets in the local search.

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BitSet {
    words: Vec<u64>,
    len: usize,
}

impl BitSet {
    pub fn new(len: usize) -> Self {
        Self {
            words: vec![0; len.div_ceil(64)],
            len,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn bytes_for(len: usize) -> u64 {
        (len.div_ceil(64) * 8) as u64
    }

    #[inline]
    pub fn set(&mut self, i: usize) {
        debug_assert!(i < self.len);
        self.words[i / 64] |= 1 << (i % 64);
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        i < self.len && self.words[i / 64] >> (i % 64) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    pub fn words(&self) -> &[u64] {
        &self.words
    }

    pub(crate) fn words_mut(&mut self) -> &mut [u64] {
        &mut self.words
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(wi, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let bit = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(wi * 64 + bit)
            })
        })
    }

    /// Bits `pos..pos + 64` as one word; positions outside `0..len` read as 0.
    #[inline]
    pub fn word_at(&self, pos: i64) -> u64 {
        if pos >= self.len as i64 || pos <= -64 {
            return 0;
        }
        let w = pos.div_euclid(64);
        let off = pos.rem_euclid(64) as u32;
        let word = |i: i64| {
            if i < 0 {
                0
            } else {
                self.words.get(i as usize).copied().unwrap_or(0)
            }
        };
        if off == 0 {
            word(w)
        } else {
            (word(w) >> off) | (word(w + 1) << (64 - off))
        }
    }

    pub(crate) fn clear_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    /// `self[i] |= src[i - shift]` for every `i` in range.
    pub fn or_shifted(&mut self, src: &BitSet, shift: i64) {
        or_shifted_words(&mut self.words, 0, src, shift);
        self.clear_tail();
    }

    /// `self[i] |= src[(i - shift) mod len]`; both sets must have equal length.
    pub fn or_rotated(&mut self, src: &BitSet, shift: usize) {
        debug_assert_eq!(self.len, src.len);
        let shift = (shift % self.len) as i64;
        self.or_shifted(src, shift);
        if shift != 0 {
            self.or_shifted(src, shift - self.len as i64);
        }
    }

    pub fn or_assign(&mut self, other: &BitSet) {
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }
}

/// Shifted OR into a window of destination words starting at word index
/// `first_word`. Used directly by the parallel sieve, where each worker owns
/// a disjoint window. Bits past the logical length are left to the caller.
pub(crate) fn or_shifted_words(dest: &mut [u64], first_word: usize, src: &BitSet, shift: i64) {
    for (k, d) in dest.iter_mut().enumerate() {
        let start = ((first_word + k) * 64) as i64 - shift;
        *d |= src.word_at(start);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn from_bits(len: usize, bits: &[usize]) -> BitSet {
        let mut b = BitSet::new(len);
        for &i in bits {
            b.set(i);
        }
        b
    }

    #[test]
    fn shifted_or_matches_naive() {
        for len in [1usize, 63, 64, 65, 200] {
            let bits: Vec<usize> = (0..len).filter(|i| (i * 7 + 3) % 5 < 2).collect();
            let src = from_bits(len, &bits);
            for shift in [-130i64, -64, -3, 0, 1, 63, 64, 65, 199] {
                let mut got = BitSet::new(len);
                got.or_shifted(&src, shift);
                let expected: Vec<usize> = bits
                    .iter()
                    .map(|&i| i as i64 + shift)
                    .filter(|&j| j >= 0 && j < len as i64)
                    .map(|j| j as usize)
                    .collect();
                assert_eq!(got, from_bits(len, &expected), "len={len} shift={shift}");
            }
            for rot in [0usize, 1, 5, 64, len - 1] {
                let mut got = BitSet::new(len);
                got.or_rotated(&src, rot);
                let expected: Vec<usize> = bits.iter().map(|&i| (i + rot) % len).collect();
                assert_eq!(got, from_bits(len, &expected));
            }
        }
    }

    #[test]
    fn iteration_and_counts() {
        let b = from_bits(130, &[0, 5, 64, 129]);
        assert_eq!(b.iter_ones().collect::<Vec<_>>(), vec![0, 5, 64, 129]);
        assert_eq!(b.count_ones(), 4);
        assert!(b.get(129) && !b.get(128) && !b.get(500));
    }
}
