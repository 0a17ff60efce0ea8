//! Word-packed bit vectors for correlation accumulation.

/// Fixed-length bit vector packed into u64 words.
#[derive(Debug, Clone)]
pub struct BitVec64 {
    nbits: usize,
    words: Vec<u64>,
}

impl BitVec64 {
    pub fn zeros(nbits: usize) -> Self {
        BitVec64 {
            nbits,
            words: vec![0; nbits.div_ceil(64)],
        }
    }

    pub fn len(&self) -> usize {
        self.nbits
    }

    pub fn is_empty(&self) -> bool {
        self.nbits == 0
    }

    #[inline]
    pub fn set(&mut self, i: usize, b: bool) {
        let (w, o) = (i / 64, i % 64);
        if b {
            self.words[w] |= 1 << o;
        } else {
            self.words[w] &= !(1 << o);
        }
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    pub fn count_ones(&self) -> u64 {
        self.words.iter().map(|w| w.count_ones() as u64).sum()
    }

    /// Concatenation of the vector with itself, so that any cyclic window
    /// of length `nbits` is a contiguous bit range.
    pub fn doubled(&self) -> DoubledBits {
        let n2 = 2 * self.nbits;
        let mut d = BitVec64::zeros(n2);
        for i in 0..self.nbits {
            if self.get(i) {
                d.set(i, true);
                d.set(i + self.nbits, true);
            }
        }
        DoubledBits { period: self.nbits, words: d.words }
    }
}

/// Two periods of a bit vector, for cyclic-window extraction.
pub struct DoubledBits {
    period: usize,
    words: Vec<u64>,
}

impl DoubledBits {
    pub fn period(&self) -> usize {
        self.period
    }

    /// 64 bits starting at bit offset `start` (start + 64 <= 2*period).
    #[inline]
    fn window64(&self, start: usize) -> u64 {
        let (w, o) = (start / 64, start % 64);
        if o == 0 {
            self.words[w]
        } else {
            let lo = self.words[w] >> o;
            let hi = self.words.get(w + 1).copied().unwrap_or(0) << (64 - o);
            lo | hi
        }
    }

    /// Sum over t in 0..period of a[t] XOR self[(t + offset) mod period].
    pub fn xor_count_rot(&self, a: &BitVec64, offset: usize) -> u64 {
        assert_eq!(a.len(), self.period);
        let n = self.period;
        let full = n / 64;
        let mut acc = 0u64;
        for w in 0..full {
            acc += (a.words[w] ^ self.window64(offset + 64 * w)).count_ones() as u64;
        }
        let rem = n % 64;
        if rem != 0 {
            let tail = a.words[full] ^ self.window64(offset + 64 * full);
            acc += (tail & ((1u64 << rem) - 1)).count_ones() as u64;
        }
        acc
    }
}
