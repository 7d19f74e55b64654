/// Fixed-length dense bitmap. Bits at positions `>= len` in the last word
/// are always zero.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Bitmap {
    len: usize,
    words: Vec<u64>,
}

#[inline]
fn location(bit: usize) -> (usize, u64) {
    (bit / 64, 1u64 << (bit % 64))
}

impl Bitmap {
    pub fn new(len: usize) -> Self {
        Bitmap {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn full(len: usize) -> Self {
        let mut b = Bitmap {
            len,
            words: vec![u64::MAX; len.div_ceil(64)],
        };
        b.clear_tail();
        b
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn get(&self, bit: usize) -> bool {
        debug_assert!(bit < self.len);
        let (i, m) = location(bit);
        self.words[i] & m != 0
    }

    #[inline]
    pub fn set(&mut self, bit: usize) {
        debug_assert!(bit < self.len);
        let (i, m) = location(bit);
        self.words[i] |= m;
    }

    #[inline]
    pub fn unset(&mut self, bit: usize) {
        debug_assert!(bit < self.len);
        let (i, m) = location(bit);
        self.words[i] &= !m;
    }

    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn iter_ones(&self) -> impl Iterator<Item = usize> + '_ {
        self.words.iter().enumerate().flat_map(|(i, &w)| {
            let mut w = w;
            std::iter::from_fn(move || {
                if w == 0 {
                    return None;
                }
                let t = w.trailing_zeros() as usize;
                w &= w - 1;
                Some(i * 64 + t)
            })
        })
    }

    pub fn or_assign(&mut self, other: &Bitmap) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a |= b;
        }
    }

    pub fn and_not_assign(&mut self, other: &Bitmap) {
        debug_assert_eq!(self.len, other.len);
        for (a, b) in self.words.iter_mut().zip(&other.words) {
            *a &= !b;
        }
    }

    pub fn intersection_count(&self, other: &Bitmap) -> usize {
        debug_assert_eq!(self.len, other.len);
        self.words
            .iter()
            .zip(&other.words)
            .map(|(a, b)| (a & b).count_ones() as usize)
            .sum()
    }

    pub fn is_subset(&self, other: &Bitmap) -> bool {
        self.words.iter().zip(&other.words).all(|(a, b)| a & !b == 0)
    }

    /// `self |= rotate(src, shift)`, where bit `i` of `src` lands on bit
    /// `(i + shift) mod len`.
    pub fn or_rotated(&mut self, src: &Bitmap, shift: usize) {
        debug_assert_eq!(self.len, src.len);
        if self.len == 0 {
            return;
        }
        let shift = shift % self.len;
        if shift == 0 {
            self.or_assign(src);
            return;
        }
        // Low part [0, len - shift) moves up by `shift`; high part
        // [len - shift, len) moves down by `len - shift`.
        self.or_shifted_up(src, shift);
        self.or_shifted_down(src, self.len - shift);
    }

    /// `self |= src << k`, dropping bits that leave the bitmap.
    fn or_shifted_up(&mut self, src: &Bitmap, k: usize) {
        let (wk, bk) = (k / 64, k % 64);
        let n = self.words.len();
        for i in (wk..n).rev() {
            let j = i - wk;
            let mut w = src.words[j] << bk;
            if bk != 0 && j > 0 {
                w |= src.words[j - 1] >> (64 - bk);
            }
            self.words[i] |= w;
        }
        self.clear_tail();
    }

    /// `self |= src >> k`.
    fn or_shifted_down(&mut self, src: &Bitmap, k: usize) {
        let (wk, bk) = (k / 64, k % 64);
        let n = self.words.len();
        for i in 0..n.saturating_sub(wk) {
            let j = i + wk;
            let mut w = src.words[j] >> bk;
            if bk != 0 && j + 1 < n {
                w |= src.words[j + 1] << (64 - bk);
            }
            self.words[i] |= w;
        }
    }

    fn clear_tail(&mut self) {
        let r = self.len % 64;
        if r != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << r) - 1;
            }
        }
    }
}

impl std::fmt::Debug for Bitmap {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_set().entries(self.iter_ones()).finish()
    }
}
