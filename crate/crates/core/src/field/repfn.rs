use serde::Serialize;

use crate::error::{Error, Result};
use crate::field::conv::cyclic_convolve;

/// An exact count vector indexed by `Z_n` (representation functions and
/// fiber counts). `n` is `p` or `p - 1`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct RepFn {
    counts: Vec<u64>,
    mass: u128,
}

impl RepFn {
    pub fn new(counts: Vec<u64>) -> Self {
        let mass = counts.iter().map(|&c| c as u128).sum();
        RepFn { counts, mass }
    }

    pub fn zeros(len: usize) -> Self {
        RepFn {
            counts: vec![0; len],
            mass: 0,
        }
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.counts.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    #[inline]
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    #[inline]
    pub fn get(&self, i: usize) -> u64 {
        self.counts[i]
    }

    /// Total mass, `sum counts`.
    #[inline]
    pub fn mass(&self) -> u128 {
        self.mass
    }

    pub fn max(&self) -> u64 {
        self.counts.iter().copied().max().unwrap_or(0)
    }

    /// Number of nonzero entries.
    pub fn support_len(&self) -> usize {
        self.counts.iter().filter(|&&c| c != 0).count()
    }

    /// `sum_i counts[i]^2`.
    pub fn sum_squares(&self) -> u128 {
        self.counts.iter().map(|&c| c as u128 * c as u128).sum()
    }

    /// `sum_i self[i] * other[i]`.
    pub fn dot(&self, other: &RepFn) -> Result<u128> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch(self.len(), other.len()));
        }
        Ok(self
            .counts
            .iter()
            .zip(&other.counts)
            .map(|(&a, &b)| a as u128 * b as u128)
            .sum())
    }
}

/// Exact cyclic convolution `w[s] = sum_t u[t] v[s - t]`.
pub fn cyclic_convolve_exact(u: &RepFn, v: &RepFn) -> Result<RepFn> {
    let w = cyclic_convolve(&u.counts, &v.counts)?;
    Ok(RepFn::new(w))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn schoolbook(u: &[u64], v: &[u64]) -> Vec<u64> {
        let n = u.len();
        (0..n)
            .map(|s| (0..n).map(|t| u[t] * v[(s + n - t) % n]).sum())
            .collect()
    }

    #[test]
    fn examples() {
        let ind = RepFn::new(vec![1, 1, 0, 0, 0]);
        let w = cyclic_convolve_exact(&ind, &ind).unwrap();
        assert_eq!(w.counts(), &[1, 2, 1, 0, 0]);
        assert_eq!(w.mass(), ind.mass() * ind.mass());

        let delta = RepFn::new(vec![1, 0, 0, 0, 0, 0, 0]);
        let u = RepFn::new(vec![3, 0, 9, 2, 0, 0, 5]);
        assert_eq!(cyclic_convolve_exact(&u, &delta).unwrap(), u);
    }

    #[test]
    fn length_mismatch() {
        assert!(matches!(
            cyclic_convolve_exact(&RepFn::zeros(3), &RepFn::zeros(4)),
            Err(Error::LengthMismatch(3, 4))
        ));
    }

    #[test]
    fn thousand_random_pairs_match_schoolbook() {
        let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
        for i in 0..1000 {
            // Mostly short vectors, with a tail of long ones hitting the transform path.
            let n = if i % 50 == 0 {
                rng.gen_range(512..=4096)
            } else {
                rng.gen_range(1..700)
            };
            let max = [2u64, 100, 1 << 16][i % 3];
            let u: Vec<u64> = (0..n).map(|_| rng.gen_range(0..max)).collect();
            let v: Vec<u64> = (0..n).map(|_| rng.gen_range(0..max)).collect();
            let w = cyclic_convolve_exact(&RepFn::new(u.clone()), &RepFn::new(v.clone())).unwrap();
            assert_eq!(w.counts(), schoolbook(&u, &v).as_slice(), "n = {n}");
            assert_eq!(w.mass(), RepFn::new(u).mass() * RepFn::new(v).mass());
        }
    }
}
