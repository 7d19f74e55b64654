//! Exact cyclic convolution of nonnegative integer vectors.
//!
//! Short inputs use schoolbook multiplication with `u128` accumulators.
//! Longer inputs go through number-theoretic transforms modulo up to three
//! NTT-friendly primes; the number of primes is chosen so that their product
//! strictly exceeds the a-priori coefficient bound `n * max(u) * max(v)`, and
//! the residues are recombined with Garner's algorithm. The output is therefore
//! exact whenever it fits in `u64`, and an [`Error::Overflow`] is raised up
//! front otherwise.

use crate::error::{Error, Result};
use crate::field::prime::{distinct_prime_factors, pow_mod};

/// Inputs shorter than this use the quadratic method.
pub const SCHOOLBOOK_MAX_LEN: usize = 512;

/// NTT primes, each of the form `c * 2^k + 1` with `k >= 26`.
const NTT_PRIMES: [u64; 3] = [2_013_265_921, 1_811_939_329, 469_762_049];

fn primitive_root(m: u64) -> u64 {
    let factors = distinct_prime_factors(m - 1);
    (2..m)
        .find(|&g| factors.iter().all(|&q| pow_mod(g, (m - 1) / q, m) != 1))
        .expect("prime modulus has a primitive root")
}

fn ntt(a: &mut [u32], m: u64, invert: bool) {
    let n = a.len();
    debug_assert!(n.is_power_of_two());
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            a.swap(i, j);
        }
    }
    let g = primitive_root(m);
    let mut len = 2;
    while len <= n {
        let mut w_len = pow_mod(g, (m - 1) / len as u64, m);
        if invert {
            w_len = pow_mod(w_len, m - 2, m);
        }
        let half = len / 2;
        let mut twiddles = Vec::with_capacity(half);
        let mut w = 1u64;
        for _ in 0..half {
            twiddles.push(w);
            w = w * w_len % m;
        }
        for chunk in a.chunks_exact_mut(len) {
            let (lo, hi) = chunk.split_at_mut(half);
            for ((x, y), &w) in lo.iter_mut().zip(hi.iter_mut()).zip(&twiddles) {
                let u = *x as u64;
                let v = *y as u64 * w % m;
                *x = ((u + v) % m) as u32;
                *y = ((u + m - v) % m) as u32;
            }
        }
        len <<= 1;
    }
    if invert {
        let n_inv = pow_mod(n as u64, m - 2, m);
        for x in a.iter_mut() {
            *x = (*x as u64 * n_inv % m) as u32;
        }
    }
}

/// Cyclic convolution modulo one NTT prime, folded to length `n`.
fn cyclic_mod(u: &[u64], v: &[u64], m: u64) -> Vec<u32> {
    let n = u.len();
    let size = (2 * n - 1).next_power_of_two();
    let mut a = vec![0u32; size];
    let mut b = vec![0u32; size];
    for (dst, &x) in a.iter_mut().zip(u) {
        *dst = (x % m) as u32;
    }
    for (dst, &x) in b.iter_mut().zip(v) {
        *dst = (x % m) as u32;
    }
    ntt(&mut a, m, false);
    ntt(&mut b, m, false);
    for (x, &y) in a.iter_mut().zip(&b) {
        *x = (*x as u64 * y as u64 % m) as u32;
    }
    drop(b);
    ntt(&mut a, m, true);
    let mut out = a[..n].to_vec();
    for (i, &x) in a[n..2 * n - 1].iter().enumerate() {
        out[i] = ((out[i] as u64 + x as u64) % m) as u32;
    }
    out
}

fn schoolbook(u: &[u64], v: &[u64]) -> Vec<u64> {
    let n = u.len();
    let mut acc = vec![0u128; n];
    for (t, &x) in u.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in v.iter().enumerate() {
            let s = if t + j >= n { t + j - n } else { t + j };
            acc[s] += x as u128 * y as u128;
        }
    }
    acc.into_iter().map(|x| x as u64).collect()
}

/// `w[s] = sum_t u[t] * v[(s - t) mod n]`, exactly.
pub fn cyclic_convolve(u: &[u64], v: &[u64]) -> Result<Vec<u64>> {
    if u.len() != v.len() {
        return Err(Error::LengthMismatch(u.len(), v.len()));
    }
    let n = u.len();
    if n == 0 {
        return Ok(Vec::new());
    }
    let max_u = u.iter().copied().max().unwrap_or(0) as u128;
    let max_v = v.iter().copied().max().unwrap_or(0) as u128;
    // Each output coefficient sums at most `min(n, nnz)` products.
    let terms = u.iter().filter(|&&x| x != 0).count() as u128;
    let bound = terms
        .checked_mul(max_u)
        .and_then(|x| x.checked_mul(max_v))
        .unwrap_or(u128::MAX);
    if bound > u64::MAX as u128 {
        return Err(Error::Overflow(bound));
    }
    if bound == 0 {
        return Ok(vec![0; n]);
    }
    if n < SCHOOLBOOK_MAX_LEN {
        return Ok(schoolbook(u, v));
    }

    let mut product = 1u128;
    let mut primes = Vec::new();
    for &m in &NTT_PRIMES {
        primes.push(m);
        product *= m as u128;
        if product > bound {
            break;
        }
    }
    debug_assert!(product > bound);

    let residues: Vec<Vec<u32>> = primes.iter().map(|&m| cyclic_mod(u, v, m)).collect();
    Ok(match primes.len() {
        1 => residues[0].iter().map(|&x| x as u64).collect(),
        2 => {
            let (m1, m2) = (primes[0], primes[1]);
            let m1_inv = pow_mod(m1 % m2, m2 - 2, m2);
            (0..n)
                .map(|i| {
                    let r1 = residues[0][i] as u64;
                    let r2 = residues[1][i] as u64;
                    let t1 = (r2 + m2 - r1 % m2) % m2 * m1_inv % m2;
                    r1 + m1 * t1
                })
                .collect()
        }
        _ => {
            let (m1, m2, m3) = (primes[0], primes[1], primes[2]);
            let m1_inv_m2 = pow_mod(m1 % m2, m2 - 2, m2);
            let m12_inv_m3 = pow_mod((m1 as u128 * m2 as u128 % m3 as u128) as u64, m3 - 2, m3);
            (0..n)
                .map(|i| {
                    let r1 = residues[0][i] as u64;
                    let r2 = residues[1][i] as u64;
                    let r3 = residues[2][i] as u64;
                    let t1 = (r2 + m2 - r1 % m2) % m2 * m1_inv_m2 % m2;
                    // x12 = r1 + m1 * t1 < m1 * m2
                    let x12_mod_m3 = (r1 % m3 + (m1 % m3) * t1 % m3) % m3;
                    let t2 = (r3 + m3 - x12_mod_m3) % m3 * m12_inv_m3 % m3;
                    let x = r1 as u128 + m1 as u128 * t1 as u128 + (m1 as u128 * m2 as u128) * t2 as u128;
                    x as u64
                })
                .collect()
        }
    })
}
