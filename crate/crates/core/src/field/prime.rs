use std::fmt;
use std::sync::{Arc, OnceLock};

use crate::error::{Error, Result};

/// Default upper bound on the modulus. Every set is a dense bitmap of
/// length `p`, so this keeps a single set around 2 MiB.
pub const DEFAULT_MAX_P: u64 = 1 << 24;

/// Hard ceiling: element indices must fit in `u32`.
pub const HARD_MAX_P: u64 = u32::MAX as u64;

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

#[inline]
pub fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic Miller-Rabin; the first twelve prime bases are a proven
/// witness set for every `n < 2^64`.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &MR_BASES {
        if n.is_multiple_of(q) {
            return n == q;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'witness: for &a in &MR_BASES {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Distinct prime factors by trial division. Only used on `p - 1` for
/// moduli below the set cap, where this is instantaneous.
pub fn distinct_prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q * q <= n {
        if n.is_multiple_of(q) {
            out.push(q);
            while n.is_multiple_of(q) {
                n /= q;
            }
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Discrete logarithm tables for the multiplicative group, with respect to
/// the modulus' primitive root.
pub struct LogTable {
    /// `exp[k] = g^k`, for `k` in `0..p-1`.
    pub exp: Vec<u32>,
    /// `log[x]` for `x != 0`; `log[0]` is unused and set to `u32::MAX`.
    pub log: Vec<u32>,
}

struct Inner {
    p: u64,
    generator: OnceLock<u64>,
    logs: OnceLock<LogTable>,
}

/// A validated prime modulus. Cheap to clone; the primitive root and the
/// discrete-log tables are computed on first use and shared by all clones.
#[derive(Clone)]
pub struct Prime(Arc<Inner>);

impl Prime {
    pub fn new(p: u64) -> Result<Self> {
        Self::with_cap(p, DEFAULT_MAX_P)
    }

    pub fn with_cap(p: u64, cap: u64) -> Result<Self> {
        let cap = cap.min(HARD_MAX_P);
        if p > cap {
            return Err(Error::ModulusTooLarge { p, cap });
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        Ok(Prime(Arc::new(Inner {
            p,
            generator: OnceLock::new(),
            logs: OnceLock::new(),
        })))
    }

    #[inline]
    pub fn get(&self) -> u64 {
        self.0.p
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.0.p as usize
    }

    /// Smallest primitive root modulo `p`.
    pub fn generator(&self) -> u64 {
        *self.0.generator.get_or_init(|| {
            let p = self.0.p;
            if p == 2 {
                return 1;
            }
            let factors = distinct_prime_factors(p - 1);
            (2..p)
                .find(|&g| factors.iter().all(|&q| pow_mod(g, (p - 1) / q, p) != 1))
                .expect("every prime field has a primitive root")
        })
    }

    pub fn log_table(&self) -> &LogTable {
        self.0.logs.get_or_init(|| {
            let p = self.0.p;
            let g = self.generator();
            let order = (p - 1) as usize;
            let mut exp = Vec::with_capacity(order);
            let mut log = vec![u32::MAX; p as usize];
            let mut x = 1u64;
            for k in 0..order {
                exp.push(x as u32);
                log[x as usize] = k as u32;
                x = mul_mod(x, g, p);
            }
            LogTable { exp, log }
        })
    }

    #[inline]
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.0.p {
            s - self.0.p
        } else {
            s
        }
    }

    #[inline]
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.0.p - b
        }
    }

    #[inline]
    pub fn neg(&self, a: u64) -> u64 {
        if a == 0 {
            0
        } else {
            self.0.p - a
        }
    }

    #[inline]
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.0.p)
    }

    pub fn pow(&self, a: u64, e: u64) -> u64 {
        pow_mod(a, e, self.0.p)
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: u64) -> Option<u64> {
        let a = a % self.0.p;
        (a != 0).then(|| pow_mod(a, self.0.p - 2, self.0.p))
    }

    pub fn check_element(&self, value: u64) -> Result<u64> {
        if value < self.0.p {
            Ok(value)
        } else {
            Err(Error::OutOfRange { value, p: self.0.p })
        }
    }

    pub(crate) fn ensure_same(&self, other: &Prime) -> Result<()> {
        if self.0.p == other.0.p {
            Ok(())
        } else {
            Err(Error::ModulusMismatch(self.0.p, other.0.p))
        }
    }
}

impl PartialEq for Prime {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p
    }
}

impl Eq for Prime {}

impl fmt::Debug for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Prime({})", self.0.p)
    }
}

impl fmt::Display for Prime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn trial_division(n: u64) -> bool {
        n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| !n.is_multiple_of(d))
    }

    #[test]
    fn miller_rabin_matches_trial_division() {
        for n in 0..20_000 {
            assert_eq!(is_prime(n), trial_division(n), "n = {n}");
        }
    }

    #[test]
    fn large_known_values() {
        assert!(is_prime(2_305_843_009_213_693_951)); // 2^61 - 1
        assert!(is_prime(18_446_744_073_709_551_557)); // largest prime below 2^64
        assert!(!is_prime(3_215_031_751)); // strong pseudoprime to 2, 3, 5, 7
        assert!(!is_prime(341_550_071_728_321));
    }

    #[test]
    fn generator_has_full_order() {
        for p in [2u64, 3, 5, 7, 13, 101, 257, 1009, 65537] {
            let prime = Prime::new(p).unwrap();
            let g = prime.generator();
            let mut seen = std::collections::HashSet::new();
            let mut x = 1;
            for _ in 0..p - 1 {
                seen.insert(x);
                x = prime.mul(x, g);
            }
            assert_eq!(seen.len() as u64, p - 1, "p = {p}");
        }
    }

    #[test]
    fn log_table_inverts_exp() {
        let prime = Prime::new(1009).unwrap();
        let t = prime.log_table();
        for x in 1..1009u32 {
            assert_eq!(t.exp[t.log[x as usize] as usize], x);
        }
    }

    #[test]
    fn rejects_composites_and_oversize() {
        assert_eq!(Prime::new(15).unwrap_err(), Error::NotPrime(15));
        assert!(matches!(
            Prime::new(16_777_259),
            Err(Error::ModulusTooLarge { .. })
        ));
        assert!(Prime::with_cap(16_777_259, 1 << 25).is_ok());
    }

    #[test]
    fn inverse() {
        let p = Prime::new(101).unwrap();
        assert_eq!(p.inv(0), None);
        for a in 1..101 {
            assert_eq!(p.mul(a, p.inv(a).unwrap()), 1);
        }
    }
}
